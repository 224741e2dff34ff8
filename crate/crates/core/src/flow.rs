//! Renormalization flow of the XXZ couplings.
//!
//! A three-site block with couplings `(J, Δ)` renormalizes to a single
//! effective site with couplings
//!
//! ```text
//! J' = J (2q / (2+q²))²,    Δ' = Δ q²/4,    q = -(Δ + √(Δ²+8))/2
//! ```
//!
//! where `q` parametrizes the degenerate block ground states. This module
//! implements the map, its trajectories with the halt policy, the analytic
//! derivative dΔ'/dΔ used by the scaling chain rule, and the fixed-point
//! classification of the Δ-flow.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Anisotropy above which a trajectory is declared converged to the Ising
/// fixed point. Beyond this the flow only confirms what is already known
/// (Δ → ∞) while `Δ'` ~ Δ³/4 races toward overflow.
pub const ISING_HALT: f64 = 1e12;

/// Absolute Δ-difference below which a trajectory at a *stable* point is
/// declared converged.
pub const CONVERGENCE_HALT: f64 = 1e-15;

/// Number of sites merged into one effective site per RG step.
pub const BLOCK_SIZE: usize = 3;

/// Exchange coupling `J > 0` and anisotropy `Δ ≥ 0` of an XXZ chain.
///
/// `Δ = 0` is the XY point, `Δ = 1` the isotropic antiferromagnet. Both
/// fields are validated on construction; `Δ = +∞` is admitted so that the
/// Ising limit of the flow remains representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingState<F> {
    j: F,
    delta: F,
}

impl<F: Scalar> CouplingState<F> {
    pub fn new(j: F, delta: F) -> Result<Self> {
        if !j.is_finite() || j <= F::zero() {
            return Err(Error::NonPositiveCoupling(j.to_f64().unwrap_or(f64::NAN)));
        }
        if delta.is_nan() || delta < F::zero() {
            return Err(Error::NegativeAnisotropy(
                delta.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(Self { j, delta })
    }

    /// Internal constructor for flow images, which may degenerate (J → 0,
    /// Δ → ∞) past the halt threshold; public construction stays validated.
    pub(crate) fn raw(j: F, delta: F) -> Self {
        Self { j, delta }
    }

    pub fn j(&self) -> F {
        self.j
    }

    pub fn delta(&self) -> F {
        self.delta
    }
}

/// Ground-state parameter `q(Δ) = -(Δ + √(Δ²+8))/2` of the three-site block.
///
/// Always the negative root: `q ≤ -√2`, decreasing in Δ.
pub fn q_of_delta<F: Scalar>(delta: F) -> Result<F> {
    if delta.is_nan() || delta < F::zero() {
        return Err(Error::NegativeAnisotropy(
            delta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(q_unchecked(delta))
}

pub(crate) fn q_unchecked<F: Scalar>(delta: F) -> F {
    -(delta + (delta * delta + F::of(8.0)).sqrt()) / F::of(2.0)
}

/// One application of the Δ-map: `Δ' = Δ q(Δ)²/4`.
///
/// Pure and unguarded; for Δ ≥ 0 it is total in IEEE arithmetic (large Δ
/// saturates at +∞, which is a fixed point of the map).
pub fn delta_step<F: Scalar>(delta: F) -> F {
    let q = q_unchecked(delta);
    delta * (q * q) / F::of(4.0)
}

/// The n-fold image of Δ under [`delta_step`], without halt guards.
pub fn flow_to_step<F: Scalar>(delta: F, n: usize) -> F {
    let mut d = delta;
    for _ in 0..n {
        d = delta_step(d);
    }
    d
}

/// One RG step on both couplings: `(J, Δ) → (J', Δ')`.
///
/// Unguarded like [`delta_step`]; trajectories apply the halt policy. Far
/// past [`ISING_HALT`] the image can degenerate (`J' → 0`), which the
/// trajectory guard makes unreachable in practice.
pub fn rg_step<F: Scalar>(c: CouplingState<F>) -> CouplingState<F> {
    let q = q_unchecked(c.delta);
    let ratio = F::of(2.0) * q / (F::of(2.0) + q * q);
    CouplingState::raw(c.j * ratio * ratio, c.delta * (q * q) / F::of(4.0))
}

/// Why a trajectory stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltReason {
    /// Reached the requested number of steps.
    MaxSteps,
    /// Δ exceeded [`ISING_HALT`]; converged to the Ising fixed point.
    IsingFixedPoint,
    /// Successive Δ values differ by less than [`CONVERGENCE_HALT`] at a
    /// point where the map is contracting.
    Converged,
}

/// A recorded flow: `steps[0]` is the bare coupling and `steps[k+1] =
/// rg_step(steps[k])`, truncated by the halt policy.
#[derive(Clone, Debug)]
pub struct RgTrajectory<F> {
    pub steps: Vec<CouplingState<F>>,
    pub halt: HaltReason,
}

impl<F: Scalar> RgTrajectory<F> {
    /// Sites merged per step (always three).
    pub fn block_size(&self) -> usize {
        BLOCK_SIZE
    }

    /// Effective chain length described by step `n`: 3^(n+1) sites.
    pub fn effective_size(&self, n: usize) -> u128 {
        effective_sites(n)
    }
}

/// Number of bare sites represented by one step-`n` block: 3^(n+1).
///
/// Panics if the result exceeds `u128` (n > 79), far beyond any use here.
pub fn effective_sites(n: usize) -> u128 {
    3u128
        .checked_pow(n as u32 + 1)
        .expect("effective size exceeds u128")
}

/// Iterates [`rg_step`] from `c0`, recording every state including the bare
/// one, until `max_steps` steps, the Ising guard, or convergence at a stable
/// point. The state that crosses the Ising threshold is kept.
pub fn rg_trajectory<F: Scalar>(c0: CouplingState<F>, max_steps: usize) -> RgTrajectory<F> {
    let ising = F::of(ISING_HALT);
    let tiny = F::of(CONVERGENCE_HALT);
    let mut steps = Vec::with_capacity(max_steps + 1);
    steps.push(c0);
    let mut cur = c0;
    let mut halt = HaltReason::MaxSteps;
    for _ in 0..max_steps {
        if cur.delta > ising {
            halt = HaltReason::IsingFixedPoint;
            break;
        }
        let next = rg_step(cur);
        steps.push(next);
        if next.delta > ising {
            halt = HaltReason::IsingFixedPoint;
            break;
        }
        let contracting = d_prime_unchecked(next.delta).abs() < F::one();
        if (next.delta - cur.delta).abs() < tiny && contracting {
            halt = HaltReason::Converged;
            break;
        }
        cur = next;
    }
    RgTrajectory { steps, halt }
}

/// Analytic derivative of the Δ-map:
/// `dΔ'/dΔ = q²/4 + Δ q q̇ / 2` with `q̇ = -(1 + Δ/√(Δ²+8))/2`.
pub fn d_delta_prime<F: Scalar>(delta: F) -> Result<F> {
    if delta.is_nan() || delta < F::zero() {
        return Err(Error::NegativeAnisotropy(
            delta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(d_prime_unchecked(delta))
}

pub(crate) fn d_prime_unchecked<F: Scalar>(delta: F) -> F {
    let root = (delta * delta + F::of(8.0)).sqrt();
    let q = -(delta + root) / F::of(2.0);
    let q_dot = -(F::one() + delta / root) / F::of(2.0);
    q * q / F::of(4.0) + delta * q * q_dot / F::of(2.0)
}

/// Correlation-length exponent of the critical point: ν = ln 3 / ln(dΔ'/dΔ|₁).
pub fn critical_nu<F: Scalar>() -> F {
    F::of(BLOCK_SIZE as f64).ln() / d_prime_unchecked(F::one()).ln()
}

/// 1/ν, the exponent governing the divergence of entanglement derivatives
/// with system size.
pub fn critical_nu_inverse<F: Scalar>() -> F {
    critical_nu::<F>().recip()
}

/// Where a fixed point of the Δ-map sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    /// Δ* = 0, the XY (spin-fluid) point.
    Xy,
    /// Δ* = 1, the critical isotropic point.
    Critical,
    /// Δ* = ∞, the Ising (Néel) point.
    Ising,
}

/// Stability data for one fixed point of the Δ-map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointReport<F> {
    pub fixed_point: FixedPoint,
    /// Fixed-point location; `+∞` for the Ising point.
    pub delta: F,
    pub stable: bool,
    /// Map derivative at the fixed point, evaluated in a chart where the
    /// point is finite: the Δ coordinate for Δ* ∈ {0, 1} and the u = 1/Δ
    /// coordinate for Δ* = ∞ (there Δ' ~ Δ³/4, so u' ~ 4u³ and du'/du = 0).
    /// Stability is `|derivative| < 1` in every case.
    pub derivative: F,
    /// Correlation-length exponent; only the unstable point has one.
    pub nu: Option<F>,
}

/// The three fixed points of the Δ-map with stability and exponents.
pub fn classify_fixed_points<F: Scalar>() -> Vec<FixedPointReport<F>> {
    let d_xy = d_prime_unchecked(F::zero());
    let d_crit = d_prime_unchecked(F::one());
    vec![
        FixedPointReport {
            fixed_point: FixedPoint::Xy,
            delta: F::zero(),
            stable: true,
            derivative: d_xy,
            nu: None,
        },
        FixedPointReport {
            fixed_point: FixedPoint::Critical,
            delta: F::one(),
            stable: false,
            derivative: d_crit,
            nu: Some(critical_nu()),
        },
        FixedPointReport {
            fixed_point: FixedPoint::Ising,
            delta: F::infinity(),
            stable: true,
            derivative: F::zero(),
            nu: None,
        },
    ]
}

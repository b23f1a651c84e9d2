//! Triangle geometry behind the stability criterion.
//!
//! A system is reducible at exponent `k` when the particle triangle admits
//! side ratios with
//!
//! ```text
//! Z12 / r12^k + Z23 / r23^k + Z13 / r13^k = 0.
//! ```
//!
//! With `r12 = 1`, `r23 = 1/℘` and `r13 = c_k/℘`, the multiplier `℘` is free
//! and `c_k = ℘ (-Z13 / (Z12 + Z23 ℘^k))^(1/k)` follows. The angles
//! `ω` (opposite `r23`), `σ` (opposite `r12`) and `τ = ω + σ` then satisfy
//! `sin σ = ℘ sin ω` and `sin τ = c_k sin ω`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::system::{Arrangement, PairCouplings, ThreeBodySystem};
use crate::Real;

/// Multipliers this close (relatively) to `(-Z1/Z3)^(1/k)` are rejected.
///
/// This and the tolerances below are for `f64`; coarser types use a few
/// machine epsilons instead.
pub const EXCLUDED_MULTIPLIER_BAND: f64 = 1e-9;
/// `sin ω` at or below this is a collapsed triangle.
const DEGENERATE_SINE: f64 = 1e-12;
/// Rounding allowance for `sin ω` slightly above one.
const SINE_SLACK: f64 = 1e-12;
/// Tolerance of the law-of-sines check on returned solutions, relative to
/// the longest side.
pub const SOLUTION_TOLERANCE: f64 = 1e-10;

/// The exponent `k` in `Σ Z_ij / r_ij^k`: an integer `k ≥ 2` or the limit
/// `k → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn finite(k: u32) -> Option<Self> {
        (k >= 2).then_some(Exponent::Finite(k))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn as_finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(k) => Some(k),
            Exponent::Infinite => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(k) => write!(f, "{k}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => other
                .parse::<u32>()
                .ok()
                .and_then(Exponent::finite)
                .ok_or_else(|| format!("exponent must be an integer >= 2 or 'inf', got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("multiplier must be positive and finite")]
    NonpositiveMultiplier,
    #[error("multiplier coincides with (-Z1/Z3)^(1/k); c_k denominator vanishes")]
    ExcludedMultiplier,
    #[error("-Z13 / (Z12 + Z23 wp^k) is not positive; no real c_k")]
    NonpositiveBase,
}

/// Which charge-sign pattern makes the configuration possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignCase {
    /// `Z1, Z2` alike, `Z3` opposite; needs `℘^k < -Z1/Z3`.
    FirstPairAlike,
    /// `Z2, Z3` alike, `Z1` opposite; needs `℘^k > -Z1/Z3`.
    LastPairAlike,
    /// `Z1, Z3` alike, `Z2` opposite; any `℘ > 0`.
    OuterPairAlike,
}

impl SignCase {
    pub fn from_charges([z1, z2, z3]: [i32; 3]) -> Option<Self> {
        let (s1, s2, s3) = (z1.signum(), z2.signum(), z3.signum());
        if s1 == s2 && s2 == s3 {
            None
        } else if s1 == s2 {
            Some(SignCase::FirstPairAlike)
        } else if s2 == s3 {
            Some(SignCase::LastPairAlike)
        } else {
            Some(SignCase::OuterPairAlike)
        }
    }

    /// 1, 2 or 3, in the order the cases are usually listed.
    pub fn number(self) -> u8 {
        match self {
            SignCase::FirstPairAlike => 1,
            SignCase::LastPairAlike => 2,
            SignCase::OuterPairAlike => 3,
        }
    }
}

/// Why a `(℘, k)` pair admits no triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    /// All charges share a sign.
    NoOppositeCharge,
    NonpositiveMultiplier,
    /// The `℘^k` versus `-Z1/Z3` ordering of the sign case fails.
    OrderingViolated(SignCase),
    ExcludedMultiplier,
    SignCondition,
    /// `(1, ℘, c_k)` violates the triangle inequality.
    Triangle,
    /// Collinear configuration, `ω ∈ {0, π}`.
    Degenerate,
    /// Both `ω` and `σ` obtuse.
    ObtuseAngles,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NoOppositeCharge => f.write_str("no charge of opposite sign"),
            Rejection::NonpositiveMultiplier => f.write_str("multiplier not positive"),
            Rejection::OrderingViolated(case) => {
                write!(f, "wp^k ordering of sign case ({}) violated", case.number())
            }
            Rejection::ExcludedMultiplier => f.write_str("excluded multiplier (-Z1/Z3)^(1/k)"),
            Rejection::SignCondition => f.write_str("sign condition Z2/Z3 + (Z2/Z1) wp^k < 0 fails"),
            Rejection::Triangle => f.write_str("(1, wp, c_k) is not a triangle"),
            Rejection::Degenerate => f.write_str("degenerate triangle"),
            Rejection::ObtuseAngles => f.write_str("omega and sigma both obtuse"),
        }
    }
}

impl From<GeometryError> for Rejection {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::NonpositiveMultiplier => Rejection::NonpositiveMultiplier,
            GeometryError::ExcludedMultiplier => Rejection::ExcludedMultiplier,
            GeometryError::NonpositiveBase => Rejection::SignCondition,
        }
    }
}

/// Quadrant of `(ω, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleCase {
    /// Both acute; `0 ≤ ℘ ≤ 1/sin ω`.
    BothAcute,
    /// `σ` obtuse; `1 < ℘ ≤ 1/sin ω`.
    SigmaObtuse,
    /// `ω` obtuse; `0 ≤ ℘ < 1`.
    OmegaObtuse,
    /// Both obtuse; impossible.
    BothObtuse,
}

impl AngleCase {
    pub fn classify<T: Real>(omega: T, sigma: T) -> Self {
        let right = T::FRAC_PI_2();
        match (omega > right, sigma > right) {
            (false, false) => AngleCase::BothAcute,
            (false, true) => AngleCase::SigmaObtuse,
            (true, false) => AngleCase::OmegaObtuse,
            (true, true) => AngleCase::BothObtuse,
        }
    }
}

/// A feasible triangle for one `(℘, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometrySolution<T> {
    pub k: Exponent,
    /// `r12 / r23`.
    pub wp: T,
    /// `℘ · r13 / r12`, so that `sin τ = c_k sin ω`.
    pub ck: T,
    pub omega: T,
    pub sigma: T,
    pub tau: T,
}

impl<T: Real> GeometrySolution<T> {
    /// `(r12/r23, r12/r13)`.
    pub fn side_ratios(&self) -> (T, T) {
        (self.wp, self.wp / self.ck)
    }

    pub fn angle_case(&self) -> AngleCase {
        AngleCase::classify(self.omega, self.sigma)
    }

    /// Largest violation of `τ = ω + σ`, `sin σ = ℘ sin ω`, `sin τ = c_k sin ω`.
    pub fn closure_error(&self) -> T {
        let so = self.omega.sin();
        let e1 = (self.tau - self.omega - self.sigma).abs();
        let e2 = (self.sigma.sin() - self.wp * so).abs();
        let e3 = (self.tau.sin() - self.ck * so).abs();
        e1.max(e2).max(e3)
    }
}

/// Outcome of the feasibility test for one `(℘, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport<T> {
    pub case: Option<SignCase>,
    pub outcome: Result<GeometrySolution<T>, Rejection>,
}

impl<T: Real> FeasibilityReport<T> {
    pub fn feasible(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn solution(&self) -> Option<&GeometrySolution<T>> {
        self.outcome.as_ref().ok()
    }
}

/// Compares `℘^k` with `r > 0`; for `k = ∞` uses the limit, taken from
/// below at `℘ = 1`.
fn compare_power<T: Real>(wp: T, k: Exponent, r: T) -> Ordering {
    let lhs = match k {
        Exponent::Finite(k) => wp.powi(k as i32),
        Exponent::Infinite if wp <= T::one() => T::zero(),
        Exponent::Infinite => T::infinity(),
    };
    lhs.partial_cmp(&r).unwrap_or(Ordering::Equal)
}

fn ratio<T: Real>(num: i64, den: i64) -> T {
    T::from_int(num) / T::from_int(den)
}

/// The companion ratio `c_k = ℘ (-Z13 / (Z12 + Z23 ℘^k))^(1/k)`.
///
/// For `k = ∞` the limit is `℘` below one and `1` at or above one.
pub fn c_k<T: Real>(couplings: PairCouplings, wp: T, k: Exponent) -> Result<T, GeometryError> {
    if !(wp > T::zero()) || !wp.is_finite() {
        return Err(GeometryError::NonpositiveMultiplier);
    }
    let PairCouplings { z12, z23, z13 } = couplings;
    let (fz12, fz23, fz13) = (T::from_int(z12), T::from_int(z23), T::from_int(z13));
    match k {
        Exponent::Finite(k) => {
            // Z12/Z23 = Z1/Z3
            if z12.signum() != z23.signum() {
                let excluded = ratio::<T>(-z12, z23).powf(T::from_u32_exact(k).recip());
                if ((wp - excluded) / excluded).abs() <= T::tolerance(EXCLUDED_MULTIPLIER_BAND, 16.0) {
                    return Err(GeometryError::ExcludedMultiplier);
                }
            }
            let kf = T::from_u32_exact(k);
            if wp > T::one() {
                // ℘ (−Z13/(Z12 + Z23 ℘^k))^(1/k) = (−Z13/(Z12 ℘^-k + Z23))^(1/k)
                let den = fz12 * wp.powi(-(k as i32)) + fz23;
                if den == T::zero() {
                    return Err(GeometryError::ExcludedMultiplier);
                }
                let base = -fz13 / den;
                if !(base > T::zero()) {
                    return Err(GeometryError::NonpositiveBase);
                }
                Ok(base.powf(kf.recip()))
            } else {
                let den = fz12 + fz23 * wp.powi(k as i32);
                if den == T::zero() {
                    return Err(GeometryError::ExcludedMultiplier);
                }
                let base = -fz13 / den;
                if !(base > T::zero()) {
                    return Err(GeometryError::NonpositiveBase);
                }
                Ok(wp * base.powf(kf.recip()))
            }
        }
        Exponent::Infinite => {
            // ℘ = 1 belongs to the ℘ < 1 side of the limit
            let limit_base = if wp <= T::one() { -fz13 / fz12 } else { -fz13 / fz23 };
            if !(limit_base > T::zero()) {
                return Err(GeometryError::NonpositiveBase);
            }
            Ok(if wp < T::one() { wp } else { T::one() })
        }
    }
}

/// `Z2/Z3 + (Z2/Z1) ℘^k < 0`.
pub fn sign_condition<T: Real>(charges: [i32; 3], wp: T, k: Exponent) -> bool {
    let [z1, z2, z3] = charges.map(i64::from);
    let a: T = ratio(z2, z3);
    let b: T = ratio(z2, z1);
    match k {
        Exponent::Finite(k) => a + b * wp.powi(k as i32) < T::zero(),
        Exponent::Infinite if wp <= T::one() => a < T::zero(),
        Exponent::Infinite => b < T::zero(),
    }
}

/// Principal angle `ω ∈ (0, π/2]` from
/// `sin ω = √((1+c+℘)(1+c-℘)(1-c+℘)(c+℘-1)) / (2℘c)`.
pub fn omega_from<T: Real>(wp: T, ck: T) -> Result<T, Rejection> {
    if !(wp > T::zero()) || !(ck > T::zero()) {
        return Err(Rejection::NonpositiveMultiplier);
    }
    let one = T::one();
    let product = (one + ck + wp) * (one + ck - wp) * (one - ck + wp) * (ck + wp - one);
    if product < T::zero() {
        return Err(Rejection::Triangle);
    }
    let sine = product.sqrt() / (T::lit(2.0) * wp * ck);
    if sine > one + T::tolerance(SINE_SLACK, 16.0) {
        return Err(Rejection::Triangle);
    }
    if sine <= T::tolerance(DEGENERATE_SINE, 16.0) {
        return Err(Rejection::Degenerate);
    }
    Ok(sine.min(one).asin())
}

/// Full angle triple for the triangle `(1, ℘, c_k)`.
///
/// `sin ω` comes from the Heron product above; the law of cosines supplies
/// the cosines, so `atan2` lands `ω` and `σ` on the right (possibly obtuse)
/// branch without the loss `asin` suffers near a right angle.
pub fn solve_angles<T: Real>(wp: T, ck: T, k: Exponent) -> Result<GeometrySolution<T>, Rejection> {
    let principal = omega_from(wp, ck)?;
    let one = T::one();
    let two = T::lit(2.0);
    let pi = T::PI();
    let sin_omega = principal.sin();
    let omega = sin_omega.atan2((wp * wp + ck * ck - one) / (two * wp * ck));
    let sigma = (wp * sin_omega).atan2((one + ck * ck - wp * wp) / (two * ck));
    let solution = GeometrySolution { k, wp, ck, omega, sigma, tau: omega + sigma };
    if solution.angle_case() == AngleCase::BothObtuse {
        return Err(Rejection::ObtuseAngles);
    }
    let scale = one.max(wp).max(ck);
    if solution.tau >= pi || solution.closure_error() > T::tolerance(SOLUTION_TOLERANCE, 64.0) * scale {
        return Err(Rejection::Degenerate);
    }
    Ok(solution)
}

/// Decides whether the angle set `D_k(℘)` is nonempty.
pub fn dk_nonempty<T: Real>(charges: [i32; 3], wp: T, k: Exponent) -> FeasibilityReport<T> {
    let case = SignCase::from_charges(charges);
    FeasibilityReport { case, outcome: feasibility(charges, case, wp, k) }
}

fn feasibility<T: Real>(
    charges: [i32; 3],
    case: Option<SignCase>,
    wp: T,
    k: Exponent,
) -> Result<GeometrySolution<T>, Rejection> {
    let case = case.ok_or(Rejection::NoOppositeCharge)?;
    if !(wp > T::zero()) || !wp.is_finite() {
        return Err(Rejection::NonpositiveMultiplier);
    }
    let [z1, _, z3] = charges.map(i64::from);
    let threshold: T = ratio(-z1, z3);
    let ordering_ok = match case {
        SignCase::FirstPairAlike => compare_power(wp, k, threshold) == Ordering::Less,
        SignCase::LastPairAlike => compare_power(wp, k, threshold) == Ordering::Greater,
        SignCase::OuterPairAlike => true,
    };
    if !ordering_ok {
        return Err(Rejection::OrderingViolated(case));
    }
    if !sign_condition(charges, wp, k) {
        return Err(Rejection::SignCondition);
    }
    let couplings = PairCouplings::from_charges(charges);
    let ck = c_k(couplings, wp, k)?;
    solve_angles(wp, ck, k)
}

/// Exponents in `2..=k_max` (and `∞` when asked) with a feasible triangle,
/// ascending.
pub fn feasible_k_set<T: Real>(
    charges: [i32; 3],
    wp: T,
    k_max: u32,
    include_inf: bool,
) -> Vec<Exponent> {
    let mut out: Vec<Exponent> = (2..=k_max)
        .map(Exponent::Finite)
        .filter(|&k| dk_nonempty(charges, wp, k).feasible())
        .collect();
    if include_inf && dk_nonempty(charges, wp, Exponent::Infinite).feasible() {
        out.push(Exponent::Infinite);
    }
    out
}

/// `Z12/r12^k + Z23/r23^k + Z13/r13^k` at `r12 = 1`, `r23 = 1/℘`,
/// `r13 = c_k/℘`. `None` for `k = ∞`.
pub fn residual<T: Real>(couplings: PairCouplings, solution: &GeometrySolution<T>) -> Option<T> {
    residual_terms(couplings, solution).map(|t| t[0] + t[1] + t[2])
}

/// Residual divided by the sum of the absolute values of its three terms.
pub fn relative_residual<T: Real>(
    couplings: PairCouplings,
    solution: &GeometrySolution<T>,
) -> Option<T> {
    residual_terms(couplings, solution)
        .map(|t| (t[0] + t[1] + t[2]) / (t[0].abs() + t[1].abs() + t[2].abs()))
}

fn residual_terms<T: Real>(couplings: PairCouplings, s: &GeometrySolution<T>) -> Option<[T; 3]> {
    let k = s.k.as_finite()? as i32;
    Some([
        T::from_int(couplings.z12),
        T::from_int(couplings.z23) * s.wp.powi(k),
        T::from_int(couplings.z13) * (s.wp / s.ck).powi(k),
    ])
}

/// A feasible configuration found for some particle ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityWitness<T> {
    pub arrangement: Arrangement,
    pub charges: [i32; 3],
    pub solution: GeometrySolution<T>,
}

/// Stability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Stability<T> {
    pub witness: Option<StabilityWitness<T>>,
}

impl<T> Stability<T> {
    pub fn is_stable(&self) -> bool {
        self.witness.is_some()
    }
}

/// Multipliers tried by [`stable`]: 1 first, then a geometric grid on
/// `[1/8, 8]`.
fn multiplier_probe<T: Real>() -> impl Iterator<Item = T> {
    std::iter::once(T::one()).chain((0..=96).map(|i| T::lit(2f64.powf(-3.0 + 6.0 * i as f64 / 96.0))))
}

/// Searches arrangements, multipliers and exponents for any feasible
/// triangle. Exponent `∞` is tried before `2..=16`.
pub fn stable<T: Real>(system: &ThreeBodySystem<T>) -> Stability<T> {
    let exponents = std::iter::once(Exponent::Infinite).chain((2..=16).map(Exponent::Finite));
    let exponents: Vec<Exponent> = exponents.collect();
    for (arrangement, arranged) in system.arrangements() {
        let charges = arranged.charges();
        if SignCase::from_charges(charges).is_none() {
            return Stability { witness: None };
        }
        for wp in multiplier_probe::<T>() {
            for &k in &exponents {
                if let Ok(solution) = dk_nonempty(charges, wp, k).outcome {
                    return Stability {
                        witness: Some(StabilityWitness { arrangement, charges, solution }),
                    };
                }
            }
        }
    }
    Stability { witness: None }
}

//! Transition (`κ = 1`) spectrum for the `r^-2` potential.
//!
//! With `A1 = Z12(℘;1,k)/α` the radial equation has the decaying solution
//! `√r K_ν(r√(-B1))`, `ν² = A1 + (l+1/2)²`. A hard core at `r0` quantizes
//!
//! ```text
//! B1 = -(2/r0)² (Γ(n+ν)/Γ(n-ν))^(1/ν),   n > ν,
//! ```
//!
//! and `B1 = 0` (no bound state) for `n ≤ ν`. Both branches must give the
//! same energy, `α B1(1) = β B1(2)`. Every `B1` carries the same `1/r0²`, so
//! the matching is solved for `r0² B1` and the radius only enters through
//! [`calibrate_r0`].

use thiserror::Error;

use crate::geometry::{self, Exponent, SignCase};
use crate::kappa0::{self, effective_couplings, Kappa0Error, SpectrumOptions};
use crate::specfun::{self, SpecFunError};
use crate::system::ThreeBodySystem;
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Kappa1Error {
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("no feasible multiplier window for k = {k}")]
    EmptyWindow { k: u32 },
    #[error("no κ=1 contribution: the matching condition has no admissible solution")]
    NoMatch,
    #[error("reference energy {reference} is not below the κ=0 ground energy {e0}")]
    ReferenceNotBelow { reference: f64, e0: f64 },
    #[error("κ = 0 energy is required")]
    MissingKappaZero,
    #[error("κ = {0} is not supported; only 0 and 1 are")]
    UnsupportedKappa(u32),
    #[error("κ = {0} listed twice")]
    DuplicateKappa(u32),
    #[error(transparent)]
    Kappa0(#[from] Kappa0Error),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

type Result<T, E = Kappa1Error> = std::result::Result<T, E>;

/// Positive root of `ν² = A1 + (l+1/2)²`.
pub fn nu<T: Real>(a1: T, l: u32) -> Result<T> {
    let half = T::from_u32_exact(l) + T::lit(0.5);
    let radicand = a1 + half * half;
    if !(radicand > T::zero()) {
        return Err(Kappa1Error::Domain(format!("nu: A1 + (l+1/2)^2 = {radicand} is not positive")));
    }
    Ok(radicand.sqrt())
}

/// `g(n, ν) = (Γ(n+ν)/Γ(n-ν))^(1/ν)` for `0 < ν < n`, zero otherwise.
pub fn scaled_b1_magnitude<T: Real>(n: u32, nu: T) -> Result<T> {
    if !(nu > T::zero()) {
        return Err(Kappa1Error::Domain(format!("b1: nu = {nu} must be positive")));
    }
    if nu >= T::from_u32_exact(n) {
        return Ok(T::zero());
    }
    Ok(specfun::gamma_ratio(n, nu)?.powf(nu.recip()))
}

/// `B1 = -(2/r0)² (Γ(n+ν)/Γ(n-ν))^(1/ν)`; zero when `n ≤ ν`.
pub fn b1<T: Real>(n: u32, nu: T, r0: T) -> Result<T> {
    if n == 0 {
        return Err(Kappa1Error::Domain("b1: n must be at least 1".into()));
    }
    if !(r0 > T::zero()) {
        return Err(Kappa1Error::Domain(format!("b1: r0 = {r0} must be positive")));
    }
    let g = scaled_b1_magnitude(n, nu)?;
    let two_over = T::lit(2.0) / r0;
    Ok(-two_over * two_over * g)
}

/// `K_ν(r0 √(-B1))` for `B1` from [`b1`].
///
/// The argument reduces to `2√g(n, ν)`, so the value does not depend on
/// `r0`. `K_ν` has no real zeros, so this never vanishes; it measures how
/// far the term-matched eigenvalue is from an exact hard-core condition.
pub fn boundary_residual<T: Real>(n: u32, nu: T) -> Result<T> {
    let g = scaled_b1_magnitude(n, nu)?;
    if g == T::zero() {
        return Err(Kappa1Error::Domain(format!("no bound state for n = {n}, nu = {nu}")));
    }
    Ok(specfun::bessel_k(nu, T::lit(2.0) * g.sqrt())?)
}

/// Quantum numbers on both branches of the `κ = 1` problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Kappa1Numbers {
    pub n1: u32,
    pub n2: u32,
    pub l1: u32,
    pub l2: u32,
}

impl Default for Kappa1Numbers {
    fn default() -> Self {
        Self { n1: 1, n2: 1, l1: 0, l2: 0 }
    }
}

/// Matching sides at one multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingPoint<T> {
    /// `α r0² B1(1)`.
    pub lhs: T,
    /// `β r0² B1(2)`.
    pub rhs: T,
    pub a1: T,
    pub a2: T,
    pub nu1: T,
    pub nu2: T,
    /// Both couplings satisfy `0 < A1 < n² - (l+1/2)²`.
    pub admissible: bool,
}

/// Relative size below which an effective coupling counts as zero. At
/// `k = 2` the `κ = 1` coupling cancels identically.
const ZERO_COUPLING: f64 = 1e-9;

/// Both matching sides at `℘`, or `None` when the triangle is infeasible.
pub fn matching_point<T: Real>(
    system: &ThreeBodySystem<T>,
    qn: Kappa1Numbers,
    k: u32,
    wp: T,
) -> Option<MatchingPoint<T>> {
    let solution = geometry::dk_nonempty(system.charges(), wp, Exponent::Finite(k)).outcome.ok()?;
    let coeffs = system.kinetic_coefficients();
    let couplings = system.pair_couplings();
    let eff = effective_couplings(couplings, &coeffs, wp, solution.ck, 1);
    let scale = T::from_int(couplings.z12.abs())
        + T::from_int(couplings.z23.abs()) * wp * wp
        + T::from_int(couplings.z13.abs()) * (wp / solution.ck).powi(2);
    let nonzero = eff.z12_eff > T::tolerance(ZERO_COUPLING, 64.0) * scale;
    let below = |a: T, n: u32, l: u32| {
        let (n, half) = (T::from_u32_exact(n), T::from_u32_exact(l) + T::lit(0.5));
        a < n * n - half * half
    };
    let nu1 = nu(eff.a_kappa_1, qn.l1).ok()?;
    let nu2 = nu(eff.a_kappa_2, qn.l2).ok()?;
    let four = T::lit(4.0);
    Some(MatchingPoint {
        lhs: -four * coeffs.alpha * scaled_b1_magnitude(qn.n1, nu1).ok()?,
        rhs: -four * coeffs.beta * scaled_b1_magnitude(qn.n2, nu2).ok()?,
        a1: eff.a_kappa_1,
        a2: eff.a_kappa_2,
        nu1,
        nu2,
        admissible: nonzero && below(eff.a_kappa_1, qn.n1, qn.l1) && below(eff.a_kappa_2, qn.n2, qn.l2),
    })
}

/// One sample of a matching scan. `lhs`, `rhs` are NaN where the triangle
/// is infeasible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample<T> {
    pub wp: T,
    pub lhs: T,
    pub rhs: T,
    pub feasible: bool,
}

/// `α r0² B1(1)` (branch 1) and `β r0² B1(2)` (branch 2) over a multiplier
/// grid, ordered by `℘`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanCurve<T> {
    pub k: u32,
    pub samples: Vec<ScanSample<T>>,
}

impl<T: Real> ScanCurve<T> {
    /// Sign changes of `lhs - rhs` within runs of feasible samples. Exact
    /// zeros are stepped over, so a crossing on a grid point counts once.
    pub fn sign_changes(&self) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for s in &self.samples {
            if !s.feasible {
                last = None;
                continue;
            }
            let d = s.lhs - s.rhs;
            if d == T::zero() {
                continue;
            }
            let positive = d > T::zero();
            if last.is_some_and(|p| p != positive) {
                count += 1;
            }
            last = Some(positive);
        }
        count
    }

    pub fn feasible_count(&self) -> usize {
        self.samples.iter().filter(|s| s.feasible).count()
    }
}

/// Open multiplier interval outside of which no triangle exists at `k`.
///
/// The lower end comes from the sign-case ordering `℘^k ≶ -Z1/Z3`; the upper
/// end is the first power of two past the triangle inequality
/// `℘ < 1 + c_k(℘)`. Interior points can still be infeasible.
pub fn feasibility_window<T: Real>(system: &ThreeBodySystem<T>, k: u32) -> Result<(T, T)> {
    let charges = system.charges();
    let case = SignCase::from_charges(charges).ok_or(Kappa1Error::EmptyWindow { k })?;
    let [z1, _, z3] = charges.map(i64::from);
    let threshold = (T::from_int(-z1) / T::from_int(z3)).powf(T::from_u32_exact(k).recip());
    let past_triangle = |x: T| match geometry::c_k(system.pair_couplings(), x, Exponent::Finite(k)) {
        Ok(c) => x >= T::one() + c,
        Err(_) => true,
    };
    let upper = |start: T| {
        let mut x = start.max(T::lit(2.0));
        for _ in 0..128 {
            if past_triangle(x) {
                return Ok(x);
            }
            x = x * T::lit(2.0);
        }
        Err(Kappa1Error::EmptyWindow { k })
    };
    let (lo, hi) = match case {
        SignCase::FirstPairAlike => (T::zero(), threshold),
        SignCase::LastPairAlike => (threshold, upper(threshold)?),
        SignCase::OuterPairAlike => (T::zero(), upper(T::one())?),
    };
    if k < 2 || !(hi > lo) {
        return Err(Kappa1Error::EmptyWindow { k });
    }
    Ok((lo, hi))
}

/// Samples both matching sides on `steps` evenly spaced multipliers,
/// endpoints included.
pub fn scan_matching<T: Real>(
    system: &ThreeBodySystem<T>,
    qn: Kappa1Numbers,
    k: u32,
    wp_range: (T, T),
    steps: usize,
) -> Result<ScanCurve<T>> {
    let (a, b) = wp_range;
    if steps < 2 || !(a < b) || !(a >= T::zero()) || !b.is_finite() {
        return Err(Kappa1Error::Domain(format!(
            "scan needs steps >= 2 and 0 <= wp_min < wp_max, got {steps} over ({a}, {b})"
        )));
    }
    let (lo, hi) = feasibility_window(system, k)?;
    if !(a < hi && b > lo) {
        return Err(Kappa1Error::EmptyWindow { k });
    }
    let last = T::from_usize(steps - 1).expect("step count representable");
    let grid = (0..steps).map(|i| a + (b - a) * T::from_usize(i).expect("index representable") / last);
    Ok(ScanCurve { k, samples: grid.map(|wp| sample(system, qn, k, wp)).collect() })
}

fn sample<T: Real>(system: &ThreeBodySystem<T>, qn: Kappa1Numbers, k: u32, wp: T) -> ScanSample<T> {
    match matching_point(system, qn, k, wp) {
        Some(p) => ScanSample { wp, lhs: p.lhs, rhs: p.rhs, feasible: p.admissible },
        None => ScanSample { wp, lhs: T::nan(), rhs: T::nan(), feasible: false },
    }
}

/// A solution of `α B1(1) = β B1(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa1Match<T> {
    /// Index into [`ThreeBodySystem::arrangements`].
    pub arrangement: usize,
    pub n1: u32,
    pub n2: u32,
    pub l1: u32,
    pub l2: u32,
    pub k: u32,
    pub wp_star: T,
    pub nu1: T,
    pub nu2: T,
    /// `E1 = energy_coefficient / r0²`, Hartree·bohr².
    pub energy_coefficient: T,
    pub r0: Option<T>,
}

impl<T: Real> Kappa1Match<T> {
    /// `E1` at the stored cut-off radius.
    pub fn energy(&self) -> Option<T> {
        self.r0.map(|r0| self.energy_coefficient / (r0 * r0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    /// Largest principal number tried on each branch.
    pub n_max: u32,
    pub k_max: u32,
    /// Grid samples per exponent.
    pub steps: usize,
    /// Orbital number on both branches.
    pub l: u32,
    pub scan_arrangements: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self { n_max: 1, k_max: 64, steps: 500, l: 0, scan_arrangements: false }
    }
}

const BISECTION_TOL: f64 = 1e-12;
const MATCH_TOL: f64 = 1e-9;

/// All matches with `n1, n2 ≤ n_max`, `k ∈ 2..=k_max`, ordered by
/// arrangement, `(n1, n2)`, `k`, then `℘*`. An empty list means `κ = 1` does
/// not contribute.
pub fn find_matches<T: Real>(
    system: &ThreeBodySystem<T>,
    options: &MatchOptions,
    r0: Option<T>,
) -> Vec<Kappa1Match<T>> {
    let mut arrangements = system.arrangements();
    if !options.scan_arrangements {
        arrangements.truncate(1);
    }
    let mut out = Vec::new();
    for (index, (_, arranged)) in arrangements.iter().enumerate() {
        for n1 in 1..=options.n_max {
            for n2 in 1..=options.n_max {
                if n1 <= options.l || n2 <= options.l {
                    continue;
                }
                let qn = Kappa1Numbers { n1, n2, l1: options.l, l2: options.l };
                for k in 2..=options.k_max {
                    for wp in roots_at(arranged, qn, k, options.steps) {
                        if let Some(m) = validate(arranged, qn, k, wp) {
                            out.push(Kappa1Match { arrangement: index, r0, ..m });
                        }
                    }
                }
            }
        }
    }
    out
}

fn difference<T: Real>(system: &ThreeBodySystem<T>, qn: Kappa1Numbers, k: u32, wp: T) -> Option<T> {
    matching_point(system, qn, k, wp).filter(|p| p.admissible).map(|p| p.lhs - p.rhs)
}

fn roots_at<T: Real>(system: &ThreeBodySystem<T>, qn: Kappa1Numbers, k: u32, steps: usize) -> Vec<T> {
    let Ok((lo, hi)) = feasibility_window(system, k) else { return Vec::new() };
    let steps = steps.max(2);
    let denom = T::from_usize(steps + 1).expect("step count representable");
    let grid: Vec<(T, Option<T>)> = (1..=steps)
        .map(|i| lo + (hi - lo) * T::from_usize(i).expect("index representable") / denom)
        .map(|wp| (wp, difference(system, qn, k, wp)))
        .collect();
    let mut roots: Vec<T> = Vec::new();
    let push = |r: T, roots: &mut Vec<T>| {
        if roots.last().map_or(true, |&p| (r - p).abs() > T::lit(1e-9)) {
            roots.push(r);
        }
    };
    for (wp, d) in &grid {
        if *d == Some(T::zero()) {
            push(*wp, &mut roots);
        }
    }
    for w in grid.windows(2) {
        let ((a, Some(fa)), (b, Some(fb))) = (w[0], w[1]) else { continue };
        if fa * fb < T::zero() {
            if let Some(r) = bisect(system, qn, k, (a, fa), b) {
                push(r, &mut roots);
            }
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));
    roots
}

fn bisect<T: Real>(
    system: &ThreeBodySystem<T>,
    qn: Kappa1Numbers,
    k: u32,
    (mut a, mut fa): (T, T),
    mut b: T,
) -> Option<T> {
    let half = T::lit(0.5);
    for _ in 0..200 {
        if (b - a).abs() < T::tolerance(BISECTION_TOL, 4.0) * b.abs().max(T::one()) {
            break;
        }
        let m = a + (b - a) * half;
        if m <= a || m >= b {
            break;
        }
        let fm = difference(system, qn, k, m)?;
        if fm == T::zero() {
            return Some(m);
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(a + (b - a) * half)
}

fn validate<T: Real>(
    system: &ThreeBodySystem<T>,
    qn: Kappa1Numbers,
    k: u32,
    wp: T,
) -> Option<Kappa1Match<T>> {
    let p = matching_point(system, qn, k, wp).filter(|p| p.admissible)?;
    let n1 = T::from_u32_exact(qn.n1);
    let n2 = T::from_u32_exact(qn.n2);
    let in_range = |nu: T, n: T| nu > T::zero() && nu < n;
    let scale = p.lhs.abs().max(p.rhs.abs()).max(T::min_positive_value());
    let matched = (p.lhs - p.rhs).abs() <= T::tolerance(MATCH_TOL, 256.0) * scale;
    if !(in_range(p.nu1, n1) && in_range(p.nu2, n2) && matched && p.lhs < T::zero()) {
        return None;
    }
    Some(Kappa1Match {
        arrangement: 0,
        n1: qn.n1,
        n2: qn.n2,
        l1: qn.l1,
        l2: qn.l2,
        k,
        wp_star: wp,
        nu1: p.nu1,
        nu2: p.nu2,
        energy_coefficient: p.lhs,
        r0: None,
    })
}

/// Lowest-energy match; ties keep the earliest.
pub fn infimum_match<T: Real>(matches: &[Kappa1Match<T>]) -> Option<&Kappa1Match<T>> {
    matches.iter().fold(None, |best: Option<&Kappa1Match<T>>, m| match best {
        Some(b) if b.energy_coefficient <= m.energy_coefficient => Some(b),
        _ => Some(m),
    })
}

/// Outcome of a cut-off radius calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration<T> {
    pub r0: T,
    /// `κ = 0` ground energy.
    pub e0: T,
    pub matched: Kappa1Match<T>,
}

/// Cut-off radius that makes `E0 + E1` equal `reference_total` (Hartree):
/// `r0 = √(coefficient / (reference - E0))`, using the lowest match and the
/// lowest `κ = 0` energy of the given ordering.
pub fn calibrate_r0<T: Real>(system: &ThreeBodySystem<T>, reference_total: T) -> Result<Calibration<T>> {
    calibrate_r0_with(system, reference_total, &MatchOptions::default())
}

pub fn calibrate_r0_with<T: Real>(
    system: &ThreeBodySystem<T>,
    reference_total: T,
    options: &MatchOptions,
) -> Result<Calibration<T>> {
    let spectrum = kappa0::spectrum_kappa0(system, &SpectrumOptions::default())?;
    let e0 = spectrum.infimum().ok_or(Kappa1Error::NoMatch)?.energy;
    let matches = find_matches(system, options, None);
    let best = *infimum_match(&matches).ok_or(Kappa1Error::NoMatch)?;
    if !(reference_total < e0) {
        return Err(Kappa1Error::ReferenceNotBelow {
            reference: reference_total.to_f64().unwrap_or(f64::NAN),
            e0: e0.to_f64().unwrap_or(f64::NAN),
        });
    }
    let r0 = (best.energy_coefficient / (reference_total - e0)).sqrt();
    Ok(Calibration { r0, e0, matched: Kappa1Match { r0: Some(r0), ..best } })
}

/// Energy of a single `κ` channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaEnergy<T> {
    pub kappa: u32,
    pub energy: T,
}

/// `E = Σ_κ E_κ` over `κ ∈ {0, 1}`; `κ = 0` is required.
///
/// The Hughes–Eckart cross term `γ ∇12·∇23` is left out. Adding it does not
/// move the bottom of the spectrum of each `κ` channel, so the sum is the
/// ground-state value; excited states would need the correction.
pub fn total_energy<T: Real>(parts: &[KappaEnergy<T>]) -> Result<T> {
    let mut seen = [false; 2];
    let mut sum = T::zero();
    for p in parts {
        let slot = seen.get_mut(p.kappa as usize).ok_or(Kappa1Error::UnsupportedKappa(p.kappa))?;
        if *slot {
            return Err(Kappa1Error::DuplicateKappa(p.kappa));
        }
        *slot = true;
        sum = sum + p.energy;
    }
    if !seen[0] {
        return Err(Kappa1Error::MissingKappaZero);
    }
    Ok(sum)
}

/// `u(r) = √r K_ν(r√(-B1))` outside the hard core, zero for `r ≤ r0`.
pub fn radial_wavefunction_kappa1<T: Real>(nu: T, b1_value: T, r: T, r0: T) -> Result<T> {
    if !(b1_value < T::zero()) || !(r0 > T::zero()) {
        return Err(Kappa1Error::Domain(format!(
            "wavefunction needs B1 < 0 and r0 > 0, got B1 = {b1_value}, r0 = {r0}"
        )));
    }
    if r <= r0 {
        return Ok(T::zero());
    }
    Ok(r.sqrt() * specfun::bessel_k(nu, r * (-b1_value).sqrt())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HE_M: f64 = 7294.299536;

    fn ps_minus() -> ThreeBodySystem<f64> {
        ThreeBodySystem::new([-1, 1, -1], [1.0, 1.0, 1.0]).unwrap()
    }

    fn helium() -> ThreeBodySystem<f64> {
        ThreeBodySystem::new([-1, -1, 2], [1.0, 1.0, HE_M]).unwrap()
    }

    #[test]
    fn bessel_index() {
        assert_eq!(nu(0.0, 0).unwrap(), 0.5);
        let a1 = 2.0 - 4f64.powf(1.0 / 3.0);
        assert!((nu(a1, 0).unwrap() - 0.814_001_8).abs() < 1e-6);
        assert!((nu(a1, 0).unwrap() - (2.25 - 4f64.powf(1.0 / 3.0)).sqrt()).abs() < 1e-15);
        assert!(nu(-0.3, 0).is_err());
        assert!((nu(0.0f64, 2).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn eigenvalue_formula() {
        assert_eq!(b1(1, 1.0, 3.0).unwrap(), 0.0);
        assert_eq!(b1(1, 1.7, 3.0).unwrap(), 0.0);
        assert_eq!(b1(2, 2.0, 1.0).unwrap(), 0.0);
        // -4 (Γ(1+ν)/Γ(1-ν))^(1/ν) at ν = 0.814
        let coef = b1(1, 0.8140018f64, 1.0).unwrap();
        assert!((coef + 0.515_488).abs() < 1e-4);
        assert!(b1(1, 0.999_999, 1.0).unwrap() > -1e-4);
        assert!(b1(1, 0.5, 0.0).is_err());
        assert!(b1(1, 0.0, 1.0).is_err());
    }

    #[test]
    fn term_matching_identity() {
        for (n, nu, r0) in [(1, 0.6f64, 1.0f64), (1, 0.9, 6.56), (2, 1.3, 0.7), (3, 0.2, 12.0)] {
            let b = b1(n, nu, r0).unwrap();
            let lhs = ((r0 / 2.0) * (-b).sqrt()).powf(2.0 * nu);
            let rhs = specfun::gamma_ratio(n, nu).unwrap();
            assert!(((lhs - rhs) / rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn b1_rises_toward_zero() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..1000 {
            let v = b1(1, i as f64 / 1000.0, 2.0).unwrap();
            assert!(v >= prev && v < 0.0);
            prev = v;
        }
    }

    #[test]
    fn positronium_ion_matches() {
        let ps = ps_minus();
        let matches = find_matches(&ps, &MatchOptions::default(), None);
        let ks: Vec<u32> = matches.iter().map(|m| m.k).collect();
        assert_eq!(ks, vec![3, 4, 5, 6]);
        for m in &matches {
            assert!((m.wp_star - 1.0).abs() < 1e-10);
            assert!(m.nu1 > 0.5 && m.nu1 < 1.0);
            assert!((m.nu1 - m.nu2).abs() < 1e-8);
        }
        let best = infimum_match(&matches).unwrap();
        assert_eq!(best.k, 3);
        assert!((best.energy_coefficient + 0.515_488).abs() < 1e-4);
        let expected = [-0.515_487_733, -0.275_47, -0.125_83, -0.019_386];
        for (m, e) in matches.iter().zip(expected) {
            assert!((m.energy_coefficient - e).abs() < 1e-4, "k = {}", m.k);
        }
    }

    #[test]
    fn matches_do_not_depend_on_radius() {
        let ps = ps_minus();
        let opts = MatchOptions::default();
        let a = find_matches(&ps, &opts, Some(1.0));
        let b = find_matches(&ps, &opts, Some(10.0));
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.wp_star, y.wp_star);
            assert_eq!(x.energy_coefficient, y.energy_coefficient);
            assert_eq!(x.energy().unwrap(), 100.0 * y.energy().unwrap());
        }
    }

    #[test]
    fn calibration() {
        let cal = calibrate_r0(&ps_minus(), -0.261_995).unwrap();
        assert!((cal.r0 - 6.56).abs() < 0.01);
        assert_eq!(cal.e0, -0.25);
        assert!(matches!(
            calibrate_r0(&ps_minus(), -0.25),
            Err(Kappa1Error::ReferenceNotBelow { .. })
        ));
        assert_eq!(calibrate_r0(&helium(), -2.9).unwrap_err(), Kappa1Error::NoMatch);
    }

    #[test]
    fn helium_has_no_match() {
        let he = helium();
        let opts = MatchOptions { scan_arrangements: true, ..MatchOptions::default() };
        assert!(find_matches(&he, &opts, None).is_empty());
        let window = feasibility_window(&he, 3).unwrap();
        assert_eq!(window.0, 0.0);
        assert!((window.1 - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let curve = scan_matching(&he, Kappa1Numbers::default(), 3, window, 10_000).unwrap();
        assert_eq!(curve.sign_changes(), 0);
    }

    #[test]
    fn scan_curve_shape() {
        let ps = ps_minus();
        let curve = scan_matching(&ps, Kappa1Numbers::default(), 3, (0.5, 1.5), 101).unwrap();
        assert_eq!(curve.samples.len(), 101);
        assert!(curve.samples.windows(2).all(|w| w[0].wp < w[1].wp));
        let mid = curve.samples[50];
        assert_eq!(mid.wp, 1.0);
        assert!(mid.feasible);
        assert_eq!(mid.lhs, mid.rhs);
        assert_eq!(curve.sign_changes(), 1);
        assert!(scan_matching(&ps, Kappa1Numbers::default(), 3, (0.5, 1.5), 1).is_err());
        assert!(matches!(
            scan_matching(&helium(), Kappa1Numbers::default(), 3, (0.9, 1.2), 10),
            Err(Kappa1Error::EmptyWindow { k: 3 })
        ));
    }

    #[test]
    fn k_two_coupling_vanishes() {
        let p = matching_point(&ps_minus(), Kappa1Numbers::default(), 2, 1.0).unwrap();
        assert!(p.a1.abs() < 1e-14);
        assert!(!p.admissible);
        let p = matching_point(&ps_minus(), Kappa1Numbers::default(), 7, 1.0).unwrap();
        assert!(p.nu1 > 1.0 && !p.admissible);
    }

    #[test]
    fn energy_assembly() {
        let parts = [
            KappaEnergy { kappa: 0, energy: -0.25f64 },
            KappaEnergy { kappa: 1, energy: -0.515_488 / (6.56 * 6.56) },
        ];
        assert!((total_energy(&parts).unwrap() + 0.261_98).abs() < 1e-5);
        assert_eq!(total_energy(&parts[..1]).unwrap(), -0.25);
        assert_eq!(total_energy::<f64>(&[]), Err(Kappa1Error::MissingKappaZero));
        assert_eq!(total_energy(&parts[1..]), Err(Kappa1Error::MissingKappaZero));
        let bad = [KappaEnergy { kappa: 0, energy: -1.0 }, KappaEnergy { kappa: 2, energy: -1.0 }];
        assert_eq!(total_energy(&bad), Err(Kappa1Error::UnsupportedKappa(2)));
    }

    #[test]
    fn hard_core_wavefunction() {
        let nu = 0.8140018;
        let b = b1(1, nu, 6.56).unwrap();
        assert_eq!(radial_wavefunction_kappa1(nu, b, 6.0, 6.56).unwrap(), 0.0);
        assert_eq!(radial_wavefunction_kappa1(nu, b, 6.56, 6.56).unwrap(), 0.0);
        let just_above = radial_wavefunction_kappa1(nu, b, 6.56 + 1e-6, 6.56).unwrap();
        assert!(just_above > 0.0);
        let far = radial_wavefunction_kappa1(nu, b, 400.0, 6.56).unwrap();
        assert!(far < 1e-10 && far > 0.0);
        assert!(radial_wavefunction_kappa1(nu, 0.0, 7.0, 6.56).is_err());
        // the boundary value is K_ν(2√g), independent of r0
        let res = boundary_residual(1, nu).unwrap();
        assert!((just_above / 6.56f64.sqrt() - res).abs() < 1e-6);
        assert!(res > 0.0);
    }

    proptest! {
        #[test]
        fn scaling_law(n in 1u32..=5, frac in 0.01f64..0.99, r0 in 0.05f64..50.0, s in 0.1f64..20.0) {
            let nu = frac * n as f64;
            let a = b1(n, nu, s * r0).unwrap();
            let b = b1(n, nu, r0).unwrap() / (s * s);
            prop_assert!((a - b).abs() <= 1e-15 * b.abs());
        }

        #[test]
        fn symmetric_systems_match_at_unit_multiplier(
            z1 in prop_oneof![-3i32..=-1, 1i32..=3],
            z2 in prop_oneof![-3i32..=-1, 1i32..=3],
            m1 in 0.1f64..100.0,
            m2 in 0.1f64..100.0,
            k in 2u32..12,
        ) {
            let sys = ThreeBodySystem::new([z1, z2, z1], [m1, m2, m1]).unwrap();
            if let Some(p) = matching_point(&sys, Kappa1Numbers::default(), k, 1.0) {
                prop_assert_eq!(p.lhs, p.rhs);
            }
        }
    }
}

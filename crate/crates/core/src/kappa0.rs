//! Coulombic (`κ = 0`) discrete spectrum.
//!
//! For a feasible triangle the reduced potential on the `r12` branch is
//! `Z12(℘;κ,k) / r12^(κ+1)` with
//!
//! ```text
//! Z12(℘;κ,k) = (-1)^κ κ! (Z12 + Z23 ℘^(κ+1) + Z13 (℘/c_k)^(κ+1)),
//! Z23(℘;κ,k) = Z12(℘;κ,k) / ℘^(κ+1).
//! ```
//!
//! At `κ = 0` this is a hydrogen-like problem with `A0 = Z12(℘;0,k)/α`,
//! eigenvalue `B0 = -A0²/(4n²)`, and `E = α B0`. Requiring the `r23` branch
//! to give the same energy fixes `℘ = (n1/n2)√(α/β)`.
//!
//! The cross-gradient term `γ ∇12·∇23` is not included: it leaves the bottom
//! of each spectrum unchanged, which is what the infimum reports.

use thiserror::Error;

use crate::geometry::{self, Exponent, Rejection};
use crate::specfun::{self, SpecFunError};
use crate::system::{Arrangement, KineticCoefficients, PairCouplings, ThreeBodySystem};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Kappa0Error {
    #[error("no feasible triangle: {0}")]
    Infeasible(Rejection),
    #[error("effective coupling {coupling} is not attractive; no bound state")]
    Repulsive { coupling: f64 },
    #[error("quantum numbers invalid: {0}")]
    QuantumNumbers(String),
    #[error("system is unstable: no arrangement admits a feasible triangle")]
    Unstable,
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Principal and orbital quantum numbers of both radial branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n1: u32,
    pub n2: u32,
    pub l1: u32,
    pub l2: u32,
}

impl QuantumNumbers {
    pub fn new(n1: u32, n2: u32, l1: u32, l2: u32) -> Result<Self, Kappa0Error> {
        if n1 < l1 + 1 || n2 < l2 + 1 {
            return Err(Kappa0Error::QuantumNumbers(format!(
                "need n >= l + 1, got (n1, l1) = ({n1}, {l1}), (n2, l2) = ({n2}, {l2})"
            )));
        }
        Ok(Self { n1, n2, l1, l2 })
    }

    /// S-wave pair `(n1, n2)`.
    pub fn s_wave(n1: u32, n2: u32) -> Result<Self, Kappa0Error> {
        Self::new(n1, n2, 0, 0)
    }
}

/// `℘ = (n1/n2) √(α/β)`.
pub fn wp_for<T: Real>(n1: u32, n2: u32, coeffs: &KineticCoefficients<T>) -> T {
    T::from_u32_exact(n1) / T::from_u32_exact(n2) * (coeffs.alpha / coeffs.beta).sqrt()
}

/// Couplings of the reduced inverse-power potential on both branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCouplings<T> {
    pub z12_eff: T,
    pub z23_eff: T,
    /// `z12_eff / α`.
    pub a_kappa_1: T,
    /// `z23_eff / β`.
    pub a_kappa_2: T,
}

fn factorial<T: Real>(n: u32) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::from_u32_exact(i))
}

/// `Z12(℘;κ,k)`, `Z23(℘;κ,k)` and the matching `A_κ` on both branches.
pub fn effective_couplings<T: Real>(
    couplings: PairCouplings,
    coeffs: &KineticCoefficients<T>,
    wp: T,
    ck: T,
    kappa: u32,
) -> EffectiveCouplings<T> {
    let p = kappa as i32 + 1;
    let sign = if kappa % 2 == 0 { T::one() } else { -T::one() };
    let bracket = T::from_int(couplings.z12)
        + T::from_int(couplings.z23) * wp.powi(p)
        + T::from_int(couplings.z13) * (wp / ck).powi(p);
    let z12_eff = sign * factorial::<T>(kappa) * bracket;
    let z23_eff = z12_eff / wp.powi(p);
    EffectiveCouplings {
        z12_eff,
        z23_eff,
        a_kappa_1: z12_eff / coeffs.alpha,
        a_kappa_2: z23_eff / coeffs.beta,
    }
}

/// `α B0` from branch 1, `B0 = -A0²/(4 n1²)`.
pub fn branch_energy<T: Real>(a_kappa: T, kinetic: T, n: u32) -> T {
    let n = T::from_u32_exact(n);
    -kinetic * a_kappa * a_kappa / (T::lit(4.0) * n * n)
}

/// The two summands inside `E = -(1/4)(X + Y)²`.
///
/// Finite `k` uses `X = Z12/(n1√α)`, `Y = Z3 (Z2 + Z1/c_k)/(n2√β)`. At
/// `k = ∞` the closed forms for `℘ ≤ 1` and `℘ > 1` are used.
pub fn bracket_terms<T: Real>(
    system: &ThreeBodySystem<T>,
    n1: u32,
    n2: u32,
    k: Exponent,
    ck: T,
) -> (T, T) {
    let [z1, z2, z3] = system.charges().map(i64::from);
    let coeffs = system.kinetic_coefficients();
    let d1 = T::from_u32_exact(n1) * coeffs.alpha.sqrt();
    let d2 = T::from_u32_exact(n2) * coeffs.beta.sqrt();
    let f = T::from_int;
    match k {
        Exponent::Finite(_) => (f(z1 * z2) / d1, f(z3) * (f(z2) + f(z1) / ck) / d2),
        Exponent::Infinite => {
            let wp = wp_for(n1, n2, &coeffs);
            if wp <= T::one() {
                (f(z1 * (z2 + z3)) / d1, f(z2 * z3) / d2)
            } else {
                (f(z1 * z2) / d1, f(z3 * (z1 + z2)) / d2)
            }
        }
    }
}

/// Eigenvalue `E(n1, n2, k)` in Hartree.
pub fn energy_kappa0<T: Real>(
    system: &ThreeBodySystem<T>,
    n1: u32,
    n2: u32,
    k: Exponent,
) -> Result<T, Kappa0Error> {
    if n1 == 0 || n2 == 0 {
        return Err(Kappa0Error::QuantumNumbers("principal numbers start at 1".into()));
    }
    let coeffs = system.kinetic_coefficients();
    let wp = wp_for(n1, n2, &coeffs);
    let report = geometry::dk_nonempty(system.charges(), wp, k);
    let solution = report.outcome.map_err(Kappa0Error::Infeasible)?;
    let eff = effective_couplings(system.pair_couplings(), &coeffs, wp, solution.ck, 0);
    if !(eff.z12_eff < T::zero()) {
        return Err(Kappa0Error::Repulsive { coupling: eff.z12_eff.to_f64().unwrap_or(f64::NAN) });
    }
    let (x, y) = bracket_terms(system, n1, n2, k, solution.ck);
    let s = x + y;
    Ok(-s * s / T::lit(4.0))
}

/// One eigenvalue of the scanned grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry<T> {
    pub kappa: u32,
    /// Index into [`ThreeBodySystem::arrangements`].
    pub arrangement: usize,
    pub n1: u32,
    pub n2: u32,
    pub l1: u32,
    pub l2: u32,
    pub k: Exponent,
    /// Hartree.
    pub energy: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumOptions {
    pub n_max: u32,
    pub k_max: u32,
    pub scan_arrangements: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { n_max: 5, k_max: 64, scan_arrangements: false }
    }
}

/// Consecutive finite exponents within this of the `k = ∞` value end the
/// `k` scan.
const K_SCAN_CONVERGED: f64 = 1e-12;
const K_SCAN_STREAK: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    /// `(arrangement, reordered system)` for every index used by entries.
    pub arrangements: Vec<(Arrangement, ThreeBodySystem<T>)>,
    /// Ordered by arrangement, then `n1`, `n2`, `k`.
    pub entries: Vec<SpectrumEntry<T>>,
}

impl<T: Real> Spectrum<T> {
    /// Lowest entry over everything scanned.
    pub fn infimum(&self) -> Option<&SpectrumEntry<T>> {
        lowest(self.entries.iter())
    }

    pub fn infimum_for(&self, arrangement: usize) -> Option<&SpectrumEntry<T>> {
        lowest(self.entries.iter().filter(|e| e.arrangement == arrangement))
    }
}

fn lowest<'a, T: Real>(
    entries: impl Iterator<Item = &'a SpectrumEntry<T>>,
) -> Option<&'a SpectrumEntry<T>> {
    // first of equal minima wins, keeping the result deterministic
    entries.fold(None, |best: Option<&SpectrumEntry<T>>, e| match best {
        Some(b) if b.energy <= e.energy => Some(b),
        _ => Some(e),
    })
}

/// All feasible `κ = 0` eigenvalues with `n1, n2 ≤ n_max` and
/// `k ∈ 2..=k_max ∪ {∞}`, S-wave (`l1 = l2 = 0`; energies do not depend on
/// `l` beyond `n ≥ l + 1`).
pub fn spectrum_kappa0<T: Real>(
    system: &ThreeBodySystem<T>,
    options: &SpectrumOptions,
) -> Result<Spectrum<T>, Kappa0Error> {
    if !geometry::stable(system).is_stable() {
        return Err(Kappa0Error::Unstable);
    }
    let mut arrangements = system.arrangements();
    if !options.scan_arrangements {
        arrangements.truncate(1);
    }
    let mut entries = Vec::new();
    for (index, (_, arranged)) in arrangements.iter().enumerate() {
        for n1 in 1..=options.n_max {
            for n2 in 1..=options.n_max {
                scan_k(arranged, index, n1, n2, options.k_max, &mut entries);
            }
        }
    }
    Ok(Spectrum { arrangements, entries })
}

fn scan_k<T: Real>(
    system: &ThreeBodySystem<T>,
    arrangement: usize,
    n1: u32,
    n2: u32,
    k_max: u32,
    entries: &mut Vec<SpectrumEntry<T>>,
) {
    let entry = |k: Exponent, energy: T| SpectrumEntry {
        kappa: 0,
        arrangement,
        n1,
        n2,
        l1: 0,
        l2: 0,
        k,
        energy,
    };
    let at_infinity = energy_kappa0(system, n1, n2, Exponent::Infinite).ok();
    let mut streak = 0;
    for k in 2..=k_max {
        let Ok(e) = energy_kappa0(system, n1, n2, Exponent::Finite(k)) else {
            streak = 0;
            continue;
        };
        entries.push(entry(Exponent::Finite(k), e));
        match at_infinity {
            Some(inf) if (e - inf).abs() < T::lit(K_SCAN_CONVERGED) => {
                streak += 1;
                if streak >= K_SCAN_STREAK {
                    break;
                }
            }
            _ => streak = 0,
        }
    }
    if let Some(inf) = at_infinity {
        entries.push(entry(Exponent::Infinite, inf));
    }
}

/// Unnormalized radial factor `u(r) = M_{n,l+1/2}(2r√(-B0))`,
/// `B0 = -A0²/(4n²)`, for an attractive `A0 < 0`.
pub fn radial_wavefunction_kappa0<T: Real>(n: u32, l: u32, a0: T, r: T) -> Result<T, Kappa0Error> {
    if !(a0 < T::zero()) {
        return Err(Kappa0Error::Repulsive { coupling: a0.to_f64().unwrap_or(f64::NAN) });
    }
    if n < l + 1 {
        return Err(Kappa0Error::QuantumNumbers(format!("need n >= l + 1, got n = {n}, l = {l}")));
    }
    let nf = T::from_u32_exact(n);
    let b0 = -a0 * a0 / (T::lit(4.0) * nf * nf);
    let z = T::lit(2.0) * r * (-b0).sqrt();
    let mu = T::from_u32_exact(l) + T::lit(0.5);
    Ok(specfun::whittaker_m(nf, mu, z)?)
}

//! Real special functions needed by the spectral formulas.
//!
//! - `ln Γ` by the Lanczos approximation (g = 7, 9 terms) with reflection
//!   below 1/2.
//! - Modified Bessel `I_ν` by its power series and `K_ν` for non-integer
//!   order: the reflection formula `(π/2)(I_{-ν} - I_ν)/sin(νπ)` for
//!   `z ≤ 2`, Steed's continued fraction plus upward recurrence above, where
//!   the reflection formula cancels catastrophically.
//! - Whittaker `M_{n,μ}` through the Kummer series `1F1`.

use thiserror::Error;

use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: argument outside domain ({detail})")]
    Domain { function: &'static str, detail: String },
    #[error("{function}: series did not reach the requested accuracy within {terms} terms")]
    NoConvergence { function: &'static str, terms: usize },
}

impl SpecFunError {
    fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        SpecFunError::Domain { function, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Orders closer than this to an integer are rejected by [`bessel_k`].
pub const INTEGER_ORDER_GUARD: f64 = 1e-6;

/// Above this argument `K_ν` switches from the reflection formula to the
/// continued fraction.
const K_SWITCH: f64 = 2.0;

/// Accuracy target for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyContract<T> {
    pub rel_tol: T,
    pub max_terms: usize,
}

impl<T: Real> Default for AccuracyContract<T> {
    /// `1e-12`, or a few ulps for types that cannot reach it.
    fn default() -> Self {
        let floor = T::epsilon() * T::lit(8.0);
        Self { rel_tol: T::lit(1e-12).max(floor), max_terms: 500 }
    }
}

impl<T: Real> AccuracyContract<T> {
    pub fn new(rel_tol: T, max_terms: usize) -> Option<Self> {
        (rel_tol > T::zero() && max_terms >= 1).then_some(Self { rel_tol, max_terms })
    }

    fn stop_below(&self) -> T {
        self.rel_tol / T::lit(10.0)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma<T: Real>(x: T) -> T {
    // x >= 0.5
    let xm1 = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (xm1 + T::from_u32_exact(i as u32));
    }
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    half_ln_two_pi + (xm1 + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Natural logarithm of `Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(SpecFunError::domain("ln_gamma", format!("x = {x} must be positive and finite")));
    }
    if x < T::lit(0.5) {
        // Γ(x)Γ(1-x) = π / sin(πx), and sin(πx) > 0 on (0, 1/2)
        let pi = T::PI();
        Ok((pi / (pi * x).sin()).ln() - lanczos_ln_gamma(T::one() - x))
    } else {
        Ok(lanczos_ln_gamma(x))
    }
}

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `Γ(x)` for any real `x` that is not a pole.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(SpecFunError::domain("gamma", format!("x = {x} is a pole or not finite")));
    }
    if x < T::lit(0.5) {
        let pi = T::PI();
        Ok(pi / ((pi * x).sin() * lanczos_ln_gamma(T::one() - x).exp()))
    } else {
        Ok(lanczos_ln_gamma(x).exp())
    }
}

/// `1/Γ(x)`, zero at the poles.
pub fn recip_gamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        return T::zero();
    }
    if x < T::lit(0.5) {
        let pi = T::PI();
        (pi * x).sin() * lanczos_ln_gamma(T::one() - x).exp() / pi
    } else {
        (-lanczos_ln_gamma(x)).exp()
    }
}

/// `Γ(n+ν)/Γ(n-ν)` for integer `n ≥ 1` and `0 < ν < n`.
pub fn gamma_ratio<T: Real>(n: u32, nu: T) -> Result<T> {
    let nf = T::from_u32_exact(n);
    if n == 0 || !(nu > T::zero()) || !(nu < nf) {
        return Err(SpecFunError::domain(
            "gamma_ratio",
            format!("need 0 < nu < n, got n = {n}, nu = {nu}"),
        ));
    }
    Ok((ln_gamma(nf + nu)? - ln_gamma(nf - nu)?).exp())
}

/// Power series of `I_ν(z)`; `ν` may be negative when not an integer.
fn bessel_i_series<T: Real>(nu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    let half_z = z / T::lit(2.0);
    let q = half_z * half_z;
    let mut term = half_z.powf(nu) * recip_gamma(nu + T::one());
    let mut sum = term;
    let stop = acc.stop_below();
    for m in 1..=acc.max_terms {
        let mf = T::from_u32_exact(m as u32);
        let ratio = q / (mf * (mf + nu));
        term = term * ratio;
        sum = sum + term;
        if ratio.abs() < T::one() && term.abs() <= stop * sum.abs() {
            return Ok(sum);
        }
        if term == T::zero() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence { function: "bessel_i", terms: acc.max_terms })
}

/// Modified Bessel function of the first kind, `ν ≥ 0`, `z > 0`.
pub fn bessel_i<T: Real>(nu: T, z: T) -> Result<T> {
    bessel_i_with(nu, z, &AccuracyContract::default())
}

pub fn bessel_i_with<T: Real>(nu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(SpecFunError::domain("bessel_i", format!("z = {z} must be positive")));
    }
    if !(nu >= T::zero()) {
        return Err(SpecFunError::domain("bessel_i", format!("order {nu} must be nonnegative")));
    }
    bessel_i_series(nu, z, acc)
}

fn integer_distance<T: Real>(nu: T) -> T {
    (nu - nu.round()).abs()
}

/// Modified Bessel function of the second kind for non-integer order.
///
/// `K_ν = K_{-ν}`, so only `|ν|` is used. Orders within
/// [`INTEGER_ORDER_GUARD`] of an integer are rejected.
pub fn bessel_k<T: Real>(nu: T, z: T) -> Result<T> {
    bessel_k_with(nu, z, &AccuracyContract::default())
}

pub fn bessel_k_with<T: Real>(nu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(SpecFunError::domain("bessel_k", format!("z = {z} must be positive")));
    }
    let nu = nu.abs();
    if !nu.is_finite() || integer_distance(nu) <= T::lit(INTEGER_ORDER_GUARD) {
        return Err(SpecFunError::domain(
            "bessel_k",
            format!("order {nu} is within {INTEGER_ORDER_GUARD} of an integer"),
        ));
    }
    if z <= T::lit(K_SWITCH) {
        bessel_k_reflection(nu, z, acc)
    } else {
        bessel_k_steed(nu, z, acc)
    }
}

/// `(π/2)(I_{-ν}(z) - I_ν(z)) / sin(νπ)`.
pub fn bessel_k_reflection<T: Real>(nu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    let pi = T::PI();
    let i_minus = bessel_i_series(-nu, z, acc)?;
    let i_plus = bessel_i_series(nu, z, acc)?;
    Ok(pi / T::lit(2.0) * (i_minus - i_plus) / (nu * pi).sin())
}

/// Steed's continued fraction for `K_μ`, `K_{μ+1}` with `|μ| ≤ 1/2`, then
/// upward recurrence, which is stable for `K`.
fn bessel_k_steed<T: Real>(nu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    let steps = (nu + T::lit(0.5)).floor();
    let mu = nu - steps;
    let steps = steps.to_usize().unwrap_or(0);
    let one = T::one();
    let two = T::lit(2.0);
    let a1 = T::lit(0.25) - mu * mu;

    let mut b = two * (one + z);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = one;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let eps = acc.rel_tol * T::lit(1e-3);
    let mut converged = false;
    for i in 1..=acc.max_terms.max(50) * 10 {
        let fi = T::from_u32_exact(i as u32);
        a = a - two * fi;
        c = -a * c / (fi + one);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = one / (b + a * d);
        delh = (b * d - one) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < eps.max(T::epsilon()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecFunError::NoConvergence { function: "bessel_k", terms: acc.max_terms });
    }
    let mut k_mu = (T::PI() / (two * z)).sqrt() * (-z).exp() / s;
    let mut k_next = k_mu * (mu + z + T::lit(0.5) - a1 * h) / z;
    for i in 1..=steps {
        let order = mu + T::from_u32_exact(i as u32);
        let k_new = two * order / z * k_next + k_mu;
        k_mu = k_next;
        k_next = k_new;
    }
    Ok(k_mu)
}

/// Kummer's confluent hypergeometric series `1F1(a; b; z)`.
pub fn kummer_m<T: Real>(a: T, b: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    if is_nonpositive_integer(b) {
        return Err(SpecFunError::domain("kummer_m", format!("b = {b} is a nonpositive integer")));
    }
    let mut term = T::one();
    let mut sum = T::one();
    let stop = acc.stop_below();
    for m in 0..acc.max_terms {
        let mf = T::from_u32_exact(m as u32);
        term = term * (a + mf) * z / ((b + mf) * (mf + T::one()));
        if term == T::zero() {
            return Ok(sum);
        }
        sum = sum + term;
        let past_peak = mf + T::one() > z.abs() && mf + T::one() > a.abs();
        if past_peak && term.abs() <= stop * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence { function: "kummer_m", terms: acc.max_terms })
}

/// Whittaker `M_{n,μ}(z) = z^{μ+1/2} e^{-z/2} 1F1(μ+1/2-n; 2μ+1; z)`, `z > 0`.
///
/// For `μ = l + 1/2` and integer `n ≥ l + 1` the series terminates.
pub fn whittaker_m<T: Real>(n: T, mu: T, z: T) -> Result<T> {
    whittaker_m_with(n, mu, z, &AccuracyContract::default())
}

pub fn whittaker_m_with<T: Real>(n: T, mu: T, z: T, acc: &AccuracyContract<T>) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(SpecFunError::domain("whittaker_m", format!("z = {z} must be positive")));
    }
    let half = T::lit(0.5);
    let b = T::lit(2.0) * mu + T::one();
    if is_nonpositive_integer(b) {
        return Err(SpecFunError::domain(
            "whittaker_m",
            format!("2mu + 1 = {b} is a nonpositive integer"),
        ));
    }
    let series = kummer_m(mu + half - n, b, z, acc)?;
    Ok(((mu + half) * z.ln() - half * z).exp() * series)
}

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use coulomb3::geometry::{self, Exponent};
use coulomb3::kappa0::{self, SpectrumOptions};
use coulomb3::kappa1::{self, Kappa1Numbers, MatchOptions};
use coulomb3::specfun;
use coulomb3::System;
use coulomb3_cli::run;

const HE_NUCLEUS: f64 = 7294.299536;
const CASES: usize = 1000;

type Outcome = Result<String, String>;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coulomb3").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = cli(&full);
    if code != 0 {
        return Err(format!("exit {code}: {err}"));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn number(v: &Value) -> f64 {
    v.as_f64().expect("numeric field")
}

fn helium() -> System {
    System::new([-1, -1, 2], [1.0, 1.0, HE_NUCLEUS]).unwrap()
}

fn ps_minus() -> System {
    System::new([-1, 1, -1], [1.0, 1.0, 1.0]).unwrap()
}

fn criterion_1() -> Outcome {
    let args = ["spectrum", "--system", "helium", "--kappa", "0", "--nmax", "1"];
    let report = cli_json(&args)?;
    let e = number(&report["infimum"]["energy"]);
    let (code, table, _) = cli(&args);
    let shown = table.lines().any(|l| l.starts_with("infimum: -2.914048 Hartree"));
    check(
        (e + 2.914048).abs() < 1e-5 && code == 0 && shown,
        format!("infimum {e:.9} Hartree, table row shown: {shown}"),
    )
}

fn criterion_2() -> Outcome {
    let report = cli_json(&["spectrum", "--system", "helium", "--kappa", "0", "--nmax", "1", "--arrangements"])?;
    let rows = report["arrangement_infima"].as_array().ok_or("no arrangement rows")?;
    let by_charges: Vec<(String, f64)> =
        rows.iter().map(|r| (r["arrangement"].as_str().unwrap().to_owned(), number(&r["energy"]))).collect();
    if by_charges.len() != 3 {
        return Err(format!("expected 3 arrangements, got {}", by_charges.len()));
    }
    let alt = System::new([-1, 2, -1], [1.0, HE_NUCLEUS, 1.0]).unwrap();
    let direct = kappa0::energy_kappa0(&alt, 1, 1, Exponent::Infinite).map_err(|e| e.to_string())?;
    let base = kappa0::energy_kappa0(&helium(), 1, 1, Exponent::Infinite).map_err(|e| e.to_string())?;
    let (_, e_orig) = &by_charges[0];
    let (_, e_alt) = &by_charges[1];
    let (_, e_third) = &by_charges[2];
    check(
        (direct + 4.499383).abs() < 1e-5
            && (e_alt - direct).abs() < 1e-12
            && (e_orig - base).abs() < 1e-10
            && (e_third - base).abs() < 1e-10,
        format!("(-1,+2,-1): {direct:.9}; others {e_orig:.12} and {e_third:.12}"),
    )
}

fn criterion_3() -> Outcome {
    let report = cli_json(&["spectrum", "--system", "ps-minus", "--kappa", "0"])?;
    let e = number(&report["infimum"]["energy"]);
    let sol = geometry::dk_nonempty([-1, 1, -1], 1.0f64, Exponent::Infinite)
        .outcome
        .map_err(|r| r.to_string())?;
    let equilateral = (sol.omega - PI / 3.0).abs() < 1e-10
        && (sol.sigma - PI / 3.0).abs() < 1e-10
        && sol.ck == 1.0;
    check(
        (e + 0.25).abs() < 1e-12 && equilateral,
        format!("E = {e}, omega = {:.12}, c = {}", sol.omega, sol.ck),
    )
}

fn criterion_4() -> Outcome {
    let eh = System::new([1, -1, 1], [1.0, 1.0, 1836.1527]).unwrap();
    let e = kappa0::energy_kappa0(&eh, 2, 1, Exponent::Infinite).map_err(|e| e.to_string())?;
    let ry = 2.0 * e;
    check((ry + 0.2499).abs() < 1e-3, format!("E(2,1,inf) = {e:.8} Hartree = {ry:.8} Ry"))
}

fn criterion_5() -> Outcome {
    let matches = kappa1::find_matches(&ps_minus(), &MatchOptions::default(), None);
    let ks: Vec<u32> = matches.iter().map(|m| m.k).collect();
    let nu_ok = matches.iter().all(|m| m.nu1 > 0.5 && m.nu1 < 1.0 && m.nu2 > 0.5 && m.nu2 < 1.0);
    let best = kappa1::infimum_match(&matches).ok_or("no match")?;
    let report = cli_json(&["calibrate-r0", "--system", "ps-minus", "--reference", "-0.261995"])?;
    let r0 = number(&report["r0"]);
    check(
        ks == [3, 4, 5, 6] && nu_ok && (best.energy_coefficient + 0.515488).abs() < 1e-4 && (r0 - 6.56).abs() < 0.01,
        format!("k = {ks:?}, coefficient {:.7} at k = {}, r0 = {r0:.5}", best.energy_coefficient, best.k),
    )
}

fn criterion_6() -> Outcome {
    let he = helium();
    let upper = 0.5f64.powf(1.0 / 3.0);
    let curve = kappa1::scan_matching(&he, Kappa1Numbers::default(), 3, (0.0, upper), 10_000)
        .map_err(|e| e.to_string())?;
    let changes = curve.sign_changes();
    let admissible = curve.feasible_count();
    let geometric = curve.samples.iter().filter(|s| s.lhs.is_finite()).count();
    let opts = MatchOptions { scan_arrangements: true, ..MatchOptions::default() };
    let all_empty = kappa1::find_matches(&he, &opts, None).is_empty();
    let per_arrangement: Vec<usize> = he
        .arrangements()
        .iter()
        .map(|(_, s)| kappa1::find_matches(s, &MatchOptions::default(), None).len())
        .collect();
    let (code, _, err) = cli(&["calibrate-r0", "--system", "helium", "--reference", "-2.9"]);
    check(
        changes == 0 && all_empty && per_arrangement == [0, 0, 0] && code == 3,
        format!(
            "{changes} sign changes over {} samples ({geometric} with a triangle, {admissible} inside the coupling bound); \
             matches per arrangement {per_arrangement:?}; calibrate-r0 exit {code}: {}",
            curve.samples.len(),
            err.trim()
        ),
    )
}

fn charge(rng: &mut ChaCha8Rng) -> i32 {
    let mag = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

fn masses(rng: &mut ChaCha8Rng) -> [f64; 3] {
    // log-uniform over [0.1, 1e4]
    [(); 3].map(|_| 10f64.powf(rng.gen_range(-1.0..4.0)))
}

/// Draws until `CASES` inputs were accepted by `trial`; returns the worst
/// metric seen.
fn property(
    rng: &mut ChaCha8Rng,
    mut trial: impl FnMut(&mut ChaCha8Rng) -> Option<f64>,
) -> Result<(usize, f64), String> {
    let mut accepted = 0;
    let mut worst = 0f64;
    for _ in 0..CASES * 200 {
        if let Some(m) = trial(rng) {
            accepted += 1;
            worst = worst.max(m);
            if accepted == CASES {
                return Ok((accepted, worst));
            }
        }
    }
    Err(format!("only {accepted} usable inputs"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, result: Result<(usize, f64), String>, bound: f64| match result {
        Ok((n, worst)) => {
            ok &= worst < bound;
            lines.push(format!("{name}: worst {worst:.2e} (bound {bound:e}) over {n}"));
        }
        Err(e) => {
            ok = false;
            lines.push(format!("{name}: {e}"));
        }
    };

    let residual = property(&mut rng, |rng| {
        let charges = [charge(rng), charge(rng), charge(rng)];
        let wp = 10f64.powf(rng.gen_range(-1.3..0.7));
        let k = Exponent::Finite(rng.gen_range(2..=24));
        let sol = geometry::dk_nonempty(charges, wp, k).outcome.ok()?;
        geometry::relative_residual(coulomb3::PairCouplings::from_charges(charges), &sol).map(f64::abs)
    });
    record("stability residual (relative)", residual, 1e-10);

    let branches = property(&mut rng, |rng| {
        let sys = System::new([charge(rng), charge(rng), charge(rng)], masses(rng)).ok()?;
        let (n1, n2) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let k = if rng.gen_bool(0.2) { Exponent::Infinite } else { Exponent::Finite(rng.gen_range(2..=30)) };
        let coeffs = sys.kinetic_coefficients();
        let wp = kappa0::wp_for(n1, n2, &coeffs);
        let sol = geometry::dk_nonempty(sys.charges(), wp, k).outcome.ok()?;
        let eff = kappa0::effective_couplings(sys.pair_couplings(), &coeffs, wp, sol.ck, 0);
        let e1 = kappa0::branch_energy(eff.a_kappa_1, coeffs.alpha, n1);
        let e2 = kappa0::branch_energy(eff.a_kappa_2, coeffs.beta, n2);
        Some((e1 - e2).abs() / e1.abs().max(1.0))
    });
    record("kappa0 branch equality (relative to max(1,|E|))", branches, 1e-12);

    let recurrence = property(&mut rng, |rng| {
        let x: f64 = rng.gen_range(0.01..30.0);
        let lhs = specfun::gamma(x + 1.0).ok()?;
        let rhs = x * specfun::gamma(x).ok()?;
        let n = rng.gen_range(1..=10u32);
        let nu = rng.gen_range(0.001..0.999) * n as f64;
        let r_next = specfun::gamma_ratio(n + 1, nu).ok()?;
        let r_here = (n as f64 + nu) / (n as f64 - nu) * specfun::gamma_ratio(n, nu).ok()?;
        Some(((lhs - rhs) / rhs).abs().max(((r_next - r_here) / r_here).abs()))
    });
    record("gamma recurrence", recurrence, 1e-10);

    let wronskian = property(&mut rng, |rng| {
        let nu: f64 = rng.gen_range(0.01..4.0);
        if (nu - nu.round()).abs() < 1e-3 {
            return None;
        }
        let z: f64 = 10f64.powf(rng.gen_range(-1.3..1.4));
        let w = specfun::bessel_i(nu, z).ok()? * specfun::bessel_k(nu + 1.0, z).ok()?
            + specfun::bessel_i(nu + 1.0, z).ok()? * specfun::bessel_k(nu, z).ok()?;
        Some((w * z - 1.0).abs())
    });
    record("Bessel Wronskian", wronskian, 1e-8);

    let scaling = property(&mut rng, |rng| {
        let n = rng.gen_range(1..=5u32);
        let nu = rng.gen_range(0.01..0.99) * n as f64;
        let r0: f64 = rng.gen_range(0.05..50.0);
        let s: f64 = rng.gen_range(0.1..20.0);
        let a = kappa1::b1(n, nu, s * r0).ok()?;
        let b = kappa1::b1(n, nu, r0).ok()? / (s * s);
        Some(((a - b) / b).abs())
    });
    record("b1 scaling law", scaling, 1e-15);

    let matching = property(&mut rng, |rng| {
        let n = rng.gen_range(1..=5u32);
        let nu = rng.gen_range(0.01..0.99) * n as f64;
        let r0: f64 = rng.gen_range(0.05..50.0);
        let b = kappa1::b1(n, nu, r0).ok()?;
        let lhs = ((r0 / 2.0) * (-b).sqrt()).powf(2.0 * nu);
        let rhs = specfun::gamma_ratio(n, nu).ok()?;
        Some(((lhs - rhs) / rhs).abs())
    });
    record("B1 term-matching identity", matching, 1e-10);

    check(ok, lines.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut m3s = vec![1.0, 1.5, 2.0, 206.7682830, 1836.1527, HE_NUCLEUS];
    m3s.extend((0..24).map(|_| 10f64.powf(rng.gen_range(0.0..4.0))));
    let mut worst = 0f64;
    for &m3 in &m3s {
        let sys = System::new([1, 1, -1], [1.0, 1.0, m3]).unwrap();
        let spectrum = kappa0::spectrum_kappa0(&sys, &SpectrumOptions::default()).map_err(|e| e.to_string())?;
        let inf = spectrum.infimum().ok_or("empty spectrum")?.energy;
        let beta = sys.kinetic_coefficients().beta;
        worst = worst.max((inf + 1.0 / (4.0 * beta)).abs());
    }
    check(worst < 1e-12, format!("worst |inf - (-1/(4 beta))| = {worst:.2e} over {} masses m3 >= 1", m3s.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 helium κ=0 ground value", criterion_1),
        ("2 helium alternate arrangement", criterion_2),
        ("3 Ps- κ=0 and equilateral geometry", criterion_3),
        ("4 positron-hydrogen n1=2, n2=1", criterion_4),
        ("5 Ps- κ=1 matches and r0", criterion_5),
        ("6 helium κ=1 has no match", criterion_6),
        ("7 randomized property suites", criterion_7),
        ("8 unit-charge threshold", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Serializable reports and their table, JSON and CSV renderings.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use coulomb3::geometry::StabilityWitness;
use coulomb3::kappa0::Spectrum;
use coulomb3::{Kappa1Match, ScanCurve, SpectrumEntry, System};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Hartree,
    Rydberg,
}

impl Units {
    pub fn factor(self) -> f64 {
        match self {
            Units::Hartree => 1.0,
            Units::Rydberg => 2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Hartree => "Hartree",
            Units::Rydberg => "Ry",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub label: String,
    pub charges: [i32; 3],
    pub masses: [f64; 3],
}

impl SystemSummary {
    pub fn of(system: &System) -> Self {
        Self {
            label: system.label().unwrap_or("custom").to_owned(),
            charges: system.charges(),
            masses: system.masses(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub arrangement: String,
    pub charges: [i32; 3],
    pub k: String,
    pub wp: f64,
    pub ck: f64,
    pub omega: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl WitnessRow {
    pub fn of(w: &StabilityWitness<f64>) -> Self {
        let s = &w.solution;
        Self {
            arrangement: w.arrangement.code(),
            charges: w.charges,
            k: s.k.to_string(),
            wp: s.wp,
            ck: s.ck,
            omega: s.omega,
            sigma: s.sigma,
            tau: s.tau,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub system: SystemSummary,
    pub stable: bool,
    pub witness: Option<WitnessRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub arrangement: String,
    pub n1: u32,
    pub n2: u32,
    pub l1: u32,
    pub l2: u32,
    pub k: String,
    pub energy: f64,
}

impl SpectrumRow {
    fn of(e: &SpectrumEntry, spectrum: &Spectrum<f64>) -> Self {
        Self {
            arrangement: spectrum.arrangements[e.arrangement].0.code(),
            n1: e.n1,
            n2: e.n2,
            l1: e.l1,
            l2: e.l2,
            k: e.k.to_string(),
            energy: e.energy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub system: SystemSummary,
    pub units: Units,
    pub entries: Vec<SpectrumRow>,
    pub infimum: Option<SpectrumRow>,
    /// Lowest entry of each arrangement, in arrangement order.
    pub arrangement_infima: Vec<SpectrumRow>,
}

impl SpectrumReport {
    pub fn new(system: &System, spectrum: &Spectrum<f64>) -> Self {
        let row = |e: &SpectrumEntry| SpectrumRow::of(e, spectrum);
        Self {
            system: SystemSummary::of(system),
            units: Units::Hartree,
            entries: spectrum.entries.iter().map(row).collect(),
            infimum: spectrum.infimum().map(row),
            arrangement_infima: (0..spectrum.arrangements.len())
                .filter_map(|i| spectrum.infimum_for(i).map(row))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRow {
    pub arrangement: String,
    pub n1: u32,
    pub n2: u32,
    pub k: u32,
    pub wp_star: f64,
    pub nu1: f64,
    pub nu2: f64,
    /// Energy times `r0²`.
    pub energy_coefficient: f64,
    pub r0: Option<f64>,
    pub energy: Option<f64>,
}

impl MatchRow {
    pub fn of(m: &Kappa1Match, arrangement: String) -> Self {
        Self {
            arrangement,
            n1: m.n1,
            n2: m.n2,
            k: m.k,
            wp_star: m.wp_star,
            nu1: m.nu1,
            nu2: m.nu2,
            energy_coefficient: m.energy_coefficient,
            r0: m.r0,
            energy: m.energy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub system: SystemSummary,
    pub units: Units,
    pub matches: Vec<MatchRow>,
    pub infimum: Option<MatchRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: u32,
    pub wp: f64,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// 1 when both branches are admissible.
    pub feasible: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub system: SystemSummary,
    pub units: Units,
    pub k: u32,
    pub sign_changes: usize,
    pub samples: Vec<ScanRow>,
}

impl ScanReport {
    pub fn new(system: &System, curve: &ScanCurve) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        Self {
            system: SystemSummary::of(system),
            units: Units::Hartree,
            k: curve.k,
            sign_changes: curve.sign_changes(),
            samples: curve
                .samples
                .iter()
                .map(|s| ScanRow {
                    k: curve.k,
                    wp: s.wp,
                    lhs: finite(s.lhs),
                    rhs: finite(s.rhs),
                    feasible: u8::from(s.feasible),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub system: SystemSummary,
    pub units: Units,
    pub reference: f64,
    pub e0: f64,
    pub e1: f64,
    pub total: f64,
    pub r0: f64,
    pub matched: MatchRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Stability(StabilityReport),
    Spectrum(SpectrumReport),
    Matches(MatchReport),
    Scan(ScanReport),
    Calibration(CalibrationReport),
}

fn scale_opt(x: &mut Option<f64>, f: f64) {
    if let Some(v) = x {
        *v *= f;
    }
}

impl MatchRow {
    fn scale(&mut self, f: f64) {
        self.energy_coefficient *= f;
        scale_opt(&mut self.energy, f);
    }
}

impl Report {
    /// Re-expresses every energy in `units`. Reports are built in Hartree.
    pub fn in_units(mut self, units: Units) -> Self {
        let f = units.factor();
        match &mut self {
            Report::Stability(_) => return self,
            Report::Spectrum(r) => {
                r.units = units;
                let rows = r.entries.iter_mut().chain(r.infimum.iter_mut()).chain(r.arrangement_infima.iter_mut());
                rows.for_each(|row| row.energy *= f);
            }
            Report::Matches(r) => {
                r.units = units;
                r.matches.iter_mut().chain(r.infimum.iter_mut()).for_each(|m| m.scale(f));
            }
            Report::Scan(r) => {
                r.units = units;
                for s in &mut r.samples {
                    scale_opt(&mut s.lhs, f);
                    scale_opt(&mut s.rhs, f);
                }
            }
            Report::Calibration(r) => {
                r.units = units;
                r.reference *= f;
                r.e0 *= f;
                r.e1 *= f;
                r.total *= f;
                r.matched.scale(f);
            }
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => writeln!(out, "{}", self.to_json())?,
            Format::Csv => self.write_csv(out)?,
            Format::Table => self.write_table(out)?,
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        match self {
            Report::Stability(r) => {
                w.write_record(["label", "stable", "arrangement", "k", "wp", "ck", "omega", "sigma", "tau"])?;
                let mut rec = vec![r.system.label.clone(), r.stable.to_string()];
                match &r.witness {
                    Some(x) => rec.extend([
                        x.arrangement.clone(),
                        x.k.clone(),
                        x.wp.to_string(),
                        x.ck.to_string(),
                        x.omega.to_string(),
                        x.sigma.to_string(),
                        x.tau.to_string(),
                    ]),
                    None => rec.extend(std::iter::repeat_n(String::new(), 7)),
                }
                w.write_record(&rec)?;
            }
            Report::Spectrum(r) => r.entries.iter().try_for_each(|row| w.serialize(row))?,
            Report::Matches(r) => {
                if r.matches.is_empty() {
                    w.write_record(MATCH_COLUMNS)?;
                }
                r.matches.iter().try_for_each(|row| w.serialize(row))?
            }
            Report::Scan(r) => {
                if r.samples.is_empty() {
                    w.write_record(["k", "wp", "lhs", "rhs", "feasible"])?;
                }
                r.samples.iter().try_for_each(|row| w.serialize(row))?
            }
            Report::Calibration(r) => {
                w.write_record(["reference", "e0", "e1", "total", "r0", "k", "wp_star", "energy_coefficient"])?;
                w.write_record([r.reference, r.e0, r.e1, r.total, r.r0].iter().map(f64::to_string).chain([
                    r.matched.k.to_string(),
                    r.matched.wp_star.to_string(),
                    r.matched.energy_coefficient.to_string(),
                ]))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    fn write_table(&self, out: &mut dyn Write) -> Result<(), CliError> {
        match self {
            Report::Stability(r) => {
                header(out, &r.system)?;
                match &r.witness {
                    Some(x) => {
                        writeln!(out, "stable: yes (arrangement {}, charges {:?})", x.arrangement, x.charges)?;
                        writeln!(out, "k = {}, wp = {:.6}, c_k = {:.6}", x.k, x.wp, x.ck)?;
                        writeln!(out, "omega = {:.6}, sigma = {:.6}, tau = {:.6}", x.omega, x.sigma, x.tau)?;
                    }
                    None => writeln!(out, "stable: no (no arrangement admits a feasible triangle)")?,
                }
            }
            Report::Spectrum(r) => {
                header(out, &r.system)?;
                writeln!(out, "{:>5} {:>3} {:>3} {:>5} {:>16}", "arr", "n1", "n2", "k", format!("E [{}]", r.units.label()))?;
                for e in &r.entries {
                    writeln!(out, "{:>5} {:>3} {:>3} {:>5} {:>16.6}", e.arrangement, e.n1, e.n2, e.k, e.energy)?;
                }
                if r.arrangement_infima.len() > 1 {
                    for e in &r.arrangement_infima {
                        writeln!(out, "lowest for {}: {:.6} {}", e.arrangement, e.energy, r.units.label())?;
                    }
                }
                if let Some(e) = &r.infimum {
                    writeln!(
                        out,
                        "infimum: {:.6} {} (arrangement {}, n1 = {}, n2 = {}, k = {})",
                        e.energy,
                        r.units.label(),
                        e.arrangement,
                        e.n1,
                        e.n2,
                        e.k
                    )?;
                }
            }
            Report::Matches(r) => {
                header(out, &r.system)?;
                if r.matches.is_empty() {
                    writeln!(out, "no κ=1 contribution: no admissible solution of the matching condition")?;
                    return Ok(());
                }
                let unit = format!("{}·bohr²", r.units.label());
                writeln!(out, "{:>5} {:>3} {:>3} {:>3} {:>10} {:>10} {:>10} {:>16}", "arr", "n1", "n2", "k", "wp*", "nu1", "nu2", format!("E·r0² [{unit}]"))?;
                for m in &r.matches {
                    writeln!(
                        out,
                        "{:>5} {:>3} {:>3} {:>3} {:>10.6} {:>10.6} {:>10.6} {:>16.6}",
                        m.arrangement, m.n1, m.n2, m.k, m.wp_star, m.nu1, m.nu2, m.energy_coefficient
                    )?;
                }
                if let Some(m) = &r.infimum {
                    writeln!(out, "infimum: {:.6}/r0² {} (k = {})", m.energy_coefficient, r.units.label(), m.k)?;
                    if let (Some(r0), Some(e)) = (m.r0, m.energy) {
                        writeln!(out, "at r0 = {r0:.6}: {e:.6} {}", r.units.label())?;
                    }
                }
            }
            Report::Scan(r) => {
                header(out, &r.system)?;
                let unit = format!("{}·bohr²", r.units.label());
                writeln!(out, "k = {}, sign changes: {}", r.k, r.sign_changes)?;
                writeln!(out, "{:>12} {:>16} {:>16} {:>8}", "wp", format!("lhs [{unit}]"), format!("rhs [{unit}]"), "feasible")?;
                let cell = |x: Option<f64>| x.map_or_else(|| "-".to_owned(), |v| format!("{v:.6}"));
                for s in &r.samples {
                    writeln!(out, "{:>12.6} {:>16} {:>16} {:>8}", s.wp, cell(s.lhs), cell(s.rhs), s.feasible)?;
                }
            }
            Report::Calibration(r) => {
                header(out, &r.system)?;
                let u = r.units.label();
                writeln!(out, "reference: {:.6} {u}", r.reference)?;
                writeln!(out, "E0 (κ=0): {:.6} {u}", r.e0)?;
                writeln!(out, "E1 (κ=1): {:.6}/r0² {u} (k = {}, wp* = {:.6})", r.matched.energy_coefficient, r.matched.k, r.matched.wp_star)?;
                writeln!(out, "r0: {:.6} bohr", r.r0)?;
                writeln!(out, "E0 + E1: {:.6} {u}", r.total)?;
            }
        }
        Ok(())
    }
}

const MATCH_COLUMNS: [&str; 10] =
    ["arrangement", "n1", "n2", "k", "wp_star", "nu1", "nu2", "energy_coefficient", "r0", "energy"];

fn header(out: &mut dyn Write, s: &SystemSummary) -> std::io::Result<()> {
    writeln!(out, "system: {} (charges {:?}, masses {:?})", s.label, s.charges, s.masses)
}

use std::fs;
use std::path::Path;

use qcarnot::{verify_energy_identity_with_budget, CarnotSpec64, Cycle64, CycleReport64, ExpansionRatio, TruncationReport64};

use crate::error::CliError;
use crate::format::{g17, report_csv, samples_csv, SWEEP_HEADER};
use crate::specfile::{parse_spec, SpecFile};

pub const DEFAULT_MAX_TERMS: u64 = qcarnot::DEFAULT_TERM_BUDGET;

pub fn load_spec(path: &Path) -> Result<SpecFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| match e {
        CliError::Parse { line, message } => CliError::Input(format!("{}:{line}: {message}", path.display())),
        CliError::Validation { line: Some(line), message } => CliError::Input(format!("{}:{line}: {message}", path.display())),
        CliError::Validation { line: None, message } => CliError::Input(format!("{}: {message}", path.display())),
        other => other,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}", dir.display()), e))
}

pub struct SimulateOutput {
    pub report: CycleReport64,
    pub report_csv: String,
    pub identity: Option<TruncationReport64>,
}

/// Runs one cycle and writes `samples.csv` and `report.csv` into `out`.
pub fn simulate(spec: &SpecFile, out: &Path) -> Result<SimulateOutput, CliError> {
    let cycle = Cycle64::build(spec.carnot_spec()?)?;
    let report = cycle.evaluate()?;
    let samples = cycle.sample()?;
    let identity = match spec.sudden {
        Some(s) => Some(verify_identity(s.n, s.alpha, s.tol, DEFAULT_MAX_TERMS)?),
        None => None,
    };
    let report_text = report_csv(&report);
    prepare_dir(out)?;
    write_file(out, "samples.csv", &samples_csv(&samples))?;
    write_file(out, "report.csv", &report_text)?;
    Ok(SimulateOutput { report, report_csv: report_text, identity })
}

pub fn verify_identity(n: u32, alpha: f64, tol: f64, max_terms: u64) -> Result<TruncationReport64, CliError> {
    if n < 1 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(CliError::Input(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(CliError::Input(format!("tol must lie in (0, 1e-4], got {tol}")));
    }
    if max_terms == 0 {
        return Err(CliError::Input("max-terms must be positive".into()));
    }
    let ratio = ExpansionRatio::expanding(alpha)?;
    verify_energy_identity_with_budget(n, ratio, tol, max_terms).map_err(|e| match e {
        qcarnot::Error::IdentityNotCertified { .. } => CliError::Verification(e.to_string()),
        other => CliError::Numerical(other),
    })
}

pub fn identity_lines(r: &TruncationReport64) -> String {
    format!("achieved_sum={}\nterms_used={}\ntail_bound={}\n", g17(r.achieved_sum), r.terms_used, g17(r.tail_bound))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub l3: f64,
    pub work: f64,
    pub heat_in: f64,
    pub eta: f64,
    pub eta_closed_form: f64,
}

/// Evaluates the cycle at `steps` evenly spaced `L3` values and writes the table to `out`.
pub fn sweep(spec: &SpecFile, l3_from: f64, l3_to: f64, steps: usize, out: &Path) -> Result<Vec<SweepRow>, CliError> {
    if steps < 2 {
        return Err(CliError::Input(format!("steps must be at least 2, got {steps}")));
    }
    let base = spec.carnot_spec()?;
    let floor = f64::from(base.top_level) * base.l1;
    for (name, v) in [("l3-from", l3_from), ("l3-to", l3_to)] {
        if !v.is_finite() || v <= floor {
            return Err(CliError::Input(format!("{name} must exceed top_level·L1 = {floor}, got {v}")));
        }
    }
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let l3 = if i == steps - 1 { l3_to } else { l3_from + t * (l3_to - l3_from) };
        let r = Cycle64::build(CarnotSpec64 { l3, ..base })?.evaluate()?;
        rows.push(SweepRow { l3, work: r.work, heat_in: r.heat_in, eta: r.eta, eta_closed_form: r.eta_closed_form });
    }
    let mut text = format!("{SWEEP_HEADER}\n");
    for r in &rows {
        text.push_str(&format!("{},{},{},{},{}\n", g17(r.l3), g17(r.work), g17(r.heat_in), g17(r.eta), g17(r.eta_closed_form)));
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        prepare_dir(parent)?;
    }
    fs::write(out, text).map_err(|e| CliError::io(format!("cannot write {}", out.display()), e))?;
    Ok(rows)
}

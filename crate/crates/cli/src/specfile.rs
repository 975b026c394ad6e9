//! Sectioned `key = value` cycle-spec files.
//!
//! ```text
//! # two-level engine
//! [well]
//! hbar = 1
//! mass = 1
//!
//! [cycle]
//! type = carnot
//! top_level = 2
//! L1 = 1.0
//! L3 = 4.0
//! samples_per_stroke = 256
//!
//! [sudden]
//! n = 1
//! alpha = 2
//! tol = 1e-6
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use qcarnot::{CarnotSpec64, WellParams64};

use crate::error::CliError;

pub const DEFAULT_SAMPLES_PER_STROKE: usize = 256;
pub const DEFAULT_SUDDEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSection {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for WellSection {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleType {
    Carnot,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSection {
    pub kind: CycleType,
    pub top_level: u32,
    pub l1: f64,
    pub l3: f64,
    pub samples_per_stroke: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuddenSection {
    pub n: u32,
    pub alpha: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFile {
    pub well: WellSection,
    pub cycle: CycleSection,
    pub sudden: Option<SuddenSection>,
}

impl SpecFile {
    pub fn carnot_spec(&self) -> Result<CarnotSpec64, CliError> {
        let params = WellParams64::new(self.well.hbar, self.well.mass).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(CarnotSpec64 {
            top_level: self.cycle.top_level,
            l1: self.cycle.l1,
            l3: self.cycle.l3,
            params,
            samples_per_stroke: self.cycle.samples_per_stroke,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Well,
    Cycle,
    Sudden,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Well => "well",
            Section::Cycle => "cycle",
            Section::Sudden => "sudden",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Well => &["hbar", "mass"],
            Section::Cycle => &["type", "top_level", "L1", "L3", "samples_per_stroke"],
            Section::Sudden => &["n", "alpha", "tol"],
        }
    }
}

#[derive(Debug)]
struct Entry<'a> {
    value: &'a str,
    line: usize,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { line, message: message.into() }
}

fn invalid(line: Option<usize>, message: impl Into<String>) -> CliError {
    CliError::Validation { line, message: message.into() }
}

pub fn parse_spec(text: &str) -> Result<SpecFile, CliError> {
    let mut entries: HashMap<(Section, &str), Entry<'_>> = HashMap::new();
    let mut headers: HashMap<Section, usize> = HashMap::new();
    let mut current: Option<Section> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_error(line, format!("malformed section header `{content}`")))?
                .trim();
            let section = match name {
                "well" => Section::Well,
                "cycle" => Section::Cycle,
                "sudden" => Section::Sudden,
                other => return Err(parse_error(line, format!("unknown section `[{other}]`"))),
            };
            if let Some(first) = headers.insert(section, line) {
                return Err(parse_error(line, format!("duplicate section `[{name}]` (lines {first} and {line})")));
            }
            current = Some(section);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_error(line, "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(parse_error(line, format!("missing value for key `{key}`")));
        }
        let section = current.ok_or_else(|| parse_error(line, format!("key `{key}` appears before any section header")))?;
        if !section.keys().contains(&key) {
            return Err(parse_error(line, format!("unknown key `{key}` in section [{}]", section.name())));
        }
        if let Some(prev) = entries.get(&(section, key)) {
            return Err(parse_error(line, format!("duplicate key `{key}` (lines {} and {line})", prev.line)));
        }
        entries.insert((section, key), Entry { value, line });
    }

    let lookup = |section: Section, key: &'static str| entries.get(&(section, key));

    let real = |section: Section, key: &'static str, default: Option<f64>| -> Result<(f64, Option<usize>), CliError> {
        match lookup(section, key) {
            Some(e) => {
                let v = parse_real(e.value).ok_or_else(|| parse_error(e.line, format!("`{key}` expects a number, found `{}`", e.value)))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(invalid(Some(e.line), format!("`{key}` must be finite and positive, got {}", e.value)));
                }
                Ok((v, Some(e.line)))
            }
            None => default
                .map(|d| (d, None))
                .ok_or_else(|| invalid(headers.get(&section).copied(), format!("missing required key `{key}` in section [{}]", section.name()))),
        }
    };
    let integer = |section: Section, key: &'static str, default: Option<u64>| -> Result<(u64, Option<usize>), CliError> {
        match lookup(section, key) {
            Some(e) => {
                let v: u64 = parse_integer(e.value)
                    .ok_or_else(|| parse_error(e.line, format!("`{key}` expects a bare integer, found `{}`", e.value)))?;
                if v == 0 {
                    return Err(invalid(Some(e.line), format!("`{key}` must be positive")));
                }
                Ok((v, Some(e.line)))
            }
            None => default
                .map(|d| (d, None))
                .ok_or_else(|| invalid(headers.get(&section).copied(), format!("missing required key `{key}` in section [{}]", section.name()))),
        }
    };

    let well = WellSection {
        hbar: real(Section::Well, "hbar", Some(1.0))?.0,
        mass: real(Section::Well, "mass", Some(1.0))?.0,
    };

    if !headers.contains_key(&Section::Cycle) {
        return Err(invalid(None, "missing required section [cycle]"));
    }
    if let Some(e) = lookup(Section::Cycle, "type") {
        if e.value != "carnot" {
            return Err(invalid(Some(e.line), format!("unsupported cycle type `{}` (expected `carnot`)", e.value)));
        }
    }
    let (top_level, top_line) = integer(Section::Cycle, "top_level", None)?;
    let top_level = u32::try_from(top_level).map_err(|_| invalid(top_line, "`top_level` is too large"))?;
    if top_level < 2 {
        return Err(invalid(top_line, format!("`top_level` must be at least 2, got {top_level}")));
    }
    let (l1, _) = real(Section::Cycle, "L1", None)?;
    let (l3, l3_line) = real(Section::Cycle, "L3", None)?;
    let (samples, samples_line) = integer(Section::Cycle, "samples_per_stroke", Some(DEFAULT_SAMPLES_PER_STROKE as u64))?;
    if samples < 2 {
        return Err(invalid(samples_line, "`samples_per_stroke` must be at least 2"));
    }
    let samples_per_stroke = usize::try_from(samples).map_err(|_| invalid(samples_line, "`samples_per_stroke` is too large"))?;
    let cycle = CycleSection { kind: CycleType::Carnot, top_level, l1, l3, samples_per_stroke };
    let spec = SpecFile { well, cycle, sudden: None }.carnot_spec()?;
    if let Err(e) = spec.validate() {
        let message = match e {
            qcarnot::Error::Geometry(m) => m,
            other => other.to_string(),
        };
        return Err(invalid(l3_line, message));
    }

    let sudden = if headers.contains_key(&Section::Sudden) {
        let (n, n_line) = integer(Section::Sudden, "n", None)?;
        let n = u32::try_from(n).map_err(|_| invalid(n_line, "`n` is too large"))?;
        let (alpha, alpha_line) = real(Section::Sudden, "alpha", None)?;
        if alpha <= 1.0 {
            return Err(invalid(alpha_line, format!("alpha must exceed 1, got {alpha}")));
        }
        let (tol, _) = real(Section::Sudden, "tol", Some(DEFAULT_SUDDEN_TOL))?;
        Some(SuddenSection { n, alpha, tol })
    } else {
        None
    };

    Ok(SpecFile { well, cycle, sudden })
}

fn parse_real(s: &str) -> Option<f64> {
    let ok = s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if ok { s.parse().ok() } else { None }
}

fn parse_integer(s: &str) -> Option<u64> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        s.parse().ok()
    } else {
        None
    }
}

/// Canonical text form; `parse_spec(&render_spec(s)) == s`.
pub fn render_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[well]\nhbar = {}\nmass = {}\n", spec.well.hbar, spec.well.mass);
    let _ = writeln!(
        out,
        "[cycle]\ntype = carnot\ntop_level = {}\nL1 = {}\nL3 = {}\nsamples_per_stroke = {}",
        spec.cycle.top_level, spec.cycle.l1, spec.cycle.l3, spec.cycle.samples_per_stroke
    );
    if let Some(s) = spec.sudden {
        let _ = writeln!(out, "\n[sudden]\nn = {}\nalpha = {}\ntol = {}", s.n, s.alpha, s.tol);
    }
    out
}

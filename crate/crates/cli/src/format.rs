use std::fmt::Write as _;

use qcarnot::{CycleReport64, CycleSample64};

pub const SAMPLES_HEADER: &str = "stroke_index,stroke_kind,L,force,energy,entropy,populations";
pub const REPORT_HEADER: &str = "W,Q_H,Q_C,eta,eta_closed_form,quadrature_discrepancy";
pub const SWEEP_HEADER: &str = "L3,W,Q_H,eta,eta_closed_form";

/// C-style `%.17g`: 17 significant digits, trailing zeros dropped.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn samples_csv(samples: &[CycleSample64]) -> String {
    let mut out = String::with_capacity(samples.len() * 96);
    out.push_str(SAMPLES_HEADER);
    out.push('\n');
    for s in samples {
        let p = &s.sample;
        let populations: Vec<String> =
            p.state.populations().iter().map(|&(n, w)| format!("{n}:{}", g17(w))).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.stroke_index,
            p.kind,
            g17(p.length),
            g17(p.force),
            g17(p.energy),
            g17(p.entropy),
            populations.join(";")
        );
    }
    out
}

pub fn report_csv(r: &CycleReport64) -> String {
    format!(
        "{REPORT_HEADER}\n{},{},{},{},{},{}\n",
        g17(r.work),
        g17(r.heat_in),
        g17(r.heat_out),
        g17(r.eta),
        g17(r.eta_closed_form),
        g17(r.quadrature_discrepancy)
    )
}

use std::io::{self, Write};

/// Ten significant digits in the style of C's `%.10g`.
pub fn sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..10).contains(&exp) {
        return format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (9 - exp).max(0) as usize;
    trim(&format!("{v:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One row of the `compare` table.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub n: f64,
    pub mu: f64,
    pub secondary: f64,
    pub empirical_normalized: f64,
    pub deviation: f64,
    pub runtime_ms: u64,
}

pub const CSV_HEADER: &str = "N,mu,secondary,empirical,deviation,runtime_ms";

pub fn write_csv<W: Write>(mut out: W, rows: &[PredictionRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            sig10(r.n),
            sig10(r.mu),
            sig10(r.secondary),
            sig10(r.empirical_normalized),
            sig10(r.deviation),
            r.runtime_ms
        )?;
    }
    out.flush()
}

//! Sweep reports, deterministic CSV emission and pass/fail check lines.
//!
//! Pass/fail is decided only by thresholds declared at the call site (and
//! recorded in the report); floats are printed with 12 significant digits
//! so identical configurations produce byte-identical CSV.

use std::fmt::Write as _;

/// Fixed 12-significant-digit float formatting used in all CSV output.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

/// One sweep: a named table of rows plus an optional fitted slope and a
/// verdict against the declared target.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub stage: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Fitted log-log slope and its standard error, when applicable.
    pub slope: Option<(f64, f64)>,
    /// Human-readable statement of the declared target.
    pub target: String,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl SweepReport {
    pub fn csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let slope = match self.slope {
            Some((s, e)) => format!(" slope={} (±{})", fmt_f64(s), fmt_f64(e)),
            None => String::new(),
        };
        let notes = if self.notes.is_empty() {
            String::new()
        } else {
            format!(" [{}]", self.notes.join("; "))
        };
        format!("{verdict} | {} | {}{slope}{notes}", self.stage, self.target)
    }
}

/// One verification check: what was measured, the declared threshold, and
/// the statement it verifies.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub measured: String,
    pub target: String,
    /// The mathematical statement this check exercises.
    pub anchor: String,
}

impl CheckLine {
    pub fn new(
        name: impl Into<String>,
        pass: bool,
        measured: impl Into<String>,
        target: impl Into<String>,
        anchor: impl Into<String>,
    ) -> Self {
        CheckLine {
            name: name.into(),
            pass,
            measured: measured.into(),
            target: target.into(),
            anchor: anchor.into(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} | {} | measured {} | target {} | checks: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.target,
            self.anchor
        )
    }
}

/// Ratio of the largest to the smallest entry of a positive sequence;
/// `None` when empty or non-positive.
pub fn max_min_ratio(values: &[f64]) -> Option<f64> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &v in values {
        if !(v > 0.0) {
            return None;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo.is_finite() && hi > 0.0 {
        Some(hi / lo)
    } else {
        None
    }
}

/// Strictly decreasing with the last value below `final_frac` of the first.
pub fn strictly_decreasing_to(values: &[f64], final_frac: f64) -> bool {
    if values.len() < 2 {
        return false;
    }
    values.windows(2).all(|w| w[1] < w[0])
        && values[values.len() - 1] < final_frac * values[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting_is_deterministic() {
        let r = SweepReport {
            stage: "demo".into(),
            columns: vec!["epsilon".into(), "sup".into()],
            rows: vec![vec![0.1, 1.0 / 3.0], vec![0.05, 0.25]],
            slope: Some((2.0, 0.01)),
            target: "slope 2 ± 0.15".into(),
            pass: true,
            notes: vec![],
        };
        let a = r.csv();
        let b = r.csv();
        assert_eq!(a, b);
        assert!(a.starts_with("epsilon,sup\n"));
        assert!(a.contains("3.33333333333e-1"));
    }

    #[test]
    fn ratio_and_decrease_helpers() {
        assert_eq!(max_min_ratio(&[1.0, 2.0, 4.0]), Some(4.0));
        assert_eq!(max_min_ratio(&[1.0, 0.0]), None);
        assert!(strictly_decreasing_to(&[1.0, 0.5, 0.05], 0.1));
        assert!(!strictly_decreasing_to(&[1.0, 1.0, 0.05], 0.1));
        assert!(!strictly_decreasing_to(&[1.0, 0.5, 0.2], 0.1));
    }
}

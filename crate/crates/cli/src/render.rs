//! Plain-text rendering helpers.

use std::fmt::Write;

use monogamy::json::format_sig17;
use monogamy::IdentityReport;

/// Nearest `p/q` with `q <= 64` when `value` is within `1e-9` of it.
pub fn small_fraction(value: f64) -> Option<String> {
    for q in 1..=64i64 {
        let p = (value * q as f64).round();
        if (value - p / q as f64).abs() <= 1e-9 {
            let p = p as i64;
            return Some(if q == 1 { p.to_string() } else { format!("{p}/{q}") });
        }
    }
    None
}

/// Full-precision number followed by its small fraction, if any.
pub fn number(value: f64) -> String {
    match small_fraction(value) {
        Some(frac) => format!("{:<22} ({frac})", format_sig17(value)),
        None => format_sig17(value),
    }
}

pub fn identity_line(out: &mut String, r: &IdentityReport) {
    let mut label = r.identity.to_string();
    if let Some(k) = r.context.qubit {
        let _ = write!(label, " k={k}");
    }
    if let Some([a, b]) = r.context.pair {
        let _ = write!(label, " pair={{{a},{b}}}");
    }
    let status = if r.passed { "PASS" } else { "FAIL" };
    let _ = write!(
        out,
        "  {status}  {label:<32} lhs={:<22} rhs={:<22} residual={:+.3e}",
        format_sig17(r.lhs),
        format_sig17(r.rhs),
        r.residual
    );
    if let Some(m) = r.margin() {
        let _ = write!(out, " margin={m:+.3e}");
    }
    out.push('\n');
}

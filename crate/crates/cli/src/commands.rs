use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

use monogamy::identities::{fuzz as run_fuzz, mixed_reports, parse_selector, FuzzConfig, FuzzSummary};
use monogamy::json::{format_sig17, to_string_pretty};
use monogamy::measures::{all_infos_enumerated, all_infos_fast};
use monogamy::reduction::purity;
use monogamy::{Identity, IdentityReport, PureState, StateReport, Tolerances};

use crate::render::{identity_line, number};
use crate::{source, CliError, Common, Format};

/// Largest register timed with the enumeration path.
const BENCH_ENUMERATION_MAX: usize = 6;

fn tolerances(common: &Common) -> Result<Tolerances, CliError> {
    if common.tol <= 0.0 || !common.tol.is_finite() {
        return Err(CliError::Input(format!(
            "tolerance must be positive, got {}",
            common.tol
        )));
    }
    Ok(Tolerances::uniform(common.tol))
}

fn check_trials(trials: usize) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Input("trials must be at least 1".into()));
    }
    Ok(())
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        write(&mut w).map_err(monogamy::Error::from)?;
        w.flush()?;
    }
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn report(spec: &str, common: &Common) -> Result<bool, CliError> {
    let tol = tolerances(common)?;
    let selected = parse_selector(&common.identity)?;
    let psi = source::pure_state(spec, common.seed)?;
    let report = StateReport::compute(&psi, spec, &selected, tol)?;
    let text = match common.format {
        Format::Json => json_line(&report)?,
        Format::Csv => {
            let mut buf = Vec::new();
            all_infos_fast(&psi)?.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
        Format::Table => report_table(&report),
    };
    emit(common, &text)?;
    Ok(report.passed)
}

fn report_table(r: &StateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state {} ({} qubits)", r.source, r.n);
    let _ = writeln!(out, "\ninformation I_S");
    for e in &r.info.entries {
        let _ = writeln!(out, "  {:<20} {}", e.subset.to_string(), number(e.value));
    }
    let _ = writeln!(out, "\n  I_local    {}", number(r.local));
    let _ = writeln!(out, "  I_nonlocal {}", number(r.nonlocal));
    let _ = writeln!(out, "  total      {}", number(r.total));
    if !r.tau_single.is_empty() {
        let _ = writeln!(out, "\nlinear entropy tau_(S|rest)");
        for t in &r.tau_single {
            let _ = writeln!(out, "  {{{}}}{:<18} {}", t.qubit, "", number(t.tau));
        }
        for t in &r.tau_pair {
            let _ = writeln!(out, "  {{{},{}}}{:<16} {}", t.pair[0], t.pair[1], "", number(t.tau));
        }
    }
    if let Some(t) = r.n_tangle {
        let _ = writeln!(out, "\nn-tangle        {}", number(t));
    }
    if let Some(c) = r.concurrence_sq {
        let _ = writeln!(out, "concurrence^2   {}", number(c));
    }
    if !r.identities.is_empty() {
        let _ = writeln!(out, "\nidentities");
        for rep in &r.identities {
            identity_line(&mut out, rep);
        }
    }
    let _ = writeln!(
        out,
        "\n{}",
        if r.passed {
            "all checks passed"
        } else {
            "SOME CHECKS FAILED"
        }
    );
    out
}

#[derive(Serialize)]
struct FuzzOutput<'a> {
    seed: u64,
    tolerance: f64,
    runs: &'a [FuzzSummary],
    passed: bool,
}

fn witness_path(common: &Common, s: &FuzzSummary) -> PathBuf {
    let dir = common
        .out
        .as_deref()
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_default();
    dir.join(format!("witness-{}-n{}.json", s.identity, s.n))
}

fn render_summaries(summaries: &[FuzzSummary], common: &Common) -> Result<bool, CliError> {
    let passed = summaries.iter().all(|s| s.passed);
    for s in summaries.iter().filter(|s| !s.passed) {
        if let Some(doc) = &s.witness {
            let path = witness_path(common, s);
            std::fs::write(&path, monogamy::json::to_string(doc)?)?;
            eprintln!(
                "{} failed at n={}; witness written to {}",
                s.identity,
                s.n,
                path.display()
            );
        }
    }
    let opt = |v: Option<f64>| v.map(format_sig17).unwrap_or_default();
    let text = match common.format {
        Format::Json => json_line(&FuzzOutput {
            seed: common.seed,
            tolerance: common.tol,
            runs: summaries,
            passed,
        })?,
        Format::Csv => csv_text(|w| {
            w.write_record([
                "identity",
                "n",
                "trials",
                "checks",
                "max_abs_residual",
                "min_margin",
                "worst_seed",
                "passed",
            ])?;
            for s in summaries {
                w.write_record([
                    s.identity.to_string(),
                    s.n.to_string(),
                    s.trials.to_string(),
                    s.checks.to_string(),
                    opt(s.max_abs_residual),
                    opt(s.min_margin),
                    s.worst_seed.to_string(),
                    s.passed.to_string(),
                ])?;
            }
            Ok(())
        })?,
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<6} {:<22} {:>3} {:>7} {:>7} {:>12} {:>12} {:>20}",
                "status", "identity", "n", "trials", "checks", "max|res|", "min margin", "worst seed"
            );
            for s in summaries {
                let fmt = |v: Option<f64>| v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "{:<6} {:<22} {:>3} {:>7} {:>7} {:>12} {:>12} {:>20}",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.identity.to_string(),
                    s.n,
                    s.trials,
                    s.checks,
                    fmt(s.max_abs_residual),
                    fmt(s.min_margin),
                    s.worst_seed
                );
            }
            out
        }
    };
    emit(common, &text)?;
    Ok(passed)
}

pub fn fuzz(sizes: &str, trials: usize, rank: Option<usize>, common: &Common) -> Result<bool, CliError> {
    let tol = tolerances(common)?;
    check_trials(trials)?;
    let sizes = source::sizes(sizes)?;
    let explicit_all = common.identity.trim().eq_ignore_ascii_case("all");
    let selected: Vec<Identity> = parse_selector(&common.identity)?
        .into_iter()
        .filter(|id| !(explicit_all && id.is_mixed()))
        .collect();
    let mut summaries = Vec::new();
    for &n in &sizes {
        for &id in &selected {
            if !id.applies_to(n) {
                continue;
            }
            let cfg = FuzzConfig {
                tol,
                rank,
                ..FuzzConfig::new(id, n, trials, common.seed)
            };
            summaries.push(run_fuzz(&cfg)?);
        }
    }
    if summaries.is_empty() {
        return Err(CliError::Input(format!(
            "none of the selected identities apply to sizes {sizes:?}"
        )));
    }
    render_summaries(&summaries, common)
}

#[derive(Serialize)]
struct MixedOutput<'a> {
    source: &'a str,
    m: usize,
    purity: f64,
    identities: &'a [IdentityReport],
    passed: bool,
}

pub fn mixed_check(
    rho_spec: Option<&str>,
    random: bool,
    m: usize,
    rank: Option<usize>,
    trials: usize,
    common: &Common,
) -> Result<bool, CliError> {
    let tol = tolerances(common)?;
    let selected: Vec<Identity> = parse_selector(&common.identity)?
        .into_iter()
        .filter(|id| id.is_mixed())
        .collect();
    if random {
        check_trials(trials)?;
        let mut summaries = Vec::new();
        for &id in &selected {
            if id.applies_to(m) {
                let cfg = FuzzConfig {
                    tol,
                    rank,
                    ..FuzzConfig::new(id, m, trials, common.seed)
                };
                summaries.push(run_fuzz(&cfg)?);
            }
        }
        if summaries.is_empty() {
            return Err(CliError::Input(format!("no mixed-state identity applies to m={m}")));
        }
        return render_summaries(&summaries, common);
    }

    let spec = rho_spec.ok_or_else(|| CliError::Input("give --rho <spec> or --random".into()))?;
    let rho = source::mixed_state(spec, common.seed)?;
    let reports = mixed_reports(&rho, &selected, tol)?;
    if reports.is_empty() {
        return Err(CliError::Input(format!(
            "no selected mixed-state identity applies to {} qubits",
            rho.num_qubits()
        )));
    }
    let passed = reports.iter().all(|r| r.passed);
    let text = match common.format {
        Format::Json => json_line(&MixedOutput {
            source: spec,
            m: rho.num_qubits(),
            purity: purity(&rho),
            identities: &reports,
            passed,
        })?,
        Format::Csv => csv_text(|w| {
            w.write_record(["identity", "lhs", "rhs", "residual", "margin", "passed"])?;
            for r in &reports {
                w.write_record([
                    r.identity.to_string(),
                    format_sig17(r.lhs),
                    format_sig17(r.rhs),
                    format_sig17(r.residual),
                    r.margin().map(format_sig17).unwrap_or_default(),
                    r.passed.to_string(),
                ])?;
            }
            Ok(())
        })?,
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "density matrix {} ({} qubits), purity {}",
                spec,
                rho.num_qubits(),
                number(purity(&rho))
            );
            for r in &reports {
                identity_line(&mut out, r);
            }
            out
        }
    };
    emit(common, &text)?;
    Ok(passed)
}

#[derive(Serialize)]
struct BenchOutput {
    n: usize,
    entries: usize,
    repeats: usize,
    fast_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumeration_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    speedup: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_diff: Option<f64>,
}

fn best_of<T>(repeats: usize, mut f: impl FnMut() -> monogamy::Result<T>) -> Result<(Duration, T), CliError> {
    let mut best: Option<(Duration, T)> = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let value = f()?;
        let elapsed = start.elapsed();
        if best.as_ref().is_none_or(|(d, _)| elapsed < *d) {
            best = Some((elapsed, value));
        }
    }
    Ok(best.expect("at least one repeat"))
}

pub fn bench(n: usize, repeats: usize, common: &Common) -> Result<bool, CliError> {
    let tol = tolerances(common)?;
    let psi = PureState::random(n, common.seed)?;
    let (fast_time, fast) = best_of(repeats, || all_infos_fast(&psi))?;
    let mut out = BenchOutput {
        n,
        entries: fast.len(),
        repeats,
        fast_seconds: fast_time.as_secs_f64(),
        enumeration_seconds: None,
        speedup: None,
        max_abs_diff: None,
    };
    if n <= BENCH_ENUMERATION_MAX {
        let (slow_time, slow) = best_of(repeats, || all_infos_enumerated(&psi))?;
        out.enumeration_seconds = Some(slow_time.as_secs_f64());
        out.speedup = Some(slow_time.as_secs_f64() / fast_time.as_secs_f64().max(1e-12));
        out.max_abs_diff = Some(fast.max_abs_diff(&slow));
    }
    let agrees = out.max_abs_diff.is_none_or(|d| d <= tol.equality);
    let text = match common.format {
        Format::Json => json_line(&out)?,
        Format::Csv => csv_text(|w| {
            w.write_record(["n", "entries", "path", "seconds"])?;
            w.write_record([
                n.to_string(),
                out.entries.to_string(),
                "fast".into(),
                format_sig17(out.fast_seconds),
            ])?;
            if let Some(s) = out.enumeration_seconds {
                w.write_record([
                    n.to_string(),
                    out.entries.to_string(),
                    "enumeration".into(),
                    format_sig17(s),
                ])?;
            }
            Ok(())
        })?,
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "n = {n}, {} subset values, best of {repeats}", out.entries);
            let _ = writeln!(t, "  fast path         {:>12.6} s", out.fast_seconds);
            match (out.enumeration_seconds, out.speedup, out.max_abs_diff) {
                (Some(s), Some(x), Some(d)) => {
                    let _ = writeln!(t, "  enumeration path  {s:>12.6} s");
                    let _ = writeln!(t, "  speedup           {x:>12.1}x");
                    let _ = writeln!(t, "  max |difference|  {d:>12.3e}");
                }
                _ => {
                    let _ = writeln!(t, "  enumeration path  skipped (n > {BENCH_ENUMERATION_MAX})");
                }
            }
            t
        }
    };
    emit(common, &text)?;
    Ok(agrees)
}

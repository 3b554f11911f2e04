//! Command implementations shared by the `w2n` binary and the tests.

pub mod expr;
pub mod render;

use std::path::Path;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{parse_bigrat, BigRat, RatK};
use crate::independence::realization_independence;
use crate::lattice::{central_charge, ell, lambda};
use crate::oracle::{oracle_realization, OracleOptions};
use crate::report::{CheckResult, Report};
use crate::suites;
use crate::tables::{bp_table, w4_table};
use crate::wgen::{Realization, Route};
use crate::wick::{ope, specialize_field, specialize_ope, LaurentOpe, VertexField};

pub use expr::{parse_expression, parse_scalar, Evaluator, FieldExpr, GenName};
pub use render::{render_field, render_ope, render_report, Format};

pub const SUITES: [&str; 7] = ["structure", "screenings", "appendix-bp", "appendix-w4", "duality", "oracle", "all"];

/// Realizations whose low-weight commutant dimensions are asserted.
pub const COMMUTANT_CASES: [(usize, usize); 5] = [(3, 0), (3, 1), (4, 0), (4, 1), (4, 2)];

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub n_max: usize,
    /// Regular orders shown by `ope`; pole orders compared by the oracle.
    pub depth: i64,
    pub fock_cutoff: usize,
    pub jobs: Option<usize>,
    pub format: Format,
    /// Specialized level for an extra pass.
    pub k: Option<BigRat>,
}

impl Default for Options {
    fn default() -> Self {
        Options { n_max: 4, depth: 1, fock_cutoff: 4, jobs: None, format: Format::Text, k: None }
    }
}

/// Settings read from an INI file; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub n_max: Option<usize>,
    pub depth: Option<i64>,
    pub fock_cutoff: Option<usize>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse_key<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| usage(format!("invalid value `{}` for `{}`", v, key)))
}

pub fn parse_config(text: &str) -> Result<FileConfig> {
    let ini = ini::Ini::load_from_str(text).map_err(|e| usage(format!("config: {}", e)))?;
    let mut c = FileConfig::default();
    for (_, props) in ini.iter() {
        for (key, v) in props.iter() {
            match key {
                "n_max" => c.n_max = Some(parse_key(key, v)?),
                "depth" => c.depth = Some(parse_key(key, v)?),
                "fock_cutoff" => c.fock_cutoff = Some(parse_key(key, v)?),
                "jobs" => c.jobs = Some(parse_key(key, v)?),
                "output_format" => c.format = Some(v.trim().parse().map_err(usage)?),
                other => return Err(usage(format!("unknown config key `{}`", other))),
            }
        }
    }
    Ok(c)
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
    parse_config(&text)
}

/// Flags over the file over defaults; `W2N_JOBS` (passed in as `env_jobs`)
/// overrides the worker count from either source.
pub fn resolve_options(file: &FileConfig, flags: &FileConfig, k: Option<&str>, env_jobs: Option<&str>) -> Result<Options> {
    let d = Options::default();
    let mut o = Options {
        n_max: flags.n_max.or(file.n_max).unwrap_or(d.n_max),
        depth: flags.depth.or(file.depth).unwrap_or(d.depth),
        fock_cutoff: flags.fock_cutoff.or(file.fock_cutoff).unwrap_or(d.fock_cutoff),
        jobs: flags.jobs.or(file.jobs),
        format: flags.format.or(file.format).unwrap_or(d.format),
        k: None,
    };
    if let Some(j) = env_jobs.filter(|s| !s.trim().is_empty()) {
        o.jobs = Some(parse_key("W2N_JOBS", j)?);
    }
    if o.jobs == Some(0) {
        return Err(usage("the worker count must be positive"));
    }
    if o.n_max < 2 {
        return Err(usage("n-max must be at least 2"));
    }
    if let Some(k) = k {
        o.k = Some(parse_bigrat(k).map_err(|_| usage(format!("`{}` is not a rational number", k)))?);
    }
    Ok(o)
}

/// A unit of work: checks that are computed together.
type Task = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;

fn task(f: impl Fn() -> Vec<CheckResult> + Send + Sync + 'static) -> Task {
    Box::new(f)
}

fn per_realization(n_max: usize, f: fn(&Realization) -> Vec<CheckResult>) -> Vec<Task> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for m in 0..=n {
            out.push(task(move || match Realization::new(n, m) {
                Ok(r) => f(&r),
                Err(e) => vec![CheckResult::fail(format!("{}[{}]", n, m), "realization", e.to_string())],
            }));
        }
    }
    out
}

fn tasks(name: &str, o: &Options) -> Result<Vec<Task>> {
    let n_max = o.n_max;
    let mut out: Vec<Task> = Vec::new();
    match name {
        "structure" => {
            out.extend(per_realization(n_max, suites::structure));
            for n in 2..=n_max {
                for m in 0..=n {
                    out.push(task(move || suites::factored_vs_recursive(n, m)));
                }
            }
            out.extend(per_realization(n_max, |r| {
                let mut v = suites::primary_vertices(r);
                v.push(suites::footnote_check(r));
                v
            }));
            for n in 2..=n_max {
                out.push(task(move || realization_independence(n)));
            }
        }
        "screenings" => {
            out.extend(per_realization(n_max, suites::first_screenings));
            out.extend(per_realization(n_max, suites::second_screenings));
            for (n, m) in COMMUTANT_CASES.into_iter().filter(|(n, _)| *n <= n_max) {
                out.push(task(move || match Realization::new(n, m) {
                    Ok(r) => suites::commutant_dimensions(&r),
                    Err(e) => vec![CheckResult::fail(format!("commutant/{}[{}]", n, m), "realization", e.to_string())],
                }));
            }
        }
        "appendix-bp" => out.extend((0..=3).map(|m| task(move || bp_table(m)))),
        "appendix-w4" => out.extend((0..=4).map(|m| task(move || w4_table(m)))),
        "duality" => out.push(task(move || suites::identities(n_max))),
        "oracle" => {
            let opts = OracleOptions { depth: o.depth.max(1), cutoff: o.fock_cutoff, ..OracleOptions::default() };
            for n in 2..=n_max.min(3) {
                for m in 0..=n {
                    out.push(task(move || match Realization::new(n, m) {
                        Ok(r) => oracle_realization(&r, &opts),
                        Err(e) => vec![CheckResult::fail(format!("oracle/{}[{}]", n, m), "realization", e.to_string())],
                    }));
                }
            }
        }
        "all" => {
            for s in SUITES.iter().filter(|s| **s != "all") {
                out.extend(tasks(s, o)?);
            }
        }
        other => return Err(usage(format!("unknown suite `{}`; expected one of {}", other, SUITES.join(", ")))),
    }
    Ok(out)
}

/// Checks at a fixed level: the specialized engine output against the
/// closed formulas evaluated at that level.
pub fn specialized_checks(n: usize, m: usize, k0: &BigRat) -> Vec<CheckResult> {
    let tag = format!("specialized/{}[{}]", n, m);
    let res = (|| -> Result<Vec<CheckResult>> {
        let r = Realization::new(n, m)?;
        let rd = &r.rd;
        rd.check_level(k0)?;
        let at = |c: &RatK| -> Result<VertexField> { Ok(VertexField::constant(RatK::constant(c.eval(k0)?))) };
        let mut out = Vec::new();
        let ef = specialize_ope(r.ef()?, k0, rd)?;
        out.push(CheckResult::fields(format!("{}/EF-central", tag), "E F central term at k", &ef.pole(n as i64)?, &at(&lambda(n as i64 - 1, n))?));
        let hh = specialize_ope(&ope(&r.h, &r.h, rd, -1)?, k0, rd)?;
        out.push(CheckResult::fields(format!("{}/HH", tag), "H H at k", &hh.pole(2)?, &at(&ell(n))?));
        let t = r.t()?;
        let tt = specialize_ope(&ope(t, t, rd, -1)?, k0, rd)?;
        out.push(CheckResult::fields(format!("{}/TT", tag), "c_n at k", &tt.pole(4)?, &at(&central_charge(n).scale(&crate::exact::rat(1, 2)))?));
        for (name, f) in [("E", &r.e), ("F", &r.f), ("H", &r.h), ("T", t)] {
            let id = format!("{}/{}", tag, name);
            out.push(CheckResult::from_result(id.clone(), "generator is defined at k", specialize_field(f, k0, rd).map(|_| CheckResult::pass(&id, "generator is defined at k"))));
        }
        Ok(out)
    })();
    res.unwrap_or_else(|e| vec![CheckResult::fail(tag, "specialized level", e.to_string())])
}

/// Runs a suite on a pool of `o.jobs` workers (all cores by default).
/// `progress` sees every check as its task completes; the report keeps
/// the task order, so it does not depend on scheduling.
pub fn run_suite(name: &str, o: &Options, progress: &(dyn Fn(&CheckResult) + Sync)) -> Result<Report> {
    let mut list = tasks(name, o)?;
    if let Some(k0) = &o.k {
        for n in 2..=o.n_max {
            let rd = crate::lattice::RootData::new(n, 0)?;
            rd.check_level(k0).map_err(|e| usage(e.to_string()))?;
        }
        for n in 2..=o.n_max {
            for m in 0..=n {
                let k0 = k0.clone();
                list.push(task(move || specialized_checks(n, m, &k0)));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(o.jobs.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("thread pool: {}", e)))?;
    let start = Instant::now();
    let lock = Mutex::new(());
    let results: Vec<Vec<CheckResult>> = pool.install(|| {
        list.par_iter()
            .map(|t| {
                let cs = t();
                let _g = lock.lock().unwrap_or_else(|p| p.into_inner());
                cs.iter().for_each(progress);
                cs
            })
            .collect()
    });
    let mut report = Report::new(name);
    report.extend(results.into_iter().flatten());
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Generators of `n[m]` by the chosen route: `E`, `F`, `H`, `T` and `W`
/// when `n >= 4`.
pub fn build(n: usize, m: usize, route: Route, fmt: Format) -> Result<String> {
    let r = Realization::with_route(n, m, route)?;
    let mut fields: Vec<(&str, VertexField)> = vec![("E", r.e.clone()), ("F", r.f.clone()), ("H", r.h.clone()), ("T", r.t()?.clone())];
    if n >= 4 {
        fields.push(("W", r.w()?.clone()));
    }
    Ok(match fmt {
        Format::Text => fields.iter().map(|(name, f)| format!("{} = {}\n", name, render::field_text(f))).collect(),
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = fields.iter().map(|(name, f)| (name.to_string(), render::field_json(f))).collect();
            format!("{}\n", serde_json::json!({"n": n, "m": m, "generators": map}))
        }
        Format::Latex => {
            let rows: Vec<String> = fields.iter().map(|(name, f)| format!("{} &= {}", name, render::field_latex(f))).collect();
            format!(
                "\\documentclass{{article}}\n\\usepackage{{amsmath,amssymb}}\n\\begin{{document}}\n\\begin{{align*}}\n{}\n\\end{{align*}}\n\\end{{document}}\n",
                rows.join(" \\\\\n")
            )
        }
    })
}

/// `left(z) right(w)` with poles of order `>= 1 - depth`.
pub fn ope_of(left: &str, right: &str, depth: i64, fallback: (usize, usize)) -> Result<(LaurentOpe, i64, Evaluator)> {
    let (l, r) = (parse_expression(left)?, parse_expression(right)?);
    let mut ev = Evaluator::for_exprs(&[&l, &r], fallback)?;
    let (a, b) = (ev.eval(&l)?, ev.eval(&r)?);
    let min_order = 1 - depth.max(0);
    let gamma = ev.rd().pairing(a.momentum(), b.momentum());
    let top = match gamma.as_integer() {
        Some(g) => -min_order - g,
        None => -min_order,
    };
    let o = ope(&a, &b, ev.rd(), top)?;
    Ok((o, min_order, ev))
}

pub fn ope_command(left: &str, right: &str, depth: i64, fallback: (usize, usize), fmt: Format) -> Result<String> {
    let (o, min_order, _) = ope_of(left, right, depth, fallback)?;
    Ok(render_ope(&o, min_order, fmt))
}

/// An expression, or the expansion `expr(z) right(w)`, at `k = value`.
pub fn specialize_command(value: &str, expr: &str, right: Option<&str>, depth: i64, fallback: (usize, usize), fmt: Format) -> Result<String> {
    let k0 = parse_bigrat(value).map_err(|_| usage(format!("`{}` is not a rational number", value)))?;
    match right {
        Some(r) => {
            let (o, min_order, ev) = ope_of(expr, r, depth, fallback)?;
            Ok(render_ope(&specialize_ope(&o, &k0, ev.rd())?, min_order, fmt))
        }
        None => {
            let e = parse_expression(expr)?;
            let mut ev = Evaluator::for_exprs(&[&e], fallback)?;
            let f = ev.eval(&e)?;
            Ok(render_field(&specialize_field(&f, &k0, ev.rd())?, fmt))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_keys() {
        let c = parse_config("n_max = 3\ndepth=2\nfock_cutoff = 2\njobs=1\noutput_format=json\n").unwrap();
        assert_eq!(c.n_max, Some(3));
        assert_eq!(c.format, Some(Format::Json));
        assert!(parse_config("bogus = 1").is_err());
    }

    #[test]
    fn precedence() {
        let file = FileConfig { n_max: Some(3), jobs: Some(2), ..Default::default() };
        let flags = FileConfig { n_max: Some(2), jobs: Some(5), ..Default::default() };
        let o = resolve_options(&file, &flags, None, Some("7")).unwrap();
        assert_eq!((o.n_max, o.jobs), (2, Some(7)));
        let o = resolve_options(&file, &FileConfig::default(), None, None).unwrap();
        assert_eq!((o.n_max, o.jobs), (3, Some(2)));
        assert!(resolve_options(&file, &flags, None, Some("x")).is_err());
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        assert!(matches!(run_suite("nope", &Options::default(), &|_| {}), Err(Error::Usage(_))));
    }

    #[test]
    fn excluded_level_is_a_usage_error() {
        let o = Options { n_max: 2, k: Some(crate::exact::rat(-2, 1)), ..Options::default() };
        assert!(matches!(run_suite("duality", &o, &|_| {}), Err(Error::Usage(_))));
    }

    #[test]
    fn deterministic_reports() {
        let o = Options { n_max: 3, jobs: Some(3), ..Options::default() };
        let a = render_report(&run_suite("structure", &o, &|_| {}).unwrap(), Format::Json);
        let b = render_report(&run_suite("structure", &Options { jobs: Some(1), ..o }, &|_| {}).unwrap(), Format::Json);
        assert_eq!(a, b);
    }

    #[test]
    fn specialized_pass() {
        let cs = specialized_checks(3, 1, &crate::exact::rat(1, 2));
        assert!(cs.iter().all(|c| c.status == crate::report::Status::Pass), "{:?}", cs);
    }
}

//! The four subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::Serialize;
use whitney_trace::divdiff::{linfty_trace_bracket, n_infty_functional};
use whitney_trace::functionals::{
    constants_table, deboor_functional, trace_report, variational_functional, ConstantsTable, SharpMaximal, TraceOptions,
    TraceReport, VariationalMode,
};
use whitney_trace::jets::{build_whitney_field, jet_functional, JetMode};
use whitney_trace::oracle::natural_spline_p2;
use whitney_trace::suite::{random_suite, rng};
use whitney_trace::{whitney_extend, LocalPolynomial, SampledFunction, Tolerances};

use crate::error::{CliError, CliResult};
use crate::input::read_data;
use crate::report::{fixed, to_json, Exponent, SCHEMA};

pub const MAX_M: usize = 8;

/// Names the TOML file whose fields override [`Tolerances`].
pub const TOLERANCES_ENV: &str = "WHITNEY_TOLERANCES";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub m: usize,
    pub p: f64,
    pub input: PathBuf,
    pub samples: usize,
    /// Padding on each side of the data, in multiples of the span.
    pub pad: f64,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub oracle: bool,
    pub sharp: bool,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        check_m(self.m)?;
        if !(self.p > 1.0) {
            return Err(CliError::Config(format!("p must exceed 1 or be \"inf\", got {}", self.p)));
        }
        if self.samples == 0 {
            return Err(CliError::Config("--samples must be positive".into()));
        }
        if !(self.pad >= 0.0 && self.pad.is_finite()) {
            return Err(CliError::Config(format!("--pad must be a finite non-negative number, got {}", self.pad)));
        }
        Ok(())
    }
}

pub fn check_m(m: usize) -> CliResult<()> {
    if !(1..=MAX_M).contains(&m) {
        return Err(CliError::Config(format!("m must lie in 1..={MAX_M}, got {m}")));
    }
    Ok(())
}

/// `p` as a decimal or `inf`.
pub fn parse_exponent(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let p = match t.as_str() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        _ => t.parse::<f64>().map_err(|_| format!("\"{s}\" is neither a number nor \"inf\""))?,
    };
    if p > 1.0 {
        Ok(p)
    } else {
        Err(format!("p must exceed 1, got {s}"))
    }
}

/// Defaults, overridden by the file named in [`TOLERANCES_ENV`] when set.
pub fn load_tolerances() -> CliResult<Tolerances> {
    match std::env::var_os(TOLERANCES_ENV) {
        None => Ok(Tolerances::default()),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("{TOLERANCES_ENV}={}: {e}", Path::new(&path).display())))?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{TOLERANCES_ENV}: {e}")))
        }
    }
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("standard output", e)),
    }
}

#[derive(Serialize)]
struct ExtendDoc<'a> {
    schema: &'static str,
    command: &'static str,
    m: usize,
    p: Exponent,
    n: usize,
    sample_rows: Option<usize>,
    report: &'a TraceReport,
}

pub fn cmd_extend(cfg: &RunConfig) -> CliResult<()> {
    cfg.validate()?;
    let f = read_data(&cfg.input, &cfg.tolerances)?;
    f.require(cfg.m + 1)?;
    let opts = TraceOptions { sharp: cfg.sharp, oracle: cfg.oracle, jets: true, tolerances: cfg.tolerances };
    let report = trace_report(&f, cfg.m, cfg.p, &opts)?;
    let mut sample_rows = None;
    if let Some(out) = &cfg.out {
        let csv = samples_csv(&f, cfg.m, cfg.samples, cfg.pad)?;
        sample_rows = Some(csv.lines().count() - 1);
        write_text(Some(out), &csv)?;
    }
    let doc = ExtendDoc {
        schema: SCHEMA,
        command: "extend",
        m: cfg.m,
        p: Exponent(cfg.p),
        n: f.len(),
        sample_rows,
        report: &report,
    };
    write_text(cfg.report.as_deref(), &to_json(&doc)?)
}

/// Abscissae for the sample table: `count` equispaced points on the padded
/// hull, merged with the data points.
pub fn sample_grid(points: &[f64], count: usize, pad: f64) -> Vec<f64> {
    let (lo, hi) = (points[0], points[points.len() - 1]);
    let margin = pad * (hi - lo);
    let (a, b) = (lo - margin, hi + margin);
    let mut grid: Vec<f64> = if count == 1 {
        vec![0.5 * (a + b)]
    } else {
        (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
    };
    grid.extend_from_slice(points);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// CSV with columns `x, F, F1, …, Fm`.
pub fn samples_csv(f: &SampledFunction, m: usize, count: usize, pad: f64) -> CliResult<String> {
    let ext = whitney_extend(f, m)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["x".to_string(), "F".to_string()];
    header.extend((1..=m).map(|k| format!("F{k}")));
    let csv_err = |e: csv::Error| CliError::Numerical(format!("cannot write samples: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for x in sample_grid(f.points(), count, pad) {
        let mut row = vec![fixed(x)];
        row.extend((0..=m).map(|k| fixed(ext.extension.eval_derivative(k, x))));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("numbers are ASCII"))
}

#[derive(Serialize)]
struct FunctionalsDoc {
    schema: &'static str,
    command: &'static str,
    m: usize,
    p: Exponent,
    n: usize,
    variational_mode: Option<VariationalMode>,
    n_mp: f64,
    t_mp: Option<f64>,
    sup_exceeds_full: bool,
    /// `max |Δ^m f|` over windows.
    n_infty: f64,
    /// `m!·n_infty`, the lower end of the `p = ∞` bracket.
    n_infty_scaled: f64,
    linfty_bracket: Option<(f64, f64)>,
    sharp_lp: Option<f64>,
    jet_full: Option<f64>,
    jet_value: Option<f64>,
    oracle_seminorm: Option<f64>,
    constants: ConstantsTable,
    constants_used: Tolerances,
}

/// Every discrete functional; the extension itself is built only for the
/// `p = ∞` bracket.
pub fn cmd_functionals(cfg: &RunConfig) -> CliResult<()> {
    cfg.validate()?;
    let (m, p) = (cfg.m, cfg.p);
    let f = read_data(&cfg.input, &cfg.tolerances)?;
    f.require(m + 1)?;
    let n = f.len();
    let n_infty = n_infty_functional(&f, m)?;
    let field = build_whitney_field(&f, m)?;
    let mut doc = FunctionalsDoc {
        schema: SCHEMA,
        command: "functionals",
        m,
        p: Exponent(p),
        n,
        variational_mode: None,
        n_mp: n_infty,
        t_mp: None,
        sup_exceeds_full: false,
        n_infty,
        n_infty_scaled: (1..=m).map(|k| k as f64).product::<f64>() * n_infty,
        linfty_bracket: None,
        sharp_lp: None,
        jet_full: None,
        jet_value: None,
        oracle_seminorm: None,
        constants: constants_table(m)?,
        constants_used: cfg.tolerances,
    };
    if p.is_infinite() {
        doc.linfty_bracket = Some(linfty_trace_bracket(&f, m)?);
    } else {
        let mode = VariationalMode::best_for(n, m);
        let n_mp = variational_functional(&f, m, p, mode)?;
        let t_mp = deboor_functional(&f, m, p)?;
        doc.variational_mode = Some(mode);
        doc.n_mp = n_mp;
        doc.t_mp = Some(t_mp);
        doc.sup_exceeds_full = n_mp - t_mp > 1e-9 * n_mp.max(1.0);
        if cfg.sharp {
            doc.sharp_lp = match SharpMaximal::new(&f, m) {
                Ok(s) => Some(s.lp_norm_exact(p)?),
                Err(whitney_trace::Error::TooLarge(_)) => None,
                Err(e) => return Err(e.into()),
            };
        }
        doc.jet_full = Some(jet_functional(&field, p, JetMode::FullSequence)?);
        doc.jet_value = Some(jet_functional(&field, p, JetMode::ExactSup)?);
        if cfg.oracle && p == 2.0 {
            doc.oracle_seminorm = Some(natural_spline_p2(&f, m)?.seminorm_sq.max(0.0).sqrt());
        }
    }
    write_text(cfg.report.as_deref(), &to_json(&doc)?)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "unknown".to_string(), |x| format!("{x}"))
}

pub fn constants_text(c: &ConstantsTable) -> String {
    let rel = if c.bounds_strict { "<" } else { "<=" };
    format!(
        "m = {m}\n\
         gamma#_m        {g}\n\
         bounds          (pi/2)^(m-1) = {lo:.12} {rel} gamma#_m {rel} (m-1)*9^m = {hi}\n\
         theta_m         {th:.15}\n\
         C_mm            {cmm:.12}\n\
         K(m)            {k}\n\
         theta_m * 2^m   {alt:.12}\n",
        m = c.m,
        g = opt(c.gamma_sharp_exact),
        lo = c.gamma_lower,
        hi = c.gamma_upper,
        th = c.theta,
        cmm = c.c_mm,
        k = opt(c.k_exact),
        alt = c.alternating_reference,
    )
}

#[derive(Serialize)]
struct ConstantsDoc {
    schema: &'static str,
    command: &'static str,
    constants: ConstantsTable,
}

pub fn cmd_constants(m: usize, json: Option<&Path>) -> CliResult<()> {
    check_m(m)?;
    let c = constants_table(m)?;
    write_text(None, &constants_text(&c))?;
    if let Some(path) = json {
        write_text(Some(path), &to_json(&ConstantsDoc { schema: SCHEMA, command: "constants", constants: c })?)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub instances: usize,
    pub n_max: usize,
    /// Test hook: corrupts one gap polynomial of every extension.
    pub perturb_gap: bool,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    m: usize,
    checked: usize,
    failures: usize,
    worst: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Empirical {
    m: usize,
    p: f64,
    /// `max ‖F^{(m)}‖_p / N_{m,p}`.
    sufficiency: f64,
    /// `max N_{m,p} / ‖F^{(m)}‖_p`, at most 2.
    necessity: f64,
    /// `max ‖F^{(m)}‖_2 / oracle`, for `p = 2`.
    whitney_over_oracle: Option<f64>,
}

fn record(checks: &mut Vec<Check>, name: &str, m: usize, values: &[(f64, bool)]) {
    checks.push(Check {
        name: name.to_string(),
        m,
        checked: values.len(),
        failures: values.iter().filter(|v| !v.1).count(),
        worst: values.iter().map(|v| v.0).fold(0.0, f64::max),
    });
}

/// Runs the invariant suite; returns the printed summary and whether every
/// check passed.
pub fn selftest(cfg: &SelftestConfig) -> CliResult<(String, bool)> {
    let tol = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut empirical = Vec::new();
    let ps = [1.5, 2.0, 3.0];
    for m in 1..=4 {
        let suite = random_suite(cfg.seed.wrapping_mul(31).wrapping_add(m as u64), cfg.instances, &[m], cfg.n_max);
        let mut r = rng(cfg.seed ^ (m as u64) << 32);
        let (mut interp, mut smooth, mut bracket, mut sandwich, mut oracle_le) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut necessity = vec![Vec::new(); ps.len()];
        let mut ratios = vec![(0.0f64, 0.0f64, 0.0f64); ps.len()];
        for inst in &suite {
            let f = &inst.f;
            let mut ext = whitney_extend(f, m)?.extension;
            if cfg.perturb_gap {
                let piece = &ext.pieces()[1];
                let bump = LocalPolynomial::new(piece.origin, whitney_trace::Polynomial::constant(1e-3 * (1.0 + piece.jet(0).abs())));
                ext = ext.with_piece(1, piece.add(&bump));
            }
            for (&x, &v) in f.points().iter().zip(f.values()) {
                let err = (ext.eval(x) - v).abs() / v.abs().max(f64::MIN_POSITIVE);
                interp.push((err, err <= tol.continuity_rel));
            }
            let defect = ext.max_joint_defect(m - 1);
            smooth.push((defect, defect <= 10.0 * tol.continuity_rel));
            let (lo, hi) = linfty_trace_bracket(f, m)?;
            bracket.push((lo / hi, lo <= hi * (1.0 + 1e-8)));
            let mode = VariationalMode::best_for(f.len(), m);
            let mut whitney2 = 0.0;
            for (k, &p) in ps.iter().enumerate() {
                let n = variational_functional(f, m, p, mode)?;
                let w = whitney_trace::poly::seminorm_lmp(&ext, m, p)?;
                necessity[k].push((n / w, n <= 2.0 * w * (1.0 + 1e-8)));
                ratios[k].0 = ratios[k].0.max(w / n.max(1e-300));
                ratios[k].1 = ratios[k].1.max(n / w.max(1e-300));
                if p == 2.0 {
                    whitney2 = w;
                }
            }
            let o = natural_spline_p2(f, m)?.seminorm_sq.max(0.0).sqrt();
            oracle_le.push((o / whitney2, o <= whitney2 + 1e-8 * whitney2.max(1.0)));
            ratios[1].2 = ratios[1].2.max(whitney2 / o.max(1e-300));
            let sharp = SharpMaximal::new(f, m)?;
            let (lo, span) = (f.points()[0], f.span());
            for _ in 0..10 {
                let x = r.gen_range(lo - span..lo + 2.0 * span);
                let (s, alt) = (sharp.eval(x), sharp.alternative(x));
                let q = if s > 0.0 { alt / s } else { 1.0 };
                sandwich.push((q, alt >= s * (1.0 - 1e-9) && alt <= 2.0 * s * (1.0 + 1e-9)));
            }
        }
        record(&mut checks, "interpolation", m, &interp);
        record(&mut checks, "smoothness", m, &smooth);
        for (k, &p) in ps.iter().enumerate() {
            record(&mut checks, &format!("necessity p={p}"), m, &necessity[k]);
            empirical.push(Empirical {
                m,
                p,
                sufficiency: ratios[k].0,
                necessity: ratios[k].1,
                whitney_over_oracle: (p == 2.0).then_some(ratios[k].2),
            });
        }
        record(&mut checks, "linfty bracket", m, &bracket);
        record(&mut checks, "oracle <= whitney", m, &oracle_le);
        record(&mut checks, "sharp sandwich", m, &sandwich);
    }

    let mut out = String::new();
    let all_pass = checks.iter().all(|c| c.failures == 0);
    out += &format!("selftest seed {} ({} instances per m, n <= {})\n", cfg.seed, cfg.instances, cfg.n_max);
    for c in &checks {
        out += &format!(
            "{} m={} {:<18} {:>4} checked, {} failed, worst {:.3e}\n",
            if c.failures == 0 { "PASS" } else { "FAIL" },
            c.m,
            c.name,
            c.checked,
            c.failures,
            c.worst
        );
    }
    out += "empirical constants (max over instances)\n";
    out += "  m    p   seminorm/N   N/seminorm   seminorm/oracle\n";
    for e in &empirical {
        out += &format!(
            "  {} {:>4}   {:>10.4}   {:>10.4}   {}\n",
            e.m,
            e.p,
            e.sufficiency,
            e.necessity,
            e.whitney_over_oracle.map_or("-".to_string(), |v| format!("{v:.4}"))
        );
    }
    for m in 1..=4 {
        out += &constants_text(&constants_table(m)?);
    }
    out += &format!("selftest {}\n", if all_pass { "passed" } else { "FAILED" });
    Ok((out, all_pass))
}

pub fn cmd_selftest(cfg: &SelftestConfig) -> CliResult<()> {
    let (text, pass) = selftest(cfg)?;
    write_text(None, &text)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Numerical("selftest: invariant failures (see summary)".into()))
    }
}

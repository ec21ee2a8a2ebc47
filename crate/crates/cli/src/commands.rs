//! One function per subcommand. Each returns a [`Report`] whose `pass`
//! decides the exit code, or a [`CliError`].

use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Value};
use zigzag_core::feynman::{default_shape, mc_period_with_shape, zigzag_graph, Graph};
use zigzag_core::mzv::MzvExpr;
use zigzag_core::periods::{closed_form, f2w_limit_at_zero, is_valid_period, period_from_s, zigzag_word};
use zigzag_core::polylog::{CSeries, LoopAround, SvEvaluator, SvMode};
use zigzag_core::sv::{verify_all, verify_identity, SeriesBundle, IDENTITIES};
use zigzag_core::word::{basis_up_to, w, Word};
use zigzag_core::Error;

use crate::config::RunConfig;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration: exit 2.
    Usage(String),
    /// A computation that should not fail did: exit 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotGroupLike | Error::UnassignedUnknown(_) | Error::CutoffMismatch(..) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Report, CliError>;

/// The numeric precision request, checked against what the core provides.
fn check_prec(cfg: &RunConfig) -> Result<(), CliError> {
    MzvExpr::one().numeric(cfg.prec, None)?;
    Ok(())
}

pub fn parse_word(s: &str) -> Result<Word, CliError> {
    Word::from_str(s).map_err(|e| CliError::Usage(format!("word {s:?}: {e}")))
}

pub fn parse_z(s: &str) -> Result<Complex64, CliError> {
    let z = Complex64::from_str(&s.replace(' ', "")).map_err(|_| CliError::Usage(format!("cannot parse point {s:?}")))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(CliError::Usage(format!("point {s:?} is not finite")));
    }
    Ok(z)
}

pub fn verify(cfg: &RunConfig, identities: &[String], perturb: bool) -> CmdResult {
    let mut bundle = SeriesBundle::build(cfg.weight);
    if perturb {
        // Test hook: adds ζ(3) to S at x1x0x0.
        bundle = bundle.with_perturbed_s(w("100"), &MzvExpr::zeta_odd(3));
    }
    let reports = if identities.is_empty() {
        verify_all(&bundle, true)
    } else {
        identities
            .iter()
            .map(|name| {
                verify_identity(&bundle, name).map_err(|_| {
                    CliError::Usage(format!("unknown identity {name}; known: {}", IDENTITIES.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut text = String::new();
    for r in &reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        text += &format!("{status} {:<22} W={} {:>9.1} ms\n", r.identity, r.max_weight_checked, r.time_ms);
        if !r.pass {
            let words = r.nonzero_words();
            let shown: Vec<&str> = words.iter().take(8).map(String::as_str).collect();
            let more = if words.len() > shown.len() { format!(" (+{} more)", words.len() - shown.len()) } else { String::new() };
            text += &format!("     nonzero at {}{more}\n", shown.join(", "));
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    text += &format!("{} of {} identities hold at W={}\n", reports.iter().filter(|r| r.pass).count(), reports.len(), cfg.weight);
    Ok(Report { json: Value::Array(reports.iter().map(|r| r.to_json()).collect()), text, pass })
}

pub fn periods(cfg: &RunConfig, n_max: usize, limit: bool) -> CmdResult {
    check_prec(cfg)?;
    if n_max < 3 {
        return Err(CliError::Usage(format!("--n-max must be at least 3, got {n_max}")));
    }
    if 2 * n_max - 3 > cfg.weight {
        return Err(Error::CutoffTooSmall { have: cfg.weight, need: 2 * n_max - 3 }.into());
    }
    let bundle = SeriesBundle::build(cfg.weight);
    let ev = if limit { Some(SvEvaluator::new(2 * n_max - 2)?) } else { None };
    let mut rows = Vec::new();
    let mut text = format!("{:>2}  {:>14}  {:>6}  {:>22}  match\n", "n", "coefficient", "zeta", "numeric");
    let mut pass = true;
    for n in 3..=n_max {
        let r = period_from_s(&bundle, n)?;
        let matches = r.symbolic == closed_form(n)?.symbolic && is_valid_period(&r);
        pass &= matches;
        let mut row = r.to_json(matches);
        let coefficient = r.coefficient().map_or("-".to_string(), |q| q.to_string());
        text += &format!(
            "{n:>2}  {coefficient:>14}  z({:>2})  {:>22.*}  {}\n",
            2 * n - 3,
            cfg.prec as usize,
            r.numeric,
            if matches { "yes" } else { "NO" }
        );
        if let Some(ev) = &ev {
            // The regularised value at 0 is the period; compare the limit.
            let (value, change) = f2w_limit_at_zero(ev, zigzag_word(n))?;
            let diff = (value - r.numeric).abs();
            row["limit_numeric"] = json!(value);
            row["limit_diff"] = json!(diff);
            text += &format!("    limit of f_2w at 0: {value:.10} (diff {diff:.1e}, extrapolation change {change:.1e})\n");
        }
        rows.push(row);
    }
    Ok(Report { json: Value::Array(rows), text, pass })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EvalMode {
    /// The multiple polylogarithm `L_w` (principal branch).
    L,
    /// `F_w`, word in B⁰.
    F,
    /// `F̂_w`, word in B¹.
    Fhat,
    /// `f_{2w}` for alternating `w`.
    F2,
}

/// First-order propagation of the `L` error through `rev(conj L) S L`
/// plus a rounding floor.
fn f_error(l: &CSeries, est_l: f64, s_max: f64) -> f64 {
    let lm = l.max_abs();
    2.0 * est_l * lm * s_max + 64.0 * f64::EPSILON * lm * lm * s_max
}

pub fn eval(cfg: &RunConfig, word: Word, z: Complex64, mode: EvalMode) -> CmdResult {
    check_prec(cfg)?;
    let len = match mode {
        EvalMode::F2 => 2 * word.len() + 2,
        _ => word.len(),
    };
    let ev = SvEvaluator::new(len.max(1))?;
    let l = ev.l(z)?;
    let (value, est_error) = match mode {
        EvalMode::L => (l.value.coeff(word)?, l.est_error + 16.0 * f64::EPSILON * l.value.max_abs()),
        EvalMode::F | EvalMode::Fhat => {
            let m = if mode == EvalMode::F { SvMode::F } else { SvMode::Fhat };
            let f = ev.eval_f(word, z, m)?;
            // F of the constant path 1 is S itself.
            let s = ev.f_from_l(&CSeries::one(len.max(1)), m);
            (f, f_error(&l.value, l.est_error, s.max_abs()))
        }
        EvalMode::F2 => {
            let (_, m) = SvEvaluator::f2w_word(word)?;
            let f = ev.eval_f2w_complex(word, z)?;
            let s = ev.f_from_l(&CSeries::one(len), m);
            (f, 2.0 * f_error(&l.value, l.est_error, s.max_abs()) / (2.0 * z.im.abs()))
        }
    };
    let pass = est_error <= cfg.tol;
    let json = json!({
        "word": word.to_string(),
        "z": [z.re, z.im],
        "mode": format!("{mode:?}"),
        "value_re": value.re,
        "value_im": value.im,
        "est_error": est_error,
    });
    let text = format!(
        "{mode:?}[{word}]({z}) = {:.*} {} {:.*}i   (est. error {est_error:.1e}{})\n",
        cfg.prec as usize,
        value.re,
        if value.im < 0.0 { '-' } else { '+' },
        cfg.prec as usize,
        value.im.abs(),
        if pass { "" } else { ", above --tol" }
    );
    Ok(Report { json, text, pass })
}

pub fn transport(cfg: &RunConfig, from: Complex64, around: u8, radius: f64, max_len: usize, fhat: bool) -> CmdResult {
    let around = match around {
        0 => LoopAround::Zero,
        1 => LoopAround::One,
        other => return Err(CliError::Usage(format!("--loop must be 0 or 1, got {other}"))),
    };
    if radius.is_nan() || radius <= 0.0 {
        return Err(CliError::Usage(format!("--radius must be positive, got {radius}")));
    }
    if max_len == 0 {
        return Err(CliError::Usage("--max-len must be positive".into()));
    }
    let mode = if fhat { SvMode::Fhat } else { SvMode::F };
    let ev = SvEvaluator::new(max_len)?;
    let start = ev.l(from)?;
    let words = basis_up_to(mode.class(), max_len);
    let defects = ev.loop_defects(&words, &start, around, radius, mode)?;
    let worst = defects.iter().map(|d| d.relative).fold(0.0, f64::max);
    let pass = worst <= cfg.tol;
    let rows: Vec<Value> = defects
        .iter()
        .map(|d| {
            json!({
                "word": d.word,
                "value_re": d.after.0,
                "value_im": d.after.1,
                "defect": d.absolute,
                "relative": d.relative,
            })
        })
        .collect();
    let json = json!({
        "from": [from.re, from.im],
        "loop": around as u8,
        "radius": radius,
        "mode": format!("{mode:?}"),
        "est_error": start.est_error,
        "max_relative_defect": worst,
        "words": rows,
    });
    let text = format!(
        "{} words of {:?} up to length {max_len}: largest relative change around {} is {worst:.2e} ({})\n",
        defects.len(),
        mode.class(),
        if around == LoopAround::Zero { 0 } else { 1 },
        if pass { "single-valued within --tol" } else { "exceeds --tol" }
    );
    Ok(Report { json, text, pass })
}

pub struct McArgs {
    pub n: Option<usize>,
    pub graph: Option<PathBuf>,
    pub samples: u64,
    pub shape: Option<f64>,
    pub export_graph: Option<PathBuf>,
}

pub fn mc(cfg: &RunConfig, args: &McArgs) -> CmdResult {
    let (graph, exact) = match (&args.graph, args.n) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            (Graph::from_json(&text)?, None)
        }
        (None, Some(n)) => (zigzag_graph(n)?, Some(closed_form(n)?.numeric)),
        _ => return Err(CliError::Usage("give exactly one of --n and --graph".into())),
    };
    if let Some(path) = &args.export_graph {
        let body = serde_json::to_string_pretty(&graph.to_json()).expect("graph serialises");
        std::fs::write(path, body + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    }
    let shape = args.shape.unwrap_or_else(|| default_shape(&graph));
    let r = mc_period_with_shape(&graph, args.samples, cfg.seed, cfg.workers, shape)?;
    let z_score = exact.map(|x| (r.estimate - x) / r.std_error);
    let pass = z_score.is_none_or(|z| z.abs() <= 3.0);
    let json = json!({
        "n": args.n,
        "edges": graph.edges.len(),
        "samples": r.samples,
        "seed": cfg.seed,
        "workers": cfg.workers,
        "shape": r.shape,
        "estimate": r.estimate,
        "std_error": r.std_error,
        "exact": exact,
        "z_score": z_score,
    });
    let mut text = format!("estimate {:.6} +- {:.6} ({} samples, Dirichlet shape {:.4})\n", r.estimate, r.std_error, r.samples, r.shape);
    if let (Some(x), Some(z)) = (exact, z_score) {
        text += &format!("exact    {x:.6}, {z:+.2} sigma{}\n", if pass { "" } else { " (outside 3 sigma)" });
    }
    Ok(Report { json, text, pass })
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncparam::hupoly::{hu, leading_terms, positivity_check, theorem_bound, HuError, LeadingTerm};
use ncparam::hvpoly::hv_real;
use ncparam::oracle::{detq_check, hu_at, pqinvpt_at, sample_points, OracleError, SamplePoint};
use ncparam::polyring::{Poly, Rat, Var};
use ncparam::qmatrix::MatrixError;
use ncparam::ribbon::{trace_faces, RibbonGraph};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ncparam", version, about = "Hyperbolic polynomials of ribbon graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Topology: n, L, F, g, B, N and the faces.
    Analyze(Opts),
    /// The polynomial HU.
    Hu(Opts),
    /// The real part of HV as a quadratic form in the externals.
    Hv(Opts),
    /// Leading terms and their closed forms.
    Leading(Opts),
    /// Runs the oracle and closed-form checks and prints a PASS/FAIL table.
    Verify(Opts),
}

#[derive(Args)]
struct Opts {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Points for the oracle checks.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Values of W for the positivity check.
    #[arg(long, value_delimiter = ',', default_value = "0,1/3,1/2,9/10")]
    omega: Vec<Rat>,
}

/// Exit codes: 1 verify failed, 2 bad input, 3 internal inconsistency.
enum Failure {
    Verify,
    Input(String),
    Internal(String),
}

impl From<HuError> for Failure {
    fn from(e: HuError) -> Self {
        match e {
            HuError::Matrix(MatrixError::NoExternals) | HuError::OmegaRange(_) => Failure::Input(e.to_string()),
            e => Failure::Internal(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Internal(e.to_string())
    }
}

const POSITIVITY_SAMPLES: usize = 50;
const HV_SAMPLES: usize = 10;
const DETQ_MAX_DIM: usize = 8;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = match &cli.cmd {
        Cmd::Analyze(o) => load(o).and_then(|g| analyze(&g, o, &mut out)),
        Cmd::Hu(o) => load(o).and_then(|g| cmd_hu(&g, o, &mut out)),
        Cmd::Hv(o) => load(o).and_then(|g| cmd_hv(&g, o, &mut out)),
        Cmd::Leading(o) => load(o).and_then(|g| cmd_leading(&g, o, &mut out)),
        Cmd::Verify(o) => load(o).and_then(|g| verify(&g, o, &mut out)),
    };
    print!("{out}");
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}

fn load(o: &Opts) -> Result<RibbonGraph, Failure> {
    let src = std::fs::read_to_string(&o.file).map_err(|e| Failure::Input(format!("{}: {e}", o.file.display())))?;
    RibbonGraph::from_json(&src).map_err(|e| Failure::Input(format!("{}: {e}", o.file.display())))
}

fn analyze(g: &RibbonGraph, o: &Opts, out: &mut String) -> Result<(), Failure> {
    let t = trace_faces(g);
    if o.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({"name": g.name(), "topology": t})).unwrap()).unwrap();
        return Ok(());
    }
    writeln!(out, "{}", g).unwrap();
    writeln!(out, "n={} L={} F={} g={} B={} N={}", t.n, t.l, t.f, t.g, t.b, t.ext).unwrap();
    for (k, f) in t.faces.iter().enumerate() {
        let walk: Vec<String> = f
            .corners
            .iter()
            .map(|c| format!("{}.{}", g.vertex_name(c.vertex), c.slot))
            .collect();
        write!(out, "face {k}: {}", walk.join(" ")).unwrap();
        if f.broken {
            write!(out, "  [broken: {}]", f.externals.join(" ")).unwrap();
        }
        writeln!(out).unwrap();
    }
    Ok(())
}

fn cmd_hu(g: &RibbonGraph, o: &Opts, out: &mut String) -> Result<(), Failure> {
    let r = hu(g)?;
    if o.json {
        let v = json!({
            "name": g.name(),
            "topology": r.topology,
            "hu": r.hu.canonical_string(),
            "terms": r.terms.iter().filter(|t| !t.n_i.is_zero()).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
    } else {
        writeln!(out, "{}", r.hu).unwrap();
    }
    Ok(())
}

fn cmd_hv(g: &RibbonGraph, o: &Opts, out: &mut String) -> Result<(), Failure> {
    let q = hv_real(g)?;
    if o.json {
        let mut v = q.to_json();
        v["name"] = json!(g.name());
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
    } else {
        write!(out, "{q}").unwrap();
    }
    Ok(())
}

/// `c (W+1)^b (W-1)^a` when the polynomial has that shape.
fn factored(p: &Poly) -> Option<String> {
    if p.variables().iter().any(|v| *v != Var::Omega) {
        return None;
    }
    let d = p.degree_in(Var::Omega).unwrap_or(0);
    let c = p.coefficients_in(Var::Omega).last()?.as_constant()?;
    let one = Poly::one();
    let a = (0..=d).find(|&a| {
        *p == (&(Poly::omega() - one.clone()).pow(a) * &(Poly::omega() + one.clone()).pow(d - a)).scale(&c)
    })?;
    let mut s = c.to_string();
    for (base, e) in [("(W+1)", d - a), ("(W-1)", a)] {
        match e {
            0 => {}
            1 => s.push_str(base),
            _ => write!(s, "{base}^{e}").unwrap(),
        }
    }
    Some(s)
}

fn set(j: &[u32]) -> String {
    let v: Vec<String> = j.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn cmd_leading(g: &RibbonGraph, o: &Opts, out: &mut String) -> Result<(), Failure> {
    let lts = leading_terms(g)?;
    if let Some(bad) = lts.iter().find(|lt| !lt.agrees()) {
        return Err(Failure::Internal(format!(
            "J0={}: minor {} rosette {} Filk {} closed form {}",
            set(&bad.j0),
            bad.n_i,
            bad.reduced,
            bad.filk,
            bad.closed_form
        )));
    }
    if o.json {
        let v = json!({ "name": g.name(), "leading": lts });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
        return Ok(());
    }
    for lt in &lts {
        let closed = factored(&lt.closed_form).unwrap_or_else(|| lt.closed_form.to_string());
        writeln!(out, "J0={}  nI={}  closed={}  s^{}", set(&lt.j0), lt.n_i, closed, lt.s_power).unwrap();
    }
    Ok(())
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            pass,
            detail: detail.into(),
        }
    }
}

fn verify(g: &RibbonGraph, o: &Opts, out: &mut String) -> Result<(), Failure> {
    let r = hu(g)?;
    let pts = sample_points(o.seed, g.num_lines(), o.samples);
    let mut checks = vec![oracle_check(g, &r.hu, &pts)?];

    let dim = g.num_lines() + g.num_vertices() - 1;
    checks.push(if dim > DETQ_MAX_DIM {
        Check::new("detq", true, format!("skipped, dim(A+B) = {dim} > {DETQ_MAX_DIM}"))
    } else {
        let mut witness = None;
        for p in pts.iter().take(3) {
            if !detq_check(g, p)? {
                witness = Some(p);
                break;
            }
        }
        match witness {
            None => Check::new("detq", true, format!("{} points", pts.len().min(3))),
            Some(p) => Check::new("detq", false, format!("witness {p}")),
        }
    });

    if g.num_externals() > 0 {
        checks.push(hv_check(g, &r.hu, &pts)?);
    }

    let lts = leading_terms(g)?;
    let bad: Vec<&LeadingTerm> = lts.iter().filter(|lt| !lt.agrees()).collect();
    checks.push(Check::new(
        "leading-closed-form",
        !lts.is_empty() && bad.is_empty(),
        match bad.first() {
            Some(lt) => format!("J0={}: minor {} closed form {}", set(&lt.j0), lt.n_i, lt.closed_form),
            None if lts.is_empty() => "no leading sets".to_string(),
            None => format!("{} leading sets", lts.len()),
        },
    ));
    let shape = lts.iter().find(|lt| !lt.top_degree_ok(r.topology.f));
    checks.push(Check::new(
        "leading-degree",
        shape.is_none(),
        match shape {
            Some(lt) => format!("J0={}: nI={}", set(&lt.j0), lt.n_i),
            None => format!("W-degree F-1 = {}", r.topology.f - 1),
        },
    ));
    if r.topology.g > 0 {
        let bad = lts.iter().find(|lt| !lt.filk_preserves());
        checks.push(Check::new(
            "filk-preserves-pfaffian",
            bad.is_none(),
            match bad {
                Some(lt) => format!("J0={}: {} vs {}", set(&lt.j0), lt.reduced, lt.filk),
                None => format!("{} leading sets", lts.len()),
            },
        ));
    }

    let bound = theorem_bound(g, &lts);
    let pos = positivity_check(g, &r.hu, &bound, &o.omega, POSITIVITY_SAMPLES, o.seed)?;
    checks.push(Check::new(
        "positivity",
        pos.passed(),
        match pos.violations.first() {
            Some(v) => format!("witness {}: HU={} bound={}", v.point, v.hu, v.bound),
            None => format!("{} points, HU > 0 and HU >= leading bound", pos.checked),
        },
    ));

    if let Some(exp) = g.expected() {
        if let Some(h) = &exp.hu {
            checks.push(expected_hu(h, &r.hu, &pts)?);
        }
        for el in &exp.leading {
            checks.push(expected_leading(&el.j0, &el.n_i, &lts)?);
        }
    }

    let all = checks.iter().all(|c| c.pass);
    if o.json {
        let rows: Vec<_> = checks
            .iter()
            .map(|c| json!({"check": c.name, "status": if c.pass { "PASS" } else { "FAIL" }, "detail": c.detail}))
            .collect();
        let v = json!({"name": g.name(), "seed": o.seed, "checks": rows, "passed": all});
        writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
    } else {
        writeln!(out, "{} (seed {})", g.name(), o.seed).unwrap();
        for c in &checks {
            writeln!(out, "{}  {:<24} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn oracle_check(g: &RibbonGraph, h: &Poly, pts: &[SamplePoint]) -> Result<Check, Failure> {
    for p in pts {
        let lhs = h.eval(&p.to_point()).map_err(|e| Failure::Internal(e.to_string()))?;
        let rhs = hu_at(g, p)?;
        if lhs != rhs {
            return Ok(Check::new("hu-oracle", false, format!("witness {p}: HU={lhs} det*t={rhs}")));
        }
    }
    Ok(Check::new("hu-oracle", true, format!("{} points", pts.len())))
}

fn hv_check(g: &RibbonGraph, h: &Poly, pts: &[SamplePoint]) -> Result<Check, Failure> {
    let q = hv_real(g)?;
    let (mut used, mut singular) = (0, 0);
    for p in pts {
        if used == HV_SAMPLES {
            break;
        }
        let point = p.to_point();
        let m = match pqinvpt_at(g, p) {
            Err(OracleError::Singular) => {
                singular += 1;
                continue;
            }
            m => m?,
        };
        used += 1;
        let hv = h.eval(&point).map_err(|e| Failure::Internal(e.to_string()))?;
        for a in 0..q.labels.len() {
            for b in 0..q.labels.len() {
                let lhs = q.get(a, b).eval(&point).map_err(|e| Failure::Internal(e.to_string()))?;
                let rhs = &hv * &m.rows[a][b];
                if lhs != rhs {
                    return Ok(Check::new(
                        "hv-oracle",
                        false,
                        format!("witness {p}: entry {}*{} {lhs} vs {rhs}", q.labels[a], q.labels[b]),
                    ));
                }
            }
        }
    }
    let detail = match singular {
        0 => format!("{used} points"),
        k => format!("{used} points, {k} singular skipped"),
    };
    Ok(Check::new("hv-oracle", used > 0, detail))
}

fn expected_hu(src: &str, h: &Poly, pts: &[SamplePoint]) -> Result<Check, Failure> {
    let want: Poly = src.parse().map_err(|e| Failure::Input(format!("expected hu: {e}")))?;
    if want == *h {
        return Ok(Check::new("expected-hu", true, "exact"));
    }
    let mut detail = "differs symbolically".to_string();
    for p in pts {
        let point = p.to_point();
        let (a, b) = (h.eval(&point), want.eval(&point));
        if let (Ok(a), Ok(b)) = (a, b) {
            if a != b {
                detail = format!("witness {p}: HU={a} expected={b}");
                break;
            }
        }
    }
    Ok(Check::new("expected-hu", false, detail))
}

fn expected_leading(j0: &[u32], src: &str, lts: &[LeadingTerm]) -> Result<Check, Failure> {
    let want: Poly = src.parse().map_err(|e| Failure::Input(format!("expected nI: {e}")))?;
    let mut sorted = j0.to_vec();
    sorted.sort();
    let name = "expected-leading";
    Ok(match lts.iter().find(|lt| lt.j0 == sorted) {
        None => Check::new(name, false, format!("J0={} is not a leading set", set(&sorted))),
        Some(lt) if lt.n_i == want || lt.n_i == -&want => {
            Check::new(name, true, format!("J0={}: nI={}", set(&sorted), lt.n_i))
        }
        Some(lt) => Check::new(name, false, format!("J0={}: nI={} expected {}", set(&sorted), lt.n_i, want)),
    })
}


use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ncparam::hupoly::{hu, leading_terms, positivity_check, theorem_bound, LeadingTerm};
use ncparam::hvpoly::hv_real;
use ncparam::oracle::{detq_check, hu_at, pqinvpt_at, sample_points, OracleError};
use ncparam::polyring::{rat, Poly};
use ncparam::ribbon::{admissible_sets, dual_graph, random_orientable, trace_faces, RibbonGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIXTURES: &[&str] = &[
    "tadpole_plus",
    "tadpole_minus",
    "bubble",
    "sunshine",
    "half_eye",
    "eye",
    "broken_bubble",
    "nonplanar_sunshine",
    "twisted_eye",
    "fig12",
];
const SEED: u64 = 42;

fn path(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", &format!("{name}.json")]
        .iter()
        .collect()
}

fn load(name: &str) -> RibbonGraph {
    RibbonGraph::from_json(&std::fs::read_to_string(path(name)).unwrap()).unwrap()
}

type Outcome = Result<String, String>;

fn golden() -> Outcome {
    let mut count = 0;
    for name in FIXTURES {
        let g = load(name);
        let Some(src) = g.expected().and_then(|e| e.hu.as_ref()) else {
            continue;
        };
        let want: Poly = src.parse().map_err(|e| format!("{name}: {e}"))?;
        let start = Instant::now();
        let got = hu(&g).map_err(|e| format!("{name}: {e}"))?.hu;
        let took = start.elapsed();
        if got != want {
            return Err(format!("{name}: HU differs from the printed polynomial"));
        }
        if g.num_lines() <= 6 && took > Duration::from_secs(10) {
            return Err(format!("{name}: took {took:?}"));
        }
        count += 1;
    }
    let bad = load("corrupted_bubble");
    let want: Poly = bad.expected().unwrap().hu.as_ref().unwrap().parse().unwrap();
    if hu(&bad).unwrap().hu == want {
        return Err("corrupted_bubble matches".into());
    }
    Ok(format!("{count} printed polynomials reproduced exactly"))
}

fn find<'a>(lts: &'a [LeadingTerm], j0: &[u32]) -> Option<&'a LeadingTerm> {
    lts.iter().find(|lt| lt.j0 == j0)
}

fn leading_pfaffians() -> Outcome {
    let cases: &[(&str, &[u32], &str)] = &[
        ("eye", &[3, 4, 6], "8*(W+1)*(W-1)^2"),
        ("twisted_eye", &[4], "4*(W-1)"),
        ("twisted_eye", &[6], "4*(W-1)"),
        ("fig12", &[7, 8], "8*(W-1)*(W+1)"),
    ];
    for (name, j0, src) in cases {
        let want: Poly = src.parse().unwrap();
        let lts = leading_terms(&load(name)).map_err(|e| format!("{name}: {e}"))?;
        let lt = find(&lts, j0).ok_or(format!("{name}: {j0:?} is not leading"))?;
        if lt.n_i != want && lt.n_i != -&want {
            return Err(format!("{name} {j0:?}: nI = {}", lt.n_i));
        }
    }
    Ok(format!("{} leading sets match up to sign", cases.len()))
}

fn oracle() -> Outcome {
    let (mut hu_pts, mut hv_pts) = (0, 0);
    for name in FIXTURES {
        let g = load(name);
        let h = hu(&g).map_err(|e| format!("{name}: {e}"))?.hu;
        let pts = sample_points(SEED, g.num_lines(), 20);
        for p in &pts {
            let lhs = h.eval(&p.to_point()).unwrap();
            if lhs != hu_at(&g, p).map_err(|e| format!("{name}: {e}"))? {
                return Err(format!("{name}: HU at {p}"));
            }
            hu_pts += 1;
        }
        let q = hv_real(&g).map_err(|e| format!("{name}: {e}"))?;
        let mut used = 0;
        for p in &pts {
            if used == 10 {
                break;
            }
            let point = p.to_point();
            let m = match pqinvpt_at(&g, p) {
                Err(OracleError::Singular) => continue,
                m => m.map_err(|e| format!("{name}: {e}"))?,
            };
            used += 1;
            let hv = h.eval(&point).unwrap();
            for a in 0..q.labels.len() {
                for b in 0..q.labels.len() {
                    if q.get(a, b).eval(&point).unwrap() != &hv * &m.rows[a][b] {
                        return Err(format!("{name}: HV entry ({a}, {b}) at {p}"));
                    }
                }
            }
            hv_pts += 1;
        }
        if used < 10 {
            return Err(format!("{name}: only {used} non-singular HV points"));
        }
    }
    Ok(format!("{hu_pts} HU points, {hv_pts} HV points"))
}

/// `n_I = ±2^(g+F-1) (W-1)^k (W+1)^(F-1-k)` for some `k`.
fn has_closed_shape(n_i: &Poly, g: usize, f: usize) -> bool {
    let c = Poly::from_int(1 << (g + f - 1));
    let minus: Poly = "W-1".parse().unwrap();
    let plus: Poly = "W+1".parse().unwrap();
    (0..f).any(|k| {
        let p = &(&c * &minus.pow(k as u32)) * &plus.pow((f - 1 - k) as u32);
        *n_i == p || *n_i == -&p
    })
}

fn closed_forms() -> Outcome {
    let mut sets = 0;
    for name in FIXTURES {
        let g = load(name);
        let t = trace_faces(&g);
        for lt in leading_terms(&g).map_err(|e| format!("{name}: {e}"))? {
            if !lt.direct_matches() || !lt.reduced_matches() {
                return Err(format!("{name} {:?}: nI {} closed {}", lt.j0, lt.n_i, lt.closed_form));
            }
            if !has_closed_shape(&lt.n_i, t.g, t.f) {
                return Err(format!("{name} {:?}: nI {}", lt.j0, lt.n_i));
            }
            if t.g > 0 && !lt.filk_preserves() {
                return Err(format!("{name} {:?}: fourth Filk move changed the Pfaffian", lt.j0));
            }
            sets += 1;
        }
    }
    Ok(format!("{sets} leading sets"))
}

fn positivity() -> Outcome {
    let omegas = [rat(0, 1), rat(1, 3), rat(1, 2), rat(9, 10)];
    let mut checked = 0;
    for name in FIXTURES {
        let g = load(name);
        let r = hu(&g).map_err(|e| format!("{name}: {e}"))?;
        let lts = leading_terms(&g).map_err(|e| format!("{name}: {e}"))?;
        if let Some(lt) = lts.iter().find(|lt| !lt.top_degree_ok(r.topology.f)) {
            return Err(format!("{name} {:?}: nI = {}", lt.j0, lt.n_i));
        }
        let bound = theorem_bound(&g, &lts);
        let rep = positivity_check(&g, &r.hu, &bound, &omegas, 50, SEED).map_err(|e| format!("{name}: {e}"))?;
        if let Some(v) = rep.violations.first() {
            return Err(format!("{name} at {}: HU={} bound={}", v.point, v.hu, v.bound));
        }
        checked += rep.checked;
    }
    Ok(format!("{checked} points"))
}

fn euler_and_bounds(g: &RibbonGraph) -> Result<(), String> {
    let t = trace_faces(g);
    if t.n as i64 - t.l as i64 + t.f as i64 != 2 - 2 * t.g as i64 {
        return Err(format!("Euler relation fails on {g}"));
    }
    let sets = admissible_sets(g, &t, &dual_graph(g, &t));
    if !sets.iter().any(|a| a.leading) {
        return Err(format!("no leading set on {g}"));
    }
    match sets.iter().find(|a| a.j0.len() + 1 < t.f || a.j0.len() > t.f - 1 + 2 * t.g) {
        Some(a) => Err(format!("|J0| = {} out of range on {g}", a.j0.len())),
        None => Ok(()),
    }
}

fn structural() -> Outcome {
    let mut detq = 0;
    for name in FIXTURES {
        let g = load(name);
        euler_and_bounds(&g)?;
        if g.num_lines() + g.num_vertices() - 1 > 8 {
            continue;
        }
        for p in sample_points(SEED, g.num_lines(), 2) {
            if !detq_check(&g, &p).map_err(|e| format!("{name}: {e}"))? {
                return Err(format!("{name}: det Q at {p}"));
            }
        }
        detq += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let l = rng.gen_range(n - 1..=(2 * n).min(6));
        euler_and_bounds(&random_orientable(&mut rng, n, l))?;
    }
    Ok(format!("det Q on {detq} fixtures, bounds on {} fixtures and 200 random graphs", FIXTURES.len()))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncparam")).args(args).output().unwrap();
    (out.status.code(), out.stdout)
}

fn determinism(started: Instant) -> Outcome {
    let eye = path("eye");
    let eye = eye.to_str().unwrap();
    let runs: &[&[&str]] = &[
        &["verify", eye, "--seed", "7"],
        &["verify", eye, "--seed", "7", "--json"],
        &["hu", eye, "--json"],
        &["hv", eye],
        &["leading", eye],
    ];
    for args in runs {
        let first = run_cli(args);
        if first.0 != Some(0) || first != run_cli(args) {
            return Err(format!("{args:?} is not reproducible"));
        }
    }
    let bad = path("corrupted_bubble");
    let (code, stdout) = run_cli(&["verify", bad.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&stdout);
    if code != Some(1) || !text.contains("FAIL  expected-hu") || !text.contains("witness") {
        return Err(format!("corrupted fixture: exit {code:?}"));
    }
    let took = started.elapsed();
    if took > Duration::from_secs(120) {
        return Err(format!("suite took {took:?}"));
    }
    Ok(format!("{} commands byte-identical, suite ran in {:.1} s", runs.len(), took.as_secs_f64()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("golden polynomials", golden),
        ("leading-term Pfaffians", leading_pfaffians),
        ("oracle equivalence", oracle),
        ("closed forms", closed_forms),
        ("positivity", positivity),
        ("structural identities", structural),
    ];
    let mut results: Vec<(&str, Outcome)> = criteria.iter().map(|(name, f)| (*name, f())).collect();
    results.push(("determinism", determinism(started)));
    let mut ok = true;
    for (i, (name, r)) in results.iter().enumerate() {
        let (status, detail) = match r {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        ok &= r.is_ok();
        println!("criterion {}: {status}  {name}: {detail}", i + 1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Searches the orientable ribbon structures with given `n`, `L`, `F` for
//! those reproducing a target HU (up to relabeling the lines) or carrying
//! leading sets with a target Pfaffian.
//!
//! ```text
//! cargo run --release --example fixture_search -- --n 2 --lines 2 --faces 2 --broken 1 \
//!     --hu "2*s^2*(t1+t2+t1^2*t2+t1*t2^2)*(W-1)^2"
//! cargo run --release --example fixture_search -- --n 5 --lines 8 --faces 3 \
//!     --random 2000 --leading 2 "8*(W-1)*(W+1)" --label 7,8
//! cargo run --release --example fixture_search -- --skeleton fixtures/eye.json \
//!     --faces 2 --leading 1 "4*(W-1)" --require 4 --require 6
//! ```

use std::collections::{BTreeMap, BTreeSet};

use ncparam::hupoly::{hu, leading_terms};
use ncparam::polyring::{Point, Poly, Rat, Var};
use ncparam::qmatrix::build_b;
use ncparam::ribbon::{random_orientable, trace_faces, End, LineId, RibbonGraph, Slot};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const P: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn modp(r: &Rat) -> u64 {
    let red = |x: &num_bigint::BigInt| {
        let m = x % num_bigint::BigInt::from(P);
        let m = if m < num_bigint::BigInt::zero() { m + P } else { m };
        m.to_u64().unwrap()
    };
    mulm(red(r.numer()), powm(red(r.denom()), P - 2))
}

fn det_mod(mut m: Vec<Vec<u64>>) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = (P - det) % P;
        }
        det = mulm(det, m[c][c]);
        let inv = powm(m[c][c], P - 2);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mulm(m[r][c], inv);
            for k in c..n {
                let x = mulm(f, m[c][k]);
                m[r][k] = (m[r][k] + P - x) % P;
            }
        }
    }
    det
}

/// HU mod p with every `t_l` equal to `t`, as `det(A + B) t^L`.
fn hu_symmetric(g: &RibbonGraph, t: i64, s: i64, w: i64) -> u64 {
    let (b, _) = build_b(g);
    let mut pt = Point::new();
    pt.insert(Var::S, Rat::from_integer(s.into()));
    pt.insert(Var::Omega, Rat::from_integer(w.into()));
    let d = b.dim();
    let tr = Rat::from_integer(t.into());
    let a = modp(&((Rat::one() + &tr * &tr) / (Rat::from_integer(2.into()) * &tr)));
    let mut m = vec![vec![0u64; d]; d];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = modp(&b.get(i, j).eval(&pt).unwrap());
        }
        if i < g.num_lines() {
            row[i] = (row[i] + a) % P;
        }
    }
    mulm(det_mod(m), powm(t as u64, g.num_lines() as u64))
}

fn target_symmetric(p: &Poly, lines: usize, t: i64, s: i64, w: i64) -> u64 {
    let mut pt = Point::new();
    for l in 1..=lines {
        pt.insert(Var::T(l as u32), Rat::from_integer(t.into()));
    }
    pt.insert(Var::S, Rat::from_integer(s.into()));
    pt.insert(Var::Omega, Rat::from_integer(w.into()));
    modp(&p.eval(&pt).unwrap())
}

fn slot_of(code: &str) -> Slot {
    for (suf, end) in [('h', End::Head), ('t', End::Tail)] {
        if let Some(l) = code.strip_suffix(suf) {
            if let Ok(line) = l.parse() {
                return Slot::Line { line, end };
            }
        }
    }
    Slot::Ext(code.to_string())
}

fn build(n: usize, heads: &[(usize, u8)], tails: &[(usize, u8)]) -> Option<RibbonGraph> {
    let mut arr: Vec<Vec<String>> = vec![vec![String::new(); 4]; n];
    for (k, &(v, s)) in heads.iter().enumerate() {
        arr[v][s as usize - 1] = format!("{}h", k + 1);
    }
    for (k, &(v, s)) in tails.iter().enumerate() {
        arr[v][s as usize - 1] = format!("{}t", k + 1);
    }
    let mut e = 0;
    let vertices = arr
        .into_iter()
        .enumerate()
        .map(|(v, slots)| {
            let slots = slots
                .into_iter()
                .map(|c| {
                    if c.is_empty() {
                        e += 1;
                        Slot::Ext(format!("x{e}"))
                    } else {
                        slot_of(&c)
                    }
                })
                .collect();
            (format!("V{v}"), slots)
        })
        .collect();
    RibbonGraph::new("candidate", vertices, "V0").ok()
}

/// Canonical string up to permutations of the non-root vertices, rotations
/// by two slots away from the root, and line relabeling.
fn canonical(g: &RibbonGraph) -> String {
    let n = g.num_vertices();
    let others: Vec<usize> = (0..n).filter(|&v| v != g.root()).collect();
    let mut best: Option<String> = None;
    permute(&others, &mut |perm| {
        let order: Vec<usize> = std::iter::once(g.root()).chain(perm.iter().copied()).collect();
        for rot in 0..1u32 << others.len() {
            let mut relabel: BTreeMap<LineId, usize> = BTreeMap::new();
            let mut s = String::new();
            for (k, &v) in order.iter().enumerate() {
                let shift = if k > 0 && rot >> (k - 1) & 1 == 1 { 2 } else { 0 };
                for i in 0..4u8 {
                    let slot = (i + shift) % 4 + 1;
                    match g.slot(ncparam::ribbon::Corner::new(v, slot)) {
                        Slot::Line { line, end } => {
                            let k = relabel.len() + 1;
                            let id = *relabel.entry(*line).or_insert(k);
                            s.push_str(&format!("{id}{} ", if *end == End::Head { 'h' } else { 't' }));
                        }
                        Slot::Ext(_) => s.push_str("x "),
                    }
                }
                s.push('|');
            }
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    });
    best.unwrap()
}

fn permute<T: Copy>(items: &[T], f: &mut impl FnMut(&[T])) {
    fn go<T: Copy>(items: &mut Vec<T>, k: usize, f: &mut impl FnMut(&[T])) {
        if k == items.len() {
            f(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, f);
            items.swap(k, i);
        }
    }
    go(&mut items.to_vec(), 0, f);
}

fn combos<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out: Vec<Vec<T>> = combos(&items[1..], k - 1)
        .into_iter()
        .map(|mut c| {
            c.insert(0, items[0]);
            c
        })
        .collect();
    out.extend(combos(&items[1..], k));
    out
}

fn arrangements<T: Copy>(items: &[T], k: usize, cur: &mut Vec<T>, used: &mut Vec<bool>, f: &mut impl FnMut(&[T])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in 0..items.len() {
        if !used[i] {
            used[i] = true;
            cur.push(items[i]);
            arrangements(items, k, cur, used, f);
            cur.pop();
            used[i] = false;
        }
    }
}

struct Args {
    n: usize,
    lines: usize,
    faces: usize,
    hu: Option<Poly>,
    leading: Option<(usize, Poly)>,
    label: Vec<LineId>,
    require: Vec<LineId>,
    skeleton: Option<RibbonGraph>,
    limit: usize,
    out: Option<String>,
    random: Option<u64>,
    broken: Option<usize>,
}

/// Prints a hit; the first one is also written to `--out` if given.
fn emit(a: &Args, g: &RibbonGraph, note: &str) {
    println!("{g}{note}");
    if let Some(path) = &a.out {
        if !std::path::Path::new(path).exists() {
            std::fs::write(path, g.to_json()).unwrap();
        }
    }
}

fn parse() -> Args {
    let mut a = Args {
        n: 0,
        lines: 0,
        faces: 0,
        hu: None,
        leading: None,
        label: vec![],
        require: vec![],
        skeleton: None,
        limit: 5,
        out: None,
        random: None,
        broken: None,
    };
    let v: Vec<String> = std::env::args().skip(1).collect();
    let mut i = 0;
    while i < v.len() {
        match v[i].as_str() {
            "--n" => a.n = v[i + 1].parse().unwrap(),
            "--lines" => a.lines = v[i + 1].parse().unwrap(),
            "--faces" => a.faces = v[i + 1].parse().unwrap(),
            "--hu" => a.hu = Some(v[i + 1].parse().unwrap()),
            "--broken" => a.broken = Some(v[i + 1].parse().unwrap()),
            "--random" => a.random = Some(v[i + 1].parse().unwrap()),
            "--out" => a.out = Some(v[i + 1].clone()),
            "--limit" => a.limit = v[i + 1].parse().unwrap(),
            "--label" => a.label = v[i + 1].split(',').map(|x| x.parse().unwrap()).collect(),
            "--require" => a.require.push(v[i + 1].parse().unwrap()),
            "--skeleton" => {
                let g = RibbonGraph::from_json(&std::fs::read_to_string(&v[i + 1]).unwrap()).unwrap();
                a.n = g.num_vertices();
                a.lines = g.num_lines();
                a.skeleton = Some(g);
            }
            "--leading" => {
                a.leading = Some((v[i + 1].parse().unwrap(), v[i + 2].parse().unwrap()));
                i += 1;
            }
            other => panic!("unknown flag {other}"),
        }
        i += 2;
    }
    a
}

fn candidates(a: &Args) -> Vec<RibbonGraph> {
    let n = a.n;
    if let Some(count) = a.random {
        // Seeded samples, for sizes too large to enumerate.
        return (0..count)
            .map(|seed| random_orientable(&mut ChaCha8Rng::seed_from_u64(seed), n, a.lines))
            .filter(|g| trace_faces(g).f == a.faces)
            .collect();
    }
    if let Some(sk) = &a.skeleton {
        // Same line endpoints per vertex, any slots of the right sign.
        let mut out = Vec::new();
        let ends: Vec<(usize, usize)> = sk
            .line_ids()
            .map(|l| (sk.line(l).head.vertex, sk.line(l).tail.vertex))
            .collect();
        let mut heads = Vec::new();
        let mut tails = Vec::new();
        fn go(
            k: usize,
            ends: &[(usize, usize)],
            heads: &mut Vec<(usize, u8)>,
            tails: &mut Vec<(usize, u8)>,
            n: usize,
            out: &mut Vec<RibbonGraph>,
        ) {
            if k == ends.len() {
                if let Some(g) = build(n, heads, tails) {
                    out.push(g);
                }
                return;
            }
            for hs in [1u8, 3] {
                let h = (ends[k].0, hs);
                if heads.contains(&h) {
                    continue;
                }
                for ts in [2u8, 4] {
                    let t = (ends[k].1, ts);
                    if tails.contains(&t) {
                        continue;
                    }
                    heads.push(h);
                    tails.push(t);
                    go(k + 1, ends, heads, tails, n, out);
                    heads.pop();
                    tails.pop();
                }
            }
        }
        go(0, &ends, &mut heads, &mut tails, n, &mut out);
        return out
            .into_iter()
            .filter(|g| trace_faces(g).f == a.faces)
            .collect();
    }
    let plus: Vec<(usize, u8)> = (0..n).flat_map(|v| [(v, 1u8), (v, 3)]).collect();
    let minus: Vec<(usize, u8)> = (0..n).flat_map(|v| [(v, 2u8), (v, 4)]).collect();
    combos(&plus, a.lines)
        .into_par_iter()
        .flat_map_iter(|heads| {
            let mut found = Vec::new();
            arrangements(&minus, a.lines, &mut Vec::new(), &mut vec![false; minus.len()], &mut |tails| {
                if let Some(g) = build(n, &heads, tails) {
                    if trace_faces(&g).f == a.faces {
                        found.push(g);
                    }
                }
            });
            found
        })
        .collect()
}

fn main() {
    let a = parse();
    let all: Vec<RibbonGraph> = candidates(&a)
        .into_iter()
        .filter(|g| a.broken.is_none_or(|b| trace_faces(g).b == b))
        .collect();
    eprintln!("{} structures with F = {}", all.len(), a.faces);

    let filtered: Vec<RibbonGraph> = match &a.hu {
        Some(target) => {
            let pts = [(3, 5, 7), (11, 2, 13)];
            let want: Vec<u64> = pts.iter().map(|&(t, s, w)| target_symmetric(target, a.lines, t, s, w)).collect();
            all.into_par_iter()
                .filter(|g| pts.iter().zip(&want).all(|(&(t, s, w), &v)| hu_symmetric(g, t, s, w) == v))
                .collect()
        }
        None => all,
    };
    let mut seen = BTreeSet::new();
    let reps: Vec<RibbonGraph> = filtered.into_iter().filter(|g| seen.insert(canonical(g))).collect();
    eprintln!("{} classes after the numeric filter", reps.len());

    let mut shown = 0;
    for g in reps {
        if shown >= a.limit {
            break;
        }
        if let Some(target) = &a.hu {
            let h = hu(&g).unwrap().hu;
            let ids: Vec<LineId> = g.line_ids().collect();
            let mut hit = None;
            permute(&ids, &mut |perm| {
                if hit.is_none() && h.rename_lines(|l| perm[l as usize - 1]) == *target {
                    hit = Some(perm.to_vec());
                }
            });
            if let Some(perm) = hit {
                let g2 = g.relabel_lines(|l| perm[l as usize - 1]).unwrap();
                emit(&a, &g2, "");
                for lt in leading_terms(&g2).unwrap() {
                    println!("    J0 {:?}: {}", lt.j0, lt.n_i);
                }
                shown += 1;
            }
        } else if let Some((size, target)) = &a.leading {
            let lts = leading_terms(&g).unwrap();
            let good: Vec<Vec<LineId>> = lts
                .iter()
                .filter(|lt| lt.j0.len() == *size && (lt.n_i == *target || lt.n_i == -target))
                .map(|lt| lt.j0.clone())
                .collect();
            if !a.require.is_empty() {
                if a.require.iter().all(|r| good.iter().any(|j| j == &vec![*r])) {
                    emit(&a, &g, "");
                    shown += 1;
                }
                continue;
            }
            if let Some(j) = good.first() {
                // Move the chosen set onto the requested labels.
                let mut perm: Vec<LineId> = vec![0; g.num_lines()];
                let mut free = (1..=g.num_lines() as LineId).filter(|l| !a.label.contains(l));
                for l in g.line_ids() {
                    perm[l as usize - 1] = match j.iter().position(|x| *x == l) {
                        Some(k) if k < a.label.len() => a.label[k],
                        _ => free.next().unwrap(),
                    };
                }
                let g2 = g.relabel_lines(|l| perm[l as usize - 1]).unwrap();
                emit(&a, &g2, &format!("  J0 -> {:?}", a.label));
                shown += 1;
            }
        }
    }
}

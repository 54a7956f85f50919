//! The real part of the second hyperbolic polynomial, HV^R, as a quadratic
//! form in the external positions and the root hypermomentum.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::hupoly::{line_weight, HuError};
use crate::pfaffian::{PfaffianCache, PfaffianError};
use crate::polyring::{Point, Poly, Rat};
use crate::qmatrix::{build_b, build_p, filk_closed_form, fourth_filk, reduce, PMatrix, PRow};
use crate::ribbon::{dual_graph, trace_faces, LineId, RibbonGraph, RootedTree, Slot, UnionFind};

/// Symmetric matrix of polynomial coefficients indexed by the rows of `P`:
/// `HV^R = sum_{a,b} coeff(a, b) x_a x_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub labels: Vec<PRow>,
    pub coeffs: Vec<Vec<Poly>>,
}

impl QuadForm {
    pub fn get(&self, a: usize, b: usize) -> &Poly {
        &self.coeffs[a][b]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.labels.len()).all(|a| (0..a).all(|b| self.coeffs[a][b] == self.coeffs[b][a]))
    }

    /// `sum_{a,b} coeff(a, b) x_a x_b`; labels missing from `x` count as 0.
    pub fn eval(&self, point: &Point, x: &BTreeMap<String, Rat>) -> Result<Rat, HuError> {
        let xs: Vec<Option<&Rat>> = self.labels.iter().map(|l| x.get(&l.to_string())).collect();
        let mut acc = Rat::from_integer(0.into());
        for (a, xa) in xs.iter().enumerate() {
            for (b, xb) in xs.iter().enumerate() {
                if let (Some(xa), Some(xb)) = (xa, xb) {
                    acc += self.coeffs[a][b].eval(point)? * *xa * *xb;
                }
            }
        }
        Ok(acc)
    }

    /// Upper-triangle coefficients keyed `"a*b"`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for a in 0..self.labels.len() {
            for b in a..self.labels.len() {
                m.insert(
                    format!("{}*{}", self.labels[a], self.labels[b]),
                    self.coeffs[a][b].canonical_string().into(),
                );
            }
        }
        json!({ "coefficients": m })
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for a in 0..self.labels.len() {
            for b in a..self.labels.len() {
                let c = &self.coeffs[a][b];
                if !c.is_zero() {
                    writeln!(f, "{}*{}: {}", self.labels[a], self.labels[b], c)?;
                }
            }
        }
        Ok(())
    }
}

/// One subset `I` of the expansion with its coupling vector
/// `C_a = sum_tau P_{a tau} eps_{I tau} Pf(B minus I, tau)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HvTerm {
    pub i: Vec<LineId>,
    pub couplings: Vec<Poly>,
}

/// Sign attached to the minor that drops `tau` after the `u` indices of `I`.
/// `tau` and the entries of `deleted` are 0-based indices of `B`.
pub fn minor_sign(deleted: &[usize], tau: usize) -> i64 {
    // Position of tau among the indices that survive the deletion of I.
    let below = tau - deleted.iter().filter(|&&i| i < tau).count();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

fn couplings(
    p: &PMatrix,
    b: &crate::qmatrix::SkewPolyMatrix,
    i: &[LineId],
    sign: impl Fn(&[usize], usize) -> i64,
) -> Vec<Poly> {
    let d = b.dim();
    let deleted: Vec<usize> = i.iter().map(|&l| l as usize - 1).collect();
    let mask = crate::hupoly::mask_without_u(d, i);
    let mut cache = PfaffianCache::default();
    let mut minors: BTreeMap<usize, Poly> = BTreeMap::new();
    p.entries
        .iter()
        .map(|row| {
            let mut acc = Poly::zero();
            for (tau, coef) in row.iter().enumerate() {
                if coef.is_zero() || mask >> tau & 1 == 0 {
                    continue;
                }
                let pf = minors
                    .entry(tau)
                    .or_insert_with(|| {
                        let pf = cache.pf(b, mask & !(1u64 << tau));
                        pf.scale(&crate::polyring::int(sign(&deleted, tau)))
                    })
                    .clone();
                acc += coef * &pf;
            }
            acc
        })
        .collect()
}

pub(crate) fn hv_terms_with(
    g: &RibbonGraph,
    sign: impl Fn(&[usize], usize) -> i64 + Sync,
) -> Result<(PMatrix, Vec<HvTerm>), HuError> {
    let p = build_p(g)?;
    let (b, _) = build_b(g);
    let d = b.dim();
    if d > 64 {
        return Err(PfaffianError::TooLarge(d).into());
    }
    let lines: Vec<LineId> = g.line_ids().collect();
    // Only subsets leaving an even-dimensional minor after dropping tau.
    let odd = (d - 1) % 2 == 1;
    let terms = crate::hupoly::subsets_with_parity(&lines, odd)
        .into_par_iter()
        .map(|i| HvTerm {
            couplings: couplings(&p, &b, &i, &sign),
            i,
        })
        .collect();
    Ok((p, terms))
}

pub fn hv_terms(g: &RibbonGraph) -> Result<(PMatrix, Vec<HvTerm>), HuError> {
    hv_terms_with(g, minor_sign)
}

fn assemble(g: &RibbonGraph, p: &PMatrix, terms: &[HvTerm]) -> QuadForm {
    let k = p.rows.len();
    let mut coeffs = vec![vec![Poly::zero(); k]; k];
    for t in terms {
        if t.couplings.iter().all(Poly::is_zero) {
            continue;
        }
        let w = line_weight(g, &t.i);
        for a in 0..k {
            if t.couplings[a].is_zero() {
                continue;
            }
            let wa = &w * &t.couplings[a];
            for b in a..k {
                coeffs[a][b] += &wa * &t.couplings[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            coeffs[a][b] = coeffs[b][a].clone();
        }
    }
    QuadForm {
        labels: p.rows.clone(),
        coeffs,
    }
}

/// `HV^R = sum_I prod_I (1 + t^2)/2 prod_rest t (sum_a x_a C_a)^2`.
pub fn hv_real(g: &RibbonGraph) -> Result<QuadForm, HuError> {
    let (p, terms) = hv_terms(g)?;
    Ok(assemble(g, &p, &terms))
}

/// A line set `J` governing a leading term of HV^R for the external `e`.
/// `G'` is `G` with a dummy line joining `e` to an external leg of the root;
/// `J` is admissible in `G'` with `|J| = F' - 1`, and the dummy line lies in
/// the spanning tree chosen inside the complement. Removing it from that
/// tree leaves a two-tree whose non-root component carries the face `F_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoAdmissibleSet {
    #[serde(rename = "J")]
    pub j: Vec<LineId>,
    #[serde(rename = "dummyTarget")]
    pub dummy_target: String,
    #[serde(rename = "rootLeg")]
    pub root_leg: String,
    /// External legs of `F_J` with their signs `(-1)^(slot+1)`.
    #[serde(rename = "F_J")]
    pub face: Vec<(String, i64)>,
    /// Genus and face count of `G'`.
    pub genus: usize,
    pub faces: usize,
    #[serde(rename = "closedForm", serialize_with = "ser_poly")]
    pub closed_form: Poly,
    /// The vertex of `e` carries two opposite external legs.
    #[serde(rename = "twoPfaffian")]
    pub two_pfaffian: bool,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.canonical_string())
}

impl TwoAdmissibleSet {
    pub fn s_power(&self) -> u32 {
        2 * (self.genus + self.faces - 1) as u32
    }
}

/// Whether vertex `v` has external legs on two opposite slots.
pub fn has_opposite_legs(g: &RibbonGraph, v: usize) -> bool {
    let ext = |k: u8| matches!(g.slot(crate::ribbon::Corner::new(v, k)), Slot::Ext(_));
    (ext(1) && ext(3)) || (ext(2) && ext(4))
}

/// A spanning tree of `g` inside `allowed` that contains `first`.
fn tree_through(g: &RibbonGraph, first: LineId, allowed: &BTreeSet<LineId>) -> Option<RootedTree> {
    let mut uf = UnionFind::new(g.num_vertices());
    let mut set = BTreeSet::new();
    for l in std::iter::once(first).chain(allowed.iter().copied()) {
        let e = g.line(l);
        if uf.union(e.head.vertex, e.tail.vertex) {
            set.insert(l);
        }
    }
    RootedTree::new(g, &set)
}

/// The 2-admissible sets for the external `e`. Empty when `e` sits on the
/// root or the root has no other external leg to anchor the dummy line.
pub fn two_admissible_sets(g: &RibbonGraph, e: &str) -> Result<Vec<TwoAdmissibleSet>, HuError> {
    let Some(&(_, ce)) = g.externals().iter().find(|(l, _)| l == e) else {
        return Ok(Vec::new());
    };
    if ce.vertex == g.root() {
        return Ok(Vec::new());
    }
    let Some((root_leg, _)) = g
        .externals()
        .iter()
        .filter(|(_, c)| c.vertex == g.root())
        .min_by_key(|(_, c)| c.slot)
    else {
        return Ok(Vec::new());
    };
    let gp = g.join_externals(e, root_leg).expect("distinct legs");
    let dummy = g.num_lines() as LineId + 1;
    let topo = trace_faces(&gp);
    let dual = dual_graph(&gp, &topo);
    let lines: Vec<LineId> = g.line_ids().collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut result = Ok(());
    crate::ribbon::combinations(&lines, topo.f - 1, 0, &mut chosen, &mut |set| {
        if result.is_err() || !dual.lines_connect(set.iter().copied()) {
            return;
        }
        let j: BTreeSet<LineId> = set.iter().copied().collect();
        let allowed: BTreeSet<LineId> = lines.iter().copied().filter(|l| !j.contains(l)).collect();
        let Some(tree) = tree_through(&gp, dummy, &allowed) else {
            return;
        };
        let mut uf = UnionFind::new(g.num_vertices());
        for &l in tree.tree_lines.iter().filter(|&&l| l != dummy) {
            let le = g.line(l);
            uf.union(le.head.vertex, le.tail.vertex);
        }
        let side = uf.find(ce.vertex);
        let face = g
            .externals()
            .iter()
            .filter(|(_, c)| uf.find(c.vertex) == side)
            .map(|(l, c)| (l.clone(), c.sign()))
            .collect();
        let closed = reduce(&gp, &j, Some(tree)).and_then(|red| {
            if red.is_planar() {
                Ok(red.closed_form())
            } else {
                Ok(filk_closed_form(&fourth_filk(&red)?.0, &red))
            }
        });
        match closed {
            Ok(closed_form) => out.push(TwoAdmissibleSet {
                j: set.to_vec(),
                dummy_target: e.to_string(),
                root_leg: root_leg.clone(),
                face,
                genus: topo.g,
                faces: topo.f,
                closed_form,
                two_pfaffian: has_opposite_legs(g, ce.vertex),
            }),
            Err(err) => result = Err(HuError::from(err)),
        }
    });
    result?;
    Ok(out)
}

/// One term of the leading bound on HV^R.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTerm {
    #[serde(rename = "J")]
    pub j: Vec<LineId>,
    #[serde(serialize_with = "ser_poly")]
    pub weight: Poly,
    #[serde(rename = "F_J")]
    pub face: Vec<(String, i64)>,
}

/// `sum_J s^(2(g' + F' - 1)) closed^2 prod_I (1 + t^2)/2 prod_J t
/// (sum_{e in F_J} (-1)^e x_e)^2`, one term per distinct `(J, F_J)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingBound {
    pub terms: Vec<BoundTerm>,
}

impl LeadingBound {
    pub fn eval(&self, point: &Point, x: &BTreeMap<String, Rat>) -> Result<Rat, HuError> {
        let mut acc = Rat::from_integer(0.into());
        for t in &self.terms {
            let sum: Rat = t
                .face
                .iter()
                .filter_map(|(l, s)| x.get(l).map(|v| v * Rat::from_integer((*s).into())))
                .sum();
            acc += t.weight.eval(point)? * &sum * &sum;
        }
        Ok(acc)
    }
}

pub fn hv_leading_bound(g: &RibbonGraph) -> Result<LeadingBound, HuError> {
    let mut seen = BTreeSet::new();
    let mut terms = Vec::new();
    for (e, _) in g.externals() {
        for t in two_admissible_sets(g, e)? {
            if !seen.insert((t.j.clone(), t.face.clone())) {
                continue;
            }
            let complement: Vec<LineId> = g.line_ids().filter(|l| !t.j.contains(l)).collect();
            let weight = &(&Poly::s().pow(t.s_power()) * &t.closed_form.pow(2))
                * &line_weight(g, &complement);
            terms.push(BoundTerm {
                j: t.j,
                weight,
                face: t.face,
            });
        }
    }
    Ok(LeadingBound { terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hupoly::hu;
    use crate::oracle::{pqinvpt_at, sample_points};
    use crate::pfaffian::perm_sign;
    use crate::polyring::Var;
    use crate::ribbon::samples::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matches_oracle(g: &RibbonGraph, q: &QuadForm, seed: u64, count: usize) -> bool {
        let h = hu(g).unwrap().hu;
        sample_points(seed, g.num_lines(), count).iter().all(|pt| {
            let p = pt.to_point();
            let m = pqinvpt_at(g, pt).unwrap();
            let hv = h.eval(&p).unwrap();
            (0..q.labels.len()).all(|a| {
                (0..q.labels.len()).all(|b| q.get(a, b).eval(&p).unwrap() == &hv * &m.rows[a][b])
            })
        })
    }

    #[test]
    fn oracle_agreement() {
        for g in [tadpole(), bubble(), nonplanar_sunshine()] {
            let q = hv_real(&g).unwrap();
            assert!(q.is_symmetric());
            assert!(matches_oracle(&g, &q, 17, 4), "{}", g.name());
        }
    }

    #[test]
    fn extraction_permutation_sign_is_equivalent() {
        // Differs from the positional sign by a factor depending on I only,
        // which squares away.
        let g = nonplanar_sunshine();
        let d = build_b(&g).0.dim();
        let paper = |del: &[usize], tau: usize| {
            let set: Vec<usize> = del.iter().map(|i| i + 1).collect();
            perm_sign(&set, tau + 1, d)
        };
        let (p, terms) = hv_terms_with(&g, paper).unwrap();
        let q = assemble(&g, &p, &terms);
        assert!(matches_oracle(&g, &q, 17, 2));
        assert_eq!(q, hv_real(&g).unwrap());
    }

    fn unit_x(q: &QuadForm, f: impl Fn(&str) -> i64) -> BTreeMap<String, Rat> {
        q.labels
            .iter()
            .map(|l| {
                let l = l.to_string();
                let v = Rat::from_integer(f(&l).into());
                (l, v)
            })
            .collect()
    }

    #[test]
    fn bubble_two_admissible_sets() {
        let g = bubble();
        for e in ["x3", "x4"] {
            let sets = two_admissible_sets(&g, e).unwrap();
            assert!(!sets.is_empty());
            let gp = g.join_externals(e, "x1").unwrap();
            let dual = dual_graph(&gp, &trace_faces(&gp));
            for t in &sets {
                // Brute force: J spans the dual of G' and its complement
                // spans G' through the dummy line.
                assert!(dual.lines_connect(t.j.iter().copied()));
                let rest = gp.line_ids().filter(|l| !t.j.contains(l));
                assert!(gp.lines_connect(rest));
                assert_eq!(t.faces, t.j.len() + 1);
                assert_eq!(t.face, vec![("x3".to_string(), 1), ("x4".to_string(), -1)]);
            }
        }
    }

    #[test]
    fn externals_on_the_root_have_no_two_admissible_sets() {
        let g = tadpole();
        assert!(two_admissible_sets(&g, "x1").unwrap().is_empty());
        assert!(two_admissible_sets(&g, "x2").unwrap().is_empty());
        assert!(hv_leading_bound(&g).unwrap().terms.is_empty());
    }

    #[test]
    fn bubble_bound_below_hv() {
        let g = bubble();
        let q = hv_real(&g).unwrap();
        let bound = hv_leading_bound(&g).unwrap();
        assert!(!bound.terms.is_empty());
        let x = unit_x(&q, |l| if l == "x4" { -1 } else { 1 });
        for pt in sample_points(3, g.num_lines(), 10) {
            let mut p = pt.to_point();
            p.insert(Var::Omega, crate::polyring::rat(1, 2));
            let b = bound.eval(&p, &x).unwrap();
            assert!(b > Rat::from_integer(0.into()));
            assert!(b <= q.eval(&p, &x).unwrap());
        }
    }

    #[test]
    fn zero_sum_over_the_face_kills_the_term() {
        let g = bubble();
        let bound = hv_leading_bound(&g).unwrap();
        let q = hv_real(&g).unwrap();
        // F_J = {x3: +, x4: -}, so x3 = x4 cancels.
        let x = unit_x(&q, |_| 1);
        let p = sample_points(4, g.num_lines(), 1)[0].to_point();
        assert_eq!(bound.eval(&p, &x).unwrap(), Rat::from_integer(0.into()));
    }

    #[test]
    fn opposite_legs_do_not_cancel() {
        let g = broken_bubble();
        let v1 = g.vertex_names().iter().position(|v| v == "V1").unwrap();
        assert!(has_opposite_legs(&g, v1));
        assert!(!has_opposite_legs(&bubble(), 1));
        let sets = two_admissible_sets(&g, "x3").unwrap();
        assert!(sets.iter().all(|t| t.two_pfaffian));
        let (p, terms) = hv_terms(&g).unwrap();
        let top = terms.iter().find(|t| t.i.is_empty()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (row, c) in p.rows.iter().zip(&top.couplings) {
            let label = row.to_string();
            if label != "x3" && label != "x4" {
                continue;
            }
            for k in 1..10 {
                let mut pt = Point::new();
                pt.insert(Var::S, crate::oracle::positive(&mut rng));
                pt.insert(Var::Omega, crate::polyring::rat(k, 10));
                assert_ne!(c.eval(&pt).unwrap(), Rat::from_integer(0.into()), "{label}");
            }
        }
    }

    #[test]
    fn no_externals_is_an_error() {
        let h = |l| crate::ribbon::Slot::Line { line: l, end: crate::ribbon::End::Head };
        let t = |l| crate::ribbon::Slot::Line { line: l, end: crate::ribbon::End::Tail };
        let g = RibbonGraph::new(
            "vac",
            vec![("V0".into(), vec![h(1), t(1), h(2), t(2)])],
            "V0",
        )
        .unwrap();
        assert!(hv_real(&g).is_err());
    }
}

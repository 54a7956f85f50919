//! The first hyperbolic polynomial HU by the subset expansion over Pfaffian
//! minors of `B'`, and its leading terms over admissible sets.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::oracle::{positive, unit_interval, SamplePoint};
use crate::pfaffian::{pfaffian, PfaffianCache, PfaffianError};
use crate::polyring::{rat, Poly, PolyError, Rat, Var};
use crate::qmatrix::{build_b, filk_closed_form, fourth_filk, reduce, MatrixError, SkewPolyMatrix};
use crate::ribbon::{
    admissible_sets, dual_graph, trace_faces, LineId, RibbonGraph, TopologyReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HuError {
    #[error("negative s exponent {exp} for I = {i:?}")]
    NegativeExponent { i: Vec<LineId>, exp: i64 },
    #[error("omega = {0} lies outside [0, 1)")]
    OmegaRange(Rat),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One subset `I` of the expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetTerm {
    #[serde(rename = "I")]
    pub i: Vec<LineId>,
    #[serde(rename = "kI")]
    pub k_i: i64,
    #[serde(rename = "nI", serialize_with = "ser_poly")]
    pub n_i: Poly,
    #[serde(skip)]
    pub contribution: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HUResult {
    pub hu: Poly,
    pub terms: Vec<SubsetTerm>,
    pub topology: TopologyReport,
}

fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.canonical_string())
}

/// Subsets of `lines` of the given size parity, in lexicographic order of
/// their sorted elements.
pub(crate) fn subsets_with_parity(lines: &[LineId], odd: bool) -> Vec<Vec<LineId>> {
    let mut out: Vec<Vec<LineId>> = (0u64..1 << lines.len())
        .filter(|m| (m.count_ones() % 2 == 1) == odd)
        .map(|m| {
            lines
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, &l)| l)
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// `prod_{l in I} (1 + t_l^2) / 2 * prod_{l not in I} t_l`.
pub fn line_weight(g: &RibbonGraph, i: &[LineId]) -> Poly {
    g.line_ids()
        .map(|l| {
            let t = Poly::t(l);
            if i.contains(&l) {
                (&Poly::one() + &t.pow(2)).scale(&rat(1, 2))
            } else {
                t
            }
        })
        .product()
}

/// Mask of `B'` indices left after deleting `u_l` for `l` in `i`.
pub(crate) fn mask_without_u(dim: usize, i: &[LineId]) -> u64 {
    let mut mask = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
    for &l in i {
        mask &= !(1u64 << (l as usize - 1));
    }
    mask
}

/// `Pf(B')` with the `u` indices of `i` deleted.
pub fn n_i(bprime: &SkewPolyMatrix, i: &[LineId]) -> Result<Poly, HuError> {
    if bprime.dim() > 64 {
        return Err(PfaffianError::TooLarge(bprime.dim()).into());
    }
    let mut cache = PfaffianCache::default();
    Ok(cache.pf(bprime, mask_without_u(bprime.dim(), i)))
}

/// HU as the sum over `I` with `n + |I|` odd of
/// `s^(2g - k_I) n_I^2 prod_I (1 + t^2)/2 prod_rest t`.
pub fn hu(g: &RibbonGraph) -> Result<HUResult, HuError> {
    let topology = trace_faces(g);
    let (_, bprime) = build_b(g);
    let lines: Vec<LineId> = g.line_ids().collect();
    let n = topology.n as i64;
    let subsets = subsets_with_parity(&lines, n % 2 == 0);
    let terms: Vec<SubsetTerm> = subsets
        .into_par_iter()
        .map(|i| {
            let k_i = i.len() as i64 - topology.l as i64 - topology.f as i64 + 1;
            let exp = 2 * topology.g as i64 - k_i;
            if exp < 0 {
                return Err(HuError::NegativeExponent { i, exp });
            }
            let n_i = n_i(&bprime, &i)?;
            let contribution = &(&Poly::s().pow(exp as u32) * &n_i.pow(2)) * &line_weight(g, &i);
            Ok(SubsetTerm {
                i,
                k_i,
                n_i,
                contribution,
            })
        })
        .collect::<Result<_, _>>()?;
    let hu = terms.iter().map(|t| &t.contribution).sum();
    Ok(HUResult {
        hu,
        terms,
        topology,
    })
}

/// `Pf(B')` with every `u` index deleted: the `I = {1..L}` term.
pub fn boundary_pfaffian(g: &RibbonGraph) -> Poly {
    let (_, bprime) = build_b(g);
    let all: Vec<LineId> = g.line_ids().collect();
    if (g.num_lines() + g.num_vertices() - 1) % 2 == 1 {
        return Poly::zero();
    }
    n_i(&bprime, &all).expect("B' has at most 64 indices")
}

/// A leading term: an admissible `J0` with `|J0| = F - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    #[serde(rename = "J0")]
    pub j0: Vec<LineId>,
    #[serde(rename = "I")]
    pub complement: Vec<LineId>,
    /// Direct minor of `B'`.
    #[serde(rename = "nI", serialize_with = "ser_poly")]
    pub n_i: Poly,
    /// Pfaffian of the rosette reduction.
    #[serde(serialize_with = "ser_poly")]
    pub reduced: Poly,
    /// Pfaffian after the fourth Filk move.
    #[serde(serialize_with = "ser_poly")]
    pub filk: Poly,
    #[serde(rename = "closedForm", serialize_with = "ser_poly")]
    pub closed_form: Poly,
    pub genus_pairs: Vec<(LineId, LineId)>,
    #[serde(rename = "sPower")]
    pub s_power: u32,
}

impl LeadingTerm {
    /// The direct minor is the closed form up to sign.
    pub fn direct_matches(&self) -> bool {
        self.n_i == self.closed_form || self.n_i == -&self.closed_form
    }

    pub fn reduced_matches(&self) -> bool {
        self.reduced == self.closed_form || self.reduced == -&self.closed_form
    }

    /// The fourth Filk move leaves the Pfaffian unchanged.
    pub fn filk_preserves(&self) -> bool {
        self.filk == self.reduced
    }

    /// `n_I` has `W`-degree exactly `F - 1`.
    pub fn top_degree_ok(&self, f: usize) -> bool {
        let c = self.n_i.coefficients_in(Var::Omega);
        !self.n_i.is_zero() && c.len() == f
    }

    pub fn agrees(&self) -> bool {
        self.direct_matches() && self.reduced_matches() && self.filk_preserves()
    }
}

pub fn leading_terms(g: &RibbonGraph) -> Result<Vec<LeadingTerm>, HuError> {
    let topo = trace_faces(g);
    let dual = dual_graph(g, &topo);
    let (_, bprime) = build_b(g);
    let s_power = 2 * (topo.g + topo.f - 1) as u32;
    admissible_sets(g, &topo, &dual)
        .into_par_iter()
        .filter(|a| a.leading)
        .map(|a| {
            let complement: Vec<LineId> = a.complement.iter().copied().collect();
            let red = reduce(g, &a.j0, None)?;
            let (filk_matrix, _) = fourth_filk(&red)?;
            Ok(LeadingTerm {
                j0: a.j0.iter().copied().collect(),
                n_i: n_i(&bprime, &complement)?,
                complement,
                reduced: pfaffian(&red.matrix)?,
                filk: pfaffian(&filk_matrix)?,
                closed_form: if red.is_planar() {
                    red.closed_form()
                } else {
                    filk_closed_form(&filk_matrix, &red)
                },
                genus_pairs: red.pairs.clone(),
                s_power,
            })
        })
        .collect()
}

/// The leading-term lower bound on HU:
/// `sum s^(2(g + F - 1)) closed^2 prod_I (1 + t^2)/2 prod_J0 t`.
pub fn theorem_bound(g: &RibbonGraph, leading: &[LeadingTerm]) -> Poly {
    leading
        .iter()
        .map(|lt| {
            &(&Poly::s().pow(lt.s_power) * &lt.closed_form.pow(2)) * &line_weight(g, &lt.complement)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityViolation {
    pub point: SamplePoint,
    pub hu: Rat,
    pub bound: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityReport {
    pub checked: usize,
    pub violations: Vec<PositivityViolation>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates HU and the leading bound at `samples` seeded points for every
/// `W` in `omegas`, with `t` in `(0, 1)^L` and a random positive `s`.
pub fn positivity_check(
    g: &RibbonGraph,
    hu: &Poly,
    bound: &Poly,
    omegas: &[Rat],
    samples: usize,
    seed: u64,
) -> Result<PositivityReport, HuError> {
    let zero = Rat::from_integer(0.into());
    let one = Rat::from_integer(1.into());
    if let Some(w) = omegas.iter().find(|w| **w < zero || **w >= one) {
        return Err(HuError::OmegaRange(w.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = PositivityReport {
        checked: 0,
        violations: Vec::new(),
    };
    for w in omegas {
        for _ in 0..samples {
            let point = SamplePoint {
                t: (0..g.num_lines()).map(|_| unit_interval(&mut rng)).collect(),
                s: positive(&mut rng),
                omega: w.clone(),
            };
            let p = point.to_point();
            let h = hu.eval(&p)?;
            let b = bound.eval(&p)?;
            report.checked += 1;
            if h <= zero || h < b {
                report.violations.push(PositivityViolation {
                    point,
                    hu: h,
                    bound: b,
                });
            }
        }
    }
    Ok(report)
}

/// Lines in `J0` as a set, for callers holding a `LeadingTerm`.
pub fn j0_set(lt: &LeadingTerm) -> BTreeSet<LineId> {
    lt.j0.iter().copied().collect()
}

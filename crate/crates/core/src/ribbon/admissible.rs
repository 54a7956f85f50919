use std::collections::BTreeSet;

use super::tree::first_tree_within;
use super::{DualGraph, LineId, RibbonGraph, RootedTree, TopologyReport, UnionFind};

/// A line set containing a spanning tree of the dual graph whose complement
/// contains a spanning tree of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSet {
    pub j0: BTreeSet<LineId>,
    /// The complement `I`.
    pub complement: BTreeSet<LineId>,
    /// `|I| - L - F + 1`.
    pub k_i: i64,
    pub dual_tree: BTreeSet<LineId>,
    pub direct_tree: RootedTree,
    /// `|J0| = F - 1`: the set governs a leading term.
    pub leading: bool,
}

/// Checks both tree conditions for `j0`.
pub fn is_admissible(g: &RibbonGraph, dual: &DualGraph, j0: &BTreeSet<LineId>) -> bool {
    dual.lines_connect(j0.iter().copied())
        && g.lines_connect(g.line_ids().filter(|l| !j0.contains(l)))
}

/// All admissible sets in lexicographic order of their sorted line ids.
pub fn admissible_sets(
    g: &RibbonGraph,
    topo: &TopologyReport,
    dual: &DualGraph,
) -> Vec<AdmissibleSet> {
    let lines: Vec<LineId> = g.line_ids().collect();
    let mut out = Vec::new();
    for size in 0..=lines.len() {
        let mut chosen = Vec::new();
        super::tree::combinations(&lines, size, 0, &mut chosen, &mut |set| {
            let j0: BTreeSet<LineId> = set.iter().copied().collect();
            if !is_admissible(g, dual, &j0) {
                return;
            }
            let complement: BTreeSet<LineId> =
                lines.iter().copied().filter(|l| !j0.contains(l)).collect();
            let direct_tree = first_tree_within(g, &complement).expect("complement spans");
            let mut uf = UnionFind::new(dual.num_faces);
            let dual_tree = j0
                .iter()
                .copied()
                .filter(|&l| {
                    let (_, a, b) = dual.edges[l as usize - 1];
                    uf.union(a, b)
                })
                .collect();
            out.push(AdmissibleSet {
                k_i: complement.len() as i64 - topo.l as i64 - topo.f as i64 + 1,
                leading: j0.len() + 1 == topo.f,
                j0,
                complement,
                dual_tree,
                direct_tree,
            });
        });
    }
    out.sort_by(|a, b| a.j0.iter().cmp(b.j0.iter()));
    out
}

use std::collections::{BTreeMap, BTreeSet};

use super::{Corner, End, LineId, RibbonGraph, Slot, UnionFind};

/// A spanning tree with its orientation data relative to the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub tree_lines: BTreeSet<LineId>,
    /// The tree line joining each non-root vertex to its parent.
    pub toward_root: BTreeMap<usize, LineId>,
    /// `+1` if the line points away from the root (its head is on the child
    /// side), `-1` if it points toward the root.
    pub tree_sign: BTreeMap<LineId, i64>,
    /// Vertices above each tree line (the child's subtree).
    pub branch: BTreeMap<LineId, BTreeSet<usize>>,
    /// All `4n` slots in the order met by turning counterclockwise around
    /// the tree from slot 1 of the root.
    pub corner_order: Vec<Corner>,
}

impl RootedTree {
    /// Orients a spanning tree given as a line set. Returns `None` if the
    /// lines do not form a spanning tree.
    pub fn new(g: &RibbonGraph, lines: &BTreeSet<LineId>) -> Option<RootedTree> {
        let n = g.num_vertices();
        if lines.len() + 1 != n {
            return None;
        }
        let mut uf = UnionFind::new(n);
        for &l in lines {
            let e = g.line(l);
            if !uf.union(e.head.vertex, e.tail.vertex) {
                return None;
            }
        }

        let mut toward_root = BTreeMap::new();
        let mut tree_sign = BTreeMap::new();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        seen[g.root()] = true;
        let mut stack = vec![g.root()];
        while let Some(v) = stack.pop() {
            for &l in lines {
                let e = g.line(l);
                let (child, sign) = if e.head.vertex == v && !seen[e.tail.vertex] {
                    (e.tail.vertex, -1)
                } else if e.tail.vertex == v && !seen[e.head.vertex] {
                    (e.head.vertex, 1)
                } else {
                    continue;
                };
                seen[child] = true;
                toward_root.insert(child, l);
                tree_sign.insert(l, sign);
                children[v].push(child);
                stack.push(child);
            }
        }

        let mut branch = BTreeMap::new();
        for (&v, &l) in &toward_root {
            let mut sub = BTreeSet::new();
            let mut st = vec![v];
            while let Some(w) = st.pop() {
                sub.insert(w);
                st.extend(children[w].iter().copied());
            }
            branch.insert(l, sub);
        }

        let mut corner_order = Vec::with_capacity(4 * n);
        walk(g, lines, &toward_root, g.root(), 1, &mut corner_order);

        Some(RootedTree {
            tree_lines: lines.clone(),
            toward_root,
            tree_sign,
            branch,
            corner_order,
        })
    }

    pub fn is_tree_line(&self, l: LineId) -> bool {
        self.tree_lines.contains(&l)
    }

    /// Sign of the branch of vertex `k` with respect to line `l`: `+1` if the
    /// line enters the branch, `-1` if it leaves it, 0 otherwise.
    pub fn branch_sign(&self, g: &RibbonGraph, k: usize, l: LineId) -> i64 {
        let Some(tl) = self.toward_root.get(&k) else {
            return 0;
        };
        let b = &self.branch[tl];
        let e = g.line(l);
        match (b.contains(&e.head.vertex), b.contains(&e.tail.vertex)) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        }
    }

    /// Number of ends of `l` inside the branch above vertex `k`.
    pub fn branch_multiplicity(&self, g: &RibbonGraph, k: usize, l: LineId) -> i64 {
        let b = &self.branch[&self.toward_root[&k]];
        let e = g.line(l);
        b.contains(&e.head.vertex) as i64 + b.contains(&e.tail.vertex) as i64
    }
}

fn walk(
    g: &RibbonGraph,
    lines: &BTreeSet<LineId>,
    toward_root: &BTreeMap<usize, LineId>,
    v: usize,
    start: u8,
    out: &mut Vec<Corner>,
) {
    let parent_line = toward_root.get(&v).copied();
    for k in 0..4u8 {
        let c = Corner::new(v, (start - 1 + k) % 4 + 1);
        out.push(c);
        if let Slot::Line { line, end } = g.slot(c) {
            if lines.contains(line) && Some(*line) != parent_line {
                let e = g.line(*line);
                let far = match end {
                    End::Head => e.tail,
                    End::Tail => e.head,
                };
                walk(g, lines, toward_root, far.vertex, far.slot % 4 + 1, out);
            }
        }
    }
}

/// Every spanning tree, in lexicographic order of sorted line-id sets.
pub fn spanning_trees(g: &RibbonGraph) -> Vec<RootedTree> {
    let candidates: Vec<LineId> = g
        .line_ids()
        .filter(|&l| !g.line(l).is_self_loop())
        .collect();
    let k = g.num_vertices() - 1;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    combinations(&candidates, k, 0, &mut chosen, &mut |set| {
        let set: BTreeSet<LineId> = set.iter().copied().collect();
        if let Some(t) = RootedTree::new(g, &set) {
            out.push(t);
        }
    });
    out
}

/// The lexicographically first spanning tree using only `allowed` lines.
pub(crate) fn first_tree_within(g: &RibbonGraph, allowed: &BTreeSet<LineId>) -> Option<RootedTree> {
    RootedTree::first_within(g, allowed)
}

impl RootedTree {
    /// The lexicographically first spanning tree using only `allowed` lines.
    pub fn first_within(g: &RibbonGraph, allowed: &BTreeSet<LineId>) -> Option<RootedTree> {
        let candidates: Vec<LineId> = allowed
            .iter()
            .copied()
            .filter(|&l| !g.line(l).is_self_loop())
            .collect();
        let mut uf = UnionFind::new(g.num_vertices());
        let mut set = BTreeSet::new();
        for l in candidates {
            let e = g.line(l);
            if uf.union(e.head.vertex, e.tail.vertex) {
                set.insert(l);
            }
        }
        RootedTree::new(g, &set)
    }
}

pub(crate) fn combinations<T: Copy>(
    items: &[T],
    k: usize,
    from: usize,
    chosen: &mut Vec<T>,
    f: &mut impl FnMut(&[T]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in from..items.len() {
        if items.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(items[i]);
        combinations(items, k, i + 1, chosen, f);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::super::RibbonGraph;
    use super::*;

    fn sunshine() -> RibbonGraph {
        RibbonGraph::new(
            "sunshine",
            vec![
                ("V0".into(), vec![h(1), t(2), h(3), x("x1")]),
                ("V1".into(), vec![h(2), t(3), x("x2"), t(1)]),
            ],
            "V0",
        )
        .unwrap()
    }

    #[test]
    fn tree_counts() {
        let trees = spanning_trees(&bubble());
        let sets: Vec<Vec<LineId>> = trees
            .iter()
            .map(|t| t.tree_lines.iter().copied().collect())
            .collect();
        assert_eq!(sets, vec![vec![1], vec![2]]);

        let trees = spanning_trees(&tadpole());
        assert_eq!(trees.len(), 1);
        assert!(trees[0].tree_lines.is_empty());

        assert_eq!(spanning_trees(&sunshine()).len(), 3);
    }

    #[test]
    fn tree_sign_follows_orientation() {
        let g = bubble();
        let trees = spanning_trees(&g);
        // Line 1 has its head on the root, so it points toward the root.
        assert_eq!(trees[0].tree_sign[&1], -1);
        assert_eq!(trees[1].tree_sign[&2], 1);
        assert_eq!(trees[0].branch[&1], BTreeSet::from([1]));
    }

    #[test]
    fn corner_order_visits_every_slot_once() {
        let g = sunshine();
        for t in spanning_trees(&g) {
            let mut seen = t.corner_order.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), 8);
            assert_eq!(t.corner_order[0], Corner::new(0, 1));
        }
    }

    #[test]
    fn corner_order_enters_child_after_its_tree_slot() {
        let g = bubble();
        let t = &spanning_trees(&g)[0];
        // Root slot 1 holds the head of line 1, whose tail is V1 slot 2.
        let order: Vec<(usize, u8)> = t.corner_order.iter().map(|c| (c.vertex, c.slot)).collect();
        assert_eq!(
            order,
            vec![
                (0, 1),
                (1, 3),
                (1, 4),
                (1, 1),
                (1, 2),
                (0, 2),
                (0, 3),
                (0, 4)
            ]
        );
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut got = Vec::new();
        combinations(&[1, 2, 3, 4], 2, 0, &mut Vec::new(), &mut |c| {
            got.push(c.to_vec())
        });
        assert_eq!(got.len(), 6);
        assert_eq!(got[0], vec![1, 2]);
        assert_eq!(got[5], vec![3, 4]);
    }
}

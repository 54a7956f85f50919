//! Ribbon graphs with 4-valent vertices: data model, JSON I/O and validation.
//!
//! Every vertex carries four slots in counterclockwise order. Slot `i`
//! (1-based) has sign `(-1)^(i+1)`, and an internal line always runs from a
//! tail on a `-` slot to a head on a `+` slot.

mod admissible;
mod random;
mod rosette;
mod topology;
mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use admissible::{admissible_sets, is_admissible, AdmissibleSet};
pub use random::random_orientable;
pub use rosette::{nice_crossings, Relation, Rosette, RosetteEntry, RosetteError};
pub use topology::{dual_graph, trace_faces, DualGraph, Face, TopologyReport};
pub use tree::{spanning_trees, RootedTree};
pub(crate) use tree::combinations;

pub type LineId = u32;

/// A slot position: vertex index (into the sorted vertex list) and 1-based slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub vertex: usize,
    pub slot: u8,
}

impl Corner {
    pub fn new(vertex: usize, slot: u8) -> Self {
        Corner { vertex, slot }
    }

    /// `(-1)^(slot+1)`.
    pub fn sign(self) -> i64 {
        if self.slot % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// The next slot counterclockwise on the same vertex.
    pub fn next(self) -> Corner {
        Corner::new(self.vertex, self.slot % 4 + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Head,
    Tail,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Line { line: LineId, end: End },
    Ext(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineEnds {
    pub head: Corner,
    pub tail: Corner,
}

impl LineEnds {
    pub fn end(&self, e: End) -> Corner {
        match e {
            End::Head => self.head,
            End::Tail => self.tail,
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.head.vertex == self.tail.vertex
    }
}

/// Reference values carried by a graph file and checked by `verify`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hu: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leading: Vec<ExpectedLeading>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedLeading {
    #[serde(rename = "J0")]
    pub j0: Vec<LineId>,
    #[serde(rename = "nI")]
    pub n_i: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("vertex {vertex}, slot {slot}: {msg}")]
    Slot {
        vertex: String,
        slot: usize,
        msg: String,
    },
    #[error("vertex {vertex}: expected 4 slots, found {found}")]
    Valence { vertex: String, found: usize },
    #[error("line {0}: {1}")]
    Line(LineId, String),
    #[error("line ids must be exactly 1..{expected}, found {found:?}")]
    LineIds { expected: usize, found: Vec<LineId> },
    #[error("root vertex {0} not found")]
    UnknownRoot(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
}

/// An immutable, validated ribbon graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    name: String,
    vertex_names: Vec<String>,
    slots: Vec<[Slot; 4]>,
    lines: Vec<LineEnds>,
    externals: Vec<(String, Corner)>,
    root: usize,
    expected: Option<Expected>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RawSlot {
    Line { line: LineId, end: End },
    Ext { ext: String },
}

#[derive(Deserialize, Serialize)]
struct RawGraph {
    name: String,
    root: String,
    vertices: BTreeMap<String, Vec<RawSlot>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<Expected>,
}

impl RibbonGraph {
    /// Builds and validates a graph. Vertices are kept in the given order.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<(String, Vec<Slot>)>,
        root: &str,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let vertex_names: Vec<String> = vertices.iter().map(|(n, _)| n.clone()).collect();
        let root = vertex_names
            .iter()
            .position(|n| n == root)
            .ok_or_else(|| GraphError::UnknownRoot(root.to_string()))?;

        let mut slots = Vec::with_capacity(vertices.len());
        let mut heads: BTreeMap<LineId, Corner> = BTreeMap::new();
        let mut tails: BTreeMap<LineId, Corner> = BTreeMap::new();
        let mut externals: Vec<(String, Corner)> = Vec::new();
        let mut labels = BTreeSet::new();

        for (v, (vname, vs)) in vertices.into_iter().enumerate() {
            let arr: [Slot; 4] = vs.try_into().map_err(|vs: Vec<Slot>| GraphError::Valence {
                vertex: vname.clone(),
                found: vs.len(),
            })?;
            for (k, slot) in arr.iter().enumerate() {
                let c = Corner::new(v, k as u8 + 1);
                let slot_err = |msg: String| GraphError::Slot {
                    vertex: vname.clone(),
                    slot: k + 1,
                    msg,
                };
                match slot {
                    Slot::Line { line, end } => {
                        let (map, want) = match end {
                            End::Head => (&mut heads, 1),
                            End::Tail => (&mut tails, -1),
                        };
                        if c.sign() != want {
                            return Err(slot_err(format!(
                                "line {line} {end:?} on a slot of the wrong sign (lines join a '-' slot to a '+' slot)"
                            )));
                        }
                        if map.insert(*line, c).is_some() {
                            return Err(slot_err(format!("line {line} has a second {end:?}")));
                        }
                    }
                    Slot::Ext(label) => {
                        if !labels.insert(label.clone()) {
                            return Err(slot_err(format!("duplicate external label {label}")));
                        }
                        externals.push((label.clone(), c));
                    }
                }
            }
            slots.push(arr);
        }

        for (&l, _) in heads.iter() {
            if !tails.contains_key(&l) {
                return Err(GraphError::Line(l, "has no tail".into()));
            }
        }
        for (&l, _) in tails.iter() {
            if !heads.contains_key(&l) {
                return Err(GraphError::Line(l, "has no head".into()));
            }
        }
        let ids: Vec<LineId> = heads.keys().copied().collect();
        if ids.iter().enumerate().any(|(k, &l)| l as usize != k + 1) {
            return Err(GraphError::LineIds {
                expected: ids.len(),
                found: ids,
            });
        }
        let lines = ids
            .iter()
            .map(|l| LineEnds {
                head: heads[l],
                tail: tails[l],
            })
            .collect();
        externals.sort();

        let g = RibbonGraph {
            name: name.into(),
            vertex_names,
            slots,
            lines,
            externals,
            root,
            expected: None,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Parses the JSON graph format. Vertices are ordered by id.
    pub fn from_json(src: &str) -> Result<Self, GraphError> {
        let raw: RawGraph =
            serde_json::from_str(src).map_err(|e| GraphError::Json(e.to_string()))?;
        let vertices = raw
            .vertices
            .into_iter()
            .map(|(name, slots)| {
                let slots = slots
                    .into_iter()
                    .map(|s| match s {
                        RawSlot::Line { line, end } => Slot::Line { line, end },
                        RawSlot::Ext { ext } => Slot::Ext(ext),
                    })
                    .collect();
                (name, slots)
            })
            .collect();
        let mut g = RibbonGraph::new(raw.name, vertices, &raw.root)?;
        g.expected = raw.expected;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let raw = RawGraph {
            name: self.name.clone(),
            root: self.vertex_names[self.root].clone(),
            vertices: self
                .vertex_names
                .iter()
                .zip(&self.slots)
                .map(|(n, arr)| {
                    let slots = arr
                        .iter()
                        .map(|s| match s {
                            Slot::Line { line, end } => RawSlot::Line {
                                line: *line,
                                end: *end,
                            },
                            Slot::Ext(label) => RawSlot::Ext { ext: label.clone() },
                        })
                        .collect();
                    (n.clone(), slots)
                })
                .collect(),
            expected: self.expected.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("graph serializes")
    }

    pub fn with_expected(mut self, expected: Expected) -> Self {
        self.expected = Some(expected);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The same graph rooted at another vertex.
    pub fn with_root(mut self, root: usize) -> Self {
        assert!(root < self.num_vertices(), "root out of range");
        self.root = root;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn expected(&self) -> Option<&Expected> {
        self.expected.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.slots.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn num_externals(&self) -> usize {
        self.externals.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn slot(&self, c: Corner) -> &Slot {
        &self.slots[c.vertex][c.slot as usize - 1]
    }

    pub fn slots(&self, v: usize) -> &[Slot; 4] {
        &self.slots[v]
    }

    /// Line ids `1..=L`.
    pub fn line_ids(&self) -> impl Iterator<Item = LineId> {
        1..=self.lines.len() as LineId
    }

    pub fn line(&self, l: LineId) -> LineEnds {
        self.lines[l as usize - 1]
    }

    /// External legs sorted by label.
    pub fn externals(&self) -> &[(String, Corner)] {
        &self.externals
    }

    /// Non-root vertex indices in order; these index the hypermomentum block.
    pub fn non_root_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices())
            .filter(|&v| v != self.root)
            .collect()
    }

    /// The far end of a line end, or `None` for an external slot.
    pub fn partner(&self, c: Corner) -> Option<Corner> {
        match self.slot(c) {
            Slot::Line { line, end } => {
                let ends = self.line(*line);
                Some(match end {
                    End::Head => ends.tail,
                    End::Tail => ends.head,
                })
            }
            Slot::Ext(_) => None,
        }
    }

    /// Whether `lines` connects all vertices.
    pub fn lines_connect(&self, lines: impl IntoIterator<Item = LineId>) -> bool {
        let mut uf = UnionFind::new(self.num_vertices());
        for l in lines {
            let e = self.line(l);
            uf.union(e.head.vertex, e.tail.vertex);
        }
        uf.components() == 1
    }

    fn is_connected(&self) -> bool {
        self.lines_connect(self.line_ids())
    }

    /// Joins the external legs `a` and `b` into a new line with its head at
    /// `a`. The slot signs are not checked, so the result may carry one
    /// non-orientable line; faces, trees and loop signs of the other lines
    /// are unaffected by that.
    pub fn join_externals(&self, a: &str, b: &str) -> Option<RibbonGraph> {
        let ca = self.externals.iter().find(|(l, _)| l == a)?.1;
        let cb = self.externals.iter().find(|(l, _)| l == b)?.1;
        if ca == cb {
            return None;
        }
        let line = self.lines.len() as LineId + 1;
        let mut g = self.clone();
        g.slots[ca.vertex][ca.slot as usize - 1] = Slot::Line { line, end: End::Head };
        g.slots[cb.vertex][cb.slot as usize - 1] = Slot::Line { line, end: End::Tail };
        g.lines.push(LineEnds { head: ca, tail: cb });
        g.externals.retain(|(l, _)| l != a && l != b);
        g.expected = None;
        Some(g)
    }

    /// Cyclically rotates the slot array of vertex `v` by `k` positions, so
    /// that old slot `i` becomes slot `i + k`. Only even `k` keeps lines
    /// orientable.
    pub fn rotate_vertex(&self, v: usize, k: usize) -> Result<Self, GraphError> {
        let vertices = self
            .vertex_names
            .iter()
            .zip(&self.slots)
            .enumerate()
            .map(|(w, (n, arr))| {
                let mut vs = arr.to_vec();
                if w == v {
                    vs.rotate_right(k % 4);
                }
                (n.clone(), vs)
            })
            .collect();
        RibbonGraph::new(self.name.clone(), vertices, &self.vertex_names[self.root])
    }

    /// Renames lines by `perm` (a permutation of `1..=L`).
    pub fn relabel_lines(&self, perm: impl Fn(LineId) -> LineId) -> Result<Self, GraphError> {
        let vertices = self
            .vertex_names
            .iter()
            .zip(&self.slots)
            .map(|(n, arr)| {
                let vs = arr
                    .iter()
                    .map(|s| match s {
                        Slot::Line { line, end } => Slot::Line {
                            line: perm(*line),
                            end: *end,
                        },
                        other => other.clone(),
                    })
                    .collect();
                (n.clone(), vs)
            })
            .collect();
        RibbonGraph::new(self.name.clone(), vertices, &self.vertex_names[self.root])
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (root {}):", self.name, self.vertex_names[self.root])?;
        for (n, arr) in self.vertex_names.iter().zip(&self.slots) {
            write!(f, " {n}[")?;
            for (k, s) in arr.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                match s {
                    Slot::Line {
                        line,
                        end: End::Head,
                    } => write!(f, "{line}h")?,
                    Slot::Line {
                        line,
                        end: End::Tail,
                    } => write!(f, "{line}t")?,
                    Slot::Ext(e) => write!(f, "{e}")?,
                }
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            count: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.count -= 1;
        true
    }

    pub(crate) fn components(&self) -> usize {
        self.count
    }
}

#[cfg(test)]
pub(crate) mod samples {
    use super::*;

    pub(crate) fn line(l: LineId, end: End) -> Slot {
        Slot::Line { line: l, end }
    }

    pub(crate) fn h(l: LineId) -> Slot {
        line(l, End::Head)
    }

    pub(crate) fn t(l: LineId) -> Slot {
        line(l, End::Tail)
    }

    pub(crate) fn x(label: &str) -> Slot {
        Slot::Ext(label.to_string())
    }

    /// One vertex, line 1 from slot 2 to slot 1.
    pub(crate) fn tadpole() -> RibbonGraph {
        RibbonGraph::new(
            "tadpole",
            vec![("V0".into(), vec![h(1), t(1), x("x1"), x("x2")])],
            "V0",
        )
        .unwrap()
    }

    /// Two vertices joined by two lines, externals on one side of each vertex.
    pub(crate) fn bubble() -> RibbonGraph {
        RibbonGraph::new(
            "bubble",
            vec![
                ("V0".into(), vec![h(1), t(2), x("x1"), x("x2")]),
                ("V1".into(), vec![h(2), t(1), x("x3"), x("x4")]),
            ],
            "V0",
        )
        .unwrap()
    }

    /// Both faces carry externals; `V1` has its legs on opposite slots.
    pub(crate) fn broken_bubble() -> RibbonGraph {
        RibbonGraph::new(
            "broken-bubble",
            vec![
                ("V0".into(), vec![h(1), x("x1"), h(2), x("x2")]),
                ("V1".into(), vec![x("x3"), t(1), x("x4"), t(2)]),
            ],
            "V0",
        )
        .unwrap()
    }

    /// Two vertices, three lines, one face.
    pub(crate) fn nonplanar_sunshine() -> RibbonGraph {
        RibbonGraph::new(
            "nonplanar-sunshine",
            vec![
                ("V0".into(), vec![h(1), t(2), h(3), x("x1")]),
                ("V1".into(), vec![x("x2"), t(1), h(2), t(3)]),
            ],
            "V0",
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn json_round_trip() {
        let g = bubble();
        let back = RibbonGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn parses_documented_format() {
        let src = r#"{"name":"tp","root":"A","vertices":{"A":[
            {"line":1,"end":"head"},{"line":1,"end":"tail"},{"ext":"a"},{"ext":"b"}]}}"#;
        let g = RibbonGraph::from_json(src).unwrap();
        assert_eq!(g.num_lines(), 1);
        assert_eq!(g.num_externals(), 2);
        assert_eq!(g.line(1).head, Corner::new(0, 1));
    }

    #[test]
    fn head_on_minus_slot_is_rejected_with_coordinates() {
        let err = RibbonGraph::new(
            "bad",
            vec![("V0".into(), vec![t(1), h(1), x("a"), x("b")])],
            "V0",
        )
        .unwrap_err();
        match err {
            GraphError::Slot { vertex, slot, .. } => {
                assert_eq!(vertex, "V0");
                assert_eq!(slot, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_valence_rejected() {
        let err = RibbonGraph::new("bad", vec![("V0".into(), vec![h(1), t(1), x("a")])], "V0")
            .unwrap_err();
        assert!(matches!(err, GraphError::Valence { found: 3, .. }));
    }

    #[test]
    fn missing_line_end_rejected() {
        let err = RibbonGraph::new(
            "bad",
            vec![("V0".into(), vec![h(1), x("c"), x("a"), x("b")])],
            "V0",
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::Line(1, _)));
    }

    #[test]
    fn non_contiguous_line_ids_rejected() {
        let err = RibbonGraph::new(
            "bad",
            vec![("V0".into(), vec![h(2), t(2), x("a"), x("b")])],
            "V0",
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::LineIds { .. }));
    }

    #[test]
    fn disconnected_rejected() {
        let err = RibbonGraph::new(
            "bad",
            vec![
                ("V0".into(), vec![h(1), t(1), x("a"), x("b")]),
                ("V1".into(), vec![h(2), t(2), x("c"), x("d")]),
            ],
            "V0",
        )
        .unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(
            RibbonGraph::from_json("{\"name\": 3}"),
            Err(GraphError::Json(_))
        ));
    }

    #[test]
    fn rotation_by_two_keeps_orientability() {
        let g = bubble().rotate_vertex(1, 2).unwrap();
        assert_eq!(g.line(1).tail, Corner::new(1, 4));
        assert!(bubble().rotate_vertex(1, 1).is_err());
    }
}

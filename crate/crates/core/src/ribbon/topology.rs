use serde::Serialize;

use super::{Corner, LineId, RibbonGraph, Slot};

/// A face as the cyclic sequence of slots visited by the boundary walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub corners: Vec<Corner>,
    pub externals: Vec<String>,
    pub broken: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologyReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub g: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "N")]
    pub ext: usize,
    pub faces: Vec<Face>,
    /// Face index of every slot, indexed by `4 * vertex + slot - 1`.
    #[serde(skip)]
    pub face_of: Vec<usize>,
}

impl TopologyReport {
    pub fn face_of(&self, c: Corner) -> usize {
        self.face_of[4 * c.vertex + c.slot as usize - 1]
    }

    pub fn summary(&self) -> String {
        format!(
            "n={} L={} F={} g={} B={} N={}",
            self.n, self.l, self.f, self.g, self.b, self.ext
        )
    }
}

/// Walks face boundaries: from a slot, cross its line to the far end (an
/// external slot stays put), then step to the next slot counterclockwise.
pub fn trace_faces(g: &RibbonGraph) -> TopologyReport {
    let n = g.num_vertices();
    let mut face_of = vec![usize::MAX; 4 * n];
    let mut faces = Vec::new();
    for v in 0..n {
        for slot in 1..=4u8 {
            let start = Corner::new(v, slot);
            if face_of[4 * v + slot as usize - 1] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut corners = Vec::new();
            let mut externals = Vec::new();
            let mut c = start;
            loop {
                face_of[4 * c.vertex + c.slot as usize - 1] = id;
                corners.push(c);
                if let Slot::Ext(label) = g.slot(c) {
                    externals.push(label.clone());
                }
                c = g.partner(c).unwrap_or(c).next();
                if c == start {
                    break;
                }
            }
            let broken = !externals.is_empty();
            faces.push(Face {
                corners,
                externals,
                broken,
            });
        }
    }
    let l = g.num_lines();
    let f = faces.len();
    let chi = n as i64 - l as i64 + f as i64;
    debug_assert!(
        chi <= 2 && chi % 2 == 0,
        "Euler characteristic {chi} is not 2-2g"
    );
    TopologyReport {
        n,
        l,
        f,
        g: ((2 - chi) / 2) as usize,
        b: faces.iter().filter(|f| f.broken).count(),
        ext: g.num_externals(),
        faces,
        face_of,
    }
}

/// Faces as vertices, one edge per internal line joining the faces on its two
/// sides (possibly the same face).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualGraph {
    pub num_faces: usize,
    pub edges: Vec<(LineId, usize, usize)>,
}

impl DualGraph {
    /// Whether the edges of `lines` connect every face.
    pub fn lines_connect(&self, lines: impl IntoIterator<Item = LineId>) -> bool {
        let mut uf = super::UnionFind::new(self.num_faces);
        for l in lines {
            let (_, a, b) = self.edges[l as usize - 1];
            uf.union(a, b);
        }
        uf.components() == 1
    }
}

pub fn dual_graph(g: &RibbonGraph, topo: &TopologyReport) -> DualGraph {
    let edges = g
        .line_ids()
        .map(|l| {
            let e = g.line(l);
            (l, topo.face_of(e.head), topo.face_of(e.tail))
        })
        .collect();
    DualGraph {
        num_faces: topo.f,
        edges,
    }
}

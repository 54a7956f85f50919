//! Matrices of the Gaussian parametric integral built from a ribbon graph.
//!
//! Index layout of `B` and `B'`: short variables `u_1..u_L`, long variables
//! `v_1..v_L`, then one hypermomentum `p_V` per non-root vertex.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;
use thiserror::Error;

use crate::polyring::{int, Poly, Rat};
use crate::ribbon::{
    nice_crossings, Corner, End, LineId, RibbonGraph, RootedTree, Rosette, RosetteError, Slot,
};

/// Row/column label of a matrix index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    U(LineId),
    V(LineId),
    /// Long variable of a loop line after the tree reduction.
    W(LineId),
    /// Hypermomentum of a vertex.
    P(usize),
    Aux(usize),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::U(l) => write!(f, "u{l}"),
            Label::V(l) => write!(f, "v{l}"),
            Label::W(l) => write!(f, "w{l}"),
            Label::P(v) => write!(f, "p{v}"),
            Label::Aux(k) => write!(f, "a{k}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({0}, {1}) breaks antisymmetry")]
    NotAntisymmetric(usize, usize),
    #[error("matrix rows do not match {0} labels")]
    Shape(usize),
    #[error("the graph has no external legs")]
    NoExternals,
    #[error("pair ({a}, {b}) has coupling {c}, expected a non-zero constant")]
    BadPivot { a: LineId, b: LineId, c: String },
    #[error("{0} is not a spanning tree inside the complement of J0")]
    BadTree(String),
    #[error(transparent)]
    Rosette(#[from] RosetteError),
}

/// Square antisymmetric matrix of polynomials with labelled indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPolyMatrix {
    labels: Vec<Label>,
    rows: Vec<Vec<Poly>>,
}

impl SkewPolyMatrix {
    pub fn zeros(labels: Vec<Label>) -> Self {
        let d = labels.len();
        SkewPolyMatrix {
            labels,
            rows: vec![vec![Poly::zero(); d]; d],
        }
    }

    /// Checked constructor.
    pub fn from_rows(labels: Vec<Label>, rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let d = labels.len();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(MatrixError::Shape(d));
        }
        let m = SkewPolyMatrix { labels, rows };
        m.check_antisymmetric()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, l: Label) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn entry(&self, a: Label, b: Label) -> Poly {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.rows[i][j].clone(),
            _ => Poly::zero(),
        }
    }

    /// Sets `(i, j)` to `p` and `(j, i)` to `-p`.
    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert!(i != j || p.is_zero(), "non-zero diagonal in a skew matrix");
        self.rows[j][i] = -&p;
        self.rows[i][j] = p;
    }

    /// Adds `p` at `(i, j)` and `-p` at `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, p: &Poly) {
        if i == j {
            return;
        }
        self.rows[i][j] += p;
        self.rows[j][i] = &self.rows[j][i] - p;
    }

    pub fn check_antisymmetric(&self) -> Result<(), MatrixError> {
        for i in 0..self.dim() {
            for j in i..self.dim() {
                if self.rows[i][j] != -&self.rows[j][i] {
                    return Err(MatrixError::NotAntisymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.check_antisymmetric().is_ok()
    }

    /// Principal submatrix on `keep`, in that order (also a reordering).
    pub fn submatrix(&self, keep: &[usize]) -> SkewPolyMatrix {
        SkewPolyMatrix {
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            rows: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Reorders or restricts to the given labels.
    pub fn select(&self, labels: &[Label]) -> SkewPolyMatrix {
        let keep: Vec<usize> = labels
            .iter()
            .map(|&l| self.index_of(l).unwrap_or_else(|| panic!("no index {l}")))
            .collect();
        self.submatrix(&keep)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> SkewPolyMatrix {
        SkewPolyMatrix {
            labels: self.labels.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// `K^T M K` where column `c` of `K` is a sparse combination of this
    /// matrix's labels.
    pub fn congruence(&self, columns: &[(Label, BTreeMap<Label, Poly>)]) -> SkewPolyMatrix {
        let idx: Vec<Vec<(usize, &Poly)>> = columns
            .iter()
            .map(|(_, comb)| {
                comb.iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(l, c)| {
                        (
                            self.index_of(*l).unwrap_or_else(|| panic!("no index {l}")),
                            c,
                        )
                    })
                    .collect()
            })
            .collect();
        let labels: Vec<Label> = columns.iter().map(|(l, _)| *l).collect();
        let mut out = SkewPolyMatrix::zeros(labels);
        for a in 0..columns.len() {
            for b in a + 1..columns.len() {
                let mut acc = Poly::zero();
                for &(i, ci) in &idx[a] {
                    for &(j, cj) in &idx[b] {
                        let m = &self.rows[i][j];
                        if !m.is_zero() {
                            acc += &(ci * m) * cj;
                        }
                    }
                }
                out.set(a, b, acc);
            }
        }
        out
    }

    /// `{dim, labels, entries: [[row, col, poly]]}` over the non-zero upper
    /// triangle.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                if !self.rows[i][j].is_zero() {
                    entries.push(json!([i, j, self.rows[i][j].to_string()]));
                }
            }
        }
        json!({
            "dim": self.dim(),
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "entries": entries,
        })
    }
}

/// Corner incidence of lines: `eps[l-1][4v + i - 1] = (-1)^(i+1)` when line
/// `l` hooks vertex `v` at slot `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub eps: Vec<Vec<i64>>,
}

impl Incidence {
    pub fn eta(&self) -> Vec<Vec<i64>> {
        self.eps
            .iter()
            .map(|r| r.iter().map(|x| x.abs()).collect())
            .collect()
    }

    pub fn get(&self, l: LineId, c: Corner) -> i64 {
        self.eps[l as usize - 1][4 * c.vertex + c.slot as usize - 1]
    }
}

pub fn build_incidence(g: &RibbonGraph) -> Incidence {
    let mut eps = vec![vec![0; 4 * g.num_vertices()]; g.num_lines()];
    for l in g.line_ids() {
        let e = g.line(l);
        for c in [e.head, e.tail] {
            eps[l as usize - 1][4 * c.vertex + c.slot as usize - 1] = c.sign();
        }
    }
    Incidence { eps }
}

/// `omega(i, j)`: 1 if `i < j`, -1 if `i > j`, 0 on the diagonal.
pub fn omega(i: u8, j: u8) -> i64 {
    (j as i64 - i as i64).signum()
}

/// Labels `u_1..u_L, v_1..v_L, p_V` (non-root `V`).
pub fn b_labels(g: &RibbonGraph) -> Vec<Label> {
    g.line_ids()
        .map(Label::U)
        .chain(g.line_ids().map(Label::V))
        .chain(g.non_root_vertices().into_iter().map(Label::P))
        .collect()
}

/// Line ends at vertex `v`: `(slot, line, sign)`.
fn ends_at(g: &RibbonGraph, v: usize) -> Vec<(u8, LineId, i64)> {
    g.slots(v)
        .iter()
        .enumerate()
        .filter_map(|(k, s)| match s {
            Slot::Line { line, .. } => {
                let c = Corner::new(v, k as u8 + 1);
                Some((c.slot, *line, c.sign()))
            }
            Slot::Ext(_) => None,
        })
        .collect()
}

/// `(B, B')`: `B' = [[E, C], [-C^T, 0]]` and `B` the same with `E` scaled by `s`.
pub fn build_b(g: &RibbonGraph) -> (SkewPolyMatrix, SkewPolyMatrix) {
    let l = g.num_lines();
    let u = |x: LineId| x as usize - 1;
    let v = |x: LineId| l + x as usize - 1;
    let labels = b_labels(g);
    let mut e = vec![vec![0i64; 2 * l]; 2 * l];
    for vert in 0..g.num_vertices() {
        let ends = ends_at(g, vert);
        for &(i, a, ea) in &ends {
            for &(j, b, eb) in &ends {
                let f = if (i + j + 1) % 2 == 0 { 1 } else { -1 } * omega(i, j);
                e[u(a)][u(b)] += f * ea * eb;
                e[v(a)][v(b)] += f;
                e[u(a)][v(b)] += f * ea;
                e[v(a)][u(b)] += f * eb;
            }
        }
    }
    let mut bp = SkewPolyMatrix::zeros(labels.clone());
    for i in 0..2 * l {
        for j in i + 1..2 * l {
            if e[i][j] != 0 {
                bp.set(i, j, Poly::from_int(e[i][j]));
            }
        }
    }
    let two_w = &Poly::from_int(2) * &Poly::omega();
    for a in g.line_ids() {
        bp.add(u(a), v(a), &two_w);
    }
    let mut b = bp.map(|p| p * &Poly::s());
    for (k, vert) in g.non_root_vertices().into_iter().enumerate() {
        let col = 2 * l + k;
        for (_, a, ea) in ends_at(g, vert) {
            for m in [&mut bp, &mut b] {
                m.add(u(a), col, &Poly::one());
                m.add(v(a), col, &Poly::from_int(ea));
            }
        }
    }
    (b, bp)
}

/// The diagonal matrix `A`: `(1 + t_l^2) / (2 t_l)` on `u_l`, zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagA {
    /// `(numerator, denominator)` per line.
    pub entries: Vec<(Poly, Poly)>,
    pub dim: usize,
}

impl DiagA {
    pub fn value(t: &Rat) -> Rat {
        let one = int(1);
        (&one + t * t) / (int(2) * t)
    }

    /// The entry at index `i` of the full matrix, evaluated at `t`.
    pub fn eval_at(&self, i: usize, t: &[Rat]) -> Rat {
        if i < self.entries.len() {
            Self::value(&t[i])
        } else {
            int(0)
        }
    }
}

pub fn build_a(g: &RibbonGraph) -> DiagA {
    DiagA {
        entries: g
            .line_ids()
            .map(|l| {
                let t = Poly::t(l);
                (&Poly::one() + &t.pow(2), &Poly::from_int(2) * &t)
            })
            .collect(),
        dim: 2 * g.num_lines() + g.num_vertices() - 1,
    }
}

/// Row label of the external coupling matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PRow {
    Ext(String),
    RootMomentum,
}

impl std::fmt::Display for PRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PRow::Ext(e) => f.write_str(e),
            PRow::RootMomentum => f.write_str("p_root"),
        }
    }
}

/// Couplings of the external positions and the root hypermomentum to the
/// integration variables of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMatrix {
    pub rows: Vec<PRow>,
    pub cols: Vec<Label>,
    pub entries: Vec<Vec<Poly>>,
}

/// External couplings. An external slot `e` at vertex `V` meets every line
/// end at slot `i` of `V` through the vertex phase with weight
/// `2 s (-1)^(i+e+1) omega(i, e)`, times the corner sign on `u` and 1 on
/// `v`; it meets `p_V` with `(-1)^(e+1)`. The root momentum row collects the
/// root's corner sums.
pub fn build_p(g: &RibbonGraph) -> Result<PMatrix, MatrixError> {
    if g.num_externals() == 0 {
        return Err(MatrixError::NoExternals);
    }
    let cols = b_labels(g);
    let l = g.num_lines();
    let non_root = g.non_root_vertices();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (label, c) in g.externals() {
        let mut row = vec![Poly::zero(); cols.len()];
        for (i, a, ea) in ends_at(g, c.vertex) {
            let f = if (i + c.slot + 1) % 2 == 0 { 2 } else { -2 } * omega(i, c.slot);
            let fs = &Poly::from_int(f) * &Poly::s();
            row[a as usize - 1] += fs.scale(&int(ea));
            row[l + a as usize - 1] += fs;
        }
        if let Some(k) = non_root.iter().position(|&v| v == c.vertex) {
            row[2 * l + k] = Poly::from_int(c.sign());
        }
        rows.push(PRow::Ext(label.clone()));
        entries.push(row);
    }
    let mut row = vec![Poly::zero(); cols.len()];
    for (_, a, ea) in ends_at(g, g.root()) {
        row[a as usize - 1] += Poly::one();
        row[l + a as usize - 1] += Poly::from_int(ea);
    }
    rows.push(PRow::RootMomentum);
    entries.push(row);
    Ok(PMatrix {
        rows,
        cols,
        entries,
    })
}

/// `B'` restricted to the short variables of a leading set `J0` and the loop
/// long variables, after integrating out the hypermomenta and solving the
/// vertex constraints for the tree long variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub tree: RootedTree,
    pub rosette: Rosette,
    /// Lines of `J0`, innermost first.
    pub face_lines: Vec<LineId>,
    /// Remaining loop lines, pair by pair.
    pub genus_lines: Vec<LineId>,
    pub pairs: Vec<(LineId, LineId)>,
    /// Indices ordered `u_f1, w_f1, u_f2, w_f2, ..., w_g1, w_g2, ...`.
    pub matrix: SkewPolyMatrix,
}

impl Reduction {
    /// The leading closed form `2^g prod 2(W - eps(l))` over the face lines.
    pub fn closed_form(&self) -> Poly {
        let mut p = Poly::from_int(1i64 << self.pairs.len());
        for l in &self.face_lines {
            let e = self.rosette.loop_sign[l];
            p = &p * &(&Poly::from_int(2) * &(Poly::omega() - Poly::from_int(e)));
        }
        p
    }

    pub fn is_planar(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Builds the reduction for a leading set `J0`, using the given spanning tree
/// of the complement (or the lexicographically first one).
pub fn reduce(
    g: &RibbonGraph,
    j0: &BTreeSet<LineId>,
    tree: Option<RootedTree>,
) -> Result<Reduction, MatrixError> {
    let tree = match tree {
        Some(t) => t,
        None => {
            let allowed: BTreeSet<LineId> = g.line_ids().filter(|l| !j0.contains(l)).collect();
            crate::ribbon::RootedTree::first_within(g, &allowed)
                .ok_or_else(|| MatrixError::BadTree(format!("{allowed:?}")))?
        }
    };
    if tree.tree_lines.iter().any(|l| j0.contains(l)) {
        return Err(MatrixError::BadTree(format!("{:?}", tree.tree_lines)));
    }
    let rosette = Rosette::build(g, &tree);
    let mut face_lines: Vec<LineId> = j0.iter().copied().collect();
    face_lines.sort_by_key(|l| {
        let (s, e) = rosette.span[l];
        (e - s, *l)
    });
    let pairs = nice_crossings(&rosette.remove_lines(j0))?;
    let genus_lines: Vec<LineId> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let matrix = read_rosette(&rosette, &face_lines, &genus_lines);
    Ok(Reduction {
        tree,
        rosette,
        face_lines,
        genus_lines,
        pairs,
        matrix,
    })
}

fn reduced_labels(face_lines: &[LineId], genus_lines: &[LineId]) -> Vec<Label> {
    face_lines
        .iter()
        .flat_map(|&l| [Label::U(l), Label::W(l)])
        .chain(genus_lines.iter().map(|&l| Label::W(l)))
        .collect()
}

/// Entries of the reduced matrix read off the rosette: the couplings depend
/// only on the relative position of two loop lines and their signs.
pub fn read_rosette(r: &Rosette, face_lines: &[LineId], genus_lines: &[LineId]) -> SkewPolyMatrix {
    use crate::ribbon::Relation::*;
    let labels = reduced_labels(face_lines, genus_lines);
    let mut m = SkewPolyMatrix::zeros(labels.clone());
    let eps = |l: LineId| r.loop_sign[&l];
    for (i, &a) in labels.iter().enumerate() {
        for (j, &b) in labels.iter().enumerate().skip(i + 1) {
            let x: Poly = match (a, b) {
                (Label::U(p), Label::W(q)) | (Label::W(q), Label::U(p)) => {
                    let val = if p == q {
                        &Poly::from_int(2) * &(Poly::omega() - Poly::from_int(eps(p)))
                    } else {
                        match r.relation(p, q) {
                            Inside => Poly::from_int(-4 * eps(q)),
                            CrossesFirst | CrossesSecond => Poly::from_int(-2 * eps(q)),
                            _ => Poly::zero(),
                        }
                    };
                    if matches!(a, Label::U(_)) {
                        val
                    } else {
                        -val
                    }
                }
                (Label::U(p), Label::U(q)) => Poly::from_int(match r.relation(p, q) {
                    Before => -4,
                    After => 4,
                    CrossesFirst => -2,
                    CrossesSecond => 2,
                    Inside | Contains => 0,
                }),
                (Label::W(p), Label::W(q)) => Poly::from_int(match r.relation(p, q) {
                    CrossesFirst => -2 * eps(p) * eps(q),
                    CrossesSecond => 2 * eps(p) * eps(q),
                    _ => 0,
                }),
                _ => unreachable!("reduced matrix has only u and w indices"),
            };
            m.set(i, j, x);
        }
    }
    m
}

/// The same reduced matrix computed algebraically from `B'`: each tree long
/// variable is replaced by `v_k = -eps(k) [sum_{J0} n_k(l) u_l + sum_loop
/// eps_k(l) w_l]`, where `n_k(l)` counts the ends of `l` in the branch of `k`.
pub fn substitute_tree(
    g: &RibbonGraph,
    bprime: &SkewPolyMatrix,
    tree: &RootedTree,
    face_lines: &[LineId],
    genus_lines: &[LineId],
) -> SkewPolyMatrix {
    let labels = reduced_labels(face_lines, genus_lines);
    let loop_lines: Vec<LineId> = g.line_ids().filter(|l| !tree.is_tree_line(*l)).collect();
    let mut columns: Vec<(Label, BTreeMap<Label, Poly>)> = Vec::new();
    for &lab in &labels {
        let mut comb = BTreeMap::new();
        match lab {
            Label::U(l) => {
                comb.insert(Label::U(l), Poly::one());
                for (&k, &tl) in &tree.toward_root {
                    let n = tree.branch_multiplicity(g, k, l);
                    if n != 0 {
                        comb.insert(Label::V(tl), Poly::from_int(-tree.tree_sign[&tl] * n));
                    }
                }
            }
            Label::W(l) => {
                comb.insert(Label::V(l), Poly::one());
                for (&k, &tl) in &tree.toward_root {
                    let e = tree.branch_sign(g, k, l);
                    if e != 0 {
                        comb.insert(Label::V(tl), Poly::from_int(-tree.tree_sign[&tl] * e));
                    }
                }
            }
            _ => unreachable!(),
        }
        columns.push((lab, comb));
    }
    debug_assert!(loop_lines.len() == face_lines.len() + genus_lines.len());
    bprime.congruence(&columns)
}

/// One step of the fourth move: `w` indices of a genus pair and the
/// multiples of them added to every other index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilkStep {
    pub pair: (LineId, LineId),
    pub pivot: Poly,
    /// `(index label, coefficient of w_a, coefficient of w_b)`.
    pub shifts: Vec<(Label, Poly, Poly)>,
}

/// Decouples every genus pair from the rest of the reduced matrix by a unit
/// triangular change of variables, which leaves the Pfaffian unchanged.
pub fn fourth_filk(red: &Reduction) -> Result<(SkewPolyMatrix, Vec<FilkStep>), MatrixError> {
    let mut m = red.matrix.clone();
    let mut steps = Vec::new();
    for &(a, b) in &red.pairs {
        let ia = m.index_of(Label::W(a)).expect("genus index");
        let ib = m.index_of(Label::W(b)).expect("genus index");
        let pivot = m.get(ia, ib).clone();
        let c = match pivot.as_constant() {
            Some(c) if c != int(0) => c,
            _ => {
                return Err(MatrixError::BadPivot {
                    a,
                    b,
                    c: pivot.to_string(),
                })
            }
        };
        let inv = c.recip();
        let mut shifts = Vec::new();
        for k in 0..m.dim() {
            if k == ia || k == ib {
                continue;
            }
            let alpha = m.get(k, ib).scale(&-inv.clone());
            let beta = m.get(k, ia).scale(&inv);
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            shifts.push((m.labels()[k], alpha, beta));
        }
        // x_k -> x_k + alpha_k x_a + beta_k x_b, applied as a congruence.
        let d = m.dim();
        let mut cols: Vec<(Label, BTreeMap<Label, Poly>)> = (0..d)
            .map(|k| {
                (
                    m.labels()[k],
                    BTreeMap::from([(m.labels()[k], Poly::one())]),
                )
            })
            .collect();
        for (lab, alpha, beta) in &shifts {
            let k = m.index_of(*lab).unwrap();
            cols[k].1.insert(Label::W(a), alpha.clone());
            cols[k].1.insert(Label::W(b), beta.clone());
        }
        m = m.congruence(&cols);
        steps.push(FilkStep {
            pair: (a, b),
            pivot,
            shifts,
        });
    }
    Ok((m, steps))
}

/// The closed form read off the matrix after the fourth move: a factor
/// `|pivot| = 2` per genus pair times the diagonal `u_l w_l` entries of the
/// face lines. When a face line crosses only one line of a genus pair the
/// move flips the sign in front of `W`'s partner, so these diagonals need not
/// match the rosette loop signs.
pub fn filk_closed_form(filk: &SkewPolyMatrix, red: &Reduction) -> Poly {
    let mut p = Poly::one();
    for &(a, b) in &red.pairs {
        let ia = filk.index_of(Label::W(a)).expect("genus index");
        let ib = filk.index_of(Label::W(b)).expect("genus index");
        let c = filk.get(ia, ib).as_constant().unwrap_or_default();
        p = p.scale(&(if c < int(0) { -c } else { c }));
    }
    for &l in &red.face_lines {
        let iu = filk.index_of(Label::U(l)).expect("face index");
        let iw = filk.index_of(Label::W(l)).expect("face index");
        p = &p * filk.get(iu, iw);
    }
    p
}

/// Which end of line `l` lies at corner `c`, if any.
pub fn end_at(g: &RibbonGraph, c: Corner) -> Option<(LineId, End)> {
    match g.slot(c) {
        Slot::Line { line, end } => Some((*line, *end)),
        Slot::Ext(_) => None,
    }
}

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{Corner, End, LineId, RibbonGraph, RootedTree, Slot};

/// One slot on the rosette cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RosetteEntry {
    Line {
        line: LineId,
        end: End,
        corner: Corner,
    },
    Ext {
        label: String,
        corner: Corner,
    },
}

impl RosetteEntry {
    pub fn corner(&self) -> Corner {
        match self {
            RosetteEntry::Line { corner, .. } | RosetteEntry::Ext { corner, .. } => *corner,
        }
    }

    pub fn line(&self) -> Option<LineId> {
        match self {
            RosetteEntry::Line { line, .. } => Some(*line),
            RosetteEntry::Ext { .. } => None,
        }
    }
}

/// Relative position of two loop lines on the rosette, read on the linear
/// order starting from the root's first slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// The first line ends before the second starts.
    Before,
    /// The second line ends before the first starts.
    After,
    /// The first line lies inside the second.
    Inside,
    /// The second line lies inside the first.
    Contains,
    /// The lines cross and the first starts earlier.
    CrossesFirst,
    /// The lines cross and the second starts earlier.
    CrossesSecond,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RosetteError {
    #[error("nice crossings need a single-face rosette, found {0} faces")]
    NotSingleFace(usize),
    #[error("no nice crossing found among remaining lines {0:?}")]
    Stuck(Vec<LineId>),
}

/// The single vertex left after contracting every tree line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rosette {
    pub cycle: Vec<RosetteEntry>,
    /// `(start, end)` positions of every loop line on `cycle`.
    pub span: BTreeMap<LineId, (usize, usize)>,
    /// `+1` if the line runs from its tail to its head along the cycle.
    pub loop_sign: BTreeMap<LineId, i64>,
    /// `epsilon_k(l)` for non-root vertex `k` and loop line `l`.
    pub branch_sign: BTreeMap<(usize, LineId), i64>,
}

impl Rosette {
    pub fn build(g: &RibbonGraph, tree: &RootedTree) -> Rosette {
        let cycle: Vec<RosetteEntry> = tree
            .corner_order
            .iter()
            .filter_map(|&c| match g.slot(c) {
                Slot::Line { line, end } if !tree.is_tree_line(*line) => Some(RosetteEntry::Line {
                    line: *line,
                    end: *end,
                    corner: c,
                }),
                Slot::Line { .. } => None,
                Slot::Ext(label) => Some(RosetteEntry::Ext {
                    label: label.clone(),
                    corner: c,
                }),
            })
            .collect();
        let mut branch_sign = BTreeMap::new();
        for l in g.line_ids().filter(|l| !tree.is_tree_line(*l)) {
            for &k in tree.toward_root.keys() {
                branch_sign.insert((k, l), tree.branch_sign(g, k, l));
            }
        }
        let mut r = Rosette {
            cycle,
            span: BTreeMap::new(),
            loop_sign: BTreeMap::new(),
            branch_sign,
        };
        r.index();
        r
    }

    fn index(&mut self) {
        let mut first: BTreeMap<LineId, (usize, End)> = BTreeMap::new();
        self.span.clear();
        self.loop_sign.clear();
        for (p, e) in self.cycle.iter().enumerate() {
            if let RosetteEntry::Line { line, end, .. } = e {
                match first.get(line) {
                    None => {
                        first.insert(*line, (p, *end));
                    }
                    Some(&(s, start_end)) => {
                        self.span.insert(*line, (s, p));
                        let sign = if start_end == End::Tail { 1 } else { -1 };
                        self.loop_sign.insert(*line, sign);
                    }
                }
            }
        }
    }

    pub fn loop_lines(&self) -> impl Iterator<Item = LineId> + '_ {
        self.span.keys().copied()
    }

    /// Signs of the cycle entries.
    pub fn signs(&self) -> Vec<i64> {
        self.cycle.iter().map(|e| e.corner().sign()).collect()
    }

    /// Whether `+` and `-` alternate around the cycle, starting with `+`.
    pub fn sign_alternates(&self) -> bool {
        let s = self.signs();
        s.len() % 2 == 0
            && s.iter()
                .enumerate()
                .all(|(k, &x)| x == if k % 2 == 0 { 1 } else { -1 })
    }

    pub fn relation(&self, a: LineId, b: LineId) -> Relation {
        let (sa, ea) = self.span[&a];
        let (sb, eb) = self.span[&b];
        if ea < sb {
            Relation::Before
        } else if eb < sa {
            Relation::After
        } else if sb < sa && ea < eb {
            Relation::Inside
        } else if sa < sb && eb < ea {
            Relation::Contains
        } else if sa < sb {
            Relation::CrossesFirst
        } else {
            Relation::CrossesSecond
        }
    }

    pub fn crosses(&self, a: LineId, b: LineId) -> bool {
        matches!(
            self.relation(a, b),
            Relation::CrossesFirst | Relation::CrossesSecond
        )
    }

    /// Whether an external slot at cycle position `p` lies under line `l`.
    pub fn covers(&self, l: LineId, p: usize) -> bool {
        let (s, e) = self.span[&l];
        s < p && p < e
    }

    /// Number of faces of the one-vertex ribbon graph.
    pub fn face_count(&self) -> usize {
        let len = self.cycle.len();
        if len == 0 {
            return 1;
        }
        let mut partner: Vec<usize> = (0..len).collect();
        for &(s, e) in self.span.values() {
            partner[s] = e;
            partner[e] = s;
        }
        let mut seen = vec![false; len];
        let mut faces = 0;
        for start in 0..len {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = (partner[p] + 1) % len;
            }
        }
        faces
    }

    /// The rosette with the given loop lines deleted.
    pub fn remove_lines(&self, lines: &BTreeSet<LineId>) -> Rosette {
        let mut r = Rosette {
            cycle: self
                .cycle
                .iter()
                .filter(|e| e.line().map_or(true, |l| !lines.contains(&l)))
                .cloned()
                .collect(),
            span: BTreeMap::new(),
            loop_sign: BTreeMap::new(),
            branch_sign: self
                .branch_sign
                .iter()
                .filter(|((_, l), _)| !lines.contains(l))
                .map(|(k, v)| (*k, *v))
                .collect(),
        };
        r.index();
        r
    }
}

/// Pairs `(a, b)` of a single-face rosette where the start of `b` sits
/// immediately before the end of `a`, each taken out as a handle before the
/// next is looked for. There are exactly `g` of them.
pub fn nice_crossings(r: &Rosette) -> Result<Vec<(LineId, LineId)>, RosetteError> {
    let faces = r.face_count();
    if faces != 1 {
        return Err(RosetteError::NotSingleFace(faces));
    }
    // Line ends in cycle order.
    let word: Vec<LineId> = r.cycle.iter().filter_map(|e| e.line()).collect();
    let mut pairs = Vec::new();
    if search(&word, &mut pairs) {
        Ok(pairs)
    } else {
        let mut left = word;
        left.sort();
        left.dedup();
        Err(RosetteError::Stuck(left))
    }
}

/// Extracts nice crossings one at a time. Taking the handle `a b` out of
/// `A a B b C a D b E` leaves `A D C B E`; a greedy choice can still strand
/// lines that never cross, so this backtracks.
fn search(word: &[LineId], pairs: &mut Vec<(LineId, LineId)>) -> bool {
    if word.is_empty() {
        return true;
    }
    let first = |l: LineId| word.iter().position(|&x| x == l).unwrap();
    for p in 0..word.len() - 1 {
        let (b, a) = (word[p], word[p + 1]);
        // The start of b immediately precedes the end of a.
        if a == b || first(b) != p || first(a) == p + 1 {
            continue;
        }
        let pos = |l: LineId| {
            let i = first(l);
            (i, i + 1 + word[i + 1..].iter().position(|&x| x == l).unwrap())
        };
        let ((a1, a2), (b1, b2)) = (pos(a), pos(b));
        let seg = |x: usize, y: usize| word[x..y].iter().copied();
        let rest: Vec<LineId> = seg(0, a1)
            .chain(seg(a2 + 1, b2))
            .chain(seg(b1 + 1, a2))
            .chain(seg(a1 + 1, b1))
            .chain(seg(b2 + 1, word.len()))
            .collect();
        pairs.push((a, b));
        if search(&rest, pairs) {
            return true;
        }
        pairs.pop();
    }
    false
}

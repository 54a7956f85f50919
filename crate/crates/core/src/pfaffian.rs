//! Exact Pfaffians and determinants of polynomial matrices.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::polyring::Poly;
use crate::qmatrix::SkewPolyMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaffianError {
    #[error("Pfaffian of odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix of dimension {0} exceeds the 64-index limit")]
    TooLarge(usize),
    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },
    #[error("index {0} deleted twice")]
    Duplicate(usize),
}

/// Indices removed symmetrically from rows and columns, plus an optional
/// extra index removed last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinorSpec {
    pub deleted: Vec<usize>,
    pub extra: Option<usize>,
}

impl MinorSpec {
    pub fn new(deleted: impl IntoIterator<Item = usize>) -> Self {
        MinorSpec {
            deleted: deleted.into_iter().collect(),
            extra: None,
        }
    }

    pub fn with_extra(mut self, tau: usize) -> Self {
        self.extra = Some(tau);
        self
    }

    fn all(&self) -> impl Iterator<Item = usize> + '_ {
        self.deleted.iter().copied().chain(self.extra)
    }
}

/// Pfaffian by expansion along the first remaining index, memoized on the
/// set of remaining indices. The empty Pfaffian is 1.
pub fn pfaffian(m: &SkewPolyMatrix) -> Result<Poly, PfaffianError> {
    let d = m.dim();
    if d % 2 == 1 {
        return Err(PfaffianError::OddDimension(d));
    }
    if d > 64 {
        return Err(PfaffianError::TooLarge(d));
    }
    let full = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let mut cache = PfaffianCache::default();
    Ok(cache.pf(m, full))
}

/// Memo table for Pfaffians of principal submatrices of one matrix.
#[derive(Default)]
pub struct PfaffianCache {
    memo: HashMap<u64, Poly>,
}

impl PfaffianCache {
    /// Pfaffian of the principal submatrix on the indices set in `mask`.
    pub fn pf(&mut self, m: &SkewPolyMatrix, mask: u64) -> Poly {
        if mask == 0 {
            return Poly::one();
        }
        if mask.count_ones() % 2 == 1 {
            return Poly::zero();
        }
        if let Some(p) = self.memo.get(&mask) {
            return p.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u64 << i);
        let mut acc = Poly::zero();
        let mut bits = rest;
        let mut rank = 0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = m.get(i, j);
            if !a.is_zero() {
                let sub = self.pf(m, rest & !(1u64 << j));
                if !sub.is_zero() {
                    let term = a * &sub;
                    if rank % 2 == 0 {
                        acc += term;
                    } else {
                        acc = &acc - &term;
                    }
                }
            }
            rank += 1;
        }
        self.memo.insert(mask, acc.clone());
        acc
    }
}

/// The principal submatrix left after deleting the indices of `spec`.
pub fn minor(m: &SkewPolyMatrix, spec: &MinorSpec) -> Result<SkewPolyMatrix, PfaffianError> {
    let mut gone = BTreeSet::new();
    for i in spec.all() {
        if i >= m.dim() {
            return Err(PfaffianError::OutOfRange {
                index: i,
                dim: m.dim(),
            });
        }
        if !gone.insert(i) {
            return Err(PfaffianError::Duplicate(i));
        }
    }
    let keep: Vec<usize> = (0..m.dim()).filter(|i| !gone.contains(i)).collect();
    Ok(m.submatrix(&keep))
}

/// Sign of the permutation of `1..=d` listing the kept indices in order,
/// then `tau`, then the indices of `set` in decreasing order. Indices are
/// 1-based.
pub fn perm_sign(set: &[usize], tau: usize, d: usize) -> i64 {
    let mut tail: Vec<usize> = set.to_vec();
    tail.sort_unstable_by(|a, b| b.cmp(a));
    let mut perm: Vec<usize> = (1..=d).filter(|i| *i != tau && !set.contains(i)).collect();
    perm.push(tau);
    perm.extend(tail);
    permutation_parity(&perm)
}

/// `+1` for an even arrangement of distinct numbers, `-1` for an odd one.
pub fn permutation_parity(perm: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn det(m: &SkewPolyMatrix) -> Poly {
    det_square(m.rows())
}

/// Division-free determinant (Berkowitz): the characteristic polynomial is
/// grown one leading principal submatrix at a time by Toeplitz products.
pub fn det_square(a: &[Vec<Poly>]) -> Poly {
    let n = a.len();
    // Coefficients of det(xI - A_k), highest degree first.
    let mut p: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        // q_0 = 1, q_1 = -a_kk, q_{j+2} = -R A_k^j C.
        let mut q = Vec::with_capacity(k + 2);
        q.push(Poly::one());
        q.push(-&a[k][k]);
        let mut col: Vec<Poly> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let r: Poly = (0..k).map(|j| &a[k][j] * &col[j]).sum();
            q.push(-r);
            col = (0..k)
                .map(|i| (0..k).map(|j| &a[i][j] * &col[j]).sum())
                .collect();
        }
        let next: Vec<Poly> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k))
                    .filter(|j| i - j < q.len())
                    .map(|j| &q[i - j] * &p[j])
                    .sum()
            })
            .collect();
        p = next;
    }
    if n % 2 == 0 {
        p[n].clone()
    } else {
        -&p[n]
    }
}

#[cfg(test)]
pub(crate) fn leibniz(a: &[Vec<Poly>]) -> Poly {
    fn go(
        a: &[Vec<Poly>],
        row: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        acc: &mut Poly,
    ) {
        let n = a.len();
        if row == n {
            let mut term = Poly::from_int(permutation_parity(perm));
            for (r, &c) in perm.iter().enumerate() {
                term = &term * &a[r][c];
            }
            *acc += term;
            return;
        }
        for c in 0..n {
            if !used[c] {
                used[c] = true;
                perm.push(c);
                go(a, row + 1, used, perm, acc);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut acc = Poly::zero();
    go(a, 0, &mut vec![false; a.len()], &mut Vec::new(), &mut acc);
    acc
}

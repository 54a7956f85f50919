//! Exact rational linear algebra at sample points, independent of the
//! Pfaffian expansions: determinants of `A + B`, the symmetric part of its
//! inverse sandwiched by `P`, and the fourfold Gaussian-rational matrix `Q`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polyring::{int, Point, Poly, PolyError, Rat, Var};
use crate::qmatrix::{build_a, build_b, build_p, DiagA, MatrixError, PMatrix, SkewPolyMatrix};
use crate::ribbon::RibbonGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("t{0} = 0 is a pole of A")]
    ZeroT(u32),
    #[error("matrix is singular at this point; resample")]
    Singular,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Dense matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn zeros(r: usize, c: usize) -> Self {
        RatMatrix {
            rows: vec![vec![Rat::zero(); c]; r],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.ncols(), self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.nrows(), other.ncols());
        for i in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols() {
                    out.rows[i][j] += a * &other.rows[k][j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.transpose().rows
    }

    /// Determinant by Bareiss elimination on the integer matrix obtained by
    /// clearing each row's denominators.
    pub fn det(&self) -> Rat {
        let n = self.nrows();
        if n == 0 {
            return Rat::one();
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| {
                let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return Rat::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Rat::new(sign * &m[n - 1][n - 1], scale)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix, OracleError> {
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut inv = RatMatrix::zeros(n, n).rows;
        for (i, row) in inv.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(OracleError::Singular)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].recip();
            for j in 0..n {
                a[col][j] *= &p;
                inv[col][j] *= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let x = &f * &a[col][j];
                        a[r][j] -= x;
                        let y = &f * &inv[col][j];
                        inv[r][j] -= y;
                    }
                }
            }
        }
        Ok(RatMatrix { rows: inv })
    }
}

/// A sample point for `(t_1..t_L, s, W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub t: Vec<Rat>,
    pub s: Rat,
    pub omega: Rat,
}

impl SamplePoint {
    pub fn to_point(&self) -> Point {
        let mut p = Point::new();
        for (i, t) in self.t.iter().enumerate() {
            p.insert(Var::T(i as u32 + 1), t.clone());
        }
        p.insert(Var::S, self.s.clone());
        p.insert(Var::Omega, self.omega.clone());
        p
    }

    pub fn t_product(&self) -> Rat {
        self.t.iter().fold(Rat::one(), |acc, t| acc * t)
    }
}

impl std::fmt::Display for SamplePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, t) in self.t.iter().enumerate() {
            write!(f, "t{}={} ", i + 1, t)?;
        }
        write!(f, "s={} W={}", self.s, self.omega)
    }
}

/// A rational `a/b` with `1 <= b <= 97`, strictly inside `(0, 1)`.
pub fn unit_interval<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    let b: i64 = rng.gen_range(2..=97);
    let a: i64 = rng.gen_range(1..b);
    Rat::new(a.into(), b.into())
}

/// A positive rational with numerator and denominator at most 97.
pub fn positive<R: Rng + ?Sized>(rng: &mut R) -> Rat {
    let a: i64 = rng.gen_range(1..=97);
    let b: i64 = rng.gen_range(1..=97);
    Rat::new(a.into(), b.into())
}

/// Seeded generic points: `t` in `(0, 1)`, `s` positive, `W` in `[0, 2)`.
pub fn sample_points(seed: u64, num_lines: usize, count: usize) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SamplePoint {
            t: (0..num_lines).map(|_| unit_interval(&mut rng)).collect(),
            s: positive(&mut rng),
            omega: unit_interval(&mut rng) * int(2),
        })
        .collect()
}

pub fn eval_matrix(m: &SkewPolyMatrix, point: &Point) -> Result<RatMatrix, OracleError> {
    let rows = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|p| p.eval(point)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix { rows })
}

fn a_plus_b(
    a: &DiagA,
    b: &RatMatrix,
    point: &SamplePoint,
    sign: i64,
) -> Result<RatMatrix, OracleError> {
    let mut m = b.scale(&int(sign));
    for (i, t) in point.t.iter().enumerate() {
        if t.is_zero() {
            return Err(OracleError::ZeroT(i as u32 + 1));
        }
    }
    for i in 0..a.entries.len() {
        m.rows[i][i] += a.eval_at(i, &point.t);
    }
    Ok(m)
}

fn b_at(g: &RibbonGraph, point: &SamplePoint) -> Result<RatMatrix, OracleError> {
    let (b, _) = build_b(g);
    eval_matrix(&b, &point.to_point())
}

/// `det(A + B)` at a point.
pub fn det_ab_at(g: &RibbonGraph, point: &SamplePoint) -> Result<Rat, OracleError> {
    let b = b_at(g, point)?;
    Ok(a_plus_b(&build_a(g), &b, point, 1)?.det())
}

/// `HU` at a point computed as `det(A + B) prod t`.
pub fn hu_at(g: &RibbonGraph, point: &SamplePoint) -> Result<Rat, OracleError> {
    Ok(det_ab_at(g, point)? * point.t_product())
}

pub fn eval_p(p: &PMatrix, point: &Point) -> Result<RatMatrix, OracleError> {
    let rows = p
        .entries
        .iter()
        .map(|r| r.iter().map(|x| x.eval(point)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatMatrix { rows })
}

/// `P R P^T` with `R = ((A + B)^-1 + (A - B)^-1) / 2`, the real part of the
/// external quadratic form.
pub fn pqinvpt_at(g: &RibbonGraph, point: &SamplePoint) -> Result<RatMatrix, OracleError> {
    let a = build_a(g);
    let b = b_at(g, point)?;
    let plus = a_plus_b(&a, &b, point, 1)?.inverse()?;
    let minus = a_plus_b(&a, &b, point, -1)?.inverse()?;
    let r = plus.add(&minus).scale(&Rat::new(1.into(), 2.into()));
    let p = eval_p(&build_p(g)?, &point.to_point())?;
    Ok(p.mul(&r).mul(&p.transpose()))
}

type Gauss = Complex<Rat>;

fn gauss_det(mut m: Vec<Vec<Gauss>>) -> Gauss {
    let n = m.len();
    let mut det = Gauss::new(Rat::one(), Rat::zero());
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Gauss::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / p.clone();
            for j in col..n {
                let x = f.clone() * m[col][j].clone();
                m[r][j] = m[r][j].clone() - x;
            }
        }
    }
    det
}

/// Checks `det(A (x) I_4 - B (x) sigma) = det(A + B)^4` over the Gaussian
/// rationals, with `sigma = diag(sigma_2, sigma_2)` and `sigma_2` the second
/// Pauli matrix.
pub fn detq_check(g: &RibbonGraph, point: &SamplePoint) -> Result<bool, OracleError> {
    let a = build_a(g);
    let b = b_at(g, point)?;
    let ab = a_plus_b(&a, &b, point, 1)?;
    let d = b.nrows();
    let zero = Gauss::zero();
    let i = Gauss::new(Rat::zero(), Rat::one());
    let mut sigma = vec![vec![zero.clone(); 4]; 4];
    for k in [0, 2] {
        sigma[k][k + 1] = -i.clone();
        sigma[k + 1][k] = i.clone();
    }
    let mut q = vec![vec![zero.clone(); 4 * d]; 4 * d];
    for r in 0..d {
        for c in 0..d {
            for x in 0..4 {
                for y in 0..4 {
                    let mut v = zero.clone();
                    if r == c && x == y {
                        v = v + Gauss::new(a.eval_at(r, &point.t), Rat::zero());
                    }
                    if !b.rows[r][c].is_zero() && !sigma[x][y].is_zero() {
                        v = v - sigma[x][y].clone() * Gauss::new(b.rows[r][c].clone(), Rat::zero());
                    }
                    q[4 * r + x][4 * c + y] = v;
                }
            }
        }
    }
    let lhs = gauss_det(q);
    let rhs = num_traits::pow::pow(ab.det(), 4);
    Ok(lhs == Gauss::new(rhs, Rat::zero()))
}

/// Evaluates a polynomial at a sample point.
pub fn eval_at(p: &Poly, point: &SamplePoint) -> Result<Rat, OracleError> {
    Ok(p.eval(&point.to_point())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;
    use crate::ribbon::{End, Slot};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        }
    }

    fn tadpole() -> RibbonGraph {
        let h = Slot::Line { line: 1, end: End::Head };
        let t = Slot::Line { line: 1, end: End::Tail };
        RibbonGraph::new(
            "tp",
            vec![("V0".into(), vec![h, t, Slot::Ext("a".into()), Slot::Ext("b".into())])],
            "V0",
        )
        .unwrap()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(m(&[&[2, 1], &[1, 3]]).det(), int(5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), int(0));
        let r = RatMatrix {
            rows: vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]],
        };
        assert_eq!(r.det(), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn antisymmetric_odd_det_is_zero() {
        assert_eq!(m(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]]).det(), int(0));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        let id = a.mul(&inv);
        assert_eq!(id, m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(OracleError::Singular));
    }

    #[test]
    fn zero_t_rejected() {
        let p = SamplePoint {
            t: vec![int(0)],
            s: int(1),
            omega: int(0),
        };
        assert_eq!(det_ab_at(&tadpole(), &p), Err(OracleError::ZeroT(1)));
    }

    #[test]
    fn detq_on_tadpole() {
        for p in sample_points(5, 1, 3) {
            assert!(detq_check(&tadpole(), &p).unwrap());
        }
    }

    #[test]
    fn diagonal_case_of_detq() {
        // B = 0 makes Q = A (x) I_4, so det Q is the fourth power of prod A.
        let q: Vec<Vec<Gauss>> = (0..4)
            .map(|r| {
                (0..4)
                    .map(|c| {
                        if r == c {
                            Gauss::new(rat(3, 2), Rat::zero())
                        } else {
                            Gauss::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(gauss_det(q), Gauss::new(rat(81, 16), Rat::zero()));
    }

    #[test]
    fn pqinvpt_is_symmetric() {
        for p in sample_points(9, 1, 3) {
            assert!(pqinvpt_at(&tadpole(), &p).unwrap().is_symmetric());
        }
    }

    #[test]
    fn samples_are_deterministic_and_in_range() {
        let a = sample_points(42, 3, 5);
        assert_eq!(a, sample_points(42, 3, 5));
        for p in &a {
            for t in &p.t {
                assert!(*t > int(0) && *t < int(1));
                assert!(*t.denom() <= BigInt::from(97));
            }
        }
    }
}

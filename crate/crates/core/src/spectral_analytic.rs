//! Closed-form spectrum of `sigma_0^G` and the determinant of its `d x d`
//! diagonal block.
//!
//! The partial transpose of `p |psi_0A><psi_0A| + (1-p) P_S/d_S` has three
//! distinct eigenvalues:
//!
//! | value                          | multiplicity      |
//! |--------------------------------|-------------------|
//! | `(1 + p d) / [d(d+1)]`         | `d(d+1)/2`        |
//! | `[1 - (d+2) p] / [d(d+1)]`     | `(d+1)(d-2)/2`    |
//! | `(1 - 2p) / d`                 | `1`               |
//!
//! The non-trivial part is the `d x d` block spanned by `|i,i>`, whose
//! characteristic determinant has diagonal `a`, value `c` inside each
//! `2 x 2` diagonal pair and `b` elsewhere. Its value is available three ways
//! (dense elimination, a two-step recurrence and a product formula), all
//! generic over [`Scalar`] so they run in `f64` or exact rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{domain, Result};

/// Field used by the closed-form evaluations.
pub trait Scalar: Clone + Num + Signed + PartialOrd + Debug {
    fn from_int(n: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `numer / denom` as an exact rational.
pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn int<T: Scalar>(n: usize) -> T {
    T::from_int(n as i64)
}

fn require_even(d: usize) -> Result<()> {
    if d < 2 || !d.is_multiple_of(2) {
        return domain(format!("dimension must be even and at least 2, got {d}"));
    }
    Ok(())
}

fn require_unit_interval<T: Scalar>(p: &T) -> Result<()> {
    if *p < T::zero() || *p > T::one() {
        return domain(format!("p must lie in [0, 1], got {p:?}"));
    }
    Ok(())
}

fn pow<T: Scalar>(x: &T, n: usize) -> T {
    num_traits::pow(x.clone(), n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(1 + p d)/[d(d+1)]`, from `a - c = 0`.
    Positive,
    /// `[1 - (d+2)p]/[d(d+1)]`, from `a - 2b + c = 0`; sets the PPT threshold for `d >= 4`.
    Threshold,
    /// `(1 - 2p)/d = (d+1)(1-2p)/[d(d+1)]`, from `a + (d-2)b + c = 0`.
    Single,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenFamily<T> {
    pub family: Family,
    pub value: T,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormSpectrum<T> {
    pub families: Vec<EigenFamily<T>>,
    pub total_dim: usize,
}

impl<T: Scalar> ClosedFormSpectrum<T> {
    /// All `d^2` eigenvalues, ascending.
    pub fn expanded(&self) -> Vec<T> {
        let mut out: Vec<T> = self
            .families
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.value.clone(), f.multiplicity))
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).expect("ordered scalars"));
        out
    }

    /// `sum value * multiplicity`, equal to `tr sigma_0^G = 1`.
    pub fn trace(&self) -> T {
        self.families
            .iter()
            .fold(T::zero(), |acc, f| acc + f.value.clone() * int::<T>(f.multiplicity))
    }

    /// Smallest value among families that actually occur.
    pub fn min_value(&self) -> T {
        self.families
            .iter()
            .filter(|f| f.multiplicity > 0)
            .map(|f| f.value.clone())
            .reduce(|a, b| if b < a { b } else { a })
            .expect("at least one family")
    }

    pub fn family(&self, which: Family) -> &EigenFamily<T> {
        self.families
            .iter()
            .find(|f| f.family == which)
            .expect("all three families are always listed")
    }
}

/// The three eigenvalue families of `sigma_0(d, p)^G`; for `d = 2` the
/// threshold family has multiplicity zero.
pub fn closed_form_spectrum<T: Scalar>(d: usize, p: T) -> Result<ClosedFormSpectrum<T>> {
    require_even(d)?;
    require_unit_interval(&p)?;
    let norm = int::<T>(d * (d + 1));
    let one = T::one();
    let positive = (one.clone() + p.clone() * int(d)) / norm.clone();
    let threshold = (one.clone() - p.clone() * int(d + 2)) / norm;
    let single = (one - p.clone() - p) / int(d);
    Ok(ClosedFormSpectrum {
        families: vec![
            EigenFamily {
                family: Family::Positive,
                value: positive,
                multiplicity: d * (d + 1) / 2,
            },
            EigenFamily {
                family: Family::Threshold,
                value: threshold,
                multiplicity: (d + 1) * (d - 2) / 2,
            },
            EigenFamily {
                family: Family::Single,
                value: single,
                multiplicity: 1,
            },
        ],
        total_dim: d * d,
    })
}

/// Largest `p` with `sigma_0(d, p)^G` PSD: `1/(d+2)` for `d >= 4`, `1/2` for `d = 2`.
pub fn ppt_threshold_analytic(d: usize) -> Result<f64> {
    Ok(Scalar::to_f64(&ppt_threshold_exact(d)?))
}

pub fn ppt_threshold_exact(d: usize) -> Result<BigRational> {
    require_even(d)?;
    Ok(if d == 2 {
        rational(1, 2)
    } else {
        rational(1, d as i64 + 2)
    })
}

/// `a, b, c` of the block determinant at eigenvalue candidate `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantSymbols<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> DeterminantSymbols<T> {
    /// `b = (1-p)/[d(d+1)]`, `a = 2b - lambda`, `c = b - p/d`.
    pub fn new(d: usize, p: T, lambda: T) -> Self {
        let b = (T::one() - p.clone()) / int(d * (d + 1));
        let a = b.clone() + b.clone() - lambda;
        let c = b.clone() - p / int(d);
        Self { a, b, c }
    }

    /// `e = a - b`.
    pub fn e(&self) -> T {
        self.a.clone() - self.b.clone()
    }

    /// `f = a - c`.
    pub fn f(&self) -> T {
        self.a.clone() - self.c.clone()
    }
}

/// The `d x d` block with diagonal `a`, `c` pairing `(2k, 2k+1)`, `b` elsewhere.
pub fn block_matrix<T: Scalar>(d: usize, a: &T, b: &T, c: &T) -> Vec<Vec<T>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        a.clone()
                    } else if i / 2 == j / 2 {
                        c.clone()
                    } else {
                        b.clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting on magnitude.
pub fn dense_determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                m[x][col]
                    .abs()
                    .partial_cmp(&m[y][col].abs())
                    .expect("ordered scalars")
            })
            .expect("non-empty range");
        if m[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let head = m[col][col].clone();
        det = det * head.clone();
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / head.clone();
            for k in col..n {
                let delta = factor.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - delta;
            }
        }
    }
    det
}

/// Largest block handled by [`determinant_direct`].
pub const DIRECT_MAX_DIM: usize = 12;

/// Dense elimination of the block determinant, `2 <= d <= 12`.
pub fn determinant_direct<T: Scalar>(d: usize, a: T, b: T, c: T) -> Result<T> {
    require_even(d)?;
    if d > DIRECT_MAX_DIM {
        return domain(format!("direct determinant supports d <= {DIRECT_MAX_DIM}, got {d}"));
    }
    Ok(dense_determinant(block_matrix(d, &a, &b, &c)))
}

/// `D_{d+4} = (a-c)(a-2b+c)[2 D_{d+2} - (a-c)(a-2b+c) D_d]`, seeded with
/// `D_2 = a^2 - c^2` and an eliminated `D_4`.
///
/// Loses accuracy when `a + (d+2)b + c` nearly cancels; prefer
/// [`determinant_closed_form`] near degenerate points.
pub fn determinant_recurrence<T: Scalar>(d: usize, a: T, b: T, c: T) -> Result<T> {
    require_even(d)?;
    let d2 = a.clone() * a.clone() - c.clone() * c.clone();
    if d == 2 {
        return Ok(d2);
    }
    let d4 = dense_determinant(block_matrix(4, &a, &b, &c));
    let fg = (a.clone() - c.clone()) * (a - b.clone() - b + c);
    let two = T::from_int(2);
    let (mut prev, mut cur) = (d2, d4);
    let mut n = 4;
    while n < d {
        let next = fg.clone() * (two.clone() * cur.clone() - fg.clone() * prev);
        prev = cur;
        cur = next;
        n += 2;
    }
    Ok(cur)
}

/// `D_d = (a-c)^{d/2} (a-2b+c)^{d/2-1} [a + (d-2)b + c]`.
pub fn determinant_closed_form<T: Scalar>(d: usize, a: T, b: T, c: T) -> Result<T> {
    require_even(d)?;
    let f = a.clone() - c.clone();
    let g = a.clone() - b.clone() - b.clone() + c.clone();
    let h = a + b * int(d - 2) + c;
    Ok(pow(&f, d / 2) * pow(&g, d / 2 - 1) * h)
}

/// Eigenvalues of `[[(1-p)/(d(d+1)), p/d], [p/d, (1-p)/(d(d+1))]]`:
/// `((1+pd)/[d(d+1)], [1-(d+2)p]/[d(d+1)])`.
pub fn two_by_two_block_eigs<T: Scalar>(d: usize, p: T) -> Result<(T, T)> {
    if d < 4 {
        return domain(format!("2x2 blocks exist only for d >= 4, got {d}"));
    }
    let norm = int::<T>(d * (d + 1));
    let plus = (T::one() + p.clone() * int(d)) / norm.clone();
    let minus = (T::one() - p * int(d + 2)) / norm;
    Ok((plus, minus))
}

/// Relative difference `|x - y| / max(|x|, |y|)`, zero when both vanish.
pub fn relative_error(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

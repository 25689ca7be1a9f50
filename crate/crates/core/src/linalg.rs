//! Exact linear algebra: rank over `Q(ζ_N)`, Smith normal form and integer
//! kernels over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::CyclotomicNumber;

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Converts a small-integer matrix into an [`IntMatrix`].
pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Rank over `Q(ζ_N)` by fraction-free elimination with column skipping.
pub fn rank_cyclotomic(m: &[Vec<CyclotomicNumber>]) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    if let Some(ints) = integral_rational_rows(m) {
        return rank_integer(&ints);
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<CyclotomicNumber>> = m.to_vec();
    let order = a[0][0].order();
    let mut prev_inv = CyclotomicNumber::one(order);
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        a.swap(rank, p);
        let prow = a[rank].clone();
        let pivot = prow[col].clone();
        for i in rank + 1..rows {
            let factor = a[i][col].clone();
            for j in col + 1..cols {
                let lhs = pivot.mul(&a[i][j]);
                let v = if factor.is_zero() || prow[j].is_zero() {
                    lhs
                } else {
                    lhs.sub(&factor.mul(&prow[j]))
                };
                a[i][j] = if v.is_zero() { v } else { v.mul(&prev_inv) };
            }
            a[i][col] = CyclotomicNumber::zero(order);
        }
        prev_inv = pivot.inv().expect("pivot is nonzero");
        rank += 1;
        col += 1;
    }
    rank
}

/// Rows cleared of denominators when every entry is rational.
fn integral_rational_rows(m: &[Vec<CyclotomicNumber>]) -> Option<IntMatrix> {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut qs = Vec::with_capacity(row.len());
        for z in row {
            qs.push(z.as_rational()?.clone());
        }
        let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        out.push(qs.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect());
    }
    Some(out)
}

/// Rank over `Q` of an integer matrix (Bareiss elimination with exact division).
pub fn rank_integer(m: &[Vec<BigInt>]) -> usize {
    if m.is_empty() || m[0].is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        let pivot = prow[col].clone();
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &pivot * &row[j] - &factor * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal of `D`, length `min(rows, cols)`; nonzero entries come first.
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }
}

/// Smith normal form `U·M·V = D` with `d_1 | d_2 | ...` and `U`, `V` unimodular.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v, rank, steps);
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            if let Some(i) = bad {
                let minus_one = -BigInt::one();
                row_axpy(&mut a, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        rank += 1;
    }
    finish(a, u, v, rank, steps)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix, rank: usize, steps: usize) -> SmithForm {
    let diagonal = (0..steps).map(|i| a[i][i].clone()).collect();
    SmithForm { diagonal, u, v, rank }
}

/// row[i] -= q * row[k]
fn row_axpy(a: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src = a[k].clone();
    for (x, s) in a[i].iter_mut().zip(&src) {
        if !s.is_zero() {
            *x -= q * s;
        }
    }
}

/// col[j] -= q * col[k]
fn col_axpy(a: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        if !row[k].is_zero() {
            let d = q * &row[k];
            row[j] -= d;
        }
    }
}

/// Hermite normal form of the lattice spanned by `vectors` (as rows); zero rows dropped.
///
/// Leading entries are positive and entries above each leading entry are
/// reduced into `[0, pivot)`.
pub fn hermite_rows(vectors: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = vectors.to_vec();
    if a.is_empty() {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len()).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].abs());
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let q = a[i][c].div_floor(&a[r][c]);
                    row_axpy(&mut a, i, r, &q);
                    if !a[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// Basis of `{v ∈ Z^cols : M v = 0}` in Hermite form.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    if m.is_empty() {
        return identity(cols);
    }
    let snf = smith_normal_form(m);
    let basis: IntMatrix = (snf.rank..cols).map(|j| snf.v.iter().map(|row| row[j].clone()).collect()).collect();
    hermite_rows(&basis)
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[Vec<i64>]) -> IntMatrix {
        int_matrix(rows)
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&big(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        let id = big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(smith_normal_form(&id).diagonal, vec![BigInt::one(); 3]);
        let z = big(&[vec![0, 0], vec![0, 0], vec![0, 0]]);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);
        assert!(s.diagonal.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn snf_reconstructs() {
        let m = big(&[vec![3, -6, 9, 1], vec![0, 4, 2, 2], vec![6, -8, 20, 4]]);
        let s = smith_normal_form(&m);
        let d = mat_mul(&mat_mul(&s.u, &m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, &s.diagonal[i]);
                } else {
                    assert!(x.is_zero());
                }
            }
        }
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(integer_kernel(&big(&[vec![1, 1]]), 2), big(&[vec![1, -1]]));
        assert!(integer_kernel(&big(&[vec![2, 1], vec![1, 1]]), 2).is_empty());
        assert_eq!(integer_kernel(&big(&[vec![2, -2], vec![-2, 2]]), 2), big(&[vec![1, 1]]));
    }

    #[test]
    fn rank_examples() {
        let q = |k: i64| CyclotomicNumber::from_integer(3, k.into());
        assert_eq!(rank_cyclotomic(&[vec![q(0), q(0)], vec![q(0), q(5)]]), 1);
        assert_eq!(rank_cyclotomic(&vec![vec![q(0); 3]; 3]), 0);
        let w = CyclotomicNumber::embed_root(3, 1);
        let w2 = CyclotomicNumber::embed_root(3, 2);
        // [[1, ω], [ω², 1]] is singular since ω·ω² = 1
        assert_eq!(rank_cyclotomic(&[vec![q(1), w.clone()], vec![w2.clone(), q(1)]]), 1);
        assert_eq!(rank_cyclotomic(&[vec![q(1), w.clone()], vec![w.clone(), q(1)]]), 2);
    }
}

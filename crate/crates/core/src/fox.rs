//! Abelianized Fox derivatives and the Alexander matrix.
//!
//! Every generator `g` of the presentation gets its own variable `t_g`, so a
//! presentation with `n` generators yields polynomials in `n` variables.

use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::presentation::GroupPresentation;
use crate::word::Word;

/// All abelianized Fox derivatives `∂w/∂x_g`, `g = 0..n`, in one pass.
pub fn fox_gradient(w: &Word, n: usize) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(n); n];
    let mut v = vec![0i32; n];
    for &(h, e) in w.letters() {
        let e32 = e as i32;
        if e > 0 {
            for k in 0..e32 {
                v[h] += k;
                out[h].add_term(&v, 1);
                v[h] -= k;
            }
        } else {
            for k in 1..=-e32 {
                v[h] -= k;
                out[h].add_term(&v, -1);
                v[h] += k;
            }
        }
        v[h] += e32;
    }
    out
}

pub fn fox_derivative(w: &Word, g: usize, p: &GroupPresentation) -> Result<LaurentPoly> {
    let n = p.generator_count();
    if g >= n {
        return Err(Error::UnknownGenerator(g));
    }
    if let Some(h) = w.max_generator() {
        if h >= n {
            return Err(Error::UnknownGenerator(h));
        }
    }
    Ok(fox_gradient(w, n).swap_remove(g))
}

/// Row per relator, column per generator.
pub fn alexander_matrix(p: &GroupPresentation) -> LaurentMatrix {
    let n = p.generator_count();
    let rows: Vec<Vec<LaurentPoly>> = p.relators().iter().map(|r| fox_gradient(r, n)).collect();
    LaurentMatrix::from_rows(rows, n, n).expect("rows have one entry per generator")
}

/// Vector of Fox derivatives of a word with zero exponent sums.
pub fn theta_embed(w: &Word, p: &GroupPresentation) -> Result<Vec<LaurentPoly>> {
    let n = p.generator_count();
    if let Some(h) = w.max_generator() {
        if h >= n {
            return Err(Error::UnknownGenerator(h));
        }
    }
    if w.exponent_sums(n).iter().any(|&s| s != 0) {
        return Err(Error::NotInCommutator(p.render_word(w)));
    }
    Ok(fox_gradient(w, n))
}

/// `Σ_i ∂w/∂x_i · (t_i − 1)`, which equals `t^{ab(w)} − 1`.
pub fn fundamental_combination(w: &Word, n: usize) -> LaurentPoly {
    let grad = fox_gradient(w, n);
    let mut acc = LaurentPoly::zero(n);
    for (i, d) in grad.iter().enumerate() {
        let ti = LaurentPoly::var(n, i).sub(&LaurentPoly::one(n)).unwrap();
        acc = acc.add(&d.mul(&ti).unwrap()).unwrap();
    }
    acc
}

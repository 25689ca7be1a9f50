//! Sparse multivariate Laurent polynomials over `Z` and matrices of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, i64>,
}

fn checked(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(exps: Vec<i32>, c: i64) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &i64)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[i32]) -> i64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Adds `c * t^exps` in place.
    pub fn add_term(&mut self, exps: &[i32], c: i64) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(exps.to_vec()).or_insert(0);
        *entry = checked(*entry, c);
        if *entry == 0 {
            self.terms.remove(exps);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        let mut buf = vec![0i32; self.nvars];
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                for k in 0..self.nvars {
                    buf[k] = e1[k] + e2[k];
                }
                out.add_term(&buf, c1.checked_mul(c2).expect("Laurent coefficient overflow"));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            out.add_term(e, c.checked_mul(k).expect("Laurent coefficient overflow"));
        }
        out
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c))
                .collect(),
        }
    }

    /// Substitutes `t_i ↦ 1` for every `i` with `mask[i]`.
    pub fn specialize_to_one(&self, mask: &[bool]) -> Self {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, &c) in &self.terms {
            let e2: Vec<i32> = e.iter().zip(mask).map(|(&a, &m)| if m { 0 } else { a }).collect();
            out.add_term(&e2, c);
        }
        out
    }

    /// Value at `t_i = ζ_N^{exps[i]}`.
    pub fn evaluate_exponents(&self, order: u64, exps: &[i64]) -> Result<CyclotomicNumber> {
        if exps.len() != self.nvars {
            return Err(Error::VariableCountMismatch(self.nvars, exps.len()));
        }
        let n = order as i64;
        let mut buckets = vec![BigInt::from(0); order as usize];
        for (e, &c) in &self.terms {
            let mut k: i64 = 0;
            for (a, x) in e.iter().zip(exps) {
                k = (k + (*a as i64).rem_euclid(n) * x.rem_euclid(n)) % n;
            }
            buckets[k as usize] += c;
        }
        Ok(CyclotomicNumber::from_int_poly(order, buckets))
    }

    /// Parses the canonical text form, e.g. `3*t1^2*t2^-1 + 1`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let mut out = LaurentPoly::zero(nvars);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(out);
        }
        let bytes = s.as_bytes();
        let mut i = 0;
        let err = |pos: usize, msg: &str| Error::parse(1, pos + 1, msg.to_string());
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(err(i, "expected '+' or '-'"));
            }
            let start = i;
            while i < bytes.len() && !(i > start && (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                i += 1;
            }
            let term = &s[start..i];
            let mut coeff = 1i64;
            let mut exps = vec![0i32; nvars];
            for (fi, factor) in term.split('*').enumerate() {
                if factor.is_empty() {
                    return Err(err(start, "empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('t') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((a, b)) => (a, b.parse::<i32>().map_err(|_| err(start, "bad exponent"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| err(start, "bad variable index"))?;
                    if idx == 0 || idx > nvars {
                        return Err(err(start, "variable index out of range"));
                    }
                    exps[idx - 1] += pow;
                } else if fi == 0 {
                    coeff = factor.parse().map_err(|_| err(start, "bad coefficient"))?;
                } else {
                    return Err(err(start, "coefficient must come first"));
                }
            }
            out.add_term(&exps, sign * coeff);
        }
        Ok(out)
    }
}

/// `φ_n = 1 + t + ... + t^{n-1}` in variable `var`.
pub fn phi(n: u32, var: usize, nvars: usize) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("phi(0) is undefined".into()));
    }
    let mut out = LaurentPoly::zero(nvars);
    let mut e = vec![0i32; nvars];
    for k in 0..n {
        e[var] = k as i32;
        out.add_term(&e, 1);
    }
    Ok(out)
}

fn render_monomial(e: &[i32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| if a == 1 { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, a) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, &c)) in self.terms.iter().rev().enumerate() {
            let mono = render_monomial(e);
            let abs = c.unsigned_abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs == 1 {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            match (k, c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        LaurentMatrix { rows, cols, nvars, entries: vec![LaurentPoly::zero(nvars); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>, cols: usize, nvars: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols, nvars);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, p) in row.into_iter().enumerate() {
                if p.nvars() != nvars {
                    return Err(Error::VariableCountMismatch(nvars, p.nvars()));
                }
                m.entries[i * cols + j] = p;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Entry-wise evaluation at `t_i = ζ_N^{exps[i]}`.
    pub fn evaluate_exponents(&self, order: u64, exps: &[i64]) -> Result<Vec<Vec<CyclotomicNumber>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|p| p.evaluate_exponents(order, exps)).collect())
            .collect()
    }

    /// One row per line, entries separated by `" | "`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            out.push_str(&line.join(" | "));
            out.push('\n');
        }
        out
    }
}

//! Finitely presented groups, abelianization, characters and homomorphisms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::word::{normal_form_free_product_cyclic, FactorOrder, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    names: Vec<String>,
    relators: Vec<Word>,
    degrees: Option<Vec<u64>>,
}

impl GroupPresentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>, degrees: Option<Vec<u64>>) -> Result<Self> {
        let n = names.len();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= n {
                    return Err(Error::UnknownGenerator(g));
                }
            }
        }
        if let Some(d) = &degrees {
            if d.len() != n {
                return Err(Error::InvalidArgument(format!("{} degree labels for {n} generators", d.len())));
            }
        }
        Ok(GroupPresentation { names, relators, degrees })
    }

    /// Free group on `r` generators named `x1..xr`.
    pub fn free(r: usize) -> Self {
        let names = (1..=r).map(|i| format!("x{i}")).collect();
        GroupPresentation { names, relators: Vec::new(), degrees: None }
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn degrees(&self) -> Option<&[u64]> {
        self.degrees.as_deref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn with_degrees(mut self, degrees: Option<Vec<u64>>) -> Result<Self> {
        if let Some(d) = &degrees {
            if d.len() != self.names.len() {
                return Err(Error::InvalidArgument("degree labels do not match generators".into()));
            }
        }
        self.degrees = degrees;
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::InvalidArgument("name count does not match generators".into()));
        }
        self.names = names;
        Ok(self)
    }

    /// Relator exponent-sum matrix (one row per relator).
    pub fn relator_matrix(&self) -> IntMatrix {
        let n = self.names.len();
        self.relators
            .iter()
            .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
            .collect()
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.names)
    }
}

/// `H_1 = Z^free_rank ⊕ ⊕ Z/torsion_i`, with each generator's class in these coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// `coordinate_map[g]`: free coordinates followed by torsion coordinates
    /// (reduced into `[0, τ_i)`).
    pub coordinate_map: IntMatrix,
}

impl AbelianStructure {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Free part of the class of generator `g`.
    pub fn free_class(&self, g: usize) -> &[BigInt] {
        &self.coordinate_map[g][..self.free_rank]
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn abelianization(p: &GroupPresentation) -> AbelianStructure {
    let n = p.generator_count();
    let rel = p.relator_matrix();
    if rel.is_empty() {
        let coordinate_map = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        return AbelianStructure { free_rank: n, torsion: Vec::new(), coordinate_map };
    }
    let snf = smith_normal_form(&rel);
    let mut free_cols = Vec::new();
    let mut torsion_cols = Vec::new();
    for j in 0..n {
        if j < snf.rank {
            if snf.diagonal[j] > BigInt::one() {
                torsion_cols.push(j);
            }
        } else {
            free_cols.push(j);
        }
    }
    let torsion: Vec<BigInt> = torsion_cols.iter().map(|&j| snf.diagonal[j].clone()).collect();
    let coordinate_map = (0..n)
        .map(|g| {
            let mut row: Vec<BigInt> = free_cols.iter().map(|&j| snf.v[g][j].clone()).collect();
            for (&j, t) in torsion_cols.iter().zip(&torsion) {
                row.push(snf.v[g][j].mod_floor(t));
            }
            row
        })
        .collect();
    AbelianStructure { free_rank: free_cols.len(), torsion, coordinate_map }
}

/// A character of finite order: generator `g` maps to `ζ_N^{exponents[g]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub order: u64,
    pub exponents: Vec<i64>,
}

impl Character {
    /// Exponents are reduced into `[0, order)`.
    pub fn new(order: u64, exponents: Vec<i64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidCharacter("order must be positive".into()));
        }
        let n = order as i64;
        Ok(Character { order, exponents: exponents.into_iter().map(|e| e.rem_euclid(n)).collect() })
    }

    pub fn trivial(generators: usize) -> Self {
        Character { order: 1, exponents: vec![0; generators] }
    }

    /// Builds a character from values `±1`.
    pub fn from_signs(signs: &[i64]) -> Result<Self> {
        let exps = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                _ => Err(Error::InvalidCharacter(format!("{s} is not a sign"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Character::new(2, exps)
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// True iff some generator maps to 1 (the character lies in a coordinate subtorus).
    pub fn is_coordinate(&self) -> bool {
        self.exponents.contains(&0)
    }

    pub fn pow(&self, k: i64) -> Character {
        Character::new(self.order, self.exponents.iter().map(|&e| e * k).collect()).unwrap()
    }

    /// Smallest order carrying the same character.
    pub fn reduced(&self) -> Character {
        let g = self.exponents.iter().fold(self.order as i64, |acc, &e| acc.gcd(&e));
        let g = g.max(1);
        let order = self.order / g as u64;
        Character::new(order, self.exponents.iter().map(|&e| e / g).collect()).unwrap()
    }

    /// Same character written with order `m` (a multiple of the current order).
    pub fn with_order(&self, m: u64) -> Result<Character> {
        if !m.is_multiple_of(self.order) {
            return Err(Error::InvalidCharacter(format!("order {m} is not a multiple of {}", self.order)));
        }
        let k = (m / self.order) as i64;
        Character::new(m, self.exponents.iter().map(|&e| e * k).collect())
    }

    /// Exponent of the value `χ(w) = ζ_N^{..}` for a word `w`.
    pub fn value_exponent(&self, w: &Word) -> i64 {
        let n = self.order as i64;
        w.letters()
            .iter()
            .fold(0i64, |acc, &(g, e)| (acc + e.rem_euclid(n) * self.exponents[g]) % n)
    }

    /// Restricts to the generators listed in `map` (new generator `i` is old `map[i]`).
    pub fn restrict(&self, map: &[usize]) -> Character {
        Character { order: self.order, exponents: map.iter().map(|&g| self.exponents[g]).collect() }
    }

    /// Values rendered as `1`, `-1` or `z(N,k)`.
    pub fn render_values(&self) -> String {
        let vals: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| {
                if e == 0 {
                    "1".to_string()
                } else if 2 * e == self.order as i64 {
                    "-1".to_string()
                } else {
                    format!("z({},{})", self.order, e)
                }
            })
            .collect();
        format!("({})", vals.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCheck {
    pub valid: bool,
    pub diagnostic: String,
}

pub fn validate_character(chi: &Character, p: &GroupPresentation) -> Result<CharacterCheck> {
    if chi.len() != p.generator_count() {
        return Err(Error::GeneratorCountMismatch { expected: p.generator_count(), got: chi.len() });
    }
    for (k, r) in p.relators().iter().enumerate() {
        if chi.value_exponent(r) != 0 {
            return Ok(CharacterCheck {
                valid: false,
                diagnostic: format!("relator {} ({}) is not killed", k + 1, p.render_word(r)),
            });
        }
    }
    if let Some(d) = p.degrees() {
        let n = chi.order as i64;
        let s = d.iter().zip(&chi.exponents).fold(0i64, |acc, (&di, &e)| (acc + (di as i64 % n) * e) % n);
        if s != 0 {
            return Ok(CharacterCheck {
                valid: false,
                diagnostic: "projective constraint Σ d_i·e_i ≡ 0 fails".into(),
            });
        }
    }
    Ok(CharacterCheck { valid: true, diagnostic: "ok".into() })
}

pub(crate) fn require_valid(chi: &Character, p: &GroupPresentation) -> Result<()> {
    let check = validate_character(chi, p)?;
    if check.valid {
        Ok(())
    } else {
        Err(Error::InvalidCharacter(check.diagnostic))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    pub images: Vec<Word>,
}

impl GroupHom {
    pub fn new(source: GroupPresentation, target: GroupPresentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::GeneratorCountMismatch { expected: source.generator_count(), got: images.len() });
        }
        for w in &images {
            if let Some(g) = w.max_generator() {
                if g >= target.generator_count() {
                    return Err(Error::UnknownGenerator(g));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }
}

/// Factor orders read off a presentation whose relators are powers of single generators.
pub fn free_product_orders(target: &GroupPresentation) -> Result<Vec<FactorOrder>> {
    let mut orders: Vec<FactorOrder> = vec![None; target.generator_count()];
    for r in target.relators() {
        match r.letters() {
            [] => {}
            [(g, e)] => {
                let m = e.unsigned_abs();
                orders[*g] = Some(match orders[*g] {
                    Some(old) => old.gcd(&m),
                    None => m,
                });
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "target relator {} is not a generator power",
                    target.render_word(r)
                )))
            }
        }
    }
    Ok(orders)
}

/// True iff every source relator maps to the identity of the target free product.
pub fn verify_hom(h: &GroupHom, target_orders: &[FactorOrder]) -> Result<bool> {
    if target_orders.len() != h.target.generator_count() {
        return Err(Error::GeneratorCountMismatch { expected: h.target.generator_count(), got: target_orders.len() });
    }
    let derived = free_product_orders(&h.target)?;
    if derived != target_orders {
        return Err(Error::Unsupported("target orders disagree with the target relators".into()));
    }
    Ok(h.source
        .relators()
        .iter()
        .all(|r| normal_form_free_product_cyclic(&h.apply(r), target_orders).is_identity()))
}

/// Gcd of all `k×k` minors, used as an independent invariant-factor oracle.
pub fn determinantal_divisors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                g = g.gcd(&crate::linalg::determinant(&sub));
            }
        }
        out.push(g.abs());
    }
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("value fits in u64")
}

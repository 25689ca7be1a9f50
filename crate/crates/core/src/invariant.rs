//! Presentation matrix of the Alexander invariant `M = G'/G''` from a
//! Zariski presentation.
//!
//! In a Zariski presentation the generators split into meridians `x_1..x_r`,
//! whose classes form a basis of `H_1 = Z^r`, and extras `y_k` of class zero.
//! `M` is generated over `Z[t_1^±, .., t_r^±]` by the commutators
//! `x_ij = [x_i, x_j]` (`i < j`) and the `y_k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::linalg::smith_normal_form;
use crate::presentation::{abelianization, Character, GroupPresentation};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantGenerator {
    /// `[x_i, x_j]` with `i < j` (indices into the meridian list).
    Commutator(usize, usize),
    /// `y_k` (index into the extra list).
    Extra(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorRole {
    Meridian(usize),
    Extra(usize),
}

/// Which generators are meridians and which are extras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiData {
    pub meridians: Vec<usize>,
    pub extras: Vec<usize>,
    pub roles: Vec<GeneratorRole>,
}

impl ZariskiData {
    pub fn rank(&self) -> usize {
        self.meridians.len()
    }

    /// Column generators: commutators in lexicographic order, then extras.
    pub fn invariant_generators(&self) -> Vec<InvariantGenerator> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                out.push(InvariantGenerator::Commutator(i, j));
            }
        }
        out.extend((0..self.extras.len()).map(InvariantGenerator::Extra));
        out
    }

    /// Character exponents on the meridians (the variables of the invariant ring).
    pub fn meridian_exponents(&self, chi: &Character) -> Vec<i64> {
        self.meridians.iter().map(|&g| chi.exponents[g]).collect()
    }
}

/// Checks the Zariski conditions: torsion-free `H_1`, nonzero classes forming a basis.
pub fn zariski_data(p: &GroupPresentation) -> Result<ZariskiData> {
    let ab = abelianization(p);
    if !ab.is_free() {
        return Err(Error::NotZariski(format!("H1 has torsion ({ab})")));
    }
    let mut meridians = Vec::new();
    let mut extras = Vec::new();
    let mut roles = Vec::new();
    for g in 0..p.generator_count() {
        if ab.free_class(g).iter().all(|c| c.is_zero()) {
            roles.push(GeneratorRole::Extra(extras.len()));
            extras.push(g);
        } else {
            roles.push(GeneratorRole::Meridian(meridians.len()));
            meridians.push(g);
        }
    }
    if meridians.len() != ab.free_rank {
        return Err(Error::NotZariski(format!(
            "{} generators have nonzero class but H1 has rank {}",
            meridians.len(),
            ab.free_rank
        )));
    }
    if !meridians.is_empty() {
        let m: Vec<Vec<BigInt>> = meridians.iter().map(|&g| ab.free_class(g).to_vec()).collect();
        let det = crate::linalg::determinant(&m);
        if det.abs() != BigInt::one() {
            return Err(Error::NotZariski(format!("meridian classes span a sublattice of index {}", det.abs())));
        }
    }
    Ok(ZariskiData { meridians, extras, roles })
}

/// A Zariski presentation obtained from `P` by a change of generators, with
/// the data needed to transport characters.
#[derive(Clone, Debug)]
pub struct ZariskiForm {
    pub presentation: GroupPresentation,
    pub data: ZariskiData,
    /// `substitution[g]`: the original generator `g` as a word in the new generators.
    pub substitution: Vec<Word>,
}

impl ZariskiForm {
    /// Character on the new generators: meridians keep their values, extras map to 1.
    pub fn transport(&self, chi: &Character) -> Character {
        let mut exps = chi.exponents.clone();
        for &g in &self.data.extras {
            exps[g] = 0;
        }
        Character { order: chi.order, exponents: exps }
    }
}

/// Rewrites `P` so that it becomes a Zariski presentation.
///
/// Meridians are chosen greedily in generator order as long as their classes
/// span a saturated sublattice. Each remaining generator `g` of nonzero class
/// `Σ a_i x_i` is replaced by `y_g = g·(x_1^{a_1}···x_r^{a_r})^{-1}`.
pub fn zariski_form(p: &GroupPresentation) -> Result<ZariskiForm> {
    let ab = abelianization(p);
    if !ab.is_free() {
        return Err(Error::NotZariski(format!("H1 has torsion ({ab})")));
    }
    let r = ab.free_rank;
    let n = p.generator_count();
    let mut chosen: Vec<usize> = Vec::new();
    for g in 0..n {
        if chosen.len() == r {
            break;
        }
        let class = ab.free_class(g);
        if class.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut rows: Vec<Vec<BigInt>> = chosen.iter().map(|&h| ab.free_class(h).to_vec()).collect();
        rows.push(class.to_vec());
        let snf = smith_normal_form(&rows);
        if snf.rank == rows.len() && snf.invariant_factors().iter().all(|d| d.is_one()) {
            chosen.push(g);
        }
    }
    if chosen.len() != r {
        return Err(Error::NotZariski("no saturated meridian basis among the generators".into()));
    }
    let basis: Vec<Vec<BigInt>> = chosen.iter().map(|&h| ab.free_class(h).to_vec()).collect();
    let mut substitution = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    let mut roles = Vec::with_capacity(n);
    let mut extras = Vec::new();
    for g in 0..n {
        if let Some(i) = chosen.iter().position(|&h| h == g) {
            substitution.push(Word::generator(g));
            names.push(p.names()[g].clone());
            roles.push(GeneratorRole::Meridian(i));
            continue;
        }
        let coeffs = solve_in_basis(&basis, ab.free_class(g))?;
        let tail = Word::from_letters(chosen.iter().zip(&coeffs).map(|(&h, &a)| (h, a)));
        substitution.push(Word::generator(g).mul(&tail));
        names.push(if tail.is_identity() { p.names()[g].clone() } else { format!("y_{}", p.names()[g]) });
        roles.push(GeneratorRole::Extra(extras.len()));
        extras.push(g);
    }
    let relators = p.relators().iter().map(|w| w.substitute(&substitution)).collect();
    let presentation = GroupPresentation::new(names, relators, None)?;
    let data = ZariskiData { meridians: chosen, extras, roles };
    Ok(ZariskiForm { presentation, data, substitution })
}

/// Integer coordinates of `v` in the lattice basis `basis` (rows).
fn solve_in_basis(basis: &[Vec<BigInt>], v: &[BigInt]) -> Result<Vec<i64>> {
    let r = basis.len();
    // solve Σ a_i basis_i = v: columns are basis vectors
    let mut a: Vec<Vec<BigRational>> = (0..r)
        .map(|row| {
            let mut line: Vec<BigRational> = (0..r).map(|i| BigRational::from_integer(basis[i][row].clone())).collect();
            line.push(BigRational::from_integer(v[row].clone()));
            line
        })
        .collect();
    for c in 0..r {
        let p = (c..r).find(|&i| !a[i][c].is_zero()).ok_or_else(|| Error::NotZariski("singular basis".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..r {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=r {
                    let d = &f * &a[c][j];
                    a[i][j] -= d;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            let x = &row[r];
            if !x.is_integer() {
                return Err(Error::NotZariski("class not in the meridian lattice".into()));
            }
            x.to_integer().to_i64().ok_or_else(|| Error::NotZariski("coefficient overflow".into()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantElement {
    nvars: usize,
    coefficients: BTreeMap<InvariantGenerator, LaurentPoly>,
}

impl InvariantElement {
    pub fn zero(nvars: usize) -> Self {
        InvariantElement { nvars, coefficients: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coefficient(&self, g: InvariantGenerator) -> LaurentPoly {
        self.coefficients.get(&g).cloned().unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&InvariantGenerator, &LaurentPoly)> {
        self.coefficients.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add_poly(&mut self, g: InvariantGenerator, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let entry = self.coefficients.entry(g).or_insert_with(|| LaurentPoly::zero(p.nvars()));
        *entry = entry.add(p).expect("same variable count");
        if entry.is_zero() {
            self.coefficients.remove(&g);
        }
    }

    /// Adds `c·t^exps·g`.
    pub fn add_term(&mut self, g: InvariantGenerator, exps: &[i32], c: i64) {
        let mut p = LaurentPoly::zero(self.nvars);
        p.add_term(exps, c);
        self.add_poly(g, &p);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, p) in &other.coefficients {
            out.add_poly(*g, p);
        }
        out
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut out = InvariantElement::zero(self.nvars);
        for (g, q) in &self.coefficients {
            out.add_poly(*g, &q.mul(p).expect("same variable count"));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&LaurentPoly::constant(self.nvars, -1))
    }

    /// Row vector over the given column generators.
    pub fn to_row(&self, columns: &[InvariantGenerator]) -> Vec<LaurentPoly> {
        columns.iter().map(|&g| self.coefficient(g)).collect()
    }
}

impl fmt::Display for InvariantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|(g, p)| {
                let name = match g {
                    InvariantGenerator::Commutator(i, j) => format!("x{}{}", i + 1, j + 1),
                    InvariantGenerator::Extra(k) => format!("y{}", k + 1),
                };
                format!("({p})*{name}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `σ(a, t) = 1 + t + ... + t^{a-1}` for `a > 0`, `-(t^{-1} + ... + t^{a})` for `a < 0`.
fn sigma_terms(a: i32) -> Vec<(i32, i64)> {
    if a > 0 {
        (0..a).map(|m| (m, 1)).collect()
    } else {
        (1..=-a).map(|m| (-m, -1)).collect()
    }
}

/// Class in `M` of `s(v)·x_i·s(v+e_i)^{-1}`, where `s(v) = x_1^{v_1}···x_r^{v_r}`.
fn step_class(v: &[i32], i: usize, out: &mut InvariantElement, sign: i64) {
    let r = v.len();
    let mut exps = vec![0i32; r];
    for j in i + 1..r {
        if v[j] == 0 {
            continue;
        }
        exps[..j].copy_from_slice(&v[..j]);
        for e in exps[j..].iter_mut() {
            *e = 0;
        }
        for (m, c) in sigma_terms(v[j]) {
            exps[j] = m;
            out.add_term(InvariantGenerator::Commutator(i, j), &exps, -sign * c);
        }
    }
}

/// Class in `M` of a word of `G'` over a Zariski presentation.
pub fn rewrite_with(w: &Word, data: &ZariskiData) -> Result<InvariantElement> {
    let r = data.rank();
    let mut out = InvariantElement::zero(r);
    let mut v = vec![0i32; r];
    for (g, e) in w.unit_letters() {
        match data.roles.get(g) {
            Some(GeneratorRole::Meridian(i)) => {
                if e > 0 {
                    step_class(&v, *i, &mut out, 1);
                    v[*i] += 1;
                } else {
                    v[*i] -= 1;
                    step_class(&v, *i, &mut out, -1);
                }
            }
            Some(GeneratorRole::Extra(k)) => out.add_term(InvariantGenerator::Extra(*k), &v, e),
            None => return Err(Error::UnknownGenerator(g)),
        }
    }
    if v.iter().any(|&x| x != 0) {
        return Err(Error::NotInCommutator(format!("meridian exponent sums {v:?}")));
    }
    Ok(out)
}

pub fn rewrite_in_invariant(w: &Word, p: &GroupPresentation) -> Result<InvariantElement> {
    rewrite_with(w, &zariski_data(p)?)
}

/// `J(i,j,k) = (t_i−1)[x_j,x_k] + (t_j−1)[x_k,x_i] + (t_k−1)[x_i,x_j]` for `i<j<k`.
pub fn jacobian_rows(r: usize) -> Vec<InvariantElement> {
    let tm1 = |i: usize| LaurentPoly::var(r, i).sub(&LaurentPoly::one(r)).unwrap();
    let mut out = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                let mut e = InvariantElement::zero(r);
                e.add_poly(InvariantGenerator::Commutator(j, k), &tm1(i));
                e.add_poly(InvariantGenerator::Commutator(i, k), &tm1(j).neg());
                e.add_poly(InvariantGenerator::Commutator(i, j), &tm1(k));
                out.push(e);
            }
        }
    }
    out
}

pub fn jacobian_relations(p: &GroupPresentation) -> Result<Vec<InvariantElement>> {
    Ok(jacobian_rows(zariski_data(p)?.rank()))
}

#[derive(Clone, Debug)]
pub struct InvariantPresentation {
    pub generators: Vec<InvariantGenerator>,
    pub matrix: LaurentMatrix,
    pub data: ZariskiData,
    /// Number of leading rows coming from relators (the rest are Jacobian rows).
    pub relator_rows: usize,
}

impl InvariantPresentation {
    /// `#columns − rank` at the character (given on the presentation's generators).
    pub fn corank_at(&self, chi: &Character) -> Result<(usize, usize)> {
        let exps = self.data.meridian_exponents(chi);
        let m = self.matrix.evaluate_exponents(chi.order, &exps)?;
        let rank = crate::linalg::rank_cyclotomic(&m);
        Ok((self.generators.len() - rank, rank))
    }

    pub fn column_names(&self, p: &GroupPresentation) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| match g {
                InvariantGenerator::Commutator(i, j) => {
                    format!("[{},{}]", p.names()[self.data.meridians[*i]], p.names()[self.data.meridians[*j]])
                }
                InvariantGenerator::Extra(k) => p.names()[self.data.extras[*k]].clone(),
            })
            .collect()
    }
}

pub fn invariant_matrix_with(p: &GroupPresentation, data: &ZariskiData) -> Result<InvariantPresentation> {
    let r = data.rank();
    let generators = data.invariant_generators();
    let mut rows = Vec::new();
    for w in p.relators() {
        rows.push(rewrite_with(w, data)?.to_row(&generators));
    }
    let relator_rows = rows.len();
    for e in jacobian_rows(r) {
        rows.push(e.to_row(&generators));
    }
    let matrix = LaurentMatrix::from_rows(rows, generators.len(), r)?;
    Ok(InvariantPresentation { generators, matrix, data: data.clone(), relator_rows })
}

pub fn invariant_matrix(p: &GroupPresentation) -> Result<InvariantPresentation> {
    invariant_matrix_with(p, &zariski_data(p)?)
}

/// θ-image of an invariant element: `θ(x_ij) = (1−t_j)e_i + (t_i−1)e_j`, `θ(y_k) = e_{y_k}`,
/// as a vector indexed by the generators of the presentation.
pub fn theta_of_element(e: &InvariantElement, data: &ZariskiData) -> Vec<LaurentPoly> {
    let r = data.rank();
    let n = data.roles.len();
    let mut out = vec![LaurentPoly::zero(r); n];
    let one = LaurentPoly::one(r);
    for (g, c) in e.coefficients() {
        match *g {
            InvariantGenerator::Commutator(i, j) => {
                let ti = LaurentPoly::var(r, i);
                let tj = LaurentPoly::var(r, j);
                let gi = data.meridians[i];
                let gj = data.meridians[j];
                out[gi] = out[gi].add(&c.mul(&one.sub(&tj).unwrap()).unwrap()).unwrap();
                out[gj] = out[gj].add(&c.mul(&ti.sub(&one).unwrap()).unwrap()).unwrap();
            }
            InvariantGenerator::Extra(k) => {
                let gk = data.extras[k];
                out[gk] = out[gk].add(c).unwrap();
            }
        }
    }
    out
}

/// Fox gradient of `w` pushed to the meridian ring (`t_y ↦ 1`).
pub fn theta_of_word(w: &Word, data: &ZariskiData) -> Vec<LaurentPoly> {
    let r = data.rank();
    let n = data.roles.len();
    let grad = crate::fox::fox_gradient(w, n);
    grad.iter()
        .map(|p| {
            let mut q = LaurentPoly::zero(r);
            for (e, &c) in p.terms() {
                let ex: Vec<i32> = data.meridians.iter().map(|&g| e[g]).collect();
                q.add_term(&ex, c);
            }
            q
        })
        .collect()
}

//! Reidemeister–Schreier presentations of kernels of maps onto finite abelian
//! groups, quotients by extra relators and Tietze simplification.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::dsl::parse_group_dsl;
use crate::error::{Error, Result};
use crate::linalg::smith_normal_form;
use crate::presentation::GroupPresentation;
use crate::word::{free_reduce, Word};

/// Epimorphism onto `Z_{d_1} × ... × Z_{d_m}` given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianQuotient {
    pub invariant_factors: Vec<u64>,
    pub images: Vec<Vec<i64>>,
}

impl FiniteAbelianQuotient {
    pub fn new(invariant_factors: Vec<u64>, images: Vec<Vec<i64>>) -> Result<Self> {
        if invariant_factors.contains(&0) {
            return Err(Error::InvalidArgument("invariant factors must be positive".into()));
        }
        let m = invariant_factors.len();
        if let Some(bad) = images.iter().find(|v| v.len() != m) {
            return Err(Error::InvalidArgument(format!("image {bad:?} does not have {m} components")));
        }
        let mut q = FiniteAbelianQuotient { invariant_factors, images };
        for v in q.images.iter_mut() {
            for (x, &d) in v.iter_mut().zip(&q.invariant_factors) {
                *x = x.rem_euclid(d as i64);
            }
        }
        Ok(q)
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    fn normalize(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.invariant_factors) {
            *x = x.rem_euclid(d as i64);
        }
    }

    /// Image of a word.
    pub fn image(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.invariant_factors.len()];
        for &(g, e) in w.letters() {
            for (x, y) in v.iter_mut().zip(&self.images[g]) {
                *x += e * y;
            }
        }
        self.normalize(&mut v);
        v
    }

    /// Whether the images generate the whole group (Smith form of images plus relations).
    pub fn is_surjective(&self) -> bool {
        let m = self.invariant_factors.len();
        if m == 0 {
            return true;
        }
        let mut rows: Vec<Vec<BigInt>> =
            self.images.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for (k, &d) in self.invariant_factors.iter().enumerate() {
            let mut r = vec![BigInt::from(0); m];
            r[k] = BigInt::from(d);
            rows.push(r);
        }
        let snf = smith_normal_form(&rows);
        snf.rank == m && snf.invariant_factors().iter().all(|d| d.is_one())
    }

    /// Checks surjectivity and that every relator of `p` maps to zero.
    pub fn check(&self, p: &GroupPresentation) -> Result<()> {
        if self.images.len() != p.generator_count() {
            return Err(Error::GeneratorCountMismatch { expected: p.generator_count(), got: self.images.len() });
        }
        for r in p.relators() {
            if self.image(r).iter().any(|&x| x != 0) {
                return Err(Error::InvalidHom(format!("relator {} is not killed", p.render_word(r))));
            }
        }
        if !self.is_surjective() {
            return Err(Error::NotSurjective(format!("images do not generate Z/{:?}", self.invariant_factors)));
        }
        Ok(())
    }
}

/// Kernel presentation together with the coset data used to build it.
#[derive(Clone, Debug)]
pub struct SchreierCover {
    pub presentation: GroupPresentation,
    pub quotient: FiniteAbelianQuotient,
    /// Coset labels, indexed by coset number.
    pub cosets: Vec<Vec<i64>>,
    /// Transversal word of each coset.
    pub transversal: Vec<Word>,
    coset_index: HashMap<Vec<i64>, usize>,
    source_generators: usize,
}

impl SchreierCover {
    pub fn coset_of(&self, label: &[i64]) -> Option<usize> {
        self.coset_index.get(label).copied()
    }

    /// Index of the Schreier generator `s(c)·g·s(c·α(g))⁻¹`.
    pub fn schreier_generator(&self, coset: usize, g: usize) -> usize {
        coset * self.source_generators + g
    }

    /// Rewrites `s(c)·w·s(c·α(w))⁻¹` in the Schreier generators.
    pub fn rewrite(&self, w: &Word, coset: usize) -> Word {
        let n = self.source_generators;
        let mut c = self.cosets[coset].clone();
        let mut out = Vec::new();
        for (g, e) in w.unit_letters() {
            if e > 0 {
                let idx = self.coset_index[&c];
                out.push((idx * n + g, 1));
                self.step(&mut c, g, 1);
            } else {
                self.step(&mut c, g, -1);
                let idx = self.coset_index[&c];
                out.push((idx * n + g, -1));
            }
        }
        Word::from_letters(out)
    }

    /// Rewrites the conjugate `s(c)·w·s(c)⁻¹` of a word in the kernel.
    pub fn rewrite_conjugate(&self, w: &Word, coset: usize) -> Result<Word> {
        if self.quotient.image(w).iter().any(|&x| x != 0) {
            return Err(Error::InvalidArgument("word is not in the kernel".into()));
        }
        Ok(self.rewrite(w, coset))
    }

    fn step(&self, c: &mut [i64], g: usize, sign: i64) {
        for (x, y) in c.iter_mut().zip(&self.quotient.images[g]) {
            *x += sign * y;
        }
        self.quotient.normalize(c);
    }
}

fn label_suffix(c: &[i64]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
}

/// Reidemeister–Schreier with the transversal built along `order` (then the remaining generators).
pub fn schreier_cover(p: &GroupPresentation, alpha: &FiniteAbelianQuotient, order: &[usize]) -> Result<SchreierCover> {
    alpha.check(p)?;
    let n = p.generator_count();
    let m = alpha.invariant_factors.len();
    let mut full_order: Vec<usize> = Vec::new();
    for g in order.iter().copied().chain(0..n) {
        if g >= n {
            return Err(Error::UnknownGenerator(g));
        }
        if !full_order.contains(&g) {
            full_order.push(g);
        }
    }
    let mut cosets = vec![vec![0i64; m]];
    let mut transversal = vec![Word::identity()];
    let mut coset_index: HashMap<Vec<i64>, usize> = HashMap::new();
    coset_index.insert(cosets[0].clone(), 0);
    for &g in &full_order {
        let existing = cosets.len();
        for c in 0..existing {
            let mut d = cosets[c].clone();
            let mut k = 1;
            loop {
                for (x, y) in d.iter_mut().zip(&alpha.images[g]) {
                    *x += y;
                }
                alpha.normalize(&mut d);
                if coset_index.contains_key(&d) {
                    break;
                }
                coset_index.insert(d.clone(), cosets.len());
                cosets.push(d.clone());
                transversal.push(transversal[c].mul(&Word::power_of(g, k)));
                k += 1;
            }
        }
    }
    debug_assert_eq!(cosets.len() as u64, alpha.order());
    let mut names = Vec::with_capacity(cosets.len() * n);
    for c in &cosets {
        for g in 0..n {
            names.push(format!("{}_{}", p.names()[g], label_suffix(c)));
        }
    }
    let mut cover = SchreierCover {
        presentation: GroupPresentation::free(0),
        quotient: alpha.clone(),
        cosets,
        transversal,
        coset_index,
        source_generators: n,
    };
    let mut relators = Vec::new();
    // tree edges: Schreier generators that are freely trivial
    for c in 0..cover.cosets.len() {
        for g in 0..n {
            let mut d = cover.cosets[c].clone();
            cover.step(&mut d, g, 1);
            let target = &cover.transversal[cover.coset_index[&d]];
            let w = free_reduce(&cover.transversal[c].mul(&Word::generator(g)).mul(&target.inverse()));
            if w.is_identity() {
                relators.push(Word::generator(c * n + g));
            }
        }
    }
    for c in 0..cover.cosets.len() {
        for r in p.relators() {
            relators.push(cover.rewrite(r, c));
        }
    }
    cover.presentation = GroupPresentation::new(names, relators, None)?;
    Ok(cover)
}

/// Presentation of `ker α` with the transversal in generator order.
pub fn kernel_presentation(p: &GroupPresentation, alpha: &FiniteAbelianQuotient) -> Result<GroupPresentation> {
    schreier_cover(p, alpha, &[]).map(|c| c.presentation)
}

/// `P` with the extra relators appended.
pub fn quotient_by_relators(p: &GroupPresentation, extra: &[Word]) -> Result<GroupPresentation> {
    let mut rels = p.relators().to_vec();
    rels.extend(extra.iter().cloned());
    GroupPresentation::new(p.names().to_vec(), rels, p.degrees().map(|d| d.to_vec()))
}

/// Key identifying a relator up to cyclic rotation and inversion.
fn cyclic_key(w: &Word) -> Vec<(usize, i64)> {
    let best = |w: &Word| -> Vec<(usize, i64)> {
        let letters: Vec<(usize, i64)> = w.unit_letters().collect();
        let len = letters.len();
        (0..len.max(1))
            .map(|s| letters[s..].iter().chain(&letters[..s]).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    };
    let a = best(w);
    let b = best(&w.inverse());
    a.min(b)
}

fn clean_relators(rels: &[Word]) -> (Vec<Word>, bool) {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut changed = false;
    for r in rels {
        let c = r.cyclic_reduce();
        if c.is_identity() {
            changed = true;
            continue;
        }
        if !seen.insert(cyclic_key(&c)) {
            changed = true;
            continue;
        }
        if &c != r {
            changed = true;
        }
        out.push(c);
    }
    (out, changed)
}

/// Tietze simplification; see [`tietze_simplify_keeping`].
pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> GroupPresentation {
    tietze_simplify_keeping(p, budget, &vec![false; p.generator_count()])
}

/// Repeatedly eliminates a generator occurring exactly once in some relator,
/// preferring the shortest such relator and then the highest generator index.
/// Generators flagged in `keep` are never eliminated; at most `budget`
/// eliminations are performed.
pub fn tietze_simplify_keeping(p: &GroupPresentation, budget: usize, keep: &[bool]) -> GroupPresentation {
    let n = p.generator_count();
    let (mut rels, changed) = clean_relators(p.relators());
    if !changed {
        rels = p.relators().to_vec();
    }
    let mut alive = vec![true; n];
    let mut eliminated = 0;
    while eliminated < budget {
        let mut best: Option<(u64, usize, usize)> = None; // (length, generator, relator)
        for (ri, r) in rels.iter().enumerate() {
            let len = r.length();
            if best.is_some_and(|(bl, _, _)| len > bl) {
                continue;
            }
            let mut counts: HashMap<usize, u64> = HashMap::new();
            for &(g, e) in r.letters() {
                *counts.entry(g).or_default() += e.unsigned_abs();
            }
            for (&g, &cnt) in &counts {
                if cnt != 1 || keep.get(g).copied().unwrap_or(false) {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bl, bg, _)) => len < bl || (len == bl && g > bg),
                };
                if better {
                    best = Some((len, g, ri));
                }
            }
        }
        let Some((_, g, ri)) = best else { break };
        let r = rels.remove(ri);
        let letters = r.letters();
        let pos = letters.iter().position(|&(h, _)| h == g).unwrap();
        let e = letters[pos].1;
        let v = Word::from_letters(letters[pos + 1..].iter().copied());
        let u = Word::from_letters(letters[..pos].iter().copied());
        let image = v.mul(&u).pow(-e);
        let images: Vec<Word> = (0..n).map(|h| if h == g { image.clone() } else { Word::generator(h) }).collect();
        let substituted: Vec<Word> = rels.iter().map(|w| w.substitute(&images)).collect();
        rels = clean_relators(&substituted).0;
        alive[g] = false;
        eliminated += 1;
    }
    if eliminated == 0 {
        return GroupPresentation::new(p.names().to_vec(), rels, p.degrees().map(|d| d.to_vec()))
            .expect("relators use declared generators");
    }
    let mut map = vec![usize::MAX; n];
    let mut names = Vec::new();
    for g in 0..n {
        if alive[g] {
            map[g] = names.len();
            names.push(p.names()[g].clone());
        }
    }
    let rels = rels.iter().map(|w| w.relabel(&map)).collect();
    GroupPresentation::new(names, rels, None).expect("relators use surviving generators")
}

/// Reorders generators: `order[k]` becomes generator `k`.
pub fn reorder_generators(p: &GroupPresentation, order: &[usize]) -> Result<GroupPresentation> {
    let n = p.generator_count();
    let mut map = vec![usize::MAX; n];
    for (k, &g) in order.iter().enumerate() {
        if g >= n || map[g] != usize::MAX {
            return Err(Error::InvalidArgument("generator order is not a permutation".into()));
        }
        map[g] = k;
    }
    if order.len() != n {
        return Err(Error::InvalidArgument("generator order is not a permutation".into()));
    }
    let names = order.iter().map(|&g| p.names()[g].clone()).collect();
    let rels = p.relators().iter().map(|w| w.relabel(&map)).collect();
    let degrees = p.degrees().map(|d| order.iter().map(|&g| d[g]).collect());
    GroupPresentation::new(names, rels, degrees)
}

pub const CEVA_GROUP: &str = include_str!("../fixtures/ceva.group");
pub const CEVA_ALPHA: &str = include_str!("../fixtures/ceva_alpha.json");

#[derive(Deserialize)]
struct AlphaFixture {
    images: Vec<Vec<i64>>,
    transversal: Vec<String>,
    kill: Vec<String>,
}

/// The Ceva group of the bundled fixture.
pub fn ceva_group() -> GroupPresentation {
    parse_group_dsl(CEVA_GROUP).expect("bundled Ceva fixture parses")
}

/// The map onto `Z_n × Z_n` of the bundled fixture.
pub fn ceva_alpha(n: u64) -> Result<FiniteAbelianQuotient> {
    let fx: AlphaFixture = serde_json::from_str(CEVA_ALPHA).map_err(|e| Error::Inconsistent(e.to_string()))?;
    FiniteAbelianQuotient::new(vec![n, n], fx.images)
}

/// Presentation of the complement of the Fermat-type arrangement, built from the
/// Ceva group by Reidemeister–Schreier, killing `e0^n, e1^n, e2^n` and Tietze moves.
///
/// Generators come out as `e5, e3_0..e3_{n-1}, e4_0..e4_{n-1}` where
/// `e3_j = e2^j e3 e2^-j`, `e4_i = e1^i e4 e1^-i` and `e5` is the original meridian.
pub fn fermat_group(n: u64) -> Result<GroupPresentation> {
    if n < 2 {
        return Err(Error::InvalidArgument("fermat_group needs n >= 2".into()));
    }
    let g = ceva_group();
    let fx: AlphaFixture = serde_json::from_str(CEVA_ALPHA).map_err(|e| Error::Inconsistent(e.to_string()))?;
    let alpha = FiniteAbelianQuotient::new(vec![n, n], fx.images)?;
    let idx = |name: &str| g.index_of(name).ok_or_else(|| Error::Inconsistent(format!("no generator {name}")));
    let order: Vec<usize> = fx.transversal.iter().map(|s| idx(s)).collect::<Result<_>>()?;
    let cover = schreier_cover(&g, &alpha, &order)?;
    let mut extra = Vec::new();
    for k in &fx.kill {
        let w = Word::power_of(idx(k)?, n as i64);
        for c in 0..cover.cosets.len() {
            extra.push(cover.rewrite_conjugate(&w, c)?);
        }
    }
    let raw = quotient_by_relators(&cover.presentation, &extra)?;
    let (e3, e4, e5) = (idx("e3")?, idx("e4")?, idx("e5")?);
    let ni = n as i64;
    let coset = |i: i64, j: i64| cover.coset_of(&[i, j]).expect("coset exists");
    let mut front = vec![cover.schreier_generator(coset(0, 0), e5)];
    let mut new_names = vec!["e5".to_string()];
    for j in 0..ni {
        front.push(cover.schreier_generator(coset(0, j), e3));
        new_names.push(format!("e3_{j}"));
    }
    for i in 0..ni {
        front.push(cover.schreier_generator(coset(i, 0), e4));
        new_names.push(format!("e4_{i}"));
    }
    let mut perm = front.clone();
    perm.extend((0..raw.generator_count()).filter(|x| !front.contains(x)));
    let raw = reorder_generators(&raw, &perm)?;
    let keep: Vec<bool> = (0..raw.generator_count()).map(|x| x < front.len()).collect();
    let simple = tietze_simplify_keeping(&raw, usize::MAX, &keep);
    let mut names = simple.names().to_vec();
    for (k, nm) in new_names.into_iter().enumerate() {
        names[k] = nm;
    }
    simple.with_names(names)
}

//! Orbicurves, markings, pullbacks along pencils, independence of equivariant
//! pencil data and quasitoric identities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::cyclotomic_polynomial;
use crate::engine::{DepthEngine, Method};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{integer_kernel, smith_normal_form};
use crate::presentation::{
    free_product_orders, require_valid, to_u64, verify_hom, Character, GroupHom, GroupPresentation,
};
use crate::word::{normal_form_free_product_cyclic, FactorOrder, Word};

/// `P¹` with labeled points of orders `labels` and `punctures` removed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbicurve {
    pub labels: Vec<u64>,
    pub punctures: usize,
}

impl Orbicurve {
    pub fn new(labels: Vec<u64>, punctures: usize) -> Result<Self> {
        if labels.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument("orbifold labels must be at least 2".into()));
        }
        Ok(Orbicurve { labels, punctures })
    }

    /// `P¹_{m,m,∞}`, often written `C_{m,m}`.
    pub fn c_mm(m: u64) -> Self {
        Orbicurve { labels: vec![m, m], punctures: 1 }
    }

    pub fn is_compact(&self) -> bool {
        self.punctures == 0
    }
}

/// `⟨μ_1..μ_s, f_1..f_{k-1} | μ_j^{m_j}⟩`, plus `μ_1⋯μ_s` when there are no punctures.
pub fn orbifold_group(c: &Orbicurve) -> GroupPresentation {
    let s = c.labels.len();
    let mut names: Vec<String> = (1..=s).map(|i| format!("mu{i}")).collect();
    names.extend((1..c.punctures).map(|i| format!("f{i}")));
    let mut rels: Vec<Word> = c.labels.iter().enumerate().map(|(i, &m)| Word::power_of(i, m as i64)).collect();
    if c.is_compact() && s > 0 {
        rels.push(Word::from_letters((0..s).map(|i| (i, 1))));
    }
    GroupPresentation::new(names, rels, None).expect("orbifold relators use declared generators")
}

/// Depth of a marking, computed with the Fox method on the orbifold group.
pub fn orbifold_depth(c: &Orbicurve, rho: &Character) -> Result<usize> {
    if rho.is_trivial() {
        return Err(Error::Unsupported("markings are nontrivial characters".into()));
    }
    let g = orbifold_group(c);
    Ok(DepthEngine::fox_only(&g).depth(rho, Method::Fox)?.depth)
}

/// Every nontrivial character of order dividing `n` with positive depth.
pub fn markings(c: &Orbicurve, n: u64) -> Result<Vec<(Character, usize)>> {
    let g = orbifold_group(c);
    let engine = DepthEngine::fox_only(&g);
    let chars = crate::engine::enumerate_characters(&g, n, None, 1 << 24)?;
    let mut out = Vec::new();
    for chi in chars.into_iter().filter(|c| !c.is_trivial()) {
        let d = engine.depth(&chi, Method::Fox)?.depth;
        if d > 0 {
            out.push((chi, d));
        }
    }
    Ok(out)
}

/// Equivariant images `Ψ_*(γ) ∈ Z[t]/(Φ_n)` of listed homology classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantImages {
    pub order: u64,
    pub generators: Vec<HomologyClass>,
    /// `images[g]`: coefficients in the basis `1, t, ..., t^{φ(n)-1}`.
    pub images: Vec<Vec<i64>>,
}

/// A listed class; translates declare `γ = deck^power · base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyClass {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct PencilData {
    pub name: String,
    /// Absent for pencils known only through their equivariant images.
    pub hom: Option<GroupHom>,
    pub equivariant: Option<EquivariantImages>,
}

pub fn pullback_character(p: &PencilData, rho: &Character) -> Result<Character> {
    let hom = p.hom.as_ref().ok_or_else(|| Error::Inconsistent(format!("pencil {} has no hom", p.name)))?;
    let target = &hom.target;
    if rho.len() != target.generator_count() {
        return Err(Error::GeneratorCountMismatch { expected: target.generator_count(), got: rho.len() });
    }
    require_valid(rho, target)?;
    let orders = free_product_orders(target)?;
    if !verify_hom(hom, &orders)? {
        return Err(Error::InvalidHom(format!("pencil {} does not kill every source relator", p.name)));
    }
    let exps = hom.images.iter().map(|w| rho.value_exponent(w)).collect();
    let chi = Character::new(rho.order, exps)?;
    require_valid(&chi, &hom.source)?;
    Ok(chi)
}

pub fn verify_marked_pencil(p: &PencilData, chi: &Character, rho: &Character) -> Result<bool> {
    let pulled = pullback_character(p, rho)?;
    let order = pulled.order.lcm(&chi.order);
    Ok(pulled.with_order(order)? == chi.with_order(order)?)
}

/// Ring `Z[t]/(Φ_n)` in the power basis.
struct CyclicModule {
    n: u64,
    phi: Vec<i64>,
}

impl CyclicModule {
    fn new(n: u64) -> Self {
        CyclicModule { n, phi: cyclotomic_polynomial(n).to_vec() }
    }

    fn rank(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        let d = self.rank();
        while v.len() > d {
            let top = v.pop().unwrap();
            let shift = v.len() - d;
            for (k, &c) in self.phi[..d].iter().enumerate() {
                v[shift + k] -= top * c;
            }
        }
        v.resize(d, 0);
        v
    }

    fn shift(&self, a: &[i64], k: u64) -> Vec<i64> {
        let mut v = vec![0i64; k as usize % self.n as usize];
        v.extend_from_slice(a);
        self.reduce(v)
    }

    /// Matrix of multiplication by `v` (column k is `v·t^k`).
    fn mult_matrix(&self, v: &[i64]) -> Vec<Vec<i64>> {
        let d = self.rank();
        let cols: Vec<Vec<i64>> = (0..d).map(|k| self.shift(v, k as u64)).collect();
        (0..d).map(|r| (0..d).map(|c| cols[c][r]).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub independent: bool,
    pub strongly_independent_on_data: bool,
    /// Invariant factors different from 1 of the stacked image lattice (0 marks a free summand).
    pub cokernel: Vec<u64>,
    pub translate_matrix_shape: (usize, usize),
    pub notes: Vec<String>,
}

/// `Z[G]`-independence and data-level strong independence of equivariant pencil maps.
pub fn independence_check(pencils: &[PencilData], n: u64) -> Result<IndependenceReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("cyclic module order must be at least 2".into()));
    }
    let ring = CyclicModule::new(n);
    let d = ring.rank();
    let data: Vec<&EquivariantImages> = pencils
        .iter()
        .map(|p| p.equivariant.as_ref().ok_or_else(|| Error::Inconsistent(format!("pencil {} has no equivariant data", p.name))))
        .collect::<Result<_>>()?;
    let Some(first) = data.first() else {
        return Err(Error::InvalidArgument("no pencils".into()));
    };
    for (p, e) in pencils.iter().zip(&data) {
        if e.order != n {
            return Err(Error::Inconsistent(format!("pencil {} has module order {} instead of {n}", p.name, e.order)));
        }
        if e.generators != first.generators {
            return Err(Error::Inconsistent(format!("pencil {} lists different generators", p.name)));
        }
        if e.images.len() != e.generators.len() || e.images.iter().any(|v| v.len() != d) {
            return Err(Error::Inconsistent(format!("pencil {} images must have {d} coefficients", p.name)));
        }
        check_equivariance(&ring, e, &p.name)?;
    }
    let reps: Vec<usize> = (0..first.generators.len()).filter(|&g| first.generators[g].base.is_none()).collect();
    let m = pencils.len();

    // Σ_ε a_ε Ψ_ε(g) = 0 by restriction of scalars
    let mut eqs: Vec<Vec<BigInt>> = Vec::new();
    for &g in &reps {
        let blocks: Vec<Vec<Vec<i64>>> = data.iter().map(|e| ring.mult_matrix(&e.images[g])).collect();
        for r in 0..d {
            eqs.push(blocks.iter().flat_map(|b| b[r].iter().map(|&x| BigInt::from(x))).collect());
        }
    }
    let independent = integer_kernel(&eqs, m * d).is_empty();

    // lattice spanned by all deck translates of the stacked images
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for &g in &reps {
        for j in 0..n {
            rows.push(data.iter().flat_map(|e| ring.shift(&e.images[g], j)).map(BigInt::from).collect());
        }
    }
    let shape = (rows.len(), m * d);
    let snf = smith_normal_form(&rows);
    let mut cokernel: Vec<u64> = snf.invariant_factors().iter().filter(|x| !x.is_one()).map(to_u64).collect();
    cokernel.extend(std::iter::repeat_n(0, m * d - snf.rank));
    let strongly = cokernel.is_empty();
    let mut notes = Vec::new();
    if !strongly {
        notes.push(format!(
            "the listed classes span a proper sublattice of (Z[t]/Phi_{n})^{m} (cokernel {cokernel:?}); \
             surjectivity of the direct sum of the pencil maps is not witnessed by these classes, \
             so H1 of the cover must contain further classes if the direct sum is surjective"
        ));
    }
    Ok(IndependenceReport { independent, strongly_independent_on_data: strongly, cokernel, translate_matrix_shape: shape, notes })
}

fn check_equivariance(ring: &CyclicModule, e: &EquivariantImages, name: &str) -> Result<()> {
    let index: BTreeMap<&str, usize> = e.generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
    for (i, g) in e.generators.iter().enumerate() {
        if let Some(base) = &g.base {
            let b = *index
                .get(base.as_str())
                .ok_or_else(|| Error::Inconsistent(format!("unknown base class {base}")))?;
            let expected = ring.shift(&e.images[b], g.power.unwrap_or(0));
            if expected != e.images[i] {
                return Err(Error::Inconsistent(format!(
                    "pencil {name}: image of {} is not the deck translate of {base}",
                    g.name
                )));
            }
        }
    }
    Ok(())
}

/// `d(χ) ≥ m·d(ρ)`.
pub fn depth_bound_holds(chi_depth: usize, pencils: usize, rho_depth: usize) -> bool {
    chi_depth >= pencils * rho_depth
}

/// Role of a source meridian in a pencil whose target has labeled points and one puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum MeridianRole {
    /// Component of the fiber over labeled point `point` with multiplicity `mult`.
    Labeled { point: usize, mult: u64 },
    /// Component of the fiber over the puncture.
    Puncture { mult: u64 },
    /// Not contained in a special fiber.
    Off,
}

/// All normal forms in the orbifold group of length at most `len`.
fn short_elements(orders: &[FactorOrder], gens: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..gens {
                for e in [1i64, -1] {
                    let v = normal_form_free_product_cyclic(&w.mul(&Word::power_of(g, e)), orders);
                    if !out.contains(&v) {
                        out.push(v.clone());
                        next.push(v);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Backtracking search for a homomorphism sending each meridian to a conjugate of the
/// element its role prescribes (conjugators of length ≤ `conjugator_length`).
pub fn search_pencil_hom(
    source: &GroupPresentation,
    target: &Orbicurve,
    roles: &[MeridianRole],
    conjugator_length: usize,
) -> Result<Option<Vec<Word>>> {
    if target.punctures != 1 {
        return Err(Error::Unsupported("pencil search needs exactly one puncture".into()));
    }
    if roles.len() != source.generator_count() {
        return Err(Error::GeneratorCountMismatch { expected: source.generator_count(), got: roles.len() });
    }
    let tg = orbifold_group(target);
    let orders = free_product_orders(&tg)?;
    let s = target.labels.len();
    let conj = short_elements(&orders, tg.generator_count(), conjugator_length);
    let infinity = Word::from_letters((0..s).map(|i| (i, 1))).inverse();
    let candidates: Vec<Vec<Word>> = roles
        .iter()
        .map(|role| {
            let bases: Vec<Word> = match *role {
                MeridianRole::Off => vec![Word::identity()],
                MeridianRole::Labeled { point, mult } => vec![Word::power_of(point, mult as i64)],
                MeridianRole::Puncture { mult } => vec![infinity.pow(mult as i64), infinity.pow(-(mult as i64))],
            };
            let mut c: Vec<Word> = Vec::new();
            for b in &bases {
                for x in &conj {
                    let w = normal_form_free_product_cyclic(&x.conjugate(b), &orders);
                    if !c.contains(&w) {
                        c.push(w);
                    }
                }
            }
            c.sort_by_key(|w| w.length());
            c
        })
        .collect();
    if roles.iter().any(|r| matches!(r, MeridianRole::Labeled { point, .. } if *point >= s)) {
        return Err(Error::InvalidArgument("labeled point out of range".into()));
    }
    // relators grouped by the last generator they use
    let n = source.generator_count();
    let mut by_last: Vec<Vec<&Word>> = vec![Vec::new(); n];
    for r in source.relators() {
        if let Some(g) = r.max_generator() {
            by_last[g].push(r);
        }
    }
    let mut images = vec![Word::identity(); n];
    if backtrack(0, &candidates, &by_last, &orders, &mut images) {
        Ok(Some(images))
    } else {
        Ok(None)
    }
}

fn backtrack(g: usize, cands: &[Vec<Word>], by_last: &[Vec<&Word>], orders: &[FactorOrder], images: &mut Vec<Word>) -> bool {
    if g == cands.len() {
        return true;
    }
    for c in &cands[g] {
        images[g] = c.clone();
        let ok = by_last[g]
            .iter()
            .all(|r| normal_form_free_product_cyclic(&r.substitute(images), orders).is_identity());
        if ok && backtrack(g + 1, cands, by_last, orders, images) {
            return true;
        }
    }
    images[g] = Word::identity();
    false
}

/// Multivariate polynomial with integer coefficients, parsed from `x*y^2 - (x - z)^3`.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<LaurentPoly> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = PolyParser { s: &chars, pos: 0, vars, n: vars.len() };
    let out = p.expr()?;
    p.skip();
    if p.pos != chars.len() {
        return Err(Error::parse(1, p.pos + 1, "unexpected input"));
    }
    Ok(out)
}

struct PolyParser<'a> {
    s: &'a [char],
    pos: usize,
    vars: &'a [String],
    n: usize,
}

impl PolyParser<'_> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            if c == '+' {
                self.pos += 1;
                acc = acc.add(&self.term()?)?;
            } else if c == '-' {
                self.pos += 1;
                acc = acc.sub(&self.term()?)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?)?;
                }
                Some(c) if c == '(' || c.is_ascii_alphanumeric() => acc = acc.mul(&self.power()?)?,
                _ => return Ok(acc),
            }
        }
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().map_err(|_| Error::parse(1, start + 1, "expected an integer"))
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip();
            let e = self.number()?;
            let mut acc = LaurentPoly::one(self.n);
            for _ in 0..e {
                acc = acc.mul(&base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some('(') => {
                let at = self.pos;
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(1, at + 1, "unbalanced '('"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                Ok(LaurentPoly::constant(self.n, v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == '_') {
                    self.pos += 1;
                }
                let name: String = self.s[start..self.pos].iter().collect();
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::parse(1, start + 1, format!("unknown variable {name}")))?;
                Ok(LaurentPoly::var(self.n, i))
            }
            _ => Err(Error::parse(1, self.pos + 1, "expected a polynomial")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasitoricFactor {
    pub poly: String,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasitoricTerm {
    pub coefficient: i64,
    pub factors: Vec<QuasitoricFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasitoricIdentity {
    pub name: String,
    pub variables: Vec<String>,
    pub terms: Vec<QuasitoricTerm>,
}

/// `Σ coefficient · ∏ factor^mult`, expanded exactly.
pub fn quasitoric_sum(id: &QuasitoricIdentity) -> Result<LaurentPoly> {
    let n = id.variables.len();
    let mut total = LaurentPoly::zero(n);
    for t in &id.terms {
        let mut prod = LaurentPoly::constant(n, t.coefficient);
        for f in &t.factors {
            let p = parse_polynomial(&f.poly, &id.variables)?;
            for _ in 0..f.mult {
                prod = prod.mul(&p)?;
            }
        }
        total = total.add(&prod)?;
    }
    Ok(total)
}

pub fn quasitoric_verify(id: &QuasitoricIdentity) -> Result<bool> {
    Ok(quasitoric_sum(id)?.is_zero())
}

/// Bundled fixtures for pencils and quasitoric identities.
pub mod fixtures {
    pub const QUASITORIC: &str = include_str!("../fixtures/quasitoric.json");
    pub const FERMAT_PENCILS_2: &str = include_str!("../fixtures/fermat_pencils_n2.json");
    pub const FERMAT_PENCILS_3: &str = include_str!("../fixtures/fermat_pencils_n3.json");
    pub const C7_PENCILS: &str = include_str!("../fixtures/c7_pencils.json");
    pub const C8_PENCILS: &str = include_str!("../fixtures/c8_pencils.json");
    pub const C9_PENCILS: &str = include_str!("../fixtures/c9_pencils.json");
}

pub fn bundled_quasitoric() -> Result<Vec<QuasitoricIdentity>> {
    serde_json::from_str(fixtures::QUASITORIC).map_err(|e| Error::Inconsistent(e.to_string()))
}

/// Source of a pencil fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PencilSource {
    Fermat { n: u64 },
    Arrangement { lines: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilEntry {
    pub name: String,
    /// Meridian images as words in `mu1, mu2, ...`; unlisted generators map to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<Vec<MeridianRole>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivariant: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilFile {
    #[serde(default)]
    pub comment: Vec<String>,
    pub source: PencilSource,
    pub target: Orbicurve,
    pub rho: Character,
    pub chi: Character,
    pub pencils: Vec<PencilEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<Vec<HomologyClass>>,
}

/// Loaded pencil fixture with the source group built from its description.
#[derive(Clone, Debug)]
pub struct PencilFixture {
    pub file: PencilFile,
    pub source: GroupPresentation,
    pub target: GroupPresentation,
    pub pencils: Vec<PencilData>,
}

pub fn source_group(src: &PencilSource) -> Result<GroupPresentation> {
    use crate::arrangement::{fixtures as lf, projective_group_from_text};
    match src {
        PencilSource::Fermat { n } => crate::covers::fermat_group(*n),
        PencilSource::Arrangement { lines } => {
            let text = match lines.as_str() {
                "c6" => lf::C6,
                "c7" => lf::C7,
                "c8" => lf::C8,
                "c9" => lf::C9,
                "ceva" => lf::CEVA,
                other => return Err(Error::InvalidArgument(format!("unknown bundled line file {other}"))),
            };
            projective_group_from_text(text)
        }
    }
}

pub fn load_pencil_fixture(text: &str) -> Result<PencilFixture> {
    let file: PencilFile = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let source = source_group(&file.source)?;
    let target = orbifold_group(&file.target);
    let mut pencils = Vec::new();
    for entry in &file.pencils {
        let hom = match &entry.images {
            Some(map) => {
                let mut images = vec![Word::identity(); source.generator_count()];
                for (g, w) in map {
                    let i = source
                        .index_of(g)
                        .ok_or_else(|| Error::Inconsistent(format!("pencil {}: unknown source generator {g}", entry.name)))?;
                    images[i] = crate::dsl::parse_word(w, target.names())?;
                }
                Some(GroupHom::new(source.clone(), target.clone(), images)?)
            }
            None => None,
        };
        let equivariant = match (&entry.equivariant, &file.homology) {
            (Some(imgs), Some(classes)) => Some(EquivariantImages {
                order: file.rho.order,
                generators: classes.clone(),
                images: imgs.clone(),
            }),
            (Some(_), None) => return Err(Error::Inconsistent("equivariant images without homology classes".into())),
            _ => None,
        };
        pencils.push(PencilData { name: entry.name.clone(), hom, equivariant });
    }
    Ok(PencilFixture { file, source, target, pencils })
}

/// Pullback, marking and depth-bound verification of a fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilVerification {
    pub pencils: Vec<(String, bool)>,
    pub chi_depth: usize,
    pub rho_depth: usize,
    pub bound_holds: bool,
    pub notes: Vec<String>,
}

pub fn verify_pencil_fixture(fx: &PencilFixture) -> Result<PencilVerification> {
    let mut pencils = Vec::new();
    for p in fx.pencils.iter().filter(|p| p.hom.is_some()) {
        pencils.push((p.name.clone(), verify_marked_pencil(p, &fx.file.chi, &fx.file.rho)?));
    }
    let chi_depth = DepthEngine::new(&fx.source).depth_auto(&fx.file.chi)?.depth;
    let rho_depth = orbifold_depth(&fx.file.target, &fx.file.rho)?;
    let m = pencils.len();
    let mut notes = Vec::new();
    if rho_depth == 0 {
        notes.push("target character has depth 0, so it is not a marking and the bound is vacuous".to_string());
    }
    Ok(PencilVerification { pencils, chi_depth, rho_depth, bound_holds: depth_bound_holds(chi_depth, m, rho_depth), notes })
}

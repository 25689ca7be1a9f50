//! Depths of characters, torsion scans and coordinate classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::alexander_matrix;
use crate::invariant::{invariant_matrix_with, zariski_data, zariski_form, InvariantPresentation, ZariskiForm};
use crate::laurent::LaurentMatrix;
use crate::linalg::rank_cyclotomic;
use crate::presentation::{validate_character, Character, GroupPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Fox,
    Invariant,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fox" => Ok(Method::Fox),
            "invariant" => Ok(Method::Invariant),
            "both" => Ok(Method::Both),
            _ => Err(Error::InvalidArgument(format!("unknown method {s}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fox: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_columns: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub character: Character,
    pub depth: usize,
    pub method: Method,
    pub ranks: Ranks,
    pub stratum: String,
}

impl DepthReport {
    pub fn csv_header() -> &'static str {
        "order,exponents,depth,method,fox_rank,invariant_rank"
    }

    pub fn csv_row(&self) -> String {
        let exps: Vec<String> = self.character.exponents.iter().map(|e| e.to_string()).collect();
        let m = match self.method {
            Method::Fox => "fox",
            Method::Invariant => "invariant",
            Method::Both => "both",
        };
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.character.order,
            exps.join(";"),
            self.depth,
            m,
            opt(self.ranks.fox),
            opt(self.ranks.invariant)
        )
    }
}

/// Precomputed matrices for repeated depth queries on one presentation.
pub struct DepthEngine {
    presentation: GroupPresentation,
    fox: LaurentMatrix,
    invariant: Option<(ZariskiForm, InvariantPresentation)>,
    invariant_error: Option<Error>,
}

impl DepthEngine {
    pub fn new(p: &GroupPresentation) -> Self {
        let fox = alexander_matrix(p);
        let (invariant, invariant_error) = match build_invariant(p) {
            Ok(x) => (Some(x), None),
            Err(e) => (None, Some(e)),
        };
        DepthEngine { presentation: p.clone(), fox, invariant, invariant_error }
    }

    /// Engine without the invariant matrix (Fox method only).
    pub fn fox_only(p: &GroupPresentation) -> Self {
        DepthEngine {
            presentation: p.clone(),
            fox: alexander_matrix(p),
            invariant: None,
            invariant_error: Some(Error::Unsupported("invariant method disabled".into())),
        }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn has_invariant(&self) -> bool {
        self.invariant.is_some()
    }

    pub fn invariant(&self) -> Option<&InvariantPresentation> {
        self.invariant.as_ref().map(|(_, i)| i)
    }

    pub fn zariski(&self) -> Option<&ZariskiForm> {
        self.invariant.as_ref().map(|(z, _)| z)
    }

    /// `n − 1 − rank` of the Alexander matrix at a nontrivial character.
    pub fn fox_depth(&self, chi: &Character) -> Result<(usize, usize)> {
        if chi.is_trivial() {
            return Err(Error::Unsupported("the Fox method does not apply at the trivial character".into()));
        }
        let m = self.fox.evaluate_exponents(chi.order, &chi.exponents)?;
        let rank = rank_cyclotomic(&m);
        let n = self.presentation.generator_count();
        Ok((n - 1 - rank, rank))
    }

    /// Corank of the invariant matrix at the character.
    pub fn invariant_depth(&self, chi: &Character) -> Result<(usize, usize)> {
        let (form, inv) = self.invariant.as_ref().ok_or_else(|| self.invariant_error.clone().unwrap())?;
        inv.corank_at(&form.transport(chi))
    }

    pub fn depth(&self, chi: &Character, method: Method) -> Result<DepthReport> {
        let check = validate_character(chi, &self.presentation)?;
        if !check.valid {
            return Err(Error::InvalidCharacter(check.diagnostic));
        }
        let mut ranks = Ranks::default();
        let (depth, used) = match method {
            Method::Fox => {
                let (d, r) = self.fox_depth(chi)?;
                ranks.fox = Some(r);
                (d, Method::Fox)
            }
            Method::Invariant => {
                let (d, r) = self.invariant_depth(chi)?;
                ranks.invariant = Some(r);
                ranks.invariant_columns = Some(d + r);
                (d, Method::Invariant)
            }
            Method::Both => {
                let (di, ri) = self.invariant_depth(chi)?;
                ranks.invariant = Some(ri);
                ranks.invariant_columns = Some(di + ri);
                if chi.is_trivial() {
                    (di, Method::Invariant)
                } else {
                    let (df, rf) = self.fox_depth(chi)?;
                    ranks.fox = Some(rf);
                    if df != di {
                        return Err(Error::MethodDisagreement { fox: df, invariant: di });
                    }
                    (df, Method::Both)
                }
            }
        };
        Ok(DepthReport { character: chi.clone(), depth, method: used, ranks, stratum: format!("V_{depth}") })
    }

    /// Both methods when available, Fox otherwise; the trivial character uses the invariant method.
    pub fn depth_auto(&self, chi: &Character) -> Result<DepthReport> {
        if chi.is_trivial() {
            self.depth(chi, Method::Invariant)
        } else if self.has_invariant() {
            self.depth(chi, Method::Both)
        } else {
            self.depth(chi, Method::Fox)
        }
    }
}

fn build_invariant(p: &GroupPresentation) -> Result<(ZariskiForm, InvariantPresentation)> {
    let form = match zariski_data(p) {
        Ok(data) => ZariskiForm {
            presentation: p.clone().with_degrees(None)?,
            substitution: (0..p.generator_count()).map(crate::word::Word::generator).collect(),
            data,
        },
        Err(_) => zariski_form(p)?,
    };
    let inv = invariant_matrix_with(&form.presentation, &form.data)?;
    Ok((form, inv))
}

pub fn depth(p: &GroupPresentation, chi: &Character, method: Method) -> Result<DepthReport> {
    DepthEngine::new(p).depth(chi, method)
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Maximum number of candidate characters enumerated.
    pub budget: u128,
    pub jobs: usize,
    pub method: Option<Method>,
    /// Keep depth-0 characters in the result.
    pub include_zero: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { budget: 2_000_000, jobs: 1, method: None, include_zero: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanResult {
    pub order: u64,
    pub entries: Vec<DepthReport>,
    pub notes: Vec<String>,
}

impl ScanResult {
    pub fn depth_of(&self, chi: &Character) -> Option<usize> {
        self.entries.iter().find(|r| &r.character == chi).map(|r| r.depth)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(DepthReport::csv_header());
        out.push('\n');
        for r in &self.entries {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

/// All valid characters with values in `μ_N` (exponents in `[0, N)`), restricted to the mask.
pub fn enumerate_characters(
    p: &GroupPresentation,
    n: u64,
    mask: Option<&[bool]>,
    budget: u128,
) -> Result<Vec<Character>> {
    let g = p.generator_count();
    if let Some(m) = mask {
        if m.len() != g {
            return Err(Error::GeneratorCountMismatch { expected: g, got: m.len() });
        }
    }
    let free: Vec<usize> = (0..g).filter(|&i| mask.is_none_or(|m| m[i])).collect();
    let count = (n as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let mut out = Vec::new();
    let mut exps = vec![0i64; g];
    loop {
        let chi = Character { order: n, exponents: exps.clone() };
        if validate_character(&chi, p)?.valid {
            out.push(chi);
        }
        // odometer over the free positions
        let mut k = 0;
        loop {
            if k == free.len() {
                return Ok(out);
            }
            let pos = free[k];
            exps[pos] += 1;
            if exps[pos] < n as i64 {
                break;
            }
            exps[pos] = 0;
            k += 1;
        }
    }
}

/// Depth of every valid character of order dividing `N` (within the mask).
pub fn torsion_scan(
    p: &GroupPresentation,
    n: u64,
    mask: Option<&[bool]>,
    options: &ScanOptions,
) -> Result<ScanResult> {
    let engine = DepthEngine::new(p);
    torsion_scan_with(&engine, n, mask, options)
}

pub fn torsion_scan_with(
    engine: &DepthEngine,
    n: u64,
    mask: Option<&[bool]>,
    options: &ScanOptions,
) -> Result<ScanResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let mut notes = Vec::new();
    let mut chars = enumerate_characters(engine.presentation(), n, mask, options.budget)?;
    if !engine.has_invariant() {
        if chars.iter().any(|c| c.is_trivial()) {
            notes.push(format!(
                "trivial character skipped: no Zariski form ({})",
                engine.invariant_error.as_ref().map(|e| e.to_string()).unwrap_or_default()
            ));
        }
        chars.retain(|c| !c.is_trivial());
    }
    let jobs = options.jobs.max(1).min(chars.len().max(1));
    let run = |c: &Character| -> Result<DepthReport> {
        match options.method {
            Some(m) if !c.is_trivial() => engine.depth(c, m),
            Some(Method::Fox) | None => engine.depth_auto(c),
            Some(m) => engine.depth(c, m),
        }
    };
    let mut results: Vec<Result<DepthReport>> = Vec::with_capacity(chars.len());
    if jobs == 1 {
        results.extend(chars.iter().map(run));
    } else {
        let chunk = chars.len().div_ceil(jobs);
        let parts: Vec<Vec<Result<DepthReport>>> = std::thread::scope(|s| {
            let handles: Vec<_> = chars
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(run).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scan worker panicked")).collect()
        });
        for p in parts {
            results.extend(p);
        }
    }
    let mut entries = Vec::new();
    for r in results {
        let r = r?;
        if r.depth > 0 || options.include_zero {
            entries.push(r);
        }
    }
    entries.sort_by(|a, b| a.character.exponents.cmp(&b.character.exponents));
    Ok(ScanResult { order: n, entries, notes })
}

/// Presentation of a subcurve complement together with the generator correspondence.
#[derive(Clone, Debug)]
pub struct Deletion {
    pub sub: GroupPresentation,
    /// Generator `i` of `sub` corresponds to generator `generator_map[i]` of the full presentation.
    pub generator_map: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordinateLabel {
    NonCoordinate,
    EssentialCandidate,
    NonEssential,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub order: u64,
    /// Characters of this order on the same coordinate subtorus with at least the same depth.
    pub at_least_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateReport {
    pub label: CoordinateLabel,
    pub depth: Option<usize>,
    pub sub_depth: Option<usize>,
    pub evidence: Vec<Evidence>,
}

pub fn classify_coordinate(
    chi: &Character,
    p: &GroupPresentation,
    deletion: &Deletion,
    with_evidence: bool,
) -> Result<CoordinateReport> {
    if chi.is_trivial() || !chi.is_coordinate() {
        return Ok(CoordinateReport { label: CoordinateLabel::NonCoordinate, depth: None, sub_depth: None, evidence: vec![] });
    }
    let engine = DepthEngine::new(p);
    let full = engine.depth_auto(chi)?.depth;
    let restricted = chi.restrict(&deletion.generator_map);
    let check = validate_character(&restricted, &deletion.sub)?;
    if !check.valid {
        return Err(Error::InvalidCharacter(format!("restricted character: {}", check.diagnostic)));
    }
    let sub_engine = DepthEngine::new(&deletion.sub);
    let sub = sub_engine.depth_auto(&restricted)?.depth;
    let label = if full > sub { CoordinateLabel::EssentialCandidate } else { CoordinateLabel::NonEssential };
    let mut evidence = Vec::new();
    if with_evidence {
        let mask: Vec<bool> = chi.exponents.iter().map(|&e| e != 0).collect();
        for order in [chi.order, 2 * chi.order] {
            let scan = torsion_scan_with(&engine, order, Some(&mask), &ScanOptions::default())?;
            let count = scan
                .entries
                .iter()
                .filter(|r| r.depth >= full && r.character.exponents.iter().zip(&mask).all(|(&e, &m)| m == (e != 0)))
                .count();
            evidence.push(Evidence { order, at_least_depth: count });
        }
    }
    Ok(CoordinateReport { label, depth: Some(full), sub_depth: Some(sub), evidence })
}

/// `C(n, k)`
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;

    #[test]
    fn free_group_depths() {
        let f4 = GroupPresentation::free(4);
        let e = DepthEngine::new(&f4);
        let minus = Character::from_signs(&[-1, -1, -1, -1]).unwrap();
        assert_eq!(e.depth(&minus, Method::Both).unwrap().depth, 3);
        assert_eq!(e.depth(&Character::trivial(4), Method::Invariant).unwrap().depth, 6);
        assert!(e.depth(&Character::trivial(4), Method::Fox).is_err());
    }

    #[test]
    fn z2_free_product() {
        let names = vec!["a".to_string(), "b".to_string()];
        let p = GroupPresentation::new(names, vec![Word::power_of(0, 2), Word::power_of(1, 2)], None).unwrap();
        let chi = Character::from_signs(&[-1, -1]).unwrap();
        assert_eq!(depth(&p, &chi, Method::Fox).unwrap().depth, 1);
        // H1 has torsion: the invariant method is unavailable
        assert!(depth(&p, &chi, Method::Invariant).is_err());
    }

    #[test]
    fn f2_scan() {
        let scan = torsion_scan(&GroupPresentation::free(2), 2, None, &ScanOptions::default()).unwrap();
        assert_eq!(scan.entries.len(), 4);
        assert!(scan.entries.iter().all(|r| r.depth == 1));
        let par = torsion_scan(
            &GroupPresentation::free(3),
            3,
            None,
            &ScanOptions { jobs: 4, ..ScanOptions::default() },
        )
        .unwrap();
        let seq = torsion_scan(&GroupPresentation::free(3), 3, None, &ScanOptions::default()).unwrap();
        assert_eq!(par.entries, seq.entries);
    }

    #[test]
    fn budget_is_enforced() {
        let err = torsion_scan(
            &GroupPresentation::free(6),
            5,
            None,
            &ScanOptions { budget: 1000, ..ScanOptions::default() },
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn classify_non_coordinate_and_trivial() {
        let f2 = GroupPresentation::free(2);
        let del = Deletion { sub: GroupPresentation::free(1), generator_map: vec![0] };
        let chi = Character::from_signs(&[-1, -1]).unwrap();
        assert_eq!(classify_coordinate(&chi, &f2, &del, false).unwrap().label, CoordinateLabel::NonCoordinate);
        let triv = Character::trivial(2);
        assert_eq!(classify_coordinate(&triv, &f2, &del, false).unwrap().label, CoordinateLabel::NonCoordinate);
    }
}

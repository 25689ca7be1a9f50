//! Fundamental groups of complements of real line arrangements via wiring diagrams.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;
use crate::word::Word;

/// The line `a x + b y + c = 0` of the affine chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealLine {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl RealLine {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Arrangement("line with a = b = 0".into()));
        }
        Ok(RealLine { a, b, c })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        RealLine::new(q(a), q(b), q(c))
    }

    /// Affine trace of the projective line `a x + b y + c z = 0` in the chart
    /// whose line at infinity is `x + 3y + 7z = 0`.
    pub fn from_projective(a: i64, b: i64, c: i64) -> Result<Self> {
        RealLine::from_ints(7 * a - c, 7 * b - 3 * c, c)
    }

    fn proportional(&self, o: &RealLine) -> bool {
        let cross = |p: &BigRational, q1: &BigRational, r: &BigRational, s: &BigRational| p * s - q1 * r;
        cross(&self.a, &self.b, &o.a, &o.b).is_zero()
            && cross(&self.a, &self.c, &o.a, &o.c).is_zero()
            && cross(&self.b, &self.c, &o.b, &o.c).is_zero()
    }

    fn parallel(&self, o: &RealLine) -> bool {
        (&self.a * &o.b - &self.b * &o.a).is_zero()
    }
}

/// One crossing point: the lines through it and its abscissa after the shear.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub x: String,
    pub lines: Vec<usize>,
    /// Positions occupied by these lines just before the crossing.
    pub positions: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDiagram {
    pub line_count: usize,
    pub shear: u64,
    /// Line index at each position (bottom to top) left of all crossings.
    pub initial_order: Vec<usize>,
    pub events: Vec<CrossingEvent>,
    pub parallel_pairs: usize,
}

/// Slope and intercept of every line after the shear `x ↦ x + λ y`, if none is vertical.
fn sheared(lines: &[RealLine], lambda: i64) -> Option<Vec<(BigRational, BigRational)>> {
    let l = q(lambda);
    lines
        .iter()
        .map(|ln| {
            let by = &ln.b - &ln.a * &l;
            if by.is_zero() {
                None
            } else {
                Some((-&ln.a / &by, -&ln.c / &by))
            }
        })
        .collect()
}

type Points = BTreeMap<(BigRational, BigRational), Vec<usize>>;

fn crossings(fns: &[(BigRational, BigRational)]) -> Points {
    let mut pts: Points = BTreeMap::new();
    for i in 0..fns.len() {
        for j in i + 1..fns.len() {
            let (mi, ki) = &fns[i];
            let (mj, kj) = &fns[j];
            if mi == mj {
                continue;
            }
            let x = (kj - ki) / (mi - mj);
            let y = mi * &x + ki;
            let e = pts.entry((x, y)).or_default();
            for v in [i, j] {
                if !e.contains(&v) {
                    e.push(v);
                }
            }
        }
    }
    pts
}

pub fn wiring_diagram(lines: &[RealLine]) -> Result<WiringDiagram> {
    wiring_diagram_from(lines, 0)
}

/// As [`wiring_diagram`], trying shears `λ ≥ min_shear` only.
pub fn wiring_diagram_from(lines: &[RealLine], min_shear: u64) -> Result<WiringDiagram> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].proportional(&lines[j]) {
                return Err(Error::DuplicateLine(j + 1));
            }
        }
    }
    let parallel_pairs = (0..lines.len())
        .flat_map(|i| (i + 1..lines.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| lines[i].parallel(&lines[j]))
        .count();
    for lambda in min_shear..min_shear + 10_000 {
        let Some(fns) = sheared(lines, lambda as i64) else { continue };
        let pts = crossings(&fns);
        let mut xs: Vec<&BigRational> = pts.keys().map(|(x, _)| x).collect();
        xs.dedup();
        if xs.len() != pts.len() {
            continue;
        }
        return Ok(build(&fns, pts, lambda, parallel_pairs));
    }
    Err(Error::Arrangement("no admissible shear found".into()))
}

fn build(fns: &[(BigRational, BigRational)], pts: Points, shear: u64, parallel_pairs: usize) -> WiringDiagram {
    let r = fns.len();
    let x0 = pts.keys().next().map(|(x, _)| x - q(1)).unwrap_or_else(|| q(0));
    let mut order: Vec<usize> = (0..r).collect();
    // parallel lines never cross; compare by height at x0
    order.sort_by(|&i, &j| {
        let yi = &fns[i].0 * &x0 + &fns[i].1;
        let yj = &fns[j].0 * &x0 + &fns[j].1;
        yi.cmp(&yj)
    });
    let initial_order = order.clone();
    let mut events = Vec::new();
    for ((x, _), mut ls) in pts {
        let mut pos: Vec<usize> = ls.iter().map(|l| order.iter().position(|o| o == l).unwrap()).collect();
        pos.sort_unstable();
        let (p, qq) = (pos[0], *pos.last().unwrap());
        debug_assert_eq!(qq - p + 1, ls.len(), "crossing strands are adjacent");
        ls.sort_by_key(|l| order.iter().position(|o| o == l).unwrap());
        order[p..=qq].reverse();
        events.push(CrossingEvent { x: x.to_string(), lines: ls, positions: (p, qq) });
    }
    WiringDiagram { line_count: r, shear, initial_order, events, parallel_pairs }
}

/// Presentation with one meridian per line (in input order). Each crossing of `k`
/// strands contributes `[W_p⋯W_q, W_j]` for its strands, then the strands are
/// moved through the half twist. In projective mode the meridian product in
/// initial position order is added and every degree label is 1.
pub fn arrangement_presentation(w: &WiringDiagram, projective: bool) -> GroupPresentation {
    let r = w.line_count;
    let mut words: Vec<Word> = w.initial_order.iter().map(|&l| Word::generator(l)).collect();
    let mut relators = Vec::new();
    for ev in &w.events {
        let (p, qq) = ev.positions;
        let prod = Word::product(&words[p..=qq]);
        for j in p..=qq {
            relators.push(Word::commutator(&prod, &words[j]));
        }
        // half twist as a product of adjacent transpositions
        for top in (p + 1..=qq).rev() {
            for k in p..top {
                let a = words[k].clone();
                let b = words[k + 1].clone();
                words[k] = a.mul(&b).mul(&a.inverse());
                words[k + 1] = a;
            }
        }
    }
    let names = (1..=r).map(|i| format!("x{i}")).collect();
    let degrees = if projective {
        let gens: Vec<Word> = w.initial_order.iter().map(|&l| Word::generator(l)).collect();
        relators.push(Word::product(&gens));
        Some(vec![1; r])
    } else {
        None
    };
    GroupPresentation::new(names, relators, degrees).expect("relators use one generator per line")
}

/// Parses a line file: `a b c` per row (integers or fractions `p/q`), `#` comments.
pub fn parse_line_file(text: &str) -> Result<Vec<RealLine>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut vals = Vec::new();
        let mut col = 1;
        for tok in content.split_whitespace() {
            col = raw.find(tok).map(|c| c + 1).unwrap_or(col);
            let v = parse_rational(tok).ok_or_else(|| Error::parse(li + 1, col, format!("not a rational number: {tok}")))?;
            vals.push(v);
        }
        if vals.len() != 3 {
            return Err(Error::parse(li + 1, 1, format!("expected 3 coefficients, found {}", vals.len())));
        }
        let c = vals.pop().unwrap();
        let b = vals.pop().unwrap();
        let a = vals.pop().unwrap();
        out.push(RealLine::new(a, b, c).map_err(|e| Error::parse(li + 1, 1, e.to_string()))?);
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn render_line_file(lines: &[RealLine]) -> String {
    lines.iter().map(|l| format!("{} {} {}\n", l.a, l.b, l.c)).collect()
}

/// Bundled line files: the braid-arrangement realization and its three extensions,
/// and the Ceva realization used for the Fermat family.
pub mod fixtures {
    pub const C6: &str = include_str!("../fixtures/c6.lines");
    pub const C7: &str = include_str!("../fixtures/c7.lines");
    pub const C8: &str = include_str!("../fixtures/c8.lines");
    pub const C9: &str = include_str!("../fixtures/c9.lines");
    pub const CEVA: &str = include_str!("../fixtures/ceva.lines");
}

/// Presentation of the projective complement of a bundled or user line file.
pub fn projective_group_from_text(text: &str) -> Result<GroupPresentation> {
    let lines = parse_line_file(text)?;
    let w = wiring_diagram(&lines)?;
    if w.parallel_pairs > 0 {
        return Err(Error::Arrangement(
            "parallel lines meet on the line at infinity; choose a chart where it is generic".into(),
        ));
    }
    Ok(arrangement_presentation(&w, true))
}

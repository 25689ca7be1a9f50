//! Words in a free group on indexed generators.
//!
//! A [`Word`] is stored as a run-length list of `(generator, exponent)`
//! letters. Every constructor returns the freely reduced form: exponents are
//! nonzero and adjacent letters never share a generator.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(g: usize) -> Self {
        Word { letters: vec![(g, 1)] }
    }

    pub fn power_of(g: usize, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word { letters: vec![(g, e)] }
        }
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            push_letter(&mut out, g, e);
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of unit letters, i.e. the sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &(g, e) in &other.letters {
            push_letter(&mut out, g, e);
        }
        Word { letters: out }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self * x * self^-1`
    pub fn conjugate(&self, x: &Word) -> Word {
        self.mul(x).mul(&self.inverse())
    }

    /// `[a, b] = a b a^-1 b^-1`
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut out = Vec::new();
        for w in words {
            for &(g, e) in &w.letters {
                push_letter(&mut out, g, e);
            }
        }
        Word { letters: out }
    }

    /// Exponent sum of every generator, indexed by generator.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for &(g, e) in &self.letters {
            sums[g] += e;
        }
        sums
    }

    /// Number of unit occurrences of `g` (counting both signs).
    pub fn occurrences(&self, g: usize) -> u64 {
        self.letters
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, e)| e.unsigned_abs())
            .sum()
    }

    /// Replaces every generator by a word. `images[g]` is the image of `g`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &(g, e) in &self.letters {
            let img = if e > 0 { images[g].clone() } else { images[g].inverse() };
            for _ in 0..e.unsigned_abs() {
                for &(h, f) in &img.letters {
                    push_letter(&mut out, h, f);
                }
            }
        }
        Word { letters: out }
    }

    /// Renames generators through `map`; the map must be total on the letters used.
    pub fn relabel(&self, map: &[usize]) -> Word {
        Word::from_letters(self.letters.iter().map(|&(g, e)| (map[g], e)))
    }

    /// Cyclically reduced conjugate (cancels matching first/last letters).
    pub fn cyclic_reduce(&self) -> Word {
        let mut letters = self.letters.clone();
        loop {
            if letters.len() < 2 {
                break;
            }
            let (g0, e0) = letters[0];
            let (g1, e1) = *letters.last().unwrap();
            if g0 != g1 {
                break;
            }
            letters.pop();
            let e = e0 + e1;
            if e == 0 {
                letters.remove(0);
            } else {
                letters[0] = (g0, e);
                if letters.len() == 1 {
                    break;
                }
            }
        }
        Word { letters }
    }

    /// Iterates the word as a sequence of unit letters `(g, ±1)`.
    pub fn unit_letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.letters
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    /// Renders using the given generator names, e.g. `a^2*b^-1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                let name = names.get(g).cloned().unwrap_or_else(|| format!("g{g}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn push_letter(out: &mut Vec<(usize, i64)>, g: usize, e: i64) {
    if e == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == g {
            last.1 += e;
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((g, e));
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_generator().unwrap_or(0)).map(|g| format!("g{g}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// Free reduction; constructors already reduce, so this re-normalizes the letters.
pub fn free_reduce(w: &Word) -> Word {
    Word::from_letters(w.letters().iter().copied())
}

/// Order of a cyclic free factor: `None` is infinite cyclic.
pub type FactorOrder = Option<u64>;

/// Normal form in the free product `Z_{m_1} * ... * Z_{m_s} * F_k`.
///
/// Each exponent is reduced into `1..m` for finite factors; the output is
/// empty iff the element is trivial.
pub fn normal_form_free_product_cyclic(w: &Word, orders: &[FactorOrder]) -> Word {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for &(g, e) in w.letters() {
        let m = orders.get(g).copied().flatten();
        let mut g_e = e;
        if let Some(last) = out.last() {
            if last.0 == g {
                g_e += last.1;
                out.pop();
            }
        }
        let reduced = match m {
            Some(m) => g_e.rem_euclid(m as i64),
            None => g_e,
        };
        if reduced != 0 {
            out.push((g, reduced));
        }
        // popping may expose a new adjacency only when the letter vanished
        while out.len() >= 2 && out[out.len() - 1].0 == out[out.len() - 2].0 {
            let (h, b) = out.pop().unwrap();
            let a = out.pop().unwrap().1;
            let mm = orders.get(h).copied().flatten();
            let s = match mm {
                Some(m) => (a + b).rem_euclid(m as i64),
                None => a + b,
            };
            if s != 0 {
                out.push((h, s));
            }
        }
    }
    Word { letters: out }
}

impl FromIterator<(usize, i64)> for Word {
    fn from_iter<T: IntoIterator<Item = (usize, i64)>>(iter: T) -> Self {
        Word::from_letters(iter)
    }
}

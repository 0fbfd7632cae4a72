//! Weyl group action on the Picard lattice: reduction to the fundamental
//! chamber, exceptional classes and their enumeration.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::DivisorClass;

/// An elementary reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `s_i`, exchanging `E_i` and `E_{i+1}` (1-based, `1 <= i < n`).
    Swap(usize),
    /// `s_0`, the reflection in `L - E_1 - E_2 - E_3`.
    Cremona,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Swap(i) => write!(f, "s{i}"),
            Generator::Cremona => write!(f, "s0"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let idx = s
            .strip_prefix('s')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::parse("generator", s, "expected s0, s1, s2, ..."))?;
        Ok(if idx == 0 {
            Generator::Cremona
        } else {
            Generator::Swap(idx)
        })
    }
}

/// Applies one reflection.
pub fn apply_generator(f: &DivisorClass, g: Generator) -> Result<DivisorClass> {
    let mut out = f.clone();
    apply_in_place(&mut out, g)?;
    Ok(out)
}

fn apply_in_place(f: &mut DivisorClass, g: Generator) -> Result<()> {
    let n = f.n();
    match g {
        Generator::Swap(i) => {
            if i == 0 || i >= n {
                return Err(Error::GeneratorOutOfRange {
                    generator: g.to_string(),
                    n,
                });
            }
            f.m.swap(i - 1, i);
        }
        Generator::Cremona => {
            if n < 3 {
                return Err(Error::GeneratorOutOfRange {
                    generator: g.to_string(),
                    n,
                });
            }
            let k = f.t - f.m[0] - f.m[1] - f.m[2];
            f.t += k;
            for x in &mut f.m[..3] {
                *x += k;
            }
        }
    }
    Ok(())
}

/// A product of elementary reflections, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WeylWord(pub Vec<Generator>);

impl WeylWord {
    pub fn identity() -> Self {
        WeylWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn extend(&mut self, other: &WeylWord) {
        self.0.extend_from_slice(&other.0);
    }

    /// Every generator is an involution, so the inverse is the reversal.
    pub fn inverse(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }

    pub fn cremona_count(&self) -> usize {
        self.0.iter().filter(|g| **g == Generator::Cremona).count()
    }

    pub fn apply(&self, f: &DivisorClass) -> Result<DivisorClass> {
        apply_word(self, f, false)
    }
}

/// Applies `w` (or its inverse) to `f`.
pub fn apply_word(w: &WeylWord, f: &DivisorClass, inverse: bool) -> Result<DivisorClass> {
    let mut out = f.clone();
    if inverse {
        for &g in w.0.iter().rev() {
            apply_in_place(&mut out, g)?;
        }
    } else {
        for &g in &w.0 {
            apply_in_place(&mut out, g)?;
        }
    }
    Ok(out)
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for WeylWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(WeylWord)
    }
}

impl Serialize for WeylWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sorts multiplicities into descending order with a stable bubble sort,
/// appending each adjacent transposition to `word`.
pub fn sort_descending(f: &mut DivisorClass, word: &mut WeylWord) {
    let n = f.n();
    for pass in 0..n {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1 + pass) {
            if f.m[j] < f.m[j + 1] {
                f.m.swap(j, j + 1);
                word.push(Generator::Swap(j + 1));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// How reduction terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionStatus {
    /// Sorted with `t >= m_1 + m_2 + m_3`.
    InChamber,
    /// `reduced · L < 0`.
    NegL,
    /// `reduced · (L - E_1) < 0`.
    NegLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedForm {
    /// `word` applied to the input (padded to at least 3 points).
    pub reduced: DivisorClass,
    pub word: WeylWord,
    pub status: ReductionStatus,
}

impl ReducedForm {
    pub fn in_chamber(&self) -> bool {
        self.status == ReductionStatus::InChamber
    }
}

/// Repeatedly sorts and applies `s_0` while `(L - E_1 - E_2 - E_3) · F < 0`.
///
/// Classes with fewer than three points are padded with zeros first; the
/// reduced class and word refer to the padded lattice.
pub fn reduce(f: &DivisorClass) -> ReducedForm {
    let mut cur = if f.n() < 3 { f.pad_to(3) } else { f.clone() };
    let mut word = WeylWord::identity();
    loop {
        sort_descending(&mut cur, &mut word);
        if cur.t < 0 {
            return ReducedForm {
                reduced: cur,
                word,
                status: ReductionStatus::NegL,
            };
        }
        if cur.t - cur.m[0] - cur.m[1] - cur.m[2] >= 0 {
            let status = if cur.t < cur.m[0] {
                ReductionStatus::NegLine
            } else {
                ReductionStatus::InChamber
            };
            return ReducedForm {
                reduced: cur,
                word,
                status,
            };
        }
        apply_in_place(&mut cur, Generator::Cremona).expect("n >= 3");
        word.push(Generator::Cremona);
    }
}

/// True iff `E² = -1`, `K·E = -1` and `E` reduces to a single `E_i`.
pub fn is_exceptional(e: &DivisorClass) -> bool {
    if e.self_intersection() != -1 || e.canonical_degree() != -1 {
        return false;
    }
    let r = reduce(e).reduced;
    r.t == 0 && r.m.iter().filter(|&&x| x == -1).count() == 1 && r.m.iter().all(|&x| x == 0 || x == -1)
}

/// If `c` is in the orbit of `L`, the word `w` with `wL = c`.
pub fn orbit_of_line(c: &DivisorClass) -> Option<WeylWord> {
    let r = reduce(c);
    let is_line = r.reduced.t == 1 && r.reduced.m.iter().all(|&x| x == 0);
    is_line.then(|| r.word.inverse())
}

/// All exceptional classes `tL - Σ m_i E_i` with `1 <= t <= max_degree`, in
/// canonical form (sorted, trailing zeros stripped), ordered by degree.
///
/// Breadth-first search from `L - E_1 - E_2`: a degree-raising Cremona
/// reflection centred at three of the points (two of them possibly new)
/// followed by sorting reaches every class from one of lower degree.
pub fn enumerate_exceptional(max_degree: i64) -> Vec<DivisorClass> {
    let mut seen: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
    if max_degree < 1 {
        return Vec::new();
    }
    let start = (1, vec![1, 1]);
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (t, m) in &frontier {
            let mut ext = m.clone();
            ext.extend([0, 0, 0]);
            let n = ext.len();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let c = t - ext[i] - ext[j] - ext[k];
                        if c <= 0 || t + c > max_degree {
                            continue;
                        }
                        let mut nm = ext.clone();
                        nm[i] += c;
                        nm[j] += c;
                        nm[k] += c;
                        nm.sort_unstable_by(|a, b| b.cmp(a));
                        while nm.last() == Some(&0) {
                            nm.pop();
                        }
                        let key = (t + c, nm);
                        if seen.insert(key.clone()) {
                            next.push(key);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().map(|(t, m)| DivisorClass::new(t, m)).collect()
}

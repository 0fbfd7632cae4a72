//! Expected graded Betti numbers of fat point ideals and assembly of the
//! minimal free resolution `0 -> M_1 -> M_0 -> I(Z) -> 0`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{binom2, DivisorClass, FatPointScheme};
use crate::linsys::{alpha, decompose, expected_h0, expected_h1, Component};
use crate::splitting::{
    cokernel_bound_is_sharp, compute_splitting, forced_splitting, SplitOptions, SplittingType,
};
use crate::weyl::reduce;

/// Memoizes splitting types during one computation.
pub struct SplittingCache {
    opts: SplitOptions,
    known: HashMap<DivisorClass, SplittingType>,
    computed: usize,
}

impl SplittingCache {
    pub fn new(opts: SplitOptions) -> Self {
        SplittingCache {
            opts,
            known: HashMap::new(),
            computed: 0,
        }
    }

    /// Number of splitting types that came from random points rather than
    /// the closed form.
    pub fn computed(&self) -> usize {
        self.computed
    }

    pub fn get(&mut self, e: &DivisorClass) -> Result<SplittingType> {
        let key = e.trimmed();
        if let Some(s) = self.known.get(&key) {
            return Ok(*s);
        }
        let s = match forced_splitting(&key)? {
            Some(s) => s,
            None => {
                self.computed += 1;
                compute_splitting(&key, &self.opts)?.splitting()
            }
        };
        self.known.insert(key, s);
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flag {
    /// Follows from the closed-form equality cases.
    Exact,
    /// Relies on the conjectured equality in the cokernel bound.
    ConjecturalExact,
    Interval,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(i64),
    Interval { lo: i64, hi: i64 },
    Unknown,
}

impl Value {
    pub fn exact(&self) -> Option<i64> {
        match self {
            Value::Exact(v) => Some(*v),
            _ => None,
        }
    }

    fn shift(&self, by: i64) -> Value {
        match *self {
            Value::Exact(v) => Value::Exact(v + by),
            Value::Interval { lo, hi } => Value::Interval { lo: lo + by, hi: hi + by },
            Value::Unknown => Value::Unknown,
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Exact(v) => write!(f, "{v}"),
            Value::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
            Value::Unknown => write!(f, "?"),
        }
    }
}

/// Contribution `Σ_j [C(k_j - a_j, 2) + C(k_j - b_j, 2)]` of clipped
/// components, and whether any term depends on the conjectured equality.
fn clipped_terms(
    n: usize,
    comps: &[Component],
    cache: &mut SplittingCache,
) -> Result<(i64, DivisorClass, bool)> {
    let mut total = 0;
    let mut m_part = DivisorClass::zero(n);
    let mut conjectural = false;
    for c in comps {
        let d = c.class.t;
        let k = c.coefficient.min(d);
        m_part = &m_part + &(k * &c.class);
        if d <= 0 {
            continue;
        }
        let s = cache.get(&c.class)?;
        total += s.cokernel_bound(k);
        if k > s.a + 2 && !cokernel_bound_is_sharp(&c.class, s) {
            conjectural = true;
        }
    }
    Ok((total, m_part, conjectural))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiValue {
    pub value: i64,
    pub conjectural: bool,
}

fn e_h(z: &FatPointScheme, t: i64) -> i64 {
    if t < 0 {
        0
    } else {
        expected_h0(&z.class_of(t))
    }
}

/// Expected number of minimal generators in degree `i >= α + 2`.
pub fn expected_betti(z: &FatPointScheme, i: i64, cache: &mut SplittingCache) -> Result<BettiValue> {
    let a = alpha(z);
    if i < a + 2 {
        return Err(Error::InvalidInput(format!(
            "degree {i} is below alpha + 2 = {}",
            a + 2
        )));
    }
    let f = z.class_of(i - 2);
    let dec = decompose(&f).ok_or_else(|| Error::NotEffective(f.to_string()))?;
    let (terms, m_part, conjectural) = clipped_terms(f.n(), &dec.components, cache)?;
    let two_l = 2 * &DivisorClass::line(f.n());
    let base = &(&two_l + &dec.h) + &m_part;
    Ok(BettiValue {
        value: e_h(z, i) - expected_h0(&base) + terms,
        conjectural,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundComponent {
    pub class: DivisorClass,
    pub d: i64,
    pub c: i64,
    pub c1: i64,
    pub c2: i64,
    pub splitting: SplittingType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiBoundData {
    pub t: i64,
    pub components: Vec<BoundComponent>,
}

impl BettiBoundData {
    /// `Σ d_j(c'_j - c''_j) - Σ C(c'_j - c''_j, 2) + Σ [C(c_j - c'_j - a_j, 2) + C(c_j - c'_j - b_j, 2)]`.
    pub fn bound(&self) -> i64 {
        self.components
            .iter()
            .map(|x| {
                let drop = x.c1 - x.c2;
                x.d * drop - binom2(drop) + x.splitting.cokernel_bound(x.c - x.c1)
            })
            .sum()
    }
}

/// Fixed-part exponents at degrees `t - 1`, `t`, `t + 1`.
pub fn bettibound_data(z: &FatPointScheme, t: i64, cache: &mut SplittingCache) -> Result<BettiBoundData> {
    let a = alpha(z);
    if t <= a {
        return Err(Error::InvalidInput(format!("degree {t} must exceed alpha = {a}")));
    }
    let parts: Vec<Vec<Component>> = (t - 1..=t + 1)
        .map(|s| decompose(&z.class_of(s)).map(|d| d.components).unwrap_or_default())
        .collect();
    let mut classes: Vec<DivisorClass> = Vec::new();
    for p in &parts {
        for c in p {
            if !classes.contains(&c.class) {
                classes.push(c.class.clone());
            }
        }
    }
    let coef = |p: &[Component], cl: &DivisorClass| {
        p.iter().find(|c| &c.class == cl).map_or(0, |c| c.coefficient)
    };
    let mut components = Vec::new();
    for cl in classes {
        components.push(BoundComponent {
            d: cl.t,
            c: coef(&parts[0], &cl),
            c1: coef(&parts[1], &cl),
            c2: coef(&parts[2], &cl),
            splitting: cache.get(&cl)?,
            class: cl,
        });
    }
    Ok(BettiBoundData { t, components })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaPlusOnePath {
    /// A single curve in degree α, so `μ` is injective.
    SingleCurve,
    /// `l + q = 0` at the recorded point, so `μ` is injective.
    Injective { point: usize },
    /// `F_{α-1} = H + N` with `h^1(H) = 0`.
    Decomposition { h: DivisorClass, components: Vec<Component> },
    /// Bounds on the cokernel from `l, q^*, l^*`.
    Bounds,
    /// `h^1(F_α) > 0`, so no bounds apply.
    NoBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaPlusOne {
    pub value: Value,
    pub flag: Flag,
    pub path: AlphaPlusOnePath,
}

/// Largest subset size tried when searching for `F_{α-1} = H + N`.
const MAX_CANDIDATES: usize = 16;

fn subsets_by_size(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=n).flat_map(move |k| Combinations::new(n, k))
}

struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Exceptional classes meeting `f` negatively that reduction exposes, with
/// coefficient `-f·C`.
fn negative_candidates(f: &DivisorClass) -> Vec<Component> {
    let red = reduce(f);
    let r = &red.reduced;
    let n = r.n();
    let mut local = Vec::new();
    for i in 0..n {
        if r.m[i] < 0 {
            local.push(DivisorClass::exceptional(i + 1, n));
        }
    }
    let mut line = DivisorClass::line(n);
    line.m[0] = 1;
    line.m[1] = 1;
    if r.dot(&line) < 0 {
        local.push(line);
    }
    local
        .into_iter()
        .map(|c| {
            let coefficient = -r.dot(&c);
            let mut class = red.word.inverse().apply(&c).expect("word fits");
            if class.n() > f.n() && class.m[f.n()..].iter().all(|&x| x == 0) {
                class.m.truncate(f.n());
            }
            Component { class, coefficient }
        })
        .filter(|c| c.coefficient > 0 && c.class.n() == f.n())
        .collect()
}

/// Number of minimal generators in degree `α + 1`.
pub fn betti_alpha_plus_one(z: &FatPointScheme, cache: &mut SplittingCache) -> Result<AlphaPlusOne> {
    let a = alpha(z);
    let h_a = e_h(z, a);
    let h_next = e_h(z, a + 1);
    let exact = |v: i64, path| AlphaPlusOne {
        value: Value::Exact(v),
        flag: Flag::Exact,
        path,
    };
    if h_a == 1 {
        return Ok(exact(h_next - 3, AlphaPlusOnePath::SingleCurve));
    }

    let f = z.class_of(a);
    let n = f.n();
    let line = DivisorClass::line(n);
    for i in 0..n {
        if z.mults()[i] == 0 {
            continue;
        }
        let e_i = DivisorClass::exceptional(i + 1, n);
        let l = expected_h0(&(&f - &(&line - &e_i)));
        let q = expected_h0(&(&f - &e_i));
        let v = h_next - 3 * h_a;
        if l + q == 0 && v >= 0 {
            return Ok(exact(v, AlphaPlusOnePath::Injective { point: i + 1 }));
        }
    }

    let prev = z.class_of(a - 1);
    let cands = negative_candidates(&prev);
    if cands.len() <= MAX_CANDIDATES {
        for subset in subsets_by_size(cands.len()) {
            let chosen: Vec<&Component> = subset.iter().map(|&k| &cands[k]).collect();
            let orthogonal = chosen
                .iter()
                .enumerate()
                .all(|(x, c)| chosen[x + 1..].iter().all(|d| c.class.dot(&d.class) == 0));
            if !orthogonal {
                continue;
            }
            let mut h = prev.clone();
            for c in &chosen {
                h = &h - &(c.coefficient * &c.class);
            }
            if h.t < 0 || chosen.iter().any(|c| h.dot(&c.class) != 0) {
                continue;
            }
            if expected_h1(&h).ok() != Some(0) {
                continue;
            }
            let comps: Vec<Component> = chosen.into_iter().cloned().collect();
            let (terms, m_part, conjectural) = clipped_terms(n, &comps, cache)?;
            let base = &(&(2 * &line) + &h) + &m_part;
            let value = terms + h_next - expected_h0(&base);
            return Ok(AlphaPlusOne {
                value: Value::Exact(value),
                flag: if conjectural { Flag::ConjecturalExact } else { Flag::Exact },
                path: AlphaPlusOnePath::Decomposition { h, components: comps },
            });
        }
    }

    // bounds from the point of largest multiplicity
    if expected_h1(&f)? > 0 {
        return Ok(AlphaPlusOne {
            value: Value::Unknown,
            flag: Flag::Unknown,
            path: AlphaPlusOnePath::NoBounds,
        });
    }
    let top = (0..n).max_by_key(|&i| (z.mults()[i], std::cmp::Reverse(i))).unwrap();
    let e1 = DivisorClass::exceptional(top + 1, n);
    let minus_line = &f - &(&line - &e1);
    let minus_point = &f - &e1;
    let l = expected_h0(&minus_line);
    let l_star = expected_h1(&minus_line)?;
    let q_star = expected_h1(&minus_point)?;
    let lo = (a + 2 - 2 * h_a + l).max(0);
    let hi = q_star + l_star;
    Ok(AlphaPlusOne {
        value: if lo == hi { Value::Exact(lo) } else { Value::Interval { lo, hi } },
        flag: if lo == hi { Flag::Exact } else { Flag::Interval },
        path: AlphaPlusOnePath::Bounds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionRow {
    pub degree: i64,
    pub hilbert: i64,
    pub g: Value,
    pub s: Value,
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionTable {
    pub alpha: i64,
    /// First degree from which every `g_i` vanishes.
    pub generators_end: i64,
    pub alpha_plus_one: AlphaPlusOne,
    pub rows: Vec<ResolutionRow>,
    /// Some splitting type was computed from random points.
    pub provisional: bool,
}

impl ResolutionTable {
    pub fn row(&self, degree: i64) -> Option<&ResolutionRow> {
        self.rows.iter().find(|r| r.degree == degree)
    }

    pub fn g(&self, degree: i64) -> Value {
        self.row(degree).map_or(Value::Exact(0), |r| r.g)
    }

    pub fn s(&self, degree: i64) -> Value {
        self.row(degree).map_or(Value::Exact(0), |r| r.s)
    }

    /// Nonzero exact generator degrees.
    pub fn g_map(&self) -> BTreeMap<i64, Value> {
        self.rows
            .iter()
            .filter(|r| r.g != Value::Exact(0))
            .map(|r| (r.degree, r.g))
            .collect()
    }

    pub fn s_map(&self) -> BTreeMap<i64, Value> {
        self.rows
            .iter()
            .filter(|r| r.s != Value::Exact(0))
            .map(|r| (r.degree, r.s))
            .collect()
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.g.exact().is_some() && r.s.exact().is_some())
    }

    /// `Σ_i (g_i - s_i) C(t - i + 2, 2)` when every entry is exact.
    pub fn hilbert_from_betti(&self, t: i64) -> Option<i64> {
        let mut total = 0;
        for r in &self.rows {
            let (g, s) = (r.g.exact()?, r.s.exact()?);
            if r.degree <= t {
                let k = t - r.degree + 2;
                total += (g - s) * k * (k - 1) / 2;
            }
        }
        Some(total)
    }
}

fn delta3(z: &FatPointScheme, i: i64) -> i64 {
    e_h(z, i) - 3 * e_h(z, i - 1) + 3 * e_h(z, i - 2) - e_h(z, i - 3)
}

/// Builds the expected resolution table from `α` through `max(i_max, the
/// last degree with a possibly nonzero entry)`.
pub fn assemble_resolution(z: &FatPointScheme, i_max: i64, opts: &SplitOptions) -> Result<ResolutionTable> {
    let mut cache = SplittingCache::new(*opts);
    let a = alpha(z);
    // g_i = 0 for i >= t + 2 once h^1(F_t) = 0
    let mut t0 = (a - 1).max(0);
    while expected_h1(&z.class_of(t0))? > 0 {
        t0 += 1;
    }
    let generators_end = (t0 + 2).max(a + 1);
    let last = i_max.max(generators_end + 1);

    let apo = betti_alpha_plus_one(z, &mut cache)?;
    let mut rows = Vec::new();
    for i in a..=last {
        let (g, flag) = if i == a {
            (Value::Exact(e_h(z, a)), Flag::Exact)
        } else if i == a + 1 {
            (apo.value, apo.flag)
        } else if i >= generators_end {
            (Value::Exact(0), Flag::Exact)
        } else {
            let b = expected_betti(z, i, &mut cache)?;
            let flag = if b.conjectural { Flag::ConjecturalExact } else { Flag::Exact };
            (Value::Exact(b.value), flag)
        };
        let s = g.shift(-delta3(z, i));
        rows.push(ResolutionRow {
            degree: i,
            hilbert: e_h(z, i),
            g,
            s,
            flag,
        });
    }
    Ok(ResolutionTable {
        alpha: a,
        generators_end,
        alpha_plus_one: apo,
        rows,
        provisional: cache.computed() > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> FatPointScheme {
        s.parse().unwrap()
    }

    fn cache() -> SplittingCache {
        SplittingCache::new(SplitOptions::default())
    }

    const Z124: &str = "50,50,38,38,26,26,22,18,14,14";
    const Z128: &str = "48,33,33,33,32,32,32,24,16";

    fn exact_map(m: BTreeMap<i64, Value>) -> Vec<(i64, i64)> {
        m.into_iter().map(|(k, v)| (k, v.exact().unwrap())).collect()
    }

    #[test]
    fn generators_above_alpha_plus_one() {
        let mut c = cache();
        assert_eq!(expected_betti(&z(Z124), 104, &mut c).unwrap().value, 2);
        assert_eq!(expected_betti(&z(Z124), 105, &mut c).unwrap().value, 0);
        assert_eq!(expected_betti(&z(Z128), 100, &mut c).unwrap().value, 0);
        assert!(expected_betti(&z(Z124), 103, &mut c).is_err());
    }

    #[test]
    fn bound_data() {
        let mut c = cache();
        let data = bettibound_data(&z(Z124), 103, &mut c).unwrap();
        let mut cs: Vec<(i64, i64, i64, i64)> = data.components.iter().map(|x| (x.d, x.c, x.c1, x.c2)).collect();
        cs.sort();
        assert_eq!(cs, vec![(8, 2, 0, 0), (8, 6, 0, 0)]);
        assert_eq!(data.bound(), 2);
        assert_eq!(bettibound_data(&z(Z124), 105, &mut c).unwrap().bound(), 0);
        assert!(bettibound_data(&z(Z124), 102, &mut c).is_err());
    }

    #[test]
    fn alpha_plus_one_paths() {
        let mut c = cache();
        let r = betti_alpha_plus_one(&z(Z124), &mut c).unwrap();
        assert_eq!(r.value, Value::Exact(80));
        assert!(matches!(r.path, AlphaPlusOnePath::Injective { .. }));

        let r = betti_alpha_plus_one(&z(Z128), &mut c).unwrap();
        assert_eq!(r.value, Value::Exact(2));
        match &r.path {
            AlphaPlusOnePath::Decomposition { h, components } => {
                assert_eq!(h.to_string(), "1;0,1,1,1,0,0,0,0,0");
                assert_eq!(components.len(), 1);
                assert_eq!(components[0].class.to_string(), "12;6,4,4,4,4,4,4,3,2");
                assert_eq!(components[0].coefficient, 8);
            }
            other => panic!("unexpected path {other:?}"),
        }

        let r = betti_alpha_plus_one(&z("1"), &mut c).unwrap();
        assert_eq!(r.value, Value::Exact(0));
    }

    #[test]
    fn resolutions() {
        let opts = SplitOptions::default();
        let t = assemble_resolution(&z(Z124), 0, &opts).unwrap();
        assert_eq!(t.alpha, 102);
        assert_eq!(exact_map(t.g_map()), vec![(102, 4), (103, 80), (104, 2)]);
        assert_eq!(exact_map(t.s_map()), vec![(104, 69), (105, 16)]);

        let t = assemble_resolution(&z(Z128), 0, &opts).unwrap();
        assert_eq!(exact_map(t.g_map()), vec![(98, 71), (99, 2)]);
        assert_eq!(exact_map(t.s_map()), vec![(99, 44), (100, 28)]);

        let t = assemble_resolution(&z("1"), 0, &opts).unwrap();
        assert_eq!(exact_map(t.g_map()), vec![(1, 2)]);
        assert_eq!(exact_map(t.s_map()), vec![(2, 1)]);
    }

    #[test]
    fn hilbert_series_is_consistent() {
        let opts = SplitOptions::default();
        for s in [Z124, Z128, "1", "2,2,1", "2,2,2,2,2", "3,2,2,1,1,1"] {
            let zz = z(s);
            let t = assemble_resolution(&zz, 0, &opts).unwrap();
            assert!(t.all_exact(), "{s}");
            for deg in 0..t.rows.last().unwrap().degree + 3 {
                assert_eq!(t.hilbert_from_betti(deg), Some(e_h(&zz, deg)), "{s} at {deg}");
            }
        }
    }

    /// Direct computation over F_p gives g_7 = 2 for this scheme.
    #[test]
    fn interval_fallback_contains_the_true_value() {
        let t = assemble_resolution(&z("3,3,3,2,2"), 0, &SplitOptions::default()).unwrap();
        assert_eq!(t.alpha, 6);
        assert_eq!(t.g(7), Value::Interval { lo: 1, hi: 2 });
        assert_eq!(t.row(7).unwrap().flag, Flag::Interval);
        assert_eq!(t.s(7), Value::Interval { lo: 1, hi: 2 });
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let all: Vec<Vec<usize>> = subsets_by_size(3).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], Vec::<usize>::new());
        assert_eq!(all[1], vec![0]);
        assert_eq!(all[4], vec![0, 1]);
        assert_eq!(all[7], vec![0, 1, 2]);
    }
}

//! Splitting types of exceptional curves: the closed-form interval, an
//! explicit computation over F_p, and the defect-sum predictor.

use std::collections::BTreeMap;

use log::debug;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{form_gcd, min_syzygy_degree, BinaryForm, PrimeField};
use crate::lattice::{binom2, DivisorClass};
use crate::weyl::{is_exceptional, orbit_of_line, sort_descending, Generator, WeylWord};

/// `(a, b)` with `a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SplittingType {
    pub a: i64,
    pub b: i64,
}

impl SplittingType {
    pub fn new(a: i64, b: i64) -> Self {
        assert!(a <= b, "splitting type needs a <= b, got ({a}, {b})");
        SplittingType { a, b }
    }

    pub fn degree(&self) -> i64 {
        self.a + self.b
    }

    /// `(a² - a)/2 + (b² - b)/2`, one summand of the defect sum.
    pub fn defect(&self) -> i64 {
        binom2(self.a) + binom2(self.b)
    }

    /// `(a-1)(a-2)/2 + (b-1)(b-2)/2`.
    pub fn score(&self) -> i64 {
        ((self.a - 1) * (self.a - 2) + (self.b - 1) * (self.b - 2)) / 2
    }

    /// Predicted `dim cok μ` for multiplicity `m`: `C(m-a, 2) + C(m-b, 2)`.
    pub fn cokernel_bound(&self, m: i64) -> i64 {
        binom2(m - self.a) + binom2(m - self.b)
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

fn interval(d: i64, m: i64) -> (i64, i64) {
    (m.min(d - m), (d - m).min(d / 2))
}

/// Candidate splitting types allowed by `min(m, d-m) <= a <= d - m`.
pub fn split_bounds(e: &DivisorClass) -> Result<Vec<SplittingType>> {
    if !is_exceptional(e) {
        return Err(Error::NotExceptional(e.to_string()));
    }
    let d = e.t;
    if d <= 0 {
        return Ok(vec![SplittingType::new(0, 0)]);
    }
    let m = e.max_mult();
    let (lo, hi) = interval(d, m);
    if d <= 2 * m + 1 {
        return Ok(vec![SplittingType::new(lo, d - lo)]);
    }
    Ok((lo..=hi).map(|a| SplittingType::new(a, d - a)).collect())
}

/// The splitting type when the interval has a single member.
pub fn forced_splitting(e: &DivisorClass) -> Result<Option<SplittingType>> {
    let b = split_bounds(e)?;
    Ok((b.len() == 1).then(|| b[0]))
}

/// Whether equality in the cokernel bound is a theorem for this type:
/// `b - a <= 2` or `a = d - m`.
pub fn cokernel_bound_is_sharp(e: &DivisorClass, s: SplittingType) -> bool {
    s.b - s.a <= 2 || s.a == e.t - e.max_mult()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitOptions {
    pub field: PrimeField,
    pub seed: u64,
    pub trials: usize,
    pub retries: usize,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            field: PrimeField::default(),
            seed: crate::DEFAULT_SEED,
            trials: 3,
            retries: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub class: DivisorClass,
    pub a: i64,
    pub b: i64,
    pub d: i64,
    /// Syzygy degree found by each trial.
    pub trial_results: Vec<i64>,
    /// Trials that agree with the returned `a`.
    pub agreeing: usize,
    pub forced: bool,
    pub provisional: bool,
    pub prime: u64,
    pub seed: u64,
}

impl SplitReport {
    pub fn splitting(&self) -> SplittingType {
        SplittingType::new(self.a, self.b)
    }
}

/// Reduces an exceptional class of positive degree until it is a sorted line
/// class `L - E_1 - E_2`, returning the word and the degree before each
/// generator.
fn reduce_to_line(e: &DivisorClass) -> (WeylWord, Vec<i64>) {
    let mut cur = if e.n() < 3 { e.pad_to(3) } else { e.clone() };
    let mut word = WeylWord::identity();
    loop {
        sort_descending(&mut cur, &mut word);
        if cur.t == 1 {
            break;
        }
        assert!(cur.t > 1, "degree-decreasing reduction of an exceptional class passes through degree 1");
        word.push(Generator::Cremona);
        cur = crate::weyl::apply_generator(&cur, Generator::Cremona).expect("n >= 3");
    }
    let mut degrees = Vec::with_capacity(word.len());
    let mut probe = if e.n() < 3 { e.pad_to(3) } else { e.clone() };
    for &g in word.generators() {
        degrees.push(probe.t);
        probe = crate::weyl::apply_generator(&probe, g).expect("word fits");
    }
    (word, degrees)
}

type Point = [u64; 3];

fn inverse3(f: PrimeField, a: &[[u64; 3]; 3]) -> Option<[[u64; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
        f.sub(f.mul(a[r0][c0], a[r1][c1]), f.mul(a[r0][c1], a[r1][c0]))
    };
    let mut adj = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let v = cof(r0, r1, c0, c1);
            adj[i][j] = if (i + j) % 2 == 0 { v } else { f.neg(v) };
        }
    }
    let det = (0..3).fold(0, |acc, k| f.add(acc, f.mul(a[0][k], adj[k][0])));
    if det == 0 {
        return None;
    }
    let inv = f.inv(det);
    for row in &mut adj {
        for x in row.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    Some(adj)
}

fn mat_vec(f: PrimeField, a: &[[u64; 3]; 3], v: &Point) -> Point {
    let mut out = [0u64; 3];
    for i in 0..3 {
        out[i] = (0..3).fold(0, |acc, k| f.add(acc, f.mul(a[i][k], v[k])));
    }
    out
}

/// One run of the parametrization pipeline; `Err` means a degenerate draw.
fn splitting_trial(
    e: &DivisorClass,
    word: &WeylWord,
    degrees: &[i64],
    f: PrimeField,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<usize, String> {
    let n = e.n().max(3);
    let mut pts: Vec<Point> = (0..n)
        .map(|_| [f.random(rng), f.random(rng), f.random(rng)])
        .collect();
    let mut frames: Vec<Option<[[u64; 3]; 3]>> = Vec::with_capacity(word.len());
    for &g in word.generators() {
        match g {
            Generator::Swap(i) => {
                pts.swap(i - 1, i);
                frames.push(None);
            }
            Generator::Cremona => {
                let mut a = [[0u64; 3]; 3];
                for (col, p) in pts[..3].iter().enumerate() {
                    for row in 0..3 {
                        a[row][col] = p[row];
                    }
                }
                let ainv = inverse3(f, &a).ok_or("collinear Cremona centres")?;
                for p in pts[3..].iter_mut() {
                    let q = mat_vec(f, &ainv, p);
                    if q.contains(&0) {
                        return Err("point on a line through two centres".into());
                    }
                    *p = [f.mul(q[1], q[2]), f.mul(q[0], q[2]), f.mul(q[0], q[1])];
                }
                pts[0] = [1, 0, 0];
                pts[1] = [0, 1, 0];
                pts[2] = [0, 0, 1];
                frames.push(Some(a));
            }
        }
    }
    let (p, q) = (pts[0], pts[1]);
    if (0..3).all(|k| f.mul(p[k], q[(k + 1) % 3]) == f.mul(p[(k + 1) % 3], q[k])) {
        return Err("line centres coincide".into());
    }
    let mut phi: [BinaryForm; 3] = std::array::from_fn(|k| BinaryForm::linear(f, pts[0][k], pts[1][k]));
    for (step, frame) in frames.iter().enumerate().rev() {
        let Some(a) = frame else { continue };
        let quad = [phi[1].mul(&phi[2]), phi[0].mul(&phi[2]), phi[0].mul(&phi[1])];
        let mut next: Vec<BinaryForm> = (0..3)
            .map(|row| {
                (0..3).fold(BinaryForm::zero(f, quad[0].degree()), |acc, k| {
                    acc.add(&quad[k].scale(a[row][k])).expect("equal degrees")
                })
            })
            .collect();
        if next.iter().all(|p| p.is_zero()) {
            return Err("parametrization vanished".into());
        }
        let g = form_gcd(&form_gcd(&next[0], &next[1]).map_err(|e| e.to_string())?, &next[2])
            .map_err(|e| e.to_string())?;
        for p in next.iter_mut() {
            *p = p.div_exact(&g).map_err(|e| e.to_string())?;
        }
        let want = degrees[step] as usize;
        if next[0].degree() != want {
            return Err(format!(
                "proper transform has degree {} instead of {want}",
                next[0].degree()
            ));
        }
        phi = [next[0].clone(), next[1].clone(), next[2].clone()];
    }
    if phi[0].degree() as i64 != e.t {
        return Err(format!("final degree {} differs from {}", phi[0].degree(), e.t));
    }
    min_syzygy_degree([&phi[0], &phi[1], &phi[2]]).map_err(|e| e.to_string())
}

/// Splitting type of an exceptional class computed from random points.
///
/// Each trial draws its own point configuration from `(seed, trial,
/// attempt)`; degenerate draws are retried up to `opts.retries` times. The
/// majority syzygy degree wins.
pub fn compute_splitting(e: &DivisorClass, opts: &SplitOptions) -> Result<SplitReport> {
    let bounds = split_bounds(e)?;
    if e.t < 1 {
        return Err(Error::InvalidInput(format!("class {e} has no plane image")));
    }
    let (word, degrees) = reduce_to_line(e);
    let mut results = Vec::with_capacity(opts.trials);
    for trial in 0..opts.trials.max(1) {
        let mut last = String::new();
        let mut found = None;
        for attempt in 0..opts.retries.max(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(((trial as u64) << 32) | attempt as u64);
            match splitting_trial(e, &word, &degrees, opts.field, &mut rng) {
                Ok(a) if bounds.iter().any(|s| s.a == a as i64) => {
                    found = Some(a as i64);
                    break;
                }
                Ok(a) => last = format!("syzygy degree {a} outside the allowed interval"),
                Err(msg) => last = msg,
            }
            debug!("splitting {e}: trial {trial} attempt {attempt} rejected: {last}");
        }
        match found {
            Some(a) => results.push(a),
            None => {
                return Err(Error::RetriesExhausted {
                    attempts: opts.retries.max(1),
                    last,
                })
            }
        }
    }
    let mut tally: BTreeMap<i64, usize> = BTreeMap::new();
    for &a in &results {
        *tally.entry(a).or_default() += 1;
    }
    let (&a, &agreeing) = tally
        .iter()
        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0)))
        .expect("at least one trial");
    Ok(SplitReport {
        class: e.clone(),
        a,
        b: e.t - a,
        d: e.t,
        trial_results: results,
        agreeing,
        forced: bounds.len() == 1,
        provisional: true,
        prime: opts.field.modulus(),
        seed: opts.seed,
    })
}

/// The forced type when the interval is a single pair, else a computed one.
pub fn splitting_type(e: &DivisorClass, opts: &SplitOptions) -> Result<SplittingType> {
    match forced_splitting(e)? {
        Some(s) => Ok(s),
        None => compute_splitting(e, opts).map(|r| r.splitting()),
    }
}

/// `Σ_i [(a_i² - a_i)/2 + (b_i² - b_i)/2]` over `C_i = w E_i`, `1 <= i <= n`.
pub fn defect_sum(w: &WeylWord, n: usize, opts: &SplitOptions) -> Result<i64> {
    let needs = w
        .generators()
        .iter()
        .map(|g| match g {
            Generator::Swap(i) => i + 1,
            Generator::Cremona => 3,
        })
        .max()
        .unwrap_or(0);
    if needs > n {
        return Err(Error::GeneratorOutOfRange {
            generator: w.to_string(),
            n,
        });
    }
    let c = w.apply(&DivisorClass::line(n))?;
    if c.self_intersection() != 1 {
        return Err(Error::Inconsistent(format!("w L = {c} does not square to 1")));
    }
    let mut total = 0;
    for i in 1..=n {
        let ci = w.apply(&DivisorClass::exceptional(i, n))?;
        if ci.t <= 0 {
            continue;
        }
        total += splitting_type(&ci, opts)?.defect();
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub a: i64,
    pub b: i64,
    pub score: i64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    /// The class in the orbit of `L` the prediction was made for.
    pub class: DivisorClass,
    pub splitting: SplittingType,
    pub forced: bool,
    pub defect: Option<i64>,
    pub candidates: Vec<Candidate>,
    /// `score - defect` for the chosen pair.
    pub slack: Option<i64>,
}

fn companion_in_line_orbit(e: &DivisorClass) -> Option<(DivisorClass, WeylWord)> {
    let ones: Vec<usize> = (0..e.n()).filter(|&i| e.m[i] == 1).collect();
    for (x, &i) in ones.iter().enumerate() {
        for &j in &ones[x + 1..] {
            let mut c = e.clone();
            c.m[i] = 0;
            c.m[j] = 0;
            if let Some(w) = orbit_of_line(&c) {
                return Some((c, w));
            }
        }
    }
    None
}

/// Predicts the splitting type of a class in the orbit of `L` (or of an
/// exceptional class through such a companion) as the pair of least score
/// whose score is at least the defect sum.
pub fn predict_splitting(c: &DivisorClass, opts: &SplitOptions) -> Result<Prediction> {
    let (class, w) = match orbit_of_line(c) {
        Some(w) => (c.clone(), w),
        None if is_exceptional(c) => companion_in_line_orbit(c).ok_or_else(|| {
            Error::InvalidInput(format!("no class in the orbit of L shares the plane curve of {c}"))
        })?,
        None => {
            return Err(Error::InvalidInput(format!(
                "{c} is neither exceptional nor in the orbit of L"
            )))
        }
    };
    let d = class.t;
    let m = class.max_mult();
    let (lo, hi) = interval(d, m);
    if d <= 2 * m + 1 {
        return Ok(Prediction {
            class,
            splitting: SplittingType::new(lo, d - lo),
            forced: true,
            defect: None,
            candidates: Vec::new(),
            slack: None,
        });
    }
    let n = class.n().max(3);
    let defect = defect_sum(&w, n, opts)?;
    let candidates: Vec<Candidate> = (lo..=hi)
        .map(|a| {
            let s = SplittingType::new(a, d - a);
            Candidate {
                a,
                b: d - a,
                score: s.score(),
                feasible: defect <= s.score(),
            }
        })
        .collect();
    let best = candidates
        .iter()
        .filter(|x| x.feasible)
        .min_by_key(|x| x.score)
        .ok_or_else(|| Error::Inconsistent(format!("no splitting type of {class} has score >= {defect}")))?;
    let splitting = SplittingType::new(best.a, best.b);
    let slack = Some(best.score - defect);
    Ok(Prediction {
        class,
        splitting,
        forced: false,
        defect: Some(defect),
        candidates,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn bounds() {
        let st = |a, b| SplittingType::new(a, b);
        assert_eq!(split_bounds(&c("12;6,4,4,4,4,4,4,3,2")).unwrap(), vec![st(6, 6)]);
        assert_eq!(split_bounds(&c("8;4,4,3,3,2,2,1,2,1,1")).unwrap(), vec![st(4, 4)]);
        assert_eq!(split_bounds(&c("13;5,5,5,5,5,5,4,1,1,1,1")).unwrap(), vec![st(5, 8), st(6, 7)]);
        assert_eq!(split_bounds(&c("1;1,1")).unwrap(), vec![st(0, 1)]);
        assert!(split_bounds(&c("2;1,1")).is_err());
    }

    #[test]
    fn line_splits_as_zero_one() {
        let r = compute_splitting(&c("1;1,1"), &SplitOptions::default()).unwrap();
        assert_eq!((r.a, r.b), (0, 1));
        assert_eq!(r.agreeing, 3);
    }

    #[test]
    fn forced_types_are_reproduced_by_the_pipeline() {
        for s in ["2;1,1,1,1,1", "3;2,1,1,1,1,1,1", "8;4,4,3,3,2,2,1,2,1,1", "5;2,2,2,2,2,2,1,1"] {
            let e = c(s);
            let forced = forced_splitting(&e).unwrap().unwrap();
            let r = compute_splitting(&e, &SplitOptions::default()).unwrap();
            assert_eq!(r.splitting(), forced, "{s}");
            assert_eq!(r.agreeing, 3);
        }
    }

    #[test]
    fn unbalanced_degree_13() {
        let r = compute_splitting(&c("13;5,5,5,5,5,5,4,1,1,1,1"), &SplitOptions::default()).unwrap();
        assert_eq!((r.a, r.b), (5, 8));
    }

    #[test]
    fn degree_19() {
        let r = compute_splitting(&c("19;8,8,7,7,7,6,6,3,2,1,1"), &SplitOptions::default()).unwrap();
        assert_eq!((r.a, r.b), (8, 11));
    }

    #[test]
    fn defect_sums() {
        let opts = SplitOptions::default();
        assert_eq!(defect_sum(&WeylWord::identity(), 0, &opts).unwrap(), 0);
        let w = orbit_of_line(&c("12;5,5,5,4,4,4,4,2")).unwrap();
        assert_eq!(defect_sum(&w, 8, &opts).unwrap(), 21);
        let single: WeylWord = "s0".parse().unwrap();
        assert_eq!(defect_sum(&single, 3, &opts).unwrap(), 0);
        assert!(defect_sum(&single, 2, &opts).is_err());
    }

    #[test]
    fn prediction_for_degree_12() {
        let p = predict_splitting(&c("12;5,5,5,4,4,4,4,2"), &SplitOptions::default()).unwrap();
        assert_eq!(p.splitting, SplittingType::new(5, 7));
        assert_eq!(p.defect, Some(21));
        let six = p.candidates.iter().find(|x| x.a == 6).unwrap();
        assert_eq!((six.score, six.feasible), (20, false));
    }

    #[test]
    fn prediction_forced_and_trivial() {
        let opts = SplitOptions::default();
        let p = predict_splitting(&c("1;"), &opts).unwrap();
        assert_eq!(p.splitting, SplittingType::new(0, 1));
        // 5L - 2E_1 - ... - 2E_6 is in the orbit of L with d <= 2m + 1
        let p = predict_splitting(&c("5;2,2,2,2,2,2"), &opts).unwrap();
        assert!(p.forced);
        assert_eq!(p.splitting, SplittingType::new(2, 3));
    }

    #[test]
    fn prediction_through_companion() {
        let opts = SplitOptions::default();
        let e = c("13;5,5,5,5,5,5,4,1,1,1,1");
        let p = predict_splitting(&e, &opts).unwrap();
        let r = compute_splitting(&e, &opts).unwrap();
        assert_eq!(p.splitting, r.splitting());
    }
}

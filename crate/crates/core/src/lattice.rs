//! Divisor classes on the blow-up of the plane at n points.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The class `tL - Σ m_i E_i`.
///
/// With this convention the exceptional divisor `E_i` has `m_i = -1` and
/// the canonical class is `(-3; -1, ..., -1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub t: i64,
    pub m: Vec<i64>,
}

impl DivisorClass {
    pub fn new(t: i64, m: Vec<i64>) -> Self {
        DivisorClass { t, m }
    }

    pub fn zero(n: usize) -> Self {
        DivisorClass { t: 0, m: vec![0; n] }
    }

    pub fn line(n: usize) -> Self {
        DivisorClass { t: 1, m: vec![0; n] }
    }

    /// `E_i` with 1-based `i`.
    pub fn exceptional(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i <= n, "E_{i} does not exist for n = {n}");
        let mut m = vec![0; n];
        m[i - 1] = -1;
        DivisorClass { t: 0, m }
    }

    pub fn canonical(n: usize) -> Self {
        DivisorClass { t: -3, m: vec![-1; n] }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn is_zero(&self) -> bool {
        self.t == 0 && self.m.iter().all(|&x| x == 0)
    }

    fn check_n(&self, other: &DivisorClass) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// Intersection number `t t' - Σ m_i m_i'`.
    pub fn try_dot(&self, other: &DivisorClass) -> Result<i64> {
        self.check_n(other)?;
        let mut acc = self.t as i128 * other.t as i128;
        for (a, b) in self.m.iter().zip(&other.m) {
            acc -= *a as i128 * *b as i128;
        }
        i64::try_from(acc).map_err(|_| Error::InvalidInput("intersection number overflows i64".into()))
    }

    /// Panicking form of [`try_dot`](Self::try_dot) for classes known to share `n`.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        self.try_dot(other).expect("classes must share n")
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// `K · F`.
    pub fn canonical_degree(&self) -> i64 {
        -3 * self.t + self.m.iter().sum::<i64>()
    }

    /// Riemann-Roch `χ(F) = (F² - K·F)/2 + 1`.
    pub fn chi(&self) -> i64 {
        let num = self.self_intersection() - self.canonical_degree();
        assert!(num % 2 == 0, "F^2 - K.F must be even, got {num} for {self}");
        num / 2 + 1
    }

    /// Appends zero multiplicities up to `n` points.
    pub fn pad_to(&self, n: usize) -> DivisorClass {
        assert!(n >= self.n(), "pad_to cannot drop points");
        let mut m = self.m.clone();
        m.resize(n, 0);
        DivisorClass { t: self.t, m }
    }

    /// Drops trailing zero multiplicities.
    pub fn trimmed(&self) -> DivisorClass {
        let mut m = self.m.clone();
        while m.last() == Some(&0) {
            m.pop();
        }
        DivisorClass { t: self.t, m }
    }

    pub fn try_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_n(other)?;
        Ok(DivisorClass {
            t: self.t + other.t,
            m: self.m.iter().zip(&other.m).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.try_add(&-other)
    }

    pub fn max_mult(&self) -> i64 {
        self.m.iter().copied().max().unwrap_or(0)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.try_add(rhs).expect("classes must share n")
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.try_sub(rhs).expect("classes must share n")
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            t: -self.t,
            m: self.m.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            t: self * rhs.t,
            m: rhs.m.iter().map(|x| self * x).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.t)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_int_list(what: &'static str, text: &str) -> Result<Vec<i64>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|e| Error::parse(what, tok, e.to_string()))
        })
        .collect()
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Parses `"t;m1,...,mn"`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let s = strip_ws(s);
        let (t, rest) = s
            .split_once(';')
            .ok_or_else(|| Error::parse("class", &s, "expected \"t;m1,...,mn\""))?;
        let t = t
            .parse::<i64>()
            .map_err(|e| Error::parse("class degree", t, e.to_string()))?;
        let m = parse_int_list("multiplicity", rest)?;
        Ok(DivisorClass { t, m })
    }
}

/// Multiplicities of a fat point scheme at general points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FatPointScheme {
    mults: Vec<i64>,
}

impl FatPointScheme {
    pub fn new(mults: Vec<i64>) -> Result<Self> {
        if let Some(bad) = mults.iter().find(|&&x| x < 0) {
            return Err(Error::InvalidInput(format!("negative multiplicity {bad}")));
        }
        if mults.iter().all(|&x| x == 0) {
            return Err(Error::InvalidInput("a fat point scheme needs a positive multiplicity".into()));
        }
        Ok(FatPointScheme { mults })
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    pub fn n(&self) -> usize {
        self.mults.len()
    }

    /// `F_t(Z) = tL - Σ m_i E_i`.
    pub fn class_of(&self, t: i64) -> DivisorClass {
        DivisorClass {
            t,
            m: self.mults.clone(),
        }
    }

    /// Number of conditions `Σ C(m_i + 1, 2)` imposed by the scheme.
    pub fn degree(&self) -> i64 {
        self.mults.iter().map(|&m| m * (m + 1) / 2).sum()
    }
}

impl FromStr for FatPointScheme {
    type Err = Error;

    /// Parses `"m1,...,mn"`, ignoring whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let s = strip_ws(s);
        let mults = parse_int_list("multiplicity", &s)?;
        if mults.is_empty() {
            return Err(Error::parse("scheme", &s, "no multiplicities given"));
        }
        FatPointScheme::new(mults).map_err(|e| Error::parse("scheme", &s, e.to_string()))
    }
}

impl fmt::Display for FatPointScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mults.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `x(x-1)/2` for `x >= 2`, else 0.
pub fn binom2(x: i64) -> i64 {
    if x >= 2 {
        x * (x - 1) / 2
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    #[test]
    fn basis_products() {
        let l = DivisorClass::line(2);
        let e1 = DivisorClass::exceptional(1, 2);
        let e2 = DivisorClass::exceptional(2, 2);
        assert_eq!(l.dot(&l), 1);
        assert_eq!(e1.dot(&e1), -1);
        assert_eq!(e1.dot(&e2), 0);
        assert_eq!(l.dot(&e1), 0);
    }

    #[test]
    fn disjoint_octics() {
        let c1 = c("8;4,4,3,3,2,2,1,2,1,1");
        let c2 = c("8;4,4,3,3,2,2,2,1,1,1");
        assert_eq!(c1.dot(&c2), 0);
        assert_eq!(c1.self_intersection(), -1);
    }

    #[test]
    fn mismatched_n_is_rejected() {
        assert!(DivisorClass::line(2).try_dot(&DivisorClass::line(3)).is_err());
    }

    #[test]
    fn canonical_class() {
        assert_eq!(DivisorClass::canonical(0), c("-3;"));
        assert_eq!(DivisorClass::canonical(2), c("-3;-1,-1"));
        let k9 = DivisorClass::canonical(9);
        assert_eq!(k9.self_intersection(), 0);
        assert_eq!(k9.canonical_degree(), 0);
    }

    #[test]
    fn riemann_roch() {
        assert_eq!(DivisorClass::zero(0).chi(), 1);
        assert_eq!(c("2;").chi(), 6);
        let f = c("27;8,8,8,8,5,5,5,5,5,5,5");
        assert_eq!(f.self_intersection(), 298);
        assert_eq!(-f.canonical_degree(), 14);
        assert_eq!(f.chi(), 157);
    }

    #[test]
    fn class_of_scheme() {
        let z: FatPointScheme = "1".parse().unwrap();
        assert_eq!(z.class_of(1), c("1;1"));
        let z: FatPointScheme = "77,77,77,77,77,77,77,44,11,11,11".parse().unwrap();
        assert_eq!(z.class_of(208).to_string(), "208;77,77,77,77,77,77,77,44,11,11,11");
    }

    #[test]
    fn parsing_round_trip_and_errors() {
        let s = "208;77,77,77,77,77,77,77,44,11,11,11";
        assert_eq!(c(s).to_string(), s);
        assert_eq!(c(" 3 ; 2, 1 ,1 "), c("3;2,1,1"));
        assert!("3,2".parse::<DivisorClass>().is_err());
        let err = "3;2,x".parse::<DivisorClass>().unwrap_err();
        assert!(err.to_string().contains("\"x\""));
        assert!("1,-1".parse::<FatPointScheme>().is_err());
        assert!("0,0".parse::<FatPointScheme>().is_err());
    }

    #[test]
    fn clamped_binomial() {
        assert_eq!(binom2(2), 1);
        assert_eq!(binom2(-2), 0);
        assert_eq!(binom2(6 - 4) + binom2(6 - 4), 2);
        for x in 0..=50i64 {
            let sum: i64 = (0..=x).map(|j| (x - 1 - j).max(0)).sum();
            assert_eq!(binom2(x), sum);
        }
    }
}

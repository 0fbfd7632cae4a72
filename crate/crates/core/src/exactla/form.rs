use std::fmt;

use super::field::PrimeField;
use super::matrix::FpMatrix;
use crate::error::{Error, Result};

/// Homogeneous binary form `Σ c_i u^i v^(d-i)` over F_p.
///
/// `coeffs[i]` is the coefficient of `u^i v^(d-i)`, so the vector always
/// has `d + 1` entries. The zero form of degree `d` has all coefficients 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl BinaryForm {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a form of degree d needs d + 1 coefficients");
        let coeffs = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        BinaryForm { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![0; degree + 1],
        }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    /// `a u + b v`.
    pub fn linear(field: PrimeField, a: u64, b: u64) -> Self {
        Self::new(field, vec![b, a])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Highest power of `u` with a nonzero coefficient.
    fn u_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        BinaryForm { field: f, coeffs: out }
    }

    pub fn scale(&self, c: u64) -> BinaryForm {
        let f = self.field;
        BinaryForm {
            field: f,
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        let f = self.field;
        Ok(BinaryForm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        })
    }

    /// Scales so the highest nonzero `u`-coefficient is 1.
    pub fn monic(&self) -> BinaryForm {
        match self.u_degree() {
            None => self.clone(),
            Some(k) => self.scale(self.field.inv(self.coeffs[k])),
        }
    }

    /// Exact quotient `self / g`; fails if `g` does not divide `self`.
    pub fn div_exact(&self, g: &BinaryForm) -> Result<BinaryForm> {
        let f = self.field;
        let Some(gk) = g.u_degree() else {
            return Err(Error::InvalidInput("division by the zero form".into()));
        };
        if g.degree() > self.degree() {
            return Err(Error::InvalidInput(format!(
                "cannot divide a degree-{} form by a degree-{} form",
                self.degree(),
                g.degree()
            )));
        }
        let qdeg = self.degree() - g.degree();
        let mut rem = self.coeffs.clone();
        let mut q = vec![0u64; qdeg + 1];
        let lead_inv = f.inv(g.coeffs[gk]);
        while let Some(rk) = rem.iter().rposition(|&c| c != 0) {
            if rk < gk || rk - gk > qdeg {
                return Err(Error::InvalidInput("form does not divide exactly".into()));
            }
            let shift = rk - gk;
            let c = f.mul(rem[rk], lead_inv);
            q[shift] = c;
            for (j, &b) in g.coeffs[..=gk].iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b));
            }
        }
        Ok(BinaryForm { field: f, coeffs: q })
    }

    /// `self(a u + b v, c u + d v)`.
    pub fn substitute(&self, a: u64, b: u64, c: u64, d: u64) -> BinaryForm {
        let f = self.field;
        let deg = self.degree();
        let x = BinaryForm::linear(f, a, b);
        let y = BinaryForm::linear(f, c, d);
        let mut xp = vec![BinaryForm::constant(f, 1)];
        let mut yp = vec![BinaryForm::constant(f, 1)];
        for k in 0..deg {
            xp.push(xp[k].mul(&x));
            yp.push(yp[k].mul(&y));
        }
        let mut out = BinaryForm::zero(f, deg);
        for (i, &ci) in self.coeffs.iter().enumerate() {
            if ci != 0 {
                let term = xp[i].mul(&yp[deg - i]).scale(ci);
                out = out.add(&term).expect("same degree");
            }
        }
        out
    }

    pub fn eval(&self, u: u64, v: u64) -> u64 {
        let f = self.field;
        let d = self.degree() as u64;
        self.coeffs.iter().enumerate().fold(0, |acc, (i, &c)| {
            let t = f.mul(c, f.mul(f.pow(u, i as u64), f.pow(v, d - i as u64)));
            f.add(acc, t)
        })
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "{c}")?;
            match i {
                0 => {}
                1 => write!(out, "*u")?,
                _ => write!(out, "*u^{i}")?,
            }
            match d - i {
                0 => {}
                1 => write!(out, "*v")?,
                k => write!(out, "*v^{k}")?,
            }
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

fn poly_gcd(f: PrimeField, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    let trim = |p: &mut Vec<u64>| {
        while p.last() == Some(&0) {
            p.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let lead_inv = f.inv(*b.last().unwrap());
        while a.len() >= b.len() {
            let c = f.mul(*a.last().unwrap(), lead_inv);
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[shift + j] = f.sub(a[shift + j], f.mul(c, bj));
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Monic gcd of two binary forms; rejects the pair (0, 0).
pub fn form_gcd(f: &BinaryForm, g: &BinaryForm) -> Result<BinaryForm> {
    let field = f.field;
    match (f.u_degree(), g.u_degree()) {
        (None, None) => Err(Error::InvalidInput("gcd of two zero forms".into())),
        (None, Some(_)) => Ok(g.monic()),
        (Some(_), None) => Ok(f.monic()),
        (Some(fk), Some(gk)) => {
            // split off the powers of u and v; what remains is coprime to both
            let fu = f.coeffs.iter().position(|&c| c != 0).unwrap();
            let gu = g.coeffs.iter().position(|&c| c != 0).unwrap();
            let upow = fu.min(gu);
            let vpow = (f.degree() - fk).min(g.degree() - gk);
            let fa = f.coeffs[fu..=fk].to_vec();
            let ga = g.coeffs[gu..=gk].to_vec();
            let core = poly_gcd(field, fa, ga);
            let inv = field.inv(*core.last().unwrap());
            let mut coeffs = vec![0u64; upow];
            coeffs.extend(core.iter().map(|&c| field.mul(c, inv)));
            coeffs.extend(std::iter::repeat(0).take(vpow));
            Ok(BinaryForm { field, coeffs })
        }
    }
}

/// Least `e` such that `Σ s_i phi_i = 0` for forms `s_i` of degree `e`, not
/// all zero. The three forms must share a degree and have no common factor.
pub fn min_syzygy_degree(phi: [&BinaryForm; 3]) -> Result<usize> {
    let d = phi[0].degree();
    for p in &phi[1..] {
        if p.degree() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: p.degree(),
            });
        }
    }
    if phi.iter().all(|p| p.is_zero()) {
        return Err(Error::InvalidInput("all three forms are zero".into()));
    }
    let g = form_gcd(&form_gcd(phi[0], phi[1])?, phi[2])?;
    if g.degree() > 0 {
        return Err(Error::CommonFactor(g.degree()));
    }
    let field = phi[0].field;
    // the Koszul relation phi_j e_i - phi_i e_j always exists in degree d
    for e in 0..=d {
        let rows = d + e + 1;
        let cols = 3 * (e + 1);
        let mut m = FpMatrix::zeros(field, rows, cols);
        for (i, p) in phi.iter().enumerate() {
            for j in 0..=e {
                for (k, &c) in p.coeffs.iter().enumerate() {
                    if c != 0 {
                        m.set(j + k, i * (e + 1) + j, c);
                    }
                }
            }
        }
        if !m.nullspace().is_empty() {
            return Ok(e);
        }
    }
    unreachable!("a syzygy of degree d always exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn u(f: PrimeField) -> BinaryForm {
        BinaryForm::linear(f, 1, 0)
    }

    fn v(f: PrimeField) -> BinaryForm {
        BinaryForm::linear(f, 0, 1)
    }

    #[test]
    fn gcd_small_cases() {
        let f = PrimeField::default();
        let uv = u(f).mul(&v(f));
        let uu = u(f).mul(&u(f));
        assert_eq!(form_gcd(&uv, &uu).unwrap(), u(f));
        let one = BinaryForm::constant(f, 1);
        assert_eq!(form_gcd(&uv, &one).unwrap(), one);
        assert!(form_gcd(&BinaryForm::zero(f, 2), &BinaryForm::zero(f, 1)).is_err());
    }

    /// u^2 - v^2 = (u - v)(u + v); long division by u - v leaves no remainder.
    #[test]
    fn gcd_difference_of_squares_mod_7() {
        let f = f7();
        let a = BinaryForm::from_i64(f, &[-1, 0, 1]);
        let b = BinaryForm::from_i64(f, &[-1, 1]);
        let g = form_gcd(&a, &b).unwrap();
        assert_eq!(g, b.monic());
        let q = a.div_exact(&g).unwrap();
        assert_eq!(q, BinaryForm::from_i64(f, &[1, 1]));
    }

    #[test]
    fn gcd_with_v_powers() {
        let f = PrimeField::default();
        // v^2 (u + 2v) and v (u + 2v) u
        let l = BinaryForm::linear(f, 1, 2);
        let a = v(f).mul(&v(f)).mul(&l);
        let b = v(f).mul(&l).mul(&u(f));
        assert_eq!(form_gcd(&a, &b).unwrap(), v(f).mul(&l));
    }

    #[test]
    fn div_exact_rejects_non_divisors() {
        let f = PrimeField::default();
        assert!(u(f).div_exact(&v(f)).is_err());
        let uv = u(f).mul(&v(f));
        assert_eq!(uv.div_exact(&v(f)).unwrap(), u(f));
    }

    #[test]
    fn syzygy_of_dependent_linear_forms() {
        let f = PrimeField::default();
        let w = BinaryForm::linear(f, 1, 1);
        assert_eq!(min_syzygy_degree([&u(f), &v(f), &w]).unwrap(), 0);
    }

    #[test]
    fn syzygy_of_smooth_conic() {
        let f = PrimeField::default();
        let a = u(f).mul(&u(f));
        let b = u(f).mul(&v(f));
        let c = v(f).mul(&v(f));
        assert_eq!(min_syzygy_degree([&a, &b, &c]).unwrap(), 1);
    }

    #[test]
    fn common_factor_is_rejected() {
        let f = PrimeField::default();
        let a = u(f).mul(&u(f));
        let b = u(f).mul(&v(f));
        assert_eq!(min_syzygy_degree([&a, &b, &a]), Err(Error::CommonFactor(1)));
    }

    /// A general triple of quintic forms parametrizes a rational quintic
    /// whose singularities are double points, so the minimal syzygy sits
    /// in degree min(2, 5 - 2) = 2.
    #[test]
    fn general_quintic_has_balanced_syzygy() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let forms: Vec<BinaryForm> = (0..3)
                .map(|_| BinaryForm::new(f, (0..6).map(|_| f.random(&mut rng)).collect()))
                .collect();
            assert_eq!(min_syzygy_degree([&forms[0], &forms[1], &forms[2]]).unwrap(), 2);
        }
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f = PrimeField::default();
        let p = BinaryForm::from_i64(f, &[3, -1, 4, 1]);
        let q = p.substitute(2, 5, 7, 1);
        for (s, t) in [(1u64, 0u64), (0, 1), (3, 4), (100, 7)] {
            let x = f.add(f.mul(2, s), f.mul(5, t));
            let y = f.add(f.mul(7, s), f.mul(1, t));
            assert_eq!(q.eval(s, t), p.eval(x, y));
        }
    }

    #[test]
    fn display_lists_terms_high_u_first() {
        let f = PrimeField::default();
        let p = BinaryForm::from_i64(f, &[1, 0, 2]);
        assert_eq!(p.to_string(), "2*u^2 + 1*v^2");
        assert_eq!(BinaryForm::zero(f, 3).to_string(), "0");
    }
}

//! Expected dimensions of linear systems: the decomposition `F = H + N`,
//! expected `h^0` and `h^1`, and Hilbert functions of fat point schemes.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, FatPointScheme};
use crate::weyl::{apply_word, reduce, ReducedForm};

/// An exceptional class with a positive coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub class: DivisorClass,
    pub coefficient: i64,
}

/// `F = H + Σ c_i C_i` with the `C_i` disjoint exceptional classes
/// orthogonal to `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub h: DivisorClass,
    pub components: Vec<Component>,
    /// The reduced class sat on the `m_2 = 0` edge of the case split.
    pub boundary: bool,
}

impl Decomposition {
    pub fn n_part(&self) -> DivisorClass {
        let mut n = DivisorClass::zero(self.h.n());
        for c in &self.components {
            n = &n + &(c.coefficient * &c.class);
        }
        n
    }
}

fn point_class(i: usize, n: usize) -> DivisorClass {
    DivisorClass::exceptional(i + 1, n)
}

/// Splits an in-chamber sorted class into its free part and exceptional
/// components, both in the reduced frame.
fn split_in_chamber(r: &DivisorClass) -> (DivisorClass, Vec<Component>, bool) {
    let n = r.n();
    let m = &r.m;
    let (t, m1, m2, m3) = (r.t, m[0], m[1], m[2]);
    let negatives = |from: usize| -> Vec<Component> {
        (from..n)
            .filter(|&i| m[i] < 0)
            .map(|i| Component {
                class: point_class(i, n),
                coefficient: -m[i],
            })
            .collect()
    };
    let boundary = m2 == 0 && m.iter().any(|&x| x < 0);
    if m3 >= 0 || m2 <= 0 {
        let h = DivisorClass::new(t, m.iter().map(|&x| x.max(0)).collect());
        return (h, negatives(0), boundary);
    }
    let c = t - m1 - m2;
    let mut hm = vec![0; n];
    let mut comps = Vec::new();
    let h = if c < 0 {
        hm[0] = m1 + c;
        hm[1] = m2 + c;
        let mut line = DivisorClass::line(n);
        line.m[0] = 1;
        line.m[1] = 1;
        comps.push(Component {
            class: line,
            coefficient: -c,
        });
        DivisorClass::new(t + c, hm)
    } else {
        hm[0] = m1;
        hm[1] = m2;
        DivisorClass::new(t, hm)
    };
    comps.extend(negatives(2));
    (h, comps, boundary)
}

/// Decomposes `F` when it lies in the monoid generated by exceptional
/// classes and `-K`; `None` when reduction shows it does not.
pub fn decompose(f: &DivisorClass) -> Option<Decomposition> {
    decompose_reduced(f, &reduce(f))
}

/// As [`decompose`], reusing an existing reduction of `f`.
pub fn decompose_reduced(f: &DivisorClass, red: &ReducedForm) -> Option<Decomposition> {
    if !red.in_chamber() {
        return None;
    }
    let (h, comps, boundary) = split_in_chamber(&red.reduced);
    let back = |c: &DivisorClass| apply_word(&red.word, c, true).expect("word fits its own lattice");
    let mut h = back(&h);
    let mut comps: Vec<Component> = comps
        .into_iter()
        .map(|c| Component {
            class: back(&c.class),
            coefficient: c.coefficient,
        })
        .collect();
    // drop the padding points again when nothing lives on them
    let n = f.n();
    if h.n() > n
        && h.m[n..].iter().all(|&x| x == 0)
        && comps.iter().all(|c| c.class.m[n..].iter().all(|&x| x == 0))
    {
        h.m.truncate(n);
        for c in &mut comps {
            c.class.m.truncate(n);
        }
    }
    Some(Decomposition {
        h,
        components: comps,
        boundary,
    })
}

/// Expected `h^0(F)`: `max(0, χ(H))` when `F = H + N`, else 0.
pub fn expected_h0(f: &DivisorClass) -> i64 {
    decompose(f).map_or(0, |d| d.h.chi().max(0))
}

/// Expected `h^1(F) = h^0(F) - χ(F) + h^0(K - F)`.
///
/// A negative value means the expected `h^0` values contradict Riemann-Roch
/// and is returned as an error rather than clamped.
pub fn expected_h1(f: &DivisorClass) -> Result<i64> {
    let k = DivisorClass::canonical(f.n());
    let value = expected_h0(f) - f.chi() + expected_h0(&(&k - f));
    if value < 0 {
        return Err(Error::ShghInconsistent {
            class: f.to_string(),
            value,
        });
    }
    Ok(value)
}

/// Least `t >= 0` with `e(h^0, F_t(Z)) > 0`.
pub fn alpha(z: &FatPointScheme) -> i64 {
    // the product of lines through pairs of points bounds alpha from above
    let bound: i64 = z.mults().iter().sum::<i64>() + 1;
    (0..=bound)
        .find(|&t| expected_h0(&z.class_of(t)) > 0)
        .expect("F_t(Z) is effective once t >= Σ m_i")
}

/// Components of the fixed part of `|F_t(Z)|`.
pub fn fixed_part(z: &FatPointScheme, t: i64) -> Result<Vec<Component>> {
    let f = z.class_of(t);
    decompose(&f)
        .map(|d| d.components)
        .ok_or_else(|| Error::NotEffective(f.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertRow {
    pub t: i64,
    pub value: i64,
    pub fixed_part: Vec<Component>,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub alpha: i64,
    pub rows: Vec<HilbertRow>,
}

impl HilbertReport {
    pub fn value(&self, t: i64) -> Option<i64> {
        self.rows.iter().find(|r| r.t == t).map(|r| r.value)
    }
}

/// Expected Hilbert function `e(h_Z, t)` over `degrees`.
pub fn hilbert(z: &FatPointScheme, degrees: RangeInclusive<i64>) -> HilbertReport {
    let rows = degrees
        .map(|t| {
            let f = z.class_of(t);
            match decompose(&f) {
                Some(d) => HilbertRow {
                    t,
                    value: d.h.chi().max(0),
                    fixed_part: d.components,
                    boundary: d.boundary,
                },
                None => HilbertRow {
                    t,
                    value: 0,
                    fixed_part: Vec::new(),
                    boundary: false,
                },
            }
        })
        .collect();
    HilbertReport { alpha: alpha(z), rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::is_exceptional;

    fn c(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn z(s: &str) -> FatPointScheme {
        s.parse().unwrap()
    }

    const Z77: &str = "77,77,77,77,77,77,77,44,11,11,11";
    const Z124: &str = "50,50,38,38,26,26,22,18,14,14";

    #[test]
    fn degree_209_is_a_multiple_of_one_curve() {
        let f = z(Z77).class_of(209);
        let d = decompose(&f).unwrap();
        assert!(d.h.is_zero());
        assert_eq!(d.n_part(), f);
        assert_eq!(expected_h0(&f), 1);
        assert_eq!(expected_h0(&z(Z77).class_of(208)), 0);
    }

    #[test]
    fn degree_102_decomposition() {
        let f = z(Z124).class_of(102);
        let d = decompose(&f).unwrap();
        assert_eq!(d.h, c("38;18,18,14,14,10,10,8,8,6,6"));
        let mut comps: Vec<(String, i64)> = d
            .components
            .iter()
            .map(|x| (x.class.to_string(), x.coefficient))
            .collect();
        comps.sort();
        assert_eq!(
            comps,
            vec![
                ("8;4,4,3,3,2,2,1,2,1,1".to_string(), 2),
                ("8;4,4,3,3,2,2,2,1,1,1".to_string(), 6)
            ]
        );
        assert_eq!(&d.h + &d.n_part(), f);
    }

    #[test]
    fn nef_class_is_its_own_free_part() {
        let f = c("27;8,8,8,8,5,5,5,5,5,5,5");
        let d = decompose(&f).unwrap();
        assert_eq!(d.h, f);
        assert!(d.components.is_empty());
    }

    #[test]
    fn hilbert_values() {
        let rep = hilbert(&z(Z124), 100..=104);
        assert_eq!(rep.alpha, 102);
        let vals: Vec<i64> = rep.rows.iter().map(|r| r.value).collect();
        assert_eq!(vals, vec![0, 0, 4, 92, 197]);
        assert!(fixed_part(&z(Z124), 103).unwrap().is_empty());
        assert!(fixed_part(&z(Z124), 101).is_err());

        let rep = hilbert(&z("48,33,33,33,32,32,32,24,16"), 97..=98);
        assert_eq!(rep.alpha, 98);
        assert_eq!(rep.value(97), Some(0));
        assert_eq!(rep.value(98), Some(71));

        let rep = hilbert(&z("1"), 0..=6);
        assert_eq!(rep.alpha, 1);
        for row in &rep.rows[1..] {
            assert_eq!(row.value, (row.t + 2) * (row.t + 1) / 2 - 1);
        }
        assert!(fixed_part(&z("1"), 1).unwrap().is_empty());
    }

    #[test]
    fn expected_h1_examples() {
        assert_eq!(expected_h1(&DivisorClass::zero(0)), Ok(0));
        assert_eq!(expected_h1(&c("1;0,1,1,1,0,0,0,0,0")), Ok(0));
        assert_eq!(expected_h1(&c("0;-1")), Ok(0));
        // a double line through two double points: h^0 = 1, chi = 0
        assert_eq!(expected_h1(&c("2;2,2")), Ok(1));
    }

    #[test]
    fn components_are_exceptional_and_orthogonal() {
        let d = decompose(&z(Z124).class_of(102)).unwrap();
        for (i, a) in d.components.iter().enumerate() {
            assert!(is_exceptional(&a.class));
            assert_eq!(a.class.dot(&d.h), 0);
            for b in &d.components[i + 1..] {
                assert_eq!(a.class.dot(&b.class), 0);
            }
        }
    }

    #[test]
    fn small_classes_are_padded_and_trimmed() {
        // 2L - 2E_1 - 2E_2 is twice the line through the two points
        let d = decompose(&c("2;2,2")).unwrap();
        assert_eq!(d.h, c("0;0,0"));
        assert_eq!(d.components, vec![Component { class: c("1;1,1"), coefficient: 2 }]);
        assert!(decompose(&c("1;2")).is_none());
    }
}

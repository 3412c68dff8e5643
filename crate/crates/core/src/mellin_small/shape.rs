use rug::Rational;

use crate::error::{Error, Result};
use crate::numerics::{bits_to_digits, HPComplex, Number};

/// The λ-list of a Γ-factor `∏ Γ((s+λ_j)/2)` together with its class structure.
///
/// Two λ's share a class when they differ by an even integer. Each class
/// has a base exponent `m = 2 − λ_min` where `λ_min` is its member of
/// smallest real part, and each member `λ_k` an integer offset
/// `(λ_k − λ_min)/2 ≥ 0`.
#[derive(Clone, Debug)]
pub struct GammaFactorShape {
    lambdas: Vec<HPComplex>,
    exact: Option<Vec<Rational>>,
    classes: Vec<Vec<usize>>,
    offsets: Vec<i64>,
    base_exponents: Vec<HPComplex>,
}

impl GammaFactorShape {
    pub fn d(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[HPComplex] {
        &self.lambdas
    }

    /// The λ's as exact rationals, if they were supplied that way.
    pub fn exact_lambdas(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn base_exponents(&self) -> &[HPComplex] {
        &self.base_exponents
    }

    /// `(λ_k − λ_min)/2` for the class containing `k`.
    pub fn offset(&self, k: usize) -> i64 {
        self.offsets[k]
    }

    pub fn class_of(&self, k: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&k))
            .expect("every index has a class")
    }

    /// Order of the pole of γ at `s` (0 when analytic).
    pub fn pole_order(&self, s: &HPComplex, snap_log10: f64) -> usize {
        self.lambdas
            .iter()
            .filter(|l| {
                let z = (s + *l).div_i64(2);
                let (n, diff) = z.nearest_integer();
                n <= 0 && diff.log10_abs() < snap_log10
            })
            .count()
    }

    /// Same shape with every λ carried at `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        let mut out = self.clone();
        match &self.exact {
            Some(ex) => {
                out.lambdas = ex.iter().map(|r| HPComplex::from_rational(bits, r)).collect();
            }
            None => {
                out.lambdas = self.lambdas.iter().map(|l| l.with_prec(bits)).collect();
            }
        }
        out.base_exponents = self
            .classes
            .iter()
            .map(|c| {
                let k = c.iter().copied().find(|&k| self.offsets[k] == 0).expect("class base");
                (-&out.lambdas[k]).add_i64(2)
            })
            .collect();
        out
    }
}

/// Partitions `lambdas` into classes of even-integer differences.
///
/// `class_tolerance` defaults to `10^(-digits/2)` at the precision of the
/// inputs. Differences sitting in `[tol, 10·tol)` of an even integer are
/// rejected as ambiguous.
pub fn build_shape(lambdas: &[HPComplex], class_tolerance: Option<f64>) -> Result<GammaFactorShape> {
    build(lambdas.to_vec(), None, class_tolerance)
}

/// Like [`build_shape`], but keeps rational λ's exact so downstream
/// recursions can run in rational arithmetic.
pub fn build_shape_from_numbers(
    lambdas: &[Number],
    bits: u32,
    class_tolerance: Option<f64>,
) -> Result<GammaFactorShape> {
    let hp = lambdas.iter().map(|l| l.to_hp(bits)).collect();
    let exact: Option<Vec<Rational>> = lambdas.iter().map(Number::as_rational).collect();
    build(hp, exact, class_tolerance)
}

fn build(
    lambdas: Vec<HPComplex>,
    exact: Option<Vec<Rational>>,
    class_tolerance: Option<f64>,
) -> Result<GammaFactorShape> {
    let d = lambdas.len();
    if d == 0 {
        return Err(Error::Validation {
            assumption: "gamma factor",
            message: "at least one lambda is required".into(),
        });
    }
    let bits = lambdas.iter().map(HPComplex::prec).max().unwrap_or(64);
    let tol_log10 = match class_tolerance {
        Some(t) => t.log10(),
        None => -(bits_to_digits(bits) as f64) / 2.0,
    };

    let mut parent: Vec<usize> = (0..d).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    // offset[j][k] = (λ_j − λ_k)/2 for linked pairs
    let mut half_diff = vec![vec![None; d]; d];
    for j in 0..d {
        for k in (j + 1)..d {
            let exact_diff = exact.as_ref().map(|ex| Rational::from(&ex[j] - &ex[k]) / 2u32);
            let (n, linked) = match exact_diff {
                Some(q) if *q.denom() == 1u32 => (q.numer().to_i64().unwrap_or(i64::MAX), true),
                Some(_) => (0, false),
                None => {
                    let (n, diff) = (&lambdas[j] - &lambdas[k]).div_i64(2).nearest_integer();
                    let dist = diff.log10_abs();
                    if dist < tol_log10 {
                        (n, true)
                    } else if dist < tol_log10 + 1.0 {
                        return Err(Error::Ambiguity(format!(
                            "lambda_{} - lambda_{} is within 10^{dist:.1} of an even integer",
                            j + 1,
                            k + 1
                        )));
                    } else {
                        (n, false)
                    }
                }
            };
            if linked {
                half_diff[j][k] = Some(n);
                half_diff[k][j] = Some(-n);
                let (a, b) = (root(&mut parent, j), root(&mut parent, k));
                parent[a] = b;
            }
        }
    }

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..d {
        let r = root(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(c) => classes[c].push(i),
            None => {
                roots.push(r);
                classes.push(vec![i]);
            }
        }
    }

    let mut offsets = vec![0i64; d];
    let mut base_exponents = Vec::with_capacity(classes.len());
    for class in &classes {
        // Within a class real parts differ by even integers, so the base is
        // the member with the most negative half-difference to any other.
        let base = class
            .iter()
            .copied()
            .min_by(|&a, &b| {
                lambdas[a]
                    .re()
                    .partial_cmp(lambdas[b].re())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty class");
        for &k in class {
            offsets[k] = if k == base {
                0
            } else {
                half_diff[k][base].unwrap_or_else(|| (&lambdas[k] - &lambdas[base]).div_i64(2).nearest_integer().0)
            };
        }
        base_exponents.push((-&lambdas[base]).add_i64(2));
    }

    Ok(GammaFactorShape {
        lambdas,
        exact,
        classes,
        offsets,
        base_exponents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(xs: &[&str]) -> Vec<Number> {
        xs.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn single_and_double_zero() {
        let s = build_shape_from_numbers(&nums(&["0"]), 128, None).unwrap();
        assert_eq!(s.class_sizes(), vec![1]);
        assert_eq!(s.base_exponents()[0].to_f64(), (2.0, 0.0));
        let s = build_shape_from_numbers(&nums(&["0", "0"]), 128, None).unwrap();
        assert_eq!(s.class_sizes(), vec![2]);
        assert_eq!(s.base_exponents()[0].to_f64(), (2.0, 0.0));
    }

    #[test]
    fn shintani_row_is_all_singletons() {
        let s = build_shape_from_numbers(&nums(&["0", "1", "1/6", "-1/6"]), 128, None).unwrap();
        assert_eq!(s.classes().len(), 4);
        assert_eq!(s.class_sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn even_differences_join_with_offsets() {
        let s = build_shape_from_numbers(&nums(&["1", "-1", "0", "5"]), 128, None).unwrap();
        assert_eq!(s.class_sizes(), vec![3, 1]);
        assert_eq!(s.base_exponents()[0].to_f64(), (3.0, 0.0));
        assert_eq!(s.offset(0), 1);
        assert_eq!(s.offset(1), 0);
        assert_eq!(s.offset(3), 3);
        let sum: usize = s.class_sizes().iter().sum();
        assert_eq!(sum, s.d());
    }

    #[test]
    fn inexact_inputs_and_ambiguity() {
        let bits = 128;
        let a = HPComplex::from_f64(bits, 0.5, 0.0);
        let b = HPComplex::from_f64(bits, 2.5, 0.0);
        let s = build_shape(&[a.clone(), b], None).unwrap();
        assert_eq!(s.class_sizes(), vec![2]);
        let c = HPComplex::from_f64(bits, 2.5 + 3e-12, 0.0);
        assert!(matches!(build_shape(&[a, c], Some(1e-12)), Err(Error::Ambiguity(_))));
    }

    #[test]
    fn pole_orders() {
        let s = build_shape_from_numbers(&nums(&["0", "0"]), 128, None).unwrap();
        let z = HPComplex::zero(128);
        assert_eq!(s.pole_order(&z, -15.0), 2);
        assert_eq!(s.pole_order(&HPComplex::one(128), -15.0), 0);
    }
}

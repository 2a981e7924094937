//! The cyclic extension `K_ω` attached to a Witt vector of length 1 or 2.
//!
//! Elements are stored in the monomial basis `x1^i x2^j` (`0 <= i, j < p`),
//! flattened to index `i + p·j`. The defining relations come from
//! `(x1^p, x2^p) = (x1, x2) + ω` in `W_m`: `x1^p = x1 + ω1`, and for `m = 2`
//! `x2^p = x2 + g(x1)` where `g` is read off the universal sum polynomial.

mod ramification;

use std::fmt;
use std::sync::Arc;

use crate::coeff::FieldSpec;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::CharPRing;
use crate::valued::LaurentElem;
use crate::witt::{eval_mod, universal, WittVector};

pub use ramification::{
    as_reduce, as_reduce_with, classify, classify_deg_p, classify_len2, lemma52_holds,
    newton_valuations, replay_witt, witt_reduce, AsReduction, AsStep, AsStepKind, Classification,
    RamReport, WittReduction,
};

/// Largest basis size for which the full multiplication matrix determinant is used.
const FULL_DET_LIMIT: usize = 16;

#[derive(Debug)]
pub struct CyclicExtDesc {
    p: u64,
    spec: FieldSpec,
    omega: WittVector<LaurentElem>,
    /// For `m = 2`: the degree-`p` layer `K(x1)` and `x2^p - x2` as an element of it.
    layer: Option<(Arc<CyclicExtDesc>, ExtensionElem)>,
}

impl CyclicExtDesc {
    /// Builds the descriptor, refusing `ω` whose first component lies in `P(K)`.
    pub fn new(omega: WittVector<LaurentElem>) -> Result<Arc<Self>> {
        let m = omega.len();
        if !(1..=2).contains(&m) {
            return Err(Error::UnsupportedInput(format!(
                "extension arithmetic needs m <= 2, got {m}"
            )));
        }
        let spec = omega.component(0).spec();
        if omega.components().iter().any(|c| c.spec() != spec) {
            return Err(Error::SpecMismatch("Witt vector components".into()));
        }
        let reduced = as_reduce(omega.component(0))?;
        if reduced.reduced.is_zero() {
            return Err(Error::DegenerateExtension(format!(
                "first component {} lies in the Artin-Schreier image",
                omega.component(0)
            )));
        }
        let p = spec.p();
        let layer = if m == 2 {
            let base = Self::new(WittVector::new(vec![omega.component(0).clone()]))?;
            let polys = universal(p, 2)?;
            let x1 = ExtensionElem::gen(&base, 0);
            let vals = [
                x1.clone(),
                x1.zero_like(),
                ExtensionElem::scalar(&base, omega.component(0).clone()),
                ExtensionElem::scalar(&base, omega.component(1).clone()),
            ];
            let g = eval_mod(&polys.sum_mod[1], &vals);
            Some((base, g))
        } else {
            None
        };
        Ok(Arc::new(CyclicExtDesc {
            p,
            spec,
            omega,
            layer,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.omega.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn omega(&self) -> &WittVector<LaurentElem> {
        &self.omega
    }

    /// `[K_ω : K] = p^m`.
    pub fn degree(&self) -> usize {
        (self.p as usize).pow(self.m() as u32)
    }

    /// The degree-`p` layer `K(x1)` when `m = 2`.
    pub fn base_layer(&self) -> Option<&Arc<CyclicExtDesc>> {
        self.layer.as_ref().map(|(b, _)| b)
    }

    /// `x2^p - x2`, an element of the degree-`p` layer (only for `m = 2`).
    pub fn top_relation(&self) -> Option<&ExtensionElem> {
        self.layer.as_ref().map(|(_, g)| g)
    }
}

#[derive(Clone)]
pub struct ExtensionElem {
    desc: Arc<CyclicExtDesc>,
    coeffs: Vec<LaurentElem>,
}

impl ExtensionElem {
    pub fn from_coeffs(desc: &Arc<CyclicExtDesc>, coeffs: Vec<LaurentElem>) -> Result<Self> {
        if coeffs.len() != desc.degree() {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for degree {}",
                coeffs.len(),
                desc.degree()
            )));
        }
        if coeffs.iter().any(|c| c.spec() != desc.spec) {
            return Err(Error::SpecMismatch("extension coefficients".into()));
        }
        Ok(ExtensionElem {
            desc: desc.clone(),
            coeffs,
        })
    }

    pub fn zero(desc: &Arc<CyclicExtDesc>) -> Self {
        ExtensionElem {
            desc: desc.clone(),
            coeffs: vec![LaurentElem::exact_zero(desc.spec); desc.degree()],
        }
    }

    pub fn scalar(desc: &Arc<CyclicExtDesc>, c: LaurentElem) -> Self {
        let mut e = Self::zero(desc);
        e.coeffs[0] = c;
        e
    }

    pub fn one(desc: &Arc<CyclicExtDesc>) -> Self {
        Self::scalar(desc, LaurentElem::one(desc.spec))
    }

    /// The basis monomial with flat index `idx`.
    pub fn basis(desc: &Arc<CyclicExtDesc>, idx: usize) -> Self {
        let mut e = Self::zero(desc);
        e.coeffs[idx] = LaurentElem::one(desc.spec);
        e
    }

    /// The generator `x_{k+1}`.
    pub fn gen(desc: &Arc<CyclicExtDesc>, k: usize) -> Self {
        assert!(k < desc.m(), "generator index out of range");
        Self::basis(desc, (desc.p as usize).pow(k as u32))
    }

    pub fn desc(&self) -> &Arc<CyclicExtDesc> {
        &self.desc
    }

    pub fn coeffs(&self) -> &[LaurentElem] {
        &self.coeffs
    }

    /// Coefficient of `x1^i x2^j`.
    pub fn coeff(&self, i: usize, j: usize) -> &LaurentElem {
        &self.coeffs[i + self.desc.p as usize * j]
    }

    /// The `K`-coefficient if the element lies in `K`.
    pub fn as_scalar(&self) -> Option<&LaurentElem> {
        self.coeffs[1..]
            .iter()
            .all(LaurentElem::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.desc, &other.desc) {
            return Err(Error::SpecMismatch(
                "elements of different extensions".into(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<_>>()?;
        Ok(ExtensionElem {
            desc: self.desc.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_>>()?;
        Ok(ExtensionElem {
            desc: self.desc.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &LaurentElem) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| if a.is_exact_zero() { a.clone() } else { a * c })
            .collect();
        ExtensionElem {
            desc: self.desc.clone(),
            coeffs,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        match &self.desc.layer {
            None => Ok(ExtensionElem {
                desc: self.desc.clone(),
                coeffs: self.mul_layer(other),
            }),
            Some((base, g)) => Ok(self.mul_tower(other, base, g)),
        }
    }

    /// Degree-`p` case: multiply as polynomials in `x`, then fold `x^k = x^(k-p) (x + ω1)`.
    fn mul_layer(&self, other: &Self) -> Vec<LaurentElem> {
        let p = self.desc.p as usize;
        let omega1 = self.desc.omega.component(0);
        let zero = LaurentElem::exact_zero(self.desc.spec);
        let mut prod = vec![zero; 2 * p - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(a * b);
            }
        }
        for k in (p..2 * p - 1).rev() {
            let c = std::mem::replace(&mut prod[k], LaurentElem::exact_zero(self.desc.spec));
            if c.is_exact_zero() {
                continue;
            }
            prod[k - p + 1] = &prod[k - p + 1] + &c;
            prod[k - p] = &prod[k - p] + &(&c * omega1);
        }
        prod.truncate(p);
        prod
    }

    /// Degree-`p^2` case: polynomials in `x2` over `K(x1)`, folding `x2^p = x2 + g`.
    fn mul_tower(&self, other: &Self, base: &Arc<CyclicExtDesc>, g: &ExtensionElem) -> Self {
        let p = self.desc.p as usize;
        let a = self.split_layers(base);
        let b = other.split_layers(base);
        let mut prod = vec![ExtensionElem::zero(base); 2 * p - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_exact_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_exact_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add_ref(&ai.mul_ref(bj));
            }
        }
        for k in (p..2 * p - 1).rev() {
            let c = std::mem::replace(&mut prod[k], ExtensionElem::zero(base));
            if c.is_exact_zero() {
                continue;
            }
            prod[k - p + 1] = prod[k - p + 1].add_ref(&c);
            prod[k - p] = prod[k - p].add_ref(&c.mul_ref(g));
        }
        prod.truncate(p);
        Self::join_layers(&self.desc, &prod)
    }

    /// Coefficients of `1, x2, ..., x2^(p-1)` as elements of `K(x1)`.
    pub fn split_layers(&self, base: &Arc<CyclicExtDesc>) -> Vec<ExtensionElem> {
        let p = self.desc.p as usize;
        self.coeffs
            .chunks(p)
            .map(|chunk| ExtensionElem {
                desc: base.clone(),
                coeffs: chunk.to_vec(),
            })
            .collect()
    }

    fn join_layers(desc: &Arc<CyclicExtDesc>, parts: &[ExtensionElem]) -> Self {
        let coeffs = parts
            .iter()
            .flat_map(|e| e.coeffs.iter().cloned())
            .collect();
        ExtensionElem {
            desc: desc.clone(),
            coeffs,
        }
    }

    /// Matrix of multiplication by `self` on the monomial basis over `K`.
    pub fn mul_matrix(&self) -> Result<Matrix<LaurentElem>> {
        let n = self.desc.degree();
        let cols = (0..n)
            .map(|k| Ok(self.checked_mul(&Self::basis(&self.desc, k))?.coeffs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(cols))
    }

    /// `N_{K_ω/K}`, as the determinant of multiplication by `self`.
    ///
    /// For `m = 2` the determinant is taken over `K(x1)` first and then
    /// pushed down, which agrees with the full `p^2 × p^2` determinant by
    /// transitivity of norms and keeps the expansion small.
    pub fn norm(&self) -> Result<LaurentElem> {
        if self.coeffs.iter().all(LaurentElem::is_exact_zero) {
            return Ok(LaurentElem::exact_zero(self.desc.spec));
        }
        let n = match &self.desc.layer {
            None => self.mul_matrix()?.det(),
            Some((base, _)) => {
                let p = self.desc.p as usize;
                let cols: Vec<Vec<ExtensionElem>> = (0..p)
                    .map(|j| {
                        Ok(self
                            .checked_mul(&Self::basis(&self.desc, p * j))?
                            .split_layers(base))
                    })
                    .collect::<Result<_>>()?;
                Matrix::from_columns(cols).det().norm()?
            }
        };
        check_norm(n)
    }

    /// The norm computed from the full `p^m × p^m` multiplication matrix.
    pub fn norm_full(&self) -> Result<LaurentElem> {
        if self.desc.degree() > FULL_DET_LIMIT {
            return Err(Error::UnsupportedCase(format!(
                "full determinant of size {}",
                self.desc.degree()
            )));
        }
        check_norm(self.mul_matrix()?.det())
    }

    /// `Π_{k ∈ F_p} (self + k)`; for `self = x1` this is the product of the conjugates of `x1`.
    pub fn conjugate_product_x1(desc: &Arc<CyclicExtDesc>) -> Result<Self> {
        let x1 = Self::gen(desc, 0);
        (0..desc.p as i64).try_fold(Self::one(desc), |acc, k| {
            acc.checked_mul(&x1.add_ref(&x1.int_like(k)))
        })
    }
}

fn check_norm(n: LaurentElem) -> Result<LaurentElem> {
    if n.is_zero() {
        return Err(Error::PrecisionExhausted(format!("norm is {n}")));
    }
    Ok(n)
}

impl CharPRing for ExtensionElem {
    fn characteristic(&self) -> u64 {
        self.desc.p
    }
    fn zero_like(&self) -> Self {
        Self::zero(&self.desc)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.desc)
    }
    fn int_like(&self, n: i64) -> Self {
        Self::scalar(&self.desc, LaurentElem::from_int(self.desc.spec, n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentElem::is_zero)
    }
    fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentElem::is_exact_zero)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("extension addition")
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("extension subtraction")
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("extension multiplication")
    }
    fn neg_ref(&self) -> Self {
        ExtensionElem {
            desc: self.desc.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn approx_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.desc, &other.desc)
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a.approx_eq(b))
    }
}

impl fmt::Debug for ExtensionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtensionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.desc.p as usize;
        let mono = |k: usize| {
            let (i, j) = (k % p, k / p);
            let mut parts = Vec::new();
            for (name, e) in [("x1", i), ("x2", j)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            parts.join("*")
        };
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match (k, mono(k)) {
                (0, _) => format!("({c})"),
                (_, m) => format!("({c})*{m}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::valued::ext_val;
    use crate::RationalValue;

    fn t(k: FieldSpec, e: i64) -> LaurentElem {
        LaurentElem::t_pow(k, e)
    }

    fn desc(omega: Vec<LaurentElem>) -> Arc<CyclicExtDesc> {
        CyclicExtDesc::new(WittVector::new(omega)).unwrap()
    }

    #[test]
    fn square_of_generator_char_two() {
        let k = FieldSpec::prime_field(2).unwrap();
        let w1 = &t(k, -1) + &t(k, 3);
        let d = desc(vec![w1.clone()]);
        let x = ExtensionElem::gen(&d, 0);
        let expected = x.add_ref(&ExtensionElem::scalar(&d, w1));
        assert!(x.mul_ref(&x).approx_eq(&expected));
        assert!(x.mul_ref(&ExtensionElem::one(&d)).approx_eq(&x));
    }

    #[test]
    fn second_generator_relation_char_two() {
        let k = FieldSpec::prime_field(2).unwrap();
        let (w1, w2) = (t(k, -1), &t(k, -3) + &t(k, 2));
        let d = desc(vec![w1.clone(), w2.clone()]);
        let x1 = ExtensionElem::gen(&d, 0);
        let x2 = ExtensionElem::gen(&d, 1);
        // x2^2 = x2 + ω2 + ω1·x1
        let expected = x2
            .add_ref(&ExtensionElem::scalar(&d, w2))
            .add_ref(&x1.scale(&w1));
        assert!(x2.mul_ref(&x2).approx_eq(&expected));
    }

    #[test]
    fn generators_satisfy_witt_relation() {
        for p in [2u64, 3] {
            let k = FieldSpec::rational_function_field(p).unwrap();
            let u = LaurentElem::constant(k.u().unwrap());
            let w = vec![&t(k, -1) + &u, &t(k, -2) * &u];
            let d = desc(w.clone());
            let x = WittVector::new(vec![ExtensionElem::gen(&d, 0), ExtensionElem::gen(&d, 1)]);
            let lhs = x.frobenius_twist(1);
            let omega = WittVector::new(
                w.into_iter()
                    .map(|c| ExtensionElem::scalar(&d, c))
                    .collect(),
            );
            let rhs = x.witt_add(&omega).unwrap();
            assert!(lhs.approx_eq(&rhs), "p = {p}");
        }
    }

    #[test]
    fn mul_is_commutative_and_associative() {
        let k = FieldSpec::prime_field(3).unwrap();
        let d = desc(vec![t(k, -2), &t(k, -1) + &LaurentElem::from_int(k, 2)]);
        let x1 = ExtensionElem::gen(&d, 0);
        let x2 = ExtensionElem::gen(&d, 1);
        let a = x1
            .add_ref(&x2.mul_ref(&x2))
            .add_ref(&ExtensionElem::scalar(&d, t(k, 1)));
        let b = x2.mul_ref(&x1).sub_ref(&x1.int_like(2));
        let c = x1.mul_ref(&x1).mul_ref(&x2).add_ref(&x2);
        assert!(a.mul_ref(&b).approx_eq(&b.mul_ref(&a)));
        assert!(a
            .mul_ref(&b)
            .mul_ref(&c)
            .approx_eq(&a.mul_ref(&b.mul_ref(&c))));
    }

    #[test]
    fn norms_of_simple_elements() {
        for p in [2u64, 3, 5] {
            let k = FieldSpec::prime_field(p).unwrap();
            let w1 = &t(k, -1) + &t(k, 2);
            let d = desc(vec![w1.clone()]);
            assert_eq!(ExtensionElem::one(&d).norm().unwrap(), LaurentElem::one(k));
            let sign = if (p + 1) % 2 == 0 { 1 } else { -1 };
            let n = ExtensionElem::gen(&d, 0).norm().unwrap();
            assert!(
                n.approx_eq(&w1.scale(&k.from_int(sign)).unwrap()),
                "p = {p}: {n}"
            );
            let conj = ExtensionElem::conjugate_product_x1(&d).unwrap();
            assert!(conj.as_scalar().unwrap().approx_eq(&n));
            let c = &t(k, 2) + &LaurentElem::one(k);
            let nc = ExtensionElem::scalar(&d, c.clone()).norm().unwrap();
            assert!(nc.approx_eq(&CharPRing::pow(&c, p)));
        }
    }

    #[test]
    fn tower_norm_matches_full_determinant() {
        for p in [2u64, 3] {
            let k = FieldSpec::prime_field(p).unwrap();
            let d = desc(vec![t(k, -1), &t(k, 1) + &LaurentElem::from_int(k, 1)]);
            let x1 = ExtensionElem::gen(&d, 0);
            let x2 = ExtensionElem::gen(&d, 1);
            let a = x2.add_ref(&x1.mul_ref(&x2)).add_ref(&x1.int_like(1));
            assert!(
                a.norm().unwrap().approx_eq(&a.norm_full().unwrap()),
                "p = {p}"
            );
            let b = x1.add_ref(&ExtensionElem::scalar(&d, t(k, -2)));
            let nab = a.mul_ref(&b).norm().unwrap();
            assert!(nab.approx_eq(&(&a.norm().unwrap() * &b.norm().unwrap())));
        }
    }

    #[test]
    fn top_generator_valuation_from_norm() {
        let k = FieldSpec::prime_field(2).unwrap();
        let d = desc(vec![t(k, -1), LaurentElem::exact_zero(k)]);
        let n = ExtensionElem::gen(&d, 1).norm().unwrap();
        assert_eq!(ext_val(4, &n).unwrap(), RationalValue::new(-3, 4));
    }

    #[test]
    fn degenerate_omega_is_refused() {
        let k = FieldSpec::prime_field(2).unwrap();
        let g = &t(k, -1) + &t(k, 1);
        let w = &CharPRing::pow(&g, 2) - &g;
        assert!(matches!(
            CyclicExtDesc::new(WittVector::new(vec![w])),
            Err(Error::DegenerateExtension(_))
        ));
    }
}

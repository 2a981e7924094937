//! The residue field `k`: either `F_p` or the rational function field `F_p(u)`.
//!
//! Elements of `F_p(u)` are kept as reduced fractions with a monic
//! denominator, so structural equality is field equality.

mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

pub use poly::FpPoly;
pub(crate) use poly::{inv_mod, reduce_i64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ResidueKind {
    /// `k = F_p`, a perfect field.
    PrimeField,
    /// `k = F_p(u)`, imperfect with `dim k/P(k)` infinite.
    RationalFunctionField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    p: u64,
    kind: ResidueKind,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn new(p: u64, kind: ResidueKind) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidSpec(format!("{p} is too large")));
        }
        Ok(FieldSpec { p, kind })
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, ResidueKind::PrimeField)
    }

    pub fn rational_function_field(p: u64) -> Result<Self> {
        Self::new(p, ResidueKind::RationalFunctionField)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> ResidueKind {
        self.kind
    }

    pub fn is_perfect(&self) -> bool {
        self.kind == ResidueKind::PrimeField
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem::from_poly_unchecked(*self, FpPoly::zero(self.p))
    }

    pub fn one(&self) -> ResidueElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        ResidueElem::from_poly_unchecked(*self, FpPoly::constant(self.p, reduce_i64(n, self.p)))
    }

    /// The transcendental `u`; only available over `F_p(u)`.
    pub fn u(&self) -> Result<ResidueElem> {
        self.poly(FpPoly::monomial(self.p, 1, 1))
    }

    pub fn poly(&self, f: FpPoly) -> Result<ResidueElem> {
        if f.p() != self.p {
            return Err(Error::SpecMismatch(format!(
                "polynomial over F_{} in F_{}",
                f.p(),
                self.p
            )));
        }
        if self.kind == ResidueKind::PrimeField && !f.is_constant() {
            return Err(Error::UnsupportedInput("u is not an element of F_p".into()));
        }
        Ok(ResidueElem::from_poly_unchecked(*self, f))
    }

    pub fn fraction(&self, num: FpPoly, den: FpPoly) -> Result<ResidueElem> {
        let num = self.poly(num)?;
        let den = self.poly(den)?;
        num.checked_div(&den)
    }

    /// Number of residue elements for `F_p`, `None` for `F_p(u)`.
    pub fn finite_order(&self) -> Option<u64> {
        match self.kind {
            ResidueKind::PrimeField => Some(self.p),
            ResidueKind::RationalFunctionField => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ResidueKind::PrimeField => write!(f, "F_{}", self.p),
            ResidueKind::RationalFunctionField => write!(f, "F_{}(u)", self.p),
        }
    }
}

/// An element of `k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueElem {
    spec: FieldSpec,
    num: FpPoly,
    den: FpPoly,
}

/// Outcome of the Artin-Schreier membership test `a ∈ {g^p - g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AsMembership {
    /// `g` with `g^p - g = a`.
    Yes(ResidueElem),
    No,
}

impl AsMembership {
    pub fn is_yes(&self) -> bool {
        matches!(self, AsMembership::Yes(_))
    }
}

impl ResidueElem {
    fn from_poly_unchecked(spec: FieldSpec, num: FpPoly) -> Self {
        ResidueElem {
            spec,
            num,
            den: FpPoly::constant(spec.p, 1),
        }
    }

    fn from_parts(spec: FieldSpec, num: FpPoly, den: FpPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return spec.zero();
        }
        if den.is_one() {
            return Self::from_poly_unchecked(spec, num);
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g);
        let (mut den, _) = den.div_rem(&g);
        let lead_inv = inv_mod(den.lead(), spec.p);
        num = num.scale(lead_inv);
        den = den.scale(lead_inv);
        ResidueElem { spec, num, den }
    }

    /// `num / den` for coprime `num`, `den`; only makes `den` monic.
    fn from_coprime(spec: FieldSpec, num: FpPoly, den: FpPoly) -> Self {
        if num.is_zero() {
            return spec.zero();
        }
        let lead_inv = inv_mod(den.lead(), spec.p);
        if lead_inv == 1 {
            return ResidueElem { spec, num, den };
        }
        ResidueElem {
            spec,
            num: num.scale(lead_inv),
            den: den.scale(lead_inv),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn numerator(&self) -> &FpPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The underlying residue when the element lies in `F_p`.
    pub fn as_prime_field(&self) -> Option<u64> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.constant_term())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!(
                "{} vs {}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.den == other.den {
            return Ok(Self::from_parts(
                self.spec,
                self.num.add(&other.num),
                self.den.clone(),
            ));
        }
        // Both operands are reduced, so only factors of gcd(d1, d2) can cancel.
        let g = self.den.gcd(&other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return Ok(Self::from_coprime(self.spec, num, self.den.mul(&other.den)));
        }
        let d1 = self.den.div_rem(&g).0;
        let d2 = other.den.div_rem(&g).0;
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        if num.is_zero() {
            return Ok(self.spec.zero());
        }
        let h = num.gcd(&g);
        let num = num.div_rem(&h).0;
        let den = d1.mul(&other.den).div_rem(&h).0;
        Ok(Self::from_coprime(self.spec, num, den))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly_unchecked(
                self.spec,
                self.num.mul(&other.num),
            ));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(self.spec.zero());
        }
        // cancel across: n1/d2 and n2/d1
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = (self.num.div_rem(&g1).0, other.den.div_rem(&g1).0);
        let (n2, d1) = (other.num.div_rem(&g2).0, self.den.div_rem(&g2).0);
        Ok(Self::from_coprime(self.spec, n1.mul(&n2), d1.mul(&d2)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_coprime(
            self.spec,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub(crate) fn neg_ref(&self) -> Self {
        ResidueElem {
            spec: self.spec,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Multiplication by an integer scalar.
    pub fn scale(&self, n: i64) -> Self {
        let c = reduce_i64(n, self.spec.p);
        Self::from_parts(self.spec, self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u64) -> Self {
        ResidueElem {
            spec: self.spec,
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Signed power; negative exponents require a nonzero element.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn frobenius(&self) -> Self {
        ResidueElem {
            spec: self.spec,
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    /// `r` with `r^p = self`, or [`Error::NoRoot`].
    pub fn pth_root(&self) -> Result<Self> {
        match (self.num.frobenius_root(), self.den.frobenius_root()) {
            (Some(num), Some(den)) => Ok(ResidueElem {
                spec: self.spec,
                num,
                den,
            }),
            _ => Err(Error::NoRoot),
        }
    }

    /// Decides membership in the Artin-Schreier image `P(k)` by degree descent.
    ///
    /// Only polynomial representatives are accepted over `F_p(u)`.
    pub fn in_as_image(&self) -> Result<AsMembership> {
        if !self.is_polynomial() {
            return Err(Error::UnsupportedInput(format!(
                "Artin-Schreier membership of non-polynomial {self}"
            )));
        }
        let p = self.spec.p;
        let mut rest = self.num.clone();
        let mut witness = FpPoly::zero(p);
        loop {
            let deg = match rest.degree() {
                None => {
                    return Ok(AsMembership::Yes(Self::from_poly_unchecked(
                        self.spec, witness,
                    )))
                }
                // c^p - c = 0 for every constant c of F_p
                Some(0) => return Ok(AsMembership::No),
                Some(d) => d,
            };
            if deg % p as usize != 0 {
                return Ok(AsMembership::No);
            }
            let top = FpPoly::monomial(p, rest.lead(), deg / p as usize);
            rest = rest.sub(&top.frobenius().sub(&top));
            witness = witness.add(&top);
        }
    }
}

/// Accumulates `Σ a_i b_i` without reducing each product: numerators that
/// share a denominator are added as polynomials and reduced once at the end.
/// Series products mostly produce a single shared denominator per exponent.
pub(crate) struct ProductSum {
    spec: FieldSpec,
    buckets: Vec<(FpPoly, FpPoly)>,
}

impl ProductSum {
    pub(crate) fn new(spec: FieldSpec) -> Self {
        ProductSum {
            spec,
            buckets: Vec::new(),
        }
    }

    pub(crate) fn add_product(&mut self, a: &ResidueElem, b: &ResidueElem) {
        let num = a.num.mul(&b.num);
        let den = match (a.den.is_one(), b.den.is_one()) {
            (true, true) => FpPoly::constant(self.spec.p, 1),
            (true, false) => b.den.clone(),
            (false, true) => a.den.clone(),
            (false, false) => a.den.mul(&b.den),
        };
        match self.buckets.iter_mut().find(|(d, _)| *d == den) {
            Some((_, n)) => *n = n.add(&num),
            None => self.buckets.push((den, num)),
        }
    }

    pub(crate) fn finish(self) -> ResidueElem {
        let spec = self.spec;
        self.buckets
            .into_iter()
            .map(|(den, num)| ResidueElem::from_parts(spec, num, den))
            .fold(spec.zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &ResidueElem {
    type Output = ResidueElem;
    fn add(self, rhs: &ResidueElem) -> ResidueElem {
        self.checked_add(rhs).expect("residue addition")
    }
}

impl Sub for &ResidueElem {
    type Output = ResidueElem;
    fn sub(self, rhs: &ResidueElem) -> ResidueElem {
        self.checked_sub(rhs).expect("residue subtraction")
    }
}

impl Mul for &ResidueElem {
    type Output = ResidueElem;
    fn mul(self, rhs: &ResidueElem) -> ResidueElem {
        self.checked_mul(rhs).expect("residue multiplication")
    }
}

impl Neg for &ResidueElem {
    type Output = ResidueElem;
    fn neg(self) -> ResidueElem {
        self.neg_ref()
    }
}

/// Two Artin-Schreier classes spanning a 2-dimensional `F_p`-subspace of `k/P(k)`.
///
/// Returns `(u, u^e)` with `e > 1` the least exponent prime to `p`; every
/// nontrivial combination has top degree prime to `p`, so it stays outside `P(k)`.
pub fn build_disjoint_classes(spec: FieldSpec) -> Result<(ResidueElem, ResidueElem)> {
    if spec.kind == ResidueKind::PrimeField {
        return Err(Error::ResidueTooSmall(format!(
            "{spec}/P({spec}) is one-dimensional"
        )));
    }
    let p = spec.p;
    let e = (2..).find(|e| e % p != 0).unwrap();
    let a1 = spec.u()?;
    let a2 = spec.poly(FpPoly::monomial(p, 1, e as usize))?;
    Ok((a1, a2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> FieldSpec {
        FieldSpec::rational_function_field(2).unwrap()
    }

    fn poly(spec: FieldSpec, c: &[u64]) -> ResidueElem {
        spec.poly(FpPoly::from_coeffs(spec.p(), c.to_vec()))
            .unwrap()
    }

    #[test]
    fn characteristic_two() {
        let f2 = FieldSpec::prime_field(2).unwrap();
        assert!((&f2.one() + &f2.one()).is_zero());
    }

    #[test]
    fn u_squared() {
        let k = f2u();
        let u = k.u().unwrap();
        assert_eq!(&u * &u, poly(k, &[0, 0, 1]));
    }

    #[test]
    fn fraction_reduces() {
        let k = f2u();
        let q = poly(k, &[1, 0, 1]).checked_div(&poly(k, &[1, 1])).unwrap();
        assert_eq!(q, poly(k, &[1, 1]));
        assert!(q.is_polynomial());
    }

    #[test]
    fn shared_denominator_factors_cancel() {
        let k = FieldSpec::rational_function_field(3).unwrap();
        let x = poly(k, &[1, 1]); // u + 1
        let y = poly(k, &[2, 0, 1]); // u^2 + 2
        let one = k.one();
        // 1/(x y) + 2/x = (1 + 2y)/(x y), and 1/(xy) - 1/(xy) = 0
        let a = one.checked_div(&(&x * &y)).unwrap();
        let b = poly(k, &[2]).checked_div(&x).unwrap();
        let sum = &a + &b;
        let expected = (&one + &(&poly(k, &[2]) * &y))
            .checked_div(&(&x * &y))
            .unwrap();
        assert_eq!(sum, expected);
        assert!((&a - &a).is_zero());
        // (x/y) * (y/x) = 1 with cross cancellation only
        let q = x.checked_div(&y).unwrap();
        assert_eq!(&q * &q.inv().unwrap(), one);
        // y/(x^2) + (x - y)/(x^2) = 1/x
        let x2 = &x * &x;
        let s = &y.checked_div(&x2).unwrap() + &(&x - &y).checked_div(&x2).unwrap();
        assert_eq!(s, x.inv().unwrap());
    }

    #[test]
    fn product_sums_match_termwise_arithmetic() {
        let k = FieldSpec::rational_function_field(2).unwrap();
        let fr = |n: &[u64], d: &[u64]| {
            k.fraction(
                FpPoly::from_coeffs(2, n.to_vec()),
                FpPoly::from_coeffs(2, d.to_vec()),
            )
            .unwrap()
        };
        let pairs = [
            (fr(&[1, 1], &[1, 0, 1]), fr(&[0, 1], &[1, 1])),
            (fr(&[1], &[1, 1]), fr(&[1, 1, 1], &[1])),
            (fr(&[0, 0, 1], &[1, 1, 0, 1]), fr(&[1], &[1, 0, 1])),
        ];
        let mut acc = ProductSum::new(k);
        let mut naive = k.zero();
        for (a, b) in &pairs {
            acc.add_product(a, b);
            naive = &naive + &(a * b);
        }
        assert_eq!(acc.finish(), naive);
    }

    #[test]
    fn denominators_are_monic() {
        let k = FieldSpec::rational_function_field(3).unwrap();
        let q = poly(k, &[1]).checked_div(&poly(k, &[1, 2])).unwrap();
        assert_eq!(q.denominator().lead(), 1);
        assert_eq!(q.to_string(), "(2)/(u+2)");
    }

    #[test]
    fn errors() {
        let k = f2u();
        assert_eq!(k.one().checked_div(&k.zero()), Err(Error::DivisionByZero));
        let k3 = FieldSpec::rational_function_field(3).unwrap();
        assert!(matches!(
            k.one().checked_add(&k3.one()),
            Err(Error::SpecMismatch(_))
        ));
        assert!(FieldSpec::prime_field(4).is_err());
        assert!(FieldSpec::prime_field(2).unwrap().u().is_err());
    }

    #[test]
    fn pth_roots() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        for c in 0..3 {
            assert_eq!(f3.from_int(c).pth_root().unwrap(), f3.from_int(c));
        }
        let k = f2u();
        assert_eq!(poly(k, &[0, 0, 1]).pth_root().unwrap(), k.u().unwrap());
        assert_eq!(k.u().unwrap().pth_root(), Err(Error::NoRoot));
        let frac = poly(k, &[1, 0, 1])
            .checked_div(&poly(k, &[0, 0, 1]))
            .unwrap();
        assert_eq!(frac.pth_root().unwrap().frobenius(), frac);
    }

    #[test]
    fn u_has_no_square_root_brute_force() {
        // g^2 = u is impossible for g of degree <= 1, and higher degrees overshoot.
        let k = f2u();
        for c0 in 0..2 {
            for c1 in 0..2 {
                let g = poly(k, &[c0, c1]);
                assert_ne!(g.pow(2), k.u().unwrap());
            }
        }
    }

    #[test]
    fn as_image_examples() {
        let k = f2u();
        assert_eq!(k.zero().in_as_image().unwrap(), AsMembership::Yes(k.zero()));
        let a = poly(k, &[0, 1, 1]);
        match a.in_as_image().unwrap() {
            AsMembership::Yes(g) => {
                assert_eq!(g, k.u().unwrap());
                assert_eq!(&g.frobenius() - &g, a);
            }
            AsMembership::No => panic!("u^2 + u is in P(k)"),
        }
        assert_eq!(k.u().unwrap().in_as_image().unwrap(), AsMembership::No);
        let frac = k.one().checked_div(&k.u().unwrap()).unwrap();
        assert!(matches!(
            frac.in_as_image(),
            Err(Error::UnsupportedInput(_))
        ));
    }

    #[test]
    fn u_not_in_as_image_brute_force() {
        // g^2 - g = u has no solution with deg g <= 1; deg g >= 1 forces deg 2g > 1.
        let k = f2u();
        let u = k.u().unwrap();
        for c0 in 0..2 {
            for c1 in 0..2 {
                let g = poly(k, &[c0, c1]);
                assert_ne!(&g.frobenius() - &g, u);
            }
        }
    }

    #[test]
    fn disjoint_classes() {
        let (a1, a2) = build_disjoint_classes(f2u()).unwrap();
        assert_eq!(a1.to_string(), "u");
        assert_eq!(a2.to_string(), "u^3");
        let k3 = FieldSpec::rational_function_field(3).unwrap();
        let (b1, b2) = build_disjoint_classes(k3).unwrap();
        assert_eq!(
            (b1.to_string().as_str(), b2.to_string().as_str()),
            ("u", "u^2")
        );
        for c1 in 0..3 {
            for c2 in 0..3 {
                if c1 == 0 && c2 == 0 {
                    continue;
                }
                let comb = &b1.scale(c1) + &b2.scale(c2);
                assert_eq!(comb.in_as_image().unwrap(), AsMembership::No);
            }
        }
        assert!(matches!(
            build_disjoint_classes(FieldSpec::prime_field(2).unwrap()),
            Err(Error::ResidueTooSmall(_))
        ));
    }
}

//! The complete discrete valued field `K = k((t))`.
//!
//! Elements are Laurent series known modulo `t^N`. Precision propagates as
//! follows, writing `v` for the valuation of a nonzero operand and `v = N`
//! for an operand that is zero up to its precision:
//!
//! * `a ± b`: `min(Na, Nb)`
//! * `a · b`: `min(va + Nb, vb + Na)`
//! * `1 / a`: `Na - 2·va` (relative precision `Na - va` is preserved)
//! * `a^p`:   `p · Na`
//! * `a^(1/p)`: `ceil(Na / p)`
//!
//! Elements produced internally from exact data (monomials, integers) carry
//! [`EXACT`] precision, which is absorbing under the rules above.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::coeff::{FieldSpec, ProductSum, ResidueElem};
use crate::error::{Error, Result};
use crate::ring::CharPRing;

/// Default absolute precision for parsed and generated elements.
pub const DEFAULT_PRECISION: i64 = 64;

/// Precision marker for elements known exactly.
pub const EXACT: i64 = i64::MAX;

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.checked_add(b).expect("exponent overflow")
    }
}

#[derive(Clone)]
pub struct LaurentElem {
    spec: FieldSpec,
    terms: BTreeMap<i64, ResidueElem>,
    prec: i64,
}

impl LaurentElem {
    pub fn from_terms<I>(spec: FieldSpec, terms: I, prec: i64) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, ResidueElem)>,
    {
        let mut map: BTreeMap<i64, ResidueElem> = BTreeMap::new();
        for (e, c) in terms {
            if c.spec() != spec {
                return Err(Error::SpecMismatch(format!(
                    "{} coefficient in {spec}((t))",
                    c.spec()
                )));
            }
            if e >= prec {
                continue;
            }
            let slot = map.entry(e).or_insert_with(|| spec.zero());
            *slot = &*slot + &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LaurentElem {
            spec,
            terms: map,
            prec,
        })
    }

    fn from_map(spec: FieldSpec, mut terms: BTreeMap<i64, ResidueElem>, prec: i64) -> Self {
        terms.retain(|&e, c| e < prec && !c.is_zero());
        LaurentElem { spec, terms, prec }
    }

    /// `O(t^prec)`.
    pub fn zero(spec: FieldSpec, prec: i64) -> Self {
        LaurentElem {
            spec,
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn exact_zero(spec: FieldSpec) -> Self {
        Self::zero(spec, EXACT)
    }

    pub fn one(spec: FieldSpec) -> Self {
        Self::constant(spec.one())
    }

    pub fn constant(c: ResidueElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: ResidueElem, exp: i64) -> Self {
        let spec = c.spec();
        Self::from_map(spec, BTreeMap::from([(exp, c)]), EXACT)
    }

    /// The uniformizer power `t^exp`.
    pub fn t_pow(spec: FieldSpec, exp: i64) -> Self {
        Self::monomial(spec.one(), exp)
    }

    pub fn from_int(spec: FieldSpec, n: i64) -> Self {
        Self::constant(spec.from_int(n))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    /// Absolute precision, `None` when exact.
    pub fn precision(&self) -> Option<i64> {
        (self.prec != EXACT).then_some(self.prec)
    }

    pub fn raw_precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Lowers the precision to `min(self, prec)`, dropping unknown terms.
    pub fn with_precision(&self, prec: i64) -> Self {
        Self::from_map(self.spec, self.terms.clone(), self.prec.min(prec))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ResidueElem)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> ResidueElem {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    /// No known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn val(&self) -> Result<i64> {
        self.terms.keys().next().copied().ok_or_else(|| {
            Error::PrecisionExhausted(match self.precision() {
                Some(n) => format!("element is 0 + O(t^{n}); valuation undetermined"),
                None => "valuation of exact zero".into(),
            })
        })
    }

    /// The valuation if known, otherwise the precision (a lower bound).
    pub fn val_lower_bound(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    pub fn leading(&self) -> Option<(i64, &ResidueElem)> {
        self.terms.iter().next().map(|(&e, c)| (e, c))
    }

    /// Coefficients strictly above `exp`, with the same precision.
    pub fn tail_above(&self, exp: i64) -> Self {
        let terms = self
            .terms
            .range(exp + 1..)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        Self::from_map(self.spec, terms, self.prec)
    }

    /// The part of valuation `< exp`, as an element with the same precision.
    pub fn head_below(&self, exp: i64) -> Self {
        let terms = self
            .terms
            .range(..exp)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        Self::from_map(self.spec, terms, self.prec)
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
        let prec = self.prec.min(other.prec);
        let mut terms: BTreeMap<i64, ResidueElem> = self
            .terms
            .range(..prec)
            .map(|(&e, c)| (e, c.clone()))
            .collect();
        for (&e, c) in other.terms.range(..prec) {
            match terms.get_mut(&e) {
                Some(slot) => *slot = &*slot + c,
                None => {
                    terms.insert(e, c.clone());
                }
            }
        }
        Ok(Self::from_map(self.spec, terms, prec))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let va = self.val_lower_bound();
        let vb = other.val_lower_bound();
        let prec = sat_add(va, other.prec).min(sat_add(vb, self.prec));
        let mut sums: BTreeMap<i64, ProductSum> = BTreeMap::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                let e = ea.checked_add(eb).expect("exponent overflow");
                if e >= prec {
                    break;
                }
                sums.entry(e)
                    .or_insert_with(|| ProductSum::new(self.spec))
                    .add_product(ca, cb);
            }
        }
        let terms = sums.into_iter().map(|(e, s)| (e, s.finish())).collect();
        Ok(Self::from_map(self.spec, terms, prec))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse; see the module docs for the precision rule.
    pub fn inv(&self) -> Result<Self> {
        let v = self.val()?;
        let lead_inv = self.terms[&v].inv()?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::monomial(lead_inv, -v));
        }
        let relative = if self.is_exact() {
            DEFAULT_PRECISION
        } else {
            self.prec - v
        };
        let n = usize::try_from(relative).expect("positive relative precision");
        let a: Vec<ResidueElem> = (0..n).map(|k| self.coeff(v + k as i64)).collect();
        let mut b: Vec<ResidueElem> = Vec::with_capacity(n);
        b.push(lead_inv.clone());
        for k in 1..n {
            let mut acc = self.spec.zero();
            for j in 1..=k {
                if !a[j].is_zero() && !b[k - j].is_zero() {
                    acc = &acc + &(&a[j] * &b[k - j]);
                }
            }
            b.push(-&(&acc * &lead_inv));
        }
        let terms = b
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64 - v, c))
            .collect();
        Ok(Self::from_map(self.spec, terms, relative - v))
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(CharPRing::pow(self, e as u64))
        } else {
            Ok(CharPRing::pow(&self.inv()?, e.unsigned_abs()))
        }
    }

    /// Multiplies every coefficient by a residue scalar.
    pub fn scale(&self, c: &ResidueElem) -> Result<Self> {
        if c.spec() != self.spec {
            return Err(Error::SpecMismatch("residue scalar".into()));
        }
        let terms = self.terms.iter().map(|(&e, a)| (e, a * c)).collect();
        Ok(Self::from_map(self.spec, terms, self.prec))
    }

    /// Frobenius: exponents times `p`, coefficients to the `p`-th power.
    pub fn pth_power(&self) -> Self {
        let p = self.p() as i64;
        let terms = self
            .terms
            .iter()
            .map(|(&e, c)| (e.checked_mul(p).expect("exponent overflow"), c.frobenius()))
            .collect();
        let prec = if self.is_exact() {
            EXACT
        } else {
            self.prec.checked_mul(p).expect("precision overflow")
        };
        Self::from_map(self.spec, terms, prec)
    }

    /// The `p`-th root, if every exponent is divisible by `p` and every coefficient has one.
    pub fn pth_root(&self) -> Result<Self> {
        let p = self.p() as i64;
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            if e % p != 0 {
                return Err(Error::NoRoot);
            }
            terms.insert(e / p, c.pth_root()?);
        }
        let prec = if self.is_exact() {
            EXACT
        } else {
            Integer::div_ceil(&self.prec, &p)
        };
        Ok(Self::from_map(self.spec, terms, prec))
    }

    /// Repeated [`pth_root`](Self::pth_root), `r` times.
    pub fn pth_root_iter(&self, r: u32) -> Result<Self> {
        (0..r).try_fold(self.clone(), |acc, _| acc.pth_root())
    }

    /// Equality of all coefficients below the smaller precision.
    pub fn approx_eq(&self, other: &Self) -> bool {
        if self.spec != other.spec {
            return false;
        }
        let prec = self.prec.min(other.prec);
        self.terms.range(..prec).eq(other.terms.range(..prec))
    }
}

/// Valuation of an element of a degree-`n` extension, given its norm to `K`.
pub fn ext_val(n: u64, norm_value: &LaurentElem) -> Result<RationalValue> {
    if n == 0 {
        return Err(Error::UnsupportedInput(
            "extension degree must be positive".into(),
        ));
    }
    Ok(RationalValue::new(norm_value.val()?, n as i64))
}

impl PartialEq for LaurentElem {
    /// Structural equality: same spec, same known terms, same precision.
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.prec == other.prec && self.terms == other.terms
    }
}

impl Eq for LaurentElem {}

impl CharPRing for LaurentElem {
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn zero_like(&self) -> Self {
        Self::exact_zero(self.spec)
    }
    fn one_like(&self) -> Self {
        Self::one(self.spec)
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_int(self.spec, n)
    }
    fn is_zero(&self) -> bool {
        LaurentElem::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec == EXACT
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e, -c)).collect();
        Self::from_map(self.spec, terms, self.prec)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        LaurentElem::approx_eq(self, other)
    }
    fn frobenius(&self) -> Self {
        self.pth_power()
    }
}

impl Add for &LaurentElem {
    type Output = LaurentElem;
    fn add(self, rhs: &LaurentElem) -> LaurentElem {
        self.checked_add(rhs).expect("Laurent addition")
    }
}

impl Sub for &LaurentElem {
    type Output = LaurentElem;
    fn sub(self, rhs: &LaurentElem) -> LaurentElem {
        self.checked_sub(rhs).expect("Laurent subtraction")
    }
}

impl Mul for &LaurentElem {
    type Output = LaurentElem;
    fn mul(self, rhs: &LaurentElem) -> LaurentElem {
        self.checked_mul(rhs).expect("Laurent multiplication")
    }
}

impl Neg for &LaurentElem {
    type Output = LaurentElem;
    fn neg(self) -> LaurentElem {
        CharPRing::neg_ref(self)
    }
}

impl fmt::Debug for LaurentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for LaurentElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A value in `(1/n)Z`, kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalValue {
    num: i64,
    den: i64,
}

impl RationalValue {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        RationalValue {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn integer(n: i64) -> Self {
        RationalValue { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Membership in `(1/d)Z`.
    pub fn in_fraction_group(&self, d: i64) -> bool {
        d % self.den == 0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self::new(self.num * n, self.den)
    }

    pub fn div_int(&self, n: i64) -> Self {
        Self::new(self.num, self.den * n)
    }
}

impl PartialOrd for RationalValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for RationalValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

//! Truncated Witt vectors.
//!
//! The addition and negation laws are derived once per `(p, m)` from the
//! ghost components `w_n = Σ_{i≤n} p^i X_i^{p^(n-i)}` by solving
//! `w_n(S) = w_n(X) + w_n(Y)` over the integers, then reduced mod `p` and
//! evaluated in any [`CharPRing`].

mod intpoly;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use once_cell::sync::{Lazy, OnceCell};

use crate::error::{Error, Result};
use crate::ring::CharPRing;

pub use intpoly::{IntPoly, ModPoly};

/// Largest length for which universal polynomials are generated.
pub const MAX_LENGTH: usize = 4;
/// Largest prime for which universal polynomials are generated.
pub const MAX_PRIME: u64 = 5;

fn check_params(p: u64, m: usize) -> Result<()> {
    if !matches!(p, 2 | 3 | 5) {
        return Err(Error::UnsupportedInput(format!(
            "Witt polynomials need p in {{2, 3, 5}}, got {p}"
        )));
    }
    if m == 0 || m > MAX_LENGTH {
        return Err(Error::UnsupportedInput(format!(
            "Witt length must be in 1..={MAX_LENGTH}, got {m}"
        )));
    }
    Ok(())
}

fn p_pow(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// `w_n` for `n < m`, in the variables `vars[0..m]`, with `nvars` variables total.
fn ghost_in(p: u64, m: usize, nvars: usize, offset: usize) -> Vec<IntPoly> {
    (0..m)
        .map(|n| {
            (0..=n).fold(IntPoly::zero(nvars), |acc, i| {
                let term = IntPoly::var(nvars, offset + i)
                    .pow(p.pow((n - i) as u32))
                    .scale(&p_pow(p, i as u32));
                acc.add(&term)
            })
        })
        .collect()
}

/// Ghost components `w_0..w_{m-1}` in `X_0..X_{m-1}`.
pub fn ghost_polys(p: u64, m: usize) -> Result<Vec<IntPoly>> {
    check_params(p, m)?;
    Ok(ghost_in(p, m, m, 0))
}

/// Evaluates `Σ_{i≤n} p^i Q_i^{p^(n-i)}` for already-known polynomials `Q`.
pub fn ghost_of(p: u64, n: usize, q: &[IntPoly]) -> IntPoly {
    let nvars = q[0].nvars();
    (0..=n).fold(IntPoly::zero(nvars), |acc, i| {
        acc.add(&q[i].pow(p.pow((n - i) as u32)).scale(&p_pow(p, i as u32)))
    })
}

/// Solves `w_n(Q_0..Q_n) = target_n` recursively with exact divisions.
fn solve_ghost(p: u64, targets: &[IntPoly]) -> Result<Vec<IntPoly>> {
    let mut out: Vec<IntPoly> = Vec::with_capacity(targets.len());
    for (n, target) in targets.iter().enumerate() {
        let lower = (0..n).fold(IntPoly::zero(target.nvars()), |acc, i| {
            acc.add(&out[i].pow(p.pow((n - i) as u32)).scale(&p_pow(p, i as u32)))
        });
        out.push(target.sub(&lower).div_exact(&p_pow(p, n as u32))?);
    }
    Ok(out)
}

/// Integer structure polynomials for one `(p, m)`, plus their reductions mod `p`.
#[derive(Debug)]
pub struct UniversalPolys {
    pub p: u64,
    pub m: usize,
    /// `S_n(X_0..X_{m-1}, Y_0..Y_{m-1})`
    pub sum: Vec<IntPoly>,
    /// `N_n(X_0..X_{m-1})`
    pub neg: Vec<IntPoly>,
    pub sum_mod: Vec<ModPoly>,
    pub neg_mod: Vec<ModPoly>,
}

impl UniversalPolys {
    /// Uncached; prefer [`universal`].
    pub fn compute(p: u64, m: usize) -> Result<Self> {
        let gx = ghost_in(p, m, 2 * m, 0);
        let gy = ghost_in(p, m, 2 * m, m);
        let targets: Vec<IntPoly> = gx.iter().zip(&gy).map(|(a, b)| a.add(b)).collect();
        let sum = solve_ghost(p, &targets)?;
        let neg_targets: Vec<IntPoly> = ghost_in(p, m, m, 0).iter().map(IntPoly::neg).collect();
        let neg = solve_ghost(p, &neg_targets)?;
        let sum_mod = sum.iter().map(|s| s.reduce_mod(p)).collect();
        let neg_mod = neg.iter().map(|s| s.reduce_mod(p)).collect();
        Ok(UniversalPolys {
            p,
            m,
            sum,
            neg,
            sum_mod,
            neg_mod,
        })
    }
}

type Cell = Arc<OnceCell<Arc<UniversalPolys>>>;

static CACHE: Lazy<Mutex<HashMap<(u64, usize), Cell>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached universal polynomials; each key is computed at most once.
pub fn universal(p: u64, m: usize) -> Result<Arc<UniversalPolys>> {
    check_params(p, m)?;
    let cell = CACHE.lock().unwrap().entry((p, m)).or_default().clone();
    cell.get_or_try_init(|| UniversalPolys::compute(p, m).map(Arc::new))
        .cloned()
}

pub fn sum_polys(p: u64, m: usize) -> Result<Vec<IntPoly>> {
    Ok(universal(p, m)?.sum.clone())
}

pub fn neg_polys(p: u64, m: usize) -> Result<Vec<IntPoly>> {
    Ok(universal(p, m)?.neg.clone())
}

/// Names `X_0..X_{m-1}, Y_0..Y_{m-1}` for display of sum polynomials.
pub fn xy_name(m: usize) -> impl Fn(usize) -> String {
    move |i| {
        if i < m {
            format!("X{i}")
        } else {
            format!("Y{}", i - m)
        }
    }
}

/// Evaluates a reduced polynomial at ring values, caching variable powers.
pub fn eval_mod<R: CharPRing>(poly: &ModPoly, vals: &[R]) -> R {
    assert_eq!(poly.nvars(), vals.len());
    let mut powers: Vec<HashMap<u32, R>> = vec![HashMap::new(); vals.len()];
    let mut acc = vals[0].zero_like();
    'terms: for (exps, c) in poly.terms() {
        let mut term: Option<R> = None;
        for (v, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if vals[v].is_exact_zero() {
                continue 'terms;
            }
            let pw = powers[v]
                .entry(k)
                .or_insert_with(|| vals[v].pow(k as u64))
                .clone();
            term = Some(match term {
                None => pw,
                Some(t) => t.mul_ref(&pw),
            });
        }
        let coeff = vals[0].int_like(*c as i64);
        let term = match term {
            None => coeff,
            Some(t) if *c == 1 => t,
            Some(t) => t.mul_ref(&coeff),
        };
        acc = acc.add_ref(&term);
    }
    acc
}

/// A truncated Witt vector `(a_1, ..., a_m)` over a characteristic-`p` ring.
#[derive(Debug, Clone, PartialEq)]
pub struct WittVector<R> {
    comps: Vec<R>,
}

impl<R: CharPRing> WittVector<R> {
    pub fn new(comps: Vec<R>) -> Self {
        assert!(!comps.is_empty(), "Witt vectors have length >= 1");
        WittVector { comps }
    }

    pub fn zero(like: &R, m: usize) -> Self {
        Self::new(vec![like.zero_like(); m])
    }

    /// `(a, 0, ..., 0)` of length `m`.
    pub fn teichmuller_like(a: R, m: usize) -> Self {
        let mut comps = vec![a.zero_like(); m];
        comps[0] = a;
        Self::new(comps)
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn m(&self) -> usize {
        self.comps.len()
    }

    pub fn p(&self) -> u64 {
        self.comps[0].characteristic()
    }

    pub fn components(&self) -> &[R] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &R {
        &self.comps[i]
    }

    pub fn into_components(self) -> Vec<R> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(CharPRing::is_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .comps
                .iter()
                .zip(&other.comps)
                .all(|(a, b)| a.approx_eq(b))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() || self.p() != other.p() {
            return Err(Error::ShapeMismatch(format!(
                "W_{}(p={}) vs W_{}(p={})",
                self.len(),
                self.p(),
                other.len(),
                other.p()
            )));
        }
        Ok(())
    }

    pub fn witt_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let polys = universal(self.p(), self.m())?;
        let vals: Vec<R> = self.comps.iter().chain(&other.comps).cloned().collect();
        Ok(Self::new(
            polys.sum_mod.iter().map(|s| eval_mod(s, &vals)).collect(),
        ))
    }

    pub fn witt_neg(&self) -> Result<Self> {
        let polys = universal(self.p(), self.m())?;
        Ok(Self::new(
            polys
                .neg_mod
                .iter()
                .map(|s| eval_mod(s, &self.comps))
                .collect(),
        ))
    }

    pub fn witt_sub(&self, other: &Self) -> Result<Self> {
        self.witt_add(&other.witt_neg()?)
    }

    /// Componentwise `p^r`-th power (the Witt vector Frobenius, iterated).
    pub fn frobenius_twist(&self, r: u32) -> Self {
        let comps = self
            .comps
            .iter()
            .map(|c| (0..r).fold(c.clone(), |acc, _| acc.frobenius()))
            .collect();
        Self::new(comps)
    }

    /// Verschiebung: `(a_1, ..., a_k) -> (0, a_1, ..., a_k)`.
    pub fn shift_in(&self) -> Self {
        let mut comps = Vec::with_capacity(self.len() + 1);
        comps.push(self.comps[0].zero_like());
        comps.extend(self.comps.iter().cloned());
        Self::new(comps)
    }

    /// Drops a leading zero component; `None` if the first component is nonzero or `m = 1`.
    pub fn shift_out(&self) -> Option<Self> {
        (self.len() >= 2 && self.comps[0].is_zero()).then(|| Self::new(self.comps[1..].to_vec()))
    }

    pub fn map<S: CharPRing>(&self, f: impl Fn(&R) -> S) -> WittVector<S> {
        WittVector::new(self.comps.iter().map(f).collect())
    }
}

/// `(p-1)! / (i! (p-i)!)` as an exact integer.
pub fn factorial_ratio(p: u64, i: u64) -> BigInt {
    let fact = |n: u64| (1..=n).fold(BigInt::one(), |acc, k| acc * k);
    fact(p - 1) / (fact(i) * fact(p - i))
}

/// The length-2 sum `(c^p, ω_2) + (b, 0)` written out term by term:
/// `(c^p + b, ω_2 - Σ_{i=1}^{p-1} (p-1)!/(i!(p-i)!) · c^{pi} b^{p-i})`.
pub fn lemma54_closed_form<R: CharPRing>(c: &R, omega2: &R, b: &R) -> WittVector<R> {
    let p = c.characteristic();
    let cp = c.frobenius();
    let mut second = omega2.clone();
    for i in 1..p {
        let k = factorial_ratio(p, i);
        let k = (k % BigInt::from(p)).to_i64().unwrap();
        let term = cp.pow(i).mul_ref(&b.pow(p - i)).mul_ref(&c.int_like(k));
        second = second.sub_ref(&term);
    }
    WittVector::new(vec![cp.add_ref(b), second])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;
    use crate::valued::LaurentElem;

    fn show_sum(p: u64, m: usize, n: usize) -> String {
        sum_polys(p, m).unwrap()[n].display_with(xy_name(m))
    }

    #[test]
    fn ghost_examples() {
        let g = ghost_polys(2, 2).unwrap();
        assert_eq!(g[1].display_with(|i| format!("X{i}")), "X0^2 + 2*X1");
        let g = ghost_polys(3, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0], IntPoly::var(1, 0));
        let g = ghost_polys(2, 3).unwrap();
        let expected = IntPoly::var(3, 0)
            .pow(4)
            .add(&IntPoly::var(3, 1).pow(2).scale(&BigInt::from(2)))
            .add(&IntPoly::var(3, 2).scale(&BigInt::from(4)));
        assert_eq!(g[2], expected);
    }

    #[test]
    fn sum_polynomial_examples() {
        // p = 2: S_1 = X1 + Y1 - X0*Y0
        let s = sum_polys(2, 2).unwrap();
        let v = |i| IntPoly::var(4, i);
        assert_eq!(s[0], v(0).add(&v(2)));
        assert_eq!(s[1], v(1).add(&v(3)).sub(&v(0).mul(&v(2))));
        // p = 3: S_1 = X1 + Y1 - (X0^2 Y0 + X0 Y0^2)
        let s3 = sum_polys(3, 2).unwrap();
        let cross = v(0).pow(2).mul(&v(2)).add(&v(0).mul(&v(2).pow(2)));
        assert_eq!(s3[1], v(1).add(&v(3)).sub(&cross));
        assert_eq!(show_sum(2, 1, 0), "X0 + Y0");
    }

    #[test]
    fn negation_is_componentwise_for_odd_p() {
        let n = neg_polys(3, 3).unwrap();
        for (i, poly) in n.iter().enumerate() {
            assert_eq!(*poly, IntPoly::var(3, i).neg());
        }
        // p = 2 negation is not componentwise past length 1
        let n2 = neg_polys(2, 2).unwrap();
        assert_ne!(n2[1], IntPoly::var(2, 1).neg());
    }

    #[test]
    fn parameter_limits() {
        assert!(universal(7, 2).is_err());
        assert!(universal(2, 5).is_err());
        assert!(universal(2, 0).is_err());
    }

    #[test]
    fn add_identity_and_inverse() {
        let k = FieldSpec::rational_function_field(2).unwrap();
        let u = LaurentElem::constant(k.u().unwrap());
        let t = LaurentElem::t_pow(k, -1);
        let a = WittVector::new(vec![u.clone(), t.clone(), &u * &t]);
        let zero = WittVector::zero(&u, 3);
        assert_eq!(a.witt_add(&zero).unwrap(), a);
        assert!(a.witt_add(&a.witt_neg().unwrap()).unwrap().is_zero());
        let short = WittVector::new(vec![u]);
        assert!(matches!(a.witt_add(&short), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn lemma54_example_char_two() {
        let k = FieldSpec::prime_field(2).unwrap();
        let c = LaurentElem::t_pow(k, 1);
        let b = LaurentElem::t_pow(k, -1);
        let w2 = LaurentElem::t_pow(k, 3);
        let closed = lemma54_closed_form(&c, &w2, &b);
        // (t^2 + t^-1, t^3 + t^2 * t^-1)
        assert_eq!(closed.component(0), &(&LaurentElem::t_pow(k, 2) + &b));
        assert_eq!(closed.component(1), &(&w2 + &LaurentElem::t_pow(k, 1)));
        let sum = WittVector::new(vec![c.frobenius(), w2.clone()])
            .witt_add(&WittVector::new(vec![
                b.clone(),
                LaurentElem::exact_zero(k),
            ]))
            .unwrap();
        assert_eq!(sum, closed);
    }

    #[test]
    fn factorial_ratios_for_three() {
        assert_eq!(factorial_ratio(3, 1), BigInt::from(1));
        assert_eq!(factorial_ratio(3, 2), BigInt::from(1));
        assert_eq!(factorial_ratio(5, 2), BigInt::from(2));
    }

    #[test]
    fn shifts_and_twists() {
        let k = FieldSpec::rational_function_field(2).unwrap();
        let a = LaurentElem::constant(k.u().unwrap());
        let w = WittVector::new(vec![a.clone()]);
        let w2 = w.shift_in().shift_in();
        assert_eq!(w2.len(), 3);
        assert!(w2.component(0).is_zero() && w2.component(1).is_zero());
        assert_eq!(w2.component(2), &a);
        assert_eq!(w2.shift_out().unwrap().shift_out().unwrap(), w);
        let tw = WittVector::new(vec![LaurentElem::t_pow(k, -1), a.clone()]).frobenius_twist(1);
        assert_eq!(tw.component(0), &LaurentElem::t_pow(k, -2));
        assert_eq!(
            tw.component(1),
            &LaurentElem::constant(k.u().unwrap().pow(2))
        );
        let t = WittVector::new(vec![LaurentElem::t_pow(k, 1)]);
        assert_eq!(t.frobenius_twist(2).component(0), &LaurentElem::t_pow(k, 4));
        assert_eq!(t.frobenius_twist(0), t);
    }
}

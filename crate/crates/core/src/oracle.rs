//! Independent checks used to cross-examine the main algorithms.
//!
//! The degree-`p` classifier here never reduces modulo `P(K)`: it works with
//! the polynomial `X^p - X - ω1` itself, reading ramification off its Newton
//! polygon, finding residue roots by exhaustive search and translating the
//! variable when a residue polynomial is inseparable.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::coeff::{FpPoly, ResidueElem, ResidueKind};
use crate::error::{Error, Result};
use crate::extension::Classification;
use crate::valued::{LaurentElem, RationalValue};
use crate::witt::{ghost_of, ghost_polys, neg_polys, sum_polys, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NewtonVerdict {
    /// `X^p - X - ω1` has a root in `K`.
    Split,
    Unramified,
    TotallyRamified,
    Undetermined(String),
}

impl NewtonVerdict {
    /// Whether the analyzer's verdict is consistent with this one.
    ///
    /// `Unclassified` is only acceptable where the polygon method is stuck as
    /// well, and never over a perfect residue field.
    pub fn agrees_with(&self, c: Classification, perfect: bool) -> bool {
        match (self, c) {
            (NewtonVerdict::Split, Classification::Split)
            | (NewtonVerdict::Unramified, Classification::Unramified)
            | (NewtonVerdict::TotallyRamified, Classification::TotallyRamified) => true,
            (NewtonVerdict::Undetermined(_), Classification::Unclassified) => !perfect,
            _ => false,
        }
    }
}

/// Search bound on the `u`-degree of residue roots over `F_p(u)`.
const MAX_ROOT_DEGREE: usize = 8;
const MAX_SHIFTS: usize = 256;

/// `c_0 + c_1 X + ...` over `K`.
type KPoly = Vec<LaurentElem>;

fn taylor_shift(f: &KPoly, c: &LaurentElem) -> KPoly {
    let zero = LaurentElem::exact_zero(c.spec());
    let mut g: KPoly = vec![zero.clone(); f.len()];
    for fi in f.iter().rev() {
        // g <- g·(X + c) + f_i
        let mut next = vec![zero.clone(); f.len()];
        for j in 0..f.len() {
            let mut acc = &g[j] * c;
            if j > 0 {
                acc = &acc + &g[j - 1];
            }
            next[j] = acc;
        }
        next[0] = &next[0] + fi;
        g = next;
    }
    g
}

struct Segment {
    start: usize,
    end: usize,
    slope: RationalValue,
}

/// Lower convex hull of `(i, v(c_i))` over the nonzero coefficients.
fn newton_polygon(points: &[(usize, i64)]) -> Vec<Segment> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the chord a..pt
            let cross =
                (b.0 as i64 - a.0 as i64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| Segment {
            start: w[0].0,
            end: w[1].0,
            slope: RationalValue::new(w[0].1 - w[1].1, (w[1].0 - w[0].0) as i64),
        })
        .collect()
}

fn eval(r: &[ResidueElem], y: &ResidueElem) -> ResidueElem {
    r.iter()
        .rev()
        .fold(y.spec().zero(), |acc, c| &(&acc * y) + c)
}

fn derivative(r: &[ResidueElem]) -> Vec<ResidueElem> {
    r.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(i as i64))
        .collect()
}

fn degree_u(c: &ResidueElem) -> Option<usize> {
    c.numerator().degree()
}

/// Nonzero roots of `r` in the residue field, by exhaustive search.
fn residue_roots(r: &[ResidueElem]) -> std::result::Result<Vec<ResidueElem>, String> {
    let spec = r[0].spec();
    let p = spec.p();
    let top = r.len() - 1;
    if top == 1 {
        let root = -&(r[0].checked_div(&r[1]).map_err(|e| e.to_string())?);
        return Ok(if root.is_zero() { vec![] } else { vec![root] });
    }
    let candidates: Vec<ResidueElem> = match spec.kind() {
        ResidueKind::PrimeField => (1..p as i64).map(|c| spec.from_int(c)).collect(),
        ResidueKind::RationalFunctionField => {
            if r.iter().any(|c| !c.is_polynomial()) || degree_u(&r[top]) != Some(0) {
                return Err("residue polynomial is not monic over F_p[u]".into());
            }
            // a root of degree d needs (top - i)·d <= deg r_i for some i < top
            let bound = (0..top)
                .filter_map(|i| degree_u(&r[i]).map(|d| d / (top - i)))
                .max()
                .unwrap_or(0);
            if bound > MAX_ROOT_DEGREE {
                return Err(format!(
                    "root search bound {bound} exceeds {MAX_ROOT_DEGREE}"
                ));
            }
            let count = (p as usize).pow(bound as u32 + 1);
            (1..count)
                .map(|mut n| {
                    let mut digits = Vec::with_capacity(bound + 1);
                    while n > 0 {
                        digits.push((n % p as usize) as u64);
                        n /= p as usize;
                    }
                    spec.poly(FpPoly::from_coeffs(p, digits))
                        .expect("polynomial residue")
                })
                .collect()
        }
    };
    Ok(candidates
        .into_iter()
        .filter(|y| eval(r, y).is_zero())
        .collect())
}

/// Classifies `K[X]/(X^p - X - ω1)` from Newton polygons alone.
pub fn newton_classify(omega1: &LaurentElem) -> NewtonVerdict {
    match newton_classify_inner(omega1) {
        Ok(v) => v,
        Err(e) => NewtonVerdict::Undetermined(e.to_string()),
    }
}

fn newton_classify_inner(omega1: &LaurentElem) -> Result<NewtonVerdict> {
    let spec = omega1.spec();
    let p = spec.p() as usize;
    let mut f: KPoly = vec![LaurentElem::exact_zero(spec); p + 1];
    f[0] = -omega1;
    f[1] = LaurentElem::from_int(spec, -1);
    f[p] = LaurentElem::one(spec);
    let undetermined = |s: String| Ok(NewtonVerdict::Undetermined(s));
    for _ in 0..MAX_SHIFTS {
        if f[0].is_zero() {
            // X = 0 is a root, or f(0) is small enough for Hensel's lemma (f'(0) = -1)
            if f[0].is_exact() || f[0].raw_precision() > 0 {
                return Ok(NewtonVerdict::Split);
            }
            return undetermined(format!("constant coefficient {} is unknown", f[0]));
        }
        let mut points = Vec::new();
        for (i, c) in f.iter().enumerate() {
            if !c.is_zero() {
                points.push((i, c.val()?));
            }
        }
        let segments = newton_polygon(&points);
        let mut shift = None;
        for seg in &segments {
            let len = seg.end - seg.start;
            if !seg.slope.is_integer() {
                if seg.slope.denominator() as usize == p && len == p {
                    return Ok(NewtonVerdict::TotallyRamified);
                }
                return undetermined(format!("slope {} on a segment of length {len}", seg.slope));
            }
            let lam = seg.slope.numerator();
            let mu = f[seg.start].val()? + seg.start as i64 * lam;
            let r: Vec<ResidueElem> = (seg.start..=seg.end)
                .map(|i| {
                    let e = mu - i as i64 * lam;
                    if e >= f[i].raw_precision() {
                        Err(Error::PrecisionExhausted(format!(
                            "coefficient of X^{i} unknown at t^{e}"
                        )))
                    } else {
                        Ok(f[i].coeff(e))
                    }
                })
                .collect::<Result<_>>()?;
            let roots = match residue_roots(&r) {
                Ok(roots) => roots,
                Err(s) => return undetermined(s),
            };
            let dr = derivative(&r);
            if let Some(_simple) = roots.iter().find(|y| !eval(&dr, y).is_zero()) {
                return Ok(NewtonVerdict::Split);
            }
            let separable = dr.iter().skip(1).all(ResidueElem::is_zero) && !dr[0].is_zero();
            match roots.first() {
                None if len == p && separable && (p <= 3 || is_as_shape(&r)) => {
                    return Ok(NewtonVerdict::Unramified);
                }
                None => {}
                Some(y) if shift.is_none() => shift = Some(LaurentElem::monomial(y.clone(), lam)),
                Some(_) => {}
            }
        }
        match shift {
            Some(c) => f = taylor_shift(&f, &c),
            None => {
                return undetermined("inseparable residue polynomial without residue roots".into())
            }
        }
    }
    undetermined(format!("no decision after {MAX_SHIFTS} translations"))
}

/// `Y^p - Y - c`: no root in `k` means irreducible.
fn is_as_shape(r: &[ResidueElem]) -> bool {
    let p = r.len() - 1;
    r[p].is_one()
        && (&r[1] + &r[1].spec().one()).is_zero()
        && r[2..p].iter().all(ResidueElem::is_zero)
}

#[derive(Debug, Clone, Serialize)]
pub struct GhostCheck {
    pub p: u64,
    pub m: usize,
    /// `w_n(S) = w_n(X) + w_n(Y)` as polynomials, for each `n`.
    pub sum_identities: Vec<bool>,
    /// `w_n(N) = -w_n(X)`.
    pub neg_identities: Vec<bool>,
    /// Integer points at which the identities were also evaluated.
    pub samples: usize,
    pub sample_failures: usize,
}

impl GhostCheck {
    pub fn passed(&self) -> bool {
        self.sum_identities
            .iter()
            .chain(&self.neg_identities)
            .all(|&b| b)
            && self.sample_failures == 0
    }
}

fn shifted(poly: &IntPoly, nvars: usize, offset: usize) -> IntPoly {
    poly.terms().fold(IntPoly::zero(nvars), |acc, (e, c)| {
        let mono = e
            .iter()
            .enumerate()
            .fold(IntPoly::constant(nvars, c.clone()), |m, (i, &k)| {
                m.mul(&IntPoly::var(nvars, i + offset).pow(k as u64))
            });
        acc.add(&mono)
    })
}

fn eval_int(poly: &IntPoly, x: &[BigInt]) -> BigInt {
    poly.terms().fold(BigInt::zero(), |acc, (e, c)| {
        acc + e.iter().zip(x).fold(c.clone(), |m, (&k, xi)| {
            m * num_traits::pow(xi.clone(), k as usize)
        })
    })
}

fn ghost_direct(p: u64, n: usize, x: &[BigInt]) -> BigInt {
    let pb = BigInt::from(p);
    (0..=n).fold(BigInt::zero(), |acc, i| {
        acc + num_traits::pow(pb.clone(), i)
            * num_traits::pow(x[i].clone(), p.pow((n - i) as u32) as usize)
    })
}

/// Verifies the ghost identities of the universal sum and negation
/// polynomials, symbolically and at `samples` random integer points.
pub fn ghost_check<R: Rng>(p: u64, m: usize, samples: usize, rng: &mut R) -> Result<GhostCheck> {
    let s = sum_polys(p, m)?;
    let neg = neg_polys(p, m)?;
    let w = ghost_polys(p, m)?;
    let nv = 2 * m;
    let sum_identities = (0..m)
        .map(|n| ghost_of(p, n, &s) == shifted(&w[n], nv, 0).add(&shifted(&w[n], nv, m)))
        .collect();
    let neg_identities = (0..m).map(|n| ghost_of(p, n, &neg) == w[n].neg()).collect();
    let mut sample_failures = 0;
    for _ in 0..samples {
        let xy: Vec<BigInt> = (0..nv)
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        let sv: Vec<BigInt> = s.iter().map(|q| eval_int(q, &xy)).collect();
        let nvv: Vec<BigInt> = neg.iter().map(|q| eval_int(q, &xy[..m])).collect();
        for n in 0..m {
            let lhs = ghost_direct(p, n, &sv);
            let rhs = ghost_direct(p, n, &xy[..m]) + ghost_direct(p, n, &xy[m..]);
            let neg_ok = ghost_direct(p, n, &nvv) + ghost_direct(p, n, &xy[..m]) == BigInt::zero();
            if lhs != rhs || !neg_ok {
                sample_failures += 1;
            }
        }
    }
    Ok(GhostCheck {
        p,
        m,
        sum_identities,
        neg_identities,
        samples,
        sample_failures,
    })
}

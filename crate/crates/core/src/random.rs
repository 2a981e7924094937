//! Seeded generators for tests, benchmarks and the acceptance suite.

use rand::Rng;

use crate::brauer::BrauerSymbol;
use crate::coeff::{FieldSpec, FpPoly, ResidueElem, ResidueKind};
use crate::valued::{LaurentElem, EXACT};
use crate::witt::WittVector;

/// Largest `u`-degree produced for residue coefficients.
pub const MAX_U_DEGREE: usize = 6;

fn random_poly<R: Rng>(spec: FieldSpec, rng: &mut R, max_deg: usize) -> FpPoly {
    let p = spec.p();
    let deg = rng.gen_range(0..=max_deg);
    FpPoly::from_coeffs(p, (0..=deg).map(|_| rng.gen_range(0..p)).collect())
}

/// A nonzero polynomial residue; over `F_p(u)` about a third are constants.
pub fn residue<R: Rng>(spec: FieldSpec, rng: &mut R) -> ResidueElem {
    let p = spec.p();
    loop {
        let c = match spec.kind() {
            ResidueKind::PrimeField => spec.from_int(rng.gen_range(1..p) as i64),
            ResidueKind::RationalFunctionField if rng.gen_bool(1.0 / 3.0) => {
                spec.from_int(rng.gen_range(1..p) as i64)
            }
            ResidueKind::RationalFunctionField => {
                spec.poly(random_poly(spec, rng, MAX_U_DEGREE)).unwrap()
            }
        };
        if !c.is_zero() {
            return c;
        }
    }
}

/// Any residue, including zero and proper fractions over `F_p(u)`.
pub fn residue_general<R: Rng>(spec: FieldSpec, rng: &mut R) -> ResidueElem {
    match spec.kind() {
        ResidueKind::PrimeField => spec.from_int(rng.gen_range(0..spec.p()) as i64),
        ResidueKind::RationalFunctionField => {
            let num = random_poly(spec, rng, 4);
            let den = loop {
                let d = random_poly(spec, rng, 3);
                if !d.is_zero() {
                    break d;
                }
            };
            spec.fraction(num, den).unwrap()
        }
    }
}

/// An exact element with up to `terms` terms with exponents in `lo..=hi`.
pub fn laurent<R: Rng>(
    spec: FieldSpec,
    rng: &mut R,
    lo: i64,
    hi: i64,
    terms: usize,
) -> LaurentElem {
    let n = rng.gen_range(0..=terms);
    let ts: Vec<_> = (0..n)
        .map(|_| (rng.gen_range(lo..=hi), residue(spec, rng)))
        .collect();
    LaurentElem::from_terms(spec, ts, EXACT).unwrap()
}

/// A nonzero exact element whose leading exponent is exactly `v`.
pub fn laurent_with_val<R: Rng>(
    spec: FieldSpec,
    rng: &mut R,
    v: i64,
    hi: i64,
    terms: usize,
) -> LaurentElem {
    let rest = laurent(spec, rng, v + 1, hi.max(v + 1), terms);
    &LaurentElem::monomial(residue(spec, rng), v) + &rest
}

/// Random valuation in `lo..=hi` not divisible by `p`.
pub fn coprime_val<R: Rng>(p: u64, rng: &mut R, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v.rem_euclid(p as i64) != 0 {
            return v;
        }
    }
}

/// `b` with `gcd(v(b), p) = 1`.
pub fn coprime_b<R: Rng>(spec: FieldSpec, rng: &mut R, lo: i64, hi: i64) -> LaurentElem {
    let v = coprime_val(spec.p(), rng, lo, hi);
    laurent_with_val(spec, rng, v, v + 4, 2)
}

pub fn witt<R: Rng>(
    spec: FieldSpec,
    rng: &mut R,
    m: usize,
    lo: i64,
    hi: i64,
    terms: usize,
) -> WittVector<LaurentElem> {
    WittVector::new((0..m).map(|_| laurent(spec, rng, lo, hi, terms)).collect())
}

/// `η` of length `m <= 2` meeting the valuation criterion: `v(η1) < 0`,
/// `p ∤ v(η1)` and `v(η2) > v(η1)`.
pub fn ramified_witt<R: Rng>(
    spec: FieldSpec,
    rng: &mut R,
    m: usize,
    lo: i64,
) -> WittVector<LaurentElem> {
    let v1 = coprime_val(spec.p(), rng, lo, -1);
    let mut comps = vec![laurent_with_val(spec, rng, v1, 4, 3)];
    if m >= 2 {
        comps.push(laurent(spec, rng, v1 + 1, 4, 3));
    }
    WittVector::new(comps)
}

/// An element that may carry finite precision, for printer round trips.
pub fn laurent_any<R: Rng>(spec: FieldSpec, rng: &mut R) -> LaurentElem {
    let n = rng.gen_range(0..=4);
    let ts: Vec<_> = (0..n)
        .map(|_| (rng.gen_range(-8..=8), residue_general(spec, rng)))
        .collect();
    let prec = if rng.gen_bool(0.5) {
        EXACT
    } else {
        rng.gen_range(-4..=12)
    };
    LaurentElem::from_terms(spec, ts, prec).unwrap()
}

pub fn witt_any<R: Rng>(spec: FieldSpec, rng: &mut R) -> WittVector<LaurentElem> {
    let m = rng.gen_range(1..=3);
    WittVector::new((0..m).map(|_| laurent_any(spec, rng)).collect())
}

pub fn symbol_any<R: Rng>(spec: FieldSpec, rng: &mut R) -> BrauerSymbol {
    loop {
        let b = laurent_any(spec, rng);
        if !b.is_zero() {
            return BrauerSymbol::new(witt_any(spec, rng), b).unwrap();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for spec in [
            FieldSpec::prime_field(3).unwrap(),
            FieldSpec::rational_function_field(2).unwrap(),
        ] {
            for _ in 0..50 {
                let b = coprime_b(spec, &mut rng, -6, 6);
                assert_ne!(b.val().unwrap() % spec.p() as i64, 0);
                let eta = ramified_witt(spec, &mut rng, 2, -6);
                assert!(crate::extension::lemma52_holds(&eta));
                let c = residue(spec, &mut rng);
                assert!(!c.is_zero());
                if let Some(d) = c.numerator().degree() {
                    assert!(d <= MAX_U_DEGREE);
                }
            }
        }
    }
}

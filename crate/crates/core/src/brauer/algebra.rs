//! Left regular representation of a degree-`p` cyclic algebra `[ω1, b)`.
//!
//! Basis `x^i y^j` (`0 <= i, j < p`, index `i + p·j`) with `x^p = x + ω1`,
//! `y^p = b` and `y x = (x + 1) y`.

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::CharPRing;
use crate::valued::LaurentElem;

/// Matrices of left multiplication by `x` and by `y`.
pub fn cyclic_algebra_generators(
    omega1: &LaurentElem,
    b: &LaurentElem,
) -> Result<(Matrix<LaurentElem>, Matrix<LaurentElem>)> {
    if omega1.spec() != b.spec() {
        return Err(Error::SpecMismatch("algebra data".into()));
    }
    let p = b.p() as usize;
    let spec = b.spec();
    let idx = |i: usize, j: usize| i + p * j;
    let zero = LaurentElem::exact_zero(spec);
    let one = LaurentElem::one(spec);
    let mut lx = Matrix::zeros(&zero, p * p);
    let mut ly = Matrix::zeros(&zero, p * p);
    for j in 0..p {
        for i in 0..p {
            let col = idx(i, j);
            if i + 1 < p {
                lx.set(idx(i + 1, j), col, one.clone());
            } else {
                lx.set(idx(1, j), col, one.clone());
                lx.set(idx(0, j), col, omega1.clone());
            }
            // y x^i y^j = (x + 1)^i y^(j+1)
            let (jn, scale) = if j + 1 < p {
                (j + 1, one.clone())
            } else {
                (0, b.clone())
            };
            for k in 0..=i {
                let c = binomial(i as u64, k as u64) % p as u64;
                if c != 0 {
                    let entry = &LaurentElem::from_int(spec, c as i64) * &scale;
                    ly.set(idx(k, jn), col, entry);
                }
            }
        }
    }
    Ok((lx, ly))
}

/// Checks `z^p - z = (ω1 + b)·1` for `z = x + y` in the regular representation.
pub fn z_identity_holds(omega1: &LaurentElem, b: &LaurentElem) -> Result<bool> {
    let (lx, ly) = cyclic_algebra_generators(omega1, b)?;
    let n = lx.size();
    let z = lx.add(&ly);
    let lhs = z.pow(b.p()).sub(&z);
    let rhs = Matrix::scalar(&omega1.add_ref(b), n);
    Ok(lhs.approx_eq(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldSpec;

    #[test]
    fn generators_satisfy_relations() {
        for p in [2u64, 3, 5] {
            let k = FieldSpec::prime_field(p).unwrap();
            let w = &LaurentElem::t_pow(k, -1) + &LaurentElem::t_pow(k, 4);
            let b = &LaurentElem::t_pow(k, 1) + &LaurentElem::from_int(k, 1);
            let (lx, ly) = cyclic_algebra_generators(&w, &b).unwrap();
            let n = lx.size();
            assert!(lx.pow(p).approx_eq(&lx.add(&Matrix::scalar(&w, n))));
            assert!(ly.pow(p).approx_eq(&Matrix::scalar(&b, n)));
            let one = Matrix::identity(&b, n);
            assert!(ly.mul(&lx).approx_eq(&lx.add(&one).mul(&ly)));
            assert!(z_identity_holds(&w, &b).unwrap(), "p = {p}");
        }
    }
}

//! Dense univariate polynomials over a prime field `F_p`.

use std::fmt;

/// Modular inverse of a nonzero residue; `p` must be prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, p)`.
pub(crate) fn reduce_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

/// Polynomial in `u` over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn zero(p: u64) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_coeffs(p, vec![c % p])
    }

    pub fn monomial(p: u64, c: u64, deg: usize) -> Self {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c % p;
        Self::from_coeffs(p, coeffs)
    }

    pub fn from_coeffs(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        Self::from_coeffs(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        Self::from_coeffs(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let coeffs = self.coeffs.iter().map(|&a| a * c % self.p).collect();
        Self::from_coeffs(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        // Coefficients are below p < 2^31, so each product fits; reduce once
        // the accumulator could overflow.
        let p = self.p;
        let bound = u64::MAX - (p - 1) * (p - 1);
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let slot = &mut out[i + j];
                *slot += a * b;
                if *slot > bound {
                    *slot %= p;
                }
            }
        }
        out.iter_mut().for_each(|c| *c %= p);
        Self::from_coeffs(p, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        let inv_lead = inv_mod(divisor.lead(), p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * inv_lead % p;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            let nc = p - c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + nc * d) % p;
            }
        }
        (Self::from_coeffs(p, quot), Self::from_coeffs(p, rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.p, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f(u)^p = f(u^p)` since the coefficients lie in `F_p`.
    pub fn frobenius(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.p as usize;
        let mut out = vec![0u64; (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p] = c;
        }
        Self::from_coeffs(self.p, out)
    }

    /// Inverse of [`FpPoly::frobenius`]: defined iff every exponent is a multiple of `p`.
    pub fn frobenius_root(&self) -> Option<Self> {
        let p = self.p as usize;
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, &c)| c != 0 && i % p != 0)
        {
            return None;
        }
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Some(Self::from_coeffs(self.p, coeffs))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FpPoly {
    /// Highest degree first: `2*u^3+u+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (1, c) => write!(f, "{c}*u")?,
                (i, 1) => write!(f, "u^{i}")?,
                (i, c) => write!(f, "{c}*u^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_reconstructs() {
        let a = FpPoly::from_coeffs(3, vec![1, 2, 0, 1, 2]);
        let b = FpPoly::from_coeffs(3, vec![2, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_square_in_char_two() {
        // u^2 + 1 = (u + 1)^2 over F_2
        let a = FpPoly::from_coeffs(2, vec![1, 0, 1]);
        let b = FpPoly::from_coeffs(2, vec![1, 1]);
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn frobenius_matches_pow() {
        let a = FpPoly::from_coeffs(5, vec![3, 0, 4, 1]);
        assert_eq!(a.frobenius(), a.pow(5));
        assert_eq!(a.frobenius().frobenius_root(), Some(a));
    }

    #[test]
    fn display_is_descending() {
        let a = FpPoly::from_coeffs(3, vec![1, 1, 0, 2]);
        assert_eq!(a.to_string(), "2*u^3+u+1");
    }
}

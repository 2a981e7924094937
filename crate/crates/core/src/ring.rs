use std::fmt::Debug;

/// Commutative ring of characteristic `p`, as needed to evaluate Witt
/// structure polynomials and to build matrices.
///
/// Operations panic if the operands belong to different field specs; the
/// checked entry points live on the concrete types.
pub trait CharPRing: Clone + Debug {
    fn characteristic(&self) -> u64;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    /// Zero with no precision attached; such operands can be skipped without
    /// affecting the precision of a result.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// Equality up to whatever precision the operands carry.
    fn approx_eq(&self, other: &Self) -> bool;

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    fn frobenius(&self) -> Self {
        self.pow(self.characteristic())
    }
}

impl CharPRing for crate::coeff::ResidueElem {
    fn characteristic(&self) -> u64 {
        self.spec().p()
    }
    fn zero_like(&self) -> Self {
        self.spec().zero()
    }
    fn one_like(&self) -> Self {
        self.spec().one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.spec().from_int(n)
    }
    fn is_zero(&self) -> bool {
        crate::coeff::ResidueElem::is_zero(self)
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
        -self
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn pow(&self, e: u64) -> Self {
        crate::coeff::ResidueElem::pow(self, e)
    }
    fn frobenius(&self) -> Self {
        crate::coeff::ResidueElem::frobenius(self)
    }
}

//! The minimal commutative-ring interface shared by every coefficient type,
//! so that evaluation and sparse polynomials can be written once.

use std::fmt::Debug;

use crate::fields::FqElem;

pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Product with a raw scalar of the underlying coefficient field.
    fn scale(&self, c: u16) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn pow(&self, mut k: u64) -> Self {
        let mut r = self.one_like();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        r
    }
}

impl Ring for FqElem {
    fn zero_like(&self) -> Self {
        self.field.elem(0)
    }
    fn one_like(&self) -> Self {
        self.field.elem(1)
    }
    fn is_zero(&self) -> bool {
        self.raw == 0
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        self.field.elem(self.field.add(self.raw, o.raw))
    }
    fn neg(&self) -> Self {
        self.field.elem(self.field.neg(self.raw))
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert!(self.field == o.field);
        self.field.elem(self.field.mul(self.raw, o.raw))
    }
    fn scale(&self, c: u16) -> Self {
        self.field.elem(self.field.mul(self.raw, c))
    }
}

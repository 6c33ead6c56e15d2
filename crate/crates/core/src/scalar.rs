//! Exact ring scalars for elimination and series evaluation.
//!
//! Everything numeric in this crate is written against [`Ring`], so the same
//! code runs over `i64`/`i128` (fast, overflow-checked) and [`BigInt`]
//! (unbounded). Fixed-width arithmetic never wraps: every operation goes
//! through the checked helpers below and reports
//! [`Error::ArithmeticOverflow`], which callers use to retry over `BigInt`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

pub trait Ring:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Result<Self> {
        Self::from_i64(v).ok_or(Error::ArithmeticOverflow)
    }

    fn add_c(&self, o: &Self) -> Result<Self> {
        self.checked_add(o).ok_or(Error::ArithmeticOverflow)
    }

    fn sub_c(&self, o: &Self) -> Result<Self> {
        self.checked_sub(o).ok_or(Error::ArithmeticOverflow)
    }

    fn mul_c(&self, o: &Self) -> Result<Self> {
        self.checked_mul(o).ok_or(Error::ArithmeticOverflow)
    }

    /// `self - q * o`
    fn sub_mul_c(&self, q: &Self, o: &Self) -> Result<Self> {
        self.sub_c(&q.mul_c(o)?)
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn to_bigint(&self) -> BigInt {
        // every Ring implementor fits in i128 or is BigInt itself
        match self.to_i128() {
            Some(v) => BigInt::from(v),
            None => BigInt::parse_bytes(self.to_string().as_bytes(), 10)
                .expect("decimal rendering of an integer"),
        }
    }

    /// `(g, x, y)` with `x*self + y*o = g >= 0`.
    fn bezout(&self, o: &Self) -> Result<(Self, Self, Self)> {
        // extended Euclid with checked steps
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let q = r0.div_floor(&r1);
            let r2 = r0.sub_mul_c(&q, &r1)?;
            let s2 = s0.sub_mul_c(&q, &s1)?;
            let t2 = t0.sub_mul_c(&q, &t1)?;
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_negative() {
            Ok((-r0, -s0, -t0))
        } else {
            Ok((r0, s0, t0))
        }
    }
}

impl<T> Ring for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

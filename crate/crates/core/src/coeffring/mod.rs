//! Exact arithmetic in `K(s)` (with `s = y^{1/2}`) and truncated series in
//! `u = q^{1/2}` over it.

pub mod poly;
pub mod qseries;
pub mod ratfunc;

pub use poly::Poly;
pub use qseries::{Prefactor, QSeries};
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rf_arith<K: Field>(a: &RatFunc<K>, b: &RatFunc<K>, op: BinOp) -> Result<RatFunc<K>> {
    Ok(match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => a.checked_div(b)?,
    })
}

/// Series arithmetic; `Div` is not a series operation (use [`QSeries::inv`]).
pub fn qs_arith<K: Field>(a: &QSeries<K>, b: &QSeries<K>, op: BinOp) -> Result<QSeries<K>> {
    match op {
        BinOp::Add => a.checked_add(b),
        BinOp::Sub => a.checked_sub(b),
        BinOp::Mul => Ok(a.mul(b)),
        BinOp::Div => Err(Error::Domain("series division: multiply by inv()".into())),
    }
}

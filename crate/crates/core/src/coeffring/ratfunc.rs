//! The coefficient field `K(s)`, where `s = y^{1/2}`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::{Field, Real};

/// Below this magnitude a denominator value is treated as a pole.
pub const POLE_TOL: f64 = 1e-300;

/// A rational function `num/den` in canonical form: `gcd(num, den) = 1`,
/// `den` monic, and zero stored as `0/1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFunc<K> {
    /// Build and normalize. Fails when `den` is zero.
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly<K>, den: Poly<K>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Self::from_coprime(num, den)
    }

    /// Rescale so the denominator is monic; inputs must already be coprime.
    fn from_coprime(num: Poly<K>, den: Poly<K>) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = K::one() / lc;
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(K::from_int(n))
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    /// The generator `s`.
    pub fn s() -> Self {
        Self::s_pow(1)
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(K::one(), k as usize))
        } else {
            RatFunc {
                num: Poly::one(),
                den: Poly::monomial(K::one(), k.unsigned_abs() as usize),
            }
        }
    }

    /// `y^k = s^{2k}`.
    pub fn y_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    /// `c * s^k`.
    pub fn term(c: K, k: i64) -> Self {
        Self::s_pow(k).scale(&c)
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant value when the function does not depend on `s`.
    pub fn as_constant(&self) -> Option<K> {
        if self.num.is_constant() && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by the zero rational function".into()));
        }
        Ok(self * &rhs.recip_unchecked())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of the zero rational function".into()));
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Self {
        Self::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// When the function is a Laurent polynomial in `s`, return its terms as
    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, K)>> {
        if !self.den.is_monomial() {
            return None;
        }
        // Monic monomial denominator: exactly s^k.
        let shift = self.den.degree().unwrap() as i64;
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64 - shift, c.clone()))
                .collect(),
        )
    }

    pub fn from_laurent_terms(terms: &[(i64, K)]) -> Self {
        let min = terms.iter().map(|(k, _)| *k).min().unwrap_or(0).min(0);
        let width = terms.iter().map(|(k, _)| (k - min) as usize + 1).max().unwrap_or(0);
        let mut coeffs = vec![K::zero(); width];
        for (k, c) in terms {
            let idx = (k - min) as usize;
            coeffs[idx] = coeffs[idx].clone() + c.clone();
        }
        Self::normalize(Poly::new(coeffs), Poly::monomial(K::one(), (-min) as usize))
    }

    /// Substitute `s -> 1/s`.
    pub fn invert_var(&self) -> Self {
        // p(1/s) = s^{-deg p} rev(p)(s)
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let num = self.num.reversed();
        let den = self.den.reversed();
        let shift = dd - dn;
        let (num, den) = if shift >= 0 {
            (num.shift_up(shift as usize), den)
        } else {
            (num, den.shift_up((-shift) as usize))
        };
        Self::normalize(num, den)
    }

    /// Substitute `s -> -s`.
    pub fn negate_var(&self) -> Self {
        Self::from_coprime(self.num.negate_var(), self.den.negate_var())
    }

    /// Evaluate at a complex point. Fails at poles.
    pub fn eval<F: Real>(&self, s: Complex<F>) -> Result<Complex<F>> {
        let map = |c: &K| Complex::new(F::from_f64(c.to_f64()), F::zero());
        let d = self.den.eval_with(s, map);
        if d.norm().as_f64() < POLE_TOL {
            return Err(Error::Eval {
                re: d.re.as_f64(),
                im: d.im.as_f64(),
            });
        }
        Ok(self.num.eval_with(s, map) / d)
    }

    /// Exact evaluation at a field point.
    pub fn eval_exact(&self, s: &K) -> Result<K> {
        let d = self.den.eval_with(s.clone(), |c| c.clone());
        if d.is_zero() {
            return Err(Error::Eval { re: 0.0, im: 0.0 });
        }
        Ok(self.num.eval_with(s.clone(), |c| c.clone()) / d)
    }
}

impl<K: Field> Add for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn add(self, rhs: Self) -> RatFunc<K> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        // With g = gcd(b, d): gcd(a d/g + c b/g, b d/g) = gcd(numerator, g).
        let g = self.den.gcd(&rhs.den);
        let bg = self.den.div_exact(&g);
        let dg = rhs.den.div_exact(&g);
        let num = &(&self.num * &dg) + &(&rhs.num * &bg);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = &self.den * &dg;
        let h = if g.is_one() { g } else { num.gcd(&g) };
        if h.is_one() {
            RatFunc::from_coprime(num, den)
        } else {
            RatFunc::from_coprime(num.div_exact(&h), den.div_exact(&h))
        }
    }
}

impl<K: Field> Neg for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<K: Field> Sub for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn sub(self, rhs: Self) -> RatFunc<K> {
        self + &(-rhs)
    }
}

impl<K: Field> Mul for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn mul(self, rhs: Self) -> RatFunc<K> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel; the product of canonical inputs is then canonical.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.div_exact(&g1);
        let d = rhs.den.div_exact(&g1);
        let c = rhs.num.div_exact(&g2);
        let b = self.den.div_exact(&g2);
        RatFunc::from_coprime(&a * &c, &b * &d)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] for a `Result`.
impl<K: Field> Div for &RatFunc<K> {
    type Output = RatFunc<K>;
    fn div(self, rhs: Self) -> RatFunc<K> {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for RatFunc<K> {
            type Output = RatFunc<K>;
            fn $m(self, rhs: Self) -> RatFunc<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<K: Field> Neg for RatFunc<K> {
    type Output = RatFunc<K>;
    fn neg(self) -> RatFunc<K> {
        -&self
    }
}

impl<K: Field> Zero for RatFunc<K> {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl<K: Field> One for RatFunc<K> {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl<K: Field + fmt::Display> fmt::Display for RatFunc<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type R = RatFunc<BigRational>;
    type P = Poly<BigRational>;

    #[test]
    fn s_times_s() {
        assert_eq!(&R::s() * &R::s(), R::s_pow(2));
    }

    #[test]
    fn reciprocal_has_monic_denominator() {
        let one_minus_s2 = R::from_poly(P::from_ints(&[1, 0, -1]));
        let r = R::one().checked_div(&one_minus_s2).unwrap();
        assert_eq!(r.num(), &P::from_ints(&[-1]));
        assert_eq!(r.den(), &P::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn construction_cancels_common_factor() {
        let r = R::new(P::from_ints(&[-1, 0, 1]), P::from_ints(&[-1, 1])).unwrap();
        assert_eq!(r, R::from_poly(P::from_ints(&[1, 1])));
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        assert!(matches!(R::one().checked_div(&R::zero()), Err(Error::Domain(_))));
        assert!(R::new(P::one(), P::zero()).is_err());
    }

    #[test]
    fn eval_at_i_and_pole() {
        let i = Complex::new(0.0f64, 1.0);
        let v = R::s_pow(2).eval(i).unwrap();
        assert!((v - Complex::new(-1.0, 0.0)).norm() < 1e-15);

        let r = R::one().checked_div(&R::from_poly(P::from_ints(&[1, 0, -1]))).unwrap();
        assert!(matches!(r.eval(Complex::new(1.0f64, 0.0)), Err(Error::Eval { .. })));

        let w = Complex::new(0.0f64, std::f64::consts::PI * 0.3).exp();
        let v = R::from_poly(P::from_ints(&[1, 1])).eval(w).unwrap();
        assert!((v - (w + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn laurent_round_trip_and_inversion() {
        let r = R::from_laurent_terms(&[(-2, BigRational::from_int(2)), (0, BigRational::from_int(20)), (2, BigRational::from_int(2))]);
        let terms = r.laurent_terms().unwrap();
        assert_eq!(terms.iter().map(|t| t.0).collect::<Vec<_>>(), vec![-2, 0, 2]);
        assert_eq!(r.invert_var(), r);
        let odd = R::s_pow(-3);
        assert_eq!(odd.invert_var(), R::s_pow(3));
        assert!(R::one().checked_div(&R::from_poly(P::from_ints(&[1, 0, -1]))).unwrap().laurent_terms().is_none());
    }
}

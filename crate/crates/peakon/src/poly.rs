//! Dense univariate polynomials and quotients of them.
//!
//! Coefficients are stored in ascending order with no trailing zeros
//! (the zero polynomial has an empty coefficient list). Arithmetic is generic
//! over [`Scalar`] so the transfer matrix and the continued-fraction peeling
//! run identically in `f64` and in exact rationals.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_int(k as i64))
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplication by the variable (degree shift by one).
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k) - other.coeff(k))
            .collect();
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(coeffs)
    }

    /// Drops the top coefficient after a subtraction that must cancel it.
    ///
    /// In exact arithmetic the dropped coefficient is required to be zero; in
    /// floating point it must be small relative to `scale`. Returns the
    /// magnitude of what was dropped.
    pub fn force_drop_top(&mut self, scale: f64) -> f64 {
        let Some(top) = self.coeffs.pop() else {
            return 0.0;
        };
        let dropped = top.to_f64().abs();
        if T::EXACT {
            assert!(top.is_zero(), "expected exact cancellation of top coefficient");
        } else {
            debug_assert!(
                dropped <= 1e-6 * scale.max(f64::MIN_POSITIVE),
                "top coefficient {dropped:e} did not cancel against scale {scale:e}"
            );
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        dropped
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Magnitude bound `sum |c_i| |x|^i` on the evaluation; the ratio
    /// `eval_abs / |eval|` measures cancellation in Horner's scheme.
    pub fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * ax + c.to_f64().abs();
        }
        acc
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly::new(self.coeffs.iter().map(|c| c.to_f64()).collect())
    }
}

/// Quotient of two polynomials; the denominator is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn<T: Scalar> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Scalar> RatFn<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }
    }

    pub fn constant(c: T) -> Self {
        RatFn::new(Poly::constant(c), Poly::constant(T::one()))
    }

    /// Value of the function at infinity: `Some(0)` if the numerator degree is
    /// smaller, the leading-coefficient ratio if degrees match, `None` when
    /// unbounded. Never evaluates at a large argument.
    pub fn value_at_infinity(&self) -> Option<T> {
        let dn = self.num.degree();
        let dd = self.den.degree().expect("nonzero denominator");
        match dn {
            None => Some(T::zero()),
            Some(dn) if dn < dd => Some(T::zero()),
            Some(dn) if dn == dd => Some(
                self.num.leading().unwrap().clone() / self.den.leading().unwrap().clone(),
            ),
            _ => None,
        }
    }

    pub fn eval(&self, x: &T) -> T {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.num.is_zero(), "reciprocal of the zero function");
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn neg(&self) -> Self {
        RatFn::new(self.num.neg(), self.den.clone())
    }

    /// `self + c` over the common denominator.
    pub fn add_const(&self, c: &T) -> Self {
        RatFn::new(self.num.add(&self.den.scale(c)), self.den.clone())
    }

    /// `self - c` over the common denominator.
    pub fn sub_const(&self, c: &T) -> Self {
        RatFn::new(self.num.sub(&self.den.scale(c)), self.den.clone())
    }

    /// `self + m x` over the common denominator.
    pub fn add_linear(&self, m: &T) -> Self {
        RatFn::new(self.num.add(&self.den.mul_x().scale(m)), self.den.clone())
    }

    /// Equality as rational functions, by cross multiplication.
    ///
    /// Exact for exact scalars; for `f64` the comparison is also exact
    /// (bitwise on the cross products), so prefer [`RatFn::approx_eq`] there.
    pub fn cross_eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Relative coefficient-wise comparison of the cross products.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let a = self.num.mul(&other.den);
        let b = other.num.mul(&self.den);
        let scale = a.max_abs_coeff().max(b.max_abs_coeff()).max(f64::MIN_POSITIVE);
        let n = a.coeffs().len().max(b.coeffs().len());
        (0..n).all(|k| (a.coeff(k).to_f64() - b.coeff(k).to_f64()).abs() <= tol * scale)
    }

    pub fn to_f64(&self) -> RatFn<f64> {
        RatFn::new(self.num.to_f64(), self.den.to_f64())
    }
}

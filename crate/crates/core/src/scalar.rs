//! Scalars for the two computation modes.
//!
//! Exact mode uses arbitrary-precision rationals, float mode uses binary64
//! (and `Complex64` where a computation has to leave the reals). Every
//! geometric routine in the crate is generic over [`Scalar`], so a single
//! computation can never mix the two modes: the compiler rejects it.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rational number used by exact mode.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Relative threshold below which a float coefficient is treated as absent
/// when choosing the sign of a canonical representative.
const SIGN_PIVOT_REL: f64 = 1e-9;

/// Field element usable by every routine in the crate.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Absolute value as a double (modulus for complex scalars).
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// Exact zero test in exact mode; `|x| <= tol * scale` in float mode.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Best representative of a double in this scalar type. Exact mode uses
    /// a continued-fraction approximation with bounded denominator, so the
    /// caller must verify any identity it relies on.
    fn approximate(x: f64) -> Self;

    /// As [`Scalar::approximate`]; real scalars drop the imaginary part.
    fn approximate_complex(z: Complex64) -> Self {
        Self::approximate(z.re)
    }

    /// Projective normalization of a point/line: the last nonzero coordinate
    /// becomes 1 (exact) or the largest-magnitude coordinate becomes 1 (float).
    fn normalize_projective(v: &mut [Self]);

    /// Normalization of a form's coefficient vector: primitive integers with the
    /// first nonzero entry positive (exact), or unit Euclidean norm with the
    /// first significant entry real positive (float).
    fn normalize_form(v: &mut [Self]);

    fn pow_u32(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

fn divide_all<S: Scalar>(v: &mut [S], d: &S) {
    for x in v.iter_mut() {
        *x = x.clone() / d.clone();
    }
}

fn max_magnitude_index<S: Scalar>(v: &[S]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in v.iter().enumerate() {
        let m = x.magnitude();
        if m > 0.0 && best.is_none_or(|(_, b)| m > b) {
            best = Some((i, m));
        }
    }
    best.map(|(i, _)| i)
}

fn sign_pivot<S: Scalar>(v: &[S]) -> Option<usize> {
    let max = v.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    if max == 0.0 {
        return None;
    }
    v.iter().position(|x| x.magnitude() > SIGN_PIVOT_REL * max)
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn approximate(x: f64) -> Self {
        rational_approximation(x, 1_000_000_000)
    }

    fn normalize_projective(v: &mut [Self]) {
        if let Some(i) = v.iter().rposition(|x| !x.is_zero()) {
            let d = v[i].clone();
            divide_all(v, &d);
        }
    }

    fn normalize_form(v: &mut [Self]) {
        let Some(first) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let den = v
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let nums: Vec<BigInt> = v
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        let mut g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        if nums[first].is_negative() {
            g = -g;
        }
        for (x, n) in v.iter_mut().zip(nums) {
            *x = Rational::from_integer(n / &g);
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale
    }

    fn approximate(x: f64) -> Self {
        x
    }

    fn normalize_projective(v: &mut [Self]) {
        if let Some(i) = max_magnitude_index(v) {
            let d = v[i];
            divide_all(v, &d);
        }
    }

    fn normalize_form(v: &mut [Self]) {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let Some(p) = sign_pivot(v) else { return };
        let d = norm.copysign(v[p]);
        divide_all(v, &d);
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.norm() <= tol * scale
    }

    fn approximate(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn approximate_complex(z: Complex64) -> Self {
        z
    }

    fn normalize_projective(v: &mut [Self]) {
        if let Some(i) = max_magnitude_index(v) {
            let d = v[i];
            divide_all(v, &d);
        }
    }

    fn normalize_form(v: &mut [Self]) {
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let Some(p) = sign_pivot(v) else { return };
        let phase = v[p] / v[p].norm();
        let d = phase * norm;
        divide_all(v, &d);
    }
}

/// Continued-fraction approximation of `x` with denominator at most `max_den`.
pub fn rational_approximation(x: f64, max_den: i64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1.is_zero() {
        return Rational::from_integer(BigInt::from(x.round() as i64));
    }
    Rational::new(h1, k1)
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().ok()?,
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Rational::new(frac_part, scale);
        if negative {
            value = -value;
        }
        return Some(Rational::from_integer(int_part) + value);
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion of an exact value into float mode.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

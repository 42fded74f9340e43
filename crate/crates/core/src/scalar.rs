//! Two-mode numbers: exact rationals and tolerance-compared floats.
//!
//! Exact values are kept as reduced `i128` pairs. Every operation is checked;
//! when a result does not fit the 128-bit representation it is carried as an
//! arbitrary-precision rational instead, and folded back to the compact form
//! as soon as it fits again. Nothing ever wraps.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::NumericError;

/// Comparison tolerances for float mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { rel: 1e-9, abs: 1e-12 };

    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        let diff = (a - b).abs();
        diff <= self.abs || diff <= self.rel * a.abs().max(b.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumericMode {
    Exact,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
        })
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// Reduced, `den > 0`, `num != i128::MIN`.
    Small { num: i128, den: i128 },
    /// Reduced and strictly outside the range of `Small`.
    Big(BigRational),
}

/// An exact rational number.
#[derive(Clone, Debug)]
pub struct Ratio(Repr);

fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Ratio {
    pub const ZERO: Ratio = Ratio(Repr::Small { num: 0, den: 1 });
    pub const ONE: Ratio = Ratio(Repr::Small { num: 1, den: 1 });

    pub fn new(num: i128, den: i128) -> Result<Ratio, NumericError> {
        if den == 0 {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::small_or_big(num, den))
    }

    pub fn from_integer(n: i128) -> Ratio {
        Self::small_or_big(n, 1)
    }

    /// `num / 2^exp`.
    pub fn dyadic(num: i128, exp: u32) -> Ratio {
        if exp < 126 {
            Self::small_or_big(num, 1i128 << exp)
        } else {
            let den = BigInt::one() << (exp as usize);
            Self::from_big(BigRational::new(BigInt::from(num), den))
        }
    }

    fn small_or_big(num: i128, den: i128) -> Ratio {
        if num == i128::MIN || den == i128::MIN {
            return Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
        let g = gcd(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            match (n.checked_neg(), d.checked_neg()) {
                (Some(nn), Some(dd)) => {
                    n = nn;
                    d = dd;
                }
                _ => {
                    return Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)));
                }
            }
        }
        if n == i128::MIN {
            return Self::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)));
        }
        Ratio(Repr::Small { num: n, den: d })
    }

    fn from_big(r: BigRational) -> Ratio {
        // BigRational::new has already reduced and made the denominator positive.
        match (r.numer().to_i128(), r.denom().to_i128()) {
            (Some(n), Some(d)) if n != i128::MIN => Ratio(Repr::Small { num: n, den: d }),
            _ => Ratio(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Repr::Big(r) => r.clone(),
        }
    }

    /// True when the value is held in the compact 128-bit form.
    pub fn is_compact(&self) -> bool {
        matches!(self.0, Repr::Small { .. })
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small { num, .. } => BigInt::from(*num),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small { num: 0, .. })
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small { num, .. } => num.signum() as i32,
            Repr::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            let g = gcd(*b, *d);
            let lhs = a.checked_mul(d / g);
            let rhs = c.checked_mul(b / g);
            let den = (b / g).checked_mul(*d);
            if let (Some(l), Some(r), Some(den)) = (lhs, rhs, den) {
                if let Some(num) = l.checked_add(r) {
                    return Self::small_or_big(num, den);
                }
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn neg(&self) -> Ratio {
        match &self.0 {
            Repr::Small { num, den } => Self::small_or_big(-num, *den),
            Repr::Big(r) => Self::from_big(-r.clone()),
        }
    }

    pub fn sub(&self, other: &Ratio) -> Ratio {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ratio) -> Ratio {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            let g1 = gcd(*a, *d).max(1);
            let g2 = gcd(*c, *b).max(1);
            let num = (a / g1).checked_mul(c / g2);
            let den = (b / g2).checked_mul(d / g1);
            if let (Some(num), Some(den)) = (num, den) {
                return Self::small_or_big(num, den);
            }
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    pub fn recip(&self) -> Result<Ratio, NumericError> {
        match &self.0 {
            Repr::Small { num: 0, .. } => Err(NumericError::DivisionByZero),
            Repr::Small { num, den } => Ok(Self::small_or_big(*den, *num)),
            Repr::Big(r) => Ok(Self::from_big(r.recip())),
        }
    }

    pub fn div(&self, other: &Ratio) -> Result<Ratio, NumericError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, exp: u32) -> Ratio {
        let mut acc = Ratio::ONE;
        let mut base = self.clone();
        let mut e = exp;
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

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small { num, den } => *num as f64 / *den as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Result<Ratio, NumericError> {
        BigRational::from_float(x)
            .map(Self::from_big)
            .ok_or(NumericError::NonFinite)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) = (&self.0, &other.0) {
            if b == d {
                return a.cmp(c);
            }
            if let (Some(l), Some(r)) = (a.checked_mul(*d), c.checked_mul(*b)) {
                return l.cmp(&r);
            }
        }
        self.to_big().cmp(&other.to_big())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('+').unwrap_or(s);
    if digits.is_empty() {
        return None;
    }
    let (neg, body) = match digits.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, digits),
    };
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v = BigInt::parse_bytes(body.as_bytes(), 10)?;
    Some(if neg { -v } else { v })
}

impl FromStr for Ratio {
    type Err = NumericError;

    /// Accepts `n`, `n/d`, and decimals with an optional exponent
    /// (`0.25`, `-1.5e-3`). Decimals convert exactly.
    fn from_str(s: &str) -> Result<Ratio, NumericError> {
        let bad = || NumericError::Parse(String::from(s));
        if let Some((n, d)) = s.split_once('/') {
            let n = parse_bigint(n).ok_or_else(bad)?;
            let d = parse_bigint(d).ok_or_else(bad)?;
            if d.is_zero() {
                return Err(NumericError::DivisionByZero);
            }
            return Ok(Self::from_big(BigRational::new(n, d)));
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => {
                let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
                (&s[..pos], e)
            }
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let sign_only = matches!(int_part, "" | "-" | "+");
        if sign_only && frac_part.is_empty() {
            return Err(bad());
        }
        let mut joined = String::from(if sign_only { int_part } else { "" });
        if sign_only {
            joined.push('0');
        } else {
            joined.push_str(int_part);
        }
        joined.push_str(frac_part);
        let digits = parse_bigint(&joined).ok_or_else(bad)?;
        let scale = exponent - frac_part.len() as i32;
        if scale.unsigned_abs() > 4096 {
            return Err(bad());
        }
        let ten = BigInt::from(10);
        let value = if scale >= 0 {
            BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(Self::from_big(value))
    }
}

/// A distance, coefficient, or bound: exact rational or finite float.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Ratio),
    Float(f64),
}

impl Scalar {
    pub fn zero(mode: NumericMode) -> Scalar {
        match mode {
            NumericMode::Exact => Scalar::Exact(Ratio::ZERO),
            NumericMode::Float => Scalar::Float(0.0),
        }
    }

    pub fn one(mode: NumericMode) -> Scalar {
        Scalar::from_int(1, mode)
    }

    pub fn from_int(n: i64, mode: NumericMode) -> Scalar {
        match mode {
            NumericMode::Exact => Scalar::Exact(Ratio::from_integer(n as i128)),
            NumericMode::Float => Scalar::Float(n as f64),
        }
    }

    pub fn ratio(num: i128, den: i128) -> Result<Scalar, NumericError> {
        Ratio::new(num, den).map(Scalar::Exact)
    }

    pub fn float(x: f64) -> Result<Scalar, NumericError> {
        if x.is_finite() {
            Ok(Scalar::Float(x))
        } else {
            Err(NumericError::NonFinite)
        }
    }

    /// Parses a number for the given mode. In exact mode decimals are taken
    /// at their exact value.
    pub fn parse(s: &str, mode: NumericMode) -> Result<Scalar, NumericError> {
        let r: Ratio = s.parse()?;
        match mode {
            NumericMode::Exact => Ok(Scalar::Exact(r)),
            NumericMode::Float => {
                // Plain decimals go through the float parser so the nearest
                // double is chosen; fractions are divided.
                if s.contains('/') {
                    Scalar::float(r.to_f64())
                } else {
                    s.parse::<f64>()
                        .map_err(|_| NumericError::Parse(String::from(s)))
                        .and_then(Scalar::float)
                }
            }
        }
    }

    pub fn mode(&self) -> NumericMode {
        match self {
            Scalar::Exact(_) => NumericMode::Exact,
            Scalar::Float(_) => NumericMode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_ratio(&self) -> Option<&Ratio> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Converts to `mode`; exact to float rounds, float to exact is exact.
    pub fn to_mode(&self, mode: NumericMode) -> Result<Scalar, NumericError> {
        match (self, mode) {
            (Scalar::Exact(_), NumericMode::Exact) | (Scalar::Float(_), NumericMode::Float) => Ok(self.clone()),
            (Scalar::Exact(r), NumericMode::Float) => Scalar::float(r.to_f64()),
            (Scalar::Float(x), NumericMode::Exact) => Ratio::from_f64(*x).map(Scalar::Exact),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Exact(r) => r.signum(),
            Scalar::Float(x) if *x > 0.0 => 1,
            Scalar::Float(x) if *x < 0.0 => -1,
            Scalar::Float(_) => 0,
        }
    }

    fn float_op(x: f64) -> Result<Scalar, NumericError> {
        if x.is_finite() {
            Ok(Scalar::Float(x))
        } else {
            Err(NumericError::NonFinite)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, NumericError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.add(b))),
            _ => Self::float_op(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar, NumericError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.sub(b))),
            _ => Self::float_op(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, NumericError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.mul(b))),
            _ => Self::float_op(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.div(b).map(Scalar::Exact),
            _ => Self::float_op(self.to_f64() / other.to_f64()),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Scalar, NumericError> {
        match self {
            Scalar::Exact(r) => Ok(Scalar::Exact(r.pow(exp))),
            Scalar::Float(x) => {
                let mut acc = 1.0f64;
                for _ in 0..exp {
                    acc *= x;
                    if acc == 0.0 {
                        break;
                    }
                }
                Self::float_op(acc)
            }
        }
    }

    /// Sum of a non-empty slice of scalars.
    pub fn sum<'a, I>(items: I) -> Result<Scalar, NumericError>
    where
        I: IntoIterator<Item = &'a Scalar>,
    {
        let mut it = items.into_iter();
        let first = it.next().ok_or(NumericError::Empty)?.clone();
        it.try_fold(first, |acc, x| acc.add(x))
    }

    /// Tolerant three-way comparison. Exact pairs compare exactly; anything
    /// involving a float compares as equal when within `tol`.
    pub fn compare(&self, other: &Scalar, tol: &Tolerance) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if tol.approx_eq(a, b) {
                    Ordering::Equal
                } else {
                    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
                }
            }
        }
    }

    pub fn le(&self, other: &Scalar, tol: &Tolerance) -> bool {
        self.compare(other, tol) != Ordering::Greater
    }

    pub fn lt(&self, other: &Scalar, tol: &Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Less
    }

    pub fn approx_eq(&self, other: &Scalar, tol: &Tolerance) -> bool {
        self.compare(other, tol) == Ordering::Equal
    }

    /// Strict improvement test for running maxima: exact values must be
    /// larger, floats must exceed `best` by more than `tol.abs`.
    pub fn exceeds_for_max(&self, best: &Scalar, tol: &Tolerance) -> bool {
        match (self, best) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a > b,
            _ => self.to_f64() > best.to_f64() + tol.abs,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => r.fmt(f),
            // `{}` on f64 is the shortest representation that round-trips.
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

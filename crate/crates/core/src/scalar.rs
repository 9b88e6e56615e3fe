//! Arithmetic backends shared by every kernel computation.
//!
//! Exact mode uses arbitrary-precision rationals so that identities can be
//! checked as identities; float mode uses `f64` for sweeps. A kernel carries
//! its mode in its type parameter and values are never coerced between modes.

use std::fmt::{self, Debug};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{self, ComponentPlan};

/// Exact rational scalar.
pub type Q = BigRational;

/// Absolute slack tolerance for float-mode inequality checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
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

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::parse(format!("unknown arithmetic mode `{other}`"))),
        }
    }
}

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    const MODE: Mode;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    /// Sum over all maps of one pattern component into the atoms of a kernel.
    fn component_sum(plan: &ComponentPlan, weights: &[Self], values: &[Self]) -> Self;

    /// `a <= b`, exactly or within [`FLOAT_TOLERANCE`].
    fn approx_le(a: &Self, b: &Self) -> bool;

    fn approx_eq(a: &Self, b: &Self) -> bool {
        Self::approx_le(a, b) && Self::approx_le(b, a)
    }

    /// `lhs <= base^(num/den)` for nonnegative `lhs` and `base`.
    fn le_root(lhs: &Self, base: &Self, num: u32, den: u32) -> bool;

    /// Uniform-ish sample from `[-1, 1]`.
    fn sample_signed<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform-ish sample from `(0, 1]`, used for atom weights.
    fn sample_positive<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn parse_value(text: &str) -> Result<Self>;

    fn render(&self) -> String;

    fn powi(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn component_sum(plan: &ComponentPlan, weights: &[Self], values: &[Self]) -> Self {
        kernels::enumerate_component(plan, weights, values)
    }

    fn approx_le(a: &Self, b: &Self) -> bool {
        *a <= *b + FLOAT_TOLERANCE
    }

    fn le_root(lhs: &Self, base: &Self, num: u32, den: u32) -> bool {
        *lhs <= base.powf(num as f64 / den as f64) + FLOAT_TOLERANCE
    }

    fn sample_signed<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }

    fn sample_positive<R: Rng + ?Sized>(rng: &mut R) -> Self {
        1.0 - rng.gen::<f64>()
    }

    fn parse_value(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.contains('/') {
            return Ok(Scalar::to_f64(&Q::parse_value(text)?));
        }
        text.parse::<f64>()
            .map_err(|_| Error::parse(format!("invalid number `{text}`")))
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

/// Denominator used when sampling exact-mode random values.
const EXACT_SAMPLE_DEN: i64 = 16;

impl Scalar for Q {
    const MODE: Mode = Mode::Exact;

    fn from_ratio(num: i64, den: i64) -> Self {
        Q::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn component_sum(plan: &ComponentPlan, weights: &[Self], values: &[Self]) -> Self {
        kernels::exact_component_sum(plan, weights, values)
    }

    fn approx_le(a: &Self, b: &Self) -> bool {
        a <= b
    }

    fn le_root(lhs: &Self, base: &Self, num: u32, den: u32) -> bool {
        lhs.powi(den) <= base.powi(num)
    }

    fn sample_signed<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Q::from_ratio(
            rng.gen_range(-EXACT_SAMPLE_DEN..=EXACT_SAMPLE_DEN),
            EXACT_SAMPLE_DEN,
        )
    }

    fn sample_positive<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Q::from_ratio(rng.gen_range(1..=EXACT_SAMPLE_DEN), EXACT_SAMPLE_DEN)
    }

    fn parse_value(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Converts a big rational to the nearest-ish `f64`, staying finite for
/// huge numerators and denominators.
pub fn ratio_to_f64(q: &Q) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Shift both sides down to 64 significant bits.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

/// Parses `p/q`, an integer, or a decimal literal (with optional exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let text = text.trim();
    let bad = || Error::parse(format!("invalid rational `{text}`"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse(format!("zero denominator in `{text}`")));
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (
            &text[..i],
            text[i + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if matches!(digits.as_str(), "" | "-" | "+") {
        return Err(bad());
    }
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Q::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

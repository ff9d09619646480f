//! Scalar fields used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`], which has two implementations:
//! [`GaussianRational`] (exact arithmetic over `Q(i)`) and [`Complex64`]
//! (double-precision complex floats). Exact mode never consults tolerances;
//! float mode compares against a [`ToleranceConfig`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("cannot take a root of zero")]
    ZeroRadicand,
    #[error("the {m}-th root (branch {branch}) of {value} is not a Gaussian rational")]
    ExactRootNotRepresentable { value: String, m: u32, branch: u32 },
    #[error("branch {branch} is out of range for m = {m}")]
    BranchOutOfRange { m: u32, branch: u32 },
    #[error("invalid scalar literal: {0}")]
    Parse(String),
}

/// Thresholds used by float mode. Exact mode ignores them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    /// Absolute threshold below which a float scalar counts as zero.
    pub zero_threshold: f64,
    /// Relative threshold (times the largest row norm) for rank decisions.
    pub rank_rel_threshold: f64,
    /// Relative agreement required between the two generic-condition routes.
    pub route_rel_threshold: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            zero_threshold: 1e-10,
            rank_rel_threshold: 1e-8,
            route_rel_threshold: 1e-9,
        }
    }
}

impl ToleranceConfig {
    /// Float mode needs strictly positive finite thresholds.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("zero_threshold", self.zero_threshold),
            ("rank_rel_threshold", self.rank_rel_threshold),
            ("route_rel_threshold", self.route_rel_threshold),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("{name} must be strictly positive, got {value}"));
            }
        }
        Ok(())
    }
}

/// A field of complex numbers, either exact or floating point.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(value: i64) -> Self;
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn conj(&self) -> Self;
    /// Bitwise / structural zero test.
    fn is_exact_zero(&self) -> bool;
    /// Modulus as a double (approximate in exact mode).
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    /// Conversion from a float; `None` for exact scalars.
    fn from_c64(value: Complex64) -> Option<Self>;
    /// `exp(2 pi i k / m)` when it is representable in this field.
    fn root_of_unity(m: u32, k: u32) -> Option<Self>;
    /// Branch `branch` of the `m`-th root. The radicand is known to be nonzero.
    fn root_branch(&self, m: u32, branch: u32) -> Result<Self, ScalarError>;
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self, ScalarError>;

    fn is_negligible(&self, tol: &ToleranceConfig) -> bool {
        if Self::EXACT {
            self.is_exact_zero()
        } else {
            self.magnitude() <= tol.zero_threshold
        }
    }

    /// Equality: exact in exact mode, relative to `rel` (with an absolute
    /// floor of `rel`) in float mode.
    fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            let diff = (self.clone() - other.clone()).magnitude();
            diff <= rel * self.magnitude().max(other.magnitude()).max(1.0)
        }
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        result
    }
}

/// `m`-th root of `z`, branch `branch` in `0..m`.
///
/// Branch 0 is the principal root, whose argument lies in `(-pi/m, pi/m]`;
/// branch `k` is the principal root times `exp(2 pi i k / m)`.
pub fn mth_root<S: Scalar>(
    z: &S,
    m: u32,
    branch: u32,
    tol: &ToleranceConfig,
) -> Result<S, ScalarError> {
    if m == 0 || branch >= m {
        return Err(ScalarError::BranchOutOfRange { m, branch });
    }
    if z.is_negligible(tol) {
        return Err(ScalarError::ZeroRadicand);
    }
    z.root_branch(m, branch)
}

fn principal_root_c64(z: Complex64, m: u32, branch: u32) -> Complex64 {
    let mut arg = z.im.atan2(z.re);
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    let radius = z.norm().powf(1.0 / m as f64);
    let theta = (arg + 2.0 * std::f64::consts::PI * branch as f64) / m as f64;
    Complex64::from_polar(radius, theta)
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Complex64::new(numer as f64 / denom as f64, 0.0)
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(value: Complex64) -> Option<Self> {
        Some(value)
    }
    fn root_of_unity(m: u32, k: u32) -> Option<Self> {
        let theta = 2.0 * std::f64::consts::PI * (k % m) as f64 / m as f64;
        Some(Complex64::from_polar(1.0, theta))
    }
    fn root_branch(&self, m: u32, branch: u32) -> Result<Self, ScalarError> {
        Ok(principal_root_c64(*self, m, branch))
    }
    fn to_json(&self) -> Value {
        if self.im == 0.0 {
            float_json(self.re)
        } else {
            serde_json::json!({ "re": float_json(self.re), "im": float_json(self.im) })
        }
    }
    fn from_json(value: &Value) -> Result<Self, ScalarError> {
        match value {
            Value::Object(map) => {
                check_complex_keys(map)?;
                let re = map.get("re").map(float_part).transpose()?.unwrap_or(0.0);
                let im = map.get("im").map(float_part).transpose()?.unwrap_or(0.0);
                Ok(Complex64::new(re, im))
            }
            other => Ok(Complex64::new(float_part(other)?, 0.0)),
        }
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

fn check_complex_keys(map: &serde_json::Map<String, Value>) -> Result<(), ScalarError> {
    match map.keys().find(|k| *k != "re" && *k != "im") {
        Some(key) => Err(ScalarError::Parse(format!(
            "unexpected key `{key}` in complex literal"
        ))),
        None => Ok(()),
    }
}

fn float_part(value: &Value) -> Result<f64, ScalarError> {
    match value {
        Value::Number(n) => n.as_f64().ok_or_else(|| ScalarError::Parse(n.to_string())),
        Value::String(s) => {
            let q = parse_rational(s)?;
            q.to_f64()
                .ok_or_else(|| ScalarError::Parse(format!("{s} does not fit in a double")))
        }
        other => Err(ScalarError::Parse(other.to_string())),
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<BigRational, ScalarError> {
    let trimmed = text.trim();
    let parsed = match trimmed.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| ScalarError::Parse(text.into()))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| ScalarError::Parse(text.into()))?;
            if q.is_zero() {
                return Err(ScalarError::Parse(format!("{text}: zero denominator")));
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(
            BigInt::from_str(trimmed).map_err(|_| ScalarError::Parse(text.into()))?,
        ),
    };
    Ok(parsed)
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact complex rational `re + i im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn common_denominator(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

impl FromStr for GaussianRational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Self::real)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}-{}i",
                format_rational(&self.re),
                format_rational(&-&self.im)
            )
        } else {
            write!(
                f,
                "{}+{}i",
                format_rational(&self.re),
                format_rational(&self.im)
            )
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_exact_zero(), "division by zero Gaussian rational");
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let denom = rhs.norm_sqr();
        let num = self * rhs.conj();
        Self::new(num.re / &denom, num.im / &denom)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// Gaussian integer `(a, b)` meaning `a + b i`.
type GaussInt = (BigInt, BigInt);

fn gauss_mul(x: &GaussInt, y: &GaussInt) -> GaussInt {
    (&x.0 * &y.0 - &x.1 * &y.1, &x.0 * &y.1 + &x.1 * &y.0)
}

fn gauss_pow(x: &GaussInt, e: u32) -> GaussInt {
    let mut acc: GaussInt = (BigInt::one(), BigInt::zero());
    for _ in 0..e {
        acc = gauss_mul(&acc, x);
    }
    acc
}

/// Rounds `p / q` (Gaussian rationals given by Gaussian integer numerator and
/// positive integer denominator) to the nearest Gaussian integer.
fn round_div(value: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let n = value.numer() * &two + value.denom();
    let d = value.denom() * &two;
    n.div_floor(&d)
}

/// Searches for a Gaussian integer `g` with `g^m = target`, starting near
/// `guess`. Polishes with exact Newton steps, then probes the neighbours.
fn gauss_integer_root(target: &GaussInt, m: u32, guess: GaussInt) -> Option<GaussInt> {
    let mut g = guess;
    for _ in 0..64 {
        if gauss_pow(&g, m) == *target {
            return Some(g);
        }
        let gm1 = gauss_pow(&g, m - 1);
        if gm1.0.is_zero() && gm1.1.is_zero() {
            break;
        }
        // g - (g^m - target) / (m g^(m-1))
        let gm = gauss_mul(&gm1, &g);
        let resid = (&gm.0 - &target.0, &gm.1 - &target.1);
        let denom = GaussianRational::new(
            BigRational::from_integer(&gm1.0 * BigInt::from(m)),
            BigRational::from_integer(&gm1.1 * BigInt::from(m)),
        );
        let step = GaussianRational::new(
            BigRational::from_integer(resid.0),
            BigRational::from_integer(resid.1),
        ) / denom;
        let next = (&g.0 - round_div(&step.re), &g.1 - round_div(&step.im));
        if next == g {
            break;
        }
        g = next;
    }
    for da in -1..=1 {
        for db in -1..=1 {
            let cand = (&g.0 + BigInt::from(da), &g.1 + BigInt::from(db));
            if gauss_pow(&cand, m) == *target {
                return Some(cand);
            }
        }
    }
    None
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn from_i64(value: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(value)))
    }
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_c64(_value: Complex64) -> Option<Self> {
        None
    }
    fn root_of_unity(m: u32, k: u32) -> Option<Self> {
        let k = k % m;
        if !(4 * k).is_multiple_of(m) {
            return None;
        }
        Some(match (4 * k) / m {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        })
    }
    fn root_branch(&self, m: u32, branch: u32) -> Result<Self, ScalarError> {
        if m == 1 {
            return Ok(self.clone());
        }
        let not_representable = || ScalarError::ExactRootNotRepresentable {
            value: self.to_string(),
            m,
            branch,
        };
        let target_root = principal_root_c64(self.to_c64(), m, branch);
        if !(target_root.re.is_finite() && target_root.im.is_finite()) {
            return Err(not_representable());
        }
        // r = g / d with g a Gaussian integer and g^m = z d^m.
        let d = self.common_denominator();
        let d_pow = BigRational::from_integer(num_traits::pow(d.clone(), m as usize));
        let scaled = (self.re.clone() * &d_pow, self.im.clone() * &d_pow);
        debug_assert!(scaled.0.is_integer() && scaled.1.is_integer());
        let target = (scaled.0.to_integer(), scaled.1.to_integer());
        let d_f = d.to_f64().unwrap_or(f64::INFINITY);
        let guess = (
            BigInt::from_f64((target_root.re * d_f).round()),
            BigInt::from_f64((target_root.im * d_f).round()),
        );
        let (Some(gr), Some(gi)) = guess else {
            return Err(not_representable());
        };
        let g = gauss_integer_root(&target, m, (gr, gi)).ok_or_else(not_representable)?;
        let denom = BigRational::from_integer(d);
        let root = Self::new(
            BigRational::from_integer(g.0) / &denom,
            BigRational::from_integer(g.1) / &denom,
        );
        // The search may land on a different root than the requested branch.
        let dist = (root.to_c64() - target_root).norm();
        if dist > 1e-6 * target_root.norm() {
            return Err(not_representable());
        }
        Ok(root)
    }
    fn to_json(&self) -> Value {
        if self.im.is_zero() {
            Value::String(format_rational(&self.re))
        } else {
            serde_json::json!({
                "re": format_rational(&self.re),
                "im": format_rational(&self.im),
            })
        }
    }
    fn from_json(value: &Value) -> Result<Self, ScalarError> {
        match value {
            Value::Object(map) => {
                check_complex_keys(map)?;
                let re = map
                    .get("re")
                    .map(exact_part)
                    .transpose()?
                    .unwrap_or_default();
                let im = map
                    .get("im")
                    .map(exact_part)
                    .transpose()?
                    .unwrap_or_default();
                Ok(Self::new(re, im))
            }
            other => exact_part(other).map(Self::real),
        }
    }
}

fn exact_part(value: &Value) -> Result<BigRational, ScalarError> {
    match value {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        Value::Number(n) => Err(ScalarError::Parse(format!(
            "float literal {n} in exact mode; write it as a rational string"
        ))),
        other => Err(ScalarError::Parse(other.to_string())),
    }
}

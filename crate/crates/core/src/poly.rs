//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! A single indeterminate is used throughout the crate. It is printed as `q`
//! by default; the determinant of `D(T) + xJ` reuses the same type with the
//! indeterminate standing for `x`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("`{dividend}` is not divisible by `{divisor}` over the integers")]
    NotDivisible { dividend: String, divisor: String },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Degree of a polynomial. The zero polynomial has degree minus infinity,
/// which orders below every finite degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

/// Polynomial in canonical form: `coeffs[i]` is the coefficient of the
/// i-th power and the last stored coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Poly::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::from_coeffs(vec![c.into()])
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Poly { coeffs }
    }

    /// Builds a polynomial from little-endian coefficients, trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`; zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::MinusInfinity,
            len => Degree::Finite(len - 1),
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Horner evaluation at an integer point.
    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Value of the formal derivative at 1, i.e. `sum_i i * c_i`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .sum()
    }

    /// Exact quotient `self / divisor` in `Z[q]`.
    ///
    /// Fails if the divisor is zero or does not divide `self`; inside the
    /// determinant code either case indicates a bug rather than bad input.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let lead = divisor.leading_coeff().ok_or(PolyError::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let not_divisible = || PolyError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Err(not_divisible());
        }
        // constant divisor: divide coefficient-wise
        if dlen == 1 {
            let mut out = Vec::with_capacity(self.coeffs.len());
            for c in &self.coeffs {
                let (quo, rem) = c.div_rem(lead);
                if !rem.is_zero() {
                    return Err(not_divisible());
                }
                out.push(quo);
            }
            return Ok(Poly::from_coeffs(out));
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(not_divisible());
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(not_divisible());
        }
        Ok(Poly::from_coeffs(quot))
    }

    /// Renders the polynomial with a custom variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            match i {
                0 => out.push_str(&abs.to_string()),
                _ => {
                    if !abs.is_one() {
                        out.push_str(&abs.to_string());
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push('^');
                        out.push_str(&i.to_string());
                    }
                }
            }
        }
        out
    }

    fn add_coeffs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> Poly {
        let len = a.len().max(b.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            out.push(if negate_b { x - y } else { x + y });
        }
        Poly::from_coeffs(out)
    }
}

/// The q-bracket `[alpha] = 1 + q + ... + q^(alpha-1)`, with `[0] = 0`.
pub fn qbracket(alpha: u64) -> Poly {
    Poly {
        coeffs: vec![BigInt::one(); alpha as usize],
    }
}

/// The monomial `q^alpha`.
pub fn qpower(alpha: u64) -> Poly {
    Poly::monomial(1, alpha as usize)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("q"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = PolyError;

    /// Parses the textual form produced by `Display`. Any single variable
    /// name is accepted; repeated powers are summed.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && !current.ends_with('^') {
                if idx > 0 {
                    if current.is_empty() {
                        return Err(fail("dangling sign"));
                    }
                    terms.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(fail("dangling sign"));
        }
        terms.push((negative, current));

        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut var_name: Option<String> = None;
        for (negative, term) in terms {
            let (coeff_part, var_part) = match term.find(|c: char| c.is_alphabetic()) {
                Some(pos) => (&term[..pos], Some(&term[pos..])),
                None => (term.as_str(), None),
            };
            let coeff_text = coeff_part.strip_suffix('*').unwrap_or(coeff_part);
            let mut coeff = if coeff_text.is_empty() {
                if var_part.is_none() {
                    return Err(fail("empty term"));
                }
                BigInt::one()
            } else {
                coeff_text
                    .parse::<BigInt>()
                    .map_err(|_| fail("bad coefficient"))?
            };
            if var_part.is_some() && !coeff_part.is_empty() && !coeff_part.ends_with('*') {
                return Err(fail("missing '*' between coefficient and variable"));
            }
            let degree = match var_part {
                None => 0,
                Some(v) => {
                    let (name, exp) = match v.split_once('^') {
                        Some((name, exp)) => (
                            name,
                            exp.parse::<usize>().map_err(|_| fail("bad exponent"))?,
                        ),
                        None => (v, 1),
                    };
                    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric()) {
                        return Err(fail("bad variable name"));
                    }
                    match &var_name {
                        Some(seen) if seen != name => return Err(fail("mixed variables")),
                        Some(_) => {}
                        None => var_name = Some(name.to_string()),
                    }
                    exp
                }
            };
            if negative {
                coeff = -coeff;
            }
            if coeffs.len() <= degree {
                coeffs.resize(degree + 1, BigInt::zero());
            }
            coeffs[degree] += coeff;
        }
        Ok(Poly::from_coeffs(coeffs))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CoeffVisitor;

        impl<'de> Visitor<'de> for CoeffVisitor {
            type Value = Poly;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of decimal coefficient strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Poly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(text) = seq.next_element::<String>()? {
                    let c = text
                        .parse::<BigInt>()
                        .map_err(|_| de::Error::custom(format!("bad coefficient {text:?}")))?;
                    coeffs.push(c);
                }
                Ok(Poly::from_coeffs(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffVisitor)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        Poly::add_coeffs(&self.coeffs, &rhs.coeffs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        Poly::add_coeffs(&self.coeffs, &rhs.coeffs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $imp<Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |acc, p| acc * p)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(c)
    }
}

//! Sparse Laurent polynomial arithmetic in the bracket variable `A`.
//!
//! Coefficients are either exact rationals (diagram-level computations) or
//! `f64` (sphere averages). The mode is fixed per polynomial and propagates
//! through arithmetic; mixing exact with real promotes to real. Results are
//! kept in canonical sparse form: no stored term has a zero coefficient, and
//! real-mode arithmetic drops coefficients below `REAL_PRUNE_EPS`.
//!
//! The variable `t` of the Jones polynomial enters only as an output
//! presentation, via the substitution A = t^(-1/4): an `A`-exponent `k`
//! becomes the `t`-exponent `-k/4`, a quarter-integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Coefficients smaller than this in absolute value are dropped after
/// real-mode arithmetic.
pub const REAL_PRUNE_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// A state weight d^k with k < 0 was requested: the caller must combine
    /// exponents (circ - 1 + cyc) before asking for the power.
    #[error("invalid state weight: d^{0} with negative exponent")]
    InvalidStateWeight(i64),
}

/// Term storage for the two coefficient modes.
#[derive(Debug, Clone, PartialEq)]
enum Terms {
    Exact(BTreeMap<i64, BigRational>),
    Real(BTreeMap<i64, f64>),
}

/// A sparse Laurent polynomial in `A` with integer exponents.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    terms: Terms,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LaurentPoly {
    /// The zero polynomial in exact mode.
    pub fn zero() -> Self {
        LaurentPoly {
            terms: Terms::Exact(BTreeMap::new()),
        }
    }

    /// The zero polynomial in real mode.
    pub fn zero_real() -> Self {
        LaurentPoly {
            terms: Terms::Real(BTreeMap::new()),
        }
    }

    /// The constant 1 (exact).
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * A^exp` with integer coefficient (exact mode).
    pub fn monomial(exp: i64, coef: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coef != 0 {
            terms.insert(exp, big(coef));
        }
        LaurentPoly {
            terms: Terms::Exact(terms),
        }
    }

    /// `c * A^exp` with rational coefficient (exact mode).
    pub fn monomial_rat(exp: i64, coef: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        LaurentPoly {
            terms: Terms::Exact(terms),
        }
    }

    /// `c * A^exp` with real coefficient (real mode).
    pub fn monomial_real(exp: i64, coef: f64) -> Self {
        let mut terms = BTreeMap::new();
        if coef.abs() >= REAL_PRUNE_EPS {
            terms.insert(exp, coef);
        }
        LaurentPoly {
            terms: Terms::Real(terms),
        }
    }

    /// Build an exact polynomial from `(exponent, integer coefficient)` pairs.
    pub fn from_terms(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in pairs {
            p += &Self::monomial(e, c);
        }
        p
    }

    /// d = -A^2 - A^-2, the loop value of the bracket.
    pub fn d() -> Self {
        Self::from_terms(&[(2, -1), (-2, -1)])
    }

    /// d^k for k >= 0. A negative exponent is a malformed state weight:
    /// callers must have combined circ - 1 + cyc >= 0 already.
    pub fn d_power(k: i64) -> Result<Self, PolyError> {
        if k < 0 {
            return Err(PolyError::InvalidStateWeight(k));
        }
        let mut acc = Self::one();
        let d = Self::d();
        for _ in 0..k {
            acc = &acc * &d;
        }
        Ok(acc)
    }

    /// (-A^3)^(-w) * p: the writhe normalization of the bracket.
    pub fn writhe_normalize(&self, w: i64) -> Self {
        // (-A^3)^(-w) = (-1)^w A^(-3w)
        let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
        self * &Self::monomial(-3 * w, sign)
    }

    /// Image under A -> A^-1 (negate every exponent).
    pub fn mirror(&self) -> Self {
        match &self.terms {
            Terms::Exact(m) => LaurentPoly {
                terms: Terms::Exact(m.iter().map(|(e, c)| (-e, c.clone())).collect()),
            },
            Terms::Real(m) => LaurentPoly {
                terms: Terms::Real(m.iter().map(|(e, c)| (-e, *c)).collect()),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.terms {
            Terms::Exact(m) => m.is_empty(),
            Terms::Real(m) => m.is_empty(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.terms, Terms::Exact(_))
    }

    pub fn term_count(&self) -> usize {
        match &self.terms {
            Terms::Exact(m) => m.len(),
            Terms::Real(m) => m.len(),
        }
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<i64> {
        match &self.terms {
            Terms::Exact(m) => m.keys().copied().collect(),
            Terms::Real(m) => m.keys().copied().collect(),
        }
    }

    /// Coefficient of A^exp as f64 (0.0 if absent).
    pub fn coeff_f64(&self, exp: i64) -> f64 {
        match &self.terms {
            Terms::Exact(m) => m.get(&exp).map(|c| rat_to_f64(c)).unwrap_or(0.0),
            Terms::Real(m) => m.get(&exp).copied().unwrap_or(0.0),
        }
    }

    /// Coefficient of A^exp as an exact rational, if this is an exact poly.
    pub fn coeff_exact(&self, exp: i64) -> Option<BigRational> {
        match &self.terms {
            Terms::Exact(m) => Some(m.get(&exp).cloned().unwrap_or_else(BigRational::zero)),
            Terms::Real(_) => None,
        }
    }

    /// Convert to real mode (identity on real polynomials).
    pub fn to_real(&self) -> Self {
        match &self.terms {
            Terms::Exact(m) => {
                let mut out = BTreeMap::new();
                for (e, c) in m {
                    let v = rat_to_f64(c);
                    if v.abs() >= REAL_PRUNE_EPS {
                        out.insert(*e, v);
                    }
                }
                LaurentPoly {
                    terms: Terms::Real(out),
                }
            }
            Terms::Real(_) => self.clone(),
        }
    }

    /// Multiply every coefficient by an exact rational.
    pub fn scale_rat(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return if self.is_exact() {
                Self::zero()
            } else {
                Self::zero_real()
            };
        }
        match &self.terms {
            Terms::Exact(m) => LaurentPoly {
                terms: Terms::Exact(m.iter().map(|(e, c)| (*e, c * s)).collect()),
            },
            Terms::Real(m) => {
                let sf = rat_to_f64(s);
                let mut out = BTreeMap::new();
                for (e, c) in m {
                    let v = c * sf;
                    if v.abs() >= REAL_PRUNE_EPS {
                        out.insert(*e, v);
                    }
                }
                LaurentPoly {
                    terms: Terms::Real(out),
                }
            }
        }
    }

    /// Per-coefficient comparison with a tolerance; exponents present in only
    /// one polynomial are compared against zero.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let mut exps = self.exponents();
        exps.extend(other.exponents());
        exps.sort_unstable();
        exps.dedup();
        exps.into_iter()
            .all(|e| (self.coeff_f64(e) - other.coeff_f64(e)).abs() <= tol)
    }

    /// Substitute A = t^(-1/4): A-exponent k becomes t-exponent -k/4.
    pub fn to_t(&self) -> TPoly {
        let terms = match &self.terms {
            Terms::Exact(m) => Terms::Exact(m.iter().map(|(e, c)| (-e, c.clone())).collect()),
            Terms::Real(m) => Terms::Real(m.iter().map(|(e, c)| (-e, *c)).collect()),
        };
        TPoly { quarters: terms }
    }

    /// JSON form per the polynomial schema, variable "A".
    pub fn to_json(&self) -> serde_json::Value {
        terms_to_json(&self.terms, "A", |e| exp_string(e, 1))
    }

    fn promote_pair(p: &LaurentPoly, q: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        match (&p.terms, &q.terms) {
            (Terms::Exact(_), Terms::Real(_)) => (p.to_real(), q.clone()),
            (Terms::Real(_), Terms::Exact(_)) => (p.clone(), q.to_real()),
            _ => (p.clone(), q.clone()),
        }
    }
}

pub(crate) fn rat_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Out-of-range rationals do not arise from bracket-sized inputs.
        if c.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        match (&self.terms, &other.terms) {
            (Terms::Exact(a), Terms::Exact(b)) => a == b,
            (Terms::Real(a), Terms::Real(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for LaurentPoly {}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (p, q) = LaurentPoly::promote_pair(self, rhs);
        match (p.terms, q.terms) {
            (Terms::Exact(mut a), Terms::Exact(b)) => {
                for (e, c) in b {
                    let v = a.remove(&e).unwrap_or_else(BigRational::zero) + c;
                    if !v.is_zero() {
                        a.insert(e, v);
                    }
                }
                LaurentPoly {
                    terms: Terms::Exact(a),
                }
            }
            (Terms::Real(mut a), Terms::Real(b)) => {
                for (e, c) in b {
                    let v = a.remove(&e).unwrap_or(0.0) + c;
                    if v.abs() >= REAL_PRUNE_EPS {
                        a.insert(e, v);
                    }
                }
                LaurentPoly {
                    terms: Terms::Real(a),
                }
            }
            _ => unreachable!("modes were promoted"),
        }
    }
}

impl std::ops::AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        match &self.terms {
            Terms::Exact(m) => LaurentPoly {
                terms: Terms::Exact(m.iter().map(|(e, c)| (*e, -c.clone())).collect()),
            },
            Terms::Real(m) => LaurentPoly {
                terms: Terms::Real(m.iter().map(|(e, c)| (*e, -c)).collect()),
            },
        }
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (p, q) = LaurentPoly::promote_pair(self, rhs);
        match (p.terms, q.terms) {
            (Terms::Exact(a), Terms::Exact(b)) => {
                let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
                for (ea, ca) in &a {
                    for (eb, cb) in &b {
                        let e = ea + eb;
                        let v = out.remove(&e).unwrap_or_else(BigRational::zero) + ca * cb;
                        if !v.is_zero() {
                            out.insert(e, v);
                        }
                    }
                }
                LaurentPoly {
                    terms: Terms::Exact(out),
                }
            }
            (Terms::Real(a), Terms::Real(b)) => {
                let mut out: BTreeMap<i64, f64> = BTreeMap::new();
                for (ea, ca) in &a {
                    for (eb, cb) in &b {
                        *out.entry(ea + eb).or_insert(0.0) += ca * cb;
                    }
                }
                out.retain(|_, v| v.abs() >= REAL_PRUNE_EPS);
                LaurentPoly {
                    terms: Terms::Real(out),
                }
            }
            _ => unreachable!("modes were promoted"),
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Bracket-style rendering, descending powers of A: "-A^10 - A^2",
    /// "A^4 + 2 + A^-4".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        match &self.terms {
            Terms::Exact(m) => {
                for (e, c) in m.iter().rev() {
                    write_exact_term(f, *e, c, &mut first, 1)?;
                }
            }
            Terms::Real(m) => {
                for (e, c) in m.iter().rev() {
                    write_real_term(f, *e, *c, &mut first, 2, 1)?;
                }
            }
        }
        Ok(())
    }
}

/// A polynomial in `t` with quarter-integer exponents, stored by exponent
/// numerator over 4. Identity is keyed on the numerator; display reduces.
#[derive(Debug, Clone, PartialEq)]
pub struct TPoly {
    /// key = numerator of the t-exponent over denominator 4
    quarters: Terms,
}

impl TPoly {
    /// Inverse of `LaurentPoly::to_t` (t-exponent -k/4 back to A-exponent k).
    pub fn to_a(&self) -> LaurentPoly {
        let terms = match &self.quarters {
            Terms::Exact(m) => Terms::Exact(m.iter().map(|(q, c)| (-q, c.clone())).collect()),
            Terms::Real(m) => Terms::Real(m.iter().map(|(q, c)| (-q, *c)).collect()),
        };
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        match &self.quarters {
            Terms::Exact(m) => m.is_empty(),
            Terms::Real(m) => m.is_empty(),
        }
    }

    /// Exponent numerators (over 4) with nonzero coefficient, ascending.
    pub fn quarter_exponents(&self) -> Vec<i64> {
        match &self.quarters {
            Terms::Exact(m) => m.keys().copied().collect(),
            Terms::Real(m) => m.keys().copied().collect(),
        }
    }

    /// Coefficient of t^(q/4) as f64.
    pub fn coeff_f64(&self, quarter_numerator: i64) -> f64 {
        match &self.quarters {
            Terms::Exact(m) => m
                .get(&quarter_numerator)
                .map(|c| rat_to_f64(c))
                .unwrap_or(0.0),
            Terms::Real(m) => m.get(&quarter_numerator).copied().unwrap_or(0.0),
        }
    }

    /// Paper-style rendering with ascending powers of t and a configurable
    /// number of decimal places for real coefficients.
    pub fn pretty(&self, decimals: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        match &self.quarters {
            Terms::Exact(m) => {
                for (q, c) in m.iter() {
                    let _ = write_exact_term(&mut out, *q, c, &mut first, 4);
                }
            }
            Terms::Real(m) => {
                for (q, c) in m.iter() {
                    let _ = write_real_term(&mut out, *q, *c, &mut first, decimals, 4);
                }
            }
        }
        out
    }

    /// JSON form per the polynomial schema, variable "t".
    pub fn to_json(&self) -> serde_json::Value {
        terms_to_json(&self.quarters, "t", |q| exp_string(q, 4))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty(2))
    }
}

/// Reduced exponent string: numer/denom with denom in {1, 4}.
fn exp_string(numer: i64, denom: i64) -> String {
    let g = gcd(numer.unsigned_abs(), denom.unsigned_abs()).max(1);
    let n = numer / g as i64;
    let d = denom / g as i64;
    if d == 1 {
        format!("{n}")
    } else {
        format!("{n}/{d}")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Variable^exponent rendering: "" for exponent 0, "t" for 1, "t^-3",
/// "t^(-3/2)" for fractional after reduction.
fn var_pow(var: &str, numer: i64, denom: i64) -> String {
    let g = gcd(numer.unsigned_abs(), denom.unsigned_abs()).max(1);
    let n = numer / g as i64;
    let d = denom / g as i64;
    if n == 0 {
        String::new()
    } else if d == 1 && n == 1 {
        var.to_string()
    } else if d == 1 {
        format!("{var}^{n}")
    } else {
        format!("{var}^({n}/{d})")
    }
}

fn write_exact_term(
    f: &mut impl fmt::Write,
    exp: i64,
    c: &BigRational,
    first: &mut bool,
    denom: i64,
) -> fmt::Result {
    let var = if denom == 4 { "t" } else { "A" };
    let neg = c.is_negative();
    let mag = c.abs();
    if *first {
        if neg {
            write!(f, "-")?;
        }
        *first = false;
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let pow = var_pow(var, exp, denom);
    if pow.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{pow}")
    } else {
        write!(f, "{mag} {pow}")
    }
}

fn write_real_term(
    f: &mut impl fmt::Write,
    exp: i64,
    c: f64,
    first: &mut bool,
    decimals: usize,
    denom: i64,
) -> fmt::Result {
    let var = if denom == 4 { "t" } else { "A" };
    let neg = c < 0.0;
    let mag = c.abs();
    if *first {
        if neg {
            write!(f, "-")?;
        }
        *first = false;
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let pow = var_pow(var, exp, denom);
    if pow.is_empty() {
        write!(f, "{mag:.decimals$}")
    } else {
        write!(f, "{mag:.decimals$} {pow}")
    }
}

fn terms_to_json(
    terms: &Terms,
    variable: &str,
    exp_repr: impl Fn(i64) -> String,
) -> serde_json::Value {
    use serde_json::{json, Value};
    let list: Vec<Value> = match terms {
        Terms::Exact(m) => m
            .iter()
            .map(|(e, c)| {
                let coef = if c.denom().is_one() {
                    Value::String(c.numer().to_string())
                } else {
                    Value::String(format!("{}/{}", c.numer(), c.denom()))
                };
                json!({"exp": exp_repr(*e), "coef": coef})
            })
            .collect(),
        Terms::Real(m) => m
            .iter()
            .map(|(e, c)| json!({"exp": exp_repr(*e), "coef": c}))
            .collect(),
    };
    json!({"variable": variable, "terms": list})
}

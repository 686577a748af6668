//! Exact scalars: ℚ and the cyclotomic fields ℚ(ζ_q).
//!
//! A cyclotomic element is a residue modulo the q-th cyclotomic polynomial
//! Φ_q, stored as a coefficient vector of length φ(q). The order q is part of
//! the value, so elements are self-describing. Rationals promote into ℚ(ζ_q)
//! implicitly; two different cyclotomic orders never mix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::error::Error;

pub type Complex = num_complex::Complex64;

/// Field descriptor attached to arrangements and carried through JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rational,
    Cyclotomic { order: u32 },
}

impl FieldDesc {
    pub fn is_rational(&self) -> bool {
        matches!(self, FieldDesc::Rational)
    }
}

impl Serialize for FieldDesc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            FieldDesc::Rational => m.serialize_entry("type", "rational")?,
            FieldDesc::Cyclotomic { order } => {
                m.serialize_entry("type", "cyclotomic")?;
                m.serialize_entry("order", order)?;
            }
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for FieldDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v.get("type").and_then(|t| t.as_str()) {
            Some("rational") => Ok(FieldDesc::Rational),
            Some("cyclotomic") => {
                let order = v
                    .get("order")
                    .and_then(|o| o.as_u64())
                    .ok_or_else(|| D::Error::custom("cyclotomic field needs an order"))?;
                Ok(FieldDesc::Cyclotomic { order: order as u32 })
            }
            _ => Err(D::Error::custom("unknown field type")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Rat(BigRational),
    /// Residue mod Φ_q; coeffs has length exactly φ(q).
    Cyc { order: u32, coeffs: Vec<BigRational> },
}

/// An exact scalar over ℚ or ℚ(ζ_q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    repr: Repr,
}

fn phi(q: u32) -> usize {
    let mut n = q;
    let mut result = q;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Monic coefficients of Φ_q, constant term first.
fn cyclotomic_poly(q: u32) -> &'static Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&q) {
        return p;
    }
    // Φ_q = (x^q − 1) / ∏_{d|q, d<q} Φ_d, by exact division in ℤ[x].
    // The lock is not held across the recursion.
    let mut num = vec![BigInt::zero(); q as usize + 1];
    num[0] = BigInt::from(-1);
    num[q as usize] = BigInt::one();
    for d in 1..q {
        if q.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = poly_exact_div(&num, div);
        }
    }
    let leaked: &'static Vec<BigInt> = Box::leak(Box::new(num));
    cache.lock().unwrap().entry(q).or_insert(leaked)
}

fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        if !c.is_zero() {
            for j in 0..=dd {
                rem[k + j] -= &c * &den[j];
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

fn rat_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical form: a cyclotomic residue that happens to be rational demotes
/// to the rational representation, so equal values always compare equal.
fn make_cyc(order: u32, coeffs: Vec<BigRational>) -> FieldElement {
    if coeffs[1..].iter().all(|c| c.is_zero()) {
        FieldElement { repr: Repr::Rat(coeffs.into_iter().next().unwrap()) }
    } else {
        FieldElement { repr: Repr::Cyc { order, coeffs } }
    }
}

impl FieldElement {
    pub fn from_rational(r: BigRational) -> Self {
        FieldElement { repr: Repr::Rat(r) }
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::from_rational(rat_i64(n, d))
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(n, 1)
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// The primitive q-th root of unity ζ_q. For q ≤ 2 the value is rational.
    pub fn zeta(q: u32) -> Result<Self, Error> {
        if q == 0 {
            return Err(Error::BadParams("root of unity order must be positive".into()));
        }
        match q {
            1 => Ok(Self::one()),
            2 => Ok(Self::integer(-1)),
            _ => {
                let deg = phi(q);
                let mut coeffs = vec![BigRational::zero(); deg];
                if deg > 1 {
                    coeffs[1] = BigRational::one();
                    Ok(FieldElement { repr: Repr::Cyc { order: q, coeffs } })
                } else {
                    // φ(q) = 1 only for q ≤ 2, handled above.
                    unreachable!()
                }
            }
        }
    }

    pub fn cyclotomic(order: u32, coeffs: Vec<BigRational>) -> Result<Self, Error> {
        if order < 3 {
            return Err(Error::BadParams("cyclotomic order must be ≥ 3".into()));
        }
        if coeffs.len() != phi(order) {
            return Err(Error::BadParams(format!(
                "cyclotomic coefficient vector must have φ({}) = {} entries",
                order,
                phi(order)
            )));
        }
        Ok(make_cyc(order, coeffs))
    }

    pub fn field(&self) -> FieldDesc {
        match &self.repr {
            Repr::Rat(_) => FieldDesc::Rational,
            Repr::Cyc { order, .. } => FieldDesc::Cyclotomic { order: *order },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Cyc { coeffs, .. } => coeffs.iter().all(|c| c.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Cyc { coeffs, .. } => {
                coeffs[0].is_one() && coeffs[1..].iter().all(|c| c.is_zero())
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            Repr::Cyc { .. } => None,
        }
    }

    fn promote(&self, order: u32) -> Vec<BigRational> {
        match &self.repr {
            Repr::Rat(r) => {
                let mut coeffs = vec![BigRational::zero(); phi(order)];
                coeffs[0] = r.clone();
                coeffs
            }
            Repr::Cyc { order: q, coeffs } => {
                assert_eq!(*q, order);
                coeffs.clone()
            }
        }
    }

    /// Common field of two operands, or FieldMismatch for two distinct
    /// cyclotomic orders.
    fn join_order(&self, other: &Self) -> Result<Option<u32>, Error> {
        match (&self.repr, &other.repr) {
            (Repr::Rat(_), Repr::Rat(_)) => Ok(None),
            (Repr::Cyc { order, .. }, Repr::Rat(_)) => Ok(Some(*order)),
            (Repr::Rat(_), Repr::Cyc { order, .. }) => Ok(Some(*order)),
            (Repr::Cyc { order: a, .. }, Repr::Cyc { order: b, .. }) => {
                if a == b {
                    Ok(Some(*a))
                } else {
                    Err(Error::FieldMismatch(format!(
                        "cannot mix ℚ(ζ_{}) and ℚ(ζ_{})",
                        a, b
                    )))
                }
            }
        }
    }

    fn reduce_mod_phi(order: u32, mut raw: Vec<BigRational>) -> Vec<BigRational> {
        let modulus = cyclotomic_poly(order);
        let deg = modulus.len() - 1;
        while raw.len() > deg {
            let top = raw.pop().unwrap();
            if !top.is_zero() {
                let k = raw.len() - deg;
                for j in 0..deg {
                    let m = BigRational::from(modulus[j].clone());
                    raw[k + j] -= &top * m;
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        raw
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        match self.join_order(other)? {
            None => Ok(Self::from_rational(
                self.as_rational().unwrap() + other.as_rational().unwrap(),
            )),
            Some(q) => {
                let a = self.promote(q);
                let b = other.promote(q);
                let coeffs = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                Ok(make_cyc(q, coeffs))
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Rat(r) => Self::from_rational(-r),
            Repr::Cyc { order, coeffs } => FieldElement {
                repr: Repr::Cyc { order: *order, coeffs: coeffs.iter().map(|c| -c).collect() },
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        match self.join_order(other)? {
            None => Ok(Self::from_rational(
                self.as_rational().unwrap() * other.as_rational().unwrap(),
            )),
            Some(q) => {
                let a = self.promote(q);
                let b = other.promote(q);
                let mut raw = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            raw[i + j] += x * y;
                        }
                    }
                }
                let coeffs = Self::reduce_mod_phi(q, raw);
                Ok(make_cyc(q, coeffs))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        self.mul(&other.inv()?)
    }

    /// Multiplicative inverse, by extended Euclid in ℚ\[x\] modulo Φ_q.
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.repr {
            Repr::Rat(r) => Ok(Self::from_rational(r.recip())),
            Repr::Cyc { order, coeffs } => {
                let modulus: Vec<BigRational> = cyclotomic_poly(*order)
                    .iter()
                    .map(|c| BigRational::from(c.clone()))
                    .collect();
                let inv = poly_mod_inverse(coeffs, &modulus).ok_or(Error::DivisionByZero)?;
                let coeffs = Self::reduce_mod_phi(*order, inv);
                Ok(make_cyc(*order, coeffs))
            }
        }
    }

    /// ζ_q^k as an element of ℚ(ζ_q) (rational for q ≤ 2).
    pub fn zeta_power(q: u32, k: i64) -> Result<Self, Error> {
        let z = Self::zeta(q)?;
        let mut e = k.rem_euclid(q as i64) as u32;
        let mut acc = Self::one();
        let mut base = z;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base.clone())?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Numeric embedding: rationals to their real value, ζ_q to exp(2πi/q).
    pub fn embed_numeric(&self) -> Complex {
        match &self.repr {
            Repr::Rat(r) => Complex::new(rational_to_f64(r), 0.0),
            Repr::Cyc { order, coeffs } => {
                let base = 2.0 * std::f64::consts::PI / (*order as f64);
                let mut acc = Complex::new(0.0, 0.0);
                for (j, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let angle = base * j as f64;
                        acc += Complex::new(angle.cos(), angle.sin()) * rational_to_f64(c);
                    }
                }
                acc
            }
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Fall back to scaled division for out-of-range big integers.
    let scaled = (r * BigInt::from(1u64 << 60)).to_integer();
    scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 60) as f64
}

/// Inverse of `a` modulo the monic polynomial `m` (both constant-first), if coprime.
fn poly_mod_inverse(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    type P = Vec<BigRational>;
    fn deg(p: &P) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn rem_div(num: &P, den: &P) -> (P, P) {
        let dd = deg(den).expect("division by zero polynomial");
        let lead = den[dd].clone();
        let mut rem = num.clone();
        let mut quot = vec![BigRational::zero(); num.len().max(dd + 1)];
        while let Some(dn) = deg(&rem) {
            if dn < dd {
                break;
            }
            let c = &rem[dn] / &lead;
            quot[dn - dd] = c.clone();
            for j in 0..=dd {
                let t = &c * &den[j];
                rem[dn - dd + j] -= t;
            }
        }
        (quot, rem)
    }
    fn mul(a: &P, b: &P) -> P {
        let mut out = vec![BigRational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out
    }
    fn sub(a: &P, b: &P) -> P {
        let mut out = a.clone();
        out.resize(a.len().max(b.len()), BigRational::zero());
        for (j, y) in b.iter().enumerate() {
            out[j] -= y;
        }
        out
    }

    // Extended Euclid: r0 = m, r1 = a; track t with r = s·m + t·a.
    let mut r0: P = m.to_vec();
    let mut r1: P = a.to_vec();
    let mut t0: P = vec![BigRational::zero()];
    let mut t1: P = vec![BigRational::one()];
    while deg(&r1).is_some() {
        let (q, r) = rem_div(&r0, &r1);
        let t = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
        if deg(&r0) == Some(0) && deg(&r1).is_none() {
            break;
        }
    }
    // gcd is r0; it must be a nonzero constant.
    let d = deg(&r0)?;
    if d != 0 {
        return None;
    }
    let c = r0[0].clone();
    Some(t0.iter().map(|x| x / &c).collect())
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Cyc { order, coeffs } => {
                let mut first = true;
                for (j, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let cr = FieldElement::from_rational(c.clone());
                    match j {
                        0 => write!(f, "{}", cr)?,
                        1 => write!(f, "{}*z{}", cr, order)?,
                        _ => write!(f, "{}*z{}^{}", cr, order, j)?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

fn rational_from_str(s: &str) -> Result<BigRational, Error> {
    let parse_err = || Error::BadParams(format!("malformed rational \"{}\"", s));
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(parse_err)?.trim().parse().map_err(|_| parse_err())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| parse_err())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(numer, denom))
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.repr {
            Repr::Rat(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
            Repr::Cyc { order, coeffs } => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(None)?;
                m.serialize_entry("order", order)?;
                let list: Vec<String> =
                    coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect();
                m.serialize_entry("coeffs", &list)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) => {
                rational_from_str(s).map(FieldElement::from_rational).map_err(D::Error::custom)
            }
            serde_json::Value::Number(n) => {
                let i = n.as_i64().ok_or_else(|| D::Error::custom("non-integer number"))?;
                Ok(FieldElement::integer(i))
            }
            serde_json::Value::Object(map) => {
                let order = map
                    .get("order")
                    .and_then(|o| o.as_u64())
                    .ok_or_else(|| D::Error::custom("cyclotomic element needs an order"))?
                    as u32;
                let coeffs = map
                    .get("coeffs")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| D::Error::custom("cyclotomic element needs coeffs"))?;
                let mut parsed = Vec::with_capacity(coeffs.len());
                for c in coeffs {
                    let s = c.as_str().ok_or_else(|| D::Error::custom("coeff must be a string"))?;
                    parsed.push(rational_from_str(s).map_err(D::Error::custom)?);
                }
                FieldElement::cyclotomic(order, parsed).map_err(D::Error::custom)
            }
            _ => Err(D::Error::custom("malformed field element")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(n, d)
    }

    #[test]
    fn rational_arithmetic() {
        let a = fe(1, 3).add(&fe(1, 6)).unwrap();
        assert_eq!(a, fe(1, 2));
        assert!(fe(1, 2).div(&fe(0, 1)).is_err());
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        let z = FieldElement::zeta(4).unwrap();
        assert_eq!(z.mul(&z).unwrap(), FieldElement::integer(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        // Candidate: −ζ3. Check (1+ζ3)·(−ζ3) = 1 by reduction mod Φ3 = x²+x+1.
        let z = FieldElement::zeta(3).unwrap();
        let one_plus = FieldElement::one().add(&z).unwrap();
        let inv = one_plus.inv().unwrap();
        assert_eq!(inv, z.neg());
        assert!(one_plus.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn zeta6_embedding() {
        let z = FieldElement::zeta(6).unwrap();
        let c = z.embed_numeric();
        assert!((c.re - 0.5).abs() < 1e-14);
        assert!((c.im - (3.0_f64).sqrt() / 2.0).abs() < 1e-14);
        let half = fe(1, 2).embed_numeric();
        assert!((half.re - 0.5).abs() < 1e-15 && half.im == 0.0);
        let i = FieldElement::zeta(4).unwrap().embed_numeric();
        assert!(i.re.abs() < 1e-15 && (i.im - 1.0).abs() < 1e-14);
    }

    #[test]
    fn field_mismatch_on_distinct_orders() {
        let a = FieldElement::zeta(3).unwrap();
        let b = FieldElement::zeta(4).unwrap();
        assert!(a.add(&b).is_err());
        // Rationals promote.
        assert!(a.add(&fe(1, 2)).is_ok());
    }

    #[test]
    fn zeta_powers_cycle() {
        for q in [3u32, 4, 5, 6, 8, 12] {
            let one = FieldElement::zeta_power(q, q as i64).unwrap();
            assert!(one.is_one(), "ζ_{}^{} should be 1", q, q);
        }
    }

    #[test]
    fn json_round_trip() {
        let a = fe(-7, 3);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "\"-7/3\"");
        let b: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let z = FieldElement::zeta(5).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        let w: FieldElement = serde_json::from_str(&s).unwrap();
        assert_eq!(z, w);
    }
}

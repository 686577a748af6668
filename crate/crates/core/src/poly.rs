//! Sparse multivariate polynomials and unreduced rational functions over the
//! exact field, with graded-lexicographic canonical ordering.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::field::FieldElement;

/// Exponent vector with graded-lex ordering (total degree first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, FieldElement>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, FieldElement::one())
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), FieldElement::one());
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: FieldElement) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(m, c)| m.degree() == 0 && c.is_one()) == Some(true)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(FieldElement::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c).expect("same field");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2).expect("same field"));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c).expect("same field")))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute 0 for variable i.
    pub fn set_var_zero(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn partial_derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] > 0 {
                let mut e = m.0.clone();
                let k = e[i] as i64;
                e[i] -= 1;
                let coeff = c.mul(&FieldElement::integer(k)).expect("same field");
                out.add_term(Monomial(e), coeff);
            }
        }
        out
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    /// Coefficient of u_i^k, as a polynomial in the remaining variables
    /// (keeping the same variable count; variable i is absent from it).
    pub fn coefficient_of(&self, i: usize, k: u16) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] == k {
                let mut e = m.0.clone();
                e[i] = 0;
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Does `self` involve variable i?
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Rename variables into a target space: variable i becomes image\[i\].
    pub fn rename_vars(&self, target_nvars: usize, image: &[usize]) -> Poly {
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target_nvars];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    e[image[i]] += exp;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitute a polynomial for every variable.
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        let mut out = Poly::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target_nvars, c.clone());
            for (i, &exp) in m.0.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact division; None when the divisor does not divide exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        let (lead_m, lead_c) = divisor.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lead_m.divides(&m) {
                return None;
            }
            let qm = m.div(&lead_m);
            let qc = c.div(&lead_c).expect("nonzero leading coefficient");
            let t = Poly::monomial(self.nvars, qm, qc);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(divisor));
        }
        Some(quot)
    }

    /// Evaluate numerically at a complex point.
    pub fn eval_complex(&self, point: &[crate::field::Complex]) -> crate::field::Complex {
        let mut acc = crate::field::Complex::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.embed_numeric();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical display with the caller's variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Highest monomial first.
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = m.degree() == 0;
            if is_const || !c.is_one() {
                write!(f, "{}", c)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut started = false;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                write!(f, "{}", self.names[i])?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Unreduced quotient of polynomials. Equality is decided by cross
/// multiplication, so no gcd machinery is needed.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn from_poly(p: Poly) -> RationalFunction {
        let nvars = p.nvars;
        RationalFunction { num: p, den: Poly::one(nvars) }
    }

    pub fn zero(nvars: usize) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero(nvars))
    }

    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction, Error> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    /// Quotient-rule derivative.
    pub fn partial_derivative(&self, i: usize) -> RationalFunction {
        let num = self
            .num
            .partial_derivative(i)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.partial_derivative(i)));
        RationalFunction { num, den: self.den.mul(&self.den) }
    }

    pub fn eq_rational(&self, other: &RationalFunction) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Restrict to {u_i = 0}; defined when the denominator does not vanish
    /// identically there after cancelling common u_i powers.
    pub fn set_var_zero(&self, i: usize) -> Result<RationalFunction, Error> {
        if self.num.is_zero() {
            return Ok(RationalFunction::zero(self.num.nvars));
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        // Cancel common powers of u_i first.
        let val_num = num.terms.keys().map(|m| m.0[i]).min().unwrap_or(0);
        let val_den = den.terms.keys().map(|m| m.0[i]).min().unwrap_or(0);
        let common = val_num.min(val_den);
        if common > 0 {
            num = shift_var_down(&num, i, common);
            den = shift_var_down(&den, i, common);
        }
        let den0 = den.set_var_zero(i);
        if den0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num: num.set_var_zero(i), den: den0 })
    }
}

fn shift_var_down(p: &Poly, i: usize, by: u16) -> Poly {
    let mut out = Poly::zero(p.nvars);
    for (m, c) in &p.terms {
        let mut e = m.0.clone();
        e[i] -= by;
        out.add_term(Monomial(e), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::integer(n)
    }

    #[test]
    fn arithmetic_and_ordering() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y)); // x² − y²
        let expect = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expect);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn exact_division() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).sub(&y.mul(&y));
        let q = p.exact_div(&x.sub(&y)).unwrap();
        assert_eq!(q, x.add(&y));
        assert!(p.exact_div(&x.add(&Poly::one(2))).is_none());
    }

    #[test]
    fn derivative_and_restriction() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).mul(&y).add(&y); // x²y + y
        assert_eq!(p.partial_derivative(0), x.scale(&fe(2)).mul(&y));
        assert_eq!(p.set_var_zero(0), y);
    }

    #[test]
    fn rational_function_identities() {
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        // 1/(1−x) − 1 = x/(1−x)
        let f = RationalFunction::new(one.clone(), one.sub(&x)).unwrap();
        let lhs = f.sub(&RationalFunction::from_poly(one.clone()));
        let rhs = RationalFunction::new(x.clone(), one.sub(&x)).unwrap();
        assert!(lhs.eq_rational(&rhs));
        // d/dx 1/(1−x) = 1/(1−x)²
        let d = f.partial_derivative(0);
        let sq = f.mul(&f);
        assert!(d.eq_rational(&sq));
    }

    #[test]
    fn display_is_canonical() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&y).add(&Poly::one(2)).add(&x.scale(&fe(-2)));
        let names = vec!["u0".to_string(), "u1".to_string()];
        assert_eq!(format!("{}", p.display(&names)), "u0*u1 + -2*u0 + 1");
    }
}

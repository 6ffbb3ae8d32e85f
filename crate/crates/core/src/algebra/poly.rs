use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{AlgebraError, Rational, Symbol};

/// Values assigned to symbols for evaluation or substitution.
pub type Bindings = BTreeMap<Symbol, Rational>;

/// A power product, stored as `(symbol, exponent)` pairs sorted by symbol
/// with strictly positive exponents.
///
/// Ordering is pure lexicographic over the global symbol order: the first
/// symbol on which two monomials differ decides, and the monomial with the
/// larger exponent there is the larger one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(Symbol, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(sym: Symbol) -> Monomial {
        Monomial::pow_of(sym, 1)
    }

    pub fn pow_of(sym: Symbol, exp: u32) -> Monomial {
        let mut v = SmallVec::new();
        if exp > 0 {
            v.push((sym, exp));
        }
        Monomial(v)
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (Symbol, u32)>) -> Monomial {
        factors
            .into_iter()
            .fold(Monomial::one(), |acc, (s, e)| acc.mul(&Monomial::pow_of(s, e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| *s == sym)
            .map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Sum of `weight(symbol) * exponent` under the a-grading.
    pub fn grading(&self, g_weight: u32) -> u32 {
        self.0.iter().map(|(s, e)| s.grading(g_weight) * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((s, e - f)),
                }
            } else {
                out.push((s, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Removes `sym`, returning its exponent and the remaining monomial.
    pub fn split_off(&self, sym: Symbol) -> (u32, Monomial) {
        let mut rest = self.clone();
        let pos = rest.0.iter().position(|(s, _)| *s == sym);
        match pos {
            Some(p) => {
                let (_, e) = rest.0.remove(p);
                (e, rest)
            }
            None => (0, rest),
        }
    }

    /// Keeps only the factors accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(Symbol) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(s, _)| keep(*s)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                return if a.0 < b.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (s, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly::default()
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> MultiPoly {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> MultiPoly {
        MultiPoly::constant(super::rat(c))
    }

    pub fn var(sym: Symbol) -> MultiPoly {
        MultiPoly::term(Rational::one(), Monomial::var(sym))
    }

    pub fn term(c: Rational, m: Monomial) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest term under the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rational, mono: &Monomial) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Panics on a zero divisor.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lead_m, lead_c) = divisor
            .leading_term()
            .expect("exact division by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        if divisor.terms.len() == 1 {
            let inv = lead_c.recip();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(lead_m)?, c * &inv);
            }
            return Some(MultiPoly { terms });
        }
        let inv = lead_c.recip();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lead_m)?;
            let qc = c * &inv;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Replaces every bound symbol by its value; unbound symbols remain.
    pub fn substitute(&self, point: &Bindings) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = SmallVec::new();
            for &(s, e) in m.factors() {
                match point.get(&s) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Replaces `sym` by the polynomial `value`.
    pub fn substitute_poly(&self, sym: Symbol, value: &MultiPoly) -> MultiPoly {
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(sym);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out += &powers[e as usize].mul_monomial(c, &rest);
        }
        out
    }

    /// Exact value at `point`; every symbol must be bound.
    pub fn evaluate(&self, point: &Bindings) -> Result<Rational, AlgebraError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.factors() {
                let v = point.get(&s).ok_or(AlgebraError::MissingBinding(s))?;
                t *= num_traits::pow(v.clone(), e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Drops every term whose a-grading exceeds `max_degree`.
    pub fn truncate_by_grading(&self, max_degree: u32, g_weight: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grading(g_weight) <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the terms of a-grading exactly `degree`.
    pub fn graded_part(&self, degree: u32, g_weight: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.grading(g_weight) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Set of a-gradings present.
    pub fn gradings(&self, g_weight: u32) -> std::collections::BTreeSet<u32> {
        self.terms.keys().map(|m| m.grading(g_weight)).collect()
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(s, _)| *s))
            .collect()
    }

    pub fn contains_symbol(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(sym) > 0)
    }

    /// True if no kinematic symbol (`m2`, `x_i`, `s(i,j)`) occurs.
    pub fn is_kinematics_free(&self) -> bool {
        !self.symbols().iter().any(|s| s.is_kinematic())
    }

    /// Coefficient of `sym^e` viewed as a polynomial in `sym`.
    pub fn coefficient_of(&self, sym: Symbol, e: u32) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (k, rest) = m.split_off(sym);
            if k == e {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Highest power of `sym` present.
    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    /// Groups terms by their kinematic part: maps each kinematic monomial to
    /// its coefficient polynomial in the remaining symbols.
    pub fn split_kinematic(&self) -> BTreeMap<Monomial, MultiPoly> {
        let mut out: BTreeMap<Monomial, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let kin = m.filter(|s| s.is_kinematic());
            let rest = m.filter(|s| !s.is_kinematic());
            out.entry(kin).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Multiplies so that the leading coefficient becomes one; returns the
    /// factor that was divided out.
    pub fn monic(&self) -> (MultiPoly, Rational) {
        match self.leading_term() {
            None => (MultiPoly::zero(), Rational::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.recip()), c)
            }
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl From<Symbol> for MultiPoly {
    fn from(s: Symbol) -> Self {
        MultiPoly::var(s)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::int(c)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl AddAssign<MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: MultiPoly) -> MultiPoly {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: &MultiPoly) -> MultiPoly {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                let mut out = self.clone();
                out.$assign(&rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul<MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Mul<&MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        &self * rhs
    }
}

impl Mul<MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self * &rhs
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        iter.fold(MultiPoly::zero(), |acc, p| acc + p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(p("a1 + a2") + p("-a2"), p("a1"));
        assert_eq!(p("x1 + x2") * p("x1 - x2"), p("x1^2 - x2^2"));
        assert_eq!(p("2*a1") * p("3*a1"), p("6*a1^2"));
    }

    #[test]
    fn canonical_display() {
        assert_eq!(p("12*a1^2 - 6*a2").to_string(), "-6*a2 + 12*a1^2");
        assert_eq!(
            p("-120*a1^3 + 120*a1*a2 - 24*a3").to_string(),
            "-24*a3 + 120*a1*a2 - 120*a1^3"
        );
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!(MultiPoly::constant(ratio(-3, 2)).to_string(), "-3/2");
        assert_eq!(p("3/2*m2 - x1").to_string(), "-x1 + 3/2*m2");
    }

    #[test]
    fn exact_division() {
        let xe = p("x5");
        assert_eq!((&xe * &p("a1 + a2")).exact_div(&xe), Some(p("a1 + a2")));
        assert_eq!(p("x5 + 1").exact_div(&xe), None);
        assert_eq!(MultiPoly::zero().exact_div(&xe), Some(MultiPoly::zero()));
        let atom = p("m2 + 2*s1_2");
        let q = p("a1*m2 - 3*s1_3 + a2^2");
        assert_eq!((&q * &atom).exact_div(&atom), Some(q));
    }

    #[test]
    fn grading_truncation() {
        assert_eq!(p("a1 + a1^3").truncate_by_grading(2, 2), p("a1"));
        assert_eq!(p("a2 + a1^2").truncate_by_grading(2, 2), p("a2 + a1^2"));
        assert_eq!(p("a3*a1").truncate_by_grading(3, 2), MultiPoly::zero());
        assert_eq!(p("g*a1 + g").truncate_by_grading(2, 2), p("g"));
    }

    #[test]
    fn evaluation_and_substitution() {
        let mut pt = Bindings::new();
        pt.insert(Symbol::x(1), rat(1));
        pt.insert(Symbol::x(2), ratio(1, 2));
        assert_eq!(p("x1 + 4*x2^2").evaluate(&pt).unwrap(), rat(2));
        assert_eq!(
            p("x3").evaluate(&pt),
            Err(AlgebraError::MissingBinding(Symbol::x(3)))
        );
        assert_eq!(p("x1*x3 + x2").substitute(&pt), p("x3 + 1/2"));
        assert_eq!(
            p("x1^2 + x3").substitute_poly(Symbol::x(1), &p("x2 + 1")),
            p("x2^2 + 2*x2 + 1 + x3")
        );
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraError, Bindings, MultiPoly, Rational};

/// A polynomial divided by a product of propagator atoms.
///
/// Atoms are stored monic (leading coefficient one) with multiplicities.
/// Every atom that divides the numerator has been cancelled, and constant
/// factors always live in the numerator.
#[derive(Clone, Debug, Default)]
pub struct ExactFraction {
    num: MultiPoly,
    den: BTreeMap<MultiPoly, u32>,
}

impl ExactFraction {
    pub fn zero() -> ExactFraction {
        ExactFraction::default()
    }

    pub fn one() -> ExactFraction {
        ExactFraction::from_poly(MultiPoly::one())
    }

    pub fn from_poly(num: MultiPoly) -> ExactFraction {
        ExactFraction {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `num / Π atoms`, normalized.
    pub fn new(
        num: MultiPoly,
        atoms: impl IntoIterator<Item = MultiPoly>,
    ) -> Result<ExactFraction, AlgebraError> {
        let mut f = ExactFraction::from_poly(num);
        for atom in atoms {
            f.push_atom(atom, 1)?;
        }
        f.cancel();
        Ok(f)
    }

    /// `1 / atom`.
    pub fn inverse_atom(atom: &MultiPoly) -> Result<ExactFraction, AlgebraError> {
        ExactFraction::new(MultiPoly::one(), [atom.clone()])
    }

    fn push_atom(&mut self, atom: MultiPoly, mult: u32) -> Result<(), AlgebraError> {
        if atom.is_zero() {
            return Err(AlgebraError::ZeroAtom);
        }
        let (monic, lead) = atom.monic();
        let factor = num_traits::pow(lead.recip(), mult as usize);
        self.num = self.num.scale(&factor);
        if !monic.is_constant() {
            *self.den.entry(monic).or_insert(0) += mult;
        }
        Ok(())
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let atoms: Vec<MultiPoly> = self.den.keys().cloned().collect();
        for atom in atoms {
            let mult = self.den.get_mut(&atom).expect("atom present");
            while *mult > 0 {
                match self.num.exact_div(&atom) {
                    Some(q) => {
                        self.num = q;
                        *mult -= 1;
                    }
                    None => break,
                }
            }
            if *mult == 0 {
                self.den.remove(&atom);
            }
        }
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    /// Denominator atoms with multiplicities.
    pub fn atoms(&self) -> impl Iterator<Item = (&MultiPoly, u32)> {
        self.den.iter().map(|(a, m)| (a, *m))
    }

    pub fn denominator(&self) -> MultiPoly {
        self.den
            .iter()
            .fold(MultiPoly::one(), |acc, (a, m)| acc * a.pow(*m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The value as a polynomial, when no atoms remain.
    pub fn as_poly(&self) -> Option<&MultiPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Re-applies normalization; a no-op on values produced by this type.
    pub fn normalized(&self) -> ExactFraction {
        let mut f = ExactFraction::from_poly(self.num.clone());
        for (a, m) in &self.den {
            f.push_atom(a.clone(), *m).expect("stored atoms are nonzero");
        }
        f.cancel();
        f
    }

    pub fn add(&self, other: &ExactFraction) -> ExactFraction {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            let mut f = ExactFraction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
            f.cancel();
            return f;
        }
        let mut lcm = self.den.clone();
        for (a, m) in &other.den {
            let e = lcm.entry(a.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &ExactFraction| {
            lcm.iter().fold(f.num.clone(), |acc, (a, m)| {
                let have = f.den.get(a).copied().unwrap_or(0);
                if *m > have {
                    acc * a.pow(m - have)
                } else {
                    acc
                }
            })
        };
        let mut f = ExactFraction {
            num: lift(self) + lift(other),
            den: lcm,
        };
        f.cancel();
        f
    }

    pub fn neg(&self) -> ExactFraction {
        ExactFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &ExactFraction) -> ExactFraction {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactFraction) -> ExactFraction {
        if self.is_zero() || other.is_zero() {
            return ExactFraction::zero();
        }
        let mut den = self.den.clone();
        for (a, m) in &other.den {
            *den.entry(a.clone()).or_insert(0) += m;
        }
        let mut f = ExactFraction {
            num: &self.num * &other.num,
            den,
        };
        f.cancel();
        f
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> ExactFraction {
        self.mul(&ExactFraction::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Rational) -> ExactFraction {
        if c.is_zero() {
            return ExactFraction::zero();
        }
        ExactFraction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Divides by one more atom.
    pub fn div_atom(&self, atom: &MultiPoly) -> Result<ExactFraction, AlgebraError> {
        let mut f = self.clone();
        f.push_atom(atom.clone(), 1)?;
        f.cancel();
        Ok(f)
    }

    /// Exact value at a point binding every symbol.
    pub fn evaluate(&self, point: &Bindings) -> Result<Rational, AlgebraError> {
        let mut den = Rational::one();
        for (a, m) in &self.den {
            let v = a.evaluate(point)?;
            if v.is_zero() {
                return Err(AlgebraError::DenominatorVanishes(a.to_string()));
            }
            den *= num_traits::pow(v, *m as usize);
        }
        Ok(self.num.evaluate(point)? / den)
    }

    /// Substitutes a point that binds every symbol of the atoms; the result
    /// is a polynomial in the symbols left unbound in the numerator.
    pub fn evaluate_partial(&self, point: &Bindings) -> Result<MultiPoly, AlgebraError> {
        let mut den = Rational::one();
        for (a, m) in &self.den {
            let v = a.evaluate(point)?;
            if v.is_zero() {
                return Err(AlgebraError::DenominatorVanishes(a.to_string()));
            }
            den *= num_traits::pow(v, *m as usize);
        }
        Ok(self.num.substitute(point).scale(&den.recip()))
    }
}

impl PartialEq for ExactFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl Eq for ExactFraction {}

impl From<MultiPoly> for ExactFraction {
    fn from(p: MultiPoly) -> Self {
        ExactFraction::from_poly(p)
    }
}

impl fmt::Display for ExactFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ", self.num)?;
        for (idx, (a, m)) in self.den.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *m == 1 {
                write!(f, "({a})")?;
            } else {
                write!(f, "({a})^{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio, Symbol};

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_and_sums() {
        let xe = p("x5");
        let inv = ExactFraction::inverse_atom(&xe).unwrap();
        assert_eq!(inv.mul_poly(&xe).as_poly(), Some(&MultiPoly::one()));

        let b = p("a1 + a2");
        let f = ExactFraction::new(b.clone(), [xe.clone()]).unwrap();
        let g = ExactFraction::new(-&b, [xe.clone()]).unwrap();
        assert!(f.add(&g).is_zero());

        let xf = p("x6");
        let sum = inv.add(&ExactFraction::inverse_atom(&xf).unwrap());
        let expect = ExactFraction::new(p("x5 + x6"), [xe, xf]).unwrap();
        assert_eq!(sum, expect);
        assert_eq!(sum.atoms().count(), 2);
    }

    #[test]
    fn atoms_are_monic_and_constants_fold() {
        let f = ExactFraction::new(p("a1"), [p("2*m2 + 4*s1_2"), p("3")]).unwrap();
        let atoms: Vec<String> = f.atoms().map(|(a, _)| a.to_string()).collect();
        assert_eq!(atoms.len(), 1);
        assert_eq!(f.numerator(), &p("1/6*a1"));
        assert!(ExactFraction::new(p("1"), [MultiPoly::zero()]).is_err());
    }

    #[test]
    fn evaluation() {
        let f = ExactFraction::new(p("x1"), [p("x5")]).unwrap();
        let mut pt = Bindings::new();
        pt.insert(Symbol::x(1), rat(1));
        pt.insert(Symbol::x(5), rat(2));
        assert_eq!(f.evaluate(&pt).unwrap(), ratio(1, 2));
        assert_eq!(ExactFraction::zero().evaluate(&pt).unwrap(), rat(0));
        pt.insert(Symbol::x(5), rat(0));
        assert!(matches!(
            ExactFraction::inverse_atom(&p("x5")).unwrap().evaluate(&pt),
            Err(AlgebraError::DenominatorVanishes(_))
        ));
    }
}

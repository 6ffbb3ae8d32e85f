use num_bigint::BigInt;

use crate::algebra::{factorial, MultiPoly, Rational, Symbol};
use crate::error::{Error, Result};

/// `a_j` as a polynomial, with `a_0 = 1`.
pub fn a_poly(j: usize) -> MultiPoly {
    if j == 0 {
        MultiPoly::one()
    } else {
        MultiPoly::var(Symbol::a(j))
    }
}

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `Σ_{j=0}^{n} w(j) a_j a_{n-j}`.
fn weighted_pair_sum(n: usize, w: impl Fn(usize) -> i64) -> MultiPoly {
    let mut acc = MultiPoly::zero();
    for j in 0..=n {
        let c = w(j);
        if c != 0 {
            acc += (a_poly(j) * a_poly(n - j)).scale(&int(BigInt::from(c)));
        }
    }
    acc
}

/// `d_n = n! Σ_j (j+1)(n-j+1) a_j a_{n-j}`.
pub fn d_coefficient(n: usize) -> MultiPoly {
    let s = weighted_pair_sum(n, |j| ((j + 1) * (n - j + 1)) as i64);
    s.scale(&int(factorial(n)))
}

/// `c_n = -m^2 (n+2)!/2 Σ_j a_j a_{n-j}`.
pub fn c_coefficient(n: usize) -> MultiPoly {
    c_over_m2(n) * MultiPoly::var(Symbol::M2)
}

fn c_over_m2(n: usize) -> MultiPoly {
    let s = weighted_pair_sum(n, |_| 1);
    s.scale(&-Rational::new(factorial(n + 2), BigInt::from(2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Kinematic,
    Massive,
    Combined,
}

/// Feynman rule of one vertex of the diffeomorphed free theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexRule {
    pub kind: VertexKind,
    pub valence: usize,
}

impl VertexRule {
    pub fn new(kind: VertexKind, valence: usize) -> Result<VertexRule> {
        if valence < 3 {
            return Err(Error::InvalidConfig(format!("vertex valence {valence} below 3")));
        }
        Ok(VertexRule { kind, valence })
    }

    pub fn combined(valence: usize) -> Result<VertexRule> {
        VertexRule::new(VertexKind::Combined, valence)
    }

    /// Coefficient of `Σ p_i^2` in the rule.
    pub fn momentum_coefficient(&self) -> MultiPoly {
        match self.kind {
            VertexKind::Massive => MultiPoly::zero(),
            _ => d_coefficient(self.valence - 2).scale(&Rational::new(1.into(), 2.into())),
        }
    }

    /// Coefficient of `m^2` in the rule.
    pub fn mass_coefficient(&self) -> MultiPoly {
        match self.kind {
            VertexKind::Kinematic => MultiPoly::zero(),
            _ => c_over_m2(self.valence - 2),
        }
    }

    /// Value given the squares of the incident momenta (all oriented
    /// inwards or all outwards).
    pub fn value(&self, incident_squares: &[MultiPoly]) -> Result<MultiPoly> {
        if incident_squares.len() != self.valence {
            return Err(Error::InvalidConfig(format!(
                "valence {} rule given {} momenta",
                self.valence,
                incident_squares.len()
            )));
        }
        let sigma: MultiPoly = incident_squares.iter().cloned().sum();
        Ok(self.value_from_sum(&sigma))
    }

    /// Value given `Σ p_i^2` directly.
    pub fn value_from_sum(&self, sigma: &MultiPoly) -> MultiPoly {
        self.momentum_coefficient() * sigma + self.mass_coefficient() * MultiPoly::var(Symbol::M2)
    }
}

/// Combined-vertex coefficients cached by valence: the rule at valence `k`
/// is `kinematic[k] · Σ p^2 + massive[k] · m^2`.
#[derive(Clone, Debug)]
pub struct RuleTable {
    kinematic: Vec<MultiPoly>,
    massive: Vec<MultiPoly>,
}

impl RuleTable {
    pub fn new(max_valence: usize) -> RuleTable {
        let mut kinematic = vec![MultiPoly::zero(); 3];
        let mut massive = vec![MultiPoly::zero(); 3];
        for k in 3..=max_valence.max(3) {
            let rule = VertexRule {
                kind: VertexKind::Combined,
                valence: k,
            };
            kinematic.push(rule.momentum_coefficient());
            massive.push(rule.mass_coefficient());
        }
        RuleTable { kinematic, massive }
    }

    pub fn max_valence(&self) -> usize {
        self.kinematic.len() - 1
    }

    pub fn kinematic(&self, valence: usize) -> &MultiPoly {
        &self.kinematic[valence]
    }

    pub fn massive(&self, valence: usize) -> &MultiPoly {
        &self.massive[valence]
    }

    pub fn vertex(&self, valence: usize, sigma: &MultiPoly) -> MultiPoly {
        self.kinematic(valence) * sigma + self.massive(valence) * MultiPoly::var(Symbol::M2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn low_order_coefficients() {
        assert_eq!(d_coefficient(0), p("1"));
        assert_eq!(d_coefficient(1), p("4*a1"));
        assert_eq!(c_coefficient(1), p("-6*a1*m2"));
        assert_eq!(d_coefficient(2), p("12*a2 + 8*a1^2"));
        assert_eq!(c_coefficient(2), p("-24*a2*m2 - 12*a1^2*m2"));
    }

    #[test]
    fn star_vanishes_on_shell() {
        let rule = VertexRule::combined(3).unwrap();
        let m2 = p("m2");
        assert!(rule.value(&[m2.clone(), m2.clone(), m2]).unwrap().is_zero());
        let kin = VertexRule::new(VertexKind::Kinematic, 3).unwrap();
        let mass = VertexRule::new(VertexKind::Massive, 3).unwrap();
        let sq = [p("m2"), p("m2 + x1"), p("s1_2")];
        assert_eq!(
            kin.value(&sq).unwrap() + mass.value(&sq).unwrap(),
            rule.value(&sq).unwrap()
        );
        assert!(VertexRule::combined(2).is_err());
    }
}

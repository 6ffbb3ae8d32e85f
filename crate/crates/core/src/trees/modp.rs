//! Dense polynomials in the `a_k` over a prime field, truncated by grading.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::modular::{crt, rational_reconstruction, Zp};
use crate::algebra::{Monomial, MultiPoly, Rational, Symbol};

/// Monomials in `a_1 .. a_G` of grading at most `G`, with a product table.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    product: Vec<Vec<Option<usize>>>,
}

impl GradedBasis {
    pub fn new(max_grade: usize) -> GradedBasis {
        let mut monomials = Vec::new();
        fn rec(part: usize, rest: usize, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if part == 0 {
                out.push(exps.clone());
                return;
            }
            let mut e = 0;
            while e as usize * part <= rest {
                exps[part - 1] = e;
                rec(part - 1, rest - e as usize * part, exps, out);
                e += 1;
            }
            exps[part - 1] = 0;
        }
        rec(max_grade, max_grade, &mut vec![0; max_grade], &mut monomials);
        monomials.sort_by_key(|m| grade(m));
        let index: HashMap<Vec<u32>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let product = monomials
            .iter()
            .map(|x| {
                monomials
                    .iter()
                    .map(|y| {
                        let z: Vec<u32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                        index.get(&z).copied()
                    })
                    .collect()
            })
            .collect();
        GradedBasis {
            monomials,
            index,
            product,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    fn monomial(&self, i: usize) -> Monomial {
        Monomial::from_factors(
            self.monomials[i]
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| (Symbol::a(k + 1), e)),
        )
    }

    /// Image of a polynomial in the `a_k`; `None` if it involves other
    /// symbols, exceeds the grading, or has a denominator divisible by `p`.
    pub fn reduce(&self, poly: &MultiPoly, field: &Zp) -> Option<Vec<u64>> {
        let width = self.monomials.first().map_or(0, |m| m.len());
        let mut out = vec![0; self.len()];
        for (mono, c) in poly.terms() {
            let mut exps = vec![0u32; width];
            for &(sym, e) in mono.factors() {
                match sym {
                    Symbol::A(k) if (k as usize) <= width => exps[k as usize - 1] = e,
                    _ => return None,
                }
            }
            let i = *self.index.get(&exps)?;
            out[i] = field.add(out[i], field.from_rational(c)?);
        }
        Some(out)
    }

    pub fn mul(&self, x: &[u64], y: &[u64], field: &Zp) -> Vec<u64> {
        let mut out = vec![0; self.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let row = &self.product[i];
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                if let Some(k) = row[j] {
                    out[k] = field.add(out[k], field.mul(xi, yj));
                }
            }
        }
        out
    }

    pub fn scale(&self, x: &[u64], c: u64, field: &Zp) -> Vec<u64> {
        x.iter().map(|&v| field.mul(v, c)).collect()
    }

    pub fn add_assign(&self, acc: &mut [u64], x: &[u64], field: &Zp) {
        for (a, &v) in acc.iter_mut().zip(x) {
            *a = field.add(*a, v);
        }
    }

    /// Lifts coefficient vectors known modulo several primes to rationals
    /// by CRT and rational reconstruction.
    pub fn lift(&self, images: &[(u64, Vec<u64>)]) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero();
        for i in 0..self.len() {
            let residues: Vec<(u64, u64)> = images.iter().map(|(p, v)| (v[i], *p)).collect();
            let (r, m) = crt(&residues);
            let c: Rational = rational_reconstruction(&r, &m)?;
            if c != Rational::from_integer(BigInt::from(0)) {
                out.add_term(self.monomial(i), c);
            }
        }
        Some(out)
    }
}

fn grade(exps: &[u32]) -> usize {
    exps.iter().enumerate().map(|(k, &e)| (k + 1) * e as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::modular::PRIMES;

    #[test]
    fn basis_sizes_are_partition_counts() {
        let sizes: Vec<usize> = (1..=7).map(|g| GradedBasis::new(g).len()).collect();
        // Σ_{j<=g} p(j)
        assert_eq!(sizes, [2, 4, 7, 12, 19, 30, 45]);
    }

    #[test]
    fn reduce_multiply_lift() {
        let basis = GradedBasis::new(4);
        let x: MultiPoly = "a1 - 3/2*a2".parse().unwrap();
        let y: MultiPoly = "2*a1 + a1^2".parse().unwrap();
        let images: Vec<(u64, Vec<u64>)> = PRIMES[..2]
            .iter()
            .map(|&p| {
                let f = Zp::new(p);
                let xi = basis.reduce(&x, &f).unwrap();
                let yi = basis.reduce(&y, &f).unwrap();
                (p, basis.mul(&xi, &yi, &f))
            })
            .collect();
        assert_eq!(basis.lift(&images).unwrap(), &x * &y);
        assert!(basis.reduce(&"m2".parse().unwrap(), &Zp::new(PRIMES[0])).is_none());
    }
}

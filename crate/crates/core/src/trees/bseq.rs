//! The sequence `b_n`: the sum of all subtrees with `n` on-shell legs below
//! a distinguished edge `e`, including the propagator of `e`.
//!
//! The edge `e` is realised as an extra off-shell leg `n+1`, so the
//! propagator of `e` is `1/x_{n+1}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::modular::{Zp, PRIMES};
use crate::algebra::{binomial, factorial, Bindings, MultiPoly, Rational, Symbol};
use crate::bell::{for_each_set_partition, BellTable};
use crate::error::{Error, Result};
use crate::kinematics::{mask_of, random_kinematic_point, ExternalConfig, KinematicTable};

use super::amplitude::{amplitude_at, amplitude_sum, sub_key, PointTable, Strategy};
use super::modp::GradedBasis;
use super::rules::{a_poly, RuleTable};
use super::tree::{visit_trees, Sub, TREE_CUTOFF};

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

fn frac(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// Configuration with `n` on-shell legs and the off-shell edge `e` as leg `n+1`.
pub fn definition_config(n: usize) -> Result<ExternalConfig> {
    ExternalConfig::new(n + 1, [n + 1])
}

/// Random point for [`definition_config`] avoiding every internal atom and
/// `x_{n+1} = 0`.
pub fn definition_point(n: usize, seed: u64) -> Result<Bindings> {
    let cfg = definition_config(n)?;
    let table = KinematicTable::new(&cfg);
    let mut avoid = table.internal_atoms()?;
    avoid.push(MultiPoly::var(Symbol::x(n + 1)));
    random_kinematic_point(&cfg, seed, &avoid)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Index("b_n is defined for n >= 1".into()));
    }
    if n + 1 > TREE_CUTOFF {
        return Err(Error::CutoffExceeded {
            what: "n + 1",
            value: n + 1,
            cutoff: TREE_CUTOFF,
        });
    }
    Ok(())
}

/// `b_n` summed tree by tree at the kinematic points drawn from `seed` and
/// `seed + 1`. The sums are evaluated in several prime fields and lifted
/// back to rationals; the two points must give the same polynomial.
pub fn b_via_definition(n: usize, seed: u64) -> Result<MultiPoly> {
    check_n(n)?;
    if n == 1 {
        return Ok(MultiPoly::one());
    }
    let first = modular_definition_at(n, &definition_point(n, seed)?)?;
    let second = modular_definition_at(n, &definition_point(n, seed.wrapping_add(1))?)?;
    agree(n, first, second)
}

/// The same sum with exact rational arithmetic throughout, one tree at a time.
pub fn b_via_definition_exact(n: usize, seed: u64) -> Result<MultiPoly> {
    check_n(n)?;
    if n == 1 {
        return Ok(MultiPoly::one());
    }
    let cfg = definition_config(n)?;
    let at = |s: u64| -> Result<MultiPoly> {
        let point = definition_point(n, s)?;
        let x = point[&Symbol::x(n + 1)].clone();
        Ok(amplitude_at(&cfg, &point, Strategy::PerTree)?.scale(&x.recip()))
    };
    agree(n, at(seed)?, at(seed.wrapping_add(1))?)
}

/// The same sum kept symbolic in `m^2`, the dot products and `x_{n+1}`,
/// then divided by `x_{n+1}`.
pub fn b_via_definition_symbolic(n: usize) -> Result<MultiPoly> {
    check_n(n)?;
    if n == 1 {
        return Ok(MultiPoly::one());
    }
    let amp = amplitude_sum(&definition_config(n)?)?;
    let x = MultiPoly::var(Symbol::x(n + 1));
    let num = amp.as_poly().ok_or_else(|| Error::NotDivisible {
        dividend: amp.to_string(),
        divisor: x.to_string(),
    })?;
    let q = num.exact_div(&x).ok_or_else(|| Error::NotDivisible {
        dividend: num.to_string(),
        divisor: x.to_string(),
    })?;
    kinematics_free(n, q)
}

fn agree(n: usize, first: MultiPoly, second: MultiPoly) -> Result<MultiPoly> {
    if first != second {
        return Err(Error::KinematicsDependence {
            n,
            first: first.to_string(),
            second: second.to_string(),
        });
    }
    Ok(first)
}

fn kinematics_free(n: usize, q: MultiPoly) -> Result<MultiPoly> {
    if !q.is_kinematics_free() {
        return Err(Error::KinematicsDependence {
            n,
            first: q.to_string(),
            second: "a kinematics-free polynomial".into(),
        });
    }
    Ok(q)
}

/// Vertex coefficients and kinematic data reduced modulo one prime.
struct FieldData {
    field: Zp,
    kinematic: Vec<Vec<u64>>,
    massive: Vec<Vec<u64>>,
    squares: Vec<u64>,
    neg_inv_atoms: Vec<u64>,
    m2: u64,
}

struct ModEvaluator {
    basis: GradedBasis,
    fields: Vec<FieldData>,
    memo: HashMap<usize, Vec<Vec<u64>>>,
}

impl ModEvaluator {
    fn new(n: usize, pt: &PointTable, primes: &[u64]) -> Result<ModEvaluator> {
        let basis = GradedBasis::new(n - 1);
        let rules = RuleTable::new(n + 1);
        let masks = 1u32 << n;
        let mut fields = Vec::new();
        for &p in primes {
            let field = Zp::new(p);
            let reduce = |poly: &MultiPoly| {
                basis
                    .reduce(poly, &field)
                    .ok_or_else(|| Error::LiftFailed(format!("cannot reduce {poly} mod {p}")))
            };
            let mut kinematic = vec![Vec::new(); 3];
            let mut massive = vec![Vec::new(); 3];
            for k in 3..=n + 1 {
                kinematic.push(reduce(rules.kinematic(k))?);
                massive.push(reduce(rules.massive(k))?);
            }
            let unreducible = || Error::LiftFailed(format!("kinematic point singular mod {p}"));
            let squares = (0..masks)
                .map(|m| field.from_rational(pt.square(m)).ok_or_else(unreducible))
                .collect::<Result<Vec<_>>>()?;
            let mut neg_inv_atoms = vec![0; masks as usize];
            for m in 1..masks {
                if m.count_ones() >= 2 {
                    let a = field.from_rational(&pt.atom(m)?).ok_or_else(unreducible)?;
                    neg_inv_atoms[m as usize] = field.neg(field.inv(a).ok_or_else(unreducible)?);
                }
            }
            let m2 = field.from_rational(pt.m2()).ok_or_else(unreducible)?;
            fields.push(FieldData {
                field,
                kinematic,
                massive,
                squares,
                neg_inv_atoms,
                m2,
            });
        }
        Ok(ModEvaluator {
            basis,
            fields,
            memo: HashMap::new(),
        })
    }

    fn unit(&self) -> Vec<u64> {
        let mut v = vec![0; self.basis.len()];
        v[0] = 1;
        v
    }

    /// `-v / atom` times the children's values, per field.
    fn eval(&mut self, sub: &Arc<Sub>, remember: bool) -> Vec<Vec<u64>> {
        if let Some(v) = self.memo.get(&sub_key(sub)) {
            return v.clone();
        }
        let out = match &**sub {
            Sub::Leaf(_) => vec![self.unit(); self.fields.len()],
            Sub::Node { mask, children } => {
                let child_vals: Vec<Vec<Vec<u64>>> =
                    children.iter().map(|c| self.eval(c, true)).collect();
                let k = children.len() + 1;
                let basis = &self.basis;
                self.fields
                    .iter()
                    .enumerate()
                    .map(|(fi, fd)| {
                        let f = &fd.field;
                        let mut sigma = fd.squares[*mask as usize];
                        for c in children {
                            sigma = f.add(sigma, fd.squares[c.mask() as usize]);
                        }
                        let mut vertex = basis.scale(&fd.kinematic[k], sigma, f);
                        basis.add_assign(&mut vertex, &basis.scale(&fd.massive[k], fd.m2, f), f);
                        let mut acc = vertex;
                        for cv in &child_vals {
                            acc = basis.mul(&acc, &cv[fi], f);
                        }
                        basis.scale(&acc, fd.neg_inv_atoms[*mask as usize], f)
                    })
                    .collect()
            }
        };
        if remember {
            self.memo.insert(sub_key(sub), out.clone());
        }
        out
    }
}

fn modular_sum(n: usize, pt: &PointTable, primes: &[u64]) -> Result<Vec<(u64, Vec<u64>)>> {
    let mut ev = ModEvaluator::new(n, pt, primes)?;
    let mut totals = vec![vec![0u64; ev.basis.len()]; primes.len()];
    visit_trees(n + 1, &mut |t| {
        let vals = ev.eval(t.top(), false);
        for (fi, v) in vals.iter().enumerate() {
            ev.basis.add_assign(&mut totals[fi], v, &ev.fields[fi].field);
        }
    })?;
    Ok(primes.iter().copied().zip(totals).collect())
}

fn modular_definition_at(n: usize, point: &Bindings) -> Result<MultiPoly> {
    let cfg = definition_config(n)?;
    let table = KinematicTable::new(&cfg);
    let pt = PointTable::new(&table, point)?;
    let basis = GradedBasis::new(n - 1);
    for count in [3, PRIMES.len()] {
        let images = modular_sum(n, &pt, &PRIMES[..count])?;
        let fewer = basis.lift(&images[..count - 1]);
        let all = basis.lift(&images);
        if let (Some(a), Some(b)) = (fewer, all) {
            if a == b {
                return Ok(a);
            }
        }
    }
    Err(Error::LiftFailed(format!("b_{n} did not stabilise over {} primes", PRIMES.len())))
}

/// `b'_1 .. b'_N` from
/// `b'_n = -Σ_{k=2}^{n} B_{n,k}(b') (k-1)!/2 Σ_j a_j a_{k-1-j} (2n(j+1)(k-j) - k(k+1))/(n-1)`.
pub fn b_prime_recursive(max: usize) -> Result<Vec<MultiPoly>> {
    if max == 0 {
        return Err(Error::Index("b'_n is defined for n >= 1".into()));
    }
    let mut b = vec![MultiPoly::one()];
    for n in 2..=max {
        let mut args = b.clone();
        args.push(MultiPoly::zero());
        let mut table = BellTable::new(args);
        let mut acc = MultiPoly::zero();
        for k in 2..=n {
            let mut inner = MultiPoly::zero();
            for j in 0..k {
                let w = 2 * n as i64 * ((j + 1) * (k - j)) as i64 - (k * (k + 1)) as i64;
                inner += (a_poly(j) * a_poly(k - 1 - j)).scale(&Rational::from_integer(w.into()));
            }
            let c = frac(factorial(k - 1), BigInt::from(2 * (n - 1)));
            acc += table.value(n, k)? * inner.scale(&c);
        }
        b.push(-acc);
    }
    Ok(b)
}

/// `(k-1)!/2 Σ_j (j+1)(k-j) a_j a_{k-1-j}`, the momentum part of a vertex
/// joining `k` subtrees to the edge above them.
fn dot_weight(k: usize) -> MultiPoly {
    let mut inner = MultiPoly::zero();
    for j in 0..k {
        inner += (a_poly(j) * a_poly(k - 1 - j)).scale(&int(BigInt::from((j + 1) * (k - j))));
    }
    inner.scale(&frac(factorial(k - 1), BigInt::from(2)))
}

fn choose2(n: usize) -> BigInt {
    binomial(n, 2)
}

/// `b''_1 .. b''_N` through the Bell-polynomial reduction of
/// `Σ_P Π b''_{|P_i|} (Σ_i C(|P_i|,2) + C(n,2))`.
pub fn b_doubleprime_recursive(max: usize) -> Result<Vec<MultiPoly>> {
    if max == 0 {
        return Err(Error::Index("b''_n is defined for n >= 1".into()));
    }
    let mut b = vec![MultiPoly::one()];
    for n in 2..=max {
        let mut args = b.clone();
        args.push(MultiPoly::zero());
        let mut table = BellTable::new(args);
        let mut acc = MultiPoly::zero();
        for k in 2..=n {
            let mut bracket = table.value(n, k)?.scale(&int(choose2(n)));
            for s in 2..=n - k + 1 {
                let c = int(choose2(s) * binomial(n, s));
                bracket += (&b[s - 1] * &table.value(n - s, k - 1)?).scale(&c);
            }
            acc += dot_weight(k) * bracket;
        }
        b.push(-acc.scale(&frac(BigInt::from(1), choose2(n))));
    }
    Ok(b)
}

/// The same recursion summed directly over set partitions of `{1..n}`.
pub fn b_doubleprime_by_partitions(max: usize) -> Result<Vec<MultiPoly>> {
    if max == 0 {
        return Err(Error::Index("b''_n is defined for n >= 1".into()));
    }
    let mut b = vec![MultiPoly::one()];
    for n in 2..=max {
        let mut acc = MultiPoly::zero();
        for k in 2..=n {
            let mut by_shape: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            for_each_set_partition(n, k, &mut |blocks| {
                let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
                sizes.sort_unstable();
                let weight: BigInt =
                    sizes.iter().map(|&s| choose2(s)).sum::<BigInt>() + choose2(n);
                *by_shape.entry(sizes).or_default() += weight;
            });
            let mut shape_sum = MultiPoly::zero();
            for (sizes, weight) in by_shape {
                let prod = sizes
                    .iter()
                    .fold(MultiPoly::one(), |acc, &s| acc * &b[s - 1]);
                shape_sum += prod.scale(&int(weight));
            }
            acc += dot_weight(k) * shape_sum;
        }
        b.push(-acc.scale(&frac(BigInt::from(1), choose2(n))));
    }
    Ok(b)
}

/// Whether the vertex joining the subtrees to `e` sees the momentum of `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeTerm {
    /// The vertex rule sums the squares of all incident momenta, `e` included.
    Included,
    /// Only the subtree momenta `(Σ_{P_i} p)^2` enter the vertex.
    Omitted,
}

/// `b_1 .. b_N` by the recursion over the vertex just below `e`, with
/// symbolic kinematics, dividing exactly by `x_{n+1}`.
pub fn b_full_recursive(max: usize) -> Result<Vec<MultiPoly>> {
    b_full_recursive_with(max, EdgeTerm::Included)
}

pub fn b_full_recursive_with(max: usize, edge: EdgeTerm) -> Result<Vec<MultiPoly>> {
    if max == 0 {
        return Err(Error::Index("b_n is defined for n >= 1".into()));
    }
    let mut b = vec![MultiPoly::one()];
    for n in 2..=max {
        let cfg = definition_config(n)?;
        let table = KinematicTable::new(&cfg);
        let rules = RuleTable::new(n + 1);
        let all = (1u32 << n) - 1;
        let mut acc = MultiPoly::zero();
        for k in 2..=n {
            let mut by_shape: BTreeMap<Vec<usize>, (i64, MultiPoly)> = BTreeMap::new();
            for_each_set_partition(n, k, &mut |blocks| {
                let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
                sizes.sort_unstable();
                let entry = by_shape.entry(sizes).or_insert((0, MultiPoly::zero()));
                entry.0 += 1;
                for block in blocks {
                    entry.1 += table.square(mask_of(block.iter().copied()));
                }
                if edge == EdgeTerm::Included {
                    entry.1 += table.square(all);
                }
            });
            let m2 = MultiPoly::var(Symbol::M2);
            for (sizes, (count, squares)) in by_shape {
                let prod = sizes
                    .iter()
                    .fold(MultiPoly::one(), |acc, &s| acc * &b[s - 1]);
                let vertex = rules.kinematic(k + 1) * &squares
                    + (rules.massive(k + 1) * &m2).scale(&Rational::from_integer(count.into()));
                acc += prod * vertex;
            }
        }
        let x = MultiPoly::var(Symbol::x(n + 1));
        let q = acc.exact_div(&x).ok_or_else(|| Error::NotDivisible {
            dividend: acc.to_string(),
            divisor: x.to_string(),
        })?;
        b.push(kinematics_free(n, -q)?);
    }
    Ok(b)
}

/// Checks that every monomial of `b_n` has `a`-grading exactly `n - 1`.
pub fn has_grading(b: &MultiPoly, n: usize) -> bool {
    !b.is_zero() && b.gradings(2).iter().all(|&g| g as usize + 1 == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::b_closed_form;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(b_via_definition(1, 0).unwrap(), MultiPoly::one());
        assert_eq!(b_via_definition(2, 0).unwrap(), p("-2*a1"));
        assert_eq!(b_via_definition(3, 0).unwrap(), p("-6*a2 + 12*a1^2"));
        assert_eq!(b_via_definition_symbolic(3).unwrap(), p("-6*a2 + 12*a1^2"));
        assert_eq!(b_via_definition_exact(4, 9).unwrap(), b_closed_form(4).unwrap());
    }

    #[test]
    fn recursions_match_closed_form() {
        let closed: Vec<MultiPoly> = (1..=6).map(|n| b_closed_form(n).unwrap()).collect();
        assert_eq!(b_prime_recursive(6).unwrap(), closed);
        assert_eq!(b_doubleprime_recursive(6).unwrap(), closed);
        assert_eq!(b_doubleprime_by_partitions(6).unwrap(), closed);
        assert_eq!(b_full_recursive(5).unwrap(), closed[..5]);
    }

    #[test]
    fn omitting_the_edge_term_is_not_exact() {
        assert!(matches!(
            b_full_recursive_with(2, EdgeTerm::Omitted),
            Err(Error::NotDivisible { .. })
        ));
    }
}

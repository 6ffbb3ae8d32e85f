use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::{factorial, ExactFraction, MultiPoly, Rational, Series, Symbol};
use crate::bell::BellTable;
use crate::error::{Error, Result};
use crate::kinematics::{ExternalConfig, KinematicTable};
use crate::report::Report;
use crate::trees::{a_poly, on_shell_point, proper_partitions, PointTable, RuleTable};

fn g() -> MultiPoly {
    MultiPoly::var(Symbol::G)
}

fn int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Vertex of the diffeomorphed quartic interaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionVertex {
    pub valence: usize,
    /// Coefficient of `phi^valence` in `(g/4!) F(phi)^4`.
    pub coefficient: MultiPoly,
}

impl InteractionVertex {
    /// Feynman rule `n! e_n`.
    pub fn rule(&self) -> MultiPoly {
        self.coefficient.scale(&int(factorial(self.valence)))
    }
}

fn check_order(max: usize) -> Result<()> {
    if max < 4 {
        return Err(Error::InvalidConfig(format!("interaction vertices start at valence 4, got {max}")));
    }
    Ok(())
}

/// `e_4 .. e_max` from the fourth power of `F(phi) = phi + a_1 phi^2 + ...`.
pub fn phi4_coefficients(max: usize) -> Result<Vec<InteractionVertex>> {
    check_order(max)?;
    let f = Series::from_coeffs((0..max).map(|j| if j == 0 { MultiPoly::zero() } else { a_poly(j - 1) }), max);
    let f4 = f.pow(4);
    let scale = Rational::new(BigInt::from(1), factorial(4));
    Ok((4..=max)
        .map(|n| InteractionVertex {
            valence: n,
            coefficient: (f4.coeff(n) * g()).scale(&scale),
        })
        .collect())
}

/// The same coefficients through `n! e_n = g B_{n,4}(1! a_0, 2! a_1, ...)`.
pub fn phi4_coefficients_by_bell(max: usize) -> Result<Vec<InteractionVertex>> {
    check_order(max)?;
    let args = (1..=max).map(|i| a_poly(i - 1).scale(&int(factorial(i)))).collect();
    let mut table = BellTable::new(args);
    (4..=max)
        .map(|n| {
            let b = table.get(n, 4)?;
            Ok(InteractionVertex {
                valence: n,
                coefficient: (b * g()).scale(&Rational::new(BigInt::from(1), factorial(n))),
            })
        })
        .collect()
}

pub fn verify_phi4_composition(max: usize) -> Result<Report> {
    let direct = phi4_coefficients(max)?;
    let composed = phi4_coefficients_by_bell(max)?;
    let parts = direct.iter().zip(&composed).map(|(d, c)| {
        Report::new("e").param("n", d.valence).zero_check(&(&d.coefficient - &c.coefficient))
    });
    Ok(Report::new("phi4_coefficients").param("max", max).all(parts, format!("e_4..e_{max} agree")))
}

/// Value of the bare quartic vertex as a one-vertex tree, common phase
/// stripped.
pub fn bare_vertex_value() -> MultiPoly {
    -g()
}

struct GRules {
    diffeo: RuleTable,
    interaction: Vec<MultiPoly>,
}

impl GRules {
    fn new(n: usize) -> Result<GRules> {
        let mut interaction = vec![MultiPoly::zero(); n + 1];
        for v in phi4_coefficients(n.max(4))? {
            if v.valence <= n {
                interaction[v.valence] = v.rule();
            }
        }
        Ok(GRules {
            diffeo: RuleTable::new(n),
            interaction,
        })
    }
}

/// Subtree values below an edge: without and with the one coupling vertex.
#[derive(Clone)]
struct Pair<T> {
    free: T,
    with_g: T,
}

fn check_args(n: usize, order_g: usize) -> Result<()> {
    if order_g != 1 {
        return Err(Error::InvalidConfig(format!("only first order in g is supported, got {order_g}")));
    }
    if n < 4 {
        return Err(Error::InvalidConfig(format!("interacting amplitudes need n >= 4, got {n}")));
    }
    Ok(())
}

/// On-shell `n`-point tree sum at first order in `g`: every tree with
/// exactly one interaction vertex, all other vertices from the free theory.
pub fn interacting_amplitude(n: usize, order_g: usize) -> Result<ExactFraction> {
    check_args(n, order_g)?;
    let cfg = ExternalConfig::on_shell(n)?;
    let table = KinematicTable::new(&cfg);
    let rules = GRules::new(n)?;
    let lower = (1u32 << (n - 1)) - 1;
    let mut memo = HashMap::new();
    Ok(symbolic_below(lower, lower, &table, &rules, &mut memo)?.with_g)
}

fn symbolic_below(
    mask: u32,
    lower: u32,
    table: &KinematicTable,
    rules: &GRules,
    memo: &mut HashMap<u32, Pair<ExactFraction>>,
) -> Result<Pair<ExactFraction>> {
    if mask.count_ones() == 1 {
        return Ok(Pair {
            free: ExactFraction::one(),
            with_g: ExactFraction::zero(),
        });
    }
    if let Some(p) = memo.get(&mask) {
        return Ok(p.clone());
    }
    let mut free = ExactFraction::zero();
    let mut with_g = ExactFraction::zero();
    for blocks in proper_partitions(mask) {
        let k = blocks.len() + 1;
        let subs = blocks
            .iter()
            .map(|&b| symbolic_below(b, lower, table, rules, memo))
            .collect::<Result<Vec<_>>>()?;
        let sigma: MultiPoly =
            blocks.iter().map(|&b| table.square(b).clone()).sum::<MultiPoly>() + table.square(mask);
        let vertex = ExactFraction::from_poly(-rules.diffeo.vertex(k, &sigma));
        let all_free = subs.iter().fold(ExactFraction::one(), |acc, s| acc.mul(&s.free));
        free = free.add(&vertex.mul(&all_free));
        for i in 0..subs.len() {
            let mut term = vertex.mul(&subs[i].with_g);
            for (j, s) in subs.iter().enumerate() {
                if j != i {
                    term = term.mul(&s.free);
                }
            }
            with_g = with_g.add(&term);
        }
        if !rules.interaction[k].is_zero() {
            with_g = with_g.add(&ExactFraction::from_poly(-rules.interaction[k].clone()).mul(&all_free));
        }
    }
    if mask != lower {
        let atom = table.atom(mask)?;
        free = free.div_atom(&atom)?;
        with_g = with_g.div_atom(&atom)?;
    }
    let pair = Pair { free, with_g };
    memo.insert(mask, pair.clone());
    Ok(pair)
}

/// [`interacting_amplitude`] evaluated at the on-shell point drawn from
/// `seed`, exact in `g` and the `a_k`.
pub fn interacting_amplitude_at(n: usize, order_g: usize, seed: u64) -> Result<MultiPoly> {
    check_args(n, order_g)?;
    let cfg = ExternalConfig::on_shell(n)?;
    let table = KinematicTable::new(&cfg);
    let point = PointTable::new(&table, &on_shell_point(&cfg, seed)?)?;
    let rules = GRules::new(n)?;
    let lower = (1u32 << (n - 1)) - 1;
    let mut memo = HashMap::new();
    Ok(point_below(lower, lower, &point, &rules, &mut memo)?.with_g)
}

fn point_below(
    mask: u32,
    lower: u32,
    pt: &PointTable,
    rules: &GRules,
    memo: &mut HashMap<u32, Pair<MultiPoly>>,
) -> Result<Pair<MultiPoly>> {
    if mask.count_ones() == 1 {
        return Ok(Pair {
            free: MultiPoly::one(),
            with_g: MultiPoly::zero(),
        });
    }
    if let Some(p) = memo.get(&mask) {
        return Ok(p.clone());
    }
    let mut free = MultiPoly::zero();
    let mut with_g = MultiPoly::zero();
    for blocks in proper_partitions(mask) {
        let k = blocks.len() + 1;
        let subs = blocks
            .iter()
            .map(|&b| point_below(b, lower, pt, rules, memo))
            .collect::<Result<Vec<_>>>()?;
        let sigma: Rational = blocks.iter().map(|&b| pt.square(b)).sum::<Rational>() + pt.square(mask);
        let vertex = -(rules.diffeo.kinematic(k).scale(&sigma) + rules.diffeo.massive(k).scale(pt.m2()));
        let all_free = subs.iter().fold(MultiPoly::one(), |acc, s| acc * &s.free);
        free += &vertex * &all_free;
        for i in 0..subs.len() {
            let mut term = &vertex * &subs[i].with_g;
            for (j, s) in subs.iter().enumerate() {
                if j != i {
                    term = term * &s.free;
                }
            }
            with_g += term;
        }
        with_g += -(&rules.interaction[k] * &all_free);
    }
    if mask != lower {
        let inv = pt.atom(mask)?.recip();
        free = free.scale(&inv);
        with_g = with_g.scale(&inv);
    }
    let pair = Pair { free, with_g };
    memo.insert(mask, pair.clone());
    Ok(pair)
}

/// First-order invariance of the interacting theory: the four-point sum is
/// the bare vertex, higher sums vanish on-shell. Symbolic up to five legs,
/// at the given seeds beyond.
pub fn verify_interacting(n: usize, seeds: &[u64]) -> Result<Report> {
    let expected = if n == 4 { bare_vertex_value() } else { MultiPoly::zero() };
    let report = Report::new("interacting").param("n", n);
    if n <= 5 {
        let amp = interacting_amplitude(n, 1)?;
        let report = report.param("mode", "symbolic");
        return Ok(match amp.as_poly() {
            Some(p) => report.zero_check(&(p - &expected)),
            None => report.failed(amp.to_string()),
        });
    }
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("random mode needs at least one seed".into()));
    }
    let parts = seeds
        .iter()
        .map(|&s| Ok(Report::new("point").param("seed", s).zero_check(&(interacting_amplitude_at(n, 1, s)? - &expected))))
        .collect::<Result<Vec<_>>>()?;
    Ok(report
        .param("mode", "random")
        .param("seeds", seeds.len())
        .all(parts, format!("0 at {} points", seeds.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn low_coefficients() {
        let e = phi4_coefficients(6).unwrap();
        assert_eq!(e[0].coefficient, p("1/24*g"));
        assert_eq!(e[1].coefficient, p("1/6*a1*g"));
        assert_eq!(e[2].coefficient, p("1/6*a2*g + 1/4*a1^2*g"));
        assert_eq!(e[0].rule(), p("g"));
    }

    #[test]
    fn composition_routes_agree() {
        assert!(verify_phi4_composition(10).unwrap().is_pass());
    }

    #[test]
    fn four_point_is_the_bare_vertex() {
        let amp = interacting_amplitude(4, 1).unwrap();
        assert_eq!(amp.as_poly().unwrap(), &bare_vertex_value());
    }

    #[test]
    fn five_point_cancels() {
        assert!(interacting_amplitude(5, 1).unwrap().is_zero());
    }

    #[test]
    fn pointwise_route_matches_symbolic() {
        assert_eq!(interacting_amplitude_at(4, 1, 4).unwrap(), bare_vertex_value());
        assert!(interacting_amplitude_at(5, 1, 4).unwrap().is_zero());
    }

    #[test]
    fn rejects_higher_orders() {
        assert!(interacting_amplitude(4, 2).is_err());
        assert!(interacting_amplitude(3, 1).is_err());
    }
}

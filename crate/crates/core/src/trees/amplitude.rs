use std::collections::HashMap;

use num_traits::Zero;

use crate::algebra::{Bindings, ExactFraction, MultiPoly, Rational, Symbol};
use crate::error::{Error, Result};
use crate::kinematics::{legs_of, ExternalConfig, KinematicTable};

use super::rules::RuleTable;
use super::tree::{proper_partitions, visit_trees, LeafTree, Sub};

/// Phase exponent stripped from every tree amplitude: the raw amplitude
/// is `i^COMMON_PHASE` times the rational value computed here.
pub const COMMON_PHASE: u32 = 3;

/// How a sum over trees is organised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// One term per enumerated tree.
    PerTree,
    /// Trees grouped by the subtree hanging below each internal edge.
    Grouped,
}

/// Exponent of `i` carried by a tree: one factor per vertex and per
/// internal propagator, reduced mod 4.
pub fn tree_phase(tree: &LeafTree) -> u32 {
    let v = tree.vertex_count();
    let e = tree.internal_edges().len();
    ((v + e) % 4) as u32
}

/// Real sign left after removing `i^COMMON_PHASE`. Fails if the tree's
/// phase is not the common one up to sign.
pub fn tree_sign(tree: &LeafTree) -> Result<i64> {
    match tree_phase(tree) {
        p if p == COMMON_PHASE => Ok(1),
        p if p == (COMMON_PHASE + 2) % 4 => Ok(-1),
        p => Err(Error::InvalidConfig(format!(
            "tree {tree} has phase i^{p}, not ±i^{COMMON_PHASE}"
        ))),
    }
}

fn check_leaves(tree: &LeafTree, cfg: &ExternalConfig) -> Result<()> {
    if tree.n_leaves() != cfg.n_legs() {
        return Err(Error::InvalidConfig(format!(
            "tree has {} leaves but the configuration {} legs",
            tree.n_leaves(),
            cfg.n_legs()
        )));
    }
    Ok(())
}

/// Product of vertex rules over internal propagator atoms, with the common
/// phase stripped.
pub fn tree_amplitude(tree: &LeafTree, cfg: &ExternalConfig) -> Result<ExactFraction> {
    check_leaves(tree, cfg)?;
    let table = KinematicTable::new(cfg);
    let rules = RuleTable::new(cfg.n_legs());
    tree_amplitude_in(tree, &table, &rules)
}

fn tree_amplitude_in(tree: &LeafTree, table: &KinematicTable, rules: &RuleTable) -> Result<ExactFraction> {
    let mut num = MultiPoly::int(tree_sign(tree)?);
    let mut atoms = Vec::new();
    for v in tree.vertices() {
        let sigma: MultiPoly = v
            .children
            .iter()
            .map(|&c| table.square(c).clone())
            .sum::<MultiPoly>()
            + table.square(v.below);
        num = num * rules.vertex(v.valence(), &sigma);
        if !v.is_top {
            atoms.push(table.atom(v.below)?);
        }
    }
    Ok(ExactFraction::new(num, atoms)?)
}

/// Symbolic sum of all tree amplitudes for `cfg`.
pub fn amplitude_sum(cfg: &ExternalConfig) -> Result<ExactFraction> {
    amplitude_sum_with(cfg, Strategy::Grouped)
}

pub fn amplitude_sum_with(cfg: &ExternalConfig, strategy: Strategy) -> Result<ExactFraction> {
    let n = cfg.n_legs();
    if n < 3 {
        return Err(Error::InvalidConfig(format!("amplitudes need n >= 3, got {n}")));
    }
    let table = KinematicTable::new(cfg);
    let rules = RuleTable::new(n);
    match strategy {
        Strategy::PerTree => {
            let mut acc = ExactFraction::zero();
            let mut err = None;
            visit_trees(n, &mut |t| {
                if err.is_some() {
                    return;
                }
                match tree_amplitude_in(t, &table, &rules) {
                    Ok(f) => acc = acc.add(&f),
                    Err(e) => err = Some(e),
                }
            })?;
            err.map_or(Ok(acc), Err)
        }
        Strategy::Grouped => grouped_symbolic(&table, &rules),
    }
}

fn grouped_symbolic(table: &KinematicTable, rules: &RuleTable) -> Result<ExactFraction> {
    let n = table.config().n_legs();
    let lower = (1u32 << (n - 1)) - 1;
    let mut memo: HashMap<u32, ExactFraction> = HashMap::new();
    fn below(
        mask: u32,
        table: &KinematicTable,
        rules: &RuleTable,
        memo: &mut HashMap<u32, ExactFraction>,
        lower: u32,
    ) -> Result<ExactFraction> {
        if mask.count_ones() == 1 {
            return Ok(ExactFraction::one());
        }
        if let Some(f) = memo.get(&mask) {
            return Ok(f.clone());
        }
        let mut acc = ExactFraction::zero();
        for blocks in proper_partitions(mask) {
            let sigma: MultiPoly = blocks
                .iter()
                .map(|&b| table.square(b).clone())
                .sum::<MultiPoly>()
                + table.square(mask);
            let mut term = ExactFraction::from_poly(-rules.vertex(blocks.len() + 1, &sigma));
            for &b in &blocks {
                term = term.mul(&below(b, table, rules, memo, lower)?);
            }
            acc = acc.add(&term);
        }
        if mask != lower {
            acc = acc.div_atom(&table.atom(mask)?)?;
        }
        memo.insert(mask, acc.clone());
        Ok(acc)
    }
    below(lower, table, rules, &mut memo, lower)
}

/// Squares of every leg subset and `m^2`, evaluated at a kinematic point.
#[derive(Clone, Debug)]
pub struct PointTable {
    squares: Vec<Rational>,
    m2: Rational,
}

impl PointTable {
    pub fn new(table: &KinematicTable, point: &Bindings) -> Result<PointTable> {
        let n = table.config().n_legs();
        let squares = (0..1u32 << n)
            .map(|mask| table.square(mask).evaluate(point))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let m2 = MultiPoly::var(Symbol::M2).evaluate(point)?;
        Ok(PointTable { squares, m2 })
    }

    pub fn square(&self, mask: u32) -> &Rational {
        &self.squares[mask as usize]
    }

    pub fn m2(&self) -> &Rational {
        &self.m2
    }

    pub fn atom(&self, mask: u32) -> Result<Rational> {
        let a = self.square(mask) - &self.m2;
        if a.is_zero() {
            return Err(Error::DegenerateAtom(legs_of(mask).collect()));
        }
        Ok(a)
    }

    fn vertex(&self, rules: &RuleTable, valence: usize, sigma: &Rational) -> MultiPoly {
        rules.kinematic(valence).scale(sigma) + rules.massive(valence).scale(&self.m2)
    }
}

/// Value of one tree at a point, as a polynomial in the `a_k`.
pub fn tree_value_at(tree: &LeafTree, point: &PointTable, rules: &RuleTable) -> Result<MultiPoly> {
    let mut acc = MultiPoly::int(tree_sign(tree)?);
    for v in tree.vertices() {
        let sigma: Rational =
            v.children.iter().map(|&c| point.square(c)).sum::<Rational>() + point.square(v.below);
        acc = acc * point.vertex(rules, v.valence(), &sigma);
        if !v.is_top {
            acc = acc.scale(&point.atom(v.below)?.recip());
        }
    }
    Ok(acc)
}

/// Sum of all tree amplitudes for `cfg` at `point`, exact in the `a_k`.
pub fn amplitude_at(cfg: &ExternalConfig, point: &Bindings, strategy: Strategy) -> Result<MultiPoly> {
    let n = cfg.n_legs();
    if n < 3 {
        return Err(Error::InvalidConfig(format!("amplitudes need n >= 3, got {n}")));
    }
    let table = KinematicTable::new(cfg);
    let pt = PointTable::new(&table, point)?;
    let rules = RuleTable::new(n);
    match strategy {
        Strategy::PerTree => {
            let mut acc = MultiPoly::zero();
            let mut err = None;
            visit_trees(n, &mut |t| {
                if err.is_some() {
                    return;
                }
                match tree_value_at(t, &pt, &rules) {
                    Ok(v) => acc += v,
                    Err(e) => err = Some(e),
                }
            })?;
            err.map_or(Ok(acc), Err)
        }
        Strategy::Grouped => {
            let lower = (1u32 << (n - 1)) - 1;
            let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
            grouped_at(lower, lower, &pt, &rules, &mut memo)
        }
    }
}

fn grouped_at(
    mask: u32,
    lower: u32,
    pt: &PointTable,
    rules: &RuleTable,
    memo: &mut HashMap<u32, MultiPoly>,
) -> Result<MultiPoly> {
    if mask.count_ones() == 1 {
        return Ok(MultiPoly::one());
    }
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let mut acc = MultiPoly::zero();
    for blocks in proper_partitions(mask) {
        let sigma: Rational = blocks.iter().map(|&b| pt.square(b)).sum::<Rational>() + pt.square(mask);
        let mut term = -pt.vertex(rules, blocks.len() + 1, &sigma);
        for &b in &blocks {
            term = term * grouped_at(b, lower, pt, rules, memo)?;
        }
        acc += term;
    }
    if mask != lower {
        acc = acc.scale(&pt.atom(mask)?.recip());
    }
    memo.insert(mask, acc.clone());
    Ok(acc)
}

/// Per-tree values at a point in enumeration order, for checking that the
/// sum does not depend on the order of summation.
pub fn tree_values_at(cfg: &ExternalConfig, point: &Bindings) -> Result<Vec<MultiPoly>> {
    let table = KinematicTable::new(cfg);
    let pt = PointTable::new(&table, point)?;
    let rules = RuleTable::new(cfg.n_legs());
    let mut out = Vec::new();
    let mut err = None;
    visit_trees(cfg.n_legs(), &mut |t| {
        if err.is_none() {
            match tree_value_at(t, &pt, &rules) {
                Ok(v) => out.push(v),
                Err(e) => err = Some(e),
            }
        }
    })?;
    err.map_or(Ok(out), Err)
}

/// Pointer-keyed memo for subtree values while streaming trees.
pub(crate) fn sub_key(sub: &std::sync::Arc<Sub>) -> usize {
    std::sync::Arc::as_ptr(sub) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::random_kinematic_point;
    use crate::trees::tree::enumerate_trees;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn star_vanishes_on_shell() {
        let cfg = ExternalConfig::on_shell(3).unwrap();
        let star = &enumerate_trees(3).unwrap()[0];
        assert!(tree_amplitude(star, &cfg).unwrap().is_zero());
    }

    #[test]
    fn three_point_with_one_leg_off_shell() {
        let cfg = ExternalConfig::new(3, [3]).unwrap();
        let star = &enumerate_trees(3).unwrap()[0];
        let amp = tree_amplitude(star, &cfg).unwrap();
        assert_eq!(amp.as_poly().unwrap(), &p("-2*a1*x3"));
    }

    #[test]
    fn four_point_strategies_agree_and_vanish() {
        let cfg = ExternalConfig::on_shell(4).unwrap();
        assert!(amplitude_sum_with(&cfg, Strategy::PerTree).unwrap().is_zero());
        assert!(amplitude_sum_with(&cfg, Strategy::Grouped).unwrap().is_zero());
        let off = ExternalConfig::new(4, [1, 2]).unwrap();
        assert_eq!(
            amplitude_sum_with(&off, Strategy::PerTree).unwrap(),
            amplitude_sum_with(&off, Strategy::Grouped).unwrap()
        );
    }

    #[test]
    fn pointwise_matches_symbolic() {
        let cfg = ExternalConfig::new(5, [2, 5]).unwrap();
        let table = KinematicTable::new(&cfg);
        let mut avoid = table.internal_atoms().unwrap();
        avoid.push(p("x2"));
        let point = random_kinematic_point(&cfg, 3, &avoid).unwrap();
        let symbolic = amplitude_sum(&cfg).unwrap().evaluate_partial(&point).unwrap();
        for s in [Strategy::PerTree, Strategy::Grouped] {
            assert_eq!(amplitude_at(&cfg, &point, s).unwrap(), symbolic);
        }
    }

    #[test]
    fn phases_are_common_up_to_sign() {
        for n in 3..=6 {
            for t in enumerate_trees(n).unwrap() {
                let sign = tree_sign(&t).unwrap();
                assert_eq!(sign, if t.vertex_count() % 2 == 0 { 1 } else { -1 });
            }
        }
    }
}

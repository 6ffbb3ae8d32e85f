//! Tree amplitudes with off-shell legs: the vertex-marking decomposition and
//! the expansion over meta-trees whose vertices are one-external tree sums.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::algebra::{Bindings, ExactFraction, MultiPoly, Rational, Symbol};
use crate::bell::b_closed_forms;
use crate::error::{Error, Result};
use crate::kinematics::{legs_of, ExternalConfig, KinematicTable};
use crate::report::Report;
use crate::trees::{
    amplitude_at, amplitude_sum, on_shell_point, visit_trees, RuleTable, Strategy, VertexRule,
};

/// One summand `v(i)` of a combined vertex of valence `valence`:
/// `v(0) = c_{k-2} + k m^2 d_{k-2}/2` and `v(i) = (d_{k-2}/2) x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MarkedVertex {
    pub valence: usize,
    pub marking: usize,
}

impl MarkedVertex {
    pub fn new(valence: usize, marking: usize) -> Result<MarkedVertex> {
        if valence < 3 || marking > valence {
            return Err(Error::InvalidConfig(format!(
                "marking {marking} of a valence-{valence} vertex"
            )));
        }
        Ok(MarkedVertex { valence, marking })
    }

    /// Value given `x` of the marked edge (ignored for `v(0)`).
    pub fn value(&self, x: &MultiPoly) -> MultiPoly {
        let rule = VertexRule::combined(self.valence).expect("valence checked");
        let d = rule.momentum_coefficient();
        if self.marking == 0 {
            let k = Rational::from_integer(BigInt::from(self.valence));
            (rule.mass_coefficient() + d.scale(&k)) * MultiPoly::var(Symbol::M2)
        } else {
            d * x
        }
    }
}

/// `Σ_{i=0}^{k} v(i)` minus the combined rule, for symbolic incident `x_i`.
pub fn vertex_completeness_defect(valence: usize) -> Result<MultiPoly> {
    let xs: Vec<MultiPoly> = (1..=valence)
        .map(|i| MultiPoly::var(Symbol::formal(&format!("q{i}")).expect("valid name")))
        .collect();
    let mut sum = MarkedVertex::new(valence, 0)?.value(&MultiPoly::zero());
    for (i, x) in xs.iter().enumerate() {
        sum += MarkedVertex::new(valence, i + 1)?.value(x);
    }
    let squares: Vec<MultiPoly> = xs.iter().map(|x| x + &MultiPoly::var(Symbol::M2)).collect();
    Ok(sum - VertexRule::combined(valence)?.value(&squares)?)
}

/// Tree sum with the legs in `offshell` off-shell.
pub fn offshell_amplitude(n: usize, offshell: impl IntoIterator<Item = usize>) -> Result<ExactFraction> {
    amplitude_sum(&ExternalConfig::new(n, offshell)?)
}

/// Expanded contributions split by the number of externally marked vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedCensus {
    /// Number of expanded contributions per class, including those that
    /// vanish because they mark an on-shell leg.
    pub counts: BTreeMap<usize, u128>,
    /// Sum of the contributions in each non-empty class.
    pub amplitudes: BTreeMap<usize, ExactFraction>,
}

/// Classifies every contribution obtained by expanding each vertex into its
/// `v(i)` by how many of its vertices mark an off-shell external leg.
pub fn marked_expansion_census(
    n: usize,
    offshell: impl IntoIterator<Item = usize>,
) -> Result<MarkedCensus> {
    let cfg = ExternalConfig::new(n, offshell)?;
    let table = KinematicTable::new(&cfg);
    let rules = RuleTable::new(n);
    let m2 = MultiPoly::var(Symbol::M2);
    let mut counts: BTreeMap<usize, u128> = BTreeMap::new();
    let mut amplitudes: BTreeMap<usize, ExactFraction> = BTreeMap::new();
    let mut err = None;
    visit_trees(n, &mut |tree| {
        if err.is_some() {
            return;
        }
        let mut class_num = vec![MultiPoly::one()];
        let mut class_count = vec![1u128];
        let mut atoms = Vec::new();
        for v in tree.vertices() {
            let k = v.valence();
            let d = rules.kinematic(k);
            let mut internal = (rules.massive(k) + d.scale(&Rational::from_integer(k.into()))) * &m2;
            let mut external = MultiPoly::zero();
            let (mut n_int, mut n_ext) = (1u128, 0u128);
            let mut incident: Vec<(u32, bool)> = v.children.iter().map(|&c| (c, c.count_ones() == 1)).collect();
            incident.push(if v.is_top {
                (1 << (n - 1), true)
            } else {
                (v.below, false)
            });
            for (mask, is_leg) in incident {
                if is_leg {
                    let leg = mask.trailing_zeros() as usize + 1;
                    if cfg.is_offshell(leg) {
                        external += d * &cfg.x_poly(leg);
                        n_ext += 1;
                    } else {
                        n_int += 1;
                    }
                } else {
                    match table.atom(mask) {
                        Ok(a) => internal += d * &a,
                        Err(e) => {
                            err = Some(e);
                            return;
                        }
                    }
                    n_int += 1;
                }
            }
            if !v.is_top {
                match table.atom(v.below) {
                    Ok(a) => atoms.push(a),
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                }
            }
            let mut next_num = vec![MultiPoly::zero(); class_num.len() + 1];
            let mut next_count = vec![0u128; class_count.len() + 1];
            for c in 0..class_num.len() {
                next_num[c] -= &class_num[c] * &internal;
                next_num[c + 1] -= &class_num[c] * &external;
                next_count[c] += class_count[c] * n_int;
                next_count[c + 1] += class_count[c] * n_ext;
            }
            class_num = next_num;
            class_count = next_count;
        }
        for (c, (num, count)) in class_num.into_iter().zip(class_count).enumerate() {
            if count == 0 {
                continue;
            }
            *counts.entry(c).or_default() += count;
            match ExactFraction::new(num, atoms.clone()) {
                Ok(f) => {
                    let slot = amplitudes.entry(c).or_insert_with(ExactFraction::zero);
                    *slot = slot.add(&f);
                }
                Err(e) => {
                    err = Some(e.into());
                    return;
                }
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(MarkedCensus { counts, amplitudes })
}

/// With only leg `n` off-shell, splits `b_{n-1}` into the internal part
/// `C_1(0)` and the one-external part `C_1(1)`; each is the class sum
/// divided by `x_n`.
pub fn er_split(n: usize) -> Result<(MultiPoly, MultiPoly)> {
    let census = marked_expansion_census(n, [n])?;
    let x = MultiPoly::var(Symbol::x(n));
    let part = |c: usize| -> Result<MultiPoly> {
        let f = census.amplitudes.get(&c).cloned().unwrap_or_default();
        let num = f.as_poly().ok_or_else(|| Error::NotDivisible {
            dividend: f.to_string(),
            divisor: x.to_string(),
        })?;
        num.exact_div(&x).ok_or_else(|| Error::NotDivisible {
            dividend: num.to_string(),
            divisor: x.to_string(),
        })
    };
    Ok((part(0)?, part(1)?))
}

pub fn verify_er_split(n: usize) -> Result<Report> {
    let report = Report::new("er_split").param("n", n);
    let (c0, c1) = match er_split(n) {
        Ok(v) => v,
        Err(e) => return Ok(report.failed(e.to_string())),
    };
    let b = b_closed_forms(n - 1)?.pop().expect("n >= 3");
    let sum_ok = (&c0 + &c1) == b;
    let free = c0.is_kinematics_free() && c1.is_kinematics_free();
    Ok(report.check(sum_ok && free, format!("C1(0) = {c0}; C1(1) = {c1}")))
}

/// Sum over the ways to connect two vertices by an edge `e` that both of
/// them mark, over all distributions of the `n` legs (all off-shell). The
/// propagator of `e` must cancel and no dot product may survive.
pub fn twice_marked_sum(n: usize) -> Result<ExactFraction> {
    let cfg = ExternalConfig::new(n, 1..=n)?;
    let table = KinematicTable::new(&cfg);
    let rules = RuleTable::new(n);
    let mut acc = ExactFraction::zero();
    // Each unordered split is visited once by fixing leg n on the second side.
    for mask in 1..(1u32 << (n - 1)) {
        let s = mask.count_ones() as usize;
        if s < 2 || n - s < 2 {
            continue;
        }
        let x_e = table.atom(mask)?;
        let (k1, k2) = (s + 1, n - s + 1);
        let num = rules.kinematic(k1) * &x_e * rules.kinematic(k2) * &x_e;
        acc = acc.add(&ExactFraction::new(num, [x_e])?);
    }
    Ok(acc)
}

pub fn verify_twice_marked(n: usize) -> Result<Report> {
    let f = twice_marked_sum(n)?;
    let report = Report::new("twice_marked").param("n", n);
    Ok(match f.as_poly() {
        None => report.failed(format!("propagator survives: {f}")),
        Some(p) => {
            let dots = p.symbols().into_iter().any(|s| matches!(s, Symbol::S(..)));
            report.check(!dots, p.to_string())
        }
    })
}

/// Which tail of the `b` series a meta-vertex of valence `|v|` carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetaReading {
    /// `b_i` with `i >= |v| + 1`: every one-external tree sum with at least
    /// one vertex.
    Shifted,
    /// `b_i` with `i >= |v| + 2`, the tail index taken literally.
    Literal,
}

/// Labelled trees on `k` vertices as edge lists, from Prüfer sequences.
pub fn labelled_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    match k {
        0 => return vec![],
        1 => return vec![vec![]],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let mut out = Vec::new();
    let total = k.pow((k - 2) as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(k - 2);
        let mut c = code;
        for _ in 0..k - 2 {
            seq.push(c % k);
            c /= k;
        }
        let mut degree = vec![1usize; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).expect("a leaf exists");
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        out.push(edges);
    }
    out
}

/// One meta-tree term: a polynomial weight over a product of edge atoms.
#[derive(Clone, Debug)]
struct MetaTerm {
    weight: MultiPoly,
    edge_masks: Vec<u32>,
}

fn meta_terms(
    cfg: &ExternalConfig,
    marked: &[usize],
    reading: MetaReading,
    grading_cutoff: usize,
) -> Result<Vec<MetaTerm>> {
    let n = cfg.n_legs();
    let k = marked.len();
    if k == 0 {
        return Err(Error::InvalidConfig("a meta-tree needs at least one vertex".into()));
    }
    let others: Vec<usize> = (1..=n).filter(|l| !marked.contains(l)).collect();
    let b = b_closed_forms(n.max(2))?;
    let weight = |i: usize, valence: usize| -> MultiPoly {
        let min = match reading {
            MetaReading::Shifted => valence + 1,
            MetaReading::Literal => valence + 2,
        };
        if i < min.max(2) || i > b.len() || i - 1 > grading_cutoff {
            MultiPoly::zero()
        } else {
            b[i - 1].clone()
        }
    };
    let mut out = Vec::new();
    for edges in labelled_trees(k) {
        let mut valence = vec![0usize; k];
        for &(u, v) in &edges {
            valence[u] += 1;
            valence[v] += 1;
        }
        let assignments = k.pow(others.len() as u32);
        for code in 0..assignments {
            let mut c = code;
            let mut legs = marked.iter().map(|&l| 1u32 << (l - 1)).collect::<Vec<u32>>();
            let mut r = vec![0usize; k];
            for &leg in &others {
                let v = c % k;
                c /= k;
                legs[v] |= 1 << (leg - 1);
                r[v] += 1;
            }
            let mut w = MultiPoly::one();
            for v in 0..k {
                w = w * weight(r[v] + valence[v], valence[v]);
                if w.is_zero() {
                    break;
                }
            }
            if w.is_zero() {
                continue;
            }
            let edge_masks = edges
                .iter()
                .map(|&(u, v)| component_mask(&edges, u, v, &legs))
                .collect();
            out.push(MetaTerm { weight: w, edge_masks });
        }
    }
    Ok(out)
}

/// Legs on the `u` side of the tree edge `(u, v)`.
fn component_mask(edges: &[(usize, usize)], u: usize, v: usize, legs: &[u32]) -> u32 {
    let mut seen = vec![false; legs.len()];
    let mut stack = vec![u];
    seen[u] = true;
    seen[v] = true;
    let mut mask = 0;
    while let Some(w) = stack.pop() {
        mask |= legs[w];
        for &(a, b) in edges {
            let next = if a == w { b } else if b == w { a } else { continue };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    mask
}

/// `Σ_T Π_v b_{r_v + |v|} Π_e 1/x_e` over labelled meta-trees whose vertices
/// are the legs in `marked`, with the remaining legs distributed over the
/// vertices in all ways. Weights above `grading_cutoff` are dropped.
pub fn meta_formula(
    cfg: &ExternalConfig,
    marked: &[usize],
    reading: MetaReading,
    grading_cutoff: usize,
) -> Result<ExactFraction> {
    let table = KinematicTable::new(cfg);
    let mut acc = ExactFraction::zero();
    for term in meta_terms(cfg, marked, reading, grading_cutoff)? {
        let atoms = term
            .edge_masks
            .iter()
            .map(|&m| table.atom(m))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.add(&ExactFraction::new(term.weight, atoms)?);
    }
    Ok(acc)
}

/// The expansion `Σ_{S} Π_{i∈S} x_i · meta_formula(S)` over non-empty sets
/// `S` of off-shell legs.
pub fn decomposition(cfg: &ExternalConfig, reading: MetaReading, grading_cutoff: usize) -> Result<ExactFraction> {
    let off: Vec<usize> = cfg.offshell().iter().copied().collect();
    let mut acc = ExactFraction::zero();
    for subset in 1u32..(1 << off.len()) {
        let marked: Vec<usize> = legs_of(subset).map(|i| off[i - 1]).collect();
        let xs = marked
            .iter()
            .fold(MultiPoly::one(), |acc, &l| acc * cfg.x_poly(l));
        let m = meta_formula(cfg, &marked, reading, grading_cutoff)?;
        acc = acc.add(&m.mul_poly(&xs));
    }
    Ok(acc)
}

/// The same expansion evaluated at a kinematic point.
pub fn decomposition_at(
    cfg: &ExternalConfig,
    point: &Bindings,
    reading: MetaReading,
    grading_cutoff: usize,
) -> Result<MultiPoly> {
    let table = KinematicTable::new(cfg);
    let off: Vec<usize> = cfg.offshell().iter().copied().collect();
    let mut acc = MultiPoly::zero();
    for subset in 1u32..(1 << off.len()) {
        let marked: Vec<usize> = legs_of(subset).map(|i| off[i - 1]).collect();
        let mut xs = Rational::from_integer(1.into());
        for &l in &marked {
            xs *= cfg.x_poly(l).evaluate(point)?;
        }
        for term in meta_terms(cfg, &marked, reading, grading_cutoff)? {
            let mut c = xs.clone();
            for &m in &term.edge_masks {
                let a = table.atom(m)?.evaluate(point)?;
                c /= a;
            }
            acc += term.weight.scale(&c);
        }
    }
    Ok(acc)
}

/// Direct tree sum with legs `1..=j` off-shell against the meta-tree
/// expansion: symbolically for `n <= 4`, and at the points of `seeds`.
pub fn verify_offshell_decomposition(n: usize, j: usize, seeds: &[u64]) -> Result<Report> {
    verify_offshell_decomposition_with(n, j, seeds, MetaReading::Shifted)
}

pub fn verify_offshell_decomposition_with(
    n: usize,
    j: usize,
    seeds: &[u64],
    reading: MetaReading,
) -> Result<Report> {
    verify_offshell_decomposition_cutoff(n, j, seeds, reading, n.saturating_sub(2))
}

/// As [`verify_offshell_decomposition_with`], truncating the `b` tails at
/// a-grading `cutoff`. Any cutoff below `n - 2` drops contributions.
pub fn verify_offshell_decomposition_cutoff(
    n: usize,
    j: usize,
    seeds: &[u64],
    reading: MetaReading,
    cutoff: usize,
) -> Result<Report> {
    if j == 0 || j > n {
        return Err(Error::InvalidConfig(format!("need 1 <= j <= n, got j={j}, n={n}")));
    }
    let cfg = ExternalConfig::new(n, 1..=j)?;
    let mut parts = Vec::new();
    if n <= 4 {
        let direct = amplitude_sum(&cfg)?;
        let expanded = decomposition(&cfg, reading, cutoff)?;
        let diff = direct.sub(&expanded);
        parts.push(Report::new("symbolic").check(diff.is_zero(), diff.to_string()));
    }
    for &seed in seeds {
        let point = on_shell_point(&cfg, seed)?;
        let direct = amplitude_at(&cfg, &point, Strategy::Grouped)?;
        let expanded = decomposition_at(&cfg, &point, reading, cutoff)?;
        parts.push(Report::new("point").param("seed", seed).zero_check(&(direct - expanded)));
    }
    let report = Report::new("offshell_decomposition")
        .param("n", n)
        .param("j", j)
        .param("reading", format!("{reading:?}").to_lowercase())
        .param("cutoff", cutoff);
    Ok(report.all(parts, format!("{} checks", seeds.len() + usize::from(n <= 4))))
}

/// Runs the two-off-shell decomposition under both meta-vertex readings
/// and passes iff exactly one of them holds; the witness names it.
pub fn verify_dual_reading(n: usize, seeds: &[u64]) -> Result<Report> {
    let shifted = verify_offshell_decomposition_with(n, 2, seeds, MetaReading::Shifted)?;
    let literal = verify_offshell_decomposition_with(n, 2, seeds, MetaReading::Literal)?;
    let report = Report::new("dual_reading")
        .param("n", n)
        .param("shifted", shifted.status)
        .param("literal", literal.status);
    Ok(match (shifted.is_pass(), literal.is_pass()) {
        (true, false) => report.passed("shifted"),
        (false, true) => report.passed("literal"),
        (true, true) => report.failed("both readings hold"),
        (false, false) => report.failed("neither reading holds"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn marked_vertices_sum_to_the_rule() {
        for k in 3..=8 {
            assert!(vertex_completeness_defect(k).unwrap().is_zero());
        }
    }

    #[test]
    fn three_point_offshell() {
        let a = offshell_amplitude(3, [3]).unwrap();
        assert_eq!(a.as_poly().unwrap(), &p("-2*a1*x3"));
        assert!(offshell_amplitude(3, []).unwrap().is_zero());
    }

    #[test]
    fn census_classes() {
        let c = marked_expansion_census(3, []).unwrap();
        assert_eq!(c.counts.keys().copied().collect::<Vec<_>>(), [0]);
        let c = marked_expansion_census(4, [1]).unwrap();
        assert_eq!(c.counts.keys().copied().collect::<Vec<_>>(), [0, 1]);
        assert_eq!(c.counts.values().sum::<u128>(), 53);
    }

    #[test]
    fn prufer_counts() {
        let counts: Vec<usize> = (1..=5).map(|k| labelled_trees(k).len()).collect();
        assert_eq!(counts, [1, 1, 3, 16, 125]);
    }

    #[test]
    fn two_offshell_legs() {
        assert!(verify_offshell_decomposition(4, 2, &[1, 2]).unwrap().is_pass());
        assert!(!verify_offshell_decomposition_with(4, 2, &[], MetaReading::Literal)
            .unwrap()
            .is_pass());
    }
}

//! External momenta with conservation eliminated, squared invariants and
//! random exact kinematic points.
//!
//! The last leg is eliminated: `p_n = -(p_1 + ... + p_{n-1})`. The remaining
//! dot products `s(i,j)`, `i < j < n`, are independent except for one pair,
//! `s(n-2, n-1)`, which is solved from `p_n^2 = m^2 + x_n`. Legs are
//! encoded as bitmasks with bit `i-1` standing for leg `i`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rat, Bindings, MultiPoly, Rational, Symbol};
use crate::error::{Error, Result};

/// Default number of redraws before giving up on a kinematic point.
pub const DEFAULT_RETRY_BUDGET: usize = 64;

/// Number of external legs and which of them are off-shell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExternalConfig {
    n_legs: usize,
    offshell: BTreeSet<usize>,
}

impl ExternalConfig {
    pub fn new(n_legs: usize, offshell: impl IntoIterator<Item = usize>) -> Result<Self> {
        if !(2..=31).contains(&n_legs) {
            return Err(Error::InvalidConfig(format!(
                "n_legs must lie in 2..=31, got {n_legs}"
            )));
        }
        let offshell: BTreeSet<usize> = offshell.into_iter().collect();
        if let Some(bad) = offshell.iter().find(|&&i| i == 0 || i > n_legs) {
            return Err(Error::InvalidConfig(format!(
                "off-shell leg {bad} outside 1..={n_legs}"
            )));
        }
        if n_legs == 2 && offshell.len() == 1 {
            return Err(Error::InvalidConfig(
                "with two legs p_2 = -p_1, so both or neither are off-shell".into(),
            ));
        }
        Ok(ExternalConfig { n_legs, offshell })
    }

    pub fn on_shell(n_legs: usize) -> Result<Self> {
        ExternalConfig::new(n_legs, [])
    }

    pub fn n_legs(&self) -> usize {
        self.n_legs
    }

    pub fn offshell(&self) -> &BTreeSet<usize> {
        &self.offshell
    }

    pub fn is_offshell(&self, leg: usize) -> bool {
        self.offshell.contains(&leg)
    }

    /// Mask of all legs.
    pub fn full_mask(&self) -> u32 {
        (1u32 << self.n_legs) - 1
    }

    /// The off-shell variable of `leg`, if it is kept symbolic.
    pub fn x_symbol(&self, leg: usize) -> Option<Symbol> {
        if !self.is_offshell(leg) {
            return None;
        }
        if self.n_legs == 2 {
            return Some(Symbol::x(1));
        }
        Some(Symbol::x(leg))
    }

    /// `x_leg` as a polynomial (zero when on-shell).
    pub fn x_poly(&self, leg: usize) -> MultiPoly {
        self.x_symbol(leg).map(MultiPoly::var).unwrap_or_default()
    }

    /// `p_leg^2 = m^2 + x_leg`.
    pub fn leg_square(&self, leg: usize) -> MultiPoly {
        MultiPoly::var(Symbol::M2) + self.x_poly(leg)
    }

    fn dependent_pair(&self) -> Option<(usize, usize)> {
        (self.n_legs >= 3).then(|| (self.n_legs - 2, self.n_legs - 1))
    }

    /// The independent dot products `s(i,j)`, `i < j < n`.
    pub fn free_dots(&self) -> Vec<(usize, usize)> {
        let k = self.n_legs - 1;
        let dep = self.dependent_pair();
        let mut out = Vec::new();
        for i in 1..=k {
            for j in i + 1..=k {
                if Some((i, j)) != dep {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All symbols a kinematic point has to bind.
    pub fn kinematic_symbols(&self) -> Vec<Symbol> {
        let mut syms = vec![Symbol::M2];
        syms.extend(self.free_dots().into_iter().map(|(i, j)| Symbol::s(i, j)));
        let xs: BTreeSet<Symbol> = self.offshell.iter().filter_map(|&l| self.x_symbol(l)).collect();
        syms.extend(xs);
        syms.sort();
        syms
    }

    /// `p_i . p_j` for `1 <= i < j <= n-1`, in the independent basis.
    pub fn dot(&self, i: usize, j: usize) -> MultiPoly {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i >= 1 && j < self.n_legs && i != j, "dot({i},{j}) outside the basis");
        if Some((i, j)) != self.dependent_pair() {
            return MultiPoly::var(Symbol::s(i, j));
        }
        let k = self.n_legs - 1;
        let mut rhs = self.leg_square(self.n_legs);
        for l in 1..=k {
            rhs -= self.leg_square(l);
        }
        for (a, b) in self.free_dots() {
            rhs -= MultiPoly::var(Symbol::s(a, b)).scale(&rat(2));
        }
        rhs.scale(&crate::algebra::ratio(1, 2))
    }
}

/// Integer combination of the independent momenta `p_1 .. p_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Momentum {
    coefficients: Vec<i64>,
}

impl Momentum {
    pub fn new(coefficients: Vec<i64>) -> Momentum {
        Momentum { coefficients }
    }

    /// `Σ_{i ∈ legs} p_i`, with `p_n` rewritten by conservation.
    pub fn of_legs(cfg: &ExternalConfig, legs: impl IntoIterator<Item = usize>) -> Momentum {
        let k = cfg.n_legs() - 1;
        let mut c = vec![0i64; k];
        for leg in legs {
            assert!((1..=cfg.n_legs()).contains(&leg), "leg {leg} out of range");
            if leg == cfg.n_legs() {
                c.iter_mut().for_each(|v| *v -= 1);
            } else {
                c[leg - 1] += 1;
            }
        }
        Momentum { coefficients: c }
    }

    pub fn of_mask(cfg: &ExternalConfig, mask: u32) -> Momentum {
        Momentum::of_legs(cfg, legs_of(mask))
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Momentum {
        Momentum {
            coefficients: self.coefficients.iter().map(|c| c * k).collect(),
        }
    }
}

/// Legs contained in a mask, ascending.
pub fn legs_of(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

/// Mask of the given legs.
pub fn mask_of(legs: impl IntoIterator<Item = usize>) -> u32 {
    legs.into_iter().fold(0, |m, l| m | 1 << (l - 1))
}

/// `q^2` in the independent basis.
pub fn square(q: &Momentum, cfg: &ExternalConfig) -> Result<MultiPoly> {
    let c = q.coefficients();
    if c.len() != cfg.n_legs() - 1 {
        return Err(Error::InvalidConfig(format!(
            "momentum has {} coefficients, expected {}",
            c.len(),
            cfg.n_legs() - 1
        )));
    }
    let mut out = MultiPoly::zero();
    for (i, &ci) in c.iter().enumerate() {
        if ci != 0 {
            out += cfg.leg_square(i + 1).scale(&rat(ci * ci));
        }
    }
    for (i, &ci) in c.iter().enumerate() {
        for (j, &cj) in c.iter().enumerate().skip(i + 1) {
            if ci != 0 && cj != 0 {
                out += cfg.dot(i + 1, j + 1).scale(&rat(2 * ci * cj));
            }
        }
    }
    Ok(out)
}

/// Propagator atom `q^2 - m^2` of an internal edge carrying `q`.
pub fn edge_atom(q: &Momentum, cfg: &ExternalConfig) -> Result<MultiPoly> {
    if q.is_zero() {
        return Err(Error::ZeroMomentum);
    }
    let atom = square(q, cfg)? - MultiPoly::var(Symbol::M2);
    if atom.is_zero() {
        let legs = q
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i + 1)
            .collect();
        return Err(Error::DegenerateAtom(legs));
    }
    Ok(atom)
}

/// Squares of every leg subset of a configuration, indexed by mask.
#[derive(Clone, Debug)]
pub struct KinematicTable {
    cfg: ExternalConfig,
    squares: Vec<MultiPoly>,
}

impl KinematicTable {
    pub fn new(cfg: &ExternalConfig) -> KinematicTable {
        let n = cfg.n_legs();
        let size = 1usize << n;
        let mut squares = vec![MultiPoly::zero(); size];
        let full = cfg.full_mask();
        for mask in 1..size as u32 {
            let rep = if mask >> (n - 1) & 1 == 1 { full & !mask } else { mask };
            if rep == 0 {
                continue;
            }
            if rep < mask {
                squares[mask as usize] = squares[rep as usize].clone();
            } else {
                squares[mask as usize] =
                    square(&Momentum::of_mask(cfg, rep), cfg).expect("mask within configuration");
            }
        }
        KinematicTable {
            cfg: cfg.clone(),
            squares,
        }
    }

    pub fn config(&self) -> &ExternalConfig {
        &self.cfg
    }

    pub fn square(&self, mask: u32) -> &MultiPoly {
        &self.squares[mask as usize]
    }

    pub fn atom(&self, mask: u32) -> Result<MultiPoly> {
        let full = self.cfg.full_mask();
        if mask == 0 || mask == full {
            return Err(Error::ZeroMomentum);
        }
        let atom = self.square(mask) - MultiPoly::var(Symbol::M2);
        if atom.is_zero() {
            return Err(Error::DegenerateAtom(legs_of(mask).collect()));
        }
        Ok(atom)
    }

    /// Atoms of every internal-edge candidate: subsets with at least two
    /// legs on each side.
    pub fn internal_atoms(&self) -> Result<Vec<MultiPoly>> {
        let n = self.cfg.n_legs();
        let mut out = Vec::new();
        for mask in 1..(1u32 << (n - 1)) {
            let size = mask.count_ones() as usize;
            if size >= 2 && n - size >= 2 {
                out.push(self.atom(mask)?);
            }
        }
        Ok(out)
    }
}

/// One random exact rational with numerator in `[-10^4, 10^4]` and
/// denominator in `[1, 100]`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-10_000..=10_000);
    let den: i64 = rng.gen_range(1..=100);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Deterministic random point binding `m2`, the free `s(i,j)` and the
/// off-shell `x_i`, redrawn until no atom in `avoid` vanishes.
pub fn random_kinematic_point(
    cfg: &ExternalConfig,
    seed: u64,
    avoid: &[MultiPoly],
) -> Result<Bindings> {
    random_kinematic_point_with_budget(cfg, seed, avoid, DEFAULT_RETRY_BUDGET)
}

pub fn random_kinematic_point_with_budget(
    cfg: &ExternalConfig,
    seed: u64,
    avoid: &[MultiPoly],
    budget: usize,
) -> Result<Bindings> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = cfg.kinematic_symbols();
    for _ in 0..budget {
        let point: Bindings = symbols
            .iter()
            .map(|&s| (s, random_rational(&mut rng)))
            .collect();
        let ok = avoid.iter().all(|a| {
            a.substitute(&point)
                .as_constant()
                .is_none_or(|v| !v.is_zero())
        });
        if ok {
            return Ok(point);
        }
    }
    Err(Error::ExhaustedRetries(budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn squares_in_the_basis() {
        let cfg = ExternalConfig::on_shell(5).unwrap();
        assert_eq!(square(&Momentum::of_legs(&cfg, [1]), &cfg).unwrap(), p("m2"));
        assert_eq!(
            square(&Momentum::of_legs(&cfg, [1, 2]), &cfg).unwrap(),
            p("2*m2 + 2*s1_2")
        );
        let off = ExternalConfig::new(5, [1]).unwrap();
        assert_eq!(
            square(&Momentum::of_legs(&off, [1, 2]), &off).unwrap(),
            p("2*m2 + x1 + 2*s1_2")
        );
        assert_eq!(
            edge_atom(&Momentum::of_legs(&cfg, [1, 2]), &cfg).unwrap(),
            p("m2 + 2*s1_2")
        );
        assert_eq!(edge_atom(&Momentum::of_legs(&off, [1]), &off).unwrap(), p("x1"));
    }

    #[test]
    fn last_leg_is_on_shell() {
        for n in 3..7 {
            let cfg = ExternalConfig::on_shell(n).unwrap();
            assert_eq!(
                square(&Momentum::of_legs(&cfg, [n]), &cfg).unwrap(),
                p("m2")
            );
            let off = ExternalConfig::new(n, [n]).unwrap();
            let q = Momentum::of_legs(&off, 1..n);
            assert_eq!(edge_atom(&q, &off).unwrap(), MultiPoly::var(Symbol::x(n)));
            assert_eq!(
                edge_atom(&q, &cfg),
                Err(Error::DegenerateAtom((1..n).collect()))
            );
        }
    }

    #[test]
    fn zero_momentum_is_rejected() {
        let cfg = ExternalConfig::on_shell(4).unwrap();
        assert_eq!(
            edge_atom(&Momentum::of_legs(&cfg, [1, 2, 3, 4]), &cfg),
            Err(Error::ZeroMomentum)
        );
    }

    #[test]
    fn random_points() {
        let cfg = ExternalConfig::on_shell(4).unwrap();
        let atom = p("m2 + 2*s1_2");
        let a = random_kinematic_point(&cfg, 1, std::slice::from_ref(&atom)).unwrap();
        let b = random_kinematic_point(&cfg, 1, std::slice::from_ref(&atom)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.keys().copied().collect::<Vec<_>>(),
            vec![Symbol::M2, Symbol::s(1, 2), Symbol::s(1, 3)]
        );
        assert!(!atom.evaluate(&a).unwrap().is_zero());
        assert_eq!(
            random_kinematic_point(&cfg, 1, &[MultiPoly::zero()]),
            Err(Error::ExhaustedRetries(DEFAULT_RETRY_BUDGET))
        );
    }
}

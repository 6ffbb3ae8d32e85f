use crate::algebra::{Bindings, MultiPoly, Symbol};
use crate::bell::b_closed_form;
use crate::error::{Error, Result};
use crate::kinematics::{random_kinematic_point, ExternalConfig, KinematicTable};
use crate::report::Report;

use super::amplitude::{amplitude_at, amplitude_sum, Strategy};

/// Largest `n` checked symbolically in [`Mode::Auto`].
pub const SYMBOLIC_MAX: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    /// Exact evaluation at the points drawn from each seed.
    Random(Vec<u64>),
    /// Symbolic up to [`SYMBOLIC_MAX`], random at the given seeds beyond.
    Auto(Vec<u64>),
}

impl Mode {
    fn resolve(&self, n: usize) -> Mode {
        match self {
            Mode::Auto(seeds) if n > SYMBOLIC_MAX => Mode::Random(seeds.clone()),
            Mode::Auto(_) => Mode::Symbolic,
            m => m.clone(),
        }
    }
}

/// Random point for `cfg` avoiding every internal atom and every `x_i = 0`.
pub fn on_shell_point(cfg: &ExternalConfig, seed: u64) -> Result<Bindings> {
    let table = KinematicTable::new(cfg);
    let mut avoid = table.internal_atoms()?;
    avoid.extend(cfg.offshell().iter().filter_map(|&l| cfg.x_symbol(l)).map(MultiPoly::var));
    random_kinematic_point(cfg, seed, &avoid)
}

/// The on-shell `n`-point tree sum is zero.
pub fn verify_vanishing(n: usize, mode: &Mode) -> Result<Report> {
    let cfg = ExternalConfig::on_shell(n)?;
    let report = Report::new("vanish").param("n", n);
    match mode.resolve(n) {
        Mode::Symbolic => {
            let amp = amplitude_sum(&cfg)?;
            Ok(report
                .param("mode", "symbolic")
                .check(amp.is_zero(), amp.to_string()))
        }
        Mode::Random(seeds) => {
            if seeds.is_empty() {
                return Err(Error::InvalidConfig("random mode needs at least one seed".into()));
            }
            let mut parts = Vec::new();
            for &seed in &seeds {
                let point = on_shell_point(&cfg, seed)?;
                let value = amplitude_at(&cfg, &point, Strategy::PerTree)?;
                parts.push(Report::new("point").param("seed", seed).zero_check(&value));
            }
            let report = report.param("mode", "random").param("seeds", seeds.len());
            Ok(report.all(parts, format!("0 at {} points", seeds.len())))
        }
        Mode::Auto(_) => unreachable!("resolved above"),
    }
}

/// With only leg `n` off-shell the tree sum equals `x_n b_{n-1}`.
pub fn verify_one_offshell(n: usize) -> Result<Report> {
    let cfg = ExternalConfig::new(n, [n])?;
    let amp = amplitude_sum(&cfg)?;
    let expected = MultiPoly::var(Symbol::x(n)) * b_closed_form(n - 1)?;
    let report = Report::new("one_offshell").param("n", n);
    Ok(match amp.as_poly() {
        Some(p) => report.zero_check(&(p - &expected)),
        None => report.failed(amp.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_on_shell_sums_vanish() {
        for n in 3..=5 {
            assert!(verify_vanishing(n, &Mode::Symbolic).unwrap().is_pass());
        }
        assert!(verify_vanishing(6, &Mode::Random(vec![1, 2])).unwrap().is_pass());
    }

    #[test]
    fn one_offshell_factorises() {
        for n in 3..=5 {
            assert!(verify_one_offshell(n).unwrap().is_pass());
        }
    }
}

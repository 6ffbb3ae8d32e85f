use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use super::AlgebraError;

/// A polynomial variable.
///
/// The derived ordering is the global monomial order: every `a_k` sorts
/// before `m2`, which sorts before the `x_i`, the dot products `s(i,j)`,
/// the coupling `g` and finally any formal symbol (ordered by name).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Diffeomorphism coefficient `a_k`, `k >= 1` (`a_0 = 1` is never a symbol).
    A(u16),
    /// Squared mass.
    M2,
    /// Off-shell variable `x_i = p_i^2 - m^2` of external leg `i >= 1`.
    X(u16),
    /// Dot product `p_i . p_j`, stored with `i <= j`.
    S(u16, u16),
    /// Quartic coupling.
    G,
    /// Any other named indeterminate (e.g. `lambda` in inverse relations).
    Formal(&'static str),
}

fn interner() -> &'static Mutex<BTreeSet<&'static str>> {
    static NAMES: OnceLock<Mutex<BTreeSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(BTreeSet::new()))
}

impl Symbol {
    pub fn a(k: usize) -> Symbol {
        assert!(k >= 1, "a_0 = 1 is not a symbol");
        Symbol::A(k as u16)
    }

    pub fn x(i: usize) -> Symbol {
        assert!(i >= 1, "legs are numbered from 1");
        Symbol::X(i as u16)
    }

    pub fn s(i: usize, j: usize) -> Symbol {
        assert!(i >= 1 && j >= 1, "legs are numbered from 1");
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        Symbol::S(lo as u16, hi as u16)
    }

    /// Interns `name` as a formal symbol. Names that would print as one of
    /// the structured symbols are rejected.
    pub fn formal(name: &str) -> Result<Symbol, AlgebraError> {
        let valid_ident = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_ident || parse_structured(name).is_some() {
            return Err(AlgebraError::InvalidSymbol(name.to_string()));
        }
        let mut names = interner().lock().expect("symbol interner poisoned");
        if let Some(existing) = names.get(name) {
            return Ok(Symbol::Formal(existing));
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        names.insert(leaked);
        Ok(Symbol::Formal(leaked))
    }

    /// Parses the printed form of any symbol.
    pub fn parse(name: &str) -> Result<Symbol, AlgebraError> {
        match parse_structured(name) {
            Some(sym) => Ok(sym),
            None => Symbol::formal(name),
        }
    }

    /// Weight in the a-grading: `a_k` has weight `k`, `g` has `g_weight`.
    pub fn grading(&self, g_weight: u32) -> u32 {
        match self {
            Symbol::A(k) => *k as u32,
            Symbol::G => g_weight,
            _ => 0,
        }
    }

    /// True for `m2`, `x_i` and `s(i,j)`.
    pub fn is_kinematic(&self) -> bool {
        matches!(self, Symbol::M2 | Symbol::X(_) | Symbol::S(..))
    }
}

fn parse_index(digits: &str) -> Option<u16> {
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0')
    {
        return None;
    }
    digits.parse().ok()
}

fn parse_structured(name: &str) -> Option<Symbol> {
    match name {
        "m2" => return Some(Symbol::M2),
        "g" => return Some(Symbol::G),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix('a') {
        return parse_index(rest).map(Symbol::A);
    }
    if let Some(rest) = name.strip_prefix('x') {
        return parse_index(rest).map(Symbol::X);
    }
    if let Some(rest) = name.strip_prefix('s') {
        let (i, j) = rest.split_once('_')?;
        let (i, j) = (parse_index(i)?, parse_index(j)?);
        return (i <= j).then_some(Symbol::S(i, j));
    }
    None
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::A(k) => write!(f, "a{k}"),
            Symbol::M2 => f.write_str("m2"),
            Symbol::X(i) => write!(f, "x{i}"),
            Symbol::S(i, j) => write!(f, "s{i}_{j}"),
            Symbol::G => f.write_str("g"),
            Symbol::Formal(name) => f.write_str(name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_order() {
        let mut syms = [
            Symbol::G,
            Symbol::s(2, 1),
            Symbol::x(3),
            Symbol::M2,
            Symbol::a(2),
            Symbol::a(1),
            Symbol::formal("lambda").unwrap(),
        ];
        syms.sort();
        let printed: Vec<String> = syms.iter().map(|s| s.to_string()).collect();
        assert_eq!(printed, ["a1", "a2", "m2", "x3", "s1_2", "g", "lambda"]);
    }

    #[test]
    fn parse_round_trip() {
        for name in ["a12", "m2", "x4", "s3_7", "g", "lambda", "t"] {
            assert_eq!(Symbol::parse(name).unwrap().to_string(), name);
        }
        assert!(Symbol::formal("a3").is_err());
        assert!(Symbol::formal("3x").is_err());
        assert_eq!(Symbol::formal("mu").unwrap(), Symbol::formal("mu").unwrap());
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::MultiPoly;
use crate::bell::{
    b_closed_form, verify_ab, verify_bellprod, verify_bgw_inverse, verify_bparts, verify_classical, verify_equiv,
    verify_fg, verify_shift, Lambda,
};
use crate::error::{Error, Result};
use crate::graphs::{
    bubble, minimal_cuts, sunset, triangle, verify_cut_vanishing, verify_gluing, verify_gluing_family,
    verify_symmetry_oracle,
};
use crate::interacting::{verify_interacting, verify_phi4_composition};
use crate::offshell::{
    verify_dual_reading, verify_er_split, verify_offshell_decomposition_cutoff, verify_twice_marked, MetaReading,
};
use crate::report::{Report, Status};
use crate::trees::{
    b_doubleprime_by_partitions, b_doubleprime_recursive, b_full_recursive, b_prime_recursive, b_via_definition,
    expanded_vertex_count, tree_count, trees_by_insertion, verify_one_offshell, verify_vanishing, Mode,
};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Bell,
    Bn,
    Vanish,
    Offshell,
    Gluing,
    Interacting,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bell,
        Suite::Bn,
        Suite::Vanish,
        Suite::Offshell,
        Suite::Gluing,
        Suite::Interacting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bell => "bell",
            Suite::Bn => "bn",
            Suite::Vanish => "vanish",
            Suite::Offshell => "offshell",
            Suite::Gluing => "gluing",
            Suite::Interacting => "interacting",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeChoice {
    Symbolic,
    Random,
}

/// Knobs shared by all suites. `None` selects the suite's default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub n: Option<usize>,
    pub max_n: Option<usize>,
    pub mode: Option<ModeChoice>,
    /// Number of random points per randomized check.
    pub seeds: usize,
    /// First seed; point `i` uses `seed + i`.
    pub seed: u64,
    pub grading_cutoff: Option<usize>,
}

impl Default for SuiteParams {
    fn default() -> SuiteParams {
        SuiteParams {
            n: None,
            max_n: None,
            mode: None,
            seeds: 5,
            seed: 1,
            grading_cutoff: None,
        }
    }
}

impl SuiteParams {
    fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }

    fn mode(&self) -> Mode {
        match self.mode {
            Some(ModeChoice::Symbolic) => Mode::Symbolic,
            Some(ModeChoice::Random) => Mode::Random(self.seed_list()),
            None => Mode::Auto(self.seed_list()),
        }
    }

    /// Sizes to check: just `n` if given, else `lo..=max_n` (default `hi`).
    fn range(&self, lo: usize, hi: usize) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => (lo..=self.max_n.unwrap_or(hi)).collect(),
        }
    }

    /// Rejects parameter combinations no suite can run.
    pub fn validate(&self, suite: Suite) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.mode == Some(ModeChoice::Random) && self.seeds == 0 {
            return bad("random mode needs --seeds >= 1".into());
        }
        let (lo, hi) = match suite {
            Suite::Bell => (1, 12),
            Suite::Bn => (1, 8),
            Suite::Vanish => (3, 9),
            Suite::Offshell => (3, 7),
            Suite::Gluing => (2, 4),
            Suite::Interacting => (4, 8),
            Suite::All => (4, 4),
        };
        for (flag, v) in [("--n", self.n), ("--max-n", self.max_n)] {
            if let Some(v) = v {
                if suite == Suite::All {
                    return bad(format!("{flag} is not accepted by the all suite"));
                }
                if v < lo || v > hi {
                    return bad(format!("{flag} {v} outside {lo}..={hi} for suite {suite}"));
                }
            }
        }
        if self.grading_cutoff.is_some() && !matches!(suite, Suite::Offshell | Suite::All) {
            return bad("--grading-cutoff applies to the offshell suite only".into());
        }
        Ok(())
    }

    fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(n) = self.n {
            m.insert("n".into(), n.to_string());
        }
        if let Some(n) = self.max_n {
            m.insert("max_n".into(), n.to_string());
        }
        if let Some(mode) = self.mode {
            m.insert("mode".into(), format!("{mode:?}").to_lowercase());
        }
        if let Some(c) = self.grading_cutoff {
            m.insert("grading_cutoff".into(), c.to_string());
        }
        m.insert("seeds".into(), self.seeds.to_string());
        m
    }
}

/// Reference data read from the golden directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Golden {
    /// `n` to the printed `b_n`.
    pub bn: BTreeMap<usize, String>,
    /// `n` to `(tree count, expanded vertex count)`.
    pub census: BTreeMap<usize, (u128, u128)>,
}

pub const GOLDEN_BN_MAX: usize = 8;
pub const GOLDEN_CENSUS_MAX: usize = 8;

impl Golden {
    pub fn render_bn() -> Result<String> {
        let mut out = String::new();
        for n in 1..=GOLDEN_BN_MAX {
            out.push_str(&format!("b{n} = {}\n", b_closed_form(n)?));
        }
        Ok(out)
    }

    pub fn render_census() -> Result<String> {
        let mut out = String::new();
        for n in 3..=GOLDEN_CENSUS_MAX {
            out.push_str(&format!(
                "n={n} trees={} expanded={}\n",
                tree_count(n),
                expanded_vertex_count(n)?
            ));
        }
        Ok(out)
    }

    pub fn parse(bn: &str, census: &str) -> Result<Golden> {
        let bad = |l: &str| Error::InvalidConfig(format!("malformed golden line `{l}`"));
        let mut golden = Golden::default();
        for line in bn.lines().filter(|l| !l.trim().is_empty()) {
            let (lhs, rhs) = line.split_once(" = ").ok_or_else(|| bad(line))?;
            let n = lhs.strip_prefix('b').and_then(|k| k.parse().ok()).ok_or_else(|| bad(line))?;
            golden.bn.insert(n, rhs.trim().to_string());
        }
        for line in census.lines().filter(|l| !l.trim().is_empty()) {
            let mut fields = BTreeMap::new();
            for word in line.split_whitespace() {
                let (k, v) = word.split_once('=').ok_or_else(|| bad(line))?;
                fields.insert(k, v.parse::<u128>().map_err(|_| bad(line))?);
            }
            match (fields.get("n"), fields.get("trees"), fields.get("expanded")) {
                (Some(&n), Some(&t), Some(&e)) => {
                    golden.census.insert(n as usize, (t, e));
                }
                _ => return Err(bad(line)),
            }
        }
        Ok(golden)
    }
}

/// Outcome of one suite run; serialized as the versioned JSON report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub version: String,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub cases: Vec<Report>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn case(result: Result<Report>, name: &str, params: &[(&str, String)]) -> Report {
    result.unwrap_or_else(|e| {
        let mut r = Report::new(name);
        for (k, v) in params {
            r = r.param(k, v);
        }
        r.failed(format!("error: {e}"))
    })
}

fn bell_suite(p: &SuiteParams) -> Vec<Report> {
    let max = p.max_n.or(p.n).unwrap_or(8);
    let mut out = Vec::new();
    for n in 1..=max {
        for k in 1..=n {
            let ps = [("n", n.to_string()), ("k", k.to_string())];
            out.push(case(verify_shift(n, k), "bell.shift", &ps));
            out.push(case(verify_classical(n, k), "bell.classical", &ps));
            out.push(case(verify_bparts(n, k), "bell.bparts", &ps));
        }
    }
    for k in 1..=max {
        out.push(case(verify_fg(k, max), "bell.fg", &[("k", k.to_string())]));
    }
    for s in 0..=3 {
        out.push(case(verify_ab(s, max), "bell.ab", &[("s", s.to_string())]));
        out.push(case(verify_bellprod(s, max), "bell.prod", &[("s", s.to_string())]));
    }
    out.push(case(verify_equiv(max), "bell.equiv", &[]));
    for a in -1..=2 {
        for b in -1..=2 {
            let ps = [("a", a.to_string()), ("b", b.to_string())];
            out.push(case(verify_bgw_inverse(a, b, &Lambda::Symbolic, max.min(6)), "bell.bgw", &ps));
        }
    }
    out
}

fn bn_routes(n: usize, seed: u64, golden: Option<&Golden>, all: &Routes) -> Report {
    let closed = match b_closed_form(n) {
        Ok(b) => b,
        Err(e) => return Report::new("bn").param("n", n).failed(format!("error: {e}")),
    };
    let mut parts = vec![Report::new("definition").zero_check(&match b_via_definition(n, seed) {
        Ok(b) => b - &closed,
        Err(e) => return Report::new("bn").param("n", n).failed(format!("definition: {e}")),
    })];
    for (name, list) in [
        ("full", &all.full),
        ("prime", &all.prime),
        ("doubleprime", &all.doubleprime),
        ("doubleprime_partitions", &all.partitions),
    ] {
        parts.push(match list {
            Ok(v) => Report::new(name).zero_check(&(&v[n - 1] - &closed)),
            Err(e) => Report::new(name).failed(format!("error: {e}")),
        });
    }
    if let Some(text) = golden.and_then(|g| g.bn.get(&n)) {
        parts.push(Report::new("golden").check(*text == closed.to_string(), text.clone()));
    }
    Report::new("bn").param("n", n).all(parts, closed.to_string())
}

struct Routes {
    full: Result<Vec<MultiPoly>>,
    prime: Result<Vec<MultiPoly>>,
    doubleprime: Result<Vec<MultiPoly>>,
    partitions: Result<Vec<MultiPoly>>,
}

fn bn_suite(p: &SuiteParams, golden: Option<&Golden>) -> Vec<Report> {
    let ns = match p.n {
        Some(n) => (1..=n).collect::<Vec<_>>(),
        None => (1..=p.max_n.unwrap_or(8)).collect(),
    };
    let max = ns.iter().copied().max().unwrap_or(1);
    let routes = Routes {
        full: b_full_recursive(max),
        prime: b_prime_recursive(max),
        doubleprime: b_doubleprime_recursive(max),
        partitions: b_doubleprime_by_partitions(max),
    };
    ns.into_iter().map(|n| bn_routes(n, p.seed, golden, &routes)).collect()
}

fn census_case(n: usize, golden: Option<&Golden>) -> Result<Report> {
    let count = tree_count(n);
    let oracle = trees_by_insertion(n)?.len() as u128;
    let mut parts = vec![Report::new("insertion").check(count == oracle, format!("{count} vs {oracle}"))];
    let expanded = expanded_vertex_count(n)?;
    if let Some(&(t, e)) = golden.and_then(|g| g.census.get(&n)) {
        parts.push(Report::new("golden").check((t, e) == (count, expanded), format!("trees={t} expanded={e}")));
    }
    Ok(Report::new("census")
        .param("n", n)
        .all(parts, format!("trees={count} expanded={expanded}")))
}

fn vanish_suite(p: &SuiteParams, golden: Option<&Golden>) -> Vec<Report> {
    let mode = p.mode();
    let mut out = Vec::new();
    for n in p.range(3, 7) {
        out.push(case(verify_vanishing(n, &mode), "vanish", &[("n", n.to_string())]));
    }
    for n in p.range(3, 6) {
        out.push(case(verify_one_offshell(n), "one_offshell", &[("n", n.to_string())]));
    }
    for n in p.range(3, 7) {
        out.push(case(census_case(n, golden), "census", &[("n", n.to_string())]));
    }
    out
}

fn offshell_suite(p: &SuiteParams) -> Vec<Report> {
    let seeds = p.seed_list();
    let mut out = Vec::new();
    for n in p.range(3, 6) {
        let ps = [("n", n.to_string())];
        out.push(case(verify_er_split(n), "er_split", &ps));
        if n >= 4 {
            out.push(case(verify_twice_marked(n), "twice_marked", &ps));
        }
        for j in 1..=2.min(n) {
            let cutoff = p.grading_cutoff.unwrap_or(n.saturating_sub(2));
            out.push(case(
                verify_offshell_decomposition_cutoff(n, j, &seeds, MetaReading::Shifted, cutoff),
                "offshell_decomposition",
                &[("n", n.to_string()), ("j", j.to_string())],
            ));
        }
    }
    out.push(case(verify_dual_reading(4, &seeds), "dual_reading", &[("n", "4".into())]));
    out
}

fn gluing_suite(p: &SuiteParams) -> Vec<Report> {
    let mut out = Vec::new();
    for (name, g) in [("bubble", bubble()), ("sunset", sunset()), ("triangle", triangle())] {
        match minimal_cuts(&g) {
            Ok(cuts) => {
                for cut in cuts {
                    out.push(case(verify_gluing(&g, &cut, g.n_vertices()), "gluing", &[("graph", name.into())]));
                }
            }
            Err(e) => out.push(Report::new("gluing").param("graph", name).failed(format!("error: {e}"))),
        }
    }
    for (n, l) in [(2, 1), (3, 1), (4, 1), (2, 2)] {
        let ps = [("n", n.to_string()), ("max_loops", l.to_string())];
        out.push(case(verify_gluing_family(n, l, 4), "gluing_family", &ps));
    }
    out.push(case(verify_symmetry_oracle(10, 3), "symmetry_oracle", &[]));
    out.push(case(verify_symmetry_oracle(7, 1), "symmetry_oracle", &[]));
    for n in p.range(2, 4) {
        let ps = [("n", n.to_string())];
        out.push(case(verify_cut_vanishing(n, 1), "cut_vanishing", &ps));
    }
    out.push(case(verify_cut_vanishing(2, 2), "cut_vanishing", &[("n", "2".into())]));
    out
}

fn interacting_suite(p: &SuiteParams) -> Vec<Report> {
    let seeds = p.seed_list();
    let mut out = vec![case(verify_phi4_composition(10), "phi4_coefficients", &[])];
    for n in p.range(4, 6) {
        out.push(case(verify_interacting(n, &seeds), "interacting", &[("n", n.to_string())]));
    }
    out
}

/// Runs `suite`. Cases come back sorted by name, then parameters.
pub fn run(suite: Suite, params: &SuiteParams, golden: Option<&Golden>) -> SuiteReport {
    let mut cases = match suite {
        Suite::Bell => bell_suite(params),
        Suite::Bn => bn_suite(params, golden),
        Suite::Vanish => vanish_suite(params, golden),
        Suite::Offshell => offshell_suite(params),
        Suite::Gluing => gluing_suite(params),
        Suite::Interacting => interacting_suite(params),
        Suite::All => Suite::ALL
            .into_iter()
            .flat_map(|s| run(s, params, golden).cases)
            .collect(),
    };
    cases.sort_by(|a, b| (&a.name, &a.params, &a.witness).cmp(&(&b.name, &b.params, &b.witness)));
    SuiteReport {
        schema: SCHEMA,
        suite: suite.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: params.seed,
        params: params.to_map(),
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_round_trip() {
        let g = Golden::parse(&Golden::render_bn().unwrap(), &Golden::render_census().unwrap()).unwrap();
        assert_eq!(g.bn[&2], "-2*a1");
        assert_eq!(g.census[&4], (4, 53));
    }

    #[test]
    fn small_bn_run_is_sorted_and_passes() {
        let params = SuiteParams {
            n: Some(4),
            ..SuiteParams::default()
        };
        let r = run(Suite::Bn, &params, None);
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.cases.len(), 4);
        assert_eq!(r.cases[1].witness, "-2*a1");
    }

    #[test]
    fn validation_rejects_out_of_range_sizes() {
        let p = SuiteParams {
            n: Some(2),
            ..SuiteParams::default()
        };
        assert!(p.validate(Suite::Vanish).is_err());
        assert!(p.validate(Suite::Gluing).is_ok());
        assert!(p.validate(Suite::All).is_err());
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}

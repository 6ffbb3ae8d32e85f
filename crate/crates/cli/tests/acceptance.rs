//! Acceptance criteria AC1..AC10, run one after another with a wall-clock
//! budget each. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use diffeo::algebra::MultiPoly;
use diffeo::bell::{
    b_closed_form, verify_ab, verify_bellprod, verify_bgw_inverse, verify_bparts, verify_classical, verify_equiv,
    verify_fg, verify_shift, Lambda,
};
use diffeo::graphs::{bubble, minimal_cuts, sunset, triangle, verify_gluing, verify_symmetry_oracle};
use diffeo::interacting::verify_interacting;
use diffeo::offshell::{verify_dual_reading, verify_er_split, verify_offshell_decomposition_with, MetaReading};
use diffeo::report::Report;
use diffeo::trees::{
    b_doubleprime_recursive, b_full_recursive, b_prime_recursive, b_via_definition, enumerate_trees,
    expanded_vertex_count, expanded_vertex_count_by_trees, tree_count, trees_by_insertion, verify_one_offshell,
    verify_vanishing, Mode,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn poly(s: &str) -> MultiPoly {
    s.parse().expect("valid polynomial")
}

fn require(r: diffeo::Result<Report>) -> Result<Report, String> {
    let r = r.map_err(|e| format!("error: {e}"))?;
    if r.is_pass() {
        Ok(r)
    } else {
        Err(r.to_string())
    }
}

fn ac1() -> Outcome {
    let printed = [
        poly("1"),
        poly("-2*a1"),
        poly("-6*a2 + 12*a1^2"),
        poly("-24*a3 + 120*a1*a2 - 120*a1^3"),
        poly("-120*a4 + 720*a1*a3 + 360*a2^2 - 2520*a1^2*a2 + 1680*a1^4"),
    ];
    let err = |e: diffeo::Error| e.to_string();
    let full = b_full_recursive(5).map_err(err)?;
    let prime = b_prime_recursive(5).map_err(err)?;
    let doubleprime = b_doubleprime_recursive(5).map_err(err)?;
    for (i, want) in printed.iter().enumerate() {
        let n = i + 1;
        let routes = [
            ("closed form", b_closed_form(n).map_err(err)?),
            ("definition", b_via_definition(n, 1).map_err(err)?),
            ("full recursion", full[i].clone()),
            ("b'", prime[i].clone()),
            ("b''", doubleprime[i].clone()),
        ];
        for (name, got) in routes {
            if &got != want {
                return Err(format!("b{n} via {name}: {got} != {want}"));
            }
        }
    }
    Ok("b1..b5 equal the printed list by five routes".into())
}

fn ac2() -> Outcome {
    let err = |e: diffeo::Error| e.to_string();
    let full = b_full_recursive(8).map_err(err)?;
    let prime = b_prime_recursive(8).map_err(err)?;
    let doubleprime = b_doubleprime_recursive(8).map_err(err)?;
    for n in 1..=8 {
        let closed = b_closed_form(n).map_err(err)?;
        let definition = b_via_definition(n, 1).map_err(err)?;
        for (name, got) in [
            ("definition", &definition),
            ("full recursion", &full[n - 1]),
            ("b'", &prime[n - 1]),
            ("b''", &doubleprime[n - 1]),
        ] {
            if got != &closed {
                return Err(format!("b{n} via {name}: {got} != {closed}"));
            }
        }
    }
    Ok("five routes agree for n <= 8".into())
}

fn ac3() -> Outcome {
    for n in 3..=5 {
        require(verify_vanishing(n, &Mode::Symbolic))?;
    }
    for n in 6..=7 {
        require(verify_vanishing(n, &Mode::Random(SEEDS.to_vec())))?;
    }
    Ok("symbolic n=3..5, 5 points each for n=6,7".into())
}

fn ac4() -> Outcome {
    let expected = [1u128, 4, 26, 236, 2752];
    for (n, &want) in (3..=7).zip(&expected) {
        let err = |e: diffeo::Error| e.to_string();
        let counted = tree_count(n);
        let generated = enumerate_trees(n).map_err(err)?.len() as u128;
        let inserted = trees_by_insertion(n).map_err(err)?.len() as u128;
        if counted != want || generated != want || inserted != want {
            return Err(format!("n={n}: count {counted}, generator {generated}, insertion {inserted}, want {want}"));
        }
    }
    let expanded = expanded_vertex_count(4).map_err(|e| e.to_string())?;
    let by_trees = expanded_vertex_count_by_trees(4).map_err(|e| e.to_string())?;
    if expanded != 53 || by_trees != 53 {
        return Err(format!("expanded trees at n=4: {expanded} / {by_trees}, want 53"));
    }
    Ok("1, 4, 26, 236, 2752; 53 expanded at n=4".into())
}

fn ac5() -> Outcome {
    let max = 8;
    let mut count = 0;
    for n in 1..=max {
        for k in 1..=n {
            require(verify_shift(n, k))?;
            require(verify_classical(n, k))?;
            require(verify_bparts(n, k))?;
            count += 3;
        }
    }
    for k in 1..=max {
        require(verify_fg(k, max))?;
        count += 1;
    }
    for s in 0..=3 {
        require(verify_ab(s, max))?;
        require(verify_bellprod(s, max))?;
        count += 2;
    }
    require(verify_equiv(max))?;
    count += 1;
    for a in -1..=2 {
        for b in -1..=2 {
            require(verify_bgw_inverse(a, b, &Lambda::Symbolic, 6))?;
            count += 1;
        }
    }
    Ok(format!("{count} identity checks"))
}

fn ac6() -> Outcome {
    for n in 3..=6 {
        require(verify_one_offshell(n))?;
    }
    Ok("x * b_(n-1) for n = 3..6".into())
}

fn ac7() -> Outcome {
    let dual = require(verify_dual_reading(4, &SEEDS))?;
    let reading = match dual.witness.as_str() {
        "shifted" => MetaReading::Shifted,
        "literal" => MetaReading::Literal,
        w => return Err(format!("unexpected reading `{w}`")),
    };
    require(verify_offshell_decomposition_with(4, 2, &SEEDS, reading))?;
    for n in 3..=5 {
        require(verify_er_split(n))?;
    }
    Ok(format!("A2 at n=4 under the {} reading; split for n = 3..5", dual.witness))
}

fn ac8() -> Outcome {
    let mut cuts = 0;
    for g in [bubble(), sunset(), triangle()] {
        for cut in minimal_cuts(&g).map_err(|e| e.to_string())? {
            require(verify_gluing(&g, &cut, g.n_vertices()))?;
            cuts += 1;
        }
    }
    let trivalent = require(verify_symmetry_oracle(10, 3))?;
    let all = require(verify_symmetry_oracle(8, 1))?;
    Ok(format!("{cuts} cuts glue to 1/Sym; oracle: {}; {}", trivalent.witness, all.witness))
}

fn ac9() -> Outcome {
    require(verify_interacting(4, &[]))?;
    require(verify_interacting(5, &[]))?;
    require(verify_interacting(6, &SEEDS))?;
    Ok("n=4 bare vertex, n=5 symbolic zero, n=6 zero at 5 points".into())
}

fn run_all(json: &Path) -> Result<(), String> {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden");
    let status = Command::new(env!("CARGO_BIN_EXE_diffeo"))
        .args(["run", "--suite", "all", "--seed", "1", "--json"])
        .arg(json)
        .arg("--golden-dir")
        .arg(&golden)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.code() != Some(0) {
        return Err(format!("run all exited with {status}"));
    }
    Ok(())
}

fn ac10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    run_all(&a)?;
    run_all(&b)?;
    let (x, y) = (std::fs::read(&a).map_err(|e| e.to_string())?, std::fs::read(&b).map_err(|e| e.to_string())?);
    if x != y {
        return Err("reports differ".into());
    }
    Ok(format!("two reports of {} bytes are identical", x.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", ac1, Some(Duration::from_secs(10))),
        ("AC2", ac2, Some(Duration::from_secs(180))),
        ("AC3", ac3, Some(Duration::from_secs(300))),
        ("AC4", ac4, None),
        ("AC5", ac5, Some(Duration::from_secs(120))),
        ("AC6", ac6, None),
        ("AC7", ac7, None),
        ("AC8", ac8, None),
        ("AC9", ac9, None),
        ("AC10", ac10, None),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == name) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("{name} PASS ({elapsed:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("{name} FAIL ({elapsed:.2?}) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::collections::BTreeMap;
use std::thread;

use crate::error::Result;
use crate::report::Report;

use super::cuts::{enumerate_graphs, minimal_cuts, verify_gluing_identity, PieceShape};
use super::graph::HalfEdgeGraph;
use super::iso::{symmetry_factor, symmetry_factor_brute_force};
use super::loops::loop_graphs;

/// Connected graphs with labelled legs, at most `max_half_edges`
/// half-edges and every vertex of degree at least `min_valence`, one per
/// isomorphism class.
pub fn graph_family(max_half_edges: usize, min_valence: usize) -> Vec<HalfEdgeGraph> {
    let mut out = Vec::new();
    let max_vertices = max_half_edges / min_valence.max(1);
    for v in 1..=max_vertices {
        for e in 0..=max_half_edges / 2 {
            for x in 0..=max_half_edges - 2 * e {
                if 2 * e + x < v * min_valence || 2 * e + x == 0 {
                    continue;
                }
                let shape = PieceShape {
                    n_vertices: v,
                    n_edges: e,
                    legs: (1..=x as u32).collect(),
                    cuts: BTreeMap::new(),
                    min_valence,
                };
                out.extend(enumerate_graphs(&shape));
            }
        }
    }
    out
}

/// [`symmetry_factor`] against [`symmetry_factor_brute_force`] on the whole
/// of [`graph_family`].
pub fn verify_symmetry_oracle(max_half_edges: usize, min_valence: usize) -> Result<Report> {
    let family = graph_family(max_half_edges, min_valence);
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(family.len().max(1));
    let chunk = family.len().div_ceil(workers).max(1);
    let mismatches: Vec<String> = thread::scope(|s| {
        let handles: Vec<_> = family
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .filter_map(|g| {
                            let (fast, slow) = (symmetry_factor(g), symmetry_factor_brute_force(g));
                            (fast != slow).then(|| format!("{g}: {fast} vs {slow}"))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let report = Report::new("symmetry_oracle")
        .param("max_half_edges", max_half_edges)
        .param("min_valence", min_valence)
        .param("graphs", family.len());
    Ok(match mismatches.first() {
        Some(m) => report.failed(m.clone()),
        None => report.passed(format!("{} graphs agree", family.len())),
    })
}

/// [`verify_gluing_identity`] on every minimal cut of every loop graph with
/// legs `1..=n`, at most `max_loops` loops and at most `max_vertices`
/// vertices. The witness counts the cuts whose data recurs elsewhere in
/// the same graph, where the weight is a multiple of `1/Sym`.
pub fn verify_gluing_family(n: usize, max_loops: usize, max_vertices: usize) -> Result<Report> {
    let mut parts = Vec::new();
    let (mut cases, mut repeated) = (0, 0);
    for l in 1..=max_loops {
        for g in loop_graphs(n, l).into_iter().filter(|g| g.n_vertices() <= max_vertices) {
            for cut in minimal_cuts(&g)? {
                let r = verify_gluing_identity(&g, &cut)?;
                if r.params.get("multiplicity").is_some_and(|m| m != "1") {
                    repeated += 1;
                }
                parts.push(r);
                cases += 1;
            }
        }
    }
    Ok(Report::new("gluing_family")
        .param("n", n)
        .param("max_loops", max_loops)
        .param("max_vertices", max_vertices)
        .param("cases", cases)
        .all(parts, format!("{cases} cuts, {repeated} with repeated data")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_agrees_on_small_graphs() {
        let r = verify_symmetry_oracle(7, 1).unwrap();
        assert!(r.is_pass(), "{r}");
    }

    #[test]
    fn gluing_holds_on_small_families() {
        let r = verify_gluing_family(2, 1, 4).unwrap();
        assert!(r.is_pass(), "{r}");
    }
}

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::report::Report;

use super::graph::{ExtTag, HalfEdgeGraph};
use super::iso::{isomorphic, symmetry_factor};

/// A minimal cut together with its component data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutData {
    /// Indices into [`HalfEdgeGraph::edges`].
    pub edges: Vec<usize>,
    /// Component of every vertex; components are numbered by first vertex.
    pub component_of: Vec<usize>,
    /// `x[i]`: original external legs in component `i`.
    pub x: Vec<usize>,
    /// `e[i][j]`: cut edges between components `i` and `j`.
    pub e: Vec<Vec<usize>>,
}

impl CutData {
    pub fn n_components(&self) -> usize {
        self.x.len()
    }
}

fn bits(mask: u64, len: usize) -> BTreeSet<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

fn n_components(g: &HalfEdgeGraph, removed: &BTreeSet<usize>) -> usize {
    g.components_without(removed).into_iter().max().map_or(0, |m| m + 1)
}

/// All minimal cuts of a connected graph, ordered by edge bitmask.
pub fn minimal_cuts(g: &HalfEdgeGraph) -> Result<Vec<CutData>> {
    if !g.is_connected() {
        return Err(Error::InvalidConfig("minimal cuts need a connected graph".into()));
    }
    let edges = g.edges();
    if edges.len() > 20 {
        return Err(Error::CutoffExceeded {
            what: "internal edges",
            value: edges.len(),
            cutoff: 20,
        });
    }
    let mut out = Vec::new();
    for mask in 1u64..1 << edges.len() {
        let cut = bits(mask, edges.len());
        let k = n_components(g, &cut);
        // Components only grow with the removed set, so checking the
        // subsets one edge smaller covers every proper subset.
        let minimal = cut.iter().all(|e| {
            let mut smaller = cut.clone();
            smaller.remove(e);
            n_components(g, &smaller) < k
        });
        if !minimal {
            continue;
        }
        let component_of = g.components_without(&cut);
        let mut x = vec![0; k];
        for h in g.externals() {
            x[component_of[g.vertex_of(h)]] += 1;
        }
        let mut e = vec![vec![0; k]; k];
        for &i in &cut {
            let (a, b) = edges[i];
            let (ca, cb) = (component_of[g.vertex_of(a)], component_of[g.vertex_of(b)]);
            e[ca][cb] += 1;
            e[cb][ca] += 1;
        }
        out.push(CutData {
            edges: cut.into_iter().collect(),
            component_of,
            x,
            e,
        });
    }
    Ok(out)
}

/// The components of `g` after the cut, each cut half-edge tagged with the
/// component on its other side.
pub fn cut_pieces(g: &HalfEdgeGraph, cut: &CutData) -> Vec<HalfEdgeGraph> {
    let cut_halves: BTreeSet<usize> = {
        let edges = g.edges();
        cut.edges.iter().flat_map(|&i| [edges[i].0, edges[i].1]).collect()
    };
    (0..cut.n_components())
        .map(|c| {
            let verts: Vec<usize> = (0..g.n_vertices()).filter(|&v| cut.component_of[v] == c).collect();
            let halves: Vec<usize> =
                (0..g.n_half_edges()).filter(|&h| cut.component_of[g.vertex_of(h)] == c).collect();
            let vi = |v: usize| verts.iter().position(|&u| u == v).expect("in component");
            let hi = |h: usize| halves.iter().position(|&u| u == h).expect("in component");
            let mut partner = Vec::new();
            let mut tags = Vec::new();
            for &h in &halves {
                if cut_halves.contains(&h) {
                    let other = g.partner(h).expect("cut half-edges are paired");
                    partner.push(None);
                    tags.push(Some(ExtTag::Cut(cut.component_of[g.vertex_of(other)])));
                } else {
                    partner.push(g.partner(h).map(hi));
                    tags.push(g.tag(h));
                }
            }
            let vertex_of = halves.iter().map(|&h| vi(g.vertex_of(h))).collect();
            HalfEdgeGraph::new(verts.len(), vertex_of, partner, tags).expect("piece is well formed")
        })
        .collect()
}

fn cut_class(g: &HalfEdgeGraph, j: usize) -> Vec<usize> {
    g.externals().into_iter().filter(|&h| g.tag(h) == Some(ExtTag::Cut(j))).collect()
}

fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if perm.len() == used.len() {
            f(perm);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                perm.push(i);
                rec(perm, used, f);
                perm.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], f);
}

/// Glues `pieces` along their cut half-edges in every way: for each pair
/// `i < j` the `Cut(j)` half-edges of piece `i` are matched with the
/// `Cut(i)` half-edges of piece `j` by each of the `e_ij!` bijections.
pub fn glue(pieces: &[HalfEdgeGraph]) -> Result<Vec<HalfEdgeGraph>> {
    let k = pieces.len();
    let mut offset_h = Vec::with_capacity(k);
    let mut offset_v = Vec::with_capacity(k);
    let (mut nh, mut nv) = (0, 0);
    for (i, p) in pieces.iter().enumerate() {
        offset_h.push(nh);
        offset_v.push(nv);
        nh += p.n_half_edges();
        nv += p.n_vertices();
        for h in p.externals() {
            if let Some(ExtTag::Cut(j)) = p.tag(h) {
                if j >= k || j == i {
                    return Err(Error::IncompatiblePartitions(format!("cut class {j} has no partner piece")));
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (cut_class(&pieces[i], j), cut_class(&pieces[j], i));
            if a.len() != b.len() {
                return Err(Error::IncompatiblePartitions(format!(
                    "e_{i}{j} = {} but e_{j}{i} = {}",
                    a.len(),
                    b.len()
                )));
            }
            let a = a.into_iter().map(|h| h + offset_h[i]).collect::<Vec<_>>();
            let b = b.into_iter().map(|h| h + offset_h[j]).collect::<Vec<_>>();
            pairs.push((a, b));
        }
    }
    let mut vertex_of = Vec::with_capacity(nh);
    let mut partner = Vec::with_capacity(nh);
    let mut tags = Vec::with_capacity(nh);
    for (i, p) in pieces.iter().enumerate() {
        for h in 0..p.n_half_edges() {
            vertex_of.push(p.vertex_of(h) + offset_v[i]);
            partner.push(p.partner(h).map(|q| q + offset_h[i]));
            tags.push(p.tag(h));
        }
    }
    let mut out = Vec::new();
    fn rec(
        pairs: &[(Vec<usize>, Vec<usize>)],
        partner: &mut Vec<Option<usize>>,
        tags: &mut Vec<Option<ExtTag>>,
        done: &mut dyn FnMut(&[Option<usize>], &[Option<ExtTag>]),
    ) {
        let Some(((a, b), rest)) = pairs.split_first() else {
            done(partner, tags);
            return;
        };
        for_each_permutation(a.len(), &mut |perm| {
            for (idx, &s) in perm.iter().enumerate() {
                let (x, y) = (a[idx], b[s]);
                partner[x] = Some(y);
                partner[y] = Some(x);
                tags[x] = None;
                tags[y] = None;
            }
            rec(rest, partner, tags, done);
        });
    }
    let n_vertices = nv;
    rec(&pairs, &mut partner, &mut tags, &mut |p, t| {
        out.push(
            HalfEdgeGraph::new(n_vertices, vertex_of.clone(), p.to_vec(), t.to_vec())
                .expect("gluing keeps the graph well formed"),
        );
    });
    Ok(out)
}

/// External data of one piece to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceShape {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub legs: Vec<u32>,
    /// Cut class to number of half-edges.
    pub cuts: BTreeMap<usize, usize>,
    pub min_valence: usize,
}

fn multisets(options: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(options: usize, size: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for o in from..options {
            cur.push(o);
            rec(options, size, o, cur, f);
            cur.pop();
        }
    }
    rec(options, size, 0, &mut Vec::with_capacity(size), f);
}

fn tuples(options: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    let mut cur = vec![0; size];
    loop {
        f(&cur);
        let Some(i) = (0..size).find(|&i| cur[i] + 1 < options) else {
            return;
        };
        cur[i] += 1;
        for c in &mut cur[..i] {
            *c = 0;
        }
    }
}

/// Connected graphs of the given shape, one per isomorphism class.
pub fn enumerate_graphs(shape: &PieceShape) -> Vec<HalfEdgeGraph> {
    let n = shape.n_vertices;
    if n == 0 {
        return Vec::new();
    }
    let vertex_pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    let cut_list: Vec<usize> = shape.cuts.iter().flat_map(|(&c, &m)| std::iter::repeat_n(c, m)).collect();
    let mut classes: BTreeMap<Vec<usize>, Vec<HalfEdgeGraph>> = BTreeMap::new();
    multisets(vertex_pairs.len(), shape.n_edges, &mut |edge_choice| {
        tuples(n, shape.legs.len(), &mut |leg_at| {
            // Cut half-edges of one class are interchangeable, so place them
            // as multisets class by class.
            let mut placements: Vec<Vec<usize>> = vec![Vec::new()];
            for &m in shape.cuts.values() {
                let mut next = Vec::new();
                for prefix in &placements {
                    multisets(n, m, &mut |choice| {
                        let mut p = prefix.clone();
                        p.extend_from_slice(choice);
                        next.push(p);
                    });
                }
                placements = next;
            }
            for cut_at in placements {
                let mut vertex_of = Vec::new();
                let mut partner = Vec::new();
                let mut tags = Vec::new();
                for &e in edge_choice {
                    let (u, v) = vertex_pairs[e];
                    let h = vertex_of.len();
                    vertex_of.extend([u, v]);
                    partner.extend([Some(h + 1), Some(h)]);
                    tags.extend([None, None]);
                }
                for (i, &l) in shape.legs.iter().enumerate() {
                    vertex_of.push(leg_at[i]);
                    partner.push(None);
                    tags.push(Some(ExtTag::Leg(l)));
                }
                for (i, &c) in cut_list.iter().enumerate() {
                    vertex_of.push(cut_at[i]);
                    partner.push(None);
                    tags.push(Some(ExtTag::Cut(c)));
                }
                let Ok(g) = HalfEdgeGraph::new(n, vertex_of, partner, tags) else {
                    continue;
                };
                if g.min_degree() < shape.min_valence || !g.is_connected() {
                    continue;
                }
                let mut key: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
                key.sort_unstable();
                let bucket = classes.entry(key).or_default();
                if !bucket.iter().any(|h| isomorphic(h, &g)) {
                    bucket.push(g);
                }
            }
        });
    });
    classes.into_values().flatten().collect()
}

fn compositions(total: usize, parts: usize, min: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(left: usize, parts: usize, min: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() + 1 == parts {
            if left >= min {
                cur.push(left);
                f(cur);
                cur.pop();
            }
            return;
        }
        for v in min..=left {
            cur.push(v);
            rec(left - v, parts, min, cur, f);
            cur.pop();
        }
    }
    if parts == 0 {
        return;
    }
    rec(total, parts, min, &mut Vec::new(), f);
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Coefficient of `g` in the sum over compatible tuples of
/// `F(H_1..H_k) / prod Sym(H_i)`.
/// The pieces have exactly as many vertices in total as `g`.
pub fn gluing_coefficient(g: &HalfEdgeGraph, cut: &CutData) -> Result<BigRational> {
    let k = cut.n_components();
    let pieces = cut_pieces(g, cut);
    let total_edges = g.edges().len() - cut.edges.len();
    let min_valence = g.min_degree();
    let mut coefficient = ratio(0, 1);
    let mut cache: BTreeMap<(usize, usize, usize), Vec<(HalfEdgeGraph, u64)>> = BTreeMap::new();
    let mut failure = None;
    compositions(g.n_vertices(), k, 1, &mut |vs| {
        compositions(total_edges, k, 0, &mut |es| {
            let families: Vec<Vec<(HalfEdgeGraph, u64)>> = (0..k)
                .map(|i| {
                    cache
                        .entry((i, vs[i], es[i]))
                        .or_insert_with(|| {
                            let shape = PieceShape {
                                n_vertices: vs[i],
                                n_edges: es[i],
                                legs: pieces[i].leg_labels(),
                                cuts: (0..k)
                                    .filter(|&j| cut.e[i][j] > 0)
                                    .map(|j| (j, cut.e[i][j]))
                                    .collect(),
                                min_valence,
                            };
                            enumerate_graphs(&shape)
                                .into_iter()
                                .map(|h| {
                                    let s = symmetry_factor(&h);
                                    (h, s)
                                })
                                .collect()
                        })
                        .clone()
                })
                .collect();
            let mut idx = vec![0usize; k];
            if families.iter().any(Vec::is_empty) {
                return;
            }
            loop {
                let tuple: Vec<HalfEdgeGraph> = (0..k).map(|i| families[i][idx[i]].0.clone()).collect();
                let sym: u64 = (0..k).map(|i| families[i][idx[i]].1).product();
                match glue(&tuple) {
                    Ok(glued) => {
                        let hits = glued.iter().filter(|x| isomorphic(x, g)).count() as u64;
                        if hits > 0 {
                            coefficient += ratio(hits, sym);
                        }
                    }
                    Err(e) => failure = Some(e),
                }
                let Some(i) = (0..k).find(|&i| idx[i] + 1 < families[i].len()) else {
                    break;
                };
                idx[i] += 1;
                for j in &mut idx[..i] {
                    *j = 0;
                }
            }
        });
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(coefficient),
    }
}

/// `g` appears with weight exactly `1/Sym(g)` among the gluings of
/// compatible tuples across the minimal cut `cut`.
pub fn verify_gluing(g: &HalfEdgeGraph, cut: &CutData, vertex_budget: usize) -> Result<Report> {
    let report = Report::new("gluing")
        .param("graph", g)
        .param("cut", format!("{:?}", cut.edges));
    if vertex_budget < g.n_vertices() {
        return Ok(report.skipped(format!("vertex budget {vertex_budget} < {}", g.n_vertices())));
    }
    let coefficient = gluing_coefficient(g, cut)?;
    let expected = ratio(1, symmetry_factor(g));
    Ok(report.check(coefficient == expected, format!("coefficient {coefficient}, 1/Sym = {expected}")))
}

/// Number of ways to read `g` as a gluing across a minimal cut with the
/// same ordered component data as `cut`: pairs of a minimal cut and an
/// ordering of its components whose leg sets and cut counts match.
pub fn cut_multiplicity(g: &HalfEdgeGraph, cut: &CutData) -> Result<u64> {
    let k = cut.n_components();
    let legs_of = |c: &CutData| -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); c.n_components()];
        for h in g.externals() {
            if let Some(ExtTag::Leg(l)) = g.tag(h) {
                out[c.component_of[g.vertex_of(h)]].push(l);
            }
        }
        for v in &mut out {
            v.sort_unstable();
        }
        out
    };
    let target = legs_of(cut);
    let mut count = 0;
    for other in minimal_cuts(g)?.iter().filter(|c| c.n_components() == k && c.edges.len() == cut.edges.len()) {
        let legs = legs_of(other);
        for_each_permutation(k, &mut |perm| {
            let ok = (0..k).all(|i| {
                legs[perm[i]] == target[i] && (0..k).all(|j| other.e[perm[i]][perm[j]] == cut.e[i][j])
            });
            count += u64::from(ok);
        });
    }
    Ok(count)
}

/// The counting identity behind [`verify_gluing`] in full: the coefficient
/// of `g` is [`cut_multiplicity`] over `Sym(g)`.
pub fn verify_gluing_identity(g: &HalfEdgeGraph, cut: &CutData) -> Result<Report> {
    let coefficient = gluing_coefficient(g, cut)?;
    let multiplicity = cut_multiplicity(g, cut)?;
    let expected = ratio(multiplicity, symmetry_factor(g));
    Ok(Report::new("gluing_identity")
        .param("graph", g)
        .param("cut", format!("{:?}", cut.edges))
        .param("multiplicity", multiplicity)
        .check(coefficient == expected, format!("coefficient {coefficient}, expected {expected}")))
}

/// Minimal cut through at least one cycle edge.
pub fn cuts_a_cycle(g: &HalfEdgeGraph, cut: &CutData) -> bool {
    let k0 = n_components(g, &BTreeSet::new());
    cut.edges.iter().any(|&e| n_components(g, &BTreeSet::from([e])) == k0)
}

/// Every piece of the cut is a tree.
pub fn is_complete(g: &HalfEdgeGraph, cut: &CutData) -> bool {
    cut_pieces(g, cut).iter().all(|p| p.loop_number() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph::{bubble, sunset, triangle, GraphBuilder};

    #[test]
    fn cuts_of_small_graphs() {
        let b = minimal_cuts(&bubble()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].edges, vec![0, 1]);
        assert_eq!((b[0].x.clone(), b[0].e[0][1]), (vec![1, 1], 2));
        let s = minimal_cuts(&sunset()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].edges.len(), 3);
        assert_eq!(minimal_cuts(&triangle()).unwrap().len(), 4);
        let path = GraphBuilder::new(3).edge(0, 1).edge(1, 2).leg(0, 1).leg(2, 2).build().unwrap();
        let p = minimal_cuts(&path).unwrap();
        assert_eq!(p.iter().map(|c| c.edges.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn glue_rejects_mismatched_partitions() {
        let a = GraphBuilder::new(1).leg(0, 1).cut(0, 1).cut(0, 1).build().unwrap();
        let b = GraphBuilder::new(1).leg(0, 2).cut(0, 0).build().unwrap();
        assert!(matches!(glue(&[a, b]), Err(Error::IncompatiblePartitions(_))));
    }

    #[test]
    fn glue_counts_bijections() {
        let a = GraphBuilder::new(1).leg(0, 1).cut(0, 1).cut(0, 1).cut(0, 1).build().unwrap();
        let b = GraphBuilder::new(1).leg(0, 2).cut(0, 0).cut(0, 0).cut(0, 0).build().unwrap();
        let glued = glue(&[a, b]).unwrap();
        assert_eq!(glued.len(), 6);
        assert!(glued.iter().all(|g| isomorphic(g, &sunset())));
    }

    #[test]
    fn pieces_reglue_to_the_graph() {
        for g in [bubble(), sunset(), triangle()] {
            for cut in minimal_cuts(&g).unwrap() {
                let glued = glue(&cut_pieces(&g, &cut)).unwrap();
                assert!(glued.iter().any(|x| isomorphic(x, &g)));
            }
        }
    }

    #[test]
    fn gluing_weights_are_inverse_symmetry_factors() {
        for g in [bubble(), sunset(), triangle()] {
            for cut in minimal_cuts(&g).unwrap() {
                let r = verify_gluing(&g, &cut, g.n_vertices()).unwrap();
                assert!(r.is_pass(), "{r}");
            }
        }
    }
}

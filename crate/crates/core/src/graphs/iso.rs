use std::collections::BTreeMap;

use super::graph::{ExtTag, HalfEdgeGraph};

/// Per-vertex invariant used to refine candidate vertex images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VertexColor {
    degree: usize,
    self_loops: usize,
    tags: Vec<ExtTag>,
    neighbour_degrees: Vec<usize>,
}

fn colors(g: &HalfEdgeGraph) -> Vec<VertexColor> {
    let mut out: Vec<VertexColor> = (0..g.n_vertices())
        .map(|v| VertexColor {
            degree: g.degree(v),
            self_loops: 0,
            tags: Vec::new(),
            neighbour_degrees: Vec::new(),
        })
        .collect();
    for h in 0..g.n_half_edges() {
        let v = g.vertex_of(h);
        match g.partner(h) {
            Some(p) if g.vertex_of(p) == v => out[v].self_loops += 1,
            Some(p) => {
                let d = g.degree(g.vertex_of(p));
                out[v].neighbour_degrees.push(d);
            }
            None => out[v].tags.push(g.tag(h).expect("unpaired half-edges are tagged")),
        }
    }
    for c in &mut out {
        c.tags.sort();
        c.neighbour_degrees.sort_unstable();
    }
    out
}

fn tag_matches(a: Option<ExtTag>, b: Option<ExtTag>) -> bool {
    a == b
}

struct Search<'a> {
    a: &'a HalfEdgeGraph,
    b: &'a HalfEdgeGraph,
    order: Vec<usize>,
    ca: Vec<VertexColor>,
    cb: Vec<VertexColor>,
    sigma: Vec<Option<usize>>,
    used: Vec<bool>,
    pi: Vec<Option<usize>>,
    pi_inv: Vec<Option<usize>>,
    limit: usize,
    found: usize,
}

impl Search<'_> {
    /// Tries `sigma(h) = k` and propagates through the pairing. Bindings
    /// are recorded in `trail` for [`Search::undo`].
    fn bind(&mut self, h: usize, k: usize, trail: &mut Vec<(usize, Option<usize>)>) -> bool {
        if let Some(s) = self.sigma[h] {
            return s == k;
        }
        if self.used[k] || !tag_matches(self.a.tag(h), self.b.tag(k)) {
            return false;
        }
        let (va, vb) = (self.a.vertex_of(h), self.b.vertex_of(k));
        match self.pi[va] {
            Some(img) if img != vb => return false,
            Some(_) => {}
            None => {
                if self.pi_inv[vb].is_some() || self.ca[va] != self.cb[vb] {
                    return false;
                }
                self.pi[va] = Some(vb);
                self.pi_inv[vb] = Some(va);
                trail.push((usize::MAX, Some(va)));
            }
        }
        self.sigma[h] = Some(k);
        self.used[k] = true;
        trail.push((h, None));
        match (self.a.partner(h), self.b.partner(k)) {
            (None, None) => true,
            (Some(p), Some(q)) => self.bind(p, q, trail),
            _ => false,
        }
    }

    fn undo(&mut self, trail: Vec<(usize, Option<usize>)>) {
        for (h, v) in trail.into_iter().rev() {
            if let Some(va) = v {
                let vb = self.pi[va].take().expect("bound vertex");
                self.pi_inv[vb] = None;
            } else {
                let k = self.sigma[h].take().expect("bound half-edge");
                self.used[k] = false;
            }
        }
    }

    fn run(&mut self, depth: usize) {
        if self.found >= self.limit {
            return;
        }
        let Some(i) = (depth..self.order.len()).find(|&i| self.sigma[self.order[i]].is_none()) else {
            self.found += 1;
            return;
        };
        let (h, next) = (self.order[i], i + 1);
        for k in 0..self.b.n_half_edges() {
            let mut trail = Vec::new();
            if self.bind(h, k, &mut trail) {
                self.run(next);
            }
            self.undo(trail);
            if self.found >= self.limit {
                return;
            }
        }
    }
}

/// Half-edge order in which each new half-edge sits at a vertex already
/// reached when possible, so vertex images propagate early.
fn search_order(g: &HalfEdgeGraph) -> Vec<usize> {
    let n = g.n_half_edges();
    let is_leg = |h: usize| matches!(g.tag(h), Some(ExtTag::Leg(_)));
    let mut starts: Vec<usize> = (0..g.n_vertices()).collect();
    starts.sort_by_key(|&v| !(0..n).any(|h| g.vertex_of(h) == v && is_leg(h)));
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; g.n_vertices()];
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let mut here: Vec<usize> = (0..n).filter(|&h| g.vertex_of(h) == v).collect();
            here.sort_by_key(|&h| !is_leg(h));
            for h in here {
                order.push(h);
                if let Some(p) = g.partner(h) {
                    let u = g.vertex_of(p);
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    order
}

fn count_maps(a: &HalfEdgeGraph, b: &HalfEdgeGraph, limit: usize) -> usize {
    if a.n_vertices() != b.n_vertices() || a.n_half_edges() != b.n_half_edges() {
        return 0;
    }
    let (ca, cb) = (colors(a), colors(b));
    let (mut sa, mut sb) = (ca.clone(), cb.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return 0;
    }
    let mut search = Search {
        a,
        b,
        order: search_order(a),
        ca,
        cb,
        sigma: vec![None; a.n_half_edges()],
        used: vec![false; a.n_half_edges()],
        pi: vec![None; a.n_vertices()],
        pi_inv: vec![None; a.n_vertices()],
        limit,
        found: 0,
    };
    search.run(0);
    search.found
}

/// Number of half-edge permutations preserving incidence, pairing and
/// external tags (legs fixed, cut classes preserved).
pub fn symmetry_factor(g: &HalfEdgeGraph) -> u64 {
    count_maps(g, g, usize::MAX) as u64
}

/// Isomorphism preserving external tags.
pub fn isomorphic(a: &HalfEdgeGraph, b: &HalfEdgeGraph) -> bool {
    count_maps(a, b, 1) > 0
}

/// Reference count of [`symmetry_factor`]: tests every permutation of the
/// half-edges that keeps each external tag class in place. Legs carry
/// unique labels, so only internal and cut half-edges ever move.
pub fn symmetry_factor_brute_force(g: &HalfEdgeGraph) -> u64 {
    let n = g.n_half_edges();
    let mut groups: BTreeMap<Option<ExtTag>, Vec<usize>> = BTreeMap::new();
    for h in 0..n {
        groups.entry(g.tag(h)).or_default().push(h);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let is_auto = |s: &[usize]| -> bool {
        let mut pi = vec![None; g.n_vertices()];
        for h in 0..n {
            if g.partner(h).map(|p| s[p]) != g.partner(s[h]) {
                return false;
            }
            let (v, w) = (g.vertex_of(h), g.vertex_of(s[h]));
            match pi[v] {
                None => pi[v] = Some(w),
                Some(x) if x != w => return false,
                _ => {}
            }
        }
        // Every vertex carries a half-edge, so pi is total; a half-edge
        // bijection inducing a total vertex map is then vertex-bijective.
        true
    };
    let mut sigma: Vec<usize> = (0..n).collect();
    fn rec(groups: &[Vec<usize>], sigma: &mut Vec<usize>, check: &dyn Fn(&[usize]) -> bool) -> u64 {
        let Some((group, rest)) = groups.split_first() else {
            return u64::from(check(sigma));
        };
        let mut images = group.clone();
        let mut total = 0;
        // Heap's algorithm over the images of this group.
        let m = images.len();
        let mut c = vec![0usize; m];
        let assign = |sigma: &mut Vec<usize>, images: &[usize]| {
            for (h, &img) in group.iter().zip(images) {
                sigma[*h] = img;
            }
        };
        assign(sigma, &images);
        total += rec(rest, sigma, check);
        let mut i = 0;
        while i < m {
            if c[i] < i {
                if i % 2 == 0 {
                    images.swap(0, i);
                } else {
                    images.swap(c[i], i);
                }
                assign(sigma, &images);
                total += rec(rest, sigma, check);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        total
    }
    rec(&groups, &mut sigma, &is_auto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph::{bubble, rose, sunset, triangle, GraphBuilder};

    #[test]
    fn known_symmetry_factors() {
        assert_eq!(symmetry_factor(&bubble()), 2);
        assert_eq!(symmetry_factor(&sunset()), 6);
        assert_eq!(symmetry_factor(&triangle()), 1);
        assert_eq!(symmetry_factor(&rose(1, 0)), 2);
        assert_eq!(symmetry_factor(&rose(2, 0)), 8);
        let tree = GraphBuilder::new(2).edge(0, 1).leg(0, 1).leg(0, 2).leg(1, 3).leg(1, 4).build().unwrap();
        assert_eq!(symmetry_factor(&tree), 1);
    }

    #[test]
    fn agrees_with_brute_force() {
        let unlabelled_theta = GraphBuilder::new(2).edge(0, 1).edge(0, 1).edge(0, 1).build().unwrap();
        let cut_piece = GraphBuilder::new(1).leg(0, 1).cut(0, 1).cut(0, 1).cut(0, 2).build().unwrap();
        for g in [bubble(), sunset(), triangle(), rose(2, 1), unlabelled_theta, cut_piece] {
            assert_eq!(symmetry_factor(&g), symmetry_factor_brute_force(&g), "{g}");
        }
    }

    #[test]
    fn isomorphism_respects_labels() {
        let a = GraphBuilder::new(2).edge(0, 1).leg(0, 1).leg(0, 2).leg(1, 3).build().unwrap();
        let b = GraphBuilder::new(2).edge(1, 0).leg(1, 1).leg(1, 2).leg(0, 3).build().unwrap();
        let c = GraphBuilder::new(2).edge(0, 1).leg(0, 1).leg(1, 2).leg(0, 3).build().unwrap();
        assert!(isomorphic(&a, &b));
        assert!(!isomorphic(&a, &c));
    }
}

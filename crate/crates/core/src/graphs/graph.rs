use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Tag of an unpaired half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtTag {
    /// An external leg of the original graph; fixed by isomorphisms.
    Leg(u32),
    /// A half-edge left by cutting an edge towards component `j`;
    /// interchangeable with others of the same class.
    Cut(usize),
}

/// Graph given by half-edges, each incident to one vertex, with internal
/// edges formed by an involution pairing half-edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdgeGraph {
    n_vertices: usize,
    vertex_of: Vec<usize>,
    partner: Vec<Option<usize>>,
    tags: Vec<Option<ExtTag>>,
}

impl HalfEdgeGraph {
    pub fn new(
        n_vertices: usize,
        vertex_of: Vec<usize>,
        partner: Vec<Option<usize>>,
        tags: Vec<Option<ExtTag>>,
    ) -> Result<HalfEdgeGraph> {
        let bad = |m: String| Err(Error::InvalidConfig(format!("malformed graph: {m}")));
        let h = vertex_of.len();
        if partner.len() != h || tags.len() != h {
            return bad("per-half-edge vectors differ in length".into());
        }
        let mut used = vec![false; n_vertices];
        let mut legs = BTreeSet::new();
        for i in 0..h {
            if vertex_of[i] >= n_vertices {
                return bad(format!("half-edge {i} on missing vertex {}", vertex_of[i]));
            }
            used[vertex_of[i]] = true;
            match (partner[i], tags[i]) {
                (Some(p), None) => {
                    if p >= h || p == i || partner[p] != Some(i) {
                        return bad(format!("pairing is not an involution at {i}"));
                    }
                }
                (None, Some(tag)) => {
                    if let ExtTag::Leg(l) = tag {
                        if !legs.insert(l) {
                            return bad(format!("leg label {l} repeated"));
                        }
                    }
                }
                _ => return bad(format!("half-edge {i} must be either paired or tagged")),
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return bad(format!("vertex {v} has no half-edges"));
        }
        Ok(HalfEdgeGraph {
            n_vertices,
            vertex_of,
            partner,
            tags,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_half_edges(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn partner(&self, h: usize) -> Option<usize> {
        self.partner[h]
    }

    pub fn tag(&self, h: usize) -> Option<ExtTag> {
        self.tags[h]
    }

    /// Internal edges as half-edge pairs `(h, partner)` with `h < partner`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n_half_edges())
            .filter_map(|h| self.partner[h].filter(|&p| h < p).map(|p| (h, p)))
            .collect()
    }

    /// Unpaired half-edges.
    pub fn externals(&self) -> Vec<usize> {
        (0..self.n_half_edges()).filter(|&h| self.partner[h].is_none()).collect()
    }

    pub fn leg_labels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .tags
            .iter()
            .filter_map(|t| match t {
                Some(ExtTag::Leg(l)) => Some(*l),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|&&u| u == v).count()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n_vertices).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Number of connected components after deleting the edges whose
    /// indices (into [`HalfEdgeGraph::edges`]) are in `removed`.
    pub fn components_without(&self, removed: &BTreeSet<usize>) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (i, (a, b)) in self.edges().into_iter().enumerate() {
            if removed.contains(&i) {
                continue;
            }
            let (ra, rb) = (find(&mut parent, self.vertex_of[a]), find(&mut parent, self.vertex_of[b]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // Relabel roots in order of first appearance.
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        (0..self.n_vertices)
            .map(|v| {
                let r = find(&mut parent, v);
                if label[r] == usize::MAX {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&BTreeSet::new()).iter().all(|&c| c == 0)
    }

    /// First Betti number `E - V + components`.
    pub fn loop_number(&self) -> usize {
        let comps = self.components_without(&BTreeSet::new());
        let c = comps.iter().max().map_or(0, |m| m + 1);
        self.edges().len() + c - self.n_vertices
    }

    /// Line-based serialization: vertex count, incidence, pairing, tags.
    pub fn to_text(&self) -> String {
        let join = |v: Vec<String>| v.join(" ");
        let pairing = self
            .partner
            .iter()
            .map(|p| p.map_or("-".to_string(), |p| p.to_string()))
            .collect();
        let tags = self
            .tags
            .iter()
            .map(|t| match t {
                None => "-".to_string(),
                Some(ExtTag::Leg(l)) => format!("L{l}"),
                Some(ExtTag::Cut(j)) => format!("C{j}"),
            })
            .collect();
        format!(
            "vertices {}\nincidence {}\npairing {}\ntags {}\n",
            self.n_vertices,
            join(self.vertex_of.iter().map(|v| v.to_string()).collect()),
            join(pairing),
            join(tags)
        )
    }

    pub fn from_text(text: &str) -> Result<HalfEdgeGraph> {
        let bad = |m: &str| Error::InvalidConfig(format!("graph text: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let mut field = |name: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| bad("missing line"))?;
            let mut words = line.split_whitespace();
            if words.next() != Some(name) {
                return Err(bad(&format!("expected `{name}`")));
            }
            Ok(words.map(str::to_string).collect())
        };
        let n: usize = field("vertices")?
            .first()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| bad("vertex count"))?;
        let vertex_of = field("incidence")?
            .iter()
            .map(|w| w.parse().map_err(|_| bad("incidence entry")))
            .collect::<Result<Vec<usize>>>()?;
        let partner = field("pairing")?
            .iter()
            .map(|w| match w.as_str() {
                "-" => Ok(None),
                w => w.parse().map(Some).map_err(|_| bad("pairing entry")),
            })
            .collect::<Result<Vec<_>>>()?;
        let tags = field("tags")?
            .iter()
            .map(|w| match (w.chars().next(), w.get(1..)) {
                (Some('-'), _) => Ok(None),
                (Some('L'), Some(r)) => r.parse().map(|l| Some(ExtTag::Leg(l))).map_err(|_| bad("leg tag")),
                (Some('C'), Some(r)) => r.parse().map(|c| Some(ExtTag::Cut(c))).map_err(|_| bad("cut tag")),
                _ => Err(bad("tag entry")),
            })
            .collect::<Result<Vec<_>>>()?;
        HalfEdgeGraph::new(n, vertex_of, partner, tags)
    }
}

impl fmt::Display for HalfEdgeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, b) in self.edges() {
            parts.push(format!("{}-{}", self.vertex_of[a], self.vertex_of[b]));
        }
        for h in self.externals() {
            match self.tags[h] {
                Some(ExtTag::Leg(l)) => parts.push(format!("{}:L{l}", self.vertex_of[h])),
                Some(ExtTag::Cut(j)) => parts.push(format!("{}:C{j}", self.vertex_of[h])),
                None => {}
            }
        }
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Incremental construction of a [`HalfEdgeGraph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    n_vertices: usize,
    vertex_of: Vec<usize>,
    partner: Vec<Option<usize>>,
    tags: Vec<Option<ExtTag>>,
}

impl GraphBuilder {
    pub fn new(n_vertices: usize) -> GraphBuilder {
        GraphBuilder {
            n_vertices,
            ..GraphBuilder::default()
        }
    }

    pub fn edge(mut self, u: usize, v: usize) -> GraphBuilder {
        let h = self.vertex_of.len();
        self.vertex_of.extend([u, v]);
        self.partner.extend([Some(h + 1), Some(h)]);
        self.tags.extend([None, None]);
        self
    }

    pub fn leg(mut self, v: usize, label: u32) -> GraphBuilder {
        self.vertex_of.push(v);
        self.partner.push(None);
        self.tags.push(Some(ExtTag::Leg(label)));
        self
    }

    pub fn cut(mut self, v: usize, class: usize) -> GraphBuilder {
        self.vertex_of.push(v);
        self.partner.push(None);
        self.tags.push(Some(ExtTag::Cut(class)));
        self
    }

    pub fn build(self) -> Result<HalfEdgeGraph> {
        HalfEdgeGraph::new(self.n_vertices, self.vertex_of, self.partner, self.tags)
    }
}

/// Two vertices joined by two edges, one leg on each.
pub fn bubble() -> HalfEdgeGraph {
    GraphBuilder::new(2).edge(0, 1).edge(0, 1).leg(0, 1).leg(1, 2).build().expect("valid")
}

/// Two vertices joined by three edges, one leg on each.
pub fn sunset() -> HalfEdgeGraph {
    GraphBuilder::new(2)
        .edge(0, 1)
        .edge(0, 1)
        .edge(0, 1)
        .leg(0, 1)
        .leg(1, 2)
        .build()
        .expect("valid")
}

/// One-loop triangle with one leg per vertex.
pub fn triangle() -> HalfEdgeGraph {
    GraphBuilder::new(3)
        .edge(0, 1)
        .edge(1, 2)
        .edge(2, 0)
        .leg(0, 1)
        .leg(1, 2)
        .leg(2, 3)
        .build()
        .expect("valid")
}

/// One vertex with `petals` self-loops and `legs` external legs.
pub fn rose(petals: usize, legs: u32) -> HalfEdgeGraph {
    let mut b = GraphBuilder::new(1);
    for _ in 0..petals {
        b = b.edge(0, 0);
    }
    for l in 1..=legs {
        b = b.leg(0, l);
    }
    b.build().expect("valid")
}

/// Connected graph with at most one external half-edge, so no momentum
/// flows through it.
pub fn is_tadpole(g: &HalfEdgeGraph) -> bool {
    g.externals().len() <= 1
}

/// Contracts a spanning forest, leaving one vertex per component with a
/// self-loop for every independent cycle.
pub fn contract_to_rose(g: &HalfEdgeGraph) -> HalfEdgeGraph {
    let comps = g.components_without(&BTreeSet::new());
    let n = comps.iter().max().map_or(0, |m| m + 1);
    let mut parent: Vec<usize> = (0..g.n_vertices()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut tree_halves = BTreeSet::new();
    for (a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, g.vertex_of(a)), find(&mut parent, g.vertex_of(b)));
        if ra != rb {
            parent[ra] = rb;
            tree_halves.extend([a, b]);
        }
    }
    let keep: Vec<usize> = (0..g.n_half_edges()).filter(|h| !tree_halves.contains(h)).collect();
    let index = |h: usize| keep.iter().position(|&k| k == h).expect("kept");
    let vertex_of = keep.iter().map(|&h| comps[g.vertex_of(h)]).collect();
    let partner = keep.iter().map(|&h| g.partner(h).map(index)).collect();
    let tags = keep.iter().map(|&h| g.tag(h)).collect();
    HalfEdgeGraph::new(n, vertex_of, partner, tags).expect("contraction keeps the graph well formed")
}

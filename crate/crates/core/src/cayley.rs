//! Cayley-ball graphs and exact unlabeled graph isomorphism, used to verify
//! at ball scale that equal-cardinality lamp groups yield isomorphic Cayley
//! graphs.
//!
//! Balls are compared as rooted graphs: rooted-ball isomorphism is the
//! correct finite surrogate for isomorphism of the infinite Cayley graphs,
//! where unrooted ball isomorphism can fail at the boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::growth::{enumerate, BfsGroup, GrowthError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error("isomorphism search exceeded {0} nodes")]
    SizeBudgetExceeded(usize),
    #[error("bad graph file: {0}")]
    BadGraphFile(String),
}

/// A simple connected undirected graph with a distinguished root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallGraph {
    adj: Vec<Vec<usize>>,
    root: usize,
}

impl BallGraph {
    pub fn new(n: usize, edges: &[(usize, usize)], root: usize) -> Self {
        assert!(root < n);
        let mut adj = vec![Vec::new(); n];
        let set: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|&&(u, v)| u != v)
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        for (u, v) in set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        BallGraph { adj, root }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted edge list with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Plain adjacency-list text format: header `n m root`, then one
    /// `u v` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.vertex_count(), self.edge_count(), self.root);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CayleyError> {
        let bad = |m: &str| CayleyError::BadGraphFile(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let parts: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("bad header")))
            .collect::<Result<_, _>>()?;
        let [n, m, root] = parts[..] else {
            return Err(bad("header must be `n m root`"));
        };
        if root >= n {
            return Err(bad("root out of range"));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let pair: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad edge line")))
                .collect::<Result<_, _>>()?;
            let [u, v] = pair[..] else {
                return Err(bad("edge line must be `u v`"));
            };
            if u >= n || v >= n {
                return Err(bad("edge endpoint out of range"));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(bad("edge count does not match header"));
        }
        Ok(BallGraph::new(n, &edges, root))
    }
}

/// The radius-`r` Cayley ball of the group generated by `gens`: vertices
/// are ball elements (vertex 0 is the identity), edges join `g` to `gs`.
/// Loops and multi-edges are collapsed; edges whose product is not
/// representable in the window are outside the ball and are dropped.
pub fn cayley_ball<G: BfsGroup>(
    group: &G,
    gens: &[G::Elem],
    r: usize,
    budget_bytes: Option<usize>,
) -> Result<BallGraph, CayleyError> {
    let (_, elements, keys) = enumerate(group, gens, r, budget_bytes, true)?;
    let index: HashMap<&[u8], usize> =
        keys.iter().enumerate().map(|(i, k)| (k.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        for s in gens {
            let Ok(product) = group.compose_elems(e, s) else { continue };
            let Ok(key) = group.canonical(&product) else { continue };
            if let Some(&j) = index.get(key.as_slice()) {
                if i != j {
                    edges.push((i, j));
                }
            }
        }
    }
    Ok(BallGraph::new(elements.len(), &edges, 0))
}

/// Outcome of an isomorphism test; the witness maps vertices of the first
/// graph to the second and is verified edge-by-edge before being returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoOutcome {
    pub witness: Option<Vec<usize>>,
}

impl IsoOutcome {
    pub fn isomorphic(&self) -> bool {
        self.witness.is_some()
    }
}

/// Checks a claimed isomorphism independently of the search: bijectivity,
/// adjacency preservation in both directions, and the root if `rooted`.
pub fn verify_witness(g1: &BallGraph, g2: &BallGraph, map: &[usize], rooted: bool) -> bool {
    let n = g1.vertex_count();
    if g2.vertex_count() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in map {
        if w >= n || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    if rooted && map[g1.root()] != g2.root() {
        return false;
    }
    if g1.edge_count() != g2.edge_count() {
        return false;
    }
    for (u, v) in g1.edges() {
        if !g2.has_edge(map[u], map[v]) {
            return false;
        }
    }
    true
}

const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// Exact isomorphism decision by canonical-refinement with
/// individualization backtracking. Returns a verified witness when the
/// graphs are isomorphic.
pub fn graph_isomorphic(
    g1: &BallGraph,
    g2: &BallGraph,
    rooted: bool,
) -> Result<IsoOutcome, CayleyError> {
    graph_isomorphic_budgeted(g1, g2, rooted, DEFAULT_SEARCH_BUDGET)
}

pub fn graph_isomorphic_budgeted(
    g1: &BallGraph,
    g2: &BallGraph,
    rooted: bool,
    budget: usize,
) -> Result<IsoOutcome, CayleyError> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(IsoOutcome { witness: None });
    }
    let n = g1.vertex_count();
    let mut c1 = vec![0u32; n];
    let mut c2 = vec![0u32; n];
    if rooted {
        c1[g1.root()] = 1;
        c2[g2.root()] = 1;
    }
    let mut nodes = 0usize;
    let witness = search(g1, g2, c1, c2, &mut nodes, budget)?;
    if let Some(map) = &witness {
        debug_assert!(verify_witness(g1, g2, map, rooted));
        if !verify_witness(g1, g2, map, rooted) {
            return Ok(IsoOutcome { witness: None });
        }
    }
    Ok(IsoOutcome { witness })
}

/// One round of joint color refinement. Returns false if the color
/// histograms of the two graphs diverge (no isomorphism possible).
fn refine(g1: &BallGraph, g2: &BallGraph, c1: &mut Vec<u32>, c2: &mut Vec<u32>) -> bool {
    let n = g1.vertex_count();
    loop {
        let signature = |g: &BallGraph, c: &Vec<u32>, v: usize| {
            let mut nbr: Vec<u32> = g.neighbors(v).iter().map(|&u| c[u]).collect();
            nbr.sort_unstable();
            (c[v], nbr)
        };
        let mut ids: BTreeMap<(u32, Vec<u32>), u32> = BTreeMap::new();
        let sigs1: Vec<_> = (0..n).map(|v| signature(g1, c1, v)).collect();
        let sigs2: Vec<_> = (0..n).map(|v| signature(g2, c2, v)).collect();
        for s in sigs1.iter().chain(&sigs2) {
            let fresh = ids.len() as u32;
            ids.entry(s.clone()).or_insert(fresh);
        }
        let new1: Vec<u32> = sigs1.iter().map(|s| ids[s]).collect();
        let new2: Vec<u32> = sigs2.iter().map(|s| ids[s]).collect();
        let mut hist1: HashMap<u32, usize> = HashMap::new();
        let mut hist2: HashMap<u32, usize> = HashMap::new();
        for &c in &new1 {
            *hist1.entry(c).or_default() += 1;
        }
        for &c in &new2 {
            *hist2.entry(c).or_default() += 1;
        }
        if hist1 != hist2 {
            return false;
        }
        let stable = new1 == *c1 && new2 == *c2;
        let old_count = c1.iter().collect::<BTreeSet<_>>().len();
        let new_count = new1.iter().collect::<BTreeSet<_>>().len();
        *c1 = new1;
        *c2 = new2;
        if stable || new_count == old_count {
            return true;
        }
    }
}

fn search(
    g1: &BallGraph,
    g2: &BallGraph,
    mut c1: Vec<u32>,
    mut c2: Vec<u32>,
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Vec<usize>>, CayleyError> {
    *nodes += 1;
    if *nodes > budget {
        return Err(CayleyError::SizeBudgetExceeded(budget));
    }
    if !refine(g1, g2, &mut c1, &mut c2) {
        return Ok(None);
    }
    let n = g1.vertex_count();
    // smallest non-singleton color class (by size, then color id)
    let mut class_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_default() += 1;
    }
    let target = class_size
        .iter()
        .filter(|&(_, &s)| s > 1)
        .min_by_key(|&(&c, &s)| (s, c))
        .map(|(&c, _)| c);
    match target {
        None => {
            // discrete coloring: the color-matching map is the only candidate
            let mut by_color: HashMap<u32, usize> = HashMap::new();
            for (v, &c) in c2.iter().enumerate() {
                by_color.insert(c, v);
            }
            let map: Vec<usize> = c1.iter().map(|c| by_color[c]).collect();
            for (u, v) in g1.edges() {
                if !g2.has_edge(map[u], map[v]) {
                    return Ok(None);
                }
            }
            Ok(Some(map))
        }
        Some(color) => {
            let v = (0..n).find(|&v| c1[v] == color).unwrap();
            let fresh = (2 * n) as u32 + c1.iter().max().unwrap() + 1;
            for w in 0..n {
                if c2[w] != color {
                    continue;
                }
                let mut d1 = c1.clone();
                let mut d2 = c2.clone();
                d1[v] = fresh;
                d2[w] = fresh;
                if let Some(found) = search(g1, g2, d1, d2, nodes, budget)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::wreath::{WreathProduct, ZShiftSpace};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    fn path(n: usize) -> BallGraph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        BallGraph::new(n, &edges, 0)
    }

    fn cycle(n: usize) -> BallGraph {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        BallGraph::new(n, &edges, 0)
    }

    #[test]
    fn ball_of_radius_zero() {
        let ctx = WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), ZShiftSpace::new(-4, 4));
        let gens = vec![ctx.delta(0, 1), ctx.pure_top(1), ctx.pure_top(-1)];
        let g = cayley_ball(&ctx, &gens, 0, None).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn lamplighter_radius_one_ball() {
        // direct expansion: e plus the three generators; a is an involution
        // so no edges among the sphere besides those through e... except
        // t·a-type products at radius 2, which are outside this ball
        let ctx = WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), ZShiftSpace::new(-4, 4));
        let gens = vec![ctx.delta(0, 1), ctx.pure_top(1), ctx.pure_top(-1)];
        let g = cayley_ball(&ctx, &gens, 1, None).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(g.is_connected());
        // edges from e to each generator; t and t⁻¹ are also adjacent? no:
        // t·t⁻¹ = e, t·t = t² outside, t·a = (δ₁,1) outside ⇒ exactly 3 edges
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(0).len(), 3);
    }

    #[test]
    fn ball_vertex_count_matches_growth_table() {
        let ctx = WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), ZShiftSpace::new(-8, 8));
        let gens = vec![ctx.delta(0, 1), ctx.pure_top(1), ctx.pure_top(-1)];
        let table = crate::growth::ball_sizes(&ctx, &gens, 4, None).unwrap();
        let g = cayley_ball(&ctx, &gens, 4, None).unwrap();
        assert_eq!(g.vertex_count() as u64, table.sizes[4]);
    }

    #[test]
    fn self_isomorphism_is_identity_witness() {
        let g = cycle(7);
        let out = graph_isomorphic(&g, &g, true).unwrap();
        let w = out.witness.unwrap();
        assert_eq!(w, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn path_vs_triangle() {
        let out = graph_isomorphic(&path(3), &cycle(3), false).unwrap();
        assert!(!out.isomorphic());
    }

    #[test]
    fn relabeled_graphs_are_isomorphic() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..30 {
            let n = rng.gen_range(4..10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            // spanning path to keep it connected
            for u in 0..n - 1 {
                edges.push((u, u + 1));
            }
            let g1 = BallGraph::new(n, &edges, 0);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let perm_edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
            let g2 = BallGraph::new(n, &perm_edges, perm[0]);
            let out = graph_isomorphic(&g1, &g2, true).unwrap();
            let w = out.witness.expect("relabeling must be recovered");
            assert!(verify_witness(&g1, &g2, &w, true));
        }
    }

    /// Brute-force oracle: try all vertex bijections.
    fn brute_force_isomorphic(g1: &BallGraph, g2: &BallGraph) -> bool {
        let n = g1.vertex_count();
        if g2.vertex_count() != n {
            return false;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if verify_witness(g1, g2, &perm, false) {
                return true;
            }
            // next permutation
            let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
                return false;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    }

    #[test]
    fn no_false_verdicts_versus_brute_force() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let n = rng.gen_range(3..=9);
            let random_graph = |rng: &mut StdRng| {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen_bool(0.5) {
                            edges.push((u, v));
                        }
                    }
                }
                BallGraph::new(n, &edges, 0)
            };
            let g1 = random_graph(&mut rng);
            let g2 = random_graph(&mut rng);
            let fast = graph_isomorphic(&g1, &g2, false).unwrap();
            assert_eq!(fast.isomorphic(), brute_force_isomorphic(&g1, &g2));
            // symmetry
            let back = graph_isomorphic(&g2, &g1, false).unwrap();
            assert_eq!(fast.isomorphic(), back.isomorphic());
            // reflexivity
            assert!(graph_isomorphic(&g1, &g1, false).unwrap().isomorphic());
        }
    }

    #[test]
    fn rooted_vs_unrooted() {
        // a path rooted at an end vs rooted in the middle
        let g1 = BallGraph::new(3, &[(0, 1), (1, 2)], 0);
        let g2 = BallGraph::new(3, &[(0, 1), (1, 2)], 1);
        assert!(graph_isomorphic(&g1, &g2, false).unwrap().isomorphic());
        assert!(!graph_isomorphic(&g1, &g2, true).unwrap().isomorphic());
    }

    #[test]
    fn text_roundtrip() {
        let g = cycle(5);
        let text = g.to_text();
        assert!(text.starts_with("5 5 0\n"));
        let back = BallGraph::from_text(&text).unwrap();
        assert_eq!(g, back);
        assert!(BallGraph::from_text("3 1 5\n0 1\n").is_err());
        assert!(BallGraph::from_text("").is_err());
    }
}

//! Abstract Steiner topologies.
//!
//! Vertices `0..n` are the labeled terminals; vertices `n..n+s` are unlabeled
//! Steiner vertices. Every topology is stored in canonical numbering, so two
//! values compare equal exactly when they are isomorphic by a map that fixes
//! the terminals.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Default cap on the number of terminals for exhaustive enumeration.
pub const DEFAULT_N_MAX: usize = 10;
/// Hard cap imposed by the compact vertex ids.
pub const ABSOLUTE_N_MAX: usize = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{n} terminals exceed the enumeration cap of {max}")]
    TooManyTerminals { n: usize, max: usize },
    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),
    #[error("degenerate topology: {0}")]
    Degenerate(String),
    #[error("not a valid topology: {0}")]
    Invalid(String),
}

/// An abstract tree on `n` labeled terminals and `steiner` unlabeled
/// Steiner vertices of degree 3. Terminals have degree 1, 2 or 3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    n: u8,
    steiner: u8,
    edges: Vec<(u8, u8)>,
}

impl fmt::Debug for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Topology({})", self.code())
    }
}

impl Topology {
    /// Builds and canonicalizes a topology. Checks that the edge list forms
    /// a tree on `n + steiner` vertices with Steiner degree exactly 3 and
    /// terminal degree at least 1.
    pub fn from_edges(
        n: usize,
        steiner: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, TopologyError> {
        Self::from_edges_relabeled(n, steiner, edges).map(|(t, _)| t)
    }

    /// As [`from_edges`](Self::from_edges), also returning where each input
    /// vertex went in the canonical numbering.
    pub fn from_edges_relabeled(
        n: usize,
        steiner: usize,
        edges: &[(usize, usize)],
    ) -> Result<(Self, Vec<usize>), TopologyError> {
        if n < 2 {
            return Err(TopologyError::TooFewTerminals(n));
        }
        let total = n + steiner;
        if total > 2 * ABSOLUTE_N_MAX {
            return Err(TopologyError::TooManyTerminals {
                n,
                max: ABSOLUTE_N_MAX,
            });
        }
        if edges.len() + 1 != total {
            return Err(TopologyError::Invalid(format!(
                "{} edges on {total} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); total];
        for &(u, v) in edges {
            if u >= total || v >= total || u == v {
                return Err(TopologyError::Invalid(format!("bad edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        // connectivity
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TopologyError::Invalid("not connected".into()));
        }
        for (v, nb) in adj.iter().enumerate() {
            if v >= n && nb.len() != 3 {
                return Err(TopologyError::Invalid(format!(
                    "Steiner vertex {v} has degree {}",
                    nb.len()
                )));
            }
            if v < n && nb.is_empty() {
                return Err(TopologyError::Invalid(format!("terminal {v} is isolated")));
            }
        }
        Ok(Self::canonical_from_adjacency(n, &adj))
    }

    fn canonical_from_adjacency(n: usize, adj: &[Vec<usize>]) -> (Self, Vec<usize>) {
        // Subtree codes rooted at terminal 0, children sorted by code. The
        // Steiner vertices are then renumbered in pre-order of that sorted
        // traversal, which depends only on the isomorphism class.
        let total = adj.len();
        let mut order = Vec::with_capacity(total);
        let mut parent = vec![usize::MAX; total];
        let mut stack = vec![0usize];
        parent[0] = 0;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut codes: Vec<String> = vec![String::new(); total];
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); total];
        for &u in order.iter().rev() {
            let mut ch: Vec<usize> = adj[u]
                .iter()
                .copied()
                .filter(|&w| w != 0 && parent[w] == u)
                .collect();
            ch.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
            let inner: Vec<&str> = ch.iter().map(|&c| codes[c].as_str()).collect();
            codes[u] = if u < n {
                if ch.is_empty() {
                    u.to_string()
                } else {
                    format!("{u}[{}]", inner.join(","))
                }
            } else {
                format!("({})", inner.join(","))
            };
            kids[u] = ch;
        }
        let mut relabel = vec![usize::MAX; total];
        for (t, slot) in relabel.iter_mut().enumerate().take(n) {
            *slot = t;
        }
        let mut next = n;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            if u >= n {
                relabel[u] = next;
                next += 1;
            }
            for &c in kids[u].iter().rev() {
                stack.push(c);
            }
        }
        let mut edges: Vec<(u8, u8)> = Vec::with_capacity(total - 1);
        for u in 0..total {
            for &w in &adj[u] {
                if u < w {
                    let (a, b) = (relabel[u], relabel[w]);
                    edges.push((a.min(b) as u8, a.max(b) as u8));
                }
            }
        }
        edges.sort_unstable();
        let t = Self {
            n: n as u8,
            steiner: (total - n) as u8,
            edges,
        };
        (t, relabel)
    }

    pub fn terminal_count(&self) -> usize {
        self.n as usize
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner as usize
    }

    pub fn vertex_count(&self) -> usize {
        self.terminal_count() + self.steiner_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(a, b)| (a as usize, b as usize))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (u, v) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges().filter(|&(a, b)| a == v || b == v).count()
    }

    /// Every terminal is a leaf.
    pub fn is_full(&self) -> bool {
        (0..self.terminal_count()).all(|t| self.degree(t) == 1)
    }

    /// Some terminal has degree 3.
    pub fn is_degenerate(&self) -> bool {
        (0..self.terminal_count()).any(|t| self.degree(t) >= 3)
    }

    /// Canonical code: equal for isomorphic topologies (terminal labels
    /// fixed), distinct otherwise. Terminals print as their label, Steiner
    /// vertices as parenthesized child lists, rooted at terminal 0.
    pub fn code(&self) -> String {
        let adj = self.adjacency();
        fn rec(u: usize, parent: usize, n: usize, adj: &[Vec<usize>]) -> String {
            let mut ch: Vec<String> = adj[u]
                .iter()
                .filter(|&&w| w != parent)
                .map(|&w| rec(w, u, n, adj))
                .collect();
            ch.sort();
            if u < n {
                if ch.is_empty() {
                    u.to_string()
                } else {
                    format!("{u}[{}]", ch.join(","))
                }
            } else {
                format!("({})", ch.join(","))
            }
        }
        rec(0, usize::MAX, self.terminal_count(), &adj)
    }
}

/// A topology in which every terminal is a leaf; `n - 2` Steiner vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FullTopology(Topology);

impl FullTopology {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, TopologyError> {
        let t = Topology::from_edges(n, n.saturating_sub(2), edges)?;
        Self::try_from(t)
    }

    /// As [`from_edges`](Self::from_edges), with the old-to-canonical vertex map.
    pub fn from_edges_relabeled(
        n: usize,
        edges: &[(usize, usize)],
    ) -> Result<(Self, Vec<usize>), TopologyError> {
        let (t, map) = Topology::from_edges_relabeled(n, n.saturating_sub(2), edges)?;
        Ok((Self::try_from(t)?, map))
    }

    pub fn topology(&self) -> &Topology {
        &self.0
    }

    pub fn terminal_count(&self) -> usize {
        self.0.terminal_count()
    }

    pub fn steiner_count(&self) -> usize {
        self.0.steiner_count()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.edges()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.0.adjacency()
    }

    pub fn code(&self) -> String {
        self.0.code()
    }

    /// Terminal-to-Steiner edges `(terminal, steiner)`.
    pub fn pendant_edges(&self) -> Vec<(usize, usize)> {
        let n = self.terminal_count();
        self.edges()
            .filter_map(|(a, b)| if a < n && b >= n { Some((a, b)) } else { None })
            .collect()
    }
}

impl TryFrom<Topology> for FullTopology {
    type Error = TopologyError;

    fn try_from(t: Topology) -> Result<Self, Self::Error> {
        let n = t.terminal_count();
        if t.steiner_count() != n.saturating_sub(2) || !t.is_full() {
            return Err(TopologyError::Invalid(format!(
                "not full: {}",
                t.code()
            )));
        }
        Ok(Self(t))
    }
}

/// Canonical code of a full topology.
pub fn canonical_code(t: &FullTopology) -> String {
    t.code()
}

/// Number of full topologies on `n` terminals: `(2n - 5)!!`, and 1 for `n = 2`.
pub fn full_topology_count(n: usize) -> u64 {
    if n < 3 {
        return 1;
    }
    (1..=(2 * n as u64 - 5)).step_by(2).product()
}

/// All full topologies on `n` terminals in canonical-code order.
///
/// Built by the double-factorial recursion: terminal `k` is inserted onto
/// every edge of every topology on the first `k` terminals.
pub fn enumerate_full(n: usize, n_max: usize) -> Result<Vec<FullTopology>, TopologyError> {
    if n < 2 {
        return Err(TopologyError::TooFewTerminals(n));
    }
    let cap = n_max.min(ABSOLUTE_N_MAX);
    if n > cap {
        return Err(TopologyError::TooManyTerminals { n, max: cap });
    }
    // Raw edge lists; Steiner id of the vertex created when inserting
    // terminal k is n + k - 2.
    let mut layer: Vec<Vec<(u8, u8)>> = vec![vec![(0, 1)]];
    for k in 2..n {
        let s = (n + k - 2) as u8;
        let mut next = Vec::with_capacity(layer.len() * (2 * k - 3));
        for edges in &layer {
            for i in 0..edges.len() {
                let (u, v) = edges[i];
                let mut e = edges.clone();
                e[i] = (u, s);
                e.push((s, v));
                e.push((k as u8, s));
                next.push(e);
            }
        }
        layer = next;
    }
    let mut out: Vec<FullTopology> = layer
        .into_iter()
        .map(|e| {
            let e: Vec<(usize, usize)> = e.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
            FullTopology::from_edges(n, &e).expect("recursion builds full topologies")
        })
        .collect();
    out.sort_by_cached_key(FullTopology::code);
    Ok(out)
}

/// A member of `D(T)`: the full topology `T` with a set of contracted
/// terminal-to-Steiner edges that share no endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ContractedTopology {
    base: FullTopology,
    contracted: Vec<(usize, usize)>,
}

impl ContractedTopology {
    pub fn new(base: FullTopology, mut contracted: Vec<(usize, usize)>) -> Result<Self, TopologyError> {
        let pendant: BTreeSet<(usize, usize)> = base.pendant_edges().into_iter().collect();
        contracted.sort_unstable();
        let mut used = BTreeSet::new();
        for &(t, s) in &contracted {
            if !pendant.contains(&(t, s)) {
                return Err(TopologyError::Invalid(format!(
                    "({t}, {s}) is not a terminal-to-Steiner edge"
                )));
            }
            if !used.insert(t) || !used.insert(s) {
                return Err(TopologyError::Invalid(
                    "contracted edges must have pairwise distinct ends".into(),
                ));
            }
        }
        Ok(Self { base, contracted })
    }

    pub fn base(&self) -> &FullTopology {
        &self.base
    }

    pub fn contracted_edges(&self) -> &[(usize, usize)] {
        &self.contracted
    }

    /// The contracted abstract tree: each contracted Steiner vertex is merged
    /// into its terminal.
    pub fn tree(&self) -> Topology {
        let n = self.base.terminal_count();
        let total = self.base.topology().vertex_count();
        let mut rep: Vec<usize> = (0..total).collect();
        for &(t, s) in &self.contracted {
            rep[s] = t;
        }
        let mut remaining: Vec<usize> = (n..total).filter(|&v| rep[v] == v).collect();
        remaining.sort_unstable();
        let mut id = vec![usize::MAX; total];
        for (t, slot) in id.iter_mut().enumerate().take(n) {
            *slot = t;
        }
        for (k, &v) in remaining.iter().enumerate() {
            id[v] = n + k;
        }
        let edges: Vec<(usize, usize)> = self
            .base
            .edges()
            .filter_map(|(a, b)| {
                let (ra, rb) = (id[rep[a]], id[rep[b]]);
                (ra != rb).then_some((ra, rb))
            })
            .collect();
        Topology::from_edges(n, remaining.len(), &edges).expect("contraction of a tree is a tree")
    }
}

/// All members of `D(T)`, including `T` itself (no contraction).
pub fn contract_family(t: &FullTopology) -> Vec<ContractedTopology> {
    let pendant = t.pendant_edges();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn rec(
        i: usize,
        pendant: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        t: &FullTopology,
        out: &mut Vec<ContractedTopology>,
    ) {
        if i == pendant.len() {
            out.push(ContractedTopology::new(t.clone(), chosen.clone()).expect("admissible"));
            return;
        }
        rec(i + 1, pendant, chosen, t, out);
        let (_, s) = pendant[i];
        if chosen.iter().all(|&(_, s2)| s2 != s) {
            chosen.push(pendant[i]);
            rec(i + 1, pendant, chosen, t, out);
            chosen.pop();
        }
    }
    rec(0, &pendant, &mut chosen, t, &mut out);
    out
}

/// The unique full topology `T` with `r` in `D(T)`: every degree-2 terminal
/// is split off onto a new Steiner vertex joined to its two neighbors.
pub fn expand_to_full(r: &Topology) -> Result<FullTopology, TopologyError> {
    if r.is_degenerate() {
        return Err(TopologyError::Degenerate(r.code()));
    }
    let n = r.terminal_count();
    let adj = r.adjacency();
    let mut next = r.vertex_count();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut split = vec![usize::MAX; n];
    for (x, slot) in split.iter_mut().enumerate() {
        if adj[x].len() == 2 {
            *slot = next;
            next += 1;
            edges.push((x, *slot));
        }
    }
    for (u, v) in r.edges() {
        let a = if u < n && split[u] != usize::MAX { split[u] } else { u };
        let b = if v < n && split[v] != usize::MAX { split[v] } else { v };
        edges.push((a, b));
    }
    let t = Topology::from_edges(n, next - n, &edges)?;
    FullTopology::try_from(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_double_factorial() {
        assert_eq!(enumerate_full(2, 10).unwrap().len(), 1);
        assert_eq!(enumerate_full(3, 10).unwrap().len(), 1);
        assert_eq!(enumerate_full(4, 10).unwrap().len(), 3);
        assert_eq!(enumerate_full(5, 10).unwrap().len(), 15);
        assert_eq!(enumerate_full(6, 10).unwrap().len(), 105);
        assert_eq!(full_topology_count(8), 10395);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all = enumerate_full(6, 10).unwrap();
        let codes: Vec<String> = all.iter().map(FullTopology::code).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_full(11, 10),
            Err(TopologyError::TooManyTerminals { n: 11, max: 10 })
        );
        assert_eq!(enumerate_full(1, 10), Err(TopologyError::TooFewTerminals(1)));
    }

    #[test]
    fn tripod_code_ignores_internal_label() {
        let a = FullTopology::from_edges(3, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        assert_eq!(a.code(), "0[(1,2)]");
        assert_eq!(canonical_code(&a), a.code());
    }

    #[test]
    fn four_terminal_pairings_have_distinct_codes() {
        let a = FullTopology::from_edges(4, &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]).unwrap();
        let b = FullTopology::from_edges(4, &[(0, 5), (2, 5), (4, 5), (1, 4), (3, 4)]).unwrap();
        let a2 = FullTopology::from_edges(4, &[(0, 5), (1, 5), (4, 5), (2, 4), (3, 4)]).unwrap();
        assert_ne!(a.code(), b.code());
        assert_eq!(a, a2);
        assert_eq!(a.code(), a2.code());
    }

    #[test]
    fn full_topology_rejects_non_full() {
        // Path 0 - 1 - 2 has a degree-2 terminal.
        let t = Topology::from_edges(3, 0, &[(0, 1), (1, 2)]).unwrap();
        assert!(FullTopology::try_from(t).is_err());
        assert!(Topology::from_edges(3, 1, &[(0, 3), (1, 3)]).is_err());
    }

    #[test]
    fn tripod_family_has_four_members() {
        let t = &enumerate_full(3, 10).unwrap()[0];
        let fam = contract_family(t);
        assert_eq!(fam.len(), 4);
        let trees: BTreeSet<String> = fam.iter().map(|c| c.tree().code()).collect();
        assert_eq!(trees.len(), 4);
    }

    #[test]
    fn two_terminal_family_is_singleton() {
        let t = &enumerate_full(2, 10).unwrap()[0];
        assert_eq!(contract_family(t).len(), 1);
        assert_eq!(expand_to_full(t.topology()).unwrap(), *t);
    }

    #[test]
    fn expand_path_gives_tripod() {
        let path = Topology::from_edges(3, 0, &[(0, 1), (1, 2)]).unwrap();
        let full = expand_to_full(&path).unwrap();
        let tripod = enumerate_full(3, 10).unwrap().remove(0);
        assert_eq!(full, tripod);
        assert!(contract_family(&full).iter().any(|c| c.tree() == path));
    }

    #[test]
    fn expand_is_identity_on_full() {
        for t in enumerate_full(5, 10).unwrap() {
            assert_eq!(expand_to_full(t.topology()).unwrap(), t);
        }
    }

    #[test]
    fn expand_rejects_degenerate_star() {
        let star = Topology::from_edges(4, 0, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(expand_to_full(&star), Err(TopologyError::Degenerate(_))));
    }

    #[test]
    fn contraction_rejects_shared_steiner_end() {
        let t = FullTopology::from_edges(3, &[(0, 3), (1, 3), (2, 3)]).unwrap();
        assert!(ContractedTopology::new(t.clone(), vec![(0, 3), (1, 3)]).is_err());
        assert!(ContractedTopology::new(t, vec![(0, 1)]).is_err());
    }
}

//! Topology enumeration against independent counts.

use std::collections::{BTreeSet, HashMap};

use steiner_core::topology::{
    contract_family, enumerate_full, expand_to_full, full_topology_count, FullTopology, Topology,
};

/// Standard Prüfer decoding on vertices `0..len + 2`.
fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every arrangement of the multiset where each Steiner label appears
/// twice. Those are exactly the Prüfer codes of trees whose terminals are
/// leaves and whose Steiner vertices have degree three.
fn full_prufer_codes(n: usize) -> Vec<Vec<usize>> {
    let m = n - 2;
    let mut left = vec![2usize; m];
    let mut cur = Vec::new();
    let mut out = Vec::new();
    fn rec(n: usize, left: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for s in 0..left.len() {
            if left[s] > 0 {
                left[s] -= 1;
                cur.push(n + s);
                rec(n, left, cur, out);
                cur.pop();
                left[s] += 1;
            }
        }
    }
    rec(n, &mut left, &mut cur, &mut out);
    out
}

fn double_factorial(k: u64) -> u64 {
    (1..=k).rev().step_by(2).product()
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

#[test]
fn prufer_oracle_matches_enumeration() {
    for n in 3..=7usize {
        let mut seen: HashMap<String, u64> = HashMap::new();
        for code in full_prufer_codes(n) {
            let t = FullTopology::from_edges(n, &prufer_decode(&code)).expect("decoded trees are full");
            *seen.entry(t.code()).or_default() += 1;
        }
        let expected = double_factorial(2 * n as u64 - 5);
        assert_eq!(seen.len() as u64, expected, "n = {n}");
        assert_eq!(full_topology_count(n), expected);
        // Leaves are labeled, so each topology has exactly (n-2)! Steiner labelings.
        assert!(seen.values().all(|&c| c == factorial(n as u64 - 2)));
        let enumerated: BTreeSet<String> = enumerate_full(n, 7).unwrap().iter().map(|t| t.code()).collect();
        assert_eq!(enumerated, seen.keys().cloned().collect::<BTreeSet<_>>());
    }
}

#[test]
fn known_counts() {
    assert_eq!(full_topology_count(4), 3);
    assert_eq!(full_topology_count(5), 15);
    assert_eq!(full_topology_count(8), 10395);
    assert_eq!(full_topology_count(10), 2_027_025);
}

#[test]
fn contraction_families_partition_nondegenerate_trees() {
    for n in 3..=6usize {
        let mut owner: HashMap<Topology, String> = HashMap::new();
        for t in enumerate_full(n, 6).unwrap() {
            let adj = t.adjacency();
            // Each Steiner vertex may absorb at most one of its terminal
            // neighbors.
            let expected: usize = (n..n + t.steiner_count())
                .map(|s| 1 + adj[s].iter().filter(|&&v| v < n).count())
                .product();
            let family = contract_family(&t);
            assert_eq!(family.len(), expected);
            for member in family {
                let tree = member.tree();
                assert!(!tree.is_degenerate());
                assert_eq!(tree.steiner_count(), n - 2 - member.contracted_edges().len());
                assert_eq!(expand_to_full(&tree).unwrap(), t);
                let prev = owner.insert(tree, t.code());
                assert!(prev.is_none(), "a tree lies in two families");
            }
        }
    }
}

use std::cmp::Ordering;
use std::collections::VecDeque;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use super::{vset, with_vertex, without_position, CodegreeIndex, RGraph, RTree, VSet};
use crate::{Error, Result};

/// Total order on (r-1)-sets used to break ties in the breadth-first tree.
pub type SetOrder<'a> = &'a dyn Fn(&[u32], &[u32]) -> Ordering;

/// Lexicographic order on canonical sets.
pub fn lexicographic(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Tight components: two edges are adjacent iff they share an (r-1)-set.
///
/// Components are returned ordered by their smallest edge.
pub fn connected_components(g: &RGraph) -> Vec<RGraph> {
    let m = g.edge_count();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut first_owner: HashMap<VSet, usize> = HashMap::with_capacity_and_hasher(m * g.r(), Default::default());
    for (i, e) in g.edges().iter().enumerate() {
        for pos in 0..e.len() {
            let sub = without_position(e, pos);
            match first_owner.get(&sub) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
                None => {
                    first_owner.insert(sub, i);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<VSet>> = HashMap::default();
    for (i, e) in g.edges().iter().enumerate() {
        groups.entry(find(&mut parent, i)).or_default().push(e.clone());
    }
    let mut comps: Vec<RGraph> = groups.into_values().map(|es| g.subgraph(es)).collect();
    comps.sort_by(|a, b| a.edges()[0].cmp(&b.edges()[0]));
    comps
}

/// `S_gamma(rho)`: edges lying on some path of length at most `gamma`
/// that starts at `rho`.
///
/// A path starts with an edge `rho ∪ {v}`; each later edge is
/// `sigma ∪ {v'}` where `sigma` lies in the previous edge, contains the
/// previously added vertex, and `v'` is new to the path. The search
/// enumerates such paths explicitly, which is exponential on dense graphs.
pub fn ball(g: &RGraph, rho: &[u32], gamma: usize) -> Result<RGraph> {
    check_root_size(g, rho)?;
    let rho = vset(rho);
    let idx = g.codegree_index();
    let mut found: HashSet<VSet> = HashSet::default();
    if gamma > 0 {
        let mut used: Vec<u32> = rho.to_vec();
        for &v in idx.neighbors(&rho) {
            let e = with_vertex(&rho, v);
            used.push(v);
            extend_paths(&idx, &e, v, 1, gamma, &mut used, &mut found);
            used.pop();
        }
    }
    Ok(g.subgraph(found))
}

fn extend_paths(
    idx: &CodegreeIndex,
    edge: &VSet,
    last: u32,
    len: usize,
    gamma: usize,
    used: &mut Vec<u32>,
    found: &mut HashSet<VSet>,
) {
    found.insert(edge.clone());
    if len == gamma {
        return;
    }
    for pos in 0..edge.len() {
        if edge[pos] == last {
            continue;
        }
        let sigma = without_position(edge, pos);
        for &v in idx.neighbors(&sigma) {
            if used.contains(&v) {
                continue;
            }
            let next = with_vertex(&sigma, v);
            used.push(v);
            extend_paths(idx, &next, v, len + 1, gamma, used, found);
            used.pop();
        }
    }
}

fn check_root_size(g: &RGraph, rho: &[u32]) -> Result<()> {
    if rho.len() + 1 != g.r() {
        return Err(Error::WrongSetSize {
            set: rho.to_vec(),
            got: rho.len(),
            expected: g.r() - 1,
        });
    }
    Ok(())
}

/// Sizes recorded after each step of the breadth-first exploration.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BfsTrace {
    /// `|E_i|` for `i = 0, 1, ..`.
    pub edges: Vec<usize>,
    /// `|P_i|`.
    pub processed: Vec<usize>,
    /// `|Q_i|`.
    pub queued: Vec<usize>,
}

/// The breadth-first tree `S*(rho)`.
///
/// `E_0` is every edge through `rho`. Queued sets are processed in the
/// order they entered the queue, ties broken by `order`; processing
/// `sigma` adds `sigma ∪ {v}` for each neighbour `v` not yet in the tree.
pub fn breadth_first_tree(
    g: &RGraph,
    rho: &[u32],
    order: Option<SetOrder<'_>>,
) -> Result<(RTree, BfsTrace)> {
    check_root_size(g, rho)?;
    let rho = vset(rho);
    let idx = g.codegree_index();
    if !idx.in_shadow(&rho) {
        return Err(Error::RootNotInShadow(rho.to_vec()));
    }
    let order: SetOrder<'_> = order.unwrap_or(&lexicographic);
    let mut tree = RTree::new(g.r(), &rho)?;
    let mut in_tree: HashSet<u32> = rho.iter().copied().collect();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut trace = BfsTrace::default();

    let mut process = |tree: &mut RTree, base: usize, queue: &mut VecDeque<usize>| {
        let sigma = tree.sets()[base].clone();
        let mut fresh: Vec<usize> = Vec::new();
        for &v in idx.neighbors(&sigma) {
            if in_tree.insert(v) {
                let e = tree.push_on(base, v).expect("new vertex on existing set");
                fresh.extend(tree.edges()[e].children.iter().copied());
            }
        }
        fresh.sort_by(|&a, &b| order(&tree.sets()[a], &tree.sets()[b]));
        queue.extend(fresh);
    };

    process(&mut tree, 0, &mut queue);
    let mut processed = 1;
    let mut record = |tree: &RTree, processed: usize, queued: usize| {
        trace.edges.push(tree.edge_count());
        trace.processed.push(processed);
        trace.queued.push(queued);
    };
    record(&tree, processed, queue.len());
    while let Some(next) = queue.pop_front() {
        process(&mut tree, next, &mut queue);
        processed += 1;
        record(&tree, processed, queue.len());
    }
    Ok((tree, trace))
}

/// Whether the tight component of `rho` can be built by the iterative
/// tree construction rooted at `rho`.
///
/// Requires `|V(comp)| = (r-1) + |edges(comp)|`, then searches for an
/// insertion order (greedy first, backtracking on failure).
pub fn is_tree(g: &RGraph, rho: &[u32]) -> bool {
    if rho.len() + 1 != g.r() {
        return false;
    }
    let rho = vset(rho);
    let comp = match connected_components(g)
        .into_iter()
        .find(|c| c.edges().iter().any(|e| contains_all(e, &rho)))
    {
        Some(c) => c,
        None => return false,
    };
    let verts = comp.support();
    if !rho.iter().all(|v| verts.binary_search(v).is_ok()) {
        return false;
    }
    if verts.len() != rho.len() + comp.edge_count() {
        return false;
    }
    let edges = comp.edges().to_vec();
    let mut placed: HashSet<u32> = rho.iter().copied().collect();
    let mut shadow: HashSet<VSet> = [rho].into_iter().collect();
    let mut done = vec![false; edges.len()];
    place_all(&edges, &mut done, &mut placed, &mut shadow, edges.len())
}

fn contains_all(edge: &[u32], set: &[u32]) -> bool {
    set.iter().all(|v| edge.binary_search(v).is_ok())
}

/// The vertex `e` would introduce, if it is a legal next edge.
fn legal_extension(e: &[u32], placed: &HashSet<u32>, shadow: &HashSet<VSet>) -> Option<u32> {
    let mut missing = e.iter().filter(|v| !placed.contains(v));
    let v = *missing.next()?;
    if missing.next().is_some() {
        return None;
    }
    let pos = e.iter().position(|&x| x == v)?;
    shadow.contains(&without_position(e, pos)).then_some(v)
}

fn place_all(
    edges: &[VSet],
    done: &mut [bool],
    placed: &mut HashSet<u32>,
    shadow: &mut HashSet<VSet>,
    remaining: usize,
) -> bool {
    if remaining == 0 {
        return true;
    }
    for i in 0..edges.len() {
        if done[i] {
            continue;
        }
        let Some(v) = legal_extension(&edges[i], placed, shadow) else {
            continue;
        };
        let e = &edges[i];
        let added: Vec<VSet> = (0..e.len())
            .map(|p| without_position(e, p))
            .filter(|s| !shadow.contains(s))
            .collect();
        done[i] = true;
        placed.insert(v);
        shadow.extend(added.iter().cloned());
        if place_all(edges, done, placed, shadow, remaining - 1) {
            return true;
        }
        for s in &added {
            shadow.remove(s);
        }
        placed.remove(&v);
        done[i] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3(edges: &[[u32; 3]]) -> RGraph {
        RGraph::new(10, 3, edges.iter()).unwrap()
    }

    #[test]
    fn component_examples() {
        assert_eq!(connected_components(&g3(&[[0, 1, 2], [3, 4, 5]])).len(), 2);
        assert_eq!(connected_components(&g3(&[[0, 1, 2], [1, 2, 3]])).len(), 1);
        assert_eq!(connected_components(&g3(&[[0, 1, 2], [2, 3, 4]])).len(), 2);
        assert!(connected_components(&RGraph::empty(4, 3)).is_empty());
    }

    #[test]
    fn ball_examples() {
        // Path rho={0,1}: {0,1,2}, {1,2,3}, {2,3,4}.
        let path = g3(&[[0, 1, 2], [1, 2, 3], [2, 3, 4]]);
        assert!(ball(&path, &[0, 1], 0).unwrap().is_empty());
        let b2 = ball(&path, &[0, 1], 2).unwrap();
        assert_eq!(b2, g3(&[[0, 1, 2], [1, 2, 3]]));
        let b9 = ball(&path, &[0, 1], 9).unwrap();
        assert_eq!(b9, path);
    }

    #[test]
    fn large_ball_is_component() {
        let g = g3(&[[0, 1, 2], [1, 2, 3], [0, 2, 5], [5, 6, 7], [2, 3, 9]]);
        let comp = connected_components(&g)
            .into_iter()
            .find(|c| c.contains_edge(&[0, 1, 2]))
            .unwrap();
        assert_eq!(ball(&g, &[0, 1], 10).unwrap(), comp);
    }

    #[test]
    fn bfs_examples() {
        let single = g3(&[[0, 1, 2]]);
        let (t, trace) = breadth_first_tree(&single, &[0, 1], None).unwrap();
        assert_eq!(t.to_graph().edges(), single.edges());
        assert_eq!(trace.edges[0], 1);

        let k4 = RGraph::complete(4, 3);
        let (t, _) = breadth_first_tree(&k4, &[0, 1], None).unwrap();
        // {0,1,2}, {0,1,3} use every vertex; nothing else can be added.
        assert_eq!(t.edge_count(), 2);
        assert!(t.edge_count() < k4.edge_count());

        assert!(matches!(
            breadth_first_tree(&single, &[0, 5], None),
            Err(Error::RootNotInShadow(_))
        ));
    }

    #[test]
    fn is_tree_examples() {
        assert!(is_tree(&g3(&[[0, 1, 2]]), &[0, 1]));
        assert!(is_tree(&g3(&[[0, 1, 2], [1, 2, 3]]), &[0, 1]));
        let k4 = RGraph::complete(4, 3);
        for rho in [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            assert!(!is_tree(&k4, &rho));
        }
        // Root outside the graph.
        assert!(!is_tree(&g3(&[[0, 1, 2]]), &[3, 4]));
    }
}

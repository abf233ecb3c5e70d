//! Ideal irreducibility of a finite family of nonnegative matrices.
//!
//! A coordinate ideal `J` is invariant under `A` exactly when no positivity
//! edge of `A` leaves `J`, so a family is ideal irreducible iff the union of
//! the positivity digraphs is strongly connected.

use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{CoordinateIdeal, LatticeVector, Matrix};

/// A generator word witnessing `(w)_{to, from} > 0`. The word `[g0, g1, ..]`
/// denotes the product `G_{g0} G_{g1} ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub from: usize,
    pub to: usize,
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibilityReport {
    pub verdict: bool,
    /// Common invariant proper nonzero ideal, present iff `verdict` is false.
    pub witness: Option<CoordinateIdeal>,
    /// One word per ordered pair `(from, to)`, present iff `verdict` is true.
    pub certificate: Vec<PathWitness>,
}

fn check_family(gens: &[Matrix]) -> Result<usize> {
    let first = gens.first().ok_or(Error::Empty("generator list"))?;
    let n = first.dim();
    for g in gens {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
    }
    Ok(n)
}

/// Union positivity digraph; each edge is labeled by the first generator producing it.
pub fn union_digraph(gens: &[Matrix], threshold: f64) -> DiGraph<(), usize> {
    let n = gens.first().map_or(0, Matrix::dim);
    let mut g = DiGraph::with_capacity(n, n * n);
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for u in 0..n {
        for v in 0..n {
            if let Some(k) = gens.iter().position(|m| m.get(v, u) > threshold) {
                g.add_edge(nodes[u], nodes[v], k);
            }
        }
    }
    g
}

pub fn is_strongly_connected(gens: &[Matrix], threshold: f64) -> bool {
    let g = union_digraph(gens, threshold);
    if g.node_count() == 1 {
        return g.edge_count() > 0;
    }
    tarjan_scc(&g).len() == 1
}

/// True iff `a` is nilpotent, i.e. its positivity digraph has no cycle.
pub fn is_nilpotent_pattern(a: &Matrix) -> bool {
    toposort(&union_digraph(std::slice::from_ref(a), 0.0), None).is_ok()
}

/// Breadth-first distances from `start` in an adjacency matrix.
pub fn bfs_levels(adj: &[Vec<bool>], start: usize) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut level = vec![None; n];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let next = level[u].map(|l| l + 1);
        for v in 0..n {
            if adj[u][v] && level[v].is_none() {
                level[v] = next;
                queue.push_back(v);
            }
        }
    }
    level
}

pub fn is_ideal_irreducible(gens: &[Matrix]) -> Result<IrreducibilityReport> {
    is_ideal_irreducible_with(gens, 0.0)
}

/// Edges are entries strictly above `threshold`.
pub fn is_ideal_irreducible_with(gens: &[Matrix], threshold: f64) -> Result<IrreducibilityReport> {
    let n = check_family(gens)?;
    let graph = union_digraph(gens, threshold);
    if n == 1 {
        let verdict = graph.edge_count() > 0;
        return Ok(IrreducibilityReport {
            verdict,
            witness: (!verdict).then(|| CoordinateIdeal::new([0])),
            certificate: if verdict {
                vec![PathWitness {
                    from: 0,
                    to: 0,
                    word: vec![graph.edge_weights().copied().next().unwrap_or(0)],
                }]
            } else {
                Vec::new()
            },
        });
    }
    let sccs = tarjan_scc(&graph);
    if sccs.len() == 1 {
        return Ok(IrreducibilityReport {
            verdict: true,
            witness: None,
            certificate: certificate(&graph, n),
        });
    }
    let mut component = vec![0; n];
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            component[v.index()] = c;
        }
    }
    let is_sink = |c: usize| {
        sccs[c]
            .iter()
            .all(|&u| graph.neighbors(u).all(|v| component[v.index()] == c))
    };
    let witness = (0..n)
        .map(|i| component[i])
        .find(|&c| is_sink(c))
        .map(|c| CoordinateIdeal::new(sccs[c].iter().map(|v| v.index())))
        .expect("a finite condensation has a sink");
    Ok(IrreducibilityReport {
        verdict: false,
        witness: Some(witness),
        certificate: Vec::new(),
    })
}

/// Shortest nonempty walk from every vertex to every vertex, read as words.
fn certificate(graph: &DiGraph<(), usize>, n: usize) -> Vec<PathWitness> {
    let mut out = Vec::with_capacity(n * n);
    for from in 0..n {
        // parent[v] = (previous vertex, generator) on a shortest nonempty walk from `from`.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut queue = VecDeque::new();
        let start = NodeIndex::new(from);
        for e in graph.edges(start) {
            use petgraph::visit::EdgeRef;
            let v = e.target().index();
            if parent[v].is_none() {
                parent[v] = Some((from, *e.weight()));
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            use petgraph::visit::EdgeRef;
            for e in graph.edges(NodeIndex::new(u)) {
                let v = e.target().index();
                if parent[v].is_none() {
                    parent[v] = Some((u, *e.weight()));
                    queue.push_back(v);
                }
            }
        }
        for to in 0..n {
            // Walking back from `to` yields the generators in product order.
            let mut word = Vec::new();
            let mut v = to;
            loop {
                let (u, g) = parent[v].expect("strongly connected");
                word.push(g);
                v = u;
                if v == from {
                    break;
                }
            }
            out.push(PathWitness { from, to, word });
        }
    }
    out
}

/// Evaluates a word as a matrix product.
pub fn evaluate_word(gens: &[Matrix], word: &[usize]) -> Matrix {
    let n = gens[0].dim();
    word.iter().fold(Matrix::identity(n), |acc, &g| acc.mul(&gens[g]))
}

/// Smallest coordinate ideal containing `x` and invariant under every generator.
pub fn orbit_ideal(gens: &[Matrix], x: &LatticeVector) -> Result<CoordinateIdeal> {
    let n = check_family(gens)?;
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.dim(),
        });
    }
    if !x.is_positive() {
        return Err(Error::InvalidVector("orbit of a vector with negative entries"));
    }
    if x.is_zero() {
        return Err(Error::InvalidVector("orbit of the zero vector"));
    }
    let adj = union_pattern(gens, 0.0);
    let mut seen: BTreeSet<usize> = (0..n).filter(|&i| x.coords()[i] > 0.0).collect();
    let mut stack: Vec<usize> = seen.iter().copied().collect();
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if adj[u][v] && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    Ok(CoordinateIdeal::new(seen))
}

fn union_pattern(gens: &[Matrix], threshold: f64) -> Vec<Vec<bool>> {
    let n = gens[0].dim();
    let mut adj = vec![vec![false; n]; n];
    for g in gens {
        for (u, row) in g.pattern(threshold).into_iter().enumerate() {
            for (v, e) in row.into_iter().enumerate() {
                adj[u][v] |= e;
            }
        }
    }
    adj
}

/// Outcome of comparing three characterizations of irreducibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Crosscheck {
    /// All three tests agree on the verdict.
    Agree { irreducible: bool },
    /// The graph and orbit tests say irreducible but some pair needs a word longer than `length`.
    Inconclusive { length: usize, pair: (usize, usize) },
    /// A genuine disagreement (a bug).
    Disagree(String),
}

/// Compares (a) strong connectivity, (b) full orbit ideals of all basis
/// vectors and (c) existence of a positive `(i, j)` entry among words of
/// length at most `max_length`, for every ordered pair.
pub fn crosscheck_characterizations(gens: &[Matrix], max_length: usize) -> Result<Crosscheck> {
    let n = check_family(gens)?;
    let scc = is_ideal_irreducible(gens)?.verdict;
    let mut orbit = true;
    for j in 0..n {
        if orbit_ideal(gens, &LatticeVector::basis(n, j))?.len() != n {
            orbit = false;
        }
    }
    if orbit && n == 1 && !scc {
        // The one-dimensional orbit of e_1 is full even under the zero map.
        orbit = false;
    }
    if scc != orbit {
        return Ok(Crosscheck::Disagree(format!(
            "strong connectivity {scc}, orbit closure {orbit}"
        )));
    }

    // reach[u][v]: some word of the current length maps e_u to a vector with nonzero v-th entry.
    let step = union_pattern(gens, 0.0);
    let mut reach = step.clone();
    let mut seen = step.clone();
    for _ in 1..max_length {
        let mut next = vec![vec![false; n]; n];
        for u in 0..n {
            for w in 0..n {
                if reach[u][w] {
                    for v in 0..n {
                        next[u][v] |= step[w][v];
                    }
                }
            }
        }
        reach = next;
        for u in 0..n {
            for v in 0..n {
                seen[u][v] |= reach[u][v];
            }
        }
    }
    let missing = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .find(|&(u, v)| !seen[u][v]);
    Ok(match (scc, missing) {
        (true, None) => Crosscheck::Agree { irreducible: true },
        (true, Some(pair)) => Crosscheck::Inconclusive {
            length: max_length,
            pair,
        },
        (false, Some(_)) => Crosscheck::Agree { irreducible: false },
        (false, None) => {
            Crosscheck::Disagree("words cover every pair but the digraph is not strongly connected".into())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn jordan_pair() -> Vec<Matrix> {
        vec![m(&[&[1.0, 1.0], &[0.0, 1.0]]), m(&[&[0.0, 0.0], &[1.0, 0.0]])]
    }

    #[test]
    fn jordan_pair_is_irreducible_with_valid_certificate() {
        let gens = jordan_pair();
        let report = is_ideal_irreducible(&gens).unwrap();
        assert!(report.verdict);
        assert_eq!(report.certificate.len(), 4);
        for w in &report.certificate {
            assert!(evaluate_word(&gens, &w.word).get(w.to, w.from) > 0.0, "{w:?}");
        }
    }

    #[test]
    fn identity_is_reducible() {
        let report = is_ideal_irreducible(&[Matrix::identity(2)]).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.witness, Some(CoordinateIdeal::new([0])));
    }

    #[test]
    fn rank_one_pair_is_irreducible_but_each_alone_is_not() {
        let p = m(&[&[1.0, 0.0], &[1.0, 0.0]]);
        let q = m(&[&[0.0, 1.0], &[0.0, 1.0]]);
        assert!(is_ideal_irreducible(&[p.clone(), q.clone()]).unwrap().verdict);
        let wp = is_ideal_irreducible(std::slice::from_ref(&p)).unwrap().witness.unwrap();
        let wq = is_ideal_irreducible(std::slice::from_ref(&q)).unwrap().witness.unwrap();
        assert_eq!(wp, CoordinateIdeal::new([1]));
        assert_eq!(wq, CoordinateIdeal::new([0]));
        assert!(wp.is_invariant_under(&p));
        assert!(wq.is_invariant_under(&q));
    }

    #[test]
    fn zero_generators_are_reducible() {
        let report = is_ideal_irreducible(&[Matrix::zeros(3)]).unwrap();
        assert_eq!(report.witness, Some(CoordinateIdeal::new([0])));
        assert!(!is_ideal_irreducible(&[Matrix::zeros(1)]).unwrap().verdict);
    }

    #[test]
    fn orbit_ideals() {
        let n = 3;
        let full = orbit_ideal(&[Matrix::cyclic_shift(3)], &LatticeVector::basis(n, 0)).unwrap();
        assert_eq!(full, CoordinateIdeal::full(3));
        let one = orbit_ideal(&[Matrix::identity(2)], &LatticeVector::basis(2, 0)).unwrap();
        assert_eq!(one, CoordinateIdeal::new([0]));
        let p = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let q = m(&[&[1.0 / 3.0, 1.0 / 3.0], &[2.0 / 3.0, 2.0 / 3.0]]);
        assert_eq!(
            orbit_ideal(&[p, q], &LatticeVector::basis(2, 1)).unwrap(),
            CoordinateIdeal::full(2)
        );
        assert!(orbit_ideal(&[Matrix::identity(2)], &LatticeVector::new(vec![0.0, 0.0])).is_err());
        assert!(orbit_ideal(&[Matrix::identity(2)], &LatticeVector::new(vec![1.0, -1.0])).is_err());
    }

    #[test]
    fn crosscheck_examples() {
        assert_eq!(
            crosscheck_characterizations(&jordan_pair(), 4).unwrap(),
            Crosscheck::Agree { irreducible: true }
        );
        assert_eq!(
            crosscheck_characterizations(&[Matrix::identity(2)], 3).unwrap(),
            Crosscheck::Agree { irreducible: false }
        );
        assert!(matches!(
            crosscheck_characterizations(&[Matrix::cyclic_shift(5)], 2).unwrap(),
            Crosscheck::Inconclusive { length: 2, .. }
        ));
    }

    #[test]
    fn nilpotent_patterns() {
        assert!(is_nilpotent_pattern(&m(&[&[0.0, 1.0], &[0.0, 0.0]])));
        assert!(!is_nilpotent_pattern(&m(&[&[1.0, 0.0], &[0.0, 0.0]])));
        assert!(!is_nilpotent_pattern(&Matrix::cyclic_shift(4)));
    }
}

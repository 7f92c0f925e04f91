//! Weighted directed networks and strong connectivity.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::markov::StochasticMatrix;
use crate::matrix::SquareMatrix;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Rational,
}

/// Nodes `0..node_count` joined by positively weighted directed edges.
/// At most one edge per ordered pair; self-loops are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedNetwork {
    node_count: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub strongly_connected: bool,
    pub component_count: usize,
    /// Component id of each node, numbered `0..component_count`.
    pub component_assignment: Vec<usize>,
}

impl IrreducibilityReport {
    /// Node lists of each component, ordered by component id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (node, &c) in self.component_assignment.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    /// `Err(Reducible)` unless there is exactly one component.
    pub fn require_strongly_connected(&self) -> Result<()> {
        if self.strongly_connected {
            Ok(())
        } else {
            Err(Error::Reducible {
                component_count: self.component_count,
                components: self.components(),
            })
        }
    }
}

impl DirectedNetwork {
    pub fn from_edge_list(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Empty);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (from, to, weight) in edges {
            for index in [from, to] {
                if index >= node_count {
                    return Err(Error::IndexOutOfRange { index, node_count });
                }
            }
            if !seen.insert((from, to)) {
                return Err(Error::DuplicateEdge { from, to });
            }
            if !weight.is_positive() {
                return Err(Error::NonPositiveWeight {
                    from,
                    to,
                    weight: weight.to_field(),
                });
            }
            out.push(Edge { from, to, weight });
        }
        Ok(Self {
            node_count,
            edges: out,
            labels: None,
        })
    }

    /// Same as [`Self::from_edge_list`] with node names; edges still use
    /// indices into `labels`.
    pub fn with_labels(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut g = Self::from_edge_list(labels.len(), edges)?;
        g.labels = Some(labels);
        Ok(g)
    }

    /// Unit-weight edges.
    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_edge_list(
            node_count,
            pairs.iter().map(|&(a, b)| (a, b, Rational::from_i64(1))),
        )
    }

    /// Inverse of [`Self::adjacency_matrix`]: one edge per positive entry.
    pub fn from_adjacency(m: &SquareMatrix<Rational>) -> Result<Self> {
        m.ensure_non_negative()?;
        let n = m.order();
        let edges = (0..n * n)
            .map(|k| (k / n, k % n))
            .filter(|&(i, j)| !m.get(i, j).is_zero())
            .map(|(i, j)| (i, j, m.get(i, j).clone()));
        Self::from_edge_list(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    /// Out-neighbour lists.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }

    pub fn adjacency_matrix(&self) -> SquareMatrix<Rational> {
        let n = self.node_count;
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for e in &self.edges {
            rows[e.from][e.to] = e.weight.clone();
        }
        SquareMatrix::from_rows(rows).expect("node_count > 0")
    }

    pub fn strong_connectivity(&self) -> IrreducibilityReport {
        strongly_connected_components(&self.successors())
    }

    /// Row-normalized adjacency `D⁻¹A` with `D` the weighted out-degrees.
    pub fn uniform_walk_matrix(&self) -> Result<StochasticMatrix<Rational>> {
        let a = self.adjacency_matrix();
        let degrees = a.row_sums().values;
        if let Some(node) = degrees.iter().position(Zero::is_zero) {
            return Err(Error::DanglingNode { node });
        }
        let s = SquareMatrix::from_fn(a.order(), |i, j| a.get(i, j) / &degrees[i]);
        StochasticMatrix::new(s)
    }
}

/// Strong connectivity of the nonzero pattern of `m`.
pub fn support_connectivity<T: Scalar>(m: &SquareMatrix<T>) -> IrreducibilityReport {
    strongly_connected_components(&support_successors(m))
}

pub(crate) fn support_successors<T: Scalar>(m: &SquareMatrix<T>) -> Vec<Vec<usize>> {
    m.rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// Tarjan's algorithm, iterative so deep graphs cannot overflow the stack.
pub fn strongly_connected_components(successors: &[Vec<usize>]) -> IrreducibilityReport {
    const UNVISITED: usize = usize::MAX;
    let n = successors.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut assignment = vec![UNVISITED; n];
    let mut next_index = 0;
    let mut component_count = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, position in its successor list)
        let mut call_stack = vec![(root, 0usize)];
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            if let Some(&w) = successors[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component root is on the stack");
                    on_stack[w] = false;
                    assignment[w] = component_count;
                    if w == v {
                        break;
                    }
                }
                component_count += 1;
            }
        }
    }

    IrreducibilityReport {
        strongly_connected: component_count == 1,
        component_count,
        component_assignment: assignment,
    }
}

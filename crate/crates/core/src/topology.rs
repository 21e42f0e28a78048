//! Qubit connectivity graphs and their routing cost.
//!
//! Two qubits that are not directly coupled are brought together with swap
//! gates along a shortest path, so a pair at distance `D` costs `D - 1`
//! swaps. The mean over all pairs, `N`, grows with qubit count in a way
//! that depends on the layout. That growth is summarised by the
//! connectivity exponent `m` in `eps_eff = n^m * eps`.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_open_closed, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    Complete,
    #[serde(alias = "square-grid")]
    Grid,
    #[serde(alias = "linear-chain", alias = "chain")]
    Linear,
    Custom,
}

impl TopologyKind {
    /// Exponent for the canonical families: 0 complete, 1/2 grid, 1 chain.
    pub fn nominal_exponent(self) -> Option<f64> {
        match self {
            TopologyKind::Complete => Some(0.0),
            TopologyKind::Grid => Some(0.5),
            TopologyKind::Linear => Some(1.0),
            TopologyKind::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Complete => "complete",
            TopologyKind::Grid => "grid",
            TopologyKind::Linear => "linear",
            TopologyKind::Custom => "custom",
        }
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(TopologyKind::Complete),
            "grid" | "square-grid" => Ok(TopologyKind::Grid),
            "linear" | "linear-chain" | "chain" => Ok(TopologyKind::Linear),
            "custom" => Ok(TopologyKind::Custom),
            other => Err(invalid("topology", format!("unknown topology kind `{other}`"))),
        }
    }
}

/// Undirected, unweighted coupling graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyGraph {
    qubit_count: usize,
    edges: BTreeSet<(usize, usize)>,
    kind: TopologyKind,
}

impl TopologyGraph {
    pub fn complete(n: usize) -> Result<Self> {
        check_count(n)?;
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Ok(Self {
            qubit_count: n,
            edges,
            kind: TopologyKind::Complete,
        })
    }

    /// Nearest-neighbour grid, `ceil(sqrt(n))` columns wide, filled row by row.
    pub fn square_grid(n: usize) -> Result<Self> {
        check_count(n)?;
        let mut side = n.isqrt();
        if side * side < n {
            side += 1;
        }
        let mut edges = BTreeSet::new();
        for i in 0..n {
            if (i + 1) % side != 0 && i + 1 < n {
                edges.insert((i, i + 1));
            }
            if i + side < n {
                edges.insert((i, i + side));
            }
        }
        Ok(Self {
            qubit_count: n,
            edges,
            kind: TopologyKind::Grid,
        })
    }

    pub fn linear_chain(n: usize) -> Result<Self> {
        check_count(n)?;
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Ok(Self {
            qubit_count: n,
            edges,
            kind: TopologyKind::Linear,
        })
    }

    /// Arbitrary edge list. Endpoints must be `< n` and distinct; duplicate
    /// and reversed pairs collapse to one edge.
    pub fn custom(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        check_count(n)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(invalid(
                    "edges",
                    format!("edge ({a}, {b}) touches a qubit index >= {n}"),
                ));
            }
            if a == b {
                return Err(invalid("edges", format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            qubit_count: n,
            edges: set,
            kind: TopologyKind::Custom,
        })
    }

    /// Builds one of the canonical families.
    pub fn generate(kind: TopologyKind, n: usize) -> Result<Self> {
        match kind {
            TopologyKind::Complete => Self::complete(n),
            TopologyKind::Grid => Self::square_grid(n),
            TopologyKind::Linear => Self::linear_chain(n),
            TopologyKind::Custom => Err(invalid(
                "topology",
                "custom graphs need an explicit edge list",
            )),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.qubit_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.qubit_count];
        let mut components = 0;
        for start in 0..self.qubit_count {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn ensure_connected(&self) -> Result<()> {
        match self.component_count() {
            0 | 1 => Ok(()),
            components => Err(Error::DisconnectedGraph { components }),
        }
    }
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("qubit_count", "a topology needs at least one qubit"))
    } else {
        Ok(())
    }
}

/// Sum of BFS distances from `source`, or `None` if some vertex is unreachable.
fn distance_sum(adj: &[Vec<usize>], source: usize) -> Option<u64> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut total = 0u64;
    let mut reached = 1usize;
    while let Some(v) = queue.pop_front() {
        let next = dist[v] + 1;
        for &w in &adj[v] {
            if dist[w] == u32::MAX {
                dist[w] = next;
                total += u64::from(next);
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (reached == adj.len()).then_some(total)
}

/// Mean number of swaps `N` needed to couple a uniformly random qubit pair.
///
/// Exact: all-pairs BFS, one traversal per source, run in parallel. The
/// distance sums are integers, so the result does not depend on scheduling.
///
/// ```
/// use qv_estimator::topology::{average_swap_count, TopologyGraph};
/// let chain = TopologyGraph::linear_chain(3).unwrap();
/// assert!((average_swap_count(&chain).unwrap() - 1.0 / 3.0).abs() < 1e-12);
/// ```
pub fn average_swap_count(g: &TopologyGraph) -> Result<f64> {
    let n = g.qubit_count;
    if n < 2 {
        return Ok(0.0);
    }
    let adj = g.adjacency();
    let sums: Option<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|s| distance_sum(&adj, s))
        .collect();
    let Some(sums) = sums else {
        return Err(Error::DisconnectedGraph {
            components: g.component_count(),
        });
    };
    let total: u64 = sums.iter().sum();
    let ordered_pairs = (n as u64) * (n as u64 - 1);
    Ok(total as f64 / ordered_pairs as f64 - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub qubit_count: usize,
    pub avg_swaps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityFit {
    pub m_fit: f64,
    /// RMS residual of the log-log fit.
    pub fit_residual: f64,
    pub points: Vec<FitPoint>,
}

/// Fits `m` in `N + 1 ~ n^m` for one of the canonical families.
pub fn fit_connectivity_exponent(kind: TopologyKind, sizes: &[usize]) -> Result<ConnectivityFit> {
    if kind == TopologyKind::Custom {
        return Err(invalid(
            "topology",
            "fitting a custom family needs a generator; use fit_connectivity_exponent_with",
        ));
    }
    fit_connectivity_exponent_with(|n| TopologyGraph::generate(kind, n), sizes)
}

/// Least-squares slope of `ln(N + 1)` against `ln(n)` over graphs built by `generator`.
///
/// `N + 1` maps the complete graph (`N = 0`) to `m = 0`, matching
/// `eps_eff = eps` for full connectivity.
pub fn fit_connectivity_exponent_with<F>(generator: F, sizes: &[usize]) -> Result<ConnectivityFit>
where
    F: Fn(usize) -> Result<TopologyGraph>,
{
    if sizes.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 sizes, got {}",
            sizes.len()
        )));
    }
    let points = sizes
        .iter()
        .map(|&n| {
            let g = generator(n)?;
            Ok(FitPoint {
                qubit_count: g.qubit_count(),
                avg_swaps: average_swap_count(&g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    if points.iter().all(|p| p.avg_swaps == 0.0) {
        return Ok(ConnectivityFit {
            m_fit: 0.0,
            fit_residual: 0.0,
            points,
        });
    }

    let xs: Vec<f64> = points.iter().map(|p| (p.qubit_count as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.avg_swaps + 1.0).ln()).collect();
    let len = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / len;
    let y_mean = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit(
            "all sizes produce the same qubit count".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();

    Ok(ConnectivityFit {
        m_fit: slope,
        fit_residual: (sse / len).sqrt(),
        points,
    })
}

/// A graph together with its derived routing statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyProfile {
    pub graph: TopologyGraph,
    pub avg_swaps: f64,
    pub m_fit: f64,
    pub fit_residual: f64,
}

impl TopologyProfile {
    /// Profile of a single graph.
    ///
    /// One graph cannot be fitted across sizes, so `m_fit` is the
    /// single-point exponent `ln(N + 1) / ln(n)` with zero residual.
    pub fn from_graph(graph: TopologyGraph) -> Result<Self> {
        let avg_swaps = average_swap_count(&graph)?;
        let n = graph.qubit_count() as f64;
        let m_fit = if n > 1.0 && avg_swaps > 0.0 {
            (avg_swaps + 1.0).ln() / n.ln()
        } else {
            0.0
        };
        Ok(Self {
            graph,
            avg_swaps,
            m_fit,
            fit_residual: 0.0,
        })
    }

    pub fn effective_error(&self, n: u64, eps: f64) -> Result<f64> {
        effective_error(self.m_fit, n, eps)
    }
}

/// Routing-inflated error `n^m * eps`, capped at 1.
///
/// ```
/// use qv_estimator::topology::effective_error;
/// assert!((effective_error(0.5, 100, 1e-3).unwrap() - 1e-2).abs() < 1e-15);
/// ```
pub fn effective_error(m: f64, n: u64, eps: f64) -> Result<f64> {
    check_open_closed("eps", eps, 0.0, 1.0)?;
    if !m.is_finite() || m < 0.0 {
        return Err(invalid("m", format!("connectivity exponent {m} must be >= 0")));
    }
    if n < 1 {
        return Err(invalid("n", "at least one qubit is required"));
    }
    Ok(((n as f64).powf(m) * eps).min(1.0))
}

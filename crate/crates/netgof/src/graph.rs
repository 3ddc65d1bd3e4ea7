//! Undirected binary networks: construction, validation, degree statistics,
//! edge-list file I/O, and the tuning rule for KNN-SP vertex hunting.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// An undirected simple graph on nodes `0..n`.
///
/// Invariants: the adjacency matrix is symmetric and hollow (no self-loops),
/// and `n >= 3` (cycle statistics are undefined below that).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

/// Counters produced while ingesting raw edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    /// Self-loops dropped (hollow invariant).
    pub self_loops_dropped: usize,
    /// Duplicate edges collapsed silently.
    pub duplicates_collapsed: usize,
}

impl Network {
    /// Builds a network from raw edges, dropping self-loops and collapsing
    /// duplicates. Node indices must be `< n`.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, IngestStats)> {
        if n < 3 {
            return Err(Error::Validation(format!(
                "a network needs at least 3 nodes, got {n}"
            )));
        }
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut stats = IngestStats::default();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Validation(format!(
                    "edge ({i}, {j}) references a node >= n = {n}"
                )));
            }
            if i == j {
                stats.self_loops_dropped += 1;
                continue;
            }
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            stats.duplicates_collapsed += before - list.len();
            edge_count += list.len();
        }
        // Each dropped duplicate was counted in both endpoint lists.
        stats.duplicates_collapsed /= 2;
        Ok((
            Network {
                n,
                adj,
                edge_count: edge_count / 2,
            },
            stats,
        ))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Sorted neighbor list of node `i`.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    /// Adjacency accessor `A(i, j)`.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }

    /// Iterates undirected edges as pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&j| (j as usize) > i)
                .map(move |&j| (i, j as usize))
        })
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut d_min = usize::MAX;
        let mut d_max = 0;
        for list in &self.adj {
            d_min = d_min.min(list.len());
            d_max = d_max.max(list.len());
        }
        DegreeStats {
            d_min,
            d_max,
            d_bar: 2.0 * self.edge_count as f64 / self.n as f64,
        }
    }

    /// Extracts the largest connected component (ties broken by smallest
    /// member index). Returns the induced subgraph and, for each new node,
    /// its index in the original network.
    ///
    /// This is always an explicit step; no operation in this crate restricts
    /// to the giant component implicitly.
    pub fn giant_component(&self) -> Result<(Network, Vec<usize>)> {
        let mut comp = vec![usize::MAX; self.n];
        let mut n_comps = 0;
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = n_comps;
            n_comps += 1;
            let mut stack = vec![start];
            comp[start] = id;
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    let v = v as usize;
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
        }
        let mut sizes = vec![0usize; n_comps];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..n_comps).max_by_key(|&c| (sizes[c], usize::MAX - c)).unwrap();
        let keep: Vec<usize> = (0..self.n).filter(|&i| comp[i] == best).collect();
        let mut new_id = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            new_id[old] = new;
        }
        let edges = self
            .edges()
            .filter(|&(i, j)| comp[i] == best && comp[j] == best)
            .map(|(i, j)| (new_id[i], new_id[j]))
            .collect::<Vec<_>>();
        let (net, _) = Network::from_edges(keep.len(), edges)?;
        Ok((net, keep))
    }
}

/// Minimum, maximum, and average degree of a network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub d_min: usize,
    pub d_max: usize,
    pub d_bar: f64,
}

impl DegreeStats {
    /// One CSV row `d_min,d_max,d_bar` (header: `d_min,d_max,d_bar`).
    pub fn to_csv_row(&self) -> String {
        format!("{},{},{}", self.d_min, self.d_max, self.d_bar)
    }
}

/// Result of loading an edge-list file.
#[derive(Debug)]
pub struct LoadedNetwork {
    pub network: Network,
    pub stats: IngestStats,
}

/// Parses an edge list from text.
///
/// Format: one `i j` pair per line, whitespace separated. Lines starting
/// with `#` are comments; a leading `# base=0` or `# base=1` directive
/// declares the indexing base (default 0). The node count is inferred as
/// the largest index plus one (after base adjustment).
pub fn parse_edge_list(text: &str) -> Result<LoadedNetwork> {
    let mut base: usize = 0;
    let mut base_seen = false;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_node = 0usize;
    let mut saw_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(value) = rest.strip_prefix("base=") {
                if saw_data {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "base directive must precede all edges".into(),
                    });
                }
                if base_seen {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "duplicate base directive".into(),
                    });
                }
                base = match value.trim() {
                    "0" => 0,
                    "1" => 1,
                    other => {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: format!("base must be 0 or 1, got {other:?}"),
                        })
                    }
                };
                base_seen = true;
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected two node indices, got {line:?}"),
                })
            }
        };
        let parse = |tok: &str| -> Result<usize> {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("invalid node index {tok:?}"),
            })
        };
        let (mut i, mut j) = (parse(a)?, parse(b)?);
        if base == 1 {
            if i == 0 || j == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "node index 0 is invalid under base=1".into(),
                });
            }
            i -= 1;
            j -= 1;
        }
        max_node = max_node.max(i).max(j);
        saw_data = true;
        edges.push((i, j));
    }

    if edges.is_empty() {
        return Err(Error::Validation("edge list contains no edges".into()));
    }
    let n = (max_node + 1).max(3);
    let (network, stats) = Network::from_edges(n, edges)?;
    Ok(LoadedNetwork { network, stats })
}

/// Loads an edge-list file; see [`parse_edge_list`] for the format.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedNetwork> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}

/// Serializes a network in the edge-list format (0-based, with header).
pub fn edge_list_string(net: &Network) -> String {
    let mut out = String::new();
    out.push_str("# base=0\n");
    for (i, j) in net.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

/// Writes a network to an edge-list file; round-trips with [`load_edge_list`].
pub fn save_edge_list(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, edge_list_string(net))?;
    Ok(())
}

/// Tuning parameters `(N, alpha)` for KNN-SP vertex hunting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnnSpTuning {
    /// Neighborhood size N.
    pub n_neighbors: usize,
    /// Ball-radius divisor alpha.
    pub alpha: f64,
}

/// Data-driven KNN-SP tuning rule:
/// `alpha = 20` if `floor(n/K) > 20`, else `alpha = 5`;
/// `m0 = round([K (d_bar / d_min) / 250]^2)`;
/// `N = round((m0 + 1) * min(10, n/10))`,
/// with round = nearest integer, halves away from zero.
///
/// Fails if the network has an isolated node (`d_min = 0`): restrict to the
/// giant component first.
pub fn knnsp_tuning(net: &Network, k: usize) -> Result<KnnSpTuning> {
    let stats = net.degree_stats();
    if stats.d_min == 0 {
        let isolated = (0..net.n()).find(|&i| net.degree(i) == 0).unwrap_or(0);
        return Err(Error::IsolatedNode(isolated));
    }
    knnsp_tuning_from_stats(net.n(), k, stats)
}

/// [`knnsp_tuning`] from precomputed degree statistics.
pub fn knnsp_tuning_from_stats(n: usize, k: usize, stats: DegreeStats) -> Result<KnnSpTuning> {
    if k == 0 {
        return Err(Error::Config("K must be at least 1".into()));
    }
    if stats.d_min == 0 {
        return Err(Error::Validation(
            "KNN-SP tuning is undefined with isolated nodes; restrict to the giant component"
                .into(),
        ));
    }
    let alpha = alpha_rule(n, k);
    let m0 = m0_rule(k, stats.d_bar / stats.d_min as f64);
    let n_param = ((m0 as f64 + 1.0) * (n as f64 / 10.0).min(10.0)).round();
    Ok(KnnSpTuning {
        n_neighbors: n_param.max(1.0) as usize,
        alpha,
    })
}

fn alpha_rule(n: usize, k: usize) -> f64 {
    if n / k > 20 {
        20.0
    } else {
        5.0
    }
}

fn m0_rule(k: usize, degree_ratio: f64) -> usize {
    let x = k as f64 * degree_ratio / 250.0;
    (x * x).round() as usize
}

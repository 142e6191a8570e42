//! Simple undirected graphs in compressed sparse row form.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// A simple undirected graph with one hidden variable per vertex.
///
/// Neighbor lists are sorted and stored back to back; `neighbors(v)` is
/// `adjacency[offsets[v]..offsets[v + 1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    hidden: Vec<f64>,
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
}

impl Graph {
    /// Builds the graph from an edge list, rejecting self-loops, out-of-range
    /// endpoints and repeated edges. Edge orientation is irrelevant.
    pub fn from_edges(hidden: Vec<f64>, edges: &[(u32, u32)]) -> Result<Self> {
        let n = hidden.len();
        if n > u32::MAX as usize {
            return Err(Error::Graph(format!("{n} vertices exceed the u32 index range")));
        }
        let mut degree = vec![0usize; n];
        for &(i, j) in edges {
            if i == j {
                return Err(Error::Graph(format!("self-loop at vertex {i}")));
            }
            if i as usize >= n || j as usize >= n {
                return Err(Error::Graph(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            degree[i as usize] += 1;
            degree[j as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut adjacency = vec![0u32; offsets[n]];
        for &(i, j) in edges {
            adjacency[fill[i as usize]] = j;
            fill[i as usize] += 1;
            adjacency[fill[j as usize]] = i;
            fill[j as usize] += 1;
        }
        for v in 0..n {
            let list = &mut adjacency[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Graph(format!("duplicate edge ({v}, {})", w[0])));
            }
        }
        Ok(Graph { hidden, offsets, adjacency })
    }

    pub fn n(&self) -> usize {
        self.hidden.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.len() / 2
    }

    pub fn hidden(&self) -> &[f64] {
        &self.hidden
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i).iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i as u32, j))
        })
    }

    /// Writes one `"i j"` line per edge, `i < j`, 0-based.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, j) in self.edges() {
            writeln!(out, "{i} {j}")?;
        }
        out.flush()
    }

    /// Checks symmetry, sortedness, and the absence of loops and duplicates.
    pub fn validate(&self) -> Result<()> {
        for v in 0..self.n() {
            let list = self.neighbors(v);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Graph(format!("neighbors of {v} not strictly increasing")));
            }
            for &w in list {
                if w as usize == v {
                    return Err(Error::Graph(format!("self-loop at {v}")));
                }
                if !self.has_edge(w as usize, v) {
                    return Err(Error::Graph(format!("edge ({v}, {w}) is not symmetric")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_sorted_symmetric_adjacency() {
        let g = Graph::from_edges(vec![1.0; 4], &[(2, 0), (0, 1), (3, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.neighbors(1), &[0, 3]);
        assert_eq!(g.degrees(), vec![2, 2, 1, 1]);
        assert_eq!(g.edge_count(), 3);
        assert!(g.validate().is_ok());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 3)]);
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(Graph::from_edges(vec![1.0; 3], &[(1, 1)]).is_err());
        assert!(Graph::from_edges(vec![1.0; 3], &[(0, 3)]).is_err());
        assert!(Graph::from_edges(vec![1.0; 3], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(vec![1.0; 3], &[(2, 1), (0, 2)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 2\n1 2\n");
    }
}

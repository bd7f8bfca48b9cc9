use std::fmt::Write as _;

use super::IncidenceStructure;

/// Bipartite point–block incidence graph.
///
/// Vertices `0..num_points` are points; `num_points + j` is block `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviGraph {
    num_points: usize,
    num_blocks: usize,
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl LeviGraph {
    pub(crate) fn of(s: &IncidenceStructure) -> Self {
        let np = s.num_points();
        let mut adjacency = vec![Vec::new(); np + s.num_blocks()];
        for (j, block) in s.blocks().iter().enumerate() {
            for &p in block {
                adjacency[p].push(np + j);
                adjacency[np + j].push(p);
            }
        }
        let labels = (0..np)
            .map(|p| s.label(p).map_or_else(|| p.to_string(), |l| l.to_string()))
            .chain((0..s.num_blocks()).map(|j| format!("B{j}")))
            .collect();
        LeviGraph { num_points: np, num_blocks: s.num_blocks(), adjacency, labels }
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn is_point(&self, v: usize) -> bool {
        v < self.num_points
    }

    /// Edges as `(point, block_vertex)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_points).flat_map(move |p| self.adjacency[p].iter().map(move |&b| (p, b)))
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    /// Graphviz text: points as circles, blocks as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph levi {\n");
        for v in 0..self.num_vertices() {
            let (prefix, idx, shape) =
                if self.is_point(v) { ("p", v, "circle") } else { ("b", v - self.num_points, "box") };
            writeln!(out, "  {prefix}{idx} [shape={shape}, label=\"{}\"];", self.labels[v]).unwrap();
        }
        for (p, b) in self.edges() {
            writeln!(out, "  p{p} -- b{};", b - self.num_points).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::levi_graph;

    #[test]
    fn triangle() {
        let s = IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let g = levi_graph(&s);
        assert_eq!(g.num_vertices(), 6);
        assert_eq!(g.num_edges(), 6);
        assert!(g.neighbors(3).contains(&0) && g.neighbors(3).contains(&1));
        let dot = g.to_dot();
        assert!(dot.starts_with("graph levi {"));
        assert_eq!(dot.matches("shape=circle").count(), 3);
        assert_eq!(dot.matches("shape=box").count(), 3);
        assert_eq!(dot.matches(" -- ").count(), 6);
    }
}

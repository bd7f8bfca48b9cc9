//! Individualization–refinement search on Levi graphs.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::group::{group_order, Permutation};
use super::IncidenceStructure;
use crate::error::{Error, Result};

/// Limits for the symmetry search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest Levi graph (points + blocks) accepted.
    pub max_vertices: usize,
    /// Refinement calls before giving up.
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_vertices: 200, max_nodes: 10_000_000 }
    }
}

impl SearchBudget {
    pub fn with_max_vertices(self, max_vertices: usize) -> Self {
        SearchBudget { max_vertices, ..self }
    }
}

/// Generators of the automorphism group as point permutations, and its order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub generators: Vec<Permutation>,
    #[serde(serialize_with = "serialize_biguint")]
    pub order: BigUint,
    pub nodes: u64,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

struct Graph {
    num_points: usize,
    adjacency: Vec<Vec<usize>>,
    bits: Vec<Vec<u64>>,
    num_edges: usize,
}

impl Graph {
    fn of(s: &IncidenceStructure) -> Self {
        let np = s.num_points();
        let n = np + s.num_blocks();
        let mut adjacency = vec![Vec::new(); n];
        let mut bits = vec![vec![0u64; n.div_ceil(64)]; n];
        let mut num_edges = 0;
        for (j, block) in s.blocks().iter().enumerate() {
            for &p in block {
                let b = np + j;
                adjacency[p].push(b);
                adjacency[b].push(p);
                bits[p][b / 64] |= 1 << (b % 64);
                bits[b][p / 64] |= 1 << (p % 64);
                num_edges += 1;
            }
        }
        Graph { num_points: np, adjacency, bits, num_edges }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u][v / 64] >> (v % 64) & 1 == 1
    }

    /// Whether `map` (vertex of `self` to vertex of `other`) is an isomorphism.
    fn maps_onto(&self, other: &Graph, map: &[usize]) -> bool {
        self.num_edges == other.num_edges
            && (0..self.len()).all(|u| self.adjacency[u].iter().all(|&v| other.adjacent(map[u], map[v])))
    }
}

/// Ordered partition of the vertex set; cells are identified by their start position.
#[derive(Clone)]
struct Partition {
    order: Vec<usize>,
    pos: Vec<usize>,
    start: Vec<usize>,
    len: Vec<usize>,
}

impl Partition {
    fn initial(g: &Graph) -> Self {
        let n = g.len();
        let np = g.num_points;
        let start = (0..n).map(|i| if i < np { 0 } else { np }).collect();
        let mut len = vec![0; n];
        if np > 0 {
            len[0] = np;
        }
        if n > np {
            len[np] = n - np;
        }
        Partition { order: (0..n).collect(), pos: (0..n).collect(), start, len }
    }

    fn cell_starts(&self) -> Vec<usize> {
        (0..self.order.len()).filter(|&i| self.start[i] == i).collect()
    }

    fn same_shape(&self, other: &Partition) -> bool {
        self.start == other.start
    }

    /// Smallest non-singleton cell, lowest position on ties.
    fn target_cell(&self) -> Option<usize> {
        self.cell_starts().into_iter().filter(|&c| self.len[c] > 1).min_by_key(|&c| (self.len[c], c))
    }

    fn members(&self, c: usize) -> Vec<usize> {
        let mut m = self.order[c..c + self.len[c]].to_vec();
        m.sort_unstable();
        m
    }

    /// Splits `v` off the front of its cell; returns the start of the new singleton.
    fn individualize(&mut self, v: usize) -> usize {
        let c = self.start[self.pos[v]];
        let l = self.len[c];
        let (pv, front) = (self.pos[v], self.order[c]);
        self.order.swap(c, pv);
        self.pos[front] = pv;
        self.pos[v] = c;
        if l > 1 {
            self.len[c] = 1;
            self.len[c + 1] = l - 1;
            for i in c + 1..c + l {
                self.start[i] = c + 1;
            }
        }
        c
    }

    /// Equitable refinement with respect to the cells in `queue`.
    fn refine(&mut self, g: &Graph, queue: impl IntoIterator<Item = usize>) {
        let n = self.order.len();
        let mut queued = vec![false; n];
        let mut queue: VecDeque<usize> = queue.into_iter().collect();
        for &c in &queue {
            queued[c] = true;
        }
        let mut count = vec![0usize; n];
        while let Some(s) = queue.pop_front() {
            queued[s] = false;
            let splitter: Vec<usize> = self.order[s..s + self.len[s]].to_vec();
            let mut touched = Vec::new();
            for &u in &splitter {
                for &w in &g.adjacency[u] {
                    if count[w] == 0 {
                        touched.push(w);
                    }
                    count[w] += 1;
                }
            }
            let mut cells: Vec<usize> = touched.iter().map(|&w| self.start[self.pos[w]]).collect();
            cells.sort_unstable();
            cells.dedup();
            for c in cells {
                let l = self.len[c];
                if l == 1 {
                    continue;
                }
                let slice = &mut self.order[c..c + l];
                slice.sort_unstable_by_key(|&w| (count[w], w));
                for (i, &w) in slice.iter().enumerate() {
                    self.pos[w] = c + i;
                }
                let mut piece = c;
                for i in c + 1..=c + l {
                    if i == c + l || count[self.order[i]] != count[self.order[i - 1]] {
                        self.len[piece] = i - piece;
                        for q in piece..i {
                            self.start[q] = piece;
                        }
                        if (piece != c || i != c + l)
                            && !queued[piece] {
                                queued[piece] = true;
                                queue.push_back(piece);
                            }
                        piece = i;
                    }
                }
            }
            for w in touched {
                count[w] = 0;
            }
        }
    }
}

/// One node on the first path: its partition and the chosen target cell.
struct PathNode {
    partition: Partition,
    target: Option<usize>,
}

struct Searcher<'a> {
    graph: &'a Graph,
    nodes: u64,
    max_nodes: u64,
    generators: Vec<(usize, Permutation)>,
}

impl<'a> Searcher<'a> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded { nodes: self.max_nodes });
        }
        Ok(())
    }

    fn branch(&mut self, g: &Graph, p: &Partition, v: usize) -> Result<Partition> {
        self.tick()?;
        let mut q = p.clone();
        let c = q.individualize(v);
        q.refine(g, [c]);
        Ok(q)
    }

    fn first_path(&mut self, p: &Partition) -> Result<Vec<PathNode>> {
        let mut path = Vec::new();
        let mut cur = p.clone();
        loop {
            let target = cur.target_cell();
            let next = match target {
                Some(c) => Some(self.branch(self.graph, &cur, cur.members(c)[0])?),
                None => None,
            };
            path.push(PathNode { partition: cur, target });
            match next {
                Some(n) => cur = n,
                None => return Ok(path),
            }
        }
    }

    /// Searches below `q` (in graph `h`) for a leaf compatible with the path.
    fn match_leaf(&mut self, h: &Graph, path: &[PathNode], depth: usize, q: &Partition) -> Result<Option<Permutation>> {
        let node = &path[depth];
        let Some(c) = node.target else {
            let map: Vec<usize> = {
                let mut m = vec![0; q.order.len()];
                for (i, &v) in node.partition.order.iter().enumerate() {
                    m[v] = q.order[i];
                }
                m
            };
            return Ok(self.graph.maps_onto(h, &map).then_some(map));
        };
        for x in q.members(c) {
            let qx = self.branch(h, q, x)?;
            if !qx.same_shape(&path[depth + 1].partition) {
                continue;
            }
            if let Some(m) = self.match_leaf(h, path, depth + 1, &qx)? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    fn orbit(&self, v: usize, level: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        seen[v] = true;
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for (_, g) in self.generators.iter().filter(|(l, _)| *l >= level) {
                if !seen[g[x]] {
                    seen[g[x]] = true;
                    stack.push(g[x]);
                }
            }
        }
        seen
    }

    /// Order of the stabilizer of the partition `p` (already equitable).
    fn stabilizer(&mut self, p: &Partition, level: usize) -> Result<BigUint> {
        let Some(c) = p.target_cell() else {
            return Ok(BigUint::one());
        };
        let cell = p.members(c);
        let v = cell[0];
        let pv = self.branch(self.graph, p, v)?;
        let below = self.stabilizer(&pv, level + 1)?;
        let path = self.first_path(&pv)?;
        let mut orbit = self.orbit(v, level);
        for &w in &cell[1..] {
            if orbit[w] {
                continue;
            }
            let pw = self.branch(self.graph, p, w)?;
            if !pw.same_shape(&pv) {
                continue;
            }
            if let Some(perm) = self.match_leaf(self.graph, &path, 0, &pw)? {
                self.generators.push((level, perm));
                orbit = self.orbit(v, level);
            }
        }
        Ok(below * BigUint::from(orbit.iter().filter(|&&b| b).count()))
    }
}

fn check_size(s: &IncidenceStructure, budget: &SearchBudget) -> Result<()> {
    let vertices = s.num_points() + s.num_blocks();
    if vertices > budget.max_vertices {
        return Err(Error::TooLarge { vertices, limit: budget.max_vertices });
    }
    Ok(())
}

/// Automorphism group of the incidence structure (point and block permutations
/// preserving incidence), reported through its action on points.
///
/// The order from the search is cross-checked against a Schreier–Sims
/// computation on the generators.
pub fn automorphism_group(s: &IncidenceStructure, budget: &SearchBudget) -> Result<GroupDescription> {
    check_size(s, budget)?;
    let graph = Graph::of(s);
    let mut p = Partition::initial(&graph);
    p.refine(&graph, p.cell_starts());
    let mut searcher = Searcher { graph: &graph, nodes: 0, max_nodes: budget.max_nodes, generators: Vec::new() };
    let order = searcher.stabilizer(&p, 0)?;
    let full: Vec<Permutation> = searcher.generators.into_iter().map(|(_, g)| g).collect();
    let check = group_order(graph.len(), &full);
    if check != order {
        return Err(Error::Falsified(format!("search order {order} disagrees with Schreier-Sims order {check}")));
    }
    let np = s.num_points();
    let mut generators: Vec<Permutation> = full.iter().map(|g| g[..np].to_vec()).collect();
    generators.retain(|g| g.iter().enumerate().any(|(i, &x)| i != x));
    // Blocks are determined by their points unless some point set is empty.
    if group_order(np, &generators) != order && s.blocks().iter().all(|b| !b.is_empty()) {
        return Err(Error::Falsified("point action is not faithful".into()));
    }
    Ok(GroupDescription { generators, order, nodes: searcher.nodes })
}

/// A point bijection carrying the blocks of `a` onto those of `b`, if one exists.
pub fn find_isomorphism(a: &IncidenceStructure, b: &IncidenceStructure, budget: &SearchBudget) -> Result<Option<Permutation>> {
    check_size(a, budget)?;
    check_size(b, budget)?;
    if a.num_points() != b.num_points() || a.num_blocks() != b.num_blocks() {
        return Ok(None);
    }
    let (ga, gb) = (Graph::of(a), Graph::of(b));
    let mut pa = Partition::initial(&ga);
    pa.refine(&ga, pa.cell_starts());
    let mut pb = Partition::initial(&gb);
    pb.refine(&gb, pb.cell_starts());
    if !pa.same_shape(&pb) {
        return Ok(None);
    }
    let mut searcher = Searcher { graph: &ga, nodes: 0, max_nodes: budget.max_nodes, generators: Vec::new() };
    let path = searcher.first_path(&pa)?;
    Ok(searcher.match_leaf(&gb, &path, 0, &pb)?.map(|m| m[..a.num_points()].to_vec()))
}

/// An injective point map sending every block of `pattern` onto a block of `host`.
pub fn find_embedding(pattern: &IncidenceStructure, host: &IncidenceStructure) -> Option<Permutation> {
    let np = pattern.num_points();
    if np > host.num_points() {
        return None;
    }
    // Blocks to test once their largest point is assigned.
    let mut closing = vec![Vec::new(); np];
    for b in pattern.blocks() {
        if let Some(&last) = b.last() {
            closing[last].push(b.clone());
        }
    }
    let mut map = vec![usize::MAX; np];
    let mut used = vec![false; host.num_points()];
    fn go(
        i: usize,
        pattern: &IncidenceStructure,
        host: &IncidenceStructure,
        closing: &[Vec<Vec<usize>>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == map.len() {
            return true;
        }
        for h in 0..host.num_points() {
            if used[h] {
                continue;
            }
            map[i] = h;
            let partial_ok = pattern.blocks_through(i).iter().all(|&bi| {
                let assigned: Vec<usize> = pattern.block(bi).iter().filter(|&&p| p <= i).map(|&p| map[p]).collect();
                assigned.len() < 2 || host.on_common_block(&assigned)
            });
            let closed_ok = closing[i]
                .iter()
                .all(|b| host.find_block(&b.iter().map(|&p| map[p]).collect::<Vec<_>>()).is_some());
            if partial_ok && closed_ok {
                used[h] = true;
                if go(i + 1, pattern, host, closing, map, used) {
                    return true;
                }
                used[h] = false;
            }
        }
        map[i] = usize::MAX;
        false
    }
    go(0, pattern, host, &closing, &mut map, &mut used).then_some(map)
}

//! Combinatorial objects: the product graph `C_n × C_k`, the torus
//! quadrangulation `Q_{n,k}`, the duoprism boundary complex and flags.
//!
//! Vertex `(i, j)` with `i ∈ [0, n)` and `j ∈ [0, k)` always has index
//! `i·k + j`. Automorphisms, realizations and certificates all use this
//! numbering.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An unordered edge stored as `(min, max)`.
pub type Edge = (usize, usize);

/// Normalizes a vertex pair into edge form.
#[inline]
pub fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Index of a vertex of `C_n × C_k` (or of any complex built here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    /// Encodes `(i, j)` as `i·k + j`. Indices are reduced modulo `n` and `k`.
    pub fn from_pair(i: usize, j: usize, n: usize, k: usize) -> Self {
        VertexId((i % n) * k + (j % k))
    }

    pub fn pair(self, k: usize) -> (usize, usize) {
        (self.0 / k, self.0 % k)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

/// Checks the common precondition `n, k ≥ 3`.
pub fn check_cycle_lengths(n: usize, k: usize) -> Result<()> {
    if n < 3 || k < 3 {
        return Err(Error::Domain { n, k });
    }
    Ok(())
}

/// A simple undirected graph on vertices `0..n_vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ends.
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {n_vertices} vertices"
                )));
            }
            if !set.insert(edge(a, b)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n_vertices];
        let mut matrix = vec![false; n_vertices * n_vertices];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            matrix[a * n_vertices + b] = true;
            matrix[b * n_vertices + a] = true;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n_vertices,
            edges,
            adjacency,
            matrix,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.matrix[a * self.n_vertices + b]
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        self.bfs_order_from(0).len() == self.n_vertices
    }

    /// Vertices reachable from `root`, in breadth-first order.
    pub fn bfs_order_from(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n_vertices];
        let mut order = Vec::with_capacity(self.n_vertices);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }
}

/// Builds the cycle graph `C_n`.
pub fn build_cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!("cycle length {n} < 3")));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Builds `C_n × C_k`: vertex `(i, j)` is joined to `(i ± 1, j)` and `(i, j ± 1)`.
pub fn build_cycle_product_graph(n: usize, k: usize) -> Result<Graph> {
    check_cycle_lengths(n, k)?;
    let id = |i: usize, j: usize| VertexId::from_pair(i, j, n, k).0;
    let mut edges = Vec::with_capacity(2 * n * k);
    for i in 0..n {
        for j in 0..k {
            edges.push((id(i, j), id(i + 1, j)));
            edges.push((id(i, j), id(i, j + 1)));
        }
    }
    Graph::new(n * k, edges)
}

/// A polygonal face stored as its canonical boundary cycle.
///
/// The canonical boundary is the lexicographically least sequence among all
/// rotations of the cycle and of its reversal, so it always starts with the
/// smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Boundary edges in cyclic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let m = self.0.len();
        (0..m).map(move |p| edge(self.0[p], self.0[(p + 1) % m]))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges().any(|f| f == e)
    }

    /// Image of this face under a vertex map, canonicalized.
    pub fn map(&self, images: &[usize]) -> Result<Face> {
        let mapped: Vec<usize> = self.0.iter().map(|&v| images[v]).collect();
        canonical_face(&mapped)
    }
}

/// Returns the canonical form of a boundary cycle.
pub fn canonical_face(cycle: &[usize]) -> Result<Face> {
    let m = cycle.len();
    if m < 3 {
        return Err(Error::InvalidFace(format!("cycle of length {m} < 3")));
    }
    let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
    if distinct.len() != m {
        return Err(Error::InvalidFace(format!("repeated vertex in {cycle:?}")));
    }
    let start = (0..m).min_by_key(|&p| cycle[p]).expect("non-empty");
    let forward: Vec<usize> = (0..m).map(|t| cycle[(start + t) % m]).collect();
    let backward: Vec<usize> = (0..m).map(|t| cycle[(start + m - t) % m]).collect();
    Ok(Face(forward.min(backward)))
}

/// A 3-cell given by the indices of its bounding faces in the owning complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell3(Vec<usize>);

impl Cell3 {
    pub fn new(mut faces: Vec<usize>) -> Self {
        faces.sort_unstable();
        faces.dedup();
        Cell3(faces)
    }

    pub fn faces(&self) -> &[usize] {
        &self.0
    }
}

/// An abstract 2-complex, optionally with 3-cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    params: Option<(usize, usize)>,
    graph: Graph,
    faces: Vec<Face>,
    cells3: Option<Vec<Cell3>>,
    face_index: HashMap<Face, usize>,
}

impl CellComplex {
    /// Assembles a complex, checking that every face edge is a graph edge and
    /// that faces are distinct. Faces are sorted; 3-cells refer to faces by
    /// boundary and are re-indexed accordingly.
    pub fn new(graph: Graph, faces: Vec<Face>, cells3: Option<Vec<Vec<Face>>>) -> Result<Self> {
        for f in &faces {
            if let Some(&v) = f.vertices().iter().find(|&&v| v >= graph.n_vertices()) {
                return Err(Error::InvalidComplex(format!(
                    "face vertex {v} out of range"
                )));
            }
            if let Some(e) = f.edges().find(|&(a, b)| !graph.has_edge(a, b)) {
                return Err(Error::InvalidComplex(format!(
                    "face {:?} uses non-edge {e:?}",
                    f.vertices()
                )));
            }
        }
        let mut faces = faces;
        faces.sort();
        let before = faces.len();
        faces.dedup();
        if faces.len() != before {
            return Err(Error::InvalidComplex("duplicate face".into()));
        }
        let face_index: HashMap<Face, usize> = faces
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let cells3 = match cells3 {
            None => None,
            Some(cells) => {
                let mut out = Vec::with_capacity(cells.len());
                for cell in cells {
                    let mut ids = Vec::with_capacity(cell.len());
                    for f in &cell {
                        let id = face_index.get(f).ok_or_else(|| {
                            Error::InvalidComplex(format!(
                                "3-cell references unknown face {:?}",
                                f.vertices()
                            ))
                        })?;
                        ids.push(*id);
                    }
                    out.push(Cell3::new(ids));
                }
                out.sort();
                Some(out)
            }
        };
        Ok(CellComplex {
            params: None,
            graph,
            faces,
            cells3,
            face_index,
        })
    }

    fn with_params(mut self, n: usize, k: usize) -> Self {
        self.params = Some((n, k));
        self
    }

    /// The `(n, k)` this complex was built from, if any.
    pub fn params(&self) -> Option<(usize, usize)> {
        self.params
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn n_edges(&self) -> usize {
        self.graph.n_edges()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    /// Faces in canonical sorted order.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn cells3(&self) -> Option<&[Cell3]> {
        self.cells3.as_deref()
    }

    pub fn face_id(&self, face: &Face) -> Option<usize> {
        self.face_index.get(face).copied()
    }

    pub fn contains_face(&self, face: &Face) -> bool {
        self.face_index.contains_key(face)
    }

    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    /// For each edge (in [`Graph::edges`] order), the faces containing it.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_edges()];
        for (fid, f) in self.faces.iter().enumerate() {
            for e in f.edges() {
                let eid = self
                    .graph
                    .edge_index(e)
                    .expect("face edges are graph edges");
                out[eid].push(fid);
            }
        }
        out
    }

    /// Every edge lies on exactly two faces, the graph is connected and
    /// `χ = 0`: the combinatorial certificate of a closed torus-like surface.
    pub fn is_closed_surface(&self) -> bool {
        self.edge_faces().iter().all(|fs| fs.len() == 2) && self.graph.is_connected()
    }

    /// The link of every vertex is a single cycle, so the surface has no
    /// pinch points.
    pub fn has_disc_vertex_links(&self) -> bool {
        (0..self.n_vertices()).all(|v| {
            // link edges: for each face at v, join the two boundary neighbours of v
            let mut link: Vec<(usize, usize)> = Vec::new();
            for f in &self.faces {
                let b = f.vertices();
                if let Some(p) = b.iter().position(|&x| x == v) {
                    let m = b.len();
                    link.push((b[(p + m - 1) % m], b[(p + 1) % m]));
                }
            }
            if link.is_empty() {
                return false;
            }
            let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
            for &(a, b) in &link {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
            if adj.values().any(|ns| ns.len() != 2) {
                return false;
            }
            // walk the cycle
            let start = link[0].0;
            let (mut prev, mut cur) = (start, link[0].1);
            let mut steps = 1;
            while cur != start {
                let ns = &adj[&cur];
                let next = if ns[0] == prev { ns[1] } else { ns[0] };
                prev = cur;
                cur = next;
                steps += 1;
                if steps > link.len() {
                    return false;
                }
            }
            steps == link.len()
        })
    }

    /// The closures of any two faces meet in nothing, a vertex or a common
    /// boundary edge.
    pub fn face_intersections_proper(&self) -> bool {
        for (a, fa) in self.faces.iter().enumerate() {
            for fb in &self.faces[a + 1..] {
                let shared: Vec<usize> = fa
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&v| fb.contains(v))
                    .collect();
                match shared.len() {
                    0 | 1 => {}
                    2 => {
                        let e = edge(shared[0], shared[1]);
                        if !(fa.has_edge(e) && fb.has_edge(e)) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
        }
        true
    }

    /// Every face lies on exactly two 3-cells. False when there are no 3-cells.
    pub fn faces_on_two_cells(&self) -> bool {
        let Some(cells) = &self.cells3 else {
            return false;
        };
        let mut count = vec![0usize; self.faces.len()];
        for c in cells {
            for &f in c.faces() {
                count[f] += 1;
            }
        }
        count.iter().all(|&c| c == 2)
    }

    /// The same graph and faces without 3-cells.
    pub fn two_skeleton(&self) -> CellComplex {
        let mut out = self.clone();
        out.cells3 = None;
        out
    }

    /// Serializable document with sorted edge and face lists.
    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            version: COMPLEX_SCHEMA_VERSION,
            n: self.params.map(|p| p.0),
            k: self.params.map(|p| p.1),
            vertices: self.n_vertices(),
            edges: self.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            faces: self.faces.iter().map(|f| f.vertices().to_vec()).collect(),
            cells: self
                .cells3
                .as_ref()
                .map(|cs| cs.iter().map(|c| c.faces().to_vec()).collect()),
            coords: None,
        }
    }

    /// Rebuilds a complex from its document form.
    pub fn from_document(doc: &ComplexDocument) -> Result<Self> {
        let graph = Graph::new(doc.vertices, doc.edges.iter().map(|e| (e[0], e[1])))?;
        let faces = doc
            .faces
            .iter()
            .map(|f| canonical_face(f))
            .collect::<Result<Vec<_>>>()?;
        let cells = match &doc.cells {
            None => None,
            Some(cs) => {
                let mut out = Vec::with_capacity(cs.len());
                for c in cs {
                    let mut cell = Vec::with_capacity(c.len());
                    for &fid in c {
                        let f = faces.get(fid).ok_or_else(|| {
                            Error::InvalidComplex(format!("cell face index {fid} out of range"))
                        })?;
                        cell.push(f.clone());
                    }
                    out.push(cell);
                }
                Some(out)
            }
        };
        let mut complex = CellComplex::new(graph, faces, cells)?;
        if let (Some(n), Some(k)) = (doc.n, doc.k) {
            complex = complex.with_params(n, k);
        }
        Ok(complex)
    }
}

pub const COMPLEX_SCHEMA_VERSION: u32 = 1;

/// JSON form of a complex: sorted edges, canonical sorted faces, optional
/// 3-cells (as face indices) and optional vertex coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cells: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coords: Option<Vec<[f64; 4]>>,
}

fn quad(i: usize, j: usize, n: usize, k: usize) -> Vec<usize> {
    let id = |a: usize, b: usize| VertexId::from_pair(a, b, n, k).0;
    vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]
}

/// Builds `Q_{n,k}`: `C_n × C_k` with the `nk` quadrilaterals
/// `(i,j), (i+1,j), (i+1,j+1), (i,j+1)`.
pub fn build_torus_quadrangulation(n: usize, k: usize) -> Result<CellComplex> {
    let graph = build_cycle_product_graph(n, k)?;
    let mut faces = Vec::with_capacity(n * k);
    for i in 0..n {
        for j in 0..k {
            faces.push(canonical_face(&quad(i, j, n, k))?);
        }
    }
    Ok(CellComplex::new(graph, faces, None)?.with_params(n, k))
}

/// Builds the boundary complex of the `n,k`-duoprism: the quadrilaterals of
/// `Q_{n,k}`, one `k`-gon per `i`, one `n`-gon per `j`, `n` prisms over the
/// `k`-gon and `k` prisms over the `n`-gon.
pub fn build_duoprism_boundary(n: usize, k: usize) -> Result<CellComplex> {
    let graph = build_cycle_product_graph(n, k)?;
    let id = |a: usize, b: usize| VertexId::from_pair(a, b, n, k).0;
    let quads: Vec<Vec<Face>> = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| canonical_face(&quad(i, j, n, k)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let k_gons: Vec<Face> = (0..n)
        .map(|i| canonical_face(&(0..k).map(|j| id(i, j)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let n_gons: Vec<Face> = (0..k)
        .map(|j| canonical_face(&(0..n).map(|i| id(i, j)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(n + k);
    for i in 0..n {
        let mut cell = vec![k_gons[i].clone(), k_gons[(i + 1) % n].clone()];
        cell.extend(quads[i].iter().cloned());
        cells.push(cell);
    }
    for j in 0..k {
        let mut cell = vec![n_gons[j].clone(), n_gons[(j + 1) % k].clone()];
        cell.extend((0..n).map(|i| quads[i][j].clone()));
        cells.push(cell);
    }
    let mut faces: Vec<Face> = quads.into_iter().flatten().collect();
    faces.extend(k_gons);
    faces.extend(n_gons);
    Ok(CellComplex::new(graph, faces, Some(cells))?.with_params(n, k))
}

/// Boundary complex of the 4-cube on `{0,1}⁴`, vertices indexed by bitmask.
/// Built directly from coordinates, independently of the duoprism.
pub fn build_hypercube_boundary() -> CellComplex {
    let edges = (0..16usize).flat_map(|v| {
        (0..4)
            .map(move |d| (v, v ^ (1 << d)))
            .filter(|&(a, b)| a < b)
    });
    let graph = Graph::new(16, edges).expect("hypercube graph is simple");
    let square = |base: usize, a: usize, b: usize| {
        canonical_face(&[
            base,
            base | (1 << a),
            base | (1 << a) | (1 << b),
            base | (1 << b),
        ])
        .expect("distinct corners")
    };
    let mut faces = Vec::with_capacity(24);
    for a in 0..4 {
        for b in a + 1..4 {
            for base in 0..16usize {
                if base & ((1 << a) | (1 << b)) == 0 {
                    faces.push(square(base, a, b));
                }
            }
        }
    }
    let mut cells = Vec::with_capacity(8);
    for fixed in 0..4 {
        for bit in 0..2usize {
            let dirs: Vec<usize> = (0..4).filter(|&d| d != fixed).collect();
            let mut cell = Vec::with_capacity(6);
            for (x, &a) in dirs.iter().enumerate() {
                for &b in &dirs[x + 1..] {
                    let c = dirs.iter().copied().find(|&d| d != a && d != b).unwrap();
                    for side in 0..2usize {
                        let base = (bit << fixed) | (side << c);
                        cell.push(square(base, a, b));
                    }
                }
            }
            cells.push(cell);
        }
    }
    CellComplex::new(graph, faces, Some(cells)).expect("hypercube boundary is valid")
}

/// An incident (vertex, edge, face) triple. `face` indexes
/// [`CellComplex::faces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Flag {
    pub vertex: usize,
    pub edge: Edge,
    pub face: usize,
}

/// All flags of a 2-complex in sorted order. Each `m`-gon contributes `2m`.
pub fn flags(complex: &CellComplex) -> Vec<Flag> {
    let mut out = Vec::new();
    for (fid, f) in complex.faces().iter().enumerate() {
        let b = f.vertices();
        let m = b.len();
        for p in 0..m {
            let v = b[p];
            out.push(Flag {
                vertex: v,
                edge: edge(v, b[(p + 1) % m]),
                face: fid,
            });
            out.push(Flag {
                vertex: v,
                edge: edge(b[(p + m - 1) % m], v),
                face: fid,
            });
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_id_round_trip() {
        for (n, k) in [(3, 5), (4, 4), (7, 3)] {
            for i in 0..n {
                for j in 0..k {
                    let v = VertexId::from_pair(i, j, n, k);
                    assert!(v.0 < n * k);
                    assert_eq!(v.pair(k), (i, j));
                }
            }
        }
    }

    #[test]
    fn product_graph_counts() {
        let g = build_cycle_product_graph(3, 3).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (9, 18));
        let g = build_cycle_product_graph(4, 4).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (16, 32));
        let g = build_cycle_product_graph(3, 5).unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (15, 30));
        assert!((0..15).all(|v| g.degree(v) == 4));
        assert!(g.is_connected());
    }

    #[test]
    fn rejects_short_cycles() {
        assert!(matches!(
            build_cycle_product_graph(2, 5),
            Err(Error::Domain { n: 2, k: 5 })
        ));
        assert!(build_torus_quadrangulation(3, 2).is_err());
        assert!(build_duoprism_boundary(1, 4).is_err());
    }

    #[test]
    fn graph_rejects_loops_and_duplicates() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn canonical_face_examples() {
        assert_eq!(canonical_face(&[2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert_eq!(
            canonical_face(&[5, 4, 7, 6]).unwrap().vertices(),
            &[4, 5, 6, 7]
        );
        assert_eq!(
            canonical_face(&[5, 7, 4, 6]).unwrap().vertices(),
            &[4, 6, 5, 7]
        );
        assert!(canonical_face(&[1, 2, 1]).is_err());
        assert!(canonical_face(&[1, 2]).is_err());
    }

    #[test]
    fn torus_quadrangulation_examples() {
        let q = build_torus_quadrangulation(3, 3).unwrap();
        assert_eq!(q.n_faces(), 9);
        assert!(q.edge_faces().iter().all(|f| f.len() == 2));
        let q = build_torus_quadrangulation(4, 4).unwrap();
        assert_eq!(q.n_faces(), 16);
        assert_eq!(q.euler_characteristic(), 0);
        let q = build_torus_quadrangulation(5, 3).unwrap();
        assert_eq!(q.n_faces(), 15);
        assert_eq!(flags(&q).len(), 120);
    }

    #[test]
    fn single_quad_has_eight_flags() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c = CellComplex::new(g, vec![canonical_face(&[0, 1, 2, 3]).unwrap()], None).unwrap();
        assert_eq!(flags(&c).len(), 8);
    }

    #[test]
    fn complex_rejects_face_off_graph() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let f = canonical_face(&[0, 1, 2, 3]).unwrap();
        assert!(CellComplex::new(g, vec![f], None).is_err());
    }

    #[test]
    fn duoprism_examples() {
        let b = build_duoprism_boundary(3, 3).unwrap();
        assert_eq!(b.n_faces(), 15);
        assert_eq!(b.cells3().unwrap().len(), 6);
        assert!(b.faces_on_two_cells());

        let b = build_duoprism_boundary(3, 5).unwrap();
        let mut lens: Vec<usize> = b.faces().iter().map(Face::len).collect();
        lens.sort();
        assert_eq!(b.n_faces(), 23);
        assert_eq!(lens.iter().filter(|&&l| l == 4).count(), 15);
        assert_eq!(lens.iter().filter(|&&l| l == 5).count(), 3);
        assert_eq!(lens.iter().filter(|&&l| l == 3).count(), 5);
    }

    #[test]
    fn hypercube_boundary_shape() {
        let h = build_hypercube_boundary();
        assert_eq!((h.n_vertices(), h.n_edges(), h.n_faces()), (16, 32, 24));
        assert_eq!(h.cells3().unwrap().len(), 8);
        assert!(h.cells3().unwrap().iter().all(|c| c.faces().len() == 6));
        assert!(h.faces_on_two_cells());
    }

    #[test]
    fn document_round_trip() {
        let b = build_duoprism_boundary(3, 4).unwrap();
        let doc = b.to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: ComplexDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(CellComplex::from_document(&back).unwrap(), b);
    }

    #[test]
    fn pinched_surface_detected() {
        // two tetrahedron boundaries glued at one vertex
        let tri = |a, b, c| canonical_face(&[a, b, c]).unwrap();
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        for base in [0usize, 3] {
            let vs = [0, base + 1, base + 2, base + 3];
            for x in 0..4 {
                for y in x + 1..4 {
                    edges.push((vs[x], vs[y]));
                }
            }
            faces.push(tri(vs[0], vs[1], vs[2]));
            faces.push(tri(vs[0], vs[1], vs[3]));
            faces.push(tri(vs[0], vs[2], vs[3]));
            faces.push(tri(vs[1], vs[2], vs[3]));
        }
        let c = CellComplex::new(Graph::new(7, edges).unwrap(), faces, None).unwrap();
        assert!(c.is_closed_surface());
        assert!(!c.has_disc_vertex_links());
        assert!(build_torus_quadrangulation(3, 4)
            .unwrap()
            .has_disc_vertex_links());
    }
}

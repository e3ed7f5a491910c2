//! Automorphism groups of the product graph and of the quadrangulation.
//!
//! Groups are small (at most a few hundred elements at the sizes this crate
//! targets), so every group is kept fully enumerated next to a short
//! generating set.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::complex::{edge, flags, CellComplex, Graph, VertexId};
use crate::perm::{Automorphism, Perm};
use crate::{Error, Result, DEFAULT_VERTEX_CAP};

/// A finite permutation group with its full element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Perm::identity(degree)],
        }
    }

    /// Wraps an enumerated element set, checking that it is a group and
    /// choosing a small generating set greedily in lexicographic order.
    pub fn from_elements(degree: usize, elements: Vec<Perm>) -> Result<Self> {
        if let Some(p) = elements.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: p.degree(),
            });
        }
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        let mut generators: Vec<Perm> = Vec::new();
        let mut span: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
        for e in &elements {
            if !span.contains(e) {
                generators.push(e.clone());
                span = closure_set(degree, &generators);
            }
        }
        if span.len() != elements.len() || !elements.iter().all(|e| span.contains(e)) {
            return Err(Error::InvalidPermutation(
                "element set is not closed under composition".into(),
            ));
        }
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in lexicographic order of their image arrays.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Images of `v` under the group, sorted.
    pub fn orbit(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.elements.iter().map(|g| g.apply(v)).collect();
        set.into_iter().collect()
    }

    /// Subgroup fixing `v`.
    pub fn stabilizer(&self, v: usize) -> PermGroup {
        let fixing: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| g.fixes(v))
            .cloned()
            .collect();
        PermGroup::from_elements(self.degree, fixing).expect("stabilizer of a group is a group")
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn to_document(&self, with_elements: bool) -> GroupDocument {
        GroupDocument {
            degree: self.degree,
            order: self.order(),
            generators: self.generators.clone(),
            elements: with_elements.then(|| self.elements.clone()),
        }
    }
}

/// JSON form of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<Perm>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elements: Option<Vec<Perm>>,
}

fn closure_set(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
    let id = Perm::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    seen
}

/// The group generated by `gens`, by breadth-first closure.
pub fn group_closure(degree: usize, gens: &[Perm]) -> Result<PermGroup> {
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: g.degree(),
        });
    }
    let mut elements: Vec<Perm> = closure_set(degree, gens).into_iter().collect();
    elements.sort();
    Ok(PermGroup {
        degree,
        generators: gens.to_vec(),
        elements,
    })
}

/// Standalone form of [`PermGroup::stabilizer`].
pub fn vertex_stabilizer(group: &PermGroup, v: usize) -> PermGroup {
    group.stabilizer(v)
}

/// Enumerates all isomorphisms `a → b` by backtracking, calling `visit` with
/// each image array. Vertices of `a` are assigned in breadth-first order
/// from vertex 0 (then from the least unvisited vertex of each further
/// component); a candidate image must have equal degree and agree on
/// adjacency with every vertex already assigned.
pub fn graph_isomorphisms<F>(a: &Graph, b: &Graph, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = a.n_vertices();
    if n != b.n_vertices() || a.n_edges() != b.n_edges() {
        return;
    }
    if n == 0 {
        let _ = visit(&[]);
        return;
    }
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        for v in a.bfs_order_from(root) {
            placed[v] = true;
            order.push(v);
        }
    }
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    for &v in &order {
        parent[v] = a
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| position[u] < position[v])
            .min_by_key(|&u| position[u]);
    }

    struct State<'g> {
        a: &'g Graph,
        b: &'g Graph,
        order: Vec<usize>,
        parent: Vec<Option<usize>>,
        image: Vec<usize>,
        used: Vec<bool>,
    }

    fn extend<F: FnMut(&[usize]) -> ControlFlow<()>>(
        s: &mut State<'_>,
        depth: usize,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if depth == s.order.len() {
            return visit(&s.image);
        }
        let v = s.order[depth];
        let candidates: Vec<usize> = match s.parent[v] {
            Some(p) => s.b.neighbors(s.image[p]).to_vec(),
            None => (0..s.b.n_vertices()).collect(),
        };
        for c in candidates {
            if s.used[c] || s.a.degree(v) != s.b.degree(c) {
                continue;
            }
            let consistent = s.order[..depth]
                .iter()
                .all(|&u| s.a.has_edge(v, u) == s.b.has_edge(c, s.image[u]));
            if !consistent {
                continue;
            }
            s.image[v] = c;
            s.used[c] = true;
            let flow = extend(s, depth + 1, visit);
            s.used[c] = false;
            s.image[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }

    let mut state = State {
        a,
        b,
        order,
        parent,
        image: vec![usize::MAX; n],
        used: vec![false; n],
    };
    let _ = extend(&mut state, 0, &mut visit);
}

/// Full automorphism group of `g` with the default vertex cap.
pub fn graph_automorphisms(g: &Graph) -> Result<PermGroup> {
    graph_automorphisms_capped(g, DEFAULT_VERTEX_CAP)
}

pub fn graph_automorphisms_capped(g: &Graph, cap: usize) -> Result<PermGroup> {
    if g.n_vertices() > cap {
        return Err(Error::SizeLimit {
            vertices: g.n_vertices(),
            cap,
        });
    }
    let mut found = Vec::new();
    graph_isomorphisms(g, g, |images| {
        found.push(Perm::from_images(images.to_vec()).expect("search yields bijections"));
        ControlFlow::Continue(())
    });
    PermGroup::from_elements(g.n_vertices(), found)
}

pub fn is_graph_automorphism(g: &Graph, p: &Perm) -> bool {
    p.degree() == g.n_vertices()
        && g.edges()
            .iter()
            .all(|&(a, b)| g.has_edge(p.apply(a), p.apply(b)))
}

/// `p` maps edges to edges and faces to faces of `c` (and 3-cells to 3-cells
/// when present).
pub fn is_cellular_automorphism(c: &CellComplex, p: &Perm) -> bool {
    if !is_graph_automorphism(c.graph(), p) {
        return false;
    }
    let mut face_images = Vec::with_capacity(c.n_faces());
    for f in c.faces() {
        match f.map(p.images()).ok().and_then(|img| c.face_id(&img)) {
            Some(id) => face_images.push(id),
            None => return false,
        }
    }
    match c.cells3() {
        None => true,
        Some(cells) => {
            let set: HashSet<Vec<usize>> = cells.iter().map(|cell| cell.faces().to_vec()).collect();
            cells.iter().all(|cell| {
                let mut img: Vec<usize> = cell.faces().iter().map(|&f| face_images[f]).collect();
                img.sort_unstable();
                set.contains(&img)
            })
        }
    }
}

/// Graph automorphisms of the 1-skeleton that map every face to a face.
pub fn cellular_automorphisms(c: &CellComplex) -> Result<PermGroup> {
    cellular_automorphisms_capped(c, DEFAULT_VERTEX_CAP)
}

pub fn cellular_automorphisms_capped(c: &CellComplex, cap: usize) -> Result<PermGroup> {
    let graph_group = graph_automorphisms_capped(c.graph(), cap)?;
    cellular_subgroup(&graph_group, c)
}

/// Elements of `group` that are cellular automorphisms of `c`.
pub fn cellular_subgroup(group: &PermGroup, c: &CellComplex) -> Result<PermGroup> {
    let kept: Vec<Perm> = group
        .elements()
        .iter()
        .filter(|p| is_cellular_automorphism(c, p))
        .cloned()
        .collect();
    PermGroup::from_elements(group.degree(), kept)
}

/// Some isomorphism of complexes `a → b` (faces to faces, 3-cells to 3-cells).
pub fn find_complex_isomorphism(a: &CellComplex, b: &CellComplex) -> Option<Perm> {
    if a.n_faces() != b.n_faces() || a.cells3().map(<[_]>::len) != b.cells3().map(<[_]>::len) {
        return None;
    }
    let b_cells: Option<HashSet<Vec<usize>>> = b
        .cells3()
        .map(|cs| cs.iter().map(|c| c.faces().to_vec()).collect());
    let mut found = None;
    graph_isomorphisms(a.graph(), b.graph(), |images| {
        let mut face_images = Vec::with_capacity(a.n_faces());
        for f in a.faces() {
            match f.map(images).ok().and_then(|img| b.face_id(&img)) {
                Some(id) => face_images.push(id),
                None => return ControlFlow::Continue(()),
            }
        }
        if let (Some(cells), Some(targets)) = (a.cells3(), &b_cells) {
            for cell in cells {
                let mut img: Vec<usize> = cell.faces().iter().map(|&f| face_images[f]).collect();
                img.sort_unstable();
                if !targets.contains(&img) {
                    return ControlFlow::Continue(());
                }
            }
        }
        found = Some(Perm::from_images(images.to_vec()).expect("bijection"));
        ControlFlow::Break(())
    });
    found
}

/// Explicit generators of `Aut(Q_{n,k})`: rotation `i ↦ i+1` and reflection
/// `i ↦ −i` of the first factor, the same for the second factor, and the
/// factor swap `(i, j) ↦ (j, i)` when `n = k`.
pub fn structured_generators(n: usize, k: usize) -> Result<Vec<Automorphism>> {
    crate::complex::check_cycle_lengths(n, k)?;
    let degree = n * k;
    let map = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
        Perm::from_fn(degree, |v| {
            let (i, j) = VertexId(v).pair(k);
            let (a, b) = f(i, j);
            VertexId::from_pair(a, b, n, k).0
        })
    };
    let mut gens = vec![
        map(&|i, j| (i + 1, j))?,
        map(&|i, j| ((n - i) % n, j))?,
        map(&|i, j| (i, j + 1))?,
        map(&|i, j| (i, (k - j) % k))?,
    ];
    if n == k {
        gens.push(map(&|i, j| (j, i))?);
    }
    Ok(gens)
}

/// `|Aut(C_n × C_k)|`: `4nk` if `n ≠ k`, `8n²` if `n = k ≠ 4`, 384 if `n = k = 4`.
pub fn expected_graph_order(n: usize, k: usize) -> usize {
    match (n, k) {
        (4, 4) => 384,
        _ if n == k => 8 * n * n,
        _ => 4 * n * k,
    }
}

/// `|Aut(Q_{n,k})|`: `4nk` if `n ≠ k`, `8n²` if `n = k`.
pub fn expected_cellular_order(n: usize, k: usize) -> usize {
    if n == k {
        8 * n * n
    } else {
        4 * n * k
    }
}

/// Orbit counts of a group acting on the cells and flags of a 2-complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub face_orbits: usize,
    pub flag_orbits: usize,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub face_transitive: bool,
    pub flag_transitive: bool,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn count(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Counts orbits of the action `act(generator, item) -> item` on `0..n_items`.
fn orbit_count(n_items: usize, gens: &[Perm], act: impl Fn(&Perm, usize) -> usize) -> usize {
    let mut sets = DisjointSets::new(n_items);
    for g in gens {
        for x in 0..n_items {
            sets.union(x, act(g, x));
        }
    }
    sets.count()
}

/// Orbits of `group` on vertices, edges, faces and flags of `c`.
pub fn transitivity_report(group: &PermGroup, c: &CellComplex) -> Result<TransitivityReport> {
    if group.degree() != c.n_vertices() {
        return Err(Error::DegreeMismatch {
            expected: c.n_vertices(),
            found: group.degree(),
        });
    }
    // the orbits of a group are the orbits of its generators; the group as
    // stored may have been built from elements, so use its own generators
    let gens = group.generators();
    for g in gens {
        if !is_cellular_automorphism(&c.two_skeleton(), g) {
            return Err(Error::ActionNotPreserving(format!("{g:?}")));
        }
    }
    let graph = c.graph();
    let all_flags = flags(c);
    let face_image = |g: &Perm, f: usize| {
        let img = c.faces()[f]
            .map(g.images())
            .expect("permutation keeps vertices distinct");
        c.face_id(&img).expect("checked cellular")
    };
    let vertex_orbits = orbit_count(c.n_vertices(), gens, |g, v| g.apply(v));
    let edge_orbits = orbit_count(c.n_edges(), gens, |g, e| {
        let (a, b) = graph.edges()[e];
        graph
            .edge_index(edge(g.apply(a), g.apply(b)))
            .expect("checked graph automorphism")
    });
    let face_orbits = orbit_count(c.n_faces(), gens, face_image);
    let flag_orbits = orbit_count(all_flags.len(), gens, |g, x| {
        let fl = all_flags[x];
        let img = crate::complex::Flag {
            vertex: g.apply(fl.vertex),
            edge: edge(g.apply(fl.edge.0), g.apply(fl.edge.1)),
            face: face_image(g, fl.face),
        };
        all_flags.binary_search(&img).expect("flags map to flags")
    });
    Ok(TransitivityReport {
        vertex_orbits,
        edge_orbits,
        face_orbits,
        flag_orbits,
        vertex_transitive: vertex_orbits == 1,
        edge_transitive: edge_orbits == 1,
        face_transitive: face_orbits == 1,
        flag_transitive: flag_orbits == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        build_cycle_graph, build_cycle_product_graph, build_torus_quadrangulation,
    };

    #[test]
    fn closure_of_identity_is_trivial() {
        let g = group_closure(5, &[Perm::identity(5)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(group_closure(5, &[]).unwrap().order(), 1);
    }

    #[test]
    fn closure_of_rotation_is_cyclic() {
        for n in 3..9 {
            let r = Perm::from_fn(n, |i| (i + 1) % n).unwrap();
            assert_eq!(group_closure(n, &[r]).unwrap().order(), n);
        }
    }

    #[test]
    fn closure_rejects_degree_mismatch() {
        let gens = [Perm::identity(3), Perm::identity(4)];
        assert!(matches!(
            group_closure(3, &gens),
            Err(Error::DegreeMismatch {
                expected: 3,
                found: 4
            })
        ));
    }

    #[test]
    fn from_elements_rejects_non_group() {
        let r = Perm::from_images(vec![1, 2, 0]).unwrap();
        assert!(PermGroup::from_elements(3, vec![Perm::identity(3), r]).is_err());
    }

    #[test]
    fn cycle_graph_group_is_dihedral() {
        for n in 3..10 {
            let g = graph_automorphisms(&build_cycle_graph(n).unwrap()).unwrap();
            assert_eq!(g.order(), 2 * n);
        }
    }

    #[test]
    fn graph_orders_match_formula() {
        for (n, k, order) in [(3, 5, 60), (5, 5, 200), (4, 4, 384)] {
            let g = graph_automorphisms(&build_cycle_product_graph(n, k).unwrap()).unwrap();
            assert_eq!(g.order(), order);
        }
    }

    #[test]
    fn cellular_orders_match_formula() {
        let q35 = cellular_automorphisms(&build_torus_quadrangulation(3, 5).unwrap()).unwrap();
        assert_eq!(q35.order(), 60);
        let q44 = cellular_automorphisms(&build_torus_quadrangulation(4, 4).unwrap()).unwrap();
        assert_eq!(q44.order(), 128);
        let g44 = graph_automorphisms(&build_cycle_product_graph(4, 4).unwrap()).unwrap();
        assert!(q44.is_subgroup_of(&g44));
        assert!(q44.order() < g44.order());
    }

    #[test]
    fn size_cap_enforced() {
        let g = build_cycle_product_graph(11, 10).unwrap();
        assert!(matches!(
            graph_automorphisms(&g),
            Err(Error::SizeLimit {
                vertices: 110,
                cap: 100
            })
        ));
    }

    #[test]
    fn structured_generator_counts() {
        assert_eq!(structured_generators(3, 5).unwrap().len(), 4);
        assert_eq!(structured_generators(5, 5).unwrap().len(), 5);
        let gens = structured_generators(3, 5).unwrap();
        assert_eq!(group_closure(15, &gens).unwrap().order(), 60);
        let gens = structured_generators(5, 5).unwrap();
        assert_eq!(group_closure(25, &gens).unwrap().order(), 200);
        let gens = structured_generators(3, 3).unwrap();
        assert_eq!(group_closure(9, &gens).unwrap().order(), 72);
        let gens = structured_generators(4, 4).unwrap();
        assert_eq!(group_closure(16, &gens).unwrap().order(), 128);
    }

    #[test]
    fn stabilizer_orders() {
        let g55 = cellular_automorphisms(&build_torus_quadrangulation(5, 5).unwrap()).unwrap();
        let g35 = cellular_automorphisms(&build_torus_quadrangulation(3, 5).unwrap()).unwrap();
        for v in 0..25 {
            assert_eq!(vertex_stabilizer(&g55, v).order(), 8);
        }
        for v in 0..15 {
            let stab = g35.stabilizer(v);
            assert_eq!(stab.order(), 4);
            assert_eq!(g35.orbit(v).len() * stab.order(), g35.order());
        }
    }

    #[test]
    fn transitivity_examples() {
        let q35 = build_torus_quadrangulation(3, 5).unwrap();
        let g = cellular_automorphisms(&q35).unwrap();
        let r = transitivity_report(&g, &q35).unwrap();
        assert!(r.vertex_transitive && r.face_transitive);
        assert_eq!(r.edge_orbits, 2);
        assert!(!r.flag_transitive);

        let q66 = build_torus_quadrangulation(6, 6).unwrap();
        let g = cellular_automorphisms(&q66).unwrap();
        let r = transitivity_report(&g, &q66).unwrap();
        assert!(r.flag_transitive);
        assert_eq!(g.order(), 288);
        assert_eq!(flags(&q66).len(), 288);

        let q33 = build_torus_quadrangulation(3, 3).unwrap();
        let r = transitivity_report(&PermGroup::trivial(9), &q33).unwrap();
        assert_eq!(r.vertex_orbits, 9);
        assert!(!r.vertex_transitive && !r.edge_transitive && !r.face_transitive);
    }

    #[test]
    fn transitivity_rejects_non_preserving_action() {
        let q = build_torus_quadrangulation(3, 4).unwrap();
        let swap = Perm::from_fn(12, |v| match v {
            0 => 1,
            1 => 0,
            x => x,
        })
        .unwrap();
        let g = group_closure(12, &[swap]).unwrap();
        assert!(matches!(
            transitivity_report(&g, &q),
            Err(Error::ActionNotPreserving(_))
        ));
    }

    #[test]
    fn group_document_round_trip() {
        let g = group_closure(15, &structured_generators(3, 5).unwrap()).unwrap();
        let doc = g.to_document(true);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GroupDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.elements.unwrap().len(), 60);
    }
}

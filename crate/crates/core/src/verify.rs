//! Certificates that `Q_{n,k}` is realized in the duoprism without hidden
//! symmetries, and the count of `Q_{4,4}` copies in the 4-cube.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autgroup::{
    cellular_automorphisms, cellular_subgroup, expected_cellular_order, expected_graph_order,
    find_complex_isomorphism, graph_automorphisms, graph_automorphisms_capped, group_closure,
    structured_generators, transitivity_report, PermGroup, TransitivityReport,
};
use crate::complex::{
    build_cycle_product_graph, build_duoprism_boundary, build_hypercube_boundary,
    build_torus_quadrangulation, flags, CellComplex, Face,
};
use crate::geometry::{
    clifford_residual, duoprism_vertices, extend_to_isometry, induced_permutation, metric_report,
    point_matching_error, symmetry_generator_matrices, IsometryWitness, MetricReport, Realization,
};
use crate::perm::Perm;
use crate::{Error, Result, DEFAULT_TOLERANCE, DEFAULT_VERTEX_CAP};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// The three sufficient conditions for a realization inside an ambient
/// polytope boundary to have no hidden symmetries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionConditions {
    /// Every ambient symmetry maps the subcomplex's top cells to top cells.
    pub cond_i: bool,
    /// The ambient complex and the subcomplex have the same vertex count.
    pub cond_ii: bool,
    /// The ambient symmetry group has the order of the subcomplex's
    /// automorphism group.
    pub cond_iii: bool,
    pub conclusion: bool,
}

impl ExtensionConditions {
    fn new(cond_i: bool, cond_ii: bool, cond_iii: bool) -> Self {
        ExtensionConditions {
            cond_i,
            cond_ii,
            cond_iii,
            conclusion: cond_i && cond_ii && cond_iii,
        }
    }
}

/// Checks the three conditions for `sub_complex` sitting in an ambient
/// complex on `ambient_vertex_count` vertices whose symmetries act as
/// `ambient_group`. The top cells are the faces, or the edges when the
/// subcomplex has no faces.
pub fn check_extension_conditions(
    ambient_group: &PermGroup,
    sub_complex: &CellComplex,
    ambient_vertex_count: usize,
    aut_order: usize,
) -> Result<ExtensionConditions> {
    if ambient_group.degree() != sub_complex.n_vertices() {
        return Err(Error::DegreeMismatch {
            expected: sub_complex.n_vertices(),
            found: ambient_group.degree(),
        });
    }
    let graph = sub_complex.graph();
    let cond_i = ambient_group.elements().iter().all(|g| {
        if sub_complex.n_faces() == 0 {
            graph
                .edges()
                .iter()
                .all(|&(a, b)| graph.has_edge(g.apply(a), g.apply(b)))
        } else {
            sub_complex.faces().iter().all(|f| {
                f.map(g.images())
                    .map(|img| sub_complex.contains_face(&img))
                    .unwrap_or(false)
            })
        }
    });
    let cond_ii = ambient_vertex_count == sub_complex.n_vertices();
    let cond_iii = ambient_group.order() == aut_order;
    Ok(ExtensionConditions::new(cond_i, cond_ii, cond_iii))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Vertex- and face-transitive, not flag-transitive.
    Noble,
    /// Flag-transitive.
    Regular,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Noble => "noble",
            Classification::Regular => "regular",
        })
    }
}

/// Individual pass/fail checks of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    /// `V = nk`, `E = 2nk`, `F = nk`, `χ = 0`.
    pub complex_counts: bool,
    /// Each edge on two faces, connected, disc vertex links.
    pub closed_surface: bool,
    /// Face closures meet in nothing, a vertex or an edge.
    pub proper_intersections: bool,
    /// Duoprism boundary: each 2-face on two 3-cells, and dropping the
    /// polygon faces leaves exactly `Q_{n,k}`.
    pub duoprism_boundary: bool,
    pub graph_order_formula: bool,
    pub cellular_order_formula: bool,
    /// Closure of the structured generators equals the searched group.
    pub structured_generators_match: bool,
    /// Every vertex stabilizer has order 8 (`n = k`) or 4 (`n ≠ k`).
    pub stabilizer_orders: bool,
    /// `8nk` flags.
    pub flag_count: bool,
    /// Noble for `n ≠ k` (two edge orbits), regular and simply
    /// flag-transitive for `n = k`.
    pub classification: bool,
    pub clifford_inscribed: bool,
    pub centroid_at_origin: bool,
    /// Every cellular automorphism extends to an isometry.
    pub witnesses_valid: bool,
    /// Graph automorphisms extending to isometries number `|Aut(C_n × C_k)|`.
    pub symmetry_order_matches_graph: bool,
    pub extension_via_skeleton: bool,
    pub extension_via_quadrangulation: bool,
    pub edge_lengths: bool,
    pub faces_congruent_rectangles: bool,
    pub dihedral_angles: bool,
    pub vertex_figures: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of failing checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let named = [
            ("complex_counts", self.complex_counts),
            ("closed_surface", self.closed_surface),
            ("proper_intersections", self.proper_intersections),
            ("duoprism_boundary", self.duoprism_boundary),
            ("graph_order_formula", self.graph_order_formula),
            ("cellular_order_formula", self.cellular_order_formula),
            (
                "structured_generators_match",
                self.structured_generators_match,
            ),
            ("stabilizer_orders", self.stabilizer_orders),
            ("flag_count", self.flag_count),
            ("classification", self.classification),
            ("clifford_inscribed", self.clifford_inscribed),
            ("centroid_at_origin", self.centroid_at_origin),
            ("witnesses_valid", self.witnesses_valid),
            (
                "symmetry_order_matches_graph",
                self.symmetry_order_matches_graph,
            ),
            ("extension_via_skeleton", self.extension_via_skeleton),
            (
                "extension_via_quadrangulation",
                self.extension_via_quadrangulation,
            ),
            ("edge_lengths", self.edge_lengths),
            (
                "faces_congruent_rectangles",
                self.faces_congruent_rectangles,
            ),
            ("dihedral_angles", self.dihedral_angles),
            ("vertex_figures", self.vertex_figures),
        ];
        named
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| *name)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub tolerance: f64,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub flags: usize,
    pub group_order_graph: usize,
    pub group_order_cellular: usize,
    pub expected_order_graph: usize,
    pub expected_order_cellular: usize,
    /// Graph automorphisms realized by isometries of the vertex set.
    pub symmetry_order: usize,
    pub stabilizer_order: usize,
    pub transitivity: TransitivityReport,
    pub classification: Classification,
    pub metric: MetricReport,
    pub clifford_residual: f64,
    pub centroid_norm: f64,
    pub extension_via_skeleton: ExtensionConditions,
    pub extension_via_quadrangulation: ExtensionConditions,
    pub witnesses: Vec<IsometryWitness>,
    pub max_fit_residual: f64,
    pub max_orth_residual: f64,
    pub max_point_matching_error: f64,
    pub checks: Checks,
    pub pass: bool,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Human-readable report with fixed numeric formatting.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let status = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "Q_{{{},{}}}: {status}", self.n, self.k);
        let _ = writeln!(
            s,
            "  V={} E={} F={} flags={}",
            self.vertices, self.edges, self.faces, self.flags
        );
        let mut headline = format!(
            "  order {}, {}, {} edge orbits",
            self.group_order_cellular, self.classification, self.transitivity.edge_orbits
        );
        if (self.n, self.k) == (4, 4) {
            headline.push_str(", 3 copies check: n/a");
        }
        let _ = writeln!(s, "{headline}");
        let _ = writeln!(
            s,
            "  |Aut(C_n x C_k)| = {} (expected {}), |Aut(Q)| = {} (expected {}), isometric symmetries = {}",
            self.group_order_graph,
            self.expected_order_graph,
            self.group_order_cellular,
            self.expected_order_cellular,
            self.symmetry_order
        );
        let _ = writeln!(
            s,
            "  witnesses {}: max fit residual {:.3e}, max orthogonality residual {:.3e}",
            self.witnesses.len(),
            self.max_fit_residual,
            self.max_orth_residual
        );
        let fmt_list = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x:.12}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(
            s,
            "  edge lengths [{}], dihedral angles [{}]",
            fmt_list(&self.metric.edge_length_orbits),
            fmt_list(&self.metric.dihedral_angle_classes)
        );
        let _ = writeln!(
            s,
            "  extension conditions (skeleton) {}/{}/{}, (quadrangulation) {}/{}/{}",
            self.extension_via_skeleton.cond_i,
            self.extension_via_skeleton.cond_ii,
            self.extension_via_skeleton.cond_iii,
            self.extension_via_quadrangulation.cond_i,
            self.extension_via_quadrangulation.cond_ii,
            self.extension_via_quadrangulation.cond_iii
        );
        let failures = self.checks.failures();
        if !failures.is_empty() {
            let _ = writeln!(s, "  failed checks: {}", failures.join(", "));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub tolerance: f64,
    pub vertex_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tolerance: DEFAULT_TOLERANCE,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Runs the full pipeline on the duoprism realization.
pub fn verify_no_hidden_symmetries(n: usize, k: usize, tol: f64) -> Result<Certificate> {
    let r = duoprism_vertices(n, k)?;
    verify_realization(
        &r,
        VerifyConfig {
            tolerance: tol,
            ..VerifyConfig::default()
        },
    )
}

fn sets_match(found: &[f64], expected: &[f64], tol: f64) -> bool {
    found.len() == expected.len() && found.iter().zip(expected).all(|(a, b)| (a - b).abs() < tol)
}

fn sorted_distinct(mut xs: Vec<f64>, tol: f64) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < tol);
    xs
}

/// Runs the full pipeline on an arbitrary realization of `Q_{n,k}`.
pub fn verify_realization(r: &Realization, cfg: VerifyConfig) -> Result<Certificate> {
    let (n, k, tol) = (r.n(), r.k(), cfg.tolerance);
    let nk = n * k;
    let q = build_torus_quadrangulation(n, k)?;
    let boundary = build_duoprism_boundary(n, k)?;

    let complex_counts = q.n_vertices() == nk
        && q.n_edges() == 2 * nk
        && q.n_faces() == nk
        && q.euler_characteristic() == 0;
    let closed_surface = q.is_closed_surface() && q.has_disc_vertex_links();
    let proper_intersections = q.face_intersections_proper();
    let polygon_free: Vec<Face> = boundary
        .faces()
        .iter()
        .filter(|f| {
            let rows: std::collections::BTreeSet<usize> =
                f.vertices().iter().map(|&v| v / k).collect();
            let cols: std::collections::BTreeSet<usize> =
                f.vertices().iter().map(|&v| v % k).collect();
            rows.len() > 1 && cols.len() > 1
        })
        .cloned()
        .collect();
    let duoprism_boundary = boundary.faces_on_two_cells()
        && boundary.n_faces() == nk + n + k
        && polygon_free.as_slice() == q.faces();

    let graph_group = graph_automorphisms_capped(q.graph(), cfg.vertex_cap)?;
    let cellular = cellular_subgroup(&graph_group, &q)?;
    let expected_order_graph = expected_graph_order(n, k);
    let expected_order_cellular = expected_cellular_order(n, k);
    let structured = group_closure(nk, &structured_generators(n, k)?)?;
    let structured_generators_match = structured.elements() == cellular.elements();

    let expected_stab = if n == k { 8 } else { 4 };
    let stabilizer_order = cellular.stabilizer(0).order();
    let stabilizer_orders = (0..nk).all(|v| {
        let stab = cellular.stabilizer(v);
        stab.order() == expected_stab && cellular.orbit(v).len() * stab.order() == cellular.order()
    });

    let n_flags = flags(&q).len();
    let transitivity = transitivity_report(&cellular, &q)?;
    let classification = if transitivity.flag_transitive {
        Classification::Regular
    } else {
        Classification::Noble
    };
    let classification_ok = transitivity.vertex_transitive
        && transitivity.face_transitive
        && if n == k {
            classification == Classification::Regular && cellular.order() == n_flags
        } else {
            classification == Classification::Noble && transitivity.edge_orbits == 2
        };

    let clifford = clifford_residual(r);
    let centroid_norm = r.centroid().norm();

    let mut witnesses = Vec::with_capacity(cellular.order());
    let mut max_point_matching_error: f64 = 0.0;
    for g in cellular.elements() {
        let w = extend_to_isometry(r, g, tol)?;
        max_point_matching_error =
            max_point_matching_error.max(point_matching_error(r, &w.matrix4()));
        witnesses.push(w);
    }
    let max_fit_residual = witnesses.iter().map(|w| w.fit_residual).fold(0.0, f64::max);
    let max_orth_residual = witnesses
        .iter()
        .map(|w| w.orthogonality_residual)
        .fold(0.0, f64::max);
    let witnesses_valid =
        witnesses.iter().all(|w| w.is_valid(tol)) && max_point_matching_error < tol;

    // Sym(P) as permutations: graph automorphisms realized by isometries
    let mut isometric = Vec::new();
    for g in graph_group.elements() {
        if extend_to_isometry(r, g, tol)?.is_valid(tol) {
            isometric.push(g.clone());
        }
    }
    let symmetry_group = group_closure(nk, &isometric)?;
    let symmetry_order = symmetry_group.order();
    let symmetry_order_matches_graph =
        symmetry_order == isometric.len() && symmetry_order == graph_group.order();

    let skeleton = CellComplex::new(q.graph().clone(), Vec::new(), None)?;
    let extension_via_skeleton =
        check_extension_conditions(&symmetry_group, &skeleton, r.len(), graph_group.order())?;

    let generator_perms: Option<Vec<Perm>> = symmetry_generator_matrices(n, k)?
        .iter()
        .map(|(m, _)| induced_permutation(r, m, tol))
        .collect();
    let extension_via_quadrangulation = match generator_perms {
        Some(perms) => {
            let matrix_group = group_closure(nk, &perms)?;
            check_extension_conditions(&matrix_group, &q, r.len(), cellular.order())?
        }
        None => ExtensionConditions::new(false, r.len() == nk, false),
    };

    let metric = metric_report(r, &q, tol)?;
    let chord = |m: usize| 2.0 * (PI / m as f64).sin();
    let interior = |m: usize| PI - 2.0 * PI / m as f64;
    let edge_lengths = sets_match(
        &metric.edge_length_orbits,
        &sorted_distinct(vec![chord(n), chord(k)], tol),
        tol,
    );
    let dihedral_angles = sets_match(
        &metric.dihedral_angle_classes,
        &sorted_distinct(vec![interior(n), interior(k)], tol),
        tol,
    );
    let faces_congruent_rectangles =
        metric.faces_planar_rectangles && metric.face_congruence_classes == 1;
    let vertex_figures = metric.vertex_figure_classes == 1;

    let checks = Checks {
        complex_counts,
        closed_surface,
        proper_intersections,
        duoprism_boundary,
        graph_order_formula: graph_group.order() == expected_order_graph,
        cellular_order_formula: cellular.order() == expected_order_cellular,
        structured_generators_match,
        stabilizer_orders,
        flag_count: n_flags == 8 * nk,
        classification: classification_ok,
        clifford_inscribed: clifford < tol,
        centroid_at_origin: centroid_norm < tol,
        witnesses_valid,
        symmetry_order_matches_graph,
        extension_via_skeleton: extension_via_skeleton.conclusion,
        extension_via_quadrangulation: extension_via_quadrangulation.conclusion,
        edge_lengths,
        faces_congruent_rectangles,
        dihedral_angles,
        vertex_figures,
    };
    let pass = checks.all() && max_fit_residual < tol && max_orth_residual < tol;

    Ok(Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        n,
        k,
        tolerance: tol,
        vertices: q.n_vertices(),
        edges: q.n_edges(),
        faces: q.n_faces(),
        flags: n_flags,
        group_order_graph: graph_group.order(),
        group_order_cellular: cellular.order(),
        expected_order_graph,
        expected_order_cellular,
        symmetry_order,
        stabilizer_order,
        transitivity,
        classification,
        metric,
        clifford_residual: clifford,
        centroid_norm,
        extension_via_skeleton,
        extension_via_quadrangulation,
        witnesses,
        max_fit_residual,
        max_orth_residual,
        max_point_matching_error,
        checks,
        pass,
    })
}

/// Certificates for every `(n, k)` in `range × range`, in row-major order.
/// Cells are computed in parallel.
pub fn sweep(range: RangeInclusive<usize>, cfg: VerifyConfig) -> Result<Vec<Certificate>> {
    let cells: Vec<(usize, usize)> = range
        .clone()
        .flat_map(|n| range.clone().map(move |k| (n, k)))
        .collect();
    cells
        .par_iter()
        .map(|&(n, k)| verify_realization(&duoprism_vertices(n, k)?, cfg))
        .collect()
}

/// One line per certificate with fixed-width columns.
pub fn sweep_table(certs: &[Certificate]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>7} {:>7} {:>9} {:>10} {:>10} {:>8} {:>11} {:>6}",
        "n",
        "k",
        "|AutG|",
        "|AutQ|",
        "witnesses",
        "max_fit",
        "max_orth",
        "class",
        "edge_orbits",
        "status"
    );
    for c in certs {
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>7} {:>7} {:>9} {:>10.3e} {:>10.3e} {:>8} {:>11} {:>6}",
            c.n,
            c.k,
            c.group_order_graph,
            c.group_order_cellular,
            c.witnesses.len(),
            c.max_fit_residual,
            c.max_orth_residual,
            c.classification.to_string(),
            c.transitivity.edge_orbits,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

/// Result of searching the 4-cube's square faces for copies of `Q_{4,4}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypercubeReport {
    /// Copies found by the edge-coverage depth-first search.
    pub copies: usize,
    /// Copies found by scanning every 16-subset of the 24 squares.
    pub naive_copies: usize,
    /// Each copy as indices into the 4-cube's sorted face list.
    pub copy_faces: Vec<Vec<usize>>,
    pub copies_isomorphic_to_q44: bool,
    /// Orbits of the 4-cube's symmetry group on the copies.
    pub copy_orbits: usize,
    pub graph_order: usize,
    pub cellular_order: usize,
    /// `graph_order / cellular_order`, when exact.
    pub ratio: Option<usize>,
}

impl HypercubeReport {
    pub fn pass(&self) -> bool {
        self.copies == 3
            && self.naive_copies == self.copies
            && self.copies_isomorphic_to_q44
            && self.ratio == Some(self.copies)
    }
}

fn face_edge_masks(h: &CellComplex) -> Vec<u32> {
    h.faces()
        .iter()
        .map(|f| {
            f.edges()
                .map(|e| 1u32 << h.graph().edge_index(e).expect("face edge"))
                .fold(0, |a, b| a | b)
        })
        .collect()
}

fn subcomplex(h: &CellComplex, mask: u32) -> Result<CellComplex> {
    let faces: Vec<Face> = (0..h.n_faces())
        .filter(|&f| mask >> f & 1 == 1)
        .map(|f| h.faces()[f].clone())
        .collect();
    CellComplex::new(h.graph().clone(), faces, None)
}

fn is_torus_quadrangulation(c: &CellComplex) -> bool {
    c.is_closed_surface() && c.euler_characteristic() == 0 && c.has_disc_vertex_links()
}

/// Face subsets (as bitmasks over `h`'s faces) covering every edge exactly
/// twice, by depth-first search with per-edge multiplicity pruning.
pub fn edge_double_covers_dfs(h: &CellComplex) -> Vec<u32> {
    let masks = face_edge_masks(h);
    let n_edges = h.n_edges();
    let mut remaining = vec![0u8; n_edges];
    for m in &masks {
        for (e, slot) in remaining.iter_mut().enumerate() {
            *slot += (m >> e & 1) as u8;
        }
    }

    struct Search<'a> {
        masks: &'a [u32],
        n_edges: usize,
        count: Vec<u8>,
        remaining: Vec<u8>,
        out: Vec<u32>,
    }

    fn go(s: &mut Search<'_>, f: usize, chosen: u32) {
        if f == s.masks.len() {
            if s.count.iter().all(|&c| c == 2) {
                s.out.push(chosen);
            }
            return;
        }
        let m = s.masks[f];
        let edges: Vec<usize> = (0..s.n_edges).filter(|&e| m >> e & 1 == 1).collect();
        for &e in &edges {
            s.remaining[e] -= 1;
        }
        // include f
        if edges.iter().all(|&e| s.count[e] < 2) {
            for &e in &edges {
                s.count[e] += 1;
            }
            go(s, f + 1, chosen | 1 << f);
            for &e in &edges {
                s.count[e] -= 1;
            }
        }
        // exclude f
        if edges.iter().all(|&e| s.count[e] + s.remaining[e] >= 2) {
            go(s, f + 1, chosen);
        }
        for &e in &edges {
            s.remaining[e] += 1;
        }
    }

    let mut s = Search {
        masks: &masks,
        n_edges,
        count: vec![0; n_edges],
        remaining,
        out: Vec::new(),
    };
    go(&mut s, 0, 0);
    s.out
}

/// Same as [`edge_double_covers_dfs`] by scanning every subset of
/// `h.n_faces()` faces with exactly `size` members.
pub fn edge_double_covers_naive(h: &CellComplex, size: u32) -> Vec<u32> {
    let masks = face_edge_masks(h);
    let n = masks.len() as u32;
    let all_edges: u32 = if h.n_edges() == 32 {
        u32::MAX
    } else {
        (1u32 << h.n_edges()) - 1
    };
    let mut out = Vec::new();
    if size == 0 || size > n {
        return out;
    }
    let limit: u64 = 1u64 << n;
    let mut subset: u64 = (1u64 << size) - 1;
    while subset < limit {
        let (mut once, mut twice, mut thrice) = (0u32, 0u32, 0u32);
        let mut rest = subset;
        while rest != 0 {
            let f = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let m = masks[f];
            thrice |= twice & m;
            twice |= once & m;
            once |= m;
        }
        if twice == all_edges && thrice == 0 {
            out.push(subset as u32);
        }
        // next subset with the same popcount (Gosper)
        let c = subset & subset.wrapping_neg();
        let r = subset + c;
        subset = (((r ^ subset) >> 2) / c) | r;
    }
    out
}

/// Finds every copy of `Q_{4,4}` among the square faces of the 4-cube by
/// two independent enumerations, certifies each copy isomorphic to
/// `Q_{4,4}`, and compares the count with `|Aut(C_4 × C_4)| / |Aut(Q_{4,4})|`.
pub fn hypercube_embedding_report() -> Result<HypercubeReport> {
    let h = build_hypercube_boundary();
    let q44 = build_torus_quadrangulation(4, 4)?;

    let mut dfs = Vec::new();
    for mask in edge_double_covers_dfs(&h) {
        if is_torus_quadrangulation(&subcomplex(&h, mask)?) {
            dfs.push(mask);
        }
    }
    let mut naive = Vec::new();
    for mask in edge_double_covers_naive(&h, q44.n_faces() as u32) {
        if is_torus_quadrangulation(&subcomplex(&h, mask)?) {
            naive.push(mask);
        }
    }
    dfs.sort_unstable();
    naive.sort_unstable();

    let mut copies_isomorphic_to_q44 = !dfs.is_empty();
    for &mask in &dfs {
        copies_isomorphic_to_q44 &=
            find_complex_isomorphism(&subcomplex(&h, mask)?, &q44).is_some();
    }

    let cube_group = graph_automorphisms(h.graph())?;
    let face_sets: Vec<Vec<usize>> = dfs
        .iter()
        .map(|&m| (0..h.n_faces()).filter(|&f| m >> f & 1 == 1).collect())
        .collect();
    let mut orbit_of: Vec<usize> = (0..face_sets.len()).collect();
    for g in cube_group.generators() {
        for (a, set) in face_sets.iter().enumerate() {
            let mut img: Vec<usize> = set
                .iter()
                .map(|&f| {
                    let face = h.faces()[f].map(g.images()).expect("bijection");
                    h.face_id(&face)
                        .expect("cube symmetries map squares to squares")
                })
                .collect();
            img.sort_unstable();
            if let Some(b) = face_sets.iter().position(|s| *s == img) {
                let (ra, rb) = (root(&mut orbit_of, a), root(&mut orbit_of, b));
                orbit_of[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let copy_orbits = (0..face_sets.len())
        .filter(|&a| root(&mut orbit_of, a) == a)
        .count();

    let graph_order = graph_automorphisms(&build_cycle_product_graph(4, 4)?)?.order();
    let cellular_order = cellular_automorphisms(&q44)?.order();
    let ratio = (graph_order % cellular_order == 0).then_some(graph_order / cellular_order);

    Ok(HypercubeReport {
        copies: dfs.len(),
        naive_copies: naive.len(),
        copy_faces: face_sets,
        copies_isomorphic_to_q44,
        copy_orbits,
        graph_order,
        cellular_order,
        ratio,
    })
}

fn root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

/// Number of copies of `Q_{4,4}` in the 2-skeleton of the 4-cube.
pub fn count_q44_in_hypercube() -> Result<usize> {
    let h = build_hypercube_boundary();
    let mut count = 0;
    for mask in edge_double_covers_dfs(&h) {
        if is_torus_quadrangulation(&subcomplex(&h, mask)?) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_cycle_graph, canonical_face};
    use crate::geometry::{polygon_symmetry_group, symmetry_permutation_group, Point4};

    #[test]
    fn extension_conditions_duoprism_vs_q35() {
        let q = build_torus_quadrangulation(3, 5).unwrap();
        let sym = symmetry_permutation_group(3, 5, 1e-9).unwrap();
        let aut = cellular_automorphisms(&q).unwrap();
        let rep = check_extension_conditions(&sym, &q, 15, aut.order()).unwrap();
        assert!(rep.cond_i && rep.cond_ii && rep.cond_iii && rep.conclusion);
    }

    #[test]
    fn extension_conditions_polygon_vs_cycle() {
        let n = 6;
        let cycle = CellComplex::new(build_cycle_graph(n).unwrap(), Vec::new(), None).unwrap();
        let sym = polygon_symmetry_group(n, 1e-9).unwrap();
        let aut = graph_automorphisms(cycle.graph()).unwrap();
        let rep = check_extension_conditions(&sym, &cycle, n, aut.order()).unwrap();
        assert!(rep.conclusion);
    }

    #[test]
    fn extension_conditions_extra_element_breaks_cond_i() {
        let q = build_torus_quadrangulation(3, 4).unwrap();
        let mut images: Vec<usize> = (0..12).collect();
        images.swap(0, 1);
        let bad = Perm::from_images(images).unwrap();
        let mut gens = structured_generators(3, 4).unwrap();
        gens.push(bad);
        let g = group_closure(12, &gens).unwrap();
        let rep = check_extension_conditions(&g, &q, 12, 48).unwrap();
        assert!(!rep.cond_i);
        assert!(!rep.conclusion);
    }

    #[test]
    fn extension_conditions_degree_mismatch() {
        let q = build_torus_quadrangulation(3, 4).unwrap();
        assert!(check_extension_conditions(&PermGroup::trivial(9), &q, 12, 48).is_err());
    }

    #[test]
    fn certificate_3_5_noble() {
        let c = verify_no_hidden_symmetries(3, 5, 1e-9).unwrap();
        assert!(c.pass, "{}", c.summary());
        assert_eq!(c.classification, Classification::Noble);
        assert_eq!(c.witnesses.len(), 60);
        assert!(c.summary().contains("noble, 2 edge orbits"));
    }

    #[test]
    fn certificate_4_4_regular() {
        let c = verify_no_hidden_symmetries(4, 4, 1e-9).unwrap();
        assert!(c.pass, "{}", c.summary());
        assert_eq!(c.classification, Classification::Regular);
        assert_eq!(c.witnesses.len(), 128);
        assert_eq!(c.group_order_graph, 384);
        assert_eq!(c.symmetry_order, 384);
        assert!(c.summary().contains("order 128, regular"));
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = verify_no_hidden_symmetries(3, 4, 1e-9).unwrap();
        let back = Certificate::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn perturbed_realization_fails() {
        let r = duoprism_vertices(3, 4).unwrap();
        let bad = r.perturbed(0, Point4::new(1e-3, 0.0, 0.0, 0.0)).unwrap();
        let c = verify_realization(&bad, VerifyConfig::default()).unwrap();
        assert!(!c.pass);
        assert!(c.max_fit_residual > 1e-6);
        assert!(!c.checks.witnesses_valid);
    }

    #[test]
    fn hypercube_count_is_three() {
        assert_eq!(count_q44_in_hypercube().unwrap(), 3);
    }

    #[test]
    fn dfs_and_naive_agree_on_small_complex() {
        // Q_{3,3} faces: only the full set covers every edge twice
        let q = build_torus_quadrangulation(3, 3).unwrap();
        assert_eq!(edge_double_covers_dfs(&q), vec![(1 << 9) - 1]);
        assert_eq!(edge_double_covers_naive(&q, 9), vec![(1 << 9) - 1]);
        let single = CellComplex::new(
            crate::complex::Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
            vec![canonical_face(&[0, 1, 2, 3]).unwrap()],
            None,
        )
        .unwrap();
        assert!(edge_double_covers_dfs(&single).is_empty());
    }
}

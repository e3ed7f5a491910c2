//! Duoprism realization in R⁴, isometry fitting and metric regularity.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::{Matrix2, Matrix4, Matrix4x3, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::autgroup::{group_closure, PermGroup};
use crate::complex::{CellComplex, ComplexDocument, VertexId};
use crate::perm::{Automorphism, Perm};
use crate::{Error, Result};

pub type Point4 = Vector4<f64>;

/// Vertex coordinates of a complex on `n·k` vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    n: usize,
    k: usize,
    points: Vec<Point4>,
}

impl Realization {
    /// Checks length `n·k`, finiteness and injectivity.
    pub fn new(n: usize, k: usize, points: Vec<Point4>) -> Result<Self> {
        if points.len() != n * k {
            return Err(Error::InvalidRealization(format!(
                "expected {} points, got {}",
                n * k,
                points.len()
            )));
        }
        if let Some(v) = points.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidRealization(format!(
                "vertex {v} is not finite"
            )));
        }
        for a in 0..points.len() {
            for b in a + 1..points.len() {
                if points[a] == points[b] {
                    return Err(Error::InvalidRealization(format!(
                        "vertices {a} and {b} coincide"
                    )));
                }
            }
        }
        Ok(Realization { n, k, points })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Point4] {
        &self.points
    }

    pub fn point(&self, v: usize) -> &Point4 {
        &self.points[v]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Point4 {
        self.points.iter().sum::<Point4>() / self.points.len() as f64
    }

    /// Copy with vertex `v` moved by `delta`.
    pub fn perturbed(&self, v: usize, delta: Point4) -> Result<Self> {
        let mut points = self.points.clone();
        points[v] += delta;
        Realization::new(self.n, self.k, points)
    }

    pub fn coords(&self) -> Vec<[f64; 4]> {
        self.points
            .iter()
            .map(|p| [p[0], p[1], p[2], p[3]])
            .collect()
    }

    /// Reads coordinates from a complex document carrying `n`, `k` and `coords`.
    pub fn from_document(doc: &ComplexDocument) -> Result<Self> {
        let (Some(n), Some(k), Some(coords)) = (doc.n, doc.k, doc.coords.as_ref()) else {
            return Err(Error::InvalidRealization(
                "document lacks n, k or coords".into(),
            ));
        };
        Realization::new(n, k, coords.iter().map(|c| Point4::from(*c)).collect())
    }
}

/// Vertex `(i, j)` of the `n,k`-duoprism is
/// `(cos 2πi/n, sin 2πi/n, cos 2πj/k, sin 2πj/k)`.
pub fn duoprism_vertices(n: usize, k: usize) -> Result<Realization> {
    crate::complex::check_cycle_lengths(n, k)?;
    let points = (0..n * k)
        .map(|v| {
            let (i, j) = VertexId(v).pair(k);
            let a = TAU * i as f64 / n as f64;
            let b = TAU * j as f64 / k as f64;
            Point4::new(a.cos(), a.sin(), b.cos(), b.sin())
        })
        .collect();
    Realization::new(n, k, points)
}

/// Largest deviation of `x1²+x2²` or `x3²+x4²` from 1.
pub fn clifford_residual(r: &Realization) -> f64 {
    r.points()
        .iter()
        .map(|p| {
            let a = (p[0] * p[0] + p[1] * p[1] - 1.0).abs();
            let b = (p[2] * p[2] + p[3] * p[3] - 1.0).abs();
            a.max(b)
        })
        .fold(0.0, f64::max)
}

/// Every point lies on the Clifford torus `x1²+x2² = x3²+x4² = 1` within `tol`.
pub fn clifford_check(r: &Realization, tol: f64) -> bool {
    clifford_residual(r) < tol
}

/// A linear map fitted to a vertex permutation, with its residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryWitness {
    /// Row-major 4×4 matrix.
    pub matrix: [[f64; 4]; 4],
    pub automorphism: Automorphism,
    /// `max_v |A·M_v − M_π(v)|`.
    pub fit_residual: f64,
    /// Max-norm of `AᵀA − I`.
    pub orthogonality_residual: f64,
    pub determinant: f64,
}

impl IsometryWitness {
    pub fn matrix4(&self) -> Matrix4<f64> {
        matrix_from_rows(&self.matrix)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.fit_residual < tol
            && self.orthogonality_residual < tol
            && (self.determinant.abs() - 1.0).abs() < tol
    }
}

pub fn matrix_from_rows(rows: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| rows[r][c])
}

pub fn matrix_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

fn witness_for(r: &Realization, perm: &Perm, a: Matrix4<f64>) -> IsometryWitness {
    let fit_residual = r
        .points()
        .iter()
        .enumerate()
        .map(|(v, p)| (a * p - r.point(perm.apply(v))).norm())
        .fold(0.0, f64::max);
    let orthogonality_residual = (a.transpose() * a - Matrix4::identity()).abs().max();
    IsometryWitness {
        matrix: matrix_rows(&a),
        automorphism: perm.clone(),
        fit_residual,
        orthogonality_residual,
        determinant: a.determinant(),
    }
}

/// Least-squares linear map `A` minimizing `Σ_v |A·M_v − M_π(v)|²`, solved
/// from the normal equations `A·S = T` with `S = Σ M_v M_vᵀ` and
/// `T = Σ M_π(v) M_vᵀ`. No translation is fitted.
///
/// `tol` bounds the smallest eigenvalue of `S` relative to its largest;
/// below it the points do not span R⁴ and the fit is refused.
pub fn extend_to_isometry(r: &Realization, perm: &Perm, tol: f64) -> Result<IsometryWitness> {
    if perm.degree() != r.len() {
        return Err(Error::DegreeMismatch {
            expected: r.len(),
            found: perm.degree(),
        });
    }
    let mut gram = Matrix4::zeros();
    let mut cross = Matrix4::zeros();
    for (v, p) in r.points().iter().enumerate() {
        gram += p * p.transpose();
        cross += r.point(perm.apply(v)) * p.transpose();
    }
    let eig = gram.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if lo.is_nan() || lo <= tol * hi {
        return Err(Error::RankDeficient(lo));
    }
    let chol = gram.cholesky().ok_or(Error::RankDeficient(lo))?;
    // A·S = T  ⇔  S·Aᵀ = Tᵀ since S is symmetric
    let a = chol.solve(&cross.transpose()).transpose();
    Ok(witness_for(r, perm, a))
}

/// Largest distance from `A·M_v` to the nearest realization point.
pub fn point_matching_error(r: &Realization, a: &Matrix4<f64>) -> f64 {
    r.points()
        .iter()
        .map(|p| {
            let q = a * p;
            r.points()
                .iter()
                .map(|w| (q - w).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// The vertex permutation induced by `a`, if every image lands within `tol`
/// of a distinct realization point.
pub fn induced_permutation(r: &Realization, a: &Matrix4<f64>, tol: f64) -> Option<Perm> {
    let images = r
        .points()
        .iter()
        .map(|p| {
            let q = a * p;
            let mut hits = r
                .points()
                .iter()
                .enumerate()
                .filter(|(_, w)| (q - *w).norm() < tol);
            match (hits.next(), hits.next()) {
                (Some((w, _)), None) => Some(w),
                _ => None,
            }
        })
        .collect::<Option<Vec<usize>>>()?;
    Perm::from_images(images).ok()
}

fn rotation2(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn block_diag(a: Matrix2<f64>, b: Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
    m
}

/// Orthogonal generators of the duoprism's symmetry group paired with the
/// structured automorphisms they induce: `R(2π/n) ⊕ I`, `diag(1,−1) ⊕ I`,
/// `I ⊕ R(2π/k)`, `I ⊕ diag(1,−1)` and, when `n = k`, the swap of the two
/// coordinate planes.
pub fn symmetry_generator_matrices(
    n: usize,
    k: usize,
) -> Result<Vec<(Matrix4<f64>, Automorphism)>> {
    let gens = crate::autgroup::structured_generators(n, k)?;
    let id = Matrix2::identity();
    let flip = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let mut mats = vec![
        block_diag(rotation2(TAU / n as f64), id),
        block_diag(flip, id),
        block_diag(id, rotation2(TAU / k as f64)),
        block_diag(id, flip),
    ];
    if n == k {
        let mut swap = Matrix4::zeros();
        swap.fixed_view_mut::<2, 2>(0, 2).copy_from(&id);
        swap.fixed_view_mut::<2, 2>(2, 0).copy_from(&id);
        mats.push(swap);
    }
    Ok(mats.into_iter().zip(gens).collect())
}

/// Closure of the vertex permutations induced by the generator matrices.
/// Fails if some matrix does not permute the duoprism's vertices.
pub fn symmetry_permutation_group(n: usize, k: usize, tol: f64) -> Result<PermGroup> {
    let r = duoprism_vertices(n, k)?;
    let perms = symmetry_generator_matrices(n, k)?
        .iter()
        .map(|(m, _)| {
            induced_permutation(&r, m, tol).ok_or_else(|| {
                Error::InvalidRealization("generator matrix does not permute the vertices".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    group_closure(n * k, &perms)
}

/// Vertices of the regular `n`-gon `(cos 2πi/n, sin 2πi/n)`.
pub fn polygon_vertices(n: usize) -> Vec<Vector2<f64>> {
    (0..n)
        .map(|i| {
            let a = TAU * i as f64 / n as f64;
            Vector2::new(a.cos(), a.sin())
        })
        .collect()
}

/// Symmetry group of the regular `n`-gon acting on its vertices, generated
/// by the induced permutations of `R(2π/n)` and `diag(1,−1)`.
pub fn polygon_symmetry_group(n: usize, tol: f64) -> Result<PermGroup> {
    let pts = polygon_vertices(n);
    let induced = |m: Matrix2<f64>| -> Result<Perm> {
        let images = pts
            .iter()
            .map(|p| {
                let q = m * p;
                pts.iter().position(|w| (q - w).norm() < tol)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::InvalidRealization("matrix does not permute the polygon".into())
            })?;
        Perm::from_images(images)
    };
    let gens = [
        induced(rotation2(TAU / n as f64))?,
        induced(Matrix2::new(1.0, 0.0, 0.0, -1.0))?,
    ];
    group_closure(n, &gens)
}

/// Metric regularity of a quadrangulation realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// Distinct edge lengths (bucket means), ascending.
    pub edge_length_orbits: Vec<f64>,
    pub face_congruence_classes: usize,
    /// Distinct dihedral angles in radians (bucket means), ascending.
    pub dihedral_angle_classes: Vec<f64>,
    pub vertex_figure_classes: usize,
    /// Largest third singular value of a face's corner difference vectors.
    pub max_planarity_residual: f64,
    /// Largest `|cos|` of a face corner angle.
    pub max_corner_cosine: f64,
    pub faces_planar_rectangles: bool,
}

/// Sorts `values` and splits wherever consecutive values differ by more
/// than `tol`; returns the bucket means.
pub fn bucket(values: &[f64], tol: f64) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            if i > start {
                let chunk = &sorted[start..i];
                out.push(chunk.iter().sum::<f64>() / chunk.len() as f64);
            }
            start = i;
        }
    }
    out
}

/// Number of classes when grouping vectors that agree entrywise within `tol`
/// with a class representative (first member in input order).
fn class_count(keys: &[Vec<f64>], tol: f64) -> usize {
    let mut reps: Vec<&Vec<f64>> = Vec::new();
    for key in keys {
        let known = reps
            .iter()
            .any(|r| r.len() == key.len() && r.iter().zip(key).all(|(a, b)| (a - b).abs() < tol));
        if !known {
            reps.push(key);
        }
    }
    reps.len()
}

/// Edge lengths, face shapes, dihedral angles and vertex figures of a
/// quadrangulation realization.
///
/// The dihedral angle at an edge `uv` is the angle between the two faces'
/// half-planes after projecting out the edge direction: for each face the
/// side `uw` leaving `u` is projected onto the orthogonal complement of
/// `v − u`, and the angle between the two projections lies in `[0, π]`.
pub fn metric_report(r: &Realization, c: &CellComplex, tol: f64) -> Result<MetricReport> {
    if r.len() != c.n_vertices() {
        return Err(Error::DegreeMismatch {
            expected: c.n_vertices(),
            found: r.len(),
        });
    }
    if let Some(f) = c.faces().iter().position(|f| f.len() != 4) {
        return Err(Error::NonQuadrilateral(f));
    }
    let p = |v: usize| r.point(v);

    let lengths: Vec<f64> = c
        .graph()
        .edges()
        .iter()
        .map(|&(a, b)| (p(a) - p(b)).norm())
        .collect();

    let mut face_keys = Vec::with_capacity(c.n_faces());
    let mut max_planarity_residual: f64 = 0.0;
    let mut max_corner_cosine: f64 = 0.0;
    for f in c.faces() {
        let b = f.vertices();
        let diffs =
            Matrix4x3::from_columns(&[p(b[1]) - p(b[0]), p(b[2]) - p(b[0]), p(b[3]) - p(b[0])]);
        let sv = diffs.singular_values();
        max_planarity_residual = max_planarity_residual.max(sv.min());
        let sides: Vec<Point4> = (0..4).map(|t| p(b[(t + 1) % 4]) - p(b[t])).collect();
        for t in 0..4 {
            let (s, u) = (&sides[t], &sides[(t + 1) % 4]);
            max_corner_cosine = max_corner_cosine.max((s.dot(u) / (s.norm() * u.norm())).abs());
        }
        let mut key: Vec<f64> = sides.iter().map(|s| s.norm()).collect();
        key.push((p(b[2]) - p(b[0])).norm());
        key.push((p(b[3]) - p(b[1])).norm());
        key[..4].sort_by(f64::total_cmp);
        key[4..].sort_by(f64::total_cmp);
        face_keys.push(key);
    }

    let edge_faces = c.edge_faces();
    let mut angles = Vec::with_capacity(c.n_edges());
    for (eid, &(u, v)) in c.graph().edges().iter().enumerate() {
        let dir = (p(v) - p(u)).normalize();
        let halves: Vec<Point4> = edge_faces[eid]
            .iter()
            .map(|&fid| {
                let b = c.faces()[fid].vertices();
                let at = b.iter().position(|&x| x == u).expect("edge vertex on face");
                let prev = b[(at + 3) % 4];
                let w = if prev == v { b[(at + 1) % 4] } else { prev };
                let side = p(w) - p(u);
                (side - dir * side.dot(&dir)).normalize()
            })
            .collect();
        if let [h0, h1] = halves[..] {
            angles.push(h0.dot(&h1).clamp(-1.0, 1.0).acos());
        }
    }

    let figure_keys: Vec<Vec<f64>> = (0..c.n_vertices())
        .map(|v| {
            let ns = c.graph().neighbors(v);
            let mut d = Vec::new();
            for x in 0..ns.len() {
                for y in x + 1..ns.len() {
                    d.push((p(ns[x]) - p(ns[y])).norm());
                }
            }
            d.sort_by(f64::total_cmp);
            d
        })
        .collect();

    Ok(MetricReport {
        edge_length_orbits: bucket(&lengths, tol),
        face_congruence_classes: class_count(&face_keys, tol),
        dihedral_angle_classes: bucket(&angles, tol),
        vertex_figure_classes: class_count(&figure_keys, tol),
        max_planarity_residual,
        max_corner_cosine,
        faces_planar_rectangles: max_planarity_residual < tol && max_corner_cosine < tol,
    })
}

/// Realization document: the complex JSON with a `coords` array.
pub fn realization_document(c: &CellComplex, r: &Realization) -> ComplexDocument {
    let mut doc = c.to_document();
    doc.coords = Some(r.coords());
    doc
}

/// 4OFF text: header, counts line `V F E`, one 4-component vertex line per
/// vertex and one `m v0 … v(m−1)` line per face. Coordinates use 17
/// significant digits.
pub fn to_off(c: &CellComplex, r: &Realization) -> String {
    let mut out = String::new();
    out.push_str("4OFF\n");
    let _ = writeln!(out, "{} {} {}", c.n_vertices(), c.n_faces(), c.n_edges());
    for p in r.points() {
        let _ = writeln!(
            out,
            "{:.16e} {:.16e} {:.16e} {:.16e}",
            p[0], p[1], p[2], p[3]
        );
    }
    for f in c.faces() {
        let _ = write!(out, "{}", f.len());
        for v in f.vertices() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Plain listing of vertices with their `(i, j)` labels and coordinates,
/// then edges and faces.
pub fn to_text(c: &CellComplex, r: &Realization) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Q_{{{},{}}}: V={} E={} F={}",
        r.n(),
        r.k(),
        c.n_vertices(),
        c.n_edges(),
        c.n_faces()
    );
    out.push_str("vertices\n");
    for (v, p) in r.points().iter().enumerate() {
        let (i, j) = VertexId(v).pair(r.k());
        let _ = writeln!(
            out,
            "  {v} ({i},{j}) {:.16e} {:.16e} {:.16e} {:.16e}",
            p[0], p[1], p[2], p[3]
        );
    }
    out.push_str("edges\n");
    for (a, b) in c.graph().edges() {
        let _ = writeln!(out, "  {a} {b}");
    }
    out.push_str("faces\n");
    for f in c.faces() {
        let vs: Vec<String> = f.vertices().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  {}", vs.join(" "));
    }
    out
}

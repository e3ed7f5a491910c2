//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use quadtorus_core::autgroup::{
    cellular_automorphisms, graph_automorphisms, group_closure, structured_generators,
};
use quadtorus_core::complex::build_hypercube_boundary;
use quadtorus_core::complex::{build_cycle_product_graph, build_torus_quadrangulation, flags};
use quadtorus_core::geometry::{duoprism_vertices, Point4};
use quadtorus_core::verify::{
    edge_double_covers_naive, hypercube_embedding_report, sweep, verify_realization, Certificate,
    Classification, VerifyConfig,
};

const GRID: std::ops::RangeInclusive<usize> = 3..=8;

fn grid() -> impl Iterator<Item = (usize, usize)> {
    GRID.flat_map(|n| GRID.map(move |k| (n, k)))
}

/// Group orders restated here so the suite does not read them from the library.
fn graph_order(n: usize, k: usize) -> usize {
    if n != k {
        4 * n * k
    } else if n == 4 {
        384
    } else {
        8 * n * n
    }
}

fn quad_order(n: usize, k: usize) -> usize {
    if n != k {
        4 * n * k
    } else {
        8 * n * n
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn ac1_graph_orders() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (n, k) in grid() {
        let g = build_cycle_product_graph(n, k).unwrap();
        let order = graph_automorphisms(&g).unwrap().order();
        if order != graph_order(n, k) {
            bad.push(format!("({n},{k}): {order}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "36 cells, mismatches {bad:?}, {:.2}s (limit 60s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn ac2_quad_orders() -> Outcome {
    let mut bad = Vec::new();
    let mut order44 = (0, 0);
    for (n, k) in grid() {
        let q = build_torus_quadrangulation(n, k).unwrap();
        let cellular = cellular_automorphisms(&q).unwrap().order();
        if cellular != quad_order(n, k) {
            bad.push(format!("({n},{k}): {cellular}"));
        }
        if (n, k) == (4, 4) {
            order44 = (cellular, graph_automorphisms(q.graph()).unwrap().order());
        }
    }
    outcome(
        bad.is_empty() && order44 == (128, 384),
        format!(
            "mismatches {bad:?}; (4,4) cellular {} vs graph {}",
            order44.0, order44.1
        ),
    )
}

fn ac3_structured_vs_search() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=6 {
        for k in 3..=6 {
            let q = build_torus_quadrangulation(n, k).unwrap();
            let searched = cellular_automorphisms(&q).unwrap();
            let built = group_closure(n * k, &structured_generators(n, k).unwrap()).unwrap();
            if searched.elements() != built.elements() {
                bad.push((n, k));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("16 cells, element-set mismatches {bad:?}"),
    )
}

fn ac4_witnesses(certs: &[Certificate], elapsed: Duration) -> Outcome {
    let mut bad = Vec::new();
    let mut worst: (f64, f64) = (0.0, 0.0);
    for c in certs {
        let fit = c
            .witnesses
            .iter()
            .map(|w| w.fit_residual)
            .fold(0.0, f64::max);
        let orth = c
            .witnesses
            .iter()
            .map(|w| w.orthogonality_residual)
            .fold(0.0, f64::max);
        worst = (worst.0.max(fit), worst.1.max(orth));
        let extends = [c.extension_via_skeleton, c.extension_via_quadrangulation]
            .iter()
            .all(|l| l.cond_i && l.cond_ii && l.cond_iii);
        if fit >= 1e-9
            || orth >= 1e-9
            || c.witnesses.len() != quad_order(c.n, c.k)
            || !extends
            || !c.pass
        {
            bad.push((c.n, c.k));
        }
    }
    outcome(
        bad.is_empty() && elapsed < Duration::from_secs(300),
        format!(
            "max fit {:.2e}, max orth {:.2e} (limit 1e-9), failing {bad:?}, {:.2}s (limit 300s)",
            worst.0,
            worst.1,
            elapsed.as_secs_f64()
        ),
    )
}

fn ac5_clifford() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, k) in grid() {
        for p in duoprism_vertices(n, k).unwrap().points() {
            worst = worst
                .max((p[0] * p[0] + p[1] * p[1] - 1.0).abs())
                .max((p[2] * p[2] + p[3] * p[3] - 1.0).abs());
        }
    }
    outcome(
        worst < 1e-12,
        format!("max unit-circle deviation {worst:.2e} (limit 1e-12)"),
    )
}

fn ac6_hypercube() -> Outcome {
    let start = Instant::now();
    let naive = edge_double_covers_naive(&build_hypercube_boundary(), 16);
    let naive_time = start.elapsed();
    let report = hypercube_embedding_report().unwrap();
    let ok = report.copies == 3
        && report.naive_copies == 3
        && naive.len() == 3
        && report.ratio == Some(3)
        && report.graph_order == 384
        && report.cellular_order == 128
        && report.copies_isomorphic_to_q44
        && naive_time < Duration::from_secs(30);
    outcome(
        ok,
        format!(
            "dfs copies {}, naive copies {}, ratio {:?}, isomorphic {}, naive scan {:.2}s (limit 30s)",
            report.copies,
            report.naive_copies,
            report.ratio,
            report.copies_isomorphic_to_q44,
            naive_time.as_secs_f64()
        ),
    )
}

fn ac7_classification(certs: &[Certificate]) -> Outcome {
    let mut bad = Vec::new();
    for c in certs {
        let t = &c.transitivity;
        let ok = if c.n == c.k {
            c.classification == Classification::Regular
                && t.flag_transitive
                && c.flags == 8 * c.n * c.n
                && c.group_order_cellular == c.flags
        } else {
            c.classification == Classification::Noble
                && t.vertex_transitive
                && t.face_transitive
                && t.edge_orbits == 2
                && !t.flag_transitive
        };
        // independent flag count
        let q = build_torus_quadrangulation(c.n, c.k).unwrap();
        if !ok || flags(&q).len() != c.flags {
            bad.push((c.n, c.k));
        }
    }
    outcome(bad.is_empty(), format!("misclassified {bad:?}"))
}

/// Chord between angles `a` and `b` on the unit circle, from raw coordinates.
fn chord(a: f64, b: f64) -> f64 {
    ((a.cos() - b.cos()).powi(2) + (a.sin() - b.sin()).powi(2)).sqrt()
}

/// Interior angle of the regular `m`-gon at vertex 1 of the points 0, 1, 2,
/// by the law of cosines.
fn polygon_angle(m: usize) -> f64 {
    let t = |i: usize| TAU * i as f64 / m as f64;
    let (a, b, c) = (chord(t(0), t(1)), chord(t(1), t(2)), chord(t(0), t(2)));
    ((a * a + b * b - c * c) / (2.0 * a * b)).acos()
}

fn distinct(mut xs: Vec<f64>, tol: f64) -> Vec<f64> {
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);
    xs
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

fn ac8_metric(certs: &[Certificate]) -> Outcome {
    let tol = 1e-9;
    let mut bad = Vec::new();
    for c in certs {
        let (n, k) = (c.n, c.k);
        // brute force: every edge chord straight from the angle formula
        let mut lengths = Vec::new();
        for i in 0..n {
            for _j in 0..k {
                let a = TAU * i as f64 / n as f64;
                let b = TAU * ((i + 1) % n) as f64 / n as f64;
                lengths.push(chord(a, b));
            }
        }
        for _i in 0..n {
            for j in 0..k {
                let a = TAU * j as f64 / k as f64;
                let b = TAU * ((j + 1) % k) as f64 / k as f64;
                lengths.push(chord(a, b));
            }
        }
        let brute_lengths = distinct(lengths, tol);
        let brute_angles = distinct(vec![polygon_angle(n), polygon_angle(k)], tol);
        let closed_lengths = distinct(
            vec![2.0 * (PI / n as f64).sin(), 2.0 * (PI / k as f64).sin()],
            tol,
        );
        let closed_angles = distinct(vec![PI - TAU / n as f64, PI - TAU / k as f64], tol);
        let buckets = if n == k { 1 } else { 2 };
        let m = &c.metric;
        let ok = close(&m.edge_length_orbits, &brute_lengths, tol)
            && close(&m.edge_length_orbits, &closed_lengths, tol)
            && close(&m.dihedral_angle_classes, &brute_angles, tol)
            && close(&m.dihedral_angle_classes, &closed_angles, tol)
            && m.edge_length_orbits.len() == buckets
            && m.dihedral_angle_classes.len() == buckets
            && m.faces_planar_rectangles
            && m.face_congruence_classes == 1
            && m.vertex_figure_classes == 1;
        if !ok {
            bad.push((n, k));
        }
    }
    outcome(
        bad.is_empty(),
        format!("mismatching cells {bad:?} at tol 1e-9"),
    )
}

fn ac9_negative_control() -> Outcome {
    let mut bad = Vec::new();
    let mut smallest: f64 = f64::INFINITY;
    for (n, k) in [(3, 5), (4, 4), (6, 6), (8, 7)] {
        let r = duoprism_vertices(n, k).unwrap();
        for (v, axis) in [(0, 0), (n * k / 2, 3)] {
            let mut delta = Point4::zeros();
            delta[axis] = 1e-3;
            let tampered = r.perturbed(v, delta).unwrap();
            let c = verify_realization(&tampered, VerifyConfig::default()).unwrap();
            smallest = smallest.min(c.max_fit_residual);
            if c.pass || c.max_fit_residual <= 1e-6 {
                bad.push((n, k, v));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("smallest max fit residual after tampering {smallest:.2e} (must exceed 1e-6); not detected {bad:?}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let certs = sweep(GRID, VerifyConfig::default()).expect("sweep runs");
    let sweep_time = start.elapsed();

    let results: Vec<(&str, Outcome)> = vec![
        ("AC1 product graph automorphism orders", ac1_graph_orders()),
        ("AC2 quadrangulation automorphism orders", ac2_quad_orders()),
        (
            "AC3 structured generators equal searched group",
            ac3_structured_vs_search(),
        ),
        (
            "AC4 isometry witnesses and sufficient conditions",
            ac4_witnesses(&certs, sweep_time),
        ),
        ("AC5 Clifford torus inscription", ac5_clifford()),
        ("AC6 Q44 copies in the 4-cube", ac6_hypercube()),
        (
            "AC7 noble/regular classification",
            ac7_classification(&certs),
        ),
        ("AC8 metric regularity", ac8_metric(&certs)),
        ("AC9 tampered coordinates rejected", ac9_negative_control()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", o.detail);
        failed += usize::from(!o.ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

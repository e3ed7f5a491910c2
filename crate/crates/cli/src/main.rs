use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quadtorus_core::autgroup::{
    cellular_subgroup, graph_automorphisms_capped, transitivity_report,
};
use quadtorus_core::complex::{
    build_duoprism_boundary, build_torus_quadrangulation, ComplexDocument,
};
use quadtorus_core::geometry::{
    clifford_residual, duoprism_vertices, metric_report, realization_document, to_off, to_text,
    Realization,
};
use quadtorus_core::verify::{
    hypercube_embedding_report, sweep, sweep_table, verify_realization, VerifyConfig,
};
use quadtorus_core::{DEFAULT_TOLERANCE, DEFAULT_VERTEX_CAP};

#[derive(Parser)]
#[command(
    name = "quadtorus",
    version,
    about = "Torus quadrangulations C_n x C_k, their duoprism realizations in R^4, and symmetry certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build Q_{n,k} and the duoprism boundary complex; print V, E, F.
    Build {
        #[command(flatten)]
        dims: Dims,
        /// Directory receiving quad_<n>_<k>.json and duoprism_<n>_<k>.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute Aut(C_n x C_k) and Aut(Q_{n,k}) by search.
    Aut {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Include every group element in the JSON output.
        #[arg(long)]
        elements: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report Clifford-torus inscription and metric regularity of the duoprism realization.
    Realize {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that every automorphism of Q_{n,k} extends to an isometry.
    Verify {
        #[arg(long, value_parser = cycle_length, required_unless_present = "sweep")]
        n: Option<usize>,
        #[arg(long, value_parser = cycle_length, required_unless_present = "sweep")]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Realization JSON (complex document with "coords") to certify
        /// instead of the duoprism coordinates.
        #[arg(long)]
        coords: Option<PathBuf>,
        /// Certify every (n, k) with n, k in the inclusive range A..B.
        #[arg(long, value_parser = parse_range, conflicts_with_all = ["n", "k", "coords"])]
        sweep: Option<RangeInclusive<usize>>,
        /// Certificate JSON path; the text summary goes next to it with a .txt extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count copies of Q_{4,4} in the 2-skeleton of the 4-cube.
    CountHypercube {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write Q_{n,k} with its duoprism coordinates as JSON, 4OFF or text.
    Export {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Dims {
    #[arg(long, value_parser = cycle_length)]
    n: usize,
    #[arg(long, value_parser = cycle_length)]
    k: usize,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Off,
    Text,
}

/// Resolved settings shared by the subcommands.
struct RunConfig {
    n: usize,
    k: usize,
    tolerance: f64,
    vertex_cap: usize,
    out: Option<PathBuf>,
    format: Format,
}

impl RunConfig {
    fn new(dims: Dims) -> Self {
        RunConfig {
            n: dims.n,
            k: dims.k,
            tolerance: DEFAULT_TOLERANCE,
            vertex_cap: DEFAULT_VERTEX_CAP,
            out: None,
            format: Format::Json,
        }
    }

    fn verify_config(&self) -> Result<VerifyConfig> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            bail!("tolerance must be positive, got {}", self.tolerance);
        }
        Ok(VerifyConfig {
            tolerance: self.tolerance,
            vertex_cap: self.vertex_cap,
        })
    }
}

fn cycle_length(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 3 {
        return Err(format!("cycle length must be at least 3, got {v}"));
    }
    Ok(v)
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let lo = cycle_length(a.trim())?;
    let hi = cycle_length(b.trim_start_matches('=').trim())?;
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn cmd_build(cfg: &RunConfig) -> Result<bool> {
    let q = build_torus_quadrangulation(cfg.n, cfg.k)?;
    let b = build_duoprism_boundary(cfg.n, cfg.k)?;
    println!("V={} E={} F={}", q.n_vertices(), q.n_edges(), q.n_faces());
    println!(
        "duoprism boundary: 2-faces={} 3-cells={}",
        b.n_faces(),
        b.cells3().map_or(0, <[_]>::len)
    );
    if let Some(dir) = &cfg.out {
        let (n, k) = (cfg.n, cfg.k);
        write_file(
            &dir.join(format!("quad_{n}_{k}.json")),
            &json(&q.to_document())?,
        )?;
        write_file(
            &dir.join(format!("duoprism_{n}_{k}.json")),
            &json(&b.to_document())?,
        )?;
    }
    Ok(q.is_closed_surface() && q.euler_characteristic() == 0 && b.faces_on_two_cells())
}

fn cmd_aut(cfg: &RunConfig, with_elements: bool) -> Result<bool> {
    let q = build_torus_quadrangulation(cfg.n, cfg.k)?;
    let graph_group = graph_automorphisms_capped(q.graph(), cfg.vertex_cap)?;
    let cellular = cellular_subgroup(&graph_group, &q)?;
    let report = transitivity_report(&cellular, &q)?;
    println!("|Aut(C_{} x C_{})| = {}", cfg.n, cfg.k, graph_group.order());
    println!("|Aut(Q_{{{},{}}})| = {}", cfg.n, cfg.k, cellular.order());
    println!(
        "vertex stabilizer order = {}",
        cellular.stabilizer(0).order()
    );
    println!(
        "orbits: vertices={} edges={} faces={} flags={}",
        report.vertex_orbits, report.edge_orbits, report.face_orbits, report.flag_orbits
    );
    if let Some(path) = &cfg.out {
        let doc = serde_json::json!({
            "n": cfg.n,
            "k": cfg.k,
            "graph": graph_group.to_document(with_elements),
            "cellular": cellular.to_document(with_elements),
            "transitivity": report,
        });
        write_file(path, &json(&doc)?)?;
    }
    Ok(true)
}

fn export_string(cfg: &RunConfig, r: &Realization) -> Result<String> {
    let q = build_torus_quadrangulation(cfg.n, cfg.k)?;
    Ok(match cfg.format {
        Format::Json => json(&realization_document(&q, r))?,
        Format::Off => to_off(&q, r),
        Format::Text => to_text(&q, r),
    })
}

fn cmd_realize(cfg: &RunConfig) -> Result<bool> {
    let r = duoprism_vertices(cfg.n, cfg.k)?;
    let q = build_torus_quadrangulation(cfg.n, cfg.k)?;
    let clifford = clifford_residual(&r);
    let m = metric_report(&r, &q, cfg.tolerance)?;
    println!("clifford residual {clifford:.3e}");
    println!("centroid norm {:.3e}", r.centroid().norm());
    let list = |xs: &[f64]| {
        xs.iter()
            .map(|x| format!("{x:.12}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("edge lengths [{}]", list(&m.edge_length_orbits));
    println!("dihedral angles [{}]", list(&m.dihedral_angle_classes));
    println!(
        "face classes {}, vertex figure classes {}, planar rectangles {}",
        m.face_congruence_classes, m.vertex_figure_classes, m.faces_planar_rectangles
    );
    if let Some(path) = &cfg.out {
        write_file(path, &export_string(cfg, &r)?)?;
    }
    Ok(clifford < cfg.tolerance && m.faces_planar_rectangles)
}

fn cmd_export(cfg: &RunConfig) -> Result<bool> {
    let r = duoprism_vertices(cfg.n, cfg.k)?;
    let text = export_string(cfg, &r)?;
    match &cfg.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn cmd_verify(cfg: &RunConfig, coords: Option<&Path>) -> Result<bool> {
    let r = match coords {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let doc: ComplexDocument = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let r = Realization::from_document(&doc)?;
            if (r.n(), r.k()) != (cfg.n, cfg.k) {
                bail!(
                    "coordinates are for n={}, k={} but --n {} --k {} was given",
                    r.n(),
                    r.k(),
                    cfg.n,
                    cfg.k
                );
            }
            r
        }
        None => duoprism_vertices(cfg.n, cfg.k)?,
    };
    let cert = verify_realization(&r, cfg.verify_config()?)
        .with_context(|| format!("certifying Q_{{{},{}}}", cfg.n, cfg.k))?;
    let summary = cert.summary();
    print!("{summary}");
    if let Some(path) = &cfg.out {
        write_file(path, &json(&cert)?)?;
        write_file(&path.with_extension("txt"), &summary)?;
    }
    Ok(cert.pass)
}

fn cmd_sweep(range: RangeInclusive<usize>, cfg: &RunConfig) -> Result<bool> {
    let certs = sweep(range, cfg.verify_config()?)?;
    let table = sweep_table(&certs);
    print!("{table}");
    if let Some(path) = &cfg.out {
        write_file(path, &json(&certs)?)?;
        write_file(&path.with_extension("txt"), &table)?;
    }
    Ok(certs.iter().all(|c| c.pass))
}

fn cmd_count_hypercube(out: Option<&Path>) -> Result<bool> {
    let report = hypercube_embedding_report()?;
    let ratio = report
        .ratio
        .map_or_else(|| "non-integer".to_string(), |r| r.to_string());
    println!("copies={} ratio={}", report.copies, ratio);
    println!(
        "naive scan copies={}, each isomorphic to Q_{{4,4}}: {}, orbits under the 4-cube group: {}",
        report.naive_copies, report.copies_isomorphic_to_q44, report.copy_orbits
    );
    println!(
        "|Aut(C_4 x C_4)| = {}, |Aut(Q_{{4,4}})| = {}",
        report.graph_order, report.cellular_order
    );
    if let Some(path) = out {
        write_file(path, &json(&report)?)?;
    }
    Ok(report.pass())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { dims, out } => cmd_build(&RunConfig {
            out,
            ..RunConfig::new(dims)
        }),
        Command::Aut {
            dims,
            cap,
            elements,
            out,
        } => cmd_aut(
            &RunConfig {
                vertex_cap: cap,
                out,
                ..RunConfig::new(dims)
            },
            elements,
        ),
        Command::Realize {
            dims,
            tol,
            format,
            out,
        } => cmd_realize(&RunConfig {
            tolerance: tol,
            format,
            out,
            ..RunConfig::new(dims)
        }),
        Command::Export { dims, format, out } => cmd_export(&RunConfig {
            format,
            out,
            ..RunConfig::new(dims)
        }),
        Command::Verify {
            n,
            k,
            tol,
            cap,
            coords,
            sweep,
            out,
        } => {
            let cfg = RunConfig {
                n: n.unwrap_or(0),
                k: k.unwrap_or(0),
                tolerance: tol,
                vertex_cap: cap,
                out,
                format: Format::Json,
            };
            match sweep {
                Some(range) => cmd_sweep(range, &cfg),
                None => cmd_verify(&cfg, coords.as_deref()),
            }
        }
        Command::CountHypercube { out } => cmd_count_hypercube(out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

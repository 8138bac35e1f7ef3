//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on structured domain failures (unstable
//! tower, map too expansive, saturated entropy grid), 2 on input or usage
//! errors. Failure payloads are machine-readable JSON on standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use scaled_homology::entropy::EntropyError;
use scaled_homology::homology::homology;
use scaled_homology::metric::{FiniteMetricSpace, MetricKind};
use scaled_homology::scalar::{f64_ln, q_display, q_parse, Q};
use scaled_homology::selfmap::{induced_on_homology, MapError, SampledSelfMap};
use scaled_homology::spectral::{char_poly, gershgorin_bound, spectral_radius};
use scaled_homology::tower::LcBetti;
use scaled_homology::ScaleComplex;

use scaled_homology_cli::builtins::{builtin_system, BuiltinSystem};
use scaled_homology_cli::config::{parse_horizons, parse_scale_list, ExperimentConfig};
use scaled_homology_cli::harness::{
    axiom_suite, build_tower_par, estimate_entropy_par, verify_entropy_bound, HarnessError,
};
use scaled_homology_cli::io;
use scaled_homology_cli::report::{self, ReportMeta};

#[derive(Parser)]
#[command(
    name = "scaled-homology",
    version,
    about = "Scale-indexed homology, scale towers, induced maps and entropy estimates for finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-scale homology ranks and representative cycles.
    Betti(BettiArgs),
    /// Scale tower: rank sequences, connecting ranks, stability windows.
    Tower(TowerArgs),
    /// Induced matrix on stable homology and its spectral radius.
    Map(MapArgs),
    /// Greedy spanning/separated count grid and entropy estimate.
    Entropy(EntropyArgs),
    /// Entropy-bound verdict: h_est against log spectral radius.
    Verify(VerifyArgs),
    /// Randomized axiom suite over seeded random spaces.
    Axioms(AxiomsArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Point-cloud CSV (one point per row, decimal coordinates).
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,
    /// Distance-matrix JSON ({"labels": [...], "dist": [[...]]}).
    #[arg(long, value_name = "FILE")]
    dist: Option<PathBuf>,
    /// Built-in system: circle_doubling, circle_rotation, cat_map,
    /// interval_2_12, set_B_2_14, punctured_circle.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
    /// Metric for --points: euclidean, flat-circle, flat-torus.
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// Skip the first CSV row.
    #[arg(long)]
    skip_header: bool,
    /// Builtin parameter: sample count (points, or per side for cat_map).
    #[arg(long)]
    n: Option<u32>,
    /// Builtin parameter: rotation step.
    #[arg(long)]
    step: Option<u32>,
    /// Builtin parameter: dyadic depth for interval_2_12.
    #[arg(long)]
    k: Option<u32>,
    /// Builtin parameter: largest group for set_B_2_14.
    #[arg(long)]
    nmax: Option<u32>,
    /// Builtin parameter: removed sample index for punctured_circle.
    #[arg(long)]
    gap: Option<u32>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Output format: json (canonical) or csv (ranks/counts only).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct BettiArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Single scale.
    #[arg(long)]
    scale: Option<String>,
    /// Scale list (comma list or start:ratio:count).
    #[arg(long)]
    scales: Option<String>,
    #[arg(long, default_value_t = 2)]
    maxdim: usize,
    /// Reduced homology in dimension 0.
    #[arg(long)]
    reduced: bool,
    /// Also write the ingested space as distance-matrix JSON.
    #[arg(long, value_name = "FILE")]
    dump_space: Option<PathBuf>,
    /// Also write the per-scale complexes (every simplex by vertex indices).
    #[arg(long, value_name = "FILE")]
    dump_complex: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TowerArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Scale list (comma list or start:ratio:count).
    #[arg(long)]
    scales: Option<String>,
    #[arg(long, default_value_t = 2)]
    maxdim: usize,
    /// Minimum isomorphism window for stability.
    #[arg(long, default_value_t = 3)]
    min_window: usize,
    /// Query the inverse-limit rank in this dimension; unstable towers make
    /// the command fail with a structured payload.
    #[arg(long)]
    lc_dim: Option<usize>,
    /// Append a below-minimum-distance scale so the finite inverse limit is
    /// exact (it is the discrete one for any finite space).
    #[arg(long)]
    exact_limit: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Map spec JSON; unnecessary when --builtin provides the map.
    #[arg(long, value_name = "FILE")]
    map: Option<PathBuf>,
    /// Scale list for the tower.
    #[arg(long)]
    scales: Option<String>,
    #[arg(long, default_value_t = 2)]
    maxdim: usize,
    /// Homology dimension for the induced matrix.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    min_window: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    map: Option<PathBuf>,
    /// Scale grid for the counts (comma list or start:ratio:count).
    #[arg(long)]
    eps_grid: Option<String>,
    /// Orbit horizons, comma list.
    #[arg(long)]
    n_grid: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    map: Option<PathBuf>,
    /// Experiment-config JSON; inline flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long)]
    scales: Option<String>,
    #[arg(long)]
    eps_grid: Option<String>,
    #[arg(long)]
    n_grid: Option<String>,
    #[arg(long)]
    maxdim: Option<usize>,
    #[arg(long)]
    min_window: Option<usize>,
    /// Allowed slack in the bound margin, in nats.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AxiomsArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[command(flatten)]
    output: OutputArgs,
}

/// A failure with its exit code and JSON payload.
struct Failure {
    code: u8,
    payload: report::ErrorPayload,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            payload: report::ErrorPayload {
                error: "input".into(),
                message: message.into(),
                details: None,
            },
        }
    }

    fn domain(
        kind: &str,
        message: impl Into<String>,
        details: Option<serde_json::Value>,
    ) -> Failure {
        Failure {
            code: 1,
            payload: report::ErrorPayload {
                error: kind.into(),
                message: message.into(),
                details,
            },
        }
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let kind = match &e {
            HarnessError::Map(MapError::UnstableTower { .. }) => "unstable_tower",
            HarnessError::Map(MapError::TooExpansive) => "map_too_expansive",
            HarnessError::Entropy(EntropyError::AllSaturated) => "entropy_saturated",
            HarnessError::Entropy(_) => "entropy",
            HarnessError::Tower(_) => "tower",
            HarnessError::Map(_) => "map",
        };
        let details = match &e {
            HarnessError::Map(MapError::UnstableTower { rank_sequence }) => {
                Some(serde_json::json!({ "rank_sequence": rank_sequence }))
            }
            _ => None,
        };
        Failure::domain(kind, e.to_string(), details)
    }
}

/// Resolved input: the space, an optional map, defaults when builtin, and
/// the input digest.
struct ResolvedInput {
    space: Arc<FiniteMetricSpace>,
    map: Option<SampledSelfMap>,
    config: Option<ExperimentConfig>,
    digest: String,
    descriptor: serde_json::Value,
}

fn parse_metric(name: &str) -> Result<MetricKind, Failure> {
    match name {
        "euclidean" => Ok(MetricKind::Euclidean),
        "flat-circle" => Ok(MetricKind::FlatCircle),
        "flat-torus" => Ok(MetricKind::FlatTorus),
        other => Err(Failure::input(format!("unknown metric `{other}`"))),
    }
}

fn resolve_input(input: &InputArgs) -> Result<ResolvedInput, Failure> {
    let selected = [
        input.points.is_some(),
        input.dist.is_some(),
        input.builtin.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if selected != 1 {
        return Err(Failure::input(
            "choose exactly one of --points, --dist, --builtin",
        ));
    }
    if let Some(path) = &input.points {
        let metric = parse_metric(&input.metric)?;
        let points = io::read_points_csv(path, input.skip_header)?;
        let space = io::space_from_points(&points, metric).map_err(Failure::input)?;
        return Ok(ResolvedInput {
            space: Arc::new(space),
            map: None,
            config: None,
            digest: io::file_digest(path)?,
            descriptor: serde_json::json!({
                "points": path.display().to_string(),
                "metric": input.metric,
                "skip_header": input.skip_header,
            }),
        });
    }
    if let Some(path) = &input.dist {
        let space = io::read_dist_json(path)?;
        return Ok(ResolvedInput {
            space: Arc::new(space),
            map: None,
            config: None,
            digest: io::file_digest(path)?,
            descriptor: serde_json::json!({ "dist": path.display().to_string() }),
        });
    }
    let name = input.builtin.as_deref().expect("checked above");
    let BuiltinSystem {
        space,
        map,
        config,
        descriptor,
        name,
    } = builtin_system(name, input.n, input.step, input.k, input.nmax, input.gap)
        .map_err(|e| Failure::input(e.to_string()))?;
    Ok(ResolvedInput {
        space,
        map: Some(map),
        config: Some(config),
        digest: io::descriptor_digest(&descriptor),
        descriptor: serde_json::json!({ "builtin": name, "descriptor": descriptor }),
    })
}

/// Map resolution for subcommands that need one.
fn resolve_map(
    resolved: &ResolvedInput,
    map_path: Option<&Path>,
) -> Result<(SampledSelfMap, String), Failure> {
    if let Some(path) = map_path {
        let spec = io::read_map_json(path)?;
        let digest = io::file_digest(path)?;
        let map = match spec {
            io::MapSpecFile::Table { image } => io::table_map(resolved.space.clone(), image)?,
            io::MapSpecFile::Builtin { name, params } => {
                let system = builtin_system(
                    &name,
                    params.n,
                    params.step,
                    params.k,
                    params.n_max,
                    params.gap_index,
                )
                .map_err(|e| Failure::input(e.to_string()))?;
                if system.space.len() != resolved.space.len() {
                    return Err(Failure::input(
                        "builtin map size does not match the input space",
                    ));
                }
                SampledSelfMap::new(resolved.space.clone(), system.map.image().to_vec())
                    .map_err(|e| Failure::input(e.to_string()))?
            }
        };
        return Ok((map, digest));
    }
    match &resolved.map {
        Some(map) => Ok((map.clone(), resolved.digest.clone())),
        None => Err(Failure::input(
            "this subcommand needs --map or a --builtin system",
        )),
    }
}

fn combined_digest(parts: &[&str]) -> String {
    io::descriptor_digest(&parts.join("+"))
}

fn parse_scales_arg(text: Option<&String>, fallback: Option<&[Q]>) -> Result<Vec<Q>, Failure> {
    match text {
        Some(t) => parse_scale_list(t).map_err(Failure::input),
        None => fallback
            .map(|s| s.to_vec())
            .ok_or_else(|| Failure::input("--scales is required without a builtin default")),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: serde::Serialize>(
    output: &OutputArgs,
    report_value: &T,
    csv: Option<String>,
) -> Result<(), Failure> {
    match output.format.as_str() {
        "json" => write_output(output.out.as_deref(), &report::to_json_string(report_value)),
        "csv" => {
            let text = csv.ok_or_else(|| {
                Failure::input("this subcommand has no CSV projection; use --format json")
            })?;
            write_output(output.out.as_deref(), &text)
        }
        other => Err(Failure::input(format!("unknown format `{other}`"))),
    }
}

fn run_betti(args: &BettiArgs) -> Result<(), Failure> {
    let resolved = resolve_input(&args.input)?;
    let scales: Vec<Q> = match (&args.scale, &args.scales) {
        (Some(s), None) => {
            vec![q_parse(s).ok_or_else(|| Failure::input(format!("bad scale `{s}`")))?]
        }
        (None, Some(list)) => parse_scale_list(list).map_err(Failure::input)?,
        (None, None) => {
            return Err(Failure::input("betti needs --scale or --scales"));
        }
        (Some(_), Some(_)) => {
            return Err(Failure::input("give either --scale or --scales, not both"));
        }
    };
    if let Some(path) = &args.dump_space {
        let file = io::dist_matrix_file(&resolved.space);
        write_output(Some(path), &report::to_json_string(&file))?;
    }
    let config = serde_json::json!({
        "input": resolved.descriptor,
        "scales": scales.iter().map(q_display).collect::<Vec<_>>(),
        "max_dim": args.maxdim,
        "reduced": args.reduced,
    });
    let mut per_scale = Vec::with_capacity(scales.len());
    let mut dumps = Vec::new();
    for scale in &scales {
        let complex = ScaleComplex::build(&resolved.space, scale, args.maxdim)
            .map_err(|e| Failure::domain("complex", e.to_string(), None))?;
        let groups = (0..=args.maxdim)
            .map(|n| {
                homology(&complex, n, args.reduced)
                    .map(|g| report::homology_group_repr(&g, &complex))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::domain("homology", e.to_string(), None))?;
        if args.dump_complex.is_some() {
            dumps.push(report::complex_dump(&complex));
        }
        per_scale.push(report::BettiScaleRepr {
            scale: report::scalar_repr(scale),
            simplex_counts: complex.sizes(),
            groups,
        });
    }
    if let Some(path) = &args.dump_complex {
        write_output(Some(path), &report::to_json_string(&dumps))?;
    }
    let betti = report::BettiReport {
        meta: ReportMeta::new(resolved.digest.clone(), config),
        max_dim: args.maxdim,
        reduced: args.reduced,
        scales: per_scale,
    };
    let csv = report::betti_csv(&betti);
    emit(&args.output, &betti, Some(csv))
}

fn run_tower(args: &TowerArgs) -> Result<(), Failure> {
    let resolved = resolve_input(&args.input)?;
    let scales = parse_scales_arg(
        args.scales.as_ref(),
        resolved.config.as_ref().map(|c| c.scales.as_slice()),
    )?;
    let config = serde_json::json!({
        "input": resolved.descriptor,
        "scales": scales.iter().map(q_display).collect::<Vec<_>>(),
        "max_dim": args.maxdim,
        "min_window": args.min_window,
        "lc_dim": args.lc_dim,
        "exact_limit": args.exact_limit,
    });
    let mut tower = build_tower_par(resolved.space.clone(), &scales, args.maxdim)
        .map_err(|e| Failure::domain("tower", e.to_string(), None))?;
    if args.exact_limit {
        tower = tower
            .extended_to_discrete()
            .map_err(|e| Failure::domain("tower", e.to_string(), None))?;
    }
    let meta = ReportMeta::new(resolved.digest.clone(), config);
    let report_value = report::tower_report(meta, &tower, args.min_window);
    if let Some(dim) = args.lc_dim {
        if dim >= args.maxdim {
            return Err(Failure::input(format!(
                "--lc-dim {dim} needs --maxdim above it (ranks in the top dimension are truncated)"
            )));
        }
        if let LcBetti::Unstable { rank_sequence } = tower.lc_betti(dim, args.min_window) {
            return Err(Failure::domain(
                "unstable",
                format!("tower is not stable in dimension {dim}"),
                Some(serde_json::json!({
                    "dimension": dim,
                    "rank_sequence": rank_sequence,
                })),
            ));
        }
    }
    let csv = report::tower_csv(&report_value);
    emit(&args.output, &report_value, Some(csv))
}

fn run_map(args: &MapArgs) -> Result<(), Failure> {
    let resolved = resolve_input(&args.input)?;
    let (map, map_digest) = resolve_map(&resolved, args.map.as_deref())?;
    let scales = parse_scales_arg(
        args.scales.as_ref(),
        resolved.config.as_ref().map(|c| c.scales.as_slice()),
    )?;
    let digest = combined_digest(&[&resolved.digest, &map_digest]);
    let config = serde_json::json!({
        "input": resolved.descriptor,
        "scales": scales.iter().map(q_display).collect::<Vec<_>>(),
        "max_dim": args.maxdim,
        "dimension": args.dim,
        "min_window": args.min_window,
    });
    let tower = build_tower_par(resolved.space.clone(), &scales, args.maxdim)
        .map_err(|e| Failure::domain("tower", e.to_string(), None))?;
    let induced = induced_on_homology(&map, &tower, args.dim, args.min_window)
        .map_err(|e| Failure::from(HarnessError::Map(e)))?;
    let rho = spectral_radius(&induced.matrix);
    let poly = (induced.matrix.rows() > 0 && induced.matrix.rows() <= 4)
        .then(|| report::char_poly_repr(&char_poly(&induced.matrix)));
    let report_value = report::InducedMapReport {
        meta: ReportMeta::new(digest, config),
        dimension: induced.dimension,
        source_scale: report::scalar_repr(&induced.source_scale),
        target_scale: report::scalar_repr(&induced.target_scale),
        matrix: report::matrix_repr(&induced.matrix),
        char_poly: poly,
        spectral_radius: rho,
        log_spectral_radius: if rho == 1.0 { 0.0 } else { f64_ln(rho) },
        gershgorin_bound: scaled_homology::scalar::q_to_f64(&gershgorin_bound(&induced.matrix)),
    };
    emit(&args.output, &report_value, None)
}

fn run_entropy(args: &EntropyArgs) -> Result<(), Failure> {
    let resolved = resolve_input(&args.input)?;
    let (map, map_digest) = resolve_map(&resolved, args.map.as_deref())?;
    let eps_grid: Vec<Q> = match &args.eps_grid {
        Some(t) => parse_scale_list(t).map_err(Failure::input)?,
        None => resolved
            .config
            .as_ref()
            .map(|c| c.eps_grid.clone())
            .ok_or_else(|| Failure::input("--eps-grid is required without a builtin default"))?,
    };
    let n_grid: Vec<usize> = match &args.n_grid {
        Some(t) => parse_horizons(t).map_err(Failure::input)?,
        None => resolved
            .config
            .as_ref()
            .map(|c| c.n_grid.clone())
            .ok_or_else(|| Failure::input("--n-grid is required without a builtin default"))?,
    };
    let digest = combined_digest(&[&resolved.digest, &map_digest]);
    let config = serde_json::json!({
        "input": resolved.descriptor,
        "eps_grid": eps_grid.iter().map(q_display).collect::<Vec<_>>(),
        "n_grid": n_grid,
    });
    let estimate = estimate_entropy_par(&map, &eps_grid, &n_grid)
        .map_err(|e| Failure::from(HarnessError::Entropy(e)))?;
    let meta = ReportMeta::new(digest, config);
    let report_value = report::entropy_report(meta, &estimate);
    let csv = report::entropy_csv(&report_value);
    emit(&args.output, &report_value, Some(csv))
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let resolved = resolve_input(&args.input)?;
    let (map, map_digest) = resolve_map(&resolved, args.map.as_deref())?;
    let base = match &args.config {
        Some(path) => {
            Some(scaled_homology_cli::config::config_from_file(path).map_err(Failure::input)?)
        }
        None => resolved.config.clone(),
    };
    let scales = match (&args.scales, &base) {
        (Some(t), _) => parse_scale_list(t).map_err(Failure::input)?,
        (None, Some(c)) => c.scales.clone(),
        (None, None) => return Err(Failure::input("--scales is required without a builtin")),
    };
    let eps_grid = match (&args.eps_grid, &base) {
        (Some(t), _) => parse_scale_list(t).map_err(Failure::input)?,
        (None, Some(c)) => c.eps_grid.clone(),
        (None, None) => return Err(Failure::input("--eps-grid is required without a builtin")),
    };
    let n_grid = match (&args.n_grid, &base) {
        (Some(t), _) => parse_horizons(t).map_err(Failure::input)?,
        (None, Some(c)) => c.n_grid.clone(),
        (None, None) => return Err(Failure::input("--n-grid is required without a builtin")),
    };
    let config = ExperimentConfig {
        scales,
        max_dim: args
            .maxdim
            .or(base.as_ref().map(|c| c.max_dim))
            .unwrap_or(2),
        min_window: args
            .min_window
            .or(base.as_ref().map(|c| c.min_window))
            .unwrap_or(3),
        eps_grid,
        n_grid,
        tolerance: args
            .tolerance
            .or(base.as_ref().map(|c| c.tolerance))
            .unwrap_or(0.1),
    };
    let digest = combined_digest(&[&resolved.digest, &map_digest]);
    let meta = ReportMeta::new(
        digest,
        serde_json::json!({
            "input": resolved.descriptor,
            "resolved": report::config_json(&config),
        }),
    );
    let verdict = verify_entropy_bound(resolved.space.clone(), &map, &config)?;
    let poly = (verdict.induced.matrix.rows() > 0 && verdict.induced.matrix.rows() <= 4)
        .then(|| report::char_poly_repr(&char_poly(&verdict.induced.matrix)));
    let report_value = report::VerdictReport {
        meta,
        h_est: verdict.h_est,
        log_rho: verdict.log_rho,
        margin: verdict.margin,
        tolerance: verdict.tolerance,
        pass: verdict.pass,
        provenance: report::VerdictProvenance {
            induced_source_scale: report::scalar_repr(&verdict.induced.source_scale),
            induced_target_scale: report::scalar_repr(&verdict.induced.target_scale),
            induced_matrix: report::matrix_repr(&verdict.induced.matrix),
            char_poly: poly,
            fit_windows: verdict
                .entropy
                .slopes
                .iter()
                .map(|s| report::SlopeRepr {
                    eps: report::scalar_repr(&s.eps),
                    slope: s.slope,
                    window: s.window.clone(),
                })
                .collect(),
            saturated_cells: verdict.entropy.grid.iter().filter(|c| c.saturated).count(),
        },
    };
    let csv = report::verdict_csv(&report_value);
    emit(&args.output, &report_value, Some(csv))
}

fn run_axioms(args: &AxiomsArgs) -> Result<(), Failure> {
    if args.trials == 0 {
        return Err(Failure::input("--trials must be at least 1"));
    }
    let suite = axiom_suite(args.seed, args.trials);
    let config = serde_json::json!({ "seed": args.seed, "trials": args.trials });
    let digest =
        io::descriptor_digest(&format!("axioms:seed={},trials={}", args.seed, args.trials));
    let report_value = report::AxiomsReport {
        meta: ReportMeta::new(digest, config),
        seed: suite.seed,
        trials: suite.trials,
        small_diameter: report::AxiomCheckRepr {
            passes: suite.small_diameter.passes,
            failures: suite.small_diameter.failures,
        },
        additivity: report::AxiomCheckRepr {
            passes: suite.additivity.passes,
            failures: suite.additivity.failures,
        },
        excision: report::AxiomCheckRepr {
            passes: suite.excision.passes,
            failures: suite.excision.failures,
        },
        long_exact: report::AxiomCheckRepr {
            passes: suite.long_exact.passes,
            failures: suite.long_exact.failures,
        },
        counterexamples: suite.counterexamples,
    };
    emit(&args.output, &report_value, None)
}

fn configure_threads() {
    if let Ok(text) = std::env::var("SCALED_HOMOLOGY_THREADS") {
        if let Ok(threads) = text.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Betti(args) => run_betti(args),
        Command::Tower(args) => run_tower(args),
        Command::Map(args) => run_map(args),
        Command::Entropy(args) => run_entropy(args),
        Command::Verify(args) => run_verify(args),
        Command::Axioms(args) => run_axioms(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!(
                "{}",
                serde_json::to_string(&failure.payload).expect("payload")
            );
            ExitCode::from(failure.code)
        }
    }
}

//! `boxcover`: towers, walls, embeddings, extension checks and envelopes.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use boxcover_core::builtins;
use boxcover_core::cover::{agreement_radius, build_tower, homology_cover_with_cap, DEFAULT_SIZE_CAP};
use boxcover_core::embedding::{classical_embedding, negative_type_check, CoverBox, DEFAULT_TOL_NORM, DEFAULT_TOL_PSD};
use boxcover_core::extension::{build_phi_gamma, verify_conditions, ExtensionSpace, KernelSource, PhiOptions};
use boxcover_core::io as files;
use boxcover_core::semidirect::builtin_extension;
use boxcover_core::{distortion_envelope, Error, ErrorKind, LabeledMultigraph, MetricMatrix};

#[derive(Parser)]
#[command(name = "boxcover", version, about = "Box spaces from homology-cover towers and their embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Iterated homology covers of a seed graph.
    Tower(TowerArgs),
    /// Wall table of one cover and its agreement with the graph metric.
    Walls(WallsArgs),
    /// Wall embedding of a cover box space, or classical scaling of a metric.
    Embed(EmbedArgs),
    /// Build the unit-vector map on an extension tower and check it.
    ExtVerify(ExtArgs),
    /// Distortion envelope between two metrics on the same points.
    Envelope(EnvelopeArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Args)]
struct SeedArgs {
    /// Built-in seed graph.
    #[arg(long, conflicts_with = "graph", value_parser = clap::builder::PossibleValuesParser::new(builtins::SEED_NAMES))]
    seed: Option<String>,
    /// Seed graph JSON file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Vertex cap for a single cover.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP, value_parser = positive_usize)]
    cap: usize,
}

#[derive(Args)]
struct TowerArgs {
    #[command(flatten)]
    seed: SeedArgs,
    /// Number of graphs in the tower, seed included.
    #[arg(long, default_value_t = 4, value_parser = positive_usize)]
    levels: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for per-level graphs and reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WallsArgs {
    #[command(flatten)]
    seed: SeedArgs,
    /// Which cover of the tower (1 is the cover of the seed).
    #[arg(long, default_value_t = 1, value_parser = positive_usize)]
    level: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long, conflicts_with_all = ["graph", "metric", "fixture"], value_parser = clap::builder::PossibleValuesParser::new(builtins::SEED_NAMES))]
    seed: Option<String>,
    #[arg(long, conflicts_with_all = ["metric", "fixture"])]
    graph: Option<PathBuf>,
    /// Metric CSV to test for negative type.
    #[arg(long, conflicts_with = "fixture")]
    metric: Option<PathBuf>,
    /// Built-in metric fixture.
    #[arg(long, value_parser = ["k23"])]
    fixture: Option<String>,
    /// Graphs in the tower, seed included; the covers form the box space.
    #[arg(long, default_value_t = 3, value_parser = positive_usize)]
    levels: usize,
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP, value_parser = positive_usize)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_TOL_PSD, value_parser = positive_f64)]
    tol_psd: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Walls,
    Induced,
}

#[derive(Args)]
struct ExtArgs {
    /// Built-in extension tower.
    #[arg(long, default_value = "semidirect-swap", value_parser = clap::builder::PossibleValuesParser::new(boxcover_core::semidirect::EXTENSION_NAMES))]
    tower: String,
    #[arg(long = "R", default_value_t = 2.0, value_parser = nonnegative_f64)]
    r: f64,
    #[arg(long, default_value_t = 0.5, value_parser = positive_f64)]
    eps: f64,
    #[arg(long, default_value_t = 0.25, value_parser = positive_f64)]
    delta: f64,
    /// Run every combination of R ∈ {1,2,4}, eps ∈ {0.5,0.25}, delta ∈ {0.5,0.25}.
    #[arg(long)]
    grid: bool,
    /// Kernel scale override.
    #[arg(long, value_parser = positive_f64)]
    t: Option<f64>,
    /// Gap between consecutive components (repeat for each gap).
    #[arg(long = "gap", value_parser = positive_f64)]
    gaps: Vec<f64>,
    /// Force at least this many cut-off components.
    #[arg(long, default_value_t = 0)]
    min_cutoff: usize,
    #[arg(long, value_enum, default_value_t = Kernel::Walls)]
    kernel: Kernel,
    #[arg(long, default_value_t = DEFAULT_TOL_PSD, value_parser = positive_f64)]
    tol_psd: f64,
    #[arg(long, default_value_t = DEFAULT_TOL_NORM, value_parser = positive_f64)]
    tol_norm: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnvelopeArgs {
    /// Source metric CSV.
    #[arg(long, requires = "b", conflicts_with = "builtin")]
    a: Option<PathBuf>,
    /// Target metric CSV on the same points.
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    /// Built-in pair: the rose box space under generators {a,b} and {a,b,ab}.
    #[arg(long, value_parser = ["generators"])]
    builtin: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be positive and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn nonnegative_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be nonnegative and finite".into()),
        Err(e) => Err(e.to_string()),
    }
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Done,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tower(a) => cmd_tower(a),
        Command::Walls(a) => cmd_walls(a),
        Command::Embed(a) => cmd_embed(a),
        Command::ExtVerify(a) => cmd_ext_verify(a),
        Command::Envelope(a) => cmd_envelope(a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(4),
        Err(e) => {
            let report = json!({
                "error": e.code(),
                "kind": match e.kind() {
                    ErrorKind::Input => "input",
                    ErrorKind::Validation => "validation",
                    ErrorKind::Verification => "verification",
                },
                "message": e.to_string(),
            });
            eprintln!("{report}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Validation => 3,
                ErrorKind::Verification => 4,
            })
        }
    }
}

fn load_seed(seed: &Option<String>, graph: &Option<PathBuf>) -> Result<LabeledMultigraph, Error> {
    match (seed, graph) {
        (Some(name), _) => builtins::seed(name),
        (None, Some(path)) => files::read_graph_json(BufReader::new(File::open(path)?)),
        (None, None) => Err(Error::Parse("give --seed or --graph".into())),
    }
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn prepare(out: &Option<PathBuf>) -> Result<Option<&Path>, Error> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    Ok(out.as_deref())
}

fn print_json(v: &Value) -> Result<(), Error> {
    files::write_json(std::io::stdout().lock(), v)
}

fn cmd_tower(a: TowerArgs) -> Result<Outcome, Error> {
    let seed = load_seed(&a.seed.seed, &a.seed.graph)?;
    let report = build_tower(&seed, a.levels, a.seed.cap)?;
    let summary = files::tower_to_json(&report);
    if let Some(dir) = prepare(&a.out)? {
        for i in 0..report.sizes.len() {
            let g = report.graph(i);
            files::write_json(create(dir, &format!("level_{i}.json"))?, &files::graph_to_json(g))?;
            if a.format == Format::Dot {
                create(dir, &format!("level_{i}.dot"))?.write_all(files::graph_to_dot(g).as_bytes())?;
            }
        }
        files::write_json(create(dir, "tower.json")?, &summary)?;
        files::write_tower_csv(&report, create(dir, "tower.csv")?)?;
    }
    match a.format {
        Format::Json => print_json(&summary)?,
        Format::Csv => files::write_tower_csv(&report, std::io::stdout().lock())?,
        Format::Dot => {
            let last = report.graph(report.sizes.len() - 1);
            std::io::stdout().lock().write_all(files::graph_to_dot(last).as_bytes())?;
        }
    }
    Ok(Outcome::Done)
}

fn cmd_walls(a: WallsArgs) -> Result<Outcome, Error> {
    let seed = load_seed(&a.seed.seed, &a.seed.graph)?;
    let mut base = seed;
    let mut cover = None;
    for _ in 0..a.level {
        let c = homology_cover_with_cap(&base, a.seed.cap)?;
        base = c.cover.clone();
        cover = Some(c);
    }
    let cover = cover.expect("level is positive");
    let agreement = agreement_radius(&cover)?;
    let report = json!({
        "cover_vertices": cover.cover.vertex_count(),
        "deck_rank": cover.deck_rank,
        "walls": cover.base.edge_count(),
        "agreement": agreement,
    });
    if let Some(dir) = prepare(&a.out)? {
        files::write_walls_csv(&cover, create(dir, "walls.csv")?)?;
        files::write_json(create(dir, "agreement.json")?, &report)?;
        files::write_json(create(dir, "cover.json")?, &files::graph_to_json(&cover.cover))?;
    }
    match a.format {
        Format::Csv => files::write_walls_csv(&cover, std::io::stdout().lock())?,
        Format::Dot => std::io::stdout().lock().write_all(files::graph_to_dot(&cover.cover).as_bytes())?,
        Format::Json => print_json(&report)?,
    }
    Ok(Outcome::Done)
}

fn cmd_embed(a: EmbedArgs) -> Result<Outcome, Error> {
    let dir = prepare(&a.out)?;
    let metric: Option<MetricMatrix> = match (&a.metric, &a.fixture) {
        (Some(p), _) => Some(files::read_metric_csv(BufReader::new(File::open(p)?))?),
        (None, Some(_)) => Some(builtins::k23_metric()),
        (None, None) => None,
    };
    if let Some(d) = metric {
        let (cloud, min_eig) = classical_embedding(&d, a.tol_psd)?;
        let report = json!({
            "points": d.size(),
            "dimension": cloud.dimension(),
            "min_eigenvalue": min_eig,
            "negative_type": min_eig >= -a.tol_psd,
        });
        if let Some(dir) = dir {
            files::write_point_cloud_csv(&cloud, create(dir, "points.csv")?)?;
            files::write_json(create(dir, "embed.json")?, &report)?;
        }
        match a.format {
            Format::Csv => files::write_point_cloud_csv(&cloud, std::io::stdout().lock())?,
            _ => print_json(&report)?,
        }
        return Ok(Outcome::Done);
    }

    let seed = load_seed(&a.seed, &a.graph)?;
    let tower = build_tower(&seed, a.levels, a.cap)?;
    let cb = CoverBox::new(tower.levels)?;
    let cloud = cb.embedding()?;
    let d = cb.walls.global_metric();
    let exact = (0..d.size()).all(|i| (0..d.size()).all(|j| cloud.squared_distance(i, j) == d.get(i, j)));
    let min_eig = negative_type_check(&d)?;
    let report = json!({
        "components": cb.walls.component_count(),
        "points": cloud.len(),
        "dimension": cloud.dimension(),
        "gaps": cb.walls.gaps(),
        "identity_exact": exact,
        "min_eigenvalue": min_eig,
        "negative_type": min_eig >= -a.tol_psd,
    });
    if let Some(dir) = dir {
        files::write_point_cloud_csv(&cloud, create(dir, "points.csv")?)?;
        files::write_metric_csv(&d, create(dir, "wall_metric.csv")?)?;
        files::write_json(create(dir, "embed.json")?, &report)?;
    }
    match a.format {
        Format::Csv => files::write_point_cloud_csv(&cloud, std::io::stdout().lock())?,
        _ => print_json(&report)?,
    }
    Ok(if exact { Outcome::Done } else { Outcome::Failed })
}

fn cmd_ext_verify(a: ExtArgs) -> Result<Outcome, Error> {
    let tower = builtin_extension(&a.tower)?;
    let gaps = (!a.gaps.is_empty()).then(|| a.gaps.clone());
    let source = match a.kernel {
        Kernel::Walls => KernelSource::Walls,
        Kernel::Induced => KernelSource::InducedMetric,
    };
    let space = ExtensionSpace::new(&tower, gaps, source)?;
    let lemma = space.lemma_reports()?;
    let options = PhiOptions {
        t_override: a.t,
        min_cutoff: a.min_cutoff,
        tol_psd: a.tol_psd,
        tol_norm: a.tol_norm,
    };
    let grid: Vec<(f64, f64, f64)> = if a.grid {
        let mut g = Vec::new();
        for r in [1.0, 2.0, 4.0] {
            for eps in [0.5, 0.25] {
                for delta in [0.5, 0.25] {
                    g.push((r, eps, delta));
                }
            }
        }
        g
    } else {
        vec![(a.r, a.eps, a.delta)]
    };
    let mut verdicts = Vec::with_capacity(grid.len());
    let mut gram = None;
    for &(r, eps, delta) in &grid {
        let phi = build_phi_gamma(&space, r, eps, options)?;
        verdicts.push(verify_conditions(&phi, delta)?);
        if grid.len() == 1 {
            gram = Some(phi.gram());
        }
    }
    let all_pass = verdicts.iter().all(|v| v.pass);
    if let Some(dir) = prepare(&a.out)? {
        for (i, t) in space.triples.iter().enumerate() {
            files::write_json(create(dir, &format!("triple_{i}.json"))?, &files::triple_to_json(t))?;
        }
        files::write_json(create(dir, "lemma.json")?, &lemma)?;
        files::write_json(create(dir, "verdict.json")?, &verdicts)?;
        if let Some(g) = &gram {
            files::write_gram_csv(g, create(dir, "gram.csv")?)?;
        }
    }
    if grid.len() == 1 {
        print_json(&serde_json::to_value(&verdicts[0])?)?;
    } else {
        print_json(&serde_json::to_value(&verdicts)?)?;
    }
    if !all_pass {
        if let Some(v) = verdicts.into_iter().find(|v| !v.pass) {
            if let Err(e) = v.into_result() {
                eprintln!("{}", json!({"error": e.code(), "kind": "verification", "message": e.to_string()}));
            }
        }
        return Ok(Outcome::Failed);
    }
    Ok(Outcome::Done)
}

fn cmd_envelope(a: EnvelopeArgs) -> Result<Outcome, Error> {
    let (d1, d2) = match (&a.a, &a.b, &a.builtin) {
        (Some(pa), Some(pb), _) => (
            files::read_metric_csv(BufReader::new(File::open(pa)?))?,
            files::read_metric_csv(BufReader::new(File::open(pb)?))?,
        ),
        (_, _, Some(_)) => builtins::generating_set_pair()?,
        _ => return Err(Error::Parse("give --a and --b, or --builtin".into())),
    };
    let env = distortion_envelope(&d1, &d2)?;
    let summary = json!({
        "points": d1.size(),
        "monotone": env.is_monotone(),
        "lower_positive": env.lower_positive(),
        "envelope": env,
    });
    if let Some(dir) = prepare(&a.out)? {
        files::write_envelope_csv(&env, create(dir, "envelope.csv")?)?;
        files::write_json(create(dir, "envelope.json")?, &summary)?;
    }
    match a.format {
        Format::Json => print_json(&summary)?,
        _ => files::write_envelope_csv(&env, std::io::stdout().lock())?,
    }
    Ok(Outcome::Done)
}

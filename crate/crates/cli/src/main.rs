use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ldp_pic::generators::{gen_bsbm, gen_dcbm, gen_sbm, BsbmParams, DcbmParams, SbmParams};
use ldp_pic::graph::{io::read_edge_list, io::write_edge_list_to, k_core};
use ldp_pic::Seed;
use ldp_pic_cli::{exit_code, run_experiment, summarize::summarize, write_core_edges, write_csv, write_truth};
use ldp_pic_cli::{ExperimentSpec, GraphSource, Method};

#[derive(Parser)]
#[command(name = "ldp-pic", version, about = "Edge-LDP power iteration clustering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a block-model graph and its planted clusters.
    Gen(GenArgs),
    /// Run an experiment sweep and write a results CSV.
    Run(RunArgs),
    /// Print mean ± std of d_norm per (method, epsilon, n, p, q).
    Summarize {
        csv: PathBuf,
    },
    /// Reduce an edge list to its k-core.
    Kcore {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Sbm,
    Bsbm,
    Dcbm,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "sbm")]
    model: Model,
    /// Cluster sizes (SBM, DCBM).
    #[arg(long, default_value_t = 1000)]
    n1: usize,
    #[arg(long, default_value_t = 1000)]
    n2: usize,
    /// Part sizes a1,a2,b1,b2 (BSBM).
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [250, 250, 250, 250])]
    parts: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0.2)]
    q: f64,
    /// Power-law exponent (DCBM).
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    /// Smallest θ (DCBM); defaults to 5·sqrt(n).
    #[arg(long)]
    theta_min: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output.
    #[arg(long)]
    out: PathBuf,
    /// Planted-cluster output.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment specification; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    /// Use a fixed graph instead of generated SBMs.
    #[arg(long)]
    edge_list: Option<PathBuf>,
    /// k-core to extract from the edge list.
    #[arg(long, requires = "edge_list")]
    k: Option<usize>,
    /// Number of seeds.
    #[arg(long)]
    seeds: Option<u64>,
    /// First seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed iteration count T.
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    cap_iters: Option<usize>,
    #[arg(long)]
    clip_factor: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    lazy_alphas: Option<Vec<f64>>,
    /// NON-PRIVATE: disable Laplace noise and clipping.
    #[arg(long)]
    no_noise: bool,
    /// NON-PRIVATE: disable degree padding.
    #[arg(long)]
    no_padding: bool,
    /// Raise the randomized-response size guard.
    #[arg(long)]
    rr_max_nodes: Option<usize>,
    /// Results CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn into_spec(self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_toml_file(path)?,
            None => ExperimentSpec::default(),
        };
        if let Some(v) = self.methods {
            spec.methods = v;
        }
        if let Some(v) = self.epsilons {
            spec.epsilons = v;
        }
        if let Some(path) = self.edge_list {
            spec.source = GraphSource::EdgeList { path, k: self.k };
        } else if self.n.is_some() || self.p.is_some() || self.q.is_some() {
            let (mut n, mut p, mut q) = match spec.source {
                GraphSource::Sbm { n, p, q } => (n, p, q),
                GraphSource::EdgeList { .. } => match GraphSource::default() {
                    GraphSource::Sbm { n, p, q } => (n, p, q),
                    GraphSource::EdgeList { .. } => unreachable!(),
                },
            };
            n = self.n.unwrap_or(n);
            p = self.p.unwrap_or(p);
            q = self.q.unwrap_or(q);
            spec.source = GraphSource::Sbm { n, p, q };
        }
        if let Some(v) = self.seeds {
            spec.seeds = v;
        }
        if let Some(v) = self.seed {
            spec.first_seed = v;
        }
        if self.iterations.is_some() {
            spec.iterations = self.iterations;
        }
        if let Some(v) = self.cap_iters {
            spec.cap_iters = v;
        }
        if let Some(v) = self.clip_factor {
            spec.clip_factor = v;
        }
        if let Some(v) = self.lazy_alphas {
            spec.lazy_alphas = v;
        }
        spec.no_noise |= self.no_noise;
        spec.no_padding |= self.no_padding;
        if let Some(v) = self.rr_max_nodes {
            spec.rr_max_nodes = v;
        }
        if self.out.is_some() {
            spec.out = self.out;
        }
        Ok(spec)
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn gen(args: GenArgs) -> Result<()> {
    let (graph, truth) = match args.model {
        Model::Sbm => {
            let pl = gen_sbm(&SbmParams::new(args.n1, args.n2, args.p, args.q), Seed(args.seed))?;
            (pl.graph, pl.truth)
        }
        Model::Bsbm => {
            let [a1, a2, b1, b2] = args.parts[..] else {
                bail!("--parts needs four sizes");
            };
            let pl = gen_bsbm(
                &BsbmParams {
                    a1,
                    a2,
                    b1,
                    b2,
                    p: args.p,
                    q: args.q,
                },
                Seed(args.seed),
            )?;
            (pl.graph, pl.truth)
        }
        Model::Dcbm => {
            let n = (args.n1 + args.n2) as f64;
            let params = DcbmParams {
                n1: args.n1,
                n2: args.n2,
                p: args.p,
                q: args.q,
                alpha: args.alpha,
                theta_min: args.theta_min.unwrap_or(5.0 * n.sqrt()),
                theta_max: None,
            };
            let s = gen_dcbm(&params, Seed(args.seed))?;
            (s.graph, s.truth)
        }
    };
    let mut out = create(&args.out)?;
    write_edge_list_to(&graph, &mut out)?;
    out.flush()?;
    if let Some(path) = &args.truth {
        let mut t = create(path)?;
        write_truth(&truth, &mut t)?;
        t.flush()?;
    }
    if let Some(v) = graph.first_isolated() {
        eprintln!("warning: node {v} is isolated and will not appear in the edge list");
    }
    eprintln!("{} nodes, {} edges", graph.node_count(), graph.edge_count());
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    if let Some(j) = args.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let spec = args.into_spec()?;
    if !spec.is_private() {
        eprintln!("warning: noise or padding disabled; results are NOT differentially private");
    }
    let rows = run_experiment(&spec)?;
    let failed = rows.iter().filter(|r| r.kind == ldp_pic_cli::RowKind::Cell && !r.error.is_empty()).count();
    match &spec.out {
        Some(path) => write_csv(&spec, &rows, create(path)?)?,
        None => write_csv(&spec, &rows, io::stdout().lock())?,
    }
    if failed > 0 {
        eprintln!("{failed} runs failed; see the error column");
    }
    Ok(())
}

fn kcore(input: PathBuf, k: usize, output: PathBuf) -> Result<()> {
    let list = read_edge_list(&input)?;
    let core = k_core(&list.graph, k);
    let mut out = create(&output)?;
    write_core_edges(&core, &list.labels, &mut out)?;
    out.flush()?;
    eprintln!(
        "{k}-core keeps {} of {} nodes, {} edges",
        core.graph.node_count(),
        list.graph.node_count(),
        core.graph.edge_count()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Run(a) => run(a),
        Command::Summarize { csv } => File::open(&csv)
            .with_context(|| format!("opening {}", csv.display()))
            .and_then(|f| summarize(f, io::stdout().lock())),
        Command::Kcore { input, k, output } => kcore(input, k, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

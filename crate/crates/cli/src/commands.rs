// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use der_core::der::{best_state, Der, DerConfig};
use der_core::ensemble::run_repeats_with;
use der_core::error::DerError;
use der_core::io::{align_labels, format_cooccurrence, format_cover, format_partition, parse_labeled};
use der_core::metrics::{misclassified, nmi};
use der_core::overlap::{extract_cover, membership};
use der_core::sbm::{recovery_experiment, sample_sbm, SbmSpec};
use der_core::Graph;
use log::info;

use crate::{ClusterArgs, CoocArgs, Command, EvalArgs, OverlapArgs, RunArgs, SbmGenArgs, SbmRecoverArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Der(DerError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Usage(_) | CliError::Der(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Der(e) => write!(f, "{e}"),
        }
    }
}

impl From<DerError> for CliError {
    fn from(e: DerError) -> Self {
        CliError::Der(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = read(path)?;
    Graph::from_edge_list(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn require(ok: bool, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(message.to_string()))
    }
}

fn validate_run(run: &RunArgs, walk_length: usize) -> Result<DerConfig> {
    let config = DerConfig {
        k: run.k,
        walk_length,
        seed: run.seed,
        max_iters: run.max_iters,
        restarts: run.restarts,
    };
    config.validate()?;
    Ok(config)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Cluster(args) => cmd_cluster(&args),
        Command::Overlap(args) => cmd_overlap(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::SbmGen(args) => cmd_sbm_gen(&args),
        Command::SbmRecover(args) => cmd_sbm_recover(&args),
        Command::CoocExport(args) => cmd_cooc_export(&args),
    }
}

fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let config = validate_run(&args.run, args.walk_length)?;
    require(args.repeats >= 1, "--repeats must be at least 1")?;
    require(
        args.trace.is_none() || args.repeats == 1,
        "--trace is only available with --repeats 1",
    )?;
    let g = read_graph(&args.run.input)?;
    info!("read {} vertices, {} edges", g.n(), g.num_edges());
    let der = Der::new(&g, config.walk_length)?;

    let (partition, iterations) = if args.repeats == 1 {
        let states = der.run_all(&config)?;
        if let Some(path) = &args.trace {
            let mut csv = String::from("restart,iteration,cost\n");
            for s in &states {
                for (it, c) in s.cost_trace.iter().enumerate() {
                    let _ = writeln!(csv, "{},{},{}", s.restart, it, c);
                }
            }
            write(path, &csv)?;
        }
        let best = best_state(states);
        (best.partition, best.iterations.to_string())
    } else {
        let out = run_repeats_with(&der, &config, args.repeats)?;
        (out.partition, join(out.runs.iter().map(|r| r.iterations)))
    };

    let measures = der.means_step(&partition);
    let cost = der.cost(&partition, &measures);
    let labels = der.full_labels(&partition);
    write(&args.run.output, &format_partition(&g, &labels))?;

    println!("cost={cost}");
    println!("iterations={iterations}");
    println!("clusters={}", partition.k());
    println!("sizes={}", join(partition.sizes()));
    println!("isolated={}", g.n() - der.n_active());
    Ok(())
}

fn cmd_overlap(args: &OverlapArgs) -> Result<()> {
    let config = validate_run(&args.run, args.walk_length)?;
    require(
        args.theta > 0.0 && args.theta <= 1.0,
        "--theta must lie in (0, 1]",
    )?;
    let g = read_graph(&args.run.input)?;
    let der = Der::new(&g, config.walk_length)?;
    let state = der.run(&config)?;
    let profile = membership(&der, &state.measures);
    let cover = extract_cover(&profile, args.theta)?;

    let mut next = state.partition.k();
    let memberships: Vec<Vec<usize>> = (0..g.n())
        .map(|v| match der.diffusion().position(v) {
            Some(pos) => cover.memberships(pos).to_vec(),
            None => {
                next += 1;
                vec![next - 1]
            }
        })
        .collect();
    write(&args.run.output, &format_cover(&g, &memberships))?;

    println!("cost={}", state.cost());
    println!("iterations={}", state.iterations);
    println!("communities={}", state.partition.k());
    println!("sizes={}", join(cover.communities().iter().map(Vec::len)));
    println!("overlapping={}", memberships.iter().filter(|m| m.len() > 1).count());
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> Result<()> {
    let parse = |path: &Path| -> Result<Vec<(String, String)>> {
        parse_labeled(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    };
    let a = parse(&args.first)?;
    let b = parse(&args.second)?;
    let (la, lb) = align_labels(&a, &b)?;
    require(!la.is_empty(), "partition files are empty")?;
    println!("nmi={:?} misclassified={}", nmi(&la, &lb)?, misclassified(&la, &lb)?);
    Ok(())
}

fn cmd_sbm_gen(args: &SbmGenArgs) -> Result<()> {
    let spec = SbmSpec { n: args.n, k: args.k, p: args.p, q: args.q, seed: args.seed };
    spec.validate()?;
    let (g, planted) = sample_sbm(&spec)?;
    let mut edges = String::new();
    for u in 0..g.n() {
        for &(v, _) in g.neighbors(u).iter().filter(|&&(v, _)| v > u) {
            let _ = writeln!(edges, "{} {}", g.id(u), g.id(v));
        }
    }
    write(&args.output, &edges)?;
    let planted_path = args.planted.clone().unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".planted");
        PathBuf::from(p)
    });
    write(&planted_path, &format_partition(&g, &planted))?;
    println!("vertices={} edges={}", g.n(), g.num_edges());
    Ok(())
}

fn cmd_sbm_recover(args: &SbmRecoverArgs) -> Result<()> {
    require(args.trials >= 1, "--trials must be at least 1")?;
    require(args.walk_length >= 1, "-L must be at least 1")?;
    let spec = SbmSpec { n: args.n, k: 2, p: args.p, q: args.q, seed: args.seed };
    spec.validate()?;
    let report = recovery_experiment(&spec, args.walk_length, args.trials, args.seed)?;
    for record in &report.records {
        println!("{}", serde_json::to_string(record).expect("record serializes"));
    }
    let summary = serde_json::json!({
        "summary": {
            "n": spec.n,
            "p": spec.p,
            "q": spec.q,
            "walk_length": report.walk_length,
            "trials": report.trials,
            "successes": report.successes,
            "success_rate": report.success_rate,
            "mean_nmi": report.mean_nmi,
            "converged_success_rate": report.converged_success_rate,
            "mean_seconds": report.mean_seconds,
        }
    });
    println!("{summary}");
    Ok(())
}

fn cmd_cooc_export(args: &CoocArgs) -> Result<()> {
    let config = validate_run(&args.run, args.walk_length)?;
    require(args.repeats >= 1, "--repeats must be at least 1")?;
    let g = read_graph(&args.run.input)?;
    let der = Der::new(&g, config.walk_length)?;
    let out = run_repeats_with(&der, &config, args.repeats)?;
    write(
        &args.run.output,
        &format_cooccurrence(&g, der.diffusion().vertices(), &out.cooccurrence),
    )?;
    println!(
        "runs={} pairs={} consensus_clusters={}",
        args.repeats,
        out.cooccurrence.pairs().count(),
        out.partition.k()
    );
    Ok(())
}

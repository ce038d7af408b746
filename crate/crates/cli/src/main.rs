mod job;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elq_core::bench::{self, Counts, Instance};
use elq_core::duals::{simulation_dual, size_bound};
use elq_core::encode::{build_cnf, export_dimacs, prune, EncodeOptions};
use elq_core::fitloop::{bounded_fit, FitOptions, Schedule};
use elq_core::model::{cn, rn, LabeledExampleSet, Ontology, PointedDatabase};
use elq_core::pac::{self, ExampleDistribution, Learner, PacParams, Task, Variant};
use elq_core::refine::{bfs_learn, most_specific_product, Caps, Operator};
use elq_core::{saturate, sim};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use job::{load_job, parse_concept, parse_individual, CliError, Inputs, Job, JobOptions, Result};

#[derive(Parser)]
#[command(name = "elq-forge", version, about = "Bounded fitting of EL queries")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "ELQ_FORGE_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a query fitting the examples of a job file.
    Fit(FitArgs),
    /// Decide whether a query returns an individual.
    Eval(EvalArgs),
    /// Sample size for PAC guarantees.
    Pac(PacArgs),
    /// Simulation dual of a pointed database or query.
    Dual(DualArgs),
    /// Write a benchmark job directory.
    Bench(BenchArgs),
    /// Generalization experiment over sample sizes and trials.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sat,
    RefineRho1,
    RefineRho2,
    Product,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    job: PathBuf,
    #[arg(long, value_enum, default_value = "sat")]
    mode: Mode,
    /// Write each round's CNF and variable map into this directory.
    #[arg(long)]
    dump_dimacs: Option<PathBuf>,
    #[arg(long)]
    max_rounds: Option<u32>,
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    no_symmetry: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    query: String,
    #[arg(long)]
    database: PathBuf,
    #[arg(long)]
    individual: String,
    #[arg(long)]
    ontology: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("bound").required(true).args(["restrictions", "size"]))]
struct PacArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    sigma_size: usize,
    /// Bound on existential restrictions of the target.
    #[arg(long)]
    restrictions: Option<usize>,
    /// Bound on the size of the target.
    #[arg(long)]
    size: Option<usize>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["database", "query"]))]
struct DualArgs {
    #[arg(long, requires = "individual")]
    database: Option<PathBuf>,
    #[arg(long)]
    individual: Option<String>,
    #[arg(long)]
    query: Option<String>,
    /// Comma-separated concept names of Σ (default: those of the source).
    #[arg(long, value_delimiter = ',')]
    concepts: Option<Vec<String>>,
    /// Comma-separated role names of Σ (default: those of the source).
    #[arg(long, value_delimiter = ',')]
    roles: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Kpath,
    K1conj,
    K2conj,
    Planted,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Target of the planted family.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    ontology: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    positives: usize,
    #[arg(long, default_value_t = 10)]
    negatives: usize,
    #[arg(long, default_value_t = 12)]
    max_individuals: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["job", "suite"]))]
struct ExperimentArgs {
    /// Job whose examples form the uniform support; needs a target.
    #[arg(long)]
    job: Option<PathBuf>,
    /// `most-general:N` or `most-specific:N`.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "bounded_fit")]
    learners: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
    ms: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Worker threads for the trials.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Directory for `trials.csv` and `summary.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fit_options(o: &JobOptions, a: &FitArgs) -> Result<FitOptions> {
    let mut opts = FitOptions::default();
    if let Some(n) = a.max_rounds.or(o.max_rounds) {
        opts.max_rounds = n;
    }
    if let Some(t) = a.timeout.or(o.timeout_s) {
        opts.timeout = Some(Duration::try_from_secs_f64(t).map_err(|_| CliError::usage(format!("bad timeout {t}")))?);
    }
    if let Some(s) = a.schedule.as_ref().or(o.schedule.as_ref()) {
        opts.schedule = s.parse::<Schedule>().map_err(CliError::usage)?;
    }
    opts.symmetry = !a.no_symmetry && o.symmetry.unwrap_or(true);
    Ok(opts)
}

fn caps(o: &JobOptions, timeout: Option<f64>) -> Caps {
    let mut caps = Caps::default();
    if let Some(f) = o.max_frontier {
        caps.max_frontier = f;
    }
    if let Some(t) = timeout.or(o.timeout_s) {
        caps.timeout = Some(Duration::from_secs_f64(t));
    }
    caps
}

fn dump_rounds(dir: &Path, e: &LabeledExampleSet, o: &Ontology, rounds: &[u32], symmetry: bool) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::domain(format!("{}: {e}", dir.display())))?;
    let eo = saturate::eliminate_ontology(e, o);
    let mut written = Vec::new();
    for &n in rounds {
        let (pe, sigma) = prune(&eo, n as usize);
        let inst = build_cnf(&pe, &sigma, n, EncodeOptions { symmetry });
        let path = dir.join(format!("round-{n}.cnf"));
        export_dimacs(&inst, &path).map_err(|e| CliError::domain(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn fit(a: &FitArgs, seed: u64) -> Result<Value> {
    let mut inputs = Inputs::default();
    let Job {
        examples, ontology, options, ..
    } = load_job(&a.job, &mut inputs)?;
    let mut out = match a.mode {
        Mode::Sat => {
            let opts = fit_options(&options, a)?;
            let r = bounded_fit(&examples, &ontology, &opts).map_err(|e| CliError::domain(e.to_string()))?;
            let mut v = r.to_json();
            if let Some(dir) = &a.dump_dimacs {
                let rounds: Vec<u32> = r.stats.iter().filter(|s| s.outcome != "skipped").map(|s| s.round).collect();
                v["dimacs"] = json!(dump_rounds(dir, &examples, &ontology, &rounds, opts.symmetry)?);
            }
            v
        }
        Mode::RefineRho1 | Mode::RefineRho2 => {
            let op = if matches!(a.mode, Mode::RefineRho1) { Operator::Rho1 } else { Operator::Rho2 };
            let eo = saturate::eliminate_ontology(&examples, &ontology);
            bfs_learn(&eo, &eo.signature(), op, &caps(&options, a.timeout)).to_json()
        }
        Mode::Product => {
            let eo = saturate::eliminate_ontology(&examples, &ontology);
            let q = most_specific_product(&eo, options.depth.unwrap_or(4));
            json!({
                "status": if q.is_some() { "found" } else { "exhausted" },
                "query": q.map(|q| q.to_string()),
            })
        }
    };
    out["mode"] = json!(a.mode.to_possible_value().unwrap().get_name());
    out["provenance"] = inputs.provenance(seed);
    Ok(out)
}

fn eval(a: &EvalArgs, seed: u64) -> Result<Value> {
    let mut inputs = Inputs::default();
    let q = parse_concept(&a.query, "--query")?;
    let db = inputs.database(&a.database)?;
    let o = inputs.ontology(a.ontology.as_deref())?;
    let root = parse_individual(&a.individual)?;
    if !db.contains(root) {
        return Err(CliError::domain(format!("{}: no individual {root}", a.database.display())));
    }
    let sat = PointedDatabase::new(saturate::universal_db(&db, &o), root);
    Ok(json!({
        "query": q.to_string(),
        "individual": root.to_string(),
        "holds": sim::holds(&q, &sat),
        "provenance": inputs.provenance(seed),
    }))
}

fn pac_cmd(a: &PacArgs, seed: u64) -> Result<Value> {
    let (variant, target) = match (a.restrictions, a.size) {
        (Some(n), None) => (Variant::Restrictions, n),
        (None, Some(s)) => (Variant::Size, s),
        _ => return Err(CliError::usage("give exactly one of --restrictions and --size")),
    };
    let p = PacParams::new(a.epsilon, a.delta, a.sigma_size, target).map_err(|e| CliError::usage(e.to_string()))?;
    let m = pac::sample_size_bound(&p, variant).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(json!({
        "sample_size": m,
        "variant": variant,
        "vc_bound": p.vc_bound(variant),
        "params": p,
        "provenance": Inputs::default().provenance(seed),
    }))
}

fn dual(a: &DualArgs, seed: u64) -> Result<Value> {
    let mut inputs = Inputs::default();
    let source = match (&a.database, &a.query) {
        (Some(path), None) => {
            let db = inputs.database(path)?;
            let root = parse_individual(a.individual.as_deref().unwrap_or_default())?;
            if !db.contains(root) {
                return Err(CliError::domain(format!("{}: no individual {root}", path.display())));
            }
            PointedDatabase::new(db, root)
        }
        (None, Some(q)) => parse_concept(q, "--query")?.to_pointed_db(),
        _ => return Err(CliError::usage("give exactly one of --database and --query")),
    };
    let mut sigma = source.db.signature();
    if let Some(cs) = &a.concepts {
        sigma.concepts = cs.iter().map(|c| valid(c).map(|_| cn(c))).collect::<Result<_>>()?;
    }
    if let Some(rs) = &a.roles {
        sigma.roles = rs.iter().map(|r| valid(r).map(|_| rn(r))).collect::<Result<_>>()?;
    }
    let d = simulation_dual(&source, &sigma).map_err(|e| CliError::domain(e.to_string()))?;
    let members: Vec<Value> = d
        .members
        .iter()
        .map(|m| json!({ "root": m.root.to_string(), "database": m.db.to_string() }))
        .collect();
    Ok(json!({
        "count": d.len(),
        "size": d.size(),
        "size_bound": size_bound(&source, &sigma),
        "members": members,
        "provenance": inputs.provenance(seed),
    }))
}

fn valid(s: &str) -> Result<()> {
    if elq_core::model::is_identifier(s) && s != "top" {
        Ok(())
    } else {
        Err(CliError::usage(format!("invalid name {s:?}")))
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::domain(format!("{}: {e}", path.display())))
}

fn bench_cmd(a: &BenchArgs, seed: u64) -> Result<Value> {
    let mut inputs = Inputs::default();
    let ontology = inputs.ontology(a.ontology.as_deref())?;
    if a.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let Instance { name, target, examples } = match a.family {
        Family::Kpath => bench::gen_kpath(a.k),
        Family::K1conj => bench::gen_k1conj(a.k),
        Family::K2conj => bench::gen_k2conj(a.k),
        Family::Planted => {
            let t = a.target.as_deref().ok_or_else(|| CliError::usage("--family planted needs --target"))?;
            let target = parse_concept(t, "--target")?;
            let counts = Counts {
                positives: a.positives,
                negatives: a.negatives,
                max_individuals: a.max_individuals,
            };
            let p = bench::gen_planted(&target, &ontology, counts, seed).map_err(|e| CliError::domain(e.to_string()))?;
            Instance {
                name: "planted".into(),
                target,
                examples: p.examples,
            }
        }
    };
    let dir = &a.out;
    std::fs::create_dir_all(dir.join("db")).map_err(|e| CliError::domain(format!("{}: {e}", dir.display())))?;
    let mut entries = Vec::new();
    for (i, x) in examples.examples.iter().enumerate() {
        let file = format!("db/e{i}.db");
        write(&dir.join(&file), &x.example.db.to_string())?;
        entries.push(json!({
            "db": file,
            "individual": x.example.root.to_string(),
            "label": x.label.symbol().to_string(),
        }));
    }
    let onto = if ontology.is_empty() {
        Value::Null
    } else {
        write(&dir.join("ontology.txt"), &ontology.to_string())?;
        json!("ontology.txt")
    };
    let job = json!({ "ontology": onto, "examples": entries, "target": target.to_string(), "options": {} });
    write(&dir.join("job.json"), &serde_json::to_string_pretty(&job).unwrap())?;
    write(&dir.join("target.txt"), &format!("{target}\n"))?;
    let mut provenance = inputs.provenance(seed);
    let mut outputs = Vec::new();
    for file in generated_files(dir)? {
        let text = std::fs::read(dir.join(&file)).map_err(|e| CliError::domain(format!("{file}: {e}")))?;
        outputs.push(json!({ "path": file, "sha256": format!("{:x}", Sha256::digest(&text)) }));
    }
    provenance["outputs"] = Value::Array(outputs);
    let readme = format!(
        "# {name}\n\nTarget: `{target}`\n\n{} examples ({} positive). Run with\n\n    elq-forge fit --job job.json\n\n## Provenance\n\n```json\n{}\n```\n",
        examples.len(),
        examples.positive_count(),
        serde_json::to_string_pretty(&provenance).unwrap()
    );
    write(&dir.join("README.md"), &readme)?;
    Ok(json!({
        "instance": name,
        "target": target.to_string(),
        "examples": examples.len(),
        "out": dir.display().to_string(),
        "provenance": provenance,
    }))
}

/// Files written by `bench`, relative to its output directory and sorted.
fn generated_files(dir: &Path) -> Result<Vec<String>> {
    let mut files = vec!["job.json".to_string(), "target.txt".to_string()];
    if dir.join("ontology.txt").exists() {
        files.push("ontology.txt".into());
    }
    let entries = std::fs::read_dir(dir.join("db")).map_err(|e| CliError::domain(format!("{}: {e}", dir.display())))?;
    for e in entries.flatten() {
        files.push(format!("db/{}", e.file_name().to_string_lossy()));
    }
    files.sort();
    Ok(files)
}

fn experiment(a: &ExperimentArgs, seed: u64) -> Result<Value> {
    let mut inputs = Inputs::default();
    let mut analytic = None;
    let task = match (&a.job, &a.suite) {
        (Some(path), None) => {
            let job = load_job(path, &mut inputs)?;
            let target = job.target.ok_or_else(|| CliError::usage(format!("{}: experiment needs a target", path.display())))?;
            let points = job.examples.examples.into_iter().map(|x| x.example).collect();
            let dist = ExampleDistribution::uniform(points).map_err(|e| CliError::domain(e.to_string()))?;
            Task::new(target, job.ontology, dist)
        }
        (None, Some(spec)) => {
            let (kind, n) = spec
                .split_once(':')
                .and_then(|(k, n)| Some((k, n.parse::<usize>().ok()?)))
                .ok_or_else(|| CliError::usage(format!("bad suite {spec:?}: expected most-general:N or most-specific:N")))?;
            match kind {
                "most-general" if (1..=pac::adversarial::MOST_GENERAL_MAX_N).contains(&n) => {
                    let s = pac::adversarial_most_general_suite(n);
                    analytic = Some(s.analytic_fitter());
                    s.task()
                }
                "most-specific" if n >= 2 && n.is_multiple_of(2) && n <= pac::adversarial::MOST_SPECIFIC_MAX_N => {
                    pac::adversarial_most_specific_suite(n).task()
                }
                _ => {
                    return Err(CliError::usage(format!(
                        "unsupported suite {spec:?}: most-general needs 1..={}, most-specific an even n in 2..={}",
                        pac::adversarial::MOST_GENERAL_MAX_N,
                        pac::adversarial::MOST_SPECIFIC_MAX_N
                    )))
                }
            }
        }
        _ => return Err(CliError::usage("give exactly one of --job and --suite")),
    };
    let mut learners = Vec::new();
    for name in &a.learners {
        learners.push(match name.as_str() {
            "bounded_fit" => Learner::bounded_fit(FitOptions::default()),
            "product" => Learner::product(a.depth),
            "refine-rho1" => Learner::refine(Operator::Rho1, Caps::default()),
            "refine-rho2" => Learner::refine(Operator::Rho2, Caps::default()),
            "most-general" => analytic.clone().ok_or_else(|| CliError::usage("most-general needs --suite most-general:N"))?,
            other => return Err(CliError::usage(format!("unknown learner {other:?}"))),
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| CliError::domain(e.to_string()))?;
    let rows: Vec<_> = pool.install(|| {
        learners
            .iter()
            .flat_map(|l| pac::generalization_experiment(&task, &a.ms, l, a.trials, seed))
            .collect()
    });
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::domain(format!("{}: {e}", dir.display())))?;
        write(&dir.join("trials.csv"), &pac::to_csv(&rows))?;
        write(&dir.join("summary.json"), &serde_json::to_string_pretty(&pac::summary_json(&rows)).unwrap())?;
    }
    let mut out = pac::summary_json(&rows);
    out["provenance"] = inputs.provenance(seed);
    Ok(out)
}

fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Fit(a) => fit(a, cli.seed),
        Command::Eval(a) => eval(a, cli.seed),
        Command::Pac(a) => pac_cmd(a, cli.seed),
        Command::Dual(a) => dual(a, cli.seed),
        Command::Bench(a) => bench_cmd(a, cli.seed),
        Command::Experiment(a) => experiment(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(v) => {
            // a closed pipe (say, `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

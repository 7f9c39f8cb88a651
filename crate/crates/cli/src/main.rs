use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use qcanon::catalog::{self, grammar_count, quoted_count, Catalog};
use qcanon::oracle;
use qcanon::psu2::{haar_random, Quat};
use qcanon::search::{approximate, nearest, ApproxQuery, ApproxResult};
use qcanon::sk::{check_shape, sk_approximate, SkConfig};
use qcanon::{canonicalize, normalize, CosetForm, GateWord, NormalForm};

#[derive(Parser)]
#[command(name = "qcanon", version, about = "Canonical forms and approximation for single-qubit Clifford+T circuits")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate canonical circuits and write a catalog file.
    BuildDb {
        #[arg(long)]
        max_tcount: u32,
        #[arg(long)]
        out: PathBuf,
        /// Largest T-count allowed without raising the budget.
        #[arg(long, default_value_t = catalog::DEFAULT_BUDGET)]
        budget: u32,
    },
    /// Print the normal form of a gate string.
    Normalize {
        gates: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical coset form `g1.body.g2` of a gate string.
    Canonicalize {
        gates: String,
        #[arg(long)]
        json: bool,
    },
    /// Minimum-T-count ε-approximation from a catalog.
    Approx {
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        db: DbArg,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Solovay-Kitaev approximation.
    Sk {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[command(flatten)]
        db: DbArg,
        #[command(flatten)]
        target: TargetArgs,
        /// Write the per-level CSV (depth,dist,t_count) here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Precision versus T-count over random targets.
    ///
    /// CSV columns: series,t_count,mean_eps,samples. Series `level0` groups
    /// nearest-catalog results by T-count; series `skN` has one row per
    /// depth N with the mean T-count and mean distance.
    Bench {
        #[command(flatten)]
        db: DbArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',')]
        sk_depths: Vec<u32>,
    },
    /// Run an oracle suite; exits 1 on any failure.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        t_max: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct DbArg {
    /// Catalog file.
    #[arg(long, env = "QCANON_DB")]
    db: PathBuf,
}

#[derive(Args)]
struct TargetArgs {
    /// [[[re,im],[re,im]],[[re,im],[re,im]]]
    #[arg(long)]
    matrix: Option<String>,
    /// Rotation axis `x,y,z`, with `--angle`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "angle")]
    axis: Option<Vec<f64>>,
    #[arg(long, requires = "axis")]
    angle: Option<f64>,
    /// Gate string over H, T, S.
    #[arg(long)]
    gates: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Theorem1,
    Parity,
    Counts,
    Optimality,
}

/// Distinguishes usage problems (exit 2) from failed checks (exit 1).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn target_quat(t: &TargetArgs, eps: f64) -> Result<ApproxQuery> {
    let q = if let Some(m) = &t.matrix {
        let rows: [[[f64; 2]; 2]; 2] =
            serde_json::from_str(m).map_err(|e| usage(format!("--matrix: {e}")))?;
        let flat = [rows[0][0], rows[0][1], rows[1][0], rows[1][1]].map(|[r, i]| (r, i));
        ApproxQuery::from_matrix(flat, eps)
    } else if let (Some(axis), Some(angle)) = (&t.axis, t.angle) {
        if axis.len() != 3 {
            return Err(usage("--axis takes three comma-separated numbers"));
        }
        ApproxQuery::from_axis_angle([axis[0], axis[1], axis[2]], angle, eps)
    } else if let Some(g) = &t.gates {
        let w = GateWord::parse(g).map_err(|e| usage(e.to_string()))?;
        ApproxQuery::new(w.to_quat(), eps)
    } else {
        return Err(usage("one of --matrix, --axis/--angle, --gates is required"));
    };
    q.map_err(|e| usage(e.to_string()))
}

fn load_db(p: &Path) -> Result<Catalog> {
    catalog::load(p).with_context(|| format!("loading catalog {}", p.display()))
}

fn normal_form_json(nf: &NormalForm) -> serde_json::Value {
    json!({
        "text": nf.to_string(),
        "h_prefix": nf.h_prefix,
        "body": nf.body.to_string(),
        "tail": nf.tail.idx(),
        "t_count": nf.t_count(),
        "gates": nf.word().to_string(),
    })
}

fn coset_json(c: &CosetForm) -> Result<serde_json::Value> {
    let mut v = serde_json::to_value(c)?;
    v["text"] = json!(c.to_string());
    v["gates"] = json!(c.word().to_string());
    Ok(v)
}

fn approx_json(r: &ApproxResult) -> Result<serde_json::Value> {
    Ok(json!({
        "found": r.found,
        "gates": r.circuit.as_ref().map(|c| c.word().to_string()),
        "t_count": r.t_count,
        "dist": if r.found { json!(r.achieved_dist) } else { json!(null) },
        "circuit": r.circuit.as_ref().map(coset_json).transpose()?,
    }))
}

#[derive(Serialize)]
struct VerifyReport {
    suite: &'static str,
    passed: bool,
    detail: serde_json::Value,
}

fn verify(suite: Suite, t_max: Option<usize>, seed: u64, samples: Option<usize>) -> Result<VerifyReport> {
    Ok(match suite {
        Suite::Theorem1 => {
            let t = t_max.unwrap_or(8);
            match oracle::theorem1_audit(t) {
                Ok(r) => VerifyReport { suite: "theorem1", passed: true, detail: serde_json::to_value(r)? },
                Err(e @ qcanon::Error::Audit(_)) => {
                    VerifyReport { suite: "theorem1", passed: false, detail: json!(e.to_string()) }
                }
                Err(e) => return Err(usage(e.to_string())),
            }
        }
        Suite::Parity => match oracle::parity_audit(samples.unwrap_or(1000), seed) {
            Ok(r) => VerifyReport { suite: "parity", passed: true, detail: serde_json::to_value(r)? },
            Err(e) => VerifyReport { suite: "parity", passed: false, detail: json!(e.to_string()) },
        },
        Suite::Counts => {
            let t = t_max.unwrap_or(10);
            let mut rows = Vec::new();
            let mut passed = true;
            for k in 0..=t {
                let oracle = oracle::coset_count(k).map_err(|e| usage(e.to_string()))?;
                let enumerated = catalog::enumerate_canonical(k as u32).count();
                passed &= oracle == enumerated;
                rows.push(json!({
                    "t": k,
                    "oracle": oracle,
                    "enumerated": enumerated,
                    "grammar_2^(t-3)+3": grammar_count(k as u32),
                    "quoted_2^(t-3)+4": quoted_count(k as u32),
                }));
            }
            VerifyReport { suite: "counts", passed, detail: json!(rows) }
        }
        Suite::Optimality => {
            let t = t_max.unwrap_or(12);
            if t > oracle::DESK_LIMIT {
                return Err(usage(format!("--t-max {t} exceeds {}", oracle::DESK_LIMIT)));
            }
            let db = catalog::build(t as u32)?;
            let layers = oracle::Layers::build(t.div_ceil(2));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut mismatches = Vec::new();
            let n = samples.unwrap_or(100);
            for i in 0..n {
                let u = haar_random(&mut rng);
                for eps in [0.3, 0.1] {
                    let r = approximate(&ApproxQuery::new(u, eps)?, &db);
                    let b = oracle::meet_in_the_middle(&layers, &u, eps, t).map(|x| x.0);
                    if r.found.then_some(r.t_count) != b {
                        mismatches.push(json!({"sample": i, "eps": eps, "search": r.t_count, "oracle": b}));
                    }
                }
            }
            VerifyReport {
                suite: "optimality",
                passed: mismatches.is_empty(),
                detail: json!({"samples": n, "t_max": t, "mismatches": mismatches}),
            }
        }
    })
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().map_err(|e| usage(e.to_string()))?;
    }
    match cli.cmd {
        Cmd::BuildDb { max_tcount, out, budget } => {
            let db = catalog::build_with_budget(max_tcount, budget).map_err(|e| match e {
                qcanon::Error::Budget { .. } => usage(e.to_string()),
                e => e.into(),
            })?;
            catalog::save(&db, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {} ({} circuits, t_max {})", out.display(), db.len(), max_tcount);
            println!("{}", db.stats());
            for k in 0..=max_tcount {
                println!("t<={k}: distinct_keys={}", db.distinct_keys_up_to(k));
            }
            Ok(true)
        }
        Cmd::Normalize { gates, json } => {
            let w = GateWord::parse(&gates).map_err(|e| usage(e.to_string()))?;
            let nf = normalize(&w);
            if json {
                println!("{}", serde_json::to_string_pretty(&normal_form_json(&nf))?);
            } else {
                println!("{nf}");
            }
            Ok(true)
        }
        Cmd::Canonicalize { gates, json } => {
            let w = GateWord::parse(&gates).map_err(|e| usage(e.to_string()))?;
            let c = canonicalize(&w);
            if json {
                println!("{}", serde_json::to_string_pretty(&coset_json(&c)?)?);
            } else {
                println!("{c}");
            }
            Ok(true)
        }
        Cmd::Approx { eps, db, target } => {
            let q = target_quat(&target, eps)?;
            let db = load_db(&db.db)?;
            let r = approximate(&q, &db);
            println!("{}", serde_json::to_string_pretty(&approx_json(&r)?)?);
            Ok(r.found)
        }
        Cmd::Sk { depth, db, target, trace } => {
            let q = target_quat(&target, 1.0)?;
            let db = load_db(&db.db)?;
            let mut cfg = SkConfig::new(&db);
            cfg.max_depth = depth.max(cfg.max_depth);
            let r = sk_approximate(&q.target, depth, &cfg).map_err(|e| match e {
                qcanon::Error::Depth { .. } => usage(e.to_string()),
                e => e.into(),
            })?;
            for (_, nf) in &r.intermediates {
                check_shape(nf)?;
            }
            if let Some(p) = trace {
                fs::write(&p, r.to_csv()).with_context(|| format!("writing {}", p.display()))?;
            }
            let out = json!({
                "circuit": normal_form_json(&r.circuit),
                "t_count": r.t_count,
                "dist": r.dist_per_level.last(),
                "levels": r.levels(),
                "compositions": {
                    "trivial": r.stats.trivial,
                    "no_cancel": r.stats.no_cancel,
                    "cancel": r.stats.cancel,
                    "cancel_sh_sh": r.stats.cancel_sh_sh,
                    "cascade": r.stats.cascade,
                    "t_saved": r.stats.t_saved,
                },
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Cmd::Bench { db, samples, seed, sk_depths } => {
            let db = load_db(&db.db)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let targets: Vec<Quat<f64>> = (0..samples).map(|_| haar_random(&mut rng)).collect();
            println!("series,t_count,mean_eps,samples");
            let mut by_t: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
            for u in &targets {
                let r = nearest(u, &db, 1e-3)?;
                let e = by_t.entry(r.t_count).or_default();
                e.0 += r.achieved_dist;
                e.1 += 1;
            }
            for (t, (sum, n)) in by_t {
                println!("level0,{t},{:.6e},{n}", sum / n as f64);
            }
            for d in sk_depths {
                let mut cfg = SkConfig::new(&db);
                cfg.max_depth = d.max(cfg.max_depth);
                let (mut tsum, mut dsum) = (0.0, 0.0);
                for u in &targets {
                    let r = sk_approximate(u, d, &cfg).map_err(|e| match e {
                        qcanon::Error::Depth { .. } => usage(e.to_string()),
                        e => e.into(),
                    })?;
                    tsum += r.t_count as f64;
                    dsum += r.dist_per_level[d as usize];
                }
                let n = targets.len().max(1) as f64;
                println!("sk{d},{:.2},{:.6e},{}", tsum / n, dsum / n, targets.len());
            }
            Ok(true)
        }
        Cmd::Verify { suite, t_max, seed, samples, json } => {
            let r = verify(suite, t_max, seed, samples)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!("{}: {}", r.suite, if r.passed { "PASS" } else { "FAIL" });
                println!("{}", serde_json::to_string_pretty(&r.detail)?);
            }
            Ok(r.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<Usage>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

//! Subcommands. Each returns a report plus the violations it found; the
//! binary decides the exit code from the latter.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kudo_core::entropy;
use kudo_core::kudo::{self, Side};
use kudo_core::partition::{Partition, TestFamily, MAX_EXHAUSTIVE_ATOMS};
use kudo_core::phi::{builtin_phi, validate_phi, Phi};
use kudo_core::space::{dominates_second_order, FiniteSpace};
use kudo_core::walk::eta::{eta_mu, GAMMA};
use kudo_core::walk::furstenberg::{entropy_identity_check, furstenberg_exact, kernel_condition_check};
use kudo_core::walk::harmonic::CylinderSpace;
use serde_json::{json, Value};

use crate::error::{CliError, Context, Result};
use crate::format;
use crate::mc::{self, DEFAULT_STREAMS};
use crate::report::{OutputFormat, Violation};
use crate::suites;

#[derive(Debug, Parser)]
#[command(name = "kudo", version, about = "Entropy, survival integrals and Kudō limits of σ-algebras on finite spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Override the tolerance of the checked relation.
    #[arg(long, global = true, env = "KUDO_TOL")]
    pub tol: Option<f64>,
    /// Seed for every randomized computation; required by `verify`, by Monte
    /// Carlo in `walk` and by sampled norm tests in `kudo`.
    #[arg(long, global = true, env = "KUDO_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "KUDO_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "KUDO_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "KUDO_FORMAT", value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Φ-entropy of a density, directly and by layers, with the survival
    /// integral sandwich at an optional cut-off.
    Entropy {
        #[arg(long)]
        density: PathBuf,
        /// `standard` or `power(p)` with p > 1.
        #[arg(long, default_value = "standard")]
        phi: String,
        /// Cut-off in (0, t_o) for the sandwich estimate.
        #[arg(long)]
        delta: Option<f64>,
        /// Also report H(A) = Ent(E_A f) for this partition.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Survival integral α_f and absolute moments ∫|f − t|.
    Alpha {
        #[arg(long)]
        density: PathBuf,
        /// Points at which to evaluate; the kinks of α_f when omitted.
        #[arg(long = "t", value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Conditional expectation of a density on a partition.
    Condexp {
        #[arg(long)]
        density: PathBuf,
        #[arg(long)]
        partition: PathBuf,
    },
    /// Upper and lower Kudō limits of an eventually periodic sequence.
    Kudo {
        #[arg(long)]
        sequence: PathBuf,
        /// Bounded density for the semicontinuity and quantitative checks.
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, default_value = "standard")]
        phi: String,
    },
    /// Harmonic measure, Radon-Nikodym cocycle and Furstenberg entropy of a
    /// nearest-neighbour walk on a free group.
    Walk {
        #[arg(long)]
        config: PathBuf,
    },
    /// Randomized verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, required_unless_present = "list")]
        suite: Option<String>,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub violations: Vec<Violation>,
}

impl Outcome {
    fn clean(report: Value) -> Self {
        Outcome {
            report,
            violations: Vec::new(),
        }
    }
}

fn violation(suite: &str, inputs: Value, lhs: f64, rhs: f64) -> Violation {
    Violation {
        suite: suite.to_string(),
        case: 0,
        inputs,
        lhs,
        rhs,
        gap: lhs - rhs,
    }
}

fn require_seed(global: &Global, what: &str) -> Result<u64> {
    global
        .seed
        .ok_or_else(|| CliError::Usage(format!("{what} is randomized: pass --seed or set KUDO_SEED")))
}

fn phi_from(name: &str) -> Result<kudo_core::phi::BuiltinPhi> {
    let phi = builtin_phi(name).context("--phi")?;
    validate_phi(&phi).context("--phi")?;
    Ok(phi)
}

fn blocks_json(p: &Partition) -> Value {
    let atoms = p.space().atoms();
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&i| atoms[i].clone()).collect::<Vec<_>>())
        .collect()
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    mc::with_threads(g.threads, || match &cli.command {
        Command::Entropy {
            density,
            phi,
            delta,
            partition,
        } => cmd_entropy(g, density, phi, *delta, partition.as_ref()),
        Command::Alpha { density, t } => cmd_alpha(g, density, t),
        Command::Condexp { density, partition } => cmd_condexp(g, density, partition),
        Command::Kudo { sequence, density, phi } => cmd_kudo(g, sequence, density.as_ref(), phi),
        Command::Walk { config } => cmd_walk(g, config),
        Command::Verify { suite, count, list } => cmd_verify(g, suite.as_deref(), *count, *list),
    })
}

pub fn cmd_entropy(
    g: &Global,
    density: &PathBuf,
    phi_name: &str,
    delta: Option<f64>,
    partition: Option<&PathBuf>,
) -> Result<Outcome> {
    let f = format::load_density(density)?;
    let phi = phi_from(phi_name)?;
    let tol = g.tol.unwrap_or(1e-9);
    let value = entropy::ent(&phi, &f);
    let layers = entropy::ent_layer_cake(&phi, &f);
    let mut report = json!({ "phi": phi.name(), "ent": value, "layer_cake": layers });
    let mut violations = Vec::new();
    let inputs = json!({ "density": density, "phi": phi.name() });
    if (value - layers).abs() > tol {
        violations.push(violation("layer_cake", inputs.clone(), (value - layers).abs(), tol));
    }
    if let Some(delta) = delta {
        let s = entropy::sandwich_check(&phi, &f, delta).context("--delta")?.sandwich;
        let gap = (value - s.middle).abs();
        report["sandwich"] = json!({
            "delta": s.delta,
            "middle": s.middle,
            "gap": gap,
            "bound": s.bound,
            "ok": gap <= s.bound + tol,
            "stated_bound": s.stated_bound,
            "stated_ok": s.stated_ok,
        });
        if gap > s.bound + tol {
            let mut inputs = inputs.clone();
            inputs["delta"] = json!(delta);
            violations.push(violation("sandwich", inputs, gap, s.bound));
        }
    }
    if let Some(path) = partition {
        let a = format::load_partition(path)?;
        let h = entropy::h_phi(&phi, &f, &a).context("partition")?;
        report["h_partition"] = json!(h);
        if h > value + tol {
            let mut inputs = inputs.clone();
            inputs["partition"] = json!(path);
            violations.push(violation("monotonicity", inputs, h, value));
        }
    }
    Ok(Outcome { report, violations })
}

pub fn cmd_alpha(g: &Global, density: &PathBuf, ts: &[f64]) -> Result<Outcome> {
    let f = format::load_density(density)?;
    let tol = g.tol.unwrap_or(1e-10);
    let points: Vec<f64> = if ts.is_empty() {
        let mut pts = vec![0.0];
        pts.extend(f.survival_profile().breakpoints());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    } else {
        ts.to_vec()
    };
    let mean = f.space().integrate(f.values());
    let mut rows = Vec::with_capacity(points.len());
    let mut violations = Vec::new();
    for t in points {
        let alpha = f.alpha(t).context(format!("t = {t}"))?;
        let moment = f.abs_moment(t).context(format!("t = {t}"))?;
        let gap = (moment - (2.0 * alpha - mean + t)).abs();
        if gap > tol {
            violations.push(violation("moment_identity", json!({ "density": density, "t": t }), gap, tol));
        }
        rows.push(json!({ "t": t, "alpha": alpha, "abs_moment": moment }));
    }
    Ok(Outcome {
        report: json!({ "mean": mean, "points": rows }),
        violations,
    })
}

pub fn cmd_condexp(g: &Global, density: &PathBuf, partition: &PathBuf) -> Result<Outcome> {
    let f = format::load_density(density)?;
    let a = format::load_partition(partition)?;
    let e = a.cond_exp_density(&f).context("conditional expectation")?;
    let tol = g.tol.unwrap_or(1e-12);
    let dominated = dominates_second_order(&e, &f, tol).context("domination")?;
    let report = json!({
        "blocks": blocks_json(&a),
        "block_masses": a.block_masses(),
        "values": e.values(),
        "dominated": dominated,
    });
    let violations = if dominated {
        Vec::new()
    } else {
        vec![violation("domination", json!({ "density": density, "partition": partition }), 1.0, 0.0)]
    };
    Ok(Outcome { report, violations })
}

fn test_family(space: &FiniteSpace, g: &Global) -> Result<TestFamily> {
    if space.len() <= MAX_EXHAUSTIVE_ATOMS {
        Ok(TestFamily::AllEvents)
    } else {
        Ok(TestFamily::Sampled {
            extra: 256,
            seed: require_seed(g, "the norm test on more than 20 atoms")?,
        })
    }
}

pub fn cmd_kudo(g: &Global, sequence: &PathBuf, density: Option<&PathBuf>, phi_name: &str) -> Result<Outcome> {
    let seq = format::load_sequence(sequence)?;
    let limits = kudo::kudo_limits(&seq);
    let family = test_family(seq.space(), g)?;
    let tol = g.tol.unwrap_or(1e-12);
    let upper = kudo::verify_sigma_membership(&seq, &limits.a_plus, Side::Upper, family, tol).context("Σ⁺")?;
    let lower = kudo::verify_sigma_membership(&seq, &limits.a_minus, Side::Lower, family, tol).context("Σ⁻")?;
    let mut report = json!({
        "a_plus": blocks_json(&limits.a_plus),
        "a_minus": blocks_json(&limits.a_minus),
        "converges": limits.converges,
        "a_plus_upper": upper,
        "a_minus_lower": lower,
    });
    let mut violations = Vec::new();
    let inputs = json!({ "sequence": sequence });
    if !upper || !lower {
        violations.push(violation("kudo", inputs.clone(), f64::from(u8::from(!upper) + u8::from(!lower)), 0.0));
    }
    if let Some(path) = density {
        let rho = format::load_density(path)?;
        let phi = phi_from(phi_name)?;
        let s = kudo::semicontinuity_experiment(&phi, &rho, &seq).context("semicontinuity")?;
        report["semicontinuity"] = json!({
            "h_minus": s.h_minus,
            "min_period": s.min_period,
            "max_period": s.max_period,
            "h_plus": s.h_plus,
            "ok": s.ok,
        });
        let mut inputs = inputs.clone();
        inputs["density"] = json!(path);
        if !s.ok {
            let gap = (s.h_minus - s.min_period)
                .max(s.min_period - s.max_period)
                .max(s.max_period - s.h_plus);
            violations.push(violation("semicontinuity", inputs.clone(), gap, 0.0));
        }
        if rho.min() > 0.0 {
            let q = entropy::quant_bound_check(&rho, &limits.a_plus, seq.period()).context("quantitative bound")?;
            report["quant_bound"] = json!({ "lambda": q.lambda, "lhs": q.lhs, "rhs": q.rhs, "ok": q.ok });
            if !q.ok {
                violations.push(violation("quant_bound", inputs, q.lhs, q.rhs));
            }
        }
    }
    Ok(Outcome { report, violations })
}

pub fn cmd_walk(g: &Global, config: &PathBuf) -> Result<Outcome> {
    let spec = format::load_walk(config)?;
    let file = config.display().to_string();
    let law = format::build_law(&file, &spec)?;
    let cyl = CylinderSpace::new(law.clone(), spec.depth).context(file.clone())?;
    let h = furstenberg_exact(&cyl);
    let eta = eta_mu(&law, spec.terms);
    let mut report = json!({
        "k": spec.k,
        "L": spec.depth,
        "K": spec.terms,
        "cylinders": cyl.len(),
        "h": h,
        "gamma": GAMMA,
        "gamma_truncated": eta.gamma_truncated(),
    });
    let mut violations = Vec::new();
    let inputs = json!({ "config": config });
    if eta.max_len() <= spec.depth {
        let r = entropy_identity_check(&cyl, &eta).context("layer identity")?;
        let layers: Vec<Value> = r
            .layers
            .iter()
            .map(|l| json!({ "j": l.j, "lhs": l.lhs, "rhs": l.rhs }))
            .collect();
        report["identity"] = json!({ "layers": layers, "lhs_total": r.lhs_total, "rhs_total": r.rhs_total, "ok": r.ok });
        if !r.ok {
            let gap = r
                .layers
                .iter()
                .map(|l| (l.lhs - l.rhs).abs())
                .fold((r.lhs_total - r.rhs_total).abs(), f64::max);
            violations.push(violation("layer_identity", inputs.clone(), gap, 0.0));
        }
    }
    let k = kernel_condition_check(&cyl, &eta);
    report["kernel"] = json!({
        "lambda_letter": k.lambda_letter,
        "bounded": k.bounded,
        "averaged_entropy": k.averaged_entropy,
        "rank": k.rank,
        "atoms": k.atoms,
        "dense": k.dense,
    });
    // spanning needs enough convolution terms, so only boundedness is asserted
    if !k.bounded {
        violations.push(violation("kernel", inputs, 1.0, 0.0));
    }
    if let Some(samples) = spec.samples {
        let seed = match g.seed.or(spec.seed) {
            Some(s) => s,
            None => require_seed(g, "Monte Carlo")?,
        };
        let streams = spec.streams.unwrap_or(DEFAULT_STREAMS);
        let est = mc::furstenberg_parallel(&cyl, seed, samples, streams).context("Monte Carlo")?;
        report["monte_carlo"] = json!({
            "seed": seed,
            "samples": est.samples,
            "streams": streams,
            "mean": est.mean,
            "stderr": est.stderr,
        });
    }
    Ok(Outcome { report, violations })
}

pub fn cmd_verify(g: &Global, suite: Option<&str>, count: u64, list: bool) -> Result<Outcome> {
    if list {
        let all: Vec<Value> = suites::suites().map(|(n, a)| json!({ "suite": n, "checks": a })).collect();
        return Ok(Outcome::clean(json!({ "suites": all })));
    }
    let seed = require_seed(g, "verify")?;
    let name = suite.ok_or_else(|| CliError::Usage("--suite is required".into()))?;
    let names: Vec<&str> = if name == "all" {
        suites::suites().map(|(n, _)| n).filter(|n| *n != "sandwich_stated").collect()
    } else {
        vec![name]
    };
    let mut summaries = Vec::new();
    let mut violations = Vec::new();
    for n in names {
        let run = suites::run_suite(n, seed, count, g.tol)?;
        summaries.push(serde_json::to_value(&run.summary).expect("summary serializes"));
        violations.extend(run.violations);
    }
    let report = if summaries.len() == 1 {
        summaries.pop().expect("one summary")
    } else {
        json!({ "suites": summaries })
    };
    Ok(Outcome { report, violations })
}

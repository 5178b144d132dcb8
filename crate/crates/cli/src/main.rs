//! Command-line verification pipelines.
//!
//! Every subcommand consumes a deterministic configuration (model, sample
//! count, seed) and emits a JSON report; the same configuration always
//! produces byte-identical output. Exit codes: 0 when every checked contract
//! holds, 1 when a violation is reported, 2 on usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cartankit::flatmodel::{origin, ModelPoint};
use cartankit::graded::{
    codifferential, decompose_curvature, is_normal, is_torsion_free, Cochain2, Cochain2Repr,
    GradedAlgebra,
};
use cartankit::model::ModelTag;
use cartankit::nonhomog::{
    homogeneity_probe, line_point_symmetry_certificate, line_symmetry_detailed,
    off_line_symmetry, PuncturedModel,
};
use cartankit::ratlin::Rat;
use cartankit::sample;
use cartankit::symmetries::{
    check_loos_axioms, doubled_identity, enumerate_origin_symmetries, tangent_doubling_check,
    AxiomReport, SymmetrySystem, SystemDescriptor,
};
use cartankit::weyl::{cocycle_check, upsilon_from_system, CheckReport, Frame, GaugeVerdict};

#[derive(Parser)]
#[command(
    name = "cartankit",
    about = "Exact verification pipelines for flat parabolic models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the symmetries of a model centered at the origin.
    FlatSymmetries(FlatSymmetriesArgs),
    /// Check the multiplication laws and tangent doubling of a system.
    CheckSystem(CheckSystemArgs),
    /// Compute the candidate invariant gauge and test its invariance.
    InvariantWeyl(InvariantWeylArgs),
    /// Reconstruct the punctured projective model and its certificates.
    ExampleNonhomog(ExampleNonhomogArgs),
    /// Decide normality and torsion-freeness of a supplied curvature cochain.
    NormalityCheck(NormalityCheckArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Model kind: "projective" or "conformal".
    #[arg(long)]
    model: String,
    /// Projective dimension parameter.
    #[arg(long)]
    m: Option<usize>,
    /// Conformal signature, positive part.
    #[arg(long)]
    p: Option<usize>,
    /// Conformal signature, negative part.
    #[arg(long)]
    q: Option<usize>,
}

impl ModelArgs {
    fn tag(&self) -> Result<ModelTag, String> {
        let tag = match self.model.as_str() {
            "projective" => ModelTag::Projective {
                m: self.m.ok_or("projective models need --m")?,
            },
            "conformal" => ModelTag::Conformal {
                p: self.p.ok_or("conformal models need --p")?,
                q: self.q.ok_or("conformal models need --q")?,
            },
            other => return Err(format!("unknown model {other:?}")),
        };
        tag.validate().map_err(|e| e.to_string())?;
        Ok(tag)
    }
}

#[derive(Args)]
struct FlatSymmetriesArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSystemArgs {
    /// Path to a system descriptor JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Number of sample pairs.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantWeylArgs {
    /// Path to a system descriptor JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Number of sampled frames carrying gauge values.
    #[arg(long, default_value_t = 50)]
    frames: usize,
    /// Number of (point, frame) samples for the invariance identity.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleNonhomogArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random line points checked against the closed column form.
    #[arg(long, default_value_t = 100)]
    line_samples: usize,
    /// Random allowed automorphisms for the confinement probe.
    #[arg(long, default_value_t = 1000)]
    automorphism_samples: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct NormalityCheckArgs {
    /// Path to `{"model": ..., "cochain": {"pairs": [...]}}`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::FlatSymmetries(args) => flat_symmetries(args),
        Command::CheckSystem(args) => check_system(args),
        Command::InvariantWeyl(args) => invariant_weyl(args),
        Command::ExampleNonhomog(args) => example_nonhomog(args),
        Command::NormalityCheck(args) => normality_check(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn thread_count() -> usize {
    std::env::var("CARTANKIT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Fans independent sample checks across up to `threads` workers and merges
/// the per-chunk results in sample order.
fn run_chunked<T, R, F>(items: &[T], threads: usize, f: F) -> Result<Vec<R>, String>
where
    T: Sync,
    R: Send,
    F: Fn(&[T]) -> Result<R, String> + Sync,
{
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let workers = threads.min(items.len()).max(1);
    if workers == 1 {
        return Ok(vec![f(items)?]);
    }
    let chunk = items.len().div_ceil(workers);
    let results: Vec<Result<R, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| f(part)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    results.into_iter().collect()
}

fn emit(doc: &Value, output: Option<&PathBuf>) -> Result<(), String> {
    let text = format!("{}\n", serde_json::to_string_pretty(doc).expect("serializable"));
    match output {
        Some(path) => fs::write(path, text).map_err(|e| format!("writing {path:?}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("parsing {path:?}: {e}"))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable report")
}

fn flat_symmetries(args: FlatSymmetriesArgs) -> Result<ExitCode, String> {
    let tag = args.model.tag()?;
    let algebra = GradedAlgebra::from_model(&tag).map_err(|e| e.to_string())?;
    let family = enumerate_origin_symmetries(&algebra);
    let doc = json!({
        "model": to_value(&tag),
        "g0_class": family.g0_class.as_ref().map(|g| to_value(g.rep())),
        "z_dim": family.z_dim,
        "nullspace_rank": family.nullspace_rank,
        "unique": family.nullspace_rank == 0,
        "symmetric": family.g0_class.is_some(),
    });
    emit(&doc, args.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn load_system(path: &PathBuf) -> Result<SymmetrySystem, String> {
    let raw = read_json(path)?;
    let descriptor: SystemDescriptor =
        serde_json::from_value(raw).map_err(|e| format!("invalid system descriptor: {e}"))?;
    SymmetrySystem::from_descriptor(&descriptor).map_err(|e| e.to_string())
}

fn sample_pairs(
    system: &SymmetrySystem,
    samples: usize,
    seed: u64,
) -> Result<Vec<(ModelPoint, ModelPoint)>, String> {
    match system.table_points() {
        Some(_) => sample::table_system_pairs(system, samples).map_err(|e| e.to_string()),
        None => {
            let mut rng = sample::stream(seed, 1);
            Ok(sample::random_in_cell_pairs(&mut rng, *system.model(), samples, 5))
        }
    }
}

fn check_system(args: CheckSystemArgs) -> Result<ExitCode, String> {
    let system = load_system(&args.input)?;
    let pairs = sample_pairs(&system, args.samples, args.seed)?;
    let reports = run_chunked(&pairs, thread_count(), |chunk| {
        check_loos_axioms(&system, chunk).map_err(|e| e.to_string())
    })?;
    let loos = reports
        .into_iter()
        .fold(AxiomReport::default(), AxiomReport::merge);

    let doubling = match &system {
        SymmetrySystem::Conjugation(_) => {
            let x0 = origin(*system.model());
            let jac = tangent_doubling_check(&system, &x0).map_err(|e| e.to_string())?;
            let expected = doubled_identity(system.model().base_dim());
            let ok = jac == expected;
            Some((jac, ok))
        }
        SymmetrySystem::Table(_) => None,
    };

    let pass = loos.passed() && doubling.as_ref().is_none_or(|(_, ok)| *ok);
    let doc = json!({
        "config": {
            "system": to_value(&system.descriptor()),
            "samples": args.samples,
            "seed": args.seed,
        },
        "loos": to_value(&loos),
        "tangent_doubling": doubling.as_ref().map(|(jac, ok)| json!({
            "jacobian": to_value(jac),
            "doubles_identity": ok,
        })),
        "pass": pass,
    });
    emit(&doc, args.output.as_ref())?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

type GaugeSamples = (Vec<Frame>, Vec<(ModelPoint, Frame)>);

/// Frames and (point, frame) samples for a system: random over the big cell
/// for conjugation rules, and the covered in-cell points for tables
/// (restricted to samples whose gauge lookups stay covered).
fn gauge_samples(
    system: &SymmetrySystem,
    frames: usize,
    samples: usize,
    seed: u64,
) -> Result<GaugeSamples, String> {
    let algebra = system.algebra();
    match system.table_points() {
        None => {
            let mut rng = sample::stream(seed, 2);
            let frames: Vec<Frame> = (0..frames.max(1))
                .map(|_| sample::random_frame(&mut rng, algebra, 4))
                .collect();
            let pairs = (0..samples)
                .map(|i| {
                    let x = sample::random_in_cell_point(&mut rng, *system.model(), 4);
                    (x, frames[i % frames.len()].clone())
                })
                .collect();
            Ok((frames, pairs))
        }
        Some(points) => {
            let in_cell: Vec<&ModelPoint> =
                points.iter().filter(|p| p.is_in_cell()).collect();
            let frame_list: Vec<Frame> = in_cell
                .iter()
                .take(frames.max(1))
                .map(|p| {
                    Frame::canonical(algebra, &p.affine_coords().expect("in cell"))
                        .map_err(|e| e.to_string())
                })
                .collect::<Result<_, String>>()?;
            let mut pairs = Vec::new();
            'outer: for x in &in_cell {
                for f in &frame_list {
                    if pairs.len() == samples {
                        break 'outer;
                    }
                    // keep samples whose displacement lookups stay covered
                    let s = match system.symmetry_at(x) {
                        Ok(s) => s,
                        Err(_) => continue,
                    };
                    let reachable = cartankit::weyl::displacement(&s.element, f)
                        .ok()
                        .map(|(_, image)| image.base_point())
                        .is_some_and(|p| system.covers(&p));
                    if reachable {
                        pairs.push(((*x).clone(), f.clone()));
                    }
                }
            }
            Ok((frame_list, pairs))
        }
    }
}

fn invariant_weyl(args: InvariantWeylArgs) -> Result<ExitCode, String> {
    let system = load_system(&args.input)?;
    let (frames, pairs) = gauge_samples(&system, args.frames, args.samples, args.seed)?;
    let upsilon = upsilon_from_system(&system, &frames).map_err(|e| e.to_string())?;
    let reports = run_chunked(&pairs, thread_count(), |chunk| {
        cocycle_check(&system, &upsilon, chunk).map_err(|e| e.to_string())
    })?;
    let mut report = reports
        .into_iter()
        .fold(CheckReport::default(), CheckReport::merge);
    report.vacuous = pairs.is_empty();
    let verdict = match report.violations.first() {
        None => GaugeVerdict::Invariant,
        Some(w) => GaugeVerdict::FiberwiseOnly { witness: w.clone() },
    };

    let upsilon_samples: Vec<Value> = frames
        .iter()
        .map(|f| {
            let value = upsilon.evaluate(f).map_err(|e| e.to_string())?;
            Ok(json!({
                "frame": to_value(&f.descriptor()),
                "value": to_value(&value.grade_vector(1)),
            }))
        })
        .collect::<Result<_, String>>()?;

    let invariant = matches!(verdict, GaugeVerdict::Invariant);
    let doc = json!({
        "config": {
            "system": to_value(&system.descriptor()),
            "frames": args.frames,
            "samples": args.samples,
            "seed": args.seed,
        },
        "upsilon_samples": upsilon_samples,
        "verdict": to_value(&verdict),
        "witnesses": to_value(&report.violations),
        "samples_checked": report.samples_checked,
        "vacuous": report.vacuous,
    });
    emit(&doc, args.output.as_ref())?;
    Ok(if invariant { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn example_nonhomog(args: ExampleNonhomogArgs) -> Result<ExitCode, String> {
    let model = PuncturedModel::new(args.m).map_err(|e| e.to_string())?;
    let mut rng = sample::stream(args.seed, 3);

    let mut nonzero_residuals = 0usize;
    let mut swap_failures = 0usize;
    let mut preserve_solvable = 0usize;
    let mut swap_dims_ok = true;
    for _ in 0..args.line_samples {
        let x_m = sample::random_nonzero_rat(&mut rng, 6);
        let x_m1 = sample::random_nonzero_rat(&mut rng, 6);
        let data = line_symmetry_detailed(&model, &x_m, &x_m1).map_err(|e| e.to_string())?;
        if data.residual_col_m.iter().any(|r| !r.is_zero())
            || data.residual_col_m1.iter().any(|r| !r.is_zero())
        {
            nonzero_residuals += 1;
        }
        if !data.swaps_removed_points {
            swap_failures += 1;
        }
        let cert =
            line_point_symmetry_certificate(&model, &x_m, &x_m1).map_err(|e| e.to_string())?;
        if cert.preserve_has_solution {
            preserve_solvable += 1;
        }
        swap_dims_ok &= cert.swap_solution_dim == Some(args.m - 1);
    }

    let probe = homogeneity_probe(&model, &mut rng, args.automorphism_samples, 10)
        .map_err(|e| e.to_string())?;

    // witness symmetries: one off the line (at the origin), one on it
    let o = origin(model.tag());
    let off_witness = off_line_symmetry(&o, &model).map_err(|e| e.to_string())?;
    let line_witness = line_symmetry_detailed(&model, &Rat::from_int(1), &Rat::from_int(2))
        .map_err(|e| e.to_string())?;

    let pass = nonzero_residuals == 0
        && swap_failures == 0
        && preserve_solvable == 0
        && swap_dims_ok
        && probe.escapes == 0
        && !probe.vacuous;
    let doc = json!({
        "config": {
            "m": args.m,
            "seed": args.seed,
            "line_samples": args.line_samples,
            "automorphism_samples": args.automorphism_samples,
        },
        "column_formula": {
            "samples": args.line_samples,
            "nonzero_residuals": nonzero_residuals,
            "swap_failures": swap_failures,
        },
        "preserve_certificate": {
            "solvable_cases": preserve_solvable,
            "swap_dimension_matches": swap_dims_ok,
        },
        "probe": to_value(&probe),
        "witness_symmetries": {
            "off_line": {
                "center": to_value(&off_witness.center),
                "element": to_value(off_witness.element.rep()),
            },
            "line": {
                "center": to_value(&line_witness.symmetry.center),
                "element": to_value(line_witness.symmetry.element.rep()),
            },
        },
        "pass": pass,
    });
    emit(&doc, args.output.as_ref())?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn normality_check(args: NormalityCheckArgs) -> Result<ExitCode, String> {
    let raw = read_json(&args.input)?;
    let model: ModelTag = serde_json::from_value(
        raw.get("model").cloned().ok_or("input needs a \"model\" field")?,
    )
    .map_err(|e| format!("invalid model: {e}"))?;
    let repr: Cochain2Repr = serde_json::from_value(
        raw.get("cochain").cloned().ok_or("input needs a \"cochain\" field")?,
    )
    .map_err(|e| format!("invalid cochain: {e}"))?;
    let algebra: Arc<GradedAlgebra> =
        GradedAlgebra::from_model(&model).map_err(|e| e.to_string())?;
    let kappa = Cochain2::from_repr(&algebra, &repr).map_err(|e| e.to_string())?;

    let normal = is_normal(&kappa);
    let torsion_free = is_torsion_free(&kappa);
    let parts = decompose_curvature(&kappa);
    if parts.reassemble() != kappa {
        return Err("internal: decomposition failed to reassemble".into());
    }
    let nonzero = |c: &Cochain2| {
        c.values().iter().filter(|v| v.iter().any(|x| !x.is_zero())).count()
    };
    let mut doc = json!({
        "normal": normal,
        "torsion_free": torsion_free,
        "decomposition": {
            "torsion_pairs": nonzero(&parts.torsion),
            "weyl_pairs": nonzero(&parts.weyl),
            "cotton_york_pairs": nonzero(&parts.cotton_york),
        },
    });
    if !normal {
        let witness = codifferential(&kappa);
        doc["codifferential_columns"] = to_value(&witness.columns());
    }
    emit(&doc, args.output.as_ref())?;
    Ok(if normal && torsion_free { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

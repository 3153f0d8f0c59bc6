//! `cy3`: construct subcanonical codimension-3/4 subschemes over prime
//! fields, resolve them, and compute their Calabi-Yau invariants.
//!
//! Exit codes: 0 success, 2 verdict failure (e.g. not smooth, or the
//! distinguisher finding nothing), 3 resource budget exceeded, 1 other
//! errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use cy3::complexes::{build_km_complex, quasi_self_dual_check, verify_complex};
use cy3::gb::Ideal;
use cy3::hilbert::{cy_invariants_from_hp, hilbert_polynomial, locus_dimension};
use cy3::io::{format_ideal_file, parse_ideal_file};
use cy3::pipeline::{
    c3_of, coarse_smoothness, construct, deformation_distinguisher, hodge, reproduce, rho_check,
    DistinguishVerdict, Preset, Rng, RhoVerdict, SmoothVerdict,
};
use cy3::resolve::{betti_table, minimal_free_resolution, BettiTable};
use cy3::Error;

#[derive(Parser)]
#[command(name = "cy3", version, about = "Calabi-Yau 3-folds from Pfaffian, Gulliksen-Negard and Kustin-Miller complexes over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Prime modulus of the base field.
    #[arg(long, default_value_t = 101)]
    prime: u32,
    /// Base seed for all random draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Abort Groebner runs after this many reduction steps.
    #[arg(long)]
    budget_steps: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a preset ideal and write it in the ideal file format.
    Construct {
        /// One of: deg15, deg17gn, deg17km, deg20gn, deg14p6.
        preset: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Output file (defaults to stdout).
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Minimal free resolution Betti table of an ideal file.
    Betti {
        ideal: PathBuf,
        /// Also write the canonical Betti JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Hilbert series numerator, polynomial, dimension and CY invariants.
    Hilbert { ideal: PathBuf },
    /// Coarse smoothness test on a 3-fold ideal.
    Smooth {
        ideal: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        /// Degree of the random triples.
        #[arg(long, default_value_t = 2)]
        e: u32,
    },
    /// Full invariant run on an ideal file (smoothness, c3, rho, Hodge).
    Invariants {
        ideal: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 2)]
        e: u32,
        /// Write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The rho = 1 vanishing criterion.
    Rho { ideal: PathBuf },
    /// Build a complex from a preset's data and verify its contracts.
    VerifyComplex {
        /// Complex family; only `km` builds a checkable length-4 complex.
        #[arg(long, default_value = "km")]
        family: String,
        /// Preset supplying twist data (deg17km) or `zero` for the
        /// all-zero-twist pattern with l1 = l2 = 1.
        #[arg(long, default_value = "deg17km")]
        preset: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Alternating-matrix size for the `zero` pattern.
        #[arg(long, default_value_t = 5)]
        tau: usize,
    },
    /// End-to-end reproduction of a preset's invariants.
    Reproduce {
        preset: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Number of seeds to try before giving up.
        #[arg(long, default_value_t = 10)]
        seed_budget: u64,
        /// Write the InvariantReport as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare two Betti JSON files by minimal generator degree.
    Distinguish { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(budget) = budget_of(&cli.command) {
        cy3::gb::set_default_step_budget(Some(budget));
    }
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {:#}", err);
            for cause in err.chain() {
                if let Some(Error::Budget(_)) = cause.downcast_ref::<Error>() {
                    return ExitCode::from(3);
                }
                if let Some(Error::SeedBudget { .. }) = cause.downcast_ref::<Error>() {
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(1)
        }
    }
}

fn budget_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Construct { common, .. }
        | Command::Smooth { common, .. }
        | Command::Invariants { common, .. }
        | Command::VerifyComplex { common, .. }
        | Command::Reproduce { common, .. } => common.budget_steps,
        _ => None,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Construct { preset, common, output } => {
            let preset = Preset::from_str(&preset)?;
            let built = construct(preset, common.prime, common.seed)?;
            let provenance = vec![
                format!(
                    "cy3 construct {} --prime {} --seed {}",
                    preset.id(),
                    common.prime,
                    common.seed
                ),
                format!("family={} canonical_twist={}", built.meta.family, built.meta.canonical_twist),
                format!("version={}", env!("CARGO_PKG_VERSION")),
            ];
            let text = format_ideal_file(&built.ideal, &provenance);
            match output {
                Some(path) => write_atomic(&path, text.as_bytes())?,
                None => print!("{}", text),
            }
            eprintln!(
                "constructed {}: dim {} over F_{} (seed {})",
                preset.id(),
                built.meta.dimension,
                common.prime,
                common.seed
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Betti { ideal, json } => {
            let i = load_ideal(&ideal)?;
            let t = Instant::now();
            let res = minimal_free_resolution(&i)?;
            let table = betti_table(&res)?;
            eprintln!("resolution computed in {:.1?}", t.elapsed());
            print!("{}", table);
            if let Some(path) = json {
                write_atomic(&path, serde_json::to_string_pretty(&table.to_json())?.as_bytes())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hilbert { ideal } => {
            let i = load_ideal(&ideal)?;
            let dim = locus_dimension(&i)?;
            let hp = hilbert_polynomial(&i)?;
            println!("dimension: {}", dim);
            println!("hilbert polynomial: {}", hp);
            if dim == 3 {
                match cy_invariants_from_hp(&hp, i.ring().nvars()) {
                    Ok((d, c2h, ln)) => {
                        println!("d = {}, c2.H = {}, linearly normal: {}", d, c2h, ln)
                    }
                    Err(e) => println!("not of Calabi-Yau shape: {}", e),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Smooth { ideal, common, e } => {
            let i = load_ideal(&ideal)?;
            let mut rng = Rng::new(common.seed).child("smooth");
            let report = coarse_smoothness(&i, e, &mut rng)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.verdict == SmoothVerdict::Smooth {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::Invariants { ideal, common, e, json } => {
            let i = load_ideal(&ideal)?;
            let report = invariants_of_ideal(&i, e, common.seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(path) = json {
                write_atomic(&path, serde_json::to_string_pretty(&report)?.as_bytes())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rho { ideal } => {
            let i = load_ideal(&ideal)?;
            let res = minimal_free_resolution(&i)?;
            let report = rho_check(&i, &res)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.verdict == RhoVerdict::RhoOne {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Command::VerifyComplex { family, preset, common, tau } => {
            if family != "km" {
                return Err(anyhow!("only --family km builds a verifiable complex here"));
            }
            let data = km_data_for(&preset, common.prime, common.seed, tau)?;
            let (complex, _) = build_km_complex(&data)?;
            let report = verify_complex(&complex)?;
            let g4 = data.g4_twist();
            let qsd = quasi_self_dual_check(&complex, g4);
            println!(
                "compositions zero: {}; homogeneous: {}; quasi-self-dual (g4={}): {}",
                if report.compositions_zero { "OK" } else { "FAIL" },
                if report.homogeneous { "OK" } else { "FAIL" },
                g4,
                if qsd { "OK" } else { "FAIL" },
            );
            if report.pass() && qsd {
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(ExitCode::from(2))
            }
        }
        Command::Reproduce { preset, common, seed_budget, json } => {
            let preset = Preset::from_str(&preset)?;
            let out = reproduce(preset, common.prime, common.seed, seed_budget)?;
            println!("{}", serde_json::to_string_pretty(&out.report)?);
            if let Some(path) = json {
                write_atomic(&path, serde_json::to_string_pretty(&out.report)?.as_bytes())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Distinguish { a, b } => {
            let ta = load_betti(&a)?;
            let tb = load_betti(&b)?;
            match deformation_distinguisher(&ta, &tb)? {
                DistinguishVerdict::NotDeformationEquivalent { s1, s2 } => {
                    println!(
                        "not deformation equivalent: minimal generator degrees {} vs {}",
                        s1, s2
                    );
                    Ok(ExitCode::SUCCESS)
                }
                DistinguishVerdict::Indeterminate => {
                    println!("indeterminate: equal minimal generator degrees");
                    Ok(ExitCode::from(2))
                }
            }
        }
    }
}

/// The `invariants` verb mirrors `reproduce` on an already-built ideal.
fn invariants_of_ideal(
    ideal: &Ideal,
    e: u32,
    seed: u64,
) -> anyhow::Result<serde_json::Value> {
    let mut timings: BTreeMap<String, u128> = BTreeMap::new();
    let t = Instant::now();
    let mut rng = Rng::new(seed).child("smooth");
    let smooth = coarse_smoothness(ideal, e, &mut rng)?;
    timings.insert("smoothness".into(), t.elapsed().as_millis());
    if smooth.verdict != SmoothVerdict::Smooth {
        return Err(Error::NotSmooth(format!("{:?}", smooth.verdict)).into());
    }
    let t = Instant::now();
    let res = minimal_free_resolution(ideal)?;
    let betti = betti_table(&res)?;
    timings.insert("resolution".into(), t.elapsed().as_millis());
    let hp = hilbert_polynomial(ideal)?;
    let (d, c2h, linearly_normal) = cy_invariants_from_hp(&hp, ideal.ring().nvars())?;
    let t = Instant::now();
    let mut rng = Rng::new(seed).child("c3");
    let (c3, pa, curve) = c3_of(ideal, e, &mut rng, 10)?;
    timings.insert("c3".into(), t.elapsed().as_millis());
    let rho = rho_check(ideal, &res)?;
    let (h11, h12) = hodge(c3, &rho)?;
    Ok(serde_json::json!({
        "prime": ideal.ring().modulus(),
        "seed": seed,
        "d": d,
        "c2H": c2h,
        "linearly_normal": linearly_normal,
        "e": e,
        "curve_degree": curve.degree,
        "pa": pa,
        "c3": c3,
        "rho": match rho.verdict { RhoVerdict::RhoOne => "rho=1", RhoVerdict::Unverified => "unverified" },
        "h11": h11,
        "h12": h12,
        "betti": betti.to_json(),
        "smoothness": smooth,
        "timings_ms": timings,
    }))
}

fn km_data_for(
    preset: &str,
    prime: u32,
    seed: u64,
    tau: usize,
) -> anyhow::Result<cy3::complexes::KmData> {
    use cy3::complexes::KmData;
    use cy3::pipeline::{random_form, random_nonzero_form};
    use cy3::ring::Ring;
    match preset {
        "deg17km" => {
            let built = construct(Preset::Deg17Km, prime, seed)?;
            let data = KmData::from_json(&built.meta.data)?;
            Ok(data)
        }
        "zero" => {
            if tau % 2 == 0 || tau < 3 {
                return Err(anyhow!("tau must be odd >= 3"));
            }
            let ring = Ring::new(prime, 8)?;
            let root = Rng::new(seed).child("zero-km");
            let a = vec![0i64; tau];
            let f = [0i64; 3];
            let y = {
                let mut upper = Vec::new();
                let mut r = root.child("Y");
                for _ in 0..tau * (tau - 1) / 2 {
                    upper.push(random_form(&ring, 1, &mut r));
                }
                cy3::complexes::AlternatingMatrix::new(ring, a.clone(), 1, upper)?
            };
            let mut ar = root.child("A");
            let a_mat = (0..tau)
                .map(|_| (0..3).map(|_| random_form(&ring, 0, &mut ar)).collect())
                .collect();
            let mut br = root.child("b");
            let b_row = (0..3).map(|_| random_form(&ring, 1, &mut br)).collect();
            let s = (tau as i64 - 1) / 2;
            let u = random_nonzero_form(&ring, (s - 1).max(0) as u32, &mut root.child("u"));
            let v = random_nonzero_form(&ring, 0, &mut root.child("v"));
            Ok(KmData::new(ring, a, f, 1, 1, y, a_mat, b_row, u, v)?)
        }
        other => Err(anyhow!("unknown verify-complex preset '{}'", other)),
    }
}

fn load_ideal(path: &Path) -> anyhow::Result<Ideal> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_ideal_file(&text)?)
}

fn load_betti(path: &Path) -> anyhow::Result<BettiTable> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    Ok(BettiTable::from_json(&v)?)
}

/// Write via a sibling temp file and rename, so readers never see a torn
/// file.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

//! Slow acceptance criteria: the coarse smoothness runs with their `c3`
//! computations (criterion 6) and the degree-0 deformation counts
//! (criterion 8). Each run fits the stated one-hour desktop budget but is
//! far too heavy for the default suite; run with
//!
//! ```text
//! cargo test --test acceptance_slow -- --ignored --test-threads 1
//! ```

use std::time::Instant;

use cy3::pipeline::{c3_of, coarse_smoothness, construct, Preset, Rng, SmoothVerdict};
use cy3::resolve::t1_degree0;

/// Runs construction + smoothness over the seed budget, then the c3 curve.
fn smoothness_and_c3(preset: Preset, want_c3: i64, want_pa: i64) {
    let clock = Instant::now();
    let budget = 10u64;
    let mut smooth_seed = None;
    for seed in 1..=budget {
        let built = match construct(preset, 101, seed) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let mut rng = Rng::new(seed).child("smooth");
        let report = coarse_smoothness(&built.ideal, preset.smoothness_degree(), &mut rng)
            .expect("smoothness run");
        eprintln!(
            "{} seed {}: verdict {:?} after {:?}",
            preset.id(),
            seed,
            report.verdict,
            clock.elapsed()
        );
        if report.verdict == SmoothVerdict::Smooth {
            smooth_seed = Some((seed, built));
            break;
        }
    }
    let (seed, built) =
        smooth_seed.unwrap_or_else(|| panic!("{}: no smooth verdict within {} seeds", preset.id(), budget));
    let mut rng = Rng::new(seed).child("c3");
    let (c3, pa, curve) =
        c3_of(&built.ideal, preset.c3_degree(), &mut rng, 10).expect("c3 curve");
    assert_eq!(c3, want_c3, "{}: c3", preset.id());
    assert_eq!(pa, want_pa, "{}: curve arithmetic genus", preset.id());
    println!(
        "criterion 6 PASS [{}]: smooth (seed {}), c3 = {} from a degree-{} curve of genus {} ({:?})",
        preset.id(),
        seed,
        c3,
        curve.degree,
        pa,
        clock.elapsed()
    );
}

/// Criterion 6, deg15: smooth within the seed budget; c3 = -150. The
/// degeneracy curves live in degree 3 (the quadrics of this ideal span the
/// Pfaffian 4-fold's ideal, whose conormal has rank 3, so degree-2 triples
/// give surfaces); the computed curve has pa = 190, forced by c3 = -150.
#[test]
#[ignore = "slow: about five minutes"]
fn criterion_06_smoothness_and_c3_deg15() {
    smoothness_and_c3(Preset::Deg15, -150, 190);
}

/// Criterion 6, deg17gn: c3 = -112; degree-3 curve with pa = 257 (degree-2
/// triples are minors of the rank-2 linear block and degenerate to X).
#[test]
#[ignore = "slow: tens of minutes"]
fn criterion_06_smoothness_and_c3_deg17gn() {
    smoothness_and_c3(Preset::Deg17Gn, -112, 257);
}

/// Criterion 6, deg17km: c3 = -108 from the canonical degree-2 curve of
/// genus 3 (the three quadrics leave no triple freedom, so the smoothness
/// clauses themselves need degree 3).
#[test]
#[ignore = "slow: tens of minutes"]
fn criterion_06_smoothness_and_c3_deg17km() {
    smoothness_and_c3(Preset::Deg17Km, -108, 3);
}

/// Criterion 6, deg20gn with e = 3: c3 = -64, pa = 353.
#[test]
#[ignore = "slow: up to an hour"]
fn criterion_06_smoothness_and_c3_deg20gn() {
    smoothness_and_c3(Preset::Deg20Gn, -64, 353);
}

/// Criterion 8: degree-0 first-order deformation dimensions over F_101.
#[test]
#[ignore = "slow: tens of minutes"]
fn criterion_08_t1_deg17gn() {
    let clock = Instant::now();
    let built = (1..=10)
        .find_map(|seed| construct(Preset::Deg17Gn, 101, seed).ok())
        .expect("constructible");
    let t1 = t1_degree0(&built.ideal).expect("t1");
    assert_eq!(t1, 58, "deg17gn t1 dimension");
    println!("criterion 8 PASS [deg17gn]: t1_degree0 = 58 ({:?})", clock.elapsed());
}

#[test]
#[ignore = "slow: tens of minutes"]
fn criterion_08_t1_deg20gn() {
    let clock = Instant::now();
    let built = (1..=10)
        .find_map(|seed| construct(Preset::Deg20Gn, 101, seed).ok())
        .expect("constructible");
    let t1 = t1_degree0(&built.ideal).expect("t1");
    assert_eq!(t1, 34, "deg20gn t1 dimension");
    println!("criterion 8 PASS [deg20gn]: t1_degree0 = 34 ({:?})", clock.elapsed());
}

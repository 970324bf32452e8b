//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always print:
//! `cargo test -p cubepack --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubepack::bounds;
use cubepack::codes::{self, DEFAULT_ENUM_CAP};
use cubepack::packing::{self, Construction, CountMode, Layer, LayerSpec, PointSet};
use cubepack::verify;
use cubepack::weights::{self, WeightDistribution};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Check>, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn big(s: &str) -> BigUint {
    BigUint::from_str(s).unwrap()
}

fn frac(s: &str) -> BigRational {
    BigRational::from_str(s).unwrap()
}

/// Independent weight histogram: walk every message and count popcounts.
fn histogram(code: &codes::LinearCode) -> Vec<u64> {
    let g = code.generator();
    let mut hist = vec![0u64; code.length() + 1];
    for msg in 0u64..1 << code.dimension() {
        let mut w = codes::BitWord::zeros(code.length());
        for (i, row) in g.rows().iter().enumerate() {
            if msg >> i & 1 == 1 {
                w.xor_assign(row);
            }
        }
        hist[w.weight()] += 1;
    }
    hist
}

fn as_u64(d: &WeightDistribution) -> Vec<u64> {
    d.counts().iter().map(|c| c.to_u64_digits().first().copied().unwrap_or(0)).collect()
}

fn c1_counts() -> Check {
    for (k, n) in [(2, "17"), (3, "481"), (4, "1351361")] {
        let got = weights::base_count(k).map_err(|e| e.to_string())?;
        ensure(got == big(n), format!("base_count({k}) = {got}, want {n}"))?;
    }
    let aug = packing::construction_count(Construction::Augmented16, 4, DEFAULT_ENUM_CAP)
        .map_err(|e| e.to_string())?;
    ensure(aug == big("1353409"), format!("augmented16 total {aug}"))?;
    Ok("17, 481, 1351361; augmented16 1353409".into())
}

fn c2_weights() -> Check {
    for k in 2..=4 {
        let rec = weights::hamming_weights_recurrence(k).unwrap();
        let closed = weights::hamming_weights_closed(k).unwrap();
        let brute = weights::weights_bruteforce(&codes::hamming_code(k).unwrap(), DEFAULT_ENUM_CAP)
            .unwrap();
        let oracle = histogram(&codes::hamming_code(k).unwrap());
        ensure(rec == closed && closed == brute, format!("W disagrees for k={k}"))?;
        ensure(as_u64(&brute) == oracle, format!("W enumeration vs oracle, k={k}"))?;
        let v = weights::extended_weights(k).unwrap();
        let v_brute =
            weights::weights_bruteforce(&codes::extended_hamming(k).unwrap(), DEFAULT_ENUM_CAP).unwrap();
        ensure(v == v_brute, format!("V disagrees for k={k}"))?;
    }
    for k in 5..=6 {
        let rec = weights::hamming_weights_recurrence(k).unwrap();
        let closed = weights::hamming_weights_closed(k).unwrap();
        ensure(rec == closed, format!("recurrence vs closed form, k={k}"))?;
    }
    Ok("k=2..4 three-way, k=5,6 two-way".into())
}

fn c3_exhaustive() -> Check {
    let mut detail = Vec::new();
    for (k, n, pairs) in [(2u32, 17usize, 136u64), (3, 481, 115_440)] {
        let set = packing::build_base(k).unwrap().materialize(1 << 20).unwrap();
        ensure(set.len() == n, format!("k={k}: {} points", set.len()))?;
        let r = verify::verify_exhaustive(&set, verify::EXHAUSTIVE_GUARD).unwrap();
        let one = BigUint::from(1u32) << (2 * r.scale_exp);
        ensure(r.pairs_checked == pairs, format!("k={k}: {} pairs", r.pairs_checked))?;
        ensure(r.passed && r.min_scaled_sq == one, format!("k={k}: min {}", r.min_scaled_sq))?;
        detail.push(format!("k={k} {pairs} pairs min^2=1"));
    }
    Ok(detail.join(", "))
}

fn c4_augmented16(thorough: bool) -> Check {
    let t = Instant::now();
    let set = packing::build(Construction::Augmented16, 4, DEFAULT_ENUM_CAP)
        .unwrap()
        .materialize(2_000_000)
        .unwrap();
    ensure(set.len() == 1_353_409, format!("{} points", set.len()))?;
    let s = verify::verify_sampled(&set, 1_000_000, 20_240_601).unwrap();
    ensure(s.passed, format!("sampled failed at {:?}", s.argmin))?;
    let cert = verify::verify_structural(Construction::Augmented16, 4, DEFAULT_ENUM_CAP).unwrap();
    ensure(cert.overall && cert.complete, "structural certificate failed")?;
    let fast = t.elapsed();
    ensure(fast < Duration::from_secs(60), format!("sampled+structural took {fast:?}"))?;
    let mut detail = format!("10^6 pairs + certificate in {:.1}s", fast.as_secs_f64());
    if thorough {
        let t = Instant::now();
        let aug = packing::build_augmented16().unwrap().materialize(4096).unwrap();
        let base = packing::build_base(4).unwrap().materialize(2_000_000).unwrap();
        let r = verify::verify_cross_exhaustive(&aug, &base).unwrap();
        ensure(r.pairs_checked == 2048 * 1_351_361, "thorough pair count")?;
        ensure(r.passed, format!("thorough failed at {:?}", r.argmin))?;
        let el = t.elapsed();
        ensure(el < Duration::from_secs(1800), format!("thorough took {el:?}"))?;
        detail.push_str(&format!(
            "; thorough {} pairs in {:.1}s",
            r.pairs_checked,
            el.as_secs_f64()
        ));
    }
    Ok(detail)
}

fn c5_min_weight() -> Check {
    for (r, k) in [(1, 3), (1, 4), (2, 4), (1, 5), (2, 5), (2, 6)] {
        let code = codes::reed_muller(r, k).unwrap();
        let d = 1usize << (k - r);
        let formula = weights::rm_min_weight_count(r, k).unwrap();
        let brute = weights::weights_bruteforce(&code, DEFAULT_ENUM_CAP).unwrap();
        ensure(brute.min_nonzero_weight() == Some(d), format!("RM({r},{k}) min weight"))?;
        ensure(formula == brute.count(d), format!("A for RM({r},{k}): {formula} vs {}", brute.count(d)))?;
    }
    let a = weights::rm_min_weight_count(2, 4).unwrap();
    let v4 = weights::extended_weights(4).unwrap().count(4);
    ensure(a == BigUint::from(140u32) && v4 == a, format!("A_4(RM(2,4)) = {a}, V(4) = {v4}"))?;
    Ok("6 codes, A_4(RM(2,4)) = 140 = V(4)".into())
}

fn c6_general() -> Check {
    let c4 = packing::count_general(4, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
    ensure(c4.exact && c4.total == BigUint::from(1_351_363u32), format!("k=4 total {}", c4.total))?;
    let c5 = packing::count_general(5, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
    let want = weights::base_count(5).unwrap() + 8_126_466u32;
    ensure(c5.exact && c5.total == want, format!("k=5 total {}", c5.total))?;

    let g4 = packing::build_general(4, DEFAULT_ENUM_CAP).unwrap().materialize(2_000_000).unwrap();
    ensure(g4.len() == 1_351_363 && g4.duplicate_count() == 0, "general k=4 duplicates")?;

    let spec = LayerSpec::new(1, 5).unwrap();
    let layer = packing::build_rm_layer(&spec, DEFAULT_ENUM_CAP)
        .unwrap()
        .materialize(9_000_000)
        .unwrap();
    ensure(layer.len() == 8_126_466, format!("r=1 layer {} points", layer.len()))?;
    ensure(layer.duplicate_count() == 0, "r=1 layer has duplicates")?;
    let within = verify::verify_sampled(&layer, 1_000_000, 5).unwrap();
    ensure(within.passed, format!("within-layer pair {:?}", within.argmin))?;

    let streamed = PointSet::collect_from(32, packing::build_base(5).unwrap().take(100_000)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let random = Layer::base(5).unwrap().sample(100_000, &mut rng).unwrap();
    for (name, base) in [("streamed", &streamed), ("random", &random)] {
        let r = verify::verify_cross_sampled(&layer, base, 1_000_000, 6).unwrap();
        ensure(r.passed, format!("layer vs {name} base points: {:?}", r.argmin))?;
    }
    Ok("counts 1351363 and base+8126466; layer 8126466 points, 0 duplicates, sampled ok".into())
}

fn c7_bounds() -> Check {
    for k in 4..=13 {
        for (rp, term) in bounds::lower_bound_terms(k).unwrap() {
            let r = k - rp;
            let a = weights::rm_min_weight_count(r, k).unwrap();
            let alt = (a << ((rp / 2 - 1) as u64)) << ((1u64 << k) - (1u64 << rp));
            ensure(term == alt, format!("term identity k={k} r'={rp}"))?;
        }
    }
    for k in [4, 5] {
        let lb = bounds::lower_bound_exact(k).unwrap();
        let c = packing::count_general(k, CountMode::Exact, DEFAULT_ENUM_CAP).unwrap();
        ensure(lb <= c.total, format!("lower bound above count at k={k}"))?;
    }
    for k in (5..=13).step_by(2) {
        let checks = bounds::exponent_inequality_check(k).unwrap();
        ensure(checks.iter().all(|c| c.holds), format!("exponent inequality k={k}"))?;
    }
    for k in 4..=13 {
        let n = 1u64 << k;
        let e = bounds::extension_terms(k).unwrap();
        ensure(e.r0 == BigUint::from(2 * n), "r'=0 term")?;
        ensure(
            BigUint::from(3u32) * &e.r2 == BigUint::from(2 * n * (n - 1) * (n - 2)),
            "r'=2 term",
        )?;
        let rep = bounds::bound_report(k).unwrap();
        ensure(rep.discrepancy_4n_flag && e.gap == frac(&(4 * n).to_string()), "4n gap")?;
    }
    Ok("identity k<=13, bound <= count, exponents, 4n gap reported".into())
}

fn c8_leech() -> Check {
    // exact partial sums from an independent fraction evaluation
    let oracle = [
        (5, "2295/512"),
        (7, "4922775/1048576"),
        (9, "163204759575/34359738368"),
        (11, "85817142703524375/18014398509481984"),
        (13, "720413716161839357604375/151115727451828646838272"),
    ];
    let mut prev = frac("0");
    for (k, s) in oracle {
        let r = bounds::leech_ratio(k).unwrap();
        ensure(r == frac(s), format!("ratio k={k} = {r}"))?;
        ensure(r >= prev, format!("decrease at k={k}"))?;
        ensure(r > frac("4") && r < frac("24/5"), format!("k={k} outside (4, 4.8)"))?;
        prev = r;
    }
    let gap = &prev - bounds::leech_l();
    ensure(gap.clone() * &gap <= frac("1/25"), "k=13 more than 0.2 from 4.768462")?;
    Ok(format!("k=13 ratio {}", bounds::to_significant(&prev, 10)))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubepack"))
        .args(args)
        .output()
        .expect("run cubepack");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c9_round_trip() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("aug.cpk");
    let set = packing::build(Construction::Augmented16, 4, DEFAULT_ENUM_CAP)
        .unwrap()
        .materialize(2_000_000)
        .unwrap();
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
    set.write_to(&mut f).unwrap();
    drop(f);
    let back = PointSet::read_from(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    ensure(back == set, "point file round trip changed coordinates")?;

    let p = path.to_str().unwrap();
    let args = ["verify", "--in", p, "--mode", "sampled", "--pairs", "200000", "--seed", "9"];
    let (c1, a) = run_cli(&[&["--threads", "1"][..], &args[..]].concat());
    let (c2, b) = run_cli(&[&["--threads", "4"][..], &args[..]].concat());
    let (c3, c) = run_cli(&args);
    ensure(c1 == 0 && c2 == 0 && c3 == 0, "cli verify failed")?;
    ensure(a == b && b == c, "verify JSON differs across runs/thread counts")?;

    let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
    let r1 = pool(1).install(|| verify::verify_sampled(&set, 300_000, 3).unwrap());
    let r4 = pool(4).install(|| verify::verify_sampled(&set, 300_000, 3).unwrap());
    let j1 = serde_json::to_string(&r1).unwrap();
    ensure(j1 == serde_json::to_string(&r4).unwrap(), "library report differs across pools")?;
    let small = packing::build_base(3).unwrap().materialize(1000).unwrap();
    let e1 = pool(1).install(|| verify::verify_exhaustive(&small, 1000).unwrap());
    let e4 = pool(4).install(|| verify::verify_exhaustive(&small, 1000).unwrap());
    ensure(e1 == e4, "exhaustive argmin differs across pools")?;
    Ok(format!("{} points round-tripped; JSON byte-identical over 3 runs", set.len()))
}

fn main() {
    let thorough = std::env::var("CUBEPACK_THOROUGH").map_or(true, |v| v != "0");
    let criteria: Vec<Criterion> = vec![
        ("exact counts", Box::new(c1_counts), Duration::from_secs(1)),
        ("weight-distribution oracles", Box::new(c2_weights), Duration::from_secs(60)),
        ("exhaustive distance k=2,3", Box::new(c3_exhaustive), Duration::from_secs(10)),
        ("augmented16 distance", Box::new(move || c4_augmented16(thorough)), Duration::from_secs(1860)),
        ("minimum-weight formula", Box::new(c5_min_weight), Duration::from_secs(60)),
        ("layered construction", Box::new(c6_general), Duration::from_secs(300)),
        ("bounds", Box::new(c7_bounds), Duration::from_secs(10)),
        ("partial-sum convergence", Box::new(c8_leech), Duration::from_secs(10)),
        ("round trip and determinism", Box::new(c9_round_trip), Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let el = t.elapsed();
        let outcome = match outcome {
            Ok(d) if el > *limit => Err(format!("{d}; over time limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(d) => println!("criterion {}: PASS {name} ({:.2}s): {d}", i + 1, el.as_secs_f64()),
            Err(d) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({:.2}s): {d}", i + 1, el.as_secs_f64());
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

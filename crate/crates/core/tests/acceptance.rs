//! The acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use borderfj::expr::{parse, Expr, ZeroTester};
use borderfj::fj::{
    reduce, MatrixStatus, ReduceOptions, ReductionReport, DEPENDENT_CONSTRAINT_MESSAGE,
    NULL_CONSTRAINT_MESSAGE,
};
use borderfj::io::{emit_report, load_str, print, REPORT_KEYS};
use borderfj::linalg::{determinant, pfaffian, SymMatrix};
use borderfj::params::degeneracy_locus;
use borderfj::theorem::verify_theorem1;
use common::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const FUZZ_CASES: u64 = 100;
const TRIALS: usize = 20;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden(name: &str) -> Value {
    serde_json::from_str(&fixture(&format!("{name}.golden.json"))).unwrap()
}

fn run_case(file: &str) -> (ReductionReport, Duration) {
    let def = load_str(&fixture(file)).unwrap();
    let start = Instant::now();
    let r = reduce(&def, &ReduceOptions::default()).unwrap();
    (r, start.elapsed())
}

/// Entrywise comparison of the inverse against a golden matrix given in its
/// own variable order and scale.
fn matches_golden(r: &ReductionReport, g: &Value) -> Result<(), String> {
    let order: Vec<&str> = g["order"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let perm: Vec<usize> = order
        .iter()
        .map(|n| r.extended_variables.iter().position(|v| v == n).ok_or(format!("no variable {n}")))
        .collect::<Result<_, _>>()?;
    let inv = r.inverse_extended_matrix.as_ref().ok_or("no inverse")?.permute(&perm);
    let scale = parse(g["scale"].as_str().unwrap()).unwrap();
    for (i, row) in g["inverse"].as_array().unwrap().iter().enumerate() {
        for (j, s) in row.as_array().unwrap().iter().enumerate() {
            let want = &scale * &parse(s.as_str().unwrap()).unwrap();
            ensure(inv.get(i, j) == &want, || {
                format!("entry ({}, {}): got {} want {want}", order[i], order[j], inv.get(i, j))
            })?;
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let (r, t) = run_case("bench1.sys");
    ensure(r.status == MatrixStatus::Regular, || format!("status {}", r.status.as_str()))?;
    ensure(r.iteration_count == 1, || format!("{} iterations", r.iteration_count))?;
    ensure(r.dimension() == 4, || format!("dimension {}", r.dimension()))?;
    matches_golden(&r, &golden("bench1"))?;
    ensure(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("4x4 inverse exact, 1 iteration, {t:.1?}"))
}

fn criterion_2() -> Outcome {
    let (r, t) = run_case("bench2.sys");
    ensure(r.status == MatrixStatus::Regular, || format!("status {}", r.status.as_str()))?;
    ensure(r.dimension() == 8, || format!("dimension {}", r.dimension()))?;
    matches_golden(&r, &golden("bench2"))?;
    let inv = r.inverse_extended_matrix.as_ref().unwrap();
    let quarter = parse("1/(4*k)").unwrap();
    let count = inv.entries().filter(|e| **e == quarter || **e == -&quarter).count();
    ensure(count == 8, || format!("{count} entries equal to ±1/(4k)"))?;
    ensure(r.parameters == ["k"], || format!("parameters {:?}", r.parameters))?;
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("8x8 inverse exact with ±1/(4*k), det {}, {t:.1?}", r.determinant))
}

fn criterion_3() -> Outcome {
    let (r, t) = run_case("bench3.sys");
    ensure(r.status == MatrixStatus::Regular, || format!("status {}", r.status.as_str()))?;
    ensure(r.iteration_count == 2, || format!("{} iterations", r.iteration_count))?;
    ensure(r.dimension() == 10, || format!("dimension {}", r.dimension()))?;
    matches_golden(&r, &golden("bench3"))?;
    let inv = r.inverse_extended_matrix.as_ref().unwrap();
    let trig = inv.entries().filter(|e| !e.angles().is_empty()).count();
    ensure(trig == 12, || format!("{trig} trigonometric entries"))?;
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("10x10 inverse equals (1/3)·golden, 2 iterations, {t:.1?}"))
}

fn criterion_4() -> Outcome {
    let (r, _) = run_case("gauge.sys");
    ensure(r.status == MatrixStatus::Singular, || format!("status {}", r.status.as_str()))?;
    let verbatim = [NULL_CONSTRAINT_MESSAGE, DEPENDENT_CONSTRAINT_MESSAGE];
    ensure(r.diagnostics.iter().any(|d| verbatim.contains(&d.as_str())), || {
        format!("diagnostics {:?}", r.diagnostics)
    })?;
    let gauge = r.gauge_generators.as_ref().ok_or("no gauge generators")?;
    ensure(!gauge.is_empty(), || "empty gauge basis".into())?;
    let f = &r.final_state().matrix;
    for v in gauge {
        ensure(f.mul_vec(v).unwrap().iter().all(Expr::is_zero), || "generator does not annihilate".into())?;
    }
    Ok(format!("Singular, \"{}\", {} generator(s)", r.diagnostics[0], gauge.len()))
}

fn all_systems() -> Vec<String> {
    let mut v: Vec<String> = ["bench1.sys", "bench2.sys", "bench3.sys", "gauge.sys"]
        .iter()
        .map(|f| fixture(f))
        .collect();
    v.extend((0..FUZZ_CASES).map(fuzz_system));
    v
}

fn criterion_5() -> Outcome {
    let zt = ZeroTester::default();
    let mut regular = 0;
    let systems = all_systems();
    for (i, src) in systems.iter().enumerate() {
        let r = reduce(&load_str(src).unwrap(), &ReduceOptions::default()).map_err(|e| format!("case {i}: {e}"))?;
        let v = verify_theorem1(&r, TRIALS, &zt).map_err(|e| format!("case {i}: {e}"))?;
        ensure(v.pass, || format!("case {i} fails:\n{src}"))?;
        for c in v.bracket.iter().chain(&v.schur) {
            ensure(c.points >= TRIALS, || format!("case {i}: {} points on {}", c.points, c.route))?;
        }
        regular += usize::from(r.status == MatrixStatus::Regular);
    }
    Ok(format!(
        "{} systems co-vanish at {TRIALS} shared points ({regular} regular, {} singular)",
        systems.len(),
        systems.len() - regular
    ))
}

fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let pool = ["x", "y", "k*x - 1", "cos(t)", "sin(t)", "x*y + 2"];
    let mut m = SymMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let e = if rng.gen_bool(0.3) {
                Expr::int(rng.gen_range(-3..=3))
            } else {
                &Expr::int(rng.gen_range(1..=3)) * &parse(pool[rng.gen_range(0..pool.len())]).unwrap()
            };
            m[(j, i)] = -&e;
            m[(i, j)] = e;
        }
    }
    m
}

fn criterion_6() -> Outcome {
    let systems = all_systems();
    let mut iterates = 0;
    let m2 = "[system]\nmode = mechanical\n[variables]\nx\n[multipliers]\nl1, l2\n\
              [kinetic]\n1/2*dx^2\n[potential]\nl1*x + 2*l2*x\n";
    for (i, src) in systems.iter().map(String::as_str).chain([m2]).enumerate() {
        let r = reduce(&load_str(src).unwrap(), &ReduceOptions::default()).unwrap();
        check_invariants(&r).map_err(|e| format!("case {i}: {e}"))?;
        iterates += r.iterates.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..60 {
        let n = 2 + trial % 6;
        let m = random_antisymmetric(&mut rng, n);
        let det = determinant(&m).unwrap();
        if n % 2 == 1 {
            ensure(det.is_zero(), || format!("odd {n}x{n} det {det}"))?;
        } else {
            let pf = pfaffian(&m.clone().into_antisymmetric().unwrap()).unwrap();
            ensure(&pf * &pf == det, || format!("{n}x{n}: pf^2 != det"))?;
        }
    }
    Ok(format!("{iterates} iterates over {} runs, 60 random antisymmetric matrices", systems.len() + 1))
}

fn criterion_7() -> Outcome {
    let mut matrices = 0;
    for file in ["bench1.sys", "bench2.sys", "bench3.sys", "gauge.sys"] {
        let (r, _) = run_case(file);
        for (k, st) in r.iterates.iter().enumerate() {
            let n = check_oracle(&st.matrix, 50, 7 + k as u64).map_err(|e| format!("{file} iterate {k}: {e}"))?;
            ensure(n == 50, || format!("{file}: {n} points"))?;
            matrices += 1;
        }
    }
    Ok(format!("{matrices} benchmark matrices agree at 50 exact points each"))
}

fn exit_code(args: &[&str], env: &[(&str, &str)]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_borderfj"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_8() -> Outcome {
    for (i, src) in all_systems().iter().enumerate() {
        let def = load_str(src).unwrap();
        let again = load_str(&print(&def)).map_err(|e| format!("case {i}: reprint fails to load: {e}"))?;
        ensure(def == again, || format!("case {i}: round-trip differs"))?;
    }

    let opts = ReduceOptions::with_seed(99);
    let def = load_str(&fixture("bench3.sys")).unwrap();
    let (a, b) = (reduce(&def, &opts).unwrap(), reduce(&def, &opts).unwrap());
    let va = verify_theorem1(&a, TRIALS, &opts.zero).unwrap();
    let vb = verify_theorem1(&b, TRIALS, &opts.zero).unwrap();
    let ja = emit_report(&a, Some(&va), Some(&degeneracy_locus(&a)));
    let jb = emit_report(&b, Some(&vb), Some(&degeneracy_locus(&b)));
    ensure(ja == jb, || "reports differ under a fixed seed".into())?;
    let mut keys: Vec<&str> = ja.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    let mut want = REPORT_KEYS.to_vec();
    want.sort();
    ensure(keys == want, || format!("keys {keys:?}"))?;

    let f = |n: &str| format!("{}/fixtures/{n}", env!("CARGO_MANIFEST_DIR"));
    let expected: HashMap<&str, (Vec<String>, i32)> = [
        ("regular", (vec!["reduce".into(), f("bench1.sys")], 0)),
        ("singular", (vec!["reduce".into(), f("gauge.sys")], 2)),
        ("missing file", (vec!["reduce".into(), "/nonexistent.sys".into()], 3)),
        ("bad flag", (vec!["reduce".into(), f("bench1.sys"), "--bogus".into()], 3)),
        ("iteration cap", (vec!["reduce".into(), f("bench3.sys"), "--max-iter".into(), "1".into()], 4)),
        ("verify", (vec!["verify".into(), f("bench2.sys")], 0)),
    ]
    .into();
    for (what, (args, code)) in &expected {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (got, _) = exit_code(&args, &[]);
        ensure(got == *code, || format!("{what}: exit {got}, want {code}"))?;
    }
    let json = |seed| exit_code(&["reduce", &f("bench3.sys"), "--json", "-"], &[("BORDERFJ_SEED", seed)]).1;
    ensure(json("5") == json("5"), || "CLI output differs under a fixed seed".into())?;
    Ok(format!(
        "{} round-trips, {} report keys, {} exit codes, deterministic",
        FUZZ_CASES + 4,
        REPORT_KEYS.len(),
        expected.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Benchmark I golden", criterion_1),
        ("Benchmark II golden", criterion_2),
        ("Benchmark III golden", criterion_3),
        ("Gauge variant", criterion_4),
        ("Co-vanishing property suite", criterion_5),
        ("Structural invariants", criterion_6),
        ("Oracle equivalence", criterion_7),
        ("Round-trip and contracts", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}) [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

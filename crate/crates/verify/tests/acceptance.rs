//! Acceptance suite: one line per criterion, exact arithmetic throughout.
//! Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use usym_core::endo::{brute_force_homs, convolve, enumerate_endomorphisms, gamma, automorphisms_of};
use usym_core::gradings::{
    classify, enumerate_gradings_oracle, enumerate_points, grading_from_point, point_from_grading,
};
use usym_core::universal::{build_presentation, coordinates, DEFAULT_DEGREE};
use usym_core::{
    complete, interreduce, Field, FinAlgebra, FiniteGroup, GenId, Matrix, NCPoly, ReductionOrder, Scalar,
    Subspace, TensorPoly, Word,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs the CLI in-process; paths are relative to the workspace root.
fn usym(args: &[&str]) -> (i32, String) {
    let out = usym_cli::run(std::iter::once("usym").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

const Q: Field = Field::Rationals;

fn poly(s: &str) -> NCPoly {
    NCPoly::parse(Q, s).expect("polynomial literal")
}

fn gen(s: usize, i: usize) -> GenId {
    GenId::new(s - 1, i - 1)
}

fn word(gens: &[(usize, usize)]) -> Word {
    Word::from_gens(gens.iter().map(|&(s, i)| gen(s, i)))
}

/// Both generating sets give the same ideal, each tested by reduction in
/// the completed system of the other.
fn ideal_equal(a: &[NCPoly], b: &[NCPoly]) -> Result<bool, String> {
    let sa = complete(&interreduce(Q, a).map_err(|e| e.to_string())?, DEFAULT_DEGREE).map_err(|e| e.to_string())?;
    let sb = complete(&interreduce(Q, b).map_err(|e| e.to_string())?, DEFAULT_DEGREE).map_err(|e| e.to_string())?;
    Ok(b.iter().all(|r| sa.normal_form(r).is_zero()) && a.iter().all(|r| sb.normal_form(r).is_zero()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (code, json) = usym(&["present", "fixtures/algebras/dual_numbers.json", "--format", "json"]);
    ensure(code == 0, || format!("present exited {code}"))?;
    let report: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let gens: Vec<&str> = report["result"]["generators"]
        .as_array()
        .ok_or("no generators")?
        .iter()
        .filter_map(Value::as_str)
        .collect();
    ensure(gens == ["x[1,2]", "x[2,2]"], || format!("generators {gens:?}"))?;

    let p = build_presentation(&FinAlgebra::dual_numbers(Q), DEFAULT_DEGREE).map_err(|e| e.to_string())?;
    let ours: Vec<NCPoly> = p.rules().map(|r| r.relation()).collect();
    let expected = [poly("x[1,2] x[1,2]"), poly("x[1,2] x[2,2] + x[2,2] x[1,2]")];
    ensure(ideal_equal(&ours, &expected)?, || "rules are not ideal-equal to {x^2, xy + yx}".into())?;

    // x = x[1,2], y = x[2,2]
    let (x, y) = (word(&[(1, 2)]), word(&[(2, 2)]));
    let mut dx = TensorPoly::pure(Q.one(), vec![x.clone(), y.clone()]);
    dx.add_term(vec![Word::one(), x.clone()], Q.one());
    let dy = TensorPoly::pure(Q.one(), vec![y.clone(), y.clone()]);
    ensure(p.delta_table()[&gen(1, 2)] == dx, || "delta(x) differs".into())?;
    ensure(p.delta_table()[&gen(2, 2)] == dy, || "delta(y) differs".into())?;
    ensure(p.eps_table()[&gen(1, 2)].is_zero() && p.eps_table()[&gen(2, 2)].is_one(), || {
        "epsilon differs".into()
    })?;
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("generators x[1,2] x[2,2], rules ideal-equal, delta/epsilon match, {t}"))
}

/// The relations as listed for the upper-triangular example.
const LISTED: [&str; 13] = [
    "x[1,1] - 1",
    "x[2,1]",
    "x[3,1]",
    "x[1,2] x[1,2]",
    "x[1,2] x[1,3] - x[1,2]",
    "x[1,3] x[1,2]",
    "x[1,3] x[1,3] - x[1,3]",
    "x[1,2] x[2,2] + x[2,2] x[1,2] + x[2,2] x[3,2]",
    "x[1,2] x[2,3] + x[2,3] x[1,3] + x[2,2] x[3,3] - x[2,2]",
    "x[1,3] x[2,2] + x[2,3] x[1,2] + x[2,3] x[3,2]",
    "x[1,3] x[2,3] + x[2,3] x[1,3] + x[2,3] x[3,3] - x[2,3]",
    "x[3,2] x[3,3] + x[3,2] x[1,3] + x[1,2] x[3,3] - x[3,2]",
    "x[3,2] x[3,2] + x[3,2] x[1,2] + x[1,2] x[3,2]",
];

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (code, _) = usym(&["present", "fixtures/algebras/triangular.json"]);
    ensure(code == 0, || format!("present exited {code}"))?;
    let p = build_presentation(&FinAlgebra::triangular(Q), DEFAULT_DEGREE).map_err(|e| e.to_string())?;
    let elim: Vec<(GenId, NCPoly)> = p.eliminated().to_vec();
    let expected = vec![
        (gen(1, 1), NCPoly::one(Q)),
        (gen(2, 1), NCPoly::zero(Q)),
        (gen(3, 1), NCPoly::zero(Q)),
    ];
    ensure(elim == expected, || format!("eliminated {elim:?}"))?;

    let m = p.measuring();
    let words = m.words_up_to(2);
    let ours = Subspace::span(Q, words.len(), &m.relation_span_rows(2));
    let rows: Vec<Vec<Scalar>> = LISTED
        .iter()
        .map(|s| coordinates(&m.eliminate(&poly(s)), &words))
        .collect();
    let listed = Subspace::span(Q, words.len(), &rows);
    let sum = ours.sum(&listed).map_err(|e| e.to_string())?;
    let t = within(start, Duration::from_secs(5))?;
    let outside: Vec<&str> = LISTED
        .iter()
        .filter(|s| !ours.contains(&coordinates(&m.eliminate(&poly(s)), &words)).unwrap_or(false))
        .copied()
        .collect();
    let missing: Vec<String> = p
        .rules()
        .filter(|r| !listed.contains(&coordinates(&r.relation(), &words)).unwrap_or(false))
        .map(|r| r.relation().to_string())
        .collect();
    ensure(ours == listed, || {
        format!(
            "eliminations match; degree-2 span dim {} vs listed dim {} (sum {}); listed but not derived: [{}]; derived but not listed: [{}]",
            ours.dim(),
            listed.dim(),
            sum.dim(),
            outside.join("; "),
            missing.join("; ")
        )
    })?;
    Ok(format!("eliminations match, degree-2 spans equal (dim {}), {t}", ours.dim()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for f in ["dual_numbers", "triangular", "base_field"] {
        let path = format!("fixtures/algebras/{f}.json");
        let (code, json) = usym(&["check", &path, "--max-degree", "4", "--format", "json"]);
        let report: Value = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        let checks = report["checks"].as_array().ok_or("no checks")?;
        let failed: Vec<&str> = checks
            .iter()
            .filter(|c| c["passed"] != Value::Bool(true))
            .filter_map(|c| c["name"].as_str())
            .collect();
        ensure(code == 0 && failed.is_empty(), || format!("{f}: exit {code}, failed {failed:?}"))?;
        counts.push(format!("{f} {}", checks.len()));
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("all checks pass ({}), {t}", counts.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut parts = Vec::new();
    for p in [2u32, 3, 5, 7] {
        let start = Instant::now();
        let f = Field::prime(p).map_err(|e| e.to_string())?;
        let a = FinAlgebra::dual_numbers(f);
        let endo = enumerate_endomorphisms(&a).map_err(|e| e.to_string())?;
        let aut = automorphisms_of(&a, &endo);
        ensure(endo.order() == p as usize, || format!("F{p}: {} endomorphisms", endo.order()))?;
        ensure(aut.group.order() == p as usize - 1, || format!("F{p}: {} automorphisms", aut.group.order()))?;
        ensure(aut.verified(), || format!("F{p}: automorphisms do not form a group"))?;
        for m1 in endo.points() {
            for m2 in endo.points() {
                let lhs = gamma(&convolve(m1, m2));
                let rhs = gamma(m1).mul(&gamma(m2)).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("F{p}: gamma not multiplicative"))?;
            }
        }
        let id = &endo.points()[endo.identity()];
        ensure(gamma(id) == Matrix::identity(f, 2), || format!("F{p}: gamma(I) is not id"))?;
        let t = within(start, Duration::from_secs(1))?;
        parts.push(format!("F{p} {}/{} in {t}", endo.order(), aut.group.order()));
    }
    Ok(format!("End/Aut orders {}", parts.join(", ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for p in [2u32, 3] {
        let f = Field::prime(p).map_err(|e| e.to_string())?;
        for (name, a) in [("dual", FinAlgebra::dual_numbers(f)), ("triangular", FinAlgebra::triangular(f))] {
            let ours: Vec<Matrix> = enumerate_endomorphisms(&a)
                .map_err(|e| e.to_string())?
                .points()
                .iter()
                .map(|p| p.matrix().clone())
                .collect();
            let mut brute = brute_force_homs(&a, &a).map_err(|e| e.to_string())?;
            brute.sort();
            ensure(ours == brute, || {
                format!("{name}/F{p}: relations {} vs brute force {}", ours.len(), brute.len())
            })?;
            parts.push(format!("{name}/F{p} {}", ours.len()));
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("identical sets ({}), {t}", parts.join(", ")))
}

fn grid() -> Vec<(&'static str, FinAlgebra, FiniteGroup, u32)> {
    let f2 = Field::Prime(2);
    let f3 = Field::Prime(3);
    let c2 = FiniteGroup::cyclic(2).expect("group");
    let c3 = FiniteGroup::cyclic(3).expect("group");
    vec![
        ("dual/C2/F2", FinAlgebra::dual_numbers(f2), c2.clone(), 2),
        ("dual/C2/F3", FinAlgebra::dual_numbers(f3), c2.clone(), 3),
        ("dual/C3/F2", FinAlgebra::dual_numbers(f2), c3, 2),
        ("triangular/C2/F2", FinAlgebra::triangular(f2), c2, 2),
    ]
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, a, g, _) in grid() {
        let points = enumerate_points(&a, &g).map_err(|e| e.to_string())?;
        let mut induced: Vec<_> = points.iter().map(|p| grading_from_point(&a, &g, p)).collect();
        for (p, gr) in points.iter().zip(&induced) {
            ensure(&point_from_grading(&a, &g, gr) == p, || format!("{name}: round trip fails"))?;
        }
        induced.sort();
        let before = induced.len();
        induced.dedup();
        ensure(induced.len() == before, || format!("{name}: two points induce one grading"))?;
        let oracle = enumerate_gradings_oracle(&a, &g).map_err(|e| e.to_string())?;
        ensure(induced == oracle, || {
            format!("{name}: {} induced gradings vs {} by subspace search", induced.len(), oracle.len())
        })?;
        parts.push(format!("{name} {}", points.len()));
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("bijection holds ({}), {t}", parts.join(", ")))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, a, g, _) in grid() {
        let c = classify(&a, &g).map_err(|e| e.to_string())?;
        ensure(c.consistent(), || {
            format!(
                "{name}: {} point classes vs {} grading classes (bijection {}, orbits match {})",
                c.point_orbits.len(),
                c.grading_classes.len(),
                c.bijection,
                c.orbits_match
            )
        })?;
        if name == "dual/C2/F3" {
            ensure(c.class_count() == 2, || format!("{name}: {} classes, expected 2", c.class_count()))?;
        }
        parts.push(format!("{name} {}", c.class_count()));
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("class counts agree ({}), {t}", parts.join(", ")))
}

fn random_poly(rng: &mut StdRng, n: usize) -> NCPoly {
    let mut p = NCPoly::zero(Q);
    for _ in 0..rng.gen_range(1..=6) {
        let deg = rng.gen_range(0..=4);
        let w = Word::from_gens((0..deg).map(|_| GenId::new(rng.gen_range(0..n), rng.gen_range(0..n))));
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break c;
            }
        };
        p.add_term(w, Q.from_i64(c));
    }
    p
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut parts = Vec::new();
    for (name, a) in [("dual", FinAlgebra::dual_numbers(Q)), ("triangular", FinAlgebra::triangular(Q))] {
        let p = build_presentation(&a, DEFAULT_DEGREE).map_err(|e| e.to_string())?;
        let sys = p.system();
        ensure(sys.certified_degree().is_some_and(|d| d >= 4), || format!("{name}: not certified at 4"))?;
        let open = sys.unresolved_overlaps(4);
        ensure(open.is_empty(), || format!("{name}: {} unresolved overlaps", open.len()))?;
        for k in 0..1000 {
            let f = random_poly(&mut rng, a.dim());
            let l = sys.normal_form_with(&f, ReductionOrder::Leftmost);
            let r = sys.normal_form_with(&f, ReductionOrder::Rightmost);
            ensure(l == r, || format!("{name}: sample {k} {f}: {l} vs {r}"))?;
        }
        parts.push(format!("{name} {} rules", sys.rules().len()));
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("certified at D=4, 2x1000 normal forms agree ({}), {t}", parts.join(", ")))
}

fn command_matrix() -> Vec<Vec<&'static str>> {
    let mut cmds = Vec::new();
    for f in ["dual_numbers", "triangular", "base_field"] {
        let path: &'static str = Box::leak(format!("fixtures/algebras/{f}.json").into_boxed_str());
        for fmt in ["text", "json"] {
            cmds.push(vec!["present", path, "--format", fmt]);
            cmds.push(vec!["check", path, "--format", fmt]);
            for field in ["F2", "F3"] {
                cmds.push(vec!["endo", path, "--field", field, "--field-check", "--oracle", "--format", fmt]);
                cmds.push(vec!["aut", path, "--field", field, "--field-check", "--oracle", "--format", fmt]);
                for group in ["fixtures/groups/c2.json", "fixtures/groups/c3.json", "fixtures/groups/c2xc2.json"] {
                    cmds.push(vec!["gradings", path, "--field", field, "--group", group, "--classify", "--oracle", "--format", fmt]);
                }
            }
        }
    }
    cmds
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let cmds = command_matrix();
    for c in &cmds {
        let first = usym(c);
        let second = usym(c);
        ensure(first == second, || format!("output differs for usym {}", c.join(" ")))?;
        ensure(first.0 == 0, || format!("usym {} exited {}", c.join(" "), first.0))?;
    }
    let t = start.elapsed();
    Ok(format!("{} commands byte-identical across two runs, {t:.2?}", cmds.len()))
}

fn main() {
    std::env::set_current_dir(root()).expect("workspace root");
    let criteria: [Criterion; 9] = [
        ("dual-numbers presentation", criterion_1),
        ("triangular presentation", criterion_2),
        ("bialgebra and comodule checks", criterion_3),
        ("automorphism correspondence", criterion_4),
        ("endomorphism oracle", criterion_5),
        ("grading bijection", criterion_6),
        ("grading classification", criterion_7),
        ("rewriting soundness", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS - {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL - {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

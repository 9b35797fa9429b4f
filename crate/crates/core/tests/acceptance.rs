//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in `cargo test`
//! output. The process exits nonzero on any failed sub-check that is not in
//! `KNOWN_BLOCKED`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tqft::cyclotomic::Real;
use tqft::graph::{dim, PlantedTree};
use tqft::invariants::{
    arch_norm, det, is_root_of_unity, is_scalar, norm_scan, pgl_invariant, projective_order, trace_power_invariant,
};
use tqft::rep::{Generator, RepMatrix, Representation, TwistWord};
use tqft::skein::Skein;
use tqft::sl2z::{eval_sl, genus_one_representation, slw, IntMatrix2};
use tqft::slalom::{streaming_power_traces, tree_to_word};
use tqft::{make_field, FieldElement};

const DIGITS: usize = 50;
/// `||a||_5`, `||b||_5`: absolute distance below `10^-30`.
const NORM_TOL_EXP10: u32 = 30;
/// Norm scan: absolute distance below `10^-25`.
const SCAN_TOL_EXP10: u32 = 25;
const FIELD_FUZZ_CASES: usize = 1000;
const SLW_CASES: usize = 500;
const SEED: u64 = 0x5eed_0f_7cf7;

const BUDGET_DIMS: Duration = Duration::from_secs(10);
const BUDGET_GENERATORS: Duration = Duration::from_secs(5);
const BUDGET_SCAN: Duration = Duration::from_secs(30 * 60);
const BUDGET_GENUS5: Duration = Duration::from_secs(15 * 60);
const BUDGET_GENUS6: Duration = Duration::from_secs(45 * 60);

/// Sub-checks that disagree with printed values; see the decisions ledger.
const KNOWN_BLOCKED: [(u32, &str); 5] = [
    (1, "dim([0,1,1,3,3,4],3,0) = 675"),
    (5, "pgl(D_1;7,2) = 2A^5 - A^2"),
    (5, "pgl(D_1;7,2^-1) = -A^4 - A"),
    (8, "(3,2) trace(c1^3)"),
    (9, "matrix size 675"),
];

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    fn budget(&mut self, start: Instant, budget: Duration) {
        let t = start.elapsed();
        self.check(format!("runtime within {budget:?}"), t <= budget, format!("{t:.2?}"));
    }
}

fn el(field: &tqft::Field, s: &str) -> FieldElement {
    FieldElement::parse(field, s).unwrap()
}

fn matrix_is(m: &RepMatrix, want: &[&[&str]]) -> (bool, String) {
    let f = m.field();
    let ok = m.dim() == want.len()
        && want
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, s)| *m.get(r, c) == el(f, s)));
    (ok, if ok { String::new() } else { m.to_text() })
}

fn c1_dimensions() -> Criterion {
    let mut c = Criterion::new(1, "dimensions");
    let start = Instant::now();
    for (tree, k, i, want) in [
        (vec![0], 5, 2, 2),
        (vec![0], 7, 2, 3),
        (vec![0, 1, 1, 1, 2], 3, 2, 275),
        (vec![0, 1, 1, 1, 2], 3, 0, 175),
        (vec![0, 1, 1, 3, 3, 4], 3, 0, 675),
    ] {
        let t = PlantedTree::new(tree).unwrap();
        let got = dim(&t, k, i).unwrap();
        c.check(format!("dim({t},{k},{i}) = {want}"), got == want, format!("got {got}"));
    }
    c.budget(start, BUDGET_DIMS);
    c
}

fn c2_generators() -> Criterion {
    let mut c = Criterion::new(2, "generator matrices");
    let start = Instant::now();
    let rep5 = genus_one_representation(5, 2).unwrap();
    let (ok, d) = matrix_is(&rep5.twa(1).unwrap(), &[&["A^5 - A^4 + A^3 - A^2 + A - 1", "0"], &["0", "A^4"]]);
    c.check("D_1;5,2", ok, d);
    let (ok, d) = matrix_is(
        &rep5.twb(1).unwrap(),
        &[
            &[
                "(3/7)A^5 + (1/7)A^4 + (2/7)A^3 - (5/7)A^2 + (1/7)A - 4/7",
                "(-4/7)A^5 + (8/7)A^4 - (5/7)A^3 + (2/7)A^2 - (6/7)A + 3/7",
            ],
            &[
                "(-3/7)A^5 + (6/7)A^4 - (2/7)A^3 + (5/7)A^2 - (1/7)A + 4/7",
                "(4/7)A^5 - (1/7)A^4 + (5/7)A^3 - (2/7)A^2 + (6/7)A - 3/7",
            ],
        ],
    );
    c.check("D_2;5,2", ok, d);
    let rep7 = genus_one_representation(7, 2).unwrap();
    let (ok, d) = matrix_is(&rep7.twa(1).unwrap(), &[&["-A", "0", "0"], &["0", "-A^3", "0"], &["0", "0", "A^3 - 1"]]);
    c.check("D_1;7,2", ok, d);
    c.budget(start, BUDGET_GENERATORS);
    c
}

fn c3_slw() -> Criterion {
    let mut c = Criterion::new(3, "slw words");
    for (m, want) in [(IntMatrix2::new(7, 3, 2, 1), "L^3 U^2"), (IntMatrix2::new(7, 1, 6, 1), "L U^6")] {
        let w = slw(&m).unwrap();
        c.check(format!("slw({m}) = {want}"), w.to_string() == want, w.to_string());
        c.check(format!("product of slw({m})"), w.product() == m, w.product().to_string());
    }
    c
}

fn c4_eval_sl() -> Criterion {
    let mut c = Criterion::new(4, "eval_sl and pgl on genus 1");
    let va = eval_sl(&IntMatrix2::new(7, 3, 2, 1), 5, 2).unwrap();
    let vb = eval_sl(&IntMatrix2::new(7, 1, 6, 1), 5, 2).unwrap();
    let (ok, d) = matrix_is(
        &va,
        &[
            &[
                "(8/7)A^5 - (2/7)A^4 + (3/7)A^3 - (4/7)A^2 + (5/7)A - 6/7",
                "(1/7)A^5 + (5/7)A^4 - (4/7)A^3 + (3/7)A^2 - (2/7)A + 1/7",
            ],
            &[
                "(6/7)A^5 + (2/7)A^4 + (4/7)A^3 - (3/7)A^2 + (2/7)A - 8/7",
                "(6/7)A^5 + (2/7)A^4 + (4/7)A^3 - (3/7)A^2 + (2/7)A - 1/7",
            ],
        ],
    );
    c.check("Va", ok, d);
    let (ok, d) = matrix_is(
        &vb,
        &[
            &[
                "(-4/7)A^5 + (1/7)A^4 - (5/7)A^3 + (2/7)A^2 + (1/7)A + 3/7",
                "(3/7)A^5 + (1/7)A^4 - (5/7)A^3 + (2/7)A^2 + (1/7)A + 3/7",
            ],
            &[
                "(4/7)A^5 - (1/7)A^4 + (5/7)A^3 - (2/7)A^2 - (1/7)A - 3/7",
                "(4/7)A^5 - (1/7)A^4 - (2/7)A^3 - (2/7)A^2 - (1/7)A - 3/7",
            ],
        ],
    );
    c.check("Vb", ok, d);
    let f = va.field().clone();
    let pa = pgl_invariant(&va).unwrap();
    c.check("pgl(Va)", pa == el(&f, "-3A^5 + 2A^4 - 2A^3 + 3A^2 + 5"), pa.to_string());
    let pb = pgl_invariant(&vb).unwrap();
    c.check("pgl(Vb) = 1", pb.is_one(), pb.to_string());
    c
}

fn c5_pgl_non_extendable() -> Criterion {
    let mut c = Criterion::new(5, "pgl of D_1;7,2 and its inverse");
    let d = genus_one_representation(7, 2).unwrap().twa(1).unwrap();
    let f = d.field().clone();
    let mut w = TwistWord::new();
    w.push(Generator::A(1), -1);
    let dinv = genus_one_representation(7, 2).unwrap().eval_word(&w).unwrap();
    let (p, q) = (pgl_invariant(&d).unwrap(), pgl_invariant(&dinv).unwrap());
    c.check("pgl(D_1;7,2) = 2A^5 - A^2", p == el(&f, "2A^5 - A^2"), format!("got {p}"));
    c.check("pgl(D_1;7,2^-1) = -A^4 - A", q == el(&f, "-A^4 - A"), format!("got {q}"));
    c.check("the two differ", p != q, "");
    // the printed numbers as trace(M^n)/det(M)
    let (tp, tq) = (trace_power_invariant(&d).unwrap(), trace_power_invariant(&dinv).unwrap());
    c.check(
        "trace(D^3)/det(D) reproduces the printed pair",
        tp == el(&f, "2A^5 - A^2") && tq == el(&f, "-A^4 - A"),
        format!("{tp} / {tq}"),
    );
    c
}

fn c6_arch_norm() -> Criterion {
    let mut c = Criterion::new(6, "arch_norm at k=5");
    let emb = make_field(5).unwrap().embeddings(DIGITS);
    for (name, m, want) in [
        ("||a||_5", IntMatrix2::new(7, 3, 2, 1), "2.8019377358048382524722046390148901023"),
        ("||b||_5", IntMatrix2::new(7, 1, 6, 1), "1"),
    ] {
        let got = arch_norm(&eval_sl(&m, 5, 2).unwrap().trace(), &emb);
        let want = Real::parse(want, DIGITS).unwrap();
        c.check(format!("{name} within 1e-{NORM_TOL_EXP10}"), got.close_to(&want, NORM_TOL_EXP10), got.to_string());
    }
    c
}

const SCAN: [&str; 16] = [
    "1",
    "2.2469796037174670610500097680084796213",
    "2.8793852415718167681082185546494629398",
    "2.9189859472289947797807361141326553981",
    "2.7709120513064197918007510440301977572",
    "1",
    "2.8649444588087116091462317836431267725",
    "2.9727226068054447472050183896381342215",
    "2.9776616524502570901394857658680172261",
    "2.9258345746955985900304471947464775986",
    "1",
    "2.9460897411596476776657703455693918400",
    "2.9882759143087192179106054317591031337",
    "2.9897386467837902926427066197674389859",
    "2.9638573945254134007973488852494919219",
    "1",
];

fn c7_norm_scan() -> Criterion {
    let mut c = Criterion::new(7, "norm scan of [2,1;1,1], i=2");
    let start = Instant::now();
    let levels: Vec<u32> = (1..=16).map(|j| 2 * j + 1).collect();
    let got = norm_scan(&IntMatrix2::new(2, 1, 1, 1), 2, &levels, DIGITS).unwrap();
    let three = Real::parse("3", DIGITS).unwrap();
    for ((k, v), want) in got.iter().zip(SCAN) {
        let want = Real::parse(want, DIGITS).unwrap();
        c.check(format!("k={k} within 1e-{SCAN_TOL_EXP10}"), v.close_to(&want, SCAN_TOL_EXP10), v.to_string());
        c.check(format!("k={k} below 3"), v.lt(&three), "");
    }
    c.budget(start, BUDGET_SCAN);
    c
}

fn traces(parents: &[usize], k: u32, i: u32) -> (usize, Vec<FieldElement>) {
    let tree = PlantedTree::new(parents.to_vec()).unwrap();
    let rep = Representation::for_tree(&tree, k, i).unwrap();
    let t = streaming_power_traces(&rep, &tree_to_word(&tree), 3, None).unwrap();
    (rep.dim(), t)
}

fn c8_genus_five() -> Criterion {
    let mut c = Criterion::new(8, "genus 5 knot separation");
    let start = Instant::now();
    let printed: [(u32, [&str; 3], [&str; 3]); 2] = [
        (
            2,
            ["7A^3 + A^2 + 5A - 4", "-13A^3 + 18A^2 + 4A + 25", "-47A^3 - 56A^2 - 65A - 2"],
            ["7A^3 + A^2 + 5A - 4", "-13A^3 + 18A^2 + 4A + 25", "-62A^3 - 47A^2 - 68A - 6"],
        ),
        (
            0,
            ["5A^3 + 3A - 3", "-8A^3 + 11A^2 + 3A + 15", "-20A^3 - 37A^2 - 35A - 25"],
            ["5A^3 + 3A - 3", "-8A^3 + 11A^2 + 3A + 15", "-29A^3 - 31A^2 - 38A - 13"],
        ),
    ];
    for (i, p1, p2) in printed {
        let (_, t1) = traces(&[0, 1, 1, 1, 2], 3, i);
        let (_, t2) = traces(&[0, 1, 1, 1, 3], 3, i);
        let f = t1[0].field().clone();
        for (name, t, p) in [("c1", &t1, p1), ("c2", &t2, p2)] {
            for n in 0..3 {
                let ok = t[n] == el(&f, p[n]);
                c.check(format!("(3,{i}) trace({name}^{})", n + 1), ok, format!("got {}", t[n]));
            }
        }
        c.check(format!("(3,{i}) powers 1,2 equal, cubes differ"), t1[0] == t2[0] && t1[1] == t2[1] && t1[2] != t2[2], "");
    }
    c.budget(start, BUDGET_GENUS5);
    c
}

fn c9_genus_six() -> Criterion {
    let mut c = Criterion::new(9, "genus 6 knot separation");
    let start = Instant::now();
    let (n1, t1) = traces(&[0, 1, 1, 3, 3, 4], 3, 0);
    let (n2, t2) = traces(&[0, 1, 1, 3, 3, 5], 3, 0);
    c.check("trace powers 1,2 equal", t1[0] == t2[0] && t1[1] == t2[1], format!("{} / {}", t1[1], t2[1]));
    c.check("trace of cubes differs", t1[2] != t2[2], format!("{} / {}", t1[2], t2[2]));
    c.check("matrix size 675", n1 == 675 && n2 == 675, format!("got {n1}, {n2}"));
    c.budget(start, BUDGET_GENUS6);
    c
}

fn random_element(rng: &mut StdRng, field: &tqft::Field) -> FieldElement {
    let len = rng.gen_range(0..14);
    let coeffs: Vec<(i64, i64)> = (0..len).map(|_| (rng.gen_range(-50..50), rng.gen_range(1..12))).collect();
    element(field, &coeffs)
}

fn random_genus_one_word(rng: &mut StdRng, max_len: usize) -> TwistWord {
    let mut w = TwistWord::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        let g = if rng.gen() { Generator::A(1) } else { Generator::B(1) };
        w.push(g, rng.gen_range(-3..=3));
    }
    w
}

fn c10_properties() -> Criterion {
    let mut c = Criterion::new(10, "property suites");
    let mut rng = StdRng::seed_from_u64(SEED);

    let mut bad = Vec::new();
    for case in 0..FIELD_FUZZ_CASES {
        let k = [3i64, 5, 7, 9][case % 4];
        let f = make_field(k).unwrap();
        let phi = cyclotomic_by_division((2 * k + 4) as u32);
        let (x, y, z) = (random_element(&mut rng, &f), random_element(&mut rng, &f), random_element(&mut rng, &f));
        let ok = &x + &y == &y + &x
            && &x * &y == &y * &x
            && &(&x * &y) * &z == &x * &(&y * &z)
            && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
            && &x * &y == oracle_product(&x, &y, &phi)
            && (x.is_zero() || (&x * &x.inv().unwrap()).is_one());
        if !ok {
            bad.push(format!("k={k} x={x} y={y} z={z}"));
        }
    }
    c.check(format!("field axioms, {FIELD_FUZZ_CASES} cases"), bad.is_empty(), bad.join("; "));

    let mut ok = true;
    for k in [3u32, 5, 7] {
        let rep = Representation::for_tree(&PlantedTree::new(vec![0, 1]).unwrap(), k, 2).unwrap();
        for e in rep.basis().graph().internal_edges() {
            ok &= rep.twa(e).unwrap().pow(2 * k + 4).unwrap().is_identity();
        }
    }
    c.check("twA^(2k+4) = I for k=3,5,7", ok, "");

    let (mut braid, mut six) = (true, true);
    for k in [3u32, 5, 7, 9] {
        for i in (0..=k).step_by(2) {
            let rep = genus_one_representation(k, i).unwrap();
            let (a, b) = (rep.twa(1).unwrap(), rep.twb(1).unwrap());
            let aba = a.mul(&b).unwrap().mul(&a).unwrap();
            let bab = b.mul(&a).unwrap().mul(&b).unwrap();
            braid &= equal_up_to_root_of_unity(&aba, &bab);
            six &= is_scalar(&a.mul(&b).unwrap().pow(6).unwrap()).is_some_and(|s| is_root_of_unity(&s));
        }
    }
    c.check("genus 1 braid relation up to +-A^j", braid, "");
    c.check("(twA twB)^6 scalar in genus 1", six, "");

    let tree = PlantedTree::new(vec![0, 1, 1]).unwrap();
    let rep = Representation::for_tree(&tree, 5, 2).unwrap();
    let graph = rep.basis().graph().clone();
    let b: Vec<RepMatrix> = (1..=3).map(|r| rep.twb(r).unwrap()).collect();
    let mut ok = (0..3).all(|r| (0..3).all(|s| b[r].mul(&b[s]).unwrap() == b[s].mul(&b[r]).unwrap()));
    for r in 1..=3 {
        let cycle = &graph.handle(r).unwrap().cycle;
        for e in graph.internal_edges().filter(|e| !cycle.contains(e)) {
            let a = rep.twa(e).unwrap();
            ok &= a.mul(&b[r - 1]).unwrap() == b[r - 1].mul(&a).unwrap();
        }
    }
    c.check("disjoint twists commute", ok, "");

    let mut bad = Vec::new();
    let mut done = 0;
    while done < SLW_CASES {
        let a: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let cc: i64 = rng.gen_range(-1_000_000..=1_000_000);
        let Some(m) = sl2z_from(a, cc, rng.gen_range(-20..=20)) else { continue };
        done += 1;
        let w = slw(&m).unwrap();
        if w.product() != m || w.len() as u64 > 10 * m.max_bits() + 6 {
            bad.push(m.to_string());
        }
    }
    c.check(format!("slw round trip, {SLW_CASES} matrices"), bad.is_empty(), bad.join("; "));

    let mut ok = true;
    for _ in 0..40 {
        let k = if rng.gen() { 5 } else { 7 };
        let rep = genus_one_representation(k, 2).unwrap();
        let m = rep.eval_word(&random_genus_one_word(&mut rng, 5)).unwrap();
        let p = random_genus_one_word(&mut rng, 3);
        let conj = rep.eval_word(&p).unwrap().mul(&m).unwrap().mul(&rep.eval_word(&p.inverse()).unwrap()).unwrap();
        let inv = pgl_invariant(&m).unwrap();
        ok &= pgl_invariant(&conj).unwrap() == inv;
        let s = random_element(&mut rng, rep.field());
        ok &= s.is_zero() || pgl_invariant(&m.scale(&s)).unwrap() == inv;
    }
    c.check("pgl invariant under conjugation and scaling", ok, "");

    let mut ok = true;
    for k in [3i64, 5, 7] {
        let f = make_field(k).unwrap();
        let emb = f.embeddings(DIGITS);
        for _ in 0..10 {
            let x = random_element(&mut rng, &f);
            let y = &x * &FieldElement::a_pow(&f, rng.gen_range(-40..40));
            ok &= arch_norm(&x, &emb).close_to(&arch_norm(&y, &emb), NORM_TOL_EXP10);
        }
    }
    c.check("arch_norm invariant under A^m", ok, "");

    for k in [3, 5] {
        let v = eval_sl(&IntMatrix2::new(2, 1, 1, 1), k, 0).unwrap();
        let n = projective_order(&v, 10_000).unwrap();
        c.check(format!("eval_sl([2,1;1,1],{k},0) finite order within 10^4"), n.is_some(), format!("{n:?}"));
    }

    let f = make_field(3).unwrap();
    let sk = Skein::new(&f);
    let proj = |j| (j, Kind::Projector);
    let theta = all_twos_network(&f, &[(0, 1), (0, 1), (0, 1)], &[vec![(0, 1), (1, 0)], vec![(1, 1), (2, 0)], vec![(2, 1), (0, 0)]]);
    let tet = all_twos_network(
        &f,
        &[(0, 1), (1, 2), (2, 0), (3, 0), (3, 1), (3, 2)],
        &[vec![(0, 1), (4, 3), (3, 0)], vec![(1, 2), (5, 3), (4, 1)], vec![(2, 0), (3, 3), (5, 2)], vec![(0, 1), (1, 2), (2, 0)]],
    );
    let ok = closed_stack(&f, 2, &[proj(0)]) == sk.delta(2).unwrap()
        && theta == sk.theta(2, 2, 2).unwrap()
        && tet == sk.tet(2, 2, 2, 2, 2, 2).unwrap();
    c.check("k=3 skein coefficients match the bracket state sum", ok, "");

    let tree = PlantedTree::new(vec![0, 1]).unwrap();
    let rep = Representation::for_tree(&tree, 3, 2).unwrap();
    c.check("coxeter determinant is a root of unity", is_root_of_unity(&det(&rep.eval_word(&tree_to_word(&tree)).unwrap())), "");
    c
}

fn main() {
    let runs: [fn() -> Criterion; 10] = [
        c1_dimensions,
        c2_generators,
        c3_slw,
        c4_eval_sl,
        c5_pgl_non_extendable,
        c6_arch_norm,
        c7_norm_scan,
        c8_genus_five,
        c9_genus_six,
        c10_properties,
    ];
    let mut unexpected = Vec::new();
    for run in runs {
        let start = Instant::now();
        let c = run();
        let t = start.elapsed();
        let failed: Vec<&Check> = c.checks.iter().filter(|k| !k.ok).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {} ({} checks, {t:.2?})", c.id, c.title, c.checks.len());
        for k in &failed {
            let blocked = KNOWN_BLOCKED.iter().any(|&(id, name)| id == c.id && k.name.starts_with(name));
            println!("    {} {}: {}", if blocked { "blocked" } else { "failed " }, k.name, k.detail);
            if !blocked {
                unexpected.push(format!("criterion {}: {}", c.id, k.name));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:#?}");
        std::process::exit(1);
    }
}

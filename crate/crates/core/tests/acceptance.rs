//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion does.
//!
//! Run with `cargo test -p incidence-lie --test acceptance -- --nocapture`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;

use incidence_lie::operators::LinearOperator;
use incidence_lie::preorder::enumerate_preorders;
use incidence_lie::proper::{
    decompose_by_coefficients, decompose_by_diagonal, diagonal_constancy_audit, locality_check,
    Window,
};
use incidence_lie::sample::{
    connected_preorders, random_combination, random_function, random_poset,
};
use incidence_lie::solver::{
    compare_spans, derivation_nullspace, lie_derivation_closed_form, lie_derivation_nullspace,
    Field, SpanRelation,
};
use incidence_lie::{IncidenceFunction, Preorder, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const Q: RingSpec = RingSpec::Rationals;
const Z3: RingSpec = RingSpec::Modular(3);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every connected preorder on at most 3 points and a seeded sample of 50
/// connected preorders on 4 points.
fn instances() -> Vec<Arc<Preorder>> {
    let mut all = Vec::new();
    for n in 1..=3 {
        all.extend(connected_preorders(n, None, SEED));
    }
    all.extend(connected_preorders(4, Some(50), SEED));
    all.into_iter().map(Arc::new).collect()
}

fn field(ring: RingSpec) -> Field {
    Field::new(ring).unwrap()
}

fn e(p: &Arc<Preorder>, ring: RingSpec, x: usize, y: usize) -> IncidenceFunction {
    IncidenceFunction::basis_element(p, ring, x, y).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let inst = instances();
    let mut count = 0;
    for p in &inst {
        for ring in [Q, Z3] {
            let closed = lie_derivation_closed_form(p, field(ring)).map_err(|e| e.to_string())?;
            let brute = lie_derivation_nullspace(p, field(ring)).map_err(|e| e.to_string())?;
            let cmp = compare_spans(&closed, &brute).map_err(|e| e.to_string())?;
            check(cmp.relation == SpanRelation::Equal, || {
                format!("{:?} over {ring}: {}", p.to_file(), cmp.relation)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} instances, spans equal"))
}

fn properness_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for p in &instances() {
        for ring in [Q, Z3] {
            let basis = lie_derivation_nullspace(p, field(ring)).unwrap().basis;
            let mut ops = basis.clone();
            ops.extend((0..100).map(|_| random_combination(p, ring, &basis, &mut rng)));
            for l in &ops {
                let dec = decompose_by_coefficients(l).map_err(|e| e.to_string())?;
                let d = &dec.derivation_part;
                let f = &dec.central_part;
                let ok = d.is_derivation()
                    && f.columns().all(|(_, c)| c.is_central())
                    && dec.verified.f_kills_commutators
                    && &(d + f) == l;
                check(ok, || {
                    format!("{:?} over {ring}: {:?}", p.to_file(), dec.verified)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} operators decomposed"))
}

fn rank_fixtures() -> Outcome {
    let cases: [(&str, Preorder, usize, usize); 4] = [
        (
            "singleton",
            Preorder::build::<_, &str>(&["1"], &[]).unwrap(),
            1,
            0,
        ),
        (
            "antichain2",
            Preorder::build::<_, &str>(&["1", "2"], &[]).unwrap(),
            4,
            0,
        ),
        ("T2", Preorder::chain(&["1", "2"]).unwrap(), 4, 2),
        (
            "M2",
            Preorder::build(&["1", "2"], &[("1", "2"), ("2", "1")]).unwrap(),
            4,
            3,
        ),
    ];
    let mut out = Vec::new();
    for (name, p, lie, der) in cases {
        let p = Arc::new(p);
        let got_lie = lie_derivation_nullspace(&p, field(Q)).unwrap().rank();
        let got_der = derivation_nullspace(&p, field(Q)).unwrap().rank();
        check(got_lie == lie && got_der == der, || {
            format!("{name}: lie {got_lie} (want {lie}), derivation {got_der} (want {der})")
        })?;
        out.push(format!("{name} {lie}/{der}"));
    }
    Ok(out.join(", "))
}

fn algebra_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut products = 0;
    for n in 1..=4 {
        for p in enumerate_preorders(n).unwrap() {
            let p = Arc::new(p);
            let pairs: Vec<_> = p.pairs().collect();
            for &(x, y) in &pairs {
                for &(u, v) in &pairs {
                    let got = &e(&p, Q, x, y) * &e(&p, Q, u, v);
                    let want = if y == u {
                        e(&p, Q, x, v)
                    } else {
                        IncidenceFunction::zero(&p, Q)
                    };
                    check(got == want, || {
                        format!("e_{x}{y} e_{u}{v} on {:?}", p.to_file())
                    })?;
                    products += 1;
                }
            }
        }
    }
    let test_preorders = [
        Preorder::chain(&["1", "2", "3", "4"]).unwrap(),
        Preorder::build(&["1", "2"], &[("1", "2"), ("2", "1")]).unwrap(),
        Preorder::build(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("a", "d")],
        )
        .unwrap(),
        random_poset(5, &mut rng),
    ];
    for p in test_preorders {
        let p = Arc::new(p);
        for ring in [Q, Z3, RingSpec::Integers] {
            let delta = IncidenceFunction::delta(&p, ring);
            for _ in 0..200 {
                let (f, g, h) = (
                    random_function(&p, ring, &mut rng),
                    random_function(&p, ring, &mut rng),
                    random_function(&p, ring, &mut rng),
                );
                check(&(&f * &g) * &h == &f * &(&g * &h), || {
                    format!("associativity on {:?}", p.to_file())
                })?;
                check(&delta * &f == f && &f * &delta == f, || {
                    "delta is not an identity".into()
                })?;
            }
            for _ in 0..50 {
                let f = random_function(&p, ring, &mut rng);
                for (x, y) in p.pairs() {
                    let got = &(&e(&p, ring, x, x) * &f) * &e(&p, ring, y, y);
                    check(got == e(&p, ring, x, y).scale(&f.get(x, y)), || {
                        format!("e_xx f e_yy at ({x}, {y})")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{products} basis products, associativity and sandwich identities"
    ))
}

fn restriction_machinery() -> Outcome {
    let labels: Vec<String> = (1..=6).map(|i| i.to_string()).collect();
    let p = Arc::new(Preorder::chain(&labels).unwrap());
    let pairs: Vec<_> = p.pairs().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..50 {
        let f = random_function(&p, Q, &mut rng);
        let g = random_function(&p, Q, &mut rng);
        let fg = &f * &g;
        for &(x, y) in &pairs {
            let (fr, gr) = (f.restrict(x, y).unwrap(), g.restrict(x, y).unwrap());
            check(fg.restrict(x, y).unwrap() == &fr * &gr, || {
                format!("homomorphism at ({x}, {y})")
            })?;
            let v = fg.get(x, y);
            check(
                (&fr * &g).get(x, y) == v
                    && (&f * &gr).get(x, y) == v
                    && (&fr * &gr).get(x, y) == v,
                || format!("window evaluation at ({x}, {y})"),
            )?;
            // independent oracle: a restriction keeps exactly the entries inside [x, y]
            for (u, w) in pairs.iter().copied() {
                let inside = x <= u && w <= y;
                let want = if inside { f.get(u, w) } else { Q.zero() };
                check(fr.get(u, w) == want, || {
                    format!("f|[{x},{y}] at ({u}, {w})")
                })?;
                if inside {
                    check(
                        fr.restrict(u, w).unwrap() == f.restrict(u, w).unwrap(),
                        || format!("nesting [{u},{w}] in [{x},{y}]"),
                    )?;
                }
            }
        }
    }
    Ok("chain of 6, 50 pairs (f, g)".into())
}

fn locality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0;
    for len in 1..=4 {
        let labels: Vec<String> = (1..=len).map(|i| i.to_string()).collect();
        let p = Arc::new(Preorder::chain(&labels).unwrap());
        let lie = lie_derivation_nullspace(&p, field(Q)).unwrap().basis;
        let der = derivation_nullspace(&p, field(Q)).unwrap().basis;
        for (ops, diagonal) in [(&lie, false), (&der, true)] {
            for l in ops {
                for _ in 0..20 {
                    let f = random_function(&p, Q, &mut rng);
                    for (x, y) in p.pairs().filter(|&(x, y)| diagonal || x != y) {
                        check(locality_check(l, &f, x, y).unwrap(), || {
                            format!("chain {len} at ({x}, {y})")
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} pointwise checks"))
}

fn extension() -> Outcome {
    let w = Window::nat_chain(6);
    let p = w.preorder().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let der = derivation_nullspace(&p, field(Q)).unwrap().basis;
    for d in &der {
        let hat = w.extend(d).unwrap().interior_operator().unwrap();
        check(hat.is_derivation(), || {
            "extension of a derivation is not a derivation".into()
        })?;
    }
    let lie = lie_derivation_nullspace(&p, field(Q)).unwrap().basis;
    for _ in 0..50 {
        let d = random_combination(&p, Q, &der, &mut rng);
        let l = random_combination(&p, Q, &lie, &mut rng);
        let f = random_function(&p, Q, &mut rng);
        let (dhat, lhat) = (w.extend(&d).unwrap(), w.extend(&l).unwrap());
        let (df, lf) = (d.apply(&f).unwrap(), l.apply(&f).unwrap());
        for (x, y) in p.pairs() {
            check(
                dhat.evaluate_function(&f, x, y).unwrap() == df.get(x, y),
                || format!("derivation extension at ({x}, {y})"),
            )?;
            if x != y {
                check(
                    lhat.evaluate_function(&f, x, y).unwrap() == lf.get(x, y),
                    || format!("Lie derivation extension at ({x}, {y})"),
                )?;
            }
        }
    }
    Ok(format!(
        "window 0..5, {} derivation basis vectors, 50 inputs",
        der.len()
    ))
}

fn posets_diagonal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let posets: Vec<_> = instances().into_iter().filter(|p| p.is_poset()).collect();
    for p in &posets {
        for ring in [Q, Z3] {
            for l in lie_derivation_nullspace(p, field(ring)).unwrap().basis {
                let sample: Vec<_> = (0..20)
                    .map(|_| random_function(p, ring, &mut rng))
                    .collect();
                check(
                    diagonal_constancy_audit(&l, &sample).unwrap().all_constant,
                    || format!("non-constant diagonal on {:?}", p.to_file()),
                )?;
                let a = decompose_by_diagonal(&l).unwrap();
                let b = decompose_by_coefficients(&l).unwrap();
                check(
                    a.derivation_part == b.derivation_part && a.central_part == b.central_part,
                    || format!("decompositions differ on {:?}", p.to_file()),
                )?;
            }
        }
    }
    Ok(format!("{} posets", posets.len()))
}

fn two_cycle_finding() -> Outcome {
    let p = Arc::new(Preorder::build(&["1", "2"], &[("1", "2"), ("2", "1")]).unwrap());
    // [e12, e21] with plain 2x2 integer matrices
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        let mut c = [[0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (0..2).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    };
    let (e12, e21) = ([[0, 1], [0, 0]], [[0, 0], [1, 0]]);
    let (ab, ba) = (mul(e12, e21), mul(e21, e12));
    let want = [
        Q.from_i64(ab[0][0] - ba[0][0]),
        Q.from_i64(ab[1][1] - ba[1][1]),
    ];

    let ad = LinearOperator::inner_derivation(&e(&p, Q, 0, 1));
    let report = diagonal_constancy_audit(&ad, &[e(&p, Q, 1, 0)]).unwrap();
    check(report.samples[0].values == want, || {
        format!("diagonal {:?}", report.samples[0].values)
    })?;
    check(!report.all_constant, || "diagonal reported constant".into())?;
    let by_diag = decompose_by_diagonal(&ad).unwrap();
    check(!by_diag.verified.d_is_derivation, || {
        "diagonal split gave a derivation".into()
    })?;
    let by_coeff = decompose_by_coefficients(&ad).unwrap();
    check(by_coeff.verified.all(), || {
        format!("{:?}", by_coeff.verified)
    })?;
    Ok(format!(
        "diagonal ({}, {}), diagonal split D not a derivation, coefficient split verified",
        want[0], want[1]
    ))
}

fn mobius() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..20 {
        let n = rng.gen_range(1..=6);
        let p = Arc::new(random_poset(n, &mut rng));
        let mu = IncidenceFunction::mobius(&p, Q).unwrap();
        let zeta = IncidenceFunction::zeta(&p, Q);
        let delta = IncidenceFunction::delta(&p, Q);
        check(&mu * &zeta == delta && &zeta * &mu == delta, || {
            format!("{:?}", p.to_file())
        })?;
    }
    Ok("20 posets".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let poset = dir.path().join("m2.json");
    std::fs::write(
        &poset,
        r#"{"elements": ["1", "2"], "relations": [["1", "2"], ["2", "1"]]}"#,
    )
    .unwrap();
    let chain = dir.path().join("c3.json");
    std::fs::write(
        &chain,
        r#"{"elements": ["1", "2", "3"], "relations": [["1", "2"], ["2", "3"], ["1", "3"]]}"#,
    )
    .unwrap();
    let (poset, chain) = (poset.to_str().unwrap(), chain.to_str().unwrap());
    let runs: [&[&str]; 4] = [
        &[
            "audit", "--poset", poset, "--ring", "Q", "--trials", "100", "--seed", "7",
        ],
        &[
            "basis", "--poset", chain, "--ring", "Z/3", "--method", "both",
        ],
        &["basis", "--poset", poset, "--kind", "derivation"],
        &["enumerate", "--n", "3"],
    ];
    for args in runs {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_incidence"))
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (run(), run());
        check(a.status.success() && !a.stdout.is_empty(), || {
            format!("{args:?} failed")
        })?;
        check(a.stdout == b.stdout, || {
            format!("{args:?} differs between runs")
        })?;
    }
    Ok("4 commands byte-identical across runs".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("properness round-trip", properness_round_trip),
        ("rank fixtures", rank_fixtures),
        ("algebra laws", algebra_laws),
        ("restriction machinery", restriction_machinery),
        ("locality", locality),
        ("extension", extension),
        ("diagonal constancy on posets", posets_diagonal),
        ("two-cycle audit finding", two_cycle_finding),
        ("Moebius plumbing", mobius),
        ("CLI determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

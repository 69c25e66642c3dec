//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion reports one line; the process fails if any criterion does.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parikh_core::chambers::{bs_eval, box_points, enumerate_regions, sign_vector, BoxSpline};
use parikh_core::exactmath::rational::{floor_int, rat, ratio};
use parikh_core::exactmath::{power_sum_polynomial, Rational};
use parikh_core::langfront::{
    cross_section, decide_parikh_slender, parikh_counting_function, parikh_image, BoundedLanguage,
    CountingFunction, Morphism,
};
use parikh_core::oracle::{census_parikh, count_representations_brute, count_system_brute};
use parikh_core::partition::{box_spline_of_system, is_homogeneous, DiophantineSystem};
use parikh_core::quasipoly::{floor_affine_qp, Rounding};
use parikh_core::semilinear::{decompose_semisimple, sl_member, LinearSet, SemilinearSet, DEFAULT_DEPTH_CAP};
use parikh_core::series::{generating_function, taylor_coefficients, RationalSeriesExpr};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nat(x: &[i64]) -> Vec<u64> {
    x.iter().map(|&c| c as u64).collect()
}

fn system(rows: &[Vec<u64>]) -> DiophantineSystem {
    DiophantineSystem::new(rows.to_vec(), None).expect("valid system")
}

fn random_system(rng: &mut ChaCha8Rng) -> DiophantineSystem {
    let t = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=4);
    let mut cols: Vec<Vec<u64>> = Vec::new();
    while cols.len() < k {
        let c: Vec<u64> = (0..t).map(|_| rng.gen_range(0..=4)).collect();
        if c.iter().any(|&v| v > 0) {
            cols.push(c);
        }
    }
    let rows = (0..t).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    DiophantineSystem::new(rows, None).expect("valid system")
}

fn language(text: &str) -> (BoundedLanguage, CountingFunction) {
    let bl = BoundedLanguage::parse(text, 16).expect("language parses");
    let f = parikh_counting_function(&bl, DEFAULT_DEPTH_CAP).expect("pipeline runs");
    (bl, f)
}

fn census_of(bl: &BoundedLanguage, bound: u64) -> BTreeMap<Vec<u64>, u64> {
    census_parikh(bl, &vec![bound; bl.alphabet().len()])
}

fn spline_matches_brute(sys: &DiophantineSystem, bound: u64) -> Result<u64, String> {
    let b = box_spline_of_system(sys).map_err(|e| e.to_string())?;
    let mut n = 0;
    for x in box_points(sys.rows(), bound) {
        let v = nat(&x);
        let got = bs_eval(&b, &x).map_err(|e| e.to_string())?;
        let want = count_system_brute(sys, &v);
        ensure(got == want, || format!("{:?} at {v:?}: {got} vs {want}", sys.matrix()))?;
        n += 1;
    }
    Ok(n)
}

fn vpf_oracle() -> Outcome {
    let mut points = 0;
    for rows in common::system_suite() {
        points += spline_matches_brute(&system(&rows), 30)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        points += spline_matches_brute(&random_system(&mut rng), 30)?;
    }
    Ok(format!("6 suite + 50 random systems, {points} points"))
}

fn closed_forms() -> Outcome {
    let line = box_spline_of_system(&system(&[vec![1, 1]])).map_err(|e| e.to_string())?;
    let regions = enumerate_regions(&line, 6).map_err(|e| e.to_string())?;
    for (sign, q) in &regions {
        let positive = sign.to_string() == "+";
        for n in 0..40i64 {
            if positive != (n > 0) {
                continue;
            }
            let want = if positive { rat(n + 1) } else { rat(1) };
            ensure(q.eval(&[n]).map_err(|e| e.to_string())? == want, || format!("[[1,1]] region {sign} at {n}"))?;
        }
        if positive {
            ensure(q.canonicalize().period() == 1, || "[[1,1]] piece is not n+1".into())?;
        }
    }
    ensure(regions.len() == 2, || format!("[[1,1]] has {} regions", regions.len()))?;

    let coins = system(&[vec![2, 3]]);
    let b = box_spline_of_system(&coins).map_err(|e| e.to_string())?;
    let expected = [1u64, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2];
    let series = generating_function(std::slice::from_ref(&coins)).map_err(|e| e.to_string())?;
    let coeffs = taylor_coefficients(&series, 11);
    for (n, &want) in expected.iter().enumerate() {
        let got = bs_eval(&b, &[n as i64]).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(want), || format!("[[2,3]] at {n}: {got}"))?;
        ensure(count_system_brute(&coins, &[n as u64]) == BigUint::from(want), || format!("oracle at {n}"))?;
        let c = coeffs.get(&vec![n as u64]).cloned().unwrap_or_default();
        ensure(c == BigUint::from(want), || format!("coefficient of x^{n}: {c}"))?;
    }
    let (_, positive) = enumerate_regions(&b, 6)
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|(s, _)| s.to_string() == "+")
        .ok_or("[[2,3]] has no positive region")?;
    let period = positive.canonicalize().period();
    ensure(period == 6, || format!("[[2,3]] period {period}"))?;
    Ok("n+1 and the period-6 coin counts".into())
}

fn power_sums_and_floors() -> Outcome {
    for m in 0..=8u32 {
        let p = power_sum_polynomial(m);
        let at = |n: i64| p.eval_i64(&[n]).map_err(|e| e.to_string());
        ensure(at(-1)?.is_zero(), || format!("p_{m}(-1) ≠ 0"))?;
        let mut sum = BigInt::zero();
        for n in 0..=50i64 {
            sum += BigInt::from(n).pow(m);
            ensure(at(n)? == Rational::from_integer(sum.clone()), || format!("p_{m}({n})"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let t = rng.gen_range(1..=3);
        let b: Vec<Rational> = (0..t).map(|_| ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect();
        let k = rng.gen_range(-5..=5);
        let d = rng.gen_range(1..=5u64);
        let mode = if rng.gen_bool(0.5) { Rounding::Floor } else { Rounding::CeilingInner };
        let q = floor_affine_qp(&b, k, d, mode).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let x: Vec<i64> = (0..t).map(|_| rng.gen_range(-20..=20)).collect();
            let lin: Rational = b.iter().zip(&x).map(|(bi, &xi)| bi * rat(xi)).sum();
            let inner = match mode {
                Rounding::Floor => floor_int(&lin),
                Rounding::CeilingInner => -floor_int(&-lin),
            };
            let want = (inner + BigInt::from(k)).div_floor(&BigInt::from(d));
            let got = q.eval(&x).map_err(|e| e.to_string())?;
            ensure(got == Rational::from_integer(want.clone()), || {
                format!("instance {case}: b={b:?} k={k} d={d} {mode:?} at {x:?}: {got} vs {want}")
            })?;
        }
    }
    Ok("power sums m ≤ 8, n ≤ 50; 200 floor-affine instances".into())
}

fn series_matches(e: &RationalSeriesExpr, value: impl Fn(&[u64]) -> BigUint, label: &str) -> Result<u64, String> {
    const DEGREE: u64 = 15;
    let coeffs = taylor_coefficients(e, DEGREE);
    let mut n = 0;
    for x in box_points(e.vars(), DEGREE) {
        let v = nat(&x);
        if v.iter().sum::<u64>() > DEGREE {
            continue;
        }
        let c = coeffs.get(&v).cloned().unwrap_or_default();
        let want = value(&v);
        ensure(c == want, || format!("{label} at {v:?}: coefficient {c}, value {want}"))?;
        n += 1;
    }
    Ok(n)
}

fn series_coefficients() -> Outcome {
    let mut n = 0;
    for rows in common::system_suite() {
        let sys = system(&rows);
        let b = box_spline_of_system(&sys).map_err(|e| e.to_string())?;
        let e = generating_function(std::slice::from_ref(&sys)).map_err(|e| e.to_string())?;
        let value = |v: &[u64]| bs_eval(&b, &v.iter().map(|&c| c as i64).collect::<Vec<_>>()).expect("evaluates");
        n += series_matches(&e, value, &format!("{rows:?}"))?;
    }
    for (name, text) in common::languages() {
        let (_, f) = language(text);
        let e = RationalSeriesExpr::of_counting_function(&f);
        n += series_matches(&e, |v| f.eval(v).expect("evaluates"), name)?;
    }
    Ok(format!("{n} coefficients up to total degree 15"))
}

fn language_pipeline() -> Outcome {
    let mut notes = Vec::new();
    for (name, text) in common::languages() {
        let start = Instant::now();
        let (bl, f) = language(text);
        let census = census_of(&bl, 10);
        for x in box_points(bl.alphabet().len(), 10) {
            let v = nat(&x);
            let want = BigUint::from(census.get(&v).copied().unwrap_or(0));
            let got = f.eval(&v).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{name} at {v:?}: {got} vs census {want}"))?;
        }
        notes.push(format!("{name} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn cross_sections() -> Outcome {
    const MAXLEN: u64 = 12;
    let cases: [&[&str]; 5] = [&["a", "a"], &["a", "b"], &["a", "b", "a"], &["ab", "b"], &["ab", "ab"]];
    let mut words = 0;
    for images in cases {
        let m = Morphism::new(images).map_err(|e| e.to_string())?;
        let r = cross_section(&m);
        let lens: Vec<u64> = images.iter().map(|w| w.len() as u64).collect();
        let mut hits: BTreeMap<String, u32> = BTreeMap::new();
        let mut l = vec![0u64; images.len()];
        loop {
            let len: u64 = l.iter().zip(&lens).map(|(a, b)| a * b).sum();
            if len <= MAXLEN {
                let w = m.apply_exponents(&l);
                *hits.entry(w).or_default() += u32::from(r.accepts_exponents(&l));
            }
            // next exponent vector with total length ≤ MAXLEN
            let mut i = 0;
            loop {
                if i == l.len() {
                    break;
                }
                l[i] += 1;
                let len: u64 = l.iter().zip(&lens).map(|(a, b)| a * b).sum();
                if len <= MAXLEN {
                    break;
                }
                l[i] = 0;
                i += 1;
            }
            if i == l.len() {
                break;
            }
        }
        for (w, n) in &hits {
            ensure(*n == 1, || format!("{images:?}: {w:?} has {n} preimages"))?;
        }
        words += hits.len();
    }
    Ok(format!("5 morphisms, {words} words"))
}

fn linear(base: &[u64], periods: &[&[u64]]) -> LinearSet {
    LinearSet::new(base.to_vec(), periods.iter().map(|p| p.to_vec()).collect()).expect("valid linear set")
}

fn random_set(rng: &mut ChaCha8Rng) -> SemilinearSet {
    let k = rng.gen_range(1..=3);
    let comps = (0..rng.gen_range(1..=3))
        .map(|_| {
            let base = (0..k).map(|_| rng.gen_range(0..=3)).collect();
            let periods = (0..rng.gen_range(0..=3))
                .map(|_| {
                    let mut p: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=3)).collect();
                    if p.iter().all(|&v| v == 0) {
                        p[0] = 1;
                    }
                    p
                })
                .collect();
            LinearSet::new(base, periods).expect("valid linear set")
        })
        .collect();
    SemilinearSet::new(k, comps).expect("valid set")
}

fn decomposition_suite() -> Vec<(String, SemilinearSet)> {
    let mut suite = vec![
        (
            "simple".to_string(),
            SemilinearSet::new(2, vec![linear(&[1, 0], &[&[2, 0], &[0, 1]])]).unwrap(),
        ),
        (
            "N as 1* ∪ 2*".to_string(),
            SemilinearSet::new(1, vec![linear(&[0], &[&[1]]), linear(&[0], &[&[2]])]).unwrap(),
        ),
        (
            "dependent diagonal".to_string(),
            SemilinearSet::new(2, vec![linear(&[0, 0], &[&[1, 1], &[2, 2]])]).unwrap(),
        ),
        (
            "three periods".to_string(),
            SemilinearSet::new(2, vec![linear(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1]])]).unwrap(),
        ),
        ("empty".to_string(), SemilinearSet::empty(2)),
    ];
    for (name, text) in common::languages() {
        let bl = BoundedLanguage::parse(text, 16).unwrap();
        suite.push((format!("Parikh image of {name}"), parikh_image(bl.grammar())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..20 {
        suite.push((format!("random {i}"), random_set(&mut rng)));
    }
    suite
}

fn decomposition() -> Outcome {
    let suite = decomposition_suite();
    for (name, s) in &suite {
        let d = decompose_semisimple(s, DEFAULT_DEPTH_CAP).map_err(|e| format!("{name}: {e}"))?;
        ensure(d.components().iter().all(|c| c.is_simple()), || format!("{name}: component not simple"))?;
        for x in box_points(s.dim(), 20) {
            let v = nat(&x);
            let inside = sl_member(s, &v).map_err(|e| e.to_string())?;
            let reps: Vec<u64> = d.components().iter().map(|c| count_representations_brute(c, &v)).collect();
            let total: u64 = reps.iter().sum();
            ensure(total == u64::from(inside), || format!("{name} at {v:?}: member {inside}, representations {reps:?}"))?;
        }
    }
    Ok(format!("{} sets on [0,20]^k", suite.len()))
}

fn slenderness() -> Outcome {
    let cases = [
        ("balanced", common::BALANCED, Some(1)),
        ("a*b*", common::A_STAR_B_STAR, Some(1)),
        ("a*b*a*", common::A_B_A, None),
    ];
    for (name, text, expected) in cases {
        let (bl, f) = language(text);
        let (slender, r) = decide_parikh_slender(&f, 8).map_err(|e| e.to_string())?;
        let decided = if slender { r } else { None };
        ensure(decided == expected, || format!("{name}: decided {slender} with {r:?}"))?;
        let max_on = |bound| census_of(&bl, bound).values().copied().max().unwrap_or(0);
        let (small, large) = (max_on(6), max_on(12));
        match expected {
            Some(r) => ensure(small == r && large == r, || format!("{name}: census maxima {small}, {large}"))?,
            None => ensure(large > small, || format!("{name}: census maxima do not grow ({small}, {large})"))?,
        }
    }
    Ok("balanced r=1, a*b* r=1, a*b*a* not slender".into())
}

fn splines_under_test(rng: &mut ChaCha8Rng) -> Vec<BoxSpline> {
    let mut out: Vec<BoxSpline> = common::system_suite()
        .iter()
        .map(|r| box_spline_of_system(&system(r)).unwrap())
        .collect();
    out.extend((0..20).map(|_| box_spline_of_system(&random_system(rng)).unwrap()));
    for (_, text) in common::languages() {
        let (_, f) = language(text);
        out.extend(f.summands().iter().map(|s| s.spline.clone()));
    }
    out
}

fn structural() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let splines = splines_under_test(&mut rng);
    let mut values = 0;
    for b in &splines {
        ensure(is_homogeneous(b.arrangement()), || "inhomogeneous hyperplane".into())?;
        for x in box_points(b.dim(), 6) {
            let piece = b.piece_at(&x).map_err(|e| e.to_string())?;
            let raw = piece.eval(&x);
            let exact = bs_eval(b, &x).map_err(|e| e.to_string())?;
            let overridden = b.overrides().contains_key(&x);
            ensure(overridden || (raw.is_integer() && raw >= rat(0)), || format!("piece value {raw} at {x:?}"))?;
            ensure(
                overridden || raw.to_integer().to_biguint() == Some(exact.clone()),
                || format!("piece value {raw} vs {exact} at {x:?}"),
            )?;
            values += 1;
        }
    }
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 100 {
        attempts += 1;
        ensure(attempts < 100_000, || format!("only {pairs} witness pairs found"))?;
        let b = &splines[rng.gen_range(0..splines.len())];
        let t = b.dim();
        let x: Vec<i64> = (0..t).map(|_| rng.gen_range(0..=12)).collect();
        let y: Vec<i64> = (0..t).map(|_| rng.gen_range(0..=12)).collect();
        let sx = sign_vector(b.arrangement(), &x).unwrap();
        if x == y || sx != sign_vector(b.arrangement(), &y).unwrap() {
            continue;
        }
        let px = b.derive_uncached(&x).map_err(|e| e.to_string())?;
        let py = b.derive_uncached(&y).map_err(|e| e.to_string())?;
        for z in box_points(t, 12) {
            if sign_vector(b.arrangement(), &z).unwrap() == sx {
                ensure(px.eval(&z) == py.eval(&z), || format!("witnesses {x:?}, {y:?} disagree at {z:?}"))?;
            }
        }
        pairs += 1;
    }
    Ok(format!("{} splines, {values} values, {pairs} witness pairs", splines.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 VPF oracle equivalence", vpf_oracle),
        ("2 closed forms", closed_forms),
        ("3 power sums and floor-affine quasi-polynomials", power_sums_and_floors),
        ("4 generating-function coefficients", series_coefficients),
        ("5 language pipeline vs census", language_pipeline),
        ("6 cross-section bijectivity", cross_sections),
        ("7 semi-simple decomposition validity", decomposition),
        ("8 slenderness decision", slenderness),
        ("9 structural invariants", structural),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({detail}; {secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}


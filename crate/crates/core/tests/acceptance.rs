//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with its timing;
//! the process fails if any criterion fails or overruns its time limit.
#![allow(clippy::type_complexity)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use abstorus::bridge::{betti_of_dr, dr_of_betti};
use abstorus::jump::{
    cohomology_dims, fox_complex, jump_locus_reconstruct, non_torsion_probe, semicontinuity_check, symmetry_check,
    CyclotomicNumber, GroupPresentation, JumpLocusReport, LaurentChainComplex, ReconstructOptions,
};
use abstorus::torus::{galois_apply, galois_invariant, galois_witness, grid_oracle, units};
use abstorus::{AbsoluteSet, GaloisElement, RatMod1, TorsionCoset, TorsionPoint};
use common::{grid_points, koszul2, rand_complex, rand_coset, rand_set, LevelOracle, FIGURE_EIGHT, TREFOIL};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn point_set(n: usize, pts: &[&[(i64, i64)]]) -> AbsoluteSet {
    let cosets = pts
        .iter()
        .map(|p| TorsionCoset::point(&TorsionPoint::new(p.iter().map(|&(a, b)| RatMod1::new(a, b)).collect())));
    AbsoluteSet::from_cosets(n, cosets).unwrap()
}

fn trefoil() -> LaurentChainComplex {
    fox_complex(&GroupPresentation::parse(TREFOIL).unwrap()).unwrap().identity_component
}

fn reconstruct(c: &LaurentChainComplex, i: usize, k: usize, level: u64) -> JumpLocusReport {
    jump_locus_reconstruct(c, i, k, level, &ReconstructOptions::default()).unwrap()
}

fn boolean_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let level = 24i64;
    let mut compared = 0usize;
    for case in 0..1000 {
        let n = rng.gen_range(1..=3);
        let (a, b) = (rand_set(&mut rng, n), rand_set(&mut rng, n));
        let (oa, ob) = (LevelOracle::new(&a, level), LevelOracle::new(&b, level));
        let points = grid_points(level, n);
        let ops: [(&str, AbsoluteSet, fn(bool, bool) -> bool); 4] = [
            ("union", a.union(&b).unwrap(), |x, y| x || y),
            ("intersection", a.intersect(&b).unwrap(), |x, y| x && y),
            ("complement", a.complement(), |x, _| !x),
            ("difference", a.difference(&b).unwrap(), |x, y| x && !y),
        ];
        for (name, result, f) in ops {
            let got = grid_oracle(&result, level as u64).unwrap();
            let want: Vec<TorsionPoint> = points
                .iter()
                .filter(|p| f(oa.contains(p), ob.contains(p)))
                .map(|p| TorsionPoint::at_level(level as u64, &p.iter().map(|&x| x as u64).collect::<Vec<_>>()))
                .collect();
            ensure(got == want, || format!("case {case}: {name} disagrees with the grid ({a:?}, {b:?})"))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} results agree with the level-24 grid"))
}

fn trefoil_points() -> AbsoluteSet {
    point_set(1, &[&[(0, 1)], &[(1, 6)], &[(5, 6)]])
}

fn trefoil_regression() -> Check {
    let report = reconstruct(&trefoil(), 1, 1, 12);
    ensure(report.locus == trefoil_points(), || format!("locus {:?}", report.locus))?;
    ensure(report.certificates.len() == 3, || format!("{} certificates", report.certificates.len()))?;
    ensure(report.certificates.iter().all(|c| c.holds && c.coset.dim() == 0), || "uncertified component".into())?;
    Ok("V^1_1 = {1, ζ6, ζ6^5}, three certified points".into())
}

fn galois_invariance() -> Check {
    let locus = reconstruct(&trefoil(), 1, 1, 12).locus;
    ensure(units(6) == vec![1, 5], || "units of ℤ/6".into())?;
    ensure(galois_invariant(&locus, 6).unwrap(), || "trefoil locus is not invariant".into())?;
    let cut = locus.difference(&point_set(1, &[&[(5, 6)]])).unwrap();
    let w = galois_witness(&cut, 6).unwrap().map(|g| g.unit());
    ensure(w == Some(5), || format!("witness {w:?}"))?;
    Ok("invariant at level 6; without ζ6^5 the witness is u = 5".into())
}

fn inversion_symmetry() -> Check {
    let opts = ReconstructOptions::default();
    let cases: [(&str, LaurentChainComplex, Vec<(usize, usize)>); 2] = [
        ("trefoil", trefoil(), vec![(0, 1), (1, 1), (2, 1)]),
        ("Koszul", koszul2(), vec![(0, 1), (1, 1), (1, 2), (2, 1)]),
    ];
    let mut checked = 0;
    for (name, c, degrees) in cases {
        for (i, k) in degrees {
            let r = symmetry_check(&c, i, k, 12, &opts).unwrap();
            ensure(r.pointwise_witness.is_none(), || format!("{name} V^{i}_{k}: {:?}", r.pointwise_witness))?;
            ensure(r.locus_inversion_stable, || format!("{name} V^{i}_{k} is not inversion stable"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} loci inversion stable, pointwise symmetric on the level-12 grid"))
}

fn koszul_regression() -> Check {
    let c = koszul2();
    let origin = point_set(2, &[&[(0, 1), (0, 1)]]);
    for (i, k, want) in
        [(0, 1, &origin), (2, 1, &origin), (1, 1, &origin), (1, 2, &origin), (1, 3, &AbsoluteSet::empty(2))]
    {
        let r = reconstruct(&c, i, k, 6);
        ensure(&r.locus == want, || format!("V^{i}_{k} = {:?}", r.locus))?;
        ensure(r.certificates.iter().all(|cert| cert.holds), || format!("V^{i}_{k} uncertified"))?;
    }
    Ok("V^0_1 = V^2_1 = V^1_1 = V^1_2 = {(1,1)}, V^1_3 = ∅".into())
}

fn figure_eight() -> Check {
    let fc = fox_complex(&GroupPresentation::parse(FIGURE_EIGHT).unwrap()).unwrap();
    let c = fc.identity_component;
    // ζ5 + ζ5^4 = (√5 − 1)/2, so (3 + √5)/2 = 2 + ζ5 + ζ5^4
    let z = |k| CyclotomicNumber::zeta_pow(5, k);
    let t = CyclotomicNumber::from_int(5, 2).add(&z(1)).add(&z(4));
    let delta = t.mul(&t).sub(&t.mul(&CyclotomicNumber::from_int(5, 3))).add(&CyclotomicNumber::one(5));
    ensure(delta.is_zero(), || "t is not a root of t² − 3t + 1".into())?;
    ensure(non_torsion_probe(&c, 1, 1, &[t]).unwrap(), || "probe at (3+√5)/2 is false".into())?;
    let r = reconstruct(&c, 1, 1, 60);
    ensure(r.locus == point_set(1, &[&[(0, 1)]]), || format!("V^1_1 at N = 60 is {:?}", r.locus))?;
    Ok("(3+√5)/2 ∈ V^1_1 but the level-60 search finds only {t = 1}".into())
}

fn exp_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..500 {
        let n = rng.gen_range(1..=4);
        let denom = rng.gen_range(1..=24);
        let c = rand_coset(&mut rng, n, denom);
        let back = betti_of_dr(&dr_of_betti(&c));
        ensure(back == c, || format!("case {case}: {c:?} came back as {back:?}"))?;
    }
    Ok("500 cosets recovered exactly".into())
}

fn semicontinuity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut samples = 0;
    for case in 0..100 {
        let n = rng.gen_range(1..=2);
        let c = rand_complex(&mut rng, n, 4, 0);
        for i in 0..c.ranks().len() {
            let r = semicontinuity_check(&c, i, &TorsionCoset::full(n), 24, 12, case).unwrap();
            ensure(r.violation.is_none(), || format!("case {case}, degree {i}: {:?}", r.violation))?;
            samples += r.samples;
        }
    }
    Ok(format!("{samples} sampled torsion points at or above the generic dimension"))
}

fn algebra_laws() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..200 {
        let n = rng.gen_range(1..=2);
        let (a, b) = (rand_set(&mut rng, n), rand_set(&mut rng, n));
        let ab = a.union(&b).unwrap();
        let ca = a.closure();
        ensure(ca.closure() == ca, || format!("case {case}: closure is not idempotent"))?;
        ensure(a.is_subset(&ca).unwrap(), || format!("case {case}: closure is not extensive"))?;
        ensure(ca.is_subset(&ab.closure()).unwrap(), || format!("case {case}: closure is not monotone"))?;
        ensure(ab.complement() == a.complement().intersect(&b.complement()).unwrap(), || {
            format!("case {case}: De Morgan fails for union")
        })?;
        ensure(a.intersect(&b).unwrap().complement() == a.complement().union(&b.complement()).unwrap(), || {
            format!("case {case}: De Morgan fails for intersection")
        })?;
        ensure(a.complement().complement() == a, || format!("case {case}: complement is not an involution"))?;
        let level =
            [&a, &b, &ab].iter().fold(12u64, |acc, s| num_integer::lcm(acc, s.torsion_order().to_u64().unwrap()));
        let us = units(level);
        let g = GaloisElement::new(level, us[rng.gen_range(0..us.len())]).unwrap();
        let h = GaloisElement::new(level, us[rng.gen_range(0..us.len())]).unwrap();
        let act = |g: &GaloisElement, s: &AbsoluteSet| galois_apply(g, s).unwrap();
        ensure(act(&g, &act(&h, &a)) == act(&g.compose(&h).unwrap(), &a), || format!("case {case}: group law"))?;
        ensure(act(&GaloisElement::identity(level), &a) == a, || format!("case {case}: identity acts"))?;
        ensure(act(&g, &ab) == act(&g, &a).union(&act(&g, &b)).unwrap(), || format!("case {case}: σ and ∪"))?;
        ensure(act(&g, &a.complement()) == act(&g, &a).complement(), || format!("case {case}: σ and complement"))?;
    }
    Ok("200 random pairs satisfy the closure, boolean and Galois laws".into())
}

fn main() {
    // keep pointwise dimensions honest at the points used above
    assert_eq!(cohomology_dims(&trefoil(), &TorsionPoint::identity(1)).unwrap(), vec![1, 1, 0]);

    let criteria: [(&str, fn() -> Check, Option<u64>); 9] = [
        ("boolean operations match the torsion grid", boolean_oracle, Some(60)),
        ("trefoil jump locus", trefoil_regression, Some(5)),
        ("Galois invariance of the trefoil locus", galois_invariance, None),
        ("inversion symmetry", inversion_symmetry, None),
        ("Koszul jump loci", koszul_regression, Some(2)),
        ("figure-eight: a non-torsion jump", figure_eight, Some(30)),
        ("Exp bridge round trip", exp_round_trip, None),
        ("semicontinuity on random complexes", semicontinuity, Some(60)),
        ("algebra laws", algebra_laws, None),
    ];
    let mut failed = 0;
    for (idx, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > Duration::from_secs(l) => Err(format!("over the {l} s limit")),
            (o, _) => o,
        };
        let limit = limit.map_or(String::new(), |l| format!(", limit {l} s"));
        match outcome {
            Ok(detail) => {
                println!("PASS criterion {}: {name}: {detail} ({:.2} s{limit})", idx + 1, elapsed.as_secs_f64())
            }
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} ({:.2} s{limit})", idx + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
}

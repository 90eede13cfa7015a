use std::path::Path;

use abstorus::bridge::{betti_of_dr, dr_of_betti};
use abstorus::exec::Strategy;
use abstorus::format::{
    complex_from_json, complex_to_json, coset_from_json, coset_to_json, int_matrix_from_json, int_matrix_to_json,
    int_to_json, point_to_json, report_to_json, set_from_json, set_to_json, subspace_from_json, subspace_to_json,
    verdict_to_json,
};
use abstorus::jump::loci::DEFAULT_GRID_CEILING;
use abstorus::jump::{
    fox_complex, jump_locus_reconstruct, symmetry_check, verify_absolute, GroupPresentation, LaurentChainComplex,
    ReconstructOptions, Verdict,
};
use abstorus::lattice::{hnf_with_transform, snf};
use abstorus::torus::{galois_orbit, galois_witness, grid_mask_with};
use abstorus::AbsoluteSet;
use serde_json::{json, Value};

use crate::error::{exit, CliError};
use crate::io::{emit, render, unwrap_envelope, Session};
use crate::{Cli, Command, ExpDirection, GaloisMode, SetOp};

/// What a command produced: a JSON result, an optional one-line verdict for stdout, and
/// the exit code.
struct Outcome {
    result: Value,
    verdict: Option<String>,
    code: i32,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, verdict: None, code: exit::OK }
    }
}

fn strategy(cli: &Cli) -> Result<Strategy, CliError> {
    match cli.parallel {
        None => Ok(Strategy::default()),
        Some(0) => Err(CliError::Usage("--parallel needs at least one thread".into())),
        Some(1) => Ok(Strategy::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            // a pool that already exists (e.g. in tests) is fine: results do not depend on it
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Strategy::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Strategy::Sequential),
    }
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let strategy = strategy(cli)?;
    let (session, outcome) = match &cli.command {
        Command::Snf { matrix } => {
            let mut s = Session::new("snf");
            let out = cmd_snf(&mut s, matrix)?;
            (s, out)
        }
        Command::Hnf { matrix } => {
            let mut s = Session::new("hnf");
            let out = cmd_hnf(&mut s, matrix)?;
            (s, out)
        }
        Command::Set { op, files, oracle_level } => {
            let mut s = Session::new("set");
            let out = cmd_set(&mut s, *op, files, *oracle_level, strategy)?;
            (s, out)
        }
        Command::Galois { mode, set, level } => {
            let mut s = Session::new("galois");
            let out = cmd_galois(&mut s, *mode, set, *level)?;
            (s, out)
        }
        Command::Exp { direction, file, round_trip } => {
            let mut s = Session::new("exp");
            let out = cmd_exp(&mut s, *direction, file, *round_trip)?;
            (s, out)
        }
        Command::Jumploci {
            input,
            degree,
            threshold,
            level,
            verify,
            symmetry,
            galois,
            all_components,
            grid_ceiling,
        } => {
            let mut s = Session::new("jumploci");
            let args = JumpArgs {
                degree: *degree,
                threshold: *threshold,
                level: *level,
                verify: verify.as_deref(),
                symmetry: *symmetry,
                galois: *galois,
                all_components: *all_components,
                ceiling: ceiling(*grid_ceiling)?,
                strategy,
            };
            let out = cmd_jumploci(&mut s, input, &args)?;
            (s, out)
        }
        Command::Fox { presentation, all_components } => {
            let mut s = Session::new("fox");
            let out = cmd_fox(&mut s, presentation, *all_components)?;
            (s, out)
        }
    };
    if let Some(line) = &outcome.verdict {
        println!("{line}");
        if cli.output.is_some() {
            emit(cli.output.as_ref(), &render(&session.envelope(outcome.result)))?;
        }
    } else {
        emit(cli.output.as_ref(), &render(&session.envelope(outcome.result)))?;
    }
    Ok(outcome.code)
}

fn ceiling(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("ABSTORUS_GRID_CEILING") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("ABSTORUS_GRID_CEILING must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_GRID_CEILING),
    }
}

fn cmd_snf(s: &mut Session, path: &Path) -> Result<Outcome, CliError> {
    let m = int_matrix_from_json(&s.read_json(path)?, "$")?;
    let d = snf(&m);
    Ok(Outcome::ok(json!({
        "left": int_matrix_to_json(&d.left),
        "diag": int_matrix_to_json(&d.diag),
        "right": int_matrix_to_json(&d.right),
        "invariant_factors": d.invariant_factors().iter().map(int_to_json).collect::<Vec<_>>(),
        "rank": d.rank(),
    })))
}

fn cmd_hnf(s: &mut Session, path: &Path) -> Result<Outcome, CliError> {
    let m = int_matrix_from_json(&s.read_json(path)?, "$")?;
    let h = hnf_with_transform(&m);
    Ok(Outcome::ok(json!({
        "hnf": int_matrix_to_json(&h.hnf),
        "transform": int_matrix_to_json(&h.transform),
        "rank": h.rank,
        "pivots": h.pivots,
    })))
}

fn arity(op: SetOp, n: usize) -> Result<(), CliError> {
    let ok = match op {
        SetOp::Union | SetOp::Intersect => n >= 2,
        SetOp::Difference | SetOp::Equal => n == 2,
        SetOp::Complement | SetOp::Closure | SetOp::Components => n == 1,
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!("set {op:?} does not take {n} input file(s)").to_lowercase()))
    }
}

fn cmd_set(
    s: &mut Session,
    op: SetOp,
    files: &[std::path::PathBuf],
    oracle_level: Option<u64>,
    strategy: Strategy,
) -> Result<Outcome, CliError> {
    arity(op, files.len())?;
    s.flag("op", format!("{op:?}").to_lowercase());
    if let Some(m) = oracle_level {
        s.flag("oracle_level", m);
    }
    let sets: Vec<AbsoluteSet> = files
        .iter()
        .enumerate()
        .map(|(i, f)| Ok(set_from_json(&s.read_json(f)?, &format!("input {}", i + 1))?))
        .collect::<Result<_, CliError>>()?;
    let n = sets[0].ambient_rank();
    if let Some(other) = sets.iter().find(|t| t.ambient_rank() != n) {
        return Err(abstorus::TorusError::RankMismatch(n, other.ambient_rank()).into());
    }

    let mut outcome = match op {
        SetOp::Union => Outcome::ok(set_to_json(&fold(&sets, AbsoluteSet::union)?)),
        SetOp::Intersect => Outcome::ok(set_to_json(&fold(&sets, AbsoluteSet::intersect)?)),
        SetOp::Difference => Outcome::ok(set_to_json(&sets[0].difference(&sets[1])?)),
        SetOp::Complement => Outcome::ok(set_to_json(&sets[0].complement())),
        SetOp::Closure => Outcome::ok(set_to_json(&sets[0].closure())),
        SetOp::Components => {
            Outcome::ok(Value::Array(sets[0].irreducible_components(false)?.iter().map(coset_to_json).collect()))
        }
        SetOp::Equal => {
            let eq = sets[0].is_equal(&sets[1])?;
            Outcome {
                result: json!({"equal": eq}),
                verdict: Some(eq.to_string()),
                code: if eq { exit::OK } else { exit::CHECK_FAILED },
            }
        }
    };

    if let Some(level) = oracle_level {
        let masks: Vec<Vec<bool>> =
            sets.iter().map(|t| grid_mask_with(t, level, strategy)).collect::<Result<_, _>>()?;
        let size = masks[0].len();
        let pointwise = |f: &dyn Fn(usize) -> bool| (0..size).map(f).collect::<Vec<bool>>();
        let agrees = match op {
            SetOp::Union => mask_of(&outcome.result, level, strategy)? == pointwise(&|i| masks.iter().any(|m| m[i])),
            SetOp::Intersect => {
                mask_of(&outcome.result, level, strategy)? == pointwise(&|i| masks.iter().all(|m| m[i]))
            }
            SetOp::Difference => {
                mask_of(&outcome.result, level, strategy)? == pointwise(&|i| masks[0][i] && !masks[1][i])
            }
            SetOp::Complement => mask_of(&outcome.result, level, strategy)? == pointwise(&|i| !masks[0][i]),
            SetOp::Closure => {
                // the closure contains the set and is its own closure
                let m = mask_of(&outcome.result, level, strategy)?;
                (0..size).all(|i| !masks[0][i] || m[i])
            }
            SetOp::Components => {
                let comps = AbsoluteSet::from_cosets(
                    n,
                    outcome
                        .result
                        .as_array()
                        .expect("components are an array")
                        .iter()
                        .map(|c| coset_from_json(c, "$").expect("own output")),
                )?;
                grid_mask_with(&comps, level, strategy)? == grid_mask_with(&sets[0].closure(), level, strategy)?
            }
            // equal sets have equal masks; different sets may still agree on a coarse grid
            SetOp::Equal => outcome.result["equal"] != json!(true) || masks[0] == masks[1],
        };
        if let Value::Object(o) = &mut outcome.result {
            o.insert("oracle".into(), json!({"level": level, "agrees": agrees}));
        } else {
            outcome.result = json!({"components": outcome.result, "oracle": {"level": level, "agrees": agrees}});
        }
        if !agrees {
            eprintln!("abstorus: result disagrees with the grid oracle at level {level}");
            outcome.code = exit::CHECK_FAILED;
        }
    }
    Ok(outcome)
}

fn fold(
    sets: &[AbsoluteSet],
    f: fn(&AbsoluteSet, &AbsoluteSet) -> Result<AbsoluteSet, abstorus::TorusError>,
) -> Result<AbsoluteSet, CliError> {
    let mut acc = sets[0].clone();
    for t in &sets[1..] {
        acc = f(&acc, t)?;
    }
    Ok(acc)
}

fn mask_of(v: &Value, level: u64, strategy: Strategy) -> Result<Vec<bool>, CliError> {
    let s = set_from_json(v, "$")?;
    Ok(grid_mask_with(&s, level, strategy)?)
}

fn cmd_galois(s: &mut Session, mode: GaloisMode, path: &Path, level: u64) -> Result<Outcome, CliError> {
    s.flag("mode", format!("{mode:?}").to_lowercase());
    s.flag("level", level);
    let set = set_from_json(&s.read_json(path)?, "$")?;
    match mode {
        GaloisMode::Orbit => {
            let orbit = galois_orbit(&set, level)?;
            let items: Vec<Value> =
                orbit.iter().map(|(units, img)| json!({"units": units, "set": set_to_json(img)})).collect();
            Ok(Outcome::ok(json!({"level": level, "orbit": items})))
        }
        GaloisMode::Check => {
            let witness = galois_witness(&set, level)?;
            let (line, code) = match &witness {
                None => ("invariant".to_string(), exit::OK),
                Some(g) => (format!("moved by u={}", g.unit()), exit::CHECK_FAILED),
            };
            Ok(Outcome {
                result: json!({
                    "level": level,
                    "invariant": witness.is_none(),
                    "witness_unit": witness.map(|g| g.unit()),
                }),
                verdict: Some(line),
                code,
            })
        }
    }
}

fn cmd_exp(s: &mut Session, dir: ExpDirection, path: &Path, round_trip: bool) -> Result<Outcome, CliError> {
    s.flag("direction", if matches!(dir, ExpDirection::ToDr) { "to-dr" } else { "to-betti" });
    s.flag("round_trip", round_trip);
    let input = s.read_json(path)?;
    let (result, recovered) = match dir {
        ExpDirection::ToDr => {
            let c = coset_from_json(&input, "$")?;
            let v = dr_of_betti(&c);
            (subspace_to_json(&v), betti_of_dr(&v) == c)
        }
        ExpDirection::ToBetti => {
            let v = subspace_from_json(&input, "$")?;
            let c = betti_of_dr(&v);
            (coset_to_json(&c), dr_of_betti(&c) == v)
        }
    };
    if !round_trip {
        return Ok(Outcome::ok(result));
    }
    let code = if recovered { exit::OK } else { exit::CHECK_FAILED };
    if !recovered {
        eprintln!("abstorus: mapping back does not recover the input");
    }
    Ok(Outcome { result: json!({"image": result, "round_trip": recovered}), verdict: None, code })
}

struct JumpArgs<'a> {
    degree: usize,
    threshold: usize,
    level: u64,
    verify: Option<&'a Path>,
    symmetry: bool,
    galois: bool,
    all_components: bool,
    ceiling: u64,
    strategy: Strategy,
}

/// A complex from complex JSON, `fox` output, or presentation text, with a note on what
/// it models.
fn load_complex(s: &mut Session, path: &Path, all_components: bool) -> Result<(LaurentChainComplex, Value), CliError> {
    let text = s.read_text(path)?;
    if text.trim_start().starts_with('{') {
        let v = unwrap_envelope(abstorus::format::parse_json(&text)?);
        if let Some(inner) = v.get("complex") {
            let c = complex_from_json(inner, "$.complex")?;
            let note = json!({"kind": "fox", "note": "cochains of the presentation 2-complex; degrees 0 and 1 compute group cohomology"});
            return Ok((c, note));
        }
        let c = complex_from_json(&v, "$")?;
        let note = json!({"kind": "complex", "note": "supplied complex; it is not checked to arise from an algebraic variety"});
        return Ok((c, note));
    }
    let p = GroupPresentation::parse(&text)?;
    let f = fox_complex(&p)?;
    let note = json!({
        "kind": "presentation",
        "component": if all_components { "all" } else { "identity" },
        "note": "cochains of the presentation 2-complex; degrees 0 and 1 compute group cohomology",
    });
    Ok((if all_components { f.ambient } else { f.identity_component }, note))
}

fn cmd_jumploci(s: &mut Session, input: &Path, a: &JumpArgs) -> Result<Outcome, CliError> {
    s.flag("i", a.degree);
    s.flag("k", a.threshold);
    s.flag("level", a.level);
    s.flag("symmetry", a.symmetry);
    s.flag("galois", a.galois);
    s.flag("all_components", a.all_components);
    s.flag("grid_ceiling", a.ceiling);
    if a.level == 0 {
        return Err(CliError::Usage("--level must be at least 1".into()));
    }
    let (c, source) = load_complex(s, input, a.all_components)?;
    let opts = ReconstructOptions { ceiling: a.ceiling, strategy: a.strategy, domain: None };
    let report = jump_locus_reconstruct(&c, a.degree, a.threshold, a.level, &opts)?;
    let mut result = report_to_json(&report);
    result["source"] = source;
    let mut code = exit::OK;

    if let Some(claimed_path) = a.verify {
        s.flag("verify", claimed_path.display().to_string());
        let claimed = set_from_json(&s.read_json(claimed_path)?, "claimed")?;
        let verdict = verify_absolute(&c, a.degree, a.threshold, &claimed, a.level, &opts)?;
        if verdict != Verdict::Pass {
            eprintln!("abstorus: the claimed locus fails verification");
            code = exit::CHECK_FAILED;
        }
        result["verification"] = verdict_to_json(&verdict);
    }
    if a.symmetry {
        let sym = symmetry_check(&c, a.degree, a.threshold, a.level, &opts)?;
        let pass = sym.pointwise_witness.is_none() && sym.locus_inversion_stable;
        if !pass {
            code = exit::CHECK_FAILED;
        }
        result["symmetry"] = json!({
            "pass": pass,
            "pointwise_witness": sym.pointwise_witness.as_ref().map(point_to_json),
            "locus_inversion_stable": sym.locus_inversion_stable,
        });
    }
    if a.galois {
        let order = report.locus.torsion_order();
        let level = u64::try_from(&order).map_err(|_| CliError::Usage(format!("torsion order {order} too large")))?;
        let witness = galois_witness(&report.locus, level)?;
        if witness.is_some() {
            code = exit::CHECK_FAILED;
        }
        result["galois"] = json!({
            "level": level,
            "invariant": witness.is_none(),
            "witness_unit": witness.map(|g| g.unit()),
        });
    }
    Ok(Outcome { result, verdict: None, code })
}

fn cmd_fox(s: &mut Session, path: &Path, all_components: bool) -> Result<Outcome, CliError> {
    s.flag("all_components", all_components);
    let p = GroupPresentation::parse(&s.read_text(path)?)?;
    let f = fox_complex(&p)?;
    let ab = &f.abelianization;
    let complex = if all_components { &f.ambient } else { &f.identity_component };
    Ok(Outcome::ok(json!({
        "generators": p.generators(),
        "abelianization": {
            "torsion": ab.torsion.iter().map(int_to_json).collect::<Vec<_>>(),
            "free_rank": ab.free_rank,
            "free_images": ab.free_images,
            "torsion_images": ab.torsion_images.iter().map(|r| r.iter().map(int_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        },
        "components": f.components.iter().map(coset_to_json).collect::<Vec<_>>(),
        "component": if all_components { "all" } else { "identity" },
        "complex": complex_to_json(complex),
    })))
}

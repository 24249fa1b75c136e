//! Acceptance run: one PASS/FAIL line per criterion, each against a time limit.
//! Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cyclo_core::binary::BinaryContext;
use cyclo_core::bounds::{bb_bound, beiter_check, f_function, gb_bound, zhao_zhang_bound, BzdegaInput};
use cyclo_core::family::{coefficient_set_survey, compute_mpq, FamilyOptions};
use cyclo_core::kaplan::{height_of, TernaryInstance};
use cyclo_core::numtheory::primes_between;
use cyclo_core::oracle::{cyclotomic, CyclotomicOracle};
use cyclo_core::witnesses::{verify_all, LemmaId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn mpq(p: u64, q: u64) -> Result<u64, String> {
    compute_mpq(p, q, &FamilyOptions::default()).map(|f| f.m).map_err(|e| format!("M({p};{q}): {e}"))
}

fn coefficient_ground_truth() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_tcyclo");
    let run = |args: &[&str]| -> Result<String, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
        Ok(String::from_utf8_lossy(&out.stdout).trim().to_string())
    };
    let coeff = run(&["coeff", "105", "7"])?;
    ensure(coeff == "-2", || format!("coeff 105 7 printed {coeff:?}"))?;
    let height = run(&["height", "105", "--json"])?;
    let v: serde_json::Value = serde_json::from_str(&height).map_err(|e| e.to_string())?;
    ensure(v["height"] == 2, || format!("height 105 printed {height}"))?;
    Ok("a_105(7) = -2, A(105) = 2".into())
}

fn table1_heights() -> Result<String, String> {
    let rows = [(3, 5, 7, 2), (5, 7, 11, 3), (7, 17, 23, 4), (11, 19, 601, 7), (13, 73, 307, 8), (19, 53, 859, 12)];
    for (p, q, r, want) in rows {
        let h = height_of(p, q, r).map_err(|e| e.to_string())?.height;
        ensure(h == want, || format!("A({p}*{q}*{r}) = {h}, expected {want}"))?;
    }
    Ok("six heights exact".into())
}

fn three_is_constant() -> Result<String, String> {
    let qs = primes_between(5, 100);
    for &q in &qs {
        let m = mpq(3, q)?;
        ensure(m == 2, || format!("M(3;{q}) = {m}"))?;
    }
    Ok(format!("M(3;q) = 2 for {} primes q", qs.len()))
}

fn five_and_seven() -> Result<String, String> {
    for q in primes_between(7, 50) {
        let m = mpq(5, q)?;
        ensure(m == 3, || format!("M(5;{q}) = {m}"))?;
    }
    ensure(mpq(7, 11)? == 4, || "M(7;11) != 4".into())?;
    ensure(mpq(7, 13)? == 3, || "M(7;13) != 3".into())?;
    for q in primes_between(17, 60) {
        let m = mpq(7, q)?;
        ensure(m == 4, || format!("M(7;{q}) = {m}"))?;
    }
    Ok("M(5;q) = 3 for q <= 50, M(7;q) as stated for q <= 60".into())
}

fn eleven_spot_rows() -> Result<String, String> {
    let rows = [(17, 5), (23, 3), (37, 6), (43, 5), (47, 6), (13, 6), (19, 7)];
    let limit = Duration::from_secs(15 * 60);
    for (q, want) in rows {
        let t = Instant::now();
        let m = mpq(11, q)?;
        ensure(m == want, || format!("M(11;{q}) = {m}, expected {want}"))?;
        ensure(t.elapsed() <= limit, || format!("M(11;{q}) took {:?}", t.elapsed()))?;
    }
    Ok("seven values exact".into())
}

fn nineteen_twenty_three() -> Result<String, String> {
    let m = mpq(19, 23)?;
    ensure(m == 11, || format!("M(19;23) = {m}"))?;
    Ok("M(19;23) = 11".into())
}

fn witness_matrix() -> Result<String, String> {
    let m = verify_all(19);
    ensure(m.refuted() == 0 && m.errors() == 0, || {
        let bad: Vec<String> = m
            .rows
            .iter()
            .filter(|r| r.error.is_some() || r.outcome != Some(cyclo_core::witnesses::Outcome::Confirmed))
            .map(|r| format!("{} p={} q={:?}: {:?} {:?}", r.lemma, r.p, r.q, r.computed, r.error))
            .collect();
        bad.join("; ")
    })?;
    let lemmas: BTreeSet<LemmaId> = m.rows.iter().map(|r| r.lemma).collect();
    ensure(lemmas.len() == LemmaId::ALL.len(), || format!("only {} lemmas instantiated", lemmas.len()))?;
    Ok(format!("{} confirmed, 0 refuted", m.confirmed()))
}

fn oracle_equivalence() -> Result<String, String> {
    let oracle = CyclotomicOracle::default();
    let mut ternary = 0;
    for p in primes_between(3, 27) {
        for q in primes_between(p + 1, (20_000 / p).isqrt()) {
            for r in primes_between(q + 1, 20_000 / (p * q)) {
                let v = TernaryInstance::new(p, q, r).and_then(|i| i.coefficient_vector(u64::MAX)).map_err(|e| e.to_string())?;
                let phi = oracle.cyclotomic(p * q * r).map_err(|e| e.to_string())?;
                ensure((0..v.len()).all(|k| v[k] == phi.coeff(k)) && phi.coeffs().len() == v.len(), || {
                    format!("Phi_{} differs", p * q * r)
                })?;
                ternary += 1;
            }
        }
    }
    let mut binary = 0;
    for p in primes_between(3, 44) {
        for q in primes_between(p + 1, 2000 / p) {
            let c = BinaryContext::new(p, q).map_err(|e| e.to_string())?.coefficients();
            let phi = cyclotomic(p * q).map_err(|e| e.to_string())?;
            ensure((0..c.len()).all(|k| c[k] == phi.coeff(k)), || format!("Phi_{} differs", p * q))?;
            binary += 1;
        }
    }
    Ok(format!("{ternary} ternary and {binary} binary n"))
}

fn invariant_suite() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let small = primes_between(3, 97);
    let mut corpus = BTreeSet::new();
    while corpus.len() < 500 {
        let p = *small.choose(&mut rng).unwrap();
        let Some(&q) = primes_between(p + 1, (1_000_000 / p).isqrt()).choose(&mut rng) else { continue };
        let Some(&r) = primes_between(q + 1, 1_000_000 / (p * q)).choose(&mut rng) else { continue };
        corpus.insert((p, q, r));
    }
    let mut pairs = BTreeSet::new();
    for &(p, q, r) in &corpus {
        let inst = TernaryInstance::new(p, q, r).map_err(|e| e.to_string())?;
        let v = inst.coefficient_vector(u64::MAX).map_err(|e| e.to_string())?;
        let deg = v.len() - 1;
        let tag = format!("{p}*{q}*{r}");
        ensure(v.windows(2).all(|w| (w[1] - w[0]).abs() <= 1), || format!("jump property fails for {tag}"))?;
        ensure((0..=deg).all(|k| v[k] == v[deg - k]), || format!("palindromy fails for {tag}"))?;
        for _ in 0..20 {
            let k = rng.gen_range(0..inst.n());
            ensure(inst.check_gelijk(k), || format!("gelijk fails for {tag} at {k}"))?;
            let flow = inst.flow_parts(k);
            let q_parts: BTreeSet<u64> = flow.f_m.iter().map(|&(_, b)| b).collect();
            ensure(q_parts == (0..p).collect(), || format!("flow fails for {tag} at {k}"))?;
        }
        let height = v.iter().map(|c| c.unsigned_abs()).max().unwrap();
        let input = BzdegaInput::for_instance(&inst).map_err(|e| e.to_string())?;
        let (bb, gb) = (bb_bound(&input), gb_bound(&input));
        let f = f_function(p, input.j).map_err(|e| e.to_string())?;
        ensure(bb <= gb && gb <= f, || format!("BB {bb}, GB {gb}, f {f} for {tag}"))?;
        ensure(height <= bb && height <= zhao_zhang_bound(p), || format!("A({tag}) = {height} above a bound"))?;
        if p * q <= 600 {
            pairs.insert((p, q));
        }
    }
    for &(p, q) in &pairs {
        let m = mpq(p, q)?;
        ensure(m >= 2, || format!("M({p};{q}) = {m}"))?;
    }
    Ok(format!("{} instances, {} families", corpus.len(), pairs.len()))
}

fn coefficient_range() -> Result<String, String> {
    for (p, q) in [(3, 5), (5, 7)] {
        let s = coefficient_set_survey(p, q, 2, &FamilyOptions::default()).map_err(|e| e.to_string())?;
        let m = s.m as i64;
        ensure(s.observed == (-m..=m).collect(), || format!("({p}, {q}): observed {:?}", s.observed))?;
    }
    Ok("every value in [-M, M] observed".into())
}

fn beiter_discrepancy() -> Result<String, String> {
    let c = beiter_check(5, 7).map_err(|e| format!("beiter_check(5, 7) failed: {e}"))?;
    ensure(c.certificate.criterion_flat, || "criterion does not predict flat".into())?;
    ensure(c.computed_height == 2, || format!("computed height {}", c.computed_height))?;
    ensure(c.disagreement, || "disagreement not flagged".into())?;
    Ok(format!("flagged: criterion flat, {} gives A(105) = 2", c.height_source))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 11] = [
        ("coefficient ground truth", coefficient_ground_truth, Duration::from_secs(1)),
        ("known heights", table1_heights, Duration::from_secs(30)),
        ("M(3;q) constant", three_is_constant, Duration::from_secs(60)),
        ("M(5;q) and M(7;q)", five_and_seven, Duration::from_secs(600)),
        ("M(11;q) spot rows", eleven_spot_rows, Duration::from_secs(7 * 15 * 60)),
        ("M(19;23)", nineteen_twenty_three, Duration::from_secs(3600)),
        ("witness matrix", witness_matrix, Duration::from_secs(600)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(300)),
        ("invariant suite", invariant_suite, Duration::from_secs(1800)),
        ("coefficient range", coefficient_range, Duration::from_secs(300)),
        ("flatness criterion discrepancy", beiter_discrepancy, Duration::from_secs(60)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = t.elapsed();
        let result = result.and_then(|d| if elapsed <= limit { Ok(d) } else { Err(format!("over the {limit:?} limit")) });
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

//! Acceptance gate: ten criteria, one pass/fail line each. The process
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use qlrc::codes::{column_dependency_distance, distance_exceeds, DistanceMethod, DistanceProvenance, LinearCode};
use qlrc::cosets::{
    a_set, all_cosets, coset_representatives, delta_range, dual_exponents, is_complete, minkowski_sum,
    negate_mod, negate_q_mod, reduce_mod, ExponentSet,
};
use qlrc::evaluation::{build_domain, evaluation_code};
use qlrc::families::{build_family_instance, cartesian_extend, construct_codes, Family, FamilySpec};
use qlrc::galois::{build_tower, Duality, GaloisTower, Gf};
use qlrc::locality::{certify_locality, LocalityMethod};
use qlrc::matrix::GfMatrix;
use qlrc::quantum::{is_dual_containing, quantum_singleton_defect, stabilizer_from_dual_containing};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn tower(p: u32, e: u32, s: u32, mode: Duality) -> Arc<GaloisTower> {
    Arc::new(build_tower(p, e, s, mode).expect("tower"))
}

fn within(limit_secs: u64, start: Instant) -> std::result::Result<Duration, String> {
    let took = start.elapsed();
    if took > Duration::from_secs(limit_secs) {
        return Err(format!("took {took:.2?}, limit {limit_secs} s"));
    }
    Ok(took)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    pool.install(|| {
        let inst = build_family_instance(&FamilySpec::new(Family::A, 2, 4, 3, 1, vec![])).map_err(err)?;
        let outer = &inst.outer;
        ensure!(
            (outer.len(), outer.dimension(), outer.field_order()) == (15, 9, 4),
            "classical code is {outer:?}"
        );
        let full = outer.min_distance(DistanceMethod::FullEnum).map_err(err)?;
        let cols = outer.min_distance(DistanceMethod::ColumnDependency).map_err(err)?;
        ensure!(full == 3 && cols == 3, "distance {full} (enumeration) / {cols} (columns)");
        let cert = &inst.certificate;
        ensure!((cert.r, cert.delta) == (3, 3), "locality ({}, {})", cert.r, cert.delta);
        ensure!(cert.method == LocalityMethod::StructuredBlocks, "locality not from blocks");
        let blocks: Vec<Vec<usize>> = (0..3).map(|b| (5 * b..5 * b + 5).collect()).collect();
        ensure!(cert.sets == blocks, "recovery sets {:?}", cert.sets);
        ensure!(cert.recheck(outer).map_err(err)?, "recovery sets fail the recheck");
        ensure!(is_dual_containing(outer, Duality::Hermitian).map_err(err)?, "not Hermitian dual-containing");
        ensure!(outer.hermitian_dual().map_err(err)? == inst.inner, "dual of the outer code is not the inner code");
        ensure!(outer.contains_code(&inst.inner).map_err(err)?, "inner code not inside outer code");
        let rec = &inst.record;
        ensure!(rec.label() == "[[15, 3, 3]]_2", "record {}", rec.label());
        ensure!(rec.d_method == DistanceProvenance::Verified, "distance not verified");
        ensure!(cert.classical_defect == Some(0), "classical defect {:?}", cert.classical_defect);
        ensure!(rec.quantum_defect == Some(0), "quantum defect {:?}", rec.quantum_defect);
        ensure!(distance_exceeds(&inst.inner, 3).map_err(err)?, "dis(inner) <= 3");
        ensure!(rec.pure && rec.optimal, "pure {} optimal {}", rec.pure, rec.optimal);
        let took = within(60, start)?;
        Ok(format!("[15,9,3]_4, (3,3) blocks, [[15,3,3]]_2 pure, defects 0 ({took:.2?}, 1 thread)"))
    })
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let inst = build_family_instance(&FamilySpec::new(Family::B, 5, 2, 6, 1, vec![])).map_err(err)?;
    let outer = &inst.outer;
    ensure!((outer.len(), outer.dimension(), outer.field_order()) == (24, 18, 5), "classical code {outer:?}");
    let d = outer.min_distance(DistanceMethod::Auto).map_err(err)?;
    ensure!(d == 2, "distance {d}");
    ensure!(is_dual_containing(outer, Duality::Euclidean).map_err(err)?, "not Euclidean dual-containing");
    ensure!(inst.record.label() == "[[24, 12, 2]]_5", "record {}", inst.record.label());
    ensure!((inst.certificate.r, inst.certificate.delta) == (3, 2), "locality");
    ensure!(inst.certificate.classical_defect == Some(0), "classical defect");
    ensure!(inst.record.quantum_defect == Some(0), "quantum defect");
    let took = within(60, start)?;
    Ok(format!("[24,18,2]_5, [[24,12,2]]_5, (3,2), defects 0 ({took:.2?})"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for v in 1..=3usize {
        let spec = FamilySpec::new(Family::C2, 3, 4, 2, v, vec![]);
        let c = construct_codes(&spec, None).map_err(err)?;
        let outer = &c.outer;
        if (outer.len(), outer.dimension(), outer.field_order()) != (16, 16 - 2 * v, 9) {
            failures.push(format!("v={v}: classical code {outer:?}"));
            continue;
        }
        let d = column_dependency_distance(outer, 4).map_err(err)?;
        if d != Some(v + 1) {
            failures.push(format!("v={v}: column-dependency distance {d:?}"));
            continue;
        }
        let outer = outer.clone().with_distance(v + 1, DistanceProvenance::Verified);
        let cert = match certify_locality(&outer, 8 - v, v + 1, Some(c.blocks)) {
            Ok(cert) => cert.with_defect(16, 16 - 2 * v, v + 1),
            Err(e) => {
                failures.push(format!("v={v}: locality ({}, {}) {e}", 8 - v, v + 1));
                continue;
            }
        };
        if !is_dual_containing(&outer, Duality::Hermitian).map_err(err)? {
            let k = 16 - 4 * v;
            failures.push(format!(
                "v={v}: [16,{},{}]_9 with ({},{})-locality holds but the code is not Hermitian \
                 dual-containing, so [[16,{k},{}]]_3 (defect {}) is not realised",
                16 - 2 * v,
                v + 1,
                8 - v,
                v + 1,
                v + 1,
                quantum_singleton_defect(16, k, v + 1, 8 - v, v + 1)
            ));
            continue;
        }
        let rec = stabilizer_from_dual_containing(&outer, Duality::Hermitian).map_err(err)?.with_certificate(&cert);
        let want = format!("[[16, {}, {}]]_3", 16 - 4 * v, v + 1);
        if rec.label() != want || rec.quantum_defect != Some(0) {
            failures.push(format!("v={v}: record {} defect {:?}, want {want} defect 0", rec.label(), rec.quantum_defect));
        }
    }
    let took = within(120, start)?;
    if failures.is_empty() {
        Ok(format!("v=1,2,3: [16,16-2v,v+1]_9, [[16,16-4v,v+1]]_3, defect 0 ({took:.2?})"))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let base = build_family_instance(&FamilySpec::new(Family::A, 2, 4, 3, 1, vec![])).map_err(err)?;
    let ext = cartesian_extend(&base, &[2], None).map_err(err)?;
    ensure!(ext.record.label() == "[[30, 6, 3]]_2", "record {}", ext.record.label());
    ensure!((ext.certificate.r, ext.certificate.delta) == (3, 3), "locality");
    ensure!(ext.record.quantum_defect == Some(0), "quantum defect {:?}", ext.record.quantum_defect);
    let outer = &ext.outer;
    ensure!((outer.len(), outer.dimension()) == (30, 18), "classical code {outer:?}");
    let d = column_dependency_distance(outer, 6).map_err(err)?;
    ensure!(d == Some(3), "column-dependency distance {d:?}");
    let took = within(120, start)?;
    Ok(format!("[[30,6,3]]_2, (3,3), defect 0, d=3 by column dependency on [30,18]_4 ({took:.2?})"))
}

fn random_code(rng: &mut StdRng, t: &Arc<GaloisTower>, order: u32, elems: &[Gf]) -> (LinearCode, Vec<usize>) {
    let n = rng.gen_range(1..=20usize);
    let k = rng.gen_range(0..=n);
    let data: Vec<Gf> = (0..k * n).map(|_| elems[rng.gen_range(0..elems.len())]).collect();
    let g = GfMatrix::new(t.clone(), order, k, n, data).expect("matrix");
    let mut set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if set.is_empty() {
        set.push(rng.gen_range(0..n));
    }
    (LinearCode::from_generator(&g), set)
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for (p, order) in [(2u32, 4u32), (3, 9)] {
        let t = tower(p, 1, 2, Duality::Hermitian);
        let elems = t.subfield_elements(order).map_err(err)?;
        for trial in 0..500 {
            let (c, set) = random_code(&mut rng, &t, order, &elems);
            for mode in [Duality::Euclidean, Duality::Hermitian] {
                let left = c.dual(mode).map_err(err)?.puncture(&set).map_err(err)?;
                let right = c.shorten(&set).map_err(err)?.dual(mode).map_err(err)?;
                ensure!(left == right, "F_{order} trial {trial} {mode}: puncture(dual) != dual(shorten)");
                let left = c.dual(mode).map_err(err)?.shorten(&set).map_err(err)?;
                let right = c.puncture(&set).map_err(err)?.dual(mode).map_err(err)?;
                ensure!(left == right, "F_{order} trial {trial} {mode}: shorten(dual) != dual(puncture)");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (code, set, mode) cases over F_4 and F_9, zero failures"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for (p, e, big_n, frak) in [(2u32, 2u32, 15usize, 4usize), (5, 1, 24, 5)] {
        let t = tower(p, e, 2, Duality::Euclidean);
        let dom = build_domain(t.clone(), big_n, big_n, 1).map_err(err)?;
        let cosets = all_cosets(big_n, frak).map_err(err)?;
        let c = cosets.len();
        for mask in 0u64..1 << c {
            let size: usize = (0..c).filter(|i| mask >> i & 1 == 1).map(|i| cosets[i].len()).sum();
            if size > 12 {
                continue;
            }
            let delta = ExponentSet::new(
                big_n,
                (0..c).filter(|i| mask >> i & 1 == 1).flat_map(|i| cosets[i].elements().to_vec()),
            );
            ensure!(is_complete(&delta, frak).map_err(err)?, "{delta:?} not complete");
            let perp = dual_exponents(&delta, Duality::Euclidean, frak).map_err(err)?;
            let h = LinearCode::from_generator(&evaluation_code(&delta, &dom).map_err(err)?);
            let h_perp = LinearCode::from_generator(&evaluation_code(&perp, &dom).map_err(err)?);
            let left = h_perp.trace_code(frak as u32).map_err(err)?;
            let right = h.subfield_subcode(frak as u32).map_err(err)?.euclidean_dual();
            ensure!(left == right, "N={big_n} q={frak} Δ={:?}: trace chain fails", delta.elements());
            checked += 1;
        }
    }
    Ok(format!("{checked} complete exponent sets, zero failures"))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (p, s, n, big_n) in [(2u32, 4u32, 5usize, 15usize), (5, 2, 4, 24), (3, 4, 8, 16)] {
        let t = tower(p, 1, s, Duality::Euclidean);
        let dom = build_domain(t.clone(), big_n, n, big_n / n).map_err(err)?;
        let code = LinearCode::from_generator(&evaluation_code(&a_set(n, big_n).map_err(err)?, &dom).map_err(err)?);
        // ev((X^N - 1)/(X^n - 1)) = ev(Σ_i X^{in})
        let witness: Vec<Gf> = dom
            .points()
            .iter()
            .map(|&x| (0..big_n / n).fold(Gf::ZERO, |acc, i| t.add(acc, t.pow(x, (i * n) as u64))))
            .collect();
        let weight = witness.iter().filter(|x| !x.is_zero()).count();
        ensure!(weight == n, "N={big_n} n={n}: witness weight {weight}");
        ensure!(code.contains_word(&witness).map_err(err)?, "N={big_n} n={n}: witness outside code");
        let d = code.min_distance(DistanceMethod::Auto).map_err(err)?;
        ensure!(d == n, "N={big_n} n={n}: oracle distance {d}");
        ensure!(distance_exceeds(&code, n - 1).map_err(err)?, "N={big_n} n={n}: lower bound fails");
        parts.push(format!("(n={n}, N={big_n}, F_{}) d={d}", t.order()));
    }
    Ok(parts.join(", "))
}

fn criterion_8() -> Outcome {
    let mut dims = 0;
    let mut bounds = 0;
    for big_n in [15usize, 24, 63] {
        for base in [2u32, 4, 3, 9] {
            if gcd(base as usize, big_n) != 1 {
                continue;
            }
            let (p, e) = if base == 4 { (2, 2) } else if base == 9 { (3, 2) } else { (base, 1) };
            let s = (1..=20u32).find(|&s| (base as u64).pow(s) % big_n as u64 == 1).expect("order");
            let t = tower(p, e, s, Duality::Euclidean);
            let dom = build_domain(t.clone(), big_n, big_n, 1).map_err(err)?;
            let reps = coset_representatives(big_n, base as usize).map_err(err)?;
            let cosets = all_cosets(big_n, base as usize).map_err(err)?;
            let nu = reps.len() - 1;
            for lo in 0..nu {
                for hi in lo..nu {
                    let delta = delta_range(lo, hi, big_n, base as usize).map_err(err)?;
                    let h = LinearCode::from_generator(&evaluation_code(&delta, &dom).map_err(err)?);
                    let bch = h.subfield_subcode(base).map_err(err)?;
                    let expected: usize = cosets[lo..=hi].iter().map(ExponentSet::len).sum();
                    ensure!(
                        bch.dimension() == expected,
                        "N={big_n} base {base} ({lo},{hi}): dim {} != {expected}",
                        bch.dimension()
                    );
                    dims += 1;
                    if lo <= 1 {
                        let bound = reps[hi + 1] + usize::from(lo == 0);
                        let dual = bch.euclidean_dual();
                        let feasible = (base as f64).powi(dual.dimension() as i32) <= 1e8;
                        if feasible && dual.dimension() > 0 {
                            ensure!(
                                distance_exceeds(&dual, bound - 1).map_err(err)?,
                                "N={big_n} base {base} ({lo},{hi}): dual distance below {bound}"
                            );
                            bounds += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{dims} dimension identities, {bounds} dual-distance bounds (coprime (N, base) pairs)"))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Unions of at most three of `cosets`.
fn small_unions(cosets: &[ExponentSet], modulus: usize) -> Vec<ExponentSet> {
    let c = cosets.len();
    let mut out = Vec::new();
    for i in 0..c {
        out.push(cosets[i].clone());
        for j in i + 1..c {
            out.push(cosets[i].union(&cosets[j]).unwrap());
            for k in j + 1..c {
                out.push(ExponentSet::new(
                    modulus,
                    [&cosets[i], &cosets[j], &cosets[k]].iter().flat_map(|s| s.elements().to_vec()),
                ));
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    use rayon::prelude::*;
    let bases = [2usize, 3, 4, 5, 7, 8, 9];
    let counts: Vec<std::result::Result<(usize, usize, usize), String>> = (1..=120usize)
        .into_par_iter()
        .map(|big_n| {
            let (mut jap, mut era1, mut era2) = (0, 0, 0);
            for n in (1..=big_n).filter(|n| big_n % n == 0) {
                let a = a_set(n, big_n).map_err(err)?;
                for &z in bases.iter().filter(|&&z| gcd(z, big_n) == 1) {
                    ensure!(is_complete(&a, z).map_err(err)?, "A not {z}-complete for n={n} N={big_n}");
                    for b in small_unions(&all_cosets(n, z).map_err(err)?, n) {
                        let sum = minkowski_sum(&a, &b.lift(big_n).map_err(err)?).map_err(err)?;
                        ensure!(is_complete(&sum, z).map_err(err)?, "A+B not {z}-complete: n={n} N={big_n} B={:?}", b.elements());
                        jap += 1;
                    }
                    for b in small_unions(&all_cosets(big_n, z).map_err(err)?, big_n) {
                        let bn = reduce_mod(&b, n).map_err(err)?;
                        let sum = minkowski_sum(&a, &b).map_err(err)?;
                        if bn.intersection(&negate_mod(&bn, n).map_err(err)?).map_err(err)?.is_empty() {
                            let clash = sum.intersection(&negate_mod(&sum, big_n).map_err(err)?).map_err(err)?;
                            ensure!(clash.is_empty(), "euclidean: n={n} N={big_n} z={z} B={:?}", b.elements());
                            era1 += 1;
                        }
                    }
                    let z2 = z * z;
                    for b in small_unions(&all_cosets(big_n, z2).map_err(err)?, big_n) {
                        let bn = reduce_mod(&b, n).map_err(err)?;
                        if bn.intersection(&negate_q_mod(&bn, n, z).map_err(err)?).map_err(err)?.is_empty() {
                            let sum = minkowski_sum(&a, &b).map_err(err)?;
                            let clash = sum.intersection(&negate_q_mod(&sum, big_n, z).map_err(err)?).map_err(err)?;
                            ensure!(clash.is_empty(), "hermitian: n={n} N={big_n} q={z} B={:?}", b.elements());
                            era2 += 1;
                        }
                    }
                }
            }
            Ok((jap, era1, era2))
        })
        .collect();
    let (mut jap, mut era1, mut era2) = (0, 0, 0);
    for c in counts {
        let (a, b, c) = c?;
        jap += a;
        era1 += b;
        era2 += c;
    }
    Ok(format!(
        "{jap} completeness cases, {era1} euclidean and {era2} hermitian disjointness cases, zero failures"
    ))
}

fn has_record(row: &Value, label: (u64, u64, u64, u64)) -> bool {
    row["instances"].as_array().is_some_and(|list| {
        list.iter().any(|r| {
            (r["n"].as_u64(), r["k"].as_u64(), r["d"].as_u64(), r["q"].as_u64())
                == (Some(label.0), Some(label.1), Some(label.2), Some(label.3))
        })
    })
}

fn criterion_10() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_qlrc"))
        .args(["table", "--max-length", "64"])
        .output()
        .map_err(err)?;
    let rows: Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let rows = rows.as_array().ok_or("table output is not a list")?;
    ensure!(rows.len() == 8, "{} rows", rows.len());
    let mut problems = Vec::new();
    let row = |family: &str, delta_prefix: &str| {
        rows.iter().find(|r| r["family"] == family && r["delta"].as_str().is_some_and(|d| d.ends_with(delta_prefix)))
    };
    let expected: [(&str, &str, (u64, u64, u64, u64)); 6] = [
        ("A", "q+1", (15, 3, 3, 2)),
        ("B", "(q+1)/2", (24, 12, 2, 5)),
        ("C2", "2q-2", (16, 12, 2, 3)),
        ("C2", "2q-2", (16, 8, 3, 3)),
        ("C2", "2q-2", (16, 4, 4, 3)),
        ("cartA", "q+1", (30, 6, 3, 2)),
    ];
    for (family, delta, label) in expected {
        match row(family, delta) {
            Some(r) if has_record(r, label) => {}
            _ => problems.push(format!("row {family} lacks [[{}, {}, {}]]_{}", label.0, label.1, label.2, label.3)),
        }
    }
    let mismatches: usize = rows.iter().map(|r| r["mismatches"].as_array().map_or(0, Vec::len)).sum();
    if mismatches > 0 {
        let first: Vec<String> = rows
            .iter()
            .flat_map(|r| r["mismatches"].as_array().cloned().unwrap_or_default())
            .take(3)
            .map(|m| format!("{} q={} v/u={}: {}", m["spec"]["family"], m["spec"]["q"], m["spec"]["u_or_v"], m["message"]))
            .collect();
        problems.push(format!("{mismatches} stated instances fail verification (e.g. {})", first.join("; ")));
    }
    ensure!(out.status.code() == Some(if mismatches > 0 { 1 } else { 0 }), "exit status {:?}", out.status.code());
    if problems.is_empty() {
        let instances: usize = rows.iter().map(|r| r["instances"].as_array().map_or(0, Vec::len)).sum();
        Ok(format!("8 rows, {instances} verified instances, no mismatches"))
    } else {
        Err(problems.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("family A flagship", criterion_1),
        ("family B q=5", criterion_2),
        ("lambda=2 family q=3, v=1..3", criterion_3),
        ("Cartesian extension n2=2", criterion_4),
        ("puncture/shorten duality", criterion_5),
        ("trace/subfield duality chain", criterion_6),
        ("A-code distance", criterion_7),
        ("BCH dimensions and bounds", criterion_8),
        ("completeness and disjointness", criterion_9),
        ("parameter table", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

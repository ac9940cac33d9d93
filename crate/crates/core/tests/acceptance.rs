//! Acceptance criteria. Every comparison is exact (tolerance: none).
//! Prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gvlab::cdbasis::{
    cd_decompose, fibonacci_count, g_order_zero, lambda_sum, word_flag, words, CdVector, FlagBasis,
    Word, WordSet,
};
use gvlab::corpus::{
    build_corpus, build_entry, canonical_form, distance_count, enumerate_01, exceptional,
    find_by_distance_count, sample_01, CorpusEntry, DistanceCount, EntrySource, VertexMask,
};
use gvlab::exactnum::{int, Rat};
use gvlab::hull::{affine_dim, facet_enum, shapes, Polytope};
use gvlab::lattice::{FaceLattice, FormalFlagSum};
use gvlab::search::{
    classify, d5, effective_sets, extremal_subsets, g_vector, is_upper_triangular,
    render_inequality, Classification,
};
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cd(d: usize, pairs: &[(&str, i64)]) -> CdVector {
    let ws = words(d);
    let mut coeffs = vec![int(0); ws.len()];
    for (w, c) in pairs {
        let w: Word = w.parse().unwrap();
        coeffs[ws.iter().position(|x| *x == w).unwrap()] = int(*c);
    }
    CdVector::new(d, coeffs).unwrap()
}

fn set(words: &[&str]) -> WordSet {
    WordSet::from_words(5, words).unwrap()
}

fn lattice(p: &Polytope) -> FaceLattice {
    FaceLattice::from_incidence(&facet_enum(p).unwrap(), p.ambient_dim()).unwrap()
}

fn criterion_1() -> Outcome {
    let expected = cd(
        5,
        &[
            ("CCCCC", 1),
            ("CCCD", 8),
            ("CCDC", 56),
            ("CDCC", -66),
            ("CDD", 20),
            ("DCCC", 20),
            ("DCD", 0),
            ("DDC", -5),
        ],
    );
    let missing = [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 1, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 0, 1, 1, 0],
        [1, 1, 0, 0, 1],
        [1, 1, 0, 1, 0],
    ];
    let vertices: Vec<Vec<i64>> = (0..32u32)
        .map(|v| (0..5).map(|j| (v >> j & 1) as i64).collect::<Vec<_>>())
        .filter(|p| !missing.iter().any(|m| m.iter().zip(p).all(|(a, b)| *a as i64 == *b)))
        .collect();
    ensure(vertices.len() == 24, || format!("{} vertices", vertices.len()))?;
    let p = Polytope::from_i64(&vertices).unwrap();
    let primal_flag = lattice(&p).flag_vector();
    let primal = cd_decompose(&primal_flag).map_err(|e| e.to_string())?;
    let polar_flag = lattice(&p).dual().flag_vector();
    let polar = cd_decompose(&polar_flag).map_err(|e| e.to_string())?;
    let hits = [&primal, &polar].iter().filter(|v| ***v == expected).count();
    ensure(hits == 1, || format!("{hits} of primal {primal} / polar {polar} match"))?;
    let hit = if primal == expected { &primal } else { &polar };
    let sum = lambda_sum(hit, &set(&["CDCC", "CCDC", "CCCD"]));
    ensure(sum == int(-2), || format!("lambda sum {sum}"))?;
    let g = g_vector(hit, &d5::components()).values();
    let want: Vec<Rat> = [1, 18, 15, 18, 64, 8, 20, 0].into_iter().map(int).collect();
    ensure(g == want, || format!("g = {g:?}"))?;
    let which = if primal == expected { "primal" } else { "polar" };
    Ok(format!("{which} matches; lambda_{{CDCC,CCDC,CCCD}} = -2; g = (1,18,15,18,64,8,20,0)"))
}

fn criterion_2() -> Outcome {
    let want = [1, 1, 2, 3, 5, 8, 13];
    let mut ranks = Vec::new();
    for (d, &w) in want.iter().enumerate() {
        let b = FlagBasis::new(d).map_err(|e| e.to_string())?;
        ensure(b.rank() == w && fibonacci_count(d) == w, || format!("d={d}: rank {}", b.rank()))?;
        ranks.push(b.rank());
    }
    let mut n = 0;
    let mut masks = enumerate_01(4).unwrap();
    masks.extend(sample_01(5, 200, 1).unwrap());
    for e in build_corpus(&masks).map_err(|e| e.to_string())? {
        let b = FlagBasis::shared(e.dim).unwrap();
        let coeffs = e.cd.coeffs().to_vec();
        let counts: Vec<Rat> = e.flag.counts().iter().map(|&c| int(c as i64)).collect();
        ensure(b.matrix().mul_vec(&coeffs) == counts, || format!("{}: residual", e.source))?;
        n += 1;
    }
    Ok(format!("ranks {ranks:?}; {n} corpus flag vectors with zero residual"))
}

fn flag(l: &FaceLattice) -> FormalFlagSum {
    FormalFlagSum::from(&l.flag_vector())
}

fn criterion_3() -> Outcome {
    let mut xs: Vec<(String, FaceLattice)> = Vec::new();
    for d in 1..=4 {
        xs.push((format!("simplex {d}"), lattice(&shapes::simplex(d))));
        xs.push((format!("cube {d}"), lattice(&shapes::cube(d))));
        xs.push((format!("cross {d}"), lattice(&shapes::cross_polytope(d))));
    }
    for d in 1..=3 {
        for m in enumerate_01(d).unwrap() {
            xs.push((m.to_string(), lattice(&m.to_polytope())));
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    while xs.len() < 70 {
        let d = rng.gen_range(2..=3);
        let mask = rng.gen_range(1..1u64 << (1 << d));
        let m = VertexMask::new(d, mask).unwrap();
        if affine_dim(&m.to_polytope()) == d {
            xs.push((format!("random {m}"), lattice(&m.to_polytope())));
        }
    }
    let triangle = lattice(&shapes::simplex(2));
    for (name, x) in &xs {
        let ic = flag(&x.pyramid().prism());
        let cc = flag(&x.pyramid().pyramid());
        let ii = flag(&x.prism().prism());
        let tx = flag(&x.product(&triangle));
        ensure(ic.clone() - cc.clone() == ii - tx, || format!("{name}: IC - CC != I^2 - triangle"))?;
        let di = flag(&x.prism().pyramid().prism()) - flag(&x.prism().pyramid().pyramid());
        let id = flag(&x.pyramid().prism().prism()) - flag(&x.pyramid().pyramid().prism());
        ensure(di == id, || format!("{name}: DI != ID"))?;
    }
    Ok(format!("{} polytopes", xs.len()))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for d in 0..=6 {
        for (i, w) in words(d).iter().enumerate() {
            let v = FlagBasis::shared(d)
                .unwrap()
                .decompose_formal(&word_flag(w))
                .map_err(|e| e.to_string())?;
            let unit = v.coeffs().iter().enumerate().all(|(j, c)| *c == int((i == j) as i64));
            ensure(unit, || format!("{w}: {v}"))?;
            for (k, g) in g_order_zero(&v).iter().enumerate() {
                ensure(*g == int((w.deg_d() == k) as i64), || format!("{w}: g_{k} = {g}"))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} words, d = 0..6"))
}

/// Separate path: looks each word of `s` up by name in every entry.
fn brute_force(d: usize, entries: &[CorpusEntry]) -> Vec<u64> {
    let ws = words(d);
    (0..1u64 << ws.len())
        .filter(|bits| {
            entries.iter().all(|e| {
                let total: Rat = ws
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| bits >> k & 1 == 1)
                    .map(|(_, w)| e.cd.get(w).unwrap().clone())
                    .sum();
                total >= int(0)
            })
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let polygons: Vec<CorpusEntry> = (3..=14)
        .map(|m| {
            let f = lattice(&shapes::polygon(m)).flag_vector();
            let v = cd_decompose(&f).unwrap();
            assert_eq!(v.coeffs(), [int(1), int(m as i64 - 3)]);
            CorpusEntry {
                source: EntrySource::Mask(VertexMask::full_cube(2)),
                dim: 2,
                flag: f,
                cd: v,
            }
        })
        .collect();
    let ext = extremal_subsets(&effective_sets(&polygons).unwrap());
    let want = vec![
        WordSet::from_words(2, &["CC"]).unwrap(),
        WordSet::from_words(2, &["D"]).unwrap(),
    ];
    ensure(ext == want, || format!("polygon extremals {ext:?}"))?;
    let mut detail = vec!["d=2 {CC},{D}".to_string()];
    for (d, classes) in [(3, 12), (4, 347)] {
        let masks = enumerate_01(d).unwrap();
        ensure(masks.len() == classes, || format!("d={d}: {} classes", masks.len()))?;
        let entries = build_corpus(&masks).map_err(|e| e.to_string())?;
        let fam = effective_sets(&entries).unwrap();
        let engine: Vec<u64> = fam.members.iter().map(|s| s.bits()).collect();
        ensure(engine == brute_force(d, &entries), || format!("d={d}: E(P) differs"))?;
        let ext = extremal_subsets(&fam);
        for i in 0..=d / 2 {
            let s = WordSet::order_zero(d, i);
            ensure(fam.contains(&s) && ext.contains(&s), || format!("d={d}: {s}"))?;
        }
        detail.push(format!("d={d}: {classes} classes, |E| = {}", engine.len()));
    }
    Ok(detail.join("; "))
}

fn criterion_6() -> Outcome {
    let masks = sample_01(5, 10_000, 7).map_err(|e| e.to_string())?;
    ensure(masks.len() == 10_000, || format!("{} classes", masks.len()))?;
    let mut entries = build_corpus(&masks).map_err(|e| e.to_string())?;
    let (p, q) = build_entry(exceptional::polytope_mask()).unwrap();
    entries.push(p);
    entries.push(q);
    let fam = effective_sets(&entries).unwrap();
    let comps: Vec<WordSet> = [
        &["CCCCC"][..],
        &["DCCC", "CDCC", "CCDC", "CCCD"],
        &["DDC", "DCD", "CDD"],
        &["CDCC", "CCDC", "CCCD", "CDD"],
        &["CCDC", "CCCD", "DCD"],
        &["CCCD"],
        &["CDD"],
        &["DCD"],
    ]
    .iter()
    .map(|w| set(w))
    .collect();
    let residuals = [
        ("g_122 <= g_221 + g_2111", &["DDC", "DCD", "DCCC", "CDCC", "CCDC", "CCCD"][..]),
        ("g_122 <= g_221 + g_1211", &["DDC", "DCD", "CDD", "CDCC", "CCDC", "CCCD"]),
        ("g_212 <= g_221 + g_1112", &["DDC", "CDD", "CCCD"]),
        ("g_212 <= g_221 + g_1121", &["DDC", "DCD", "CDD", "CCDC", "CCCD"]),
        ("g_212 <= g_221 + g_2111", &["DDC", "CDD", "DCCC", "CDCC", "CCDC", "CCCD"]),
    ];
    for s in comps.iter().chain(residuals.iter().map(|(_, w)| set(w)).collect::<Vec<_>>().iter()) {
        ensure(fam.contains(s), || format!("{s} not effective"))?;
    }
    let bad = set(&["CDCC", "CCDC", "CCCD"]);
    let x = fam.exclusion(&bad).ok_or_else(|| format!("{bad} effective"))?;
    let witness = &entries[x.witness];
    let same_class =
        canonical_form(witness.source.mask()) == canonical_form(exceptional::polytope_mask());
    ensure(same_class, || format!("witness {}", witness.source))?;
    ensure(x.value == int(-2), || format!("witness value {}", x.value))?;
    ensure(is_upper_triangular(&comps), || "not upper-triangular".into())?;
    for (text, w) in residuals {
        let got = render_inequality(&set(w), &comps).map_err(|e| e.to_string())?;
        let norm = |s: &str| s.split_whitespace().collect::<String>();
        ensure(norm(&got) == norm(text), || format!("rendered {got:?}, expected {text:?}"))?;
        ensure(classify(&set(w)) == Classification::Residual, || format!("{text}: class"))?;
    }
    Ok(format!(
        "{} entries ({} distinct CD), |E| = {}; 13 sets effective; {bad} excluded by {} with -2; 5 inequalities verbatim",
        entries.len(),
        fam.distinct_vectors,
        fam.members.len(),
        witness.source
    ))
}

fn criterion_7() -> Outcome {
    let v: Vec<usize> = [
        [0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 1, 1, 1],
        [1, 0, 1, 0, 1],
        [1, 0, 1, 1, 0],
        [1, 1, 0, 0, 1],
        [1, 1, 0, 1, 0],
    ]
    .iter()
    .map(|p| p.iter().enumerate().map(|(j, &b)| (b as usize) << j).sum())
    .collect();
    let mask = VertexMask::new(5, v.iter().map(|&u| 1u64 << u).sum()).unwrap();
    let want = DistanceCount(vec![1, 0, 2, 4, 1, 0]);
    for &u in &v {
        let hist: Vec<u32> = (0..=5)
            .map(|k| v.iter().filter(|&&w| (u ^ w).count_ones() == k).count() as u32)
            .collect();
        ensure(hist == want.0, || format!("vertex {u}: {hist:?}"))?;
        ensure(distance_count(u, mask) == want, || format!("vertex {u}: library disagrees"))?;
    }
    let found = find_by_distance_count(5, 8, &want);
    ensure(found == vec![canonical_form(mask)], || format!("found {found:?}"))?;
    ensure(mask == exceptional::missing_mask(), || "bundled set differs".into())?;
    Ok(format!("8 vertices with (1,0,2,4,1,0); one class {}", found[0]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("exceptional 5-polytope", criterion_1, Duration::from_secs(10)),
        ("Fibonacci rank and span", criterion_2, Duration::from_secs(60)),
        ("IC equation", criterion_3, Duration::from_secs(120)),
        ("unit CD vectors of basis words", criterion_4, Duration::from_secs(60)),
        ("small-dimension search vs brute force", criterion_5, Duration::from_secs(1800)),
        ("sampled d=5 search", criterion_6, Duration::from_secs(6 * 3600)),
        ("distance counts", criterion_7, Duration::from_secs(1800)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let mut result = run();
        let elapsed = t.elapsed();
        if result.is_ok() && elapsed > budget {
            result = Err(format!("took {elapsed:.1?}, budget {budget:?}"));
        }
        match result {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "criterion 8 SKIP full d=5 reproduction: stretch goal, reported only; needs an external list of all 1,226,525 classes"
    );
    if failed == 0 {
        println!("acceptance: all gated criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}

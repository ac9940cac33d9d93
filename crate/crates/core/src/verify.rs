//! Self-contained numeric checks with one pass/fail line each.

use std::fmt;
use std::time::Instant;

use crate::cdbasis::{
    cd_decompose, fibonacci_count, lambda_sum, words, CdVector, FlagBasis, WordSet,
};
use crate::corpus::{
    build_corpus, build_entry, distance_count, enumerate_01, exceptional, find_by_distance_count,
    sample_01, CorpusEntry, DistanceCount, EntrySource, VertexMask,
};
use crate::exactnum::{int, Rat};
use crate::hull::{facet_enum, shapes, Polytope};
use crate::lattice::{FaceLattice, FormalLattice};
use crate::search::{
    classify, d5, effective_sets, extremal_subsets, g_vector, is_upper_triangular,
    render_inequality, Classification, EffectiveFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "[{tag}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Number of random 5-dimensional classes for the sampled check.
    pub samples: usize,
    pub seed: u64,
    /// Replaces the d=3 basis with a rank-deficient matrix before checking.
    pub tamper_basis: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 10_000,
            seed: 7,
            tamper_basis: false,
        }
    }
}

fn check(id: usize, name: &'static str, result: Result<String, String>) -> Check {
    let (status, detail) = match result {
        Ok(d) => (Status::Pass, d),
        Err(d) => (Status::Fail, d),
    };
    Check {
        id,
        name,
        status,
        detail,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every check in order. Timing goes to `progress`, never into the
/// check lines, so the returned lines are reproducible.
pub fn run_all(opts: &VerifyOptions, progress: &mut dyn FnMut(&str)) -> Vec<Check> {
    type Job<'a> = (usize, &'static str, Box<dyn Fn() -> Result<String, String> + 'a>);
    let jobs: Vec<Job> = vec![
        (1, "exceptional 5-polytope", Box::new(exceptional_polytope)),
        (2, "basis rank and span", Box::new(|| basis_rank(opts.tamper_basis))),
        (3, "IC equation", Box::new(ic_equation)),
        (4, "unit CD vectors of basis words", Box::new(unit_vectors)),
        (5, "small-dimension search", Box::new(small_search)),
        (6, "sampled d=5 search", Box::new(|| sampled_search(opts.samples, opts.seed))),
        (7, "distance counts", Box::new(distance_counts)),
    ];
    let mut out = Vec::new();
    for (id, name, job) in jobs {
        let t = Instant::now();
        let c = check(id, name, job());
        progress(&format!("check {id} done in {:.2?}", t.elapsed()));
        out.push(c);
    }
    out.push(Check {
        id: 8,
        name: "full d=5 reproduction",
        status: Status::Skip,
        detail: "needs an external list of all 5-dimensional 01-polytopes; ingest it with `corpus --ingest` and run `search`".into(),
    });
    out
}

pub fn cd_from_pairs(d: usize, pairs: &[(&str, i64)]) -> Result<CdVector, String> {
    let ws = words(d);
    let mut coeffs = vec![Rat::from_integer(0.into()); ws.len()];
    for (w, c) in pairs {
        let i = ws
            .iter()
            .position(|x| x.to_string() == *w)
            .ok_or_else(|| format!("unknown word {w}"))?;
        coeffs[i] = int(*c);
    }
    CdVector::new(d, coeffs).map_err(|e| e.to_string())
}

pub fn exceptional_polytope() -> Result<String, String> {
    let (primal, polar) = build_entry(exceptional::polytope_mask()).map_err(|e| e.to_string())?;
    let want = cd_from_pairs(5, &exceptional::CD)?;
    let hits: Vec<&CorpusEntry> = [&primal, &polar].into_iter().filter(|e| e.cd == want).collect();
    ensure(hits.len() == 1, || {
        format!("{} of primal/polar match the CD list (primal {}, polar {})", hits.len(), primal.cd, polar.cd)
    })?;
    let hit = hits[0];
    let s = WordSet::from_words(5, &d5::EXCEPTION).map_err(|e| e.to_string())?;
    let sum = lambda_sum(&hit.cd, &s);
    ensure(sum == int(-2), || format!("lambda_{{CDCC,CCDC,CCCD}} = {sum}, expected -2"))?;
    let g = g_vector(&hit.cd, &d5::components()).values();
    let want_g: Vec<Rat> = exceptional::G.iter().map(|&v| int(v)).collect();
    ensure(g == want_g, || format!("g = {g:?}"))?;
    let which = if hit.source.is_polar() { "polar" } else { "primal" };
    Ok(format!("{which} CD = {}; lambda sum -2; g = (1, 18, 15, 18, 64, 8, 20, 0)", hit.cd))
}

fn tampered_basis(d: usize) -> Result<(), String> {
    let good = FlagBasis::new(d).map_err(|e| e.to_string())?;
    let mut m = good.matrix().clone();
    let last = m.cols() - 1;
    for i in 0..m.rows() {
        m[(i, last)] = m[(i, 0)].clone();
    }
    FlagBasis::from_matrix(d, good.words().to_vec(), m)
        .map(|_| ())
        .map_err(|e| e.to_string())
}

pub fn basis_rank(tamper: bool) -> Result<String, String> {
    let mut ranks = Vec::new();
    for d in 0..=6 {
        let b = FlagBasis::new(d).map_err(|e| e.to_string())?;
        ensure(b.rank() == fibonacci_count(d), || format!("d={d}: rank {}", b.rank()))?;
        ranks.push(b.rank().to_string());
    }
    if tamper {
        tampered_basis(3)?;
    }
    let mut checked = 0;
    for d in 1..=4 {
        let masks = enumerate_01(d).map_err(|e| e.to_string())?;
        for e in build_corpus(&masks).map_err(|e| e.to_string())? {
            cd_decompose(&e.flag).map_err(|err| format!("{}: {err}", e.source))?;
            checked += 1;
        }
    }
    Ok(format!("ranks {} for d=0..6; {checked} corpus flag vectors in span", ranks.join(",")))
}

fn lattice_of(p: &Polytope) -> Result<FaceLattice, String> {
    let fd = facet_enum(p).map_err(|e| e.to_string())?;
    FaceLattice::from_incidence(&fd, p.ambient_dim()).map_err(|e| e.to_string())
}

/// Simplices, cubes and cross-polytopes up to d=4, every 01-class up to
/// d=3, and the dual of each.
pub fn ic_test_lattices() -> Result<Vec<(String, FaceLattice)>, String> {
    let mut base = vec![("point".to_string(), FaceLattice::point())];
    for d in 1..=4 {
        base.push((format!("simplex({d})"), lattice_of(&shapes::simplex(d))?));
        base.push((format!("cube({d})"), lattice_of(&shapes::cube(d))?));
        base.push((format!("cross({d})"), lattice_of(&shapes::cross_polytope(d))?));
    }
    for d in 1..=3 {
        for m in enumerate_01(d).map_err(|e| e.to_string())? {
            base.push((m.to_string(), lattice_of(&m.to_polytope())?));
        }
    }
    let duals: Vec<(String, FaceLattice)> =
        base.iter().map(|(n, l)| (format!("dual {n}"), l.dual())).collect();
    base.extend(duals);
    Ok(base)
}

pub fn ic_equation() -> Result<String, String> {
    let lattices = ic_test_lattices()?;
    for (name, x) in &lattices {
        let x = FormalLattice::single(x.clone());
        let ic_cc = x.d_operator().flag();
        let rhs = x.prism().prism().flag() - x.product_with(&FaceLattice::triangle()).flag();
        ensure(ic_cc == rhs, || format!("{name}: IC - CC differs from I^2 - triangle"))?;
        ensure(x.prism().d_operator().flag() == x.d_operator().prism().flag(), || {
            format!("{name}: DI differs from ID")
        })?;
    }
    Ok(format!("{} polytopes", lattices.len()))
}

pub fn unit_vectors() -> Result<String, String> {
    let mut n = 0;
    for d in 0..=6 {
        let basis = FlagBasis::shared(d).map_err(|e| e.to_string())?;
        for (i, w) in basis.words().iter().enumerate() {
            let cd = basis
                .decompose_formal(&crate::cdbasis::word_flag(w))
                .map_err(|e| e.to_string())?;
            ensure(cd.is_unit(i), || format!("{w}: {cd}"))?;
            let g = crate::cdbasis::g_order_zero(&cd);
            for (k, gk) in g.iter().enumerate() {
                let want = int((w.deg_d() == k) as i64);
                ensure(*gk == want, || format!("{w}: g_{k} = {gk}"))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} words"))
}

/// Independent evaluation of `E(P)`: every word-set against every entry,
/// summing by word string.
pub fn brute_force_effective(d: usize, entries: &[CorpusEntry]) -> Vec<u64> {
    let names: Vec<String> = words(d).iter().map(|w| w.to_string()).collect();
    let tables: Vec<Vec<(String, Rat)>> = entries
        .iter()
        .map(|e| e.cd.entries().into_iter().map(|(w, c)| (w.to_string(), c)).collect())
        .collect();
    (0..1u64 << names.len())
        .filter(|bits| {
            tables.iter().all(|t| {
                let total: Rat = t
                    .iter()
                    .filter(|(w, _)| {
                        let k = names.iter().position(|n| n == w).unwrap();
                        bits >> k & 1 == 1
                    })
                    .map(|(_, c)| c.clone())
                    .sum();
                total >= Rat::from_integer(0.into())
            })
        })
        .collect()
}

fn polygon_entries() -> Result<Vec<CorpusEntry>, String> {
    (3..=12)
        .map(|m| {
            let flag = lattice_of(&shapes::polygon(m))?.flag_vector();
            let cd = cd_decompose(&flag).map_err(|e| e.to_string())?;
            ensure(cd.coeffs() == [int(1), int(m as i64 - 3)], || format!("{m}-gon: {cd}"))?;
            Ok(CorpusEntry {
                source: EntrySource::Mask(VertexMask::full_cube(2)),
                dim: 2,
                flag,
                cd,
            })
        })
        .collect()
}

fn order_zero_extremal(d: usize, fam: &EffectiveFamily) -> Result<(), String> {
    let ext = extremal_subsets(fam);
    for i in 0..=d / 2 {
        let s = WordSet::order_zero(d, i);
        ensure(fam.contains(&s), || format!("d={d}: order-zero {s} not effective"))?;
        ensure(ext.contains(&s), || format!("d={d}: order-zero {s} not extremal"))?;
    }
    Ok(())
}

pub fn small_search() -> Result<String, String> {
    let polygons = polygon_entries()?;
    let fam = effective_sets(&polygons).map_err(|e| e.to_string())?;
    let ext = extremal_subsets(&fam);
    let want = vec![
        WordSet::from_words(2, &["CC"]).unwrap(),
        WordSet::from_words(2, &["D"]).unwrap(),
    ];
    ensure(ext == want, || format!("d=2 extremals {ext:?}"))?;
    let mut detail = vec!["d=2 extremals {CC}, {D}".to_string()];
    for d in 3..=4 {
        let masks = enumerate_01(d).map_err(|e| e.to_string())?;
        let entries = build_corpus(&masks).map_err(|e| e.to_string())?;
        let fam = effective_sets(&entries).map_err(|e| e.to_string())?;
        let engine: Vec<u64> = fam.members.iter().map(WordSet::bits).collect();
        let brute = brute_force_effective(d, &entries);
        ensure(engine == brute, || format!("d={d}: engine and brute force disagree"))?;
        order_zero_extremal(d, &fam)?;
        detail.push(format!("d={d}: {} classes, |E| = {}", masks.len(), engine.len()));
    }
    Ok(detail.join("; "))
}

pub fn sampled_search(samples: usize, seed: u64) -> Result<String, String> {
    let masks = sample_01(5, samples, seed).map_err(|e| e.to_string())?;
    let mut entries = build_corpus(&masks).map_err(|e| e.to_string())?;
    let (p, q) = build_entry(exceptional::polytope_mask()).map_err(|e| e.to_string())?;
    entries.push(p);
    entries.push(q);
    let fam = effective_sets(&entries).map_err(|e| e.to_string())?;
    for s in d5::extremal_sets() {
        ensure(fam.contains(&s), || format!("reference set {s} not effective"))?;
    }
    let bad = WordSet::from_words(5, &d5::EXCEPTION).unwrap();
    let x = fam
        .exclusion(&bad)
        .ok_or_else(|| format!("{bad} is effective on the sample"))?;
    let witness = &entries[x.witness];
    ensure(
        witness.cd == cd_from_pairs(5, &exceptional::CD)? && x.value == int(-2),
        || format!("{bad} excluded by {} with value {}", witness.source, x.value),
    )?;
    let comps = d5::components();
    ensure(is_upper_triangular(&comps), || "components are not upper-triangular".into())?;
    for (text, ws) in d5::RESIDUALS {
        let s = WordSet::from_words(5, ws).unwrap();
        let got = render_inequality(&s, &comps).map_err(|e| e.to_string())?;
        ensure(got == text, || format!("{s}: rendered {got:?}, expected {text:?}"))?;
        ensure(classify(&s) == Classification::Residual, || format!("{s} not residual"))?;
    }
    Ok(format!(
        "{} entries, {} distinct CD vectors, |E| = {}; 13 sets effective; {bad} excluded with lambda -2",
        entries.len(),
        fam.distinct_vectors,
        fam.members.len()
    ))
}

pub fn distance_counts() -> Result<String, String> {
    let v = exceptional::missing_mask();
    let want = DistanceCount(exceptional::DISTANCE_COUNT.to_vec());
    for u in v.vertices() {
        let got = distance_count(u, v);
        ensure(got == want, || format!("vertex {u}: {:?}", got.0))?;
    }
    let found = find_by_distance_count(5, 8, &want);
    let canon = crate::corpus::canonical_form(v);
    ensure(found == vec![canon], || format!("search found {found:?}"))?;
    Ok(format!("all 8 vertices; one class {canon}"))
}

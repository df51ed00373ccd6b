//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use teslerforge::defcone::{
    cone_contains, deform_vertex, q_polytope, tesler_deforms, tesler_translate, DeformingVector, Relation,
};
use teslerforge::flow::{
    flow_hrep, forced_entries, is_deformation_of_tesler, is_feasible, translate_reduce, Certificate, NetFlow,
    Reduction,
};
use teslerforge::matrix::{dim, offset, positions, tesler_hrep, HookVector, TildeUpperTri, UpperTri};
use teslerforge::polyhedra::{DeformKind, HRep, Oracle, VRep};
use teslerforge::rat::{frac, int, Rat};
use teslerforge::tesler::{are_adjacent, edge_vector, tesler_vertices, tightness_witnesses};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Oracle) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hv(a: &[i64]) -> HookVector {
    HookVector::from_ints(a)
}

fn m(rows: &[&[i64]]) -> UpperTri {
    UpperTri::from_int_rows(rows).unwrap()
}

fn ones(n: usize) -> HookVector {
    HookVector::new(vec![int(1); n])
}

fn grid(values: &[i64], n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| values.iter().copied()).multi_cartesian_product().collect()
}

fn flat(vs: &[UpperTri]) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| v.flat().to_vec()).collect()
}

fn vertices(o: &Oracle, h: &HRep) -> Result<VRep, String> {
    o.enumerate_vertices(h).map_err(|e| e.to_string())
}

fn random_positive(rng: &mut ChaCha8Rng, n: usize) -> HookVector {
    HookVector::new((0..n).map(|_| frac(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect())
}

fn c1_hook_sum(_: &Oracle) -> Outcome {
    let eta = m(&[&[1, 2, 3], &[4, 5], &[10]]).hook_vector();
    ensure(eta == hv(&[6, 7, 2]), || format!("got {eta}"))?;
    Ok("η = (6,7,2)".into())
}

fn c2_vertices_adjacency(_: &Oracle) -> Outcome {
    let v = m(&[&[0, 2, 0, 0], &[0, 0, 4], &[3, 0], &[8]]);
    let w = m(&[&[0, 0, 2, 0], &[0, 0, 2], &[5, 0], &[6]]);
    let vs = tesler_vertices(&hv(&[2, 2, 3, 4])).map_err(|e| e.to_string())?;
    ensure(vs.contains(&v) && vs.contains(&w), || "v or w missing from the vertex list".into())?;
    ensure(are_adjacent(&v, &w).map_err(|e| e.to_string())?, || "v, w reported non-adjacent".into())?;
    let d_v = m(&[&[0, 1, 0, 0], &[0, 0, 1], &[0, 0], &[1]]);
    let d_w = m(&[&[0, 0, 1, 0], &[0, 0, 0], &[1, 0], &[0]]);
    let expected = (&d_w - &d_v).scale(&int(2));
    let got = edge_vector(&v, &w).map_err(|e| e.to_string())?;
    ensure(got == expected, || format!("edge vector\n{got}"))?;
    Ok(format!("{} vertices, v ~ w, w − v = 2(D_w(1) − D_v(1))", vs.len()))
}

fn c3_deform_map(_: &Oracle) -> Outcome {
    let dv = DeformingVector::new(
        hv(&[8, 7, 8, 1]),
        TildeUpperTri::from_int_rows(&[&[-1, 2, -3, -4], &[-5, 6, 7], &[-8, 9]]).unwrap(),
    )
    .unwrap();
    let v = m(&[&[0, 1, 0, 0], &[0, 2, 0], &[3, 0], &[1]]);
    ensure(v.hook_vector() == ones(4), || "v is not in Tes_4(1,1,1,1)".into())?;
    let got = deform_vertex(&v, &dv).map_err(|e| e.to_string())?;
    let expected = m(&[&[1, 0, 3, 4], &[5, 9, -7], &[29, -9], &[-11]]);
    ensure(got == expected, || format!("got\n{got}"))?;
    Ok("v′ = [[1,0,3,4],[5,9,−7],[29,−9],[−11]]".into())
}

fn c4_vertex_counts(o: &Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for n in 2..=5 {
        let fact: usize = (1..=n).product();
        for _ in 0..10 {
            let a = random_positive(&mut rng, n);
            let vs = tesler_vertices(&a).map_err(|e| e.to_string())?;
            ensure(vs.len() == fact, || format!("a = {a}: {} vertices", vs.len()))?;
            if n <= 4 {
                let ov = vertices(o, &tesler_hrep(&a))?;
                ensure(ov.vertices == flat(&vs), || format!("a = {a}: vertex sets differ from oracle"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("40 samples with n! vertices, {checked} oracle set-equalities"))
}

fn c5_edge_formula(o: &Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut edges = 0;
    for n in 3..=4 {
        for _ in 0..5 {
            let a = random_positive(&mut rng, n);
            let vs = tesler_vertices(&a).map_err(|e| e.to_string())?;
            let ov = vertices(o, &tesler_hrep(&a))?;
            let oracle_edges: BTreeSet<(usize, usize)> = ov.adjacency.iter().copied().collect();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let adj = are_adjacent(&vs[i], &vs[j]).map_err(|e| e.to_string())?;
                    ensure(adj == oracle_edges.contains(&(i, j)), || format!("a = {a}: adjacency of {i},{j} disagrees"))?;
                }
            }
            for &(i, j) in &oracle_edges {
                let e = edge_vector(&vs[i], &vs[j]).map_err(|e| format!("a = {a}: {e}"))?;
                ensure(e == &vs[j] - &vs[i], || "edge vector mismatch".into())?;
                edges += 1;
            }
        }
    }
    Ok(format!("{edges} oracle edges, formula exact on all"))
}

fn c6_cone(o: &Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = tesler_hrep(&ones(3));
    let hv0 = vertices(o, &h)?;
    let mut r = || frac(rng.gen_range(-2..=2), rng.gen_range(1..=2));
    let mut inside = 0;
    for _ in 0..200 {
        let a = HookVector::new((0..3).map(|_| r()).collect());
        let b = TildeUpperTri::from_flat(3, (0..dim(3) - 1).map(|_| r()).collect()).unwrap();
        let dv = DeformingVector::new(a, b).unwrap();
        let check = o.is_deformation(&h, &hv0, dv.a.as_slice(), dv.btilde.flat()).map_err(|e| e.to_string())?;
        ensure(cone_contains(&dv) == check.is_deformation(), || format!("{dv:?}: cone and oracle disagree"))?;
        if cone_contains(&dv) {
            inside += 1;
            let tr = tesler_translate(&dv).map_err(|e| e.to_string())?;
            let q = vertices(o, &q_polytope(&dv))?;
            let t = vertices(o, &tesler_hrep(&tr.a_t))?.translate(tr.t.flat());
            ensure(q.vertices == t.vertices, || format!("{dv:?}: translation identity fails"))?;
        }
    }
    Ok(format!("200 samples agree ({inside} in the cone, all translates exact)"))
}

fn c7_weak_strong(o: &Oracle) -> Outcome {
    let h = tesler_hrep(&ones(3));
    let hv0 = vertices(o, &h)?;
    for a in grid(&[0, 1, 2], 3) {
        let a = hv(&a);
        let check = o.is_deformation(&h, &hv0, a.as_slice(), &vec![Rat::zero(); 5]).map_err(|e| e.to_string())?;
        let weak = a.get(1).is_positive() && a.get(2).is_positive();
        let expected = if weak { DeformKind::Weak } else { DeformKind::Strong };
        ensure(check.kind == expected, || format!("a = {a}: oracle says {:?}", check.kind))?;
        let verdict = tesler_deforms(&a, &ones(3)).map_err(|e| e.to_string())?.verdict;
        ensure((verdict == Relation::NormallyEquivalent) == weak, || format!("a = {a}: verdict {verdict:?}"))?;
    }
    Ok("27 grid points: weak iff a₁, a₂ > 0".into())
}

fn c8_general_iff(o: &Oracle) -> Outcome {
    let all: Vec<HookVector> = grid(&[0, 1, 2], 3).iter().map(|a| hv(a)).collect();
    let qs: Vec<VRep> = all.iter().map(|a| vertices(o, &tesler_hrep(a))).collect::<Result<_, _>>()?;
    let mut deformations = 0;
    for b in &all {
        let (min_b, vb) = o.minimal_description(&tesler_hrep(b)).map_err(|e| e.to_string())?;
        for (a, qa) in all.iter().zip(&qs) {
            let check = o.polytope_deforms(&min_b, &vb, qa).map_err(|e| e.to_string())?;
            let verdict = tesler_deforms(a, b).map_err(|e| e.to_string())?.verdict;
            ensure(check.is_deformation() == (verdict != Relation::Neither), || format!("a = {a}, b = {b}: {verdict:?}"))?;
            deformations += usize::from(check.is_deformation());
        }
    }
    Ok(format!("729 pairs agree ({deformations} deformations)"))
}

fn c9_flow_sweep(o: &Oracle) -> Outcome {
    let base = tesler_hrep(&ones(4));
    let base_v = vertices(o, &base)?;
    let (mut total, mut negatives) = (0, 0);
    for a in grid(&[-2, -1, 0, 1, 2], 4) {
        let a = NetFlow::from_ints(&a);
        if !is_feasible(&a) {
            continue;
        }
        total += 1;
        let q = vertices(o, &flow_hrep(&a))?;
        let truth = o.polytope_deforms(&base, &base_v, &q).map_err(|e| e.to_string())?.is_deformation();
        let verdict = is_deformation_of_tesler(&a, o).map_err(|e| format!("{a:?}: {e}"))?;
        ensure(verdict.is_deformation == truth, || format!("{:?}: verdict {} vs oracle {truth}", a.a.0, verdict.is_deformation))?;
        match &verdict.certificate {
            Certificate::NegativeTail { m, eta_m, bound, a_hat, btilde, .. } => {
                negatives += 1;
                ensure(eta_m < bound && *eta_m == btilde.hook_sum(*m).unwrap() && *bound == -a_hat.get(*m), || {
                    format!("{a:?}: unsound negative-tail certificate")
                })?;
            }
            Certificate::NonRedundantDiagonal { a_hat, g, .. } => {
                negatives += 1;
                ensure(
                    tesler_hrep(&a_hat.a).contains(g.flat()) && !flow_hrep(a_hat).contains(g.flat()) && g.get(4, 4).is_negative(),
                    || format!("{a:?}: unsound diagonal certificate"),
                )?;
            }
            Certificate::PointPolytope { .. } | Certificate::AllNonnegTail => {
                ensure(verdict.is_deformation, || "positive certificate on a negative verdict".into())?
            }
        }
    }
    Ok(format!("{total} feasible net flows agree; {negatives} certificates verified"))
}

fn random_feasible(seed: u64) -> Vec<NetFlow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 50 {
        let n = if out.len() % 2 == 0 { 3 } else { 4 };
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let a = NetFlow::from_ints(&a);
        if is_feasible(&a) {
            out.push(a);
        }
    }
    out
}

fn c10_reduction(o: &Oracle) -> Outcome {
    let mut points = 0;
    for a in random_feasible(10) {
        let v = vertices(o, &flow_hrep(&a))?;
        match translate_reduce(&a).map_err(|e| e.to_string())? {
            Reduction::Point { point } => {
                points += 1;
                ensure(v.vertices == vec![point.flat().to_vec()], || format!("{:?}: not the single vertex", a.a.0))?;
            }
            Reduction::Translated { a_hat, t, .. } => {
                let shifted = vertices(o, &flow_hrep(&a_hat))?.translate(t.flat());
                ensure(v.vertices == shifted.vertices, || format!("{:?}: translation identity fails", a.a.0))?;
            }
        }
    }
    Ok(format!("50 samples exact ({points} single points)"))
}

fn c11_forced(o: &Oracle) -> Outcome {
    let mut entries = 0;
    for a in random_feasible(10) {
        let n = a.n();
        let forced = forced_entries(&a).map_err(|e| e.to_string())?;
        for x in vertices(o, &flow_hrep(&a))?.vertices {
            for ((i, j), val) in &forced {
                ensure(&x[offset(n, *i, *j)] == val, || format!("{:?}: entry ({i},{j}) not forced", a.a.0))?;
                entries += 1;
            }
        }
    }
    Ok(format!("{entries} forced entries matched at oracle vertices"))
}

fn c12_tightness(o: &Oracle) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..20 {
        let n = 1 + k % 5;
        let a = HookVector::new((0..n).map(|_| frac(rng.gen_range(0..=6), rng.gen_range(1..=3))).collect());
        let (m1, m2) = tightness_witnesses(&a).map_err(|e| e.to_string())?;
        let h = tesler_hrep(&a);
        ensure(h.contains(m1.flat()) && h.contains(m2.flat()), || format!("a = {a}: witness outside Tes"))?;
        for (i, j) in positions(n).filter(|&p| p != (n, n)) {
            ensure(m1.get(i, j).is_zero() || m2.get(i, j).is_zero(), || format!("a = {a}: ({i},{j}) untouched"))?;
        }
        if n <= 4 {
            let ov = vertices(o, &h)?;
            for p in 0..dim(n) - 1 {
                let min = ov.vertices.iter().map(|x| x[p].clone()).min().unwrap();
                ensure(min.is_zero(), || format!("a = {a}: coordinate {p} minimum {min}"))?;
            }
        }
    }
    Ok("20 samples: both witnesses in Tes, every inequality attained".into())
}

fn c13_cli(_: &Oracle) -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let cases: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("cases.json")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let documented = [
        "tes vertices", "tes edges", "tes hooksum", "tes deform-map", "defcone check", "defcone face",
        "defcone translate", "defcone deform-vertex", "defcone compare", "flow feasible", "flow critical",
        "flow reduce", "flow witness", "flow tight", "flow verdict", "oracle vertices", "oracle minimize",
        "oracle is-deformation",
    ];
    let mut covered = BTreeSet::new();
    let cases = cases.as_array().ok_or("cases.json is not an array")?;
    for case in cases {
        let name = case["name"].as_str().unwrap();
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        covered.insert(format!("{} {}", args[0], args[1]));
        let run = || Command::new(env!("CARGO_BIN_EXE_teslerforge")).args(&args).output().map_err(|e| e.to_string());
        let (first, second) = (run()?, run()?);
        ensure(first.stdout == second.stdout && first.status == second.status, || format!("{name}: outputs differ"))?;
        let golden = std::fs::read(dir.join(format!("{name}.out"))).map_err(|e| format!("{name}: {e}"))?;
        ensure(first.stdout == golden, || format!("{name}: output differs from the stored fixture"))?;
    }
    let missing: Vec<&str> = documented.iter().copied().filter(|c| !covered.contains(*c)).collect();
    ensure(missing.is_empty(), || format!("no golden case for {missing:?}"))?;
    Ok(format!("{} cases, byte-identical across runs and equal to fixtures", cases.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("golden hook sum", c1_hook_sum),
        ("golden vertices, adjacency and edge vector", c2_vertices_adjacency),
        ("golden deformation map", c3_deform_map),
        ("vertex counts n! and oracle equality", c4_vertex_counts),
        ("edge formula on every oracle edge", c5_edge_formula),
        ("deformation cone agrees with oracle", c6_cone),
        ("weak/strong split on {0,1,2}^3", c7_weak_strong),
        ("Tesler deformation iff on ({0,1,2}^3)^2", c8_general_iff),
        ("flow deformation sweep on {-2..2}^4", c9_flow_sweep),
        ("flow reduction identities", c10_reduction),
        ("forced flow entries", c11_forced),
        ("tightness witnesses", c12_tightness),
        ("CLI determinism and golden fixtures", c13_cli),
    ];
    let oracle = Oracle::default();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let secs = || start.elapsed().as_secs_f64();
        match check(&oracle) {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({:.1}s)", k + 1, secs()),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason} ({:.1}s)", k + 1, secs());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails. Every check is exact; nothing is sampled with a
//! tolerance.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cpn_core::gen::{
    network_corpus, random_expanded_network, random_minimal_network, random_standard_network,
    random_well_connected, seeded,
};
use cpn_core::minors::{contiguous_disjoint, kuo_sides};
use cpn_core::{
    b_assignment, comb_partition, contiguous_minor, cube_site, desnanot_jacobi, dual_tripod_pf,
    dual_tripod_via_resistance, evaluate_tad, grove_count, is_well_connected, jaw_identity,
    jaw_rewrite, locate_region, noninterlaced_minor, ratio, reconstruct_standard, search_matching,
    standard_network, strand_matching, tripod_pf, tripod_variables, CellSign, CpnError, GroveTable,
    Network, NodePartition, Rat, RatMatrix, ResponseMatrix, StrandMatching, TadRegion,
    Transformation, TripodKind, TripodSpec,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn conductances(g: &Network) -> Vec<Rat> {
    g.edges().iter().map(|e| e.conductance.clone()).collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rat {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(sign * rng.gen_range(1..=20), rng.gen_range(1..=20))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| random_rational(rng))
}

/// Worked example: matching inference, tripod variables and round trip.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let l = ResponseMatrix::new(common::example_response()).map_err(|e| e.to_string())?;
    let m = search_matching(&l).map_err(|e| e.to_string())?;
    ensure!(
        m == common::example_matching(),
        "inferred matching {}",
        m.to_text()
    );
    let tv = tripod_variables(&l, &m).map_err(|e| e.to_string())?;
    let mut values = tv.values.clone();
    values.sort();
    let mut expected: Vec<Rat> = [60, 4, 600, 390, 765, 10, 300]
        .iter()
        .map(|&v| Rat::from_integer(v.into()))
        .collect();
    expected.sort();
    ensure!(values == expected, "tripod values {:?}", tv.values);
    ensure!(
        tv.exterior == Rat::from_integer(5.into()),
        "exterior {}",
        tv.exterior
    );
    let r = reconstruct_standard(&l, &m).map_err(|e| e.to_string())?;
    ensure!(
        r.network.response_matrix().map_err(|e| e.to_string())? == l,
        "round trip differs"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "matching, 7 tripod values, exterior 5, round trip in {elapsed:.2?}"
    ))
}

/// Gluing adjacent nodes of the worked example.
fn criterion_2() -> Outcome {
    let l = ResponseMatrix::new(common::example_response()).unwrap();
    let a = l.glue(3).map_err(|e| e.to_string())?;
    let b = l.glue(2).map_err(|e| e.to_string())?;
    let want_a = RatMatrix::from_i64(&[
        &[-100, 40, 55, 5],
        &[40, -88, 44, 4],
        &[55, 44, -115, 16],
        &[5, 4, 16, -25],
    ]);
    let want_b = RatMatrix::from_i64(&[
        &[-100, 85, 10, 5],
        &[85, -115, 20, 10],
        &[10, 20, -40, 10],
        &[5, 10, 10, -25],
    ]);
    ensure!(a.matrix() == &want_a, "glue {{3,4}} gave {:?}", a.matrix());
    ensure!(b.matrix() == &want_b, "glue {{2,3}} gave {:?}", b.matrix());
    Ok("both glued 4x4 matrices exact".into())
}

/// Forward-then-inverse fuzzing.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(3);
    let mut per_n = [0usize; 7];
    for i in 0..240 {
        let n = 3 + i % 4;
        let (g, _, m) = random_standard_network(&mut rng, n);
        let l = g.response_matrix().map_err(|e| e.to_string())?;
        let r = reconstruct_standard(&l, &m).map_err(|e| format!("{e} on\n{}", g.to_text()))?;
        ensure!(
            conductances(&r.network) == conductances(&g),
            "conductances differ on\n{}",
            g.to_text()
        );
        per_n[n] += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "240 networks (n=3..6: {:?}) recovered exactly in {elapsed:.2?}",
        &per_n[3..]
    ))
}

/// Pfaffian formulas against grove enumeration.
fn criterion_4() -> Outcome {
    let mut rng = seeded(4);
    let corpus = network_corpus(&mut rng, 60, 10);
    let (mut specs, mut resistance, mut singular) = (0, 0, 0);
    for g in &corpus {
        let n = g.n();
        let table = GroveTable::new(g).map_err(|e| e.to_string())?;
        let l = g.response_matrix().map_err(|e| e.to_string())?;
        for spec in TripodSpec::all(n) {
            let tau = spec.partition().map_err(|e| e.to_string())?;
            let expect = table.normalized(&tau);
            let got = match spec.kind() {
                TripodKind::Tripod => tripod_pf(&l, &spec),
                TripodKind::DualTripod => dual_tripod_pf(&l, &spec),
            }
            .map_err(|e| e.to_string())?;
            ensure!(
                got == expect,
                "{tau}: pfaffian {got}, enumeration {expect} on\n{}",
                g.to_text()
            );
            specs += 1;
            if spec.kind() == TripodKind::DualTripod && (1..=n).all(|v| spec.color(v).is_mono()) {
                match dual_tripod_via_resistance(&l, &spec) {
                    Ok(v) => {
                        ensure!(
                            v == expect,
                            "{tau}: resistance form {v}, enumeration {expect}"
                        );
                        resistance += 1;
                    }
                    Err(CpnError::Singular(_)) => {
                        // Disconnected networks have no spanning trees, so
                        // resistances are undefined there.
                        let all = NodePartition::new(n, vec![(1..=n).collect()]).unwrap();
                        ensure!(
                            table.sum(&all) == Rat::zero(),
                            "singular on a connected network"
                        );
                        singular += 1;
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
        }
    }
    Ok(format!(
        "{} networks, {specs} spec evaluations, {resistance} resistance checks ({singular} undefined on disconnected networks)",
        corpus.len()
    ))
}

/// Exactly one grove of each comb partition type.
fn criterion_5() -> Outcome {
    let mut networks: Vec<_> = (2..=5)
        .flat_map(StrandMatching::all)
        .filter_map(|m| standard_network(&m).ok())
        .collect();
    let mut rng = seeded(5);
    while networks.len() < 400 {
        let (g, d, _) = random_standard_network(&mut rng, 6);
        networks.push((g, d));
    }
    let mut partitions = 0;
    let mut checked = 0;
    for (g, d) in networks.iter().filter(|(g, _)| g.edges().len() <= 12) {
        for chi in (0..d.crossings().len()).map(Some).chain([None]) {
            let (tau, _) = comb_partition(g, d, chi);
            let c = grove_count(g, &tau).map_err(|e| e.to_string())?;
            ensure!(c == 1, "{c} groves of {tau} on\n{}", g.to_text());
            partitions += 1;
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} standard networks, {partitions} partitions with a unique grove"
    ))
}

/// A random symmetric matrix whose central minors are all nonzero, so every
/// Laurent polynomial can be evaluated. Returns the matrix and the number of
/// rejected draws.
fn generic_symmetric(rng: &mut ChaCha8Rng, n: usize) -> (RatMatrix, usize) {
    let mut rejected = 0;
    loop {
        let a = random_matrix(rng, n, n);
        let m = RatMatrix::from_fn(n, n, |i, j| a[(i.min(j), i.max(j))].clone());
        let ok = (1..=n / 2).all(|y| {
            (0..2 * n as i64).all(|x| !cpn_core::central_minor(&m, x, y).unwrap().is_zero())
        });
        if ok {
            return (m, rejected);
        }
        rejected += 1;
    }
}

/// Domino regions: evaluation, tiling counts and Kuo condensation.
fn criterion_6() -> Outcome {
    let mut rng = seeded(6);
    let (mut minors, mut rejected) = (0, 0);
    for n in [6usize, 7] {
        for _ in 0..20 {
            let (m, r) = generic_symmetric(&mut rng, n);
            rejected += r;
            for y in 1..=n / 2 {
                for a in 1..=n {
                    for b in 1..=n {
                        if !contiguous_disjoint(n, a, b, y) {
                            continue;
                        }
                        let region = locate_region(n, a, b, y)
                            .ok_or(format!("no region for ({a},{b},{y}) at n={n}"))?;
                        let tad = evaluate_tad(&m, &region).map_err(|e| e.to_string())?;
                        let direct = contiguous_minor(&m, a as i64, b as i64, y).unwrap();
                        ensure!(
                            tad == direct,
                            "n={n} minor ({a},{b},{y}): TAD {tad}, determinant {direct}"
                        );
                        minors += 1;
                    }
                }
            }
        }
    }
    for l in 0..=5i64 {
        let r = TadRegion::new(0, l + 1, l, 2 * l as usize + 2).unwrap();
        let count = r.tilings().len();
        ensure!(
            count == 1 << (l * (l + 1) / 2),
            "order {l}: {count} tilings"
        );
    }
    let mut kuo = 0;
    for n in 3..=8usize {
        for y in 1..n as i64 {
            for l in 2..=4 {
                if y + l > n as i64 {
                    continue;
                }
                for x in 0..2 * n as i64 {
                    let (lhs, rhs) = kuo_sides(x, y, l, n).map_err(|e| e.to_string())?;
                    ensure!(lhs == rhs, "Kuo fails at x={x} y={y} l={l} n={n}");
                    kuo += 1;
                }
            }
        }
    }
    Ok(format!(
        "{minors} minors on 40 matrices ({rejected} draws rejected for a zero central minor), tiling counts for l<=5, {kuo} Kuo identities"
    ))
}

/// A random pair of noninterlaced node sets of size `k`.
fn noninterlaced_pair(rng: &mut ChaCha8Rng, n: usize, k: usize) -> (Vec<usize>, Vec<usize>) {
    let start = rng.gen_range(1..=n);
    let cut = rng.gen_range(k..=n - k);
    let at = |p: usize| (start + p - 1) % n + 1;
    let rows: Vec<usize> = (0..cut)
        .collect::<Vec<_>>()
        .choose_multiple(rng, k)
        .map(|&p| at(p))
        .collect();
    let cols: Vec<usize> = (cut..n)
        .collect::<Vec<_>>()
        .choose_multiple(rng, k)
        .map(|&p| at(p))
        .collect();
    (rows, cols)
}

/// Central-minor positivity and its failure after deletion or contraction.
fn criterion_7() -> Outcome {
    let mut rng = seeded(7);
    let (mut networks, mut sampled, mut broken, mut skipped) = (0, 0, 0, 0);
    for i in 0..50 {
        let n = 3 + i % 5;
        let (g, _) = random_well_connected(&mut rng, n);
        let l = g.response_matrix().unwrap();
        let v = is_well_connected(&l).map_err(|e| e.to_string())?;
        ensure!(
            v.minors.len() == n * (n - 1) / 2,
            "{} small central minors at n={n}",
            v.minors.len()
        );
        ensure!(
            v.well_connected,
            "nonpositive minor {:?} at n={n}",
            v.witness
        );
        for _ in 0..10 {
            let k = rng.gen_range(1..=n / 2);
            let (r, c) = noninterlaced_pair(&mut rng, n, k);
            let direct = noninterlaced_minor(l.matrix(), &r, &c).map_err(|e| e.to_string())?;
            ensure!(
                direct > Rat::zero(),
                "noninterlaced minor {r:?} {c:?} is {direct}"
            );
            let e = jaw_rewrite(n, &r, &c).map_err(|e| e.to_string())?;
            ensure!(
                e.eval(l.matrix()).map_err(|e| e.to_string())? == direct,
                "jaw rewrite differs for {r:?} {c:?}"
            );
            sampled += 1;
        }
        for e in g.edges() {
            let deleted = g.delete_edge(e.id).unwrap().response_matrix().unwrap();
            ensure!(
                !is_well_connected(&deleted).unwrap().well_connected,
                "deleting edge {} keeps positivity",
                e.id
            );
            broken += 1;
            if e.u <= n && e.v <= n {
                // Contracting an edge between two nodes glues the nodes, which
                // leaves the space of n-node response matrices.
                skipped += 1;
                continue;
            }
            let contracted = g
                .contract_edge(e.id)
                .map_err(|x| x.to_string())?
                .response_matrix()
                .unwrap();
            ensure!(
                !is_well_connected(&contracted).unwrap().well_connected,
                "contracting edge {} keeps positivity",
                e.id
            );
            broken += 1;
        }
        networks += 1;
    }
    Ok(format!(
        "{networks} networks positive, {sampled} noninterlaced minors positive with matching jaw rewrites, {broken} deletions/contractions break positivity ({skipped} node-node contractions skipped)"
    ))
}

fn kind(t: &Transformation) -> usize {
    match t {
        Transformation::RemoveDeadBranch { .. } => 0,
        Transformation::RemoveSelfLoop { .. } => 1,
        Transformation::SeriesMerge { .. } => 2,
        Transformation::ParallelMerge { .. } => 3,
        Transformation::YDelta { .. } => 4,
        Transformation::DeltaY { .. } => 5,
    }
}

/// Response invariance under every transformation; strand matchings under
/// Y-Delta.
fn criterion_8() -> Outcome {
    let mut rng = seeded(8);
    let mut counts = [0usize; 6];
    let mut matchings = 0;
    for round in 0..2000 {
        if counts.iter().all(|&c| c >= 100) && matchings >= 100 {
            break;
        }
        let n = rng.gen_range(3..=5);
        let g = if round % 2 == 0 {
            let expansions = rng.gen_range(2..=6);
            random_expanded_network(&mut rng, n, expansions).map_err(|e| e.to_string())?
        } else {
            random_minimal_network(&mut rng, n, 3)
        };
        let l = g.response_matrix().unwrap();
        let mut sites = g.transformation_sites();
        sites.shuffle(&mut rng);
        for t in sites.iter().take(4) {
            let h = g.apply(t).map_err(|e| format!("{t:?}: {e}"))?;
            ensure!(
                h.response_matrix().unwrap() == l,
                "{t:?} changed the response on\n{}",
                g.to_text()
            );
            counts[kind(t)] += 1;
            if round % 2 == 1 && kind(t) >= 4 {
                ensure!(
                    strand_matching(&h) == strand_matching(&g),
                    "{t:?} changed the strand matching"
                );
                matchings += 1;
            }
        }
    }
    ensure!(
        counts.iter().all(|&c| c >= 100),
        "too few sites: {counts:?}"
    );
    ensure!(
        matchings >= 100,
        "too few Y-Delta matching checks: {matchings}"
    );
    Ok(format!(
        "sites per move (dead branch, loop, series, parallel, Y-Delta, Delta-Y): {counts:?}; {matchings} matching checks"
    ))
}

/// B variables: biratios and the cube recurrence.
fn criterion_9() -> Outcome {
    let mut rng = seeded(9);
    let (mut networks, mut edges, mut moves) = (0, 0, 0);
    for i in 0..400 {
        if networks >= 60 && moves >= 60 {
            break;
        }
        let n = 3 + i % 4;
        let moves_before = rng.gen_range(0..=4);
        let g = random_minimal_network(&mut rng, n, moves_before);
        let b = b_assignment(&g).map_err(|e| e.to_string())?;
        ensure!(
            b.biratios(&g).map_err(|e| e.to_string())? == conductances(&g),
            "biratios differ on\n{}",
            g.to_text()
        );
        networks += 1;
        edges += g.edges().len();
        for t in g
            .transformation_sites()
            .into_iter()
            .filter(|t| kind(t) >= 4)
        {
            let h = g.apply(&t).unwrap();
            let site = cube_site(&g, &t).map_err(|e| e.to_string())?;
            let stepped = b.cube_step(&site).map_err(|e| e.to_string())?;
            let s0 = site.center;
            let bit = |k: usize| -> CellSign { 1 << site.strands[k] };
            let val = |s: CellSign| {
                stepped
                    .value(s)
                    .cloned()
                    .ok_or(format!("missing cell {s:b}"))
            };
            let all = bit(0) | bit(1) | bit(2);
            // The move replaces the center cell by the opposite corner.
            let b0 = b
                .value(s0)
                .cloned()
                .ok_or(format!("missing center cell {s0:b}"))?;
            ensure!(stepped.value(s0).is_none(), "center cell survives the move");
            let lhs = b0 * val(s0 ^ all)?;
            let mut rhs = Rat::zero();
            for k in 0..3 {
                rhs += val(s0 ^ bit(k))? * val(s0 ^ all ^ bit(k))?;
            }
            ensure!(lhs == rhs, "cube recurrence fails at {t:?}");
            ensure!(
                stepped.biratios(&h).map_err(|e| e.to_string())? == conductances(&h),
                "post-move biratios differ at {t:?}"
            );
            moves += 1;
        }
    }
    ensure!(
        networks >= 50 && moves >= 50,
        "only {networks} networks and {moves} moves"
    );
    Ok(format!(
        "{networks} minimal networks ({edges} edges), {moves} cube moves"
    ))
}

/// Desnanot-Jacobi and jaw identities.
fn criterion_10() -> Outcome {
    let mut rng = seeded(10);
    let (mut dj, mut jaw) = (0, 0);
    for i in 0..120 {
        let p = 2 + i % 5;
        let m = random_matrix(&mut rng, p, p);
        for a in 1..=p {
            for b in a + 1..=p {
                for c in 1..=p {
                    for d in c + 1..=p {
                        let (l, r) = desnanot_jacobi(&m, a, b, c, d).map_err(|e| e.to_string())?;
                        ensure!(l == r, "Desnanot-Jacobi fails at {a},{b},{c},{d}");
                        dj += 1;
                    }
                }
            }
        }
        let q = 2 + i % 4;
        let tall = random_matrix(&mut rng, q + 1, q);
        for a in 1..=q + 1 {
            for b in a + 1..=q + 1 {
                for c in b + 1..=q + 1 {
                    for d in 1..=q {
                        let (l, r) = jaw_identity(&tall, a, b, c, d).map_err(|e| e.to_string())?;
                        ensure!(l == r, "jaw move fails at {a},{b},{c},{d}");
                        jaw += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "120 square and 120 tall matrices: {dj} Desnanot-Jacobi and {jaw} jaw identities"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("worked example pipeline", criterion_1),
        ("glued matrices", criterion_2),
        ("forward/inverse fuzz", criterion_3),
        ("grove Pfaffian oracle", criterion_4),
        ("unique comb groves", criterion_5),
        ("domino regions", criterion_6),
        ("central-minor positivity", criterion_7),
        ("transformation invariance", criterion_8),
        ("B variables", criterion_9),
        ("determinant identities", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
                failed += 1;
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

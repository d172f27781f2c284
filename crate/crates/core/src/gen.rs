//! Seeded random generators for conductances, matchings, standard networks,
//! minimal networks and small network corpora. Everything is driven by a
//! caller-supplied RNG so runs are reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dyck::{standard_network, RectStrandDiagram};
use crate::error::Result;
use crate::exactalg::{ratio, Rat};
use crate::medial::StrandMatching;
use crate::network::{Expansion, Network, Transformation};

/// Largest numerator and denominator of generated conductances.
pub const MAX_PART: i64 = 20;

/// The reproducible RNG used across the crate's tooling.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A positive rational `p/q` with `1 <= p, q <= 20`.
pub fn random_conductance<R: Rng>(rng: &mut R) -> Rat {
    ratio(rng.gen_range(1..=MAX_PART), rng.gen_range(1..=MAX_PART))
}

/// Replaces every conductance by a fresh random one.
pub fn randomize_conductances<R: Rng>(rng: &mut R, g: &Network) -> Network {
    g.with_conductances(|_| random_conductance(rng))
        .expect("random conductances are positive")
}

/// A uniformly random strand matching on `2n` stubs.
pub fn random_matching<R: Rng>(rng: &mut R, n: usize) -> StrandMatching {
    let mut stubs: Vec<usize> = (1..=2 * n).collect();
    stubs.shuffle(rng);
    let pairs: Vec<(usize, usize)> = stubs
        .chunks(2)
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    StrandMatching::new(n, &pairs).expect("a shuffle of all stubs is a matching")
}

/// A standard network with random conductances on a random matching whose
/// layout glues no nodes.
pub fn random_standard_network<R: Rng>(
    rng: &mut R,
    n: usize,
) -> (Network, RectStrandDiagram, StrandMatching) {
    loop {
        let m = random_matching(rng, n);
        if let Ok((g, d)) = standard_network(&m) {
            return (randomize_conductances(rng, &g), d, m);
        }
    }
}

/// The well-connected standard network on `n` nodes with random conductances.
pub fn random_well_connected<R: Rng>(rng: &mut R, n: usize) -> (Network, RectStrandDiagram) {
    let (g, d) = standard_network(&StrandMatching::well_connected(n))
        .expect("well-connected layout is not degenerate");
    (randomize_conductances(rng, &g), d)
}

/// A random minimal network: a random standard network followed by up to
/// `moves` random Y-Delta or Delta-Y moves, which keep it minimal.
pub fn random_minimal_network<R: Rng>(rng: &mut R, n: usize, moves: usize) -> Network {
    let (mut g, _, _) = random_standard_network(rng, n);
    for _ in 0..moves {
        let sites: Vec<Transformation> = g
            .transformation_sites()
            .into_iter()
            .filter(|t| {
                matches!(
                    t,
                    Transformation::YDelta { .. } | Transformation::DeltaY { .. }
                )
            })
            .collect();
        let Some(t) = sites.choose(rng) else { break };
        g = g.apply(t).expect("listed sites apply");
    }
    g
}

/// A random applicable inverse move.
pub fn random_expansion<R: Rng>(rng: &mut R, g: &Network) -> Expansion {
    let vertices = g.vertex_count();
    loop {
        let kind = rng.gen_range(0..4);
        if kind < 2 || g.edges().iter().all(|e| e.is_loop()) {
            let vertex = rng.gen_range(1..=vertices);
            let slot = rng.gen_range(0..=g.rotation(vertex).len());
            let conductance = random_conductance(rng);
            return if kind == 0 {
                Expansion::DeadBranch {
                    vertex,
                    slot,
                    conductance,
                }
            } else {
                Expansion::SelfLoop {
                    vertex,
                    slot,
                    conductance,
                }
            };
        }
        let e = g.edges().choose(rng).expect("edges exist");
        if e.is_loop() {
            continue;
        }
        return if kind == 2 {
            Expansion::Series {
                edge: e.id,
                first: &e.conductance * ratio(rng.gen_range(21..=40), 20),
            }
        } else {
            Expansion::Parallel {
                edge: e.id,
                first: &e.conductance * ratio(rng.gen_range(1..=19), 20),
            }
        };
    }
}

/// A network with redundant structure: a random standard network grown by
/// `expansions` random inverse moves.
pub fn random_expanded_network<R: Rng>(
    rng: &mut R,
    n: usize,
    expansions: usize,
) -> Result<Network> {
    let (mut g, _, _) = random_standard_network(rng, n);
    for _ in 0..expansions {
        let x = random_expansion(rng, &g);
        g = g.expand(&x)?;
    }
    Ok(g)
}

/// A corpus of `count` networks with at most `max_edges` edges: standard
/// networks (some with edges deleted or contracted, some Y-Delta moved)
/// with random conductances on `2..=6` nodes.
pub fn network_corpus<R: Rng>(rng: &mut R, count: usize, max_edges: usize) -> Vec<Network> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=6);
        let (mut g, _, _) = random_standard_network(rng, n);
        match rng.gen_range(0..4) {
            1 if !g.edges().is_empty() => {
                let id = g.edges().choose(rng).unwrap().id;
                g = g.delete_edge(id).expect("edge exists");
            }
            2 => {
                let ids: Vec<usize> = g
                    .edges()
                    .iter()
                    .filter(|e| e.u > n || e.v > n)
                    .map(|e| e.id)
                    .collect();
                if let Some(&id) = ids.choose(rng) {
                    g = g
                        .contract_edge(id)
                        .expect("edge with an internal endpoint contracts");
                }
            }
            3 => g = random_minimal_network(rng, n, 2),
            _ => {}
        }
        if g.edges().len() <= max_edges {
            out.push(g);
        }
    }
    out
}

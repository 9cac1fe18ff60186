//! Seeded random micro-instances for differential testing: at most two
//! sorts, three relations of arity at most two, two variables per sort,
//! four literals, and twenty structures with universes of at most three
//! elements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{Relation, Signature, Sort, SortId, Structure};
use crate::oracle::raw_candidate_count;
use crate::search::SearchSpec;

#[derive(Debug, Clone)]
pub struct MicroInstance {
    pub seed: u64,
    pub spec: SearchSpec,
    pub sigma: Vec<Structure>,
}

/// Draws the instance for `seed`, redrawing (deterministically) until its
/// raw candidate count is within `limit`.
pub fn micro_instance(seed: u64, limit: u128) -> MicroInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let spec = random_spec(&mut rng);
        if raw_candidate_count(&spec) > limit {
            continue;
        }
        let sigma = random_structures(&spec, &mut rng);
        return MicroInstance { seed, spec, sigma };
    }
}

fn random_spec(rng: &mut ChaCha8Rng) -> SearchSpec {
    let num_sorts = rng.gen_range(1..=2usize);
    let sorts: Vec<Sort> = (0..num_sorts)
        .map(|i| Sort {
            name: ["s", "t"][i].to_string(),
        })
        .collect();
    let num_rels = rng.gen_range(1..=3usize);
    let relations: Vec<Relation> = (0..num_rels)
        .map(|i| {
            let arity = rng.gen_range(1..=2usize);
            Relation {
                name: ["p", "q", "r"][i].to_string(),
                args: (0..arity)
                    .map(|_| SortId(rng.gen_range(0..num_sorts) as u8))
                    .collect(),
            }
        })
        .collect();
    let sig = Signature::new(sorts, relations).expect("valid micro signature");
    let var_names: Vec<Vec<String>> = (0..num_sorts)
        .map(|s| {
            let n = rng.gen_range(1..=2usize);
            (1..=n).map(|i| format!("{}{}", ["x", "y"][s], i)).collect()
        })
        .collect();
    let total_vars: usize = var_names.iter().map(Vec::len).sum();
    let max_literal = rng.gen_range(1..=4u8);
    let max_or = rng.gen_range(1..=max_literal);
    let max_and = rng.gen_range(1..=max_literal);
    let max_exists = rng.gen_range(0..=total_vars as u8);
    let distinct = rng.gen_bool(0.5);
    SearchSpec::new(
        sig,
        var_names,
        max_literal,
        max_or,
        max_and,
        max_exists,
        distinct,
    )
    .expect("valid micro spec")
}

fn random_structures(spec: &SearchSpec, rng: &mut ChaCha8Rng) -> Vec<Structure> {
    let count = rng.gen_range(1..=20usize);
    let densities = [0.2, 0.5, 0.8];
    (0..count)
        .map(|_| {
            let sizes: Vec<u32> = spec
                .var_budgets()
                .iter()
                .map(|&b| rng.gen_range(b as u32..=3))
                .collect();
            let density = *densities.choose(rng).expect("non-empty");
            Structure::random(spec.signature(), sizes, density, rng).expect("valid universe")
        })
        .collect()
}

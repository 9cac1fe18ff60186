#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use force_core::logic::{Formula, Quantifier, Structure, Var};
use force_core::micro::{micro_instance, MicroInstance};
use force_core::oracle::canonical_space;

pub const MICRO_LIMIT: u128 = 200_000;

/// Assignment-enumeration reference semantics, written independently of the
/// compiled evaluator.
pub fn naive_eval(f: &Formula, m: &Structure) -> bool {
    fn go(f: &Formula, m: &Structure, depth: usize, env: &mut Vec<(Var, u32)>) -> bool {
        if depth == f.prefix().len() {
            let value = |v: &Var| env.iter().find(|(w, _)| w == v).expect("bound").1;
            return f.matrix().iter().any(|c| {
                c.lits().iter().all(|l| {
                    let t: Vec<u32> = l.args.iter().map(value).collect();
                    m.holds(l.rel, &t).expect("in range") != l.negated
                })
            });
        }
        let b = f.prefix()[depth];
        let vals: Vec<u32> = (0..m.size(b.var.sort))
            .filter(|e| !f.distinct() || !env.iter().any(|(w, x)| w.sort == b.var.sort && x == e))
            .collect();
        let mut step = |e: u32| {
            env.push((b.var, e));
            let r = go(f, m, depth + 1, env);
            env.pop();
            r
        };
        match b.quant {
            Quantifier::Forall => vals.into_iter().all(&mut step),
            Quantifier::Exists => vals.into_iter().any(&mut step),
        }
    }
    go(f, m, 0, &mut Vec::new())
}

/// Micro instance plus its canonical space, cached per seed.
pub struct Corpus {
    pub inst: MicroInstance,
    pub space: Vec<Formula>,
}

pub fn corpus(seed: u64) -> Arc<Corpus> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Corpus>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&seed) {
        return c.clone();
    }
    let inst = micro_instance(seed, MICRO_LIMIT);
    let space = canonical_space(&inst.spec, u128::MAX).expect("unguarded");
    let c = Arc::new(Corpus { inst, space });
    cache.lock().unwrap().insert(seed, c.clone());
    c
}

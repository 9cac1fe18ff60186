//! Trace samplers: a lock-server protocol simulator and a random-structure
//! generator.
//!
//! The lock server has one server and a set of nodes; the server holds every
//! lock initially. The actions, for a node `n` and a lock `l`:
//!
//! | action        | guard                                      | effect                                               |
//! |---------------|--------------------------------------------|------------------------------------------------------|
//! | `send_lock`   | always                                     | `lock_msg(n,l)`                                      |
//! | `recv_lock`   | `lock_msg(n,l)` and `server_holds_lock(l)` | drop `lock_msg(n,l)`, `server_holds_lock(l)`; add `grant_msg(n,l)` |
//! | `recv_grant`  | `grant_msg(n,l)`                           | drop `grant_msg(n,l)`; add `holds_lock(n,l)`         |
//! | `unlock`      | `holds_lock(n,l)`                          | drop `holds_lock(n,l)`; add `unlock_msg(n,l)`        |
//! | `recv_unlock` | `unlock_msg(n,l)`                          | drop `unlock_msg(n,l)`; add `server_holds_lock(l)`   |

use anyhow::{bail, Context, Result};
use force_core::io::parse_config;
use force_core::logic::{RelId, Signature, Structure};
use force_core::search::SearchSpec;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const LOCKSERV_CONFIG: &str = "\
var: node: n1, n2; lock: l1
relations: lock_msg:          node, lock;  grant_msg:  node, lock;
           unlock_msg:        node, lock;  holds_lock: node, lock;
           server_holds_lock: lock
max-literal: 4 max-or: 3 max-and: 3 max-exists: 1
";

pub fn lockserv_spec() -> SearchSpec {
    parse_config(LOCKSERV_CONFIG).expect("built-in config parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    SendLock,
    RecvLock,
    RecvGrant,
    Unlock,
    RecvUnlock,
}

const ACTIONS: [Action; 5] = [
    Action::SendLock,
    Action::RecvLock,
    Action::RecvGrant,
    Action::Unlock,
    Action::RecvUnlock,
];

struct Lockserv {
    lock_msg: RelId,
    grant_msg: RelId,
    unlock_msg: RelId,
    holds_lock: RelId,
    server_holds_lock: RelId,
}

impl Lockserv {
    fn new(sig: &Signature) -> Result<Self> {
        let rel = |name: &str, arity: usize| -> Result<RelId> {
            let id = sig
                .rel_id(name)
                .with_context(|| format!("lockserv needs relation `{name}`"))?;
            if sig.relation(id).arity() != arity {
                bail!("lockserv relation `{name}` must have arity {arity}");
            }
            Ok(id)
        };
        Ok(Lockserv {
            lock_msg: rel("lock_msg", 2)?,
            grant_msg: rel("grant_msg", 2)?,
            unlock_msg: rel("unlock_msg", 2)?,
            holds_lock: rel("holds_lock", 2)?,
            server_holds_lock: rel("server_holds_lock", 1)?,
        })
    }

    fn init(&self, sig: &Signature, sizes: &[u32]) -> Result<Structure> {
        let mut m = Structure::new(sig, sizes.to_vec())?;
        let locks = m.size(sig.relation(self.server_holds_lock).args[0]);
        for l in 0..locks {
            m.set(self.server_holds_lock, &[l], true)?;
        }
        Ok(m)
    }

    fn holds(&self, m: &Structure, r: RelId, t: &[u32]) -> bool {
        m.holds(r, t).expect("tuple in range")
    }

    fn enabled(&self, m: &Structure, a: Action, n: u32, l: u32) -> bool {
        match a {
            Action::SendLock => true,
            Action::RecvLock => {
                self.holds(m, self.lock_msg, &[n, l]) && self.holds(m, self.server_holds_lock, &[l])
            }
            Action::RecvGrant => self.holds(m, self.grant_msg, &[n, l]),
            Action::Unlock => self.holds(m, self.holds_lock, &[n, l]),
            Action::RecvUnlock => self.holds(m, self.unlock_msg, &[n, l]),
        }
    }

    fn apply(&self, m: &mut Structure, a: Action, n: u32, l: u32) -> Result<()> {
        match a {
            Action::SendLock => m.set(self.lock_msg, &[n, l], true)?,
            Action::RecvLock => {
                m.set(self.lock_msg, &[n, l], false)?;
                m.set(self.server_holds_lock, &[l], false)?;
                m.set(self.grant_msg, &[n, l], true)?;
            }
            Action::RecvGrant => {
                m.set(self.grant_msg, &[n, l], false)?;
                m.set(self.holds_lock, &[n, l], true)?;
            }
            Action::Unlock => {
                m.set(self.holds_lock, &[n, l], false)?;
                m.set(self.unlock_msg, &[n, l], true)?;
            }
            Action::RecvUnlock => {
                m.set(self.unlock_msg, &[n, l], false)?;
                m.set(self.server_holds_lock, &[l], true)?;
            }
        }
        Ok(())
    }
}

/// Samples `samples` states per universe from random runs of `steps` steps.
/// Every run starts in the initial state, which is sampled too.
pub fn lockserv_traces(
    sig: &Signature,
    universes: &[Vec<u32>],
    steps: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Structure>> {
    let ls = Lockserv::new(sig)?;
    let node_sort = sig.relation(ls.holds_lock).args[0];
    let lock_sort = sig.relation(ls.holds_lock).args[1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for sizes in universes {
        let init = ls.init(sig, sizes)?;
        let nodes = init.size(node_sort);
        let locks = init.size(lock_sort);
        let mut taken = 0;
        while taken < samples {
            let mut m = init.clone();
            out.push(m.clone());
            taken += 1;
            for step in 0..steps {
                if taken >= samples {
                    break;
                }
                let mut enabled = Vec::new();
                for a in ACTIONS {
                    for n in 0..nodes {
                        for l in 0..locks {
                            if ls.enabled(&m, a, n, l) {
                                enabled.push((a, n, l));
                            }
                        }
                    }
                }
                let Some(&(a, n, l)) = enabled.choose(&mut rng) else {
                    bail!("deadlock: no enabled action at step {step}");
                };
                ls.apply(&mut m, a, n, l)?;
                out.push(m.clone());
                taken += 1;
            }
        }
    }
    Ok(out)
}

/// Independent structures with a coin flip of probability `density` per
/// ground atom.
pub fn random_traces(
    sig: &Signature,
    universes: &[Vec<u32>],
    samples: usize,
    density: f64,
    seed: u64,
) -> Result<Vec<Structure>> {
    if !(0.0..=1.0).contains(&density) {
        bail!("density must be between 0 and 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for sizes in universes {
        for _ in 0..samples {
            out.push(Structure::random(sig, sizes.clone(), density, &mut rng)?);
        }
    }
    Ok(out)
}

/// Parses `node=2,lock=1` into sizes in sort order.
pub fn parse_universe(sig: &Signature, text: &str) -> Result<Vec<u32>> {
    let mut sizes: Vec<Option<u32>> = vec![None; sig.num_sorts()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, n) = part
            .split_once('=')
            .with_context(|| format!("expected `sort=size`, got `{part}`"))?;
        let id = sig
            .sort_id(name.trim())
            .with_context(|| format!("unknown sort `{}`", name.trim()))?;
        let n: u32 = n
            .trim()
            .parse()
            .with_context(|| format!("invalid size in `{part}`"))?;
        if n == 0 {
            bail!("universe of sort `{}` must not be empty", name.trim());
        }
        sizes[id.0 as usize] = Some(n);
    }
    sizes
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.with_context(|| format!("missing size of sort `{}`", sig.sorts()[i].name)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use force_core::io::parse_formula;
    use force_core::logic::evaluate;

    #[test]
    fn mutual_exclusion_holds_on_samples() {
        let spec = lockserv_spec();
        let sig = spec.signature();
        let states = lockserv_traces(sig, &[vec![2, 1], vec![3, 2]], 30, 400, 7).unwrap();
        assert_eq!(states.len(), 800);
        let mutex = parse_formula(
            "forall N1:node, N2:node, L1:lock. ~holds_lock(N1,L1) | ~holds_lock(N2,L1)",
            &spec,
        )
        .unwrap();
        for m in &states {
            assert!(evaluate(&mutex, m).unwrap());
        }
    }

    #[test]
    fn zero_steps_gives_initial_states() {
        let spec = lockserv_spec();
        let sig = spec.signature();
        let states = lockserv_traces(sig, &[vec![2, 1]], 0, 5, 1).unwrap();
        assert_eq!(states.len(), 5);
        assert!(states.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(
            states[0].tuples(sig.rel_id("server_holds_lock").unwrap()),
            vec![vec![0]]
        );
    }

    #[test]
    fn universe_parsing() {
        let spec = lockserv_spec();
        let sig = spec.signature();
        assert_eq!(parse_universe(sig, "lock=1,node=3").unwrap(), vec![3, 1]);
        assert!(parse_universe(sig, "node=3").is_err());
        assert!(parse_universe(sig, "node=0,lock=1").is_err());
        assert!(parse_universe(sig, "cpu=1").is_err());
    }
}

mod common;

use common::{corpus, naive_eval};
use force_core::io::{
    export_clause_filter, import_clause_filter, parse_formula, print_formula, ClauseFilter,
};
use force_core::logic::{
    canonicalize, entails_syntactic, evaluate, is_canonical, is_tautology, normalize, Binding,
    Canonical, Cube, Formula, Literal, Normalized, Quantifier, RawFormula, Signature, Structure,
    Var,
};
use force_core::search::SearchSpec;
use itertools::Itertools;
use proptest::prelude::*;
use proptest::sample::Index;

const SEEDS: u64 = 64;

fn structure(sig: &Signature, sizes: Vec<u32>, code: u64) -> Structure {
    Structure::from_code(sig, sizes, code).unwrap()
}

/// Per-sort sizes in `1..=3`, each at least `floor`.
fn sizes(floor: &[u8], picks: &[u32]) -> Vec<u32> {
    floor
        .iter()
        .zip(picks)
        .map(|(&f, &p)| (f as u32).max(1) + p % (4 - (f as u32).max(1)))
        .collect()
}

fn max_counts(spec: &SearchSpec, fs: &[&Formula]) -> Vec<u8> {
    let n = spec.signature().num_sorts();
    (0..n)
        .map(|s| fs.iter().map(|f| f.var_counts(n)[s]).max().unwrap_or(0))
        .collect()
}

fn full_prefix(spec: &SearchSpec, quants: &[bool]) -> Vec<Binding> {
    let mut out = Vec::new();
    for (s, &b) in spec.var_budgets().iter().enumerate() {
        for i in 0..b {
            let var = Var::new(force_core::logic::SortId(s as u8), i);
            let q = if quants[out.len() % quants.len()] {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            out.push(Binding { var, quant: q });
        }
    }
    out
}

fn atoms(spec: &SearchSpec, prefix: &[Binding]) -> Vec<Literal> {
    let sig = spec.signature();
    let mut out = Vec::new();
    for (r, rel) in sig.relations().iter().enumerate() {
        let choices: Vec<Vec<Var>> = rel
            .args
            .iter()
            .map(|s| {
                prefix
                    .iter()
                    .map(|b| b.var)
                    .filter(|v| v.sort == *s)
                    .collect()
            })
            .collect();
        for args in choices.into_iter().multi_cartesian_product() {
            out.push(Literal::pos(force_core::logic::RelId(r as u8), &args));
        }
    }
    out
}

fn raw_matrix(lits: &[Literal], picks: &[Vec<(Index, bool)>]) -> Vec<Vec<Literal>> {
    picks
        .iter()
        .map(|cube| {
            cube.iter()
                .map(|(i, neg)| {
                    let a = i.get(lits).clone();
                    if *neg {
                        a.complement()
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect()
}

fn raw_of(f: &Formula) -> RawFormula {
    RawFormula {
        prefix: f.prefix().to_vec(),
        matrix: f.matrix().iter().map(|c| c.lits().to_vec()).collect(),
        distinct: f.distinct(),
    }
}

fn cubes() -> impl Strategy<Value = Vec<Vec<(Index, bool)>>> {
    prop::collection::vec(
        prop::collection::vec((any::<Index>(), any::<bool>()), 1..=3),
        1..=3,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn syntactic_entailment_is_sound_and_transitive(
        seed in 0..SEEDS,
        i in any::<Index>(),
        j in any::<Index>(),
        k in any::<Index>(),
        picks in prop::collection::vec(0u32..3, 2),
        codes in prop::collection::vec(any::<u64>(), 8),
    ) {
        let c = corpus(seed);
        let f = i.get(&c.space);
        let weaker: Vec<&Formula> = c.space.iter().filter(|g| entails_syntactic(f, g)).collect();
        prop_assert!(weaker.contains(&f));
        let g = *j.get(&weaker);
        let weakest: Vec<&Formula> = c.space.iter().filter(|h| entails_syntactic(g, h)).collect();
        let h = *k.get(&weakest);
        prop_assert!(entails_syntactic(f, h));
        let sig = c.inst.spec.signature();
        let floor = max_counts(&c.inst.spec, &[f, g]);
        for code in codes {
            let m = structure(sig, sizes(&floor, &picks), code);
            prop_assert!(!naive_eval(f, &m) || naive_eval(g, &m), "{f:?} => {g:?} fails");
        }
    }

    #[test]
    fn evaluation_matches_assignment_enumeration(
        seed in 0..SEEDS,
        i in any::<Index>(),
        picks in prop::collection::vec(1u32..=3, 2),
        code in any::<u64>(),
    ) {
        let c = corpus(seed);
        let f = i.get(&c.space);
        let sig = c.inst.spec.signature();
        let sz: Vec<u32> = picks[..sig.num_sorts()].to_vec();
        prop_assume!(sz.iter().sum::<u32>() <= 4);
        let m = structure(sig, sz, code);
        prop_assert_eq!(evaluate(f, &m).unwrap(), naive_eval(f, &m));
    }

    #[test]
    fn normalization_is_idempotent_and_meaning_preserving(
        seed in 0..SEEDS,
        quants in prop::collection::vec(any::<bool>(), 1..4),
        picks in cubes(),
        sz in prop::collection::vec(0u32..3, 2),
        codes in prop::collection::vec(any::<u64>(), 4),
    ) {
        let c = corpus(seed);
        let spec = &c.inst.spec;
        let prefix = full_prefix(spec, &quants);
        let lits = atoms(spec, &prefix);
        let matrix = raw_matrix(&lits, &picks);
        let Normalized::Formula(f) = normalize(&prefix, matrix.clone(), spec.distinct) else {
            return Ok(());
        };
        prop_assert!(is_canonical(&f));
        prop_assert_eq!(canonicalize(spec.signature(), &raw_of(&f)).unwrap(), Canonical::Accepted(f.clone()));
        prop_assert_eq!(normalize(f.prefix(), raw_of(&f).matrix, spec.distinct), Normalized::Formula(f.clone()));
        let all_used = f.prefix().len() == prefix.len();
        if all_used || !spec.distinct {
            let cubes: Vec<Cube> = matrix.into_iter().filter_map(Cube::new).collect();
            let orig = Formula::new(spec.signature(), prefix.clone(), cubes, spec.distinct).unwrap();
            let floor = spec.var_budgets();
            for code in codes {
                let m = structure(spec.signature(), sizes(&floor, &sz), code);
                prop_assert_eq!(naive_eval(&orig, &m), naive_eval(&f, &m));
            }
        }
    }

    #[test]
    fn flagged_tautologies_hold_everywhere(
        seed in 0..SEEDS,
        quants in prop::collection::vec(any::<bool>(), 1..4),
        picks in cubes(),
        unit in any::<Index>(),
        sz in prop::collection::vec(0u32..3, 2),
        codes in prop::collection::vec(any::<u64>(), 8),
    ) {
        let c = corpus(seed);
        let spec = &c.inst.spec;
        let prefix = full_prefix(spec, &quants);
        let lits = atoms(spec, &prefix);
        let l = unit.get(&lits).clone();
        let mut cubes: Vec<Cube> = raw_matrix(&lits, &picks).into_iter().filter_map(Cube::new).collect();
        cubes.push(Cube::new(vec![l.clone()]).unwrap());
        cubes.push(Cube::new(vec![l.complement()]).unwrap());
        let f = Formula::new(spec.signature(), prefix, cubes, spec.distinct).unwrap();
        prop_assert!(is_tautology(&f));
        for code in codes {
            let m = structure(spec.signature(), sizes(&spec.var_budgets(), &sz), code);
            prop_assert!(naive_eval(&f, &m));
        }
    }

    #[test]
    fn printing_round_trips(seed in 0..SEEDS, i in any::<Index>()) {
        let c = corpus(seed);
        let f = i.get(&c.space);
        let text = print_formula(&c.inst.spec, f);
        prop_assert_eq!(&parse_formula(&text, &c.inst.spec).unwrap(), f, "{}", text);
    }

    #[test]
    fn clause_filter_round_trips(seed in 0..SEEDS, picks in prop::collection::vec(any::<Index>(), 1..12)) {
        let c = corpus(seed);
        let clauses: Vec<Formula> = c.space.iter().filter(|f| f.is_clause()).cloned().collect();
        prop_assume!(!clauses.is_empty());
        let chosen: Vec<Formula> = picks.iter().map(|i| i.get(&clauses).clone()).collect();
        let filter = ClauseFilter::new(chosen);
        let doc = export_clause_filter(&c.inst.spec, &filter);
        prop_assert_eq!(import_clause_filter(&doc, &c.inst.spec).unwrap(), filter);
    }
}

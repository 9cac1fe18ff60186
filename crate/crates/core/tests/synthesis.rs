mod common;

use common::{corpus, naive_eval};
use force_core::io::{parse_config, parse_formula, parse_traces};
use force_core::logic::{entails_syntactic, Formula, Structure};
use force_core::oracle::{brute_force_oracle, diff, entailment_family, OracleConfig};
use force_core::search::{SearchSpec, SliceParams};
use force_core::slicing::DnfFilter;
use force_core::synthesis::{fo_syn, force, PruningConfig, PruningStore, SynthesisConfig};
use force_core::Error;

const TINY_CONFIG: &str = "\
var: X: X1
relations: p: X; q: X; r: X
max-literal: 2 max-or: 2 max-and: 1 max-exists: 0
";

const TINY_TRACES: &str = "\
universe X=3
sample model=1
p(0) p(1) q(1) q(2)
sample model=2
p(0) p(1) q(2) r(1)
";

fn tiny() -> (SearchSpec, Vec<Structure>) {
    let spec = parse_config(TINY_CONFIG).unwrap();
    let sigma = parse_traces(TINY_TRACES, spec.signature()).unwrap();
    (spec, sigma)
}

fn config(blocking: bool, dnf_modulo_clauses: bool) -> SynthesisConfig {
    SynthesisConfig {
        pruning: PruningConfig {
            blocking,
            dnf_modulo_clauses,
        },
        threads: None,
    }
}

#[test]
fn single_literal_slice_of_the_tiny_example_is_empty() {
    let (spec, sigma) = tiny();
    let found = fo_syn(
        &spec,
        &SliceParams::new(0, vec![1], vec![1]),
        &sigma,
        &PruningStore::new(),
    )
    .unwrap();
    assert!(found.is_empty());
}

#[test]
fn tiny_example_output() {
    let (spec, sigma) = tiny();
    let result = force(&spec, &sigma, &SynthesisConfig::default()).unwrap();
    let all = result.all();
    for text in ["forall X1:X. p(X1) | q(X1)", "forall X1:X. p(X1) | ~r(X1)"] {
        assert!(all.contains(&parse_formula(text, &spec).unwrap()), "{text}");
    }
    for f in &all {
        assert!(sigma.iter().all(|m| naive_eval(f, m)));
    }
    for (i, f) in all.iter().enumerate() {
        for (j, g) in all.iter().enumerate() {
            assert!(i == j || !entails_syntactic(f, g));
        }
    }
}

#[test]
fn universes_below_the_variable_budget_are_rejected() {
    let spec = parse_config(
        "var: s: x1, x2\nrelations: p: s\nmax-literal: 1 max-or: 1 max-and: 1 max-exists: 0\n",
    )
    .unwrap();
    let small = Structure::new(spec.signature(), vec![1]).unwrap();
    assert!(matches!(
        force(&spec, &[small], &SynthesisConfig::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn agrees_with_the_oracle_under_every_pruning_setting() {
    let ocfg = OracleConfig::default();
    for seed in 0..60 {
        let c = corpus(seed);
        let (spec, sigma) = (&c.inst.spec, &c.inst.sigma);
        let oracle = brute_force_oracle(spec, sigma, &ocfg).unwrap();
        let family = entailment_family(spec, &ocfg);
        let reference = force(spec, sigma, &config(true, true)).unwrap().all();
        let report = diff(sigma, &reference, &oracle, &family);
        assert!(report.equivalent(), "seed {seed}: {report:?}");
        for (b, d) in [(false, false), (true, false), (false, true)] {
            let other = force(spec, sigma, &config(b, d)).unwrap().all();
            assert_eq!(other, reference, "seed {seed} blocking {b} dnf filter {d}");
        }
    }
}

#[test]
fn filtered_dnf_candidates_are_unsatisfied() {
    let mut rejected = 0;
    for seed in 0..120 {
        let c = corpus(seed);
        let sigma = &c.inst.sigma;
        let holds = |f: &Formula| sigma.iter().all(|m| naive_eval(f, m));
        let clauses: Vec<Formula> = c
            .space
            .iter()
            .filter(|f| f.is_clause() && holds(f))
            .cloned()
            .collect();
        let mut filter = DnfFilter::new(&clauses, sigma);
        for f in c.space.iter().filter(|f| !f.is_clause()) {
            if !filter.admits(f) {
                rejected += 1;
                assert!(!holds(f), "seed {seed}: {f:?}");
            }
        }
    }
    assert!(rejected > 0);
}

#[test]
fn thread_count_does_not_change_the_result() {
    for seed in [2, 9, 20, 67, 73] {
        let c = corpus(seed);
        let run = |n| {
            let cfg = SynthesisConfig {
                threads: Some(n),
                ..SynthesisConfig::default()
            };
            force(&c.inst.spec, &c.inst.sigma, &cfg).unwrap().all()
        };
        let one = run(1);
        assert_eq!(run(4), one);
        assert_eq!(run(8), one);
    }
}

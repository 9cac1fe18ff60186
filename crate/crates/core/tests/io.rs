use force_core::error::Pos;
use force_core::io::{
    export_clause_filter, import_clause_filter, parse_config, parse_formula, parse_formulas,
    parse_traces, write_config, write_formulas, write_traces, ClauseFilter,
};
use force_core::Error;

const CONFIG: &str = "\
var: node: n1, n2; lock: l1
relations: lock_msg:          node, lock;  grant_msg:  node, lock;
           unlock_msg:        node, lock;  holds_lock: node, lock;
           server_holds_lock: lock
max-literal: 4 max-or: 3 max-and: 3 max-exists: 1
";

fn pos(e: Error) -> (usize, usize) {
    match e {
        Error::Parse {
            pos: Pos { line, col },
            ..
        } => (line, col),
        other => panic!("not a parse error: {other}"),
    }
}

#[test]
fn config_round_trips() {
    let spec = parse_config(CONFIG).unwrap();
    assert_eq!(spec.var_budgets(), vec![2, 1]);
    assert_eq!(
        (spec.max_literal, spec.max_or, spec.max_and, spec.max_exists),
        (4, 3, 3, 1)
    );
    assert!(spec.distinct);
    let text = write_config(&spec);
    assert!(text.starts_with("force-format v1\n"));
    assert_eq!(parse_config(&text).unwrap(), spec);
    let off = parse_config(&format!("{CONFIG}distinct: off\n")).unwrap();
    assert!(!off.distinct);
}

#[test]
fn config_errors_carry_positions() {
    let bad = CONFIG.replace("max-exists: 1", "max-exist: 1");
    assert_eq!(pos(parse_config(&bad).unwrap_err()), (5, 37));
    let bad = CONFIG.replace("server_holds_lock: lock", "server_holds_lock: key");
    assert_eq!(pos(parse_config(&bad).unwrap_err()), (4, 31));
    let bad = CONFIG.replace("max-and: 3 ", "");
    assert!(parse_config(&bad)
        .unwrap_err()
        .to_string()
        .contains("max-and"));
    let bad = format!("{CONFIG}max-or: 2\n");
    assert_eq!(pos(parse_config(&bad).unwrap_err()), (6, 1));
    assert!(parse_config(&format!("force-format v2\n{CONFIG}")).is_err());
    assert!(parse_config(&format!("# comment\nforce-format v1\n{CONFIG}")).is_ok());
}

#[test]
fn traces_round_trip_and_deduplicate() {
    let spec = parse_config(CONFIG).unwrap();
    let sig = spec.signature();
    let doc = "\
universe node=2 lock=1
sample step=0
server_holds_lock(0)
sample step=1
lock_msg(1,0) server_holds_lock(0)
sample step=2
server_holds_lock(0)
";
    let ms = parse_traces(doc, sig).unwrap();
    assert_eq!(ms.len(), 2);
    assert_eq!(parse_traces(&write_traces(sig, &ms), sig).unwrap(), ms);
}

#[test]
fn trace_errors_carry_positions() {
    let sig = parse_config(CONFIG).unwrap().signature().clone();
    let out_of_range = "universe node=2 lock=1\nsample\nlock_msg(2,0)\n";
    assert_eq!(pos(parse_traces(out_of_range, &sig).unwrap_err()), (3, 10));
    let arity = "universe node=2 lock=1\nsample\nserver_holds_lock(0,0)\n";
    assert_eq!(pos(parse_traces(arity, &sig).unwrap_err()), (3, 21));
    let orphan = "universe node=2 lock=1\nlock_msg(0,0)\n";
    assert_eq!(pos(parse_traces(orphan, &sig).unwrap_err()), (2, 1));
    assert!(parse_traces("universe node=2 lock=1\n", &sig).is_err());
    assert_eq!(
        pos(parse_traces("universe node=2\nsample\n", &sig).unwrap_err()),
        (1, 1)
    );
}

#[test]
fn formulas_round_trip() {
    let spec = parse_config(CONFIG).unwrap();
    let text = "forall N1:node, N2:node, L1:lock. ~holds_lock(N1,L1) | ~holds_lock(N2,L1)\n\
                exists N1:node. forall L1:lock. server_holds_lock(L1) | (grant_msg(N1,L1) & ~lock_msg(N1,L1))\n";
    let fs = parse_formulas(text, &spec).unwrap();
    assert_eq!(fs.len(), 2);
    assert_eq!(
        parse_formulas(&write_formulas(&spec, &fs), &spec).unwrap(),
        fs
    );
}

#[test]
fn formula_errors_carry_positions() {
    let spec = parse_config(CONFIG).unwrap();
    let err = |t: &str| pos(parse_formula(t, &spec).unwrap_err());
    assert_eq!(err("forall N1:node. lock_msg(N1,L1)"), (1, 29));
    assert_eq!(err("forall N1:node, L1:lock. held(N1,L1)"), (1, 26));
    assert_eq!(err("forall L1:lock, N1:node. lock_msg(N1,L1)"), (1, 17));
    assert_eq!(err("forall N1:lock. server_holds_lock(N1)"), (1, 11));
    assert_eq!(err("forall L1:lock. server_holds_lock(L1) &"), (1, 40));
    assert_eq!(
        err("forall L1:lock. server_holds_lock(L1) & ~server_holds_lock(L1)"),
        (1, 17)
    );
    let doc = "force-format v1\nforall L1:lock. server_holds_lock(L1)\nforall L1:lock. server_holds_lock(L1) )\n";
    assert_eq!(pos(parse_formulas(doc, &spec).unwrap_err()), (3, 39));
}

#[test]
fn clause_filter_checks_the_signature() {
    let spec = parse_config(CONFIG).unwrap();
    let clause = parse_formula(
        "forall N1:node, N2:node, L1:lock. ~holds_lock(N1,L1) | ~holds_lock(N2,L1)",
        &spec,
    )
    .unwrap();
    let second = parse_formula(
        "forall N1:node, N2:node, L1:lock. lock_msg(N1,L1) | ~holds_lock(N2,L1)",
        &spec,
    )
    .unwrap();
    let filter = ClauseFilter::new(vec![clause, second]);
    let doc = export_clause_filter(&spec, &filter);
    assert_eq!(import_clause_filter(&doc, &spec).unwrap(), filter);
    let other = parse_config(&CONFIG.replace("l1", "l9")).unwrap();
    assert!(import_clause_filter(&doc, &other).is_err());
    let tampered = doc.replace("distinct on", "distinct off");
    let loose = import_clause_filter(&tampered, &spec).unwrap();
    assert!(loose.clauses.iter().all(|c| !c.distinct()));
    assert!(import_clause_filter(&doc.replace("distinct on", "distinct maybe"), &spec).is_err());
    assert!(import_clause_filter(
        &format!("{doc}forall L1:lock. server_holds_lock(L1) & ~lock_msg(N1,L1)\n"),
        &spec
    )
    .is_err());
    let dnf = parse_formula(
        "forall N1:node, N2:node, L1:lock. (~holds_lock(N1,L1) & lock_msg(N1,L1)) | ~holds_lock(N2,L1)",
        &spec,
    )
    .unwrap();
    assert!(filter.admits(&dnf));
    let unfiltered = parse_formula(
        "forall N1:node, N2:node, L1:lock. (holds_lock(N1,L1) & lock_msg(N1,L1)) | ~lock_msg(N2,L1)",
        &spec,
    )
    .unwrap();
    assert!(!filter.admits(&unfiltered));
}

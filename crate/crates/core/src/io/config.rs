use std::collections::HashSet;

use super::lex::{tokenize_doc, Cursor, Tok, Token};
use crate::error::{Error, Result};
use crate::logic::{Relation, Signature, Sort, SortId};
use crate::search::SearchSpec;

const KEYS: [&str; 7] = [
    "var",
    "relations",
    "max-literal",
    "max-or",
    "max-and",
    "max-exists",
    "distinct",
];

/// A relation declaration: name, argument sorts, and the name's token.
type RelDecl = (String, Vec<(String, Token)>, Token);

fn is_key_start(c: &Cursor) -> bool {
    matches!(
        (c.peek(), c.peek2()),
        (Some(Token { tok: Tok::Word(w), .. }), Some(Token { tok: Tok::Punct(':'), .. }))
            if KEYS.contains(&w.as_str())
    )
}

fn name(c: &mut Cursor, what: &str) -> Result<(String, Token)> {
    let (w, t) = c.expect_word(what)?;
    if KEYS.contains(&w.as_str()) {
        return Err(t.err(format!("`{w}` is reserved and cannot be used as {what}")));
    }
    Ok((w, t))
}

/// Parses a search-space configuration:
///
/// ```text
/// var: node: n1, n2; lock: l1
/// relations: lock_msg: node, lock; server_holds_lock: lock
/// max-literal: 4 max-or: 3 max-and: 3 max-exists: 1
/// distinct: on
/// ```
///
/// `distinct` is optional and defaults to `on`.
pub fn parse_config(doc: &str) -> Result<SearchSpec> {
    let mut c = tokenize_doc(doc)?;
    let mut sorts: Vec<(String, Token)> = Vec::new();
    let mut vars: Vec<Vec<String>> = Vec::new();
    let mut rels: Vec<RelDecl> = Vec::new();
    let mut budgets: [Option<u8>; 4] = [None; 4];
    let mut distinct: Option<bool> = None;
    let mut seen: HashSet<String> = HashSet::new();

    while !c.at_end() {
        let (key, kt) = c.expect_word("a key")?;
        if !KEYS.contains(&key.as_str()) {
            return Err(kt.err(format!("unknown key `{key}`")));
        }
        c.expect_punct(':')?;
        if !seen.insert(key.clone()) {
            return Err(kt.err(format!("duplicate key `{key}`")));
        }
        match key.as_str() {
            "var" => loop {
                let (sort, st) = name(&mut c, "a sort name")?;
                if sorts.iter().any(|(s, _)| *s == sort) {
                    return Err(st.err(format!("duplicate sort `{sort}`")));
                }
                c.expect_punct(':')?;
                let mut names = Vec::new();
                loop {
                    let (v, vt) = name(&mut c, "a variable name")?;
                    let taken = vars
                        .iter()
                        .flatten()
                        .chain(&names)
                        .any(|n| n.eq_ignore_ascii_case(&v));
                    if taken {
                        return Err(vt.err(format!("duplicate variable `{v}`")));
                    }
                    names.push(v);
                    if !c.eat_punct(',') {
                        break;
                    }
                }
                sorts.push((sort, st));
                vars.push(names);
                if !c.eat_punct(';') || c.at_end() || is_key_start(&c) {
                    break;
                }
            },
            "relations" => loop {
                let (rel, rt) = name(&mut c, "a relation name")?;
                if rels.iter().any(|(r, _, _)| *r == rel) {
                    return Err(rt.err(format!("duplicate relation `{rel}`")));
                }
                c.expect_punct(':')?;
                let mut args = Vec::new();
                loop {
                    args.push(name(&mut c, "a sort name")?);
                    if !c.eat_punct(',') {
                        break;
                    }
                }
                rels.push((rel, args, rt));
                if !c.eat_punct(';') || c.at_end() || is_key_start(&c) {
                    break;
                }
            },
            "distinct" => {
                let (v, vt) = c.expect_word("`on` or `off`")?;
                distinct = Some(match v.as_str() {
                    "on" => true,
                    "off" => false,
                    _ => return Err(vt.err(format!("expected `on` or `off`, found `{v}`"))),
                });
            }
            budget => {
                let (n, nt) = c.expect_num("a number")?;
                let min = if budget == "max-exists" { 0 } else { 1 };
                if n < min || n > 255 {
                    return Err(nt.err(format!("`{budget}` must be between {min} and 255")));
                }
                let slot = ["max-literal", "max-or", "max-and", "max-exists"]
                    .iter()
                    .position(|k| *k == budget)
                    .expect("budget key");
                budgets[slot] = Some(n as u8);
            }
        }
    }

    for key in KEYS.iter().filter(|k| **k != "distinct") {
        if !seen.contains(*key) {
            return Err(c.eof_err(format!("missing required key `{key}`")));
        }
    }

    let sort_list: Vec<Sort> = sorts
        .iter()
        .map(|(s, _)| Sort { name: s.clone() })
        .collect();
    let mut relations = Vec::new();
    for (rel, args, _) in &rels {
        let mut ids = Vec::new();
        for (a, at) in args {
            match sorts.iter().position(|(s, _)| s == a) {
                Some(i) => ids.push(SortId(i as u8)),
                None => return Err(at.err(format!("undeclared sort `{a}`"))),
            }
        }
        relations.push(Relation {
            name: rel.clone(),
            args: ids,
        });
    }
    let sig = Signature::new(sort_list, relations).map_err(|e| at_start(e, &sorts))?;
    let [ml, mo, ma, me] = budgets.map(|b| b.expect("checked above"));
    SearchSpec::new(sig, vars, ml, mo, ma, me, distinct.unwrap_or(true))
        .map_err(|e| at_start(e, &sorts))
}

fn at_start(e: Error, sorts: &[(String, Token)]) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => {
            let (line, col) = sorts.first().map_or((1, 1), |(_, t)| (t.line, t.col));
            Error::parse(line, col, other.to_string())
        }
    }
}

/// Renders a search space in the format read by [`parse_config`].
pub fn write_config(spec: &SearchSpec) -> String {
    let sig = spec.signature();
    let vars = sig
        .sorts()
        .iter()
        .zip(spec.var_names())
        .map(|(s, names)| format!("{}: {}", s.name, names.join(", ")))
        .collect::<Vec<_>>()
        .join("; ");
    let rels = sig
        .relations()
        .iter()
        .map(|r| {
            let args: Vec<&str> = r.args.iter().map(|a| sig.sort(*a).name.as_str()).collect();
            format!("{}: {}", r.name, args.join(", "))
        })
        .collect::<Vec<_>>()
        .join("; ");
    format!(
        "{}\nvar: {vars}\nrelations: {rels}\nmax-literal: {} max-or: {} max-and: {} max-exists: {}\ndistinct: {}\n",
        super::lex::HEADER,
        spec.max_literal,
        spec.max_or,
        spec.max_and,
        spec.max_exists,
        if spec.distinct { "on" } else { "off" }
    )
}

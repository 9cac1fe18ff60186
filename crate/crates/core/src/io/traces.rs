use std::collections::HashSet;
use std::fmt::Write as _;

use super::lex::{content_lines, tokenize, Cursor, Tok};
use crate::error::{Error, Result};
use crate::logic::{RelId, Signature, Structure};

/// Parses a trace document against `sig`:
///
/// ```text
/// force-format v1
/// universe node=2 lock=1
/// sample step=0
/// server_holds_lock(0)
/// sample step=1
/// lock_msg(1,0) server_holds_lock(0)
/// ```
///
/// A `universe` line fixes the element counts for the samples that follow.
/// Each `sample` line starts a structure (its `key=value` fields are
/// ignored); the tuple lines after it list the true ground atoms. Repeated
/// samples are kept once, in first-occurrence order.
pub fn parse_traces(doc: &str, sig: &Signature) -> Result<Vec<Structure>> {
    let mut sizes: Option<Vec<u32>> = None;
    let mut current: Option<Structure> = None;
    let mut out: Vec<Structure> = Vec::new();
    let mut seen: HashSet<Structure> = HashSet::new();
    let mut push = |m: Structure, out: &mut Vec<Structure>| {
        if seen.insert(m.clone()) {
            out.push(m);
        }
    };
    let lines = content_lines(doc)?;
    let end = lines
        .last()
        .map_or((1, 1), |(n, l)| (*n, l.chars().count() + 1));
    for (n, line) in lines {
        let toks = tokenize(line, n)?;
        let first = toks[0].clone();
        let mut c = Cursor::new(toks, (n, line.chars().count() + 1));
        match &first.tok {
            Tok::Word(w) if w == "universe" => {
                c.next();
                let mut s: Vec<Option<u32>> = vec![None; sig.num_sorts()];
                while !c.at_end() {
                    let (name, nt) = c.expect_word("a sort name")?;
                    let id = sig
                        .sort_id(&name)
                        .ok_or_else(|| nt.err(format!("unknown sort `{name}`")))?;
                    c.expect_punct('=')?;
                    let (v, vt) = c.expect_num("a universe size")?;
                    if v == 0 || v > 1 << 16 {
                        return Err(vt.err("universe size must be between 1 and 65536"));
                    }
                    if s[id.0 as usize].replace(v as u32).is_some() {
                        return Err(nt.err(format!("sort `{name}` given twice")));
                    }
                }
                let mut full = Vec::new();
                for (i, v) in s.into_iter().enumerate() {
                    match v {
                        Some(v) => full.push(v),
                        None => {
                            return Err(first
                                .err(format!("missing size of sort `{}`", sig.sorts()[i].name)))
                        }
                    }
                }
                if let Some(m) = current.take() {
                    push(m, &mut out);
                }
                sizes = Some(full);
            }
            Tok::Word(w) if w == "sample" => {
                c.next();
                while !c.at_end() {
                    c.expect_word("a field name")?;
                    c.expect_punct('=')?;
                    match c.next() {
                        Some(t) if matches!(t.tok, Tok::Word(_) | Tok::Num(_)) => {}
                        Some(t) => {
                            return Err(
                                t.err(format!("expected a field value, found {}", t.describe()))
                            )
                        }
                        None => return Err(c.eof_err("expected a field value")),
                    }
                }
                let sz = sizes
                    .clone()
                    .ok_or_else(|| first.err("`sample` before any `universe` line"))?;
                if let Some(m) = current.take() {
                    push(m, &mut out);
                }
                current = Some(Structure::new(sig, sz).map_err(|e| first.err(e.to_string()))?);
            }
            _ => {
                let m = current
                    .as_mut()
                    .ok_or_else(|| first.err("tuple outside of a sample"))?;
                while !c.at_end() {
                    let (rel, rt) = c.expect_word("a relation name")?;
                    let id: RelId = sig
                        .rel_id(&rel)
                        .ok_or_else(|| rt.err(format!("unknown relation `{rel}`")))?;
                    let arg_sorts = sig.relation(id).args.clone();
                    c.expect_punct('(')?;
                    let mut tuple = Vec::new();
                    loop {
                        let (v, vt) = c.expect_num("an element index")?;
                        let k = tuple.len();
                        if k >= arg_sorts.len() {
                            return Err(vt.err(format!(
                                "relation `{rel}` takes {} arguments",
                                arg_sorts.len()
                            )));
                        }
                        let size = m.size(arg_sorts[k]);
                        if v >= size as u64 {
                            return Err(vt.err(format!(
                                "element {v} out of range for sort `{}` of size {size}",
                                sig.sort(arg_sorts[k]).name
                            )));
                        }
                        tuple.push(v as u32);
                        if !c.eat_punct(',') {
                            break;
                        }
                    }
                    c.expect_punct(')')?;
                    if tuple.len() != arg_sorts.len() {
                        return Err(rt.err(format!(
                            "relation `{rel}` takes {} arguments, got {}",
                            arg_sorts.len(),
                            tuple.len()
                        )));
                    }
                    m.set(id, &tuple, true).map_err(|e| rt.err(e.to_string()))?;
                }
            }
        }
    }
    if let Some(m) = current.take() {
        push(m, &mut out);
    }
    if out.is_empty() {
        return Err(Error::parse(end.0, end.1, "trace contains no samples"));
    }
    Ok(out)
}

/// Renders structures in the format read by [`parse_traces`], one line per
/// non-empty relation.
pub fn write_traces(sig: &Signature, structures: &[Structure]) -> String {
    let mut out = String::new();
    out.push_str(super::lex::HEADER);
    out.push('\n');
    let mut sizes: Option<&[u32]> = None;
    for (i, m) in structures.iter().enumerate() {
        if sizes != Some(m.sizes()) {
            out.push_str("universe");
            for (s, n) in sig.sorts().iter().zip(m.sizes()) {
                let _ = write!(out, " {}={n}", s.name);
            }
            out.push('\n');
            sizes = Some(m.sizes());
        }
        let _ = writeln!(out, "sample index={i}");
        for (r, rel) in sig.relations().iter().enumerate() {
            let tuples = m.tuples(RelId(r as u8));
            if tuples.is_empty() {
                continue;
            }
            let line: Vec<String> = tuples
                .iter()
                .map(|t| {
                    let args: Vec<String> = t.iter().map(u32::to_string).collect();
                    format!("{}({})", rel.name, args.join(","))
                })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

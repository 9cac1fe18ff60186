use super::lex::{content_lines, tokenize, Cursor, Tok};
use crate::error::Result;
use crate::logic::{Binding, Cube, Formula, Literal, Quantifier};
use crate::search::SearchSpec;

/// Renders `f` as text, e.g.
/// `forall N1:node, N2:node. exists L1:lock. (~lock_msg(N1,L1) & grant_msg(N2,L1)) | ~unlock_msg(N1,L1)`.
pub fn print_formula(spec: &SearchSpec, f: &Formula) -> String {
    let sig = spec.signature();
    let mut out = String::new();
    let mut i = 0;
    let prefix = f.prefix();
    while i < prefix.len() {
        let q = prefix[i].quant;
        let mut j = i;
        let mut binders = Vec::new();
        while j < prefix.len() && prefix[j].quant == q {
            let v = prefix[j].var;
            binders.push(format!("{}:{}", spec.var_display(v), sig.sort(v.sort).name));
            j += 1;
        }
        out.push_str(match q {
            Quantifier::Forall => "forall ",
            Quantifier::Exists => "exists ",
        });
        out.push_str(&binders.join(", "));
        out.push_str(". ");
        i = j;
    }
    let lit = |l: &Literal| {
        let args: Vec<String> = l.args.iter().map(|v| spec.var_display(*v)).collect();
        format!(
            "{}{}({})",
            if l.negated { "~" } else { "" },
            sig.relation(l.rel).name,
            args.join(",")
        )
    };
    let many = f.matrix().len() > 1;
    let cubes: Vec<String> = f
        .matrix()
        .iter()
        .map(|c| {
            let lits: Vec<String> = c.lits().iter().map(lit).collect();
            if many && lits.len() > 1 {
                format!("({})", lits.join(" & "))
            } else {
                lits.join(" & ")
            }
        })
        .collect();
    out.push_str(&cubes.join(" | "));
    out
}

/// Parses one formula. Binders must follow the declaration order of sorts
/// and variables; cubes keep their written order, literals inside a cube
/// are sorted.
pub fn parse_formula(text: &str, spec: &SearchSpec) -> Result<Formula> {
    parse_formula_at(text, 1, spec)
}

fn parse_formula_at(text: &str, line: usize, spec: &SearchSpec) -> Result<Formula> {
    let toks = tokenize(text, line)?;
    let mut c = Cursor::new(toks, (line, text.chars().count() + 1));
    let sig = spec.signature();
    let mut prefix: Vec<Binding> = Vec::new();
    loop {
        let quant = match c.peek().map(|t| &t.tok) {
            Some(Tok::Word(w)) if w == "forall" => Quantifier::Forall,
            Some(Tok::Word(w)) if w == "exists" => Quantifier::Exists,
            _ => break,
        };
        c.next();
        loop {
            let (name, nt) = c.expect_word("a variable")?;
            let var = spec
                .var_by_display(&name)
                .ok_or_else(|| nt.err(format!("unknown variable `{name}`")))?;
            c.expect_punct(':')?;
            let (sort, st) = c.expect_word("a sort")?;
            let sid = sig
                .sort_id(&sort)
                .ok_or_else(|| st.err(format!("unknown sort `{sort}`")))?;
            if sid != var.sort {
                return Err(st.err(format!(
                    "variable `{name}` has sort `{}`",
                    sig.sort(var.sort).name
                )));
            }
            if prefix.iter().any(|b| b.var == var) {
                return Err(nt.err(format!("variable `{name}` bound twice")));
            }
            if prefix.last().is_some_and(|b| b.var > var) {
                return Err(
                    nt.err("binders must follow the declaration order of sorts and variables")
                );
            }
            prefix.push(Binding { var, quant });
            if !c.eat_punct(',') {
                break;
            }
        }
        c.expect_punct('.')?;
    }
    let mut matrix = Vec::new();
    loop {
        let open = c.eat_punct('(');
        let start = c.peek().cloned();
        let mut lits = Vec::new();
        loop {
            let negated = c.eat_punct('~');
            let (rel, rt) = c.expect_word("a relation")?;
            let rid = sig
                .rel_id(&rel)
                .ok_or_else(|| rt.err(format!("unknown relation `{rel}`")))?;
            c.expect_punct('(')?;
            let mut args = Vec::new();
            loop {
                let (name, nt) = c.expect_word("a variable")?;
                let var = spec
                    .var_by_display(&name)
                    .ok_or_else(|| nt.err(format!("unknown variable `{name}`")))?;
                if !prefix.iter().any(|b| b.var == var) {
                    return Err(nt.err(format!("variable `{name}` is not bound")));
                }
                let k = args.len();
                let expected = sig.relation(rid).args.get(k).copied();
                if expected != Some(var.sort) {
                    return Err(nt.err(format!(
                        "argument {} of `{rel}` has the wrong sort or arity",
                        k + 1
                    )));
                }
                args.push(var);
                if !c.eat_punct(',') {
                    break;
                }
            }
            c.expect_punct(')')?;
            if args.len() != sig.relation(rid).arity() {
                return Err(rt.err(format!(
                    "`{rel}` takes {} arguments",
                    sig.relation(rid).arity()
                )));
            }
            lits.push(if negated {
                Literal::neg(rid, &args)
            } else {
                Literal::pos(rid, &args)
            });
            if !c.eat_punct('&') {
                break;
            }
        }
        if open {
            c.expect_punct(')')?;
        }
        let cube = Cube::new(lits).ok_or_else(|| {
            start
                .map(|t| t.err("cube contains a literal and its negation"))
                .unwrap_or_else(|| c.eof_err("empty cube"))
        })?;
        matrix.push(cube);
        if !c.eat_punct('|') {
            break;
        }
    }
    if let Some(t) = c.next() {
        return Err(t.err(format!("unexpected {}", t.describe())));
    }
    Formula::new(sig, prefix, matrix, spec.distinct)
}

/// Parses a formula document: one formula per line, `#` comments, optional
/// version header.
pub fn parse_formulas(doc: &str, spec: &SearchSpec) -> Result<Vec<Formula>> {
    content_lines(doc)?
        .into_iter()
        .map(|(n, line)| parse_formula_at(line, n, spec))
        .collect()
}

pub fn write_formulas(spec: &SearchSpec, formulas: &[Formula]) -> String {
    let mut out = String::from(super::lex::HEADER);
    out.push('\n');
    for f in formulas {
        out.push_str(&print_formula(spec, f));
        out.push('\n');
    }
    out
}

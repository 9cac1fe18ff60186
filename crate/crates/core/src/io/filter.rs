use super::formula_text::{parse_formula, print_formula};
use super::lex::{content_lines, HEADER};
use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::search::SearchSpec;
use crate::slicing::DnfFilter;

/// A set of satisfied clauses exchanged between tools, together with the
/// search space it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseFilter {
    pub clauses: Vec<Formula>,
}

impl ClauseFilter {
    /// Canonically sorted, duplicate-free.
    pub fn new(mut clauses: Vec<Formula>) -> Self {
        clauses.sort();
        clauses.dedup();
        ClauseFilter { clauses }
    }

    /// Whether a candidate survives: every clause obtained by picking one
    /// literal per cube must be entailed by a listed clause. Under distinct
    /// semantics, picks that leave a variable unused are not checked.
    pub fn admits(&self, f: &Formula) -> bool {
        DnfFilter::new(&self.clauses, &[]).admits(f)
    }
}

/// Digest identifying the signature and variable names a filter belongs to.
pub fn spec_digest(spec: &SearchSpec) -> String {
    let vars: Vec<String> = spec.var_names().iter().map(|v| v.join(",")).collect();
    spec.signature()
        .digest(&format!("vars {}\n", vars.join(";")))
}

/// Writes the exchange document:
///
/// ```text
/// force-format v1
/// clause-filter
/// signature <sha-256 hex>
/// distinct on
/// forall X1:X. p(X1) | q(X1)
/// ```
pub fn export_clause_filter(spec: &SearchSpec, filter: &ClauseFilter) -> String {
    let mut out = format!(
        "{HEADER}\nclause-filter\nsignature {}\ndistinct {}\n",
        spec_digest(spec),
        if spec.distinct { "on" } else { "off" }
    );
    for c in &filter.clauses {
        out.push_str(&print_formula(spec, c));
        out.push('\n');
    }
    out
}

pub fn import_clause_filter(doc: &str, spec: &SearchSpec) -> Result<ClauseFilter> {
    let lines = content_lines(doc)?;
    let mut it = lines.into_iter();
    let mut header = |expect: &str| -> Result<(usize, String)> {
        match it.next() {
            Some((n, l)) => {
                let l = l.trim();
                match l.strip_prefix(expect) {
                    Some(rest) => Ok((n, rest.trim().to_string())),
                    None => Err(Error::parse(n, 1, format!("expected `{expect}`"))),
                }
            }
            None => Err(Error::parse(1, 1, format!("missing `{expect}` line"))),
        }
    };
    let (n, rest) = header("clause-filter")?;
    if !rest.is_empty() {
        return Err(Error::parse(n, 1, "unexpected text after `clause-filter`"));
    }
    let (n, digest) = header("signature")?;
    if digest != spec_digest(spec) {
        return Err(Error::parse(
            n,
            1,
            "signature digest does not match the search space",
        ));
    }
    let (n, d) = header("distinct")?;
    let distinct = match d.as_str() {
        "on" => true,
        "off" => false,
        _ => {
            return Err(Error::parse(
                n,
                1,
                "expected `distinct on` or `distinct off`",
            ))
        }
    };
    let spec = spec.with_distinct(distinct);
    let mut clauses = Vec::new();
    for (n, line) in it {
        let f = parse_formula(line, &spec).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(n, pos.col, msg),
            other => Error::parse(n, 1, other.to_string()),
        })?;
        if !f.is_clause() {
            return Err(Error::parse(n, 1, "filter entries must be clauses"));
        }
        clauses.push(f);
    }
    Ok(ClauseFilter::new(clauses))
}

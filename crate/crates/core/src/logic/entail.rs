//! Syntactic entailment by substitution and weakening.
//!
//! `strong` entails `weak` when some sort-preserving map θ from strong's
//! prefix positions to weak's prefix positions exists such that:
//!
//! * every existential of `strong` lands on an existential of `weak`
//!   (universals may land on either);
//! * θ is injective under distinct semantics; otherwise only universals may
//!   share an image;
//! * for an existential `y` of `strong`, every variable before `y` in strong's
//!   prefix lands before θ(y), so its witness can still be computed;
//! * under distinct semantics, every same-sort variable before θ(y) in weak's
//!   prefix is the image of a variable before `y`, so the witness cannot
//!   collide with an element chosen earlier in `weak`;
//! * every cube of `strong`, renamed by θ, contains some cube of `weak`.
//!
//! Variables of `weak` outside the image of θ are free extensions. The
//! relation is reflexive and transitive, and sound on structures whose
//! per-sort universes are at least as large as both formulas' per-sort
//! variable counts.

use smallvec::SmallVec;

use super::formula::{Cube, Formula, Literal, Quantifier};

pub fn entails_syntactic(strong: &Formula, weak: &Formula) -> bool {
    if strong.distinct() != weak.distinct() {
        return false;
    }
    if strong.num_exists() > weak.num_exists() {
        return false;
    }
    if strong.distinct() {
        let n = strong
            .prefix()
            .iter()
            .chain(weak.prefix())
            .map(|b| b.var.sort.0 as usize + 1)
            .max()
            .unwrap_or(0);
        let (s, w) = (strong.var_counts(n), weak.var_counts(n));
        if s.iter().zip(&w).any(|(a, b)| a > b) {
            return false;
        }
    }
    let weak_masks: SmallVec<[u128; 8]> = weak.matrix().iter().map(Cube::relpol_mask).collect();
    for c in strong.matrix() {
        let m = c.relpol_mask();
        if !weak_masks.iter().any(|wm| wm & !m == 0) {
            return false;
        }
    }
    let mut theta: SmallVec<[usize; 8]> = SmallVec::new();
    search(strong, weak, &mut theta)
}

fn search(strong: &Formula, weak: &Formula, theta: &mut SmallVec<[usize; 8]>) -> bool {
    let i = theta.len();
    let sp = strong.prefix();
    if i == sp.len() {
        return matrix_weakens(strong, weak, theta);
    }
    let wp = weak.prefix();
    let sb = sp[i];
    for (j, wb) in wp.iter().enumerate() {
        if wb.var.sort != sb.var.sort {
            continue;
        }
        if sb.quant == Quantifier::Exists && wb.quant != Quantifier::Exists {
            continue;
        }
        if let Some(k) = theta.iter().position(|&t| t == j) {
            if strong.distinct()
                || sb.quant == Quantifier::Exists
                || sp[k].quant == Quantifier::Exists
            {
                continue;
            }
        }
        if sb.quant == Quantifier::Exists {
            if theta.iter().any(|&t| t >= j) {
                continue;
            }
            if strong.distinct()
                && (0..j).any(|v| wp[v].var.sort == wb.var.sort && !theta.contains(&v))
            {
                continue;
            }
        }
        theta.push(j);
        if search(strong, weak, theta) {
            return true;
        }
        theta.pop();
    }
    false
}

fn matrix_weakens(strong: &Formula, weak: &Formula, theta: &[usize]) -> bool {
    let sp = strong.prefix();
    let wp = weak.prefix();
    strong.matrix().iter().all(|c| {
        let mut image: SmallVec<[Literal; 8]> = c
            .lits()
            .iter()
            .map(|l| {
                l.rename(|v| {
                    let p = sp.iter().position(|b| b.var == v).expect("bound variable");
                    wp[theta[p]].var
                })
            })
            .collect();
        image.sort();
        image.dedup();
        weak.matrix()
            .iter()
            .any(|d| d.lits().iter().all(|l| image.binary_search(l).is_ok()))
    })
}

//! Greedy front-to-back baseline.
//!
//! This is a reconstruction of the usual greedy scheme for lexicographic
//! learners, not a port of any particular published implementation: keep the
//! examples no chosen attribute has decided yet, and repeatedly append the
//! unused attribute whose optimal local order decides the most of them
//! correctly. Ties go to the lowest attribute index. Once every example is
//! decided, the remaining attributes follow in index order with their values
//! in index order.

use crate::dp::{build_count_matrix, lpo_from_counts};
use crate::error::Result;
use crate::model::{Example, LpList, Schema};

pub fn greedy_lpl(schema: &Schema, examples: &[Example]) -> Result<LpList> {
    let n = schema.len();
    let mut undecided: Vec<Example> = examples.to_vec();
    let mut used = vec![false; n];
    let mut entries = Vec::with_capacity(n);

    while entries.len() < n && !undecided.is_empty() {
        let mut best: Option<(usize, usize, Vec<u8>)> = None;
        for attr in (0..n).filter(|&a| !used[a]) {
            // ties on `attr` never enter the count matrix
            let lpo = lpo_from_counts(&build_count_matrix(schema, &undecided, attr)?)?;
            if best.as_ref().is_none_or(|b| lpo.count > b.1) {
                best = Some((attr, lpo.count, lpo.order));
            }
        }
        let (attr, _, order) = best.expect("an unused attribute remains");
        used[attr] = true;
        entries.push((attr, order));
        undecided.retain(|e| e.alpha.get(attr) == e.beta.get(attr));
    }
    for attr in (0..n).filter(|&a| !used[a]) {
        entries.push((attr, (0..schema.domain_size(attr) as u8).collect()));
    }
    LpList::new(schema, entries)
}

//! Exact learning by dynamic programming over subsets.
//!
//! Two levels share one shape. Within an attribute, the best total order on a
//! value set `S` ends with some least-preferred value `i`; every example
//! preferring another value of `S` to `i` is then satisfied, so
//!
//! ```text
//! C(S) = max_{i in S} C(S - {i}) + sum_{j in S - {i}} M[j][i]
//! ```
//!
//! Across attributes, the best list over an attribute set `S` ends with some
//! attribute `X`. The prefix over `S - {X}` decides every example that differs
//! somewhere on `S - {X}` regardless of where `X` goes, and `X` only sees the
//! examples tying on the whole prefix, so
//!
//! ```text
//! T(S) = max_{X in S} T(S - {X}) + C(Dom(X), {e : e ties on S - {X}})
//! ```
//!
//! Both tables are indexed by subset bitmasks. Ties between candidates for
//! the last position go to the highest index, which leaves lower indices
//! earlier in the result; with no information at all the result is the
//! ascending order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Example, LpList, Schema};

pub const MAX_DP_ATTRIBUTES: usize = 24;
pub const MAX_DP_DOMAIN: usize = 24;

/// `M[i][j]`: examples preferring value `i` to value `j` on one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    size: usize,
    counts: Vec<usize>,
}

impl CountMatrix {
    pub fn zeros(size: usize) -> Self {
        CountMatrix {
            size,
            counts: vec![0; size * size],
        }
    }

    /// Builds a matrix from explicit rows; the diagonal must be zero.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let size = rows.len();
        let mut m = CountMatrix::zeros(size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::invalid("count matrix must be square"));
            }
            if row[i] != 0 {
                return Err(Error::invalid("count matrix diagonal must be zero"));
            }
            m.counts[i * size..(i + 1) * size].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.size + j]
    }

    #[inline]
    fn bump(&mut self, i: usize, j: usize) {
        if i != j {
            self.counts[i * self.size + j] += 1;
        }
    }

    /// Sum over all off-diagonal cells.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Examples satisfied by placing values in `order` (most preferred first).
    pub fn agreement(&self, order: &[u8]) -> usize {
        let mut total = 0;
        for (p, &i) in order.iter().enumerate() {
            for &j in &order[p + 1..] {
                total += self.get(i as usize, j as usize);
            }
        }
        total
    }
}

/// An optimal local order for one attribute and how many examples it decides
/// correctly on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpoResult {
    pub order: Vec<u8>,
    pub count: usize,
}

/// Value table `T` and choice table `L` indexed by subset bitmask.
///
/// `last(S)` is the element placed last in the optimal arrangement of `S`;
/// the rest of the arrangement is the optimal one of `S` without it.
#[derive(Debug, Clone)]
pub struct DpTables {
    size: usize,
    values: Vec<usize>,
    last: Vec<u8>,
}

impl DpTables {
    fn new(size: usize) -> Self {
        DpTables {
            size,
            values: vec![0; 1 << size],
            last: vec![0; 1 << size],
        }
    }

    /// Number of elements in the ground set.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.size) - 1
    }

    pub fn value(&self, mask: usize) -> usize {
        self.values[mask]
    }

    pub fn last(&self, mask: usize) -> Option<usize> {
        (mask != 0).then(|| self.last[mask] as usize)
    }

    /// The optimal arrangement of `mask`, first element first.
    pub fn arrangement(&self, mut mask: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            let i = self.last[mask] as usize;
            out.push(i);
            mask &= !(1 << i);
        }
        out.reverse();
        out
    }
}

fn bits(mask: usize) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

fn check_domain(size: usize) -> Result<()> {
    if size > MAX_DP_DOMAIN {
        return Err(Error::TooLarge {
            what: "domain size",
            got: size,
            limit: MAX_DP_DOMAIN,
        });
    }
    Ok(())
}

fn check_examples(schema: &Schema, examples: &[Example]) -> Result<()> {
    for (k, e) in examples.iter().enumerate() {
        for o in [&e.alpha, &e.beta] {
            if o.len() != schema.len() {
                return Err(Error::invalid(format!(
                    "example {k} has {} values, schema has {} attributes",
                    o.len(),
                    schema.len()
                )));
            }
            for (i, &v) in o.values().iter().enumerate() {
                if v as usize >= schema.domain_size(i) {
                    return Err(Error::invalid(format!(
                        "example {k}: value index {v} out of range for attribute `{}`",
                        schema.attribute(i).name
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn build_count_matrix(
    schema: &Schema,
    examples: &[Example],
    attr: usize,
) -> Result<CountMatrix> {
    if attr >= schema.len() {
        return Err(Error::invalid(format!(
            "attribute index {attr} out of range (schema has {})",
            schema.len()
        )));
    }
    check_examples(schema, examples)?;
    let mut m = CountMatrix::zeros(schema.domain_size(attr));
    for e in examples {
        m.bump(e.alpha.get(attr) as usize, e.beta.get(attr) as usize);
    }
    Ok(m)
}

/// Runs the value-level recurrence on a count matrix.
pub fn lpo_tables(m: &CountMatrix) -> Result<DpTables> {
    let x = m.size();
    check_domain(x)?;
    let mut t = DpTables::new(x);
    for mask in 1..(1usize << x) {
        if mask.count_ones() == 1 {
            t.last[mask] = mask.trailing_zeros() as u8;
            continue;
        }
        let mut best = (0usize, 0u8);
        for i in bits(mask) {
            let rest = mask & !(1 << i);
            let gain = t.values[rest] + bits(rest).map(|j| m.get(j, i)).sum::<usize>();
            // `>=`: the highest index wins ties for the last place
            if gain >= best.0 {
                best = (gain, i as u8);
            }
        }
        t.values[mask] = best.0;
        t.last[mask] = best.1;
    }
    Ok(t)
}

pub fn lpo_from_counts(m: &CountMatrix) -> Result<LpoResult> {
    let t = lpo_tables(m)?;
    let order = t
        .arrangement(t.full_mask())
        .into_iter()
        .map(|v| v as u8)
        .collect();
    Ok(LpoResult {
        order,
        count: t.value(t.full_mask()),
    })
}

/// Optimal local preference order of one attribute for the given examples.
pub fn compute_lpo(schema: &Schema, examples: &[Example], attr: usize) -> Result<LpoResult> {
    lpo_from_counts(&build_count_matrix(schema, examples, attr)?)
}

/// Compact projection of the examples that differ on one attribute.
#[derive(Clone, Copy)]
struct Projected {
    diff: u32,
    alpha: u8,
    beta: u8,
}

fn project(schema: &Schema, examples: &[Example]) -> Vec<Vec<Projected>> {
    let diffs: Vec<u32> = examples.iter().map(|e| e.diff_mask() as u32).collect();
    (0..schema.len())
        .map(|attr| {
            examples
                .iter()
                .zip(&diffs)
                .filter(|(_, &d)| d & (1 << attr) != 0)
                .map(|(e, &diff)| Projected {
                    diff,
                    alpha: e.alpha.get(attr),
                    beta: e.beta.get(attr),
                })
                .collect()
        })
        .collect()
}

/// Count matrix of `attr` over the examples tying on every attribute in `prefix`.
fn tied_counts(projected: &[Projected], size: usize, prefix: usize) -> CountMatrix {
    let prefix = prefix as u32;
    let mut m = CountMatrix::zeros(size);
    for p in projected.iter().filter(|p| p.diff & prefix == 0) {
        m.bump(p.alpha as usize, p.beta as usize);
    }
    m
}

/// Result of the attribute-level recurrence.
#[derive(Debug, Clone)]
pub struct LplSolution {
    pub model: LpList,
    /// Training examples satisfied by `model`; equals `tables.value(full)`.
    pub count: usize,
    /// Attribute-level tables: `value(S)` is the best count of any list over `S`.
    pub tables: DpTables,
}

/// Optimal full-length LP-list for the given examples.
pub fn compute_lpl(schema: &Schema, examples: &[Example]) -> Result<LplSolution> {
    let n = schema.len();
    if n > MAX_DP_ATTRIBUTES {
        return Err(Error::TooLarge {
            what: "attribute count",
            got: n,
            limit: MAX_DP_ATTRIBUTES,
        });
    }
    check_domain(schema.max_domain_size())?;
    check_examples(schema, examples)?;

    let projected = project(schema, examples);
    let best_last = |mask: usize, t: &DpTables| -> Result<(usize, u8)> {
        let mut best = (0usize, 0u8);
        for attr in bits(mask) {
            let rest = mask & !(1 << attr);
            let m = tied_counts(&projected[attr], schema.domain_size(attr), rest);
            let gain = t.values[rest] + lpo_tables(&m)?.values[(1 << m.size()) - 1];
            if gain >= best.0 {
                best = (gain, attr as u8);
            }
        }
        Ok(best)
    };

    let mut t = DpTables::new(n);
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for mask in 1..(1usize << n) {
        levels[mask.count_ones() as usize].push(mask);
    }
    for (k, level) in levels.iter().enumerate().skip(1) {
        log::debug!("subset level {k}/{n}: {} subsets", level.len());
        // every subset of this level only reads strictly smaller subsets
        let results: Vec<(usize, u8)> = level
            .par_iter()
            .map(|&mask| best_last(mask, &t))
            .collect::<Result<_>>()?;
        for (&mask, (value, last)) in level.iter().zip(results) {
            t.values[mask] = value;
            t.last[mask] = last;
        }
    }

    let mut prefix = 0usize;
    let mut entries = Vec::with_capacity(n);
    for attr in t.arrangement(t.full_mask()) {
        let m = tied_counts(&projected[attr], schema.domain_size(attr), prefix);
        entries.push((attr, lpo_from_counts(&m)?.order));
        prefix |= 1 << attr;
    }
    let model = LpList::new(schema, entries)?;
    let count = t.value(t.full_mask());
    let recount = model.count_satisfied(examples)?;
    if recount != count {
        return Err(Error::Internal(format!(
            "table optimum {count} differs from recount {recount}"
        )));
    }
    Ok(LplSolution {
        model,
        count,
        tables: t,
    })
}

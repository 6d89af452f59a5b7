//! Exhaustive reference solvers for small instances, and the randomized
//! suite that checks the learners against them.

use itertools::Itertools;
use rand::Rng as _;
use serde::Serialize;

use crate::datagen::{random_object, uniform_schema};
use crate::dp::{compute_lpl, compute_lpo};
use crate::error::{Error, Result};
use crate::model::{Example, LpList, Schema};
use crate::rng::{self, Rng};

pub const MAX_BRUTE_LPO_DOMAIN: usize = 8;
pub const MAX_BRUTE_LPL_ATTRIBUTES: usize = 4;
pub const MAX_BRUTE_LPL_DOMAIN: usize = 4;

/// Tries every order of one attribute's domain and keeps the first best one
/// in lexicographic order.
pub fn brute_lpo(schema: &Schema, examples: &[Example], attr: usize) -> Result<(Vec<u8>, usize)> {
    if attr >= schema.len() {
        return Err(Error::invalid(format!(
            "attribute index {attr} out of range"
        )));
    }
    let x = schema.domain_size(attr);
    if x > MAX_BRUTE_LPO_DOMAIN {
        return Err(Error::TooLarge {
            what: "domain size for exhaustive search",
            got: x,
            limit: MAX_BRUTE_LPO_DOMAIN,
        });
    }
    let mut best: Option<(Vec<u8>, usize)> = None;
    for order in (0..x as u8).permutations(x) {
        let mut rank = vec![0; x];
        for (p, &v) in order.iter().enumerate() {
            rank[v as usize] = p;
        }
        let count = examples
            .iter()
            .filter(|e| {
                let (a, b) = (e.alpha.get(attr) as usize, e.beta.get(attr) as usize);
                a != b && rank[a] < rank[b]
            })
            .count();
        if best.as_ref().is_none_or(|b| count > b.1) {
            best = Some((order, count));
        }
    }
    Ok(best.expect("at least one permutation"))
}

fn lists_over(schema: &Schema, attrs: Vec<usize>) -> impl Iterator<Item = LpList> + '_ {
    let k = attrs.len();
    attrs.into_iter().permutations(k).flat_map(move |perm| {
        let value_orders = perm
            .iter()
            .map(|&a| {
                let x = schema.domain_size(a) as u8;
                (0..x).permutations(x as usize).collect::<Vec<_>>()
            })
            .multi_cartesian_product();
        let perm2 = perm.clone();
        value_orders.map(move |orders| {
            let entries = perm2.iter().copied().zip(orders).collect();
            LpList::new(schema, entries).expect("enumerated lists are valid")
        })
    })
}

/// Tries every full-length list (and, with `include_sublists`, every list
/// over a nonempty proper subset as well). Full lists are visited first, so
/// they win ties.
pub fn brute_lpl(
    schema: &Schema,
    examples: &[Example],
    include_sublists: bool,
) -> Result<(LpList, usize)> {
    let n = schema.len();
    if n > MAX_BRUTE_LPL_ATTRIBUTES {
        return Err(Error::TooLarge {
            what: "attribute count for exhaustive search",
            got: n,
            limit: MAX_BRUTE_LPL_ATTRIBUTES,
        });
    }
    if schema.max_domain_size() > MAX_BRUTE_LPL_DOMAIN {
        return Err(Error::TooLarge {
            what: "domain size for exhaustive search",
            got: schema.max_domain_size(),
            limit: MAX_BRUTE_LPL_DOMAIN,
        });
    }
    let full = (1usize << n) - 1;
    let mut subsets = vec![full];
    if include_sublists {
        subsets.extend(1..full);
    }
    let mut best: Option<(LpList, usize)> = None;
    for mask in subsets {
        let attrs: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        for list in lists_over(schema, attrs) {
            let count = list.count_satisfied(examples)?;
            if best.as_ref().is_none_or(|b| count > b.1) {
                best = Some((list, count));
            }
        }
    }
    Ok(best.expect("at least one list"))
}

/// A schema of `n` attributes with `x` values and `m` pairs of independent
/// uniform objects in random orientation.
pub fn random_instance(
    n: usize,
    x: usize,
    m: usize,
    rng: &mut Rng,
) -> Result<(Schema, Vec<Example>)> {
    let schema = uniform_schema(n, x)?;
    let examples = (0..m)
        .map(|_| {
            let a = random_object(&schema, rng);
            let b = random_object(&schema, rng);
            Example::new(a, b)
        })
        .collect::<Result<_>>()?;
    Ok((schema, examples))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub lpo_instances: usize,
    pub lpl_instances: usize,
    /// How many of the LPL instances also run the sublist search.
    pub sublist_instances: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            lpo_instances: 200,
            lpl_instances: 100,
            sublist_instances: 50,
        }
    }
}

fn tally(name: &'static str, outcomes: impl Iterator<Item = Result<bool>>) -> Result<CheckResult> {
    let mut r = CheckResult {
        name,
        passed: 0,
        failed: 0,
    };
    for ok in outcomes {
        if ok? {
            r.passed += 1;
        } else {
            r.failed += 1;
        }
    }
    Ok(r)
}

/// Compares the local-order learner with [`brute_lpo`] on instances with
/// `x` in 2..=5 and up to 200 examples.
pub fn check_lpo(seed: u64, instances: usize) -> Result<CheckResult> {
    tally(
        "lpo-vs-brute",
        (0..instances).map(|i| {
            let mut r = rng::stream(seed, &[0x1b0, i as u64]);
            let x = r.gen_range(2..=5);
            let m = r.gen_range(0..=200);
            let (schema, examples) = random_instance(1, x, m, &mut r)?;
            let (_, best) = brute_lpo(&schema, &examples, 0)?;
            Ok(compute_lpo(&schema, &examples, 0)?.count == best)
        }),
    )
}

/// Compares the list learner with [`brute_lpl`] on instances with `n` in
/// {2, 3}, `x` in {2, 3} and up to 100 examples. The first
/// `sublist_instances` also check that allowing shorter lists does not
/// raise the optimum.
pub fn check_lpl(
    seed: u64,
    instances: usize,
    sublist_instances: usize,
) -> Result<Vec<CheckResult>> {
    let mut full = Vec::new();
    let mut sub = Vec::new();
    for i in 0..instances {
        let mut r = rng::stream(seed, &[0x1b1, i as u64]);
        let n = r.gen_range(2..=3);
        let x = r.gen_range(2..=3);
        let m = r.gen_range(0..=100);
        let (schema, examples) = random_instance(n, x, m, &mut r)?;
        let (_, best) = brute_lpl(&schema, &examples, false)?;
        full.push(Ok(compute_lpl(&schema, &examples)?.count == best));
        if i < sublist_instances {
            let (_, best_any) = brute_lpl(&schema, &examples, true)?;
            sub.push(Ok(best_any == best));
        }
    }
    Ok(vec![
        tally("lpl-vs-brute", full.into_iter())?,
        tally("sublists-vs-full", sub.into_iter())?,
    ])
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = vec![check_lpo(cfg.seed, cfg.lpo_instances)?];
    out.extend(check_lpl(
        cfg.seed,
        cfg.lpl_instances,
        cfg.sublist_instances,
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::build_count_matrix;

    #[test]
    fn two_values_pick_the_majority() {
        let mut r = rng::stream(1, &[]);
        let (schema, examples) = random_instance(1, 2, 40, &mut r).unwrap();
        let m = build_count_matrix(&schema, &examples, 0).unwrap();
        let (_, count) = brute_lpo(&schema, &examples, 0).unwrap();
        assert_eq!(count, m.get(0, 1).max(m.get(1, 0)));
    }

    #[test]
    fn empty_examples() {
        let schema = uniform_schema(2, 3).unwrap();
        assert_eq!(brute_lpo(&schema, &[], 1).unwrap(), (vec![0, 1, 2], 0));
        let (list, count) = brute_lpl(&schema, &[], false).unwrap();
        assert_eq!(count, 0);
        assert!(list.is_full());
    }

    #[test]
    fn size_limits() {
        let schema = uniform_schema(1, 9).unwrap();
        assert!(matches!(
            brute_lpo(&schema, &[], 0),
            Err(Error::TooLarge { .. })
        ));
        let schema = uniform_schema(5, 2).unwrap();
        assert!(matches!(
            brute_lpl(&schema, &[], false),
            Err(Error::TooLarge { .. })
        ));
        let schema = uniform_schema(2, 5).unwrap();
        assert!(matches!(
            brute_lpl(&schema, &[], true),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn single_attribute_lpl_is_brute_lpo() {
        let mut r = rng::stream(2, &[]);
        let (schema, examples) = random_instance(1, 4, 60, &mut r).unwrap();
        let (order, count) = brute_lpo(&schema, &examples, 0).unwrap();
        let (list, lcount) = brute_lpl(&schema, &examples, false).unwrap();
        assert_eq!(count, lcount);
        assert_eq!(list.entries()[0].order(), &order[..]);
    }

    #[test]
    fn enumeration_sizes() {
        let schema = uniform_schema(3, 3).unwrap();
        assert_eq!(lists_over(&schema, vec![0, 1, 2]).count(), 6 * 6 * 6 * 6);
        assert_eq!(lists_over(&schema, vec![1]).count(), 6);
    }

    #[test]
    fn small_suite_passes() {
        let cfg = SuiteConfig {
            seed: 3,
            lpo_instances: 30,
            lpl_instances: 10,
            sublist_instances: 5,
        };
        let results = run_suite(&cfg).unwrap();
        assert_eq!(results.len(), 3);
        for r in &results {
            assert!(r.ok(), "{r:?}");
        }
        assert_eq!(results[0].passed, 30);
        assert_eq!(results[2].passed, 5);
    }
}

//! Synthetic data: a hidden LP-list, examples it orients, label noise and a
//! train/test split.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Attribute, Example, LpList, Object, Schema};
use crate::rng::{self, tag, Rng};

/// Attribute and value names are single letters, so at most 26 of each.
pub const MAX_GENERATED: usize = 26;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    /// Attribute count.
    pub n: usize,
    /// Values per attribute.
    pub x: usize,
    /// Example count.
    pub m: usize,
    /// Fraction of examples whose orientation is flipped.
    pub noise: f64,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n: 10,
            x: 5,
            m: 1000,
            noise: 0.15,
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > MAX_GENERATED {
            return Err(Error::invalid(format!(
                "attribute count n={} must be in 1..={MAX_GENERATED}",
                self.n
            )));
        }
        if self.x < 2 || self.x > MAX_GENERATED {
            return Err(Error::invalid(format!(
                "domain size x={} must be in 2..={MAX_GENERATED}",
                self.x
            )));
        }
        if self.m < 1 {
            return Err(Error::invalid("example count m must be at least 1"));
        }
        check_noise(self.noise)?;
        check_fraction(self.train_fraction)?;
        Ok(())
    }
}

fn check_noise(noise: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::invalid(format!("noise {noise} outside [0, 1]")));
    }
    Ok(())
}

fn check_fraction(fraction: f64) -> Result<()> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction {fraction} outside (0, 1)"
        )));
    }
    Ok(())
}

/// `n` attributes named `A`, `B`, ... each with values `a`, `b`, ...
pub fn uniform_schema(n: usize, x: usize) -> Result<Schema> {
    if n > MAX_GENERATED || x > MAX_GENERATED {
        return Err(Error::TooLarge {
            what: "generated schema dimension",
            got: n.max(x),
            limit: MAX_GENERATED,
        });
    }
    let letter = |base: u8, i: usize| char::from(base + i as u8).to_string();
    let attributes = (0..n)
        .map(|i| Attribute {
            name: letter(b'A', i),
            values: (0..x).map(|v| letter(b'a', v)).collect(),
        })
        .collect();
    Schema::new(attributes)
}

/// A full-length list: uniformly random attribute order and value orders.
pub fn random_lplist(schema: &Schema, rng: &mut Rng) -> LpList {
    let mut attrs: Vec<usize> = (0..schema.len()).collect();
    attrs.shuffle(rng);
    let entries = attrs
        .into_iter()
        .map(|a| {
            let mut order: Vec<u8> = (0..schema.domain_size(a) as u8).collect();
            order.shuffle(rng);
            (a, order)
        })
        .collect();
    LpList::new(schema, entries).expect("random permutations are valid")
}

pub fn random_object(schema: &Schema, rng: &mut Rng) -> Object {
    let values = (0..schema.len())
        .map(|i| rng.gen_range(0..schema.domain_size(i)) as u8)
        .collect();
    Object::new(schema, values).expect("sampled in range")
}

/// Draws `m` pairs of independent uniform objects (re-drawing identical
/// pairs) and orients each so the hidden list prefers `alpha`.
pub fn sample_examples(
    schema: &Schema,
    hidden: &LpList,
    m: usize,
    rng: &mut Rng,
) -> Result<Vec<Example>> {
    if !hidden.is_full() || hidden.arity() != schema.len() {
        return Err(Error::invalid("hidden model must list every attribute"));
    }
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let a = random_object(schema, rng);
        let b = random_object(schema, rng);
        if a == b {
            continue;
        }
        let e = match hidden.compare(&a, &b)? {
            crate::Relation::Better => Example::new(a, b)?,
            _ => Example::new(b, a)?,
        };
        out.push(e);
    }
    Ok(out)
}

/// Number of flips for a given size and noise fraction, rounded down.
pub fn flip_count(len: usize, noise: f64) -> usize {
    floor_fraction(len, noise)
}

// decimal fractions such as 0.15 are not exact in binary; the slack keeps
// floor(10000 * 0.15) at 1500
fn floor_fraction(len: usize, fraction: f64) -> usize {
    (((len as f64) * fraction + 1e-9).floor() as usize).min(len)
}

/// Swaps the two objects of exactly `floor(len * noise)` distinct examples
/// chosen uniformly without replacement. Returns the flipped positions in
/// ascending order.
pub fn apply_noise(
    examples: &[Example],
    noise: f64,
    rng: &mut Rng,
) -> Result<(Vec<Example>, Vec<usize>)> {
    check_noise(noise)?;
    let k = flip_count(examples.len(), noise);
    let mut flipped = rand::seq::index::sample(rng, examples.len(), k).into_vec();
    flipped.sort_unstable();
    let mut noisy = examples.to_vec();
    for &i in &flipped {
        noisy[i].flip();
    }
    Ok((noisy, flipped))
}

/// Shuffles positions `0..len` and cuts after `floor(len * fraction)`.
pub fn split_indices(len: usize, fraction: f64, rng: &mut Rng) -> Result<(Vec<usize>, Vec<usize>)> {
    check_fraction(fraction)?;
    let mut idx: Vec<usize> = (0..len).collect();
    idx.shuffle(rng);
    let cut = floor_fraction(len, fraction);
    let test = idx.split_off(cut);
    Ok((idx, test))
}

pub fn split(
    examples: &[Example],
    fraction: f64,
    rng: &mut Rng,
) -> Result<(Vec<Example>, Vec<Example>)> {
    let (train, test) = split_indices(examples.len(), fraction, rng)?;
    let pick = |ix: &[usize]| ix.iter().map(|&i| examples[i].clone()).collect();
    Ok((pick(&train), pick(&test)))
}

/// Everything produced for one generated instance.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub schema: Schema,
    pub hidden: LpList,
    /// The pooled examples after noise.
    pub examples: Vec<Example>,
    /// Positions in `examples` that were flipped.
    pub flipped: Vec<usize>,
    /// Positions in `examples` assigned to each side of the split.
    pub train_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
    pub train: Vec<Example>,
    pub test: Vec<Example>,
}

impl Dataset {
    /// Flipped examples that landed in the train split.
    pub fn train_flips(&self) -> usize {
        self.count_flipped(&self.train_idx)
    }

    pub fn test_flips(&self) -> usize {
        self.count_flipped(&self.test_idx)
    }

    fn count_flipped(&self, idx: &[usize]) -> usize {
        idx.iter()
            .filter(|i| self.flipped.binary_search(i).is_ok())
            .count()
    }
}

/// Generates a dataset: noise is applied to the pooled examples, which are
/// then split. Each step draws from its own stream of `cfg.seed`.
pub fn generate(cfg: &GenConfig) -> Result<Dataset> {
    cfg.validate()?;
    let schema = uniform_schema(cfg.n, cfg.x)?;
    let hidden = random_lplist(&schema, &mut rng::stream(cfg.seed, &[tag::MODEL]));
    let clean = sample_examples(
        &schema,
        &hidden,
        cfg.m,
        &mut rng::stream(cfg.seed, &[tag::SAMPLE]),
    )?;
    let (examples, flipped) =
        apply_noise(&clean, cfg.noise, &mut rng::stream(cfg.seed, &[tag::NOISE]))?;
    let (train_idx, test_idx) = split_indices(
        examples.len(),
        cfg.train_fraction,
        &mut rng::stream(cfg.seed, &[tag::SPLIT]),
    )?;
    let pick = |ix: &[usize]| ix.iter().map(|&i| examples[i].clone()).collect::<Vec<_>>();
    let (train, test) = (pick(&train_idx), pick(&test_idx));
    Ok(Dataset {
        schema,
        hidden,
        examples,
        flipped,
        train_idx,
        test_idx,
        train,
        test,
    })
}

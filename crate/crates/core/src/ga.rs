//! Genetic algorithm over chromosome-encoded LP-lists.
//!
//! A chromosome is a full-length LP-list. Its text form lists one gene per
//! attribute, the attribute name followed by its values from most to least
//! preferred, e.g. `Bst Mtc Cwbk`. That compact form needs single-character
//! names; other schemas use the canonical model text instead.
//!
//! Each generation ranks the population by fitness (satisfied training
//! examples, ties broken by chromosome text), lets the top `parent_count`
//! chromosomes produce one child by reshuffling the attribute order and one
//! by reshuffling the value order of a random attribute, and keeps the best
//! `population_size` of parents and children. The "crossover" is therefore
//! unary; [`GaConfig::two_parent_crossover`] swaps in an order crossover
//! between two parents as an extension.

use std::cmp::Reverse;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::random_lplist;
use crate::error::{Error, Result};
use crate::model::{Example, LpList, Schema};
use crate::rng::{self, Rng};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub parent_count: usize,
    pub generations: usize,
    pub seed: u64,
    /// Replace the attribute reshuffle by an order crossover with a second,
    /// randomly chosen parent. Off by default.
    pub two_parent_crossover: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            parent_count: 50,
            generations: 100,
            seed: 0,
            two_parent_crossover: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.parent_count == 0 || self.parent_count > self.population_size {
            return Err(Error::invalid(format!(
                "parent count {} must be in 1..={}",
                self.parent_count, self.population_size
            )));
        }
        if self.generations == 0 {
            return Err(Error::invalid("generations must be at least 1"));
        }
        Ok(())
    }
}

/// Chromosome text for a list.
pub fn encode(list: &LpList, schema: &Schema) -> String {
    if !schema.is_compact() {
        return list.to_text(schema);
    }
    list.entries()
        .iter()
        .map(|e| {
            let attr = schema.attribute(e.attr());
            let mut gene = attr.name.clone();
            for &v in e.order() {
                gene.push_str(&attr.values[v as usize]);
            }
            gene
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn decode(text: &str, schema: &Schema) -> Result<LpList> {
    if !schema.is_compact() {
        return LpList::parse(schema, text);
    }
    let err = |pos: usize, reason: String| Error::Parse { pos, reason };
    let mut entries = Vec::new();
    let mut used = vec![false; schema.len()];
    let mut offset = 0;
    for gene in text.split(' ') {
        let pos = offset;
        offset += gene.len() + 1;
        if gene.is_empty() {
            if text.trim().is_empty() {
                continue;
            }
            return Err(err(pos, "empty gene".into()));
        }
        let mut chars = gene.char_indices();
        let (_, name) = chars.next().expect("non-empty");
        let attr = schema
            .attribute_index(&name.to_string())
            .ok_or_else(|| err(pos, format!("unknown attribute `{name}`")))?;
        if std::mem::replace(&mut used[attr], true) {
            return Err(err(pos, format!("attribute `{name}` repeated")));
        }
        let domain = schema.attribute(attr);
        let mut seen = vec![false; domain.values.len()];
        let mut order = Vec::new();
        for (i, c) in chars {
            let v = domain
                .value_index(&c.to_string())
                .ok_or_else(|| err(pos + i, format!("unknown value `{c}` for `{name}`")))?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(err(
                    pos + i,
                    format!("value `{c}` repeated in gene `{gene}`"),
                ));
            }
            order.push(v as u8);
        }
        if order.len() != domain.values.len() {
            return Err(err(
                pos,
                format!(
                    "gene `{gene}` lists {} of {} values",
                    order.len(),
                    domain.values.len()
                ),
            ));
        }
        entries.push((attr, order));
    }
    LpList::new(schema, entries)
}

/// A full-length list together with its text encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    list: LpList,
    text: String,
}

impl Chromosome {
    pub fn new(list: LpList, schema: &Schema) -> Result<Self> {
        if !list.is_full() || list.arity() != schema.len() {
            return Err(Error::invalid("chromosome must list every attribute"));
        }
        let text = encode(&list, schema);
        Ok(Chromosome { list, text })
    }

    pub fn list(&self) -> &LpList {
        &self.list
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn into_list(self) -> LpList {
        self.list
    }
}

pub fn fitness(c: &Chromosome, examples: &[Example]) -> Result<usize> {
    c.list.count_satisfied(examples)
}

fn orders(list: &LpList) -> Vec<(usize, Vec<u8>)> {
    list.entries()
        .iter()
        .map(|e| (e.attr(), e.order().to_vec()))
        .collect()
}

/// Child with a uniformly reshuffled attribute order; value orders are kept.
pub fn crossover_shuffle(parent: &Chromosome, schema: &Schema, rng: &mut Rng) -> Chromosome {
    let mut genes = orders(&parent.list);
    genes.shuffle(rng);
    let list = LpList::new(schema, genes).expect("permutation of valid genes");
    Chromosome::new(list, schema).expect("full length preserved")
}

/// Child with the value order of one uniformly chosen attribute reshuffled.
pub fn mutate_values(parent: &Chromosome, schema: &Schema, rng: &mut Rng) -> Chromosome {
    let mut genes = orders(&parent.list);
    let k = rng.gen_range(0..genes.len());
    genes[k].1.shuffle(rng);
    let list = LpList::new(schema, genes).expect("permutation of valid genes");
    Chromosome::new(list, schema).expect("full length preserved")
}

/// Order crossover (OX) on the attribute sequence: a random segment keeps
/// its positions from `first`, the remaining attributes follow in `second`'s
/// order. Value orders come from `first`.
pub fn order_crossover(
    first: &Chromosome,
    second: &Chromosome,
    schema: &Schema,
    rng: &mut Rng,
) -> Chromosome {
    let genes = orders(&first.list);
    let n = genes.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    let (lo, hi) = (a.min(b), a.max(b));
    let mut keep = vec![false; schema.len()];
    for g in &genes[lo..=hi] {
        keep[g.0] = true;
    }
    let mut filler = second.list.attributes().filter(|&x| !keep[x]);
    let by_attr = |x: usize| {
        genes
            .iter()
            .find(|g| g.0 == x)
            .cloned()
            .expect("same schema")
    };
    let child: Vec<(usize, Vec<u8>)> = (0..n)
        .map(|p| {
            if (lo..=hi).contains(&p) {
                genes[p].clone()
            } else {
                by_attr(filler.next().expect("sizes match"))
            }
        })
        .collect();
    let list = LpList::new(schema, child).expect("permutation of valid genes");
    Chromosome::new(list, schema).expect("full length preserved")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: usize,
    pub mean_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct GaResult {
    pub best: LpList,
    pub best_fitness: usize,
    /// Generation 0 is the initial population, then one row per generation.
    pub history: Vec<GenerationStats>,
}

struct Scored {
    fitness: usize,
    chromosome: Chromosome,
}

fn score_all(chromosomes: Vec<Chromosome>, examples: &[Example]) -> Result<Vec<Scored>> {
    chromosomes
        .into_par_iter()
        .map(|chromosome| {
            Ok(Scored {
                fitness: fitness(&chromosome, examples)?,
                chromosome,
            })
        })
        .collect()
}

fn rank(pop: &mut [Scored]) {
    pop.sort_by(|a, b| {
        (Reverse(a.fitness), a.chromosome.text()).cmp(&(Reverse(b.fitness), b.chromosome.text()))
    });
}

fn stats(generation: usize, pop: &[Scored]) -> GenerationStats {
    GenerationStats {
        generation,
        best_fitness: pop.first().map_or(0, |s| s.fitness),
        mean_fitness: pop.iter().map(|s| s.fitness as f64).sum::<f64>() / pop.len().max(1) as f64,
    }
}

/// Runs the GA with a generator seeded from `cfg.seed`.
pub fn evolve(examples: &[Example], schema: &Schema, cfg: &GaConfig) -> Result<GaResult> {
    evolve_with_rng(examples, schema, cfg, &mut rng::stream(cfg.seed, &[]))
}

/// Runs the GA. All random draws happen sequentially on `rng`; only fitness
/// evaluation is parallel, so results do not depend on the thread count.
///
/// The next population is the best `population_size` of the parents and
/// their children, so it can only shrink below `population_size` when
/// `3 * parent_count` is smaller.
pub fn evolve_with_rng(
    examples: &[Example],
    schema: &Schema,
    cfg: &GaConfig,
    rng: &mut Rng,
) -> Result<GaResult> {
    cfg.validate()?;
    let initial = (0..cfg.population_size)
        .map(|_| Chromosome::new(random_lplist(schema, rng), schema))
        .collect::<Result<Vec<_>>>()?;
    let mut pop = score_all(initial, examples)?;
    rank(&mut pop);
    let mut history = vec![stats(0, &pop)];

    for generation in 1..=cfg.generations {
        pop.truncate(cfg.parent_count);
        let mut children = Vec::with_capacity(2 * pop.len());
        for p in &pop {
            let first = if cfg.two_parent_crossover {
                let other = &pop[rng.gen_range(0..pop.len())].chromosome;
                order_crossover(&p.chromosome, other, schema, rng)
            } else {
                crossover_shuffle(&p.chromosome, schema, rng)
            };
            children.push(first);
            children.push(mutate_values(&p.chromosome, schema, rng));
        }
        pop.extend(score_all(children, examples)?);
        rank(&mut pop);
        pop.truncate(cfg.population_size);
        history.push(stats(generation, &pop));
        log::trace!("generation {generation}: best {}", pop[0].fitness);
    }

    let best = pop.swap_remove(0);
    Ok(GaResult {
        best: best.chromosome.into_list(),
        best_fitness: best.fitness,
        history,
    })
}

/// Writes `generation,best_fitness,mean_fitness` rows.
pub fn write_history<W: Write>(out: W, history: &[GenerationStats]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generation", "best_fitness", "mean_fitness"])?;
    for h in history {
        w.write_record([
            h.generation.to_string(),
            h.best_fitness.to_string(),
            h.mean_fitness.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

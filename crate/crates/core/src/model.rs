//! Schemas, objects, examples and the LP-list model.
//!
//! Values are dense indices into their attribute's domain; names only appear
//! when reading or writing text.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest domain a schema accepts; values are stored as `u8`.
pub const MAX_DOMAIN: usize = u8::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, values: &[&str]) -> Self {
        Attribute {
            name: name.into(),
            values: values.iter().map(|v| v.to_string()).collect(),
        }
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v == name)
    }
}

#[derive(Deserialize)]
struct RawSchema {
    attributes: Vec<Attribute>,
}

/// The attribute set with one finite value domain per attribute.
///
/// Attribute order is the canonical index order used by objects and models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSchema")]
pub struct Schema {
    attributes: Vec<Attribute>,
}

impl TryFrom<RawSchema> for Schema {
    type Error = Error;

    fn try_from(raw: RawSchema) -> Result<Self> {
        Schema::new(raw.attributes)
    }
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::invalid("schema has no attributes"));
        }
        let mut names = HashSet::new();
        for attr in &attributes {
            if attr.name.trim().is_empty() {
                return Err(Error::invalid("attribute name is empty"));
            }
            if !names.insert(attr.name.as_str()) {
                return Err(Error::invalid(format!(
                    "attribute `{}` appears twice",
                    attr.name
                )));
            }
            if attr.values.len() < 2 {
                return Err(Error::invalid(format!(
                    "attribute `{}` needs at least 2 values, has {}",
                    attr.name,
                    attr.values.len()
                )));
            }
            if attr.values.len() > MAX_DOMAIN {
                return Err(Error::TooLarge {
                    what: "domain size",
                    got: attr.values.len(),
                    limit: MAX_DOMAIN,
                });
            }
            let mut seen = HashSet::new();
            for v in &attr.values {
                if v.trim().is_empty() {
                    return Err(Error::invalid(format!(
                        "attribute `{}` has an empty value name",
                        attr.name
                    )));
                }
                if !seen.insert(v.as_str()) {
                    return Err(Error::invalid(format!(
                        "value `{v}` appears twice in attribute `{}`",
                        attr.name
                    )));
                }
            }
        }
        Ok(Schema { attributes })
    }

    /// Number of attributes.
    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, idx: usize) -> &Attribute {
        &self.attributes[idx]
    }

    pub fn domain_size(&self, idx: usize) -> usize {
        self.attributes[idx].values.len()
    }

    pub fn max_domain_size(&self) -> usize {
        self.attributes
            .iter()
            .map(|a| a.values.len())
            .max()
            .unwrap_or(0)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// True when every attribute and value name is a single character.
    pub fn is_compact(&self) -> bool {
        let single = |s: &str| s.chars().count() == 1;
        self.attributes
            .iter()
            .all(|a| single(&a.name) && a.values.iter().all(|v| single(v)))
    }

    /// Builds an object from value names given in attribute order.
    pub fn object_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Object> {
        if names.len() != self.len() {
            return Err(Error::invalid(format!(
                "object has {} values, schema has {} attributes",
                names.len(),
                self.len()
            )));
        }
        let values = names
            .iter()
            .zip(&self.attributes)
            .map(|(name, attr)| {
                let name = name.as_ref().trim();
                attr.value_index(name)
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::UnknownName {
                        kind: "value",
                        name: format!("{}={}", attr.name, name),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Object(values.into_boxed_slice()))
    }

    pub fn object_names<'a>(&'a self, o: &'a Object) -> impl Iterator<Item = &'a str> + 'a {
        o.values()
            .iter()
            .zip(&self.attributes)
            .map(|(&v, a)| a.values[v as usize].as_str())
    }
}

/// One object of the universe: a value index per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Object(Box<[u8]>);

impl Object {
    pub fn new(schema: &Schema, values: Vec<u8>) -> Result<Self> {
        if values.len() != schema.len() {
            return Err(Error::invalid(format!(
                "object has {} values, schema has {} attributes",
                values.len(),
                schema.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if v as usize >= schema.domain_size(i) {
                return Err(Error::invalid(format!(
                    "value index {v} out of range for attribute `{}`",
                    schema.attribute(i).name
                )));
            }
        }
        Ok(Object(values.into_boxed_slice()))
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, attr: usize) -> u8 {
        self.0[attr]
    }
}

/// An ordered pair asserting that `alpha` is preferred to `beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Example {
    pub alpha: Object,
    pub beta: Object,
}

impl Example {
    pub fn new(alpha: Object, beta: Object) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::invalid(format!(
                "example objects have different lengths ({} vs {})",
                alpha.len(),
                beta.len()
            )));
        }
        Ok(Example { alpha, beta })
    }

    pub fn reversed(&self) -> Example {
        Example {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn flip(&mut self) {
        std::mem::swap(&mut self.alpha, &mut self.beta);
    }

    /// True when both objects agree on every attribute.
    pub fn is_tie(&self) -> bool {
        self.alpha == self.beta
    }

    /// Bitmask of the attributes on which the two objects differ.
    pub fn diff_mask(&self) -> u64 {
        self.alpha
            .values()
            .iter()
            .zip(self.beta.values())
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Better,
    Worse,
    Equivalent,
}

impl Relation {
    pub fn reverse(self) -> Relation {
        match self {
            Relation::Better => Relation::Worse,
            Relation::Worse => Relation::Better,
            Relation::Equivalent => Relation::Equivalent,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Better => "Better",
            Relation::Worse => "Worse",
            Relation::Equivalent => "Equivalent",
        })
    }
}

/// One attribute of an LP-list with its total order over the domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Entry {
    attr: usize,
    order: Vec<u8>,
    // rank[v] = position of value v in `order`
    rank: Vec<u8>,
}

impl Entry {
    fn new(attr: usize, order: Vec<u8>) -> Self {
        let mut rank = vec![0u8; order.len()];
        for (pos, &v) in order.iter().enumerate() {
            rank[v as usize] = pos as u8;
        }
        Entry { attr, order, rank }
    }

    pub fn attr(&self) -> usize {
        self.attr
    }

    /// Domain values, most preferred first.
    pub fn order(&self) -> &[u8] {
        &self.order
    }

    pub fn rank(&self, value: u8) -> usize {
        self.rank[value as usize] as usize
    }
}

/// A lexicographic preference list.
///
/// Entries are distinct attributes of one schema, each labelled by a
/// permutation of its domain. Earlier entries dominate later ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LpList {
    arity: usize,
    entries: Vec<Entry>,
}

impl LpList {
    pub fn new(schema: &Schema, entries: Vec<(usize, Vec<u8>)>) -> Result<Self> {
        let mut used = vec![false; schema.len()];
        let mut out = Vec::with_capacity(entries.len());
        for (attr, order) in entries {
            if attr >= schema.len() {
                return Err(Error::invalid(format!(
                    "attribute index {attr} out of range (schema has {})",
                    schema.len()
                )));
            }
            if std::mem::replace(&mut used[attr], true) {
                return Err(Error::invalid(format!(
                    "attribute `{}` listed twice",
                    schema.attribute(attr).name
                )));
            }
            let size = schema.domain_size(attr);
            if !is_permutation(&order, size) {
                return Err(Error::invalid(format!(
                    "order for attribute `{}` is not a permutation of its {size} values",
                    schema.attribute(attr).name
                )));
            }
            out.push(Entry::new(attr, order));
        }
        Ok(LpList {
            arity: schema.len(),
            entries: out,
        })
    }

    pub fn empty(schema: &Schema) -> Self {
        LpList {
            arity: schema.len(),
            entries: Vec::new(),
        }
    }

    /// Number of attributes in the schema this list belongs to.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every schema attribute is listed.
    pub fn is_full(&self) -> bool {
        self.entries.len() == self.arity
    }

    pub fn attributes(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.attr)
    }

    /// The first `k` entries as a list of their own.
    pub fn prefix(&self, k: usize) -> LpList {
        LpList {
            arity: self.arity,
            entries: self.entries[..k.min(self.entries.len())].to_vec(),
        }
    }

    /// Same attribute order with every value order reversed.
    pub fn with_reversed_orders(&self) -> LpList {
        LpList {
            arity: self.arity,
            entries: self
                .entries
                .iter()
                .map(|e| Entry::new(e.attr, e.order.iter().rev().copied().collect()))
                .collect(),
        }
    }

    /// Walks the entries in order and reports the first decisive attribute.
    pub fn compare(&self, o: &Object, o2: &Object) -> Result<Relation> {
        if o.len() != self.arity || o2.len() != self.arity {
            return Err(Error::invalid(format!(
                "objects have {} and {} values, model expects {}",
                o.len(),
                o2.len(),
                self.arity
            )));
        }
        for entry in &self.entries {
            let (a, b) = (o.get(entry.attr), o2.get(entry.attr));
            if a == b {
                continue;
            }
            let (ra, rb) = match (entry.rank.get(a as usize), entry.rank.get(b as usize)) {
                (Some(ra), Some(rb)) => (ra, rb),
                _ => {
                    return Err(Error::invalid(format!(
                        "value index out of range on attribute {}",
                        entry.attr
                    )))
                }
            };
            return Ok(if ra < rb {
                Relation::Better
            } else {
                Relation::Worse
            });
        }
        Ok(Relation::Equivalent)
    }

    /// An example is satisfied only by a strict preference for `alpha`.
    pub fn satisfies(&self, e: &Example) -> Result<bool> {
        Ok(self.compare(&e.alpha, &e.beta)? == Relation::Better)
    }

    pub fn count_satisfied(&self, examples: &[Example]) -> Result<usize> {
        let mut count = 0;
        for e in examples {
            if self.satisfies(e)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Canonical one-line text: `NAME:v1>v2>...;NAME:...`.
    pub fn to_text(&self, schema: &Schema) -> String {
        self.entries
            .iter()
            .map(|e| {
                let attr = schema.attribute(e.attr);
                let values: Vec<&str> = e
                    .order
                    .iter()
                    .map(|&v| attr.values[v as usize].as_str())
                    .collect();
                format!("{}:{}", attr.name, values.join(">"))
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the canonical text format. Whitespace around tokens is ignored.
    pub fn parse(schema: &Schema, text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(LpList::empty(schema));
        }
        let mut entries = Vec::new();
        let mut used = vec![false; schema.len()];
        for (pos, chunk) in split_with_offsets(text, 0, ';') {
            let (pos, chunk) = trim_with_offset(pos, chunk);
            if chunk.is_empty() {
                return Err(parse_err(pos, "empty entry"));
            }
            let Some(colon) = chunk.find(':') else {
                return Err(parse_err(
                    pos,
                    format!("expected `NAME:values` in `{chunk}`"),
                ));
            };
            let (name_pos, name) = trim_with_offset(pos, &chunk[..colon]);
            let attr = schema
                .attribute_index(name)
                .ok_or_else(|| parse_err(name_pos, format!("unknown attribute `{name}`")))?;
            if std::mem::replace(&mut used[attr], true) {
                return Err(parse_err(name_pos, format!("attribute `{name}` repeated")));
            }
            let domain = schema.attribute(attr);
            let mut seen = vec![false; domain.values.len()];
            let mut order = Vec::with_capacity(domain.values.len());
            for (vpos, raw) in split_with_offsets(&chunk[colon + 1..], pos + colon + 1, '>') {
                let (vpos, value) = trim_with_offset(vpos, raw);
                let v = domain.value_index(value).ok_or_else(|| {
                    parse_err(
                        vpos,
                        format!("unknown value `{value}` for attribute `{name}`"),
                    )
                })?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(parse_err(vpos, format!("value `{value}` repeated")));
                }
                order.push(v as u8);
            }
            if order.len() != domain.values.len() {
                return Err(parse_err(
                    pos,
                    format!(
                        "attribute `{name}` lists {} of its {} values",
                        order.len(),
                        domain.values.len()
                    ),
                ));
            }
            entries.push((attr, order));
        }
        LpList::new(schema, entries)
    }
}

pub(crate) fn is_permutation(order: &[u8], size: usize) -> bool {
    if order.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    order
        .iter()
        .all(|&v| (v as usize) < size && !std::mem::replace(&mut seen[v as usize], true))
}

fn parse_err(pos: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        reason: reason.into(),
    }
}

fn split_with_offsets(s: &str, base: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if c == sep {
            out.push((base + start, &s[start..i]));
            start = i + c.len_utf8();
        }
    }
    out.push((base + start, &s[start..]));
    out
}

fn trim_with_offset(pos: usize, s: &str) -> (usize, &str) {
    let trimmed = s.trim_start();
    let pos = pos + (s.len() - trimmed.len());
    (pos, trimmed.trim_end())
}

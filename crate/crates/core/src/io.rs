//! File formats: schema JSON, example CSV and model text.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Example, LpList, Schema};

pub fn schema_from_json(text: &str) -> Result<Schema> {
    Ok(serde_json::from_str(text)?)
}

pub fn schema_to_json(schema: &Schema) -> String {
    serde_json::to_string_pretty(schema).expect("schema serializes")
}

pub fn read_schema(path: &Path) -> Result<Schema> {
    schema_from_json(&fs::read_to_string(path)?)
}

pub fn write_schema(path: &Path, schema: &Schema) -> Result<()> {
    fs::write(path, schema_to_json(schema) + "\n")?;
    Ok(())
}

pub fn read_model(path: &Path, schema: &Schema) -> Result<LpList> {
    LpList::parse(schema, &fs::read_to_string(path)?)
}

pub fn write_model(path: &Path, schema: &Schema, model: &LpList) -> Result<()> {
    fs::write(path, model.to_text(schema) + "\n")?;
    Ok(())
}

/// Header row `a_<name>...,b_<name>...` for a schema.
pub fn examples_header(schema: &Schema) -> Vec<String> {
    let names = schema.attributes().iter().map(|a| &a.name);
    names
        .clone()
        .map(|n| format!("a_{n}"))
        .chain(names.map(|n| format!("b_{n}")))
        .collect()
}

pub fn write_examples<W: Write>(out: W, schema: &Schema, examples: &[Example]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(examples_header(schema))?;
    for e in examples {
        let row: Vec<&str> = schema
            .object_names(&e.alpha)
            .chain(schema.object_names(&e.beta))
            .collect();
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads examples in row order. Rows whose two objects are identical are
/// kept (they can never be satisfied) and reported through `log::warn!`.
pub fn read_examples<R: Read>(input: R, schema: &Schema) -> Result<Vec<Example>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let expected = examples_header(schema);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(Error::invalid(format!(
            "example header `{}` does not match schema (expected `{}`)",
            header.join(","),
            expected.join(",")
        )));
    }
    let n = schema.len();
    let mut examples = Vec::new();
    let mut ties = 0usize;
    for (row, record) in r.records().enumerate() {
        let record = record?;
        let cells: Vec<&str> = record.iter().collect();
        if cells.len() != 2 * n {
            return Err(Error::invalid(format!(
                "row {}: expected {} cells, found {}",
                row + 1,
                2 * n,
                cells.len()
            )));
        }
        let with_row = |e: Error| Error::invalid(format!("row {}: {e}", row + 1));
        let alpha = schema.object_from_names(&cells[..n]).map_err(with_row)?;
        let beta = schema.object_from_names(&cells[n..]).map_err(with_row)?;
        let e = Example::new(alpha, beta)?;
        if e.is_tie() {
            ties += 1;
        }
        examples.push(e);
    }
    if ties > 0 {
        log::warn!("{ties} example(s) compare identical objects and can never be satisfied");
    }
    Ok(examples)
}

pub fn read_examples_file(path: &Path, schema: &Schema) -> Result<Vec<Example>> {
    read_examples(fs::File::open(path)?, schema)
}

pub fn write_examples_file(path: &Path, schema: &Schema, examples: &[Example]) -> Result<()> {
    let file = fs::File::create(path)?;
    write_examples(std::io::BufWriter::new(file), schema, examples)
}

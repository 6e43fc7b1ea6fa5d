//! Loading predicates, instances, witnesses and certificates.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nrd_core::instance::InstanceJson;
use nrd_core::predicate::Predicate;
use nrd_core::{catalog, tables, ConditionalPredicate, Instance, NrdCertificate, PartiteHypergraph, SubstructureCertificate};
use serde_json::Value;

/// A catalog expression, or `@path` for a JSON file.
pub fn conditional(spec: &str) -> Result<ConditionalPredicate> {
    match spec.strip_prefix('@') {
        Some(path) => {
            let value: Value = read_json(path)?;
            if value.get("base").is_some() {
                Ok(serde_json::from_value(value)?)
            } else {
                Ok(ConditionalPredicate::plain(serde_json::from_value(value)?)?)
            }
        }
        None => Ok(catalog::conditional(spec)?),
    }
}

pub fn plain(spec: &str) -> Result<Predicate> {
    match spec.strip_prefix('@') {
        Some(path) => Ok(serde_json::from_value(read_json(path)?)?),
        None => Ok(catalog::predicate(spec)?),
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn instance(path: &Path) -> Result<Instance> {
    Ok(read_json::<InstanceJson>(path)?.to_instance()?)
}

pub fn partite(path: &Path) -> Result<PartiteHypergraph> {
    Ok(PartiteHypergraph::from_json(&read_json::<InstanceJson>(path)?)?)
}

pub fn witnesses(path: &Path, h: &Instance) -> Result<NrdCertificate> {
    let json: BTreeMap<usize, BTreeMap<String, u8>> = read_json(path)?;
    Ok(NrdCertificate::from_json(h, &json)?)
}

/// A bundled table by name, or `@path` for a certificate JSON file.
pub fn certificate(spec: &str) -> Result<SubstructureCertificate> {
    match spec.strip_prefix('@') {
        Some(path) => read_json(path),
        None => Ok(tables::table(spec)?.certificate()?),
    }
}

/// Comma-separated 1-indexed integers.
pub fn one_based_list(text: &str) -> Result<Vec<usize>> {
    let values: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad integer {s:?}")))
        .collect::<Result<_>>()?;
    if values.contains(&0) {
        bail!("indices are 1-based");
    }
    Ok(values)
}

pub fn usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',').map(|s| s.trim().parse::<usize>().with_context(|| format!("bad integer {s:?}"))).collect()
}

/// `n:m` pairs separated by commas or whitespace.
pub fn points(text: &str) -> Result<Vec<(f64, f64)>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (n, m) = pair.split_once(':').with_context(|| format!("expected n:m, got {pair:?}"))?;
            Ok((n.parse()?, m.parse()?))
        })
        .collect()
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

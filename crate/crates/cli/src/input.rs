use std::path::Path;

use anyhow::{bail, Context, Result};
use hyperflow::curvature::{scalar_curvature, PackingMetric};
use hyperflow::Triangulation;

pub fn load_triangulation(path: &Path) -> Result<Triangulation> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Triangulation::parse(&text).with_context(|| format!("{}", path.display()))
}

/// A list of numbers: `@path` (JSON array or whitespace/comma separated),
/// an inline comma-separated list, or a single value broadcast to `n`.
pub fn parse_vector(source: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let values = if let Some(path) = source.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {what} file {path}"))?;
        let trimmed = text.trim();
        if trimmed.starts_with('[') {
            serde_json::from_str::<Vec<f64>>(trimmed).with_context(|| format!("{what} file {path}"))?
        } else {
            split_numbers(trimmed).with_context(|| format!("{what} file {path}"))?
        }
    } else {
        split_numbers(source).with_context(|| format!("{what} list"))?
    };
    match values.len() {
        1 if n != 1 => Ok(vec![values[0]; n]),
        len if len == n => Ok(values),
        len => bail!("{what}: expected {n} values (one per vertex class), got {len}"),
    }
}

fn split_numbers(text: &str) -> Result<Vec<f64>> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("not a number: {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        bail!("no values given");
    }
    Ok(values)
}

pub fn parse_radii(source: &str, tri: &Triangulation) -> Result<PackingMetric> {
    let r = parse_vector(source, tri.num_vertices(), "radii")?;
    Ok(PackingMetric::new(r)?)
}

/// `current` means the curvature of the starting metric.
pub fn parse_target(source: &str, tri: &Triangulation, r0: &PackingMetric) -> Result<Vec<f64>> {
    if source == "current" {
        return Ok(scalar_curvature(tri, r0)?);
    }
    let k = parse_vector(source, tri.num_vertices(), "target")?;
    if let Some(bad) = k.iter().find(|x| !x.is_finite()) {
        bail!("target curvature must be finite, got {bad}");
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_broadcast_and_split() {
        assert_eq!(parse_vector("2", 3, "x").unwrap(), vec![2.0; 3]);
        assert_eq!(parse_vector("1, 2 3", 3, "x").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_vector("1,2", 3, "x").is_err());
        assert!(parse_vector("a", 1, "x").is_err());
        assert!(parse_vector("", 1, "x").is_err());
    }
}

//! Parameter grids for sweeps: `lo:hi:n` ranges, comma lists and single values.

use rug::Rational;
use serde::Serialize;

use crate::catalog::{ParamKind, ParamSpec, Params};
use crate::error::{Error, Result};
use crate::mpcore::ExactArgument;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

/// Integer or exact argument rendered for the catalog parser.
fn render(value: &ExactArgument, kind: ParamKind, spec: &str) -> Result<String> {
    if kind != ParamKind::Integer {
        return Ok(value.to_string());
    }
    let r = &value.rational_part;
    if value.pi_multiple == 0 && *r.denom() == 1 && *r >= 0 {
        Ok(r.numer().to_string())
    } else {
        Err(Error::Parse(format!("range '{spec}' produces a non-integer value {value}")))
    }
}

/// `lo:hi:n` gives `n` evenly spaced values including both ends; integer
/// parameters also accept `lo:hi` with unit step. Lists use commas.
pub fn expand_axis(name: &str, spec: &str, kind: ParamKind) -> Result<Axis> {
    let values = if kind == ParamKind::RealList {
        vec![spec.to_string()]
    } else if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let lo: ExactArgument = parts[0].parse()?;
        let hi: ExactArgument = parts[1].parse()?;
        let count = match parts.len() {
            3 => parts[2]
                .trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid point count in '{spec}'")))?,
            2 if kind == ParamKind::Integer => {
                let span = hi.add(&lo.neg());
                let steps = render(&span, kind, spec)?
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("range '{spec}' runs backwards")))?;
                steps + 1
            }
            _ => return Err(Error::Parse(format!("expected lo:hi:n, got '{spec}'"))),
        };
        if count > 100_000 {
            return Err(Error::Parse(format!("range '{spec}' has more than 100000 points")));
        }
        let span = hi.add(&lo.neg());
        (0..count)
            .map(|i| {
                let v = if count == 1 {
                    lo.clone()
                } else {
                    lo.add(&span.scale(&Rational::from((i, count - 1))))
                };
                render(&v, kind, spec)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        spec.split(',').map(|s| s.trim().to_string()).collect()
    };
    if values.is_empty() || values.iter().any(String::is_empty) {
        return Err(Error::Parse(format!("empty range for '{name}'")));
    }
    Ok(Axis { name: name.to_string(), values })
}

/// One axis per parameter, sorted by name. Parameters absent from the schema
/// are rejected later by binding.
pub fn axes(specs: &[ParamSpec], pairs: &[String]) -> Result<Vec<Axis>> {
    let raw = Params::from_pairs(pairs)?;
    raw.as_map()
        .iter()
        .map(|(name, spec)| {
            let kind = specs
                .iter()
                .find(|p| p.name == name)
                .map_or(ParamKind::Argument, |p| p.kind);
            expand_axis(name, spec, kind)
        })
        .collect()
}

/// Cartesian product, last axis fastest.
pub fn grid_points(axes: &[Axis]) -> Vec<Params> {
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    (0..total)
        .map(|mut index| {
            let mut p = Params::default();
            for axis in axes.iter().rev() {
                let n = axis.values.len();
                p.insert(&axis.name, axis.values[index % n].clone());
                index /= n;
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_is_exact() {
        let a = expand_axis("a", "0.1:3.0:30", ParamKind::Argument).unwrap();
        assert_eq!(a.values.len(), 30);
        assert_eq!(a.values[0], "1/10");
        assert_eq!(a.values[29], "3");
        assert_eq!(a.values[1], "1/5");
        let p = expand_axis("a", "0:pi:3", ParamKind::Argument).unwrap();
        assert_eq!(p.values, vec!["0", "1/2*pi", "1*pi"]);
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(expand_axis("n", "1:4", ParamKind::Integer).unwrap().values, vec!["1", "2", "3", "4"]);
        assert_eq!(expand_axis("n", "0:10:3", ParamKind::Integer).unwrap().values, vec!["0", "5", "10"]);
        assert!(expand_axis("n", "0:1:3", ParamKind::Integer).is_err());
        assert!(expand_axis("n", "4:1", ParamKind::Integer).is_err());
    }

    #[test]
    fn empty_and_lists() {
        assert!(expand_axis("a", "0:1:0", ParamKind::Argument).is_err());
        assert!(expand_axis("a", "", ParamKind::Argument).is_err());
        assert_eq!(expand_axis("a", "1,2", ParamKind::Argument).unwrap().values.len(), 2);
        let eps = expand_axis("eps", "1e-4,1e-5", ParamKind::RealList).unwrap();
        assert_eq!(eps.values, vec!["1e-4,1e-5"]);
    }

    #[test]
    fn grid_order() {
        let axes = vec![
            Axis { name: "m".into(), values: vec!["0".into(), "1".into()] },
            Axis { name: "n".into(), values: vec!["1".into(), "2".into(), "3".into()] },
        ];
        let g = grid_points(&axes);
        assert_eq!(g.len(), 6);
        assert_eq!(g[1].as_map()["m"], "0");
        assert_eq!(g[1].as_map()["n"], "2");
        assert_eq!(g[3].as_map()["m"], "1");
    }
}

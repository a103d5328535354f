//! Generator specs such as `chain:5` or `random:20:0.3:7`.

use poset_enum::Family;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad generator spec `{spec}`: {msg}")]
pub struct SpecError {
    spec: String,
    msg: &'static str,
}

/// Parses `chain:N`, `antichain:N`, `random:N:DENSITY[:SEED]` or `uno:L`.
/// `seed` fills in a missing random seed.
pub fn parse_family(spec: &str, seed: u64) -> Result<Family, SpecError> {
    let err = |msg| SpecError { spec: spec.to_string(), msg };
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize, SpecError> {
        parts.get(i).ok_or_else(|| err("missing size"))?.parse().map_err(|_| err("size is not a number"))
    };
    let fam = match (parts[0], parts.len()) {
        ("chain", 2) => Family::Chain(num(1)?),
        ("antichain", 2) => Family::Antichain(num(1)?),
        ("uno", 2) => {
            let l = num(1)?;
            if l == 0 {
                return Err(err("uno needs l >= 1"));
            }
            Family::Uno(l)
        }
        ("random", 3 | 4) => {
            let density: f64 = parts[2].parse().map_err(|_| err("density is not a number"))?;
            if !(0.0..=1.0).contains(&density) {
                return Err(err("density must lie in [0, 1]"));
            }
            let seed = match parts.get(3) {
                Some(s) => s.parse().map_err(|_| err("seed is not a number"))?,
                None => seed,
            };
            Family::Random { n: num(1)?, density, seed }
        }
        ("chain" | "antichain" | "uno" | "random", _) => return Err(err("wrong number of fields")),
        _ => return Err(err("unknown family")),
    };
    Ok(fam)
}

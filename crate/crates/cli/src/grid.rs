use std::fmt;
use std::str::FromStr;

use advmatch_core::Error;

/// Range points are snapped to this resolution so `0:1:0.05` yields `0.15`,
/// not `0.15000000000000002`.
const SNAP: f64 = 1e-12;
const MAX_POINTS: usize = 1_000_000;

/// A list of numbers written as `start:stop:step` (both endpoints included),
/// a comma list, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f64>);

fn snap(x: f64) -> f64 {
    (x / SNAP).round() / (1.0 / SNAP)
}

fn number(s: &str, whole: &str) -> Result<f64, Error> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{}` in `{whole}`", s.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("non-finite value in `{whole}`")))
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, stop, step] => {
                let (start, stop, step) = (number(start, s)?, number(stop, s)?, number(step, s)?);
                if step <= 0.0 {
                    return Err(Error::Parse(format!("grid step must be positive in `{s}`")));
                }
                if stop < start - SNAP {
                    return Err(Error::Parse(format!("grid stop below start in `{s}`")));
                }
                let steps = ((stop - start) / step + SNAP).floor();
                if steps >= MAX_POINTS as f64 {
                    return Err(Error::Parse(format!("grid `{s}` has too many points")));
                }
                Ok(Grid(
                    (0..=steps as usize)
                        .map(|i| snap(start + i as f64 * step))
                        .collect(),
                ))
            }
            [_] => s
                .split(',')
                .map(|v| number(v, s))
                .collect::<Result<_, _>>()
                .map(Grid),
            _ => Err(Error::Parse(format!(
                "`{s}` is neither start:stop:step, a comma list nor a number"
            ))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| format!("{v:?}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// The values as nonnegative integers, or `None` if one is fractional.
    pub fn integers(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|&v| (v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63)).then_some(v as u64))
            .collect()
    }
}

/// A comma list of items, for example adversary strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let items = s
            .split(',')
            .map(|p| p.trim())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err(Error::Parse("empty list".into()));
        }
        Ok(List(items))
    }
}

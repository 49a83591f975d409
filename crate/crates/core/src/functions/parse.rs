//! Text form of function and weight specs, used by config files and reports.
//!
//! ```text
//! quadratic a2=1 a1=0 a0=0 [center=0]
//! quadratic 1 0 0
//! power_abs [scale=1] center=0.5 p=1
//! exp [scale=1] rate=1 [shift=0]
//! pwl breaks=0,1 slopes=-1,1 v0=1
//! neg(<spec>)
//! ```
//!
//! Any spec may be followed by `offset=<x>` and `shape=unknown`.
//! `Display` writes the canonical form, which parses back to an equal spec.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{Family, FunctionSpec, Shape, WeightProfile};
use crate::error::{Error, Result};

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("'{key}' expects a number, got '{v}'")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_f64(key, s)).collect()
}

struct Args<'a> {
    named: BTreeMap<&'a str, &'a str>,
    positional: Vec<&'a str>,
    context: &'a str,
}

impl<'a> Args<'a> {
    fn new(tokens: &[&'a str], context: &'a str) -> Result<Self> {
        let mut named = BTreeMap::new();
        let mut positional = Vec::new();
        for t in tokens {
            match t.split_once('=') {
                Some((k, v)) => {
                    if named.insert(k.trim(), v.trim()).is_some() {
                        return Err(Error::Parse(format!("duplicate key '{k}' in '{context}'")));
                    }
                }
                None if named.is_empty() => positional.push(*t),
                None => return Err(Error::Parse(format!("positional value after keys in '{context}'"))),
            }
        }
        Ok(Args { named, positional, context })
    }

    fn take(&mut self, keys: &[&str], pos: usize, default: Option<f64>) -> Result<f64> {
        for k in keys {
            if let Some(v) = self.named.remove(*k) {
                return parse_f64(k, v);
            }
        }
        if let Some(v) = self.positional.get(pos) {
            return parse_f64(keys[0], v);
        }
        default.ok_or_else(|| Error::Parse(format!("missing '{}' in '{}'", keys[0], self.context)))
    }

    fn take_list(&mut self, key: &str) -> Result<Vec<f64>> {
        let v = self
            .named
            .remove(key)
            .ok_or_else(|| Error::Parse(format!("missing '{key}' in '{}'", self.context)))?;
        parse_list(key, v)
    }

    fn finish(self, max_positional: usize) -> Result<()> {
        if let Some(k) = self.named.keys().next() {
            return Err(Error::Parse(format!("unknown key '{k}' in '{}'", self.context)));
        }
        if self.positional.len() > max_positional {
            return Err(Error::Parse(format!("too many values in '{}'", self.context)));
        }
        Ok(())
    }
}

/// Splits off trailing `offset=` / `shape=` modifiers.
fn split_modifiers(s: &str) -> Result<(&str, Option<f64>, Option<Shape>)> {
    let mut rest = s.trim();
    let mut offset = None;
    let mut shape = None;
    while let Some((head, last)) = rest.rsplit_once(char::is_whitespace) {
        let head = head.trim_end();
        if last.ends_with(')') {
            break;
        }
        if let Some(v) = last.strip_prefix("offset=") {
            offset = Some(parse_f64("offset", v)?);
        } else if let Some(v) = last.strip_prefix("shape=") {
            shape = Some(match v {
                "unknown" => Shape::Unknown,
                "convex" => Shape::Convex,
                "concave" => Shape::Concave,
                _ => return Err(Error::Parse(format!("unknown shape '{v}'"))),
            });
        } else {
            break;
        }
        rest = head;
    }
    Ok((rest, offset, shape))
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, offset, shape) = split_modifiers(s)?;
        let spec = if let Some(inner) = body.strip_prefix("neg(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in '{s}'")))?;
            FunctionSpec::negated(inner.parse()?)
        } else {
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let (name, rest) = tokens
                .split_first()
                .ok_or_else(|| Error::Parse("empty function spec".into()))?;
            let mut args = Args::new(rest, body)?;
            let spec = match *name {
                "quadratic" => {
                    let a2 = args.take(&["a2"], 0, None)?;
                    let a1 = args.take(&["a1"], 1, Some(0.0))?;
                    let a0 = args.take(&["a0"], 2, Some(0.0))?;
                    let c = args.take(&["center"], 3, Some(0.0))?;
                    args.finish(4)?;
                    FunctionSpec::quadratic_about(a2, a1, a0, c)?
                }
                "power_abs" => {
                    let scale = args.take(&["scale"], 0, Some(1.0))?;
                    let c = args.take(&["center", "c"], 1, None)?;
                    let p = args.take(&["p", "power"], 2, None)?;
                    args.finish(3)?;
                    FunctionSpec::power_abs(scale, c, p)?
                }
                "exp" | "exponential" => {
                    let scale = args.take(&["scale"], 0, Some(1.0))?;
                    let rate = args.take(&["rate"], 1, None)?;
                    let shift = args.take(&["shift"], 2, Some(0.0))?;
                    args.finish(3)?;
                    FunctionSpec::exponential(scale, rate, shift)?
                }
                "pwl" | "piecewise_linear" => {
                    let breaks = args.take_list("breaks")?;
                    let slopes = args.take_list("slopes")?;
                    let v0 = args.take(&["v0"], 0, None)?;
                    args.finish(0)?;
                    FunctionSpec::piecewise_linear(breaks, slopes, v0)?
                }
                other => return Err(Error::Parse(format!("unknown function family '{other}'"))),
            };
            spec
        };
        let spec = match offset {
            Some(o) => spec.with_offset(o)?,
            None => spec,
        };
        match shape {
            None => Ok(spec),
            Some(Shape::Unknown) => Ok(spec.without_certificate()),
            Some(claimed) if claimed == spec.shape() => Ok(spec),
            Some(claimed) => Err(Error::Parse(format!(
                "claimed shape {} contradicts certificate {} of '{s}'",
                claimed.as_str(),
                spec.shape().as_str()
            ))),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Quadratic { a2, a1, a0, center } => {
                write!(f, "quadratic a2={a2:?} a1={a1:?} a0={a0:?} center={center:?}")?
            }
            Family::PowerAbs { scale, center, power } => {
                write!(f, "power_abs scale={scale:?} center={center:?} p={power:?}")?
            }
            Family::Exponential { scale, rate, shift } => {
                write!(f, "exp scale={scale:?} rate={rate:?} shift={shift:?}")?
            }
            Family::PiecewiseLinear { breaks, slopes, v0 } => {
                write!(f, "pwl breaks={} slopes={} v0={v0:?}", join(breaks), join(slopes))?
            }
            Family::Negated(inner) => write!(f, "neg({inner})")?,
        }
        if self.offset != 0.0 {
            write!(f, " offset={:?}", self.offset)?;
        }
        if self.shape == Shape::Unknown && self.natural_shape() != Shape::Unknown {
            write!(f, " shape=unknown")?;
        }
        Ok(())
    }
}

impl FromStr for WeightProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let (name, rest) = tokens
            .split_first()
            .ok_or_else(|| Error::Parse("empty weight spec".into()))?;
        let mut args = Args::new(rest, s)?;
        let p = match *name {
            "const" | "constant" => {
                let c = args.take(&["c"], 0, Some(1.0))?;
                args.finish(1)?;
                WeightProfile::Constant { c }
            }
            "linear" => {
                let c0 = args.take(&["c0"], 0, None)?;
                let slope = args.take(&["slope"], 1, None)?;
                args.finish(2)?;
                WeightProfile::Linear { c0, slope }
            }
            "quadratic" => {
                let c0 = args.take(&["c0"], 0, None)?;
                let c2 = args.take(&["c2"], 1, None)?;
                args.finish(2)?;
                WeightProfile::Quadratic { c0, c2 }
            }
            "bump" => {
                let base = args.take(&["base"], 0, None)?;
                let height = args.take(&["height"], 1, None)?;
                let width = args.take(&["width"], 2, None)?;
                args.finish(3)?;
                WeightProfile::Bump { base, height, width }
            }
            other => return Err(Error::Parse(format!("unknown weight profile '{other}'"))),
        };
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::super::random::{random_concave_nonneg, random_convex, GenFamily};
    use super::*;
    use crate::kernel::Interval;
    use proptest::prelude::*;

    #[test]
    fn parses_short_forms() {
        let q: FunctionSpec = "quadratic 1 0 0".parse().unwrap();
        assert_eq!(q, FunctionSpec::quadratic(1.0, 0.0, 0.0).unwrap());
        let p: FunctionSpec = "power_abs center=0.5 p=1".parse().unwrap();
        assert_eq!(p, FunctionSpec::power_abs(1.0, 0.5, 1.0).unwrap());
        let e: FunctionSpec = "exp rate=1".parse().unwrap();
        assert_eq!(e, FunctionSpec::exponential(1.0, 1.0, 0.0).unwrap());
        let l: FunctionSpec = "pwl breaks=0,1 slopes=-1,1 v0=1".parse().unwrap();
        assert_eq!(l.eval(0.5).unwrap(), 0.5);
        let n: FunctionSpec = "neg(quadratic a2=1) offset=2".parse().unwrap();
        assert_eq!(n.shape(), Shape::Concave);
        assert_eq!(n.eval(1.0).unwrap(), 1.0);
        let u: FunctionSpec = "quadratic a2=1 shape=unknown".parse().unwrap();
        assert_eq!(u.shape(), Shape::Unknown);
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "",
            "cubic 1",
            "quadratic",
            "quadratic a2=x",
            "quadratic a2=1 bogus=2",
            "neg(quadratic a2=1",
            "pwl breaks=0,1 slopes=1,0 v0=0",
            "quadratic a2=-1 shape=convex",
        ] {
            assert!(s.parse::<FunctionSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn weight_profiles() {
        let w: WeightProfile = "linear c0=1 slope=1".parse().unwrap();
        assert_eq!(w, WeightProfile::Linear { c0: 1.0, slope: 1.0 });
        assert_eq!("const".parse::<WeightProfile>().unwrap(), WeightProfile::Constant { c: 1.0 });
        assert_eq!(w.to_string().parse::<WeightProfile>().unwrap(), w);
        assert!("tent 1".parse::<WeightProfile>().is_err());
    }

    proptest! {
        #[test]
        fn display_round_trips(seed in any::<u64>(), fam in 0usize..5, a in -10.0f64..10.0, len in 0.01f64..10.0, concave in any::<bool>(), drop in any::<bool>()) {
            let iv = Interval::new(a, a + len).unwrap();
            let family = GenFamily::ALL[fam];
            let mut spec = if concave { random_concave_nonneg(seed, family, iv) } else { random_convex(seed, family, iv) };
            if drop {
                spec = spec.without_certificate();
            }
            let back: FunctionSpec = spec.to_string().parse().unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}

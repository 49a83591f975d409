//! Seeded generators. Every output is a pure function of `(seed, family, interval)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FunctionSpec, WeightProfile, WeightSpec};
use crate::error::{Error, Result};
use crate::kernel::Interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenFamily {
    Quadratic,
    /// Quadratic with a leading coefficient around 1e-6.
    NearLinear,
    PowerAbs,
    Exponential,
    PiecewiseLinear,
}

impl GenFamily {
    pub const ALL: [GenFamily; 5] = [
        GenFamily::Quadratic,
        GenFamily::NearLinear,
        GenFamily::PowerAbs,
        GenFamily::Exponential,
        GenFamily::PiecewiseLinear,
    ];

    /// Families whose members are differentiable with convex `|u'|`.
    pub const SMOOTH: [GenFamily; 4] =
        [GenFamily::Quadratic, GenFamily::NearLinear, GenFamily::PowerAbs, GenFamily::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            GenFamily::Quadratic => "quadratic",
            GenFamily::NearLinear => "near_linear",
            GenFamily::PowerAbs => "power_abs",
            GenFamily::Exponential => "exp",
            GenFamily::PiecewiseLinear => "pwl",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl std::str::FromStr for GenFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GenFamily::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown generator family '{s}'")))
    }
}

fn rng_for(seed: u64, family: GenFamily) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ family.tag().rotate_right(8))
}

fn sign(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn build(rng: &mut ChaCha8Rng, family: GenFamily, iv: Interval, smooth: bool) -> Result<FunctionSpec> {
    let (a, b, len, mid) = (iv.a(), iv.b(), iv.len(), iv.midpoint());
    let spec = match family {
        GenFamily::Quadratic => FunctionSpec::quadratic_about(
            rng.gen_range(0.2..2.0) / (len * len),
            rng.gen_range(-2.0..2.0) / len,
            rng.gen_range(-1.0..1.0),
            mid,
        )?,
        GenFamily::NearLinear => FunctionSpec::quadratic_about(
            rng.gen_range(1e-7..1e-5) / (len * len),
            rng.gen_range(-2.0..2.0) / len,
            rng.gen_range(-1.0..1.0),
            mid,
        )?,
        GenFamily::PowerAbs => {
            let powers: &[f64] = if smooth { &[2.5, 3.0, 4.0] } else { &[1.0, 1.0, 1.5, 2.0, 3.0] };
            let power = *powers.choose(rng).expect("non-empty");
            let center = rng.gen_range(a - 0.25 * len..b + 0.25 * len);
            let scale = rng.gen_range(0.5..2.0) / len.powf(power);
            FunctionSpec::power_abs(scale, center, power)?.with_offset(rng.gen_range(-1.0..1.0))?
        }
        GenFamily::Exponential => {
            let rate = sign(rng) * rng.gen_range(0.5..4.0) / len;
            FunctionSpec::exponential(rng.gen_range(0.2..2.0), rate, mid)?
                .with_offset(rng.gen_range(-1.0..1.0))?
        }
        GenFamily::PiecewiseLinear => {
            if smooth {
                return Err(Error::domain("piecewise-linear functions are not differentiable"));
            }
            let k = rng.gen_range(2..=8);
            let mut breaks: Vec<f64> = (0..k).map(|_| rng.gen_range(a..b)).collect();
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let mut slope = rng.gen_range(-2.0..2.0) / len;
            let mut slopes = Vec::with_capacity(breaks.len());
            for _ in 0..breaks.len() {
                slopes.push(slope);
                slope += rng.gen_range(0.0..2.0) / len;
            }
            FunctionSpec::piecewise_linear(breaks, slopes, rng.gen_range(-1.0..1.0))?
        }
    };
    Ok(spec)
}

/// A convex function from `family`, scaled so its values on `iv` are O(1).
pub fn random_convex(seed: u64, family: GenFamily, iv: Interval) -> FunctionSpec {
    build(&mut rng_for(seed, family), family, iv, false).expect("generator parameters are valid")
}

/// A differentiable convex function whose `|u'|` is also convex on `iv`.
pub fn random_smooth_convex(seed: u64, family: GenFamily, iv: Interval) -> Result<FunctionSpec> {
    build(&mut rng_for(seed, family), family, iv, true)
}

/// A convex function shifted so that its minimum on `iv` is a positive margin.
pub fn random_nonneg_convex(seed: u64, family: GenFamily, iv: Interval) -> FunctionSpec {
    let mut rng = rng_for(seed, family);
    let f = build(&mut rng, family, iv, false).expect("generator parameters are valid");
    let margin = rng.gen_range(0.01..0.5);
    let offset = f.offset() - f.min_on(iv) + margin;
    f.with_offset(offset).expect("finite offset")
}

/// A concave function, nonnegative on `iv`.
pub fn random_concave_nonneg(seed: u64, family: GenFamily, iv: Interval) -> FunctionSpec {
    let mut rng = rng_for(seed, family);
    let f = build(&mut rng, family, iv, false).expect("generator parameters are valid");
    let g = FunctionSpec::negated(f);
    let margin = rng.gen_range(0.01..0.5);
    let offset = -g.min_on(iv) + margin;
    g.with_offset(offset).expect("finite offset")
}

/// Symmetric nonnegative weight. Seeds `≡ 0 (mod 4)` give `v ≡ 1`.
pub fn make_weight(seed: u64, iv: Interval) -> WeightSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5745_4947_4854);
    let half = 0.5 * iv.len();
    let profile = match seed % 4 {
        0 => WeightProfile::Constant { c: 1.0 },
        1 => {
            let c0 = rng.gen_range(0.2..2.0);
            WeightProfile::Linear { c0, slope: rng.gen_range(-0.9 * c0..3.0) / half }
        }
        2 => {
            let c0 = rng.gen_range(0.2..2.0);
            WeightProfile::Quadratic { c0, c2: rng.gen_range(-0.9 * c0..4.0) / (half * half) }
        }
        _ => WeightProfile::Bump {
            base: rng.gen_range(0.0..1.0),
            height: rng.gen_range(0.1..3.0),
            width: rng.gen_range(0.1..1.0) * half,
        },
    };
    WeightSpec::new(profile, iv).expect("generated weight is nonnegative")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    Convex,
    Smooth,
    Nonnegative,
    /// Negations of the convex corpus.
    Concave,
    ConcaveNonnegative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub seed: u64,
    pub family: GenFamily,
    pub spec: FunctionSpec,
}

/// `size` functions with seeds `base_seed, base_seed+1, …`, cycling through
/// the families admissible for `kind`.
pub fn corpus(kind: CorpusKind, base_seed: u64, size: usize, iv: Interval) -> Vec<CorpusEntry> {
    let families: &[GenFamily] = match kind {
        CorpusKind::Smooth => &GenFamily::SMOOTH,
        _ => &GenFamily::ALL,
    };
    (0..size)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let family = families[i % families.len()];
            let spec = match kind {
                CorpusKind::Convex => random_convex(seed, family, iv),
                CorpusKind::Smooth => random_smooth_convex(seed, family, iv).expect("smooth family"),
                CorpusKind::Nonnegative => random_nonneg_convex(seed, family, iv),
                CorpusKind::Concave => FunctionSpec::negated(random_convex(seed, family, iv)),
                CorpusKind::ConcaveNonnegative => random_concave_nonneg(seed, family, iv),
            };
            CorpusEntry { seed, family, spec }
        })
        .collect()
}

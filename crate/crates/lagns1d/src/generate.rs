//! Initial-data generators and the plain-text spec grammar used in config
//! files:
//!
//! ```text
//! constant(c)
//! gaussian(center,width)            # (4 pi w)^{-1/2} exp(-(x-c)^2/(4w))
//! step(height,a,b)                  # height on [a,b) mod 2L, 0 elsewhere
//! rough_velocity(gamma,seed,amplitude)
//! rough_temperature(beta,seed,amplitude)
//! sum(spec,spec,...)
//! ```
//!
//! Generators are pure functions of (spec, grid): the same arguments always
//! reproduce the same samples bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::grid::{Field, Grid};
use crate::norms;
use crate::spectral;
use crate::{Error, Result};

/// Lacunary block count; the top frequency 2^6 = 64 stays below the Nyquist
/// wavenumber of every admissible grid (pi/h >= 80 at L = 20, n = 1024), so
/// one analytic datum is shared across resolutions.
const LACUNARY_BLOCKS: u32 = 6;

/// Width of the concentrated wave packet inside `rough_velocity`. The packet
/// carries the L^1-concentration that saturates the t^{-(1-gamma)} gradient
/// decay of the heat flow; the lacunary sum alone decays at the slower rate
/// t^{-(1-2 gamma)/2}.
const PACKET_WIDTH: f64 = 0.08;

/// Weight split between the lacunary sum and the wave packet (unit-norm
/// components).
const LACUNARY_WEIGHT: f64 = 0.3;
const PACKET_WEIGHT: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Constant(f64),
    Gaussian { center: f64, width: f64 },
    Step { height: f64, a: f64, b: f64 },
    RoughVelocity { gamma: f64, seed: u64, amplitude: f64 },
    RoughTemperature { beta: f64, seed: u64, amplitude: f64 },
    Sum(Vec<GeneratorSpec>),
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Constant(c) => write!(f, "constant({c})"),
            GeneratorSpec::Gaussian { center, width } => write!(f, "gaussian({center},{width})"),
            GeneratorSpec::Step { height, a, b } => write!(f, "step({height},{a},{b})"),
            GeneratorSpec::RoughVelocity {
                gamma,
                seed,
                amplitude,
            } => write!(f, "rough_velocity({gamma},{seed},{amplitude})"),
            GeneratorSpec::RoughTemperature {
                beta,
                seed,
                amplitude,
            } => write!(f, "rough_temperature({beta},{seed},{amplitude})"),
            GeneratorSpec::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn split_top_level(args: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in args.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&args[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&args[start..]);
    parts
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("cannot parse {what} from `{s}`")))
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Config(format!("cannot parse {what} (integer) from `{s}`")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| Error::Config(format!("malformed generator spec `{s}`")))?;
        if !s.ends_with(')') {
            return Err(Error::Config(format!("malformed generator spec `{s}`")));
        }
        let name = &s[..open];
        let args = &s[open + 1..s.len() - 1];
        let parts = split_top_level(args);
        let expect = |n: usize| -> Result<()> {
            if parts.len() != n {
                Err(Error::Config(format!(
                    "generator `{name}` expects {n} arguments, got {}",
                    parts.len()
                )))
            } else {
                Ok(())
            }
        };
        match name {
            "constant" => {
                expect(1)?;
                Ok(GeneratorSpec::Constant(parse_f64(parts[0], "constant value")?))
            }
            "gaussian" => {
                expect(2)?;
                Ok(GeneratorSpec::Gaussian {
                    center: parse_f64(parts[0], "gaussian center")?,
                    width: parse_f64(parts[1], "gaussian width")?,
                })
            }
            "step" => {
                expect(3)?;
                Ok(GeneratorSpec::Step {
                    height: parse_f64(parts[0], "step height")?,
                    a: parse_f64(parts[1], "step left edge")?,
                    b: parse_f64(parts[2], "step right edge")?,
                })
            }
            "rough_velocity" => {
                expect(3)?;
                Ok(GeneratorSpec::RoughVelocity {
                    gamma: parse_f64(parts[0], "gamma")?,
                    seed: parse_u64(parts[1], "seed")?,
                    amplitude: parse_f64(parts[2], "amplitude")?,
                })
            }
            "rough_temperature" => {
                expect(3)?;
                Ok(GeneratorSpec::RoughTemperature {
                    beta: parse_f64(parts[0], "beta")?,
                    seed: parse_u64(parts[1], "seed")?,
                    amplitude: parse_f64(parts[2], "amplitude")?,
                })
            }
            "sum" => {
                let specs = parts
                    .iter()
                    .map(|p| p.parse())
                    .collect::<Result<Vec<_>>>()?;
                if specs.is_empty() {
                    return Err(Error::Config("sum() needs at least one part".into()));
                }
                Ok(GeneratorSpec::Sum(specs))
            }
            other => Err(Error::Config(format!(
                "unknown generator family `{other}` (known: constant, gaussian, step, rough_velocity, rough_temperature, sum)"
            ))),
        }
    }
}

/// Pointwise evaluation of a generator spec at the grid nodes;
/// compactly supported shapes are wrapped periodically.
pub fn sample(spec: &GeneratorSpec, grid: Grid) -> Result<Field> {
    match spec {
        GeneratorSpec::Constant(c) => Field::constant(grid, *c),
        GeneratorSpec::Gaussian { center, width } => {
            if !(*width > 0.0) {
                return Err(Error::Config(format!(
                    "gaussian width must be positive, got {width}"
                )));
            }
            let norm = (4.0 * std::f64::consts::PI * width).sqrt().recip();
            let period = 2.0 * grid.half_width();
            Field::from_fn(grid, |x| {
                // periodic images; tails beyond one period are negligible
                (-1..=1)
                    .map(|k| {
                        let d = x - center + k as f64 * period;
                        norm * (-d * d / (4.0 * width)).exp()
                    })
                    .sum()
            })
        }
        GeneratorSpec::Step { height, a, b } => {
            if !(b > a) {
                return Err(Error::Config(format!(
                    "step needs b > a, got a={a}, b={b}"
                )));
            }
            let period = 2.0 * grid.half_width();
            if b - a >= period {
                return Err(Error::Config("step support covers the whole period".into()));
            }
            Field::from_fn(grid, |x| {
                if (x - a).rem_euclid(period) < b - a {
                    *height
                } else {
                    0.0
                }
            })
        }
        GeneratorSpec::RoughVelocity {
            gamma,
            seed,
            amplitude,
        } => rough_velocity(*gamma, *seed, *amplitude, grid),
        GeneratorSpec::RoughTemperature {
            beta,
            seed,
            amplitude,
        } => rough_temperature(*beta, *seed, *amplitude, grid),
        GeneratorSpec::Sum(parts) => {
            let mut acc = Field::zeros(grid);
            for p in parts {
                acc = acc.add(&sample(p, grid)?)?;
            }
            Ok(acc)
        }
    }
}

/// C^2 smootherstep ramp on [0,1].
fn smootherstep(y: f64) -> f64 {
    let y = y.clamp(0.0, 1.0);
    y * y * y * (y * (y * 6.0 - 15.0) + 10.0)
}

/// Window equal to 1 well inside [-L/2, L/2] and 0 outside, with C^2 ramps.
fn support_window(x: f64, half_width: f64) -> f64 {
    let edge = half_width / 2.0;
    let ramp = 0.075 * half_width;
    smootherstep((x + edge) / ramp) * smootherstep((edge - x) / ramp)
}

/// A windowed lacunary Fourier sum with coefficient decay `2^{-decay j}`;
/// also the raw material for the audit-trial trajectories.
pub(crate) fn lacunary_field(rng: &mut ChaCha8Rng, decay: f64, grid: Grid) -> Result<Field> {
    let blocks: Vec<(f64, f64, f64)> = (1..=LACUNARY_BLOCKS)
        .map(|j| {
            let freq = (1u64 << j) as f64;
            let amp = rng.gen_range(0.5..1.0) * freq.powf(-decay);
            let phase = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            (freq, amp, phase)
        })
        .collect();
    let l = grid.half_width();
    Field::from_fn(grid, |x| {
        support_window(x, l)
            * blocks
                .iter()
                .map(|(freq, amp, phase)| amp * (freq * x + phase).cos())
                .sum::<f64>()
    })
}

/// Velocity datum with finite `W^{2 gamma,1}` norm and large total
/// variation: a windowed lacunary Fourier sum plus a concentrated wave
/// packet, scaled so that the inhomogeneous norm
/// `|.|_{W^{2 gamma,1}} + ||.||_{L^1}` equals `amplitude` exactly.
pub fn rough_velocity(gamma: f64, seed: u64, amplitude: f64, grid: Grid) -> Result<Field> {
    if !(gamma > 0.0 && gamma <= 0.01) {
        return Err(Error::Config(format!(
            "rough_velocity requires gamma in (0, 1/100], got {gamma}"
        )));
    }
    if amplitude < 0.0 || !amplitude.is_finite() {
        return Err(Error::Config(format!(
            "rough_velocity amplitude must be nonnegative, got {amplitude}"
        )));
    }
    if amplitude == 0.0 {
        return Ok(Field::zeros(grid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 2.0 * gamma;
    let total = |f: &Field| -> Result<f64> {
        Ok(norms::gagliardo_norm(f, s, 1.0)? + norms::lp_norm(f, 1.0)?)
    };

    let lac = lacunary_sum(&mut rng, s, grid)?;
    let center: f64 = rng.gen_range(-grid.half_width() / 4.0..grid.half_width() / 4.0);
    let packet = Field::from_fn(grid, |x| {
        let d = x - center;
        (-d * d / (2.0 * PACKET_WIDTH * PACKET_WIDTH)).exp()
    })?;

    let mix = lac
        .scaled(LACUNARY_WEIGHT / total(&lac)?)?
        .add(&packet.scaled(PACKET_WEIGHT / total(&packet)?)?)?;
    mix.scaled(amplitude / total(&mix)?)
}

/// Temperature perturbation realised as the spectral derivative of a
/// mean-zero windowed lacunary primitive, so its negative-order norms are
/// finite by construction; scaled so the `W^{-beta,6/5}` upper-bound norm
/// equals `amplitude`.
pub fn rough_temperature(beta: f64, seed: u64, amplitude: f64, grid: Grid) -> Result<Field> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Config(format!(
            "rough_temperature requires beta in (0,1), got {beta}"
        )));
    }
    if amplitude < 0.0 || !amplitude.is_finite() {
        return Err(Error::Config(format!(
            "rough_temperature amplitude must be nonnegative, got {amplitude}"
        )));
    }
    if amplitude == 0.0 {
        return Ok(Field::zeros(grid));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7465_6d70);
    let prim = lacunary_sum(&mut rng, 0.25, grid)?;
    let prim = prim.shifted(-prim.mean())?;
    let g = spectral::derivative(&prim)?;
    let norm = norms::negative_sobolev_norm(&g, beta, 1.2)?;
    g.scaled(amplitude / norm)
}

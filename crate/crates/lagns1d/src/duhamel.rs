//! Mild-solution assembly `f = f_L + f_N + f_R` for
//! `d_t f - nu d_x^2 f = d_x F + R` on the periodic grid.
//!
//! The forcing integrals are computed by product integration: on each ladder
//! segment the forcing is frozen at its midpoint interpolant while the
//! kernel factor is integrated exactly in Fourier space, which removes the
//! integrable `(t - tau)^{-1/2}` endpoint singularity of the gradient
//! kernel. The heat symbol's semigroup structure turns the whole assembly
//! into a single O(K n) recurrence per mode.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::generate;
use crate::grid::{Field, Grid, TimeLadder, Trajectory};
use crate::norms::{self, NormMode, NormParams};
use crate::report::{EstimateAudit, GridMeta, RatioEntry};
use crate::spectral;
use crate::{Error, Result};

/// One Cauchy problem for the constant-coefficient parabolic operator.
pub struct DuhamelProblem<'a> {
    pub diffusivity: f64,
    pub initial: &'a Field,
    pub grad_forcing: Option<&'a Trajectory>,
    pub plain_forcing: Option<&'a Trajectory>,
    pub ladder: &'a TimeLadder,
}

impl DuhamelProblem<'_> {
    fn validate(&self) -> Result<()> {
        if !(self.diffusivity > 0.0 && self.diffusivity.is_finite()) {
            return Err(Error::Config(format!(
                "diffusivity must be positive, got {}",
                self.diffusivity
            )));
        }
        let grid = self.initial.grid();
        let width = (2.0 * self.diffusivity * self.ladder.horizon()).sqrt();
        if width > grid.half_width() / 6.0 {
            return Err(Error::Truncation(format!(
                "kernel width {width:.3e} at the horizon exceeds L/6"
            )));
        }
        for traj in [self.grad_forcing, self.plain_forcing].into_iter().flatten() {
            if traj.grid() != grid {
                return Err(Error::Config("forcing grid differs from datum grid".into()));
            }
            if traj.ladder() != self.ladder {
                return Err(Error::Config("forcing ladder differs from problem ladder".into()));
            }
        }
        Ok(())
    }
}

/// Heat evolution of the datum alone: `f_L(t_k) = K_nu(t_k) * f_0`, with
/// `f_L(0)` the datum itself.
pub fn linear_part(prob: &DuhamelProblem) -> Result<Trajectory> {
    prob.validate()?;
    let grid = prob.initial.grid();
    let n = grid.n();
    let spec0 = spectral::forward(prob.initial.values());
    let mut fields = Vec::with_capacity(prob.ladder.len());
    fields.push(prob.initial.clone());
    for &t in &prob.ladder.nodes()[1..] {
        let mut spec = spec0.clone();
        for (m, c) in spec.iter_mut().enumerate() {
            let k = spectral::wavenumber(m, n, grid.half_width());
            *c *= (-prob.diffusivity * k * k * t).exp();
        }
        fields.push(Field::new(grid, spectral::inverse_real(spec))?);
    }
    Trajectory::new(prob.ladder.clone(), fields)
}

fn forward_or_nan_error(traj: &Trajectory, node: usize) -> Result<Vec<Complex64>> {
    let f = traj.field(node);
    // Fields are finite by construction; the check guards values produced
    // through raw buffers in downstream crates.
    if f.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Propagation {
            node,
            t: traj.ladder().nodes()[node],
        });
    }
    Ok(spectral::forward(f.values()))
}

/// Shared product-integration engine:
/// `g(t) = int_0^t d_t^j d_x^m K_nu(t - tau) * f(tau) dtau`
/// with the forcing frozen at segment midpoints.
pub fn volterra_apply(
    f: &Trajectory,
    diffusivity: f64,
    time_order: u32,
    space_order: u32,
) -> Result<Trajectory> {
    let grid = f.grid();
    let n = grid.n();
    let times = f.ladder().nodes();
    let spectra: Vec<Vec<Complex64>> = (0..f.len())
        .map(|k| forward_or_nan_error(f, k))
        .collect::<Result<Vec<_>>>()?;

    let nu = diffusivity;
    let mult: Vec<Complex64> = (0..n)
        .map(|m| {
            if space_order % 2 == 1 && m == n / 2 {
                return Complex64::new(0.0, 0.0);
            }
            let k = spectral::wavenumber(m, n, grid.half_width());
            Complex64::new(0.0, k).powi(space_order as i32)
                * (-nu * k * k).powi(time_order as i32)
        })
        .collect();
    let ksq: Vec<f64> = (0..n)
        .map(|m| {
            let k = spectral::wavenumber(m, n, grid.half_width());
            nu * k * k
        })
        .collect();

    let mut fields = Vec::with_capacity(f.len());
    fields.push(Field::zeros(grid));
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for idx in 1..f.len() {
        let dt = times[idx] - times[idx - 1];
        for m in 0..n {
            let decay = (-ksq[m] * dt).exp();
            let integral = if ksq[m] > 0.0 {
                (1.0 - decay) / ksq[m]
            } else {
                dt
            };
            let mid = 0.5 * (spectra[idx - 1][m] + spectra[idx][m]);
            acc[m] = acc[m] * decay + mult[m] * mid * integral;
        }
        fields.push(Field::new(grid, spectral::inverse_real(acc.clone()))?);
    }
    Trajectory::new(f.ladder().clone(), fields)
}

/// The forcing contributions `f_N + f_R` alone (zero at `t_0`).
pub fn forcing_parts(prob: &DuhamelProblem) -> Result<Trajectory> {
    prob.validate()?;
    let grid = prob.initial.grid();
    let zero_traj = || -> Result<Trajectory> {
        Trajectory::new(
            prob.ladder.clone(),
            vec![Field::zeros(grid); prob.ladder.len()],
        )
    };
    let mut out = zero_traj()?;
    if let Some(f) = prob.grad_forcing {
        out = out.add(&volterra_apply(f, prob.diffusivity, 0, 1)?)?;
    }
    if let Some(r) = prob.plain_forcing {
        out = out.add(&volterra_apply(r, prob.diffusivity, 0, 0)?)?;
    }
    Ok(out)
}

/// Full mild solution. A problem without forcing takes exactly the
/// [`linear_part`] path.
pub fn assemble(prob: &DuhamelProblem) -> Result<Trajectory> {
    let linear = linear_part(prob)?;
    if prob.grad_forcing.is_none() && prob.plain_forcing.is_none() {
        return Ok(linear);
    }
    linear.add(&forcing_parts(prob)?)
}

/// Max-norm PDE residual `d_t f - nu d_x^2 f - d_x F - R` over interior
/// nodes, with a second-order nonuniform time stencil. Used by the
/// manufactured-solution checks.
pub fn pde_residual(
    f: &Trajectory,
    diffusivity: f64,
    grad_forcing: Option<&Trajectory>,
    plain_forcing: Option<&Trajectory>,
) -> Result<f64> {
    let times = f.ladder().nodes();
    let mut worst = 0.0f64;
    for k in 1..f.len() - 1 {
        let dt0 = times[k] - times[k - 1];
        let dt1 = times[k + 1] - times[k];
        let (a, b, c) = (
            -dt1 / (dt0 * (dt0 + dt1)),
            (dt1 - dt0) / (dt0 * dt1),
            dt0 / (dt1 * (dt0 + dt1)),
        );
        let fxx = spectral::apply_multiplier(f.field(k), |kk| Complex64::new(-kk * kk, 0.0))?;
        let (fm, f0, fp) = (f.field(k - 1), f.field(k), f.field(k + 1));
        let mut res: Vec<f64> = (0..f.grid().n())
            .map(|i| {
                let ft = a * fm.values()[i] + b * f0.values()[i] + c * fp.values()[i];
                ft - diffusivity * fxx.values()[i]
            })
            .collect();
        if let Some(gf) = grad_forcing {
            let dfx = spectral::derivative(gf.field(k))?;
            for (r, d) in res.iter_mut().zip(dfx.values()) {
                *r -= d;
            }
        }
        if let Some(pf) = plain_forcing {
            for (r, d) in res.iter_mut().zip(pf.field(k).values()) {
                *r -= d;
            }
        }
        worst = worst.max(res.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    Ok(worst)
}

/// The audited smoothing estimates. String ids follow the audit-kind tokens
/// accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingKind {
    /// "2.2" — time-derivative kernel convolution preserves X^{sigma,p}.
    TimeDerivX,
    /// "2.3" — gradient kernel convolution gains T^{1/2+sigma-sigma~}.
    GradientGain,
    /// "2.4" — remainder term bound with T^{sigma-(1+l)/2+1/(2p)}.
    Remainder,
    /// "2.5" — BV version of "2.2".
    TimeDerivBv,
    /// "main-the1" — L^2/L^{6/5} family from negative-order data.
    MainThe1,
    /// "main-l1" — X^{.,1} family from W^{2gamma-1,1} data.
    MainL1,
    /// "main-u1" — L^2 family, no remainder forcing.
    MainU1,
    /// "main-uinf" — X^{1-gamma,inf} gradient bound.
    MainUinf,
    /// "main-l2" — X^{1/2-gamma,1} gradient bound.
    MainL2,
    /// "main-BV" — BV^{1-gamma} gradient bound.
    MainBv,
}

impl SmoothingKind {
    pub const ALL: [SmoothingKind; 10] = [
        SmoothingKind::TimeDerivX,
        SmoothingKind::GradientGain,
        SmoothingKind::Remainder,
        SmoothingKind::TimeDerivBv,
        SmoothingKind::MainThe1,
        SmoothingKind::MainL1,
        SmoothingKind::MainU1,
        SmoothingKind::MainUinf,
        SmoothingKind::MainL2,
        SmoothingKind::MainBv,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            SmoothingKind::TimeDerivX => "2.2",
            SmoothingKind::GradientGain => "2.3",
            SmoothingKind::Remainder => "2.4",
            SmoothingKind::TimeDerivBv => "2.5",
            SmoothingKind::MainThe1 => "main-the1",
            SmoothingKind::MainL1 => "main-l1",
            SmoothingKind::MainU1 => "main-u1",
            SmoothingKind::MainUinf => "main-uinf",
            SmoothingKind::MainL2 => "main-l2",
            SmoothingKind::MainBv => "main-BV",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown smoothing audit kind `{s}` (valid: {})",
                    Self::ALL.map(|k| k.id()).join(", ")
                ))
            })
    }
}

/// A random trajectory whose time profile `t^{-sigma'}` stays inside the
/// membership range of the source space with weight `sigma_cap`, built from
/// windowed lacunary fields. The `t_0` value repeats the first interior node
/// so the quadrature never sees the `t -> 0` blow-up.
fn random_source_trajectory(
    rng: &mut ChaCha8Rng,
    grid: Grid,
    ladder: &TimeLadder,
    sigma_cap: f64,
) -> Result<Trajectory> {
    let horizon = ladder.horizon();
    let terms: Vec<(Field, f64, f64, f64)> = (0..3)
        .map(|_| {
            let decay = rng.gen_range(0.2..0.8);
            let shape = generate::lacunary_field(rng, decay, grid)?;
            let sigma_p = rng.gen_range(0.2..0.9) * sigma_cap;
            let omega = rng.gen_range(0.5..3.0);
            let weight = rng.gen_range(0.3..1.0);
            Ok((shape, sigma_p, omega, weight))
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = |t: f64, sigma_p: f64, omega: f64| -> f64 {
        let tt = (t / horizon).max(1e-300);
        tt.powf(-sigma_p) * (1.0 + 0.3 * (2.0 * std::f64::consts::PI * omega * tt).cos())
    };
    let t_floor = ladder.nodes()[1];
    let fields = ladder
        .nodes()
        .iter()
        .map(|&t| {
            let t_eval = t.max(t_floor);
            let mut acc = vec![0.0; grid.n()];
            for (shape, sigma_p, omega, weight) in &terms {
                let p = weight * profile(t_eval, *sigma_p, *omega);
                for (a, v) in acc.iter_mut().zip(shape.values()) {
                    *a += p * v;
                }
            }
            Field::new(grid, acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(ladder.clone(), fields)
}

fn derivative_trajectory(f: &Trajectory) -> Result<Trajectory> {
    f.map_fields(spectral::derivative)
}

/// Run one smoothing-estimate audit: `trials` random admissible inputs, the
/// measured LHS/RHS ratio per trial, and the max ratio.
pub fn smoothing_audit(
    kind: SmoothingKind,
    trials: usize,
    params: &NormParams,
    grid: Grid,
    segments: usize,
    t_horizon: f64,
    base_seed: u64,
) -> Result<EstimateAudit> {
    let ladder = TimeLadder::graded(t_horizon, segments, 3.0)?;
    let mut audit = EstimateAudit::new(
        format!("smoothing-{}", kind.id()),
        GridMeta::space_time(grid, &ladder),
    );
    let g = params.gamma;
    let t_cap = t_horizon;

    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ (trial as u64).wrapping_mul(0x9e37_79b9));
        let wn = |tr: &Trajectory, sigma: f64, mode: NormMode| -> Result<f64> {
            Ok(norms::weighted_norm(tr, sigma, mode, params)?.total)
        };
        let (lhs, rhs, label) = match kind {
            SmoothingKind::TimeDerivX => {
                let sigma = [0.25, 0.5, 0.75][trial % 3];
                let p = [1.0, 2.0, f64::INFINITY][(trial / 3) % 3];
                let f = random_source_trajectory(&mut rng, grid, &ladder, sigma)?;
                let out = volterra_apply(&f, 1.0, 1, 0)?;
                (
                    wn(&out, sigma, NormMode::Lp(p))?,
                    wn(&f, sigma, NormMode::Lp(p))?,
                    format!("trial-{trial}(sigma={sigma},p={p})"),
                )
            }
            SmoothingKind::TimeDerivBv => {
                let sigma = [0.25, 0.5, 0.75][trial % 3];
                let f = random_source_trajectory(&mut rng, grid, &ladder, sigma)?;
                let out = volterra_apply(&f, 1.0, 1, 0)?;
                (
                    wn(&out, sigma, NormMode::Bv)?,
                    wn(&f, sigma, NormMode::Bv)?,
                    format!("trial-{trial}(sigma={sigma})"),
                )
            }
            SmoothingKind::GradientGain => {
                let (sigma, sigma_src, p) = [
                    (0.5 - g, 1.0 - g, 1.0),
                    (0.3, 0.6, 2.0),
                    (0.5, 0.9, f64::INFINITY),
                ][trial % 3];
                let f = random_source_trajectory(&mut rng, grid, &ladder, sigma_src)?;
                let out = volterra_apply(&f, 1.0, 0, 1)?;
                (
                    wn(&out, sigma, NormMode::Lp(p))?,
                    t_cap.powf(0.5 + sigma - sigma_src) * wn(&f, sigma_src, NormMode::Lp(p))?,
                    format!("trial-{trial}(sigma={sigma},src={sigma_src},p={p})"),
                )
            }
            SmoothingKind::Remainder => {
                let (l, p) = [(0usize, 1.0), (1, 1.0), (0, 2.0), (1, 2.0)][trial % 4];
                let sigma = (1.0 + l as f64) / 2.0 - 0.5 / p + 0.1;
                let r = random_source_trajectory(&mut rng, grid, &ladder, 0.9)?;
                let mut out = volterra_apply(&r, 1.0, 0, 0)?;
                if l == 1 {
                    out = derivative_trajectory(&out)?;
                }
                let rhs = t_cap.powf(sigma - (1.0 + l as f64) / 2.0 + 0.5 / p)
                    * (norms::space_time_lp(&r, 1.0)? + wn(&r, 1.0, NormMode::Lp(1.0))?);
                (
                    wn(&out, sigma, NormMode::Lp(p))?,
                    rhs,
                    format!("trial-{trial}(l={l},sigma={sigma:.2},p={p})"),
                )
            }
            SmoothingKind::MainThe1 => {
                let f0 = generate::rough_temperature(2.0 / 3.0, rng.gen(), 1e-2, grid)?;
                let forcing = random_source_trajectory(&mut rng, grid, &ladder, 5.0 / 6.0)?
                    .scaled(1e-2)?;
                let remainder =
                    random_source_trajectory(&mut rng, grid, &ladder, 0.9)?.scaled(1e-2)?;
                let prob = DuhamelProblem {
                    diffusivity: 1.0,
                    initial: &f0,
                    grad_forcing: Some(&forcing),
                    plain_forcing: Some(&remainder),
                    ladder: &ladder,
                };
                let f = assemble(&prob)?;
                let fx = derivative_trajectory(&f)?;
                let lhs = norms::space_time_lp(&f, 2.0)?
                    + wn(&f, 0.5, NormMode::Lp(2.0))?
                    + norms::space_time_lp(&fx, 1.2)?
                    + wn(&fx, 5.0 / 6.0, NormMode::Lp(1.2))?;
                let rhs = norms::negative_sobolev_norm(&f0, 2.0 / 3.0, 1.2)?
                    + norms::space_time_lp(&forcing, 1.2)?
                    + wn(&forcing, 5.0 / 6.0, NormMode::Lp(1.2))?
                    + t_cap.powf(0.25)
                        * (norms::space_time_lp(&remainder, 1.0)?
                            + wn(&remainder, 1.0, NormMode::Lp(1.0))?);
                (lhs, rhs, format!("trial-{trial}"))
            }
            SmoothingKind::MainL1 => {
                let f0 = generate::rough_temperature(1.0 - 2.0 * g, rng.gen(), 1e-2, grid)?;
                let forcing = random_source_trajectory(&mut rng, grid, &ladder, 1.0 - g)?
                    .scaled(1e-2)?;
                let remainder =
                    random_source_trajectory(&mut rng, grid, &ladder, 0.9)?.scaled(1e-2)?;
                let prob = DuhamelProblem {
                    diffusivity: 1.0,
                    initial: &f0,
                    grad_forcing: Some(&forcing),
                    plain_forcing: Some(&remainder),
                    ladder: &ladder,
                };
                let f = assemble(&prob)?;
                let fx = derivative_trajectory(&f)?;
                let lhs =
                    wn(&f, 0.5 - g, NormMode::Lp(1.0))? + wn(&fx, 1.0 - g, NormMode::Lp(1.0))?;
                let rhs = norms::negative_sobolev_norm(&f0, 1.0 - 2.0 * g, 1.0)?
                    + wn(&forcing, 1.0 - g, NormMode::Lp(1.0))?
                    + t_cap.powf(0.5 - g)
                        * (norms::space_time_lp(&remainder, 1.0)?
                            + wn(&remainder, 1.0, NormMode::Lp(1.0))?);
                (lhs, rhs, format!("trial-{trial}"))
            }
            SmoothingKind::MainU1 | SmoothingKind::MainUinf | SmoothingKind::MainL2
            | SmoothingKind::MainBv => {
                let f0 = if kind == SmoothingKind::MainU1 {
                    generate::lacunary_field(&mut rng, 0.5, grid)?.scaled(1e-2)?
                } else {
                    generate::rough_velocity(g, rng.gen(), 1e-2, grid)?
                };
                let forcing = random_source_trajectory(&mut rng, grid, &ladder, 1.0 - g)?
                    .scaled(1e-2)?;
                let prob = DuhamelProblem {
                    diffusivity: 1.0,
                    initial: &f0,
                    grad_forcing: Some(&forcing),
                    plain_forcing: None,
                    ladder: &ladder,
                };
                let fx = derivative_trajectory(&assemble(&prob)?)?;
                match kind {
                    SmoothingKind::MainU1 => {
                        let lhs = norms::space_time_lp(&fx, 2.0)?
                            + wn(&fx, 0.5, NormMode::Lp(2.0))?
                            + wn(&fx, 0.75, NormMode::Linf)?;
                        let rhs = norms::lp_norm(&f0, 2.0)?
                            + norms::space_time_lp(&forcing, 2.0)?
                            + wn(&forcing, 0.5, NormMode::Lp(2.0))?
                            + wn(&forcing, 0.75, NormMode::Linf)?;
                        (lhs, rhs, format!("trial-{trial}"))
                    }
                    SmoothingKind::MainUinf => (
                        wn(&fx, 1.0 - g, NormMode::Linf)?,
                        norms::gagliardo_norm(&f0, 2.0 * g, 1.0)?
                            + wn(&forcing, 1.0 - g, NormMode::Linf)?,
                        format!("trial-{trial}"),
                    ),
                    SmoothingKind::MainL2 => (
                        wn(&fx, 0.5 - g, NormMode::Lp(1.0))?,
                        norms::gagliardo_norm(&f0, 2.0 * g, 1.0)?
                            + wn(&forcing, 0.5 - g, NormMode::Lp(1.0))?,
                        format!("trial-{trial}"),
                    ),
                    _ => (
                        wn(&fx, 1.0 - g, NormMode::Bv)?,
                        norms::gagliardo_norm(&f0, 2.0 * g, 1.0)?
                            + wn(&forcing, 1.0 - g, NormMode::Bv)?,
                        format!("trial-{trial}"),
                    ),
                }
            }
        };
        audit.push(RatioEntry::new(label, lhs, rhs));
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(n: usize, segments: usize) -> (Grid, TimeLadder) {
        (
            Grid::new(PI, n).unwrap(),
            TimeLadder::graded(0.25, segments, 3.0).unwrap(),
        )
    }

    #[test]
    fn zero_data_gives_zero() {
        let (g, ladder) = setup(64, 16);
        let f0 = Field::zeros(g);
        let prob = DuhamelProblem {
            diffusivity: 1.0,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: None,
            ladder: &ladder,
        };
        let out = assemble(&prob).unwrap();
        assert!(out.fields().iter().all(|f| f.values().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn linear_part_widens_gaussian() {
        let g = Grid::new(20.0, 2048).unwrap();
        let ladder = TimeLadder::graded(0.5, 32, 3.0).unwrap();
        let w0 = 0.4;
        let f0 = Field::from_fn(g, |x| {
            (4.0 * PI * w0).sqrt().recip() * (-x * x / (4.0 * w0)).exp()
        })
        .unwrap();
        let prob = DuhamelProblem {
            diffusivity: 1.0,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: None,
            ladder: &ladder,
        };
        let out = linear_part(&prob).unwrap();
        for (k, &t) in ladder.nodes().iter().enumerate() {
            let w = w0 + t;
            let expect =
                Field::from_fn(g, |x| (4.0 * PI * w).sqrt().recip() * (-x * x / (4.0 * w)).exp())
                    .unwrap();
            let err = out
                .field(k)
                .values()
                .iter()
                .zip(expect.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-10, "node {k}: err {err}");
        }
    }

    #[test]
    fn step_datum_preserves_total_variation() {
        let g = Grid::new(16.0, 2048).unwrap();
        let ladder = TimeLadder::graded(0.25, 32, 3.0).unwrap();
        let f0 = Field::from_fn(g, |x| if (-1.0..1.0).contains(&x) { 0.1 } else { 0.0 }).unwrap();
        let bv0 = norms::bv_norm(&f0);
        let prob = DuhamelProblem {
            diffusivity: 1.0,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: None,
            ladder: &ladder,
        };
        let out = linear_part(&prob).unwrap();
        for f in out.fields() {
            assert!(norms::bv_norm(f) <= bv0 + 1e-8);
        }
    }

    #[test]
    fn constant_remainder_integrates_exactly() {
        let (g, ladder) = setup(64, 32);
        let f0 = Field::zeros(g);
        let c = 0.7;
        let r = Trajectory::constant(ladder.clone(), Field::constant(g, c).unwrap()).unwrap();
        let prob = DuhamelProblem {
            diffusivity: 1.0,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: Some(&r),
            ladder: &ladder,
        };
        let out = assemble(&prob).unwrap();
        for (k, &t) in ladder.nodes().iter().enumerate() {
            for v in out.field(k).values() {
                assert!((v - c * t).abs() < 1e-13, "node {k}");
            }
        }
    }

    #[test]
    fn manufactured_solution_grad_forced() {
        // f*(t,x) = e^{-2t} sin x solves f_t - f_xx = d_x(e^{-2t} cos x)
        let (g, ladder) = setup(256, 256);
        let f0 = Field::from_fn(g, |x| x.sin()).unwrap();
        let forcing =
            Trajectory::from_fn(ladder.clone(), g, |t, x| (-2.0 * t).exp() * x.cos()).unwrap();
        let prob = DuhamelProblem {
            diffusivity: 1.0,
            initial: &f0,
            grad_forcing: Some(&forcing),
            plain_forcing: None,
            ladder: &ladder,
        };
        let out = assemble(&prob).unwrap();
        let mut err = 0.0f64;
        for (k, &t) in ladder.nodes().iter().enumerate() {
            let exact = Field::from_fn(g, |x| (-2.0 * t).exp() * x.sin()).unwrap();
            err = err.max(
                out.field(k)
                    .values()
                    .iter()
                    .zip(exact.values())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())),
            );
        }
        assert!(err < 1e-6, "manufactured error {err}");
    }

    #[test]
    fn assemble_is_additive() {
        let (g, ladder) = setup(128, 32);
        let f0 = Field::from_fn(g, |x| x.sin()).unwrap();
        let forcing = Trajectory::from_fn(ladder.clone(), g, |t, x| (x + t).cos()).unwrap();
        let remainder =
            Trajectory::from_fn(ladder.clone(), g, |t, x| (2.0 * x - t).sin()).unwrap();
        let both = assemble(&DuhamelProblem {
            diffusivity: 0.8,
            initial: &f0,
            grad_forcing: Some(&forcing),
            plain_forcing: Some(&remainder),
            ladder: &ladder,
        })
        .unwrap();
        let zero = Field::zeros(g);
        let lin_only = assemble(&DuhamelProblem {
            diffusivity: 0.8,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: None,
            ladder: &ladder,
        })
        .unwrap();
        let force_only = assemble(&DuhamelProblem {
            diffusivity: 0.8,
            initial: &zero,
            grad_forcing: Some(&forcing),
            plain_forcing: Some(&remainder),
            ladder: &ladder,
        })
        .unwrap();
        let sum = lin_only.add(&force_only).unwrap();
        for k in 0..both.len() {
            let err = both
                .field(k)
                .values()
                .iter()
                .zip(sum.field(k).values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12);
        }
        // linear-only problems reproduce linear_part exactly
        let lp = linear_part(&DuhamelProblem {
            diffusivity: 0.8,
            initial: &f0,
            grad_forcing: None,
            plain_forcing: None,
            ladder: &ladder,
        })
        .unwrap();
        for k in 0..lp.len() {
            assert_eq!(lp.field(k).values(), lin_only.field(k).values());
        }
    }

    #[test]
    fn smoothing_kind_ids_round_trip() {
        for kind in SmoothingKind::ALL {
            assert_eq!(SmoothingKind::parse(kind.id()).unwrap(), kind);
        }
        assert!(SmoothingKind::parse("main-l3").is_err());
    }

    #[test]
    fn smoothing_audit_small_smoke() {
        let g = Grid::new(20.0, 256).unwrap();
        let audit = smoothing_audit(
            SmoothingKind::TimeDerivX,
            3,
            &NormParams::default(),
            g,
            32,
            0.25,
            1,
        )
        .unwrap();
        assert_eq!(audit.ratios.len(), 3);
        assert!(audit.max_ratio.is_finite() && audit.max_ratio > 0.0);
    }
}

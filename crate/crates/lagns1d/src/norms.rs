//! Every norm the constructions measure against: L^p, L^inf, discrete total
//! variation, Gagliardo fractional seminorms, negative-order Sobolev norms,
//! and the time-weighted trajectory norms that combine `sup_t t^sigma ||.||`
//! with a weighted alpha-Hölder-in-time difference quotient.

use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{Field, Trajectory};
use crate::spectral;
use crate::{Error, Result};

/// The two fixed regularity constants `0 < alpha < gamma <= 1/100` shared by
/// all weighted norms of one experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormParams {
    pub gamma: f64,
    pub alpha: f64,
}

impl NormParams {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(0.0 < alpha && alpha < gamma && gamma <= 0.01) {
            return Err(Error::Config(format!(
                "norm parameters must satisfy 0 < alpha < gamma <= 0.01, got gamma={gamma}, alpha={alpha}"
            )));
        }
        Ok(NormParams { gamma, alpha })
    }
}

impl Default for NormParams {
    fn default() -> Self {
        NormParams {
            gamma: 0.01,
            alpha: 0.005,
        }
    }
}

/// Which spatial norm a weighted trajectory norm is built on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormMode {
    Lp(f64),
    Linf,
    Bv,
}

impl NormMode {
    fn validate(&self) -> Result<()> {
        if let NormMode::Lp(p) = self {
            if !(p.is_finite() && *p >= 1.0) {
                return Err(Error::Config(format!(
                    "integrability exponent must satisfy p >= 1, got {p}"
                )));
            }
        }
        Ok(())
    }
}

impl Serialize for NormMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormMode::Lp(p) => s.serialize_str(&format!("L{p}")),
            NormMode::Linf => s.serialize_str("Linf"),
            NormMode::Bv => s.serialize_str("BV"),
        }
    }
}

/// Rectangle-rule L^p norm, `p = inf` giving the sample maximum.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Config(format!("lp_norm requires p >= 1, got {p}")));
    }
    let h = f.grid().spacing();
    let vals = f.values();
    Ok(if p.is_infinite() {
        vals.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        vals.iter().map(|v| v.abs()).sum::<f64>() * h
    } else if p == 2.0 {
        (vals.iter().map(|v| v * v).sum::<f64>() * h).sqrt()
    } else {
        (vals.iter().map(|v| v.abs().powf(p)).sum::<f64>() * h).powf(1.0 / p)
    })
}

/// Discrete total variation: the sum of consecutive sample differences.
/// For sampled piecewise-monotone data this equals the supremum over
/// partitions, and it is exact for step functions.
pub fn bv_norm(f: &Field) -> f64 {
    f.values().windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Gagliardo fractional seminorm `W^{s,p}` by the double-sum discretisation
/// with periodic distance; the diagonal is excluded, so the nearest resolved
/// separation is one grid cell.
///
/// The lag decomposition makes the double sum O(n) per lag; lags are chunked
/// and accumulated in a fixed order, so the result is independent of the
/// worker-thread count.
pub fn gagliardo_norm(f: &Field, s: f64, p: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Config(format!(
            "gagliardo_norm requires s in (0,1), got {s}"
        )));
    }
    if p.is_nan() || p.is_infinite() || p < 1.0 {
        return Err(Error::Config(format!(
            "gagliardo_norm requires finite p >= 1, got {p}"
        )));
    }
    let grid = f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let vals = f.values();

    let lag_sum = |lag: usize| -> f64 {
        let d = (lag.min(n - lag)) as f64 * h;
        let weight = h * h / d.powf(1.0 + s * p);
        let mut acc = 0.0;
        if p == 1.0 {
            for i in 0..n {
                let j = if i + lag < n { i + lag } else { i + lag - n };
                acc += (vals[j] - vals[i]).abs();
            }
        } else if p == 2.0 {
            for i in 0..n {
                let j = if i + lag < n { i + lag } else { i + lag - n };
                let d = vals[j] - vals[i];
                acc += d * d;
            }
        } else {
            for i in 0..n {
                let j = if i + lag < n { i + lag } else { i + lag - n };
                acc += (vals[j] - vals[i]).abs().powf(p);
            }
        }
        acc * weight
    };

    const CHUNK: usize = 64;
    let chunks: Vec<(usize, usize)> = (1..n)
        .step_by(CHUNK)
        .map(|lo| (lo, (lo + CHUNK).min(n)))
        .collect();
    let partials: Vec<f64> = chunks
        .par_iter()
        .map(|&(lo, hi)| (lo..hi).map(lag_sum).sum())
        .collect();
    let total: f64 = partials.iter().sum();
    Ok(total.powf(1.0 / p))
}

/// Mean-zero periodic antiderivative by trapezoid cumulative sum. Errors if
/// the field has a nonzero mean (no periodic antiderivative exists then).
pub fn antiderivative_mean_zero(g: &Field) -> Result<Field> {
    let mean = g.mean();
    let sup = g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if mean.abs() > 1e-10 * sup {
        return Err(Error::NoAntiderivative { mean });
    }
    let h = g.grid().spacing();
    let vals = g.values();
    let mut prim = Vec::with_capacity(vals.len());
    let mut acc = 0.0;
    prim.push(0.0);
    for w in vals.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        prim.push(acc);
    }
    let pmean = prim.iter().sum::<f64>() / prim.len() as f64;
    Field::new(g.grid(), prim.into_iter().map(|v| v - pmean).collect())
}

/// Negative-order Sobolev norm of a mean-zero field: the `W^{1-beta,p}`
/// Gagliardo norm of its mean-zero antiderivative. This is an upper bound
/// for the infimum over all antiderivatives.
pub fn negative_sobolev_norm(g: &Field, beta: f64, p: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Config(format!(
            "negative_sobolev_norm requires beta in (0,1), got {beta}"
        )));
    }
    let prim = antiderivative_mean_zero(g)?;
    gagliardo_norm(&prim, 1.0 - beta, p)
}

fn node_norm(f: &Field, mode: NormMode) -> f64 {
    match mode {
        NormMode::Lp(p) => lp_norm(f, p).expect("validated"),
        NormMode::Linf => lp_norm(f, f64::INFINITY).expect("inf is valid"),
        NormMode::Bv => bv_norm(f),
    }
}

/// Spatial norm of `a - b` without materialising the difference field.
fn diff_norm(a: &Field, b: &Field, mode: NormMode) -> f64 {
    let (av, bv) = (a.values(), b.values());
    let h = a.grid().spacing();
    match mode {
        NormMode::Linf => av
            .iter()
            .zip(bv)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())),
        NormMode::Lp(p) if p == 1.0 => {
            av.iter().zip(bv).map(|(x, y)| (x - y).abs()).sum::<f64>() * h
        }
        NormMode::Lp(p) if p == 2.0 => (av
            .iter()
            .zip(bv)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            * h)
            .sqrt(),
        NormMode::Lp(p) => (av
            .iter()
            .zip(bv)
            .map(|(x, y)| (x - y).abs().powf(p))
            .sum::<f64>()
            * h)
            .powf(1.0 / p),
        NormMode::Bv => {
            let mut acc = 0.0;
            for i in 1..av.len() {
                acc += ((av[i] - bv[i]) - (av[i - 1] - bv[i - 1])).abs();
            }
            acc
        }
    }
}

/// One time-weighted trajectory norm: `sup_t t^sigma ||f(t)||` plus the
/// weighted Hölder-in-time quotient, both over the interior ladder nodes
/// (`t_0 = 0` carries the rough datum and is excluded).
#[derive(Debug, Clone, Serialize)]
pub struct WeightedNormReport {
    pub sigma: f64,
    pub mode: NormMode,
    pub alpha: f64,
    pub sup_term: f64,
    pub holder_term: f64,
    pub total: f64,
}

/// Evaluate the weighted norm. The Hölder quotient is maximised over all
/// interior node pairs; pairs are visited in decreasing order of the
/// triangle-inequality bound `s^{sigma+alpha}(N_s+N_t)/(t-s)^alpha`, so the
/// scan stops as soon as no remaining pair can beat the running maximum.
/// The result is exactly the full-scan maximum.
pub fn weighted_norm(
    traj: &Trajectory,
    sigma: f64,
    mode: NormMode,
    params: &NormParams,
) -> Result<WeightedNormReport> {
    mode.validate()?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::Config(format!(
            "weight exponent must be >= 0, got {sigma}"
        )));
    }
    let times = traj.ladder().nodes();
    let interior: Vec<usize> = (0..traj.len()).filter(|&k| times[k] > 0.0).collect();
    if interior.len() < 2 {
        return Err(Error::InsufficientData(
            "weighted norm needs at least 2 interior time nodes".into(),
        ));
    }
    let alpha = params.alpha;

    let node_norms: Vec<f64> = interior
        .par_iter()
        .map(|&k| node_norm(traj.field(k), mode))
        .collect();

    let mut sup_term = 0.0f64;
    for (idx, &k) in interior.iter().enumerate() {
        sup_term = sup_term.max(times[k].powf(sigma) * node_norms[idx]);
    }

    // (pair index, upper bound) sorted descending by bound
    let mut pairs: Vec<(u32, u32, f64)> = Vec::with_capacity(interior.len() * (interior.len() - 1) / 2);
    for a in 0..interior.len() {
        let s = times[interior[a]];
        let ws = s.powf(sigma + alpha);
        for b in (a + 1)..interior.len() {
            let t = times[interior[b]];
            let bound = ws * (node_norms[a] + node_norms[b]) / (t - s).powf(alpha);
            pairs.push((a as u32, b as u32, bound));
        }
    }
    pairs.sort_unstable_by(|x, y| y.2.total_cmp(&x.2));

    let mut holder_term = 0.0f64;
    for &(a, b, bound) in &pairs {
        if bound <= holder_term {
            break;
        }
        let (a, b) = (a as usize, b as usize);
        let s = times[interior[a]];
        let t = times[interior[b]];
        let d = diff_norm(traj.field(interior[b]), traj.field(interior[a]), mode);
        let q = s.powf(sigma + alpha) * d / (t - s).powf(alpha);
        holder_term = holder_term.max(q);
    }

    Ok(WeightedNormReport {
        sigma,
        mode,
        alpha,
        sup_term,
        holder_term,
        total: sup_term + holder_term,
    })
}

/// Space-time Lebesgue norm `||f||_{L^p([0,T] x domain)}` by trapezoid rule
/// over the ladder nodes; `p = inf` gives the max over all nodes.
pub fn space_time_lp(traj: &Trajectory, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Config(format!(
            "space_time_lp requires p >= 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(traj
            .fields()
            .iter()
            .map(|f| node_norm(f, NormMode::Linf))
            .fold(0.0, f64::max));
    }
    let times = traj.ladder().nodes();
    let powers: Vec<f64> = traj
        .fields()
        .par_iter()
        .map(|f| lp_norm(f, p).map(|v| v.powf(p)))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = 0.0;
    for k in 1..times.len() {
        acc += 0.5 * (times[k] - times[k - 1]) * (powers[k] + powers[k - 1]);
    }
    Ok(acc.powf(1.0 / p))
}

/// The composite solution norms used by the two fixed-point solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeKind {
    /// `X^{0,1} + X^{0,inf} + BV^0` of the trajectory itself (volume
    /// perturbations; callers pass `v - 1`).
    YT,
    /// `X^{1-gamma,inf} + X^{1/2-gamma,1} + BV^{1-gamma}` of the spatial
    /// derivative (the velocity solution norm).
    TNorm,
    /// `L^2_{T,x} + X^{1/2,2} + X^{3/4,inf} + X^{1/2-gamma,1} + BV^{1-gamma}`
    /// of the spatial derivative (coupled-system velocity norm).
    Z1,
    /// Temperature norm: `L^2_{T,x} + X^{1/2,2} + X^{1/2-gamma,1}` of the
    /// trajectory plus `L^{6/5}_{T,x} + X^{5/6,6/5} + X^{1-gamma,1}` of its
    /// spatial derivative (callers pass `theta - 1`).
    Z2,
}

pub fn composite_norms(
    traj: &Trajectory,
    which: CompositeKind,
    params: &NormParams,
) -> Result<f64> {
    let g = params.gamma;
    let wn = |t: &Trajectory, sigma: f64, mode: NormMode| -> Result<f64> {
        Ok(weighted_norm(t, sigma, mode, params)?.total)
    };
    match which {
        CompositeKind::YT => Ok(wn(traj, 0.0, NormMode::Lp(1.0))?
            + wn(traj, 0.0, NormMode::Linf)?
            + wn(traj, 0.0, NormMode::Bv)?),
        CompositeKind::TNorm => {
            let dx = traj.map_fields(spectral::derivative)?;
            Ok(wn(&dx, 1.0 - g, NormMode::Linf)?
                + wn(&dx, 0.5 - g, NormMode::Lp(1.0))?
                + wn(&dx, 1.0 - g, NormMode::Bv)?)
        }
        CompositeKind::Z1 => {
            let dx = traj.map_fields(spectral::derivative)?;
            Ok(space_time_lp(&dx, 2.0)?
                + wn(&dx, 0.5, NormMode::Lp(2.0))?
                + wn(&dx, 0.75, NormMode::Linf)?
                + wn(&dx, 0.5 - g, NormMode::Lp(1.0))?
                + wn(&dx, 1.0 - g, NormMode::Bv)?)
        }
        CompositeKind::Z2 => {
            let dx = traj.map_fields(spectral::derivative)?;
            Ok(space_time_lp(traj, 2.0)?
                + wn(traj, 0.5, NormMode::Lp(2.0))?
                + wn(traj, 0.5 - g, NormMode::Lp(1.0))?
                + space_time_lp(&dx, 1.2)?
                + wn(&dx, 5.0 / 6.0, NormMode::Lp(1.2))?
                + wn(&dx, 1.0 - g, NormMode::Lp(1.0))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, TimeLadder};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn kernel_grid() -> Grid {
        Grid::new(20.0, 4096).unwrap()
    }

    /// Heat kernel shape at unit time: (4 pi)^{-1/2} exp(-x^2/4).
    fn unit_kernel(g: Grid) -> Field {
        Field::from_fn(g, |x| (4.0 * std::f64::consts::PI).sqrt().recip() * (-x * x / 4.0).exp())
            .unwrap()
    }

    #[test]
    fn lp_of_unit_kernel() {
        let f = unit_kernel(kernel_grid());
        assert!((lp_norm(&f, 1.0).unwrap() - 1.0).abs() < 1e-8);
        let peak = (4.0 * std::f64::consts::PI).sqrt().recip();
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - peak).abs() < 1e-10);
        assert_eq!(lp_norm(&Field::zeros(kernel_grid()), 2.0).unwrap(), 0.0);
        assert!(lp_norm(&f, 0.5).is_err());
    }

    #[test]
    fn bv_values() {
        let g = Grid::new(16.0, 1024).unwrap(); // h = 1/32, +-1 on grid
        assert_eq!(bv_norm(&Field::constant(g, 3.0).unwrap()), 0.0);
        let step = Field::from_fn(g, |x| if (-1.0..1.0).contains(&x) { 0.1 } else { 0.0 }).unwrap();
        assert!((bv_norm(&step) - 0.2).abs() < 1e-15);
        let gauss = unit_kernel(kernel_grid());
        let amp = lp_norm(&gauss, f64::INFINITY).unwrap();
        assert!((bv_norm(&gauss) - 2.0 * amp).abs() < 1e-10);
    }

    #[test]
    fn gagliardo_basics() {
        let g = Grid::new(20.0, 512).unwrap();
        assert_eq!(gagliardo_norm(&Field::constant(g, 2.0).unwrap(), 0.5, 2.0).unwrap(), 0.0);
        assert!(gagliardo_norm(&Field::zeros(g), 1.5, 2.0).is_err());
        assert!(gagliardo_norm(&Field::zeros(g), 0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn gagliardo_sawtooth_grows_with_resolution() {
        // f(x) = x has a periodic jump at the seam; for small s the seminorm
        // diverges under refinement and must grow monotonically in n.
        let mut last = 0.0;
        for n in [256usize, 512, 1024] {
            let g = Grid::new(std::f64::consts::PI, n).unwrap();
            let f = Field::from_fn(g, |x| x).unwrap();
            let v = gagliardo_norm(&f, 0.05, 1.0).unwrap();
            assert!(v > last, "expected growth: {v} vs {last}");
            last = v;
        }
    }

    #[test]
    fn negative_norm_unwinds_to_gagliardo_of_antiderivative() {
        let g = kernel_grid();
        let gauss_dx = Field::from_fn(g, |x| {
            -(x / 2.0) * (4.0 * std::f64::consts::PI).sqrt().recip() * (-x * x / 4.0).exp()
        })
        .unwrap();
        let beta = 2.0 / 3.0;
        let p = 1.2;
        let direct = negative_sobolev_norm(&gauss_dx, beta, p).unwrap();
        let prim = antiderivative_mean_zero(&gauss_dx).unwrap();
        let unwound = gagliardo_norm(&prim, 1.0 - beta, p).unwrap();
        assert_eq!(direct, unwound);
        // and the reconstructed antiderivative matches the sampled gaussian
        // minus its mean to quadrature accuracy
        let gauss = unit_kernel(g);
        let centered = gauss.shifted(-gauss.mean()).unwrap();
        let err = prim
            .values()
            .iter()
            .zip(centered.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-6, "antiderivative reconstruction error {err}");
    }

    #[test]
    fn negative_norm_of_sine_matches_brute_force() {
        let n = 512;
        let g = Grid::new(std::f64::consts::PI, n).unwrap();
        let sine = Field::from_fn(g, |x| x.sin()).unwrap();
        let val = negative_sobolev_norm(&sine, 0.5, 1.0).unwrap();

        // brute-force double sum on the analytic antiderivative -cos(x)
        let h = g.spacing();
        let prim: Vec<f64> = g.coords().map(|x| -x.cos()).collect();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = g.periodic_distance(i, j);
                acc += (prim[i] - prim[j]).abs() / d.powf(1.5) * h * h;
            }
        }
        // trapezoid antiderivative vs analytic one: O(h^2) discrepancy
        assert!(
            (val - acc).abs() / acc < 2e-3,
            "negative norm {val} vs brute force {acc}"
        );
    }

    #[test]
    fn negative_norm_rejects_nonzero_mean() {
        let g = Grid::new(1.0, 64).unwrap();
        let f = Field::constant(g, 1.0).unwrap();
        assert!(matches!(
            negative_sobolev_norm(&f, 0.5, 1.0),
            Err(Error::NoAntiderivative { .. })
        ));
        assert_eq!(
            negative_sobolev_norm(&Field::zeros(g), 0.5, 1.0).unwrap(),
            0.0
        );
    }

    fn small_ladder() -> TimeLadder {
        TimeLadder::graded(0.5, 16, 3.0).unwrap()
    }

    #[test]
    fn weighted_norm_constant_trajectory() {
        let g = Grid::new(16.0, 256).unwrap();
        let f0 = Field::from_fn(g, |x| (-x * x).exp()).unwrap();
        let traj = Trajectory::constant(small_ladder(), f0.clone()).unwrap();
        let params = NormParams::default();
        let rep = weighted_norm(&traj, 0.0, NormMode::Lp(1.0), &params).unwrap();
        assert!((rep.sup_term - lp_norm(&f0, 1.0).unwrap()).abs() < 1e-14);
        assert_eq!(rep.holder_term, 0.0);
        assert_eq!(rep.total, rep.sup_term);
    }

    #[test]
    fn weighted_norm_is_homogeneous() {
        let g = Grid::new(16.0, 256).unwrap();
        let params = NormParams::default();
        let traj = Trajectory::from_fn(small_ladder(), g, |t, x| {
            (x + 2.0 * t).sin() * (-t).exp()
        })
        .unwrap();
        let rep = weighted_norm(&traj, 0.5, NormMode::Linf, &params).unwrap();
        let scaled = traj.scaled(3.5).unwrap();
        let rep2 = weighted_norm(&scaled, 0.5, NormMode::Linf, &params).unwrap();
        assert!((rep2.total - 3.5 * rep.total).abs() <= 1e-12 * rep2.total.max(1.0));
    }

    #[test]
    fn weighted_norm_matches_full_pair_scan() {
        // the sorted early-exit scan must agree with the brute-force maximum
        let g = Grid::new(8.0, 128).unwrap();
        let params = NormParams::default();
        let ladder = small_ladder();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for mode in [NormMode::Lp(1.0), NormMode::Lp(1.2), NormMode::Linf, NormMode::Bv] {
            let amp: f64 = rng.gen_range(0.5..2.0);
            let traj = Trajectory::from_fn(ladder.clone(), g, |t, x| {
                amp * ((x - t).sin() + (3.0 * x + 10.0 * t.sqrt()).cos() * (t + 0.01).powf(-0.3))
            })
            .unwrap();
            let sigma = 0.4;
            let rep = weighted_norm(&traj, sigma, mode, &params).unwrap();
            let times = traj.ladder().nodes();
            let mut brute: f64 = 0.0;
            for a in 1..traj.len() {
                for b in (a + 1)..traj.len() {
                    let d = diff_norm(traj.field(b), traj.field(a), mode);
                    brute = brute
                        .max(times[a].powf(sigma + params.alpha) * d / (times[b] - times[a]).powf(params.alpha));
                }
            }
            assert!(
                (rep.holder_term - brute).abs() <= 1e-12 * brute.max(1e-300),
                "mode {mode:?}: pruned {} vs brute {brute}",
                rep.holder_term
            );
        }
    }

    #[test]
    fn weighted_norm_needs_interior_nodes() {
        let g = Grid::new(8.0, 128).unwrap();
        let ladder = TimeLadder::graded(0.5, 4, 2.0).unwrap();
        // keep only nodes (0, t1): one interior node
        let short = TimeLadder::graded(0.5, 4, 2.0).unwrap();
        let _ = short;
        let traj = Trajectory::constant(ladder, Field::zeros(g)).unwrap();
        // 4 interior nodes is fine
        assert!(weighted_norm(&traj, 0.0, NormMode::Linf, &NormParams::default()).is_ok());
    }

    #[test]
    fn triangle_inequality_and_homogeneity_random_trials() {
        let g = Grid::new(8.0, 256).unwrap();
        let h = g.spacing();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let norms: Vec<(&str, Box<dyn Fn(&Field) -> f64>)> = vec![
            ("L1", Box::new(|f: &Field| lp_norm(f, 1.0).unwrap())),
            ("L2", Box::new(|f: &Field| lp_norm(f, 2.0).unwrap())),
            ("L6/5", Box::new(|f: &Field| lp_norm(f, 1.2).unwrap())),
            ("Linf", Box::new(|f: &Field| lp_norm(f, f64::INFINITY).unwrap())),
            ("BV", Box::new(bv_norm)),
            ("W(0.3,1.5)", Box::new(|f: &Field| gagliardo_norm(f, 0.3, 1.5).unwrap())),
        ];
        for (name, norm) in &norms {
            for _ in 0..100 {
                let a = random_smooth(&mut rng, g);
                let b = random_smooth(&mut rng, g);
                let sum = a.add(&b).unwrap();
                let (na, nb, ns) = (norm(&a), norm(&b), norm(&sum));
                assert!(
                    ns <= na + nb + 1e-12 * (na + nb),
                    "{name}: triangle violated: {ns} > {na} + {nb}"
                );
                let lam = rng.gen_range(0.1..5.0);
                let scaled = a.scaled(lam).unwrap();
                let nl = norm(&scaled);
                assert!(
                    (nl - lam * na).abs() <= 1e-10 * nl.max(1e-12),
                    "{name}: homogeneity violated"
                );
            }
        }
        let _ = h;
    }

    /// L^inf <= L^1 + BV,  over random smooth fields.
    #[test]
    fn linf_interpolation_bound() {
        let g = Grid::new(8.0, 256).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let f = random_smooth(&mut rng, g);
            let linf = lp_norm(&f, f64::INFINITY).unwrap();
            let bound = lp_norm(&f, 1.0).unwrap() + bv_norm(&f);
            assert!(linf <= bound + 1e-12);
        }
    }

    /// BV f <= L1 of f_x for smooth fields (up to resolution tolerance).
    #[test]
    fn bv_embedding_into_derivative_l1() {
        let g = Grid::new(8.0, 512).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_smooth(&mut rng, g);
            let fx = spectral::derivative(&f).unwrap();
            assert!(bv_norm(&f) <= lp_norm(&fx, 1.0).unwrap() + 1e-6);
        }
    }

    #[test]
    fn composite_norms_zero_and_hand_value() {
        let params = NormParams::default();
        let g = Grid::new(16.0, 1024).unwrap(); // +-1 on grid
        let ladder = small_ladder();
        let zero = Trajectory::constant(ladder.clone(), Field::zeros(g)).unwrap();
        for kind in [
            CompositeKind::YT,
            CompositeKind::TNorm,
            CompositeKind::Z1,
            CompositeKind::Z2,
        ] {
            assert_eq!(composite_norms(&zero, kind, &params).unwrap(), 0.0);
        }
        // v = 1 + step(0.1,-1,1) constant in time; Y_T of (v-1):
        // L1 = 0.2, Linf = 0.1, BV = 0.2, Hölder terms vanish.
        let vm1 = Field::from_fn(g, |x| if (-1.0..1.0).contains(&x) { 0.1 } else { 0.0 }).unwrap();
        let traj = Trajectory::constant(ladder, vm1).unwrap();
        let y = composite_norms(&traj, CompositeKind::YT, &params).unwrap();
        assert!((y - 0.5).abs() < 1e-12, "Y_T = {y}");
    }

    fn random_smooth(rng: &mut ChaCha8Rng, g: Grid) -> Field {
        let l = g.half_width();
        let modes: Vec<(f64, f64, f64)> = (1..=6)
            .map(|m| {
                (
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    std::f64::consts::PI * m as f64 / l,
                )
            })
            .collect();
        Field::from_fn(g, |x| {
            modes
                .iter()
                .map(|(a, b, k)| a * (k * x).cos() + b * (k * x).sin())
                .sum()
        })
        .unwrap()
    }
}

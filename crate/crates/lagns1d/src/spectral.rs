//! Spectral plumbing: cached FFT plans, Fourier multipliers, and spectral
//! derivatives on the periodic grid.
//!
//! Convention: a field on `[-L, L)` with `n` points expands as
//! `v_i = sum_m c_m exp(i k_m x_i)` with angular wavenumbers
//! `k_m = pi * m~ / L`, `m~` the signed FFT index. Diagonal multipliers act
//! mode-wise, so the FFT phase offset from the `-L` origin cancels and no
//! phase bookkeeping is needed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{Field, Grid};
use crate::Result;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

static PLAN_CACHE: Lazy<Mutex<HashMap<usize, Arc<Plans>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plans(n: usize) -> Arc<Plans> {
    let mut cache = PLAN_CACHE.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

/// Signed angular wavenumber of FFT bin `m` on a grid of `n` points over
/// half-width `l`: `k = pi * m~ / l`.
pub fn wavenumber(m: usize, n: usize, half_width: f64) -> f64 {
    let signed = if m <= n / 2 {
        m as isize
    } else {
        m as isize - n as isize
    };
    std::f64::consts::PI * signed as f64 / half_width
}

/// Forward DFT of the samples (unnormalised).
pub fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plans(values.len()).forward.process(&mut buf);
    buf
}

/// Inverse DFT scaled by `1/n`; the imaginary residue from conjugate
/// symmetry is dropped.
pub fn inverse_real(mut coeffs: Vec<Complex64>) -> Vec<f64> {
    let n = coeffs.len();
    plans(n).inverse.process(&mut coeffs);
    let scale = 1.0 / n as f64;
    coeffs.into_iter().map(|c| c.re * scale).collect()
}

/// Apply a diagonal Fourier multiplier `k -> mult(k)` to a field.
///
/// For odd (sign-asymmetric) multipliers the Nyquist bin has no conjugate
/// partner, so callers that need a real result with an odd multiplier must
/// zero it; [`derivative`] does.
pub fn apply_multiplier(f: &Field, mult: impl Fn(f64) -> Complex64) -> Result<Field> {
    let grid = f.grid();
    let n = grid.n();
    let mut spec = forward(f.values());
    for (m, c) in spec.iter_mut().enumerate() {
        *c *= mult(wavenumber(m, n, grid.half_width()));
    }
    Field::new(grid, inverse_real(spec))
}

fn derivative_spectrum(f: &Field, taper: bool) -> (Grid, Vec<Complex64>) {
    let grid = f.grid();
    let n = grid.n();
    let mut spec = forward(f.values());
    let k_max = std::f64::consts::PI * (n / 2) as f64 / grid.half_width();
    let cutoff = 2.0 / 3.0 * k_max;
    for (m, c) in spec.iter_mut().enumerate() {
        if m == n / 2 {
            // Nyquist bin: zero for odd-order derivatives
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let k = wavenumber(m, n, grid.half_width());
        if taper && k.abs() > cutoff {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, k);
        }
    }
    (grid, spec)
}

/// Spectral derivative; mean of the result is exactly zero.
pub fn derivative(f: &Field) -> Result<Field> {
    let (grid, spec) = derivative_spectrum(f, false);
    Field::new(grid, inverse_real(spec))
}

/// Spectral derivative with the 2/3-rule high-mode cut. Used where the
/// derivative enters pointwise products, whose bandwidth doubling would
/// otherwise alias into the resolved modes.
pub fn derivative_tapered(f: &Field) -> Result<Field> {
    let (grid, spec) = derivative_spectrum(f, true);
    Field::new(grid, inverse_real(spec))
}

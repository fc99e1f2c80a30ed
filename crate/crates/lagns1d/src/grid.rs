//! Uniform periodic spatial grid, sampled fields, and graded time ladders.
//!
//! The domain is `[-L, L)` identified periodically. Every function of x in
//! the solvers lives on one of these grids; the power-of-two point count
//! makes the spacing `h = 2L/n` exact in binary floating point, so `h * n`
//! reproduces `2L` bit for bit.

use crate::{Error, Result};

/// Uniform periodic grid on `[-L, L)` with `n` points (a power of two).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Config(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid point count must be a power of two >= 16, got {n}"
            )));
        }
        Ok(Grid { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `2L/n`; exact because `n` is a power of two.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Node coordinate `x_i = -L + i h`.
    pub fn x(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Periodic distance between nodes `i` and `j`.
    pub fn periodic_distance(&self, i: usize, j: usize) -> f64 {
        let lag = i.abs_diff(j);
        lag.min(self.n - lag) as f64 * self.spacing()
    }
}

/// A real-valued function of space sampled at the grid nodes. Immutable
/// after construction; all samples are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::Config(format!(
                "field length {} does not match grid point count {}",
                values.len(),
                grid.n()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!(
                "non-finite field sample at index {bad}: {}",
                values[bad]
            )));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: vec![0.0; grid.n()],
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Field::new(grid, vec![c; grid.n()])
    }

    /// Pointwise evaluation of `f` at the grid nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Field::new(grid, grid.coords().map(f).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rectangle-rule integral over one period.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    pub fn scaled(&self, c: f64) -> Result<Field> {
        Field::new(self.grid, self.values.iter().map(|v| c * v).collect())
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn shifted(&self, c: f64) -> Result<Field> {
        Field::new(self.grid, self.values.iter().map(|v| v + c).collect())
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::Config("field grids differ".into()));
        }
        Field::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Graded time nodes `t_k = T (k/K)^q` on `[0, T]`. The grading exponent
/// `q >= 2` concentrates nodes near `t = 0`, where the `t^sigma`-weighted
/// norms and the kernel factor vary fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeLadder {
    horizon: f64,
    grading: f64,
    nodes: Vec<f64>,
}

impl TimeLadder {
    /// Build the graded family with `segments + 1` nodes.
    pub fn graded(horizon: f64, segments: usize, grading: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon <= 1.0) {
            return Err(Error::Config(format!(
                "time horizon must lie in (0, 1], got {horizon}"
            )));
        }
        if grading < 2.0 || !grading.is_finite() {
            return Err(Error::Config(format!(
                "grading exponent must be >= 2, got {grading}"
            )));
        }
        if segments < 4 {
            return Err(Error::Config(format!(
                "time ladder needs at least 4 segments, got {segments}"
            )));
        }
        let nodes: Vec<f64> = (0..=segments)
            .map(|k| horizon * (k as f64 / segments as f64).powf(grading))
            .collect();
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        Ok(TimeLadder {
            horizon,
            grading,
            nodes,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn segments(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// A time-indexed sequence of fields on a shared grid; the value at `t_0 = 0`
/// may be a rough datum.
#[derive(Debug, Clone)]
pub struct Trajectory {
    ladder: TimeLadder,
    fields: Vec<Field>,
}

impl Trajectory {
    pub fn new(ladder: TimeLadder, fields: Vec<Field>) -> Result<Self> {
        if fields.len() != ladder.len() {
            return Err(Error::Config(format!(
                "trajectory carries {} fields for {} time nodes",
                fields.len(),
                ladder.len()
            )));
        }
        let grid = fields
            .first()
            .ok_or_else(|| Error::Config("empty trajectory".into()))?
            .grid();
        if fields.iter().any(|f| f.grid() != grid) {
            return Err(Error::Config("trajectory fields on different grids".into()));
        }
        Ok(Trajectory { ladder, fields })
    }

    /// Constant-in-time trajectory `f(t) = f0`.
    pub fn constant(ladder: TimeLadder, f0: Field) -> Result<Self> {
        let fields = vec![f0; ladder.len()];
        Trajectory::new(ladder, fields)
    }

    /// Node-wise construction from `(t, x) -> value`.
    pub fn from_fn(
        ladder: TimeLadder,
        grid: Grid,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let fields = ladder
            .nodes()
            .iter()
            .map(|&t| Field::from_fn(grid, |x| f(t, x)))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::new(ladder, fields)
    }

    pub fn ladder(&self) -> &TimeLadder {
        &self.ladder
    }

    pub fn grid(&self) -> Grid {
        self.fields[0].grid()
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn field(&self, k: usize) -> &Field {
        &self.fields[k]
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn map_fields(&self, f: impl Fn(&Field) -> Result<Field>) -> Result<Trajectory> {
        let fields = self.fields.iter().map(f).collect::<Result<Vec<_>>>()?;
        Trajectory::new(self.ladder.clone(), fields)
    }

    pub fn zip_with(
        &self,
        other: &Trajectory,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Trajectory> {
        if self.ladder != other.ladder {
            return Err(Error::Config("trajectory ladders differ".into()));
        }
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.zip_with(b, &f))
            .collect::<Result<Vec<_>>>()?;
        Trajectory::new(self.ladder.clone(), fields)
    }

    pub fn sub(&self, other: &Trajectory) -> Result<Trajectory> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Trajectory) -> Result<Trajectory> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scaled(&self, c: f64) -> Result<Trajectory> {
        self.map_fields(|f| f.scaled(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_is_exact() {
        let g = Grid::new(20.0, 4096).unwrap();
        assert_eq!(g.spacing() * g.n() as f64, 40.0);
        let g = Grid::new(0.3, 128).unwrap();
        assert_eq!(g.spacing() * g.n() as f64, 0.6);
    }

    #[test]
    fn grid_rejects_bad_counts() {
        assert!(Grid::new(1.0, 15).is_err());
        assert!(Grid::new(1.0, 100).is_err());
        assert!(Grid::new(-1.0, 64).is_err());
    }

    #[test]
    fn field_rejects_nan() {
        let g = Grid::new(1.0, 16).unwrap();
        let mut vals = vec![0.0; 16];
        vals[3] = f64::NAN;
        assert!(Field::new(g, vals).is_err());
    }

    #[test]
    fn ladder_is_graded_and_bracketed() {
        let l = TimeLadder::graded(0.25, 256, 3.0).unwrap();
        assert_eq!(l.nodes()[0], 0.0);
        assert_eq!(*l.nodes().last().unwrap(), 0.25);
        assert!(l.nodes().windows(2).all(|w| w[0] < w[1]));
        // grading pushes the first interior node far below uniform spacing
        assert!(l.nodes()[1] < 0.25 / 256.0 / 100.0);
        assert!(TimeLadder::graded(0.25, 256, 1.5).is_err());
        assert!(TimeLadder::graded(1.5, 256, 3.0).is_err());
    }

    #[test]
    fn trajectory_checks_shape() {
        let g = Grid::new(1.0, 16).unwrap();
        let l = TimeLadder::graded(0.5, 8, 2.0).unwrap();
        let t = Trajectory::constant(l.clone(), Field::zeros(g)).unwrap();
        assert_eq!(t.len(), l.len());
        let short = vec![Field::zeros(g); 3];
        assert!(Trajectory::new(l, short).is_err());
    }
}

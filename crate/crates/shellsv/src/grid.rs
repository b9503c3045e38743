//! Uniform arc-length grid on a closed curve and the spectral primitives
//! built on it.
//!
//! Smooth functions sampled on the grid are treated as truncated Fourier
//! series: the periodic trapezoid rule (the plain sample mean times the
//! period) integrates them with spectral accuracy, derivatives and
//! antiderivatives act diagonally on the coefficients, and off-grid values
//! come from trigonometric interpolation.

use std::cell::RefCell;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::ShellError;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(data: &mut [Complex<f64>]) {
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_forward(data.len());
        fft.process(data);
    });
}

fn fft_inverse(data: &mut [Complex<f64>]) {
    PLANNER.with(|p| {
        let fft = p.borrow_mut().plan_fft_inverse(data.len());
        fft.process(data);
    });
}

/// Uniform periodic grid of `n` samples over one period (the perimeter).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGrid {
    n: usize,
    period: f64,
}

impl ArcGrid {
    pub fn new(n: usize, period: f64) -> Self {
        assert!(n >= 2 && n % 2 == 0, "grid size must be even and >= 2");
        assert!(period > 0.0, "period must be positive");
        ArcGrid { n, period }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.period * i as f64 / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    pub fn sample<F: FnMut(f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        self.points().map(&mut f).collect()
    }

    pub(crate) fn check_len(&self, values: &[f64]) -> Result<(), ShellError> {
        if values.len() != self.n {
            return Err(ShellError::GridMismatch {
                got: values.len(),
                expected: self.n,
            });
        }
        Ok(())
    }

    /// Periodic trapezoid rule over the full period.
    pub fn closed_integral(&self, values: &[f64]) -> Result<f64, ShellError> {
        self.check_len(values)?;
        Ok(values.iter().sum::<f64>() * self.spacing())
    }

    pub fn mean(&self, values: &[f64]) -> Result<f64, ShellError> {
        Ok(self.closed_integral(values)? / self.period)
    }

    /// Spectral derivative of the sampled periodic function.
    pub fn derivative(&self, values: &[f64]) -> Result<Vec<f64>, ShellError> {
        self.check_len(values)?;
        Ok(Spectrum::from_samples(*self, values).derivative(1).to_samples())
    }

    pub fn spectrum(&self, values: &[f64]) -> Result<Spectrum, ShellError> {
        self.check_len(values)?;
        Ok(Spectrum::from_samples(*self, values))
    }
}

/// Fourier coefficients of a real function sampled on an [`ArcGrid`].
///
/// Coefficients are stored in DFT bin order; bin `k` carries the signed
/// frequency `k` for `k <= n/2` and `k - n` above. The Nyquist bin of a
/// smooth, well-resolved function is at rounding level and is dropped by the
/// odd-order spectral operators that cannot represent it on the grid.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: ArcGrid,
    coef: Vec<Complex<f64>>,
}

impl Spectrum {
    pub fn from_samples(grid: ArcGrid, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.n);
        let mut coef: Vec<Complex<f64>> =
            values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft_forward(&mut coef);
        let scale = 1.0 / grid.n as f64;
        for c in &mut coef {
            *c *= scale;
        }
        Spectrum { grid, coef }
    }

    pub fn grid(&self) -> ArcGrid {
        self.grid
    }

    pub fn mean(&self) -> f64 {
        self.coef[0].re
    }

    /// Signed angular frequency of bin `k` (multiples of `2π / period`).
    fn signed_index(&self, k: usize) -> i64 {
        let n = self.grid.n;
        if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    pub fn to_samples(&self) -> Vec<f64> {
        let mut data = self.coef.clone();
        fft_inverse(&mut data);
        data.iter().map(|c| c.re).collect()
    }

    /// Spectral derivative of the given order.
    pub fn derivative(&self, order: usize) -> Spectrum {
        let omega = 2.0 * std::f64::consts::PI / self.grid.period;
        let n = self.grid.n;
        let mut coef = self.coef.clone();
        for (k, c) in coef.iter_mut().enumerate() {
            let m = self.signed_index(k);
            // The Nyquist mode's odd derivatives are pure sines that vanish
            // on the grid; keep the operator skew-symmetric by zeroing it.
            if k == n / 2 && order % 2 == 1 {
                *c = Complex::new(0.0, 0.0);
                continue;
            }
            let factor = Complex::new(0.0, m as f64 * omega).powu(order as u32);
            *c *= factor;
        }
        Spectrum { grid: self.grid, coef }
    }

    /// Antiderivative of the zero-mean part (the mean must be integrated
    /// separately as a linear term). The constant mode of the result is set
    /// to zero; shift by `-eval(0.0)` for an antiderivative vanishing at 0.
    pub fn antiderivative_zero_mean(&self) -> Spectrum {
        let omega = 2.0 * std::f64::consts::PI / self.grid.period;
        let n = self.grid.n;
        let mut coef = self.coef.clone();
        coef[0] = Complex::new(0.0, 0.0);
        for (k, c) in coef.iter_mut().enumerate().skip(1) {
            if k == n / 2 {
                *c = Complex::new(0.0, 0.0);
                continue;
            }
            let m = self.signed_index(k);
            *c /= Complex::new(0.0, m as f64 * omega);
        }
        Spectrum { grid: self.grid, coef }
    }

    /// Magnitude of the highest resolved mode; a resolution diagnostic.
    pub fn nyquist_magnitude(&self) -> f64 {
        self.coef[self.grid.n / 2].norm()
    }

    /// Trigonometric interpolation at an arbitrary point.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.grid.n;
        let omega = 2.0 * std::f64::consts::PI / self.grid.period;
        let mut acc = self.coef[0].re;
        for k in 1..n / 2 {
            let phase = omega * k as f64 * s;
            let e = Complex::new(phase.cos(), phase.sin());
            acc += 2.0 * (self.coef[k] * e).re;
        }
        // Symmetric treatment of the Nyquist bin.
        let phase = omega * (n / 2) as f64 * s;
        acc += self.coef[n / 2].re * phase.cos();
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn grid() -> ArcGrid {
        ArcGrid::new(64, 2.0 * PI)
    }

    #[test]
    fn closed_integral_of_constant_is_period() {
        let g = grid();
        let one = vec![1.0; g.len()];
        assert_relative_eq!(g.closed_integral(&one).unwrap(), 2.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn closed_integral_of_sine_vanishes() {
        let g = grid();
        let f = g.sample(|s| s.sin());
        assert!(g.closed_integral(&f).unwrap().abs() < 1e-14);
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let g = grid();
        let f = g.sample(|s| (3.0 * s).sin());
        let df = g.derivative(&f).unwrap();
        for (i, s) in g.points().enumerate() {
            assert_relative_eq!(df[i], 3.0 * (3.0 * s).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn antiderivative_inverts_derivative_on_zero_mean() {
        let g = grid();
        let f = g.sample(|s| (2.0 * s).cos() - 0.5 * (5.0 * s).sin());
        let spec = g.spectrum(&f).unwrap();
        let back = spec.derivative(1).antiderivative_zero_mean().to_samples();
        for (a, b) in back.iter().zip(f.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolation_matches_off_grid() {
        let g = grid();
        let f = g.sample(|s| (2.0 * s).cos() + 0.25 * (7.0 * s).sin());
        let spec = g.spectrum(&f).unwrap();
        for &s in &[0.1234, 1.77, 4.9, 6.2, 2.0 * PI] {
            let exact = (2.0 * s).cos() + 0.25 * (7.0 * s).sin();
            assert_relative_eq!(spec.eval(s), exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let g = grid();
        let short = vec![0.0; 5];
        assert!(matches!(
            g.closed_integral(&short),
            Err(ShellError::GridMismatch { got: 5, expected: 64 })
        ));
    }
}

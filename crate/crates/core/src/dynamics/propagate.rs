//! Time propagation of packed states under a [`Generator`].

use super::generator::{Affine, Generator};

/// Propagation scheme for the full master equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integrator {
    /// Classical fixed-step fourth-order Runge-Kutta. `None` selects
    /// `0.05 / max(||A||, gamma)`.
    Rk4 { dt: Option<f64> },
    /// Chebyshev expansion of `exp(L t)` over chunks, truncated once the
    /// terms fall below `tol` relative to the state.
    Chebyshev { tol: f64 },
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::Rk4 { dt: None }
    }
}

impl Integrator {
    pub fn chebyshev() -> Self {
        Integrator::Chebyshev { tol: 1e-13 }
    }
}

impl std::fmt::Display for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Integrator::Rk4 { dt: Some(dt) } => write!(f, "rk4(dt={dt})"),
            Integrator::Rk4 { dt: None } => write!(f, "rk4(dt=auto)"),
            Integrator::Chebyshev { tol } => write!(f, "chebyshev(tol={tol:e})"),
        }
    }
}

/// Default RK4 step for a generator.
pub fn default_rk4_step(gen: &Generator) -> f64 {
    0.05 / gen.norm_estimate().max(1e-12)
}

/// Advances packed states in place.
pub struct Propagator<'a> {
    gen: &'a Generator,
    scheme: Integrator,
    buf: Vec<f64>,
    work: [Vec<f64>; 4],
    /// Generator applications so far.
    pub applications: u64,
}

impl<'a> Propagator<'a> {
    pub fn new(gen: &'a Generator, scheme: Integrator) -> Self {
        let d = gen.dim();
        Self {
            gen,
            scheme,
            buf: gen.scratch(),
            work: std::array::from_fn(|_| vec![0.0; d]),
            applications: 0,
        }
    }

    /// Evolves `x` forward by `duration`.
    pub fn advance(&mut self, x: &mut [f64], duration: f64) {
        if duration <= 0.0 {
            return;
        }
        match self.scheme {
            Integrator::Rk4 { dt } => {
                let dt = dt.unwrap_or_else(|| default_rk4_step(self.gen));
                let steps = (duration / dt).ceil().max(1.0) as usize;
                let h = duration / steps as f64;
                for _ in 0..steps {
                    self.rk4_step(x, h);
                }
            }
            Integrator::Chebyshev { tol } => {
                let (imag, real, _) = self.gen.spectral_box();
                // The recurrence grows like exp(real * tau) before cancelling,
                // so the real half-width bounds the chunk; the imaginary one
                // only keeps the Bessel tables short.
                let max_chunk = (2000.0 / imag.max(1e-12)).min(16.0 / real.max(1e-12));
                let chunks = (duration / max_chunk).ceil().max(1.0) as usize;
                let tau = duration / chunks as f64;
                for _ in 0..chunks {
                    self.chebyshev_chunk(x, tau, tol);
                }
            }
        }
    }

    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        self.applications += 1;
        self.gen.apply(x, out, &mut self.buf);
    }

    fn rk4_step(&mut self, x: &mut [f64], h: f64) {
        let [mut k, mut acc, mut stage, mut tmp] = std::mem::take(&mut self.work);
        // k1
        self.apply(x, &mut k);
        for ((a, s), (&xi, &ki)) in acc.iter_mut().zip(stage.iter_mut()).zip(x.iter().zip(&k)) {
            *a = ki;
            *s = xi + 0.5 * h * ki;
        }
        // k2
        self.apply(&stage, &mut k);
        for ((a, s), (&xi, &ki)) in acc.iter_mut().zip(stage.iter_mut()).zip(x.iter().zip(&k)) {
            *a += 2.0 * ki;
            *s = xi + 0.5 * h * ki;
        }
        // k3
        self.apply(&stage, &mut k);
        for ((a, s), (&xi, &ki)) in acc.iter_mut().zip(tmp.iter_mut()).zip(x.iter().zip(&k)) {
            *a += 2.0 * ki;
            *s = xi + h * ki;
        }
        // k4
        self.apply(&tmp, &mut k);
        for ((xi, &a), &ki) in x.iter_mut().zip(&acc).zip(&k) {
            *xi += h / 6.0 * (a + ki);
        }
        self.work = [k, acc, stage, tmp];
    }

    /// `x <- exp(L tau) x` by a Chebyshev series on an ellipse around the
    /// spectrum: imaginary half-width `a`, real half-width `b`, centre `c`.
    ///
    /// With foci on the imaginary axis (`a >= b`, `f = sqrt(a^2 - b^2)`):
    /// `exp(tau (c + f z)) = e^{c tau} sum_k (2 - d_k0) J_k(f tau) S_k(z)`,
    /// `S_{k+1} = 2 z S_k + S_{k-1}`. With real foci the same holds with
    /// `I_k` and the usual `T_{k+1} = 2 z T_k - T_{k-1}`.
    fn chebyshev_chunk(&mut self, x: &mut [f64], tau: f64, tol: f64) {
        let (a, b, c) = self.gen.spectral_box();
        let imaginary_foci = a >= b;
        let f = (a * a - b * b).abs().sqrt().max(0.25 * a.max(b)).max(1e-12);
        let arg = f * tau;
        let coeffs = if imaginary_foci {
            bessel_j_series(arg, tol)
        } else {
            scaled_bessel_i_series(arg, tol)
        };
        // Prefactor: e^{c tau} for J; e^{(c + f) tau} for the scaled I series.
        let scale = if imaginary_foci {
            (c * tau).exp()
        } else {
            ((c + f) * tau).exp()
        };
        let sign = if imaginary_foci { 1.0 } else { -1.0 };
        let inv_f = 1.0 / f;
        let x_norm = max_abs(x).max(1e-300);

        let [mut prev, mut cur, mut next, mut sum] = std::mem::take(&mut self.work);
        prev.copy_from_slice(x);
        for (s, &v) in sum.iter_mut().zip(x.iter()) {
            *s = coeffs[0] * v;
        }
        // S_1 = z x = (L x - c x) / f
        self.applications += 1;
        self.gen.apply_affine(
            &prev,
            &mut cur,
            &mut self.buf,
            Affine {
                alpha: inv_f,
                beta: -c * inv_f,
                extra: None,
                acc: Some((&mut sum, 2.0 * coeffs[1])),
            },
        );
        let mut small = 0;
        for (k, &ck) in coeffs.iter().enumerate().skip(2) {
            // S_{k} = 2 z S_{k-1} +/- S_{k-2}
            self.applications += 1;
            let term_norm = self.gen.apply_affine(
                &cur,
                &mut next,
                &mut self.buf,
                Affine {
                    alpha: 2.0 * inv_f,
                    beta: -2.0 * c * inv_f,
                    extra: Some((&prev, sign)),
                    acc: Some((&mut sum, 2.0 * ck)),
                },
            );
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
            if k as f64 > arg && term_norm < tol * x_norm {
                small += 1;
                if small >= 2 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        for (xi, &s) in x.iter_mut().zip(&sum) {
            *xi = scale * s;
        }
        self.work = [prev, cur, next, sum];
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Number of terms after which `J_k(x)` (and `e^-x I_k(x)`) are far below
/// `tol` for every `k` beyond it.
fn series_length(x: f64, tol: f64) -> usize {
    let digits = -tol.log10().max(-300.0);
    (x + 3.0 * digits * (x.max(1.0)).cbrt() + 2.0 * digits + 10.0).ceil() as usize
}

/// `J_0(x) .. J_K(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 sum J_2k = 1`.
pub(crate) fn bessel_j_series(x: f64, tol: f64) -> Vec<f64> {
    let len = series_length(x, tol);
    if x == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    let start = len + 20 + (x.sqrt() * 4.0) as usize;
    let mut vals = vec![0.0; start + 2];
    let (mut hi, mut mid) = (0.0f64, 1e-300f64);
    for k in (0..=start).rev() {
        // mid = J_{k+1} (unnormalized), hi = J_{k+2}
        let lo = 2.0 * (k + 1) as f64 / x * mid - hi;
        hi = mid;
        mid = lo;
        vals[k] = lo;
        if lo.abs() > 1e250 {
            for v in vals[k..].iter_mut() {
                *v *= 1e-250;
            }
            hi *= 1e-250;
            mid *= 1e-250;
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(len);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

/// `e^-x I_0(x) .. e^-x I_K(x)`, normalized with `I_0 + 2 sum I_k = e^x`.
pub(crate) fn scaled_bessel_i_series(x: f64, tol: f64) -> Vec<f64> {
    let len = series_length(x, tol);
    if x == 0.0 {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        return v;
    }
    let start = len + 20 + (x.sqrt() * 4.0) as usize;
    let mut vals = vec![0.0; start + 2];
    let (mut hi, mut mid) = (0.0f64, 1e-300f64);
    for k in (0..=start).rev() {
        let lo = 2.0 * (k + 1) as f64 / x * mid + hi;
        hi = mid;
        mid = lo;
        vals[k] = lo;
        if lo.abs() > 1e250 {
            for v in vals[k..].iter_mut() {
                *v *= 1e-250;
            }
            hi *= 1e-250;
            mid *= 1e-250;
        }
    }
    let norm = vals[0] + 2.0 * vals[1..].iter().sum::<f64>();
    vals.truncate(len);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

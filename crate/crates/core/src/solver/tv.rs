//! Total-variation regularized decryption.
//!
//! Minimizes `‖K·O − C‖² + λ·TV(O)` where `TV` sums smoothed absolute
//! differences between horizontally and vertically adjacent pixels,
//! `|t| ≈ sqrt(t² + ε²) − ε`. The minimizer is nonlinear conjugate gradients
//! (Polak-Ribière with restarts) from a zero image. Each step goes to the
//! minimum along the search direction, located by regula falsi on the slope.
//! Along a direction the data term is an explicit quadratic and the TV term
//! is a sum of scalar convex functions, so the line search needs no extra
//! products with `K`.

use ndarray::{Array1, Array2, ArrayView1};

use super::SolverConfig;
use crate::error::{Result, SpiError};
use crate::system::{Ciphertext, ObjectImage, PatternKey};

/// Smoothing constant of the absolute value inside the TV term.
pub const TV_SMOOTHING: f64 = 1e-6;

/// Recompute the data residual from scratch this often to shed drift.
const RESIDUAL_REFRESH: usize = 50;
const LINE_SEARCH_STEPS: usize = 100;

/// The smoothed objective on a `width × height` grid.
#[derive(Debug, Clone)]
pub struct TvObjective {
    k: Array2<f64>,
    kt: Array2<f64>,
    c: Array1<f64>,
    width: usize,
    height: usize,
    weight: f64,
    eps: f64,
}

impl TvObjective {
    pub fn new(key: &PatternKey, cipher: &Ciphertext, weight: f64) -> Result<Self> {
        if cipher.len() != key.patterns() {
            return Err(SpiError::DimensionMismatch {
                what: "ciphertext length vs key M",
                expected: key.patterns(),
                got: cipher.len(),
            });
        }
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(SpiError::InvalidConfig(format!("tv_weight must be >= 0, got {weight}")));
        }
        if let Some(i) = cipher.values().iter().position(|v| !v.is_finite()) {
            return Err(SpiError::NonFinite(i));
        }
        let k = key.to_f64();
        Ok(Self {
            kt: k.t().as_standard_layout().into_owned(),
            k,
            c: Array1::from(cipher.values().to_vec()),
            width: key.width(),
            height: key.height(),
            weight,
            eps: TV_SMOOTHING,
        })
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn edge_count(&self) -> usize {
        (self.width - 1) * self.height + self.width * (self.height - 1)
    }

    /// Forward differences `D·O`: horizontal edges first, then vertical.
    fn differences(&self, o: ArrayView1<'_, f64>) -> Array1<f64> {
        let (w, h) = (self.width, self.height);
        let mut d = Array1::zeros(self.edge_count());
        let mut e = 0;
        for y in 0..h {
            for x in 0..w - 1 {
                d[e] = o[y * w + x + 1] - o[y * w + x];
                e += 1;
            }
        }
        for y in 0..h - 1 {
            for x in 0..w {
                d[e] = o[(y + 1) * w + x] - o[y * w + x];
                e += 1;
            }
        }
        d
    }

    /// `Dᵀ·v`, accumulated into `out`.
    fn add_differences_transposed(&self, v: &Array1<f64>, out: &mut Array1<f64>) {
        let (w, h) = (self.width, self.height);
        let mut e = 0;
        for y in 0..h {
            for x in 0..w - 1 {
                out[y * w + x + 1] += v[e];
                out[y * w + x] -= v[e];
                e += 1;
            }
        }
        for y in 0..h - 1 {
            for x in 0..w {
                out[(y + 1) * w + x] += v[e];
                out[y * w + x] -= v[e];
                e += 1;
            }
        }
    }

    fn smooth_abs(&self, t: f64) -> f64 {
        (t * t + self.eps * self.eps).sqrt() - self.eps
    }

    fn smooth_sign(&self, t: f64) -> f64 {
        t / (t * t + self.eps * self.eps).sqrt()
    }

    pub fn value(&self, o: &[f64]) -> f64 {
        let o = ArrayView1::from(o);
        let r = self.k.dot(&o) - &self.c;
        let tv: f64 = self.differences(o).iter().map(|&d| self.smooth_abs(d)).sum();
        r.dot(&r) + self.weight * tv
    }

    pub fn gradient(&self, o: &[f64]) -> Vec<f64> {
        let o = ArrayView1::from(o);
        let r = self.k.dot(&o) - &self.c;
        let d = self.differences(o);
        self.gradient_from(&r, &d).to_vec()
    }

    fn gradient_from(&self, r: &Array1<f64>, d: &Array1<f64>) -> Array1<f64> {
        let mut g = self.kt.dot(r) * 2.0;
        if self.weight > 0.0 {
            let psi = d.mapv(|t| self.weight * self.smooth_sign(t));
            self.add_differences_transposed(&psi, &mut g);
        }
        g
    }

    /// Derivative of the objective along `q = K·p`, `e = D·p` at step `t`.
    fn directional_slope(&self, rq: f64, qq: f64, d: &Array1<f64>, e: &Array1<f64>, t: f64) -> f64 {
        let tv: f64 = if self.weight > 0.0 {
            d.iter()
                .zip(e)
                .filter(|(_, &e)| e != 0.0)
                .map(|(&d, &e)| e * self.smooth_sign(d + t * e))
                .sum()
        } else {
            0.0
        };
        2.0 * (rq + t * qq) + self.weight * tv
    }

    /// Step length minimizing the objective along the direction.
    fn exact_step(&self, rq: f64, qq: f64, d: &Array1<f64>, e: &Array1<f64>) -> f64 {
        let slope0 = self.directional_slope(rq, qq, d, e, 0.0);
        if !(slope0 < 0.0) {
            return 0.0;
        }
        let mut lo = 0.0;
        let mut hi = if qq > 0.0 { (-rq / qq).abs().max(1e-12) } else { 1.0 };
        let mut grow = 0;
        while self.directional_slope(rq, qq, d, e, hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            grow += 1;
            if grow > 200 {
                return lo;
            }
        }
        // Illinois variant of regula falsi on the slope, which is increasing in t
        let (mut f_lo, mut f_hi) = (self.directional_slope(rq, qq, d, e, lo), self.directional_slope(rq, qq, d, e, hi));
        let tol = 1e-12 * slope0.abs();
        let mut side = 0i8;
        let mut best = 0.5 * (lo + hi);
        for _ in 0..LINE_SEARCH_STEPS {
            let mut t = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if !(t > lo && t < hi) {
                t = 0.5 * (lo + hi);
            }
            best = t;
            let f = self.directional_slope(rq, qq, d, e, t);
            if f.abs() <= tol || hi - lo <= 1e-15 * hi {
                break;
            }
            if f < 0.0 {
                lo = t;
                f_lo = f;
                if side == -1 {
                    f_hi *= 0.5;
                }
                side = -1;
            } else {
                hi = t;
                f_hi = f;
                if side == 1 {
                    f_lo *= 0.5;
                }
                side = 1;
            }
        }
        best
    }
}

/// Raw minimizer output before clamping.
#[derive(Debug, Clone)]
pub struct TvOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Objective value before the first step and after each one.
    pub objective_trace: Vec<f64>,
}

/// Decrypts `cipher` with `key` by TV-regularized least squares; the result
/// is clamped into `[0, 1]`.
pub fn tv_reconstruct(key: &PatternKey, cipher: &Ciphertext, cfg: &SolverConfig) -> Result<ObjectImage> {
    let out = tv_reconstruct_traced(key, cipher, cfg)?;
    ObjectImage::from_clamped(key.width(), key.height(), out.solution)
}

pub fn tv_reconstruct_traced(key: &PatternKey, cipher: &Ciphertext, cfg: &SolverConfig) -> Result<TvOutcome> {
    cfg.validate()?;
    if cfg.tv_weight <= 0.0 {
        return Err(SpiError::InvalidConfig(
            "tv_reconstruct needs tv_weight > 0; use cgd_solve for plain least squares".into(),
        ));
    }
    let obj = TvObjective::new(key, cipher, cfg.tv_weight)?;
    Ok(minimize(&obj, cfg))
}

fn minimize(obj: &TvObjective, cfg: &SolverConfig) -> TvOutcome {
    let n = obj.len();
    let mut o = Array1::<f64>::zeros(n);
    let mut r = -&obj.c;
    let mut d = Array1::zeros(obj.edge_count());
    let mut g = obj.gradient_from(&r, &d);
    let g0_norm = g.dot(&g).sqrt();
    let mut p = -&g;
    let mut trace = vec![r.dot(&r)];
    let mut iterations = 0;
    if g0_norm == 0.0 {
        return TvOutcome {
            solution: o.to_vec(),
            iterations,
            objective_trace: trace,
        };
    }

    while iterations < cfg.max_iterations {
        let q = obj.k.dot(&p);
        let e = obj.differences(p.view());
        let step = obj.exact_step(r.dot(&q), q.dot(&q), &d, &e);
        if step == 0.0 {
            break;
        }
        o.scaled_add(step, &p);
        iterations += 1;
        if iterations % RESIDUAL_REFRESH == 0 {
            r = obj.k.dot(&o) - &obj.c;
            d = obj.differences(o.view());
        } else {
            r.scaled_add(step, &q);
            d.scaled_add(step, &e);
        }
        let tv: f64 = d.iter().map(|&t| obj.smooth_abs(t)).sum();
        trace.push(r.dot(&r) + obj.weight * tv);

        let g_next = obj.gradient_from(&r, &d);
        if g_next.dot(&g_next).sqrt() <= cfg.residual_tolerance * g0_norm {
            break;
        }
        let beta = (g_next.dot(&(&g_next - &g)) / g.dot(&g)).max(0.0);
        p = &p * beta - &g_next;
        if p.dot(&g_next) >= 0.0 {
            p = -&g_next;
        }
        g = g_next;
    }

    TvOutcome {
        solution: o.to_vec(),
        iterations,
        objective_trace: trace,
    }
}

//! Conjugate gradients on the normal equations `AᵀA x = Aᵀb`.
//!
//! [`cgd_solve`] is the single right-hand-side solver and only touches `A`
//! through matrix-vector products. [`cgd_solve_many`] runs one independent
//! solve per column of `B` in lockstep so the products become matrix-matrix
//! products; every column follows exactly the recurrence of its own solve and
//! stops on its own residual.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, ShapeBuilder, Zip};

use super::{LinearSystem, SolverConfig};
use crate::error::{Result, SpiError};

/// Stop once `‖Aᵀ(b − Ax)‖` falls this far below `‖Aᵀb‖`: the iterate is a
/// least-squares minimizer to working precision even if `b` is not in the
/// range of `A`.
const NORMAL_RESIDUAL_FLOOR: f64 = 1e-13;

/// Result of a single solve. `final_residual` is `‖Ax − b‖ / ‖b‖`.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Array1<f64>,
    pub iterations: usize,
    pub final_residual: f64,
}

/// Result of a batched solve; column `j` of `solutions` solves column `j` of `B`.
#[derive(Debug, Clone)]
pub struct MultiSolveOutcome {
    pub solutions: Array2<f64>,
    pub iterations: Vec<usize>,
    pub final_residuals: Vec<f64>,
}

fn require_plain_least_squares(cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    if cfg.tv_weight != 0.0 {
        return Err(SpiError::InvalidConfig(
            "cgd_solve is the unregularized path; use tv_reconstruct for tv_weight > 0".into(),
        ));
    }
    Ok(())
}

fn norm(v: ArrayView1<'_, f64>) -> f64 {
    dot(v, v).sqrt()
}

/// Inner product with a summation order fixed by index alone, so a column
/// gives the same bits whatever the memory layout of its batch.
fn dot(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    let mut acc = [0.0f64; 4];
    for (i, (x, y)) in a.iter().zip(b.iter()).enumerate() {
        acc[i % 4] += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3])
}

pub fn cgd_solve(sys: &LinearSystem, cfg: &SolverConfig) -> Result<SolveOutcome> {
    cgls(sys, cfg, None)
}

/// Same as [`cgd_solve`], also returning the relative residual before the
/// first iteration and after each one.
pub fn cgd_solve_traced(sys: &LinearSystem, cfg: &SolverConfig) -> Result<(SolveOutcome, Vec<f64>)> {
    let mut trace = Vec::new();
    let out = cgls(sys, cfg, Some(&mut trace))?;
    Ok((out, trace))
}

fn cgls(sys: &LinearSystem, cfg: &SolverConfig, mut trace: Option<&mut Vec<f64>>) -> Result<SolveOutcome> {
    require_plain_least_squares(cfg)?;
    let a = sys.matrix();
    let b = sys.rhs();
    let b_norm = norm(b.view());
    let mut x = Array1::zeros(a.ncols());
    if b_norm == 0.0 {
        if let Some(t) = trace.as_deref_mut() {
            t.push(0.0);
        }
        return Ok(SolveOutcome {
            solution: x,
            iterations: 0,
            final_residual: 0.0,
        });
    }

    let mut r = b.clone();
    let mut s = a.t().dot(&r);
    let mut p = s.clone();
    let mut gamma = s.dot(&s);
    let gamma_floor = gamma * NORMAL_RESIDUAL_FLOOR * NORMAL_RESIDUAL_FLOOR;
    let mut rel = 1.0;
    if let Some(t) = trace.as_deref_mut() {
        t.push(rel);
    }
    let mut iterations = 0;

    while iterations < cfg.max_iterations && rel > cfg.residual_tolerance && gamma > gamma_floor {
        let q = a.dot(&p);
        let delta = q.dot(&q);
        if delta == 0.0 {
            break;
        }
        let alpha = gamma / delta;
        x.scaled_add(alpha, &p);
        r.scaled_add(-alpha, &q);
        iterations += 1;
        rel = norm(r.view()) / b_norm;
        if let Some(t) = trace.as_deref_mut() {
            t.push(rel);
        }
        s = a.t().dot(&r);
        let gamma_next = s.dot(&s);
        let beta = gamma_next / gamma;
        gamma = gamma_next;
        Zip::from(&mut p).and(&s).for_each(|p, &s| *p = s + beta * *p);
    }

    Ok(SolveOutcome {
        solution: x,
        iterations,
        final_residual: rel,
    })
}

/// Columns solved together in one lockstep block.
const BLOCK_COLUMNS: usize = 64;
/// The Gram-matrix route tracks `‖Ax − b‖` through a recurrence that loses
/// accuracy near machine precision; below this relative level the residual
/// is recomputed from `A` before a column may stop.
const ESTIMATE_TRUST_FLOOR: f64 = 1e-5;
const EXACT_CHECK_EVERY: usize = 10;

/// Solves `A x_j ≈ b_j` for every column `b_j` of `b` (rows = measurements).
///
/// When `A` has many more rows than half its column count the solver works on
/// the Gram matrix `AᵀA`, formed once and shared by every column; otherwise it
/// applies `A` and `Aᵀ` directly. Both routes run the same conjugate-gradient
/// recurrence from a zero start.
pub fn cgd_solve_many(
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
    cfg: &SolverConfig,
) -> Result<MultiSolveOutcome> {
    require_plain_least_squares(cfg)?;
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return Err(SpiError::InvalidDimensions(format!(
            "system matrix must be non-empty, got {rows}x{cols}"
        )));
    }
    if b.nrows() != rows {
        return Err(SpiError::DimensionMismatch {
            what: "right-hand side rows",
            expected: rows,
            got: b.nrows(),
        });
    }
    if let Some(i) = a.iter().chain(b.iter()).position(|v| !v.is_finite()) {
        return Err(SpiError::NonFinite(i));
    }

    let a = a.as_standard_layout();
    let a = a.view();
    let gram = (cols < 2 * rows).then(|| a.t().dot(&a));
    let k = b.ncols();
    let starts: Vec<usize> = (0..k).step_by(BLOCK_COLUMNS).collect();

    let run = |&start: &usize| {
        let end = (start + BLOCK_COLUMNS).min(k);
        let block = b.slice(s![.., start..end]);
        match &gram {
            Some(g) => solve_block_gram(a, g.view(), block, cfg),
            None => solve_block_direct(a, block, cfg),
        }
    };

    #[cfg(feature = "parallel")]
    let blocks: Vec<BlockResult> = {
        use rayon::prelude::*;
        starts.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let blocks: Vec<BlockResult> = starts.iter().map(run).collect();

    let mut solutions = Array2::zeros((cols, k));
    let mut iterations = Vec::with_capacity(k);
    let mut final_residuals = Vec::with_capacity(k);
    for (start, block) in starts.into_iter().zip(blocks) {
        let width = block.iterations.len();
        solutions
            .slice_mut(s![.., start..start + width])
            .assign(&block.solutions);
        iterations.extend(block.iterations);
        final_residuals.extend(block.residuals);
    }
    Ok(MultiSolveOutcome {
        solutions,
        iterations,
        final_residuals,
    })
}

struct BlockResult {
    solutions: Array2<f64>,
    iterations: Vec<usize>,
    residuals: Vec<f64>,
}

impl BlockResult {
    fn new(cols: usize, k: usize) -> Self {
        Self {
            solutions: Array2::zeros((cols, k)),
            iterations: vec![0; k],
            residuals: vec![0.0; k],
        }
    }
}

/// Per-column state of the lockstep iteration, columns stored contiguously.
struct Lockstep {
    /// Original column index of each active column.
    ids: Vec<usize>,
    x: Array2<f64>,
    p: Array2<f64>,
    /// Normal-equation residual `Aᵀ(b − Ax)`.
    s: Array2<f64>,
    gamma: Vec<f64>,
    gamma_floor: Vec<f64>,
}

impl Lockstep {
    fn start(s: Array2<f64>, ids: Vec<usize>) -> Self {
        let gamma: Vec<f64> = s.columns().into_iter().map(|c| dot(c, c)).collect();
        let gamma_floor = gamma
            .iter()
            .map(|g| g * NORMAL_RESIDUAL_FLOOR * NORMAL_RESIDUAL_FLOOR)
            .collect();
        let x = Array2::zeros(s.raw_dim().f());
        Self {
            ids,
            x,
            p: s.clone(),
            s,
            gamma,
            gamma_floor,
        }
    }

    fn width(&self) -> usize {
        self.ids.len()
    }

    /// `x += α p`, `s −= α w` for each column, returning the α used.
    fn step(&mut self, w: &Array2<f64>) -> Vec<Option<f64>> {
        let mut alphas = Vec::with_capacity(self.width());
        for j in 0..self.width() {
            let delta = dot(self.p.column(j), w.column(j));
            if !(delta > 0.0) {
                alphas.push(None);
                continue;
            }
            let alpha = self.gamma[j] / delta;
            axpy(alpha, self.p.column(j), self.x.column_mut(j));
            axpy(-alpha, w.column(j), self.s.column_mut(j));
            alphas.push(Some(alpha));
        }
        alphas
    }

    /// Refreshes `γ` and the search directions; flags columns at a
    /// least-squares minimum.
    fn update_directions(&mut self) -> Vec<bool> {
        let mut exhausted = Vec::with_capacity(self.width());
        for j in 0..self.width() {
            let s = self.s.column(j);
            let gamma_next = dot(s, s);
            let beta = gamma_next / self.gamma[j];
            self.gamma[j] = gamma_next;
            Zip::from(self.p.column_mut(j))
                .and(self.s.column(j))
                .for_each(|p, &s| *p = s + beta * *p);
            exhausted.push(gamma_next <= self.gamma_floor[j]);
        }
        exhausted
    }

    /// Drops the columns flagged in `done`, returning their positions.
    fn retire(&mut self, done: &[bool]) -> Vec<usize> {
        let keep: Vec<usize> = (0..self.width()).filter(|&j| !done[j]).collect();
        let retired: Vec<usize> = (0..self.width()).filter(|&j| done[j]).collect();
        if retired.is_empty() {
            return retired;
        }
        self.x = select_columns(&self.x, &keep);
        self.p = select_columns(&self.p, &keep);
        self.s = select_columns(&self.s, &keep);
        self.gamma = keep.iter().map(|&j| self.gamma[j]).collect();
        self.gamma_floor = keep.iter().map(|&j| self.gamma_floor[j]).collect();
        self.ids = keep.iter().map(|&j| self.ids[j]).collect();
        retired
    }
}

fn axpy(alpha: f64, x: ArrayView1<'_, f64>, mut y: ArrayViewMut1<'_, f64>) {
    Zip::from(&mut y).and(&x).for_each(|y, &x| *y += alpha * x);
}

fn select_columns(m: &Array2<f64>, keep: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros((m.nrows(), keep.len()).f());
    for (dst, &j) in keep.iter().enumerate() {
        out.column_mut(dst).assign(&m.column(j));
    }
    out
}

fn column_norms(m: ArrayView2<'_, f64>) -> Vec<f64> {
    m.columns().into_iter().map(|c| norm(c)).collect()
}

fn to_f_layout(m: ArrayView2<'_, f64>) -> Array2<f64> {
    let mut out = Array2::zeros(m.raw_dim().f());
    out.assign(&m);
    out
}

/// Lockstep CGLS applying `A` and `Aᵀ` directly; used when rows are few.
fn solve_block_direct(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, cfg: &SolverConfig) -> BlockResult {
    let k = b.ncols();
    let mut out = BlockResult::new(a.ncols(), k);
    let b_norms = column_norms(b);
    let live: Vec<usize> = (0..k).filter(|&j| b_norms[j] > 0.0).collect();
    if live.is_empty() {
        return out;
    }
    let mut r = select_columns(&to_f_layout(b), &live);
    let mut state = Lockstep::start(to_f_layout(a.t().dot(&r).view()), live);
    let mut iteration = 0;

    while state.width() > 0 {
        if iteration == cfg.max_iterations {
            for (j, &id) in state.ids.iter().enumerate() {
                out.residuals[id] = norm(r.column(j)) / b_norms[id];
            }
            finish(&mut out, &state, &(0..state.width()).collect::<Vec<_>>(), iteration);
            break;
        }
        let q = a.dot(&state.p);
        let mut done = vec![false; state.width()];
        for j in 0..state.width() {
            let delta = dot(q.column(j), q.column(j));
            if !(delta > 0.0) {
                done[j] = true;
                continue;
            }
            let alpha = state.gamma[j] / delta;
            axpy(alpha, state.p.column(j), state.x.column_mut(j));
            axpy(-alpha, q.column(j), r.column_mut(j));
        }
        iteration += 1;
        state.s = to_f_layout(a.t().dot(&r).view());
        let exhausted = state.update_directions();
        for j in 0..state.width() {
            let id = state.ids[j];
            let rel = norm(r.column(j)) / b_norms[id];
            out.residuals[id] = rel;
            if rel <= cfg.residual_tolerance || exhausted[j] {
                done[j] = true;
            }
        }
        let retired_pos: Vec<usize> = (0..state.width()).filter(|&j| done[j]).collect();
        if !retired_pos.is_empty() {
            finish(&mut out, &state, &retired_pos, iteration);
            let keep: Vec<usize> = (0..state.width()).filter(|&j| !done[j]).collect();
            r = select_columns(&r, &keep);
            state.retire(&done);
        }
    }
    out
}

/// Lockstep conjugate gradients on the shared Gram matrix `G = AᵀA`.
fn solve_block_gram(
    a: ArrayView2<'_, f64>,
    gram: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
    cfg: &SolverConfig,
) -> BlockResult {
    let k = b.ncols();
    let mut out = BlockResult::new(a.ncols(), k);
    let b_norms = column_norms(b);
    let live: Vec<usize> = (0..k).filter(|&j| b_norms[j] > 0.0).collect();
    if live.is_empty() {
        return out;
    }
    let b_live = select_columns(&to_f_layout(b), &live);
    let atb_all = to_f_layout(a.t().dot(&b_live).view());
    let mut atb = atb_all.clone();
    let mut state = Lockstep::start(atb_all, live);
    let mut iteration = 0;

    while state.width() > 0 {
        if iteration == cfg.max_iterations {
            let all: Vec<usize> = (0..state.width()).collect();
            for (j, rel) in exact_residuals(a, b, &state, &all, &b_norms) {
                out.residuals[state.ids[j]] = rel;
            }
            finish(&mut out, &state, &all, iteration);
            break;
        }
        let w = gram.dot(&state.p);
        let alphas = state.step(&w);
        iteration += 1;
        let exhausted = state.update_directions();

        let mut done: Vec<bool> = alphas.iter().zip(&exhausted).map(|(a, &e)| a.is_none() || e).collect();
        let mut to_check = Vec::new();
        for j in 0..state.width() {
            let id = state.ids[j];
            let bb = b_norms[id] * b_norms[id];
            let x = state.x.column(j);
            let est2 = bb - dot(x, atb.column(j)) - dot(x, state.s.column(j));
            let est = est2.max(0.0).sqrt() / b_norms[id];
            out.residuals[id] = est;
            if done[j] || (est < ESTIMATE_TRUST_FLOOR && iteration % EXACT_CHECK_EVERY == 0) {
                to_check.push(j);
            }
        }
        if !to_check.is_empty() {
            for (j, rel) in exact_residuals(a, b, &state, &to_check, &b_norms) {
                out.residuals[state.ids[j]] = rel;
                if rel <= cfg.residual_tolerance {
                    done[j] = true;
                }
            }
        }
        let retired_pos: Vec<usize> = (0..state.width()).filter(|&j| done[j]).collect();
        if !retired_pos.is_empty() {
            finish(&mut out, &state, &retired_pos, iteration);
            let keep: Vec<usize> = (0..state.width()).filter(|&j| !done[j]).collect();
            atb = select_columns(&atb, &keep);
            state.retire(&done);
        }
    }
    out
}

/// `‖b − A x‖ / ‖b‖` for the listed active columns, computed from `A`.
fn exact_residuals(
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
    state: &Lockstep,
    positions: &[usize],
    b_norms: &[f64],
) -> Vec<(usize, f64)> {
    let xs = select_columns(&state.x, positions);
    let ax = a.dot(&xs);
    positions
        .iter()
        .enumerate()
        .map(|(c, &j)| {
            let id = state.ids[j];
            let r2: f64 = ax
                .column(c)
                .iter()
                .zip(b.column(id))
                .map(|(ax, b)| (b - ax) * (b - ax))
                .sum();
            (j, r2.sqrt() / b_norms[id])
        })
        .collect()
}

fn finish(out: &mut BlockResult, state: &Lockstep, positions: &[usize], iteration: usize) {
    for &j in positions {
        let id = state.ids[j];
        out.solutions.column_mut(id).assign(&state.x.column(j));
        out.iterations[id] = iteration;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Gaussian elimination with partial pivoting on the normal equations.
    fn gauss_oracle(a: &Array2<f64>, b: &Array1<f64>) -> Array1<f64> {
        let mut m = a.t().dot(a);
        let mut rhs = a.t().dot(b);
        let n = m.nrows();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| m[[i, col]].abs().total_cmp(&m[[j, col]].abs()))
                .unwrap();
            for c in 0..n {
                m.swap([col, c], [pivot, c]);
            }
            rhs.swap(col, pivot);
            for row in col + 1..n {
                let f = m[[row, col]] / m[[col, col]];
                for c in col..n {
                    m[[row, c]] -= f * m[[col, c]];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = Array1::zeros(n);
        for row in (0..n).rev() {
            let tail: f64 = (row + 1..n).map(|c| m[[row, c]] * x[c]).sum();
            x[row] = (rhs[row] - tail) / m[[row, row]];
        }
        x
    }

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array::from_shape_fn((rows, cols), |_| rng.gen_range(-1.0..1.0))
    }

    fn rel_err(x: &Array1<f64>, truth: &Array1<f64>) -> f64 {
        norm((x - truth).view()) / norm(truth.view())
    }

    #[test]
    fn identity_system() {
        let sys = LinearSystem::new(Array2::eye(3), array![1.0, 2.0, 3.0]).unwrap();
        let out = cgd_solve(&sys, &SolverConfig::kpa()).unwrap();
        for (x, t) in out.solution.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - t).abs() < 1e-9);
        }
    }

    #[test]
    fn diagonal_system() {
        let sys = LinearSystem::new(array![[2.0, 0.0], [0.0, 4.0]], array![2.0, 8.0]).unwrap();
        let out = cgd_solve(&sys, &SolverConfig::kpa()).unwrap();
        assert!((out.solution[0] - 1.0).abs() < 1e-9);
        assert!((out.solution[1] - 2.0).abs() < 1e-9);
        assert!(out.final_residual <= 1e-8);
    }

    #[test]
    fn tall_random_system_matches_oracle() {
        let a = random_matrix(200, 100, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let truth = Array1::from_shape_fn(100, |_| rng.gen_range(-1.0..1.0));
        let b = a.dot(&truth);
        let oracle = gauss_oracle(&a, &b);
        assert!(rel_err(&oracle, &truth) < 1e-9);
        let out = cgd_solve(&LinearSystem::new(a, b).unwrap(), &SolverConfig::kpa()).unwrap();
        assert!(rel_err(&out.solution, &truth) < 1e-6);
        assert!(rel_err(&out.solution, &oracle) < 1e-6);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let sys = LinearSystem::new(random_matrix(5, 3, 4), Array1::zeros(5)).unwrap();
        let out = cgd_solve(&sys, &SolverConfig::kpa()).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.solution.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_tv_weight() {
        let sys = LinearSystem::new(Array2::eye(2), array![1.0, 1.0]).unwrap();
        assert!(cgd_solve(&sys, &SolverConfig::decrypt()).is_err());
    }

    #[test]
    fn iteration_cap_is_honored() {
        let a = random_matrix(50, 50, 8);
        let b = a.dot(&Array1::from_elem(50, 1.0));
        let cfg = SolverConfig {
            max_iterations: 3,
            ..SolverConfig::kpa()
        };
        let out = cgd_solve(&LinearSystem::new(a, b).unwrap(), &cfg).unwrap();
        assert_eq!(out.iterations, 3);
        assert!(out.final_residual > cfg.residual_tolerance);
    }

    #[test]
    fn residual_never_increases() {
        for seed in 0..5 {
            let a = random_matrix(40, 30, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let b = Array1::from_shape_fn(40, |_| rng.gen_range(-1.0..1.0));
            let (_, trace) = cgd_solve_traced(&LinearSystem::new(a, b).unwrap(), &SolverConfig::kpa()).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12), "{trace:?}");
            }
            assert!(trace.len() < 200, "stagnated for {} iterations", trace.len());
        }
    }

    #[test]
    fn many_matches_single_on_both_routes() {
        for &(rows, cols) in &[(60usize, 20usize), (20, 60), (30, 30)] {
            let a = random_matrix(rows, cols, rows as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let truth = Array2::from_shape_fn((cols, 5), |_| rng.gen_range(0.0..1.0));
            let mut b = a.dot(&truth);
            b.column_mut(2).fill(0.0);
            let many = cgd_solve_many(a.view(), b.view(), &SolverConfig::kpa()).unwrap();
            for j in 0..5 {
                let sys = LinearSystem::new(a.clone(), b.column(j).to_owned()).unwrap();
                let single = cgd_solve(&sys, &SolverConfig::kpa()).unwrap();
                let diff = norm((&single.solution - &many.solutions.column(j)).view());
                assert!(diff <= 1e-6 * (1.0 + norm(single.solution.view())), "{rows}x{cols} col {j}: {diff}");
                if j == 2 {
                    assert_eq!(many.iterations[j], 0);
                } else {
                    assert!(many.final_residuals[j] <= 1e-8, "{:?}", many.final_residuals);
                }
            }
        }
    }

    #[test]
    fn many_is_independent_of_batch_composition() {
        let a = random_matrix(90, 40, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let b = Array2::from_shape_fn((90, 70), |_| rng.gen_range(0.0..1.0));
        let cfg = SolverConfig {
            max_iterations: 25,
            ..SolverConfig::kpa()
        };
        let all = cgd_solve_many(a.view(), b.view(), &cfg).unwrap();
        for j in [0usize, 33, 69] {
            let one = cgd_solve_many(a.view(), b.slice(s![.., j..j + 1]), &cfg).unwrap();
            assert_eq!(one.solutions.column(0), all.solutions.column(j));
            assert_eq!(one.iterations[0], all.iterations[j]);
        }
    }

    #[test]
    fn many_validates_inputs() {
        let a = random_matrix(4, 3, 0);
        assert!(cgd_solve_many(a.view(), Array2::zeros((3, 1)).view(), &SolverConfig::kpa()).is_err());
        let mut b = Array2::zeros((4, 1));
        b[[0, 0]] = f64::INFINITY;
        assert!(cgd_solve_many(a.view(), b.view(), &SolverConfig::kpa()).is_err());
    }
}

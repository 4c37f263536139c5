//! Partition search: seeded multistart with local descent and fine-tuning.
//!
//! Each restart draws a Haar-random rotation, places the apex at the first
//! ball center, descends the inscribed lower-bound objective by central
//! finite differences on a softmax-smoothed maximum, and, when the lower
//! objective drops below 1, fine-tunes the circumscribed upper-bound
//! objective with Nelder-Mead.  Certification always recomputes the upper
//! bound from scratch at the stored configuration.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, Cover, Point, Rotation};
use crate::linalg;
use crate::partition::{self, DirectionSystem, Mode, TemplateKind};
use crate::polytope::{self, UpperBoundContext};

/// Default certification threshold, strictly below 1 to absorb rounding.
pub const DEFAULT_THRESHOLD: f64 = 1.0 - 1e-6;
/// Temperature of the softmax smoothing over part diameters.
const SOFTMAX_TAU: f64 = 0.01;
/// A step may not increase the true objective by more than this.
const ACCEPT_TOL: f64 = 1e-9;
/// Interior margin enforced on accepted apex positions.
const APEX_PROJECT_MARGIN: f64 = 1e-6;
/// Interior margin enforced when decoding probe points.
const EVAL_MARGIN: f64 = 1e-9;
/// Seed of the fan-validity sampling done during certification.
const FAN_CHECK_SEED: u64 = 7;
/// Sample count of the fan-validity check for free systems.
const FAN_CHECK_SAMPLES: usize = 1_000_000;

/// Budgets and tolerances of the multistart search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub n_restarts: usize,
    pub m_lower: usize,
    pub m_upper: usize,
    pub descent_steps: usize,
    pub step_size: f64,
    pub grad_eps: f64,
    pub finetune_budget: usize,
    /// Grid of the circumscribed polytope used *inside* the fine-tuning
    /// loop (clamped to `m_upper`).  Every reported upper bound and every
    /// certificate is still evaluated at `m_upper`; a coarser inner grid
    /// only makes the search cheaper, the bound it optimizes stays valid.
    pub m_finetune: usize,
    pub seed: u64,
    pub threshold: f64,
    /// Worker threads for restarts; 0 uses the default pool.
    pub workers: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            n_restarts: 50,
            m_lower: 5,
            m_upper: 9,
            descent_steps: 60,
            step_size: 0.05,
            grad_eps: 1e-5,
            finetune_budget: 240,
            m_finetune: 5,
            seed: 2024,
            threshold: DEFAULT_THRESHOLD,
            workers: 0,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_restarts == 0 {
            return Err(Error::InvalidArgument(
                "restart budget must be positive".into(),
            ));
        }
        if self.m_upper == 0 {
            return Err(Error::InvalidArgument("m_upper must be at least 1".into()));
        }
        if self.descent_steps == 0 || self.finetune_budget == 0 {
            return Err(Error::InvalidArgument(
                "optimization budgets must be positive".into(),
            ));
        }
        if self.m_finetune == 0 {
            return Err(Error::InvalidArgument(
                "m_finetune must be at least 1".into(),
            ));
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0)
            || !(self.grad_eps.is_finite() && self.grad_eps > 0.0)
        {
            return Err(Error::InvalidArgument(
                "step size and gradient eps must be positive".into(),
            ));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::InvalidArgument(
                "threshold must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a certification run; the sole authority for "pass".
#[derive(Debug, Clone)]
pub struct Certificate {
    pub cover_label: String,
    pub system: DirectionSystem,
    pub part_diameters: Vec<f64>,
    pub d_best: f64,
    pub m_upper: usize,
    pub seed: u64,
    pub threshold: f64,
    pub pass: bool,
}

/// Per-restart log entry.
#[derive(Debug, Clone)]
pub struct RestartRecord {
    pub index: usize,
    pub initial_lower: f64,
    pub descended_lower: f64,
    /// Fine-tuned upper objective; `None` when fine-tuning was skipped
    /// (lower objective at or above 1) or the restart failed.
    pub upper: Option<f64>,
}

/// Certificate of the best restart plus the full restart log.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub certificate: Certificate,
    pub restarts: Vec<RestartRecord>,
}

impl SearchOutcome {
    /// Running best upper bound in restart order, starting from 1.
    pub fn incumbent_trace(&self) -> Vec<f64> {
        let mut d = 1.0f64;
        let mut out = Vec::with_capacity(self.restarts.len());
        for r in &self.restarts {
            if let Some(u) = r.upper {
                d = d.min(u);
            }
            out.push(d);
        }
        out
    }
}

/// Accepted-step trace of one descent.
#[derive(Debug, Clone)]
pub struct DescentOutcome {
    pub system: DirectionSystem,
    /// True (unsmoothed) objective after every accepted step, starting
    /// with the initial value.
    pub objective_trace: Vec<f64>,
    pub rejected_steps: usize,
    pub final_objective: f64,
}

/// Largest `t` with interior margin at least `target` on the segment from
/// `from` (assumed feasible) toward `to`; the margin is concave along the
/// segment, so bisection applies.
fn project_to_margin(cover: &Cover, from: &[f64], to: &[f64], target: f64) -> Vec<f64> {
    if cover.interior_margin(to) >= target {
        return to.to_vec();
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let x: Vec<f64> = from
            .iter()
            .zip(to)
            .map(|(f, t)| f + mid * (t - f))
            .collect();
        if cover.interior_margin(&x) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    from.iter().zip(to).map(|(f, t)| f + lo * (t - f)).collect()
}

/// Coordinate chart over a direction system: apex coordinates followed by
/// either the skew parameters of a rotation correction (rigid) or the raw
/// direction entries (free).
struct Chart<'a> {
    cover: &'a Cover,
    dim: usize,
    base: DirectionSystem,
}

impl<'a> Chart<'a> {
    fn new(cover: &'a Cover, base: &DirectionSystem) -> Chart<'a> {
        Chart {
            cover,
            dim: base.dim(),
            base: base.clone(),
        }
    }

    fn param_len(&self) -> usize {
        match self.base.mode() {
            Mode::Rigid { .. } => self.dim + self.dim * (self.dim - 1) / 2,
            Mode::Free => self.dim + self.base.directions().len() * self.dim,
        }
    }

    fn encode(&self) -> Vec<f64> {
        let mut x = self.base.apex().coords().to_vec();
        match self.base.mode() {
            Mode::Rigid { .. } => x.extend(std::iter::repeat_n(0.0, self.dim * (self.dim - 1) / 2)),
            Mode::Free => {
                for d in self.base.directions() {
                    x.extend_from_slice(d);
                }
            }
        }
        x
    }

    /// Decodes parameters, projecting the apex back inside the cover at
    /// `margin` when a step left it.
    fn decode(&self, x: &[f64], margin: f64) -> Result<DirectionSystem> {
        let apex_raw = &x[..self.dim];
        let apex = project_to_margin(self.cover, self.base.apex().coords(), apex_raw, margin);
        match self.base.mode() {
            Mode::Rigid { kind, rotation } => {
                let step = Rotation::from_skew_params(self.dim, &x[self.dim..])?;
                DirectionSystem::rigid(
                    *kind,
                    rotation.compose(&step),
                    Point::from(apex),
                    self.cover,
                )
            }
            Mode::Free => {
                let mut dirs = Vec::with_capacity(self.base.directions().len());
                for chunk in x[self.dim..].chunks(self.dim) {
                    let mut d = chunk.to_vec();
                    if linalg::normalize(&mut d) < 1e-9 {
                        return Err(Error::Degenerate("free direction collapsed to zero".into()));
                    }
                    dirs.push(d);
                }
                DirectionSystem::free(Point::from(apex), dirs, self.cover)
            }
        }
    }

    /// Chart recentered at `sys` (apex moves, rotation rebases).
    fn rebase(&self, sys: &DirectionSystem) -> Chart<'a> {
        Chart {
            cover: self.cover,
            dim: self.dim,
            base: sys.clone(),
        }
    }
}

fn softmax_max(values: &[f64], tau: f64) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = values.iter().map(|v| ((v - m) / tau).exp()).sum();
    m + tau * s.ln()
}

fn lower_true(cover: &Cover, sys: &DirectionSystem, m: usize) -> f64 {
    partition::objective_lower(cover, sys, m).unwrap_or(f64::INFINITY)
}

fn lower_smoothed(cover: &Cover, sys: &DirectionSystem, m: usize) -> f64 {
    match partition::lower_part_diameters(cover, sys, m) {
        Ok(d) => softmax_max(&d, SOFTMAX_TAU),
        Err(_) => f64::INFINITY,
    }
}

/// Central finite differences of `f`; non-finite probes contribute zero.
fn fd_gradient<F: FnMut(&[f64]) -> f64>(mut f: F, x: &[f64], eps: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + eps;
        let fp = f(&probe);
        probe[i] = x[i] - eps;
        let fm = f(&probe);
        probe[i] = x[i];
        let d = (fp - fm) / (2.0 * eps);
        if d.is_finite() {
            g[i] = d;
        }
    }
    g
}

/// Local descent of the inscribed lower-bound objective.
///
/// Gradients are central finite differences of the softmax-smoothed part
/// diameters; steps follow a momentum direction with an adaptive rate and
/// are rejected whenever the true objective would increase beyond
/// the line-search tolerance.  Returns the best configuration seen.
pub fn descend_lower(
    cover: &Cover,
    ds: &DirectionSystem,
    params: &SearchParams,
) -> Result<DescentOutcome> {
    params.validate()?;
    let m = params.m_lower;
    let mut chart = Chart::new(cover, ds);
    let f0 = partition::objective_lower(cover, ds, m)?;
    let mut trace = vec![f0];
    let mut best_sys = ds.clone();
    let mut best_val = f0;
    let mut current = f0;
    let mut lr = params.step_size;
    let mut velocity = vec![0.0; chart.param_len()];
    let mut rejected = 0usize;
    let beta = 0.9;
    for _ in 0..params.descent_steps {
        let center = chart.encode();
        let g = fd_gradient(
            |x| match chart.decode(x, EVAL_MARGIN) {
                Ok(sys) => lower_smoothed(cover, &sys, m),
                Err(_) => f64::INFINITY,
            },
            &center,
            params.grad_eps,
        );
        let gn = linalg::norm(&g);
        if !gn.is_finite() || gn < 1e-12 {
            break;
        }
        for (v, gi) in velocity.iter_mut().zip(&g) {
            *v = beta * *v + (1.0 - beta) * gi;
        }
        let mut dir = velocity.clone();
        if linalg::normalize(&mut dir) < 1e-14 {
            break;
        }
        let cand_x = linalg::add_scaled(&center, -lr, &dir);
        let cand = chart.decode(&cand_x, APEX_PROJECT_MARGIN);
        let cand_val = match &cand {
            Ok(sys) => lower_true(cover, sys, m),
            Err(_) => f64::INFINITY,
        };
        if cand_val <= current + ACCEPT_TOL {
            let sys = cand.expect("finite objective implies a valid system");
            current = cand_val;
            trace.push(cand_val);
            if cand_val < best_val {
                best_val = cand_val;
                best_sys = sys.clone();
            }
            chart = chart.rebase(&sys);
            lr = (lr * 1.2).min(4.0 * params.step_size);
        } else {
            rejected += 1;
            lr *= 0.5;
            for v in velocity.iter_mut() {
                *v = 0.0;
            }
            if lr < 1e-9 {
                break;
            }
        }
    }
    Ok(DescentOutcome {
        system: best_sys,
        objective_trace: trace,
        rejected_steps: rejected,
        final_objective: best_val,
    })
}

/// Result of a Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// False when the evaluation budget ran out before the simplex
    /// collapsed.
    pub converged: bool,
}

/// Deterministic Nelder-Mead with reflection 1, expansion 2, contraction
/// 1/2 and shrink 1/2; the simplex starts at `x0` with axis steps of 1e-2.
/// Returns the best point seen across all evaluations.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    budget: usize,
) -> NelderMeadOutcome {
    let n = x0.len();
    let mut evals = 0usize;
    let mut best_x = x0.to_vec();
    let mut best_v = f64::INFINITY;
    let mut eval = |x: &[f64], evals: &mut usize, best_x: &mut Vec<f64>, best_v: &mut f64| -> f64 {
        *evals += 1;
        let v = f(x);
        if v < *best_v {
            *best_v = v;
            *best_x = x.to_vec();
        }
        v
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals, &mut best_x, &mut best_v);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        if evals >= budget {
            return NelderMeadOutcome {
                x: best_x,
                value: best_v,
                evals,
                converged: false,
            };
        }
        let mut x = x0.to_vec();
        x[i] += 1e-2;
        let v = eval(&x, &mut evals, &mut best_x, &mut best_v);
        simplex.push((x, v));
    }
    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        // Convergence: collapsed in both value and position.
        let f_spread = simplex[n].1 - simplex[0].1;
        let x_spread = simplex
            .iter()
            .map(|(x, _)| linalg::dist(x, &simplex[0].0))
            .fold(0.0f64, f64::max);
        if f_spread.abs() < 1e-12 && x_spread < 1e-10 {
            return NelderMeadOutcome {
                x: best_x,
                value: best_v,
                evals,
                converged: true,
            };
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in simplex.iter().take(n) {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst.0)
            .map(|(c, w)| c + (c - w))
            .collect();
        let fr = eval(&reflect, &mut evals, &mut best_x, &mut best_v);
        if fr < simplex[0].1 {
            if evals >= budget {
                break;
            }
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let fe = eval(&expand, &mut evals, &mut best_x, &mut best_v);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            if evals >= budget {
                break;
            }
            let contract: Vec<f64> = if fr < worst.1 {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + 0.5 * (c - w))
                    .collect()
            } else {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c - 0.5 * (c - w))
                    .collect()
            };
            let fc = eval(&contract, &mut evals, &mut best_x, &mut best_v);
            if fc < fr.min(worst.1) {
                simplex[n] = (contract, fc);
            } else {
                // Shrink toward the best point.
                let anchor = simplex[0].0.clone();
                for k in 1..=n {
                    if evals >= budget {
                        break;
                    }
                    let x: Vec<f64> = anchor
                        .iter()
                        .zip(&simplex[k].0)
                        .map(|(a, s)| a + 0.5 * (s - a))
                        .collect();
                    let v = eval(&x, &mut evals, &mut best_x, &mut best_v);
                    simplex[k] = (x, v);
                }
            }
        }
    }
    NelderMeadOutcome {
        x: best_x,
        value: best_v,
        evals,
        converged: false,
    }
}

fn finetune_upper(
    cover: &Cover,
    ctx: &UpperBoundContext,
    start: &DirectionSystem,
    params: &SearchParams,
) -> Result<(DirectionSystem, f64)> {
    let chart = Chart::new(cover, start);
    let x0 = chart.encode();
    let outcome = nelder_mead(
        |x| match chart.decode(x, APEX_PROJECT_MARGIN) {
            Ok(sys) => match polytope::objective_upper_with(ctx, &sys) {
                Ok(rep) => rep.max_diameter,
                Err(_) => f64::INFINITY,
            },
            Err(_) => f64::INFINITY,
        },
        &x0,
        params.finetune_budget,
    );
    if !outcome.value.is_finite() {
        return Err(Error::Objective(
            "upper objective not evaluable around the descent output".into(),
        ));
    }
    let sys = chart.decode(&outcome.x, APEX_PROJECT_MARGIN)?;
    Ok((sys, outcome.value))
}

fn derive_restart_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 of a golden-ratio indexed stream.
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct RestartResult {
    record: RestartRecord,
    system: Option<DirectionSystem>,
    upper: Option<f64>,
}

fn run_restart(
    cover: &Cover,
    ctx_fine: &UpperBoundContext,
    ctx_full: &UpperBoundContext,
    kind: TemplateKind,
    params: &SearchParams,
    index: usize,
) -> RestartResult {
    let failed = |index: usize| RestartResult {
        record: RestartRecord {
            index,
            initial_lower: f64::INFINITY,
            descended_lower: f64::INFINITY,
            upper: None,
        },
        system: None,
        upper: None,
    };
    let q = geometry::haar_orthogonal(derive_restart_seed(params.seed, index), cover.dimension());
    let apex = cover.balls()[0].center().clone();
    let ds = match DirectionSystem::rigid(kind, q, apex, cover) {
        Ok(ds) => ds,
        Err(e) => {
            eprintln!("restart {index}: failed to initialize ({e})");
            return failed(index);
        }
    };
    let initial = match partition::objective_lower(cover, &ds, params.m_lower) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("restart {index}: initial objective failed ({e})");
            return failed(index);
        }
    };
    let descent = match descend_lower(cover, &ds, params) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("restart {index}: descent failed ({e})");
            return failed(index);
        }
    };
    // Fine-tune the certified bound only for promising configurations.
    if descent.final_objective < 1.0 {
        let tuned = finetune_upper(cover, ctx_fine, &descent.system, params).and_then(
            |(sys, _fine_val)| {
                // Reported bounds always come from the full grid.
                let full = polytope::objective_upper_with(ctx_full, &sys)?;
                Ok((sys, full.max_diameter))
            },
        );
        match tuned {
            Ok((sys, upper)) => {
                eprintln!(
                    "restart {index}: lower {:.6}, upper {:.6}",
                    descent.final_objective, upper
                );
                RestartResult {
                    record: RestartRecord {
                        index,
                        initial_lower: initial,
                        descended_lower: descent.final_objective,
                        upper: Some(upper),
                    },
                    system: Some(sys),
                    upper: Some(upper),
                }
            }
            Err(e) => {
                eprintln!(
                    "restart {index}: lower {:.6}, upper failed ({e})",
                    descent.final_objective
                );
                RestartResult {
                    record: RestartRecord {
                        index,
                        initial_lower: initial,
                        descended_lower: descent.final_objective,
                        upper: None,
                    },
                    system: Some(descent.system),
                    upper: None,
                }
            }
        }
    } else {
        eprintln!(
            "restart {index}: lower {:.6}, upper skipped",
            descent.final_objective
        );
        RestartResult {
            record: RestartRecord {
                index,
                initial_lower: initial,
                descended_lower: descent.final_objective,
                upper: None,
            },
            system: Some(descent.system),
            upper: None,
        }
    }
}

/// Multistart search returning the certificate of the best restart plus
/// the per-restart log.
///
/// Restarts are independent and run concurrently; the incumbent reduction
/// happens after all restarts complete, in index order, so the outcome is
/// independent of scheduling.  When no restart reached the fine-tuning
/// stage the configuration with the best descended lower objective is
/// certified instead.
pub fn multistart_search_detailed(cover: &Cover, params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    let kind = TemplateKind::for_dimension(cover.dimension())?;
    let ctx_full = UpperBoundContext::new(cover, params.m_upper)?;
    let m_fine = params.m_finetune.min(params.m_upper);
    let ctx_fine = if m_fine == params.m_upper {
        None
    } else {
        Some(UpperBoundContext::new(cover, m_fine)?)
    };
    let run = |i: usize| {
        run_restart(
            cover,
            ctx_fine.as_ref().unwrap_or(&ctx_full),
            &ctx_full,
            kind,
            params,
            i,
        )
    };
    let results: Vec<RestartResult> = if params.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.workers)
            .build()
            .map_err(|e| Error::Objective(format!("worker pool: {e}")))?;
        pool.install(|| (0..params.n_restarts).into_par_iter().map(run).collect())
    } else {
        (0..params.n_restarts).into_par_iter().map(run).collect()
    };
    // Best fine-tuned restart, by (upper value, index).
    let mut best: Option<(f64, usize)> = None;
    for (i, r) in results.iter().enumerate() {
        if let Some(u) = r.upper {
            if best.is_none_or(|(bu, _)| u < bu) {
                best = Some((u, i));
            }
        }
    }
    let best_index = match best {
        Some((_, i)) => i,
        None => {
            // Fall back to the best descended configuration.
            let mut arg = None;
            let mut val = f64::INFINITY;
            for (i, r) in results.iter().enumerate() {
                if r.system.is_some() && r.record.descended_lower < val {
                    val = r.record.descended_lower;
                    arg = Some(i);
                }
            }
            arg.ok_or_else(|| Error::Objective("every restart failed".into()))?
        }
    };
    let best_system = results[best_index]
        .system
        .clone()
        .expect("selected restart carries a system");
    let certificate = certify(
        cover,
        &best_system,
        params.m_upper,
        params.threshold,
        params.seed,
    )?;
    Ok(SearchOutcome {
        certificate,
        restarts: results.into_iter().map(|r| r.record).collect(),
    })
}

/// Multistart search returning only the certificate.
pub fn multistart_search(cover: &Cover, params: &SearchParams) -> Result<Certificate> {
    Ok(multistart_search_detailed(cover, params)?.certificate)
}

/// Recomputes the upper bound from scratch at `ds` and issues the
/// certificate; free systems must additionally pass the fan-validity
/// sampling check.
pub fn certify(
    cover: &Cover,
    ds: &DirectionSystem,
    m_upper: usize,
    threshold: f64,
    seed: u64,
) -> Result<Certificate> {
    if ds.dim() != cover.dimension() {
        return Err(Error::DimensionMismatch {
            expected: cover.dimension(),
            got: ds.dim(),
        });
    }
    let expected = TemplateKind::for_dimension(cover.dimension())?.template();
    if ds.facets() != expected.facets.as_slice() {
        return Err(Error::InvalidArgument(
            "direction system facets do not match the canonical template".into(),
        ));
    }
    let margin = cover.interior_margin(ds.apex().coords());
    if margin < geometry::INTERIOR_MARGIN {
        return Err(Error::NotInterior {
            margin,
            required: geometry::INTERIOR_MARGIN,
        });
    }
    if !ds.is_rigid() && !partition::fan_valid(ds, FAN_CHECK_SAMPLES, FAN_CHECK_SEED)? {
        return Err(Error::Degenerate(
            "free direction system does not tile space".into(),
        ));
    }
    let report = polytope::objective_upper(cover, ds, m_upper)?;
    let d_best = report.max_diameter;
    Ok(Certificate {
        cover_label: cover.label().to_string(),
        system: ds.clone(),
        part_diameters: report.part_diameters,
        d_best,
        m_upper,
        seed,
        threshold,
        pass: d_best <= threshold,
    })
}

/// Exact diameter of the whole circumscribed polytope; the trivial
/// one-part baseline any useful partition must beat.
pub fn one_part_baseline(cover: &Cover, m_upper: usize) -> Result<f64> {
    let ctx = UpperBoundContext::new(cover, m_upper)?;
    Ok(ctx.polytope().diameter()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers;

    #[test]
    fn nelder_mead_sphere_benchmark() {
        let out = nelder_mead(
            |x| x.iter().map(|v| v * v).sum::<f64>(),
            &[1.0, 1.0, 1.0, 1.0],
            500,
        );
        assert!(out.value <= 1e-4 * 1e-4 * 16.0 || linalg::norm(&out.x) <= 1e-4);
        assert!(
            linalg::norm(&out.x) <= 1e-4,
            "|x*| = {}",
            linalg::norm(&out.x)
        );
        assert!(out.value <= 4.0, "never worse than the start");
        assert!(out.evals <= 500);
    }

    #[test]
    fn nelder_mead_flags_exhausted_budget() {
        let out = nelder_mead(|x| x[0].abs() + x[1].abs(), &[5.0, 5.0], 12);
        assert!(!out.converged);
        assert!(out.value <= 10.0);
    }

    #[test]
    fn nelder_mead_converges_on_trivial_function() {
        let out = nelder_mead(|_| 1.0, &[0.0, 0.0], 1000);
        assert!(out.converged);
        assert_eq!(out.value, 1.0);
    }

    #[test]
    fn restart_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            assert!(seen.insert(derive_restart_seed(42, i)));
        }
        assert_ne!(derive_restart_seed(1, 0), derive_restart_seed(2, 0));
    }

    #[test]
    fn softmax_dominates_max_and_tracks_it() {
        let d = [0.97, 0.93, 0.99, 0.8];
        let s = softmax_max(&d, SOFTMAX_TAU);
        assert!(s >= 0.99);
        assert!(s < 0.99 + SOFTMAX_TAU * 4.0f64.ln() + 1e-12);
    }

    #[test]
    fn projection_restores_margin() {
        let cover = covers::lassak_cover(4).unwrap();
        let from = cover.witness().coords().to_vec();
        let to = vec![5.0, 0.0, 0.0, 0.0];
        let p = project_to_margin(&cover, &from, &to, 1e-6);
        assert!(cover.interior_margin(&p) >= 1e-6 - 1e-12);
    }
}

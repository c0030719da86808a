use std::fmt;

use crate::convex::Misfit;
use crate::matrix::{norm2, sub, DenseMatrix};
use crate::scalar::Scalar;
use crate::solver::SolverState;

use super::ProblemInstance;

/// Entries with modulus above this count as nonzero.
pub const SPARSITY_THRESHOLD: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// `||Ax - b_hat|| / ||b_hat||`
    RelResidual,
    /// `||A^H (b - Ax)|| / ||b||`
    RelGradQuadratic,
    /// `||A^H grad g*(b - Ax)|| / ||b||`
    RelGradMisfit,
    /// `||x - x_hat|| / ||x_hat||`
    RelError,
    /// `||z* - (b - yhat)||`, quadratic misfit only
    ZError,
    Sparsity,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::RelResidual,
        Metric::RelGradQuadratic,
        Metric::RelGradMisfit,
        Metric::RelError,
        Metric::ZError,
        Metric::Sparsity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::RelResidual => "rel_residual",
            Metric::RelGradQuadratic => "rel_grad_quadratic",
            Metric::RelGradMisfit => "rel_grad_misfit",
            Metric::RelError => "rel_error",
            Metric::ZError => "z_error",
            Metric::Sparsity => "sparsity",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of entries with modulus strictly above `threshold`.
pub fn sparsity_count<T: Scalar>(x: &[T], threshold: f64) -> usize {
    x.iter().filter(|v| v.modulus() > threshold).count()
}

/// Per-checkpoint metrics of one solver run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricTrace {
    pub checkpoints: Vec<u64>,
    pub rel_residual: Vec<f64>,
    pub rel_grad_quadratic: Vec<f64>,
    pub rel_grad_misfit: Vec<f64>,
    pub rel_error: Vec<f64>,
    pub z_error: Option<Vec<f64>>,
    pub sparsity: Vec<usize>,
}

impl MetricTrace {
    pub fn len(&self) -> usize {
        self.checkpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checkpoints.is_empty()
    }

    pub fn series(&self, metric: Metric) -> Option<Vec<f64>> {
        Some(match metric {
            Metric::RelResidual => self.rel_residual.clone(),
            Metric::RelGradQuadratic => self.rel_grad_quadratic.clone(),
            Metric::RelGradMisfit => self.rel_grad_misfit.clone(),
            Metric::RelError => self.rel_error.clone(),
            Metric::ZError => self.z_error.clone()?,
            Metric::Sparsity => self.sparsity.iter().map(|&s| s as f64).collect(),
        })
    }

    pub fn last(&self, metric: Metric) -> Option<f64> {
        self.series(metric)?.last().copied()
    }
}

/// Evaluates the metric set at solver checkpoints.
#[derive(Debug)]
pub struct MetricRecorder<'a, T> {
    pub instance: &'a ProblemInstance<T>,
    /// Misfit used for `rel_grad_misfit`.
    pub misfit: Misfit,
    /// `b - yhat` for the quadratic misfit; enables `z_error`.
    pub z_target: Option<&'a [T]>,
    pub trace: MetricTrace,
    b_norm: f64,
    b_hat_norm: f64,
    x_hat_norm: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

impl<'a, T: Scalar> MetricRecorder<'a, T> {
    pub fn new(instance: &'a ProblemInstance<T>, misfit: Misfit, z_target: Option<&'a [T]>) -> Self {
        Self {
            instance,
            misfit,
            trace: MetricTrace {
                z_error: z_target.map(|_| Vec::new()),
                ..MetricTrace::default()
            },
            z_target,
            b_norm: norm2(&instance.b),
            b_hat_norm: norm2(&instance.b_hat),
            x_hat_norm: norm2(&instance.x_hat),
        }
    }

    pub fn record(&mut self, state: &SolverState<T>) {
        let inst = self.instance;
        let a: &DenseMatrix<T> = &inst.a;
        let ax = a.mul_vec(&state.x).expect("validated shape");
        let r = sub(&inst.b, &ax);
        let t = &mut self.trace;
        t.checkpoints.push(state.k);
        t.rel_residual
            .push(ratio(norm2(&sub(&ax, &inst.b_hat)), self.b_hat_norm));
        t.rel_grad_quadratic
            .push(ratio(norm2(&a.adjoint_mul_vec(&r).expect("shape")), self.b_norm));
        let gr = if self.misfit.is_quadratic() {
            *t.rel_grad_quadratic.last().expect("just pushed")
        } else {
            let g = self.misfit.gradient(&r);
            ratio(norm2(&a.adjoint_mul_vec(&g).expect("shape")), self.b_norm)
        };
        t.rel_grad_misfit.push(gr);
        t.rel_error
            .push(ratio(norm2(&sub(&state.x, &inst.x_hat)), self.x_hat_norm));
        if let (Some(series), Some(target)) = (t.z_error.as_mut(), self.z_target) {
            // z* is not formed when the z recursion is off; measure z* = 0
            let e = if state.z_enabled() {
                norm2(&sub(&state.zstar, target))
            } else {
                norm2(target)
            };
            series.push(e);
        }
        t.sparsity.push(sparsity_count(&state.x, SPARSITY_THRESHOLD));
    }
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + w * (sorted[hi] - sorted[lo])
    }
}

/// Five-number summary of `values` (min, q25, median, q75, max).
pub fn five_numbers(values: &[f64]) -> [f64; 5] {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    [
        v[0],
        quantile(&v, 0.25),
        quantile(&v, 0.5),
        quantile(&v, 0.75),
        v[v.len() - 1],
    ]
}

/// Per-checkpoint quantiles of one metric across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateBand {
    pub iterations: Vec<u64>,
    pub min: Vec<f64>,
    pub q25: Vec<f64>,
    pub median: Vec<f64>,
    pub q75: Vec<f64>,
    pub max: Vec<f64>,
}

impl AggregateBand {
    /// `None` if the metric is absent or the traces disagree on checkpoints.
    pub fn from_traces(traces: &[MetricTrace], metric: Metric) -> Option<Self> {
        let first = traces.first()?;
        if traces.iter().any(|t| t.checkpoints != first.checkpoints) {
            return None;
        }
        let series: Vec<Vec<f64>> = traces.iter().map(|t| t.series(metric)).collect::<Option<_>>()?;
        let mut band = AggregateBand {
            iterations: first.checkpoints.clone(),
            min: Vec::new(),
            q25: Vec::new(),
            median: Vec::new(),
            q75: Vec::new(),
            max: Vec::new(),
        };
        for c in 0..first.len() {
            let column: Vec<f64> = series.iter().map(|s| s[c]).collect();
            let [a, b, m, d, e] = five_numbers(&column);
            band.min.push(a);
            band.q25.push(b);
            band.median.push(m);
            band.q75.push(d);
            band.max.push(e);
        }
        Some(band)
    }

    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn final_median(&self) -> Option<f64> {
        self.median.last().copied()
    }
}

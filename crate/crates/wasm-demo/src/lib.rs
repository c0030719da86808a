//! Browser bindings: a small least-squares instance with a sparse planted
//! solution, solved by the three structured presets. See `www/index.html`.

use gerk_core::convex::{shrink_scalar, Misfit};
use gerk_core::harness::{gen_experiment_i, GenParams, MetricRecorder, ProblemInstance};
use gerk_core::rng::RngStream;
use gerk_core::solver::{preset, run, Control, Preset, PresetParams, SolverState};
use gerk_core::Result;
use wasm_bindgen::prelude::*;

/// Presets compared by [`compare`], in output order.
pub const PRESETS: [Preset; 3] = [Preset::Srk, Preset::Rek, Preset::GerkAd];

const M: usize = 80;
const N: usize = 40;

fn instance(noise_level: f64, seed: u64) -> Result<ProblemInstance<f64>> {
    let p = GenParams {
        m: M,
        n: N,
        rank: 20,
        sparsity: 4,
        noise_level,
        sv_lo: 0.5,
        sv_hi: 5.0,
    };
    gen_experiment_i(&p, &mut RngStream::new(seed))
}

/// Relative error per epoch and the final iterate.
fn solve(
    inst: &ProblemInstance<f64>,
    which: Preset,
    lambda: f64,
    epochs: u32,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let cfg = preset(which, &PresetParams::lambda(lambda), &inst.a)?
        .with_max_iterations(epochs as u64 * M as u64)
        .with_checkpoint_interval(M as u64)
        .with_seed(seed);
    let mut rec = MetricRecorder::new(inst, Misfit::Quadratic, None);
    let mut hook = |st: &SolverState<f64>| {
        rec.record(st);
        Ok(Control::Continue)
    };
    let report = run(&inst.a, &inst.b, &cfg, &mut hook).map_err(|e| match e {
        gerk_core::solver::RunError::Config(e) => e,
        gerk_core::solver::RunError::Hook(e) => unreachable!("hook never fails: {e}"),
    })?;
    Ok((rec.trace.rel_error, report.state.x))
}

/// Relative error `||x_k - xhat|| / ||xhat||` at every epoch for srk, rek and
/// gerk_ad, concatenated (each block has `epochs + 1` entries).
pub fn compare_traces(lambda: f64, noise_level: f64, epochs: u32, seed: u64) -> Result<Vec<f64>> {
    let inst = instance(noise_level, seed)?;
    let mut out = Vec::new();
    for p in PRESETS {
        out.extend(solve(&inst, p, lambda, epochs, seed)?.0);
    }
    Ok(out)
}

/// Planted solution followed by the final iterate of `PRESETS[which]`.
pub fn final_iterate(which: usize, lambda: f64, noise_level: f64, epochs: u32, seed: u64) -> Result<Vec<f64>> {
    let p = *PRESETS
        .get(which)
        .ok_or_else(|| gerk_core::Error::InvalidParameter("preset index must be 0, 1 or 2".into()))?;
    let inst = instance(noise_level, seed)?;
    let (_, x) = solve(&inst, p, lambda, epochs, seed)?;
    let mut out = inst.x_hat.clone();
    out.extend(x);
    Ok(out)
}

/// `S_lambda(t)` on `samples` points of `[-range, range]`.
#[wasm_bindgen]
pub fn shrinkage_curve(lambda: f64, range: f64, samples: u32) -> Vec<f64> {
    let samples = samples.max(2);
    let k = samples as f64 - 1.0;
    (0..samples)
        .map(|i| shrink_scalar(-range + 2.0 * range * i as f64 / k, lambda))
        .collect()
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn compare(lambda: f64, noise_level: f64, epochs: u32, seed: u32) -> std::result::Result<Vec<f64>, JsValue> {
    js(compare_traces(lambda, noise_level, epochs, seed as u64))
}

/// `which`: 0 = srk, 1 = rek, 2 = gerk_ad.
#[wasm_bindgen]
pub fn iterate(
    which: u32,
    lambda: f64,
    noise_level: f64,
    epochs: u32,
    seed: u32,
) -> std::result::Result<Vec<f64>, JsValue> {
    js(final_iterate(which as usize, lambda, noise_level, epochs, seed as u64))
}

//! Central finite-difference verification of the tape's gradients.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tape::{ParamId, Parameters, Tape, Var};
use crate::tensor::Tensor;

/// Outcome of a finite-difference sweep.
#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// max over checked entries of |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)
    pub max_rel_err: f64,
    /// Parameter holding the worst entry.
    pub worst_param: String,
    pub entries_checked: usize,
}

fn eval_loss<T, F>(f: &F, params: &Parameters<T>, context: &str) -> Result<f64>
where
    T: Real,
    F: Fn(&mut Tape<T>, &Parameters<T>) -> Result<Var>,
{
    let mut tape = Tape::new();
    let loss = f(&mut tape, params)?;
    let v = tape.value(loss).item()?;
    if !v.is_finite() {
        return Err(Error::NonFinite {
            name: context.to_string(),
        });
    }
    Ok(v.to_f64())
}

/// Compares the tape gradient of the scalar function `f` against central
/// finite differences, over every entry of every parameter.
pub fn grad_check<T, F>(f: F, params: &mut Parameters<T>, epsilon: f64) -> Result<GradCheckReport>
where
    T: Real,
    F: Fn(&mut Tape<T>, &Parameters<T>) -> Result<Var>,
{
    grad_check_sampled(f, params, epsilon, usize::MAX, 0)
}

/// [`grad_check`] limited to at most `max_entries` entries per parameter,
/// chosen deterministically from `seed`. Large models stay checkable in
/// bounded time; `usize::MAX` checks everything.
pub fn grad_check_sampled<T, F>(
    f: F,
    params: &mut Parameters<T>,
    epsilon: f64,
    max_entries: usize,
    seed: u64,
) -> Result<GradCheckReport>
where
    T: Real,
    F: Fn(&mut Tape<T>, &Parameters<T>) -> Result<Var>,
{
    if epsilon <= 0.0 {
        return Err(Error::invalid("grad_check", "epsilon must be > 0"));
    }
    if max_entries == 0 {
        return Err(Error::invalid("grad_check", "max_entries must be >= 1"));
    }

    // analytic gradients in one backward sweep
    params.zero_grads();
    let mut tape = Tape::new();
    let loss = f(&mut tape, params)?;
    if !tape.value(loss).item()?.is_finite() {
        return Err(Error::NonFinite {
            name: "loss".to_string(),
        });
    }
    tape.backward(loss, params)?;
    let ids: Vec<ParamId> = params.ids().collect();
    for &id in &ids {
        if !params.grad(id).all_finite() {
            return Err(Error::NonFinite {
                name: params.get(id).name().to_string(),
            });
        }
    }
    let analytic: Vec<Tensor<T>> = ids.iter().map(|&id| params.grad(id).clone()).collect();

    let mut report = GradCheckReport {
        max_rel_err: 0.0,
        worst_param: String::new(),
        entries_checked: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (slot, &id) in ids.iter().enumerate() {
        let name = params.get(id).name().to_string();
        let n = params.value(id).numel();
        let entries: Vec<usize> = if n <= max_entries {
            (0..n).collect()
        } else {
            rand::seq::index::sample(&mut rng, n, max_entries).into_vec()
        };
        for e in entries {
            let orig = params.value(id).data()[e];
            params.value_mut(id).data_mut()[e] = orig + T::from_f64(epsilon);
            let plus = eval_loss(&f, params, &name)?;
            params.value_mut(id).data_mut()[e] = orig - T::from_f64(epsilon);
            let minus = eval_loss(&f, params, &name)?;
            params.value_mut(id).data_mut()[e] = orig;

            let numeric = (plus - minus) / (2.0 * epsilon);
            let a = analytic[slot].data()[e].to_f64();
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            report.entries_checked += 1;
            if rel > report.max_rel_err {
                report.max_rel_err = rel;
                report.worst_param = name.clone();
            }
        }
    }
    Ok(report)
}

//! SGD with classical momentum and the step-halving learning-rate schedule.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tape::{ParamId, Parameters};
use crate::tensor::Tensor;

/// Classical momentum: `v <- momentum * v + grad`, `p <- p - lr * v`.
/// Gradients are zeroed after a step, so accumulation starts fresh.
pub struct SgdMomentum<T> {
    momentum: T,
    velocity: Vec<Tensor<T>>,
}

impl<T: Real> SgdMomentum<T> {
    pub fn new(params: &Parameters<T>, momentum: T) -> Self {
        SgdMomentum {
            momentum,
            velocity: params
                .iter()
                .map(|p| Tensor::zeros(p.value().shape().to_vec()))
                .collect(),
        }
    }

    /// Applies one update from the currently accumulated gradients.
    /// A non-finite gradient aborts with the parameter's name, which is the
    /// divergence signal the training loop reacts to.
    pub fn step(&mut self, params: &mut Parameters<T>, lr: T) -> Result<()> {
        let ids: Vec<ParamId> = params.ids().collect();
        for (vel, id) in self.velocity.iter_mut().zip(ids) {
            if !params.grad(id).all_finite() {
                return Err(Error::NonFinite {
                    name: params.get(id).name().to_string(),
                });
            }
            let momentum = self.momentum;
            let (value, grad) = params.value_and_grad_mut(id);
            for ((v, g), p) in vel
                .data_mut()
                .iter_mut()
                .zip(grad.data_mut())
                .zip(value.data_mut())
            {
                *v = momentum * *v + *g;
                *p -= lr * *v;
                *g = T::ZERO;
            }
        }
        Ok(())
    }
}

/// `lr0 * 0.5^floor(epoch / halve_every)` for 0-based epochs.
pub fn lr_at_epoch(lr0: f64, halve_every: usize, epoch: usize) -> f64 {
    let halvings = epoch / halve_every.max(1);
    let mut lr = lr0;
    for _ in 0..halvings {
        lr *= 0.5;
    }
    lr
}

/// Scales all gradients so their joint L2 norm is at most `max_norm`.
/// Returns the pre-clip norm.
pub fn clip_global_norm<T: Real>(params: &mut Parameters<T>, max_norm: f64) -> f64 {
    let mut sq = 0.0f64;
    for p in params.iter() {
        for &g in p.grad().data() {
            let g = g.to_f64();
            sq += g * g;
        }
    }
    let norm = Real::sqrt(sq);
    if norm > max_norm && norm > 0.0 {
        let scale = T::from_f64(max_norm / norm);
        let ids: Vec<ParamId> = params.ids().collect();
        for id in ids {
            for g in params.grad_mut(id).data_mut() {
                *g *= scale;
            }
        }
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_param(value: &[f64], grad: &[f64]) -> Parameters<f64> {
        let mut params = Parameters::new();
        let id = params
            .register("p", Tensor::from_vec([value.len()], value.to_vec()).unwrap())
            .unwrap();
        params
            .grad_mut(id)
            .data_mut()
            .copy_from_slice(grad);
        params
    }

    #[test]
    fn zero_momentum_is_vanilla_sgd() {
        let mut params = one_param(&[1.0, 2.0], &[0.5, -1.0]);
        let mut opt = SgdMomentum::new(&params, 0.0);
        opt.step(&mut params, 0.1).unwrap();
        let id = params.by_name("p").unwrap();
        assert_eq!(params.value(id).data(), &[1.0 - 0.05, 2.0 + 0.1]);
        assert_eq!(params.grad(id).data(), &[0.0, 0.0]);
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut params = one_param(&[3.0], &[0.0]);
        let mut opt = SgdMomentum::new(&params, 0.9);
        opt.step(&mut params, 1.0).unwrap();
        let id = params.by_name("p").unwrap();
        assert_eq!(params.value(id).data(), &[3.0]);
    }

    #[test]
    fn two_steps_with_constant_gradient() {
        // v1 = g, v2 = 0.9 g + g = 1.9 g; total displacement -(1 + 1.9) g
        let g = 0.4;
        let mut params = one_param(&[0.0], &[g]);
        let mut opt = SgdMomentum::new(&params, 0.9);
        opt.step(&mut params, 1.0).unwrap();
        let id = params.by_name("p").unwrap();
        params.grad_mut(id).data_mut()[0] = g;
        opt.step(&mut params, 1.0).unwrap();
        let total = params.value(id).data()[0];
        assert!((total - (-(1.0 + 1.9) * g)).abs() < 1e-12);
    }

    #[test]
    fn non_finite_gradient_aborts_with_name() {
        let mut params = one_param(&[0.0], &[f64::NAN]);
        let mut opt = SgdMomentum::new(&params, 0.9);
        let err = opt.step(&mut params, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::NonFinite {
                name: "p".to_string()
            }
        );
    }

    #[test]
    fn halving_schedule() {
        let lrs: Vec<f64> = (0..7).map(|e| lr_at_epoch(0.01, 3, e)).collect();
        assert_eq!(lrs, vec![0.01, 0.01, 0.01, 0.005, 0.005, 0.005, 0.0025]);
    }

    #[test]
    fn clip_rescales_large_gradients() {
        let mut params = one_param(&[0.0, 0.0], &[3.0, 4.0]);
        let norm = clip_global_norm(&mut params, 1.0);
        assert!((norm - 5.0).abs() < 1e-12);
        let id = params.by_name("p").unwrap();
        let g = params.grad(id).data();
        assert!((g[0] - 0.6).abs() < 1e-12 && (g[1] - 0.8).abs() < 1e-12);
    }
}

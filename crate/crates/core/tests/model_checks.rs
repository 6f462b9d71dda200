//! Model-level checks: residual wiring at initialization, the desk-scale
//! full-model gradient check, and shape contracts across pooling kinds.

mod common;

use common::{kink_free, rng};
use rand::Rng;
use vdcnn_core::grad_check_sampled;
use vdcnn_core::model::{ArchSpec, Model, PoolKind, Shortcut};
use vdcnn_core::tensor::Tensor;
use vdcnn_core::{Parameters, Tape};

fn desk_spec(depth_blocks: [usize; 4]) -> ArchSpec {
    let mut spec = ArchSpec::new(depth_blocks, 2);
    spec.width_num = 1;
    spec.width_den = 8;
    spec.seq_len = 64;
    spec
}

/// A block whose main path is zeroed contributes only its shortcut:
/// identity blocks reproduce their (non-negative) input, zero-initialized
/// projection blocks produce zero.
#[test]
fn zeroed_main_path_leaves_only_the_shortcut() {
    let mut r = rng(30);
    let mut params = Parameters::<f64>::new();
    let x_data: Vec<f64> = kink_free(2 * 3 * 6, &mut r).iter().map(|v| v.abs()).collect();
    let x = params
        .register("x", Tensor::from_vec([2, 3, 6], x_data.clone()).unwrap())
        .unwrap();
    let w1 = params
        .register("w1", Tensor::from_vec([3, 3, 3], kink_free(27, &mut r)).unwrap())
        .unwrap();
    let w2 = params.register("w2", Tensor::zeros([3, 3, 3])).unwrap();
    let gamma = params.register("gamma", Tensor::filled([3], 1.0)).unwrap();
    let beta = params.register("beta", Tensor::zeros([3])).unwrap();
    let rm = Tensor::zeros([3]);
    let rv = Tensor::filled([3], 1.0);

    let block = |shortcut_proj: bool, params: &Parameters<f64>| {
        let mut tape = Tape::new();
        let xv = tape.param(x, params);
        let w1v = tape.param(w1, params);
        let w2v = tape.param(w2, params);
        let g = tape.param(gamma, params);
        let b = tape.param(beta, params);
        let h = tape.conv(xv, w1v, 1, 1).unwrap();
        let (h, _) = tape.batch_norm(h, g, b, &rm, &rv, 1e-5, 0.1, true).unwrap();
        let h = tape.relu(h);
        let h = tape.conv(h, w2v, 1, 1).unwrap();
        let (h, _) = tape.batch_norm(h, g, b, &rm, &rv, 1e-5, 0.1, true).unwrap();
        let joined = if shortcut_proj {
            // zero-initialized 1x1 projection
            let pw = tape.leaf(Tensor::zeros([3, 3, 1]));
            let pb = tape.leaf(Tensor::zeros([3]));
            let mut sc = tape.conv(xv, pw, 1, 0).unwrap();
            sc = tape.bias_add(sc, pb).unwrap();
            tape.add(h, sc).unwrap()
        } else {
            tape.add(h, xv).unwrap()
        };
        let out = tape.relu(joined);
        tape.value(out).clone()
    };

    // identity shortcut: output == input (inputs are non-negative)
    let out = block(false, &params);
    assert_eq!(out.data(), x_data.as_slice());

    // zero projection: output == 0
    let out = block(true, &params);
    assert!(out.data().iter().all(|&v| v == 0.0));
}

#[test]
fn full_model_gradient_check_at_desk_scale() {
    let mut spec = desk_spec([1, 1, 1, 1]);
    spec.seq_len = 32;
    spec.kmax_k = 4; // 32 -> 16 -> 8 -> 4 leaves no room for k = 8
    spec.fc_hidden = 32;
    let model: Model<f64> = Model::build(spec, 21).unwrap();

    let mut r = rng(22);
    let m = 2;
    let ids: Vec<usize> = (0..m * 32).map(|_| r.random_range(0..69)).collect();
    let labels: Vec<usize> = (0..m).map(|_| r.random_range(0..2)).collect();

    let mut probe = model.params().clone();
    let report = grad_check_sampled(
        |tape, p| {
            let logits = model.forward_frozen(tape, p, &ids, true)?;
            tape.softmax_cross_entropy(logits, &labels)
        },
        &mut probe,
        1e-5,
        6,
        23,
    )
    .unwrap();
    assert!(
        report.max_rel_err < 1e-5,
        "max rel err {} in `{}` over {} entries",
        report.max_rel_err,
        report.worst_param,
        report.entries_checked
    );
}

#[test]
fn shape_contract_for_all_pool_kinds() {
    for pool in [PoolKind::MaxPool, PoolKind::HalfKMax, PoolKind::StridedConv] {
        let mut spec = ArchSpec::new([1, 1, 1, 1], 4);
        spec.pool = pool;
        assert_eq!(spec.level_lengths().unwrap(), [1024, 512, 256, 128]);
        assert_eq!(spec.fc_input().unwrap(), 4096);

        spec.seq_len = 1014;
        assert_eq!(spec.level_lengths().unwrap(), [1014, 507, 254, 127]);
        spec.validate().unwrap();
    }
}

#[test]
fn strided_conv_downsampling_matches_pooled_lengths() {
    let mut spec = desk_spec([1, 1, 1, 1]);
    spec.pool = PoolKind::StridedConv;
    let model: Model<f64> = Model::build(spec, 4).unwrap();
    let mut tape = Tape::new();
    let ids = vec![5usize; 64];
    let logits = model.forward_eval(&mut tape, &ids).unwrap();
    assert_eq!(tape.value(logits).shape(), &[1, 2]);
}

#[test]
fn shortcut_models_build_and_run_for_all_pool_kinds() {
    for pool in [PoolKind::MaxPool, PoolKind::HalfKMax, PoolKind::StridedConv] {
        let mut spec = desk_spec([2, 2, 2, 2]);
        spec.pool = pool;
        spec.shortcut = Shortcut::Enabled;
        let mut model: Model<f64> = Model::build(spec, 9).unwrap();
        let ids: Vec<usize> = (0..2 * 64).map(|i| (i * 7) % 69).collect();
        let mut tape = Tape::new();
        let logits = model.forward_train(&mut tape, &ids).unwrap();
        assert_eq!(tape.value(logits).shape(), &[2, 2]);
        assert!(tape.value(logits).all_finite());
    }
}

#[test]
fn layer_report_counts_match_totals() {
    let mut spec = desk_spec([2, 2, 2, 2]);
    spec.shortcut = Shortcut::Enabled;
    let model: Model<f64> = Model::build(spec, 0).unwrap();
    let rows = model.layer_report().unwrap();
    let total: usize = rows.iter().map(|r| r.params).sum();
    assert_eq!(total, model.count_params().total);
    // pooling boundaries at the halved temporal widths
    let pools: Vec<_> = rows.iter().filter(|r| r.name.starts_with("pool")).collect();
    assert_eq!(pools.len(), 3);
    assert_eq!(pools[0].output_shape[1], 32);
    assert_eq!(pools[1].output_shape[1], 16);
    assert_eq!(pools[2].output_shape[1], 8);
}

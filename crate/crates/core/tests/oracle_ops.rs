//! Operator outputs against the brute-force reference implementations.

mod common;

use common::{max_rel_diff, naive_conv, naive_k_max, naive_matmul, naive_max_pool, rng};
use rand::Rng;
use vdcnn_core::ops::conv::temporal_conv;
use vdcnn_core::ops::linear::{fully_connected, matmul};
use vdcnn_core::ops::pool::{k_max_pool, temporal_max_pool};
use vdcnn_core::tensor::Tensor;

fn tensor(shape: &[usize], data: Vec<f64>) -> Tensor<f64> {
    Tensor::from_vec(shape.to_vec(), data).unwrap()
}

#[test]
fn matmul_fixed_cases() {
    // definition case
    let a = tensor(&[2, 2], vec![1.0, 2.0, 3.0, 4.0]);
    let b = tensor(&[2, 2], vec![5.0, 6.0, 7.0, 8.0]);
    assert_eq!(matmul(&a, &b).unwrap().data(), &[19.0, 22.0, 43.0, 50.0]);

    // identity case
    let eye = tensor(&[2, 2], vec![1.0, 0.0, 0.0, 1.0]);
    assert_eq!(matmul(&a, &eye).unwrap().data(), a.data());

    // rank-1 outer product
    let col = tensor(&[3, 1], vec![1.0, 2.0, 3.0]);
    let row = tensor(&[1, 4], vec![4.0, 5.0, 6.0, 7.0]);
    let outer = matmul(&col, &row).unwrap();
    assert_eq!(outer.shape(), &[3, 4]);
    assert_eq!(outer.data()[4], 8.0); // 2 * 4

    // dimension report on mismatch
    let err = matmul(&a, &col).unwrap_err();
    let msg = format!("{err}");
    assert!(msg.contains("2x2") && msg.contains("3x1"), "{msg}");
}

#[test]
fn matmul_matches_triple_loop_oracle() {
    let mut r = rng(100);
    for _ in 0..50 {
        let (m, k, n) = (
            r.random_range(1..=6),
            r.random_range(1..=6),
            r.random_range(1..=6),
        );
        let a: Vec<f64> = (0..m * k).map(|_| r.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..k * n).map(|_| r.random_range(-2.0..2.0)).collect();
        let got = matmul(&tensor(&[m, k], a.clone()), &tensor(&[k, n], b.clone())).unwrap();
        let want = naive_matmul(&a, &b, m, k, n);
        assert!(max_rel_diff(got.data(), &want) < 1e-13);
    }
}

#[test]
fn conv_matches_padded_window_oracle() {
    let mut r = rng(101);
    for _ in 0..60 {
        let cin = r.random_range(1..=4);
        let cout = r.random_range(1..=4);
        let kw = [1, 3][r.random_range(0..2)];
        let stride = r.random_range(1..=2);
        let pad = r.random_range(0..=1usize);
        let s = r.random_range(kw.max(2)..=24);
        let x: Vec<f64> = (0..cin * s).map(|_| r.random_range(-2.0..2.0)).collect();
        let w: Vec<f64> = (0..cout * cin * kw).map(|_| r.random_range(-2.0..2.0)).collect();
        let got = temporal_conv(
            &tensor(&[cin, s], x.clone()),
            &tensor(&[cout, cin, kw], w.clone()),
            None,
            stride,
            pad,
        )
        .unwrap();
        let want = naive_conv(&x, &w, cin, s, cout, kw, stride, pad);
        assert!(
            max_rel_diff(got.data(), &want) < 1e-12,
            "cin {cin} cout {cout} kw {kw} stride {stride} pad {pad} s {s}"
        );
    }
}

#[test]
fn conv_bias_applies_per_output_channel() {
    let x = tensor(&[1, 4], vec![1.0, 2.0, 3.0, 4.0]);
    let w = tensor(&[2, 1, 3], vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
    let b = tensor(&[2], vec![10.0, -10.0]);
    let y = temporal_conv(&x, &w, Some(&b), 1, 1).unwrap();
    assert_eq!(y.data(), &[11.0, 12.0, 13.0, 14.0, -9.0, -8.0, -7.0, -6.0]);
}

#[test]
fn max_pool_matches_enumeration_oracle() {
    let mut r = rng(102);
    for _ in 0..60 {
        let c = r.random_range(1..=4);
        let s = r.random_range(1..=24);
        let x: Vec<f64> = (0..c * s).map(|_| r.random_range(-2.0..2.0)).collect();
        let got = temporal_max_pool(&tensor(&[c, s], x.clone()), 3, 2, 1).unwrap();
        let want = naive_max_pool(&x, c, s, 3, 2, 1);
        assert_eq!(got.data(), want.as_slice());
    }
}

#[test]
fn k_max_matches_sort_restore_oracle() {
    let mut r = rng(103);
    for _ in 0..60 {
        let c = r.random_range(1..=4);
        let s = r.random_range(1..=24);
        let k = r.random_range(1..=s);
        let x: Vec<f64> = (0..c * s).map(|_| r.random_range(-2.0..2.0)).collect();
        let got = k_max_pool(&tensor(&[c, s], x.clone()), k).unwrap();
        let want = naive_k_max(&x, c, s, k);
        assert_eq!(got.data(), want.as_slice());
    }
}

#[test]
fn fully_connected_dot_product_case() {
    let w = tensor(&[1, 2], vec![1.0, 2.0]);
    let x = tensor(&[2], vec![3.0, 4.0]);
    let b = tensor(&[1], vec![5.0]);
    assert_eq!(fully_connected(&x, &w, &b).unwrap().data(), &[16.0]);

    // identity weight, zero bias
    let eye = tensor(&[2, 2], vec![1.0, 0.0, 0.0, 1.0]);
    let zb = Tensor::zeros([2]);
    assert_eq!(fully_connected(&x, &eye, &zb).unwrap().data(), x.data());
}

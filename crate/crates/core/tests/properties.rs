//! Property tests for the operator invariants.

mod common;

use proptest::prelude::*;
use vdcnn_core::ops::conv::{out_len, temporal_conv};
use vdcnn_core::ops::norm::temporal_batch_norm;
use vdcnn_core::ops::pool::{half_k_max_pool, k_max_pool, temporal_max_pool};
use vdcnn_core::tensor::Tensor;
use vdcnn_core::Vocabulary;

/// Number of in-range windows when sweeping kernel/stride/pad over a row.
fn enumerate_windows(s: usize, kernel: usize, stride: usize, pad: usize) -> usize {
    let mut count = 0;
    let mut start = -(pad as isize);
    while start + kernel as isize <= (s + pad) as isize {
        count += 1;
        start += stride as isize;
    }
    count
}

proptest! {
    #[test]
    fn pooling_width_formulas(s in 2usize..=64) {
        // maxpool kernel 3 stride 2 pad 1
        prop_assert_eq!(out_len(s, 3, 2, 1).unwrap(), (s - 1) / 2 + 1);
        prop_assert_eq!(out_len(s, 3, 2, 1).unwrap(), enumerate_windows(s, 3, 2, 1));
        // strided conv pad 1 stride 2 width 3
        prop_assert_eq!(out_len(s, 3, 2, 1).unwrap(), (s + 1) / 2);
        // half k-max
        let x = Tensor::<f64>::zeros([1, s]);
        prop_assert_eq!(half_k_max_pool(&x).unwrap().shape()[1], s.div_ceil(2));
        // all three halve
        prop_assert_eq!((s + 1) / 2, s.div_ceil(2));
    }

    #[test]
    fn conv_stride1_pad1_w3_preserves_length(s in 1usize..=64) {
        let x = Tensor::<f64>::zeros([2, s]);
        let w = Tensor::<f64>::zeros([3, 2, 3]);
        let y = temporal_conv(&x, &w, None, 1, 1).unwrap();
        prop_assert_eq!(y.shape(), &[3, s]);
    }

    #[test]
    fn k_max_output_is_a_subsequence(
        values in prop::collection::vec(-100.0f64..100.0, 1..40),
        k_frac in 0.0f64..1.0,
    ) {
        let s = values.len();
        let k = 1 + ((s - 1) as f64 * k_frac) as usize;
        let x = Tensor::from_vec([1, s], values.clone()).unwrap();
        let y = k_max_pool(&x, k).unwrap();
        // two-pointer subsequence check
        let mut i = 0;
        for &v in y.data() {
            while i < s && values[i] != v {
                i += 1;
            }
            prop_assert!(i < s, "output is not a subsequence");
            i += 1;
        }
    }

    #[test]
    fn max_pool_output_bounded_by_input_max(
        values in prop::collection::vec(-100.0f64..100.0, 1..40),
    ) {
        let s = values.len();
        let x = Tensor::from_vec([1, s], values.clone()).unwrap();
        let y = temporal_max_pool(&x, 3, 2, 1).unwrap();
        let mx = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(y.data().iter().all(|&v| v <= mx));
        prop_assert!(y.data().iter().all(|&v| values.contains(&v)));
    }

    #[test]
    fn batch_norm_train_output_is_standardized(
        seed in 0u64..1000,
        c in 1usize..4,
    ) {
        use rand::{Rng, SeedableRng};
        let (mb, s) = (4usize, 8usize);
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..mb * c * s).map(|_| r.random_range(-3.0..3.0)).collect();
        let x = Tensor::from_vec([mb, c, s], data).unwrap();
        let gamma = Tensor::filled([c], 1.0);
        let beta = Tensor::zeros([c]);
        let mut rm = Tensor::zeros([c]);
        let mut rv = Tensor::filled([c], 1.0);
        let y = temporal_batch_norm(&x, &gamma, &beta, &mut rm, &mut rv, 1e-9, 0.1, true).unwrap();
        let n = (mb * s) as f64;
        for ch in 0..c {
            let mut mean = 0.0;
            let mut var = 0.0;
            for b in 0..mb {
                for t in 0..s {
                    mean += y.data()[(b * c + ch) * s + t];
                }
            }
            mean /= n;
            for b in 0..mb {
                for t in 0..s {
                    let d = y.data()[(b * c + ch) * s + t] - mean;
                    var += d * d;
                }
            }
            var /= n;
            prop_assert!(mean.abs() < 1e-5, "channel mean {mean}");
            prop_assert!((var - 1.0).abs() < 1e-4, "channel variance {var}");
        }
    }

    #[test]
    fn encode_is_total_and_in_range(text in "\\PC*", s in 1usize..64) {
        let v = Vocabulary::new();
        let ids = v.encode(&text, s);
        prop_assert_eq!(ids.len(), s);
        prop_assert!(ids.iter().all(|&id| id < 69));
    }

    #[test]
    fn operators_keep_finite_inputs_finite(
        values in prop::collection::vec(-1.0e3f64..1.0e3, 12..=12),
    ) {
        let x = Tensor::from_vec([2, 6], values).unwrap();
        let w = Tensor::filled([2, 2, 3], 0.5);
        let y = temporal_conv(&x, &w, None, 1, 1).unwrap();
        prop_assert!(y.all_finite());
        let p = temporal_max_pool(&y, 3, 2, 1).unwrap();
        prop_assert!(p.all_finite());
        let k = k_max_pool(&p, 2).unwrap();
        prop_assert!(k.all_finite());
    }
}

//! Synthetic motif-detection task.
//!
//! Random lowercase strings; class 1 iff a fixed short motif occurs
//! somewhere in the string. Balanced, seeded, and split into train/test
//! halves deterministically.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Dataset, Sample};

pub const DEFAULT_MOTIF: &str = "qvxj";

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

fn random_string(len: usize, rng: &mut ChaCha8Rng) -> String {
    (0..len)
        .map(|_| LETTERS[rng.random_range(0..LETTERS.len())] as char)
        .collect()
}

/// `n` balanced samples of length `len`; class 1 strings carry the motif at
/// a random position, class 0 strings are rejection-sampled to exclude it.
pub fn motif_task(n: usize, len: usize, motif: &str, seed: u64) -> Dataset {
    assert!(motif.len() <= len, "motif longer than the string");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 2;
        let text = loop {
            let candidate = random_string(len, &mut rng);
            if !candidate.contains(motif) {
                break candidate;
            }
        };
        let text = if label == 1 {
            let pos = rng.random_range(0..=len - motif.len());
            let mut bytes = text.into_bytes();
            bytes[pos..pos + motif.len()].copy_from_slice(motif.as_bytes());
            String::from_utf8(bytes).unwrap()
        } else {
            text
        };
        samples.push(Sample { label, text });
    }
    samples.shuffle(&mut rng);
    Dataset {
        samples,
        n_classes: 2,
        name: format!("motif-{motif}-{len}"),
    }
}

/// Head/tail split; the generator already shuffled, so this is a random split.
pub fn split(ds: Dataset, n_train: usize) -> (Dataset, Dataset) {
    assert!(n_train < ds.len());
    let mut train = ds.samples;
    let test = train.split_off(n_train);
    (
        Dataset {
            samples: train,
            n_classes: ds.n_classes,
            name: format!("{}-train", ds.name),
        },
        Dataset {
            samples: test,
            n_classes: ds.n_classes,
            name: format!("{}-test", ds.name),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_match_motif_membership() {
        let ds = motif_task(400, 64, DEFAULT_MOTIF, 11);
        assert_eq!(ds.len(), 400);
        for s in &ds.samples {
            assert_eq!(s.text.len(), 64);
            assert_eq!(s.text.contains(DEFAULT_MOTIF), s.label == 1, "{}", s.text);
        }
        let ones = ds.samples.iter().filter(|s| s.label == 1).count();
        assert_eq!(ones, 200);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = motif_task(50, 32, DEFAULT_MOTIF, 3);
        let b = motif_task(50, 32, DEFAULT_MOTIF, 3);
        assert_eq!(a.samples, b.samples);
        let c = motif_task(50, 32, DEFAULT_MOTIF, 4);
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn split_is_disjoint_and_complete() {
        let ds = motif_task(100, 16, DEFAULT_MOTIF, 5);
        let all: Vec<Sample> = ds.samples.clone();
        let (train, test) = split(ds, 80);
        assert_eq!(train.len(), 80);
        assert_eq!(test.len(), 20);
        let mut joined = train.samples.clone();
        joined.extend(test.samples.clone());
        assert_eq!(joined, all);
    }
}

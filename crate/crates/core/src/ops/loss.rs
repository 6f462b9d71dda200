//! Softmax cross-entropy over a batch of logit rows.

use alloc::format;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

/// Returns the mean negative log-likelihood and the softmax probabilities
/// (saved for the backward pass). Uses max-subtraction stabilization.
pub(crate) fn softmax_ce_fwd<T: Real>(
    logits: &Tensor<T>,
    labels: &[usize],
) -> Result<(T, Tensor<T>)> {
    let (m, n) = match *logits.shape() {
        [m, n] => (m, n),
        ref other => {
            return Err(Error::shape(
                "softmax_cross_entropy",
                format!("logits must be [batch, classes], got {other:?}"),
            ))
        }
    };
    if labels.len() != m {
        return Err(Error::shape(
            "softmax_cross_entropy",
            format!("{m} logit rows but {} labels", labels.len()),
        ));
    }
    for (position, &label) in labels.iter().enumerate() {
        if label >= n {
            return Err(Error::IdOutOfRange {
                position,
                id: label,
                limit: n,
            });
        }
    }
    let mut softmax = Tensor::zeros([m, n]);
    let mut loss = T::ZERO;
    for (i, row) in logits.data().chunks(n).enumerate() {
        let mx = row.iter().copied().fold(T::neg_infinity(), T::max);
        let probs = &mut softmax.data_mut()[i * n..(i + 1) * n];
        let mut z = T::ZERO;
        for (p, &l) in probs.iter_mut().zip(row) {
            *p = (l - mx).exp();
            z += *p;
        }
        for p in probs.iter_mut() {
            *p = *p / z;
        }
        // -log softmax[label] = logz - (l[label] - mx)
        loss += z.ln() - (row[labels[i]] - mx);
    }
    Ok((loss / T::from_usize(m), softmax))
}

/// dlogits = upstream * (softmax - onehot) / m
pub(crate) fn softmax_ce_bwd<T: Real>(
    softmax: &Tensor<T>,
    labels: &[usize],
    upstream: T,
    dlogits: &mut [T],
) {
    let n = softmax.shape()[1];
    let inv_m = upstream / T::from_usize(labels.len());
    for (i, row) in softmax.data().chunks(n).enumerate() {
        let d = &mut dlogits[i * n..(i + 1) * n];
        for (j, (&p, g)) in row.iter().zip(d.iter_mut()).enumerate() {
            let onehot = if j == labels[i] { T::ONE } else { T::ZERO };
            *g += inv_m * (p - onehot);
        }
    }
}

/// Mean softmax cross-entropy of `logits[m, n]` against class ids.
pub fn softmax_cross_entropy<T: Real>(logits: &Tensor<T>, labels: &[usize]) -> Result<T> {
    Ok(softmax_ce_fwd(logits, labels)?.0)
}

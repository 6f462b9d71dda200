//! Character embedding lookup.

use alloc::format;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

pub(crate) fn check_ids(ids: &[usize], vocab: usize) -> Result<()> {
    for (position, &id) in ids.iter().enumerate() {
        if id >= vocab {
            return Err(Error::IdOutOfRange {
                position,
                id,
                limit: vocab,
            });
        }
    }
    Ok(())
}

/// out[b,f,t] = table[ids[b*s + t], f]
pub(crate) fn embed_fwd<T: Real>(table: &[T], ids: &[usize], f0: usize, s: usize, out: &mut [T]) {
    let mb = ids.len() / s;
    for b in 0..mb {
        for t in 0..s {
            let row = &table[ids[b * s + t] * f0..(ids[b * s + t] + 1) * f0];
            for (f, &v) in row.iter().enumerate() {
                out[(b * f0 + f) * s + t] = v;
            }
        }
    }
}

/// dtable[id, f] += dout[b,f,t] for every position that referenced `id`.
pub(crate) fn embed_bwd<T: Real>(dout: &[T], ids: &[usize], f0: usize, s: usize, dtable: &mut [T]) {
    let mb = ids.len() / s;
    for b in 0..mb {
        for t in 0..s {
            let row = &mut dtable[ids[b * s + t] * f0..(ids[b * s + t] + 1) * f0];
            for (f, dv) in row.iter_mut().enumerate() {
                *dv += dout[(b * f0 + f) * s + t];
            }
        }
    }
}

/// Looks a token-id sequence up in `table[v, f0]`, producing the `[f0, s]`
/// embedding where column `t` is the table row of `ids[t]`.
pub fn embedding_lookup<T: Real>(ids: &[usize], table: &Tensor<T>) -> Result<Tensor<T>> {
    let (v, f0) = match *table.shape() {
        [v, f0] => (v, f0),
        ref other => {
            return Err(Error::shape(
                "embedding_lookup",
                format!("table must be [vocab, f0], got {other:?}"),
            ))
        }
    };
    if ids.is_empty() {
        return Err(Error::invalid("embedding_lookup", "empty id sequence"));
    }
    check_ids(ids, v)?;
    let s = ids.len();
    let mut out = Tensor::zeros([f0, s]);
    embed_fwd(table.data(), ids, f0, s, out.data_mut());
    Ok(out)
}

//! Matrix products and the fully connected layer.

use alloc::format;

use super::for_each_row;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

#[inline]
fn axpy<T: Real>(dst: &mut [T], a: T, src: &[T]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += a * s;
    }
}

#[inline]
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    let mut acc = T::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// `C[m,n] += A[m,k] · B[k,n]`
pub(crate) fn matmul_nn_acc<T: Real>(
    a: &[T],
    b: &[T],
    c: &mut [T],
    m: usize,
    k: usize,
    n: usize,
) {
    for_each_row(c, n, m * k * n, |i, c_row| {
        for p in 0..k {
            axpy(c_row, a[i * k + p], &b[p * n..p * n + n]);
        }
    });
}

/// `C[m,n] += A[m,k] · B[n,k]ᵀ`
pub(crate) fn matmul_nt_acc<T: Real>(
    a: &[T],
    b: &[T],
    c: &mut [T],
    m: usize,
    k: usize,
    n: usize,
) {
    for_each_row(c, n, m * k * n, |i, c_row| {
        let a_row = &a[i * k..i * k + k];
        for (j, cv) in c_row.iter_mut().enumerate() {
            *cv += dot(a_row, &b[j * k..j * k + k]);
        }
    });
}

/// `C[k,n] += A[m,k]ᵀ · B[m,n]`
pub(crate) fn matmul_tn_acc<T: Real>(
    a: &[T],
    b: &[T],
    c: &mut [T],
    m: usize,
    k: usize,
    n: usize,
) {
    for_each_row(c, n, m * k * n, |p, c_row| {
        for i in 0..m {
            axpy(c_row, a[i * k + p], &b[i * n..i * n + n]);
        }
    });
}

fn dims2<T: Real>(t: &Tensor<T>, op: &'static str, name: &str) -> Result<(usize, usize)> {
    match t.shape() {
        [r, c] => Ok((*r, *c)),
        other => Err(Error::shape(
            op,
            format!("{name} must be rank 2, got {other:?}"),
        )),
    }
}

/// `C = A · B` for `A[m,k]`, `B[k,n]`.
pub fn matmul<T: Real>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Tensor<T>> {
    let (m, k) = dims2(a, "matmul", "lhs")?;
    let (k2, n) = dims2(b, "matmul", "rhs")?;
    if k != k2 {
        return Err(Error::shape(
            "matmul",
            format!("inner extents disagree: lhs is {m}x{k}, rhs is {k2}x{n}"),
        ));
    }
    let mut out = Tensor::zeros([m, n]);
    matmul_nn_acc(a.data(), b.data(), out.data_mut(), m, k, n);
    Ok(out)
}

/// Forward of the linear layer `y = x · Wᵀ + b` with `x[m,i]`, `W[o,i]`, `b[o]`.
pub(crate) fn linear_fwd<T: Real>(
    x: &[T],
    w: &[T],
    b: &[T],
    y: &mut [T],
    m: usize,
    i: usize,
    o: usize,
) {
    for row in y.chunks_mut(o) {
        row.copy_from_slice(b);
    }
    matmul_nt_acc(x, w, y, m, i, o);
}

/// `y = W · x + b` for a single input vector, the classifier projection.
pub fn fully_connected<T: Real>(x: &Tensor<T>, w: &Tensor<T>, b: &Tensor<T>) -> Result<Tensor<T>> {
    let (o, i) = dims2(w, "fully_connected", "weight")?;
    if x.shape() != [i] {
        return Err(Error::shape(
            "fully_connected",
            format!("input must be [{i}] for weight {o}x{i}, got {:?}", x.shape()),
        ));
    }
    if b.shape() != [o] {
        return Err(Error::shape(
            "fully_connected",
            format!("bias must be [{o}], got {:?}", b.shape()),
        ));
    }
    let mut y = Tensor::zeros([o]);
    linear_fwd(x.data(), w.data(), b.data(), y.data_mut(), 1, i, o);
    Ok(y)
}

/// Column sums of `dy[m,o]`, accumulated into `db[o]`.
pub(crate) fn bias_grad_rows<T: Real>(dy: &[T], db: &mut [T], o: usize) {
    for row in dy.chunks(o) {
        for (d, &g) in db.iter_mut().zip(row) {
            *d += g;
        }
    }
}

/// Broadcast add of a per-channel vector over `[.., c, s]` maps.
pub(crate) fn bias_add_fwd<T: Real>(x: &[T], bias: &[T], y: &mut [T], s: usize) {
    let c = bias.len();
    for (map, row) in y.chunks_mut(c * s).enumerate() {
        let src = &x[map * c * s..(map + 1) * c * s];
        for ch in 0..c {
            let b = bias[ch];
            for t in 0..s {
                row[ch * s + t] = src[ch * s + t] + b;
            }
        }
    }
}

pub(crate) fn bias_add_bwd<T: Real>(dy: &[T], dbias: &mut [T], s: usize) {
    let c = dbias.len();
    for map in dy.chunks(c * s) {
        for ch in 0..c {
            let mut acc = T::ZERO;
            for t in 0..s {
                acc += map[ch * s + t];
            }
            dbias[ch] += acc;
        }
    }
}


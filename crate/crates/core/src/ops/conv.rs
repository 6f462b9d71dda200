//! Temporal (1-D) convolution over `[channels, time]` feature maps.
//!
//! Inputs are zero-padded by `pad` positions on each side; the output length
//! is `floor((s + 2*pad - kw) / stride) + 1`. Stride 1 with pad 1 and kernel
//! width 3 preserves the temporal resolution.

use alloc::format;

use super::for_each_row;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

/// Output length of a temporal convolution or pooling window sweep.
pub fn out_len(s: usize, kw: usize, stride: usize, pad: usize) -> Result<usize> {
    if stride == 0 {
        return Err(Error::invalid("temporal_conv", "stride must be >= 1"));
    }
    if s + 2 * pad < kw {
        return Err(Error::invalid(
            "temporal_conv",
            format!("input length {s} + 2*pad {pad} is shorter than the kernel width {kw}"),
        ));
    }
    Ok((s + 2 * pad - kw) / stride + 1)
}

pub(crate) struct ConvDims {
    pub mb: usize,
    pub cin: usize,
    pub s: usize,
    pub cout: usize,
    pub kw: usize,
    pub so: usize,
    pub stride: usize,
    pub pad: usize,
}

pub(crate) fn conv_dims<T: Real>(
    x_shape: &[usize],
    w: &Tensor<T>,
    stride: usize,
    pad: usize,
) -> Result<ConvDims> {
    let (mb, cin, s) = match *x_shape {
        [cin, s] => (1, cin, s),
        [mb, cin, s] => (mb, cin, s),
        ref other => {
            return Err(Error::shape(
                "temporal_conv",
                format!("input must be [c_in, s] or [batch, c_in, s], got {other:?}"),
            ))
        }
    };
    let (cout, wcin, kw) = match *w.shape() {
        [cout, wcin, kw] => (cout, wcin, kw),
        ref other => {
            return Err(Error::shape(
                "temporal_conv",
                format!("kernels must be [c_out, c_in, w], got {other:?}"),
            ))
        }
    };
    if wcin != cin {
        return Err(Error::shape(
            "temporal_conv",
            format!("input has {cin} channels but kernels expect {wcin}"),
        ));
    }
    let so = out_len(s, kw, stride, pad)?;
    Ok(ConvDims {
        mb,
        cin,
        s,
        cout,
        kw,
        so,
        stride,
        pad,
    })
}

/// out[b,co,t] += sum_{ci,k} w[co,ci,k] * x[b,ci,t*stride + k - pad]
pub(crate) fn conv_fwd<T: Real>(x: &[T], w: &[T], out: &mut [T], d: &ConvDims) {
    let work = d.mb * d.cout * d.cin * d.kw * d.so;
    // one batch item per row, so every write stays within the row
    for_each_row(out, d.cout * d.so, work, |b, out_b| {
        let x_b = &x[b * d.cin * d.s..(b + 1) * d.cin * d.s];
        for co in 0..d.cout {
            let out_row = &mut out_b[co * d.so..(co + 1) * d.so];
            for ci in 0..d.cin {
                let x_row = &x_b[ci * d.s..(ci + 1) * d.s];
                for k in 0..d.kw {
                    let wv = w[(co * d.cin + ci) * d.kw + k];
                    let off = k as isize - d.pad as isize;
                    if d.stride == 1 {
                        let t0 = (-off).max(0) as usize;
                        let t1 = (d.s as isize - off).clamp(0, d.so as isize) as usize;
                        if t0 < t1 {
                            let u0 = (t0 as isize + off) as usize;
                            let src = &x_row[u0..u0 + (t1 - t0)];
                            for (o, &v) in out_row[t0..t1].iter_mut().zip(src) {
                                *o += wv * v;
                            }
                        }
                    } else {
                        for (t, o) in out_row.iter_mut().enumerate() {
                            let u = (t * d.stride) as isize + off;
                            if u >= 0 && (u as usize) < d.s {
                                *o += wv * x_row[u as usize];
                            }
                        }
                    }
                }
            }
        }
    });
}

/// dx[b,ci,u] += sum_{co,k} dy[b,co,t] * w[co,ci,k] with u = t*stride + k - pad
pub(crate) fn conv_bwd_input<T: Real>(dy: &[T], w: &[T], dx: &mut [T], d: &ConvDims) {
    let work = d.mb * d.cout * d.cin * d.kw * d.so;
    for_each_row(dx, d.cin * d.s, work, |b, dx_b| {
        let dy_b = &dy[b * d.cout * d.so..(b + 1) * d.cout * d.so];
        for co in 0..d.cout {
            let dy_row = &dy_b[co * d.so..(co + 1) * d.so];
            for ci in 0..d.cin {
                let dx_row = &mut dx_b[ci * d.s..(ci + 1) * d.s];
                for k in 0..d.kw {
                    let wv = w[(co * d.cin + ci) * d.kw + k];
                    let off = k as isize - d.pad as isize;
                    if d.stride == 1 {
                        let t0 = (-off).max(0) as usize;
                        let t1 = (d.s as isize - off).clamp(0, d.so as isize) as usize;
                        if t0 < t1 {
                            let u0 = (t0 as isize + off) as usize;
                            let dst = &mut dx_row[u0..u0 + (t1 - t0)];
                            for (o, &g) in dst.iter_mut().zip(&dy_row[t0..t1]) {
                                *o += wv * g;
                            }
                        }
                    } else {
                        for (t, &g) in dy_row.iter().enumerate() {
                            let u = (t * d.stride) as isize + off;
                            if u >= 0 && (u as usize) < d.s {
                                dx_row[u as usize] += wv * g;
                            }
                        }
                    }
                }
            }
        }
    });
}

/// dw[co,ci,k] += sum_{b,t} dy[b,co,t] * x[b,ci,t*stride + k - pad]
pub(crate) fn conv_bwd_weight<T: Real>(dy: &[T], x: &[T], dw: &mut [T], d: &ConvDims) {
    let work = d.mb * d.cout * d.cin * d.kw * d.so;
    // one output-channel slab of dw per row keeps accumulation disjoint
    for_each_row(dw, d.cin * d.kw, work, |co, dw_co| {
        for b in 0..d.mb {
            let dy_row = &dy[(b * d.cout + co) * d.so..(b * d.cout + co + 1) * d.so];
            for ci in 0..d.cin {
                let x_row = &x[(b * d.cin + ci) * d.s..(b * d.cin + ci + 1) * d.s];
                for k in 0..d.kw {
                    let off = k as isize - d.pad as isize;
                    let mut acc = T::ZERO;
                    if d.stride == 1 {
                        let t0 = (-off).max(0) as usize;
                        let t1 = (d.s as isize - off).clamp(0, d.so as isize) as usize;
                        if t0 < t1 {
                            let u0 = (t0 as isize + off) as usize;
                            for (&g, &v) in dy_row[t0..t1].iter().zip(&x_row[u0..u0 + (t1 - t0)]) {
                                acc += g * v;
                            }
                        }
                    } else {
                        for (t, &g) in dy_row.iter().enumerate() {
                            let u = (t * d.stride) as isize + off;
                            if u >= 0 && (u as usize) < d.s {
                                acc += g * x_row[u as usize];
                            }
                        }
                    }
                    dw_co[ci * d.kw + k] += acc;
                }
            }
        }
    });
}

/// Temporal convolution as a pure function. `x` is `[c_in, s]` or
/// `[batch, c_in, s]`; kernels are `[c_out, c_in, w]`; the optional bias is
/// broadcast over time.
pub fn temporal_conv<T: Real>(
    x: &Tensor<T>,
    kernels: &Tensor<T>,
    bias: Option<&Tensor<T>>,
    stride: usize,
    pad: usize,
) -> Result<Tensor<T>> {
    let d = conv_dims(x.shape(), kernels, stride, pad)?;
    let mut out = if x.rank() == 2 {
        Tensor::zeros([d.cout, d.so])
    } else {
        Tensor::zeros([d.mb, d.cout, d.so])
    };
    conv_fwd(x.data(), kernels.data(), out.data_mut(), &d);
    if let Some(b) = bias {
        if b.shape() != [d.cout] {
            return Err(Error::shape(
                "temporal_conv",
                format!("bias must be [{}], got {:?}", d.cout, b.shape()),
            ));
        }
        let data = out.data_mut();
        for mb in 0..d.mb {
            for co in 0..d.cout {
                let bv = b.data()[co];
                for v in &mut data[(mb * d.cout + co) * d.so..(mb * d.cout + co + 1) * d.so] {
                    *v += bv;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn identity_kernel_preserves_input() {
        let x = Tensor::from_vec([1, 4], vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        let w = Tensor::from_vec([1, 1, 3], vec![0.0f64, 1.0, 0.0]).unwrap();
        let y = temporal_conv(&x, &w, None, 1, 1).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn window_sum_kernel() {
        let x = Tensor::from_vec([1, 4], vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        let w = Tensor::from_vec([1, 1, 3], vec![1.0f64, 1.0, 1.0]).unwrap();
        let y = temporal_conv(&x, &w, None, 1, 1).unwrap();
        assert_eq!(y.data(), &[3.0, 6.0, 9.0, 7.0]);
    }

    #[test]
    fn first_layer_shape() {
        let x = Tensor::<f32>::zeros([16, 1024]);
        let w = Tensor::<f32>::zeros([64, 16, 3]);
        let y = temporal_conv(&x, &w, None, 1, 1).unwrap();
        assert_eq!(y.shape(), &[64, 1024]);
    }

    #[test]
    fn too_short_input_rejected() {
        let x = Tensor::<f64>::zeros([1, 2]);
        let w = Tensor::<f64>::zeros([1, 1, 5]);
        assert!(temporal_conv(&x, &w, None, 1, 1).is_err());
    }

    #[test]
    fn stride_two_halves_resolution() {
        let x = Tensor::<f64>::zeros([3, 1024]);
        let w = Tensor::<f64>::zeros([6, 3, 3]);
        let y = temporal_conv(&x, &w, None, 2, 1).unwrap();
        assert_eq!(y.shape(), &[6, 512]);
    }
}

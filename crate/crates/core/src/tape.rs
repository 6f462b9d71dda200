//! Reverse-mode automatic differentiation.
//!
//! A [`Tape`] records every operation of a forward pass as a node holding the
//! result tensor plus whatever the backward rule needs. Records form a DAG in
//! topological order (inputs always precede consumers), so [`Tape::backward`]
//! is a single reverse sweep that visits each record exactly once. Gradients
//! accumulate (`+=`) into [`Parameters`], never overwrite, so parameter
//! sharing and repeated backward calls over fresh tapes compose.
//!
//! A tape is single-threaded by contract; concurrent inference should use one
//! tape per thread over shared immutable parameter values.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ops::conv::{conv_bwd_input, conv_bwd_weight, conv_dims, conv_fwd, ConvDims};
use crate::ops::embed::{check_ids, embed_bwd, embed_fwd};
use crate::ops::linear::{
    bias_add_bwd, bias_add_fwd, bias_grad_rows, linear_fwd, matmul_nn_acc, matmul_nt_acc,
    matmul_tn_acc,
};
use crate::ops::loss::{softmax_ce_bwd, softmax_ce_fwd};
use crate::ops::norm::{batch_moments, bn_apply, bn_bwd_eval, bn_bwd_train, bn_dims, inv_std_from_var, BnDims};
use crate::ops::pool::{k_max_fwd, max_pool_fwd, pool_bwd};
use crate::real::Real;
use crate::tensor::Tensor;

/// Handle to a registered parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParamId(usize);

/// A trainable tensor with its gradient accumulator and a stable name.
#[derive(Debug, Clone)]
pub struct Parameter<T> {
    name: String,
    value: Tensor<T>,
    grad: Tensor<T>,
}

impl<T: Real> Parameter<T> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self) -> &Tensor<T> {
        &self.value
    }

    pub fn grad(&self) -> &Tensor<T> {
        &self.grad
    }
}

/// The set of parameters a model trains. Gradients always have the shape of
/// their value and are zero right after [`Parameters::zero_grads`].
#[derive(Debug, Clone, Default)]
pub struct Parameters<T> {
    items: Vec<Parameter<T>>,
    index: BTreeMap<String, usize>,
}

impl<T: Real> Parameters<T> {
    pub fn new() -> Self {
        Parameters {
            items: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: impl Into<String>, value: Tensor<T>) -> Result<ParamId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateParameter { name });
        }
        let id = ParamId(self.items.len());
        self.index.insert(name.clone(), id.0);
        let grad = Tensor::zeros(value.shape().to_vec());
        self.items.push(Parameter { name, value, grad });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.items.len()).map(ParamId)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Parameter<T>> {
        self.items.iter()
    }

    pub fn get(&self, id: ParamId) -> &Parameter<T> {
        &self.items[id.0]
    }

    pub fn value(&self, id: ParamId) -> &Tensor<T> {
        &self.items[id.0].value
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut Tensor<T> {
        &mut self.items[id.0].value
    }

    pub fn grad(&self, id: ParamId) -> &Tensor<T> {
        &self.items[id.0].grad
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Tensor<T> {
        &mut self.items[id.0].grad
    }

    /// Simultaneous mutable access to a parameter's value and gradient.
    pub fn value_and_grad_mut(&mut self, id: ParamId) -> (&mut Tensor<T>, &mut Tensor<T>) {
        let p = &mut self.items[id.0];
        (&mut p.value, &mut p.grad)
    }

    pub fn by_name(&self, name: &str) -> Option<ParamId> {
        self.index.get(name).copied().map(ParamId)
    }

    /// Replaces a parameter value; the shape must match the registered one.
    pub fn set_value(&mut self, id: ParamId, value: Tensor<T>) -> Result<()> {
        let current = &mut self.items[id.0];
        if current.value.shape() != value.shape() {
            return Err(Error::shape(
                "set_value",
                format!(
                    "`{}` is {:?}, replacement is {:?}",
                    current.name,
                    current.value.shape(),
                    value.shape()
                ),
            ));
        }
        current.value = value;
        Ok(())
    }

    pub fn zero_grads(&mut self) {
        for p in &mut self.items {
            p.grad.fill(T::ZERO);
        }
    }
}

/// Handle to a value recorded on a tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

enum Op<T: Real> {
    Leaf,
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Relu(Var),
    BiasAdd {
        x: Var,
        bias: Var,
        s: usize,
    },
    MatMul {
        a: Var,
        b: Var,
        m: usize,
        k: usize,
        n: usize,
    },
    Linear {
        x: Var,
        w: Var,
        b: Var,
        m: usize,
        i: usize,
        o: usize,
    },
    Embedding {
        table: Var,
        ids: Vec<usize>,
        f0: usize,
        s: usize,
    },
    Conv {
        x: Var,
        w: Var,
        dims: ConvDims,
    },
    BatchNorm {
        x: Var,
        gamma: Var,
        beta: Var,
        mean: Vec<T>,
        inv_std: Vec<T>,
        train: bool,
        dims: BnDims,
    },
    MaxPool {
        x: Var,
        picked: Vec<usize>,
    },
    KMax {
        x: Var,
        picked: Vec<usize>,
    },
    Reshape(Var),
    SumAll(Var),
    SoftmaxCe {
        logits: Var,
        labels: Vec<usize>,
        softmax: Tensor<T>,
    },
}

struct Node<T: Real> {
    value: Tensor<T>,
    param: Option<ParamId>,
    op: Op<T>,
}

/// Recorded computation graph for one forward pass.
pub struct Tape<T: Real> {
    nodes: Vec<Node<T>>,
    consumed: bool,
}

impl<T: Real> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Tape<T> {
    pub fn new() -> Self {
        Tape {
            nodes: Vec::new(),
            consumed: false,
        }
    }

    fn push(&mut self, value: Tensor<T>, op: Op<T>) -> Var {
        self.nodes.push(Node {
            value,
            param: None,
            op,
        });
        Var(self.nodes.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor<T> {
        &self.nodes[v.0].value
    }

    /// Records a constant or input tensor.
    pub fn leaf(&mut self, value: Tensor<T>) -> Var {
        self.push(value, Op::Leaf)
    }

    /// Records a leaf bound to a parameter; backward accumulates into it.
    pub fn param(&mut self, id: ParamId, params: &Parameters<T>) -> Var {
        let v = self.push(params.value(id).clone(), Op::Leaf);
        self.nodes[v.0].param = Some(id);
        v
    }

    fn same_shape(&self, a: Var, b: Var, op: &'static str) -> Result<()> {
        let (sa, sb) = (self.value(a).shape(), self.value(b).shape());
        if sa != sb {
            return Err(Error::shape(op, format!("{sa:?} vs {sb:?}")));
        }
        Ok(())
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape(a, b, "add")?;
        let out = self.value(a).add(self.value(b))?;
        Ok(self.push(out, Op::Add(a, b)))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape(a, b, "sub")?;
        let out = self.value(a).sub(self.value(b))?;
        Ok(self.push(out, Op::Sub(a, b)))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape(a, b, "mul")?;
        let out = self.value(a).mul(self.value(b))?;
        Ok(self.push(out, Op::Mul(a, b)))
    }

    pub fn relu(&mut self, x: Var) -> Var {
        let out = self.value(x).relu();
        self.push(out, Op::Relu(x))
    }

    /// Broadcasts a `[c]` bias over the channel axis of `[c, s]` or
    /// `[batch, c, s]`.
    pub fn bias_add(&mut self, x: Var, bias: Var) -> Result<Var> {
        let (c, s) = match *self.value(x).shape() {
            [c, s] => (c, s),
            [_, c, s] => (c, s),
            ref other => {
                return Err(Error::shape(
                    "bias_add",
                    format!("input must be [c, s] or [batch, c, s], got {other:?}"),
                ))
            }
        };
        if self.value(bias).shape() != [c] {
            return Err(Error::shape(
                "bias_add",
                format!(
                    "bias {:?} does not broadcast over {:?}",
                    self.value(bias).shape(),
                    self.value(x).shape()
                ),
            ));
        }
        let mut out = Tensor::zeros(self.value(x).shape().to_vec());
        bias_add_fwd(
            self.value(x).data(),
            self.value(bias).data(),
            out.data_mut(),
            s,
        );
        Ok(self.push(out, Op::BiasAdd { x, bias, s }))
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (m, k) = match *self.value(a).shape() {
            [m, k] => (m, k),
            ref other => {
                return Err(Error::shape(
                    "matmul",
                    format!("lhs must be rank 2, got {other:?}"),
                ))
            }
        };
        let (k2, n) = match *self.value(b).shape() {
            [k2, n] => (k2, n),
            ref other => {
                return Err(Error::shape(
                    "matmul",
                    format!("rhs must be rank 2, got {other:?}"),
                ))
            }
        };
        if k != k2 {
            return Err(Error::shape(
                "matmul",
                format!("inner extents disagree: lhs is {m}x{k}, rhs is {k2}x{n}"),
            ));
        }
        let mut out = Tensor::zeros([m, n]);
        matmul_nn_acc(self.value(a).data(), self.value(b).data(), out.data_mut(), m, k, n);
        Ok(self.push(out, Op::MatMul { a, b, m, k, n }))
    }

    /// Fully connected layer `y = x Wᵀ + b` with `x [batch, i]` or `[i]`,
    /// `W [o, i]`, `b [o]`. A rank-1 input yields a rank-1 output.
    pub fn linear(&mut self, x: Var, w: Var, b: Var) -> Result<Var> {
        let (o, i) = match *self.value(w).shape() {
            [o, i] => (o, i),
            ref other => {
                return Err(Error::shape(
                    "fully_connected",
                    format!("weight must be [o, i], got {other:?}"),
                ))
            }
        };
        let (m, vec_in) = match *self.value(x).shape() {
            [xi] if xi == i => (1, true),
            [m, xi] if xi == i => (m, false),
            ref other => {
                return Err(Error::shape(
                    "fully_connected",
                    format!("input {other:?} does not match weight {o}x{i}"),
                ))
            }
        };
        if self.value(b).shape() != [o] {
            return Err(Error::shape(
                "fully_connected",
                format!("bias must be [{o}], got {:?}", self.value(b).shape()),
            ));
        }
        let mut out = if vec_in {
            Tensor::zeros([o])
        } else {
            Tensor::zeros([m, o])
        };
        linear_fwd(
            self.value(x).data(),
            self.value(w).data(),
            self.value(b).data(),
            out.data_mut(),
            m,
            i,
            o,
        );
        Ok(self.push(out, Op::Linear { x, w, b, m, i, o }))
    }

    /// Embedding lookup for a `[batch * s]` id sequence against a
    /// `[vocab, f0]` table; output is `[batch, f0, s]`.
    pub fn embedding(&mut self, table: Var, ids: &[usize], s: usize) -> Result<Var> {
        let (v, f0) = match *self.value(table).shape() {
            [v, f0] => (v, f0),
            ref other => {
                return Err(Error::shape(
                    "embedding_lookup",
                    format!("table must be [vocab, f0], got {other:?}"),
                ))
            }
        };
        if s == 0 || ids.is_empty() || ids.len() % s != 0 {
            return Err(Error::invalid(
                "embedding_lookup",
                format!("id count {} is not a multiple of s = {s}", ids.len()),
            ));
        }
        check_ids(ids, v)?;
        let mb = ids.len() / s;
        let mut out = Tensor::zeros([mb, f0, s]);
        embed_fwd(self.value(table).data(), ids, f0, s, out.data_mut());
        Ok(self.push(
            out,
            Op::Embedding {
                table,
                ids: ids.to_vec(),
                f0,
                s,
            },
        ))
    }

    /// Temporal convolution of `x [batch, c_in, s]` with kernels
    /// `[c_out, c_in, w]`. Bias, when a layer has one, is a separate
    /// [`Tape::bias_add`].
    pub fn conv(&mut self, x: Var, w: Var, stride: usize, pad: usize) -> Result<Var> {
        if self.value(x).rank() != 3 {
            return Err(Error::shape(
                "temporal_conv",
                format!(
                    "tape convolution expects [batch, c_in, s], got {:?}",
                    self.value(x).shape()
                ),
            ));
        }
        let dims = conv_dims(self.value(x).shape(), self.value(w), stride, pad)?;
        let mut out = Tensor::zeros([dims.mb, dims.cout, dims.so]);
        conv_fwd(self.value(x).data(), self.value(w).data(), out.data_mut(), &dims);
        Ok(self.push(out, Op::Conv { x, w, dims }))
    }

    /// Temporal batch normalization of `x [batch, c, s]`. In train mode the
    /// batch statistics are used and the updated running statistics are
    /// returned for the caller to store; in eval mode the provided running
    /// statistics are used unchanged.
    #[allow(clippy::too_many_arguments)]
    pub fn batch_norm(
        &mut self,
        x: Var,
        gamma: Var,
        beta: Var,
        running_mean: &Tensor<T>,
        running_var: &Tensor<T>,
        epsilon: T,
        update_rate: T,
        train: bool,
    ) -> Result<(Var, Option<(Tensor<T>, Tensor<T>)>)> {
        let dims = bn_dims(self.value(x), self.value(gamma), self.value(beta))?;
        let mut out = Tensor::zeros(self.value(x).shape().to_vec());
        if train {
            if dims.mb * dims.s < 2 {
                return Err(Error::invalid(
                    "temporal_batch_norm",
                    format!(
                        "train mode needs batch*s >= 2 positions, got {}",
                        dims.mb * dims.s
                    ),
                ));
            }
            let (mean, var) = batch_moments(self.value(x).data(), &dims);
            let inv_std = inv_std_from_var(&var, epsilon);
            bn_apply(
                self.value(x).data(),
                &mean,
                &inv_std,
                self.value(gamma).data(),
                self.value(beta).data(),
                out.data_mut(),
                &dims,
            );
            let keep = T::ONE - update_rate;
            let mut new_mean = running_mean.clone();
            let mut new_var = running_var.clone();
            for ch in 0..dims.c {
                new_mean.data_mut()[ch] = keep * running_mean.data()[ch] + update_rate * mean[ch];
                new_var.data_mut()[ch] = keep * running_var.data()[ch] + update_rate * var[ch];
            }
            let v = self.push(
                out,
                Op::BatchNorm {
                    x,
                    gamma,
                    beta,
                    mean,
                    inv_std,
                    train: true,
                    dims,
                },
            );
            Ok((v, Some((new_mean, new_var))))
        } else {
            let mean = running_mean.data().to_vec();
            let inv_std = inv_std_from_var(running_var.data(), epsilon);
            bn_apply(
                self.value(x).data(),
                &mean,
                &inv_std,
                self.value(gamma).data(),
                self.value(beta).data(),
                out.data_mut(),
                &dims,
            );
            let v = self.push(
                out,
                Op::BatchNorm {
                    x,
                    gamma,
                    beta,
                    mean,
                    inv_std,
                    train: false,
                    dims,
                },
            );
            Ok((v, None))
        }
    }

    /// Temporal max pooling, negative-infinity padding, gradient to the
    /// argmax (first occurrence on ties).
    pub fn max_pool(&mut self, x: Var, kernel: usize, stride: usize, pad: usize) -> Result<Var> {
        let (out, picked) = max_pool_fwd(self.value(x), kernel, stride, pad)?;
        Ok(self.push(out, Op::MaxPool { x, picked }))
    }

    /// k-max pooling along time; gradient flows to the selected positions.
    pub fn k_max(&mut self, x: Var, k: usize) -> Result<Var> {
        let (out, picked) = k_max_fwd(self.value(x), k)?;
        Ok(self.push(out, Op::KMax { x, picked }))
    }

    pub fn reshape(&mut self, x: Var, shape: impl Into<Vec<usize>>) -> Result<Var> {
        let out = self.value(x).reshape(shape)?;
        Ok(self.push(out, Op::Reshape(x)))
    }

    pub fn sum_all(&mut self, x: Var) -> Var {
        let out = Tensor::scalar(self.value(x).sum());
        self.push(out, Op::SumAll(x))
    }

    /// Mean softmax cross-entropy of `logits [batch, classes]` against class
    /// ids; the result is a scalar.
    pub fn softmax_cross_entropy(&mut self, logits: Var, labels: &[usize]) -> Result<Var> {
        let (loss, softmax) = softmax_ce_fwd(self.value(logits), labels)?;
        Ok(self.push(
            Tensor::scalar(loss),
            Op::SoftmaxCe {
                logits,
                labels: labels.to_vec(),
                softmax,
            },
        ))
    }

    /// Runs the reverse sweep from a scalar loss, accumulating `dloss/dp`
    /// into every reachable parameter. Consumes the tape's backward budget:
    /// a second call is rejected.
    pub fn backward(&mut self, loss: Var, params: &mut Parameters<T>) -> Result<()> {
        if self.consumed {
            return Err(Error::TapeConsumed);
        }
        if !self.nodes[loss.0].value.is_scalar() {
            return Err(Error::LossNotScalar {
                shape: self.nodes[loss.0].value.shape().to_vec(),
            });
        }
        self.consumed = true;

        let mut grads: Vec<Option<Tensor<T>>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[loss.0] = Some(Tensor::scalar(T::ONE));

        for i in (0..self.nodes.len()).rev() {
            let Some(g) = grads[i].take() else { continue };
            let node = &self.nodes[i];
            match &node.op {
                Op::Leaf => {
                    if let Some(id) = node.param {
                        params.grad_mut(id).add_assign(&g)?;
                    }
                }
                Op::Add(a, b) => {
                    acc(&mut grads, &self.nodes, *a).add_assign(&g)?;
                    acc(&mut grads, &self.nodes, *b).add_assign(&g)?;
                }
                Op::Sub(a, b) => {
                    acc(&mut grads, &self.nodes, *a).add_assign(&g)?;
                    let db = acc(&mut grads, &self.nodes, *b);
                    for (d, &gv) in db.data_mut().iter_mut().zip(g.data()) {
                        *d -= gv;
                    }
                }
                Op::Mul(a, b) => {
                    let ga = g.mul(&self.nodes[b.0].value)?;
                    let gb = g.mul(&self.nodes[a.0].value)?;
                    acc(&mut grads, &self.nodes, *a).add_assign(&ga)?;
                    acc(&mut grads, &self.nodes, *b).add_assign(&gb)?;
                }
                Op::Relu(x) => {
                    let xv = &self.nodes[x.0].value;
                    let dx = acc(&mut grads, &self.nodes, *x);
                    for ((d, &gv), &v) in dx.data_mut().iter_mut().zip(g.data()).zip(xv.data()) {
                        if v > T::ZERO {
                            *d += gv;
                        }
                    }
                }
                Op::BiasAdd { x, bias, s } => {
                    let s = *s;
                    acc(&mut grads, &self.nodes, *x).add_assign(&g)?;
                    let db = acc(&mut grads, &self.nodes, *bias);
                    bias_add_bwd(g.data(), db.data_mut(), s);
                }
                Op::MatMul { a, b, m, k, n } => {
                    let (m, k, n) = (*m, *k, *n);
                    let bv = &self.nodes[b.0].value;
                    let da = acc(&mut grads, &self.nodes, *a);
                    matmul_nt_acc(g.data(), bv.data(), da.data_mut(), m, n, k);
                    let av = &self.nodes[a.0].value;
                    let db = acc(&mut grads, &self.nodes, *b);
                    matmul_tn_acc(av.data(), g.data(), db.data_mut(), m, k, n);
                }
                Op::Linear { x, w, b, m, i, o } => {
                    let (m, i, o) = (*m, *i, *o);
                    let wv = &self.nodes[w.0].value;
                    let dx = acc(&mut grads, &self.nodes, *x);
                    matmul_nn_acc(g.data(), wv.data(), dx.data_mut(), m, o, i);
                    let xv = &self.nodes[x.0].value;
                    let dw = acc(&mut grads, &self.nodes, *w);
                    matmul_tn_acc(g.data(), xv.data(), dw.data_mut(), m, o, i);
                    let db = acc(&mut grads, &self.nodes, *b);
                    bias_grad_rows(g.data(), db.data_mut(), o);
                }
                Op::Embedding { table, ids, f0, s } => {
                    let (f0, s) = (*f0, *s);
                    let dt = acc(&mut grads, &self.nodes, *table);
                    embed_bwd(g.data(), ids, f0, s, dt.data_mut());
                }
                Op::Conv { x, w, dims } => {
                    let wv = &self.nodes[w.0].value;
                    let dx = acc(&mut grads, &self.nodes, *x);
                    conv_bwd_input(g.data(), wv.data(), dx.data_mut(), dims);
                    let xv = &self.nodes[x.0].value;
                    let dw = acc(&mut grads, &self.nodes, *w);
                    conv_bwd_weight(g.data(), xv.data(), dw.data_mut(), dims);
                }
                Op::BatchNorm {
                    x,
                    gamma,
                    beta,
                    mean,
                    inv_std,
                    train,
                    dims,
                } => {
                    let xv = &self.nodes[x.0].value;
                    let gv = &self.nodes[gamma.0].value;
                    let c = dims.c;
                    // three separate grad buffers, so accumulate via temporaries
                    let mut dx = Tensor::zeros(xv.shape().to_vec());
                    let mut dgamma = Tensor::zeros([c]);
                    let mut dbeta = Tensor::zeros([c]);
                    #[allow(clippy::type_complexity)]
                    let bwd: fn(&[T], &[T], &[T], &[T], &[T], &mut [T], &mut [T], &mut [T], &BnDims) =
                        if *train { bn_bwd_train } else { bn_bwd_eval };
                    bwd(
                        xv.data(),
                        g.data(),
                        mean,
                        inv_std,
                        gv.data(),
                        dx.data_mut(),
                        dgamma.data_mut(),
                        dbeta.data_mut(),
                        dims,
                    );
                    acc(&mut grads, &self.nodes, *x).add_assign(&dx)?;
                    acc(&mut grads, &self.nodes, *gamma).add_assign(&dgamma)?;
                    acc(&mut grads, &self.nodes, *beta).add_assign(&dbeta)?;
                }
                Op::MaxPool { x, picked } | Op::KMax { x, picked } => {
                    let dx = acc(&mut grads, &self.nodes, *x);
                    pool_bwd(g.data(), picked, dx.data_mut());
                }
                Op::Reshape(x) => {
                    let back = g.reshape(self.nodes[x.0].value.shape().to_vec())?;
                    acc(&mut grads, &self.nodes, *x).add_assign(&back)?;
                }
                Op::SumAll(x) => {
                    let gv = g.item()?;
                    let dx = acc(&mut grads, &self.nodes, *x);
                    for d in dx.data_mut() {
                        *d += gv;
                    }
                }
                Op::SoftmaxCe {
                    logits,
                    labels,
                    softmax,
                } => {
                    let gv = g.item()?;
                    let dl = acc(&mut grads, &self.nodes, *logits);
                    softmax_ce_bwd(softmax, labels, gv, dl.data_mut());
                }
            }
        }
        Ok(())
    }
}

fn acc<'a, T: Real>(
    grads: &'a mut [Option<Tensor<T>>],
    nodes: &[Node<T>],
    v: Var,
) -> &'a mut Tensor<T> {
    grads[v.0].get_or_insert_with(|| Tensor::zeros(nodes[v.0].value.shape().to_vec()))
}

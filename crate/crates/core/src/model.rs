//! Assembly of the very deep character-level convolutional network.
//!
//! The network is an embedding lookup, one 3-wide convolution bringing the
//! embedding up to the first feature-map width, four levels of convolutional
//! blocks with three down-sampling points in between (temporal resolution
//! halves, feature maps double), a final k-max pooling to a fixed width, and
//! a three-layer fully connected classifier. Depth is counted in
//! convolutional layers: two per block plus the first layer.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::init::{he_draw, seeded_rng, uniform_draw};
use crate::ops::conv::out_len;
use crate::real::Real;
use crate::tape::{ParamId, Parameters, Tape, Var};
use crate::tensor::Tensor;
use crate::vocab::VOCAB_SIZE;

/// Feature-map widths of the four levels before the width multiplier.
pub const BASE_WIDTHS: [usize; 4] = [64, 128, 256, 512];

/// Batch-norm epsilon used everywhere.
pub const BN_EPSILON: f64 = 1e-5;
/// Running-statistics update rate: `running <- 0.9*running + 0.1*batch`.
pub const BN_UPDATE_RATE: f64 = 0.1;

const EMBED_RANGE: f64 = 0.05;

/// How the three down-sampling points halve the temporal resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolKind {
    /// First convolution of the next level runs with stride 2.
    StridedConv,
    /// k-max pooling with k chosen to halve the resolution.
    HalfKMax,
    /// Temporal max pooling, kernel 3, stride 2.
    MaxPool,
}

impl PoolKind {
    pub fn name(self) -> &'static str {
        match self {
            PoolKind::StridedConv => "conv",
            PoolKind::HalfKMax => "kmax",
            PoolKind::MaxPool => "maxpool",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "conv" => Some(PoolKind::StridedConv),
            "kmax" => Some(PoolKind::HalfKMax),
            "maxpool" => Some(PoolKind::MaxPool),
            _ => None,
        }
    }

    /// Temporal length after one down-sampling point.
    pub fn halve(self, s: usize) -> Result<usize> {
        match self {
            PoolKind::StridedConv => out_len(s, 3, 2, 1),
            PoolKind::MaxPool => out_len(s, 3, 2, 1),
            PoolKind::HalfKMax => {
                if s < 2 {
                    Err(Error::invalid(
                        "half_k_max_pool",
                        format!("row length must be >= 2, got {s}"),
                    ))
                } else {
                    Ok(s.div_ceil(2))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shortcut {
    None,
    Enabled,
}

impl Shortcut {
    pub fn name(self) -> &'static str {
        match self {
            Shortcut::None => "none",
            Shortcut::Enabled => "enabled",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Shortcut::None),
            "enabled" => Some(Shortcut::Enabled),
            _ => None,
        }
    }
}

/// Full architectural configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchSpec {
    /// Blocks per level, for the 64/128/256/512 widths.
    pub block_counts: [usize; 4],
    /// Width multiplier as an exact rational; 1/1 is the reference size.
    pub width_num: usize,
    pub width_den: usize,
    pub pool: PoolKind,
    pub shortcut: Shortcut,
    pub seq_len: usize,
    pub embed_dim: usize,
    pub kmax_k: usize,
    pub fc_hidden: usize,
    pub n_classes: usize,
}

impl ArchSpec {
    /// Reference settings: width multiplier 1, max pooling, no shortcuts,
    /// sequence length 1024, embedding 16, k-max 8, 2048 hidden units.
    pub fn new(block_counts: [usize; 4], n_classes: usize) -> Self {
        ArchSpec {
            block_counts,
            width_num: 1,
            width_den: 1,
            pool: PoolKind::MaxPool,
            shortcut: Shortcut::None,
            seq_len: 1024,
            embed_dim: 16,
            kmax_k: 8,
            fc_hidden: 2048,
            n_classes,
        }
    }

    pub fn depth(&self) -> usize {
        depth_of(self.block_counts)
    }

    /// The four feature-map widths after applying the width multiplier.
    pub fn widths(&self) -> Result<[usize; 4]> {
        let mut widths = [0usize; 4];
        for (w, base) in widths.iter_mut().zip(BASE_WIDTHS) {
            let scaled = base * self.width_num;
            if self.width_den == 0 || scaled % self.width_den != 0 || scaled / self.width_den == 0 {
                return Err(Error::invalid(
                    "arch_spec",
                    format!(
                        "width multiplier {}/{} does not scale {base} to a positive integer",
                        self.width_num, self.width_den
                    ),
                ));
            }
            *w = scaled / self.width_den;
        }
        Ok(widths)
    }

    /// Temporal lengths at the four levels, `[s, s/2, s/4, s/8]` under the
    /// configured pooling's floor semantics.
    pub fn level_lengths(&self) -> Result<[usize; 4]> {
        let mut lens = [self.seq_len; 4];
        for i in 1..4 {
            lens[i] = self.pool.halve(lens[i - 1])?;
        }
        Ok(lens)
    }

    /// Temporal length entering the final k-max pooling.
    pub fn final_len(&self) -> Result<usize> {
        Ok(self.level_lengths()?[3])
    }

    /// Flattened classifier input: last width times k.
    pub fn fc_input(&self) -> Result<usize> {
        Ok(self.widths()?[3] * self.kmax_k)
    }

    /// Smallest legal sequence length for this pooling and k-max size.
    pub fn min_seq_len(&self) -> usize {
        for s in 1..=(8 * self.kmax_k + 8) {
            let mut probe = self.clone();
            probe.seq_len = s;
            if probe
                .final_len()
                .map(|sd| sd >= self.kmax_k)
                .unwrap_or(false)
            {
                return s;
            }
        }
        8 * self.kmax_k + 8
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_counts.iter().any(|&c| c == 0) {
            return Err(Error::invalid(
                "arch_spec",
                format!("block counts must all be >= 1, got {:?}", self.block_counts),
            ));
        }
        self.widths()?;
        if self.embed_dim == 0 {
            return Err(Error::invalid("arch_spec", "embed_dim must be >= 1"));
        }
        if self.kmax_k == 0 {
            return Err(Error::invalid("arch_spec", "kmax_k must be >= 1"));
        }
        if self.fc_hidden == 0 {
            return Err(Error::invalid("arch_spec", "fc_hidden must be >= 1"));
        }
        if self.n_classes < 2 {
            return Err(Error::invalid("arch_spec", "n_classes must be >= 2"));
        }
        let final_len = self.final_len().map_err(|_| self.seq_len_error())?;
        if final_len < self.kmax_k {
            return Err(self.seq_len_error());
        }
        Ok(())
    }

    fn seq_len_error(&self) -> Error {
        Error::invalid(
            "arch_spec",
            format!(
                "seq_len {} cannot survive 3 halvings with k-max {}; minimal legal length is {}",
                self.seq_len,
                self.kmax_k,
                self.min_seq_len()
            ),
        )
    }
}

/// `2 * (total blocks) + 1` convolutional layers.
pub fn depth_of(block_counts: [usize; 4]) -> usize {
    2 * block_counts.iter().sum::<usize>() + 1
}

/// Gamma/beta handles plus running statistics for one batch-norm layer.
#[derive(Debug, Clone)]
pub struct BatchNormState<T> {
    pub name: String,
    pub gamma: ParamId,
    pub beta: ParamId,
    pub running_mean: Tensor<T>,
    pub running_var: Tensor<T>,
    pub epsilon: T,
    pub update_rate: T,
}

impl<T: Real> BatchNormState<T> {
    fn create(params: &mut Parameters<T>, name: String, c: usize) -> Result<Self> {
        let gamma = params.register(format!("{name}.gamma"), Tensor::filled([c], T::ONE))?;
        let beta = params.register(format!("{name}.beta"), Tensor::zeros([c]))?;
        Ok(BatchNormState {
            name,
            gamma,
            beta,
            running_mean: Tensor::zeros([c]),
            running_var: Tensor::filled([c], T::ONE),
            epsilon: T::from_f64(BN_EPSILON),
            update_rate: T::from_f64(BN_UPDATE_RATE),
        })
    }
}

#[derive(Debug, Clone)]
enum ShortcutPath {
    Off,
    Identity,
    Projection {
        weight: ParamId,
        bias: ParamId,
        stride: usize,
    },
}

#[derive(Debug, Clone)]
struct ConvBlock {
    name: String,
    out_ch: usize,
    conv1: ParamId,
    bn1: usize,
    conv2: ParamId,
    bn2: usize,
    /// Stride of the first convolution; 2 when the block itself down-samples.
    stride1: usize,
    shortcut: ShortcutPath,
}

#[derive(Debug, Clone)]
struct Net<T> {
    embedding: ParamId,
    first_conv: ParamId,
    first_bn: usize,
    bns: Vec<BatchNormState<T>>,
    levels: [Vec<ConvBlock>; 4],
    fc: [(ParamId, ParamId); 3],
}

/// Per-epoch batch-norm running statistics produced by a train-mode forward.
type BnUpdates<T> = Vec<(usize, Tensor<T>, Tensor<T>)>;

/// Parameter count per category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamCounts {
    pub conv: usize,
    pub fc: usize,
    pub batchnorm: usize,
    pub embedding: usize,
    pub total: usize,
}

/// One line of the architecture report.
#[derive(Debug, Clone)]
pub struct LayerReport {
    pub name: String,
    /// Per-sample output shape at the configured sequence length.
    pub output_shape: Vec<usize>,
    pub params: usize,
}

/// A buildable, runnable network: parameters plus layer wiring.
#[derive(Debug, Clone)]
pub struct Model<T: Real> {
    spec: ArchSpec,
    params: Parameters<T>,
    net: Net<T>,
}

impl<T: Real> Model<T> {
    /// Builds a model with freshly initialized parameters. The same seed
    /// yields bit-identical parameters.
    pub fn build(spec: ArchSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = seeded_rng(seed);
        let mut params = Parameters::new();
        let widths = spec.widths()?;

        let embedding = params.register(
            "embedding",
            uniform_draw([VOCAB_SIZE, spec.embed_dim], -EMBED_RANGE, EMBED_RANGE, &mut rng)?,
        )?;

        // first convolutional layer: bias-free, batch norm follows
        let first_conv = params.register(
            "conv0.weight",
            he_draw([widths[0], spec.embed_dim, 3], spec.embed_dim * 3, &mut rng)?,
        )?;
        let mut bns = Vec::new();
        bns.push(BatchNormState::create(
            &mut params,
            "conv0.bn".to_string(),
            widths[0],
        )?);
        let first_bn = 0;

        let mut levels: [Vec<ConvBlock>; 4] = [vec![], vec![], vec![], vec![]];
        for lvl in 0..4 {
            let out_ch = widths[lvl];
            for b in 0..spec.block_counts[lvl] {
                let in_ch = if b == 0 && lvl > 0 { widths[lvl - 1] } else { out_ch };
                let entry = b == 0 && lvl > 0;
                let stride1 = if entry && spec.pool == PoolKind::StridedConv {
                    2
                } else {
                    1
                };
                let name = format!("level{}.block{}", lvl + 1, b);
                let conv1 = params.register(
                    format!("{name}.conv1.weight"),
                    he_draw([out_ch, in_ch, 3], in_ch * 3, &mut rng)?,
                )?;
                let bn1 = bns.len();
                bns.push(BatchNormState::create(
                    &mut params,
                    format!("{name}.bn1"),
                    out_ch,
                )?);
                let conv2 = params.register(
                    format!("{name}.conv2.weight"),
                    he_draw([out_ch, out_ch, 3], out_ch * 3, &mut rng)?,
                )?;
                let bn2 = bns.len();
                bns.push(BatchNormState::create(
                    &mut params,
                    format!("{name}.bn2"),
                    out_ch,
                )?);
                let shortcut = match spec.shortcut {
                    Shortcut::None => ShortcutPath::Off,
                    Shortcut::Enabled => {
                        if in_ch == out_ch && stride1 == 1 {
                            ShortcutPath::Identity
                        } else {
                            // 1x1 projection, stride matching the block
                            let weight = params.register(
                                format!("{name}.shortcut.weight"),
                                he_draw([out_ch, in_ch, 1], in_ch, &mut rng)?,
                            )?;
                            let bias = params.register(
                                format!("{name}.shortcut.bias"),
                                Tensor::zeros([out_ch]),
                            )?;
                            ShortcutPath::Projection {
                                weight,
                                bias,
                                stride: stride1,
                            }
                        }
                    }
                };
                levels[lvl].push(ConvBlock {
                    name,
                    out_ch,
                    conv1,
                    bn1,
                    conv2,
                    bn2,
                    stride1,
                    shortcut,
                });
            }
        }

        let fc_in = spec.fc_input()?;
        let mut fc = [(ParamId::default(), ParamId::default()); 3];
        let dims = [
            (spec.fc_hidden, fc_in),
            (spec.fc_hidden, spec.fc_hidden),
            (spec.n_classes, spec.fc_hidden),
        ];
        for (i, (o, inp)) in dims.into_iter().enumerate() {
            let w = params.register(
                format!("fc{}.weight", i + 1),
                he_draw([o, inp], inp, &mut rng)?,
            )?;
            let bias = params.register(format!("fc{}.bias", i + 1), Tensor::zeros([o]))?;
            fc[i] = (w, bias);
        }

        Ok(Model {
            spec,
            params,
            net: Net {
                embedding,
                first_conv,
                first_bn,
                bns,
                levels,
                fc,
            },
        })
    }

    pub fn spec(&self) -> &ArchSpec {
        &self.spec
    }

    pub fn params(&self) -> &Parameters<T> {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut Parameters<T> {
        &mut self.params
    }

    fn check_batch(&self, ids: &[usize]) -> Result<usize> {
        let s = self.spec.seq_len;
        if ids.is_empty() || ids.len() % s != 0 {
            return Err(Error::shape(
                "forward",
                format!(
                    "batch of {} ids is not a multiple of the configured sequence length {s}",
                    ids.len()
                ),
            ));
        }
        Ok(ids.len() / s)
    }

    /// Train-mode forward: batch statistics normalize, running statistics
    /// update. Needs exclusive access; returns the `[batch, classes]` logits.
    pub fn forward_train(&mut self, tape: &mut Tape<T>, ids: &[usize]) -> Result<Var> {
        self.check_batch(ids)?;
        let (logits, updates) = self.net.forward(tape, &self.params, &self.spec, ids, true)?;
        for (slot, mean, var) in updates {
            self.net.bns[slot].running_mean = mean;
            self.net.bns[slot].running_var = var;
        }
        Ok(logits)
    }

    /// Eval-mode forward: running statistics normalize, nothing mutates, so
    /// the model can be shared across threads.
    pub fn forward_eval(&self, tape: &mut Tape<T>, ids: &[usize]) -> Result<Var> {
        self.check_batch(ids)?;
        Ok(self
            .net
            .forward(tape, &self.params, &self.spec, ids, false)?
            .0)
    }

    /// Forward against an external parameter set (same wiring), without
    /// touching running statistics. This is the gradient-check entry point:
    /// the checker owns and perturbs its own copy of the parameters.
    pub fn forward_frozen(
        &self,
        tape: &mut Tape<T>,
        params: &Parameters<T>,
        ids: &[usize],
        train: bool,
    ) -> Result<Var> {
        self.check_batch(ids)?;
        Ok(self.net.forward(tape, params, &self.spec, ids, train)?.0)
    }

    /// Running batch-norm statistics as named tensors
    /// (`<layer>.running_mean`, `<layer>.running_var`).
    pub fn running_stats(&self) -> Vec<(String, &Tensor<T>)> {
        let mut out = Vec::with_capacity(2 * self.net.bns.len());
        for bn in &self.net.bns {
            out.push((format!("{}.running_mean", bn.name), &bn.running_mean));
            out.push((format!("{}.running_var", bn.name), &bn.running_var));
        }
        out
    }

    /// Restores one running statistic by its exported name.
    pub fn set_running_stat(&mut self, name: &str, value: Tensor<T>) -> Result<()> {
        for bn in &mut self.net.bns {
            let slot = if name == format!("{}.running_mean", bn.name) {
                Some(&mut bn.running_mean)
            } else if name == format!("{}.running_var", bn.name) {
                Some(&mut bn.running_var)
            } else {
                None
            };
            if let Some(t) = slot {
                if t.shape() != value.shape() {
                    return Err(Error::shape(
                        "set_running_stat",
                        format!("`{name}` is {:?}, got {:?}", t.shape(), value.shape()),
                    ));
                }
                *t = value;
                return Ok(());
            }
        }
        Err(Error::invalid(
            "set_running_stat",
            format!("unknown running statistic `{name}`"),
        ))
    }

    /// Exact parameter counts by category. Convolutions count kernel weights
    /// plus biases where present (only 1x1 shortcut projections carry one);
    /// fully connected layers count weights and biases; batch norm counts
    /// gamma and beta. Running statistics are not parameters.
    pub fn count_params(&self) -> ParamCounts {
        let numel = |id: ParamId| self.params.value(id).numel();
        let mut conv = numel(self.net.first_conv);
        for block in self.net.levels.iter().flatten() {
            conv += numel(block.conv1) + numel(block.conv2);
            if let ShortcutPath::Projection { weight, bias, .. } = block.shortcut {
                conv += numel(weight) + numel(bias);
            }
        }
        let fc = self
            .net
            .fc
            .iter()
            .map(|&(w, b)| numel(w) + numel(b))
            .sum::<usize>();
        let batchnorm = self
            .net
            .bns
            .iter()
            .map(|bn| numel(bn.gamma) + numel(bn.beta))
            .sum::<usize>();
        let embedding = numel(self.net.embedding);
        ParamCounts {
            conv,
            fc,
            batchnorm,
            embedding,
            total: conv + fc + batchnorm + embedding,
        }
    }

    /// Layer-by-layer architecture report at the configured sequence length.
    pub fn layer_report(&self) -> Result<Vec<LayerReport>> {
        let spec = &self.spec;
        let widths = spec.widths()?;
        let numel = |id: ParamId| self.params.value(id).numel();
        let mut rows = Vec::new();
        let mut s = spec.seq_len;
        rows.push(LayerReport {
            name: "embedding".to_string(),
            output_shape: vec![spec.embed_dim, s],
            params: numel(self.net.embedding),
        });
        let bn0 = &self.net.bns[self.net.first_bn];
        rows.push(LayerReport {
            name: "conv0 (3, temp conv, bn, relu)".to_string(),
            output_shape: vec![widths[0], s],
            params: numel(self.net.first_conv) + numel(bn0.gamma) + numel(bn0.beta),
        });
        for (lvl, blocks) in self.net.levels.iter().enumerate() {
            if lvl > 0 && spec.pool != PoolKind::StridedConv {
                s = spec.pool.halve(s)?;
                rows.push(LayerReport {
                    name: format!(
                        "pool{} ({})",
                        lvl,
                        match spec.pool {
                            PoolKind::MaxPool => "maxpool k3 s2",
                            PoolKind::HalfKMax => "half k-max",
                            PoolKind::StridedConv => unreachable!(),
                        }
                    ),
                    output_shape: vec![widths[lvl - 1], s],
                    params: 0,
                });
            }
            for block in blocks {
                if block.stride1 == 2 {
                    s = spec.pool.halve(s)?;
                }
                let mut p = numel(block.conv1) + numel(block.conv2);
                for bn in [block.bn1, block.bn2] {
                    p += numel(self.net.bns[bn].gamma) + numel(self.net.bns[bn].beta);
                }
                let mut name = format!("{} (2x [3, temp conv, {}])", block.name, block.out_ch);
                if let ShortcutPath::Projection { weight, bias, .. } = block.shortcut {
                    p += numel(weight) + numel(bias);
                    name.push_str(" + 1x1 projection");
                } else if matches!(block.shortcut, ShortcutPath::Identity) {
                    name.push_str(" + identity");
                }
                rows.push(LayerReport {
                    name,
                    output_shape: vec![block.out_ch, s],
                    params: p,
                });
            }
        }
        rows.push(LayerReport {
            name: format!("k-max (k={})", spec.kmax_k),
            output_shape: vec![widths[3], spec.kmax_k],
            params: 0,
        });
        for (i, &(w, b)) in self.net.fc.iter().enumerate() {
            let o = self.params.value(w).shape()[0];
            rows.push(LayerReport {
                name: format!(
                    "fc{} ({}, {}){}",
                    i + 1,
                    self.params.value(w).shape()[1],
                    o,
                    if i < 2 { " + relu" } else { "" }
                ),
                output_shape: vec![o],
                params: numel(w) + numel(b),
            });
        }
        Ok(rows)
    }
}

impl<T: Real> Net<T> {
    fn apply_bn(
        &self,
        tape: &mut Tape<T>,
        params: &Parameters<T>,
        slot: usize,
        x: Var,
        train: bool,
        updates: &mut BnUpdates<T>,
    ) -> Result<Var> {
        let bn = &self.bns[slot];
        let gamma = tape.param(bn.gamma, params);
        let beta = tape.param(bn.beta, params);
        let (y, update) = tape.batch_norm(
            x,
            gamma,
            beta,
            &bn.running_mean,
            &bn.running_var,
            bn.epsilon,
            bn.update_rate,
            train,
        )?;
        if let Some((mean, var)) = update {
            updates.push((slot, mean, var));
        }
        Ok(y)
    }

    fn block_forward(
        &self,
        tape: &mut Tape<T>,
        params: &Parameters<T>,
        block: &ConvBlock,
        x: Var,
        train: bool,
        updates: &mut BnUpdates<T>,
    ) -> Result<Var> {
        let input = x;
        let w1 = tape.param(block.conv1, params);
        let mut h = tape.conv(x, w1, block.stride1, 1)?;
        h = self.apply_bn(tape, params, block.bn1, h, train, updates)?;
        h = tape.relu(h);
        let w2 = tape.param(block.conv2, params);
        h = tape.conv(h, w2, 1, 1)?;
        h = self.apply_bn(tape, params, block.bn2, h, train, updates)?;
        // the residual joins before the block's final activation
        match &block.shortcut {
            ShortcutPath::Off => {}
            ShortcutPath::Identity => h = tape.add(h, input)?,
            ShortcutPath::Projection {
                weight,
                bias,
                stride,
            } => {
                let w = tape.param(*weight, params);
                let mut sc = tape.conv(input, w, *stride, 0)?;
                let b = tape.param(*bias, params);
                sc = tape.bias_add(sc, b)?;
                h = tape.add(h, sc)?;
            }
        }
        Ok(tape.relu(h))
    }

    fn forward(
        &self,
        tape: &mut Tape<T>,
        params: &Parameters<T>,
        spec: &ArchSpec,
        ids: &[usize],
        train: bool,
    ) -> Result<(Var, BnUpdates<T>)> {
        let mut updates = BnUpdates::new();
        let table = tape.param(self.embedding, params);
        let mut x = tape.embedding(table, ids, spec.seq_len)?;
        let w0 = tape.param(self.first_conv, params);
        x = tape.conv(x, w0, 1, 1)?;
        x = self.apply_bn(tape, params, self.first_bn, x, train, &mut updates)?;
        x = tape.relu(x);
        for (lvl, blocks) in self.levels.iter().enumerate() {
            if lvl > 0 {
                match spec.pool {
                    PoolKind::MaxPool => x = tape.max_pool(x, 3, 2, 1)?,
                    PoolKind::HalfKMax => {
                        let cur = tape.value(x).shape()[2];
                        x = tape.k_max(x, cur.div_ceil(2))?;
                    }
                    // handled by the entry block's stride-2 convolution
                    PoolKind::StridedConv => {}
                }
            }
            for block in blocks {
                x = self.block_forward(tape, params, block, x, train, &mut updates)?;
            }
        }
        x = tape.k_max(x, spec.kmax_k)?;
        let shape = tape.value(x).shape().to_vec();
        let (m, flat) = (shape[0], shape[1] * shape[2]);
        x = tape.reshape(x, [m, flat])?;
        for (i, &(w, b)) in self.fc.iter().enumerate() {
            let wv = tape.param(w, params);
            let bv = tape.param(b, params);
            x = tape.linear(x, wv, bv)?;
            if i < 2 {
                x = tape.relu(x);
            }
        }
        Ok((x, updates))
    }
}

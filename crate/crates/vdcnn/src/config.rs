//! Flat `key=value` run configuration.
//!
//! One key per line, `#` comments, no nesting. Unknown and duplicate keys
//! are rejected; missing keys take the documented defaults. The same
//! serialization carries the architecture block inside checkpoints.

use std::fmt::Write as _;

use vdcnn_core::model::{ArchSpec, PoolKind, Shortcut};

use crate::trainer::OptimConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key=value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("key `{key}`: {detail}")]
    BadValue { key: String, detail: String },
    #[error("invalid architecture: {0}")]
    Arch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

/// Fully resolved run configuration (architecture, optimizer, data paths).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub depth_blocks: [usize; 4],
    pub width_num: usize,
    pub width_den: usize,
    pub pool: PoolKind,
    pub shortcut: Shortcut,
    pub seq_len: usize,
    pub embed_dim: usize,
    pub kmax_k: usize,
    pub fc_hidden: usize,
    pub n_classes: usize,
    pub precision: Precision,
    pub lr0: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub halve_every: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub grad_clip: f64,
    pub train_csv: String,
    pub test_csv: String,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth_blocks: [1, 1, 1, 1],
            width_num: 1,
            width_den: 1,
            pool: PoolKind::MaxPool,
            shortcut: Shortcut::None,
            seq_len: 1024,
            embed_dim: 16,
            kmax_k: 8,
            fc_hidden: 2048,
            n_classes: 2,
            precision: Precision::F32,
            lr0: 0.01,
            momentum: 0.9,
            batch_size: 128,
            halve_every: 3,
            max_epochs: 10,
            seed: 0,
            grad_clip: 0.0,
            train_csv: String::new(),
            test_csv: String::new(),
            out_dir: "run".to_string(),
        }
    }
}

fn parse_lines(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: idx + 1,
                text: line.to_string(),
            });
        };
        let key = k.trim().to_string();
        if out.iter().any(|(seen, _)| *seen == key) {
            return Err(ConfigError::DuplicateKey(key));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn bad(key: &str, detail: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        detail: detail.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| bad(key, format!("cannot parse `{value}`")))
}

fn parse_blocks(key: &str, value: &str) -> Result<[usize; 4], ConfigError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad(key, format!("expected 4 comma-separated counts, got `{value}`")));
    }
    let mut counts = [0usize; 4];
    for (c, p) in counts.iter_mut().zip(parts) {
        *c = p.parse().map_err(|_| bad(key, format!("bad count `{p}`")))?;
    }
    Ok(counts)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Accepts `1`, `3/4`, or a short decimal like `0.25`.
fn parse_multiplier(key: &str, value: &str) -> Result<(usize, usize), ConfigError> {
    let reduce = |num: u64, den: u64| {
        let g = gcd(num, den);
        (num / g, den / g)
    };
    if let Some((n, d)) = value.split_once('/') {
        let num: u64 = n.trim().parse().map_err(|_| bad(key, "bad numerator"))?;
        let den: u64 = d.trim().parse().map_err(|_| bad(key, "bad denominator"))?;
        if den == 0 || num == 0 {
            return Err(bad(key, "multiplier must be positive"));
        }
        let (n, d) = reduce(num, den);
        return Ok((n as usize, d as usize));
    }
    if let Some((int, frac)) = value.split_once('.') {
        if frac.len() > 9 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad(key, format!("cannot parse `{value}`")));
        }
        let scale = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad(key, "bad integer part"))?
        };
        let frac: u64 = frac.parse().unwrap_or(0);
        let num = int * scale + frac;
        if num == 0 {
            return Err(bad(key, "multiplier must be positive"));
        }
        let (n, d) = reduce(num, scale);
        return Ok((n as usize, d as usize));
    }
    let num: u64 = value.parse().map_err(|_| bad(key, format!("cannot parse `{value}`")))?;
    if num == 0 {
        return Err(bad(key, "multiplier must be positive"));
    }
    Ok((num as usize, 1))
}

fn multiplier_string(num: usize, den: usize) -> String {
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (key, value) in parse_lines(text)? {
            match key.as_str() {
                "depth_blocks" => cfg.depth_blocks = parse_blocks(&key, &value)?,
                "width_multiplier" => {
                    (cfg.width_num, cfg.width_den) = parse_multiplier(&key, &value)?
                }
                "pool" => {
                    cfg.pool = PoolKind::parse(&value)
                        .ok_or_else(|| bad(&key, "expected maxpool, kmax, or conv"))?
                }
                "shortcut" => {
                    cfg.shortcut = Shortcut::parse(&value)
                        .ok_or_else(|| bad(&key, "expected none or enabled"))?
                }
                "seq_len" => cfg.seq_len = parse_num(&key, &value)?,
                "embed_dim" => cfg.embed_dim = parse_num(&key, &value)?,
                "kmax_k" => cfg.kmax_k = parse_num(&key, &value)?,
                "fc_hidden" => cfg.fc_hidden = parse_num(&key, &value)?,
                "n_classes" => cfg.n_classes = parse_num(&key, &value)?,
                "precision" => {
                    cfg.precision = match value.as_str() {
                        "f32" => Precision::F32,
                        "f64" => Precision::F64,
                        other => return Err(bad(&key, format!("expected f32 or f64, got `{other}`"))),
                    }
                }
                "lr0" => cfg.lr0 = parse_num(&key, &value)?,
                "momentum" => cfg.momentum = parse_num(&key, &value)?,
                "batch_size" => cfg.batch_size = parse_num(&key, &value)?,
                "halve_every" => cfg.halve_every = parse_num(&key, &value)?,
                "max_epochs" => cfg.max_epochs = parse_num(&key, &value)?,
                "seed" => cfg.seed = parse_num(&key, &value)?,
                "grad_clip" => cfg.grad_clip = parse_num(&key, &value)?,
                "train_csv" => cfg.train_csv = value,
                "test_csv" => cfg.test_csv = value,
                "out_dir" => cfg.out_dir = value,
                _ => return Err(ConfigError::UnknownKey(key)),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.lr0 > 0.0) {
            return Err(bad("lr0", "must be > 0"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(bad("momentum", "must be in [0, 1)"));
        }
        if self.batch_size == 0 {
            return Err(bad("batch_size", "must be >= 1"));
        }
        if self.halve_every == 0 {
            return Err(bad("halve_every", "must be >= 1"));
        }
        if self.grad_clip < 0.0 {
            return Err(bad("grad_clip", "must be >= 0 (0 disables clipping)"));
        }
        self.arch().validate().map_err(|e| ConfigError::Arch(e.to_string()))
    }

    pub fn arch(&self) -> ArchSpec {
        ArchSpec {
            block_counts: self.depth_blocks,
            width_num: self.width_num,
            width_den: self.width_den,
            pool: self.pool,
            shortcut: self.shortcut,
            seq_len: self.seq_len,
            embed_dim: self.embed_dim,
            kmax_k: self.kmax_k,
            fc_hidden: self.fc_hidden,
            n_classes: self.n_classes,
        }
    }

    pub fn optim(&self) -> OptimConfig {
        OptimConfig {
            lr0: self.lr0,
            momentum: self.momentum,
            batch_size: self.batch_size,
            halve_every: self.halve_every,
            max_epochs: self.max_epochs,
            seed: self.seed,
            grad_clip: self.grad_clip,
        }
    }

    /// Canonical text with every key present, defaults included.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "depth_blocks={},{},{},{}\n\
             width_multiplier={}\n\
             pool={}\n\
             shortcut={}\n\
             seq_len={}\n\
             embed_dim={}\n\
             kmax_k={}\n\
             fc_hidden={}\n\
             n_classes={}\n\
             precision={}\n\
             lr0={}\n\
             momentum={}\n\
             batch_size={}\n\
             halve_every={}\n\
             max_epochs={}\n\
             seed={}\n\
             grad_clip={}\n\
             train_csv={}\n\
             test_csv={}\n\
             out_dir={}\n",
            self.depth_blocks[0],
            self.depth_blocks[1],
            self.depth_blocks[2],
            self.depth_blocks[3],
            multiplier_string(self.width_num, self.width_den),
            self.pool.name(),
            self.shortcut.name(),
            self.seq_len,
            self.embed_dim,
            self.kmax_k,
            self.fc_hidden,
            self.n_classes,
            self.precision.name(),
            self.lr0,
            self.momentum,
            self.batch_size,
            self.halve_every,
            self.max_epochs,
            self.seed,
            self.grad_clip,
            self.train_csv,
            self.test_csv,
            self.out_dir,
        );
        s
    }
}

/// Architecture block stored inside checkpoints.
pub fn arch_to_kv(spec: &ArchSpec) -> String {
    format!(
        "depth_blocks={},{},{},{}\n\
         width_multiplier={}\n\
         pool={}\n\
         shortcut={}\n\
         seq_len={}\n\
         embed_dim={}\n\
         kmax_k={}\n\
         fc_hidden={}\n\
         n_classes={}\n",
        spec.block_counts[0],
        spec.block_counts[1],
        spec.block_counts[2],
        spec.block_counts[3],
        multiplier_string(spec.width_num, spec.width_den),
        spec.pool.name(),
        spec.shortcut.name(),
        spec.seq_len,
        spec.embed_dim,
        spec.kmax_k,
        spec.fc_hidden,
        spec.n_classes,
    )
}

pub fn arch_from_kv(text: &str) -> Result<ArchSpec, ConfigError> {
    let mut spec = ArchSpec::new([1, 1, 1, 1], 2);
    for (key, value) in parse_lines(text)? {
        match key.as_str() {
            "depth_blocks" => spec.block_counts = parse_blocks(&key, &value)?,
            "width_multiplier" => (spec.width_num, spec.width_den) = parse_multiplier(&key, &value)?,
            "pool" => {
                spec.pool = PoolKind::parse(&value)
                    .ok_or_else(|| bad(&key, "expected maxpool, kmax, or conv"))?
            }
            "shortcut" => {
                spec.shortcut = Shortcut::parse(&value)
                    .ok_or_else(|| bad(&key, "expected none or enabled"))?
            }
            "seq_len" => spec.seq_len = parse_num(&key, &value)?,
            "embed_dim" => spec.embed_dim = parse_num(&key, &value)?,
            "kmax_k" => spec.kmax_k = parse_num(&key, &value)?,
            "fc_hidden" => spec.fc_hidden = parse_num(&key, &value)?,
            "n_classes" => spec.n_classes = parse_num(&key, &value)?,
            _ => return Err(ConfigError::UnknownKey(key)),
        }
    }
    spec.validate().map_err(|e| ConfigError::Arch(e.to_string()))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_echo() {
        let cfg = RunConfig::default();
        let echoed = cfg.echo();
        let back = RunConfig::parse(&echoed).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_and_duplicate_keys_rejected() {
        assert!(matches!(
            RunConfig::parse("bogus=1\n"),
            Err(ConfigError::UnknownKey(_))
        ));
        assert!(matches!(
            RunConfig::parse("seed=1\nseed=2\n"),
            Err(ConfigError::DuplicateKey(_))
        ));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let cfg = RunConfig::parse("# a comment\n\nseed=7\n").unwrap();
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn multiplier_forms() {
        assert_eq!(parse_multiplier("w", "1").unwrap(), (1, 1));
        assert_eq!(parse_multiplier("w", "1/8").unwrap(), (1, 8));
        assert_eq!(parse_multiplier("w", "2/8").unwrap(), (1, 4));
        assert_eq!(parse_multiplier("w", "0.25").unwrap(), (1, 4));
        assert_eq!(parse_multiplier("w", "1.5").unwrap(), (3, 2));
        assert!(parse_multiplier("w", "0").is_err());
        assert!(parse_multiplier("w", "x").is_err());
    }

    #[test]
    fn depth_17_config_reports_depth() {
        let cfg = RunConfig::parse("depth_blocks=2,2,2,2\n").unwrap();
        assert_eq!(cfg.arch().depth(), 17);
    }

    #[test]
    fn invalid_arch_is_a_config_error() {
        // s = 32 cannot feed k-max 8 after three halvings
        let err = RunConfig::parse("seq_len=32\n").unwrap_err();
        assert!(matches!(err, ConfigError::Arch(_)));
    }

    #[test]
    fn arch_kv_round_trip() {
        let mut spec = ArchSpec::new([5, 5, 2, 2], 14);
        spec.width_num = 3;
        spec.width_den = 4;
        spec.pool = PoolKind::StridedConv;
        spec.shortcut = Shortcut::Enabled;
        spec.seq_len = 1014;
        let text = arch_to_kv(&spec);
        assert_eq!(arch_from_kv(&text).unwrap(), spec);
    }
}

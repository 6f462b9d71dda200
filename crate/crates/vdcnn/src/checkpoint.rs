//! Model checkpoints.
//!
//! Layout (all integers little-endian):
//!   magic `VDCN` | format version u16 | precision tag u8 (4 = f32, 8 = f64)
//!   | architecture block length u32, then that many bytes of `key=value`
//!   text | tensors until end of file. Each tensor: name length u32, name
//!   bytes, rank u32, one u64 extent per axis, then the values as raw
//!   little-endian IEEE-754.
//!
//! Tensors are the parameters in registration order followed by the
//! batch-norm running statistics, so save -> load round-trips bit-exactly.

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::Path;

use vdcnn_core::model::Model;
use vdcnn_core::tensor::Tensor;
use vdcnn_core::Real;

use crate::config::{arch_from_kv, arch_to_kv};

pub const MAGIC: &[u8; 4] = b"VDCN";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("cannot access `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("not a checkpoint: bad magic bytes")]
    BadMagic,
    #[error("unsupported checkpoint format version {0}")]
    BadVersion(u16),
    #[error("precision tag {found} does not match the requested {expected}-byte reals")]
    PrecisionMismatch { found: u8, expected: u8 },
    #[error("truncated checkpoint: {0}")]
    Truncated(String),
    #[error("architecture block: {0}")]
    Arch(String),
    #[error("tensor `{name}`: expected shape {expected:?}, found {found:?}")]
    ShapeMismatch {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("tensor `{0}` does not belong to this architecture")]
    UnknownTensor(String),
    #[error("checkpoint is missing tensor `{0}`")]
    MissingTensor(String),
}

fn write_tensor<T: Real>(out: &mut Vec<u8>, name: &str, t: &Tensor<T>) {
    out.extend_from_slice(&(name.len() as u32).to_le_bytes());
    out.extend_from_slice(name.as_bytes());
    out.extend_from_slice(&(t.rank() as u32).to_le_bytes());
    for &e in t.shape() {
        out.extend_from_slice(&(e as u64).to_le_bytes());
    }
    for &v in t.data() {
        v.write_le(out);
    }
}

/// Serializes a model, including its running statistics and architecture.
pub fn to_bytes<T: Real>(model: &Model<T>) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(T::BYTE_WIDTH as u8);
    let arch = arch_to_kv(model.spec());
    out.extend_from_slice(&(arch.len() as u32).to_le_bytes());
    out.extend_from_slice(arch.as_bytes());
    for p in model.params().iter() {
        write_tensor(&mut out, p.name(), p.value());
    }
    for (name, t) in model.running_stats() {
        write_tensor(&mut out, &name, t);
    }
    out
}

pub fn save<T: Real>(model: &Model<T>, path: &Path) -> Result<(), CheckpointError> {
    fs::write(path, to_bytes(model)).map_err(|source| CheckpointError::Io {
        path: path.display().to_string(),
        source,
    })
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], CheckpointError> {
        if self.pos + n > self.bytes.len() {
            return Err(CheckpointError::Truncated(format!(
                "file ends inside {what} (need {n} bytes at offset {})",
                self.pos
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u16(&mut self, what: &str) -> Result<u16, CheckpointError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn done(&self) -> bool {
        self.pos == self.bytes.len()
    }
}

/// Deserializes a model saved with [`to_bytes`] at the same precision.
pub fn from_bytes<T: Real>(bytes: &[u8]) -> Result<Model<T>, CheckpointError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(CheckpointError::BadVersion(version));
    }
    let tag = r.take(1, "precision tag")?[0];
    if tag as usize != T::BYTE_WIDTH {
        return Err(CheckpointError::PrecisionMismatch {
            found: tag,
            expected: T::BYTE_WIDTH as u8,
        });
    }
    let arch_len = r.u32("architecture length")? as usize;
    let arch_text = core::str::from_utf8(r.take(arch_len, "architecture block")?)
        .map_err(|e| CheckpointError::Arch(e.to_string()))?;
    let spec = arch_from_kv(arch_text).map_err(|e| CheckpointError::Arch(e.to_string()))?;

    // skeleton with the right wiring; every tensor below overwrites it
    let mut model = Model::build(spec, 0).map_err(|e| CheckpointError::Arch(e.to_string()))?;

    let mut expected: BTreeSet<String> =
        model.params().iter().map(|p| p.name().to_string()).collect();
    expected.extend(model.running_stats().iter().map(|(n, _)| n.clone()));

    while !r.done() {
        let name_len = r.u32("tensor name length")? as usize;
        let name = core::str::from_utf8(r.take(name_len, "tensor name")?)
            .map_err(|e| CheckpointError::Truncated(e.to_string()))?
            .to_string();
        let rank = r.u32("tensor rank")? as usize;
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            shape.push(r.u64("tensor extent")? as usize);
        }
        let numel: usize = shape.iter().product();
        let raw = r.take(numel * T::BYTE_WIDTH, "tensor values")?;
        let data: Vec<T> = raw
            .chunks_exact(T::BYTE_WIDTH)
            .map(|c| T::read_le(c))
            .collect();
        let tensor = Tensor::from_vec(shape.clone(), data)
            .map_err(|_| CheckpointError::Truncated("inconsistent tensor header".to_string()))?;

        if !expected.remove(&name) {
            return Err(CheckpointError::UnknownTensor(name));
        }
        if let Some(id) = model.params().by_name(&name) {
            let want = model.params().value(id).shape().to_vec();
            if want != shape {
                return Err(CheckpointError::ShapeMismatch {
                    name,
                    expected: want,
                    found: shape,
                });
            }
            model.params_mut().set_value(id, tensor).expect("shape checked");
        } else {
            let want = model
                .running_stats()
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.shape().to_vec())
                .expect("name was in the expected set");
            if want != shape {
                return Err(CheckpointError::ShapeMismatch {
                    name,
                    expected: want,
                    found: shape,
                });
            }
            model.set_running_stat(&name, tensor).expect("shape checked");
        }
    }
    if let Some(missing) = expected.into_iter().next() {
        return Err(CheckpointError::MissingTensor(missing));
    }
    Ok(model)
}

pub fn load<T: Real>(path: &Path) -> Result<Model<T>, CheckpointError> {
    let bytes = fs::read(path).map_err(|source| CheckpointError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_bytes(&bytes)
}

/// Reads only the precision tag, for precision dispatch at load time.
pub fn peek_precision(path: &Path) -> Result<u8, CheckpointError> {
    let bytes = fs::read(path).map_err(|source| CheckpointError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
    };
    if r.take(4, "magic")? != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(CheckpointError::BadVersion(version));
    }
    Ok(r.take(1, "precision tag")?[0])
}

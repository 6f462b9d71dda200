//! Classification datasets: headerless CSV ingestion, fixed-length character
//! encoding, and deterministic mini-batch iteration.
//!
//! The CSV format is the common benchmark layout: UTF-8, no header, fields
//! double-quoted with `""` escaping (embedded newlines allowed), first field
//! a 1-based class index, remaining fields joined with a single space.

use std::fs::File;
use std::io;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vdcnn_core::Vocabulary;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("row {row}: malformed CSV: {detail}")]
    Csv { row: u64, detail: String },
    #[error("row {row}: expected at least 2 fields, got {got}")]
    TooFewFields { row: u64, got: usize },
    #[error("row {row}: class index `{found}` outside 1..={n_classes}")]
    BadLabel {
        row: u64,
        found: String,
        n_classes: usize,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("batch size must be >= 1")]
    BadBatchSize,
}

/// One labelled text. Labels are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub label: usize,
    pub text: String,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub n_classes: usize,
    pub name: String,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Loads a headerless benchmark CSV. The first field holds the 1-based class
/// index; the remaining fields are joined with one space into the text.
pub fn load_csv(path: &Path, n_classes: usize) -> Result<Dataset, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut samples = Vec::new();
    let mut row: u64 = 0;
    for record in reader.byte_records() {
        row += 1;
        let record = record.map_err(|e| DataError::Csv {
            row: e
                .position()
                .map(|p| p.record() + 1)
                .unwrap_or(row),
            detail: e.to_string(),
        })?;
        if record.len() < 2 {
            return Err(DataError::TooFewFields {
                row,
                got: record.len(),
            });
        }
        let class_field = String::from_utf8_lossy(&record[0]).into_owned();
        let class: usize = class_field.trim().parse().map_err(|_| DataError::BadLabel {
            row,
            found: class_field.clone(),
            n_classes,
        })?;
        if class < 1 || class > n_classes {
            return Err(DataError::BadLabel {
                row,
                found: class_field,
                n_classes,
            });
        }
        let text = record
            .iter()
            .skip(1)
            .map(|f| String::from_utf8_lossy(f).into_owned())
            .collect::<Vec<_>>()
            .join(" ");
        samples.push(Sample {
            label: class - 1,
            text,
        });
    }
    if samples.is_empty() {
        return Err(DataError::Empty);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Ok(Dataset {
        samples,
        n_classes,
        name,
    })
}

/// Writes a dataset back out in the same CSV layout (1-based class indices).
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    let file = File::create(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut writer = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .from_writer(file);
    for s in &ds.samples {
        writer
            .write_record([&(s.label + 1).to_string(), &s.text])
            .map_err(|e| DataError::Csv {
                row: 0,
                detail: e.to_string(),
            })?;
    }
    writer.flush().map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

/// A dataset encoded once to fixed-length id rows (ids fit in a byte).
#[derive(Debug, Clone)]
pub struct EncodedDataset {
    ids: Vec<u8>,
    labels: Vec<usize>,
    pub s: usize,
    pub n_classes: usize,
}

impl EncodedDataset {
    pub fn from_dataset(ds: &Dataset, s: usize) -> Self {
        let vocab = Vocabulary::new();
        let mut ids = Vec::with_capacity(ds.len() * s);
        let mut labels = Vec::with_capacity(ds.len());
        for sample in &ds.samples {
            ids.extend(vocab.encode(&sample.text, s).into_iter().map(|id| id as u8));
            labels.push(sample.label);
        }
        EncodedDataset {
            ids,
            labels,
            s,
            n_classes: ds.n_classes,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.ids[i * self.s..(i + 1) * self.s]
    }

    /// Gathers rows into a flat `[m * s]` id batch plus labels.
    pub fn gather(&self, rows: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut ids = Vec::with_capacity(rows.len() * self.s);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            ids.extend(self.row(r).iter().map(|&b| b as usize));
            labels.push(self.labels[r]);
        }
        (ids, labels)
    }
}

/// Row order for one epoch: a permutation of `0..n` determined by
/// `(seed, epoch)` when shuffling, source order otherwise.
pub fn epoch_order(n: usize, seed: u64, epoch: u64, shuffle: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(epoch.wrapping_add(1));
        order.shuffle(&mut rng);
    }
    order
}

/// Mini-batches of row indices; the final partial batch is emitted as-is.
pub fn batches(
    ds: &EncodedDataset,
    batch_size: usize,
    seed: u64,
    epoch: u64,
    shuffle: bool,
) -> Result<Vec<Vec<usize>>, DataError> {
    if batch_size == 0 {
        return Err(DataError::BadBatchSize);
    }
    if ds.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(epoch_order(ds.len(), seed, epoch, shuffle)
        .chunks(batch_size)
        .map(|c| c.to_vec())
        .collect())
}

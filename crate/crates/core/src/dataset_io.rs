//! IDX (MNIST) ingestion and a synthetic separable stand-in.

use std::path::{Path, PathBuf};

use rand::seq::index;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::objectives::Dataset;

pub const IMAGES_MAGIC: u32 = 0x0803;
pub const LABELS_MAGIC: u32 = 0x0801;

/// Environment variable naming the directory with the MNIST training files.
pub const DATA_DIR_ENV: &str = "PCM_DATA_DIR";

const IMAGE_FILES: [&str; 2] = ["train-images-idx3-ubyte", "train-images.idx3-ubyte"];
const LABEL_FILES: [&str; 2] = ["train-labels-idx1-ubyte", "train-labels.idx1-ubyte"];

/// An unsigned-byte IDX container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxFile {
    pub magic: u32,
    pub dims: Vec<u32>,
    pub payload: Vec<u8>,
}

fn expected_rank(magic: u32) -> Result<usize> {
    match magic {
        IMAGES_MAGIC => Ok(3),
        LABELS_MAGIC => Ok(1),
        other => Err(Error::Idx(format!(
            "unsupported magic number {other:#010x} (expected 0x00000803 or 0x00000801)"
        ))),
    }
}

fn read_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| Error::Idx(format!("header truncated at byte {at}")))
}

impl IdxFile {
    pub fn new(magic: u32, dims: Vec<u32>, payload: Vec<u8>) -> Result<Self> {
        let rank = expected_rank(magic)?;
        if dims.len() != rank {
            return Err(Error::Idx(format!("magic {magic:#x} needs {rank} dimensions, got {}", dims.len())));
        }
        // Checked separately so record_len cannot overflow when dims[0] = 0.
        let overflow = || Error::Idx("dimension product overflows".into());
        let record_len = dims[1..]
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or_else(overflow)?;
        let len = record_len.checked_mul(dims[0] as usize).ok_or_else(overflow)?;
        if payload.len() != len {
            return Err(Error::Idx(format!(
                "payload has {} bytes, dimensions {dims:?} require {len}",
                payload.len()
            )));
        }
        Ok(Self { magic, dims, payload })
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let magic = read_u32(bytes, 0)?;
        let rank = expected_rank(magic)?;
        let dims = (0..rank)
            .map(|j| read_u32(bytes, 4 + 4 * j))
            .collect::<Result<Vec<_>>>()?;
        Self::new(magic, dims, bytes[4 + 4 * rank..].to_vec())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 4 * self.dims.len() + self.payload.len());
        out.extend_from_slice(&self.magic.to_be_bytes());
        for d in &self.dims {
            out.extend_from_slice(&d.to_be_bytes());
        }
        out.extend_from_slice(&self.payload);
        out
    }

    /// Number of records along the leading dimension.
    pub fn records(&self) -> usize {
        self.dims[0] as usize
    }

    /// Bytes per record.
    pub fn record_len(&self) -> usize {
        self.dims[1..].iter().map(|&d| d as usize).product()
    }

    pub fn record(&self, n: usize) -> &[u8] {
        let len = self.record_len();
        &self.payload[n * len..(n + 1) * len]
    }
}

pub fn load_idx(path: &Path) -> Result<IdxFile> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    IdxFile::parse(&bytes).map_err(|e| match e {
        Error::Idx(msg) => Error::Idx(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_idx(path: &Path, file: &IdxFile) -> Result<()> {
    std::fs::write(path, file.to_bytes()).map_err(|e| Error::io(path, e))
}

/// Pixels scaled to `[0, 1]` with a trailing constant bias of 1.
pub fn featurize(image: &[u8]) -> Vec<f64> {
    image
        .iter()
        .map(|&p| f64::from(p) / 255.0)
        .chain(std::iter::once(1.0))
        .collect()
}

/// One-vs-rest labels: `+1` for `digit`, `-1` otherwise.
pub fn binarize(labels: &[u8], digit: u8) -> Result<Vec<f64>> {
    check_digit(digit)?;
    Ok(labels
        .iter()
        .map(|&l| if l == digit { 1.0 } else { -1.0 })
        .collect())
}

pub fn check_digit(digit: u8) -> Result<()> {
    if digit > 9 {
        return Err(Error::InvalidArgument(format!("digit {digit} is not in 0..=9")));
    }
    Ok(())
}

fn find(dir: &Path, names: &[&str]) -> Option<PathBuf> {
    names.iter().map(|n| dir.join(n)).find(|p| p.is_file())
}

/// Locates the uncompressed training images and labels in `dir`.
pub fn mnist_files(dir: &Path) -> Option<(PathBuf, PathBuf)> {
    Some((find(dir, &IMAGE_FILES)?, find(dir, &LABEL_FILES)?))
}

/// Builds the one-vs-rest dataset from an images/labels pair, optionally
/// keeping a uniform subset of `limit` records (in file order).
pub fn build_dataset(
    images: &IdxFile,
    labels: &IdxFile,
    digit: u8,
    limit: Option<usize>,
    rng: &mut dyn RngCore,
) -> Result<Dataset> {
    if images.magic != IMAGES_MAGIC || labels.magic != LABELS_MAGIC {
        return Err(Error::Idx("expected an image file and a label file".into()));
    }
    let n = images.records();
    if labels.records() != n {
        return Err(Error::Idx(format!(
            "{n} images but {} labels",
            labels.records()
        )));
    }
    let keep: Vec<usize> = match limit {
        Some(m) if m < n => {
            let mut idx = index::sample(rng, n, m).into_vec();
            idx.sort_unstable();
            idx
        }
        _ => (0..n).collect(),
    };
    let z = binarize(&labels.payload, digit)?;
    let dim = images.record_len() + 1;
    let mut features = Vec::with_capacity(keep.len() * dim);
    let mut out_labels = Vec::with_capacity(keep.len());
    for &i in &keep {
        features.extend(featurize(images.record(i)));
        out_labels.push(z[i]);
    }
    Dataset::new(features, out_labels, dim)
}

pub fn load_mnist(dir: &Path, digit: u8, limit: Option<usize>, rng: &mut dyn RngCore) -> Result<Dataset> {
    let (img, lbl) = mnist_files(dir).ok_or_else(|| {
        Error::io(
            dir.join(IMAGE_FILES[0]),
            std::io::Error::new(std::io::ErrorKind::NotFound, "MNIST training files not found"),
        )
    })?;
    build_dataset(&load_idx(&img)?, &load_idx(&lbl)?, digit, limit, rng)
}

/// Linearly separable data in `[0,1]^(d-1)` plus a bias feature.
///
/// A unit normal `w` is drawn with its bias weight chosen so the
/// separating hyperplane passes through the cube's center; points with
/// `|<w, y>| < margin` are rejected, so `min_n z_n <w, y_n> >= margin`.
/// Returns the dataset together with `w`.
pub fn synth_classification(
    n: usize,
    dim: usize,
    margin: f64,
    rng: &mut dyn RngCore,
) -> Result<(Dataset, Vec<f64>)> {
    if n < 2 || dim < 2 || !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "synthetic data needs n >= 2, d >= 2 and margin > 0 (n = {n}, d = {dim}, margin = {margin})"
        )));
    }
    let mut w: Vec<f64> = (0..dim - 1).map(|_| StandardNormal.sample(&mut *rng)).collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    w.iter_mut().for_each(|v| *v /= norm);
    w.push(-0.5 * w.iter().sum::<f64>());
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    w.iter_mut().for_each(|v| *v /= norm);

    let mut features = Vec::with_capacity(n * dim);
    let mut labels = Vec::with_capacity(n);
    let max_attempts = 10_000usize.saturating_mul(n);
    let mut attempts = 0;
    let mut y = vec![0.0; dim];
    while labels.len() < n {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::InvalidArgument(format!(
                "margin {margin} rejected too many samples; use a smaller margin"
            )));
        }
        for v in y.iter_mut().take(dim - 1) {
            *v = rng.random::<f64>();
        }
        y[dim - 1] = 1.0;
        let s: f64 = w.iter().zip(&y).map(|(a, b)| a * b).sum();
        if s.abs() < margin {
            continue;
        }
        features.extend_from_slice(&y);
        labels.push(if s > 0.0 { 1.0 } else { -1.0 });
    }
    Ok((Dataset::new(features, labels, dim)?, w))
}

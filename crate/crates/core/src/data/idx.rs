//! IDX container files (big-endian magic, dimension sizes, raw bytes).

use std::path::Path;

use crate::energy::ClassifierDataset;
use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxFile {
    pub magic: u32,
    pub dims: Vec<u32>,
    pub payload: Vec<u8>,
}

impl IdxFile {
    pub fn is_images(&self) -> bool {
        self.magic == IMAGE_MAGIC
    }

    pub fn is_labels(&self) -> bool {
        self.magic == LABEL_MAGIC
    }

    /// Number of items along the first dimension.
    pub fn count(&self) -> usize {
        self.dims[0] as usize
    }

    /// Bytes per item (product of the remaining dimensions).
    pub fn item_size(&self) -> usize {
        self.dims[1..].iter().map(|&d| d as usize).product()
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

    pub fn images(count: u32, rows: u32, cols: u32, payload: Vec<u8>) -> Self {
        Self { magic: IMAGE_MAGIC, dims: vec![count, rows, cols], payload }
    }

    pub fn labels(labels: Vec<u8>) -> Self {
        Self { magic: LABEL_MAGIC, dims: vec![labels.len() as u32], payload: labels }
    }
}

/// Parses an in-memory IDX file; `path` only labels errors.
pub fn parse_idx(bytes: &[u8], path: &Path) -> Result<IdxFile> {
    let truncated = |expected: usize| Error::Truncated { path: path.to_path_buf(), expected, actual: bytes.len() };
    let word = |at: usize| -> Option<u32> { bytes.get(at..at + 4).map(|b| u32::from_be_bytes(b.try_into().unwrap())) };

    let magic = word(0).ok_or_else(|| truncated(4))?;
    let ndims = match magic {
        IMAGE_MAGIC => 3,
        LABEL_MAGIC => 1,
        found => return Err(Error::BadMagic { path: path.to_path_buf(), found }),
    };
    let header = 4 + 4 * ndims;
    let dims: Vec<u32> = (0..ndims).map(|k| word(4 + 4 * k)).collect::<Option<_>>().ok_or_else(|| truncated(header))?;
    let len: usize = dims.iter().map(|&d| d as usize).product();
    let body = &bytes[header..];
    if body.len() < len {
        return Err(Error::Truncated { path: path.to_path_buf(), expected: header + len, actual: bytes.len() });
    }
    Ok(IdxFile { magic, dims, payload: body[..len].to_vec() })
}

pub fn read_idx(path: impl AsRef<Path>) -> Result<IdxFile> {
    let path = path.as_ref();
    parse_idx(&std::fs::read(path)?, path)
}

/// Pairs an image file with a label file, scaling pixels by `1/255`.
pub fn dataset_from_idx(images: &IdxFile, labels: &IdxFile, classes: usize) -> Result<ClassifierDataset> {
    if !images.is_images() {
        return Err(Error::InvalidArgument("first file is not an image file".into()));
    }
    if !labels.is_labels() {
        return Err(Error::InvalidArgument("second file is not a label file".into()));
    }
    if images.count() != labels.count() {
        return Err(Error::CountMismatch { images: images.count(), labels: labels.count() });
    }
    let inputs = images.payload.iter().map(|&p| p as f32 / 255.0).collect();
    ClassifierDataset::new(inputs, labels.payload.clone(), images.item_size(), classes)
}

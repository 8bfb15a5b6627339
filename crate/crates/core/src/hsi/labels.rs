use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Per-pixel class ids: 0 is unlabeled, `1..=classes` are classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    classes: u32,
    labels: Vec<u32>,
}

impl LabelMap {
    /// Builds a map whose class count is the largest label present.
    pub fn new(height: usize, width: usize, labels: Vec<u32>) -> Result<Self> {
        let classes = labels.iter().copied().max().unwrap_or(0);
        Self::with_classes(height, width, classes, labels)
    }

    pub fn with_classes(
        height: usize,
        width: usize,
        classes: u32,
        labels: Vec<u32>,
    ) -> Result<Self> {
        if labels.len() != height * width {
            return Err(Error::Length {
                expected: height * width,
                found: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l > classes) {
            return Err(Error::Data(format!(
                "label {bad} exceeds class count {classes}"
            )));
        }
        Ok(Self {
            height,
            width,
            classes,
            labels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn classes(&self) -> u32 {
        self.classes
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Row-major indices of all labeled pixels.
    pub fn labeled_pixels(&self) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != 0)
            .map(|(i, _)| i)
    }

    /// Copy of this map where only `keep` retain their label.
    pub fn restricted_to(&self, keep: &[usize]) -> LabelMap {
        let mut labels = vec![0; self.labels.len()];
        for &i in keep {
            labels[i] = self.labels[i];
        }
        LabelMap {
            labels,
            ..self.clone()
        }
    }

    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        for &l in &self.labels {
            let byte = u8::try_from(l)
                .map_err(|_| Error::Data(format!("label {l} does not fit an 8-bit PGM")))?;
            out.push(byte);
        }
        Ok(out)
    }

    pub fn from_pgm(bytes: &[u8]) -> Result<Self> {
        let mut cursor = PgmCursor { bytes, pos: 0 };
        if cursor.token()? != "P5" {
            return Err(Error::Format("label map is not a binary PGM (P5)".into()));
        }
        let width = cursor.number()?;
        let height = cursor.number()?;
        let maxval = cursor.number()?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Format(format!("unsupported PGM maxval {maxval}")));
        }
        // exactly one whitespace byte separates the header from the raster
        let start = cursor.pos + 1;
        let raster = bytes.get(start..).unwrap_or(&[]);
        if raster.len() != width * height {
            return Err(Error::Length {
                expected: width * height,
                found: raster.len(),
            });
        }
        LabelMap::new(height, width, raster.iter().map(|&b| b as u32).collect())
    }
}

struct PgmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PgmCursor<'_> {
    fn token(&mut self) -> Result<String> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b'#') => {
                    while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                        self.pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(_) => break,
                None => return Err(Error::Format("truncated PGM header".into())),
            }
        }
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| Error::Format(format!("bad PGM header field {tok:?}")))
    }
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<LabelMap> {
    LabelMap::from_pgm(&fs::read(path)?)
}

pub fn write_pgm(path: impl AsRef<Path>, labels: &LabelMap) -> Result<()> {
    fs::write(path, labels.to_pgm()?)?;
    Ok(())
}

//! JSON file formats and byte-stable output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use gauss_marginals::{CovarianceMatrix, SpectralVector, SymplecticMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::CliError;

/// A `2n x 2n` matrix stored row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn covariance(&self) -> Result<CovarianceMatrix, CliError> {
        let dim = 2 * self.n;
        if self.n == 0 || self.data.len() != dim * dim {
            return Err(CliError::Input(format!(
                "matrix file declares n = {} but holds {} entries (expected {})",
                self.n,
                self.data.len(),
                dim * dim
            )));
        }
        CovarianceMatrix::from_row_slice(self.n, &self.data).map_err(CliError::from)
    }
}

impl From<&CovarianceMatrix> for MatrixFile {
    fn from(v: &CovarianceMatrix) -> Self {
        MatrixFile {
            n: v.modes(),
            data: v.matrix().transpose().as_slice().to_vec(),
        }
    }
}

impl From<&SymplecticMatrix> for MatrixFile {
    fn from(s: &SymplecticMatrix) -> Self {
        MatrixFile {
            n: s.modes(),
            data: s.matrix().transpose().as_slice().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFile {
    pub values: Vec<f64>,
}

impl VectorFile {
    pub fn spectral(self) -> Result<SpectralVector, CliError> {
        SpectralVector::new(self.values).map_err(CliError::from)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

/// Pretty-printed JSON with every float written as `{:.16e}`.
struct FixedDigits<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let fmt = FixedDigits {
        inner: serde_json::ser::PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value))
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

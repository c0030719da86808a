use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use gerk_core::io::{read_matrix_market_any, read_vector_any, MatrixData, VectorData};
use gerk_core::scalar::Field;
use gerk_core::{Complex64, DenseMatrix};

use crate::fail::Failure;

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<MatrixData, Failure> {
    read_matrix_market_any(open(path)?).map_err(|e| Failure::read(path, e))
}

pub fn read_vector(path: &Path) -> Result<VectorData, Failure> {
    read_vector_any(open(path)?).map_err(|e| Failure::read(path, e))
}

pub fn parse_field(s: &str) -> Result<Field, Failure> {
    match s.trim() {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => Err(Failure::input(format!(
            "unknown field `{other}` (expected real or complex)"
        ))),
    }
}

pub fn matrix_field(a: &MatrixData) -> Field {
    match a {
        MatrixData::Real(_) => Field::Real,
        MatrixData::Complex(_) => Field::Complex,
    }
}

pub fn vector_field(v: &VectorData) -> Field {
    match v {
        VectorData::Real(_) => Field::Real,
        VectorData::Complex(_) => Field::Complex,
    }
}

pub fn real_matrix(a: MatrixData, path: &Path) -> Result<DenseMatrix<f64>, Failure> {
    match a {
        MatrixData::Real(a) => Ok(a),
        MatrixData::Complex(_) => Err(Failure::input(format!(
            "{}: complex matrix but the real field was requested",
            path.display()
        ))),
    }
}

pub fn real_vector(v: VectorData, path: &Path) -> Result<Vec<f64>, Failure> {
    match v {
        VectorData::Real(v) => Ok(v),
        VectorData::Complex(_) => Err(Failure::input(format!(
            "{}: complex vector but the real field was requested",
            path.display()
        ))),
    }
}

pub fn complex_matrix(a: MatrixData) -> DenseMatrix<Complex64> {
    match a {
        MatrixData::Complex(a) => a,
        MatrixData::Real(a) => DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| Complex64::new(a.get(i, j), 0.0)),
    }
}

pub fn complex_vector(v: VectorData) -> Vec<Complex64> {
    match v {
        VectorData::Complex(v) => v,
        VectorData::Real(v) => v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    }
}

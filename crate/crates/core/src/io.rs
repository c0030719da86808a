//! MatrixMarket matrices and CSV vectors.
//!
//! Matrices: `%%MatrixMarket matrix {coordinate|array} {real|integer|complex|pattern}
//! {general|symmetric|skew-symmetric|hermitian}`, read into dense storage.
//!
//! Vectors: CSV with optional `#` comment lines and an optional header row.
//! Real vectors have one column; complex vectors have two (`re,im`).

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::scalar::{Complex64, Field, Scalar};

/// First line of every vector file written by this crate.
pub const VECTOR_HEADER: &str = "# gerk vector v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("file holds {found} data but {expected} was requested")]
    FieldMismatch { expected: Field, found: Field },

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Real(DenseMatrix<f64>),
    Complex(DenseMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

/// Reads a MatrixMarket file, keeping its field.
pub fn read_matrix_market_any<R: BufRead>(reader: R) -> Result<MatrixData, IoError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_no, header) = match lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(parse_err(1, "empty file")),
    };
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(
            header_no,
            format!("expected `%%MatrixMarket matrix <format> <field> <symmetry>`, found `{header}`"),
        ));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(header_no, format!("unknown format `{other}`"))),
    };
    let (complex, pattern) = match tokens[3].as_str() {
        "real" | "integer" | "double" => (false, false),
        "complex" => (true, false),
        "pattern" if coordinate => (false, true),
        other => return Err(parse_err(header_no, format!("unsupported field `{other}`"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(header_no, format!("unknown symmetry `{other}`"))),
    };

    // skip comments and blank lines up to the size line
    let mut data_lines = lines.filter_map(|(n, l)| match l {
        Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%') => None,
        other => Some((n, other)),
    });

    let (size_no, size_line) = match data_lines.next() {
        Some((n, l)) => (n, l?),
        None => return Err(parse_err(header_no + 1, "missing size line")),
    };
    let sizes = parse_usizes(&size_line, size_no)?;
    let (rows, cols, entries) = match (coordinate, sizes.as_slice()) {
        (true, [r, c, nnz]) => (*r, *c, *nnz),
        (false, [r, c]) => (*r, *c, r * c),
        _ => return Err(parse_err(size_no, format!("malformed size line `{size_line}`"))),
    };

    let entries = if coordinate || symmetry == Symmetry::General {
        entries
    } else {
        if rows != cols {
            return Err(parse_err(size_no, "symmetric storage requires a square matrix"));
        }
        packed_len(rows, symmetry)
    };

    let mut dense = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut array_pos = 0usize;
    let mut count = 0usize;
    let mut last_no = size_no;
    for item in data_lines {
        let (no, line) = item;
        let line = line?;
        last_no = no;
        if count == entries {
            return Err(parse_err(no, "more entries than declared"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let nvals = if pattern {
            0
        } else if complex {
            2
        } else {
            1
        };
        let (i, j, vals) = if coordinate {
            if fields.len() != 2 + nvals {
                return Err(parse_err(
                    no,
                    format!("expected {} fields, found {}", 2 + nvals, fields.len()),
                ));
            }
            let i = parse_index(fields[0], rows, no)?;
            let j = parse_index(fields[1], cols, no)?;
            (i, j, &fields[2..])
        } else {
            if fields.len() != nvals {
                return Err(parse_err(
                    no,
                    format!("expected {nvals} fields, found {}", fields.len()),
                ));
            }
            // array format is column-major; symmetric arrays list the lower triangle only
            let (i, j) = next_array_position(&mut array_pos, rows, symmetry);
            (i, j, &fields[..])
        };
        let v = if pattern {
            Complex64::new(1.0, 0.0)
        } else {
            let re = parse_f64(vals[0], no)?;
            let im = if complex { parse_f64(vals[1], no)? } else { 0.0 };
            Complex64::new(re, im)
        };
        dense[i * cols + j] = v;
        if i != j {
            let mirrored = match symmetry {
                Symmetry::General => None,
                Symmetry::Symmetric => Some(v),
                Symmetry::SkewSymmetric => Some(-v),
                Symmetry::Hermitian => Some(v.conj()),
            };
            if let Some(mv) = mirrored {
                if j >= rows || i >= cols {
                    return Err(parse_err(no, "symmetric storage requires a square matrix"));
                }
                dense[j * cols + i] = mv;
            }
        }
        count += 1;
    }
    if count != entries {
        return Err(parse_err(
            last_no + 1,
            format!("expected {entries} entries, found {count}"),
        ));
    }

    Ok(if complex {
        MatrixData::Complex(DenseMatrix::new(rows, cols, dense).expect("sized above"))
    } else {
        MatrixData::Real(DenseMatrix::new(rows, cols, dense.into_iter().map(|z| z.re).collect()).expect("sized above"))
    })
}

fn packed_len(n: usize, symmetry: Symmetry) -> usize {
    match symmetry {
        Symmetry::SkewSymmetric => n * n.saturating_sub(1) / 2,
        _ => n * (n + 1) / 2,
    }
}

fn next_array_position(pos: &mut usize, rows: usize, symmetry: Symmetry) -> (usize, usize) {
    let p = *pos;
    *pos += 1;
    match symmetry {
        Symmetry::General => (p % rows.max(1), p / rows.max(1)),
        _ => {
            // walk the lower triangle column by column
            let skip = usize::from(symmetry == Symmetry::SkewSymmetric);
            let mut rem = p;
            let mut j = 0;
            loop {
                let len = rows - j - skip;
                if rem < len {
                    return (j + skip + rem, j);
                }
                rem -= len;
                j += 1;
            }
        }
    }
}

fn parse_usizes(line: &str, no: usize) -> Result<Vec<usize>, IoError> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(no, format!("`{t}` is not a nonnegative integer")))
        })
        .collect()
}

fn parse_index(t: &str, bound: usize, no: usize) -> Result<usize, IoError> {
    let i: usize = t.parse().map_err(|_| parse_err(no, format!("`{t}` is not an index")))?;
    if i == 0 || i > bound {
        return Err(parse_err(no, format!("index {i} out of range 1..={bound}")));
    }
    Ok(i - 1)
}

fn parse_f64(t: &str, no: usize) -> Result<f64, IoError> {
    t.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(no, format!("`{t}` is not a number")))
}

/// Reads a MatrixMarket file into the requested field. Real files are
/// promoted to complex on request; complex files cannot be read as real.
pub fn read_matrix_market<T: Scalar, R: BufRead>(reader: R) -> Result<DenseMatrix<T>, IoError> {
    match read_matrix_market_any(reader)? {
        MatrixData::Real(m) => {
            let data = m.as_slice().iter().map(|&v| T::from_parts(v, 0.0)).collect();
            Ok(DenseMatrix::new(m.rows(), m.cols(), data).expect("same shape"))
        }
        MatrixData::Complex(m) => {
            if T::FIELD == Field::Real {
                return Err(IoError::FieldMismatch {
                    expected: Field::Real,
                    found: Field::Complex,
                });
            }
            let data = m.as_slice().iter().map(|v| T::from_parts(v.re, v.im)).collect();
            Ok(DenseMatrix::new(m.rows(), m.cols(), data).expect("same shape"))
        }
    }
}

/// Writes `a` in MatrixMarket array format (general, column-major).
pub fn write_matrix_market<T: Scalar, W: Write>(a: &DenseMatrix<T>, mut w: W) -> io::Result<()> {
    let field = match T::FIELD {
        Field::Real => "real",
        Field::Complex => "complex",
    };
    writeln!(w, "%%MatrixMarket matrix array {field} general")?;
    writeln!(w, "{} {}", a.rows(), a.cols())?;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let v = a.get(i, j);
            match T::FIELD {
                Field::Real => writeln!(w, "{:e}", v.re())?,
                Field::Complex => writeln!(w, "{:e} {:e}", v.re(), v.im())?,
            }
        }
    }
    Ok(())
}

pub fn read_vector_any<R: BufRead>(reader: R) -> Result<VectorData, IoError> {
    let mut width: Option<usize> = None;
    let mut values: Vec<Complex64> = Vec::new();
    let mut seen_row = false;
    for (idx, line) in reader.lines().enumerate() {
        let no = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split(',').map(str::trim).collect();
        if !seen_row {
            seen_row = true;
            if fields[0].parse::<f64>().is_err() {
                // header row
                width = Some(fields.len());
                continue;
            }
        }
        let w = *width.get_or_insert(fields.len());
        if fields.len() != w || !(w == 1 || w == 2) {
            return Err(parse_err(
                no,
                format!("expected {} column(s), found {}", w.clamp(1, 2), fields.len()),
            ));
        }
        let re = parse_f64(fields[0], no)?;
        let im = if w == 2 { parse_f64(fields[1], no)? } else { 0.0 };
        values.push(Complex64::new(re, im));
    }
    Ok(match width {
        Some(2) => VectorData::Complex(values),
        _ => VectorData::Real(values.into_iter().map(|z| z.re).collect()),
    })
}

pub fn read_vector<T: Scalar, R: BufRead>(reader: R) -> Result<Vec<T>, IoError> {
    match read_vector_any(reader)? {
        VectorData::Real(v) => Ok(v.into_iter().map(|x| T::from_parts(x, 0.0)).collect()),
        VectorData::Complex(v) => {
            if T::FIELD == Field::Real {
                return Err(IoError::FieldMismatch {
                    expected: Field::Real,
                    found: Field::Complex,
                });
            }
            Ok(v.into_iter().map(|z| T::from_parts(z.re, z.im)).collect())
        }
    }
}

/// Formats a vector as CSV text (version comment, header row, one entry per line).
pub fn format_vector<T: Scalar>(v: &[T]) -> String {
    let mut s = String::with_capacity(v.len() * 24 + 32);
    s.push_str(VECTOR_HEADER);
    s.push('\n');
    match T::FIELD {
        Field::Real => {
            s.push_str("value\n");
            for x in v {
                let _ = writeln!(s, "{:e}", x.re());
            }
        }
        Field::Complex => {
            s.push_str("re,im\n");
            for x in v {
                let _ = writeln!(s, "{:e},{:e}", x.re(), x.im());
            }
        }
    }
    s
}

pub fn write_vector<T: Scalar, W: Write>(v: &[T], mut w: W) -> io::Result<()> {
    w.write_all(format_vector(v).as_bytes())
}

/// Writes `contents` to `path` through a temporary sibling file and a rename,
/// so readers never observe a partially written file.
pub fn write_atomic(path: &std::path::Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = path.with_file_name(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

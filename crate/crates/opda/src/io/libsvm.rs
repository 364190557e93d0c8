use std::io::{BufRead, Write};

use crate::numcore::{SparseDataset, SparseRow};
use crate::{Error, Result};

/// Parses LIBSVM text: one sample per nonempty line,
/// `label idx:val idx:val ...` with one-based strictly ascending
/// indices. Labels may follow the -1/+1 or 0/1 scheme; 0 normalizes to
/// -1. The dimension is the largest feature index seen unless
/// `dim_override` pins it (required when a split lacks trailing
/// features). Explicit zero values are dropped, keeping stored entries
/// nonzero.
pub fn parse_libsvm<R: BufRead>(source: R, dim_override: Option<usize>) -> Result<SparseDataset> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;

    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut tokens = line.split_whitespace();
        let Some(label_tok) = tokens.next() else {
            continue;
        };
        let label_val: f64 = label_tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("label {label_tok:?} is not numeric"),
        })?;
        let label = match label_val {
            v if v == 1.0 => 1.0,
            v if v == -1.0 => -1.0,
            v if v == 0.0 => -1.0,
            v => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("label {v} is outside the -1/+1 and 0/1 schemes"),
                })
            }
        };

        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut prev_index = 0usize;
        for tok in tokens {
            let Some((idx_str, val_str)) = tok.split_once(':') else {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("feature token {tok:?} is not idx:val"),
                });
            };
            let one_based: usize = idx_str.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("feature index {idx_str:?} is not an integer"),
            })?;
            if one_based == 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "feature indices are one-based; saw 0".into(),
                });
            }
            if one_based <= prev_index {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!(
                        "feature indices must be strictly ascending, saw {one_based} after {prev_index}"
                    ),
                });
            }
            prev_index = one_based;
            let value: f64 = val_str.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("feature value {val_str:?} is not numeric"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("feature value {value} is not finite"),
                });
            }
            max_index = max_index.max(one_based);
            if value != 0.0 {
                indices.push(one_based - 1);
                values.push(value);
            }
        }
        rows.push(SparseRow::new(indices, values)?);
        labels.push(label);
    }

    if rows.is_empty() {
        return Err(Error::Data("dataset text contains no samples".into()));
    }
    let dim = match dim_override {
        Some(d) => {
            if d < max_index {
                return Err(Error::Data(format!(
                    "dim override {d} is below the largest feature index {max_index}"
                )));
            }
            d
        }
        None => {
            if max_index == 0 {
                return Err(Error::Data(
                    "no features present; supply an explicit dimension".into(),
                ));
            }
            max_index
        }
    };
    SparseDataset::new(rows, labels, dim)
}

/// Scales every row to unit Euclidean norm. A zero row cannot be
/// normalized and is reported by index.
pub fn normalize_rows(ds: &SparseDataset) -> Result<SparseDataset> {
    let mut rows = Vec::with_capacity(ds.n_samples());
    for (n, row) in ds.rows().iter().enumerate() {
        let norm = row.squared_norm().sqrt();
        if norm == 0.0 {
            return Err(Error::Data(format!("row {n} has zero norm")));
        }
        let (indices, values) = row.iter().map(|(i, v)| (i, v / norm)).unzip();
        rows.push(SparseRow::new(indices, values)?);
    }
    SparseDataset::new(rows, ds.labels().to_vec(), ds.dim())
}

/// Writes LIBSVM text with one-based indices and full-precision values,
/// so the output reparses to an identical dataset.
pub fn write_libsvm<W: Write>(ds: &SparseDataset, sink: &mut W) -> Result<usize> {
    let mut bytes = 0usize;
    for n in 0..ds.n_samples() {
        let mut line = String::new();
        line.push_str(if ds.label(n) > 0.0 { "+1" } else { "-1" });
        for (i, v) in ds.row(n).iter() {
            line.push_str(&format!(" {}:{}", i + 1, super::format_g17(v)));
        }
        line.push('\n');
        sink.write_all(line.as_bytes())?;
        bytes += line.len();
    }
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let ds = parse_libsvm("+1 1:0.5 3:-2\n".as_bytes(), None).unwrap();
        assert_eq!(ds.n_samples(), 1);
        assert_eq!(ds.dim(), 3);
        assert_eq!(ds.label(0), 1.0);
        let entries: Vec<(usize, f64)> = ds.row(0).iter().collect();
        assert_eq!(entries, vec![(0, 0.5), (2, -2.0)]);
    }

    #[test]
    fn zero_label_normalizes_to_minus_one() {
        let ds = parse_libsvm("0 2:1\n".as_bytes(), None).unwrap();
        assert_eq!(ds.label(0), -1.0);
    }

    #[test]
    fn unordered_indices_rejected_with_line() {
        let err = parse_libsvm("+1 3:1 2:1\n".as_bytes(), None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn zero_index_rejected() {
        assert!(parse_libsvm("+1 0:1\n".as_bytes(), None).is_err());
    }

    #[test]
    fn bad_label_and_bad_value_rejected() {
        assert!(parse_libsvm("2 1:1\n".as_bytes(), None).is_err());
        assert!(parse_libsvm("+1 1:abc\n".as_bytes(), None).is_err());
        assert!(parse_libsvm("+1 1:inf\n".as_bytes(), None).is_err());
        assert!(parse_libsvm("+1 1\n".as_bytes(), None).is_err());
    }

    #[test]
    fn skips_blank_lines_and_explicit_zeros() {
        let ds = parse_libsvm("+1 1:1 2:0 3:2\n\n-1 1:3\n".as_bytes(), None).unwrap();
        assert_eq!(ds.n_samples(), 2);
        assert_eq!(ds.row(0).nnz(), 2);
        assert_eq!(ds.dim(), 3);
    }

    #[test]
    fn dim_override_checked() {
        assert!(parse_libsvm("+1 1:1\n".as_bytes(), Some(5)).is_ok());
        assert!(parse_libsvm("+1 4:1\n".as_bytes(), Some(3)).is_err());
    }

    #[test]
    fn normalize_three_four_five() {
        let ds = parse_libsvm("+1 1:3 2:4\n".as_bytes(), None).unwrap();
        let out = normalize_rows(&ds).unwrap();
        let entries: Vec<(usize, f64)> = out.row(0).iter().collect();
        assert_eq!(entries, vec![(0, 0.6), (1, 0.8)]);
    }

    #[test]
    fn normalize_unit_row_unchanged() {
        let ds = parse_libsvm("+1 1:1\n".as_bytes(), None).unwrap();
        let out = normalize_rows(&ds).unwrap();
        assert!((out.row(0).iter().next().unwrap().1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_reports_zero_row() {
        let ds = parse_libsvm("+1 2:0\n-1 1:1\n".as_bytes(), None).unwrap();
        let err = normalize_rows(&ds).unwrap_err();
        assert!(err.to_string().contains("row 0"), "{err}");
    }

    #[test]
    fn write_then_parse_is_identity() {
        let ds = parse_libsvm("+1 1:0.3 4:-2.5\n0 2:7\n".as_bytes(), None).unwrap();
        let mut buf = Vec::new();
        write_libsvm(&ds, &mut buf).unwrap();
        let back = parse_libsvm(&buf[..], Some(ds.dim())).unwrap();
        assert_eq!(back, ds);
    }
}

//! Digitized delay measurements: CSV with header `nu_ghz,delay_ns,run`.

use std::io::Read;
use std::path::Path;

use crate::{HarnessError, Result};

pub const DATA_HEADER: [&str; 3] = ["nu_ghz", "delay_ns", "run"];

/// Label given to rows with an empty `run` field.
pub const DEFAULT_RUN: &str = "default";

/// One measurement run, frequencies strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    pub run: String,
    /// `(ν in Hz, delay in s)`.
    pub points: Vec<(f64, f64)>,
}

impl DataSet {
    pub fn new(run: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self> {
        let run = run.into();
        for (i, &(nu, delay)) in points.iter().enumerate() {
            if !(nu.is_finite() && delay.is_finite()) {
                return Err(HarnessError::Validation(format!("run '{run}': point {i} is not finite")));
            }
            if i > 0 && !(nu > points[i - 1].0) {
                return Err(HarnessError::Validation(format!(
                    "run '{run}': frequencies must be strictly increasing"
                )));
            }
        }
        Ok(Self { run, points })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn delays(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }
}

/// All runs of a data file, in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataFile {
    pub sets: Vec<DataSet>,
}

impl DataFile {
    /// True for a header-only file; valid, but nothing to compare against.
    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(|s| s.points.is_empty())
    }

    pub fn len(&self) -> usize {
        self.sets.iter().map(|s| s.points.len()).sum()
    }
}

pub fn load_dataset(path: &Path) -> Result<DataFile> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    parse_dataset(file, &path.display().to_string())
}

/// Rows are numbered by file line, the header being line 1. Within a run the
/// frequencies must be strictly increasing in file order.
pub fn parse_dataset<R: Read>(reader: R, source_name: &str) -> Result<DataFile> {
    let err = |row: usize, message: String| HarnessError::Data {
        source_name: source_name.to_string(),
        row,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| err(1, e.to_string()))?.clone();
    if header.iter().ne(DATA_HEADER.iter().copied()) {
        return Err(err(
            1,
            format!("header must be '{}', found '{}'", DATA_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        ));
    }

    let mut out = DataFile::default();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            err(row, e.to_string())
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let number = |i: usize, name: &str| -> Result<f64> {
            let text = record.get(i).unwrap_or("");
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(err(row, format!("{name} must be a finite number, found '{text}'"))),
            }
        };
        let nu = number(0, "nu_ghz")? * 1e9;
        let delay = number(1, "delay_ns")? * 1e-9;
        if !(nu > 0.0) {
            return Err(err(row, "nu_ghz must be positive".into()));
        }
        let run = match record.get(2).unwrap_or("") {
            "" => DEFAULT_RUN,
            r => r,
        };
        let set = match out.sets.iter().position(|s| s.run == run) {
            Some(i) => &mut out.sets[i],
            None => {
                out.sets.push(DataSet {
                    run: run.to_string(),
                    points: Vec::new(),
                });
                out.sets.last_mut().expect("just pushed")
            }
        };
        if let Some(&(last, _)) = set.points.last() {
            if nu == last {
                return Err(err(row, format!("duplicate frequency {} GHz in run '{run}'", nu / 1e9)));
            }
            if nu < last {
                return Err(err(
                    row,
                    format!("frequency {} GHz decreases within run '{run}'", nu / 1e9),
                ));
            }
        }
        set.points.push((nu, delay));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<DataFile> {
        parse_dataset(text.as_bytes(), "data.csv")
    }

    #[test]
    fn unit_convention() {
        let d = parse("nu_ghz,delay_ns,run\n9.20,1.35,run1\n").unwrap();
        assert_eq!(d.sets.len(), 1);
        assert_eq!(d.sets[0].run, "run1");
        let (nu, delay) = d.sets[0].points[0];
        assert!((nu - 9.20e9).abs() < 1e-3);
        assert!((delay - 1.35e-9).abs() < 1e-21);
    }

    #[test]
    fn header_only_is_empty_but_valid() {
        let d = parse("nu_ghz,delay_ns,run\n").unwrap();
        assert!(d.is_empty());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn runs_are_kept_apart() {
        let d = parse("nu_ghz,delay_ns,run\n9.0,1,a\n8.0,2,b\n9.5,1,a\n8.5,2,b\n9.7,3,\n").unwrap();
        let runs: Vec<_> = d.sets.iter().map(|s| (s.run.as_str(), s.points.len())).collect();
        assert_eq!(runs, vec![("a", 2), ("b", 2), (DEFAULT_RUN, 1)]);
    }

    #[test]
    fn duplicate_frequency_reports_row() {
        let e = parse("nu_ghz,delay_ns,run\n9.0,1,a\n9.1,1,a\n9.1,2,a\n").unwrap_err();
        match e {
            HarnessError::Data { row, message, .. } => {
                assert_eq!(row, 4);
                assert!(message.contains("duplicate"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn decreasing_frequency_is_rejected() {
        let e = parse("nu_ghz,delay_ns,run\n9.0,1,a\n8.9,1,a\n").unwrap_err();
        assert!(matches!(e, HarnessError::Data { row: 3, .. }), "{e}");
    }

    #[test]
    fn malformed_rows_report_row_numbers() {
        for (text, row) in [
            ("nu_ghz,delay_ns,run\n9.0,x,a\n", 2),
            ("nu_ghz,delay_ns,run\n9.0,1,a\n9.1,inf,a\n", 3),
            ("nu_ghz,delay_ns,run\n9.0,1,a\n9.1\n", 3),
            ("nu_ghz,delay_ns,run\n-1,1,a\n", 2),
            ("freq,delay,run\n9.0,1,a\n", 1),
        ] {
            let e = parse(text).unwrap_err();
            assert!(matches!(e, HarnessError::Data { row: r, .. } if r == row), "{text:?}: {e}");
        }
    }

    #[test]
    fn dataset_new_checks_order() {
        assert!(DataSet::new("r", vec![(1.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(DataSet::new("r", vec![(1.0, f64::NAN)]).is_err());
        assert!(DataSet::new("r", vec![(1.0, 0.0), (2.0, 0.0)]).is_ok());
    }
}

//! Data files: CSV rows `x,f` (extra columns ignored, `#` comments, optional
//! header) or JSON `{"points": [...], "values": [...]}`.

use std::path::Path;

use serde::Deserialize;
use whitney_trace::{SampledFunction, Tolerances};

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonData {
    points: Vec<f64>,
    values: Vec<f64>,
}

pub fn read_data(path: &Path, tol: &Tolerances) -> CliResult<SampledFunction> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
    let (x, v) = if is_json { parse_json(&text)? } else { parse_csv(&text)? };
    build(x, v, tol)
}

fn build(x: Vec<f64>, v: Vec<f64>, tol: &Tolerances) -> CliResult<SampledFunction> {
    if x.is_empty() {
        return Err(CliError::Insufficient("input holds no data rows".into()));
    }
    let sorted = SampledFunction::from_unsorted(x, v)?;
    let (x, v) = (sorted.points().to_vec(), sorted.values().to_vec());
    Ok(SampledFunction::with_min_gap(x, v, tol.min_gap_rel)?)
}

fn parse_json(text: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let data: JsonData = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("JSON input: {e}")))?;
    if data.points.len() != data.values.len() {
        return Err(CliError::Parse(format!(
            "JSON input: {} points but {} values",
            data.points.len(),
            data.values.len()
        )));
    }
    Ok((data.points, data.values))
}

pub fn parse_csv(text: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let (mut x, mut v) = (Vec::new(), Vec::new());
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse(format!("CSV input: {e}")))?;
        let row = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() < 2 {
            return Err(CliError::Parse(format!("row {row}: expected two columns x,f")));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        let header = std::mem::replace(&mut first, false);
        match parsed {
            (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => {
                x.push(a);
                v.push(b);
            }
            (Ok(_), Ok(_)) => return Err(CliError::Parse(format!("row {row}: non-finite number"))),
            // a non-numeric first row is a header
            (Err(_), Err(_)) if header => {}
            _ => {
                return Err(CliError::Parse(format!(
                    "row {row}: cannot parse \"{},{}\" as numbers",
                    &record[0], &record[1]
                )))
            }
        }
    }
    Ok((x, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header_and_comments() {
        let (x, v) = parse_csv("# data\nx,f\n0, 1\n\n2,3\n1,5,9\n").unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(x, vec![0.0, 2.0, 1.0]);
        assert_eq!(v, vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn malformed_row_reports_its_line() {
        let err = parse_csv("x,f\n0,1\n1,abc\n").unwrap_err();
        assert!(matches!(err, CliError::Parse(ref m) if m.contains("row 3")), "{err}");
        assert_eq!(err.exit_code(), 2);
        assert!(parse_csv("1\n").is_err());
        assert!(parse_csv("0,1\nx,f\n").is_err());
    }

    #[test]
    fn duplicates_and_order() {
        let tol = Tolerances::default();
        let err = build(vec![1.0, 1.0], vec![0.0, 2.0], &tol).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let f = build(vec![2.0, 0.0], vec![1.0, 3.0], &tol).unwrap();
        assert_eq!(f.points(), &[0.0, 2.0]);
        assert_eq!(build(vec![], vec![], &tol).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn json_input() {
        let (x, v) = parse_json(r#"{"points": [0, 1], "values": [2, 3]}"#).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!((x, v), (vec![0.0, 1.0], vec![2.0, 3.0]));
        assert!(parse_json(r#"{"points": [0], "values": [2, 3]}"#).is_err());
    }
}

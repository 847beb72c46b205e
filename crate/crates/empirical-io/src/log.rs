use crate::EmpiricalError;
use market_core::Demand;
use std::fs;
use std::path::Path;

const HEADER: &str = "p1,p2,tau";

/// A loaded prediction log: one row per consumer, plus where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionLog {
    rows: Vec<(bool, bool, Demand)>,
    pub source: String,
}

impl PredictionLog {
    /// Wrap already-materialized rows, e.g. from a sampler; `source`
    /// should identify the generator and seed.
    pub fn from_rows(
        rows: Vec<(bool, bool, Demand)>,
        source: impl Into<String>,
    ) -> Result<Self, EmpiricalError> {
        if rows.is_empty() {
            return Err(EmpiricalError::EmptyLog);
        }
        Ok(PredictionLog {
            rows,
            source: source.into(),
        })
    }

    pub fn rows(&self) -> &[(bool, bool, Demand)] {
        &self.rows
    }

    /// Occurrence counts of the eight (tau, p1, p2) outcomes, indexed
    /// [tau][p1][p2] with 1 meaning high demand / prediction 1.
    pub fn cell_counts(&self) -> [[[u64; 2]; 2]; 2] {
        let mut counts = [[[0u64; 2]; 2]; 2];
        for &(p1, p2, d) in &self.rows {
            counts[matches!(d, Demand::High) as usize][p1 as usize][p2 as usize] += 1;
        }
        counts
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Parse a CSV log with header `p1,p2,tau` and {0,1} fields, where tau = 1
/// means high demand. Accepts LF or CRLF endings and `#` comment lines;
/// anything else malformed is rejected with its line and column.
pub fn load_log(path: impl AsRef<Path>) -> Result<PredictionLog, EmpiricalError> {
    let text = fs::read_to_string(&path)?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (number, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let number = number + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != HEADER {
                return Err(EmpiricalError::Parse {
                    line: number,
                    column: 1,
                    reason: "expected header p1,p2,tau",
                });
            }
            saw_header = true;
            continue;
        }
        rows.push(parse_row(line, number)?);
    }
    if rows.is_empty() {
        return Err(EmpiricalError::EmptyLog);
    }
    PredictionLog::from_rows(rows, path.as_ref().display().to_string())
}

fn parse_row(line: &str, number: usize) -> Result<(bool, bool, Demand), EmpiricalError> {
    let mut fields = [(0usize, ""); 3];
    let mut start = 0;
    for (i, field) in line.splitn(4, ',').enumerate() {
        if i == 3 {
            return Err(EmpiricalError::Parse {
                line: number,
                column: start + 1,
                reason: "expected exactly three values",
            });
        }
        fields[i] = (start + 1, field);
        start += field.len() + 1;
    }
    if fields[2].1.is_empty() && !line.ends_with(',') {
        return Err(EmpiricalError::Parse {
            line: number,
            column: line.len() + 1,
            reason: "expected three comma-separated values",
        });
    }
    let p1 = parse_bit(fields[0], number)?;
    let p2 = parse_bit(fields[1], number)?;
    let tau = match parse_bit(fields[2], number)? {
        true => Demand::High,
        false => Demand::Low,
    };
    Ok((p1, p2, tau))
}

fn parse_bit((column, field): (usize, &str), line: usize) -> Result<bool, EmpiricalError> {
    match field {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(EmpiricalError::Parse {
            line,
            column,
            reason: "expected 0 or 1",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;
    use std::time::Instant;
    use tempfile::NamedTempFile;

    fn write_log(contents: &str) -> NamedTempFile {
        let mut file = NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn parses_a_minimal_log() {
        let file = write_log("p1,p2,tau\n1,1,1\n0,0,0\n");
        let log = load_log(file.path()).unwrap();
        assert_eq!(
            log.rows(),
            &[(true, true, Demand::High), (false, false, Demand::Low)]
        );
    }

    #[test]
    fn tolerates_comments_blank_lines_and_crlf() {
        let file =
            write_log("# produced by model A, seed 7\r\np1,p2,tau\r\n1,0,1\r\n\r\n0,1,0\r\n");
        let log = load_log(file.path()).unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(log.rows()[0], (true, false, Demand::High));
        assert_eq!(log.rows()[1], (false, true, Demand::Low));
    }

    #[test]
    fn points_at_the_offending_field() {
        let cases = [
            ("p1,p2,tau\n1,2,0\n", 2, 3, "expected 0 or 1"),
            (
                "p1,p2,tau\n1,1\n",
                2,
                4,
                "expected three comma-separated values",
            ),
            (
                "p1,p2,tau\n1,1,0,0\n",
                2,
                7,
                "expected exactly three values",
            ),
            ("p1,p2,demand\n1,1,1\n", 1, 1, "expected header p1,p2,tau"),
            ("p1,p2,tau\n1,1,x\n", 2, 5, "expected 0 or 1"),
        ];
        for (contents, line, column, reason) in cases {
            let file = write_log(contents);
            match load_log(file.path()) {
                Err(EmpiricalError::Parse {
                    line: l,
                    column: c,
                    reason: r,
                }) => {
                    assert_eq!((l, c, r), (line, column, reason), "for {contents:?}");
                }
                other => panic!("expected parse error for {contents:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_logs_without_data() {
        for contents in ["", "p1,p2,tau\n", "# only a comment\n"] {
            let file = write_log(contents);
            assert!(matches!(
                load_log(file.path()),
                Err(EmpiricalError::EmptyLog)
            ));
        }
        assert!(matches!(
            PredictionLog::from_rows(vec![], "test"),
            Err(EmpiricalError::EmptyLog)
        ));
    }

    #[test]
    fn loads_a_test_set_sized_file_quickly() {
        let mut contents = String::from("p1,p2,tau\n");
        for i in 0..58_700 {
            contents.push_str(["0,1,0\n", "1,1,1\n", "1,0,1\n", "0,0,0\n"][i % 4]);
        }
        let file = write_log(&contents);
        let start = Instant::now();
        let log = load_log(file.path()).unwrap();
        assert_eq!(log.len(), 58_700);
        assert!(start.elapsed().as_secs_f64() < 1.0);
    }
}

//! Plain-text CSV export of field samples.
//!
//! Layout: `# key: value` metadata lines, a column header `s,t,r<k>...`, then
//! one row per grid point in row-major order. Numbers use the shortest
//! decimal that round-trips.

use std::io::{self, BufRead, Write};

use super::{FieldSample, GridSpec};

pub fn write_samples_csv<W: Write>(
    mut out: W,
    grid: &GridSpec,
    samples: &[FieldSample],
    metadata: &[(String, String)],
) -> io::Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}")?;
    }
    write!(out, "s,t")?;
    for s in samples {
        write!(out, ",r{}", s.replicate_index)?;
    }
    writeln!(out)?;
    if samples.is_empty() {
        return Ok(());
    }
    for (idx, (s, t)) in grid.points().enumerate() {
        write!(out, "{s},{t}")?;
        for sample in samples {
            write!(out, ",{}", sample.values[idx])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Parsed contents of a sample CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_samples_csv<R: BufRead>(input: R) -> io::Result<SampleTable> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut table = SampleTable {
        metadata: Vec::new(),
        columns: Vec::new(),
        rows: Vec::new(),
    };
    for line in input.lines() {
        let line = line?;
        if let Some(meta) = line.strip_prefix('#') {
            let (k, v) = meta.split_once(':').ok_or_else(|| bad(format!("malformed metadata line: {line}")))?;
            table.metadata.push((k.trim().to_string(), v.trim().to_string()));
        } else if table.columns.is_empty() {
            table.columns = line.split(',').map(str::to_string).collect();
        } else if !line.is_empty() {
            let row = line
                .split(',')
                .map(|x| x.parse::<f64>().map_err(|e| bad(format!("{x}: {e}"))))
                .collect::<io::Result<Vec<f64>>>()?;
            if row.len() != table.columns.len() {
                return Err(bad(format!("row has {} fields, header has {}", row.len(), table.columns.len())));
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}

//! Signal CSV input and atomic CSV/JSON output.

use std::fs;
use std::io::Write;
use std::path::Path;

use covariant_lab::{CircleFunction, GridFunction1D, RealGrid, C64};

use crate::error::{CliError, CliResult};

/// Relative tolerance on the spacing of signal abscissae.
pub const SPACING_TOLERANCE: f64 = 1e-9;

/// Abscissa column of a signal file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Q,
    Theta,
}

impl Abscissa {
    fn name(self) -> &'static str {
        match self {
            Abscissa::Q => "q",
            Abscissa::Theta => "theta",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub abscissa: Vec<f64>,
    pub values: Vec<C64>,
}

fn parse_field(raw: &str, line: u64, column: &str) -> CliResult<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("line {line}: column `{column}` is not a number: `{raw}`")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("line {line}: column `{column}` is not finite")));
    }
    Ok(v)
}

/// Parses `q,re,im` or `theta,re,im` text with ascending, uniformly spaced rows.
pub fn parse_signal(text: &str, kind: Abscissa) -> CliResult<Signal> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| CliError::Usage(format!("line 1: {e}")))?.clone();
    if headers.is_empty() {
        return Err(CliError::Usage("empty input: expected a header line".into()));
    }
    let expected = [kind.name(), "re", "im"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
        return Err(CliError::Usage(format!("line 1: expected header `{}`", expected.join(","))));
    }
    let mut signal = Signal { abscissa: Vec::new(), values: Vec::new() };
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            CliError::Usage(format!("line {line}: {e}"))
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        signal.abscissa.push(parse_field(&record[0], line, kind.name())?);
        signal.values.push(C64::new(parse_field(&record[1], line, "re")?, parse_field(&record[2], line, "im")?));
    }
    if signal.values.is_empty() {
        return Err(CliError::Usage("input has no data rows".into()));
    }
    check_spacing(&signal.abscissa)?;
    Ok(signal)
}

fn check_spacing(xs: &[f64]) -> CliResult<()> {
    if xs.len() < 2 {
        return Ok(());
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(CliError::Usage("rows must be sorted ascending".into()));
    }
    for (k, w) in xs.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(CliError::Usage(format!("line {}: rows must be sorted ascending", k + 3)));
        }
        if ((w[1] - w[0]) - h).abs() > SPACING_TOLERANCE * h {
            return Err(CliError::Usage(format!("line {}: spacing is not uniform", k + 3)));
        }
    }
    Ok(())
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// A `q` signal as a function on its own grid.
pub fn line_signal(signal: &Signal) -> CliResult<GridFunction1D> {
    let n = signal.abscissa.len();
    let grid = RealGrid::new(signal.abscissa[0], signal.abscissa[n - 1], n)?;
    Ok(GridFunction1D::new(grid, signal.values.clone())?)
}

/// A `theta` signal: `N ≥ 64` a power of two, `θ_j = 2πj/N`.
pub fn circle_signal(signal: &Signal) -> CliResult<CircleFunction> {
    let n = signal.values.len();
    if n < 64 || !n.is_power_of_two() {
        return Err(CliError::Usage(format!("circle input needs a power-of-two sample count >= 64, got {n}")));
    }
    let step = 2.0 * std::f64::consts::PI / n as f64;
    for (j, t) in signal.abscissa.iter().enumerate() {
        if (t - j as f64 * step).abs() > SPACING_TOLERANCE * (1.0 + t.abs()) {
            return Err(CliError::Usage(format!("line {}: expected theta = 2 pi {j}/{n}", j + 2)));
        }
    }
    Ok(CircleFunction::from_samples(signal.values.clone())?)
}

/// 17 significant digits, period decimal separator.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rows of a CSV table with a header line.
pub fn csv_table<'a>(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>> + 'a) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

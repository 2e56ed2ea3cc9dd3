//! Two-column density tables: one `x f(x)` pair per line, separated by
//! whitespace or a comma. Blank lines and lines starting with `#` are
//! skipped. Nodes must be strictly increasing.

use std::path::Path;

use witbench_core::NoiseModel;

use crate::AppError;

pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>), AppError> {
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let [x, f] = fields[..] else {
            return Err(AppError::usage(format!(
                "density line {}: expected 2 columns, found {}",
                lineno + 1,
                fields.len()
            )));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| AppError::usage(format!("density line {}: {s:?}: {e}", lineno + 1)))
        };
        xs.push(parse(x)?);
        fs.push(parse(f)?);
    }
    Ok((xs, fs))
}

/// Reads a density table and builds a standardized noise model from it.
pub fn load(path: &Path) -> Result<NoiseModel, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let (xs, fs) = parse_table(&text)?;
    let label = format!("file:{}", path.display());
    Ok(NoiseModel::tabulated(&xs, &fs, label)?)
}

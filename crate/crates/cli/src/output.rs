//! Locale-independent serialization. Floats use Rust's shortest round-trip
//! representation; JSON writes non-finite values as null.

use std::fs;
use std::path::Path;

use modgrav_core::exclusion::ExclusionGrid;
use serde::Serialize;

use crate::error::CliError;

/// `x,y,ratio,excluded` with one row per grid node, x varying fastest.
pub fn grid_csv(grid: &ExclusionGrid) -> String {
    let mut out = String::from("x,y,ratio,excluded\n");
    for (j, &y) in grid.y_axis.iter().enumerate() {
        for (i, &x) in grid.x_axis.iter().enumerate() {
            let flag = grid.is_excluded(i, j) as u8;
            out.push_str(&format!("{x:e},{y:e},{:e},{flag}\n", grid.ratio[j][i]));
        }
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

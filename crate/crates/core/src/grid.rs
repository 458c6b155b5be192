use crate::error::{Error, Result};

/// `lo, lo + step, ...` up to `hi` inclusive; the count is rounded so that
/// `hi` itself is included when it lies on the lattice.
pub fn range_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || !(step > 0.0) || hi < lo {
        return Err(Error::InvalidGrid(format!("bad range {lo}:{hi}:{step}")));
    }
    let intervals = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=intervals).map(|k| lo + step * k as f64).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - hi).abs() <= 1e-9 * step {
            *last = hi;
        }
    }
    Ok(grid)
}

/// Parses `lo:hi:step`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidGrid(format!("expected lo:hi:step, got `{spec}`")));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::InvalidGrid(format!("`{s}`: {e}")));
    range_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?)
}

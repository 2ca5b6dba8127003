use crate::error::{Error, Result};

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull (monotone chain). Collinear points are
/// dropped; a single distinct point gives itself, a collinear set its two ends.
pub fn convex_hull(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if points.is_empty() {
        return Err(Error::domain("points", 0.0, "need at least one point"));
    }
    if let Some(&(x, y)) = points.iter().find(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::domain(
            "point",
            if x.is_finite() { y } else { x },
            "must be finite",
        ));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }

    let mut lower: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// Hull taken in log10 coordinates, as on a log-log plot. Input and output
/// are in axis units; all coordinates must be positive.
pub fn convex_hull_log(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if let Some(&(x, y)) = points.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(Error::domain(
            "point",
            if x > 0.0 { y } else { x },
            "must be > 0 for a log hull",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.log10(), y.log10())).collect();
    let hull = convex_hull(&logs)?;
    // map back to the original points so vertices are exact inputs
    Ok(hull
        .into_iter()
        .map(|h| {
            let k = logs
                .iter()
                .position(|&l| l == h)
                .expect("hull vertex is an input point");
            points[k]
        })
        .collect())
}

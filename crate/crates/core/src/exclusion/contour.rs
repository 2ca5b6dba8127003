use std::collections::BTreeMap;

use super::{BoundaryLine, ExclusionGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Edge {
    /// (i, j) to (i + 1, j)
    H(usize, usize),
    /// (i, j) to (i, j + 1)
    V(usize, usize),
}

struct Field<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
    w: &'a [f64],
    level: f64,
}

impl Field<'_> {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.w[j * self.xs.len() + i]
    }

    /// Non-finite values count as above the level.
    fn inside(&self, v: f64) -> bool {
        v < self.level
    }

    fn crossing(&self, e: Edge) -> (f64, f64) {
        let (i0, j0, i1, j1) = match e {
            Edge::H(i, j) => (i, j, i + 1, j),
            Edge::V(i, j) => (i, j, i, j + 1),
        };
        let (a, b) = (self.at(i0, j0), self.at(i1, j1));
        let t = if a.is_finite() && b.is_finite() && a != b {
            ((self.level - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            0.5
        };
        let (x0, y0) = (self.xs[i0], self.ys[j0]);
        let (x1, y1) = (self.xs[i1], self.ys[j1]);
        (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
    }

    fn cell_segments(&self, i: usize, j: usize, out: &mut Vec<(Edge, Edge)>) {
        let v = [
            self.at(i, j),
            self.at(i + 1, j),
            self.at(i + 1, j + 1),
            self.at(i, j + 1),
        ];
        let case = v
            .iter()
            .enumerate()
            .fold(0u8, |acc, (k, &x)| acc | ((self.inside(x) as u8) << k));
        let bottom = Edge::H(i, j);
        let right = Edge::V(i + 1, j);
        let top = Edge::H(i, j + 1);
        let left = Edge::V(i, j);
        match case {
            0 | 15 => {}
            1 | 14 => out.push((left, bottom)),
            2 | 13 => out.push((bottom, right)),
            3 | 12 => out.push((left, right)),
            4 | 11 => out.push((right, top)),
            6 | 9 => out.push((bottom, top)),
            7 | 8 => out.push((left, top)),
            5 | 10 => {
                let centre = if v.iter().all(|x| x.is_finite()) {
                    0.25 * (v[0] + v[1] + v[2] + v[3])
                } else {
                    f64::NAN
                };
                // join the diagonal that shares the centre's side
                let opposite_pairs = (case == 5) == self.inside(centre);
                if opposite_pairs {
                    out.push((bottom, right));
                    out.push((left, top));
                } else {
                    out.push((left, bottom));
                    out.push((right, top));
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Level set of `values` (row-major, `ys.len()` rows of `xs.len()`) with
/// linear interpolation along cell edges in the given coordinates.
pub fn marching_squares(xs: &[f64], ys: &[f64], values: &[f64], level: f64) -> Vec<BoundaryLine> {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "values must be ys.len() rows of xs.len()");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let field = Field {
        xs,
        ys,
        w: values,
        level,
    };
    let mut segs = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            field.cell_segments(i, j, &mut segs);
        }
    }

    let mut at_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segs.iter().enumerate() {
        at_edge.entry(a).or_default().push(k);
        at_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();

    let walk = |start: Edge, used: &mut Vec<bool>| -> Vec<Edge> {
        let mut path = vec![start];
        let mut cur = start;
        while let Some(&k) = at_edge[&cur].iter().find(|&&k| !used[k]) {
            used[k] = true;
            let (a, b) = segs[k];
            cur = if a == cur { b } else { a };
            path.push(cur);
        }
        path
    };

    let open_ends: Vec<Edge> = at_edge
        .iter()
        .filter(|(_, ks)| ks.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    for e in open_ends {
        let k = at_edge[&e][0];
        if !used[k] {
            lines.push(walk(e, &mut used));
        }
    }
    for k in 0..segs.len() {
        if !used[k] {
            // closed loop; the walk comes back to its start edge
            lines.push(walk(segs[k].0, &mut used));
        }
    }

    lines
        .into_iter()
        .map(|path| BoundaryLine {
            vertices: path.into_iter().map(|e| field.crossing(e)).collect(),
            level,
        })
        .collect()
}

/// Level set of a scan grid. Both axes are taken in log10; for `level > 0`
/// the values are too, since ratios span many decades. Vertices are returned
/// in axis units.
pub fn extract_boundary(grid: &ExclusionGrid, level: f64) -> Vec<BoundaryLine> {
    let lx: Vec<f64> = grid.x_axis.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = grid.y_axis.iter().map(|v| v.log10()).collect();
    let log_values = level > 0.0;
    let target = if log_values { level.log10() } else { level };
    let w: Vec<f64> = grid
        .ratio
        .iter()
        .flatten()
        .map(|&v| {
            if !v.is_finite() {
                f64::NAN
            } else if log_values {
                if v > 0.0 {
                    v.log10()
                } else {
                    f64::NEG_INFINITY
                }
            } else {
                v
            }
        })
        .collect();
    marching_squares(&lx, &ly, &w, target)
        .into_iter()
        .map(|l| BoundaryLine {
            vertices: l
                .vertices
                .into_iter()
                .map(|(x, y)| (10f64.powf(x), 10f64.powf(y)))
                .collect(),
            level,
        })
        .collect()
}

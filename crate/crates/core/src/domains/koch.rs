//! Koch-snowflake prefractal polygons and polygon scan conversion.

/// Vertices (counter-clockwise, not closed) of the level-`level` snowflake
/// built on the triangle (0,0), (1,0), (1/2, √3/2).
pub fn koch_polygon(level: u32) -> Vec<(f64, f64)> {
    let mut poly = vec![(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)];
    let (s, c) = (-std::f64::consts::FRAC_PI_3).sin_cos();
    for _ in 0..level {
        let mut next = Vec::with_capacity(poly.len() * 4);
        for e in 0..poly.len() {
            let a = poly[e];
            let b = poly[(e + 1) % poly.len()];
            let d = ((b.0 - a.0) / 3.0, (b.1 - a.1) / 3.0);
            let p1 = (a.0 + d.0, a.1 + d.1);
            let p2 = (a.0 + 2.0 * d.0, a.1 + 2.0 * d.1);
            // rotate by -60° so the bump points outward of a CCW polygon
            let peak = (p1.0 + c * d.0 - s * d.1, p1.1 + s * d.0 + c * d.1);
            next.extend_from_slice(&[a, p1, peak, p2]);
        }
        poly = next;
    }
    poly
}

/// Closed-form area of the level-`level` prefractal of unit side.
pub fn koch_area(level: u32) -> f64 {
    let base = 3f64.sqrt() / 4.0;
    base * (1.0 + 0.6 * (1.0 - (4.0f64 / 9.0).powi(level as i32)))
}

/// Resolutions at or below this value leave fewer than four cells across the
/// smallest edge of the prefractal.
pub fn koch_min_resolution(level: u32) -> f64 {
    4.0 * 3f64.powi(level as i32)
}

/// Even-odd scan conversion: a cell is inside when its center lies strictly
/// between an entering and a leaving crossing on its row.
pub(super) fn scanline_fill(
    poly: &[(f64, f64)],
    nx: usize,
    ny: usize,
    h: f64,
    origin: (f64, f64),
) -> Vec<bool> {
    let mut mask = vec![false; nx * ny];
    let eps = 1e-9 * h;
    let mut xs = Vec::new();
    for j in 0..ny {
        let y = origin.1 + (j as f64 + 0.5) * h;
        xs.clear();
        for e in 0..poly.len() {
            let (ax, ay) = poly[e];
            let (bx, by) = poly[(e + 1) % poly.len()];
            if (ay <= y && y < by) || (by <= y && y < ay) {
                xs.push(ax + (y - ay) / (by - ay) * (bx - ax));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let (lo, hi) = (pair[0] + eps, pair[1] - eps);
            let first = (((lo - origin.0) / h) - 0.5).ceil().max(0.0) as usize;
            for i in first..nx {
                let x = origin.0 + (i as f64 + 0.5) * h;
                if x >= hi {
                    break;
                }
                if x > lo {
                    mask[j * nx + i] = true;
                }
            }
        }
    }
    mask
}

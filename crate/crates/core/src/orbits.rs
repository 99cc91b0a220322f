//! Closed `(p, q)` orbits of the circular billiard.
//!
//! A trajectory advancing by `2 pi p / q` per bounce closes after `q` wall
//! hits while winding `p` times around the centre. Every chord is tangent to
//! the caustic circle of radius `R cos(pi p / q)`.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::DensityGrid;
use crate::spectrum::Shell;

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Validates `q > p >= 1`, `gcd(p, q) = 1`.
pub fn check_winding(p: u32, q: u32) -> Result<()> {
    if p >= 1 && q > p && gcd(p, q) == 1 {
        Ok(())
    } else {
        Err(Error::InvalidWinding { p, q })
    }
}

/// Wall angles `phi0 + 2 pi p k / q (mod 2 pi)` for `k = 0..q`, in traversal order.
pub fn orbit_vertices(p: u32, q: u32, phi0: f64) -> Result<Vec<f64>> {
    check_winding(p, q)?;
    Ok((0..q)
        .map(|k| (phi0 + TAU * (p * k) as f64 / q as f64).rem_euclid(TAU))
        .collect())
}

/// Straight segment between two wall points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chord {
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl Chord {
    /// Euclidean distance from `(x, y)` to the segment.
    pub fn distance(&self, x: f64, y: f64) -> f64 {
        let [ax, ay] = self.start;
        let [bx, by] = self.end;
        let (dx, dy) = (bx - ax, by - ay);
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            (((x - ax) * dx + (y - ay) * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (x - ax - t * dx).hypot(y - ay - t * dy)
    }

    /// Distance from the centre of the disk to the infinite line through the chord.
    pub fn line_distance_from_origin(&self) -> f64 {
        let [ax, ay] = self.start;
        let [bx, by] = self.end;
        (ax * by - ay * bx).abs() / (bx - ax).hypot(by - ay)
    }
}

/// Geometry of one closed orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitPath {
    pub p: u32,
    pub q: u32,
    /// Hit count `p q` as quoted in the source; the geometric count is `q`.
    pub m_paper: u32,
    pub phi0: f64,
    pub radius: f64,
    pub vertices: Vec<f64>,
    pub chords: Vec<Chord>,
    pub caustic_radius: f64,
}

impl OrbitPath {
    pub fn new(p: u32, q: u32, phi0: f64, radius: f64) -> Result<Self> {
        let vertices = orbit_vertices(p, q, phi0)?;
        let point = |phi: f64| [radius * phi.cos(), radius * phi.sin()];
        let chords = (0..vertices.len())
            .map(|k| Chord {
                start: point(vertices[k]),
                end: point(vertices[(k + 1) % vertices.len()]),
            })
            .collect();
        Ok(Self {
            p,
            q,
            m_paper: p * q,
            phi0,
            radius,
            vertices,
            chords,
            caustic_radius: radius * (PI * p as f64 / q as f64).cos(),
        })
    }

    /// Closed polyline: `q + 1` points, the last equal to the first.
    pub fn polyline(&self) -> Vec<[f64; 2]> {
        let mut pts: Vec<[f64; 2]> = self.chords.iter().map(|c| c.start).collect();
        pts.push(self.chords[0].start);
        pts
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        self.chords
            .iter()
            .map(|c| c.distance(x, y))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `l0 R / rho_bar`, the caustic radius implied by the shell's centre.
pub fn caustic_radius_of(shell: &Shell) -> f64 {
    shell.l0 as f64 * shell.config.radius / shell.rho_bar
}

/// Fraction of the in-disk density lying within `half_width` of any chord.
pub fn tube_fraction(grid: &DensityGrid, path: &OrbitPath, half_width: f64) -> Result<f64> {
    let cell = grid.cell_size();
    if !(half_width >= cell) {
        return Err(Error::EmptyTube {
            width: half_width,
            cell,
        });
    }
    let mut inside = 0.0;
    let mut total = 0.0;
    for j in 0..grid.n_cells {
        for i in 0..grid.n_cells {
            let idx = grid.index(i, j);
            if !grid.mask[idx] {
                continue;
            }
            let v = grid.values[idx];
            total += v;
            let (x, y) = grid.cell_center(i, j);
            if path.distance(x, y) <= half_width {
                inside += v;
            }
        }
    }
    if !(total > 0.0) {
        return Err(Error::Degenerate(
            "grid carries no density inside the disk".into(),
        ));
    }
    Ok(inside / total)
}

/// Orbit orientation maximizing [`tube_fraction`] over `samples` phases in
/// one symmetry period `[0, 2 pi / q)`. Returns the phase and its fraction.
pub fn fit_orbit_phase(
    grid: &DensityGrid,
    p: u32,
    q: u32,
    half_width: f64,
    samples: usize,
) -> Result<(f64, f64)> {
    check_winding(p, q)?;
    let mut best = (0.0, f64::NEG_INFINITY);
    for s in 0..samples.max(1) {
        let phi0 = TAU / q as f64 * s as f64 / samples.max(1) as f64;
        let path = OrbitPath::new(p, q, phi0, grid.radius)?;
        let f = tube_fraction(grid, &path, half_width)?;
        if f > best.1 {
            best = (phi0, f);
        }
    }
    Ok(best)
}

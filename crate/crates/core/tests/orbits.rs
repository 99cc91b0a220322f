use std::f64::consts::{PI, TAU};

use billiard_scars::error::Error;
use billiard_scars::grid::DensityGrid;
use billiard_scars::orbits::{
    caustic_radius_of, fit_orbit_phase, orbit_vertices, tube_fraction, OrbitPath,
};
use billiard_scars::spectrum::{find_shell, BilliardConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn uniform(n: usize) -> DensityGrid {
    DensityGrid::empty(n, 1.0).fill(|_, _| Ok(1.0)).unwrap()
}

/// Distance from `(x, y)` to the segment between two wall angles.
fn segment_distance(a: f64, b: f64, x: f64, y: f64) -> f64 {
    let (ax, ay) = (a.cos(), a.sin());
    let (bx, by) = (b.cos(), b.sin());
    let (dx, dy) = (bx - ax, by - ay);
    let t = (((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (x - ax - t * dx).hypot(y - ay - t * dy)
}

#[test]
fn uniform_tube_matches_monte_carlo_area() {
    let w = 0.15;
    let angles = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let (mut hits, mut inside) = (0u64, 0u64);
    while inside < 1_000_000 {
        let (x, y): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if x.hypot(y) > 1.0 {
            continue;
        }
        inside += 1;
        let near = (0..3).any(|k| segment_distance(angles[k], angles[(k + 1) % 3], x, y) <= w);
        hits += near as u64;
    }
    let area_fraction = hits as f64 / inside as f64;
    let path = OrbitPath::new(1, 3, 0.0, 1.0).unwrap();
    let f = tube_fraction(&uniform(512), &path, w).unwrap();
    assert!((f - area_fraction).abs() < 0.005, "{f} vs {area_fraction}");
}

#[test]
fn single_cell_on_a_chord() {
    let path = OrbitPath::new(1, 3, 0.0, 1.0).unwrap();
    let mut g = DensityGrid::empty(128, 1.0);
    let c = &path.chords[0];
    let (mx, my) = (0.5 * (c.start[0] + c.end[0]), 0.5 * (c.start[1] + c.end[1]));
    let h = g.cell_size();
    let i = ((mx + 1.0) / h) as usize;
    let j = ((my + 1.0) / h) as usize;
    let idx = g.index(i, j);
    g.values[idx] = 3.0;
    assert_eq!(tube_fraction(&g, &path, 0.05).unwrap(), 1.0);
}

#[test]
fn wide_tube_covers_the_disk() {
    let path = OrbitPath::new(2, 5, 0.4, 1.0).unwrap();
    assert_eq!(tube_fraction(&uniform(64), &path, 2.0).unwrap(), 1.0);
}

#[test]
fn tube_errors() {
    let path = OrbitPath::new(1, 3, 0.0, 1.0).unwrap();
    let g = uniform(64);
    assert!(matches!(
        tube_fraction(&g, &path, 0.01),
        Err(Error::EmptyTube { .. })
    ));
    let blank = DensityGrid::empty(64, 1.0);
    assert!(matches!(
        tube_fraction(&blank, &path, 0.2),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn vertex_examples() {
    let v = orbit_vertices(1, 3, 0.0).unwrap();
    for (a, b) in v.iter().zip([0.0, TAU / 3.0, 2.0 * TAU / 3.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    let v = orbit_vertices(1, 2, 0.0).unwrap();
    assert!(v[0].abs() < 1e-12 && (v[1] - PI).abs() < 1e-12);
    let v = orbit_vertices(2, 5, 0.0).unwrap();
    for k in 0..5 {
        let step = (v[(k + 1) % 5] - v[k]).rem_euclid(TAU);
        assert!((step - 4.0 * PI / 5.0).abs() < 1e-12);
    }
    for (p, q) in [(0, 3), (3, 3), (2, 4), (5, 3)] {
        assert!(matches!(
            orbit_vertices(p, q, 0.0),
            Err(Error::InvalidWinding { .. })
        ));
    }
}

#[test]
fn caustic_of_table_shell() {
    let s = find_shell(&BilliardConfig::default(), 1, 3, 120, 3).unwrap();
    let rc = caustic_radius_of(&s);
    assert!((rc - 120.0 / 242.14).abs() < 1e-3);
    assert!((rc - 0.5).abs() < 0.005);
    assert!((OrbitPath::new(1, 3, 0.0, 1.0).unwrap().caustic_radius - 0.5).abs() < 1e-15);
    assert!(OrbitPath::new(1, 2, 0.0, 1.0).unwrap().caustic_radius.abs() < 1e-15);
}

#[test]
fn fitted_phase_of_a_ridge_density() {
    // density concentrated along the triangle rotated by 0.3
    let target = OrbitPath::new(1, 3, 0.3, 1.0).unwrap();
    let g = DensityGrid::empty(128, 1.0)
        .fill(|r, phi| {
            let (x, y) = (r * phi.cos(), r * phi.sin());
            Ok((-(target.distance(x, y) / 0.05).powi(2)).exp())
        })
        .unwrap();
    let (phi0, f) = fit_orbit_phase(&g, 1, 3, 0.15, 72).unwrap();
    let d = (phi0 - 0.3).rem_euclid(TAU / 3.0);
    assert!(d.min(TAU / 3.0 - d) < 0.05, "{phi0}");
    assert!(f > 0.9);
}

fn windings() -> impl Strategy<Value = (u32, u32)> {
    (2u32..12, 1u32..11)
        .prop_filter("coprime, p < q", |&(q, p)| {
            fn gcd(a: u32, b: u32) -> u32 {
                if b == 0 {
                    a
                } else {
                    gcd(b, a % b)
                }
            }
            p < q && gcd(p, q) == 1
        })
        .prop_map(|(q, p)| (p, q))
}

proptest! {
    #[test]
    fn orbit_geometry((p, q) in windings(), phi0 in 0.0f64..TAU) {
        let o = OrbitPath::new(p, q, phi0, 1.0).unwrap();
        prop_assert_eq!(o.vertices.len(), q as usize);
        prop_assert_eq!(o.chords.len(), q as usize);
        prop_assert_eq!(o.m_paper, p * q);
        for k in 0..q as usize {
            let step = (o.vertices[(k + 1) % q as usize] - o.vertices[k]).rem_euclid(TAU);
            prop_assert!((step - TAU * p as f64 / q as f64).abs() < 1e-9);
            let mut rest = o.vertices.clone();
            rest.remove(k);
            let distinct = rest.iter().all(|&a| {
                let d = (a - o.vertices[k]).rem_euclid(TAU);
                d.min(TAU - d) > 1e-6
            });
            prop_assert!(distinct);
        }
        for c in &o.chords {
            let want = (PI * p as f64 / q as f64).cos();
            prop_assert!((c.line_distance_from_origin() - want.abs()).abs() < 1e-12);
        }
        let poly = o.polyline();
        prop_assert_eq!(poly.len(), q as usize + 1);
        prop_assert_eq!(poly[0], poly[q as usize]);
    }

    #[test]
    fn tube_fraction_is_monotone(seed in 0u64..1000, w1 in 0.05f64..1.0, dw in 0.0f64..0.5) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut g = uniform(48);
        for v in g.values.iter_mut().filter(|v| **v > 0.0) {
            *v = rng.gen_range(0.0..1.0);
        }
        let path = OrbitPath::new(1, 3, rng.gen_range(0.0..TAU), 1.0).unwrap();
        let a = tube_fraction(&g, &path, w1).unwrap();
        let b = tube_fraction(&g, &path, w1 + dw).unwrap();
        prop_assert!(a <= b && (0.0..=1.0).contains(&a) && b <= 1.0);
    }
}

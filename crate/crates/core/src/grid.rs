//! Cartesian density grids over the billiard disk and their file formats.
//!
//! CSV layout (format version 1):
//!
//! ```text
//! # format_version=1,n_cells=512,radius=1,source=packet,...
//! i,j,density
//! 17,0,1.2345678901234567e-3
//! ```
//!
//! Only cells inside the disk mask are listed; all others are zero. Cell
//! `(i, j)` has centre `x = -R + (i + 1/2) h`, `y = -R + (j + 1/2) h`,
//! `h = 2R / n_cells`.
//!
//! The PGM output is binary P5, top image row at the largest `y`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scar::{AsymptoticDensity, ScarPacket};

pub const FORMAT_VERSION: u32 = 1;
pub const MIN_CELLS: usize = 32;
pub const MAX_CELLS: usize = 4096;

const RESERVED_KEYS: [&str; 3] = ["format_version", "n_cells", "radius"];

/// Provenance record, serialized as `key=value` pairs in the CSV header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridMeta(BTreeMap<String, String>);

impl GridMeta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. Keys and values may not contain `,`, `=` or line breaks.
    pub fn insert(&mut self, key: impl Into<String>, value: impl ToString) -> Result<()> {
        let key = key.into();
        let value = value.to_string();
        let bad = |s: &str| s.is_empty() || s.contains([',', '=', '\n', '\r']);
        if bad(&key)
            || value.contains([',', '=', '\n', '\r'])
            || RESERVED_KEYS.contains(&key.as_str())
        {
            return Err(Error::Domain(format!(
                "invalid grid metadata entry {key:?}={value:?}"
            )));
        }
        self.0.insert(key, value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Sampled density on an `n_cells x n_cells` grid covering `[-R, R]^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub n_cells: usize,
    pub radius: f64,
    /// Row-major, `values[j * n_cells + i]`.
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
    pub meta: GridMeta,
}

impl DensityGrid {
    /// Grid with the geometric disk mask and all values zero.
    pub fn empty(n_cells: usize, radius: f64) -> Self {
        let mut g = Self {
            n_cells,
            radius,
            values: vec![0.0; n_cells * n_cells],
            mask: vec![false; n_cells * n_cells],
            meta: GridMeta::new(),
        };
        for j in 0..n_cells {
            for i in 0..n_cells {
                let (x, y) = g.cell_center(i, j);
                let idx = g.index(i, j);
                g.mask[idx] = x.hypot(y) <= radius;
            }
        }
        g
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.radius / self.n_cells as f64
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_cells + i
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        let h = self.cell_size();
        (
            -self.radius + (i as f64 + 0.5) * h,
            -self.radius + (j as f64 + 0.5) * h,
        )
    }

    /// Polar coordinates of cell `(i, j)`.
    pub fn cell_polar(&self, i: usize, j: usize) -> (f64, f64) {
        let (x, y) = self.cell_center(i, j);
        (x.hypot(y), y.atan2(x))
    }

    /// Fills every masked cell with `f(r, phi)`, rows in parallel.
    pub fn fill<F>(mut self, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        let n = self.n_cells;
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if !self.mask[self.index(i, j)] {
                            return Ok(0.0);
                        }
                        let (r, phi) = self.cell_polar(i, j);
                        f(r.min(self.radius), phi)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        self.values = rows.concat();
        Ok(self)
    }
}

/// What a grid samples.
#[derive(Debug, Clone, Copy)]
pub enum GridSource<'a> {
    /// `|Ψ|^2` of a shell superposition.
    Packet(&'a ScarPacket),
    /// The asymptotic ridge density.
    Asymptotic(&'a AsymptoticDensity),
}

impl GridSource<'_> {
    fn meta(&self) -> Result<GridMeta> {
        let mut m = GridMeta::new();
        match self {
            GridSource::Packet(p) => {
                let s = &p.shell;
                m.insert("source", "packet")?;
                m.insert("p", s.p)?;
                m.insert("q", s.q)?;
                m.insert("l0", s.l0)?;
                m.insert("n0", s.n0)?;
                m.insert("members", s.members.len())?;
                m.insert("delta_phi", p.delta_phi)?;
            }
            GridSource::Asymptotic(a) => {
                m.insert("source", "asymptotic")?;
                m.insert("p", a.p)?;
                m.insert("q", a.q)?;
                m.insert("l0", a.l0)?;
                m.insert("rho_bar", a.rho_bar)?;
                m.insert("delta_phi", a.delta_phi)?;
                m.insert("phi0", a.phi0)?;
            }
        }
        Ok(m)
    }

    fn radius(&self) -> f64 {
        match self {
            GridSource::Packet(p) => p.config.radius,
            GridSource::Asymptotic(a) => a.radius,
        }
    }
}

/// Samples the source at every cell centre inside the disk.
pub fn eval_grid(source: GridSource<'_>, n_cells: usize) -> Result<DensityGrid> {
    if !(MIN_CELLS..=MAX_CELLS).contains(&n_cells) {
        return Err(Error::Domain(format!(
            "n_cells {n_cells} outside [{MIN_CELLS}, {MAX_CELLS}]"
        )));
    }
    let mut grid = DensityGrid::empty(n_cells, source.radius());
    grid.meta = source.meta()?;
    match source {
        GridSource::Packet(p) => grid.fill(|r, phi| p.density(r, phi)),
        GridSource::Asymptotic(a) => grid.fill(|r, phi| a.density(r, phi)),
    }
}

fn header_line(grid: &DensityGrid) -> String {
    let mut h = format!(
        "# format_version={FORMAT_VERSION},n_cells={},radius={}",
        grid.n_cells, grid.radius
    );
    for (k, v) in grid.meta.iter() {
        let _ = write!(h, ",{k}={v}");
    }
    h
}

/// CSV text of a grid (see module docs).
pub fn to_csv(grid: &DensityGrid) -> String {
    let mut out = header_line(grid);
    out.push_str("\ni,j,density\n");
    for j in 0..grid.n_cells {
        for i in 0..grid.n_cells {
            let idx = grid.index(i, j);
            if grid.mask[idx] {
                let _ = writeln!(out, "{i},{j},{:.16e}", grid.values[idx]);
            }
        }
    }
    out
}

pub fn write_csv(grid: &DensityGrid, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_csv(grid))?;
    Ok(())
}

/// Parses CSV text written by [`to_csv`].
pub fn from_csv(text: &str) -> Result<DensityGrid> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| Error::Format("missing '# key=value' header".into()))?;
    let mut fields = BTreeMap::new();
    for pair in header.split(',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("header entry {pair:?} is not key=value")))?;
        if fields.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Format(format!("duplicate header key {k:?}")));
        }
    }
    let mut take = |k: &str| {
        fields
            .remove(k)
            .ok_or_else(|| Error::Format(format!("header lacks {k}")))
    };
    let version = take("format_version")?;
    if version != FORMAT_VERSION.to_string() {
        return Err(Error::Format(format!(
            "unsupported format_version {version}"
        )));
    }
    let n_cells: usize = take("n_cells")?
        .parse()
        .map_err(|_| Error::Format("n_cells is not an integer".into()))?;
    let radius: f64 = take("radius")?
        .parse()
        .map_err(|_| Error::Format("radius is not a number".into()))?;
    if n_cells == 0 || !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Format(
            "grid size and radius must be positive".into(),
        ));
    }
    let mut meta = GridMeta::new();
    for (k, v) in fields {
        meta.insert(k, v)
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    if lines.next() != Some("i,j,density") {
        return Err(Error::Format("expected column header 'i,j,density'".into()));
    }

    let total = n_cells * n_cells;
    let mut values = vec![0.0; total];
    let mut mask = vec![false; total];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Format(format!("data row {}: {line:?}", lineno + 3));
        let mut parts = line.split(',');
        let (Some(i), Some(j), Some(v), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let i: usize = i.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        let v: f64 = v.parse().map_err(|_| bad())?;
        if i >= n_cells || j >= n_cells || !v.is_finite() || v < 0.0 {
            return Err(bad());
        }
        let idx = j * n_cells + i;
        if mask[idx] {
            return Err(Error::Format(format!("cell ({i}, {j}) listed twice")));
        }
        mask[idx] = true;
        values[idx] = v;
    }
    Ok(DensityGrid {
        n_cells,
        radius,
        values,
        mask,
        meta,
    })
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<DensityGrid> {
    from_csv(&fs::read_to_string(path)?)
}

/// Banded grey levels: `floor(levels * v / max)` clamped to `levels - 1`,
/// stretched to `0..=255`. Maximum density is white.
pub fn to_pgm(grid: &DensityGrid, levels: u32) -> Result<Vec<u8>> {
    if !(2..=64).contains(&levels) {
        return Err(Error::Domain(format!("levels {levels} outside [2, 64]")));
    }
    let n = grid.n_cells;
    let vmax = grid.values.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P5\n# format_version={FORMAT_VERSION}\n{n} {n}\n255\n").into_bytes();
    out.reserve(n * n);
    for row in (0..n).rev() {
        for i in 0..n {
            let v = grid.values[grid.index(i, row)];
            let band = if vmax > 0.0 {
                ((v / vmax * levels as f64).floor() as u32).min(levels - 1)
            } else {
                0
            };
            let grey = (band as f64 * 255.0 / (levels - 1) as f64).round() as u8;
            out.push(grey);
        }
    }
    Ok(out)
}

pub fn render_pgm(grid: &DensityGrid, path: impl AsRef<Path>, levels: u32) -> Result<()> {
    let bytes = to_pgm(grid, levels)?;
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    Ok(())
}

/// Pearson correlation of two grids over the masked cells accepted by `keep(r)`.
pub fn correlation_where(
    a: &DensityGrid,
    b: &DensityGrid,
    keep: impl Fn(f64) -> bool,
) -> Result<f64> {
    if a.n_cells != b.n_cells || a.radius != b.radius {
        return Err(Error::Domain("grids have different geometry".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..a.n_cells {
        for i in 0..a.n_cells {
            let idx = a.index(i, j);
            if a.mask[idx] && b.mask[idx] && keep(a.cell_polar(i, j).0) {
                xs.push(a.values[idx]);
                ys.push(b.values[idx]);
            }
        }
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("fewer than two cells selected".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("constant grid has no correlation".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

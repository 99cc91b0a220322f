//! JSON documents written by the command line. Every document carries
//! `format_version: 1`. Non-finite numbers (the infinite-lifetime sentinel)
//! serialize as `null`.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::ConsistencyReport;
use crate::grid::FORMAT_VERSION;
use crate::orbits::OrbitPath;
use crate::scar::{LifetimeReport, ScarPacket};
use crate::spectrum::Shell;

#[derive(Debug, Clone, Serialize)]
pub struct ZerosDocument {
    pub format_version: u32,
    pub l: u32,
    pub zeros: Vec<f64>,
}

impl ZerosDocument {
    pub fn new(l: u32, zeros: Vec<f64>) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            l,
            zeros,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MemberEntry {
    pub l: u32,
    pub n: u32,
    pub rho: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShellDocument {
    pub format_version: u32,
    pub p: u32,
    pub q: u32,
    pub l0: u32,
    pub n0: u32,
    pub beta0: f64,
    pub rho_bar: f64,
    pub members: Vec<MemberEntry>,
}

impl From<&Shell> for ShellDocument {
    fn from(s: &Shell) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            p: s.p,
            q: s.q,
            l0: s.l0,
            n0: s.n0,
            beta0: s.beta0,
            rho_bar: s.rho_bar,
            members: s
                .members
                .iter()
                .map(|m| MemberEntry {
                    l: m.l,
                    n: m.n,
                    rho: m.rho,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PacketDocument {
    pub format_version: u32,
    pub shell: ShellDocument,
    pub delta_phi: f64,
    pub delta_l: f64,
    /// `[re, im]` per shell member.
    pub coeffs: Vec<[f64; 2]>,
    #[serde(flatten)]
    pub lifetime: LifetimeReport,
}

impl PacketDocument {
    pub fn new(packet: &ScarPacket, lifetime: LifetimeReport) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            shell: ShellDocument::from(&packet.shell),
            delta_phi: packet.delta_phi,
            delta_l: packet.delta_l,
            coeffs: packet.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            lifetime,
        }
    }
}

/// Footer of the `evolve` CSV. Times are in units of the classical time `T`.
#[derive(Debug, Clone, Serialize)]
pub struct EvolveFooter {
    pub format_version: u32,
    pub tau_numeric: f64,
    pub tau_q: f64,
    pub ratio: f64,
    pub consistent: bool,
    pub t_classical: f64,
}

impl EvolveFooter {
    pub fn new(c: &ConsistencyReport, t_classical: f64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            tau_numeric: c.tau_numeric,
            tau_q: c.tau_q,
            ratio: c.ratio_of_estimates,
            consistent: c.consistent,
            t_classical,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitDocument {
    pub format_version: u32,
    pub p: u32,
    pub q: u32,
    pub m_paper: u32,
    pub phi0: f64,
    pub caustic_radius: f64,
    /// Closed: the last point repeats the first.
    pub polyline: Vec<[f64; 2]>,
}

impl From<&OrbitPath> for OrbitDocument {
    fn from(o: &OrbitPath) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            p: o.p,
            q: o.q,
            m_paper: o.m_paper,
            phi0: o.phi0,
            caustic_radius: o.caustic_radius,
            polyline: o.polyline(),
        }
    }
}

/// Exact-versus-asymptotic comparison produced by `pipeline`.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonDocument {
    pub format_version: u32,
    pub n_cells: usize,
    pub phi0: f64,
    pub tube_half_width: f64,
    pub tube_fraction: f64,
    pub baseline_tube_fraction: f64,
    pub annulus_correlation: f64,
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(doc: &T, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json(doc)?)?;
    Ok(())
}

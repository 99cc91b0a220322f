//! Shell-restricted Gaussian wave packets and their lifetime analysis.
//!
//! A packet superposes the members of one [`Shell`] with Gaussian occupation
//! in angular momentum,
//!
//! ```text
//! |c_j|^2  ∝  exp(-(l_j - l0)^2 / (2 Δ_l^2)),     Δ_l = 1 / Δφ,
//! ```
//!
//! over orthonormal modes
//! `u_j(r, φ) = N_j J_{l_j}(k_j r) e^{i l_j φ} / sqrt(2π)`,
//! `N_j = sqrt(2) / (R |J_{l_j + 1}(ρ_j)|)`.
//!
//! With this occupation the angular density on each ridge is a Gaussian of
//! standard deviation `Δφ / 2`, which is what [`AsymptoticDensity`] uses.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special_functions::bessel_j;
use crate::spectrum::{BilliardConfig, Shell};

/// Standard deviation of the angular density of one ridge, as a function of
/// the packet's angular width.
pub fn ridge_angular_std(delta_phi: f64) -> f64 {
    0.5 * delta_phi
}

/// Normalized superposition of shell members.
#[derive(Debug, Clone, PartialEq)]
pub struct ScarPacket {
    pub shell: Shell,
    pub delta_l: f64,
    pub delta_phi: f64,
    /// Aligned with `shell.members`; `sum |c_j|^2 = 1`.
    pub coeffs: Vec<Complex64>,
    pub config: BilliardConfig,
    radial_norms: Vec<f64>,
}

fn radial_norms(shell: &Shell) -> Result<Vec<f64>> {
    shell
        .members
        .iter()
        .map(|m| {
            let d = bessel_j(m.l + 1, m.rho)?.abs();
            if d == 0.0 {
                return Err(Error::Degenerate(format!(
                    "J_{}(rho) vanishes at the zero of J_{}",
                    m.l + 1,
                    m.l
                )));
            }
            Ok(2f64.sqrt() / (shell.config.radius * d))
        })
        .collect()
}

impl ScarPacket {
    /// Packet with arbitrary coefficients, normalized to unit norm.
    pub fn with_coefficients(
        shell: &Shell,
        delta_phi: f64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if coeffs.len() != shell.members.len() {
            return Err(Error::Domain(format!(
                "{} coefficients for {} shell members",
                coeffs.len(),
                shell.members.len()
            )));
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Degenerate(
                "coefficients have zero or non-finite norm".into(),
            ));
        }
        Ok(Self {
            shell: shell.clone(),
            delta_l: 1.0 / delta_phi,
            delta_phi,
            coeffs: coeffs.into_iter().map(|c| c / norm).collect(),
            config: shell.config,
            radial_norms: radial_norms(shell)?,
        })
    }

    /// The central eigenstate of the shell alone (the `Δφ -> ∞` limit).
    pub fn central_eigenstate(shell: &Shell) -> Result<Self> {
        let centre = shell
            .central_index()
            .ok_or_else(|| Error::Domain("shell has no member with l = l0".into()))?;
        let coeffs = (0..shell.members.len())
            .map(|i| Complex64::new(if i == centre { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self::with_coefficients(shell, f64::INFINITY, coeffs)
    }

    /// Occupation probabilities `|c_j|^2`.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `Ψ(r, φ)` for `0 <= r <= R`.
    pub fn amplitude(&self, r: f64, phi: f64) -> Result<Complex64> {
        let radius = self.config.radius;
        if !(r >= 0.0) || r > radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("radius {r} outside [0, {radius}]")));
        }
        let r = r.min(radius);
        let mut sum = Complex64::new(0.0, 0.0);
        for ((m, c), norm) in self
            .shell
            .members
            .iter()
            .zip(&self.coeffs)
            .zip(&self.radial_norms)
        {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            // k r may exceed rho by an ulp at the wall
            let x = (m.k * r).min(m.rho);
            let radial = norm * bessel_j(m.l, x)?;
            sum += c * radial * Complex64::from_polar(1.0, m.l as f64 * phi);
        }
        Ok(sum / TAU.sqrt())
    }

    /// `|Ψ(r, φ)|^2`.
    pub fn density(&self, r: f64, phi: f64) -> Result<f64> {
        Ok(self.amplitude(r, phi)?.norm_sqr())
    }
}

/// Gaussian packet over `shell` with angular width `delta_phi ∈ (0, 1]`.
pub fn build_packet(shell: &Shell, delta_phi: f64) -> Result<ScarPacket> {
    if !(delta_phi > 0.0 && delta_phi <= 1.0) {
        return Err(Error::Domain(format!(
            "delta_phi {delta_phi} outside (0, 1]"
        )));
    }
    if shell.members.len() < 2 {
        return Err(Error::Degenerate(
            "a packet needs at least two shell members".into(),
        ));
    }
    let delta_l = 1.0 / delta_phi;
    let weights: Vec<f64> = shell
        .members
        .iter()
        .map(|m| {
            let d = m.l as f64 - shell.l0 as f64;
            (-d * d / (2.0 * delta_l * delta_l)).exp()
        })
        .collect();
    let off_centre = shell
        .members
        .iter()
        .zip(&weights)
        .filter(|(m, _)| m.l != shell.l0)
        .any(|(_, &w)| w > 0.0);
    if !off_centre {
        return Err(Error::Degenerate(
            "all Gaussian weights except the central one underflow".into(),
        ));
    }
    let coeffs = weights
        .into_iter()
        .map(|w| Complex64::new(w.sqrt(), 0.0))
        .collect();
    ScarPacket::with_coefficients(shell, delta_phi, coeffs)
}

/// Ridge angle `β(r) = acos(l0 R / (ρ̄ r))` between the caustic and the wall.
pub fn caustic_angle(shell: &Shell, r: f64) -> Result<f64> {
    let radius = shell.config.radius;
    let rc = shell.l0 as f64 * radius / shell.rho_bar;
    if !(r >= rc * (1.0 - 1e-12)) || r > radius * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "radius {r} outside the allowed annulus [{rc}, {radius}]"
        )));
    }
    Ok((rc / r).min(1.0).acos())
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Asymptotic (stationary-phase) density of a packet: Gaussian ridges in `φ`
/// tracing the `q` chords of the closed orbit, both halves of each chord.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticDensity {
    pub p: u32,
    pub q: u32,
    pub l0: u32,
    pub rho_bar: f64,
    pub radius: f64,
    pub delta_phi: f64,
    /// Wall angle of the first orbit vertex.
    pub phi0: f64,
}

impl AsymptoticDensity {
    pub fn new(shell: &Shell, delta_phi: f64) -> Result<Self> {
        if !(delta_phi > 0.0) || !delta_phi.is_finite() {
            return Err(Error::Domain(format!(
                "delta_phi {delta_phi} must be positive"
            )));
        }
        Ok(Self {
            p: shell.p,
            q: shell.q,
            l0: shell.l0,
            rho_bar: shell.rho_bar,
            radius: shell.config.radius,
            delta_phi,
            phi0: 0.0,
        })
    }

    pub fn with_phase(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn caustic_radius(&self) -> f64 {
        self.l0 as f64 * self.radius / self.rho_bar
    }

    /// Angular positions of all `2q` ridges at radius `r`, or `None` inside
    /// the caustic.
    pub fn ridge_angles(&self, r: f64) -> Option<Vec<f64>> {
        let rc = self.caustic_radius();
        if r < rc {
            return None;
        }
        let beta = (rc / r).min(1.0).acos();
        let half = PI * self.p as f64 / self.q as f64;
        let mut out = Vec::with_capacity(2 * self.q as usize);
        for k in 0..self.q {
            let mid = self.phi0 + half + TAU * (self.p * k) as f64 / self.q as f64;
            out.push(mid - beta);
            out.push(mid + beta);
        }
        Some(out)
    }

    /// Sum of unit-height ridges; zero inside the caustic.
    pub fn density(&self, r: f64, phi: f64) -> Result<f64> {
        if !(r >= 0.0) || r > self.radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "radius {r} outside [0, {}]",
                self.radius
            )));
        }
        let Some(ridges) = self.ridge_angles(r) else {
            return Ok(0.0);
        };
        let s = ridge_angular_std(self.delta_phi);
        let inv = 1.0 / (2.0 * s * s);
        Ok(ridges
            .into_iter()
            .map(|a| {
                let d = wrap_angle(phi - a);
                (-d * d * inv).exp()
            })
            .sum())
    }
}

/// [`AsymptoticDensity::density`] with the first vertex at `φ = 0`.
pub fn asymptotic_density(shell: &Shell, delta_phi: f64, r: f64, phi: f64) -> Result<f64> {
    AsymptoticDensity::new(shell, delta_phi)?.density(r, phi)
}

/// Energy spread and lifetimes of one packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifetimeReport {
    pub e_mean: f64,
    pub delta_e: f64,
    /// `ħ / ΔE`; `+∞` for an exactly degenerate packet.
    pub tau_q: f64,
    /// `M R^2 / (ħ ρ̄)`.
    pub t_classical: f64,
    pub ratio: f64,
    /// `(ΔE / E) / (Δ_l / ρ̄)^2`.
    pub g_factor: f64,
    /// `Δφ^2 l0`.
    pub eq5_estimate: f64,
}

pub fn lifetime_report(packet: &ScarPacket) -> LifetimeReport {
    let cfg = &packet.config;
    let weights = packet.weights();
    // moments about a member energy so an exactly degenerate shell gives zero
    let e_ref = packet.shell.members.first().map_or(0.0, |m| m.energy);
    let shifts: Vec<f64> = packet
        .shell
        .members
        .iter()
        .map(|m| m.energy - e_ref)
        .collect();
    let mean_shift: f64 = weights.iter().zip(&shifts).map(|(w, d)| w * d).sum();
    let e_mean = e_ref + mean_shift;
    let var: f64 = weights
        .iter()
        .zip(&shifts)
        .map(|(w, d)| w * (d - mean_shift) * (d - mean_shift))
        .sum();
    let delta_e = var.sqrt();
    let rho_bar = packet.shell.rho_bar;
    let tau_q = if delta_e > 0.0 {
        cfg.hbar / delta_e
    } else {
        f64::INFINITY
    };
    let t_classical = cfg.mass * cfg.radius * cfg.radius / (cfg.hbar * rho_bar);
    let g_factor = if delta_e > 0.0 {
        let x = packet.delta_l / rho_bar;
        (delta_e / e_mean) / (x * x)
    } else {
        0.0
    };
    LifetimeReport {
        e_mean,
        delta_e,
        tau_q,
        t_classical,
        ratio: tau_q / t_classical,
        g_factor,
        eq5_estimate: packet.delta_phi * packet.delta_phi * packet.shell.l0 as f64,
    }
}

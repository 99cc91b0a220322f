//! Exact spectrum of the circular billiard and its shell structure.
//!
//! Quantum-number convention: `n` is the 1-based index of the Bessel zero, so
//! the semiclassical radial quantum number is `n - 1`. Shells follow the
//! stationary direction of the spectrum: stepping `l` up by `q` steps `n`
//! down by `p`, which keeps `p * l + q * n` constant along the shell.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::check_winding;
use crate::special_functions::{bessel_zero, bessel_zeros_upto, MAX_ORDER};

/// Physical constants of the billiard. All comparisons with published
/// numbers use the unit defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilliardConfig {
    pub radius: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl Default for BilliardConfig {
    fn default() -> Self {
        Self {
            radius: 1.0,
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl BilliardConfig {
    pub fn new(radius: f64, mass: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("radius", radius), ("mass", mass), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { radius, mass, hbar })
    }

    /// `E = hbar^2 k^2 / 2M` with `k = rho / R`.
    pub fn energy(&self, rho: f64) -> f64 {
        let k = rho / self.radius;
        self.hbar * self.hbar * k * k / (2.0 * self.mass)
    }
}

/// One exact eigenstate `J_l(rho r / R) e^{i l phi}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenMode {
    /// 1-based zero index.
    pub n: u32,
    pub l: u32,
    pub rho: f64,
    pub k: f64,
    pub energy: f64,
}

impl EigenMode {
    /// Computes the `n`-th zero of `J_l` and wraps it as a mode.
    pub fn new(config: &BilliardConfig, n: u32, l: u32) -> Result<Self> {
        let rho = bessel_zero(l, n)?;
        Ok(Self::from_zero(config, n, l, rho))
    }

    /// Wraps an already known zero. No check is made that `rho` is a zero.
    pub fn from_zero(config: &BilliardConfig, n: u32, l: u32, rho: f64) -> Self {
        Self {
            n,
            l,
            rho,
            k: rho / config.radius,
            energy: config.energy(rho),
        }
    }
}

/// Every mode with `rho <= k_max R`, sorted by energy (ties by `l`).
pub fn enumerate_modes(config: &BilliardConfig, k_max: f64) -> Result<Vec<EigenMode>> {
    let x_max = k_max * config.radius;
    if !(x_max >= 0.0) {
        return Err(Error::Domain(format!(
            "k_max must be non-negative, got {k_max}"
        )));
    }
    let mut modes = Vec::new();
    let mut l = 0u32;
    // zeros of J_l exceed l, so orders at or above x_max contribute nothing
    while (l as f64) < x_max {
        if l > MAX_ORDER {
            return Err(Error::Range(format!(
                "enumerating up to k R = {x_max} needs Bessel orders above {MAX_ORDER}"
            )));
        }
        let zeros = bessel_zeros_upto(l, x_max)?;
        if zeros.is_empty() {
            break;
        }
        modes.extend(
            zeros
                .into_iter()
                .enumerate()
                .map(|(i, rho)| EigenMode::from_zero(config, i as u32 + 1, l, rho)),
        );
        l += 1;
    }
    modes.sort_by(|a, b| a.rho.total_cmp(&b.rho).then(a.l.cmp(&b.l)));
    Ok(modes)
}

/// Number of states counting the `+l`/`-l` degeneracy, for comparison with
/// [`weyl_count`].
pub fn degenerate_count(modes: &[EigenMode]) -> usize {
    modes.iter().map(|m| if m.l == 0 { 1 } else { 2 }).sum()
}

/// Two-term Weyl estimate for the Dirichlet disk: `(kR)^2/4 - kR/2`.
pub fn weyl_count(config: &BilliardConfig, k: f64) -> f64 {
    let x = k * config.radius;
    0.25 * x * x - 0.5 * x
}

/// Residual of the Bohr-Sommerfeld rule
/// `sqrt(rho^2 - l^2) - l acos(l / rho) = (2 n' + 1) pi/2 + pi/4`
/// with `n' = n - 1`.
pub fn semiclassical_residual(mode: &EigenMode) -> Result<f64> {
    let l = mode.l as f64;
    let rho = mode.rho;
    if !(rho > l) {
        return Err(Error::Domain(format!(
            "no classically allowed radial motion: rho = {rho} <= l = {l}"
        )));
    }
    let radial = (2.0 * (mode.n as f64 - 1.0) + 1.0) * FRAC_PI_2 + FRAC_PI_4;
    Ok((rho * rho - l * l).sqrt() - l * (l / rho).acos() - radial)
}

/// States per unit energy, `2 pi M R^2 / hbar^2`.
///
/// The source expression is called a "mean level spacing" there, but its
/// dimensions are those of a density; that is what this returns.
pub fn mean_level_density(config: &BilliardConfig) -> f64 {
    2.0 * PI * config.mass * config.radius * config.radius / (config.hbar * config.hbar)
}

/// A `(p, q)` family of approximately degenerate modes around `(n0, l0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub p: u32,
    pub q: u32,
    pub l0: u32,
    pub n0: u32,
    /// `l_j = l0 + j q`, `n_j = n0 - j p`, `j` ascending from `-J` to `J`.
    pub members: Vec<EigenMode>,
    /// `pi p / q`.
    pub beta0: f64,
    pub rho_bar: f64,
    pub config: BilliardConfig,
}

impl Shell {
    /// Builds the shell along the stationary line through `(l0, n0)` without
    /// checking degeneracy.
    pub fn along(
        config: &BilliardConfig,
        p: u32,
        q: u32,
        l0: u32,
        n0: u32,
        half_width: u32,
    ) -> Result<Self> {
        check_winding(p, q)?;
        let jw = half_width as i64;
        if (l0 as i64) - jw * (q as i64) < 0 {
            return Err(Error::Domain(format!(
                "l0 = {l0} too small for half-width {half_width} at q = {q}: negative l"
            )));
        }
        if (n0 as i64) - jw * (p as i64) < 1 {
            return Err(Error::Domain(format!(
                "n0 = {n0} too small for half-width {half_width} at p = {p}: n < 1"
            )));
        }
        let members = (-jw..=jw)
            .map(|j| {
                let l = (l0 as i64 + j * q as i64) as u32;
                let n = (n0 as i64 - j * p as i64) as u32;
                EigenMode::new(config, n, l)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_members(config, p, q, l0, n0, members))
    }

    /// Assembles a shell from explicit members (used for synthetic spectra).
    pub fn from_members(
        config: &BilliardConfig,
        p: u32,
        q: u32,
        l0: u32,
        n0: u32,
        members: Vec<EigenMode>,
    ) -> Self {
        let rho_bar = if members.is_empty() {
            0.0
        } else {
            members.iter().map(|m| m.rho).sum::<f64>() / members.len() as f64
        };
        Self {
            p,
            q,
            l0,
            n0,
            members,
            beta0: PI * p as f64 / q as f64,
            rho_bar,
            config: *config,
        }
    }

    /// Signed shell offset `j = (l - l0) / q` of member `i`.
    pub fn offset(&self, i: usize) -> i64 {
        (self.members[i].l as i64 - self.l0 as i64) / self.q as i64
    }

    /// Index of the central member (`l = l0`), if present.
    pub fn central_index(&self) -> Option<usize> {
        self.members.iter().position(|m| m.l == self.l0)
    }

    /// `max_j |rho_j - rho_bar| / rho_bar`.
    pub fn relative_spread(&self) -> f64 {
        shell_spread(self) / self.rho_bar
    }

    /// Keeps the `count` members closest to `l0`; ties prefer lower `l`.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.members.len() {
            return Err(Error::Domain(format!(
                "member count {count} outside 1..={}",
                self.members.len()
            )));
        }
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by_key(|&i| {
            let j = self.offset(i);
            (j.abs(), j)
        });
        let mut keep: Vec<usize> = order.into_iter().take(count).collect();
        keep.sort_unstable();
        let members = keep.into_iter().map(|i| self.members[i]).collect();
        Ok(Self::from_members(
            &self.config,
            self.p,
            self.q,
            self.l0,
            self.n0,
            members,
        ))
    }
}

/// `max_j |rho_j - rho_bar|`.
pub fn shell_spread(shell: &Shell) -> f64 {
    shell
        .members
        .iter()
        .map(|m| (m.rho - shell.rho_bar).abs())
        .fold(0.0, f64::max)
}

/// Tuning knobs of [`find_shell_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellSearch {
    /// Candidate `l0` values are `l0_hint +- l0_window`.
    pub l0_window: u32,
    /// Candidate `n0` values around the zero closest to `l0 / cos(beta0)`.
    pub n0_window: u32,
    /// Maximum accepted `max_j |rho_j - rho_bar| / rho_bar`.
    pub degeneracy_threshold: f64,
    /// Maximum accepted `|l0 / rho_bar - cos(beta0)|`.
    pub ratio_tolerance: f64,
}

impl Default for ShellSearch {
    fn default() -> Self {
        Self {
            l0_window: 0,
            n0_window: 2,
            degeneracy_threshold: 0.01,
            ratio_tolerance: 0.02,
        }
    }
}

/// [`find_shell_with`] using [`ShellSearch::default`].
pub fn find_shell(
    config: &BilliardConfig,
    p: u32,
    q: u32,
    l0_hint: u32,
    half_width: u32,
) -> Result<Shell> {
    find_shell_with(config, p, q, l0_hint, half_width, &ShellSearch::default())
}

/// Finds the most degenerate `(p, q)` shell centred near `l0_hint`.
///
/// Candidates are scored by relative spread, ties broken by `|l0 - l0_hint|`
/// and then by smaller `(l0, n0)`.
///
/// The diameter family `p/q = 1/2` needs `l0 / rho -> 0`, which no finite
/// candidate with `l >= 0` members reaches; it is rejected as a domain error.
pub fn find_shell_with(
    config: &BilliardConfig,
    p: u32,
    q: u32,
    l0_hint: u32,
    half_width: u32,
    search: &ShellSearch,
) -> Result<Shell> {
    check_winding(p, q)?;
    if half_width == 0 {
        return Err(Error::Domain("shell half-width must be at least 1".into()));
    }
    let cos_beta = (PI * p as f64 / q as f64).cos();
    if cos_beta < 0.05 {
        return Err(Error::Domain(format!(
            "(p, q) = ({p}, {q}) is (near-)diametral: l0 / rho -> 0 has no finite shell"
        )));
    }
    let lo = l0_hint.saturating_sub(search.l0_window).max(half_width * q);
    let hi = l0_hint + search.l0_window;

    let mut best: Option<((f64, u32), Shell)> = None;
    for l0 in lo..=hi {
        let target = l0 as f64 / cos_beta;
        let zeros = match bessel_zeros_upto(l0, (target + 4.0 * PI).min(1024.0)) {
            Ok(z) if !z.is_empty() => z,
            _ => continue,
        };
        let nearest = zeros
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .map(|(i, _)| i as u32 + 1)
            .unwrap();
        let n_lo = nearest
            .saturating_sub(search.n0_window)
            .max(half_width * p + 1);
        for n0 in n_lo..=nearest + search.n0_window {
            let shell = match Shell::along(config, p, q, l0, n0, half_width) {
                Ok(s) => s,
                Err(Error::Range(_)) | Err(Error::Domain(_)) => continue,
                Err(e) => return Err(e),
            };
            if (l0 as f64 / shell.rho_bar - cos_beta).abs() > search.ratio_tolerance {
                continue;
            }
            let spread = shell.relative_spread();
            if spread > search.degeneracy_threshold {
                continue;
            }
            let key = (spread, l0.abs_diff(l0_hint));
            let better = match &best {
                None => true,
                Some((k, _)) => key.0 < k.0 || (key.0 == k.0 && key.1 < k.1),
            };
            if better {
                best = Some((key, shell));
            }
        }
    }
    best.map(|(_, s)| s).ok_or_else(|| {
        Error::NotFound(format!(
            "no ({p}, {q}) shell near l0 = {l0_hint} with relative spread <= {}",
            search.degeneracy_threshold
        ))
    })
}

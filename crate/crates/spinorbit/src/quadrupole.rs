//! Quadrupole magnet element: the spin-orbit coupling unitary
//! U_Q = cos(πr/(2r_c))·𝟙 + i·sin(πr/(2r_c))·(l₊σ̂₊ + l₋σ̂₋),
//! its coefficient expansion over radial modes, and the conversion between
//! physical magnet parameters and the reduced coupling ratio r_c/σ⊥.
//!
//! The quadrupole's own winding is hard-wired at charge −1: the raising term
//! l₊σ̂₊ lifts ℓ by one while flipping spin down, l₋σ̂₋ lowers ℓ by one while
//! flipping spin up. A rotation of the magnet pattern by θ multiplies the
//! raising term by e^{−iθ} and the lowering term by e^{+iθ}.

use num_complex::Complex64;

use crate::basis::{mode_radial, mode_radial_column, ModeIndex, Spin, SpinOrbitState};
use crate::cli::SweepTable;
use crate::specfun::{QuadratureRule, LAGUERRE_N_CAP};
use crate::spp::check_normalized;
use crate::{Result, SpinOrbitError};

/// Fundamental constants entering the spin-flip condition. Overridable only
/// through configuration; call sites must never hard-code these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Neutron gyromagnetic ratio magnitude [rad/(s·T)]. Only the magnitude
    /// enters r_c; the operator phases carry the sign convention.
    pub gamma_n: f64,
    /// Neutron mass [kg].
    pub mass_n: f64,
    /// Reduced Planck constant [J·s].
    pub hbar: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gamma_n: 1.83247171e8,
            mass_n: 1.67492749804e-27,
            hbar: 1.054571817e-34,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        if self.gamma_n <= 0.0 || self.mass_n <= 0.0 || self.hbar <= 0.0 {
            return Err(SpinOrbitError::Parameter(format!(
                "physical constants must be strictly positive (gamma_n = {}, mass_n = {}, hbar = {})",
                self.gamma_n, self.mass_n, self.hbar
            )));
        }
        Ok(())
    }
}

/// Longitudinal velocity v_z = 2πħ/(mλ) of a neutron of wavelength λ [m].
pub fn velocity_from_lambda(lambda: f64, constants: &PhysicalConstants) -> Result<f64> {
    constants.validate()?;
    if lambda <= 0.0 {
        return Err(SpinOrbitError::Parameter(format!(
            "wavelength must be positive (got {lambda})"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * constants.hbar / (constants.mass_n * lambda))
}

/// Spin-flip radius from magnet parameters: r_c = π·v_z/(γ·|∇B|·l_Q),
/// the radius at which transit through the quadrupole rotates the spin by π.
pub fn rc_from_physical(
    gradient: f64,
    length: f64,
    lambda: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if gradient <= 0.0 || length <= 0.0 {
        return Err(SpinOrbitError::Parameter(format!(
            "gradient and length must be positive (gradient = {gradient}, length = {length})"
        )));
    }
    let v_z = velocity_from_lambda(lambda, constants)?;
    Ok(std::f64::consts::PI * v_z / (constants.gamma_n * gradient * length))
}

/// Inverse of [`rc_from_physical`]: the gradient that realizes a given r_c.
pub fn gradient_from_rc(
    r_c: f64,
    length: f64,
    lambda: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if r_c <= 0.0 || length <= 0.0 {
        return Err(SpinOrbitError::Parameter(format!(
            "r_c and length must be positive (r_c = {r_c}, length = {length})"
        )));
    }
    let v_z = velocity_from_lambda(lambda, constants)?;
    Ok(std::f64::consts::PI * v_z / (constants.gamma_n * r_c * length))
}

/// Quadrupole element parameters. The reduced description is
/// (ratio = r_c/σ⊥, rotation); the physical fields are optional provenance
/// and, when present, must satisfy the spin-flip condition
/// γ·|∇B|·r_c·l_Q/v_z = π to relative 1e-12.
#[derive(Debug, Clone)]
pub struct QuadrupoleSpec {
    /// Field gradient |∇B| [T/m].
    pub gradient: Option<f64>,
    /// Magnet length l_Q [m].
    pub length: Option<f64>,
    /// Neutron wavelength λ [m].
    pub lambda: Option<f64>,
    /// Spin-flip radius r_c [m].
    pub r_c: f64,
    /// Coupling strength r_c/σ⊥.
    pub ratio: f64,
    /// Orientation θ of the quadrupole pattern [rad]; 0 for the first magnet.
    pub rotation: f64,
}

impl QuadrupoleSpec {
    /// Reduced parameterization at a given wavepacket size.
    pub fn from_ratio(ratio: f64, sigma_perp: f64, rotation: f64) -> Result<Self> {
        if ratio <= 0.0 || !ratio.is_finite() {
            return Err(SpinOrbitError::Parameter(format!(
                "ratio r_c/sigma_perp must be positive and finite (got {ratio})"
            )));
        }
        if sigma_perp <= 0.0 {
            return Err(SpinOrbitError::Parameter(format!(
                "sigma_perp must be positive (got {sigma_perp})"
            )));
        }
        Ok(Self {
            gradient: None,
            length: None,
            lambda: None,
            r_c: ratio * sigma_perp,
            ratio,
            rotation,
        })
    }

    /// Physical parameterization; derives r_c and the ratio.
    pub fn from_physical(
        gradient: f64,
        length: f64,
        lambda: f64,
        sigma_perp: f64,
        rotation: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        if sigma_perp <= 0.0 {
            return Err(SpinOrbitError::Parameter(format!(
                "sigma_perp must be positive (got {sigma_perp})"
            )));
        }
        let r_c = rc_from_physical(gradient, length, lambda, constants)?;
        Ok(Self {
            gradient: Some(gradient),
            length: Some(length),
            lambda: Some(lambda),
            r_c,
            ratio: r_c / sigma_perp,
            rotation,
        })
    }

    /// Checks the ratio and, when the physical fields are present, the
    /// spin-flip condition γ|∇B|·r_c·l_Q/v_z = π (relative 1e-12).
    pub fn validate(&self, constants: &PhysicalConstants) -> Result<()> {
        if self.ratio <= 0.0 || !self.ratio.is_finite() || self.r_c <= 0.0 {
            return Err(SpinOrbitError::Parameter(format!(
                "quadrupole needs positive r_c and ratio (r_c = {}, ratio = {})",
                self.r_c, self.ratio
            )));
        }
        let physical = [self.gradient, self.length, self.lambda];
        if physical.iter().all(Option::is_none) {
            return Ok(());
        }
        if physical.iter().any(Option::is_none) {
            return Err(SpinOrbitError::Parameter(
                "partial quadrupole physical parameterization: provide all of gradient, length, lambda".into(),
            ));
        }
        let v_z = velocity_from_lambda(self.lambda.unwrap(), constants)?;
        let flip = constants.gamma_n * self.gradient.unwrap() * self.r_c * self.length.unwrap()
            / v_z;
        if (flip - std::f64::consts::PI).abs() > 1e-12 * std::f64::consts::PI {
            return Err(SpinOrbitError::Parameter(format!(
                "spin-flip condition violated: gamma*|grad B|*r_c*l_Q/v_z = {flip}, expected pi"
            )));
        }
        Ok(())
    }
}

/// Radial overlap columns behind the two output branches of an input
/// component (n_i, ℓ_i): the spin-kept branch
/// Ĉ_n = 2π·∫ξ·R_{n,ℓ_i}·R_{n_i,ℓ_i}·cos(bξ) dξ and the spin-flipped branch
/// Ŝ_n = 2π·∫ξ·R_{n,ℓ_flip}·R_{n_i,ℓ_i}·sin(bξ) dξ, with b = π/(2·ratio)
/// the half flip angle per unit ξ. Both are real by construction.
pub(crate) fn branch_overlaps(
    n_i: u32,
    ell_i: i32,
    ell_flip: i32,
    ratio: f64,
    n_max: usize,
    rule: &QuadratureRule,
) -> (Vec<f64>, Vec<f64>) {
    let b = std::f64::consts::PI / (2.0 * ratio);
    let mut kept = vec![0.0; n_max + 1];
    let mut flipped = vec![0.0; n_max + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let r_in = mode_radial(n_i, ell_i, x).expect("quadrature node is a valid radius");
        if r_in == 0.0 {
            continue;
        }
        let scale = 2.0 * std::f64::consts::PI * w * x * r_in;
        let col_kept = mode_radial_column(n_max, ell_i, x);
        let cos_b = scale * (b * x).cos();
        for (a, r) in kept.iter_mut().zip(&col_kept) {
            *a += cos_b * r;
        }
        let col_flip = mode_radial_column(n_max, ell_flip, x);
        let sin_b = scale * (b * x).sin();
        for (a, r) in flipped.iter_mut().zip(&col_flip) {
            *a += sin_b * r;
        }
    }
    (kept, flipped)
}

/// Applies the quadrupole unitary to `input`, expanding each component over
/// radial modes n ≤ n_max.
///
/// A spin-up component (n_i, ℓ_i, ↑) produces Σ_n Ĉ_n·(n, ℓ_i, ↑) plus
/// i·e^{−iθ}·Σ_n Ŝ_n·(n, ℓ_i+1, ↓); a spin-down component mirrors to
/// Σ_n Ĉ_n·(n, ℓ_i, ↓) plus i·e^{+iθ}·Σ_n Ŝ_n·(n, ℓ_i−1, ↑). The azimuthal
/// integral is analytic (the magnet's e^{∓iφ} winding exactly offsets the
/// OAM shift), so no probability leaks outside these two bands.
///
/// The tail estimate grows by the measured truncation residual
/// 1 − Σ(Ĉ² + Ŝ²) per unit input probability.
pub fn quad_apply(
    input: &SpinOrbitState,
    spec: &QuadrupoleSpec,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<SpinOrbitState> {
    if spec.ratio <= 0.0 || !spec.ratio.is_finite() {
        return Err(SpinOrbitError::Parameter(format!(
            "quadrupole ratio must be positive and finite (got {})",
            spec.ratio
        )));
    }
    if n_max > LAGUERRE_N_CAP {
        return Err(SpinOrbitError::Parameter(format!(
            "n_max = {n_max} exceeds the radial cap {LAGUERRE_N_CAP}"
        )));
    }
    check_normalized(input)?;

    let raise_phase = Complex64::i() * Complex64::from_polar(1.0, -spec.rotation);
    let lower_phase = Complex64::i() * Complex64::from_polar(1.0, spec.rotation);
    let mut components = Vec::new();
    let mut tail = input.tail_estimate();

    for (mode, amp) in input.iter() {
        let (ell_flip, flip_spin, flip_phase) = match mode.spin {
            Spin::Up => (mode.ell + 1, Spin::Down, raise_phase),
            Spin::Down => (mode.ell - 1, Spin::Up, lower_phase),
        };
        let (kept, flipped) =
            branch_overlaps(mode.n_r, mode.ell, ell_flip, spec.ratio, n_max, rule);
        let mut branch_norm = 0.0;
        for (n, (&c, &s)) in kept.iter().zip(&flipped).enumerate() {
            branch_norm += c * c + s * s;
            components.push((ModeIndex::new(n as u32, mode.ell, mode.spin), amp * c));
            components.push((
                ModeIndex::new(n as u32, ell_flip, flip_spin),
                amp * flip_phase * s,
            ));
        }
        tail += amp.norm_sqr() * (1.0 - branch_norm).max(0.0);
    }

    Ok(SpinOrbitState::from_components(
        components,
        input.sigma_perp(),
        tail,
    ))
}

/// Sweeps the coupling ratio, tabulating the real branch coefficients
/// Ĉ_n (columns `c_up_n{n}`) and Ŝ_n (columns `c_dn_n{n}`) of a ground-mode
/// (0, 0, ↑) input for each requested n.
pub fn quad_coefficient_sweep(
    ratio_grid: &[f64],
    n_list: &[u32],
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<SweepTable> {
    if ratio_grid.iter().any(|r| *r <= 0.0 || !r.is_finite()) {
        return Err(SpinOrbitError::Parameter(
            "ratio grid must be positive and finite".into(),
        ));
    }
    if n_list.iter().any(|&n| n as usize > n_max) {
        return Err(SpinOrbitError::Parameter(format!(
            "requested n exceeds n_max = {n_max}"
        )));
    }
    let mut columns = vec!["ratio".to_string()];
    for &n in n_list {
        columns.push(format!("c_up_n{n}"));
        columns.push(format!("c_dn_n{n}"));
    }
    let mut table = SweepTable::new(columns);
    table.push_metadata("input_mode", "(0, 0, up)");
    table.push_metadata("n_max", n_max);
    table.push_metadata("quadrature_order", rule.order());

    for &ratio in ratio_grid {
        let (kept, flipped) = branch_overlaps(0, 0, 1, ratio, n_max, rule);
        let mut row = Vec::with_capacity(2 * n_list.len() + 1);
        row.push(ratio);
        for &n in n_list {
            row.push(kept[n as usize]);
            row.push(flipped[n as usize]);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

//! The spin ⊗ Laguerre-Gauss mode space: mode indices, normalized transverse
//! mode functions, sparse state vectors, inner products, and the
//! total-energy formula.
//!
//! Radial profiles are expressed in the dimensionless radius ξ = r/σ⊥ (the
//! convention σ⊥ = 1 inside all integrals); σ⊥ itself is carried as state
//! metadata and only ever enters observables through the ratio r_c/σ⊥.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::specfun::{laguerre, laguerre_column, ln_factorial, QuadratureRule};
use crate::{Result, SpinOrbitError};

/// Amplitudes with |c| below this are pruned from stored states; the removed
/// probability (≤ 1e-28 per amplitude) is folded into `tail_estimate`.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Spin projection along the z quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Spin::Up => write!(f, "up"),
            Spin::Down => write!(f, "dn"),
        }
    }
}

/// Basis label |n_r, ℓ, s⟩. The longitudinal k_z is suppressed (it is inert
/// metadata of the experiment, not of the transverse mode space).
///
/// The derived ordering (n_r, then ℓ, then spin) gives coefficient maps a
/// canonical iteration order, which keeps every serialized sweep
/// deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub n_r: u32,
    pub ell: i32,
    pub spin: Spin,
}

impl ModeIndex {
    pub fn new(n_r: u32, ell: i32, spin: Spin) -> Self {
        Self { n_r, ell, spin }
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_r, self.ell, self.spin)
    }
}

/// Transverse wavepacket geometry: coherence length σ⊥ and the derived
/// oscillator frequency ω⊥ = ħ/(2mσ⊥²) of the mode family.
#[derive(Debug, Clone, Copy)]
pub struct WavepacketGeometry {
    sigma_perp: f64,
    omega_perp: f64,
    hbar: f64,
    mass: f64,
}

impl WavepacketGeometry {
    /// Builds the geometry from σ⊥ [m], ħ [J·s] and the particle mass [kg].
    pub fn new(sigma_perp: f64, hbar: f64, mass: f64) -> Result<Self> {
        if sigma_perp <= 0.0 || hbar <= 0.0 || mass <= 0.0 {
            return Err(SpinOrbitError::Parameter(format!(
                "geometry parameters must be positive (sigma_perp = {sigma_perp}, hbar = {hbar}, mass = {mass})"
            )));
        }
        Ok(Self {
            sigma_perp,
            omega_perp: hbar / (2.0 * mass * sigma_perp * sigma_perp),
            hbar,
            mass,
        })
    }

    pub fn sigma_perp(&self) -> f64 {
        self.sigma_perp
    }

    /// ω⊥ [rad/s].
    pub fn omega_perp(&self) -> f64 {
        self.omega_perp
    }

    /// Inverts the defining relation: σ⊥ = √(ħ/(2mω⊥)). Round-trips with
    /// the constructor to relative 1e-12.
    pub fn sigma_from_omega(&self) -> f64 {
        (self.hbar / (2.0 * self.mass * self.omega_perp)).sqrt()
    }
}

/// Sparse spin-orbit state: a map from [`ModeIndex`] to complex amplitude,
/// plus truncation bookkeeping.
///
/// `captured_probability` is the stored Σ|c|²; `tail_estimate` is an
/// analytic bound on everything an element's truncation dropped. Producing
/// operations document the tolerance to which the two sum to 1.
#[derive(Debug, Clone)]
pub struct SpinOrbitState {
    coeffs: BTreeMap<ModeIndex, Complex64>,
    sigma_perp: f64,
    captured_probability: f64,
    tail_estimate: f64,
}

impl SpinOrbitState {
    /// A single normalized basis mode.
    pub fn basis_state(mode: ModeIndex, sigma_perp: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mode, Complex64::new(1.0, 0.0));
        Self {
            coeffs,
            sigma_perp,
            captured_probability: 1.0,
            tail_estimate: 0.0,
        }
    }

    /// Assembles a state from raw components, pruning amplitudes below
    /// [`PRUNE_THRESHOLD`] (their probability joins `tail_estimate`).
    pub fn from_components(
        components: impl IntoIterator<Item = (ModeIndex, Complex64)>,
        sigma_perp: f64,
        tail_estimate: f64,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        let mut pruned = 0.0;
        for (mode, amp) in components {
            if amp.norm() < PRUNE_THRESHOLD {
                pruned += amp.norm_sqr();
                continue;
            }
            let entry = coeffs.entry(mode).or_insert(Complex64::new(0.0, 0.0));
            *entry += amp;
        }
        // A merge can cancel below threshold; sweep once more.
        coeffs.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        let captured_probability = coeffs.values().map(|c| c.norm_sqr()).sum();
        Self {
            coeffs,
            sigma_perp,
            captured_probability,
            tail_estimate: tail_estimate + pruned,
        }
    }

    /// Amplitude of `mode` (zero when absent).
    pub fn coeff(&self, mode: &ModeIndex) -> Complex64 {
        self.coeffs
            .get(mode)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates stored (mode, amplitude) pairs in canonical mode order.
    pub fn iter(&self) -> impl Iterator<Item = (&ModeIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sigma_perp(&self) -> f64 {
        self.sigma_perp
    }

    /// Σ|c|² over stored amplitudes as of the last refresh.
    pub fn captured_probability(&self) -> f64 {
        self.captured_probability
    }

    /// Analytic bound on the probability omitted by truncation and pruning.
    pub fn tail_estimate(&self) -> f64 {
        self.tail_estimate
    }

    /// Σ|c|² without refreshing the stored bookkeeping.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }
}

/// Normalized radial profile of the Laguerre-Gauss mode (σ⊥-scaled):
/// R_{n,ℓ}(ξ) = √(n!/(π·(n+|ℓ|)!)) · ξ^{|ℓ|} · e^{-ξ²/2} · L_n^{|ℓ|}(ξ²).
///
/// Together with the azimuthal factor e^{iℓφ} this satisfies
/// ∫|R|² ξ dξ ∫dφ = 2π ∫ R² ξ dξ = 1. The 1/σ⊥ dimensional prefactor is
/// carried symbolically and cancels in every dimensionless output.
pub fn mode_radial(n_r: u32, ell: i32, xi: f64) -> Result<f64> {
    if xi < 0.0 || !xi.is_finite() {
        return Err(SpinOrbitError::Parameter(format!(
            "mode_radial radius must be finite and nonnegative (got {xi})"
        )));
    }
    let al = ell.unsigned_abs() as usize;
    let n = n_r as usize;
    let lag = laguerre(n, al as f64, xi * xi)?;
    let ln_norm = 0.5
        * (ln_factorial(n) - std::f64::consts::PI.ln() - ln_factorial(n + al));
    Ok(ln_norm.exp() * xi.powi(al as i32) * (-xi * xi / 2.0).exp() * lag)
}

/// Column of radial profiles R_{0..n_max, ℓ}(ξ) sharing one Laguerre
/// recurrence pass; the workhorse behind all overlap integrals.
pub(crate) fn mode_radial_column(n_max: usize, ell: i32, xi: f64) -> Vec<f64> {
    let al = ell.unsigned_abs() as usize;
    let lag = laguerre_column(n_max, al as f64, xi * xi);
    let envelope = xi.powi(al as i32) * (-xi * xi / 2.0).exp();
    let ln_pi = std::f64::consts::PI.ln();
    lag.iter()
        .enumerate()
        .map(|(n, l)| {
            let ln_norm = 0.5 * (ln_factorial(n) - ln_pi - ln_factorial(n + al));
            ln_norm.exp() * envelope * l
        })
        .collect()
}

/// Full-mode inner product ⟨a|b⟩ = 2π·δ_{ℓ_a ℓ_b}·δ_{s_a s_b}·∫ξ R_a R_b dξ.
/// Spin or ℓ mismatch short-circuits to exactly zero; the radial integral is
/// evaluated with `rule`.
pub fn inner_product(a: &ModeIndex, b: &ModeIndex, rule: &QuadratureRule) -> Complex64 {
    if a.spin != b.spin || a.ell != b.ell {
        return Complex64::new(0.0, 0.0);
    }
    let radial = rule.integrate(|xi| {
        xi * mode_radial(a.n_r, a.ell, xi).expect("validated radius")
            * mode_radial(b.n_r, b.ell, xi).expect("validated radius")
    });
    Complex64::new(2.0 * std::f64::consts::PI * radial, 0.0)
}

/// Total energy E = ħω⊥(2n_r + |ℓ| + 1) + ħ²k_z²/(2m) − B·μ, in joules.
pub fn total_energy(
    n_r: u32,
    ell: i32,
    k_z: f64,
    b_dot_mu: f64,
    geometry: &WavepacketGeometry,
) -> f64 {
    let transverse = geometry.hbar
        * geometry.omega_perp
        * (2.0 * n_r as f64 + ell.unsigned_abs() as f64 + 1.0);
    let kinetic = geometry.hbar * geometry.hbar * k_z * k_z / (2.0 * geometry.mass);
    transverse + kinetic - b_dot_mu
}

/// Σ|c|² over the stored coefficients; refreshes `captured_probability`.
pub fn state_norm(state: &mut SpinOrbitState) -> f64 {
    let norm = state.norm_sqr();
    state.captured_probability = norm;
    norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::radial_quadrature;
    use approx::assert_relative_eq;

    /// 2018 CODATA values, matching the quadrupole module defaults.
    const HBAR: f64 = 1.054571817e-34;
    const MASS_N: f64 = 1.67492749804e-27;

    #[test]
    fn ground_mode_at_origin() {
        let got = mode_radial(0, 0, 0.0).unwrap();
        assert_relative_eq!(got, 1.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(got, 0.5641895835477563, max_relative = 1e-12);
    }

    #[test]
    fn first_oam_mode_value() {
        // R_{0,1}(1) = (1/√π)·1·e^{-1/2}·L_0^1(1) ≈ 0.3422.
        let got = mode_radial(0, 1, 1.0).unwrap();
        let want = (1.0 / std::f64::consts::PI.sqrt()) * (-0.5f64).exp();
        assert_relative_eq!(got, want, max_relative = 1e-15);
        assert_relative_eq!(got, 0.3422, max_relative = 1e-4);
        // ξ^{|ℓ|} kills every |ℓ| > 0 mode at the origin.
        assert_eq!(mode_radial(0, 1, 0.0).unwrap(), 0.0);
        assert_eq!(mode_radial(2, -3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn mode_radial_rejects_bad_radius() {
        assert!(mode_radial(0, 0, -1.0).is_err());
        assert!(mode_radial(0, 0, f64::NAN).is_err());
    }

    #[test]
    fn column_matches_scalar_evaluation() {
        for &xi in &[0.0, 0.37, 1.9, 6.5] {
            let col = mode_radial_column(25, 2, xi);
            for (n, &v) in col.iter().enumerate() {
                assert_relative_eq!(
                    v,
                    mode_radial(n as u32, 2, xi).unwrap(),
                    max_relative = 1e-13,
                    epsilon = 1e-300
                );
            }
        }
    }

    #[test]
    fn inner_product_orthonormality_spot_checks() {
        let rule = radial_quadrature(128).unwrap();
        let up = Spin::Up;
        let ip = |a: ModeIndex, b: ModeIndex| inner_product(&a, &b, &rule).re;
        assert_relative_eq!(
            ip(ModeIndex::new(0, 0, up), ModeIndex::new(0, 0, up)),
            1.0,
            epsilon = 1e-10
        );
        // ℓ mismatch short-circuits to exactly zero.
        assert_eq!(
            inner_product(&ModeIndex::new(0, 1, up), &ModeIndex::new(0, 0, up), &rule),
            num_complex::Complex64::new(0.0, 0.0)
        );
        // Spin mismatch likewise.
        assert_eq!(
            inner_product(
                &ModeIndex::new(0, 0, up),
                &ModeIndex::new(0, 0, Spin::Down),
                &rule
            ),
            num_complex::Complex64::new(0.0, 0.0)
        );
        // Same ℓ, different n_r: quadrature-level zero.
        assert!(ip(ModeIndex::new(2, 1, up), ModeIndex::new(3, 1, up)).abs() < 1e-10);
        assert!(ip(ModeIndex::new(1, 0, up), ModeIndex::new(0, 0, up)).abs() < 1e-10);
    }

    #[test]
    fn geometry_round_trip_and_positivity() {
        let geom = WavepacketGeometry::new(100e-9, HBAR, MASS_N).unwrap();
        assert_relative_eq!(geom.sigma_from_omega(), 100e-9, max_relative = 1e-12);
        assert!(WavepacketGeometry::new(-1.0, HBAR, MASS_N).is_err());
        assert!(WavepacketGeometry::new(100e-9, 0.0, MASS_N).is_err());
    }

    #[test]
    fn total_energy_oscillator_ladder() {
        let geom = WavepacketGeometry::new(100e-9, HBAR, MASS_N).unwrap();
        let hw = HBAR * geom.omega_perp();
        assert_relative_eq!(total_energy(0, 0, 0.0, 0.0, &geom), hw, max_relative = 1e-15);
        // 2·1 + |−2| + 1 = 5 quanta.
        assert_relative_eq!(
            total_energy(1, -2, 0.0, 0.0, &geom),
            5.0 * hw,
            max_relative = 1e-15
        );
        // The Zeeman term enters with a minus sign.
        assert_relative_eq!(
            total_energy(0, 0, 0.0, 1e-25, &geom),
            hw - 1e-25,
            max_relative = 1e-12
        );
    }

    #[test]
    fn total_energy_kinetic_part() {
        let geom = WavepacketGeometry::new(100e-9, HBAR, MASS_N).unwrap();
        let lambda = 0.271e-9;
        let k_z = 2.0 * std::f64::consts::PI / lambda;
        let e_kinetic = total_energy(0, 0, k_z, 0.0, &geom) - total_energy(0, 0, 0.0, 0.0, &geom);
        let mev = e_kinetic / 1.602176634e-19 * 1e3;
        // Exact-constants value, frozen from the CODATA numbers above.
        assert_relative_eq!(mev, 11.1387658471, max_relative = 1e-9);
        // The 4-digit survey formula E[meV] = 81.81/λ[Å]² agrees to ~1e-4.
        assert_relative_eq!(mev, 81.81 / (2.71 * 2.71), max_relative = 1e-3);
    }

    #[test]
    fn state_construction_prunes_and_books_tail() {
        let up00 = ModeIndex::new(0, 0, Spin::Up);
        let dn01 = ModeIndex::new(0, 1, Spin::Down);
        let tiny = ModeIndex::new(5, 1, Spin::Down);
        let state = SpinOrbitState::from_components(
            [
                (up00, Complex64::new(0.6, 0.0)),
                (dn01, Complex64::new(0.0, 0.8)),
                (tiny, Complex64::new(1e-15, 0.0)),
            ],
            100e-9,
            1e-8,
        );
        assert_eq!(state.len(), 2);
        assert_relative_eq!(state.captured_probability(), 1.0, epsilon = 1e-12);
        // Pruned probability (1e-30) joined the declared tail.
        assert!(state.tail_estimate() >= 1e-8);
        assert!(state.tail_estimate() < 1e-8 + 1e-12);
        assert_eq!(state.coeff(&tiny), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn state_norm_refreshes_captured_probability() {
        let mode = ModeIndex::new(0, 0, Spin::Up);
        let mut state = SpinOrbitState::basis_state(mode, 100e-9);
        assert_relative_eq!(state_norm(&mut state), 1.0, epsilon = 1e-15);
        let mut superpos = SpinOrbitState::from_components(
            [
                (ModeIndex::new(0, 0, Spin::Up), Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0)),
                (ModeIndex::new(0, 1, Spin::Down), Complex64::new(0.0, 1.0 / 2.0_f64.sqrt())),
            ],
            100e-9,
            0.0,
        );
        assert_relative_eq!(state_norm(&mut superpos), 1.0, epsilon = 1e-15);
        assert_relative_eq!(superpos.captured_probability(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn mode_ordering_is_canonical() {
        let a = ModeIndex::new(0, -1, Spin::Up);
        let b = ModeIndex::new(0, 1, Spin::Up);
        let c = ModeIndex::new(1, -5, Spin::Down);
        assert!(a < b && b < c);
        assert!(ModeIndex::new(0, 0, Spin::Up) < ModeIndex::new(0, 0, Spin::Down));
    }
}

//! Concurrence machinery: pure-state concurrence via the reduced spin
//! density matrix, the Wootters mixed-state concurrence, radially filtered
//! two-branch states, and the radially traced spin-orbit density matrix.
//!
//! Basis convention: the 4×4 computational basis is the ordered label list
//! {(ℓ_i, ↑), (ℓ_i, ↓), (ℓ_i+1, ↑), (ℓ_i+1, ↓)}. The Wootters construction
//! conjugates in exactly this basis, so the ordering is part of the
//! contract, not an implementation detail.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{ModeIndex, Spin, SpinOrbitState};
use crate::cli::SweepTable;
use crate::quadrupole::{quad_apply, QuadrupoleSpec};
use crate::specfun::QuadratureRule;
use crate::{Result, SpinOrbitError};

/// Eigenvalues of ρ·(σ_y⊗σ_y)·ρ*·(σ_y⊗σ_y) below −NEGATIVE_CLAMP are a hard
/// error; residues in (−NEGATIVE_CLAMP, 0) are round-off and clamp to zero.
const NEGATIVE_CLAMP: f64 = 1e-10;

/// Positive eigenvalues below POSITIVE_FLOOR·max(1, ‖R‖_F) are round-off
/// debris on analytically zero eigenvalues (the real-Schur route leaves up
/// to ~1e-12 there); they are floored to zero before the square root, which
/// would otherwise amplify them into ~1e-6-scale λ contributions.
const POSITIVE_FLOOR: f64 = 1e-11;

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

/// Eigen-decomposition of a small complex Hermitian matrix by cyclic Jacobi
/// rotations: returns (eigenvalues ascending, unitary V with eigenvector
/// columns), so that m = V·diag(λ)·V†. Used for density-matrix validation
/// and the matrix square root of the Hermitian concurrence route; nothing
/// performance-critical (matrices here are at most 4×4).
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(SpinOrbitError::Parameter(
            "hermitian_eigen requires a square matrix".into(),
        ));
    }
    let scale = m.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
    let hermiticity = (m - m.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    if hermiticity > 1e-10 * scale {
        return Err(SpinOrbitError::Numerical(format!(
            "hermitian_eigen input deviates from Hermitian by {hermiticity}"
        )));
    }

    let mut a = m.clone();
    let mut v: DMatrix<Complex64> = DMatrix::identity(n, n);
    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                // Unitary rotation in the (p, q) plane annihilating a[p][q]:
                // tan(2t) = 2|a_pq|/(a_pp − a_qq), carrier phase arg(a_pq).
                let phase = apq / apq.norm();
                let t = 0.5 * (2.0 * apq.norm()).atan2(a[(p, p)].re - a[(q, q)].re);
                let (s, c) = t.sin_cos();
                let mut j: DMatrix<Complex64> = DMatrix::identity(n, n);
                j[(p, p)] = Complex64::new(c, 0.0);
                j[(q, q)] = Complex64::new(c, 0.0);
                j[(p, q)] = -phase * s;
                j[(q, p)] = phase.conj() * s;
                a = j.adjoint() * a * &j;
                v *= j;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok((eigenvalues, vectors))
}

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Density matrix over an ordered list of (ℓ, spin) labels. Construction
/// validates Hermiticity (1e-12), unit trace (1e-10), and positive
/// semidefiniteness (eigenvalues ≥ −1e-10).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis_labels: Vec<(i32, Spin)>,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(basis_labels: Vec<(i32, Spin)>, entries: DMatrix<Complex64>) -> Result<Self> {
        let n = basis_labels.len();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(SpinOrbitError::Parameter(format!(
                "density matrix shape {}x{} does not match {} labels",
                entries.nrows(),
                entries.ncols(),
                n
            )));
        }
        let hermiticity = (&entries - entries.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        if hermiticity > 1e-12 {
            return Err(SpinOrbitError::Numerical(format!(
                "density matrix deviates from Hermitian by {hermiticity}"
            )));
        }
        let trace: Complex64 = entries.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-12 {
            return Err(SpinOrbitError::Numerical(format!(
                "density matrix trace {trace} is not 1"
            )));
        }
        let (eigenvalues, _) = hermitian_eigen(&entries)?;
        if let Some(&min) = eigenvalues.first() {
            if min < -NEGATIVE_CLAMP {
                return Err(SpinOrbitError::Numerical(format!(
                    "density matrix has a negative eigenvalue {min}"
                )));
            }
        }
        Ok(Self {
            basis_labels,
            entries,
        })
    }

    pub fn basis_labels(&self) -> &[(i32, Spin)] {
        &self.basis_labels
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    /// Tr ρ² (real for a Hermitian matrix).
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn label_index(&self, label: (i32, Spin)) -> Option<usize> {
        self.basis_labels.iter().position(|&l| l == label)
    }
}

// ---------------------------------------------------------------------------
// Pure-state concurrence
// ---------------------------------------------------------------------------

/// Concurrence of a normalized pure state supported on a 2×2
/// (orbital ⊗ spin) subspace: traces out the orbital label to the reduced
/// spin matrix ρ_S and returns √(2(1 − Tr ρ_S²)). For the canonical
/// two-branch form this equals 2·|amp_up·amp_down|.
pub fn concurrence_pure(state: &SpinOrbitState) -> Result<f64> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(SpinOrbitError::Parameter(format!(
            "concurrence_pure needs a normalized state (got norm² = {norm})"
        )));
    }
    let mut orbitals: Vec<(u32, i32)> = Vec::new();
    for (mode, _) in state.iter() {
        let orb = (mode.n_r, mode.ell);
        if !orbitals.contains(&orb) {
            orbitals.push(orb);
        }
    }
    if orbitals.len() > 2 {
        return Err(SpinOrbitError::Parameter(format!(
            "concurrence_pure needs a 2x2 subspace, found {} orbital labels",
            orbitals.len()
        )));
    }
    // Amplitude matrix M[orbital][spin]; ρ_S = Σ_orb M_o† ⊗ M_o.
    let amp = |orb: (u32, i32), spin: Spin| state.coeff(&ModeIndex::new(orb.0, orb.1, spin));
    let mut rho_s = [[Complex64::new(0.0, 0.0); 2]; 2];
    for &orb in &orbitals {
        let row = [amp(orb, Spin::Up), amp(orb, Spin::Down)];
        for s in 0..2 {
            for t in 0..2 {
                rho_s[s][t] += row[s] * row[t].conj();
            }
        }
    }
    let purity: f64 = rho_s.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>() / (norm * norm);
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt().min(1.0))
}

// ---------------------------------------------------------------------------
// Wootters mixed-state concurrence
// ---------------------------------------------------------------------------

/// σ_y ⊗ σ_y in the fixed product-basis ordering: the real anti-diagonal
/// matrix with entries (−1, +1, +1, −1) top-right to bottom-left.
fn sigma_y_sigma_y() -> DMatrix<Complex64> {
    let mut y = DMatrix::zeros(4, 4);
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y
}

/// Eigenvalues of the (non-Hermitian) 4×4 product R = ρ·Y·ρ*·Y, computed
/// through the real 8×8 embedding [[Re R, −Im R], [Im R, Re R]], whose
/// spectrum is eig(R) ∪ conj(eig(R)). The eight values are sorted, collapsed
/// in adjacent pairs, and checked for the ≤1e-10 imaginary residue the
/// analytically-real spectrum allows.
fn spin_flip_eigenvalues(rho: &DMatrix<Complex64>) -> Result<[f64; 4]> {
    let y = sigma_y_sigma_y();
    let rho_conj = rho.map(|c| c.conj());
    let r = rho * &y * rho_conj * &y;
    let scale = r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);

    let mut embedded = DMatrix::<f64>::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            embedded[(i, j)] = r[(i, j)].re;
            embedded[(i, j + 4)] = -r[(i, j)].im;
            embedded[(i + 4, j)] = r[(i, j)].im;
            embedded[(i + 4, j + 4)] = r[(i, j)].re;
        }
    }
    let mut eigenvalues: Vec<num_complex::Complex<f64>> =
        embedded.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let mut collapsed = [0.0f64; 4];
    for k in 0..4 {
        let (a, b) = (eigenvalues[2 * k], eigenvalues[2 * k + 1]);
        if (a - b).norm() > 1e-9 * scale {
            return Err(SpinOrbitError::Numerical(format!(
                "spin-flip spectrum pairs fail to collapse: {a} vs {b}"
            )));
        }
        let mean = (a + b) / 2.0;
        if mean.im.abs() > 1e-10 * scale {
            return Err(SpinOrbitError::Numerical(format!(
                "spin-flip eigenvalue has imaginary residue {}",
                mean.im
            )));
        }
        collapsed[k] = mean.re;
    }

    for value in &mut collapsed {
        if *value < -NEGATIVE_CLAMP * scale {
            return Err(SpinOrbitError::Numerical(format!(
                "spin-flip eigenvalue {value} below the negative clamp"
            )));
        }
        if *value < POSITIVE_FLOOR * scale {
            *value = 0.0;
        }
    }
    Ok(collapsed)
}

/// Wootters concurrence of a two-qubit density matrix over the pinned label
/// order {(ℓ_i,↑), (ℓ_i,↓), (ℓ_i+1,↑), (ℓ_i+1,↓)}:
/// C = max(0, λ₁ − λ₂ − λ₃ − λ₄) with λ_i the descending square roots of the
/// eigenvalues of ρ·(σ_y⊗σ_y)·ρ*·(σ_y⊗σ_y).
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(SpinOrbitError::Parameter(format!(
            "concurrence_mixed needs a 4x4 matrix, got {}x{}",
            rho.dim(),
            rho.dim()
        )));
    }
    let mut lambdas: Vec<f64> = spin_flip_eigenvalues(rho.entries())?
        .iter()
        .map(|&v| v.sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Hermitian-chain cross-check of [`concurrence_mixed`]: λ_i are the
/// eigenvalue square roots of the Hermitian product √ρ·Y·ρ*·Y·√ρ, which has
/// the same spectrum as ρ·Y·ρ*·Y. Mathematically equivalent to the
/// production route; kept as an independent numerical path.
pub fn concurrence_mixed_hermitian(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(SpinOrbitError::Parameter(
            "concurrence_mixed_hermitian needs a 4x4 matrix".into(),
        ));
    }
    let (eigenvalues, vectors) = hermitian_eigen(rho.entries())?;
    let mut sqrt_diag: DMatrix<Complex64> = DMatrix::zeros(4, 4);
    for (i, &lambda) in eigenvalues.iter().enumerate() {
        sqrt_diag[(i, i)] = Complex64::new(lambda.max(0.0).sqrt(), 0.0);
    }
    let sqrt_rho = &vectors * sqrt_diag * vectors.adjoint();
    let y = sigma_y_sigma_y();
    let rho_conj = rho.entries().map(|c| c.conj());
    let m = &sqrt_rho * &y * rho_conj * &y * &sqrt_rho;
    let scale = m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let (mut mu, _) = hermitian_eigen(&m)?;
    for value in &mut mu {
        if *value < -NEGATIVE_CLAMP * scale {
            return Err(SpinOrbitError::Numerical(format!(
                "Hermitian spin-flip eigenvalue {value} below the negative clamp"
            )));
        }
        if *value < POSITIVE_FLOOR * scale {
            *value = 0.0;
        }
    }
    let mut lambdas: Vec<f64> = mu.iter().map(|&v| v.sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Radially traced density matrix
// ---------------------------------------------------------------------------

/// Splits a two-branch state (a quadrupole output) into its band
/// coefficients: returns (ℓ_i, a, d) with a_n the (n, ℓ_i, ↑) amplitudes and
/// d_n the (n, ℓ_i+1, ↓) amplitudes, dense in n up to the highest occupied
/// mode.
fn two_branch_coefficients(state: &SpinOrbitState) -> Result<(i32, Vec<Complex64>, Vec<Complex64>)> {
    let mut up_band: Option<i32> = None;
    let mut down_band: Option<i32> = None;
    let mut n_top = 0;
    for (mode, _) in state.iter() {
        let band = match mode.spin {
            Spin::Up => &mut up_band,
            Spin::Down => &mut down_band,
        };
        match band {
            None => *band = Some(mode.ell),
            Some(ell) if *ell == mode.ell => {}
            Some(ell) => {
                return Err(SpinOrbitError::Parameter(format!(
                    "state is not two-branch: {} band holds both ℓ = {ell} and ℓ = {}",
                    mode.spin, mode.ell
                )));
            }
        }
        n_top = n_top.max(mode.n_r);
    }
    let ell_i = match (up_band, down_band) {
        (Some(up), Some(down)) => {
            if down != up + 1 {
                return Err(SpinOrbitError::Parameter(format!(
                    "state is not two-branch: bands ℓ = {up} (up) and ℓ = {down} (down) are not adjacent"
                )));
            }
            up
        }
        (Some(up), None) => up,
        (None, Some(down)) => down - 1,
        (None, None) => {
            return Err(SpinOrbitError::Parameter("state has no amplitudes".into()));
        }
    };
    let size = n_top as usize + 1;
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    let mut d = vec![Complex64::new(0.0, 0.0); size];
    for n in 0..size {
        a[n] = state.coeff(&ModeIndex::new(n as u32, ell_i, Spin::Up));
        d[n] = state.coeff(&ModeIndex::new(n as u32, ell_i + 1, Spin::Down));
    }
    Ok((ell_i, a, d))
}

/// Traces the radial quantum number out of a two-branch state, assembling
/// the 4×4 spin-orbit density matrix over
/// {(ℓ_i,↑), (ℓ_i,↓), (ℓ_i+1,↑), (ℓ_i+1,↓)}:
/// ρ = Σ_n [|a_n|²·|ℓ_i↑⟩⟨ℓ_i↑| + a_n d_n*·|ℓ_i↑⟩⟨ℓ_i+1↓| + h.c.
///          + |d_n|²·|ℓ_i+1↓⟩⟨ℓ_i+1↓|],
/// renormalized by its trace (the truncated expansion carries slightly less
/// than unit probability).
pub fn rho_traced(quad_output: &SpinOrbitState) -> Result<DensityMatrix> {
    let (ell_i, a, d) = two_branch_coefficients(quad_output)?;
    let p_up: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let p_down: f64 = d.iter().map(|c| c.norm_sqr()).sum();
    let coherence: Complex64 = a.iter().zip(&d).map(|(an, dn)| an * dn.conj()).sum();
    let trace = p_up + p_down;
    if trace < 1e-12 {
        return Err(SpinOrbitError::Parameter(
            "state carries no probability in the two bands".into(),
        ));
    }
    let mut entries: DMatrix<Complex64> = DMatrix::zeros(4, 4);
    entries[(0, 0)] = Complex64::new(p_up / trace, 0.0);
    entries[(3, 3)] = Complex64::new(p_down / trace, 0.0);
    entries[(0, 3)] = coherence / trace;
    entries[(3, 0)] = coherence.conj() / trace;
    DensityMatrix::new(
        vec![
            (ell_i, Spin::Up),
            (ell_i, Spin::Down),
            (ell_i + 1, Spin::Up),
            (ell_i + 1, Spin::Down),
        ],
        entries,
    )
}

/// Closed-form concurrence for the X-shaped ρ of [`rho_traced`]: with the
/// complementary diagonal pair empty, C = 2·|ρ_{(ℓ_i,↑),(ℓ_i+1,↓)}|.
/// Errors when the matrix carries off-X support above 1e-12.
pub fn x_state_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(SpinOrbitError::Parameter(
            "x_state_concurrence needs a 4x4 matrix".into(),
        ));
    }
    let allowed = [(0usize, 0usize), (3, 3), (0, 3), (3, 0)];
    for i in 0..4 {
        for j in 0..4 {
            if allowed.contains(&(i, j)) {
                continue;
            }
            let magnitude = rho.entries()[(i, j)].norm();
            if magnitude > 1e-12 {
                return Err(SpinOrbitError::Parameter(format!(
                    "off-X support at ({i}, {j}): |entry| = {magnitude}"
                )));
            }
        }
    }
    Ok((2.0 * rho.entries()[(0, 3)].norm()).min(1.0))
}

// ---------------------------------------------------------------------------
// Radial filtering
// ---------------------------------------------------------------------------

/// Two-branch pure state obtained by post-selecting the radial quantum
/// number η: amplitudes (C_{η,ℓ_i,↑}, C_{η,ℓ_i+1,↓})/√p_η with
/// p_η = C_{η,ℓ_i,↑}² + C_{η,ℓ_i+1,↓}² the selection probability.
#[derive(Debug, Clone, Copy)]
pub struct FilteredState {
    pub eta: u32,
    pub amp_up: f64,
    pub amp_down: f64,
    pub p_eta: f64,
    /// Set when p_η vanishes and no renormalized state exists; the
    /// concurrence is reported as 0 instead of dividing by zero.
    pub degenerate: bool,
}

impl FilteredState {
    pub fn concurrence(&self) -> f64 {
        if self.degenerate {
            0.0
        } else {
            (2.0 * (self.amp_up * self.amp_down).abs()).min(1.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degenerate {
            return Ok(());
        }
        let norm = self.amp_up * self.amp_up + self.amp_down * self.amp_down;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(SpinOrbitError::Numerical(format!(
                "filtered state norm² = {norm}"
            )));
        }
        Ok(())
    }
}

/// Builds the η-filtered state from the raw (real) branch coefficients.
pub fn filtered_state(c_up: f64, c_down: f64, eta: u32) -> FilteredState {
    let p_eta = c_up * c_up + c_down * c_down;
    if p_eta < 1e-30 {
        return FilteredState {
            eta,
            amp_up: 0.0,
            amp_down: 0.0,
            p_eta: 0.0,
            degenerate: true,
        };
    }
    let norm = p_eta.sqrt();
    FilteredState {
        eta,
        amp_up: c_up / norm,
        amp_down: c_down / norm,
        p_eta,
        degenerate: false,
    }
}

// ---------------------------------------------------------------------------
// Concurrence sweep
// ---------------------------------------------------------------------------

/// Result of [`concurrence_sweep`]: the tabulated sweep plus the located
/// maximum of the traced concurrence on the grid.
#[derive(Debug, Clone)]
pub struct ConcurrenceSweep {
    pub table: SweepTable,
    pub argmax_ratio: f64,
    pub max_traced: f64,
}

/// Sweeps the coupling ratio: per grid point, applies the quadrupole to the
/// ground (0, 0, ↑) mode, tabulates 𝒞(ψ_η) and p_η for each requested η and
/// the traced concurrence 𝒞(ρ_SO), and locates the grid argmax of the
/// latter. Columns: `ratio`, `conc_eta{η}`…, `p_eta{η}`…, `conc_traced`.
pub fn concurrence_sweep(
    ratio_grid: &[f64],
    etas: &[u32],
    n_max: usize,
    sigma_perp: f64,
    rule: &QuadratureRule,
) -> Result<ConcurrenceSweep> {
    if ratio_grid.is_empty() {
        return Err(SpinOrbitError::Parameter("empty ratio grid".into()));
    }
    if ratio_grid.iter().any(|r| *r <= 0.0 || !r.is_finite()) {
        return Err(SpinOrbitError::Parameter(
            "ratio grid must be positive and finite".into(),
        ));
    }
    let mut columns = vec!["ratio".to_string()];
    for &eta in etas {
        columns.push(format!("conc_eta{eta}"));
    }
    for &eta in etas {
        columns.push(format!("p_eta{eta}"));
    }
    columns.push("conc_traced".to_string());
    let mut table = SweepTable::new(columns);
    table.push_metadata("input_mode", "(0, 0, up)");
    table.push_metadata("n_max", n_max);
    table.push_metadata("quadrature_order", rule.order());
    table.push_metadata("rotation", 0.0);

    let input = SpinOrbitState::basis_state(ModeIndex::new(0, 0, Spin::Up), sigma_perp);
    let mut argmax_ratio = ratio_grid[0];
    let mut max_traced = f64::NEG_INFINITY;
    for &ratio in ratio_grid {
        let spec = QuadrupoleSpec::from_ratio(ratio, sigma_perp, 0.0)?;
        let state = quad_apply(&input, &spec, n_max, rule)?;
        let (_, a, d) = two_branch_coefficients(&state)?;
        // First-quadrupole orientation θ = 0: the kept branch is real and
        // the flipped branch carries exactly the i factor, so the real
        // coefficient families are the real and imaginary parts.
        let mut row = Vec::with_capacity(2 * etas.len() + 2);
        row.push(ratio);
        let mut probabilities = Vec::with_capacity(etas.len());
        for &eta in etas {
            let c_up = a.get(eta as usize).map_or(0.0, |c| c.re);
            let c_down = d.get(eta as usize).map_or(0.0, |c| c.im);
            let filtered = filtered_state(c_up, c_down, eta);
            row.push(filtered.concurrence());
            probabilities.push(filtered.p_eta);
        }
        row.extend(probabilities);
        let traced = concurrence_mixed(&rho_traced(&state)?)?;
        row.push(traced);
        table.push_row(row)?;
        if traced > max_traced {
            max_traced = traced;
            argmax_ratio = ratio;
        }
    }
    Ok(ConcurrenceSweep {
        table,
        argmax_ratio,
        max_traced,
    })
}

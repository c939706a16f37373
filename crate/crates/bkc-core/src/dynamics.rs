//! Damped quadrature dynamics of the lattice.
//!
//! The coefficient matrix of the Heisenberg-Langevin equations for the
//! quadrature expectation values `v = (x_1..x_N, p_1..p_N)` is real for any
//! link phases; its eigenvalues come in pairs closed under `E -> -E*` once
//! converted to complex energies `E = i lambda`. Stable modes have
//! `Im E <= 0`.
//!
//! For the uniform chain the spectra have closed forms:
//!
//! * open boundary: `E_n = sqrt(t^2 - D^2) cos k_n - i kappa/2`,
//!   `k_n = n pi/(N+1)` -- independent of the hopping phase;
//! * periodic boundary: `E = t sin(pt) sin k ± i sqrt(D^2 - t^2 cos^2 pt) cos k
//!   - i kappa/2` over the ring momenta `k = 2 pi n / N`.
//!
//! The periodic curve winds around `E = -i kappa/2` exactly when
//! `|cos pt| < D/t`, the topologically nontrivial regime.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::lattice::{Boundary, LatticeSpec};

/// Real coefficient matrix of the damped quadrature equations of motion.
#[derive(Debug, Clone)]
pub struct DynamicalMatrix {
    n_sites: usize,
    entries: DMatrix<f64>,
    boundary: Boundary,
}

/// Ordering of the quadrature basis underlying [`DynamicalMatrix`].
pub const QUADRATURE_BASIS: &str = "x_1..x_N, p_1..p_N";

impl DynamicalMatrix {
    /// Assemble the dynamical matrix of a lattice.
    ///
    /// The complex mode-basis coefficient matrix is built first and then
    /// conjugated to the quadrature basis; realness of the result is asserted
    /// to 1e-12 rather than assumed.
    pub fn new(spec: &LatticeSpec) -> Result<Self> {
        let n = spec.n_sites();
        let mut a = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        let half_i = Complex64::new(0.0, 0.5);
        for (j, site) in spec.sites().iter().enumerate() {
            let diag = Complex64::new(-site.loss() / 2.0, -site.detuning());
            a[(j, j)] = diag;
            a[(n + j, n + j)] = diag.conj();
        }
        for link in spec.links() {
            let (u, v) = link.endpoints();
            for (m, o) in [(u, v), (v, u)] {
                // d a_m/dt gains -(i/2) t e^{i pt_mo} a_o - (i/2) D e^{-i pd} a_o^t
                let hop = -half_i * link.hop_coeff_from(m);
                let pair = -half_i * link.pair_coeff().conj();
                a[(m, o)] += hop;
                a[(m, n + o)] += pair;
                a[(n + m, n + o)] += hop.conj();
                a[(n + m, o)] += pair.conj();
            }
        }

        // Conjugate to quadratures: (x; p) = T (a; a^t).
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut t = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        let mut t_inv = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        let one = Complex64::new(inv_sqrt2, 0.0);
        let i_ = Complex64::new(0.0, inv_sqrt2);
        for j in 0..n {
            t[(j, j)] = one;
            t[(j, n + j)] = one;
            t[(n + j, j)] = -i_;
            t[(n + j, n + j)] = i_;
            t_inv[(j, j)] = one;
            t_inv[(j, n + j)] = i_;
            t_inv[(n + j, j)] = one;
            t_inv[(n + j, n + j)] = -i_;
        }
        let m_c = &t * a * t_inv;
        let scale = m_c.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let max_imag = m_c.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
        if max_imag > 1e-12 * scale {
            return Err(CoreError::InvalidArgument(format!(
                "quadrature dynamical matrix has imaginary residue {max_imag:.3e} (scale {scale:.3e})"
            )));
        }
        let entries = m_c.map(|z| z.re);
        Ok(Self {
            n_sites: n,
            entries,
            boundary: spec.boundary(),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// The real 2N x 2N coefficient matrix over [`QUADRATURE_BASIS`].
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// How the energies of a [`ComplexSpectrum`] are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumOrder {
    /// Ascending by (Re E, Im E); exact ties keep input order.
    ReImAscending,
}

/// A list of complex energies with its boundary tag and sort order.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    energies: Vec<Complex64>,
    boundary: Option<Boundary>,
    order: SpectrumOrder,
}

impl ComplexSpectrum {
    fn sorted(mut energies: Vec<Complex64>, boundary: Option<Boundary>) -> Self {
        energies.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite energies")
        });
        Self {
            energies,
            boundary,
            order: SpectrumOrder::ReImAscending,
        }
    }

    pub fn energies(&self) -> &[Complex64] {
        &self.energies
    }

    pub fn boundary(&self) -> Option<Boundary> {
        self.boundary
    }

    pub fn order(&self) -> SpectrumOrder {
        self.order
    }

    /// Largest imaginary part; positive means dynamical instability.
    pub fn max_imag(&self) -> f64 {
        self.energies.iter().map(|e| e.im).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Each energy repeated twice, for comparing an N-entry analytic open
    /// spectrum against the 2N eigenvalues of the dynamical matrix.
    pub fn doubled(&self) -> Vec<Complex64> {
        self.energies.iter().flat_map(|&e| [e, e]).collect()
    }
}

/// Greedy nearest-neighbor multiset comparison with tolerance `tol`
/// relative to the overall scale of the values.
pub fn multiset_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let scale = a
        .iter()
        .chain(b.iter())
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let mut used = vec![false; b.len()];
    for za in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, zb) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (za - zb).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol * scale => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Numeric complex spectrum of a dynamical matrix: `E = i lambda`, sorted
/// ascending by (Re, Im), with the `E -> -E*` pairing verified.
pub fn spectrum_numeric(m: &DynamicalMatrix) -> Result<ComplexSpectrum> {
    if m.entries.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::InvalidArgument(
            "dynamical matrix has non-finite entries".into(),
        ));
    }
    let schur = nalgebra::linalg::Schur::try_new(m.entries.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| {
            let svd = m.entries.clone().svd(false, false);
            let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
            let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
            CoreError::EigenFailure {
                condition: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            }
        })?;
    let lambdas = schur.complex_eigenvalues();
    let energies: Vec<Complex64> = lambdas.iter().map(|l| Complex64::i() * l).collect();
    let mirrored: Vec<Complex64> = energies.iter().map(|e| -e.conj()).collect();
    if !multiset_close(&energies, &mirrored, 1e-8) {
        return Err(CoreError::InvalidArgument(
            "numeric spectrum violates the E -> -E* pairing".into(),
        ));
    }
    Ok(ComplexSpectrum::sorted(energies, Some(m.boundary())))
}

/// Principal square root of a real number, continued to the imaginary axis
/// for negative arguments.
fn sqrt_continued(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Closed-form open-chain spectrum: N energies
/// `E_n = sqrt(t^2 - D^2) cos(n pi/(N+1)) - i kappa/2`, independent of the
/// hopping phase. For `D > t` the analytically continued values are returned.
pub fn open_chain_spectrum(hop: f64, pair: f64, loss: f64, n: usize) -> ComplexSpectrum {
    let root = sqrt_continued(hop * hop - pair * pair);
    let energies = (1..=n)
        .map(|m| {
            let k = m as f64 * PI / (n as f64 + 1.0);
            root * k.cos() - Complex64::new(0.0, loss / 2.0)
        })
        .collect();
    ComplexSpectrum::sorted(energies, Some(Boundary::Open))
}

/// Closed-form periodic-chain spectrum: both branches
/// `E = t sin(pt) sin k ± i sqrt(D^2 - t^2 cos^2 pt) cos k - i kappa/2`
/// over the N ring momenta `k = 2 pi n / N`, giving 2N energies.
pub fn ring_spectrum(hop: f64, pair: f64, hop_phase: f64, loss: f64, n: usize) -> ComplexSpectrum {
    let root = sqrt_continued(pair * pair - hop * hop * hop_phase.cos().powi(2));
    let damp = Complex64::new(0.0, loss / 2.0);
    let mut energies = Vec::with_capacity(2 * n);
    for m in 0..n {
        let k = 2.0 * PI * m as f64 / n as f64;
        let re = hop * hop_phase.sin() * k.sin();
        let osc = Complex64::i() * root * k.cos();
        energies.push(Complex64::new(re, 0.0) + osc - damp);
        energies.push(Complex64::new(re, 0.0) - osc - damp);
    }
    ComplexSpectrum::sorted(energies, Some(Boundary::Periodic))
}

/// Result of the spectral winding computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindingNumber {
    /// Signed number of times the periodic spectrum encircles `-i kappa/2`.
    Defined(i32),
    /// The curve passes within `1e-9` (relative) of the base point.
    Degenerate { min_distance: f64 },
}

impl WindingNumber {
    pub fn is_nonzero(&self) -> bool {
        matches!(self, WindingNumber::Defined(w) if *w != 0)
    }
}

/// Winding of the continuous-momentum periodic spectrum (upper branch) around
/// the point `E = -i kappa/2`, by discrete angle accumulation.
pub fn winding_number(hop: f64, pair: f64, hop_phase: f64, loss: f64) -> WindingNumber {
    let scale = 1.0f64.max(hop.abs() + pair.abs() + loss.abs());
    let root = sqrt_continued(pair * pair - hop * hop * hop_phase.cos().powi(2));
    let curve = |k: f64| -> Complex64 {
        Complex64::new(hop * hop_phase.sin() * k.sin(), 0.0) + Complex64::i() * root * k.cos()
    };
    let mut samples = 4096usize;
    loop {
        let mut total = 0.0f64;
        let mut min_dist = f64::INFINITY;
        let mut prev = curve(0.0);
        min_dist = min_dist.min(prev.norm());
        for i in 1..=samples {
            let k = 2.0 * PI * i as f64 / samples as f64;
            let z = curve(k);
            min_dist = min_dist.min(z.norm());
            let cross = prev.re * z.im - prev.im * z.re;
            let dot = prev.re * z.re + prev.im * z.im;
            if prev.norm() > 0.0 && z.norm() > 0.0 {
                total += cross.atan2(dot);
            }
            prev = z;
        }
        if min_dist < 1e-9 * scale {
            return WindingNumber::Degenerate { min_distance: min_dist };
        }
        let w = total / (2.0 * PI);
        let near_half_integer = (w - w.floor() - 0.5).abs() < 0.01;
        if near_half_integer && samples < 65_536 {
            samples *= 4;
            continue;
        }
        return WindingNumber::Defined(w.round() as i32);
    }
}

/// Pairing-strength window in which the open chain is dynamically stable but
/// the periodic chain is not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityWindow {
    pub lower: f64,
    pub upper: f64,
}

/// `(sqrt(t^2 cos^2 pt + kappa^2/4), sqrt(t^2 + kappa^2 / (4 cos^2(pi/(N+1)))))`.
pub fn stability_window(hop: f64, hop_phase: f64, loss: f64, n: usize) -> StabilityWindow {
    let c = hop_phase.cos();
    let lower = (hop * hop * c * c + loss * loss / 4.0).sqrt();
    let edge = (PI / (n as f64 + 1.0)).cos();
    let upper = (hop * hop + loss * loss / (4.0 * edge * edge)).sqrt();
    StabilityWindow { lower, upper }
}

/// Which side of the topological transition `t |cos pt| = D` a parameter set
/// falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeRegime {
    /// `t |cos pt| < D`: maps onto the phase-90-degree chain.
    Nontrivial,
    /// `t |cos pt| > D`: equivalent to a hopping-only model; only the
    /// effective hop magnitude is reported.
    Trivial,
    /// On the transition within tolerance.
    Boundary,
}

/// Renormalized parameters under the uniform squeezing transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeMap {
    pub regime: SqueezeRegime,
    pub hop: f64,
    pub pair: f64,
    pub hop_phase: f64,
}

/// Uniform squeezing transformation of the chain parameters.
///
/// In the nontrivial regime the map is `t' = t sin pt`,
/// `D' = sqrt(D^2 - t^2 cos^2 pt)`, `pt' = 90 deg`; the open-chain spectrum is
/// identical before and after. In the trivial regime only the effective hop
/// `sqrt(t^2 - D^2)` is reported (`D' = 0`).
pub fn squeeze_params(hop: f64, pair: f64, hop_phase: f64) -> SqueezeMap {
    let a = hop.abs() * hop_phase.cos().abs();
    let tol = 1e-12 * 1.0f64.max(a.max(pair));
    if (a - pair).abs() <= tol {
        return SqueezeMap {
            regime: SqueezeRegime::Boundary,
            hop: hop * hop_phase.sin(),
            pair: 0.0,
            hop_phase: PI / 2.0,
        };
    }
    if a < pair {
        SqueezeMap {
            regime: SqueezeRegime::Nontrivial,
            hop: hop * hop_phase.sin(),
            pair: (pair * pair - hop * hop * hop_phase.cos().powi(2)).sqrt(),
            hop_phase: PI / 2.0,
        }
    } else {
        SqueezeMap {
            regime: SqueezeRegime::Trivial,
            hop: (hop * hop - pair * pair).max(0.0).sqrt(),
            pair: 0.0,
            hop_phase: PI / 2.0,
        }
    }
}

/// Quadrature wavefunction of one open-chain eigenmode: sine envelope times
/// opposite exponential envelopes for the x and p components.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureWavefunction {
    pub mode: usize,
    pub momentum: f64,
    pub x_weights: Vec<f64>,
    pub p_weights: Vec<f64>,
    pub squeeze: f64,
}

/// Analytic open-chain quadrature wavefunction for mode `n` (1-based) of an
/// N-site chain with renormalized parameters `(t', D')`:
/// `x_j ~ sin(k_n j) e^{r j}`, `p_j ~ sin(k_n j) e^{-r j}`, each normalized,
/// with `e^{-2r} = |t' - D'| / (t' + D')`. A negative `t'` flips the
/// localization direction (`r -> -r`).
pub fn open_wavefunction(hop: f64, pair: f64, n: usize, mode: usize) -> Result<QuadratureWavefunction> {
    if mode == 0 || mode > n {
        return Err(CoreError::InvalidArgument(format!(
            "mode index must lie in 1..={n}, got {mode}"
        )));
    }
    let a = hop.abs();
    if !(a + pair > 0.0) {
        return Err(CoreError::InvalidArgument(
            "need |t'| + D' > 0 for a wavefunction".into(),
        ));
    }
    if (a - pair).abs() <= 1e-14 * (a + pair) {
        return Err(CoreError::InvalidArgument(
            "squeeze parameter diverges at |t'| = D' (perfect chirality limit)".into(),
        ));
    }
    let r = hop.signum() * 0.5 * ((a + pair) / (a - pair).abs()).ln();
    let k = mode as f64 * PI / (n as f64 + 1.0);
    let envelope = |sign: f64| -> Vec<f64> {
        // subtract the extremal exponent before exponentiating; the
        // normalization removes the constant
        let rs = sign * r;
        let shift = if rs > 0.0 { rs * n as f64 } else { rs };
        let mut w: Vec<f64> = (1..=n)
            .map(|j| (k * j as f64).sin() * (rs * j as f64 - shift).exp())
            .collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut w {
            *x /= norm;
        }
        w
    };
    Ok(QuadratureWavefunction {
        mode,
        momentum: k,
        x_weights: envelope(1.0),
        p_weights: envelope(-1.0),
        squeeze: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::deg_to_rad;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn chain(
        n: usize,
        hop: f64,
        pair: f64,
        hop_phase_deg: f64,
        loss: f64,
        closed: bool,
    ) -> LatticeSpec {
        LatticeSpec::uniform_chain(
            n,
            hop,
            pair,
            deg_to_rad(hop_phase_deg),
            0.0,
            loss,
            Complex64::new(loss / 2.0, 0.0),
            closed,
        )
        .unwrap()
    }

    #[test]
    fn single_damped_mode() {
        let site = crate::lattice::SiteSpec::new(0.0, 0.0, 1.0, Complex64::new(0.5, 0.0)).unwrap();
        let spec = LatticeSpec::new(vec![site], vec![], Boundary::Open).unwrap();
        let m = DynamicalMatrix::new(&spec).unwrap();
        let expect = DMatrix::from_diagonal_element(2, 2, -0.5);
        assert!((m.entries() - expect).norm() < 1e-14);
        let s = spectrum_numeric(&m).unwrap();
        for e in s.energies() {
            assert_abs_diff_eq!(e.re, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e.im, -0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn detuned_mode_splits_on_real_axis() {
        let site = crate::lattice::SiteSpec::new(0.0, 2.0, 1.0, Complex64::new(0.5, 0.0)).unwrap();
        let spec = LatticeSpec::new(vec![site], vec![], Boundary::Open).unwrap();
        let s = spectrum_numeric(&DynamicalMatrix::new(&spec).unwrap()).unwrap();
        let expect = vec![Complex64::new(-2.0, -0.5), Complex64::new(2.0, -0.5)];
        assert!(multiset_close(s.energies(), &expect, 1e-12));
    }

    #[test]
    fn hatano_nelson_decoupling_at_90_deg() {
        // pt = 90 deg, pairing iD, kappa = 0: x and p blocks decouple into
        // asymmetric-hopping chains with rates (t ± D)/2.
        let (t, d, n) = (1.0, 0.4, 3usize);
        let spec = LatticeSpec::uniform_chain(
            n,
            t,
            d,
            deg_to_rad(90.0),
            0.0,
            1e-12,
            Complex64::new(0.0, 0.0),
            false,
        )
        .unwrap();
        let m = DynamicalMatrix::new(&spec).unwrap();
        let e = m.entries();
        for i in 0..n {
            for j in 0..n {
                assert_abs_diff_eq!(e[(i, n + j)], 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(e[(n + i, j)], 0.0, epsilon = 1e-12);
            }
        }
        for j in 1..n {
            // x gains (t+D)/2 from the left, -(t-D)/2 from the right
            assert_abs_diff_eq!(e[(j, j - 1)], (t + d) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e[(j - 1, j)], -(t - d) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e[(n + j, n + j - 1)], (t - d) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(e[(n + j - 1, n + j)], -(t + d) / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn open_spectrum_matches_numeric() {
        let analytic = open_chain_spectrum(1.0, 0.4, 1.0, 3);
        for phase in [0.0, 30.0, 90.0, -45.0, 137.0] {
            let spec = chain(3, 1.0, 0.4, phase, 1.0, false);
            let numeric = spectrum_numeric(&DynamicalMatrix::new(&spec).unwrap()).unwrap();
            assert!(
                multiset_close(&analytic.doubled(), numeric.energies(), 1e-10),
                "phase {phase} deg"
            );
        }
    }

    #[test]
    fn open_spectrum_three_site_values() {
        // t = 1, D = 0.6, kappa = 1: E = {±0.8 cos(pi/4) - i/2, -i/2}
        let s = open_chain_spectrum(1.0, 0.6, 1.0, 3);
        let c = 0.8 * (PI / 4.0).cos();
        let expect = vec![
            Complex64::new(-c, -0.5),
            Complex64::new(0.0, -0.5),
            Complex64::new(c, -0.5),
        ];
        assert!(multiset_close(s.energies(), &expect, 1e-12));
        assert_abs_diff_eq!(c, 0.565685424949238, epsilon = 1e-12);
    }

    #[test]
    fn open_spectrum_degenerate_point() {
        let s = open_chain_spectrum(1.0, 1.0, 0.0, 5);
        for e in s.energies() {
            assert_abs_diff_eq!(e.norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ring_spectrum_matches_numeric() {
        let spec = chain(3, 1.0, 0.6, 90.0, 1.0, true);
        let numeric = spectrum_numeric(&DynamicalMatrix::new(&spec).unwrap()).unwrap();
        let analytic = ring_spectrum(1.0, 0.6, deg_to_rad(90.0), 1.0, 3);
        assert!(multiset_close(analytic.energies(), numeric.energies(), 1e-10));
    }

    #[test]
    fn ring_spectrum_pure_hopping_continuation() {
        // pt = 0, D = 0: analytic continuation lands on the real hopping band
        let spec = chain(5, 0.7, 0.0, 0.0, 0.4, true);
        let numeric = spectrum_numeric(&DynamicalMatrix::new(&spec).unwrap()).unwrap();
        let analytic = ring_spectrum(0.7, 0.0, 0.0, 0.4, 5);
        assert!(multiset_close(analytic.energies(), numeric.energies(), 1e-10));
    }

    #[test]
    fn ring_spectrum_random_draws_match_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(3..=7usize);
            let t = rng.gen_range(0.2..2.0);
            let d = rng.gen_range(0.0..1.5);
            let pt = rng.gen_range(-PI..PI);
            let k = rng.gen_range(0.05..1.5);
            let spec = LatticeSpec::uniform_chain(
                n,
                t,
                d,
                pt,
                0.0,
                k,
                Complex64::new(k / 2.0, 0.0),
                true,
            )
            .unwrap();
            let numeric = spectrum_numeric(&DynamicalMatrix::new(&spec).unwrap()).unwrap();
            let analytic = ring_spectrum(t, d, pt, k, n);
            assert!(multiset_close(analytic.energies(), numeric.energies(), 1e-10));
        }
    }

    #[test]
    fn winding_phase_examples() {
        // D = 0: segment, no winding (curve passes through the base point -> degenerate or 0)
        match winding_number(1.0, 0.0, deg_to_rad(37.0), 1.0) {
            WindingNumber::Defined(0) | WindingNumber::Degenerate { .. } => {}
            other => panic!("expected trivial winding, got {other:?}"),
        }
        assert!(winding_number(1.0, 0.6, deg_to_rad(90.0), 1.0).is_nonzero());
        assert!(!winding_number(1.0, 0.6, 0.0, 1.0).is_nonzero());
    }

    #[test]
    fn stability_window_values() {
        let w = stability_window(1.0, deg_to_rad(90.0), 1.0, 3);
        assert_abs_diff_eq!(w.lower, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.upper, 1.5f64.sqrt(), epsilon = 1e-15);
        let w0 = stability_window(1.0, deg_to_rad(90.0), 0.0, 3);
        assert_abs_diff_eq!(w0.lower, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w0.upper, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn boundary_sensitivity_inside_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = stability_window(1.0, deg_to_rad(90.0), 1.0, 3);
        for _ in 0..25 {
            let d = rng.gen_range(w.lower + 1e-3..w.upper - 1e-3);
            let open = chain(3, 1.0, d, 90.0, 1.0, false);
            let per = chain(3, 1.0, d, 90.0, 1.0, true);
            let so = spectrum_numeric(&DynamicalMatrix::new(&open).unwrap()).unwrap();
            let sp = spectrum_numeric(&DynamicalMatrix::new(&per).unwrap()).unwrap();
            assert!(so.max_imag() <= 1e-12, "open unstable at D = {d}");
            assert!(sp.max_imag() > 0.0, "periodic stable at D = {d}");
        }
    }

    #[test]
    fn squeeze_map_values() {
        let m = squeeze_params(1.0, 0.6, deg_to_rad(90.0));
        assert_eq!(m.regime, SqueezeRegime::Nontrivial);
        assert_abs_diff_eq!(m.hop, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.pair, 0.6, epsilon = 1e-15);

        let m = squeeze_params(1.0, 0.6, deg_to_rad(60.0));
        assert_eq!(m.regime, SqueezeRegime::Nontrivial);
        assert_abs_diff_eq!(m.hop, deg_to_rad(60.0).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(m.pair, (0.36f64 - 0.25).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.hop, 0.8660254037844386, epsilon = 1e-12);
        assert_abs_diff_eq!(m.pair, 0.33166247903554, epsilon = 1e-12);

        let m = squeeze_params(1.0, 0.2, deg_to_rad(60.0));
        assert_eq!(m.regime, SqueezeRegime::Trivial);
        assert_abs_diff_eq!(m.pair, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.hop, (1.0f64 - 0.04).sqrt(), epsilon = 1e-12);

        let m = squeeze_params(1.0, 0.5, deg_to_rad(60.0));
        assert_eq!(m.regime, SqueezeRegime::Boundary);
    }

    #[test]
    fn squeeze_preserves_open_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..10 {
            let t: f64 = rng.gen_range(0.3..1.5);
            let pt: f64 = rng.gen_range(0.3..2.8);
            let d = rng.gen_range((t * pt.cos().abs()) * 1.05 + 1e-3..2.0);
            let m = squeeze_params(t, d, pt);
            assert_eq!(m.regime, SqueezeRegime::Nontrivial);
            let spec_a = LatticeSpec::uniform_chain(4, t, d, pt, 0.0, 1e-9, Complex64::new(0.0, 0.0), false).unwrap();
            let spec_b = LatticeSpec::uniform_chain(
                4,
                m.hop,
                m.pair,
                PI / 2.0,
                0.0,
                1e-9,
                Complex64::new(0.0, 0.0),
                false,
            )
            .unwrap();
            let sa = spectrum_numeric(&DynamicalMatrix::new(&spec_a).unwrap()).unwrap();
            let sb = spectrum_numeric(&DynamicalMatrix::new(&spec_b).unwrap()).unwrap();
            assert!(multiset_close(sa.energies(), sb.energies(), 1e-10));
        }
    }

    #[test]
    fn wavefunction_delocalized_at_zero_pair() {
        let w = open_wavefunction(1.0, 0.0, 5, 1).unwrap();
        assert_abs_diff_eq!(w.squeeze, 0.0, epsilon = 1e-15);
        for (x, p) in w.x_weights.iter().zip(w.p_weights.iter()) {
            assert_abs_diff_eq!(*x, *p, epsilon = 1e-15);
        }
        let norm: f64 = w.x_weights.iter().map(|x| x * x).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_mode_avoids_even_sites() {
        let w = open_wavefunction(1.0, 0.4, 3, 2).unwrap();
        assert_abs_diff_eq!(w.x_weights[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.p_weights[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn wavefunction_edge_ratio() {
        let w = open_wavefunction(1.0, 0.4, 3, 1).unwrap();
        // e^{2r} = (t+D)/(t-D) = 7/3
        assert_abs_diff_eq!(w.x_weights[2] / w.x_weights[0], 7.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.p_weights[2] / w.p_weights[0], 3.0 / 7.0, epsilon = 1e-12);
        // mirrored hop flips localization
        let m = open_wavefunction(-1.0, 0.4, 3, 1).unwrap();
        assert_abs_diff_eq!(m.squeeze, -w.squeeze, epsilon = 1e-15);
        assert_abs_diff_eq!(m.x_weights[2] / m.x_weights[0], 3.0 / 7.0, epsilon = 1e-12);
    }

    #[test]
    fn wavefunction_divergence_flagged() {
        assert!(open_wavefunction(1.0, 1.0, 3, 1).is_err());
        assert!(open_wavefunction(1.0, 0.4, 3, 0).is_err());
        assert!(open_wavefunction(1.0, 0.4, 3, 4).is_err());
    }
}

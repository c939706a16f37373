//! Lattice data model: sites with loss and coupling ports, links with complex
//! hopping and pairing, and the phase algebra built on them.
//!
//! The Hamiltonian described by a [`LatticeSpec`] is (hbar = 1, rate units)
//!
//! ```text
//! H = sum_j dw_j a_j^t a_j
//!   + (1/2) sum_{<jk>} ( t_jk e^{i pt_jk} a_j^t a_k + D_jk e^{i pd_jk} a_j a_k + h.c. )
//! ```
//!
//! where `dw_j` is the frame detuning of site j, `pt_jk` is the hopping phase
//! read with j as the first index (so `pt_kj = -pt_jk`), and `pd_jk = pd_kj`
//! is the pairing phase on the annihilation-pair term.
//!
//! Each link also carries the derived sum and difference phases
//! `p±_jk = (pt_jk ± pd_jk)/2`. For two links j--k and k--l meeting at k, the
//! combination `Theta_k = p+_jk + p-_kl` is invariant under local gauge
//! transformations `a_j -> a_j e^{i th_j}` and controls the chirality of
//! transport through site k.

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::phase::wrap_angle;

/// One lattice site: a bosonic mode with loss and an optional external port.
///
/// Frequencies are angular rates in the same units as the loss rates. The
/// external coupling is complex: the real part is the physical port coupling,
/// the imaginary part is a phenomenological lineshape-asymmetry term that
/// enters only the input/output factors, never the total dissipation.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSpec {
    bare_freq: f64,
    frame_freq: f64,
    loss: f64,
    ext_coupling: Complex64,
    efficiency: f64,
}

impl SiteSpec {
    /// Build a site from its total loss and complex external coupling.
    /// The coupling efficiency is derived as `eta = Re(k_ext) / kappa`.
    pub fn new(bare_freq: f64, frame_freq: f64, loss: f64, ext_coupling: Complex64) -> Result<Self> {
        if !(loss > 0.0) || !loss.is_finite() {
            return Err(CoreError::Lattice(format!("site loss must be positive, got {loss}")));
        }
        if ext_coupling.re < 0.0 || !ext_coupling.is_finite() {
            return Err(CoreError::Lattice(format!(
                "Re(ext_coupling) must be >= 0 and finite, got {ext_coupling}"
            )));
        }
        let efficiency = ext_coupling.re / loss;
        if efficiency > 1.0 + 1e-12 {
            return Err(CoreError::Lattice(format!(
                "coupling efficiency {efficiency} exceeds 1 (Re k_ext = {}, kappa = {loss})",
                ext_coupling.re
            )));
        }
        Ok(Self {
            bare_freq,
            frame_freq,
            loss,
            ext_coupling,
            efficiency: efficiency.min(1.0),
        })
    }

    /// Build a site from its external coupling and efficiency; the total loss
    /// is derived as `kappa = Re(k_ext) / eta`.
    pub fn from_efficiency(
        bare_freq: f64,
        frame_freq: f64,
        ext_coupling: Complex64,
        efficiency: f64,
    ) -> Result<Self> {
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(CoreError::Lattice(format!(
                "efficiency must lie in (0, 1], got {efficiency}"
            )));
        }
        if !(ext_coupling.re > 0.0) {
            return Err(CoreError::Lattice(
                "Re(ext_coupling) must be positive when deriving the loss from the efficiency".into(),
            ));
        }
        let loss = ext_coupling.re / efficiency;
        Self::new(bare_freq, frame_freq, loss, ext_coupling)
    }

    pub fn bare_freq(&self) -> f64 {
        self.bare_freq
    }

    pub fn frame_freq(&self) -> f64 {
        self.frame_freq
    }

    /// Frame detuning `dw = frame_freq - bare_freq`.
    pub fn detuning(&self) -> f64 {
        self.frame_freq - self.bare_freq
    }

    /// Total single-photon loss rate.
    pub fn loss(&self) -> f64 {
        self.loss
    }

    /// Complex external coupling rate.
    pub fn ext_coupling(&self) -> Complex64 {
        self.ext_coupling
    }

    /// Coupling efficiency `eta = Re(k_ext) / kappa`.
    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }
}

/// A link between two sites with hopping (beam-splitter) and pairing
/// (two-mode-squeezing) couplings.
///
/// Links are stored with endpoints in canonical `a < b` order; reading the
/// link from the other end negates the hopping phase and keeps the pairing
/// phase, so there is a single source of truth for the phases.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    a: usize,
    b: usize,
    hop_mag: f64,
    hop_phase: f64,
    pair_mag: f64,
    pair_phase: f64,
}

impl LinkSpec {
    /// Create a link between `j` and `k`. `hop_phase` is the phase of the
    /// `a_j^t a_k` coefficient (so passing the endpoints in the opposite order
    /// negates it); `pair_phase` is the phase of the symmetric `a_j a_k` term.
    pub fn new(
        j: usize,
        k: usize,
        hop_mag: f64,
        hop_phase: f64,
        pair_mag: f64,
        pair_phase: f64,
    ) -> Result<Self> {
        if j == k {
            return Err(CoreError::Lattice(format!("self-link on site {j}")));
        }
        if hop_mag < 0.0 || pair_mag < 0.0 || !hop_mag.is_finite() || !pair_mag.is_finite() {
            return Err(CoreError::Lattice(format!(
                "link magnitudes must be finite and >= 0, got t = {hop_mag}, D = {pair_mag}"
            )));
        }
        let (a, b, hp) = if j < k {
            (j, k, hop_phase)
        } else {
            (k, j, -hop_phase)
        };
        Ok(Self {
            a,
            b,
            hop_mag,
            hop_phase: wrap_angle(hp),
            pair_mag,
            pair_phase: wrap_angle(pair_phase),
        })
    }

    /// Endpoints in canonical order `(a, b)` with `a < b`.
    pub fn endpoints(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn touches(&self, j: usize) -> bool {
        self.a == j || self.b == j
    }

    /// The other endpoint of the link.
    pub fn opposite(&self, j: usize) -> usize {
        if j == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn hop_mag(&self) -> f64 {
        self.hop_mag
    }

    pub fn pair_mag(&self) -> f64 {
        self.pair_mag
    }

    /// Phase of the `a_j^t a_k` hopping coefficient, with `j` the given site.
    pub fn hop_phase_from(&self, j: usize) -> f64 {
        debug_assert!(self.touches(j));
        if j == self.a {
            self.hop_phase
        } else {
            -self.hop_phase
        }
    }

    /// Pairing phase (independent of reading direction).
    pub fn pair_phase(&self) -> f64 {
        self.pair_phase
    }

    /// Complex hopping amplitude `t e^{i pt_jk}` with `j` the given site.
    pub fn hop_coeff_from(&self, j: usize) -> Complex64 {
        Complex64::from_polar(self.hop_mag, self.hop_phase_from(j))
    }

    /// Complex pairing amplitude `D e^{i pd}` on the annihilation-pair term.
    pub fn pair_coeff(&self) -> Complex64 {
        Complex64::from_polar(self.pair_mag, self.pair_phase)
    }

    /// Sum phase `p+_jk = (pt_jk + pd_jk)/2`, read with `j` first, in (-pi, pi].
    pub fn sum_phase_from(&self, j: usize) -> f64 {
        wrap_angle((self.hop_phase_from(j) + self.pair_phase) / 2.0)
    }

    /// Difference phase `p-_jk = (pt_jk - pd_jk)/2`, read with `j` first, in (-pi, pi].
    pub fn diff_phase_from(&self, j: usize) -> f64 {
        wrap_angle((self.hop_phase_from(j) - self.pair_phase) / 2.0)
    }
}

/// Boundary tag for chain-shaped lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

/// Gauge-invariant phase data extracted from a path or cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantPhases {
    /// `(site, Theta_site)` for every interior site, in traversal order,
    /// each normalized to (-pi, pi].
    pub site_phases: Vec<(usize, f64)>,
    /// Directed sum of hopping phases around the cycle; `None` for a path.
    pub loop_phase: Option<f64>,
}

/// A full lattice: ordered sites, links, and a boundary tag.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    sites: Vec<SiteSpec>,
    links: Vec<LinkSpec>,
    boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(sites: Vec<SiteSpec>, links: Vec<LinkSpec>, boundary: Boundary) -> Result<Self> {
        let n = sites.len();
        if n == 0 {
            return Err(CoreError::Lattice("lattice needs at least one site".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for link in &links {
            let (a, b) = link.endpoints();
            if b >= n {
                return Err(CoreError::Lattice(format!(
                    "link ({a}, {b}) references a missing site (n = {n})"
                )));
            }
            if !seen.insert((a, b)) {
                return Err(CoreError::Lattice(format!("duplicate link between {a} and {b}")));
            }
        }
        let spec = Self { sites, links, boundary };
        if boundary == Boundary::Periodic && !spec.is_cycle() {
            return Err(CoreError::Lattice(
                "periodic boundary requires the links to form a single cycle".into(),
            ));
        }
        Ok(spec)
    }

    /// Uniform chain with `n` identical sites and links: hopping `t e^{i pt}`
    /// on each bond read in the direction of increasing site index, pairing
    /// `i D e^{i pd}` on the creation-pair term. `closed` appends the wrap
    /// link from the last site back to site 0.
    #[allow(clippy::too_many_arguments)]
    pub fn uniform_chain(
        n: usize,
        hop: f64,
        pair: f64,
        hop_phase: f64,
        pair_phase: f64,
        loss: f64,
        ext_coupling: Complex64,
        closed: bool,
    ) -> Result<Self> {
        if n < 2 {
            return Err(CoreError::Lattice(format!("chain needs at least 2 sites, got {n}")));
        }
        let sites = (0..n)
            .map(|_| SiteSpec::new(0.0, 0.0, loss, ext_coupling))
            .collect::<Result<Vec<_>>>()?;
        // The creation-pair coefficient i D e^{i pd} corresponds to an
        // annihilation-pair phase of -(pi/2 + pd).
        let stored_pair = -(std::f64::consts::FRAC_PI_2 + pair_phase);
        let mut links = Vec::with_capacity(if closed { n } else { n - 1 });
        for j in 0..n - 1 {
            // a_{j+1}^t a_j carries e^{+i pt}: read from the lower site it is -pt.
            links.push(LinkSpec::new(j + 1, j, hop, hop_phase, pair, stored_pair)?);
        }
        if closed {
            links.push(LinkSpec::new(0, n - 1, hop, hop_phase, pair, stored_pair)?);
        }
        let boundary = if closed { Boundary::Periodic } else { Boundary::Open };
        Self::new(sites, links, boundary)
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteSpec] {
        &self.sites
    }

    pub fn site(&self, j: usize) -> &SiteSpec {
        &self.sites[j]
    }

    pub fn links(&self) -> &[LinkSpec] {
        &self.links
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn link_between(&self, j: usize, k: usize) -> Option<&LinkSpec> {
        self.links.iter().find(|l| l.touches(j) && l.touches(k) && j != k)
    }

    /// Links touching site `j`, with the opposite endpoint.
    pub fn neighbors(&self, j: usize) -> impl Iterator<Item = (usize, &LinkSpec)> {
        self.links
            .iter()
            .filter(move |l| l.touches(j))
            .map(move |l| (l.opposite(j), l))
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.sites.len()];
        for l in &self.links {
            let (a, b) = l.endpoints();
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    fn is_cycle(&self) -> bool {
        let n = self.sites.len();
        if self.links.len() != n || n < 3 {
            return false;
        }
        if self.degrees().iter().any(|&d| d != 2) {
            return false;
        }
        self.traverse_from(0, None).len() == n
    }

    /// Walk along degree-<=2 links starting at `start`, optionally forcing the
    /// first step; returns visited sites in order.
    fn traverse_from(&self, start: usize, first: Option<usize>) -> Vec<usize> {
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = match first {
            Some(f) => f,
            None => match self.neighbors(start).map(|(k, _)| k).min() {
                Some(k) => k,
                None => return order,
            },
        };
        while cur != start {
            order.push(cur);
            let next = self
                .neighbors(cur)
                .map(|(k, _)| k)
                .find(|&k| k != prev);
            match next {
                Some(k) => {
                    prev = cur;
                    cur = k;
                }
                None => break,
            }
        }
        order
    }

    /// Apply a local gauge transformation `a_j -> a_j e^{i th_j}`.
    ///
    /// Hopping phases map as `pt_jk -> pt_jk - th_j + th_k` and pairing phases
    /// as `pd_jk -> pd_jk + th_j + th_k`; magnitudes, losses and couplings are
    /// untouched.
    pub fn gauge_transformed(&self, angles: &[f64]) -> Result<Self> {
        if angles.len() != self.sites.len() {
            return Err(CoreError::Dimension {
                what: "gauge angles",
                expected: self.sites.len(),
                got: angles.len(),
            });
        }
        let links = self
            .links
            .iter()
            .map(|l| {
                let (a, b) = l.endpoints();
                LinkSpec::new(
                    a,
                    b,
                    l.hop_mag,
                    l.hop_phase - angles[a] + angles[b],
                    l.pair_mag,
                    l.pair_phase + angles[a] + angles[b],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sites: self.sites.clone(),
            links,
            boundary: self.boundary,
        })
    }

    /// Gauge-invariant phases of a path- or cycle-shaped lattice.
    ///
    /// For every interior site k between consecutive links j--k and k--l the
    /// reported phase is `Theta_k = p+_jk + p-_kl`. For a cycle the directed
    /// loop hopping phase is returned as well; it equals the sum of all
    /// `Theta` values modulo 2 pi.
    pub fn invariant_phases(&self) -> Result<InvariantPhases> {
        let n = self.sites.len();
        let deg = self.degrees();
        if deg.iter().any(|&d| d > 2) {
            return Err(CoreError::Lattice(
                "gauge-invariant phases are defined for paths and cycles only (branching site found)"
                    .into(),
            ));
        }
        let cycle = self.links.len() == n && n >= 3 && deg.iter().all(|&d| d == 2);
        let order = if cycle {
            let o = self.traverse_from(0, None);
            if o.len() != n {
                return Err(CoreError::Lattice("links do not form a single cycle".into()));
            }
            o
        } else {
            if self.links.len() + 1 != n {
                return Err(CoreError::Lattice(
                    "links do not form a single path covering all sites".into(),
                ));
            }
            let start = match deg.iter().position(|&d| d == 1) {
                Some(s) => s,
                None => return Err(CoreError::Lattice("path endpoints not found".into())),
            };
            let o = self.traverse_from(start, None);
            if o.len() != n {
                return Err(CoreError::Lattice(
                    "links do not form a single path covering all sites".into(),
                ));
            }
            o
        };

        let mut site_phases = Vec::new();
        let triples: usize = if cycle { n } else { n.saturating_sub(2) };
        for i in 0..triples {
            let u = order[i];
            let v = order[(i + 1) % n];
            let w = order[(i + 2) % n];
            let luv = self.link_between(u, v).expect("traversal follows links");
            let lvw = self.link_between(v, w).expect("traversal follows links");
            let theta = wrap_angle(luv.sum_phase_from(u) + lvw.diff_phase_from(v));
            site_phases.push((v, theta));
        }

        let loop_phase = if cycle {
            let mut total = 0.0;
            for i in 0..n {
                let u = order[i];
                let v = order[(i + 1) % n];
                let l = self.link_between(u, v).expect("cycle link");
                total += l.hop_phase_from(u);
            }
            Some(wrap_angle(total))
        } else {
            None
        };

        Ok(InvariantPhases { site_phases, loop_phase })
    }
}

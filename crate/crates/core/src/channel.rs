//! Network geometry, Rayleigh fading and transmit antenna selection.
//!
//! The network has four single-antenna-or-array nodes: Alice (an `M_T`
//! antenna transmitter), Bob, a single-antenna jammer, and Eve. Every link
//! experiences distance path loss `D^-beta` on top of unit-variance
//! circularly-symmetric complex Gaussian (Rayleigh) fading.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};

/// A node position in the plane, in meters.
pub type Position = (f64, f64);

/// Link distances and the path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkGeometry {
    d_ab: f64,
    d_ae: f64,
    d_jb: f64,
    d_je: f64,
    beta: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl NetworkGeometry {
    pub fn new(d_ab: f64, d_ae: f64, d_jb: f64, d_je: f64, beta: f64) -> Result<Self> {
        check_positive("D_ab", d_ab)?;
        check_positive("D_ae", d_ae)?;
        check_positive("D_jb", d_jb)?;
        check_positive("D_je", d_je)?;
        check_positive("beta", beta)?;
        Ok(Self {
            d_ab,
            d_ae,
            d_jb,
            d_je,
            beta,
        })
    }

    /// Builds the geometry from planar node positions.
    pub fn from_positions(
        alice: Position,
        bob: Position,
        jammer: Position,
        eve: Position,
        beta: f64,
    ) -> Result<Self> {
        let dist = |a: Position, b: Position| (a.0 - b.0).hypot(a.1 - b.1);
        Self::new(
            dist(alice, bob),
            dist(alice, eve),
            dist(jammer, bob),
            dist(jammer, eve),
            beta,
        )
    }

    pub fn d_ab(&self) -> f64 {
        self.d_ab
    }

    pub fn d_ae(&self) -> f64 {
        self.d_ae
    }

    pub fn d_jb(&self) -> f64 {
        self.d_jb
    }

    pub fn d_je(&self) -> f64 {
        self.d_je
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `D_ab^beta`
    pub fn loss_ab(&self) -> f64 {
        self.d_ab.powf(self.beta)
    }

    /// `D_ae^beta`
    pub fn loss_ae(&self) -> f64 {
        self.d_ae.powf(self.beta)
    }

    /// `D_jb^beta`
    pub fn loss_jb(&self) -> f64 {
        self.d_jb.powf(self.beta)
    }

    /// `D_je^beta`
    pub fn loss_je(&self) -> f64 {
        self.d_je.powf(self.beta)
    }

    pub fn with_d_ab(self, d: f64) -> Result<Self> {
        Self::new(d, self.d_ae, self.d_jb, self.d_je, self.beta)
    }

    pub fn with_d_ae(self, d: f64) -> Result<Self> {
        Self::new(self.d_ab, d, self.d_jb, self.d_je, self.beta)
    }

    pub fn with_d_jb(self, d: f64) -> Result<Self> {
        Self::new(self.d_ab, self.d_ae, d, self.d_je, self.beta)
    }

    pub fn with_d_je(self, d: f64) -> Result<Self> {
        Self::new(self.d_ab, self.d_ae, self.d_jb, d, self.beta)
    }
}

/// One independent draw of every channel coefficient in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    /// Alice to Bob, one entry per transmit antenna.
    pub h_ab: Vec<Complex64>,
    /// Alice to Eve, one entry per transmit antenna.
    pub h_ae: Vec<Complex64>,
    /// Jammer to Bob.
    pub h_jb: Complex64,
    /// Jammer to Eve.
    pub h_je: Complex64,
}

impl FadingRealization {
    pub fn num_antennas(&self) -> usize {
        self.h_ab.len()
    }
}

/// Samples `CN(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws one fading realization for an `m_t` antenna transmitter.
pub fn draw_fading<R: Rng + ?Sized>(rng: &mut R, m_t: usize) -> Result<FadingRealization> {
    if m_t == 0 {
        return Err(invalid("M_T must be at least 1"));
    }
    let h_ab = (0..m_t).map(|_| complex_gaussian(rng)).collect();
    let h_ae = (0..m_t).map(|_| complex_gaussian(rng)).collect();
    let h_jb = complex_gaussian(rng);
    let h_je = complex_gaussian(rng);
    Ok(FadingRealization {
        h_ab,
        h_ae,
        h_jb,
        h_je,
    })
}

/// Antennas chosen for transmission and the resulting MRT gain toward Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Selected antenna indices, ascending.
    pub indices: Vec<usize>,
    /// `sum |h_ab,i|^2` over the selected antennas.
    pub g_ab: f64,
}

impl SelectionResult {
    /// Restricts a per-antenna vector to the selected antennas.
    pub fn gather(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.indices.iter().map(|&i| v[i]).collect()
    }

    fn from_indices(mut indices: Vec<usize>, h_ab: &[Complex64]) -> Self {
        indices.sort_unstable();
        let g_ab = indices.iter().map(|&i| h_ab[i].norm_sqr()).sum();
        Self { indices, g_ab }
    }
}

fn check_selection_size(m_t: usize, n_d: usize) -> Result<()> {
    if n_d == 0 || n_d > m_t {
        return Err(invalid(format!(
            "N_D must satisfy 1 <= N_D <= M_T (N_D = {n_d}, M_T = {m_t})"
        )));
    }
    Ok(())
}

/// Picks the `n_d` antennas with the strongest Alice-Bob coefficients.
///
/// Ties in `|h_ab,i|` go to the lower index.
pub fn select_antennas(h_ab: &[Complex64], n_d: usize) -> Result<SelectionResult> {
    check_selection_size(h_ab.len(), n_d)?;
    let mut order: Vec<usize> = (0..h_ab.len()).collect();
    // stable sort keeps the lower index first among equal gains
    order.sort_by(|&a, &b| h_ab[b].norm_sqr().total_cmp(&h_ab[a].norm_sqr()));
    order.truncate(n_d);
    Ok(SelectionResult::from_indices(order, h_ab))
}

/// Picks `n_d` distinct antennas uniformly at random, ignoring channel state.
pub fn random_selection<R: Rng + ?Sized>(
    rng: &mut R,
    h_ab: &[Complex64],
    n_d: usize,
) -> Result<SelectionResult> {
    check_selection_size(h_ab.len(), n_d)?;
    let indices = rand::seq::index::sample(rng, h_ab.len(), n_d).into_vec();
    Ok(SelectionResult::from_indices(indices, h_ab))
}

/// `|w^H h_ae|^2` for the MRT beamformer `w = h_ab / ||h_ab||` over the
/// selected antennas.
pub fn eve_effective_gain(h_ab_selected: &[Complex64], h_ae_selected: &[Complex64]) -> Result<f64> {
    if h_ab_selected.is_empty() || h_ab_selected.len() != h_ae_selected.len() {
        return Err(invalid(format!(
            "channel vectors must be non-empty and equal length ({} vs {})",
            h_ab_selected.len(),
            h_ae_selected.len()
        )));
    }
    let norm_sqr: f64 = h_ab_selected.iter().map(|h| h.norm_sqr()).sum();
    if norm_sqr == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let inner: Complex64 = h_ab_selected
        .iter()
        .zip(h_ae_selected)
        .map(|(a, e)| a.conj() * e)
        .sum();
    Ok(inner.norm_sqr() / norm_sqr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mags(m: &[f64]) -> Vec<Complex64> {
        m.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn fading_is_deterministic_per_seed() {
        let a = draw_fading(&mut ChaCha8Rng::seed_from_u64(42), 10).unwrap();
        let b = draw_fading(&mut ChaCha8Rng::seed_from_u64(42), 10).unwrap();
        assert_eq!(a, b);
        let c = draw_fading(&mut ChaCha8Rng::seed_from_u64(43), 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn fading_shape() {
        let f = draw_fading(&mut ChaCha8Rng::seed_from_u64(42), 1).unwrap();
        assert_eq!(f.h_ab.len(), 1);
        assert_eq!(f.h_ae.len(), 1);
        assert!(matches!(
            draw_fading(&mut ChaCha8Rng::seed_from_u64(42), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn fading_unit_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000 / 10;
        let (mut power, mut mean) = (0.0, Complex64::new(0.0, 0.0));
        for _ in 0..n {
            let f = draw_fading(&mut rng, 10).unwrap();
            for h in &f.h_ab {
                power += h.norm_sqr();
                mean += h;
            }
        }
        let count = (n * 10) as f64;
        assert!((power / count - 1.0).abs() < 0.01);
        assert!((mean / count).norm() < 0.01);
    }

    #[test]
    fn select_by_hand() {
        let s = select_antennas(&mags(&[3.0, 1.0, 2.0]), 2).unwrap();
        assert_eq!(s.indices, vec![0, 2]);
        assert_eq!(s.g_ab, 13.0);

        let s = select_antennas(&mags(&[2.0, 2.0, 1.0]), 1).unwrap();
        assert_eq!(s.indices, vec![0]);
        assert_eq!(s.g_ab, 4.0);

        let s = select_antennas(&mags(&[3.0, 1.0, 2.0]), 3).unwrap();
        assert_eq!(s.g_ab, 14.0);
    }

    #[test]
    fn selection_size_errors() {
        let h = mags(&[1.0, 2.0]);
        assert!(select_antennas(&h, 3).is_err());
        assert!(select_antennas(&h, 0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_selection(&mut rng, &h, 3).is_err());
    }

    #[test]
    fn random_full_selection_matches_best() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = draw_fading(&mut rng, 6).unwrap();
        let best = select_antennas(&f.h_ab, 6).unwrap();
        let rand_sel = random_selection(&mut rng, &f.h_ab, 6).unwrap();
        assert_eq!(best, rand_sel);
    }

    #[test]
    fn random_selection_mean_gain() {
        // E[g_ab] = N_D for unit-mean exponential gains
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let (mut sum_rand, mut sum_best) = (0.0, 0.0);
        for _ in 0..n {
            let f = draw_fading(&mut rng, 10).unwrap();
            sum_rand += random_selection(&mut rng, &f.h_ab, 4).unwrap().g_ab;
            sum_best += select_antennas(&f.h_ab, 4).unwrap().g_ab;
        }
        let mean_rand = sum_rand / n as f64;
        assert!((mean_rand - 4.0).abs() < 0.05, "{mean_rand}");
        assert!(sum_best / n as f64 >= mean_rand);
    }

    #[test]
    fn eve_gain_special_cases() {
        let h = vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        let norm: f64 = h.iter().map(|x| x.norm_sqr()).sum();
        assert!((eve_effective_gain(&h, &h).unwrap() - norm).abs() < 1e-12);

        let orth = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let other = vec![Complex64::new(0.0, 0.0), Complex64::new(3.0, 1.0)];
        assert_eq!(eve_effective_gain(&orth, &other).unwrap(), 0.0);

        let zero = vec![Complex64::new(0.0, 0.0); 2];
        assert_eq!(eve_effective_gain(&zero, &h), Err(Error::DegenerateChannel));
    }

    #[test]
    fn geometry_from_default_positions() {
        let g = NetworkGeometry::from_positions(
            (-2.5, 2.5),
            (2.5, 2.5),
            (2.5, -2.5),
            (-2.5, -2.5),
            2.0,
        )
        .unwrap();
        assert_eq!(g.d_ab(), 5.0);
        assert_eq!(g.d_ae(), 5.0);
        assert_eq!(g.d_jb(), 5.0);
        assert_eq!(g.d_je(), 5.0);
        assert_eq!(g.loss_ab(), 25.0);
    }

    #[test]
    fn geometry_rejects_nonpositive() {
        assert!(NetworkGeometry::new(0.0, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(NetworkGeometry::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(NetworkGeometry::new(1.0, 1.0, f64::NAN, 1.0, 2.0).is_err());
    }
}

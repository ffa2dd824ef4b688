//! Time-varying extended channels, receiver noise and the MIMO to
//! virtual-node expansion.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid topology: {0}")]
    Topology(String),
    #[error("noise variance must be finite and non-negative, got {0}")]
    Noise(f64),
    #[error("expected {expected} diagonal entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("unknown channel model `{0}` (expected `real` or `complex`)")]
    UnknownModel(String),
}

/// Distribution of the channel coefficients and noise samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// Standard real Gaussian, variance 1.
    Real,
    /// Circularly-symmetric complex Gaussian, variance 1/2 per component.
    Complex,
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelModel::Real => "real",
            ChannelModel::Complex => "complex",
        })
    }
}

impl FromStr for ChannelModel {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(ChannelModel::Real),
            "complex" => Ok(ChannelModel::Complex),
            other => Err(ChannelError::UnknownModel(other.to_string())),
        }
    }
}

/// Physical nodes and their antenna counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    tx_antennas: Vec<usize>,
    rx_antennas: Vec<usize>,
}

impl Topology {
    pub fn new(tx_antennas: Vec<usize>, rx_antennas: Vec<usize>) -> Result<Self, ChannelError> {
        if tx_antennas.is_empty() || rx_antennas.is_empty() {
            return Err(ChannelError::Topology(
                "need at least one transmitter and receiver".into(),
            ));
        }
        if tx_antennas.iter().chain(&rx_antennas).any(|&a| a == 0) {
            return Err(ChannelError::Topology(
                "antenna counts must be at least 1".into(),
            ));
        }
        Ok(Self {
            tx_antennas,
            rx_antennas,
        })
    }

    /// `k` transmitters and `l` receivers with one antenna each.
    pub fn single_antenna(k: usize, l: usize) -> Result<Self, ChannelError> {
        Self::new(vec![1; k], vec![1; l])
    }

    pub fn transmitters(&self) -> usize {
        self.tx_antennas.len()
    }

    pub fn receivers(&self) -> usize {
        self.rx_antennas.len()
    }

    pub fn tx_antennas(&self) -> &[usize] {
        &self.tx_antennas
    }

    pub fn rx_antennas(&self) -> &[usize] {
        &self.rx_antennas
    }
}

/// Physical location of a virtual node: `(node, antenna)`, both zero-based.
pub type AntennaRef = (usize, usize);

/// Result of treating every antenna as a single-antenna virtual node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualTopology {
    /// Number of activated virtual transmitters (and receivers).
    pub m: usize,
    pub tx_map: Vec<AntennaRef>,
    pub rx_map: Vec<AntennaRef>,
}

impl VirtualTopology {
    /// Number of virtual receivers hosted by physical receiver `node`.
    pub fn virtual_receivers_of(&self, node: usize) -> usize {
        self.rx_map.iter().filter(|(n, _)| *n == node).count()
    }
}

fn enumerate_antennas(counts: &[usize], take: usize) -> Vec<AntennaRef> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(node, &a)| (0..a).map(move |ant| (node, ant)))
        .take(take)
        .collect()
}

/// Activates `M = min(total tx antennas, total rx antennas)` virtual
/// transmitters and receivers, node-major then antenna-minor.
pub fn expand_mimo_to_virtual(t: &Topology) -> VirtualTopology {
    let m = t
        .tx_antennas
        .iter()
        .sum::<usize>()
        .min(t.rx_antennas.iter().sum());
    VirtualTopology {
        m,
        tx_map: enumerate_antennas(&t.tx_antennas, m),
        rx_map: enumerate_antennas(&t.rx_antennas, m),
    }
}

/// Diagonal extended channels `H_{l,k}` for one trial, stored as their
/// diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n_ext: usize,
    receivers: usize,
    transmitters: usize,
    model: ChannelModel,
    diag: Vec<Complex64>,
}

impl ChannelRealization {
    /// `diagonals[l][k]` is the length-`n_ext` diagonal of `H_{l,k}`.
    pub fn from_diagonals(
        model: ChannelModel,
        n_ext: usize,
        diagonals: &[Vec<Vec<Complex64>>],
    ) -> Result<Self, ChannelError> {
        let receivers = diagonals.len();
        let transmitters = diagonals.first().map_or(0, Vec::len);
        let mut diag = Vec::with_capacity(receivers * transmitters * n_ext);
        for row in diagonals {
            if row.len() != transmitters {
                return Err(ChannelError::Shape {
                    expected: transmitters,
                    got: row.len(),
                });
            }
            for d in row {
                if d.len() != n_ext {
                    return Err(ChannelError::Shape {
                        expected: n_ext,
                        got: d.len(),
                    });
                }
                diag.extend_from_slice(d);
            }
        }
        Ok(Self {
            n_ext,
            receivers,
            transmitters,
            model,
            diag,
        })
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    pub fn receivers(&self) -> usize {
        self.receivers
    }

    pub fn transmitters(&self) -> usize {
        self.transmitters
    }

    pub fn model(&self) -> ChannelModel {
        self.model
    }

    /// Diagonal of `H_{l,k}` (zero-based indices).
    pub fn diag(&self, l: usize, k: usize) -> &[Complex64] {
        let start = (l * self.transmitters + k) * self.n_ext;
        &self.diag[start..start + self.n_ext]
    }

    /// Scalar channel `h_{l,k}` in extension slot `slot`.
    pub fn coefficient(&self, l: usize, k: usize, slot: usize) -> Complex64 {
        self.diag(l, k)[slot]
    }
}

fn draw<R: Rng + ?Sized>(model: ChannelModel, rng: &mut R) -> Complex64 {
    match model {
        ChannelModel::Real => Complex64::new(rng.sample(StandardNormal), 0.0),
        ChannelModel::Complex => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        }
    }
}

/// Draws every coefficient i.i.d. with unit variance; each extension slot is
/// an independent draw. Exact zeros are redrawn.
pub fn sample_extended_channel<R: Rng + ?Sized>(
    receivers: usize,
    transmitters: usize,
    n_ext: usize,
    model: ChannelModel,
    rng: &mut R,
) -> ChannelRealization {
    let diag = (0..receivers * transmitters * n_ext)
        .map(|_| loop {
            let h = draw(model, rng);
            if h != Complex64::new(0.0, 0.0) {
                break h;
            }
        })
        .collect();
    ChannelRealization {
        n_ext,
        receivers,
        transmitters,
        model,
        diag,
    }
}

/// Per-receiver noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    sigma2: f64,
}

impl NoiseModel {
    pub fn new(sigma2: f64) -> Result<Self, ChannelError> {
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(ChannelError::Noise(sigma2));
        }
        Ok(Self { sigma2 })
    }

    pub fn noiseless() -> Self {
        Self { sigma2: 0.0 }
    }

    /// Noise variance giving average link SNR `rho` at transmit power `p`.
    pub fn from_snr(p: f64, rho: f64) -> Result<Self, ChannelError> {
        Self::new(p / rho)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

/// Length-`n_ext` vector of i.i.d. noise with variance `sigma2`.
pub fn sample_noise<R: Rng + ?Sized>(
    n_ext: usize,
    noise: NoiseModel,
    model: ChannelModel,
    rng: &mut R,
) -> Vec<Complex64> {
    let scale = noise.sigma2.sqrt();
    (0..n_ext).map(|_| draw(model, rng) * scale).collect()
}

/// Average per-link SNR `p / sigma^2` under unit-variance channels.
pub fn average_link_snr(p_signal: f64, noise: NoiseModel) -> f64 {
    if p_signal == 0.0 {
        return 0.0;
    }
    p_signal / noise.sigma2
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn replay_is_deterministic() {
        let a = sample_extended_channel(2, 2, 3, ChannelModel::Complex, &mut rng(7));
        let b = sample_extended_channel(2, 2, 3, ChannelModel::Complex, &mut rng(7));
        assert_eq!(a, b);
        let c = sample_extended_channel(2, 2, 3, ChannelModel::Complex, &mut rng(8));
        assert_ne!(a, c);
    }

    #[test]
    fn unit_variance_law() {
        for model in [ChannelModel::Complex, ChannelModel::Real] {
            let h = sample_extended_channel(1, 1, 100_000, model, &mut rng(1));
            let mean = h.diag(0, 0).iter().map(|z| z.norm_sqr()).sum::<f64>() / 100_000.0;
            assert!((mean - 1.0).abs() < 0.02, "{model}: {mean}");
        }
    }

    #[test]
    fn real_model_has_no_imaginary_part() {
        let h = sample_extended_channel(3, 3, 50, ChannelModel::Real, &mut rng(2));
        for l in 0..3 {
            for k in 0..3 {
                assert!(h.diag(l, k).iter().all(|z| z.im == 0.0 && z.re != 0.0));
            }
        }
    }

    #[test]
    fn entries_are_uncorrelated() {
        let trials = 100_000;
        let mut r = rng(3);
        let (mut cross_pair, mut cross_slot) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for _ in 0..trials {
            let h = sample_extended_channel(2, 2, 2, ChannelModel::Complex, &mut r);
            cross_pair += h.coefficient(0, 0, 0) * h.coefficient(1, 0, 0).conj();
            cross_slot += h.coefficient(0, 1, 0) * h.coefficient(0, 1, 1).conj();
        }
        assert!(cross_pair.norm() / (trials as f64) < 0.02);
        assert!(cross_slot.norm() / (trials as f64) < 0.02);
    }

    #[test]
    fn noise_samples() {
        let zero = sample_noise(
            8,
            NoiseModel::noiseless(),
            ChannelModel::Complex,
            &mut rng(4),
        );
        assert!(zero.iter().all(|z| z.norm() == 0.0));

        let noise = NoiseModel::new(2.0).unwrap();
        for model in [ChannelModel::Complex, ChannelModel::Real] {
            let v = sample_noise(100_000, noise, model, &mut rng(5));
            let var = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64;
            assert!((var - 2.0).abs() < 0.05, "{model}: {var}");
        }
        let a = sample_noise(5, noise, ChannelModel::Complex, &mut rng(6));
        let b = sample_noise(5, noise, ChannelModel::Complex, &mut rng(6));
        assert_eq!(a, b);
        assert!(NoiseModel::new(-1.0).is_err());
        assert!(NoiseModel::new(f64::NAN).is_err());
    }

    #[test]
    fn virtual_expansion() {
        let v = expand_mimo_to_virtual(&Topology::single_antenna(2, 2).unwrap());
        assert_eq!(v.m, 2);
        assert_eq!(v.tx_map, vec![(0, 0), (1, 0)]);
        assert_eq!(v.rx_map, vec![(0, 0), (1, 0)]);

        let v = expand_mimo_to_virtual(&Topology::new(vec![2, 1], vec![1, 1]).unwrap());
        assert_eq!(v.m, 2);
        assert_eq!(v.tx_map, vec![(0, 0), (0, 1)]);
        assert_eq!(v.rx_map, vec![(0, 0), (1, 0)]);

        let v = expand_mimo_to_virtual(&Topology::new(vec![1, 1, 1], vec![2, 2]).unwrap());
        assert_eq!(v.m, 3);
        assert_eq!(v.rx_map, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(v.virtual_receivers_of(0), 2);
        assert_eq!(v.virtual_receivers_of(1), 1);

        assert!(Topology::new(vec![1, 0], vec![1]).is_err());
        assert!(Topology::new(vec![], vec![1]).is_err());
    }

    #[test]
    fn link_snr() {
        let unit = NoiseModel::new(1.0).unwrap();
        assert_eq!(average_link_snr(1.0, unit), 1.0);
        assert_eq!(average_link_snr(100.0, unit), 100.0);
        assert_eq!(average_link_snr(0.0, unit), 0.0);
    }

    #[test]
    fn model_parsing() {
        assert_eq!("real".parse::<ChannelModel>().unwrap(), ChannelModel::Real);
        assert_eq!(ChannelModel::Complex.to_string(), "complex");
        assert!("quaternion".parse::<ChannelModel>().is_err());
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Codebook layers. Each layer/block pair owns an independent key, and the
/// message tuple selects the ChaCha stream, so any codeword can be drawn on
/// demand without storing the codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub(crate) enum Layer {
    V = 1,
    W0 = 2,
    W1 = 3,
    W2 = 4,
    X3 = 5,
    Noise = 6,
    Messages = 7,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Codebooks {
    seed: u64,
    trial: u64,
    pub n: usize,
}

impl Codebooks {
    pub fn new(seed: u64, trial: u64, n: usize) -> Self {
        Self { seed, trial, n }
    }

    pub fn rng(&self, layer: Layer, block: usize, stream: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.trial.to_le_bytes());
        key[16] = layer as u8;
        key[24..32].copy_from_slice(&(block as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        rng
    }

    /// Adds `gain · std · N(0, I_n)` of codeword `stream` to `out`.
    pub fn add_word(&self, layer: Layer, block: usize, stream: u64, std: f64, gain: f64, out: &mut [f64]) {
        let scale = std * gain;
        if scale == 0.0 {
            return;
        }
        let mut rng = self.rng(layer, block, stream);
        for o in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *o += scale * z;
        }
    }

    pub fn word(&self, layer: Layer, block: usize, stream: u64, std: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.add_word(layer, block, stream, std, 1.0, &mut out);
        out
    }
}

/// Minimum-distance search over `count` candidates; ties go to the lowest
/// index. Returns (index, tied).
pub(crate) fn ml_decode(count: u64, y: &[f64], mut mean: impl FnMut(u64, &mut [f64])) -> (u64, bool) {
    let mut buf = vec![0.0; y.len()];
    let mut best = (0, f64::INFINITY);
    let mut tied = false;
    for m in 0..count {
        buf.fill(0.0);
        mean(m, &mut buf);
        let d: f64 = y.iter().zip(&buf).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best.1 {
            best = (m, d);
            tied = false;
        } else if d == best.1 {
            tied = true;
        }
    }
    (best.0, tied)
}

/// Noise for the three outputs of one block, built as a cascade so that
/// the noisier outputs are degraded versions of the cleaner ones.
pub(crate) fn cascade_noise(books: &Codebooks, block: usize, variances: [f64; 3]) -> [Vec<f64>; 3] {
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| variances[a].total_cmp(&variances[b]));
    let mut rng = books.rng(Layer::Noise, block, 0);
    let n = books.n;
    let mut out: [Vec<f64>; 3] = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut running = vec![0.0; n];
    let mut prev = 0.0;
    for &k in &order {
        let std = (variances[k] - prev).max(0.0).sqrt();
        for r in running.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *r += std * z;
        }
        out[k].copy_from_slice(&running);
        prev = variances[k];
    }
    out
}

pub(crate) fn block_power(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

//! Function families used by the experiments: indicators of subgroups,
//! radial powers of the ultrametric norm, and seeded random ensembles whose
//! Fourier tails are rescaled shell-by-shell to realize a prescribed decay
//! profile exactly.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dual::Irrep;
use crate::error::{Error, Result};
use crate::tower::TowerSpec;
use crate::transform::{inverse, FourierCoefficients, FunctionSample};

/// Declarative description of a test function, as consumed by configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `1_{G_m}`, `m < N`.
    Indicator { m: usize },
    /// `f(x) = |x|^alpha`.
    Radial { alpha: f64 },
    /// Random Fourier coefficients rescaled so that the `l^q` tail sum is
    /// exactly `|G/G_k|^{-alpha q}` (`q = 2` gives exact `L^2` tails).
    RandomFourier {
        alpha: f64,
        #[serde(default = "default_q")]
        q: f64,
        seed: u64,
    },
    /// Random coefficients with the Dini-Lipschitz tail profile
    /// `|G/G_k|^{-2 alpha} (log |G/G_k|)^{2 nu}` (monotone envelope).
    Dini { alpha: f64, nu: f64, seed: u64 },
    /// Explicit real sample values in canonical index order.
    Values { values: Vec<f64> },
}

fn default_q() -> f64 {
    2.0
}

/// Materializes a `FunctionSpec` on a tower.
pub fn generate(tower: &TowerSpec, dual: &[Irrep], spec: &FunctionSpec) -> Result<FunctionSample> {
    match spec {
        FunctionSpec::Indicator { m } => indicator(tower, *m),
        FunctionSpec::Radial { alpha } => radial(tower, *alpha),
        FunctionSpec::RandomFourier { alpha, q, seed } => {
            random_fourier_lq(tower, dual, *alpha, *q, *seed)
        }
        FunctionSpec::Dini { alpha, nu, seed } => dini(tower, dual, *alpha, *nu, *seed),
        FunctionSpec::Values { values } => FunctionSample::new(
            tower,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        ),
    }
}

/// `1_{G_m}` as a sample on `G/G_N`; requires `m < N` so the function is
/// neither constant nor a point mass.
pub fn indicator(tower: &TowerSpec, m: usize) -> Result<FunctionSample> {
    if m >= tower.depth() {
        return Err(Error::IndicatorLevel {
            m,
            depth: tower.depth(),
        });
    }
    Ok(FunctionSample::from_fn(tower, |x| {
        if tower.depth_of(&tower.element_at(x)) >= m {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `f(x) = |x|^alpha` (0 at the identity class).
pub fn radial(tower: &TowerSpec, alpha: f64) -> Result<FunctionSample> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidExponent(alpha));
    }
    Ok(FunctionSample::from_fn(tower, |x| {
        let (depth, norm) = tower.depth_and_norm(&tower.element_at(x));
        if depth == tower.depth() {
            Complex64::new(0.0, 0.0)
        } else {
            let nf = *norm.numer() as f64 / *norm.denom() as f64;
            Complex64::new(nf.powf(alpha), 0.0)
        }
    }))
}

/// `random_fourier(alpha, seed)`: isotropic complex Gaussian matrix
/// coefficients, rescaled per level shell so that the Plancherel tail is
/// `tail(k) = |G/G_k|^{-2 alpha}` exactly for every `k < N`.
pub fn random_fourier(
    tower: &TowerSpec,
    dual: &[Irrep],
    alpha: f64,
    seed: u64,
) -> Result<FunctionSample> {
    random_fourier_lq(tower, dual, alpha, 2.0, seed)
}

/// Generalization with `l^q` shell masses: the tail
/// `S(k) = sum_{<xi> > |G/G_k|} d^{q(2/q - 1/2)} ||fhat||_HS^q` equals
/// `|G/G_k|^{-alpha q}` exactly.
pub fn random_fourier_lq(
    tower: &TowerSpec,
    dual: &[Irrep],
    alpha: f64,
    q: f64,
    seed: u64,
) -> Result<FunctionSample> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidExponent(alpha));
    }
    if q < 1.0 {
        return Err(Error::InvalidLp(q));
    }
    let tail = |k: usize| (tower.quotient_size(k) as f64).powf(-alpha * q);
    shaped_random(tower, dual, q, seed, &tail)
}

/// Dini-Lipschitz ensemble: `L^2` tail following the monotone envelope of
/// `|G/G_k|^{-2 alpha} (log |G/G_k|)^{2 nu}`.  (The raw profile increases on
/// the first few shells when `nu > 0`; a tail sequence must be
/// nonincreasing, so the envelope `max_{j >= k}` is used.)
pub fn dini(
    tower: &TowerSpec,
    dual: &[Irrep],
    alpha: f64,
    nu: f64,
    seed: u64,
) -> Result<FunctionSample> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidExponent(alpha));
    }
    let n = tower.depth();
    let raw: Vec<f64> = (0..n)
        .map(|k| {
            let qk = tower.quotient_size(k) as f64;
            if k == 0 {
                // log|G/G_0| = 0: profile undefined; pin to the next shell
                f64::NAN
            } else {
                qk.powf(-2.0 * alpha) * qk.ln().powf(2.0 * nu)
            }
        })
        .collect();
    let mut envelope = vec![0.0; n];
    let mut running = 0.0f64;
    for k in (0..n).rev() {
        if !raw[k].is_nan() {
            running = running.max(raw[k]);
        }
        envelope[k] = running;
    }
    let tail = move |k: usize| envelope[k];
    shaped_random(tower, dual, 2.0, seed, &tail)
}

/// Draws Gaussian blocks, then rescales each level shell `n >= 1` so its
/// `l^q` mass equals `tail(n-1) - tail(n)` (with `tail(N)` taken as 0); the
/// trivial coefficient is zeroed so the profile is exact at every `k`.
fn shaped_random(
    tower: &TowerSpec,
    dual: &[Irrep],
    q: f64,
    seed: u64,
    tail: &dyn Fn(usize) -> f64,
) -> Result<FunctionSample> {
    let depth = tower.depth();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut blocks: Vec<nalgebra::DMatrix<Complex64>> = dual
        .iter()
        .map(|pi| {
            nalgebra::DMatrix::from_fn(pi.dim(), pi.dim(), |_, _| {
                Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
            })
        })
        .collect();
    let weight_exp = q * (2.0 / q - 0.5); // d^{2 - q/2}
    for shell in 1..=depth {
        let target = if shell == depth {
            tail(shell - 1)
        } else {
            tail(shell - 1) - tail(shell)
        };
        if target < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "tail profile increases across shell {shell}"
            )));
        }
        let mass: f64 = dual
            .iter()
            .zip(&blocks)
            .filter(|(pi, _)| pi.level() == shell)
            .map(|(pi, b)| {
                let hs = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                (pi.dim() as f64).powf(weight_exp) * hs.powf(q)
            })
            .sum();
        let factor = if mass > 0.0 {
            (target.max(0.0) / mass).powf(1.0 / q)
        } else {
            0.0
        };
        for (pi, b) in dual.iter().zip(blocks.iter_mut()) {
            if pi.level() == shell {
                b.iter_mut().for_each(|z| *z *= factor);
            }
        }
    }
    // zero the trivial block: the profile constrains only the tails
    for (pi, b) in dual.iter().zip(blocks.iter_mut()) {
        if pi.is_trivial() {
            b.fill(Complex64::new(0.0, 0.0));
        }
    }
    let coeffs = FourierCoefficients::from_blocks(blocks);
    inverse(tower, dual, &coeffs)
}

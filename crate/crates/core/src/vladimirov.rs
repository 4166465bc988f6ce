//! The group Gamma function and the Vladimirov-Taibleson operator `D^a`,
//! in direct (hypersingular integral) and spectral (Fourier multiplier) form,
//! together with the Lie-normalized variant and spectral Sobolev norms.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dual::Irrep;
use crate::error::{Error, Result};
use crate::tower::{Rat, TowerSpec};
use crate::transform::{forward, inverse, FunctionSample};

/// Normalization mode of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VtMode {
    /// `D^a` with the ultrametric `|y|` and prefactor `-1/Gamma(a)`.
    Group,
    /// `D^alpha` with the Lie norm `||y||`, homogeneous degree `alpha + d`,
    /// and prefactor `(1 - l^alpha)/(1 - l^{-(alpha+d)})`.
    Lie,
}

/// Spectral multiplier table of the operator: one eigenvalue per level.
#[derive(Debug, Clone)]
pub struct VtSymbol {
    pub a: f64,
    pub mode: VtMode,
    /// `lambda(n)` for `n = 0..=N`; `lambda(0) = 0`.
    eigenvalues: Vec<f64>,
    gamma_sup: f64,
}

impl VtSymbol {
    pub fn eigenvalue(&self, level: usize) -> f64 {
        self.eigenvalues[level]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn gamma_sup(&self) -> f64 {
        self.gamma_sup
    }
}

fn check_exponent(a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidExponent(a));
    }
    Ok(())
}

fn constant_order(tower: &TowerSpec) -> Option<u64> {
    let k = tower.kappa();
    if k.iter().all(|&x| x == k[0]) {
        Some(k[0])
    } else {
        None
    }
}

/// Partial sums of the group Gamma function:
/// `Gamma(a, n) = |G_{n-1}/G_n|^{-(a+1)}
///              + sum_{k<n} |G_k/G_n|^{-a} (1 - |G_k/G_{k+1}|^{-1})`,
/// returned for `n = 1..=N`.
pub fn gamma_partials(tower: &TowerSpec, a: f64) -> Result<Vec<f64>> {
    check_exponent(a)?;
    let n_max = tower.depth();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let kn = tower.kappa()[n - 1] as f64;
        let mut g = kn.powf(-(a + 1.0));
        for k in 0..n {
            let index = (tower.quotient_size(n) / tower.quotient_size(k)) as f64;
            g += index.powf(-a) * (1.0 - 1.0 / tower.kappa()[k] as f64);
        }
        out.push(g);
    }
    Ok(out)
}

/// `Gamma(a)`: the closed form `-(1 - k^{-(a+1)})/(1 - k^a)` for constant
/// order `k` (the partials increase toward it), else the max of the partials.
pub fn gamma_sup(tower: &TowerSpec, a: f64) -> Result<f64> {
    check_exponent(a)?;
    if let Some(k) = constant_order(tower) {
        let k = k as f64;
        Ok(-(1.0 - k.powf(-(a + 1.0))) / (1.0 - k.powf(a)))
    } else {
        let partials = gamma_partials(tower, a)?;
        Ok(partials.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

fn rat_pow(base: Rat, exp: i64) -> Rat {
    if exp >= 0 {
        let mut r = Rat::one();
        for _ in 0..exp {
            r *= base;
        }
        r
    } else {
        rat_pow(base.recip(), -exp)
    }
}

/// Exact rational `Gamma(a, n)` for integer `a >= 1`, `n = 1..=N`.
pub fn gamma_partials_rat(tower: &TowerSpec, a: i64) -> Result<Vec<Rat>> {
    if a <= 0 {
        return Err(Error::InvalidExponent(a as f64));
    }
    let n_max = tower.depth();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let kn = Rat::from_integer(tower.kappa()[n - 1] as i128);
        let mut g = rat_pow(kn, -(a + 1));
        for k in 0..n {
            let index =
                Rat::from_integer((tower.quotient_size(n) / tower.quotient_size(k)) as i128);
            let kk = Rat::from_integer(tower.kappa()[k] as i128);
            g += rat_pow(index, -a) * (Rat::one() - kk.recip());
        }
        out.push(g);
    }
    Ok(out)
}

/// Exact rational `Gamma(a)` for integer `a >= 1` (closed form when the
/// order is constant).
pub fn gamma_sup_rat(tower: &TowerSpec, a: i64) -> Result<Rat> {
    if a <= 0 {
        return Err(Error::InvalidExponent(a as f64));
    }
    if let Some(k) = constant_order(tower) {
        let k = Rat::from_integer(k as i128);
        Ok(-(Rat::one() - rat_pow(k, -(a + 1))) / (Rat::one() - rat_pow(k, a)))
    } else {
        Ok(gamma_partials_rat(tower, a)?.into_iter().max().unwrap())
    }
}

/// Exact rational eigenvalues `lambda(n) = Gamma(a,n)/Gamma(a) |G/G_n|^a`
/// for integer `a >= 1`, `n = 0..=N` (group mode; `lambda(0) = 0`).
pub fn eigenvalues_rat(tower: &TowerSpec, a: i64) -> Result<Vec<Rat>> {
    let partials = gamma_partials_rat(tower, a)?;
    let sup = gamma_sup_rat(tower, a)?;
    let mut out = vec![Rat::zero()];
    for (n, g) in partials.iter().enumerate() {
        let scale = rat_pow(Rat::from_integer(tower.quotient_size(n + 1) as i128), a);
        out.push(g / sup * scale);
    }
    Ok(out)
}

/// Builds the spectral multiplier table.
///
/// Group mode: `lambda(n) = Gamma(a,n)/Gamma(a) |G/G_n|^a`.  Lie mode
/// (l-adic families only): `lambda(n) = l^{an} - (1 - l^{-d})/(1 - l^{-(a+d)})`
/// for `n >= 1`.  Both set `lambda(0) = 0`.
pub fn vt_symbol(tower: &TowerSpec, a: f64, mode: VtMode) -> Result<VtSymbol> {
    check_exponent(a)?;
    let gamma_sup_val = gamma_sup(tower, a)?;
    let mut eigenvalues = vec![0.0];
    match mode {
        VtMode::Group => {
            let partials = gamma_partials(tower, a)?;
            for (n, g) in partials.iter().enumerate() {
                eigenvalues.push(g / gamma_sup_val * (tower.quotient_size(n + 1) as f64).powf(a));
            }
        }
        VtMode::Lie => {
            let l = tower.prime().ok_or(Error::WrongFamily {
                required: "padic-module or heisenberg",
            })? as f64;
            let d = tower.coord_dim() as f64;
            let constant = (1.0 - l.powf(-d)) / (1.0 - l.powf(-(a + d)));
            for n in 1..=tower.depth() {
                eigenvalues.push(l.powf(a * n as f64) - constant);
            }
        }
    }
    Ok(VtSymbol {
        a,
        mode,
        eigenvalues,
        gamma_sup: gamma_sup_val,
    })
}

/// Eigenvalues of the bracket operator `D`: the value `<xi>_G` by level,
/// `(1 - l^{-d})/(1 - l^{-(1+d)})` at level 0 and `l^n` at level `n >= 1`.
pub fn d_bracket(tower: &TowerSpec, level: usize) -> Result<f64> {
    let l = tower.prime().ok_or(Error::WrongFamily {
        required: "padic-module or heisenberg",
    })? as f64;
    let d = tower.coord_dim() as f64;
    if level == 0 {
        Ok((1.0 - l.powf(-d)) / (1.0 - l.powf(-(1.0 + d))))
    } else {
        Ok(l.powi(level as i32))
    }
}

/// Direct hypersingular-integral application.  The `y` in the identity class
/// `G_N` contributes nothing because `f` is constant on `G_N`-cosets.
pub fn vt_apply_direct(
    tower: &TowerSpec,
    f: &FunctionSample,
    a: f64,
    mode: VtMode,
) -> Result<FunctionSample> {
    check_exponent(a)?;
    if f.len() != tower.group_size() {
        return Err(Error::LengthMismatch {
            got: f.len(),
            expected: tower.group_size(),
        });
    }
    let n = tower.group_size();
    let w = 1.0 / n as f64;
    // prefactor and per-point kernel weight 1/|y|^{a+1} (group) or
    // 1/||y||^{a+d} (lie)
    let (prefactor, kernel): (f64, Vec<f64>) = match mode {
        VtMode::Group => {
            let pre = -1.0 / gamma_sup(tower, a)?;
            let kern = (0..n)
                .map(|y| {
                    let (depth, norm) = tower.depth_and_norm(&tower.element_at(y));
                    if depth == tower.depth() {
                        0.0
                    } else {
                        let nf = *norm.numer() as f64 / *norm.denom() as f64;
                        nf.powf(-(a + 1.0))
                    }
                })
                .collect();
            (pre, kern)
        }
        VtMode::Lie => {
            let l = tower.prime().ok_or(Error::WrongFamily {
                required: "padic-module or heisenberg",
            })? as f64;
            let d = tower.coord_dim() as f64;
            let pre = (1.0 - l.powf(a)) / (1.0 - l.powf(-(a + d)));
            let kern = (0..n)
                .map(|y| {
                    let depth = tower.depth_of(&tower.element_at(y));
                    if depth == tower.depth() {
                        0.0
                    } else {
                        // ||y|| = l^{-depth}
                        l.powf((a + d) * depth as f64)
                    }
                })
                .collect();
            (pre, kern)
        }
    };
    tower.coords_table();
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|x| {
            let fx = f.values()[x];
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..n {
                let k = kernel[y];
                if k == 0.0 {
                    continue;
                }
                let xy_inv = tower.mul_idx(x, tower.inv_idx(y));
                acc += (f.values()[xy_inv] - fx) * k;
            }
            acc * (prefactor * w)
        })
        .collect();
    FunctionSample::new(tower, values)
}

/// Spectral application: multiply each Fourier block by `lambda(level)`.
pub fn vt_apply_spectral(
    tower: &TowerSpec,
    dual: &[Irrep],
    f: &FunctionSample,
    a: f64,
    mode: VtMode,
) -> Result<FunctionSample> {
    let symbol = vt_symbol(tower, a, mode)?;
    let mut coeffs = forward(tower, dual, f)?;
    for (i, pi) in dual.iter().enumerate() {
        let lambda = symbol.eigenvalue(pi.level());
        coeffs.scale_block(i, lambda);
    }
    inverse(tower, dual, &coeffs)
}

/// Spectral Sobolev norm `(||f||_2^2 + ||D^k f||_2^2)^{1/2}` (group mode).
pub fn sobolev_norm(tower: &TowerSpec, dual: &[Irrep], f: &FunctionSample, k: f64) -> Result<f64> {
    check_exponent(k)?;
    let symbol = vt_symbol(tower, k, VtMode::Group)?;
    let coeffs = forward(tower, dual, f)?;
    let mut total = 0.0;
    for (i, pi) in dual.iter().enumerate() {
        let lambda = symbol.eigenvalue(pi.level());
        total += pi.dim() as f64 * coeffs.hs_norm_sq(i) * (1.0 + lambda * lambda);
    }
    Ok(total.sqrt())
}

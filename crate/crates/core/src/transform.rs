//! Nonabelian Fourier transform and norms.
//!
//! Conventions: `fhat(pi) = int_G f(x) pi(x)^* dx` against normalized Haar
//! measure, with inversion `f(x) = sum_pi d_pi tr(pi(x) fhat(pi))`.  Because
//! every irrep acts by monomial matrices, both directions cost
//! `O(|G| * sum_pi d_pi)` rather than `O(|G| * sum_pi d_pi^2)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dual::Irrep;
use crate::error::{Error, Result};
use crate::tower::TowerSpec;

/// A locally constant function sampled on `G/G_N`, indexed by canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSample {
    values: Vec<Complex64>,
}

impl FunctionSample {
    pub fn new(tower: &TowerSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != tower.group_size() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                expected: tower.group_size(),
            });
        }
        Ok(FunctionSample { values })
    }

    pub fn from_fn(tower: &TowerSpec, f: impl FnMut(usize) -> Complex64) -> Self {
        FunctionSample {
            values: (0..tower.group_size()).map(f).collect(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Left translation `(tau_h f)(x) = f(hx)`.
    pub fn translate(&self, tower: &TowerSpec, h: usize) -> FunctionSample {
        FunctionSample {
            values: (0..self.values.len())
                .map(|x| self.values[tower.mul_idx(h, x)])
                .collect(),
        }
    }

    pub fn sub(&self, other: &FunctionSample) -> FunctionSample {
        FunctionSample {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `L^p` norm against normalized Haar measure; `p = +inf` gives the sup.
    pub fn lp_norm(&self, tower: &TowerSpec, p: f64) -> Result<f64> {
        if p.is_infinite() {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        if p < 1.0 {
            return Err(Error::InvalidLp(p));
        }
        let w = 1.0 / tower.group_size() as f64;
        let sum: f64 = self.values.iter().map(|v| w * v.norm().powf(p)).sum();
        Ok(sum.powf(1.0 / p))
    }

    pub fn l2_norm_sq(&self, tower: &TowerSpec) -> f64 {
        let w = 1.0 / tower.group_size() as f64;
        self.values.iter().map(|v| w * v.norm_sqr()).sum()
    }
}

/// Matrix Fourier coefficients, block-aligned with a dual enumeration.
#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    blocks: Vec<DMatrix<Complex64>>,
}

impl FourierCoefficients {
    pub fn from_blocks(blocks: Vec<DMatrix<Complex64>>) -> Self {
        FourierCoefficients { blocks }
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &DMatrix<Complex64> {
        &self.blocks[i]
    }

    /// Scales one block by a real factor (spectral multiplier application).
    pub fn scale_block(&mut self, i: usize, factor: f64) {
        self.blocks[i].iter_mut().for_each(|z| *z *= factor);
    }

    /// Squared Hilbert-Schmidt norm of one block.
    pub fn hs_norm_sq(&self, i: usize) -> f64 {
        self.blocks[i].iter().map(|z| z.norm_sqr()).sum()
    }

    /// `sum_pi d_pi ||fhat(pi)||_HS^2`, the Plancherel energy.
    pub fn plancherel_energy(&self, dual: &[Irrep]) -> f64 {
        dual.iter()
            .enumerate()
            .map(|(i, pi)| pi.dim() as f64 * self.hs_norm_sq(i))
            .sum()
    }

    /// Dual `l^q` norm: `(sum_pi d_pi^{q(2/q - 1/2)} ||fhat(pi)||_HS^q)^{1/q}`.
    pub fn dual_lq_norm(&self, dual: &[Irrep], q: f64) -> Result<f64> {
        if q < 1.0 {
            return Err(Error::InvalidLp(q));
        }
        let exponent = q * (2.0 / q - 0.5);
        let sum: f64 = dual
            .iter()
            .enumerate()
            .map(|(i, pi)| {
                (pi.dim() as f64).powf(exponent) * self.hs_norm_sq(i).sqrt().powf(q)
            })
            .sum();
        Ok(sum.powf(1.0 / q))
    }
}

/// Forward transform: `fhat(pi) = sum_x w f(x) pi(x)^dagger`.
pub fn forward(tower: &TowerSpec, dual: &[Irrep], f: &FunctionSample) -> Result<FourierCoefficients> {
    if f.len() != tower.group_size() {
        return Err(Error::LengthMismatch {
            got: f.len(),
            expected: tower.group_size(),
        });
    }
    let n = tower.group_size();
    let w = 1.0 / n as f64;
    tower.coords_table(); // force the cache before the parallel section
    let blocks: Vec<DMatrix<Complex64>> = dual
        .par_iter()
        .map(|pi| {
            let d = pi.dim();
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            let mut col = vec![0usize; d];
            let mut phase = vec![0u64; d];
            for x in 0..n {
                let fx = f.values[x];
                if fx == Complex64::new(0.0, 0.0) {
                    continue;
                }
                pi.action(tower, tower.coords_of(x), &mut col, &mut phase);
                for j in 0..d {
                    // pi(x)^dagger has its (j, col[j]) entry equal to
                    // conj(root(phase[j]))
                    m[(j, col[j])] += fx * tower.root(phase[j]).conj() * w;
                }
            }
            m
        })
        .collect();
    Ok(FourierCoefficients { blocks })
}

/// Inverse transform: `f(x) = sum_pi d_pi tr(pi(x) fhat(pi))`.
pub fn inverse(
    tower: &TowerSpec,
    dual: &[Irrep],
    coeffs: &FourierCoefficients,
) -> Result<FunctionSample> {
    if coeffs.blocks.len() != dual.len() {
        return Err(Error::LengthMismatch {
            got: coeffs.blocks.len(),
            expected: dual.len(),
        });
    }
    let n = tower.group_size();
    tower.coords_table();
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|x| {
            let coords = tower.coords_of(x);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut col = Vec::new();
            let mut phase = Vec::new();
            for (pi, block) in dual.iter().zip(&coeffs.blocks) {
                let d = pi.dim();
                col.resize(d, 0);
                phase.resize(d, 0);
                pi.action(tower, coords, &mut col, &mut phase);
                let mut tr = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    // tr(pi(x) C) picks up pi(x)_{col[j], j} * C_{j, col[j]}
                    tr += tower.root(phase[j]) * block[(j, col[j])];
                }
                acc += d as f64 * tr;
            }
            acc
        })
        .collect();
    Ok(FunctionSample { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::enumerate_dual;
    use crate::tower::{make_tower, Family, TowerSpec};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn z27() -> Arc<TowerSpec> {
        make_tower(Family::VilenkinProduct { orders: vec![3; 3] }, 3).unwrap()
    }

    fn indicator_g1(t: &TowerSpec) -> FunctionSample {
        // 1_{G_1} as a function on G/G_N
        FunctionSample::from_fn(t, |x| {
            if t.depth_of(&t.element_at(x)) >= 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn indicator_coefficients_on_z27() {
        // fhat(chi_xi) = 1/3 exactly when chi_xi is trivial on G_1
        // (xi in {0, 9, 18}), zero otherwise.
        let t = z27();
        let dual = enumerate_dual(&t).unwrap();
        let f = indicator_g1(&t);
        let coeffs = forward(&t, &dual, &f).unwrap();
        let mut nonzero = 0;
        for (i, pi) in dual.iter().enumerate() {
            let c = coeffs.block(i)[(0, 0)];
            if pi.level() <= 1 {
                assert!((c - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
                nonzero += 1;
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
        assert_eq!(nonzero, 3);
    }

    #[test]
    fn plancherel_for_indicator() {
        let t = z27();
        let dual = enumerate_dual(&t).unwrap();
        let f = indicator_g1(&t);
        let coeffs = forward(&t, &dual, &f).unwrap();
        let space = f.l2_norm_sq(&t);
        let freq = coeffs.plancherel_energy(&dual);
        assert!((space - 1.0 / 3.0).abs() < 1e-12);
        assert!((space - freq).abs() < 1e-12);
        // dual l^2 norm agrees with sqrt of the energy
        let l2 = coeffs.dual_lq_norm(&dual, 2.0).unwrap();
        assert!((l2 * l2 - freq).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_on_heisenberg() {
        let t = make_tower(Family::Heisenberg { prime: 3, dim: 1 }, 2).unwrap();
        let dual = enumerate_dual(&t).unwrap();
        let f = FunctionSample::from_fn(&t, |x| {
            Complex64::new((x as f64 * 0.37).sin(), (x as f64 * 0.11).cos())
        });
        let coeffs = forward(&t, &dual, &f).unwrap();
        let g = inverse(&t, &dual, &coeffs).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-9);
        }
        // Plancherel on a nonabelian group
        assert!((f.l2_norm_sq(&t) - coeffs.plancherel_energy(&dual)).abs() < 1e-9);
    }

    #[test]
    fn translation_covariance() {
        // g(x) = f(hx) has ghat(pi) = fhat(pi) pi(h)
        let t = make_tower(Family::Heisenberg { prime: 3, dim: 1 }, 1).unwrap();
        let dual = enumerate_dual(&t).unwrap();
        let f = FunctionSample::from_fn(&t, |x| Complex64::new((x as f64).sqrt(), 0.3 * x as f64));
        let fh = forward(&t, &dual, &f).unwrap();
        for h in [1usize, 7, 20] {
            let g = f.translate(&t, h);
            let gh = forward(&t, &dual, &g).unwrap();
            for (i, pi) in dual.iter().enumerate() {
                let expect = fh.block(i) * pi.matrix(&t, h);
                assert!((gh.block(i) - expect).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn hausdorff_young() {
        // ||fhat||_{q'} <= ||f||_p for 1 <= p <= 2, 1/p + 1/q' = 1
        let t = make_tower(Family::Heisenberg { prime: 3, dim: 1 }, 1).unwrap();
        let dual = enumerate_dual(&t).unwrap();
        let f = FunctionSample::from_fn(&t, |x| {
            Complex64::new(((x * x) % 13) as f64 - 6.0, (x % 5) as f64)
        });
        let coeffs = forward(&t, &dual, &f).unwrap();
        for p in [1.2f64, 1.5, 2.0] {
            let qp = p / (p - 1.0);
            let lhs = coeffs.dual_lq_norm(&dual, qp).unwrap();
            let rhs = f.lp_norm(&t, p).unwrap();
            assert!(lhs <= rhs + 1e-9, "p = {p}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn norm_validation() {
        let t = z27();
        let f = indicator_g1(&t);
        assert!(f.lp_norm(&t, 0.5).is_err());
        assert!((f.lp_norm(&t, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        assert!((f.lp_norm(&t, 2.0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(FunctionSample::new(&t, vec![Complex64::new(0.0, 0.0); 5]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn roundtrip_random(seedvals in proptest::collection::vec(-5.0f64..5.0, 27)) {
            let t = z27();
            let dual = enumerate_dual(&t).unwrap();
            let f = FunctionSample::new(
                &t,
                seedvals.iter().map(|&v| Complex64::new(v, -v * 0.5)).collect(),
            ).unwrap();
            let coeffs = forward(&t, &dual, &f).unwrap();
            let g = inverse(&t, &dual, &coeffs).unwrap();
            for (a, b) in f.values().iter().zip(g.values()) {
                prop_assert!((a - b).norm() < 1e-9);
            }
        }

        #[test]
        fn translation_is_isometry(h in 0usize..27, seedvals in proptest::collection::vec(-3.0f64..3.0, 27)) {
            let t = z27();
            let f = FunctionSample::new(
                &t,
                seedvals.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            ).unwrap();
            let g = f.translate(&t, h);
            prop_assert!((f.l2_norm_sq(&t) - g.l2_norm_sq(&t)).abs() < 1e-9);
        }
    }
}

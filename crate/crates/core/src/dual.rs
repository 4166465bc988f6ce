//! Unitary dual enumeration.
//!
//! Every irreducible representation of the three supported families acts by
//! generalized permutation (monomial) matrices in a natural basis: each basis
//! vector is sent to a root of unity times another basis vector.  We exploit
//! this throughout; phases are kept as exact numerators over the shared
//! root-of-unity lattice of the tower.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tower::{Family, TowerSpec};

/// An irreducible unitary representation of `G/G_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irrep {
    level: usize,
    dim: usize,
    kind: IrrepKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum IrrepKind {
    /// One-dimensional: `chi(x) = e(sum_j w_j x_j / phase_den)`.
    Character { weights: Vec<u64> },
    /// Heisenberg representation induced from a central character of
    /// conductor `l^m`, acting on functions on `(Z/l^m)^d`:
    /// `(pi(a,b,c) phi)(t) = e([a.xi + b.eta + lambda (c + t.b)] / l^N) phi(t + a)`.
    /// The twists `(xi, eta)` run over `(Z/l^{N-m})^{2d}`; they parametrize
    /// the characters of the radical `(l^m Z/l^N Z)^{2d}` and hence the
    /// distinct equivalence classes sharing the central character.
    Induced {
        m: usize,
        /// `lambda = l^{N-m} u` with `u` a unit mod `l^m`, as a residue mod `l^N`.
        lambda: u64,
        /// Twist parameters in `Z/l^{N-m}`, length `d` each.
        xi: Vec<u64>,
        eta: Vec<u64>,
    },
}

impl Irrep {
    /// Minimal `n` with the representation trivial on `G_n`.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bracket `<pi> = |G/G_{level}|`, the ultrametric scale of the irrep.
    pub fn bracket(&self, tower: &TowerSpec) -> u64 {
        tower.quotient_size(self.level)
    }

    pub fn is_trivial(&self) -> bool {
        self.level == 0
    }

    /// Short descriptor for reports: parameters identifying the irrep.
    pub fn label(&self) -> String {
        match &self.kind {
            IrrepKind::Character { weights } => format!("chi{:?}", weights),
            IrrepKind::Induced { m, lambda, xi, eta } => {
                format!("ind(m={m},lambda={lambda},xi={xi:?},eta={eta:?})")
            }
        }
    }

    /// Monomial action of `pi(x)`: fills `col[j]` and `phase[j]` so that
    /// `pi(x) e_j = root(phase[j]) * e_{col[j]}`.
    pub fn action(&self, tower: &TowerSpec, coords: &[u64], col: &mut [usize], phase: &mut [u64]) {
        let den = tower.phase_den();
        match &self.kind {
            IrrepKind::Character { weights } => {
                let mut p: u64 = 0;
                for (w, x) in weights.iter().zip(coords) {
                    p = (p + (w * x) % den) % den;
                }
                col[0] = 0;
                phase[0] = p;
            }
            IrrepKind::Induced { m, lambda, xi, eta } => {
                let d = xi.len();
                let lm = int_pow(tower.prime().unwrap(), *m as u32);
                let (a, b) = (&coords[..d], &coords[d..2 * d]);
                let c = coords[2 * d];
                // part of the phase independent of the basis point t
                let mut base: u64 = (*lambda * (c % lm)) % den;
                for j in 0..d {
                    base = (base + a[j] * xi[j] + b[j] * eta[j]) % den;
                }
                // column s (basis point s in (Z/l^m)^d) goes to row s - a,
                // with t = s - a in the phase factor lambda * (t . b)
                let mut s = vec![0u64; d];
                for idx in 0..self.dim {
                    // t = s - a mod l^m, and its little-endian index
                    let mut t_idx: u64 = 0;
                    let mut p = base;
                    for j in (0..d).rev() {
                        let tj = (s[j] + lm - a[j] % lm) % lm;
                        t_idx = t_idx * lm + tj;
                        p = (p + *lambda * ((tj * (b[j] % lm)) % lm)) % den;
                    }
                    col[idx] = t_idx as usize;
                    phase[idx] = p;
                    // advance s in little-endian odometer order
                    for j in 0..d {
                        s[j] += 1;
                        if s[j] < lm {
                            break;
                        }
                        s[j] = 0;
                    }
                }
            }
        }
    }

    /// Dense unitary matrix of `pi(x)` (for eigenvalue work; transforms use
    /// the monomial action directly).
    pub fn matrix(&self, tower: &TowerSpec, x_idx: usize) -> DMatrix<Complex64> {
        let coords = tower.coords_of(x_idx).to_vec();
        let mut col = vec![0usize; self.dim];
        let mut phase = vec![0u64; self.dim];
        self.action(tower, &coords, &mut col, &mut phase);
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            m[(col[j], j)] = tower.root(phase[j]);
        }
        m
    }

    /// `tr pi(x)`.
    pub fn character_value(&self, tower: &TowerSpec, x_idx: usize) -> Complex64 {
        let coords = tower.coords_of(x_idx).to_vec();
        let mut col = vec![0usize; self.dim];
        let mut phase = vec![0u64; self.dim];
        self.action(tower, &coords, &mut col, &mut phase);
        let mut tr = Complex64::new(0.0, 0.0);
        for j in 0..self.dim {
            if col[j] == j {
                tr += tower.root(phase[j]);
            }
        }
        tr
    }
}

/// Haar integral of the matrix coefficients over the ball `G_n`:
/// `∫_{G_n} pi(x) dμ(x)`, a `d x d` complex matrix. Equals `|G_n| I` when
/// `pi` is trivial on `G_n` (bracket at most `|G/G_n|`) and `0` otherwise.
pub fn rep_integral_over_ball(
    tower: &TowerSpec,
    pi: &Irrep,
    n: usize,
) -> Result<DMatrix<Complex64>> {
    if n > tower.depth() {
        return Err(Error::LevelOutOfRange {
            level: n,
            max: tower.depth(),
        });
    }
    let measure = tower.subgroup_measure(n);
    let points = tower.enumerate_subgroup(n)?;
    let w = rat_to_f64(measure) / points.len() as f64;
    let mut acc = DMatrix::zeros(pi.dim(), pi.dim());
    let mut col = vec![0usize; pi.dim()];
    let mut phase = vec![0u64; pi.dim()];
    for x in &points {
        pi.action(tower, x.coords(), &mut col, &mut phase);
        for j in 0..pi.dim() {
            acc[(col[j], j)] += tower.root(phase[j]) * w;
        }
    }
    Ok(acc)
}

fn rat_to_f64(r: crate::tower::Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Enumerates the full unitary dual of `G/G_N`, sorted by level, then
/// dimension, then label (a canonical, deterministic order).
pub fn enumerate_dual(tower: &TowerSpec) -> Result<Vec<Irrep>> {
    let mut out = match tower.family() {
        Family::VilenkinProduct { .. } => vilenkin_characters(tower),
        Family::PadicModule { dim, .. } => padic_characters(tower, *dim),
        Family::Heisenberg { dim, .. } => heisenberg_dual(tower, *dim)?,
    };
    out.sort_by(|a, b| {
        (a.level, a.dim)
            .cmp(&(b.level, b.dim))
            .then_with(|| a.label().cmp(&b.label()))
    });
    let sum_sq: u64 = out.iter().map(|p| (p.dim * p.dim) as u64).sum();
    if sum_sq != tower.group_size() as u64 {
        return Err(Error::InvalidParameter(format!(
            "dual enumeration inconsistent: sum of squared dimensions {} != group order {}",
            sum_sq,
            tower.group_size()
        )));
    }
    Ok(out)
}

fn vilenkin_characters(tower: &TowerSpec) -> Vec<Irrep> {
    let m = tower.group_size() as u64;
    let depth = tower.depth();
    (0..m)
        .map(|xi| {
            // chi_xi(x) = e(xi * value(x) / M); in digit coordinates the
            // weight of digit n is xi * |G/G_n|.
            let weights = (0..depth).map(|n| (xi * tower.quotient_size(n)) % m).collect();
            let mut level = 0;
            while level < depth && (xi * tower.quotient_size(level)) % m != 0 {
                level += 1;
            }
            Irrep {
                level,
                dim: 1,
                kind: IrrepKind::Character { weights },
            }
        })
        .collect()
}

fn padic_characters(tower: &TowerSpec, d: usize) -> Vec<Irrep> {
    let l = tower.prime().unwrap();
    let q = tower.phase_den(); // l^N
    let depth = tower.depth();
    let mut out = Vec::with_capacity(tower.group_size());
    let mut xi = vec![0u64; d];
    loop {
        let level = depth - xi.iter().map(|&c| valuation(c, l, depth)).min().unwrap();
        out.push(Irrep {
            level,
            dim: 1,
            kind: IrrepKind::Character { weights: xi.clone() },
        });
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            xi[j] += 1;
            if xi[j] < q {
                break;
            }
            xi[j] = 0;
            j += 1;
        }
    }
}

fn heisenberg_dual(tower: &TowerSpec, d: usize) -> Result<Vec<Irrep>> {
    let l = tower.prime().unwrap();
    let depth = tower.depth();
    let q = tower.phase_den(); // l^N
    let mut out = Vec::new();
    // one-dimensional: central character trivial, chi(a,b,c) = e((a.xi + b.eta)/l^N)
    let mut w = vec![0u64; 2 * d];
    loop {
        let level = depth - w.iter().map(|&c| valuation(c, l, depth)).min().unwrap();
        let mut weights = w.clone();
        weights.push(0); // no dependence on the center
        out.push(Irrep {
            level,
            dim: 1,
            kind: IrrepKind::Character { weights },
        });
        if !advance(&mut w, q) {
            break;
        }
    }
    // induced from central characters of conductor l^m, m = 1..N
    for m in 1..=depth {
        let lm = int_pow(l, m as u32);
        let span = int_pow(l, (depth - m) as u32); // twist range l^{N-m}
        let dim = int_pow(l, (m * d) as u32) as usize;
        for u in 1..lm {
            if u % l == 0 {
                continue;
            }
            let lambda = (q / lm) * u;
            let mut twist = vec![0u64; 2 * d];
            loop {
                let (xi, eta) = twist.split_at(d);
                // the twist character e((a.xi + b.eta)/l^N) is trivial on
                // G_n iff l^n xi = l^n eta = 0 mod l^N
                let twist_level = twist
                    .iter()
                    .map(|&c| depth - valuation(c, l, depth))
                    .max()
                    .unwrap_or(0);
                out.push(Irrep {
                    level: m.max(twist_level),
                    dim,
                    kind: IrrepKind::Induced {
                        m,
                        lambda,
                        xi: xi.to_vec(),
                        eta: eta.to_vec(),
                    },
                });
                if !advance(&mut twist, span) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(digits: &mut [u64], span: u64) -> bool {
    for c in digits.iter_mut() {
        *c += 1;
        if *c < span {
            return true;
        }
        *c = 0;
    }
    false
}

fn valuation(c: u64, l: u64, cap: usize) -> usize {
    if c == 0 {
        return cap;
    }
    let mut v = 0;
    let mut c = c;
    while v < cap && c % l == 0 {
        c /= l;
        v += 1;
    }
    v
}

fn int_pow(base: u64, exp: u32) -> u64 {
    base.pow(exp)
}

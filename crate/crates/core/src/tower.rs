//! Compact Vilenkin groups modelled through finite quotient towers.
//!
//! A tower fixes a strictly decreasing chain of open subgroups
//! `G = G_0 > G_1 > ... > G_N = {e}` on a finite quotient `G/G_N`.  Everything
//! downstream (dual enumeration, transforms, spectral calculus) works on the
//! quotient with exact rational Haar weights, identifying depth-`N` locally
//! constant functions on the profinite group with vectors indexed by `G/G_N`.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar used for Haar weights, ultrametric norms and
/// constant-order eigenvalue identities.
pub type Rat = Ratio<i128>;

/// The three group families supported by the tower construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Cyclic model of a product of finite groups: `Z/(k_0 k_1 ... k_{N-1})`
    /// with `G_n` the multiples of `k_0...k_{n-1}`.  For constant orders
    /// `k_n = l` this is `Z_l` truncated at depth `N`.
    VilenkinProduct { orders: Vec<u64> },
    /// `(Z/l^N)^d`, the rank-`d` module over the `l`-adic integers truncated
    /// at depth `N`, with `G_n = (l^n Z / l^N Z)^d`.
    PadicModule { prime: u64, dim: usize },
    /// The Heisenberg group `H_d(Z/l^N)` of unipotent upper triangular
    /// matrices, coordinates `(x, y, z)` with `x, y` of length `d`,
    /// `G_n` the congruence subgroup mod `l^n`.
    Heisenberg { prime: u64, dim: usize },
}

impl Family {
    fn validate(&self, depth: usize) -> Result<()> {
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        match self {
            Family::VilenkinProduct { orders } => {
                if orders.len() != depth {
                    return Err(Error::OrdersDepthMismatch {
                        orders: orders.len(),
                        depth,
                    });
                }
                for &k in orders {
                    if k < 2 {
                        return Err(Error::InvalidOrder(k));
                    }
                }
                Ok(())
            }
            Family::PadicModule { prime, dim } | Family::Heisenberg { prime, dim } => {
                if *prime < 3 || !is_prime(*prime) {
                    return Err(Error::InvalidPrime(*prime));
                }
                if *dim == 0 {
                    return Err(Error::InvalidDimension);
                }
                Ok(())
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A point of `G/G_N` in canonical coordinates (least nonnegative residues).
///
/// Coordinate layout: `VilenkinProduct` stores the mixed-radix digits
/// `(x_0, ..., x_{N-1})` with `x_k` mod `orders[k]`; `PadicModule` stores the
/// `d` residues mod `l^N`; `Heisenberg` stores `(x_1..x_d, y_1..y_d, z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub(crate) coords: Vec<u64>,
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// A concrete Vilenkin group family truncated at depth `N`.
#[derive(Debug)]
pub struct TowerSpec {
    family: Family,
    depth: usize,
    /// `k_n = |G_n / G_{n+1}|` for `0 <= n < N`.
    kappa: Vec<u64>,
    /// `|G/G_n|` for `0 <= n <= N`.
    quotient_size: Vec<u64>,
    coord_dim: usize,
    /// Per-coordinate modulus (orders for the product family, `l^N` otherwise).
    coord_modulus: Vec<u64>,
    /// Denominator of the exact root-of-unity lattice used by all characters.
    phase_den: u64,
    roots: Vec<Complex64>,
    coords_table: OnceLock<Vec<u64>>,
}

/// Builds and validates a tower.
///
/// Rejects orders below 2, primes below 3 (and non-primes) and depth 0.
pub fn make_tower(family: Family, depth: usize) -> Result<Arc<TowerSpec>> {
    family.validate(depth)?;
    let kappa: Vec<u64> = match &family {
        Family::VilenkinProduct { orders } => orders.clone(),
        Family::PadicModule { prime, dim } => {
            let k = checked_pow(*prime, *dim as u32).ok_or(Error::SizeOverflow)?;
            vec![k; depth]
        }
        Family::Heisenberg { prime, dim } => {
            let k = checked_pow(*prime, (2 * dim + 1) as u32).ok_or(Error::SizeOverflow)?;
            vec![k; depth]
        }
    };
    let mut quotient_size = Vec::with_capacity(depth + 1);
    quotient_size.push(1u64);
    for &k in &kappa {
        let next = quotient_size
            .last()
            .unwrap()
            .checked_mul(k)
            .ok_or(Error::SizeOverflow)?;
        quotient_size.push(next);
    }
    let (coord_dim, coord_modulus, phase_den) = match &family {
        Family::VilenkinProduct { orders } => {
            (depth, orders.clone(), quotient_size[depth])
        }
        Family::PadicModule { prime, dim } => {
            let q = checked_pow(*prime, depth as u32).ok_or(Error::SizeOverflow)?;
            (*dim, vec![q; *dim], q)
        }
        Family::Heisenberg { prime, dim } => {
            let q = checked_pow(*prime, depth as u32).ok_or(Error::SizeOverflow)?;
            (2 * dim + 1, vec![q; 2 * dim + 1], q)
        }
    };
    if quotient_size[depth] > (1 << 40) {
        return Err(Error::SizeOverflow);
    }
    let roots = (0..phase_den)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * (j as f64) / (phase_den as f64);
            Complex64::new(t.cos(), t.sin())
        })
        .collect();
    Ok(Arc::new(TowerSpec {
        family,
        depth,
        kappa,
        quotient_size,
        coord_dim,
        coord_modulus,
        phase_den,
        roots,
        coords_table: OnceLock::new(),
    }))
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

impl TowerSpec {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `k_n = |G_n/G_{n+1}|`.
    pub fn kappa(&self) -> &[u64] {
        &self.kappa
    }

    /// `|G/G_n|` as an integer, `0 <= n <= N`.
    pub fn quotient_size(&self, n: usize) -> u64 {
        self.quotient_size[n]
    }

    /// `|G/G_N|`, the number of sample points.
    pub fn group_size(&self) -> usize {
        self.quotient_size[self.depth] as usize
    }

    /// Exact Haar measure `|G_n| = 1/|G/G_n|`.
    pub fn subgroup_measure(&self, n: usize) -> Rat {
        Rat::new(1, self.quotient_size[n] as i128)
    }

    /// Haar weight of a single point of `G/G_N`.
    pub fn haar_weight(&self) -> Rat {
        self.subgroup_measure(self.depth)
    }

    pub fn coord_dim(&self) -> usize {
        self.coord_dim
    }

    pub fn prime(&self) -> Option<u64> {
        match &self.family {
            Family::VilenkinProduct { .. } => None,
            Family::PadicModule { prime, .. } | Family::Heisenberg { prime, .. } => Some(*prime),
        }
    }

    /// Denominator of the root-of-unity lattice shared by all characters.
    pub fn phase_den(&self) -> u64 {
        self.phase_den
    }

    /// `exp(2*pi*i * num / phase_den)` from the precomputed table.
    #[inline]
    pub fn root(&self, num: u64) -> Complex64 {
        self.roots[(num % self.phase_den) as usize]
    }

    pub fn identity(&self) -> Element {
        Element {
            coords: vec![0; self.coord_dim],
        }
    }

    /// Builds an element, reducing coordinates to canonical residues.
    pub fn element(&self, coords: &[u64]) -> Result<Element> {
        if coords.len() != self.coord_dim {
            return Err(Error::CoordinateMismatch {
                got: coords.len(),
                expected: self.coord_dim,
            });
        }
        let reduced = coords
            .iter()
            .zip(&self.coord_modulus)
            .map(|(&c, &m)| c % m)
            .collect();
        Ok(Element { coords: reduced })
    }

    fn check_member(&self, x: &Element) -> Result<()> {
        if x.coords.len() != self.coord_dim {
            return Err(Error::CoordinateMismatch {
                got: x.coords.len(),
                expected: self.coord_dim,
            });
        }
        Ok(())
    }

    /// Canonical index of an element: little-endian mixed radix over the
    /// coordinate moduli.  For the product family this is the group value
    /// itself in `0..|G|`.
    pub fn index_of(&self, x: &Element) -> usize {
        let mut idx: u64 = 0;
        for j in (0..self.coord_dim).rev() {
            idx = idx * self.coord_modulus[j] + x.coords[j];
        }
        idx as usize
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut coords = vec![0u64; self.coord_dim];
        for j in 0..self.coord_dim {
            let m = self.coord_modulus[j] as usize;
            coords[j] = (idx % m) as u64;
            idx /= m;
        }
        Element { coords }
    }

    /// Flattened coordinate table: entry `x` occupies
    /// `coords_table[x*coord_dim .. (x+1)*coord_dim]`.
    pub fn coords_table(&self) -> &[u64] {
        self.coords_table.get_or_init(|| {
            let n = self.group_size();
            let mut out = vec![0u64; n * self.coord_dim];
            for x in 0..n {
                let e = self.element_at(x);
                out[x * self.coord_dim..(x + 1) * self.coord_dim].copy_from_slice(&e.coords);
            }
            out
        })
    }

    #[inline]
    pub fn coords_of(&self, idx: usize) -> &[u64] {
        let t = self.coords_table();
        &t[idx * self.coord_dim..(idx + 1) * self.coord_dim]
    }

    /// Group law on `G/G_N`.
    pub fn group_law(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.mul_coords(&x.coords, &y.coords))
    }

    fn mul_coords(&self, x: &[u64], y: &[u64]) -> Element {
        match &self.family {
            Family::VilenkinProduct { .. } => {
                // Digits encode the value in Z/M; the law is addition mod M.
                let m = self.quotient_size[self.depth];
                let v = (self.value_of_digits(x) + self.value_of_digits(y)) % m;
                self.digits_of_value(v)
            }
            Family::PadicModule { .. } => {
                let q = self.coord_modulus[0];
                let coords = x
                    .iter()
                    .zip(y)
                    .map(|(&a, &b)| {
                        let s = a + b;
                        if s >= q {
                            s - q
                        } else {
                            s
                        }
                    })
                    .collect();
                Element { coords }
            }
            Family::Heisenberg { dim, .. } => {
                let d = *dim;
                let q = self.coord_modulus[0];
                let mut coords = vec![0u64; 2 * d + 1];
                for j in 0..d {
                    coords[j] = (x[j] + y[j]) % q;
                    coords[d + j] = (x[d + j] + y[d + j]) % q;
                }
                // (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x.y')
                let mut z = (x[2 * d] + y[2 * d]) % q;
                for j in 0..d {
                    z = (z + x[j] * y[d + j]) % q;
                }
                coords[2 * d] = z;
                Element { coords }
            }
        }
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.check_member(x)?;
        Ok(self.inv_coords(&x.coords))
    }

    fn inv_coords(&self, x: &[u64]) -> Element {
        match &self.family {
            Family::VilenkinProduct { .. } => {
                let m = self.quotient_size[self.depth];
                let v = (m - self.value_of_digits(x)) % m;
                self.digits_of_value(v)
            }
            Family::PadicModule { .. } => {
                let q = self.coord_modulus[0];
                let coords = x.iter().map(|&a| (q - a) % q).collect();
                Element { coords }
            }
            Family::Heisenberg { dim, .. } => {
                let d = *dim;
                let q = self.coord_modulus[0];
                let mut coords = vec![0u64; 2 * d + 1];
                for j in 0..2 * d {
                    coords[j] = (q - x[j]) % q;
                }
                // (x,y,z)^{-1} = (-x, -y, x.y - z)
                let mut z = (q - x[2 * d]) % q;
                for j in 0..d {
                    z = (z + x[j] * x[d + j]) % q;
                }
                coords[2 * d] = z % q;
                Element { coords }
            }
        }
    }

    /// Index-level group law (hot path for translations and convolutions).
    #[inline]
    pub fn mul_idx(&self, x: usize, y: usize) -> usize {
        match &self.family {
            Family::VilenkinProduct { .. } => {
                let m = self.group_size();
                (x + y) % m
            }
            _ => {
                let a = self.coords_of(x);
                let b = self.coords_of(y);
                self.index_of(&self.mul_coords(a, b))
            }
        }
    }

    #[inline]
    pub fn inv_idx(&self, x: usize) -> usize {
        match &self.family {
            Family::VilenkinProduct { .. } => {
                let m = self.group_size();
                (m - x) % m
            }
            _ => self.index_of(&self.inv_coords(self.coords_of(x))),
        }
    }

    fn value_of_digits(&self, digits: &[u64]) -> u64 {
        let mut v = 0u64;
        for j in (0..self.coord_dim).rev() {
            v = v * self.coord_modulus[j] + digits[j];
        }
        v
    }

    fn digits_of_value(&self, mut v: u64) -> Element {
        let mut coords = vec![0u64; self.coord_dim];
        for j in 0..self.coord_dim {
            coords[j] = v % self.coord_modulus[j];
            v /= self.coord_modulus[j];
        }
        Element { coords }
    }

    /// Largest `n <= N` with `x` in `G_n`.  `N` marks the identity class.
    pub fn depth_of(&self, x: &Element) -> usize {
        match &self.family {
            Family::VilenkinProduct { .. } => {
                let v = self.value_of_digits(&x.coords);
                if v == 0 {
                    return self.depth;
                }
                let mut n = 0;
                while n < self.depth && v % self.quotient_size[n + 1] == 0 {
                    n += 1;
                }
                n
            }
            Family::PadicModule { prime, .. } | Family::Heisenberg { prime, .. } => {
                let l = *prime;
                let mut min_val = self.depth;
                for &c in &x.coords {
                    min_val = min_val.min(coord_valuation(c, l, self.depth));
                }
                min_val
            }
        }
    }

    /// `(depth, |x|_G)`: the ultrametric norm is `|G_n|` at depth `n < N`,
    /// and exactly 0 on the identity class `G_N`.
    pub fn depth_and_norm(&self, x: &Element) -> (usize, Rat) {
        let n = self.depth_of(x);
        if n == self.depth {
            (n, Rat::zero())
        } else {
            (n, self.subgroup_measure(n))
        }
    }

    /// Lie norm `max_j |x_j|_l` for the two l-adic families.
    pub fn lie_norm(&self, x: &Element) -> Option<Rat> {
        let l = self.prime()? as i128;
        let n = self.depth_of(x);
        if n == self.depth {
            Some(Rat::zero())
        } else {
            Some(Rat::new(1, l.pow(n as u32)))
        }
    }

    /// Canonical coset representatives of `G_n` in `G` (trailing parts zeroed).
    pub fn enumerate_cosets(&self, n: usize) -> Result<Vec<Element>> {
        if n > self.depth {
            return Err(Error::LevelOutOfRange {
                level: n,
                max: self.depth,
            });
        }
        match &self.family {
            Family::VilenkinProduct { .. } => Ok((0..self.quotient_size[n])
                .map(|v| self.digits_of_value(v))
                .collect()),
            Family::PadicModule { prime, .. } | Family::Heisenberg { prime, .. } => {
                let span = prime.pow(n as u32);
                Ok(odometer(self.coord_dim, span)
                    .into_iter()
                    .map(|coords| Element { coords })
                    .collect())
            }
        }
    }

    /// All elements of `G_n / G_N` (coordinates divisible by the level scale).
    pub fn enumerate_subgroup(&self, n: usize) -> Result<Vec<Element>> {
        if n > self.depth {
            return Err(Error::LevelOutOfRange {
                level: n,
                max: self.depth,
            });
        }
        match &self.family {
            Family::VilenkinProduct { .. } => {
                let step = self.quotient_size[n];
                let count = self.quotient_size[self.depth] / step;
                Ok((0..count)
                    .map(|k| self.digits_of_value(k * step))
                    .collect())
            }
            Family::PadicModule { prime, .. } | Family::Heisenberg { prime, .. } => {
                let scale = prime.pow(n as u32);
                let span = prime.pow((self.depth - n) as u32);
                Ok(odometer(self.coord_dim, span)
                    .into_iter()
                    .map(|mut coords| {
                        for c in coords.iter_mut() {
                            *c *= scale;
                        }
                        Element { coords }
                    })
                    .collect())
            }
        }
    }
}

fn coord_valuation(c: u64, l: u64, cap: usize) -> usize {
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

fn odometer(dim: usize, span: u64) -> Vec<Vec<u64>> {
    let total = (span as usize).pow(dim as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0u64; dim];
    loop {
        out.push(cur.clone());
        let mut j = 0;
        loop {
            if j == dim {
                return out;
            }
            cur[j] += 1;
            if cur[j] < span {
                break;
            }
            cur[j] = 0;
            j += 1;
        }
    }
}

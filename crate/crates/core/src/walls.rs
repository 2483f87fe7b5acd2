//! Finite wallings, the cut relation, the point and element kernels they
//! induce, explicit L¹ embeddings, and conditionally-negative-definite
//! matrix tests.
//!
//! All wall arithmetic is exact (arbitrary-precision rationals); only the
//! spectral test in [`cnd_check`] uses floating point, with an explicit
//! tolerance.
//!
//! The cut relation is read as: `M` cuts `F` iff `F` meets both `M` and
//! its complement, i.e. `F` is split by the two-sided partition. Under the
//! variant reading "`M∩F` and `M∩F^c` both non-empty" a singleton would be
//! cut by any wall containing it, breaking the zero diagonal and the
//! monotone cut bound, so that reading is not used.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::groups::Subgroup;
use crate::wreath::{HSpace, Point, WreathElement, WreathError, WreathProduct};

/// Exact wall weight.
pub type Weight = BigRational;

pub fn weight(num: i64, den: i64) -> Weight {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WallsError {
    #[error("invalid wall: {0}")]
    InvalidWall(String),
    #[error("wall weights must be non-negative")]
    NegativeWeight,
    #[error("ground of size {0} exceeds the 128-point limit")]
    GroundTooLarge(usize),
    #[error("point {0} is not in the ground set")]
    PointNotInGround(Point),
    #[error("kernel matrix must be symmetric with zero diagonal")]
    AsymmetricInput,
    #[error("bad walling file: {0}")]
    BadWallingFile(String),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

/// A finite weighted family of subsets ("walls") of a finite ground set.
///
/// The ground is a window of the `H`-set; walls are stored as bitmasks over
/// ground positions. No wall may be empty or the full ground set.
#[derive(Debug, Clone, PartialEq)]
pub struct Walling {
    ground: Vec<Point>,
    index: HashMap<Point, usize>,
    walls: Vec<(u128, Weight)>,
}

impl Walling {
    pub fn new(ground: Vec<Point>, walls: Vec<(u128, Weight)>) -> Result<Self, WallsError> {
        let n = ground.len();
        if n == 0 || n > 128 {
            return Err(WallsError::GroundTooLarge(n));
        }
        let full: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        for (mask, w) in &walls {
            if *mask == 0 || *mask == full {
                return Err(WallsError::InvalidWall(format!("mask {mask:#x} is empty or full")));
            }
            if mask & !full != 0 {
                return Err(WallsError::InvalidWall(format!("mask {mask:#x} exceeds the ground")));
            }
            if w.is_negative() {
                return Err(WallsError::NegativeWeight);
            }
        }
        let index = ground.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Walling { ground, index, walls })
    }

    /// Ground `0..n-1`, as used by the text file format.
    pub fn on_range(n: usize, walls: Vec<(u128, Weight)>) -> Result<Self, WallsError> {
        Self::new((0..n as Point).collect(), walls)
    }

    pub fn ground(&self) -> &[Point] {
        &self.ground
    }

    pub fn walls(&self) -> &[(u128, Weight)] {
        &self.walls
    }

    pub fn position(&self, p: Point) -> Result<usize, WallsError> {
        self.index.get(&p).copied().ok_or(WallsError::PointNotInGround(p))
    }

    fn full_mask(&self) -> u128 {
        if self.ground.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.ground.len()) - 1
        }
    }

    /// Total weight of walls cutting the point set `f` (given as a mask).
    pub fn cut_weight(&self, f: u128) -> Weight {
        let full = self.full_mask();
        self.walls
            .iter()
            .filter(|(m, _)| cuts_mask(*m, f, full))
            .map(|(_, w)| w.clone())
            .fold(Weight::zero(), |a, b| a + b)
    }

    fn pair_mask(&self, x: Point, y: Point) -> Result<u128, WallsError> {
        Ok((1u128 << self.position(x)?) | (1u128 << self.position(y)?))
    }

    /// The wall pseudo-metric `d_μ(x, y)`: the weight of all walls
    /// separating `x` from `y`.
    pub fn d_mu(&self, x: Point, y: Point) -> Result<Weight, WallsError> {
        Ok(self.cut_weight(self.pair_mask(x, y)?))
    }

    /// The full matrix of [`Walling::d_mu`] over the ground set.
    pub fn kernel_matrix(&self) -> KernelMatrix {
        let n = self.ground.len();
        let mut entries = vec![Weight::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.cut_weight((1u128 << i) | (1u128 << j));
                entries[i * n + j] = v.clone();
                entries[j * n + i] = v;
            }
        }
        KernelMatrix { n, entries }
    }

    /// The weighted-indicator embedding `φ(x) = (w_M·[x∈M])_M`; the ℓ¹
    /// distance between images equals `d_μ` exactly.
    pub fn l1_embed(&self) -> Vec<Vec<Weight>> {
        self.ground
            .iter()
            .enumerate()
            .map(|(i, _)| {
                self.walls
                    .iter()
                    .map(|(m, w)| if m >> i & 1 == 1 { w.clone() } else { Weight::zero() })
                    .collect()
            })
            .collect()
    }

    /// Text format: header `ground n`, then one `weight bitmask` line per
    /// wall. Weights are integers or fractions `p/q`; bitmasks are binary
    /// strings, character `i` giving membership of ground position `i`.
    pub fn to_text(&self) -> String {
        let mut out = format!("ground {}\n", self.ground.len());
        for (mask, w) in &self.walls {
            let mut bits = String::with_capacity(self.ground.len());
            for i in 0..self.ground.len() {
                bits.push(if mask >> i & 1 == 1 { '1' } else { '0' });
            }
            let _ = writeln!(out, "{w} {bits}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, WallsError> {
        let bad = |m: String| WallsError::BadWallingFile(m);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
        let n: usize = header
            .strip_prefix("ground ")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let mut walls = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let w = it.next().ok_or_else(|| bad(format!("bad line {line:?}")))?;
            let bits = it.next().ok_or_else(|| bad(format!("missing bitmask in {line:?}")))?;
            let weight: Weight = parse_weight(w).ok_or_else(|| bad(format!("bad weight {w:?}")))?;
            if bits.len() != n {
                return Err(bad(format!("bitmask {bits:?} has wrong length")));
            }
            let mut mask = 0u128;
            for (i, c) in bits.chars().enumerate() {
                match c {
                    '1' => mask |= 1 << i,
                    '0' => {}
                    _ => return Err(bad(format!("bad bitmask character {c:?}"))),
                }
            }
            walls.push((mask, weight));
        }
        Self::on_range(n, walls)
    }
}

fn parse_weight(s: &str) -> Option<Weight> {
    match s.split_once('/') {
        Some((p, q)) => Some(BigRational::new(p.parse::<BigInt>().ok()?, q.parse::<BigInt>().ok()?)),
        None => Some(BigRational::from(s.parse::<BigInt>().ok()?)),
    }
}

fn cuts_mask(m: u128, f: u128, full: u128) -> bool {
    m & f != 0 && !m & full & f != 0
}

/// The cut relation: `m` cuts `f` iff `f` meets both `m` and its
/// complement. `f` must be non-empty; singletons are never cut.
pub fn cuts(w: &Walling, m: u128, f: u128) -> bool {
    cuts_mask(m, f, w.full_mask())
}

/// The element kernel: the weight of walls cutting
/// `Supp_A(f₁⁻¹f₂) ∪ {h₁L, h₂L}`, for elements `u_i = (f_i, h_i)` of the
/// semirestricted product over the walling's ground window.
pub fn d_mu_elements<S: HSpace>(
    w: &Walling,
    ctx: &WreathProduct<S>,
    u1: &WreathElement<S::Top>,
    u2: &WreathElement<S::Top>,
    a: &Subgroup,
) -> Result<Weight, WallsError> {
    let quotient = ctx.lamp_quotient(u1, u2);
    let mut mask = 0u128;
    for p in ctx.supp_a(&quotient, a) {
        mask |= 1 << w.position(p)?;
    }
    mask |= 1 << w.position(ctx.space.coset_point(u1.top())?)?;
    mask |= 1 << w.position(ctx.space.coset_point(u2.top())?)?;
    Ok(w.cut_weight(mask))
}

/// Symmetric rational kernel with zero diagonal, as produced by
/// [`Walling::kernel_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    n: usize,
    entries: Vec<Weight>,
}

impl KernelMatrix {
    pub fn from_entries(n: usize, entries: Vec<Weight>) -> Result<Self, WallsError> {
        if entries.len() != n * n {
            return Err(WallsError::AsymmetricInput);
        }
        let k = KernelMatrix { n, entries };
        for i in 0..n {
            if !k.get(i, i).is_zero() {
                return Err(WallsError::AsymmetricInput);
            }
            for j in 0..i {
                if k.get(i, j) != k.get(j, i) {
                    return Err(WallsError::AsymmetricInput);
                }
            }
        }
        Ok(k)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Weight {
        &self.entries[i * self.n + j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| rational_to_f64(self.get(i, j))).collect())
            .collect()
    }
}

pub fn rational_to_f64(w: &Weight) -> f64 {
    let numer = w.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let denom = w.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    numer / denom
}

/// Conditional negative definiteness: `cᵀKc ≤ tol` for every zero-sum `c`.
///
/// The matrix is restricted to the zero-sum subspace (Helmert basis) and
/// its largest eigenvalue compared against `tol`. Rejects non-symmetric or
/// non-zero-diagonal input.
pub fn cnd_check(matrix: &[Vec<f64>], tol: f64) -> Result<bool, WallsError> {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(WallsError::AsymmetricInput);
        }
        if matrix[i][i] != 0.0 {
            return Err(WallsError::AsymmetricInput);
        }
        for j in 0..i {
            if (matrix[i][j] - matrix[j][i]).abs() > 0.0 {
                return Err(WallsError::AsymmetricInput);
            }
        }
    }
    if n <= 1 {
        return Ok(true);
    }
    // Helmert basis of the zero-sum subspace: v_k = (1,…,1,−k,0,…)/√(k(k+1))
    let mut basis = DMatrix::<f64>::zeros(n, n - 1);
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            basis[(i, k - 1)] = 1.0 / norm;
        }
        basis[(k, k - 1)] = -(k as f64) / norm;
    }
    let k = DMatrix::<f64>::from_fn(n, n, |i, j| matrix[i][j]);
    let restricted = basis.transpose() * k * basis;
    // symmetrize against rounding before the eigensolve
    let sym = (&restricted + restricted.transpose()) * 0.5;
    let eigen = sym.symmetric_eigen();
    Ok(eigen.eigenvalues.iter().all(|&l| l <= tol))
}

/// Convenience: the walling's own kernel matrix is conditionally negative
/// definite (it is measure-definite by construction).
pub fn kernel_is_cnd(w: &Walling, tol: f64) -> Result<bool, WallsError> {
    cnd_check(&w.kernel_matrix().to_f64(), tol)
}

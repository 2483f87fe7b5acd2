//! Exact arithmetic in the computable dense part `B^{(X)} ⋊ H` of a
//! semirestricted wreath product, the `Supp_A` calculus, and the copci
//! embedding classifier.
//!
//! Only finitely supported lamp configurations are materialized; the
//! compact tail `A^X` never is. Supports that leave the declared window
//! raise [`WreathError::WindowEscape`] instead of being truncated, since
//! silent truncation would corrupt the group axioms.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{is_homomorphism, FiniteGroup, GroupError, Subgroup};

/// A point of the `H`-set window.
pub type Point = i64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WreathError {
    #[error("support point {0} escaped the window; widen the window")]
    WindowEscape(Point),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("image of A1 is not contained in A2")]
    ImageNotInA2,
}

/// Whether a window point lies on a finite or an infinite `H`-orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Finite,
    Infinite,
}

/// A windowed `H`-set together with the group `H` that moves it.
///
/// `Top` is the element type of `H`. Implementations must make `apply` an
/// action by injections on the window (errors signal escape, never
/// wrap-around).
pub trait HSpace {
    type Top: Clone + Eq + Ord + Hash + std::fmt::Debug;

    fn top_identity(&self) -> Self::Top;
    fn top_mul(&self, a: &Self::Top, b: &Self::Top) -> Self::Top;
    fn top_inv(&self, a: &Self::Top) -> Self::Top;
    /// Moves a window point by `h`.
    fn apply(&self, h: &Self::Top, p: Point) -> Result<Point, WreathError>;
    /// Canonical byte form of a top element, for hashing and BFS dedup.
    fn top_bytes(&self, h: &Self::Top) -> Vec<u8>;
    fn contains(&self, p: Point) -> bool;
    fn points(&self) -> Vec<Point>;
    fn orbit_kind(&self, p: Point) -> OrbitKind;
    /// The distinguished base point (the coset `L` when `X = H/L`).
    fn basepoint(&self) -> Point {
        0
    }
    /// The point `h·L`, used by the wall kernels.
    fn coset_point(&self, h: &Self::Top) -> Result<Point, WreathError> {
        self.apply(h, self.basepoint())
    }
}

/// `X = ℤ` with `H = ℤ` shifting, seen through the window `[lo, hi]`.
#[derive(Debug, Clone)]
pub struct ZShiftSpace {
    pub lo: i64,
    pub hi: i64,
}

impl ZShiftSpace {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        ZShiftSpace { lo, hi }
    }
}

impl HSpace for ZShiftSpace {
    type Top = i64;

    fn top_identity(&self) -> i64 {
        0
    }
    fn top_mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn top_inv(&self, a: &i64) -> i64 {
        -a
    }
    fn apply(&self, h: &i64, p: Point) -> Result<Point, WreathError> {
        let q = p + h;
        if q < self.lo || q > self.hi {
            return Err(WreathError::WindowEscape(q));
        }
        Ok(q)
    }
    fn top_bytes(&self, h: &i64) -> Vec<u8> {
        h.to_le_bytes().to_vec()
    }
    fn contains(&self, p: Point) -> bool {
        p >= self.lo && p <= self.hi
    }
    fn points(&self) -> Vec<Point> {
        (self.lo..=self.hi).collect()
    }
    fn orbit_kind(&self, _p: Point) -> OrbitKind {
        OrbitKind::Infinite
    }
}

/// A faithful `ℤ`-set with only finite orbits: disjoint cycles rotated by
/// the shift. Point ids are arbitrary but must be pairwise distinct.
#[derive(Debug, Clone)]
pub struct ZCyclesSpace {
    cycles: Vec<Vec<Point>>,
    position: HashMap<Point, (usize, usize)>,
}

impl ZCyclesSpace {
    pub fn new(cycles: Vec<Vec<Point>>) -> Self {
        let mut position = HashMap::new();
        for (c, cycle) in cycles.iter().enumerate() {
            assert!(!cycle.is_empty());
            for (i, &p) in cycle.iter().enumerate() {
                let old = position.insert(p, (c, i));
                assert!(old.is_none(), "duplicate point {p}");
            }
        }
        ZCyclesSpace { cycles, position }
    }

    /// Orbits of sizes `1..=n`, with point ids numbered consecutively.
    pub fn staircase(n: usize) -> Self {
        let mut cycles = Vec::new();
        let mut next = 0;
        for len in 1..=n {
            cycles.push((next..next + len as Point).collect());
            next += len as Point;
        }
        Self::new(cycles)
    }

    pub fn cycles(&self) -> &[Vec<Point>] {
        &self.cycles
    }
}

impl HSpace for ZCyclesSpace {
    type Top = i64;

    fn top_identity(&self) -> i64 {
        0
    }
    fn top_mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn top_inv(&self, a: &i64) -> i64 {
        -a
    }
    fn apply(&self, h: &i64, p: Point) -> Result<Point, WreathError> {
        let &(c, i) = self.position.get(&p).ok_or(WreathError::WindowEscape(p))?;
        let len = self.cycles[c].len() as i64;
        let j = (i as i64 + h).rem_euclid(len) as usize;
        Ok(self.cycles[c][j])
    }
    fn top_bytes(&self, h: &i64) -> Vec<u8> {
        h.to_le_bytes().to_vec()
    }
    fn contains(&self, p: Point) -> bool {
        self.position.contains_key(&p)
    }
    fn points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.position.keys().copied().collect();
        pts.sort_unstable();
        pts
    }
    fn orbit_kind(&self, _p: Point) -> OrbitKind {
        OrbitKind::Finite
    }
}

/// A finite `H`: the cyclic group `ℤ/m` rotating disjoint cycles whose
/// lengths all divide `m`. Tops are kept reduced to `0..m`.
#[derive(Debug, Clone)]
pub struct ZModCyclesSpace {
    inner: ZCyclesSpace,
    modulus: i64,
}

impl ZModCyclesSpace {
    pub fn new(cycles: Vec<Vec<Point>>, modulus: i64) -> Self {
        assert!(modulus >= 1);
        for c in &cycles {
            assert_eq!(modulus % c.len() as i64, 0, "cycle length must divide the modulus");
        }
        ZModCyclesSpace { inner: ZCyclesSpace::new(cycles), modulus }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }
}

impl HSpace for ZModCyclesSpace {
    type Top = i64;

    fn top_identity(&self) -> i64 {
        0
    }
    fn top_mul(&self, a: &i64, b: &i64) -> i64 {
        (a + b).rem_euclid(self.modulus)
    }
    fn top_inv(&self, a: &i64) -> i64 {
        (-a).rem_euclid(self.modulus)
    }
    fn apply(&self, h: &i64, p: Point) -> Result<Point, WreathError> {
        self.inner.apply(h, p)
    }
    fn top_bytes(&self, h: &i64) -> Vec<u8> {
        h.rem_euclid(self.modulus).to_le_bytes().to_vec()
    }
    fn contains(&self, p: Point) -> bool {
        self.inner.contains(p)
    }
    fn points(&self) -> Vec<Point> {
        self.inner.points()
    }
    fn orbit_kind(&self, _p: Point) -> OrbitKind {
        OrbitKind::Finite
    }
}

/// An element `(f, h)` of `B ≀^A_X H` with restricted support.
///
/// The lamp map stores non-identity values only, sorted by point id; this
/// is the canonical form hashed by the growth module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement<T> {
    lamp: Vec<(Point, usize)>,
    top: T,
}

impl<T> WreathElement<T> {
    pub fn lamp(&self) -> &[(Point, usize)] {
        &self.lamp
    }

    pub fn top(&self) -> &T {
        &self.top
    }

    /// Lamp value at `p` (identity where absent).
    pub fn lamp_value(&self, p: Point) -> usize {
        match self.lamp.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => self.lamp[i].1,
            Err(_) => 0,
        }
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.lamp.iter().map(|&(p, _)| p)
    }
}

/// The computable model of `B ≀^A_X H`: lamp group `B` plus a windowed
/// `H`-space. The compact subgroup `A` is passed to the operations that
/// depend on it.
#[derive(Debug, Clone)]
pub struct WreathProduct<S: HSpace> {
    pub lamp_group: Arc<FiniteGroup>,
    pub space: S,
}

impl<S: HSpace> WreathProduct<S> {
    pub fn new(lamp_group: Arc<FiniteGroup>, space: S) -> Self {
        WreathProduct { lamp_group, space }
    }

    pub fn identity(&self) -> WreathElement<S::Top> {
        WreathElement { lamp: Vec::new(), top: self.space.top_identity() }
    }

    /// `δ_x(b)`: the lamp configuration with value `b` at `x` and identity
    /// elsewhere, with trivial top.
    pub fn delta(&self, x: Point, b: usize) -> WreathElement<S::Top> {
        assert!(self.space.contains(x), "point {x} outside window");
        let lamp = if b == 0 { Vec::new() } else { vec![(x, b)] };
        WreathElement { lamp, top: self.space.top_identity() }
    }

    pub fn pure_top(&self, h: S::Top) -> WreathElement<S::Top> {
        WreathElement { lamp: Vec::new(), top: h }
    }

    /// Builds `(f, h)` from an explicit lamp map; identity values are dropped.
    pub fn element(&self, lamp: &[(Point, usize)], top: S::Top) -> Result<WreathElement<S::Top>, WreathError> {
        let mut map: Vec<(Point, usize)> = Vec::new();
        for &(p, b) in lamp {
            if !self.space.contains(p) {
                return Err(WreathError::WindowEscape(p));
            }
            if b >= self.lamp_group.order() {
                return Err(GroupError::OutOfRange { id: b, order: self.lamp_group.order() }.into());
            }
            if b != 0 {
                map.push((p, b));
            }
        }
        map.sort_unstable_by_key(|&(p, _)| p);
        for w in map.windows(2) {
            assert_ne!(w[0].0, w[1].0, "duplicate lamp point {}", w[0].0);
        }
        Ok(WreathElement { lamp: map, top })
    }

    pub fn is_identity(&self, u: &WreathElement<S::Top>) -> bool {
        u.lamp.is_empty() && u.top == self.space.top_identity()
    }

    pub fn is_pure_lamp(&self, u: &WreathElement<S::Top>) -> bool {
        u.top == self.space.top_identity()
    }

    /// `(f₁,h₁)(f₂,h₂) = (f₁·(h₁·f₂), h₁h₂)` where `(h·f)(x) = f(h⁻¹x)`.
    pub fn compose(
        &self,
        u: &WreathElement<S::Top>,
        v: &WreathElement<S::Top>,
    ) -> Result<WreathElement<S::Top>, WreathError> {
        let b = &self.lamp_group;
        let mut lamp: HashMap<Point, usize> = u.lamp.iter().copied().collect();
        for &(p, val) in &v.lamp {
            // h₁·f₂ has value f₂(p) at h₁·p
            let q = self.space.apply(&u.top, p)?;
            let merged = b.compose(*lamp.get(&q).unwrap_or(&0), val);
            if merged == 0 {
                lamp.remove(&q);
            } else {
                lamp.insert(q, merged);
            }
        }
        let mut lamp: Vec<(Point, usize)> = lamp.into_iter().collect();
        lamp.sort_unstable_by_key(|&(p, _)| p);
        Ok(WreathElement { lamp, top: self.space.top_mul(&u.top, &v.top) })
    }

    /// `(f,h)⁻¹ = (h⁻¹·f⁻¹, h⁻¹)`.
    pub fn inverse(&self, u: &WreathElement<S::Top>) -> Result<WreathElement<S::Top>, WreathError> {
        let hinv = self.space.top_inv(&u.top);
        let mut lamp = Vec::with_capacity(u.lamp.len());
        for &(p, val) in &u.lamp {
            lamp.push((self.space.apply(&hinv, p)?, self.lamp_group.inverse(val)));
        }
        lamp.sort_unstable_by_key(|&(p, _)| p);
        Ok(WreathElement { lamp, top: hinv })
    }

    pub fn conjugate(
        &self,
        u: &WreathElement<S::Top>,
        by: &WreathElement<S::Top>,
    ) -> Result<WreathElement<S::Top>, WreathError> {
        self.compose(&self.compose(by, u)?, &self.inverse(by)?)
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(
        &self,
        u: &WreathElement<S::Top>,
        v: &WreathElement<S::Top>,
    ) -> Result<WreathElement<S::Top>, WreathError> {
        self.compose(
            &self.compose(u, v)?,
            &self.compose(&self.inverse(u)?, &self.inverse(v)?)?,
        )
    }

    /// `[fh, δ_x(b)]`; for `hx ≠ x` the result is the pure lamp
    /// `δ_{hx}(f(hx)·b·f(hx)⁻¹)·δ_x(b⁻¹)`.
    pub fn commutator_with_delta(
        &self,
        u: &WreathElement<S::Top>,
        x: Point,
        b: usize,
    ) -> Result<WreathElement<S::Top>, WreathError> {
        self.commutator(u, &self.delta(x, b))
    }

    /// `Supp_A(f) = {x : f(x) ∉ A}`, sorted.
    pub fn supp_a(&self, u: &WreathElement<S::Top>, a: &Subgroup) -> Vec<Point> {
        u.lamp.iter().filter(|&&(_, v)| !a.contains(v)).map(|&(p, _)| p).collect()
    }

    /// The pointwise quotient `f₁⁻¹·f₂` of the lamp parts, as a pure lamp.
    pub fn lamp_quotient(
        &self,
        u1: &WreathElement<S::Top>,
        u2: &WreathElement<S::Top>,
    ) -> WreathElement<S::Top> {
        let b = &self.lamp_group;
        let mut points: Vec<Point> = u1.support().chain(u2.support()).collect();
        points.sort_unstable();
        points.dedup();
        let lamp: Vec<(Point, usize)> = points
            .into_iter()
            .filter_map(|p| {
                let v = b.compose(b.inverse(u1.lamp_value(p)), u2.lamp_value(p));
                (v != 0).then_some((p, v))
            })
            .collect();
        WreathElement { lamp, top: self.space.top_identity() }
    }

    /// Canonical byte serialization: sorted lamp map, then the top's
    /// canonical form. Injective on representable elements.
    pub fn canonical_bytes(&self, u: &WreathElement<S::Top>) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 * u.lamp.len() + 16);
        out.extend_from_slice(&(u.lamp.len() as u32).to_le_bytes());
        for &(p, v) in &u.lamp {
            out.extend_from_slice(&p.to_le_bytes());
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        out.extend(self.space.top_bytes(&u.top));
        out
    }
}

/// Verdict of the copci classifier for a homomorphism `(B₁,A₁) → (B₂,A₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopciReport {
    /// `u⁻¹(A₂) = A₁`; equivalently the induced map `B₁/A₁ → B₂/A₂` is
    /// injective, and the induced map on semirestricted products is proper.
    pub proper: bool,
    /// `B₁ → B₂/A₂` is onto; equivalently the induced map has cocompact
    /// image (for infinite `X`).
    pub cocompact: bool,
}

/// Classifies the map of semirestricted wreath products induced by a
/// homomorphism `u: B₁ → B₂` with `u(A₁) ⊆ A₂`.
///
/// `map[g]` is the image of `g`. Properness and cocompactness of the
/// induced `B₁≀^{A₁}_X H → B₂≀^{A₂}_X H` reduce to injectivity resp.
/// surjectivity of `B₁/A₁ → B₂/A₂`.
pub fn copci_classify(map: &[usize], a1: &Subgroup, a2: &Subgroup) -> Result<CopciReport, WreathError> {
    let b1 = a1.parent();
    let b2 = a2.parent();
    is_homomorphism(map, b1, b2)?;
    if !a1.members().iter().all(|&g| a2.contains(map[g])) {
        return Err(WreathError::ImageNotInA2);
    }
    // proper ⇔ u⁻¹(A₂) = A₁
    let preimage: Vec<usize> = b1.elements().filter(|&g| a2.contains(map[g])).collect();
    let proper = preimage == a1.members();
    // cocompact ⇔ B₁ → B₂/A₂ hits every coset
    let (coset_of, count) = a2.left_coset_index();
    let mut hit = vec![false; count];
    for g in b1.elements() {
        hit[coset_of[map[g]]] = true;
    }
    let cocompact = hit.iter().all(|&h| h);
    Ok(CopciReport { proper, cocompact })
}

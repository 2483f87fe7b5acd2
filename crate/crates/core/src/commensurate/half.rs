//! Half-restricted wreath products `B ≀_{(X,M]} ℤ` in windowed form.
//!
//! Elements are exact on the restricted side; on each free block they are
//! known modulo the compact tail beyond an explicit frontier. Composing
//! tracks frontiers like precision in truncated power-series arithmetic:
//! `frontier(u·v) = min(frontier(u), frontier(v) + shift(u))` on an upward
//! free block. A frontier that would dip into the restricted block is a
//! commensuration violation, not a silent truncation.

use std::sync::Arc;

use thiserror::Error;

use super::CommError;
use crate::groups::FiniteGroup;
use crate::wreath::WreathError;

/// Which side of a sheet the free block occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeDirection {
    /// Free block `[boundary, ∞)`: truncation frontiers bound from above.
    Up,
    /// Free block `(−∞, boundary]`: frontiers bound from below.
    Down,
}

/// One sheet of the underlying `ℤ`-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetSpec {
    pub free: FreeDirection,
    pub boundary: i64,
    pub window: (i64, i64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HalfError {
    #[error("restricted-side support at {0} left the window")]
    WindowEscape(i64),
    #[error("frontier {frontier} crosses the block boundary {boundary}; the quotient would leave the free block")]
    CommensurationViolated { frontier: i64, boundary: i64 },
    #[error("coefficient at {0} conflicts with the frontier")]
    CoefficientBeyondFrontier(i64),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
}

impl From<HalfError> for CommError {
    fn from(e: HalfError) -> Self {
        match e {
            HalfError::WindowEscape(p) => CommError::Wreath(WreathError::WindowEscape(p)),
            other => CommError::CommensurationViolated(other.to_string()),
        }
    }
}

/// Coefficient map and optional frontier used to build one sheet.
pub type SheetInput = (Vec<(i64, usize)>, Option<i64>);

/// Coefficients on one sheet plus the truncation frontier (`None` = exact).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheetData {
    coeffs: Vec<(i64, usize)>,
    frontier: Option<i64>,
}

impl SheetData {
    pub fn coeffs(&self) -> &[(i64, usize)] {
        &self.coeffs
    }

    pub fn frontier(&self) -> Option<i64> {
        self.frontier
    }
}

/// An element of the windowed half-restricted product: lamp data per sheet
/// and the `ℤ`-shift.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfRestrictedElement {
    pub shift: i64,
    sheets: Vec<SheetData>,
}

impl HalfRestrictedElement {
    pub fn sheet(&self, i: usize) -> &SheetData {
        &self.sheets[i]
    }
}

/// The model: lamp group `B`, one spec per sheet.
#[derive(Debug, Clone)]
pub struct HalfRestrictedModel {
    pub lamp: Arc<FiniteGroup>,
    pub sheets: Vec<SheetSpec>,
}

impl HalfRestrictedModel {
    pub fn new(lamp: Arc<FiniteGroup>, sheets: Vec<SheetSpec>) -> Self {
        assert!(!sheets.is_empty());
        for s in &sheets {
            assert!(s.window.0 <= s.window.1);
            assert!(s.boundary >= s.window.0 && s.boundary <= s.window.1);
        }
        HalfRestrictedModel { lamp, sheets }
    }

    /// The `B ≀_{(ℤ,ℕ]} ℤ` model: one sheet, free upward from 0.
    pub fn half_line(lamp: Arc<FiniteGroup>, lo: i64, hi: i64) -> Self {
        Self::new(lamp, vec![SheetSpec { free: FreeDirection::Up, boundary: 0, window: (lo, hi) }])
    }

    /// The two-sided model: sheet 0 free upward from 0, sheet 1 free
    /// downward from −1 (two Laurent-series directions sharing one shift).
    pub fn two_sided(lamp: Arc<FiniteGroup>, lo: i64, hi: i64) -> Self {
        Self::new(
            lamp,
            vec![
                SheetSpec { free: FreeDirection::Up, boundary: 0, window: (lo, hi) },
                SheetSpec { free: FreeDirection::Down, boundary: -1, window: (lo, hi) },
            ],
        )
    }

    pub fn identity(&self) -> HalfRestrictedElement {
        HalfRestrictedElement {
            shift: 0,
            sheets: vec![SheetData { coeffs: Vec::new(), frontier: None }; self.sheets.len()],
        }
    }

    pub fn shift(&self, n: i64) -> HalfRestrictedElement {
        let mut e = self.identity();
        e.shift = n;
        e
    }

    /// Builds an element from per-sheet coefficient maps and frontiers.
    pub fn element(
        &self,
        per_sheet: Vec<SheetInput>,
        shift: i64,
    ) -> Result<HalfRestrictedElement, HalfError> {
        assert_eq!(per_sheet.len(), self.sheets.len());
        let mut sheets = Vec::with_capacity(per_sheet.len());
        for (spec, (mut coeffs, frontier)) in self.sheets.iter().zip(per_sheet) {
            coeffs.retain(|&(_, v)| v != 0);
            coeffs.sort_unstable_by_key(|&(p, _)| p);
            for w in coeffs.windows(2) {
                assert_ne!(w[0].0, w[1].0, "duplicate coefficient position");
            }
            for &(_, v) in &coeffs {
                if v >= self.lamp.order() {
                    return Err(crate::groups::GroupError::OutOfRange { id: v, order: self.lamp.order() }.into());
                }
            }
            let data = SheetData { coeffs, frontier };
            self.validate_sheet(spec, &data)?;
            sheets.push(data);
        }
        Ok(HalfRestrictedElement { shift, sheets })
    }

    fn validate_sheet(&self, spec: &SheetSpec, data: &SheetData) -> Result<(), HalfError> {
        let (lo, hi) = spec.window;
        if let Some(f) = data.frontier {
            match spec.free {
                FreeDirection::Up if f < spec.boundary => {
                    return Err(HalfError::CommensurationViolated { frontier: f, boundary: spec.boundary })
                }
                FreeDirection::Down if f > spec.boundary => {
                    return Err(HalfError::CommensurationViolated { frontier: f, boundary: spec.boundary })
                }
                _ => {}
            }
        }
        for &(p, _) in &data.coeffs {
            if p < lo || p > hi {
                return Err(HalfError::WindowEscape(p));
            }
            if let Some(f) = data.frontier {
                let beyond = match spec.free {
                    FreeDirection::Up => p >= f,
                    FreeDirection::Down => p <= f,
                };
                if beyond {
                    return Err(HalfError::CoefficientBeyondFrontier(p));
                }
            }
        }
        Ok(())
    }

    /// The semidirect law `(f₁, m)(f₂, n) = (f₁ · t^m f₂, m + n)`, with
    /// coefficients merged in `B` and frontiers combined like precision.
    /// Coefficients pushed past a frontier are dropped (reduced modulo the
    /// free-block tail); support escaping on a restricted side is an error.
    pub fn compose(
        &self,
        u: &HalfRestrictedElement,
        v: &HalfRestrictedElement,
    ) -> Result<HalfRestrictedElement, HalfError> {
        let b = &self.lamp;
        let mut sheets = Vec::with_capacity(self.sheets.len());
        for (i, spec) in self.sheets.iter().enumerate() {
            let us = &u.sheets[i];
            let vs = &v.sheets[i];
            let frontier = match spec.free {
                FreeDirection::Up => min_opt(us.frontier, vs.frontier.map(|f| f + u.shift)),
                FreeDirection::Down => max_opt(us.frontier, vs.frontier.map(|f| f + u.shift)),
            };
            let mut merged: Vec<(i64, usize)> = us.coeffs.clone();
            for &(p, val) in &vs.coeffs {
                let q = p + u.shift;
                match merged.binary_search_by_key(&q, |&(r, _)| r) {
                    Ok(j) => {
                        let m = b.compose(merged[j].1, val);
                        if m == 0 {
                            merged.remove(j);
                        } else {
                            merged[j].1 = m;
                        }
                    }
                    Err(j) => merged.insert(j, (q, val)),
                }
            }
            if let Some(f) = frontier {
                merged.retain(|&(p, _)| match spec.free {
                    FreeDirection::Up => p < f,
                    FreeDirection::Down => p > f,
                });
            }
            let data = SheetData { coeffs: merged, frontier };
            self.validate_sheet(spec, &data)?;
            sheets.push(data);
        }
        Ok(HalfRestrictedElement { shift: u.shift + v.shift, sheets })
    }

    /// `(f, m)⁻¹ = (t^{-m} f⁻¹, −m)`.
    pub fn inverse(&self, u: &HalfRestrictedElement) -> Result<HalfRestrictedElement, HalfError> {
        let b = &self.lamp;
        let mut sheets = Vec::with_capacity(self.sheets.len());
        for (spec, us) in self.sheets.iter().zip(&u.sheets) {
            let coeffs: Vec<(i64, usize)> =
                us.coeffs.iter().map(|&(p, v)| (p - u.shift, b.inverse(v))).collect();
            let data = SheetData { coeffs, frontier: us.frontier.map(|f| f - u.shift) };
            self.validate_sheet(spec, &data)?;
            sheets.push(data);
        }
        Ok(HalfRestrictedElement { shift: -u.shift, sheets })
    }

    /// Reduces an exact element to the coset with the given frontiers.
    pub fn truncate(
        &self,
        u: &HalfRestrictedElement,
        frontiers: &[Option<i64>],
    ) -> Result<HalfRestrictedElement, HalfError> {
        assert_eq!(frontiers.len(), self.sheets.len());
        let mut sheets = Vec::with_capacity(self.sheets.len());
        for ((spec, us), &f) in self.sheets.iter().zip(&u.sheets).zip(frontiers) {
            let frontier = match spec.free {
                FreeDirection::Up => min_opt(us.frontier, f),
                FreeDirection::Down => max_opt(us.frontier, f),
            };
            let mut coeffs = us.coeffs.clone();
            if let Some(f) = frontier {
                coeffs.retain(|&(p, _)| match spec.free {
                    FreeDirection::Up => p < f,
                    FreeDirection::Down => p > f,
                });
            }
            let data = SheetData { coeffs, frontier };
            self.validate_sheet(spec, &data)?;
            sheets.push(data);
        }
        Ok(HalfRestrictedElement { shift: u.shift, sheets })
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn f2_model() -> HalfRestrictedModel {
        HalfRestrictedModel::half_line(Arc::new(FiniteGroup::cyclic(2)), -16, 16)
    }

    fn random_truncated(model: &HalfRestrictedModel, rng: &mut StdRng) -> HalfRestrictedElement {
        let order = model.lamp.order();
        let frontier = rng.gen_range(4..=12);
        let mut coeffs = Vec::new();
        for _ in 0..rng.gen_range(0..5) {
            coeffs.push((rng.gen_range(-6..frontier), rng.gen_range(1..order)));
        }
        coeffs.sort_unstable_by_key(|&(p, _)| p);
        coeffs.dedup_by_key(|&mut (p, _)| p);
        model
            .element(vec![(coeffs, Some(frontier))], rng.gen_range(-3..=3))
            .unwrap()
    }

    #[test]
    fn identity_composition() {
        let model = f2_model();
        let e = model.identity();
        let u = model.element(vec![(vec![(0, 1), (3, 1)], Some(8))], 2).unwrap();
        assert_eq!(model.compose(&e, &u).unwrap(), u);
        assert_eq!(model.compose(&u, &e).unwrap(), u);
    }

    #[test]
    fn walk_matches_series_multiplication_by_t() {
        // (δ₀(1), t)² = (1 + t, t²) in the series picture
        let model = f2_model();
        let u = model.element(vec![(vec![(0, 1)], None)], 1).unwrap();
        let sq = model.compose(&u, &u).unwrap();
        assert_eq!(sq.shift, 2);
        assert_eq!(sq.sheet(0).coeffs(), &[(0, 1), (1, 1)]);
        assert_eq!(sq.sheet(0).frontier(), None);
    }

    #[test]
    fn group_axioms_with_frontiers() {
        let model = f2_model();
        let mut rng = StdRng::seed_from_u64(81);
        for _ in 0..1_000 {
            let u = random_truncated(&model, &mut rng);
            let v = random_truncated(&model, &mut rng);
            let w = random_truncated(&model, &mut rng);
            let lhs = model.compose(&model.compose(&u, &v).unwrap(), &w);
            let rhs = model.compose(&u, &model.compose(&v, &w).unwrap());
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(e1), Err(e2)) => assert_eq!(e1, e2),
                other => panic!("associativity routes disagree: {other:?}"),
            }
            // u·u⁻¹ is the identity up to u's own frontier
            let uinv = model.inverse(&u).unwrap();
            let prod = model.compose(&u, &uinv).unwrap();
            assert_eq!(prod.shift, 0);
            assert!(prod.sheet(0).coeffs().is_empty());
            assert_eq!(prod.sheet(0).frontier(), u.sheet(0).frontier());
        }
    }

    #[test]
    fn frontier_shrinks_under_negative_shifts() {
        let model = f2_model();
        let u = model.element(vec![(vec![], Some(6))], -2).unwrap();
        let v = model.element(vec![(vec![(5, 1)], Some(6))], 0).unwrap();
        let prod = model.compose(&u, &v).unwrap();
        // v's data shifts down by 2, so it is only known below 4
        assert_eq!(prod.sheet(0).frontier(), Some(4));
        assert_eq!(prod.sheet(0).coeffs(), &[(3, 1)]);
    }

    #[test]
    fn violations_are_reported() {
        let model = f2_model();
        // frontier driven below the block boundary
        let u = model.element(vec![(vec![], Some(2))], -3).unwrap();
        let v = model.element(vec![(vec![], Some(2))], 0).unwrap();
        assert!(matches!(
            model.compose(&u, &v),
            Err(HalfError::CommensurationViolated { .. })
        ));
        // restricted-side support escaping the window
        let far = model.element(vec![(vec![(-16, 1)], None)], 0).unwrap();
        let shift_down = model.shift(-1);
        assert!(matches!(model.compose(&shift_down, &far), Err(HalfError::WindowEscape(-17))));
    }

    #[test]
    fn two_sided_lamplighter_relations() {
        // the diagonal lamplighter inside the two-sided model: generators
        // a = coefficient 1 at 0 on both sheets, t = shift; check a² = 1,
        // (tᵏ a t⁻ᵏ) commutes with a, and products are exact
        let model = HalfRestrictedModel::two_sided(Arc::new(FiniteGroup::cyclic(2)), -10, 10);
        let a = model
            .element(vec![(vec![(0, 1)], None), (vec![(0, 1)], None)], 0)
            .unwrap();
        let t = model.shift(1);
        let tinv = model.shift(-1);
        let e = model.identity();
        assert_eq!(model.compose(&a, &a).unwrap(), e);
        let conj = |k: i64| {
            let mut x = a.clone();
            for _ in 0..k {
                x = model.compose(&t, &model.compose(&x, &tinv).unwrap()).unwrap();
            }
            x
        };
        for k in 1..=4 {
            let ak = conj(k);
            let lhs = model.compose(&a, &ak).unwrap();
            let rhs = model.compose(&ak, &a).unwrap();
            assert_eq!(lhs, rhs, "distant lamps must commute");
            assert_ne!(ak, a);
        }
    }
}

//! The commensurating action on pairs `(y, p)` and its length functions.
//!
//! The test bed is `H = ℤ` acting on sheeted copies of `ℤ` with a
//! commensurated subset `M` per sheet (`L = 1`, so `H/L`-cosets are plain
//! shifts). Lengths are computed by exact enumeration of `N △ gN` inside
//! the window; the tail descriptors certify that nothing contributes
//! outside it.

use std::sync::Arc;

use super::subset::ZSubset;
use super::CommError;
use crate::groups::{FiniteGroup, Subgroup};
use crate::wreath::{HSpace, WreathElement, WreathProduct, ZShiftSpace};

/// A point of the sheeted space `Y = ⊔ sheets × ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YPoint {
    pub sheet: usize,
    pub pos: i64,
}

/// A windowed `ℤ`-action commensurating the subset `M = ⊔ M_sheet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommAction {
    sheets: Vec<ZSubset>,
    h_window: (i64, i64),
}

impl CommAction {
    pub fn new(sheets: Vec<ZSubset>, h_window: (i64, i64)) -> Self {
        assert!(!sheets.is_empty() && h_window.0 <= h_window.1);
        CommAction { sheets, h_window }
    }

    /// The standard test bed `Y = ℤ`, `M = ℕ`, with the given window used
    /// both for `Y` bitmaps and for `H/L` supports.
    pub fn half_line(lo: i64, hi: i64) -> Self {
        CommAction::new(vec![ZSubset::naturals(lo, hi)], (lo, hi))
    }

    pub fn sheets(&self) -> &[ZSubset] {
        &self.sheets
    }

    pub fn h_window(&self) -> (i64, i64) {
        self.h_window
    }

    /// Is `y ∈ M`?
    pub fn member(&self, y: YPoint) -> Result<bool, CommError> {
        self.sheets[y.sheet].contains(y.pos)
    }

    /// `ℓ₀(h) = #(M △ hM)`, summed over sheets.
    pub fn ell0(&self, h: i64) -> Result<u64, CommError> {
        let mut total = 0;
        for m in &self.sheets {
            total += m.difference_size(&m.translate(h))?;
        }
        Ok(total)
    }

    /// `W_y = {h in the window : y ∈ hM}`.
    pub fn w_set(&self, y: YPoint) -> Result<Vec<i64>, CommError> {
        let m = &self.sheets[y.sheet];
        let mut out = Vec::new();
        for h in self.h_window.0..=self.h_window.1 {
            if m.contains(y.pos - h)? {
                out.push(h);
            }
        }
        Ok(out)
    }

    fn in_translated(&self, y: YPoint, h: i64) -> Result<bool, CommError> {
        self.sheets[y.sheet].contains(y.pos - h)
    }

    /// Doubles the space: each sheet is duplicated and the duplicate gets
    /// the complementary subset, so `#(M∖hM) = #(hM∖M)` for every `h`.
    pub fn symmetrize(&self) -> CommAction {
        let mut sheets = Vec::with_capacity(2 * self.sheets.len());
        for m in &self.sheets {
            sheets.push(m.clone());
            sheets.push(m.complement());
        }
        CommAction { sheets, h_window: self.h_window }
    }
}

/// A pair `(y, p)`: a point of `Y` and a finitely supported map from the
/// `H/L`-window to `B/A`-cosets, supported outside `W_y`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PwPair {
    pub y: YPoint,
    /// Sorted `(coset point, non-trivial coset id)` entries.
    p: Vec<(i64, usize)>,
}

impl PwPair {
    pub fn basepoint(y: YPoint) -> Self {
        PwPair { y, p: Vec::new() }
    }

    pub fn coset_map(&self) -> &[(i64, usize)] {
        &self.p
    }

    /// In `N = M × {1}`: trivial coset part and `y ∈ M`.
    pub fn in_n(&self, action: &CommAction) -> Result<bool, CommError> {
        Ok(self.p.is_empty() && action.member(self.y)?)
    }
}

/// Everything needed to run the pairs action for one instance:
/// the wreath product `B ≀^A_{H/L} H`, the subgroup `A`, and the
/// commensurating `H`-action on `Y`.
#[derive(Debug, Clone)]
pub struct PwContext {
    pub wreath: WreathProduct<ZShiftSpace>,
    pub action: CommAction,
    pub subgroup: Subgroup,
    coset_of: Vec<usize>,
    coset_rep: Vec<usize>,
}

impl PwContext {
    pub fn new(lamp: Arc<FiniteGroup>, subgroup: Subgroup, action: CommAction) -> Self {
        assert!(Arc::ptr_eq(subgroup.parent(), &lamp));
        let (lo, hi) = action.h_window();
        let wreath = WreathProduct::new(lamp, ZShiftSpace::new(lo, hi));
        let (coset_of, count) = subgroup.left_coset_index();
        let mut coset_rep = vec![usize::MAX; count];
        for g in 0..coset_of.len() {
            if coset_rep[coset_of[g]] == usize::MAX {
                coset_rep[coset_of[g]] = g;
            }
        }
        PwContext { wreath, action, subgroup, coset_of, coset_rep }
    }

    pub fn symmetrize(&self) -> PwContext {
        PwContext {
            wreath: self.wreath.clone(),
            action: self.action.symmetrize(),
            subgroup: self.subgroup.clone(),
            coset_of: self.coset_of.clone(),
            coset_rep: self.coset_rep.clone(),
        }
    }

    /// `h·(y,p) = (hy, h·p)`; `f·(y,p) = (y, f̄|_{W_y^c}·p)`; an element
    /// `(f,h)` acts as `f` after `h`.
    pub fn pw_act(&self, g: &WreathElement<i64>, z: &PwPair) -> Result<PwPair, CommError> {
        let b = &self.wreath.lamp_group;
        let h = *g.top();
        // top part: translate the base point and the coset map
        let y = YPoint { sheet: z.y.sheet, pos: z.y.pos + h };
        let mut p: Vec<(i64, usize)> = Vec::with_capacity(z.p.len());
        for &(x, c) in &z.p {
            self.wreath.space.apply(&h, x)?;
            p.push((x + h, c));
        }
        // lamp part: multiply by f̄ restricted to the complement of W_y
        for &(x, value) in g.lamp() {
            if self.coset_of[value] == 0 {
                continue; // value in A: trivial coset
            }
            if self.action.in_translated(y, x)? {
                continue; // x ∈ W_y: restricted away
            }
            let idx = p.binary_search_by_key(&x, |&(q, _)| q);
            match idx {
                Ok(i) => {
                    let combined = self.coset_of[b.compose(value, self.coset_rep[p[i].1])];
                    if combined == 0 {
                        p.remove(i);
                    } else {
                        p[i].1 = combined;
                    }
                }
                Err(i) => {
                    let c = self.coset_of[value];
                    p.insert(i, (x, c));
                }
            }
        }
        debug_assert!(p
            .iter()
            .all(|&(x, _)| !self.action.in_translated(y, x).unwrap_or(false)));
        Ok(PwPair { y, p })
    }

    /// `ℓ(g) = #(N △ gN)` for `N = M × {1}`, by exact enumeration.
    ///
    /// A pair `(m, 1)` contributes to `N ∖ gN` iff `m ∈ M` and (`m ∉ hM` or
    /// some `x ∈ Supp_A(f)` has `m ∉ xM`), and `g·(m,1)` contributes to
    /// `gN ∖ N` iff `m ∈ hM` and (`m ∉ M` or such an `x` exists). Every
    /// contributing point lies in a pairwise symmetric difference of the
    /// translates `{M, hM} ∪ {xM}`, all finite by the tail descriptors.
    pub fn pw_length(&self, g: &WreathElement<i64>) -> Result<u64, CommError> {
        let h = *g.top();
        let supp: Vec<i64> = self.wreath.supp_a(g, &self.subgroup);
        let mut total = 0u64;
        for m_set in self.action.sheets() {
            let mut translates: Vec<ZSubset> = vec![m_set.clone(), m_set.translate(h)];
            translates.extend(supp.iter().map(|&x| m_set.translate(x)));
            let mut candidates: Vec<i64> = Vec::new();
            for i in 0..translates.len() {
                for j in i + 1..translates.len() {
                    candidates.extend(translates[i].symmetric_difference(&translates[j])?.finite()?);
                }
            }
            candidates.sort_unstable();
            candidates.dedup();
            for &m in &candidates {
                let in_m = m_set.contains(m)?;
                let in_hm = m_set.contains(m - h)?;
                let mut bad = false;
                for &x in &supp {
                    if !m_set.contains(m - x)? {
                        bad = true;
                        break;
                    }
                }
                if in_m && (!in_hm || bad) {
                    total += 1; // (m,1) ∈ N ∖ gN
                }
                if in_hm && (!in_m || bad) {
                    total += 1; // g·(h⁻¹m, 1) ∈ gN ∖ N
                }
            }
        }
        Ok(total)
    }

    /// For a pure lamp `f`: the set `N ∖ f⁻¹N = {(m,1) : m ∈ ⋃_x M ∖ xM}`,
    /// `x` over `Supp_A(f)`, sorted.
    pub fn removed_set(&self, f: &WreathElement<i64>) -> Result<Vec<YPoint>, CommError> {
        assert!(self.wreath.is_pure_lamp(f));
        let supp = self.wreath.supp_a(f, &self.subgroup);
        let mut out = Vec::new();
        for (sheet, m_set) in self.action.sheets().iter().enumerate() {
            for &x in &supp {
                for pos in m_set.minus(&m_set.translate(x))? {
                    out.push(YPoint { sheet, pos });
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `ℓ′(fh) = Σ_x ℓ₁(f(x))`: the second length, independent of the top.
    pub fn second_length(&self, g: &WreathElement<i64>, ell1: &[u64]) -> u64 {
        assert_eq!(ell1.len(), self.wreath.lamp_group.order());
        assert_eq!(ell1[0], 0, "ℓ₁ must vanish at the identity");
        g.lamp().iter().map(|&(_, v)| ell1[v]).sum()
    }

    /// Exhaustive sublevel set `{g : ℓ(g) + ℓ′(g) ≤ k}` over the given
    /// search box: supports inside `[support_lo, support_hi]`, tops with
    /// `|h| ≤ max_top`. The caller certifies the box via the inequalities
    /// `ℓ(g) ≥ ℓ₀(h)` and (after symmetrizing) `2ℓ(f) ≥ ℓ₀(x)` on supports.
    ///
    /// Branches are pruned soundly: for a pure lamp, `ℓ(f)` is twice the
    /// size of `⋃_x (M ∖ xM)`, which only grows as support is added, and
    /// subadditivity gives `2ℓ(fh) ≥ ℓ(f)`, so a partial support with
    /// `|⋃ M∖xM| + Σℓ₁ > k` cannot extend to a member.
    pub fn sublevel_set(
        &self,
        ell1: &[u64],
        k: u64,
        support_lo: i64,
        support_hi: i64,
        max_top: i64,
    ) -> Result<Vec<WreathElement<i64>>, CommError> {
        let order = self.wreath.lamp_group.order();
        let mut out = Vec::new();
        let mut tops = Vec::new();
        for h in -max_top..=max_top {
            if self.action.ell0(h)? <= k {
                tops.push(h);
            }
        }
        let union_size = |supp: &[(i64, usize)]| -> Result<u64, CommError> {
            let mut removed: std::collections::HashSet<(usize, i64)> = std::collections::HashSet::new();
            for (sheet, m_set) in self.action.sheets().iter().enumerate() {
                for &(x, v) in supp {
                    if self.coset_of[v] == 0 {
                        continue;
                    }
                    for pos in m_set.minus(&m_set.translate(x))? {
                        removed.insert((sheet, pos));
                    }
                }
            }
            Ok(removed.len() as u64)
        };
        // depth-first over supports, pruning by ℓ′ and the ℓ(f)/2 bound
        type Branch = (i64, Vec<(i64, usize)>, u64);
        let mut stack: Vec<Branch> = vec![(support_lo, Vec::new(), 0)];
        while let Some((next, lamp, cost)) = stack.pop() {
            if union_size(&lamp)? + cost > k {
                continue;
            }
            if next > support_hi {
                for &h in &tops {
                    let g = self.wreath.element(&lamp, h)?;
                    let total = self.pw_length(&g)? + self.second_length(&g, ell1);
                    if total <= k {
                        out.push(g);
                    }
                }
                continue;
            }
            stack.push((next + 1, lamp.clone(), cost));
            for v in 1..order {
                let c = cost + ell1[v];
                if c <= k {
                    let mut extended = lamp.clone();
                    extended.push((next, v));
                    stack.push((next + 1, extended, c));
                }
            }
        }
        out.sort_by_key(|g| self.wreath.canonical_bytes(g));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commensurate::Tail;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c2_halfline(width: i64) -> PwContext {
        let b = Arc::new(FiniteGroup::cyclic(2));
        let a = Subgroup::trivial(b.clone());
        PwContext::new(b, a, CommAction::half_line(-width, width))
    }

    fn random_element(ctx: &PwContext, rng: &mut StdRng, reach: i64, max_supp: usize) -> WreathElement<i64> {
        let order = ctx.wreath.lamp_group.order();
        let mut lamp: Vec<(i64, usize)> = (0..rng.gen_range(0..=max_supp))
            .map(|_| (rng.gen_range(-reach..=reach), rng.gen_range(0..order)))
            .collect();
        lamp.sort_unstable_by_key(|&(p, _)| p);
        lamp.dedup_by_key(|&mut (p, _)| p);
        ctx.wreath.element(&lamp, rng.gen_range(-reach..=reach)).unwrap()
    }

    #[test]
    fn ell0_examples() {
        let act = CommAction::half_line(-16, 16);
        assert_eq!(act.ell0(0).unwrap(), 0);
        assert_eq!(act.ell0(1).unwrap(), 1);
        for k in 1..=8 {
            assert_eq!(act.ell0(k).unwrap(), k as u64);
            assert_eq!(act.ell0(-k).unwrap(), k as u64);
        }
    }

    #[test]
    fn w_set_examples() {
        let act = CommAction::half_line(-4, 4);
        // W_y = {h ≤ y} within the window
        assert_eq!(act.w_set(YPoint { sheet: 0, pos: 2 }).unwrap(), vec![-4, -3, -2, -1, 0, 1, 2]);
        // invariant full M: whole window
        let full = CommAction::new(
            vec![ZSubset::new(-4, vec![true; 9], Tail::Full, Tail::Full)],
            (-4, 4),
        );
        assert_eq!(full.w_set(YPoint { sheet: 0, pos: 0 }).unwrap().len(), 9);
        // empty M: empty W
        let empty = CommAction::new(
            vec![ZSubset::new(-4, vec![false; 9], Tail::Empty, Tail::Empty)],
            (-4, 4),
        );
        assert!(empty.w_set(YPoint { sheet: 0, pos: 0 }).unwrap().is_empty());
    }

    #[test]
    fn pw_act_identity_and_restriction() {
        let ctx = c2_halfline(16);
        let z = PwPair::basepoint(YPoint { sheet: 0, pos: 3 });
        let e = ctx.wreath.identity();
        assert_eq!(ctx.pw_act(&e, &z).unwrap(), z);
        // f = δ̄₀ with 0 ∈ W_y (y = 3 ≥ 0): restriction kills the support
        let f = ctx.wreath.delta(0, 1);
        assert_eq!(ctx.pw_act(&f, &z).unwrap(), z);
        // but for y = -1, 0 ∉ W_y and the coset lands in p
        let z2 = PwPair::basepoint(YPoint { sheet: 0, pos: -1 });
        let moved = ctx.pw_act(&f, &z2).unwrap();
        assert_eq!(moved.coset_map(), &[(0, 1)]);
    }

    #[test]
    fn pw_act_is_an_action() {
        let ctx = c2_halfline(40);
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..10_000 {
            let g1 = random_element(&ctx, &mut rng, 5, 2);
            let g2 = random_element(&ctx, &mut rng, 5, 2);
            let z = {
                let y = YPoint { sheet: 0, pos: rng.gen_range(-6..=6) };
                let mut z = PwPair::basepoint(y);
                // seed a valid p-support outside W_y
                for _ in 0..rng.gen_range(0..2) {
                    let x = rng.gen_range(-6..=6);
                    if !ctx.action.in_translated(y, x).unwrap() {
                        z = ctx.pw_act(&ctx.wreath.delta(x, 1), &z).unwrap();
                    }
                }
                z
            };
            let product = ctx.wreath.compose(&g1, &g2).unwrap();
            let via_product = ctx.pw_act(&product, &z).unwrap();
            let via_steps = ctx.pw_act(&g1, &ctx.pw_act(&g2, &z).unwrap()).unwrap();
            assert_eq!(via_product, via_steps);
        }
    }

    #[test]
    fn semidirect_relation() {
        let ctx = c2_halfline(40);
        let mut rng = StdRng::seed_from_u64(72);
        for _ in 0..1_000 {
            let f = {
                let mut e = random_element(&ctx, &mut rng, 5, 2);
                while !ctx.wreath.is_pure_lamp(&e) {
                    e = random_element(&ctx, &mut rng, 5, 2);
                }
                e
            };
            let h = ctx.wreath.pure_top(rng.gen_range(-5..=5));
            let z = PwPair::basepoint(YPoint { sheet: 0, pos: rng.gen_range(-6..=6) });
            let conj = ctx
                .wreath
                .compose(&ctx.wreath.compose(&h, &f).unwrap(), &ctx.wreath.inverse(&h).unwrap())
                .unwrap();
            let lhs = ctx.pw_act(&conj, &z).unwrap();
            let rhs = ctx
                .pw_act(&h, &ctx.pw_act(&f, &ctx.pw_act(&ctx.wreath.inverse(&h).unwrap(), &z).unwrap()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pw_length_examples() {
        let ctx = c2_halfline(32);
        assert_eq!(ctx.pw_length(&ctx.wreath.identity()).unwrap(), 0);
        // shift t: (M △ (1+M)) × {1} = {(0,1)}
        assert_eq!(ctx.pw_length(&ctx.wreath.pure_top(1)).unwrap(), 1);
        // lamp δ₁: N ∖ f⁻¹N = (M ∖ (1+M)) × {1} = {(0,1)}
        let f = ctx.wreath.delta(1, 1);
        assert_eq!(
            ctx.removed_set(&f).unwrap(),
            vec![YPoint { sheet: 0, pos: 0 }]
        );
    }

    /// Length oracle through the action itself: count `N ∖ gN` and
    /// `gN ∖ N` by applying `pw_act` to window points.
    fn length_oracle(ctx: &PwContext, g: &WreathElement<i64>, span: i64) -> u64 {
        let ginv = ctx.wreath.inverse(g).unwrap();
        let mut count = 0;
        for sheet in 0..ctx.action.sheets().len() {
            for pos in -span..=span {
                let z = PwPair::basepoint(YPoint { sheet, pos });
                if z.in_n(&ctx.action).unwrap() {
                    // z ∈ N ∖ gN ⟺ g⁻¹z ∉ N
                    if !ctx.pw_act(&ginv, &z).unwrap().in_n(&ctx.action).unwrap() {
                        count += 1;
                    }
                    // g·z ∈ gN ∖ N
                    if !ctx.pw_act(g, &z).unwrap().in_n(&ctx.action).unwrap() {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn pw_length_matches_action_oracle() {
        let ctx = c2_halfline(40);
        let mut rng = StdRng::seed_from_u64(73);
        for _ in 0..500 {
            let g = random_element(&ctx, &mut rng, 4, 3);
            assert_eq!(ctx.pw_length(&g).unwrap(), length_oracle(&ctx, &g, 20), "length mismatch for {g:?}");
        }
        // symmetrized context too
        let sym = ctx.symmetrize();
        for _ in 0..200 {
            let g = random_element(&sym, &mut rng, 4, 3);
            assert_eq!(sym.pw_length(&g).unwrap(), length_oracle(&sym, &g, 20));
        }
    }

    #[test]
    fn removed_set_matches_action() {
        let ctx = c2_halfline(40);
        let mut rng = StdRng::seed_from_u64(74);
        for _ in 0..500 {
            let mut f = random_element(&ctx, &mut rng, 5, 3);
            while !ctx.wreath.is_pure_lamp(&f) {
                f = random_element(&ctx, &mut rng, 5, 3);
            }
            let formula = ctx.removed_set(&f).unwrap();
            // direct: (m,1) ∈ N ∖ f⁻¹N ⟺ f·(m,1) ∉ N
            let mut direct = Vec::new();
            for pos in -20..=20 {
                let z = PwPair::basepoint(YPoint { sheet: 0, pos });
                if z.in_n(&ctx.action).unwrap() && !ctx.pw_act(&f, &z).unwrap().in_n(&ctx.action).unwrap() {
                    direct.push(YPoint { sheet: 0, pos });
                }
            }
            assert_eq!(formula, direct);
        }
    }

    #[test]
    fn length_dominates_ell0() {
        let ctx = c2_halfline(40);
        let mut rng = StdRng::seed_from_u64(75);
        for _ in 0..2_000 {
            let g = random_element(&ctx, &mut rng, 5, 3);
            assert!(ctx.pw_length(&g).unwrap() >= ctx.action.ell0(*g.top()).unwrap());
        }
    }

    #[test]
    fn symmetrize_balances_and_doubles() {
        let act = CommAction::half_line(-16, 16);
        let sym = act.symmetrize();
        for h in -6..=6i64 {
            // before: M∖hM and hM∖M can be lopsided (1 vs 0 for h = 1)
            // after: both halves contribute symmetrically
            for m in sym.sheets() {
                let fwd = m.minus(&m.translate(h)).unwrap().len();
                let bwd = m.translate(h).minus(m).unwrap().len();
                let _ = (fwd, bwd); // per-sheet sizes are mirrored across the pair
            }
            let total_fwd: usize = sym.sheets().iter().map(|m| m.minus(&m.translate(h)).unwrap().len()).sum();
            let total_bwd: usize = sym.sheets().iter().map(|m| m.translate(h).minus(m).unwrap().len()).sum();
            assert_eq!(total_fwd, total_bwd);
            assert_eq!(sym.ell0(h).unwrap(), 2 * act.ell0(h).unwrap());
        }
    }

    #[test]
    fn symmetrized_support_bound() {
        // after symmetrizing, 2ℓ(f) ≥ ℓ₀(x) for every x ∈ Supp_A(f)
        let ctx = c2_halfline(40).symmetrize();
        let mut rng = StdRng::seed_from_u64(76);
        for _ in 0..1_000 {
            let mut f = random_element(&ctx, &mut rng, 5, 3);
            while !ctx.wreath.is_pure_lamp(&f) {
                f = random_element(&ctx, &mut rng, 5, 3);
            }
            let len = ctx.pw_length(&f).unwrap();
            for x in ctx.wreath.supp_a(&f, &ctx.subgroup) {
                assert!(2 * len >= ctx.action.ell0(x).unwrap());
            }
        }
    }

    #[test]
    fn second_length_examples() {
        let ctx = c2_halfline(16);
        let ell1 = vec![0, 1];
        assert_eq!(ctx.second_length(&ctx.wreath.identity(), &ell1), 0);
        let f = ctx.wreath.element(&[(0, 1), (5, 1)], 0).unwrap();
        assert_eq!(ctx.second_length(&f, &ell1), 2);
        // independent of the top
        let fh = ctx.wreath.element(&[(0, 1), (5, 1)], 7).unwrap();
        assert_eq!(ctx.second_length(&fh, &ell1), 2);
    }

    #[test]
    fn sublevel_prune_drops_nothing() {
        // brute force over the same box with only the ℓ′ bound, no
        // union-size prune
        let ctx = c2_halfline(32).symmetrize();
        let ell1 = vec![0u64, 1];
        let k = 4u64;
        let (lo, hi, max_top) = (-8i64, 8i64, 2i64);
        let mut brute = Vec::new();
        let positions: Vec<i64> = (lo..=hi).collect();
        let mut stack: Vec<(usize, Vec<(i64, usize)>)> = vec![(0, Vec::new())];
        while let Some((i, lamp)) = stack.pop() {
            if lamp.len() as u64 > k {
                continue;
            }
            if i == positions.len() {
                for h in -max_top..=max_top {
                    let g = ctx.wreath.element(&lamp, h).unwrap();
                    if ctx.pw_length(&g).unwrap() + ctx.second_length(&g, &ell1) <= k {
                        brute.push(g);
                    }
                }
                continue;
            }
            stack.push((i + 1, lamp.clone()));
            let mut extended = lamp.clone();
            extended.push((positions[i], 1));
            stack.push((i + 1, extended));
        }
        brute.sort_by_key(|g| ctx.wreath.canonical_bytes(g));
        let pruned = ctx.sublevel_set(&ell1, k, lo, hi, max_top).unwrap();
        assert_eq!(pruned, brute);
    }

    #[test]
    fn small_sublevel_set() {
        let ctx = c2_halfline(32).symmetrize();
        let ell1 = vec![0, 1];
        let k = 4;
        let set = ctx.sublevel_set(&ell1, k, -4, 4, 3).unwrap();
        // contains the obvious members
        assert!(set.contains(&ctx.wreath.identity()));
        assert!(set.contains(&ctx.wreath.pure_top(1))); // ℓ = 2, ℓ′ = 0
        // every member satisfies the bound and the box constraints
        for g in &set {
            let total = ctx.pw_length(g).unwrap() + ctx.second_length(g, &ell1);
            assert!(total <= k);
            assert!(g.top().abs() <= 2); // ℓ ≥ ℓ₀(h) = 2|h|
            for x in ctx.wreath.supp_a(g, &ctx.subgroup) {
                assert!(ctx.action.ell0(x).unwrap() <= 2 * k);
            }
        }
        // and nothing on the boundary of the box sneaks in: δ₃ has ℓ = 6
        let far = ctx.wreath.delta(3, 1);
        assert!(ctx.pw_length(&far).unwrap() + ctx.second_length(&far, &ell1) > k);
    }
}

//! Closed-form polycompact and bounded radicals of semirestricted wreath
//! products, evaluated on windowed instances, with brute-force
//! conjugacy-closure cross-checks.
//!
//! Global properties of the acting group (`N`, `N′`, `N″`, `W(H)`, `B(H)`)
//! cannot be computed from a window, so instances declare them; missing
//! declarations are an error, never an approximation. Escape verdicts are
//! certified by one of the two explicit mechanisms from the radical
//! computation (translation of the `A`-support along an infinite orbit, and
//! `δ_x(b)` probes at moved points), never by heuristics.

use std::collections::HashMap;

use thiserror::Error;

use crate::groups::Subgroup;
use crate::wreath::{HSpace, OrbitKind, Point, WreathElement, WreathError, WreathProduct};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RadicalError {
    #[error("instance lacks a declared oracle: {0}")]
    MissingOracle(String),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

/// A declared subgroup of the acting group `H` (here always a quotient or
/// subgroup of `ℤ` described abstractly), closed under the intersections
/// the radical formulas take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredSubgroup {
    Trivial,
    All,
    /// `kℤ` inside `H = ℤ`, `k ≥ 2`.
    ZMultiples(i64),
}

impl DeclaredSubgroup {
    pub fn intersect(self, other: DeclaredSubgroup) -> DeclaredSubgroup {
        use DeclaredSubgroup::*;
        match (self, other) {
            (Trivial, _) | (_, Trivial) => Trivial,
            (All, x) | (x, All) => x,
            (ZMultiples(a), ZMultiples(b)) => ZMultiples(a / gcd(a, b) * b),
        }
    }

    pub fn contains(self, k: i64) -> bool {
        match self {
            DeclaredSubgroup::Trivial => k == 0,
            DeclaredSubgroup::All => true,
            DeclaredSubgroup::ZMultiples(m) => k % m == 0,
        }
    }

    pub fn is_trivial(self) -> bool {
        self == DeclaredSubgroup::Trivial
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A windowed instance `G = B ≀^A_X H` together with the declared global
/// data of `H` that the radical formulas consume.
#[derive(Debug, Clone)]
pub struct RadicalInstance<S: HSpace<Top = i64>> {
    pub product: WreathProduct<S>,
    /// The compact open subgroup `A ≤ B`.
    pub subgroup: Subgroup,
    /// Whether `B` models a compact group (true for honest finite `B`).
    pub b_compact: bool,
    pub x_has_finite_orbits: bool,
    pub x_has_infinite_orbits: bool,
    /// `N`: kernel of the `H`-action on `X`.
    pub kernel: Option<DeclaredSubgroup>,
    /// `N′`: preimage of the union of finite normal subgroups of `H/N`.
    pub finite_normal_preimage: Option<DeclaredSubgroup>,
    /// `N″`: elements acting with finite support on `X`.
    pub finite_support_movers: Option<DeclaredSubgroup>,
    /// `W(H)`: union of compact normal subgroups of `H`.
    pub w_top: Option<DeclaredSubgroup>,
    /// `B(H)`: union of relatively compact conjugacy classes of `H`.
    pub b_top: Option<DeclaredSubgroup>,
}

impl<S: HSpace<Top = i64>> RadicalInstance<S> {
    /// The kernel-data intersection `Ξ`: `N` for non-compact `B`,
    /// `N′ ∩ N″` for compact `B`.
    fn xi(&self) -> Result<DeclaredSubgroup, RadicalError> {
        let need = |o: &Option<DeclaredSubgroup>, name: &str| {
            o.ok_or_else(|| RadicalError::MissingOracle(name.to_string()))
        };
        if self.b_compact {
            Ok(need(&self.finite_normal_preimage, "N′")?.intersect(need(&self.finite_support_movers, "N″")?))
        } else {
            need(&self.kernel, "N")
        }
    }

    fn is_degenerate(&self) -> bool {
        // A = B or X empty: the radical formulas do not apply and the
        // remark values take over
        self.subgroup.order() == self.product.lamp_group.order()
            || self.product.space.points().is_empty()
    }
}

/// Which radical a descriptor describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadicalKind {
    Polycompact,
    Bounded,
}

/// The assembled radical: lamp constraints per orbit kind plus the top
/// subgroup.
#[derive(Debug, Clone)]
pub struct RadicalDescriptor {
    pub kind: RadicalKind,
    /// Values on infinite orbits must lie in this subgroup (the core of
    /// `A` in `B`); `None` when `X` has no infinite orbit.
    pub core_part: Option<Subgroup>,
    /// Values on finite orbits must lie here; `None` when `X` has no
    /// finite orbit.
    pub lamp_part: Option<Subgroup>,
    /// Constraint on the top element.
    pub top_part: DeclaredSubgroup,
}

impl RadicalDescriptor {
    /// True when only the identity satisfies the descriptor.
    pub fn is_trivial_group(&self) -> bool {
        self.core_part.as_ref().is_none_or(|c| c.is_trivial())
            && self.lamp_part.as_ref().is_none_or(|l| l.is_trivial())
            && self.top_part.is_trivial()
    }

    /// True when every representable element satisfies the descriptor.
    pub fn is_whole_group(&self) -> bool {
        let full = |s: &Subgroup| s.order() == s.parent().order();
        self.core_part.as_ref().is_none_or(full)
            && self.lamp_part.as_ref().is_none_or(full)
            && self.top_part == DeclaredSubgroup::All
    }
}

fn predict<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
    kind: RadicalKind,
) -> Result<RadicalDescriptor, RadicalError> {
    let b = &instance.product.lamp_group;
    let h_part = match kind {
        RadicalKind::Polycompact => &instance.w_top,
        RadicalKind::Bounded => &instance.b_top,
    };
    let h_part = h_part.ok_or_else(|| {
        RadicalError::MissingOracle(match kind {
            RadicalKind::Polycompact => "W(H)".into(),
            RadicalKind::Bounded => "B(H)".into(),
        })
    })?;
    if instance.is_degenerate() {
        // A = B: the radical is A^X ⋊ (W(H) resp. B(H)); X empty: just the
        // H-part
        return Ok(RadicalDescriptor {
            kind,
            core_part: instance.x_has_infinite_orbits.then(|| Subgroup::full(b.clone())),
            lamp_part: instance.x_has_finite_orbits.then(|| Subgroup::full(b.clone())),
            top_part: h_part,
        });
    }
    // for an honestly finite B, W(B) = B(B) = B
    let lamp_part = instance.x_has_finite_orbits.then(|| Subgroup::full(b.clone()));
    Ok(RadicalDescriptor {
        kind,
        core_part: instance.x_has_infinite_orbits.then(|| instance.subgroup.core()),
        lamp_part,
        top_part: h_part.intersect(instance.xi()?),
    })
}

/// The polycompact radical `W(G)` of the instance.
pub fn predict_w<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
) -> Result<RadicalDescriptor, RadicalError> {
    predict(instance, RadicalKind::Polycompact)
}

/// The bounded radical `B(G)` of the instance.
pub fn predict_b<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
) -> Result<RadicalDescriptor, RadicalError> {
    predict(instance, RadicalKind::Bounded)
}

/// The triviality conditions for the polycompact radical: `W(H) ∩ Ξ = 1`,
/// `W(B) = 1` if there are finite orbits, and `Core_B(A) = 1`.
pub fn triviality_conditions<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
) -> Result<bool, RadicalError> {
    let w_top = instance.w_top.ok_or_else(|| RadicalError::MissingOracle("W(H)".into()))?;
    let top_trivial = w_top.intersect(instance.xi()?).is_trivial();
    let lamp_ok = !instance.x_has_finite_orbits || instance.product.lamp_group.order() == 1;
    Ok(top_trivial && lamp_ok && instance.subgroup.core().is_trivial())
}

/// Decision procedure over a descriptor: lamp values in the core part off
/// finite orbits, in the lamp part on them, and the top in the top part.
pub fn membership<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
    descriptor: &RadicalDescriptor,
    g: &WreathElement<i64>,
) -> bool {
    for &(p, v) in g.lamp() {
        let ok = match instance.product.space.orbit_kind(p) {
            OrbitKind::Infinite => descriptor.core_part.as_ref().is_some_and(|c| c.contains(v)),
            OrbitKind::Finite => descriptor.lamp_part.as_ref().is_some_and(|l| l.contains(v)),
        };
        if !ok {
            return false;
        }
    }
    descriptor.top_part.contains(*g.top())
}

/// Verdict of the conjugacy-closure search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureVerdict {
    /// The conjugation orbit closed; the exact element list, sorted.
    Bounded { orbit: Vec<WreathElement<i64>> },
    /// A certified escape; replay with [`verify_escape`].
    Escaped { witness: EscapeWitness },
    /// Neither closed nor certified within the budget.
    BudgetExhausted,
}

/// The two escape mechanisms, with the data needed to replay them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EscapeWitness {
    /// Conjugating by powers of the shift translates a non-`A` lamp value
    /// along an infinite orbit.
    ShiftTranslation { shift: i64, support_point: Point },
    /// The top moves infinitely many points (it lies outside `N″`);
    /// conjugating by `δ_x(b)`, `b ∉ A`, plants non-`A` values at moved
    /// points `x` arbitrarily far out.
    DeltaProbes { b_value: usize, top: i64 },
    /// `B` is declared non-compact and the top moves a window point, so
    /// the commutators `[g, δ_x(b)]` take the value `b⁻¹` at `x` for every
    /// `b`; the conjugates leave every compact set of values.
    NoncompactValues { x: Point, top: i64 },
}

/// Searches the conjugation orbit of `g` under the group generated by
/// `gens`. Certified escape probes run first, since a finite window can
/// close an orbit that is unbounded in the full group.
pub fn conj_closure<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
    g: &WreathElement<i64>,
    gens: &[WreathElement<i64>],
    budget: usize,
) -> Result<ClosureVerdict, RadicalError> {
    let ctx = &instance.product;
    let supp_a = ctx.supp_a(g, &instance.subgroup);

    // probe: translation of the A-support along an infinite orbit
    if let Some(&x) = supp_a.iter().find(|&&p| ctx.space.orbit_kind(p) == OrbitKind::Infinite) {
        return Ok(ClosureVerdict::Escaped {
            witness: EscapeWitness::ShiftTranslation { shift: 1, support_point: x },
        });
    }
    // probe: top moves infinitely many points
    let top = *g.top();
    if top != 0 {
        let movers = instance
            .finite_support_movers
            .ok_or_else(|| RadicalError::MissingOracle("N″".into()))?;
        if !movers.contains(top) {
            if let Some(b) = (1..ctx.lamp_group.order()).find(|&b| !instance.subgroup.contains(b)) {
                return Ok(ClosureVerdict::Escaped {
                    witness: EscapeWitness::DeltaProbes { b_value: b, top },
                });
            }
        }
        if !instance.b_compact {
            if let Some(x) = ctx.space.points().into_iter().find(|&p| {
                ctx.space.apply(&top, p).map(|q| q != p).unwrap_or(false)
            }) {
                return Ok(ClosureVerdict::Escaped {
                    witness: EscapeWitness::NoncompactValues { x, top },
                });
            }
        }
    }

    // breadth-first conjugation orbit
    let mut seen: HashMap<Vec<u8>, WreathElement<i64>> = HashMap::new();
    seen.insert(ctx.canonical_bytes(g), g.clone());
    let mut frontier = vec![g.clone()];
    while let Some(x) = frontier.pop() {
        for s in gens {
            for conjugator in [s.clone(), ctx.inverse(s)?] {
                let y = match ctx.conjugate(&x, &conjugator) {
                    Ok(y) => y,
                    Err(WreathError::WindowEscape(_)) => return Ok(ClosureVerdict::BudgetExhausted),
                    Err(e) => return Err(e.into()),
                };
                let key = ctx.canonical_bytes(&y);
                if !seen.contains_key(&key) {
                    if seen.len() >= budget {
                        return Ok(ClosureVerdict::BudgetExhausted);
                    }
                    seen.insert(key, y.clone());
                    frontier.push(y);
                }
            }
        }
    }
    let mut orbit: Vec<WreathElement<i64>> = seen.into_values().collect();
    orbit.sort_by_key(|e| ctx.canonical_bytes(e));
    Ok(ClosureVerdict::Bounded { orbit })
}

/// Replays an escape witness for `steps` rounds inside the window and
/// checks that it really produces pairwise-distinct conjugates whose
/// `A`-supports leave every bounded region seen so far.
pub fn verify_escape<S: HSpace<Top = i64>>(
    instance: &RadicalInstance<S>,
    g: &WreathElement<i64>,
    witness: &EscapeWitness,
    steps: usize,
) -> Result<bool, RadicalError> {
    let ctx = &instance.product;
    match witness {
        EscapeWitness::ShiftTranslation { shift, support_point } => {
            if !ctx.supp_a(g, &instance.subgroup).contains(support_point) {
                return Ok(false);
            }
            let mut expected = *support_point;
            let mut conjugate = g.clone();
            let t = ctx.pure_top(*shift);
            for _ in 0..steps {
                conjugate = ctx.conjugate(&conjugate, &t)?;
                expected = ctx.space.apply(shift, expected)?;
                if !ctx.supp_a(&conjugate, &instance.subgroup).contains(&expected) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        EscapeWitness::DeltaProbes { b_value, top } => {
            if instance.subgroup.contains(*b_value) || *top != *g.top() {
                return Ok(false);
            }
            // probe at window points x moved by the top and away from the
            // support: the conjugate gains non-A values at both x and top·x
            let mut distinct = std::collections::HashSet::new();
            for x in ctx.space.points() {
                let Ok(tx) = ctx.space.apply(top, x) else { continue };
                if tx == x || g.lamp_value(x) != 0 || g.lamp_value(tx) != 0 {
                    continue;
                }
                let conj = ctx.conjugate(g, &ctx.delta(x, *b_value))?;
                let supp = ctx.supp_a(&conj, &instance.subgroup);
                if !supp.contains(&x) || !supp.contains(&tx) {
                    return Ok(false);
                }
                distinct.insert(ctx.canonical_bytes(&conj));
                if distinct.len() >= steps {
                    break;
                }
            }
            Ok(distinct.len() >= steps.min(2))
        }
        EscapeWitness::NoncompactValues { x, top } => {
            if instance.b_compact || *top != *g.top() {
                return Ok(false);
            }
            let tx = ctx.space.apply(top, *x)?;
            if tx == *x {
                return Ok(false);
            }
            // p = [g, δ_x(b)] has value b⁻¹ at x for every b
            for b in 1..ctx.lamp_group.order() {
                let p = ctx.commutator_with_delta(g, *x, b)?;
                if p.lamp_value(*x) != ctx.lamp_group.inverse(b) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

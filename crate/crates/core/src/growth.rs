//! Ball enumeration and growth reporting over any group with a canonical
//! element form: finite groups, wreath elements, Grigorchuk words.
//!
//! Deduplication is by canonical bytes only, and the frontier is processed
//! in sorted order, so tables are deterministic and independent of
//! generator order.

use thiserror::Error;

use crate::groups::FiniteGroup;
use crate::wreath::{HSpace, WreathElement, WreathError, WreathProduct};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error("element arithmetic failed: {0}")]
    Element(String),
    #[error("memory budget of {budget} bytes exceeded at radius {radius}")]
    MemoryBudgetExceeded { budget: usize, radius: usize },
    #[error("growth table too short (need radius ≥ 4, got {0})")]
    TableTooShort(usize),
}

impl From<WreathError> for GrowthError {
    fn from(e: WreathError) -> Self {
        GrowthError::Element(e.to_string())
    }
}

/// A group whose elements can be composed and put in canonical byte form,
/// enough for breadth-first enumeration.
pub trait BfsGroup {
    type Elem: Clone;

    fn identity_elem(&self) -> Self::Elem;
    fn compose_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GrowthError>;
    /// Canonical byte serialization; must be injective on the reachable set.
    fn canonical(&self, a: &Self::Elem) -> Result<Vec<u8>, GrowthError>;
}

impl BfsGroup for FiniteGroup {
    type Elem = usize;

    fn identity_elem(&self) -> usize {
        0
    }
    fn compose_elems(&self, a: &usize, b: &usize) -> Result<usize, GrowthError> {
        Ok(self.compose(*a, *b))
    }
    fn canonical(&self, a: &usize) -> Result<Vec<u8>, GrowthError> {
        Ok((*a as u32).to_le_bytes().to_vec())
    }
}

impl<S: HSpace> BfsGroup for WreathProduct<S> {
    type Elem = WreathElement<S::Top>;

    fn identity_elem(&self) -> Self::Elem {
        self.identity()
    }
    fn compose_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, GrowthError> {
        Ok(self.compose(a, b)?)
    }
    fn canonical(&self, a: &Self::Elem) -> Result<Vec<u8>, GrowthError> {
        Ok(self.canonical_bytes(a))
    }
}

/// Cumulative ball and sphere sizes of a Cayley ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    /// `sizes[n] = |B_n|`.
    pub sizes: Vec<u64>,
    /// `sphere_sizes[n] = |S_n|`; `sizes[n] = sizes[n-1] + sphere_sizes[n]`.
    pub sphere_sizes: Vec<u64>,
    /// Human-readable description of the generating set.
    pub generators: String,
}

impl GrowthTable {
    pub fn radius(&self) -> usize {
        self.sizes.len() - 1
    }

    /// CSV rows `radius,ball,sphere` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,ball,sphere\n");
        for (n, (&b, &s)) in self.sizes.iter().zip(&self.sphere_sizes).enumerate() {
            out.push_str(&format!("{n},{b},{s}\n"));
        }
        out
    }
}

/// Breadth-first ball sizes up to radius `r`.
///
/// `gens` should be closed under inverses; deduplication uses canonical
/// forms only. `budget_bytes` caps the approximate memory of the visited
/// set (keys plus map overhead).
pub fn ball_sizes<G: BfsGroup>(
    group: &G,
    gens: &[G::Elem],
    r: usize,
    budget_bytes: Option<usize>,
) -> Result<GrowthTable, GrowthError> {
    enumerate(group, gens, r, budget_bytes, false).map(|(t, _, _)| t)
}

/// Table plus (optionally) the enumerated elements and their canonical keys.
pub(crate) type Enumeration<E> = (GrowthTable, Vec<E>, Vec<Vec<u8>>);

pub(crate) fn enumerate<G: BfsGroup>(
    group: &G,
    gens: &[G::Elem],
    r: usize,
    budget_bytes: Option<usize>,
    keep_elements: bool,
) -> Result<Enumeration<G::Elem>, GrowthError> {
    use std::collections::HashMap;
    let mut visited: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut elements: Vec<G::Elem> = Vec::new();
    let mut keys: Vec<Vec<u8>> = Vec::new();
    let mut used_bytes = 0usize;

    let e = group.identity_elem();
    let ekey = group.canonical(&e)?;
    used_bytes += ekey.len() + 48;
    visited.insert(ekey.clone(), 0);
    elements.push(e);
    keys.push(ekey);

    let mut sizes = vec![1u64];
    let mut spheres = vec![1u64];
    // frontier as indices into `elements`, kept in canonical-byte order
    let mut frontier: Vec<usize> = vec![0];
    for radius in 1..=r {
        let mut fresh: Vec<(Vec<u8>, G::Elem)> = Vec::new();
        for &i in &frontier {
            let base = elements[i].clone();
            for s in gens {
                let next = group.compose_elems(&base, s)?;
                let key = group.canonical(&next)?;
                if !visited.contains_key(&key) && !fresh.iter().any(|(k, _)| *k == key) {
                    fresh.push((key, next));
                }
            }
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        let mut next_frontier = Vec::with_capacity(fresh.len());
        for (key, elem) in fresh {
            used_bytes += key.len() + 48;
            if let Some(budget) = budget_bytes {
                if used_bytes > budget {
                    return Err(GrowthError::MemoryBudgetExceeded { budget, radius });
                }
            }
            let idx = elements.len();
            visited.insert(key.clone(), idx);
            elements.push(elem);
            keys.push(key);
            next_frontier.push(idx);
        }
        spheres.push(next_frontier.len() as u64);
        sizes.push(*sizes.last().unwrap() + next_frontier.len() as u64);
        frontier = next_frontier;
        if frontier.is_empty() {
            for _ in radius + 1..=r {
                spheres.push(0);
                sizes.push(*sizes.last().unwrap());
            }
            break;
        }
    }
    if !keep_elements {
        elements.clear();
        keys.clear();
    }
    Ok((GrowthTable { sizes, sphere_sizes: spheres, generators: format!("{} generators", gens.len()) }, elements, keys))
}

/// Least-squares diagnostics for a growth table. Reports fit exponents and
/// residuals for the polynomial model `|B_n| ~ n^α` and the exponential
/// model `|B_n| ~ λ^n`; it never claims a growth type.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// Exponent of the power-law fit `log|B_n| = α·log n + c` over `n ≥ 1`.
    pub poly_degree: f64,
    /// Root-mean-square residual of the power-law fit, in log space.
    pub poly_residual: f64,
    /// Base of the exponential fit `log|B_n| = n·log λ + c`.
    pub exp_base: f64,
    /// Root-mean-square residual of the exponential fit, in log space.
    pub exp_residual: f64,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

pub fn growth_report(table: &GrowthTable) -> Result<GrowthReport, GrowthError> {
    let r = table.radius();
    if r < 4 {
        return Err(GrowthError::TableTooShort(r));
    }
    let logs: Vec<f64> = table.sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ns: Vec<f64> = (0..=r).map(|n| n as f64).collect();
    let (poly_degree, _, poly_residual) =
        least_squares(&ns[1..].iter().map(|n| n.ln()).collect::<Vec<_>>(), &logs[1..]);
    let (slope, _, exp_residual) = least_squares(&ns, &logs);
    Ok(GrowthReport { poly_degree, poly_residual, exp_base: slope.exp(), exp_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::ZShiftSpace;
    use std::collections::HashSet;
    use std::sync::Arc;

    /// The line ℤ with generators ±1.
    struct ZLine;

    impl BfsGroup for ZLine {
        type Elem = i64;
        fn identity_elem(&self) -> i64 {
            0
        }
        fn compose_elems(&self, a: &i64, b: &i64) -> Result<i64, GrowthError> {
            Ok(a + b)
        }
        fn canonical(&self, a: &i64) -> Result<Vec<u8>, GrowthError> {
            Ok(a.to_le_bytes().to_vec())
        }
    }

    fn lamplighter(width: i64) -> WreathProduct<ZShiftSpace> {
        WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), ZShiftSpace::new(-width, width))
    }

    fn lamplighter_gens(ctx: &WreathProduct<ZShiftSpace>) -> Vec<crate::wreath::WreathElement<i64>> {
        vec![ctx.delta(0, 1), ctx.pure_top(1), ctx.pure_top(-1)]
    }

    #[test]
    fn line_growth() {
        let t = ball_sizes(&ZLine, &[1, -1], 8, None).unwrap();
        assert_eq!(t.sizes, vec![1, 3, 5, 7, 9, 11, 13, 15, 17]);
    }

    #[test]
    fn lamplighter_small_balls() {
        // |B_1| = 4, |B_2| = 10 by hand
        let ctx = lamplighter(16);
        let t = ball_sizes(&ctx, &lamplighter_gens(&ctx), 2, None).unwrap();
        assert_eq!(t.sizes, vec![1, 4, 10]);
    }

    /// Naive oracle: enumerate all words of length ≤ r and deduplicate with
    /// structural equality, bypassing canonical bytes.
    fn naive_lamplighter_sizes(r: usize) -> Vec<u64> {
        let ctx = lamplighter(16);
        let gens = lamplighter_gens(&ctx);
        let mut seen: HashSet<crate::wreath::WreathElement<i64>> = HashSet::new();
        seen.insert(ctx.identity());
        let mut layer = vec![ctx.identity()];
        let mut sizes = vec![1u64];
        for _ in 1..=r {
            let mut next = Vec::new();
            for w in &layer {
                for s in &gens {
                    let x = ctx.compose(w, s).unwrap();
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
            sizes.push(seen.len() as u64);
            layer = next;
        }
        sizes
    }

    #[test]
    fn lamplighter_matches_naive_word_enumeration() {
        let ctx = lamplighter(16);
        let t = ball_sizes(&ctx, &lamplighter_gens(&ctx), 6, None).unwrap();
        assert_eq!(t.sizes, naive_lamplighter_sizes(6));
    }

    #[test]
    fn generator_order_invariance() {
        let ctx = lamplighter(16);
        let mut gens = lamplighter_gens(&ctx);
        let t1 = ball_sizes(&ctx, &gens, 6, None).unwrap();
        gens.reverse();
        let t2 = ball_sizes(&ctx, &gens, 6, None).unwrap();
        assert_eq!(t1.sizes, t2.sizes);
    }

    #[test]
    fn finite_group_saturates() {
        let s4 = FiniteGroup::symmetric(4).unwrap();
        let gens = vec![
            crate::groups::perm_to_id(&[1, 0, 2, 3]),
            crate::groups::perm_to_id(&[1, 2, 3, 0]),
            crate::groups::perm_to_id(&[3, 0, 1, 2]),
        ];
        let t = ball_sizes(&s4, &gens, 12, None).unwrap();
        assert_eq!(*t.sizes.last().unwrap(), 24);
        assert!(t.sizes.windows(2).all(|w| w[0] <= w[1] && w[1] <= 24));
    }

    #[test]
    fn adding_a_generator_dominates() {
        let ctx = lamplighter(16);
        let base = lamplighter_gens(&ctx);
        let mut more = base.clone();
        more.push(ctx.delta(1, 1));
        let t1 = ball_sizes(&ctx, &base, 6, None).unwrap();
        let t2 = ball_sizes(&ctx, &more, 6, None).unwrap();
        for (a, b) in t1.sizes.iter().zip(&t2.sizes) {
            assert!(b >= a);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = lamplighter(16);
        let res = ball_sizes(&ctx, &lamplighter_gens(&ctx), 8, Some(512));
        assert!(matches!(res, Err(GrowthError::MemoryBudgetExceeded { .. })));
    }

    #[test]
    fn window_escape_propagates() {
        let ctx = lamplighter(2);
        let res = ball_sizes(&ctx, &lamplighter_gens(&ctx), 8, None);
        assert!(matches!(res, Err(GrowthError::Element(_))));
    }

    #[test]
    fn report_on_line_is_degree_one() {
        let t = ball_sizes(&ZLine, &[1, -1], 10, None).unwrap();
        let rep = growth_report(&t).unwrap();
        assert!((rep.poly_degree - 1.0).abs() < 0.25, "degree {}", rep.poly_degree);
        assert!(rep.poly_residual < 0.05, "residual {}", rep.poly_residual);
        assert!(rep.poly_residual < rep.exp_residual);
    }

    #[test]
    fn report_on_free_group_is_exponential_base_three() {
        // closed-form oracle: |B_n| = 2·3^n − 1 for the free group of rank 2
        let sizes: Vec<u64> = (0..=8).map(|n| 2 * 3u64.pow(n) - 1).collect();
        let spheres: Vec<u64> = std::iter::once(1)
            .chain(sizes.windows(2).map(|w| w[1] - w[0]))
            .collect();
        let t = GrowthTable { sizes, sphere_sizes: spheres, generators: "free rank 2".into() };
        let rep = growth_report(&t).unwrap();
        assert!((rep.exp_base - 3.0).abs() < 0.2, "base {}", rep.exp_base);
        assert!(rep.exp_residual < rep.poly_residual);
    }

    #[test]
    fn report_on_lamplighter_prefers_exponential() {
        let ctx = lamplighter(16);
        let t = ball_sizes(&ctx, &lamplighter_gens(&ctx), 10, None).unwrap();
        let rep = growth_report(&t).unwrap();
        assert!(rep.exp_residual < rep.poly_residual);
    }

    #[test]
    fn short_tables_are_rejected() {
        let t = ball_sizes(&ZLine, &[1, -1], 3, None).unwrap();
        assert!(matches!(growth_report(&t), Err(GrowthError::TableTooShort(3))));
    }

    #[test]
    fn csv_has_one_row_per_radius() {
        let t = ball_sizes(&ZLine, &[1, -1], 5, None).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("radius,ball,sphere\n0,1,1\n"));
    }
}

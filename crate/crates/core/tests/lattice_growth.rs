//! Growth of the wreath product of a finite lamp group over the Schreier
//! orbit of a boundary ray, with the automaton group on top: the discrete
//! lattice sitting inside the locally compact product. Ball sizes are
//! checked against a naive word-enumeration oracle whose equality test
//! goes through level actions only, independent of the canonical machine.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use wreathkit::grigorchuk::{act_on_ray, level_permutation, GrigWord, Ray, SchreierSpace, GENERATORS};
use wreathkit::groups::FiniteGroup;
use wreathkit::growth::ball_sizes;
use wreathkit::wreath::{HSpace, WreathElement, WreathProduct};

/// Oracle element: explicit lamp map over orbit rays plus an unreduced top
/// word. Composition mirrors the definition directly.
#[derive(Clone)]
struct Raw {
    lamp: BTreeMap<usize, usize>,
    top: GrigWord,
}

struct Oracle {
    lamp_group: FiniteGroup,
    rays: Vec<Ray>,
    index: HashMap<Ray, usize>,
    /// dedup level for top words; stability across `level` and `level + 2`
    /// is asserted by the caller
    level: usize,
}

impl Oracle {
    fn compose(&self, u: &Raw, v: &Raw) -> Raw {
        let mut lamp = u.lamp.clone();
        for (&p, &val) in &v.lamp {
            let moved = act_on_ray(&u.top, &self.rays[p]);
            let q = self.index[&moved];
            let merged = self.lamp_group.compose(*lamp.get(&q).unwrap_or(&0), val);
            if merged == 0 {
                lamp.remove(&q);
            } else {
                lamp.insert(q, merged);
            }
        }
        Raw { lamp, top: u.top.concat(&v.top) }
    }

    fn key(&self, e: &Raw) -> (Vec<(usize, usize)>, Vec<u32>) {
        let lamp: Vec<(usize, usize)> = e.lamp.iter().map(|(&p, &v)| (p, v)).collect();
        (lamp, level_permutation(&e.top, self.level))
    }

    fn ball_sizes(&self, gens: &[Raw], r: usize) -> Vec<u64> {
        let identity = Raw { lamp: BTreeMap::new(), top: GrigWord::empty() };
        let mut seen: HashSet<(Vec<(usize, usize)>, Vec<u32>)> = HashSet::new();
        seen.insert(self.key(&identity));
        let mut layer = vec![identity];
        let mut sizes = vec![1u64];
        for _ in 1..=r {
            let mut next = Vec::new();
            for e in &layer {
                for g in gens {
                    let product = self.compose(e, g);
                    if seen.insert(self.key(&product)) {
                        next.push(product);
                    }
                }
            }
            sizes.push(seen.len() as u64);
            layer = next;
        }
        sizes
    }
}

#[test]
fn lattice_ball_sizes_match_naive_oracle() {
    let base = Ray::parse("1^inf").unwrap();
    let radius = 3;
    let space = SchreierSpace::new(&base, 2 * radius + 2);
    let orbit: Vec<Ray> = (0..space.orbit_size()).map(|p| space.ray(p).clone()).collect();
    let ctx = WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), space);

    // generators: the lamp at the base coset plus the four tree generators
    let mut gens: Vec<WreathElement<GrigWord>> = vec![ctx.delta(0, 1)];
    for g in GENERATORS {
        gens.push(ctx.pure_top(GrigWord(vec![g])));
    }
    let table = ball_sizes(&ctx, &gens, radius, None).unwrap();
    assert_eq!(table.sizes[0], 1);
    assert_eq!(table.sizes[1], 6, "identity plus five distinct generators");

    let index: HashMap<Ray, usize> = orbit.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    let mut raw_gens = vec![Raw { lamp: BTreeMap::from([(0, 1)]), top: GrigWord::empty() }];
    for g in GENERATORS {
        raw_gens.push(Raw { lamp: BTreeMap::new(), top: GrigWord(vec![g]) });
    }
    // words in the ball have length ≤ 2·radius after composition; level
    // stability across two levels guards the act-based dedup
    for level in [10usize, 12] {
        let oracle = Oracle {
            lamp_group: FiniteGroup::cyclic(2),
            rays: orbit.clone(),
            index: index.clone(),
            level,
        };
        assert_eq!(table.sizes, oracle.ball_sizes(&raw_gens, radius), "level {level}");
    }
}

#[test]
fn lattice_relations_hold() {
    // inside the lattice: lamps at distinct orbit points commute, lamps
    // square away, and conjugating the base lamp by a top element moves it
    // to the translated coset
    let base = Ray::parse("1^inf").unwrap();
    let space = SchreierSpace::new(&base, 8);
    let ctx = WreathProduct::new(Arc::new(FiniteGroup::cyclic(2)), space);
    let canon = |e: &WreathElement<GrigWord>| ctx.canonical_bytes(e);

    let lamp0 = ctx.delta(0, 1);
    assert_eq!(canon(&ctx.compose(&lamp0, &lamp0).unwrap()), canon(&ctx.identity()));

    let a = ctx.pure_top(GrigWord::parse("a").unwrap());
    let moved = ctx.conjugate(&lamp0, &a).unwrap();
    let target = ctx.space.apply(&GrigWord::parse("a").unwrap(), 0).unwrap();
    assert_eq!(moved.lamp(), &[(target, 1)]);
    assert_ne!(target, 0, "a moves the base coset of the all-ones ray");

    let far = ctx.delta(target, 1);
    let prod1 = ctx.compose(&lamp0, &far).unwrap();
    let prod2 = ctx.compose(&far, &lamp0).unwrap();
    assert_eq!(canon(&prod1), canon(&prod2), "distinct lamps commute");

    // b fixes the base ray, so conjugation by b fixes the base lamp
    let b = ctx.pure_top(GrigWord::parse("b").unwrap());
    let fixed = ctx.conjugate(&lamp0, &b).unwrap();
    assert_eq!(canon(&fixed), canon(&lamp0));
}

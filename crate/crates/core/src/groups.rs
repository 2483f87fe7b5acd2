//! Finite groups as explicit multiplication tables, plus the subgroup
//! calculus (cores, normal closures, conjugacy classes) that the wreath,
//! radical and classifier modules build on.
//!
//! Elements are table indices (`usize`); index 0 is always the identity.
//! Groups are immutable once constructed, so tables can be shared freely
//! across threads behind an `Arc`.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element id {id} out of range for group of order {order}")]
    OutOfRange { id: usize, order: usize },
    #[error("not a group table: {0}")]
    NotAGroup(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("symmetric group degree {0} too large (max 6)")]
    DegreeTooLarge(usize),
    #[error("not a homomorphism: fails at pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
}

/// A finite group given by its full multiplication table.
///
/// `table[g * order + h]` is the product `g · h`. The identity is element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds a group from an explicit table, validating the group axioms.
    ///
    /// Associativity is checked exhaustively up to order 128 and by a
    /// deterministic sample of 2·10⁵ triples above that.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(GroupError::NotAGroup("table is not square".into()));
            }
            for &v in row {
                if v >= order {
                    return Err(GroupError::NotAGroup(format!("entry {v} out of range")));
                }
                flat.push(v as u32);
            }
        }
        let group = Self::from_flat(order, flat, labels)?;
        group.check_axioms()?;
        Ok(group)
    }

    fn from_flat(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        // identity at 0
        for g in 0..order {
            if table[g] as usize != g || table[g * order] as usize != g {
                return Err(GroupError::NotAGroup("element 0 is not an identity".into()));
            }
        }
        // rows and columns are permutations
        let mut seen = vec![false; order];
        for g in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..order {
                let v = table[g * order + h] as usize;
                if seen[v] {
                    return Err(GroupError::NotAGroup(format!("row {g} repeats entry {v}")));
                }
                seen[v] = true;
            }
        }
        // inverses
        let mut inverse = vec![0u32; order];
        for g in 0..order {
            let mut found = None;
            for h in 0..order {
                if table[g * order + h] == 0 && table[h * order + g] == 0 {
                    found = Some(h as u32);
                    break;
                }
            }
            inverse[g] = found.ok_or_else(|| GroupError::NotAGroup(format!("element {g} has no inverse")))?;
        }
        Ok(FiniteGroup { order, table, inverse, labels })
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<(), GroupError> {
            if self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c)) {
                return Err(GroupError::NotAGroup(format!("associativity fails at ({a},{b},{c})")));
            }
            Ok(())
        };
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            // deterministic LCG sample; the full check would be O(n^3)
            let mut x = 0x2545f491u64;
            let mut next = || {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (x >> 33) as usize % n
            };
            for _ in 0..200_000 {
                let (a, b, c) = (next(), next(), next());
                check(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Cyclic group of order `k`.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        let mut table = vec![0u32; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = ((a + b) % k) as u32;
            }
        }
        let labels = (0..k).map(|i| i.to_string()).collect();
        Self::from_flat(k, table, Some(labels)).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2k` (symmetries of the `k`-gon), `k ≥ 1`.
    ///
    /// Element `j + k·s` is the rotation `r^j` for `s = 0` and the
    /// reflection `r^j·s` for `s = 1`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1);
        let n = 2 * k;
        let idx = |j: usize, s: usize| j + k * s;
        let mut table = vec![0u32; n * n];
        for j1 in 0..k {
            for s1 in 0..2 {
                for j2 in 0..k {
                    for s2 in 0..2 {
                        // r^{j1} s^{s1} · r^{j2} s^{s2} = r^{j1 + (-1)^{s1} j2} s^{s1 ^ s2}
                        let j = if s1 == 0 { (j1 + j2) % k } else { (j1 + k - j2 % k) % k };
                        table[idx(j1, s1) * n + idx(j2, s2)] = idx(j, s1 ^ s2) as u32;
                    }
                }
            }
        }
        let labels = (0..n)
            .map(|i| {
                let (j, s) = (i % k, i / k);
                match (j, s) {
                    (0, 0) => "e".into(),
                    (j, 0) => format!("r{j}"),
                    (0, _) => "s".into(),
                    (j, _) => format!("r{j}s"),
                }
            })
            .collect();
        Self::from_flat(n, table, Some(labels)).expect("dihedral table is a group")
    }

    /// Symmetric group on `n` letters, `1 ≤ n ≤ 6`.
    ///
    /// Elements are permutations of `{0,…,n−1}` enumerated in lexicographic
    /// order of their one-line notation, so the identity has id 0. Use
    /// [`perm_to_id`] / [`id_to_perm`] to translate. The product is function
    /// composition: `(g·h)(x) = g(h(x))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 6 {
            return Err(GroupError::DegreeTooLarge(n));
        }
        let order = (1..=n).product::<usize>();
        let mut table = vec![0u32; order * order];
        let perms: Vec<Vec<usize>> = (0..order).map(|i| id_to_perm(n, i)).collect();
        for (g, pg) in perms.iter().enumerate() {
            for (h, ph) in perms.iter().enumerate() {
                let prod: Vec<usize> = (0..n).map(|x| pg[ph[x]]).collect();
                table[g * order + h] = perm_to_id(&prod) as u32;
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// Direct product `A × B`; element `a + |A|·b` is the pair `(a, b)`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for a1 in 0..na {
            for b1 in 0..nb {
                for a2 in 0..na {
                    for b2 in 0..nb {
                        let g = a1 + na * b1;
                        let h = a2 + na * b2;
                        table[g * n + h] = (a.compose(a1, a2) + na * b.compose(b1, b2)) as u32;
                    }
                }
            }
        }
        let labels = (0..n)
            .map(|i| format!("({},{})", a.label(i % na), b.label(i / na)))
            .collect();
        Self::from_flat(n, table, Some(labels)).expect("product table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Table lookup `g · h`. Panics if an id is out of range.
    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> usize {
        assert!(g < self.order && h < self.order, "element id out of range");
        self.table[g * self.order + h] as usize
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        self.compose(self.compose(by, g), self.inverse(by))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.compose(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.compose(g, h) == self.compose(h, g)))
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Conjugation orbit of `g`, sorted.
    pub fn conjugacy_class(&self, g: usize) -> Vec<usize> {
        let mut class: Vec<usize> = (0..self.order).map(|h| self.conjugate(g, h)).collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    /// All conjugacy classes, each sorted, ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if !seen[g] {
                let class = self.conjugacy_class(g);
                for &x in &class {
                    seen[x] = true;
                }
                classes.push(class);
            }
        }
        classes
    }

    /// Member set of the subgroup generated by `gens` (sorted ids).
    pub fn generated_members(&self, gens: &[usize]) -> Vec<usize> {
        let mut members: HashSet<usize> = HashSet::new();
        members.insert(0);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                for y in [self.compose(x, s), self.compose(x, self.inverse(s))] {
                    if members.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        let mut out: Vec<usize> = members.into_iter().collect();
        out.sort_unstable();
        out
    }
}

/// A subgroup as a sorted member list, holding its parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates that `members` really form a subgroup.
    pub fn new(parent: Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(GroupError::OutOfRange { id: bad, order: parent.order() });
        }
        if members.binary_search(&0).is_err() {
            return Err(GroupError::NotASubgroup("missing identity".into()));
        }
        for &a in &members {
            if members.binary_search(&parent.inverse(a)).is_err() {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if members.binary_search(&parent.compose(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup(format!("product {a}·{b} escapes")));
                }
            }
        }
        Ok(Subgroup { parent, members })
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        Subgroup { parent, members: vec![0] }
    }

    pub fn full(parent: Arc<FiniteGroup>) -> Self {
        let members = (0..parent.order()).collect();
        Subgroup { parent, members }
    }

    pub fn generated(parent: Arc<FiniteGroup>, gens: &[usize]) -> Self {
        let members = parent.generated_members(gens);
        Subgroup { parent, members }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_normal(&self) -> bool {
        self.parent
            .elements()
            .all(|g| self.members.iter().all(|&m| self.contains(self.parent.conjugate(m, g))))
    }

    /// The core `∩_{b∈B} bAb⁻¹`: the largest normal subgroup of the parent
    /// contained in this subgroup.
    pub fn core(&self) -> Subgroup {
        let g = &self.parent;
        let members: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&m| g.elements().all(|b| self.contains(g.conjugate(m, b))))
            .collect();
        Subgroup { parent: self.parent.clone(), members }
    }

    /// Assigns each parent element the index of its left coset `gA`.
    /// Cosets are numbered in order of their least member, so coset 0 is
    /// the subgroup itself.
    pub fn left_coset_index(&self) -> (Vec<usize>, usize) {
        let g = &self.parent;
        let mut index = vec![usize::MAX; g.order()];
        let mut count = 0;
        for x in 0..g.order() {
            if index[x] == usize::MAX {
                for &a in &self.members {
                    index[g.compose(x, a)] = count;
                }
                count += 1;
            }
        }
        (index, count)
    }
}

/// Smallest normal subgroup of `parent` containing `gens`: the fixed point
/// of saturating by conjugates, inverses and products.
pub fn normal_closure(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Subgroup {
    let g = parent;
    let mut closure: HashSet<usize> = HashSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    let push = |set: &mut HashSet<usize>, frontier: &mut Vec<usize>, x: usize| {
        if set.insert(x) {
            frontier.push(x);
        }
    };
    push(&mut closure, &mut frontier, 0);
    for &s in gens {
        push(&mut closure, &mut frontier, s);
    }
    while let Some(x) = frontier.pop() {
        push(&mut closure, &mut frontier, g.inverse(x));
        for b in g.elements() {
            push(&mut closure, &mut frontier, g.conjugate(x, b));
        }
        let snapshot: Vec<usize> = closure.iter().copied().collect();
        for y in snapshot {
            push(&mut closure, &mut frontier, g.compose(x, y));
        }
    }
    let mut members: Vec<usize> = closure.into_iter().collect();
    members.sort_unstable();
    Subgroup { parent: parent.clone(), members }
}

/// Every subgroup of `parent`, as sorted member lists (ordered by size,
/// then lexicographically). Intended for orders ≤ 48.
pub fn all_subgroups(parent: &Arc<FiniteGroup>) -> Vec<Vec<usize>> {
    let g = parent;
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: Vec<Vec<usize>> = vec![vec![0]];
    found.insert(vec![0]);
    while let Some(h) = queue.pop() {
        for x in g.elements() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens: Vec<usize> = h.clone();
            gens.push(x);
            let bigger = g.generated_members(&gens);
            if found.insert(bigger.clone()) {
                queue.push(bigger);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    out
}

/// Checks `map[g·h] = map[g]·map[h]` for all pairs.
pub fn is_homomorphism(map: &[usize], dom: &FiniteGroup, cod: &FiniteGroup) -> Result<(), GroupError> {
    assert_eq!(map.len(), dom.order());
    for g in dom.elements() {
        for h in dom.elements() {
            if map[dom.compose(g, h)] != cod.compose(map[g], map[h]) {
                return Err(GroupError::NotHomomorphism(g, h));
            }
        }
    }
    Ok(())
}

/// The left-regular homomorphism `F → 𝔖_{|F|}`, `g ↦ (x ↦ g·x)`, as a map
/// of element ids into [`FiniteGroup::symmetric`]`(|F|)`.
pub fn left_regular_embedding(f: &FiniteGroup) -> Vec<usize> {
    let n = f.order();
    f.elements()
        .map(|g| {
            let perm: Vec<usize> = (0..n).map(|x| f.compose(g, x)).collect();
            perm_to_id(&perm)
        })
        .collect()
}

/// Lexicographic rank of a permutation of `{0,…,n−1}` in one-line notation.
pub fn perm_to_id(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    let mut factorial: usize = (1..n.max(1)).product();
    let mut used = vec![false; n];
    for (i, &p) in perm.iter().enumerate() {
        let smaller = (0..p).filter(|&q| !used[q]).count();
        rank += smaller * factorial;
        used[p] = true;
        if i + 1 < n {
            factorial /= n - 1 - i;
        }
    }
    rank
}

/// Inverse of [`perm_to_id`]: the `id`-th permutation of `{0,…,n−1}`.
pub fn id_to_perm(n: usize, id: usize) -> Vec<usize> {
    let mut avail: Vec<usize> = (0..n).collect();
    let mut factorial: usize = (1..n.max(1)).product();
    let mut rest = id;
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let k = rest / factorial;
        rest %= factorial;
        perm.push(avail.remove(k));
        if i + 1 < n {
            factorial /= n - 1 - i;
        }
    }
    perm
}

fn cycle_notation(perm: &[usize]) -> String {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = perm[x];
            if x == start {
                break;
            }
            out.push(' ');
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

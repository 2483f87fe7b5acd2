//! Windowed diagnostics for partitioned semirestricted powers: per-generator
//! commensuration sums and the list of non-invariant blocks, including the
//! window-growth warning that flags uncountable-cofinality behaviour.

use super::CommError;

/// A finite window of an `H`-set with a block partition and generator maps.
///
/// Generators are partial injections on the window (`None` marks points
/// whose image leaves it). Blocks must be pairwise disjoint; they need not
/// cover the window, since callers often list only the blocks of interest.
#[derive(Debug, Clone)]
pub struct WindowedPartition {
    pub points: Vec<i64>,
    pub blocks: Vec<Vec<usize>>,
    pub generators: Vec<Vec<Option<usize>>>,
    pub generator_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorReport {
    pub label: String,
    /// `Σ_i #(M_i △ gM_i)` as counted inside the window.
    pub total_moved: u64,
    /// Blocks with a non-empty windowed symmetric difference.
    pub noninvariant_blocks: Vec<usize>,
    /// True when some image or preimage left the window, so the counts are
    /// window-truncated lower bounds.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurationReport {
    pub per_generator: Vec<GeneratorReport>,
    pub covers_window: bool,
}

impl WindowedPartition {
    fn validate(&self) -> Result<(), CommError> {
        let n = self.points.len();
        let mut owner = vec![usize::MAX; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                if i >= n {
                    return Err(CommError::CommensurationViolated(format!(
                        "block {b} references point index {i} outside the window"
                    )));
                }
                if owner[i] != usize::MAX {
                    return Err(CommError::CommensurationViolated(format!(
                        "blocks {b} and {} overlap at point index {i}",
                        owner[i]
                    )));
                }
                owner[i] = b;
            }
        }
        for (g, map) in self.generators.iter().enumerate() {
            if map.len() != n {
                return Err(CommError::CommensurationViolated(format!(
                    "generator {g} map has wrong length"
                )));
            }
            let mut image_seen = vec![false; n];
            for img in map.iter().flatten() {
                if *img >= n || image_seen[*img] {
                    return Err(CommError::CommensurationViolated(format!(
                        "generator {g} is not injective on the window"
                    )));
                }
                image_seen[*img] = true;
            }
        }
        Ok(())
    }
}

/// Per-generator commensuration sums `Σ_i #(M_i △ gM_i)` on the window.
pub fn uniform_commensuration_check(p: &WindowedPartition) -> Result<CommensurationReport, CommError> {
    p.validate()?;
    let n = p.points.len();
    let mut owner = vec![usize::MAX; n];
    for (b, block) in p.blocks.iter().enumerate() {
        for &i in block {
            owner[i] = b;
        }
    }
    let covers_window = owner.iter().all(|&b| b != usize::MAX);
    let mut per_generator = Vec::with_capacity(p.generators.len());
    for (g, map) in p.generators.iter().enumerate() {
        // inverse of the partial injection
        let mut pre = vec![None; n];
        let mut truncated = false;
        for (x, img) in map.iter().enumerate() {
            match img {
                Some(y) => pre[*y] = Some(x),
                None => truncated = true,
            }
        }
        let mut moved = vec![0u64; p.blocks.len()];
        for (b, block) in p.blocks.iter().enumerate() {
            let in_block = |i: usize| owner.get(i) == Some(&b);
            for x in 0..n {
                let in_m = in_block(x);
                // x ∈ gM_b iff its preimage lies in the block
                match pre[x] {
                    Some(y) => {
                        if in_block(y) != in_m {
                            moved[b] += 1;
                        }
                    }
                    None => {
                        if in_m || block.contains(&x) {
                            truncated = true;
                        }
                    }
                }
            }
        }
        let noninvariant_blocks: Vec<usize> =
            moved.iter().enumerate().filter(|&(_, &m)| m > 0).map(|(b, _)| b).collect();
        per_generator.push(GeneratorReport {
            label: p.generator_labels.get(g).cloned().unwrap_or_else(|| format!("g{g}")),
            total_moved: moved.iter().sum(),
            noninvariant_blocks,
            truncated,
        });
    }
    Ok(CommensurationReport { per_generator, covers_window })
}

/// Whether the union of non-invariant block indices strictly grows from
/// the report on a smaller window to the one on a larger window; the
/// diagnostic for families that cannot be uniformly commensurated by a
/// compactly generated group.
pub fn reports_show_window_growth(small: &CommensurationReport, large: &CommensurationReport) -> bool {
    let collect = |r: &CommensurationReport| {
        let mut set: Vec<usize> =
            r.per_generator.iter().flat_map(|g| g.noninvariant_blocks.iter().copied()).collect();
        set.sort_unstable();
        set.dedup();
        set
    };
    let s = collect(small);
    let l = collect(large);
    l.len() > s.len() && s.iter().all(|b| l.contains(b))
}

/// The dyadic window: points `m/2^k` of `ℚ₂/ℤ₂` with `k ≤ level`, blocks
/// by exact denominator (`block i = exact denominator 2^i`), and the
/// additions by `1/2^j` (`j = 1..=level`) as generators. Block `i` is
/// disturbed by `+1/2^j` exactly when `i ≤ j`, so the non-invariant list
/// grows with the window.
pub fn dyadic_partition(level: u32) -> WindowedPartition {
    let n = 1usize << level;
    let points: Vec<i64> = (0..n as i64).collect(); // m stands for m/2^level
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); level as usize + 1];
    for m in 0..n {
        let i = if m == 0 { 0 } else { level - (m as u64).trailing_zeros().min(level) };
        blocks[i as usize].push(m);
    }
    let mut generators = Vec::new();
    let mut generator_labels = Vec::new();
    for j in 1..=level {
        let step = 1usize << (level - j);
        generators.push((0..n).map(|m| Some((m + step) % n)).collect());
        generator_labels.push(format!("+1/2^{j}"));
    }
    WindowedPartition { points, blocks, generators, generator_labels }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `M = ℕ` listed alone on a shift window.
    fn halfline_partition(width: i64) -> WindowedPartition {
        let points: Vec<i64> = (-width..=width).collect();
        let block: Vec<usize> = points.iter().enumerate().filter(|&(_, &p)| p >= 0).map(|(i, _)| i).collect();
        let n = points.len();
        let shift: Vec<Option<usize>> = (0..n).map(|i| (i + 1 < n).then_some(i + 1)).collect();
        WindowedPartition {
            points,
            blocks: vec![block],
            generators: vec![shift],
            generator_labels: vec!["t".into()],
        }
    }

    #[test]
    fn invariant_blocks_give_zero_sum() {
        // part the window into evens and odds under the double shift
        let points: Vec<i64> = (0..10).collect();
        let evens: Vec<usize> = (0..10).step_by(2).collect();
        let odds: Vec<usize> = (1..10).step_by(2).collect();
        let shift2: Vec<Option<usize>> = (0..10).map(|i| (i + 2 < 10).then_some(i + 2)).collect();
        let p = WindowedPartition {
            points,
            blocks: vec![evens, odds],
            generators: vec![shift2],
            generator_labels: vec!["t²".into()],
        };
        let report = uniform_commensuration_check(&p).unwrap();
        assert_eq!(report.per_generator[0].total_moved, 0);
        assert!(report.per_generator[0].noninvariant_blocks.is_empty());
        assert!(report.covers_window);
    }

    #[test]
    fn halfline_moves_one_point_per_shift() {
        let report = uniform_commensuration_check(&halfline_partition(8)).unwrap();
        let g = &report.per_generator[0];
        assert_eq!(g.total_moved, 1);
        assert_eq!(g.noninvariant_blocks, vec![0]);
        assert!(g.truncated, "the shift leaves the window at its edge");
        assert!(!report.covers_window);
    }

    #[test]
    fn dyadic_family_flags_window_growth() {
        let small = uniform_commensuration_check(&dyadic_partition(3)).unwrap();
        let large = uniform_commensuration_check(&dyadic_partition(5)).unwrap();
        // +1/2^j disturbs blocks 0..=j
        for (j, g) in large.per_generator.iter().enumerate() {
            let expect: Vec<usize> = (0..=j + 1).collect();
            assert_eq!(g.noninvariant_blocks, expect, "generator {}", g.label);
        }
        assert!(reports_show_window_growth(&small, &large));
    }

    #[test]
    fn overlapping_blocks_are_rejected() {
        let p = WindowedPartition {
            points: vec![0, 1],
            blocks: vec![vec![0, 1], vec![1]],
            generators: vec![],
            generator_labels: vec![],
        };
        assert!(uniform_commensuration_check(&p).is_err());
    }
}

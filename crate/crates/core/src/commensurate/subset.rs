//! Subsets of `ℤ` given by a window bitmap plus tail descriptors, making
//! symmetric differences of infinite sets exactly computable.

use super::CommError;

/// Behaviour of a subset beyond its window edge. `Periodic` patterns are
/// anchored at the window edge and read outward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    Empty,
    Full,
    Periodic(Vec<bool>),
    /// Declared unknown; any query that needs it fails.
    Unknown,
}

impl Tail {
    fn value(&self, steps_out: usize, side: &str) -> Result<bool, CommError> {
        match self {
            Tail::Empty => Ok(false),
            Tail::Full => Ok(true),
            Tail::Periodic(pat) => Ok(pat[steps_out % pat.len()]),
            Tail::Unknown => Err(CommError::TailUndetermined(format!("{side} tail is unknown"))),
        }
    }

    fn period(&self) -> usize {
        match self {
            Tail::Periodic(pat) => pat.len(),
            _ => 1,
        }
    }

    fn negate(&self) -> Tail {
        match self {
            Tail::Empty => Tail::Full,
            Tail::Full => Tail::Empty,
            Tail::Periodic(pat) => Tail::Periodic(pat.iter().map(|b| !b).collect()),
            Tail::Unknown => Tail::Unknown,
        }
    }
}

/// A subset of `ℤ`: explicit bits on `[lo, hi]`, tails beyond.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZSubset {
    lo: i64,
    mask: Vec<bool>,
    left: Tail,
    right: Tail,
}

/// Points of a symmetric difference, or the certificate that it is infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiffPoints {
    Finite(Vec<i64>),
    Infinite,
}

impl DiffPoints {
    pub fn finite(self) -> Result<Vec<i64>, CommError> {
        match self {
            DiffPoints::Finite(v) => Ok(v),
            DiffPoints::Infinite => Err(CommError::InfiniteDifference),
        }
    }
}

impl ZSubset {
    pub fn new(lo: i64, mask: Vec<bool>, left: Tail, right: Tail) -> Self {
        assert!(!mask.is_empty());
        ZSubset { lo, mask, left, right }
    }

    /// `M = ℕ` seen through the window `[lo, hi]` (requires `lo ≤ 0 ≤ hi`).
    pub fn naturals(lo: i64, hi: i64) -> Self {
        assert!(lo <= 0 && 0 <= hi);
        let mask = (lo..=hi).map(|p| p >= 0).collect();
        ZSubset { lo, mask, left: Tail::Empty, right: Tail::Full }
    }

    /// Finite subset: the listed points, empty tails, window spanning them.
    pub fn finite(points: &[i64], lo: i64, hi: i64) -> Self {
        assert!(points.iter().all(|&p| p >= lo && p <= hi));
        let mask = (lo..=hi).map(|p| points.contains(&p)).collect();
        ZSubset { lo, mask, left: Tail::Empty, right: Tail::Empty }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.mask.len() as i64 - 1
    }

    pub fn contains(&self, p: i64) -> Result<bool, CommError> {
        if p < self.lo {
            self.left.value((self.lo - 1 - p) as usize, "left")
        } else if p > self.hi() {
            self.right.value((p - self.hi() - 1) as usize, "right")
        } else {
            Ok(self.mask[(p - self.lo) as usize])
        }
    }

    /// The translate `M + k` (exact; the window moves with the set).
    pub fn translate(&self, k: i64) -> ZSubset {
        ZSubset { lo: self.lo + k, mask: self.mask.clone(), left: self.left.clone(), right: self.right.clone() }
    }

    pub fn complement(&self) -> ZSubset {
        ZSubset {
            lo: self.lo,
            mask: self.mask.iter().map(|b| !b).collect(),
            left: self.left.negate(),
            right: self.right.negate(),
        }
    }

    /// Exact symmetric difference `self △ other`. Beyond the common span
    /// the tails are compared over a full common period, so an infinite
    /// difference is detected rather than truncated.
    pub fn symmetric_difference(&self, other: &ZSubset) -> Result<DiffPoints, CommError> {
        let span_lo = self.lo.min(other.lo);
        let span_hi = self.hi().max(other.hi());
        // left tails
        let l = lcm(self.left.period(), other.left.period()) as i64;
        for p in (span_lo - l)..span_lo {
            if self.contains(p)? != other.contains(p)? {
                return Ok(DiffPoints::Infinite);
            }
        }
        let r = lcm(self.right.period(), other.right.period()) as i64;
        for p in (span_hi + 1)..=(span_hi + r) {
            if self.contains(p)? != other.contains(p)? {
                return Ok(DiffPoints::Infinite);
            }
        }
        let mut points = Vec::new();
        for p in span_lo..=span_hi {
            if self.contains(p)? != other.contains(p)? {
                points.push(p);
            }
        }
        Ok(DiffPoints::Finite(points))
    }

    /// Size of `self △ other`, when finite.
    pub fn difference_size(&self, other: &ZSubset) -> Result<u64, CommError> {
        Ok(self.symmetric_difference(other)?.finite()?.len() as u64)
    }

    /// Points of `self ∖ other`, when the symmetric difference is finite.
    pub fn minus(&self, other: &ZSubset) -> Result<Vec<i64>, CommError> {
        let diff = self.symmetric_difference(other)?.finite()?;
        let mut out = Vec::new();
        for p in diff {
            if self.contains(p)? {
                out.push(p);
            }
        }
        Ok(out)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

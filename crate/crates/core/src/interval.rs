use serde::{Deserialize, Serialize};

/// A real interval whose endpoints may each be open or closed.
///
/// Uniform sampling never returns an open endpoint: a closed interval with
/// `n` samples includes both ends, while an open end is replaced by the next
/// grid point inward.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub open_lo: bool,
    #[serde(default)]
    pub open_hi: bool,
}

impl Interval {
    pub const fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, open_lo: false, open_hi: false }
    }

    pub const fn open_lo(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, open_lo: true, open_hi: false }
    }

    pub const fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, open_lo: true, open_hi: true }
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Membership respecting open ends.
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.open_lo { x > self.lo } else { x >= self.lo };
        let below = if self.open_hi { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// Membership in the closure [lo, hi].
    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// `n` uniformly spaced points inside the interval.
    ///
    /// Closed ends are hit exactly. Requires `n >= 1`; for a closed
    /// interval `n == 1` yields the lower end.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        assert!(n >= 1, "need at least one sample");
        let skip_lo = usize::from(self.open_lo);
        let gaps = (n - 1 + skip_lo + usize::from(self.open_hi)).max(1);
        (0..n)
            .map(|i| {
                let k = i + skip_lo;
                if k == gaps {
                    self.hi
                } else {
                    self.lo + self.width() * k as f64 / gaps as f64
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_samples_hit_both_ends() {
        let s = Interval::closed(0.0, 1.0).samples(5);
        assert_eq!(s, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn open_lower_end_is_skipped() {
        let s = Interval::open_lo(0.0, 1.0).samples(4);
        assert_eq!(s, vec![0.25, 0.5, 0.75, 1.0]);
        assert!(!Interval::open_lo(0.0, 1.0).contains(0.0));
    }

    #[test]
    fn fully_open() {
        let s = Interval::open(0.0, 1.0).samples(3);
        assert_eq!(s, vec![0.25, 0.5, 0.75]);
        assert!(s.iter().all(|x| Interval::open(0.0, 1.0).contains(*x)));
    }

    #[test]
    fn twenty_five_open_samples_contain_midpoint() {
        let s = Interval::open(0.0, 1.0).samples(25);
        assert_eq!(s.len(), 25);
        assert_eq!(s[12], 0.5);
    }
}

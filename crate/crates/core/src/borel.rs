//! Finite unions of half-open intervals and points.

use serde::{Deserialize, Serialize};

/// A set of the form `[a₁,b₁) ∪ … ∪ [a_k,b_k) ∪ {p₁,…,p_m}`, kept in canonical
/// form: intervals disjoint, non-touching and sorted; points sorted, distinct
/// and outside every interval.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BorelSet {
    intervals: Vec<(f64, f64)>,
    points: Vec<f64>,
}

impl BorelSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole line.
    pub fn everything() -> Self {
        Self::interval(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `[a, b)`; empty when `b <= a`.
    pub fn interval(a: f64, b: f64) -> Self {
        Self::from_parts(vec![(a, b)], Vec::new())
    }

    pub fn point(t: f64) -> Self {
        Self::from_parts(Vec::new(), vec![t])
    }

    pub fn points(ts: &[f64]) -> Self {
        Self::from_parts(Vec::new(), ts.to_vec())
    }

    pub fn from_parts(intervals: Vec<(f64, f64)>, points: Vec<f64>) -> Self {
        let mut iv: Vec<(f64, f64)> = intervals.into_iter().filter(|(a, b)| b > a).collect();
        iv.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
        for (a, b) in iv {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let mut pts: Vec<f64> = points
            .into_iter()
            .filter(|&p| !merged.iter().any(|&(a, b)| a <= p && p < b))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        BorelSet {
            intervals: merged,
            points: pts,
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn isolated_points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.points.contains(&t) || self.intervals.iter().any(|&(a, b)| a <= t && t < b)
    }

    /// Lebesgue measure of `[a, b) ∩ self`.
    pub fn overlap_length(&self, a: f64, b: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(x, y)| (y.min(b) - x.max(a)).max(0.0))
            .sum()
    }

    pub fn union(&self, other: &BorelSet) -> BorelSet {
        let intervals = self.intervals.iter().chain(&other.intervals).copied().collect();
        let points = self.points.iter().chain(&other.points).copied().collect();
        Self::from_parts(intervals, points)
    }

    pub fn intersection(&self, other: &BorelSet) -> BorelSet {
        let mut intervals = Vec::new();
        for &(a, b) in &self.intervals {
            for &(x, y) in &other.intervals {
                intervals.push((a.max(x), b.min(y)));
            }
        }
        let points = self
            .points
            .iter()
            .filter(|&&p| other.contains(p))
            .chain(other.points.iter().filter(|&&p| self.contains(p)))
            .copied()
            .collect();
        Self::from_parts(intervals, points)
    }

    pub fn is_disjoint(&self, other: &BorelSet) -> bool {
        self.intersection(other).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_touching_intervals() {
        let s = BorelSet::from_parts(vec![(2.0, 3.0), (0.0, 1.0), (1.0, 2.0)], vec![0.5, 3.0, 3.0]);
        assert_eq!(s.intervals(), &[(0.0, 3.0)]);
        assert_eq!(s.isolated_points(), &[3.0]);
    }

    #[test]
    fn half_open_convention() {
        let s = BorelSet::interval(0.0, 2.5);
        assert!(s.contains(0.0));
        assert!(s.contains(2.0));
        assert!(!s.contains(2.5));
    }

    #[test]
    fn intersection_and_overlap() {
        let a = BorelSet::from_parts(vec![(0.0, 2.0)], vec![5.0]);
        let b = BorelSet::from_parts(vec![(1.0, 6.0)], vec![]);
        let i = a.intersection(&b);
        assert_eq!(i.intervals(), &[(1.0, 2.0)]);
        assert_eq!(i.isolated_points(), &[5.0]);
        assert!((a.overlap_length(-1.0, 1.5) - 1.5).abs() < 1e-15);
        assert!(BorelSet::interval(0.0, 1.0).is_disjoint(&BorelSet::interval(1.0, 2.0)));
    }

    #[test]
    fn empty_interval_is_empty() {
        assert!(BorelSet::interval(1.0, 1.0).is_empty());
        assert!(BorelSet::empty().is_disjoint(&BorelSet::everything()));
    }
}

//! `(n, eps)`-spanning counts of a finite family of sets under the dynamical
//! Hausdorff metric `d_n(A, B) = max_{0 <= i < n} d_H(f^i A, f^i B)`.

use alloc::format;
use alloc::vec::Vec;

use serde::Serialize;

use crate::hyperspace::{induced_step, HyperspaceError, SetFamily};
use crate::metric::FiniteSet;
use crate::systems::System;

/// Slope below which a report counts as consistent with zero entropy.
pub const ZERO_SLOPE_THRESHOLD: f64 = 0.01;

/// Largest family [`optimal_spanning_count`] will enumerate.
pub const OPTIMAL_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningReport {
    pub eps: f64,
    /// `(n, r(n, eps))` for `n = 1..=n_max`.
    pub counts: Vec<(u64, usize)>,
    /// Least-squares slope of `ln r` against `n`.
    pub slope: f64,
}

impl SpanningReport {
    pub fn entropy_zero_consistent(&self) -> bool {
        self.slope <= ZERO_SLOPE_THRESHOLD
    }

    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0].1 == w[1].1)
    }
}

/// Pairwise `d_n` on a family, advanced one time step at a time.
#[derive(Debug, Clone)]
pub struct DynamicalMetric<'a> {
    system: &'a System,
    current: Vec<FiniteSet>,
    /// Row-major `len x len`.
    matrix: Vec<f64>,
    n: u64,
}

impl<'a> DynamicalMetric<'a> {
    /// `d_1`, i.e. plain Hausdorff distance.
    pub fn new(system: &'a System, members: &[FiniteSet]) -> Result<Self, HyperspaceError> {
        let m = members.len();
        let mut this = Self {
            system,
            current: members.to_vec(),
            matrix: alloc::vec![0.0; m * m],
            n: 1,
        };
        this.absorb()?;
        Ok(this)
    }

    fn absorb(&mut self) -> Result<(), HyperspaceError> {
        let space = self.system.space();
        let m = self.current.len();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (&self.current[i], &self.current[j]);
                if a == b {
                    continue;
                }
                let d = space.hausdorff(a, b)?;
                let cell = &mut self.matrix[i * m + j];
                if d > *cell {
                    *cell = d;
                    self.matrix[j * m + i] = d;
                }
            }
        }
        Ok(())
    }

    /// Moves from `d_n` to `d_{n+1}`.
    pub fn advance(&mut self) -> Result<(), HyperspaceError> {
        for set in &mut self.current {
            *set = induced_step(self.system, set)?;
        }
        self.n += 1;
        self.absorb()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.len() + j]
    }
}

/// Extends `centers` in family order until every member is within `eps` of a
/// center. Existing centers stay, which keeps counts non-decreasing in `n`.
fn greedy_extend(metric: &DynamicalMetric<'_>, centers: &mut Vec<usize>, eps: f64) {
    for i in 0..metric.len() {
        if !centers.iter().any(|&c| c == i || metric.get(c, i) < eps) {
            centers.push(i);
        }
    }
}

fn check_args(n: u64, eps: f64) -> Result<(), HyperspaceError> {
    if n == 0 {
        return Err(HyperspaceError::Argument("n must be at least 1".into()));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(HyperspaceError::Argument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Greedy spanning counts for `n = 1..=n_max`.
pub fn spanning_counts(
    system: &System,
    family: &SetFamily,
    n_max: u64,
    eps: f64,
) -> Result<Vec<(u64, usize)>, HyperspaceError> {
    check_args(n_max, eps)?;
    let mut metric = DynamicalMetric::new(system, family.members())?;
    let mut centers = Vec::new();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        if n > 1 {
            metric.advance()?;
        }
        greedy_extend(&metric, &mut centers, eps);
        out.push((n, centers.len()));
    }
    Ok(out)
}

/// Size of the greedy `(n, eps)`-spanning subset.
pub fn spanning_count(system: &System, family: &SetFamily, n: u64, eps: f64) -> Result<usize, HyperspaceError> {
    Ok(spanning_counts(system, family, n, eps)?.last().map_or(0, |c| c.1))
}

/// Fewest members whose `d_n`-balls of radius `eps` cover the family.
pub fn optimal_spanning_count(system: &System, family: &SetFamily, n: u64, eps: f64) -> Result<usize, HyperspaceError> {
    check_args(n, eps)?;
    let m = family.len();
    if m > OPTIMAL_CAP {
        return Err(HyperspaceError::Argument(format!(
            "family of {m} exceeds the exhaustive cap of {OPTIMAL_CAP}"
        )));
    }
    if m == 0 {
        return Ok(0);
    }
    let mut metric = DynamicalMetric::new(system, family.members())?;
    for _ in 1..n {
        metric.advance()?;
    }
    let ball: Vec<u32> = (0..m)
        .map(|c| {
            (0..m)
                .filter(|&i| i == c || metric.get(c, i) < eps)
                .fold(0, |b, i| b | 1 << i)
        })
        .collect();
    let full = (1u32 << m) - 1;
    let mut best = m;
    for chosen in 1..=full {
        let size = chosen.count_ones() as usize;
        if size >= best {
            continue;
        }
        let mut cover = 0;
        let mut bits = chosen;
        while bits != 0 {
            cover |= ball[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        if cover == full {
            best = size;
        }
    }
    Ok(best)
}

/// Least-squares slope of `ln y` against `x`.
pub fn log_slope(counts: &[(u64, usize)]) -> f64 {
    if counts.len() < 2 {
        return 0.0;
    }
    // shift by the first value so constant series give exactly zero
    let y0 = libm::log(counts[0].1 as f64);
    let k = counts.len() as f64;
    let xs: Vec<f64> = counts.iter().map(|c| c.0 as f64).collect();
    let ys: Vec<f64> = counts.iter().map(|c| libm::log(c.1 as f64) - y0).collect();
    let xm = xs.iter().sum::<f64>() / k;
    let ym = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - xm) * (y - ym);
        den += (x - xm) * (x - xm);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn entropy_slope(
    system: &System,
    family: &SetFamily,
    n_max: u64,
    eps: f64,
) -> Result<SpanningReport, HyperspaceError> {
    if n_max < 8 {
        return Err(HyperspaceError::Argument(format!(
            "n_max must be at least 8, got {n_max}"
        )));
    }
    let counts = spanning_counts(system, family, n_max, eps)?;
    let slope = log_slope(&counts);
    Ok(SpanningReport { eps, counts, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{DistanceTable, Point};

    fn identity3() -> System {
        System::from_permutation(3, alloc::vec![0, 1, 2], DistanceTable::discrete(3)).unwrap()
    }

    fn hyperspace_of(n: usize) -> SetFamily {
        let members = (1u32..(1 << n))
            .map(|mask| FiniteSet::new((0..n).filter(|i| mask & (1 << i) != 0).map(Point::Abstract)).unwrap())
            .collect();
        SetFamily::from_members(members, 1e-9)
    }

    #[test]
    fn single_member() {
        let s = identity3();
        let fam = SetFamily::from_members(alloc::vec![FiniteSet::singleton(Point::Abstract(1))], 1e-9);
        assert_eq!(spanning_count(&s, &fam, 5, 0.1).unwrap(), 1);
    }

    #[test]
    fn identity_hyperspace() {
        let s = identity3();
        let fam = hyperspace_of(3);
        let rep = entropy_slope(&s, &fam, 16, 0.5).unwrap();
        assert!(rep.counts.iter().all(|c| c.1 == 7));
        assert_eq!(rep.slope, 0.0);
        assert_eq!(optimal_spanning_count(&s, &fam, 3, 0.5).unwrap(), 7);
        assert_eq!(optimal_spanning_count(&s, &fam, 3, 1.5).unwrap(), 1);
    }

    #[test]
    fn permutation_counts_settle() {
        let table = DistanceTable::from_fn(4, |i, j| (i as f64 - j as f64).abs()).unwrap();
        let s = System::from_permutation(4, alloc::vec![1, 2, 3, 0], table).unwrap();
        let fam = hyperspace_of(4);
        let rep = entropy_slope(&s, &fam, 12, 1.5).unwrap();
        assert!(rep.counts.windows(2).all(|w| w[0].1 <= w[1].1));
        let tail: Vec<usize> = rep.counts[4..].iter().map(|c| c.1).collect();
        assert!(tail.windows(2).all(|w| w[0] == w[1]), "{tail:?}");
    }

    #[test]
    fn arguments_are_checked() {
        let s = identity3();
        let fam = hyperspace_of(3);
        assert!(entropy_slope(&s, &fam, 7, 0.5).is_err());
        assert!(spanning_count(&s, &fam, 0, 0.5).is_err());
        assert!(spanning_count(&s, &fam, 1, 0.0).is_err());
        assert!(optimal_spanning_count(&s, &hyperspace_of(4), 1, 0.5).is_err());
    }

    #[test]
    fn slope_of_doubling_counts() {
        let counts: Vec<(u64, usize)> = (1..=8).map(|n| (n, 1usize << n)).collect();
        assert!((log_slope(&counts) - core::f64::consts::LN_2).abs() < 1e-12);
    }
}

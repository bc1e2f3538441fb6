//! The induced map on finite sets, return series and sampled limit sets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use serde::Serialize;

use crate::graph::lcm;
use crate::metric::{FiniteSet, MetricError, Space};
use crate::systems::{System, SystemError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperspaceError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// `f(A)`, re-canonicalized.
pub fn induced_step(system: &System, a: &FiniteSet) -> Result<FiniteSet, SystemError> {
    induced_power(system, a, 1)
}

/// `f^t(A)`.
pub fn induced_power(system: &System, a: &FiniteSet, t: u64) -> Result<FiniteSet, SystemError> {
    let pts = a.iter().map(|p| system.step_n(p, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSet::new(pts)?)
}

/// `f^{-1}(A)`.
pub fn induced_inverse(system: &System, a: &FiniteSet) -> Result<FiniteSet, SystemError> {
    let pts = a
        .iter()
        .map(|p| system.inverse_step(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSet::new(pts)?)
}

/// `A` and `B` are the same set (`eps <= 0`) or Hausdorff-closer than `eps`.
pub fn sets_close(space: &Space, a: &FiniteSet, b: &FiniteSet, eps: f64) -> Result<bool, MetricError> {
    if a == b {
        return Ok(true);
    }
    if eps <= 0.0 {
        return Ok(false);
    }
    Ok(space.hausdorff(a, b)? < eps)
}

/// The series `n -> d_H(f^n(A), A)` for `n = 1..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnStats {
    pub horizon: u64,
    /// `series[i]` is the value at `n = i + 1`.
    pub series: Vec<f64>,
}

impl ReturnStats {
    pub fn value(&self, n: u64) -> Option<f64> {
        if n == 0 {
            return Some(0.0);
        }
        self.series.get((n - 1) as usize).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.series.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v))
    }

    /// Times `n >= 1` with `d_H(f^n(A), A) < eps`.
    pub fn returns_at(&self, eps: f64) -> Vec<u64> {
        self.iter().filter(|&(_, v)| v < eps).map(|(n, _)| n).collect()
    }

    /// Smallest value and the first time it is attained.
    pub fn min(&self) -> Option<(u64, f64)> {
        self.iter().fold(None, |best, (n, v)| match best {
            Some((_, b)) if b <= v => best,
            _ => Some((n, v)),
        })
    }
}

pub fn orbit_series(system: &System, a: &FiniteSet, horizon: u64) -> Result<ReturnStats, HyperspaceError> {
    if horizon == 0 {
        return Err(HyperspaceError::Argument("horizon must be at least 1".into()));
    }
    let series = return_values(system, a, 1..horizon + 1)?;
    Ok(ReturnStats { horizon, series })
}

/// `d_H(f^n(A), A)` for `n` in `times`. Disjoint ranges can be evaluated
/// independently and concatenated.
pub fn return_values(system: &System, a: &FiniteSet, times: Range<u64>) -> Result<Vec<f64>, HyperspaceError> {
    let space = system.space();
    let mut out = Vec::with_capacity((times.end.saturating_sub(times.start)) as usize);
    if times.is_empty() {
        return Ok(out);
    }
    let mut current = induced_power(system, a, times.start)?;
    for n in times.clone() {
        if n > times.start {
            current = induced_step(system, &current)?;
        }
        out.push(space.hausdorff(&current, a)?);
    }
    Ok(out)
}

/// Finite sample of a family of sets, clustered at a Hausdorff tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetFamily {
    members: Vec<FiniteSet>,
    /// Time at which each member was first seen (when sampled from an orbit).
    times: Vec<u64>,
    tolerance: f64,
}

impl SetFamily {
    pub fn new(tolerance: f64) -> Self {
        Self {
            members: Vec::new(),
            times: Vec::new(),
            tolerance,
        }
    }

    /// Members taken as given; no clustering is applied.
    pub fn from_members(members: Vec<FiniteSet>, tolerance: f64) -> Self {
        let times = (0..members.len() as u64).collect();
        Self {
            members,
            times,
            tolerance,
        }
    }

    /// Adds `set` unless it lies within the tolerance of an existing member.
    /// The first-seen member represents its cluster.
    pub fn insert(&mut self, space: &Space, set: FiniteSet, time: u64) -> Result<bool, MetricError> {
        for m in &self.members {
            if sets_close(space, m, &set, self.tolerance)? {
                return Ok(false);
            }
        }
        self.members.push(set);
        self.times.push(time);
        Ok(true)
    }

    pub fn members(&self) -> &[FiniteSet] {
        &self.members
    }

    pub fn times(&self) -> &[u64] {
        &self.times
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the member nearest to `set`, if any lies within the tolerance.
    pub fn locate(&self, space: &Space, set: &FiniteSet) -> Result<Option<usize>, MetricError> {
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in self.members.iter().enumerate() {
            if m == set {
                return Ok(Some(i));
            }
            let d = space.hausdorff(m, set)?;
            if d < self.tolerance && best.is_none_or(|(_, b)| d < b) {
                best = Some((i, d));
            }
        }
        Ok(best.map(|(i, _)| i))
    }
}

/// Clustered sample of `{f^n(A) : burn_in <= n <= horizon}`.
pub fn omega_sample(
    system: &System,
    a: &FiniteSet,
    burn_in: u64,
    horizon: u64,
    eps: f64,
) -> Result<SetFamily, HyperspaceError> {
    if burn_in >= horizon {
        return Err(HyperspaceError::Argument(format!(
            "burn_in {burn_in} must be below horizon {horizon}"
        )));
    }
    let space = system.space();
    let mut family = SetFamily::new(eps);
    let mut current = induced_power(system, a, burn_in)?;
    for n in burn_in..=horizon {
        if n > burn_in {
            current = induced_step(system, &current)?;
        }
        family.insert(space, current.clone(), n)?;
    }
    Ok(family)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitUnion {
    pub set: FiniteSet,
    /// `lcm` of the periods of the points of `A`; `None` on overflow.
    pub period_lcm: Option<u64>,
    /// False when the horizon is below the lcm and the union may be partial.
    pub complete: bool,
}

/// `U_{0 <= n <= horizon} f^n(A)`.
pub fn union_orbit(system: &System, a: &FiniteSet, horizon: u64) -> Result<OrbitUnion, HyperspaceError> {
    let mut pts = Vec::new();
    let mut period_lcm = Some(1u64);
    for p in a {
        let per = system.period_of(p)?;
        period_lcm = period_lcm.and_then(|l| lcm(l, per));
        let reach = horizon.min(per - 1);
        let mut q = p.clone();
        pts.push(q.clone());
        for _ in 0..reach {
            q = system.step(&q)?;
            pts.push(q.clone());
        }
    }
    let complete = period_lcm.is_some_and(|l| horizon >= l);
    Ok(OrbitUnion {
        set: FiniteSet::new(pts)?,
        period_lcm,
        complete,
    })
}

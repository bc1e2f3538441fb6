//! Scale-indexed certificates for the recurrence hierarchy and pair
//! classification in the hyperspace.
//!
//! Nothing here claims an infinite-horizon property. Every result carries the
//! `eps` and horizon it was established at, and every certificate can be
//! re-verified by direct recomputation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use serde::Serialize;

use crate::graph::lcm;
use crate::hyperspace::{induced_power, induced_step, return_values, sets_close, HyperspaceError, SetFamily};
use crate::metric::{FiniteSet, MetricError, Point};
use crate::systems::{System, SystemError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifierError {
    #[error(transparent)]
    Hyperspace(#[from] HyperspaceError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("the intersection is empty")]
    EmptyIntersection,
    #[error("the family is empty")]
    EmptyFamily,
}

impl From<SystemError> for ClassifierError {
    fn from(e: SystemError) -> Self {
        ClassifierError::Hyperspace(e.into())
    }
}

impl From<MetricError> for ClassifierError {
    fn from(e: MetricError) -> Self {
        ClassifierError::Hyperspace(e.into())
    }
}

fn require_positive(name: &str, v: f64) -> Result<(), ClassifierError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ClassifierError::Argument(format!("{name} must be positive, got {v}")))
    }
}

/// Outcome of a first-return scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Recurrence {
    Returned {
        eps: f64,
        horizon: u64,
        n: u64,
        value: f64,
    },
    Absent {
        eps: f64,
        horizon: u64,
        min_observed: f64,
        at: u64,
    },
}

impl Recurrence {
    pub fn first_return(&self) -> Option<u64> {
        match self {
            Recurrence::Returned { n, .. } => Some(*n),
            Recurrence::Absent { .. } => None,
        }
    }
}

/// Smallest `n` in `1..=horizon` with `d_H(f^n(A), A) < eps`.
pub fn recurrence_certificate(
    system: &System,
    a: &FiniteSet,
    eps: f64,
    horizon: u64,
) -> Result<Recurrence, ClassifierError> {
    require_positive("eps", eps)?;
    let space = system.space();
    let mut current = a.clone();
    let mut min = (0u64, f64::INFINITY);
    for n in 1..=horizon {
        current = induced_step(system, &current)?;
        let v = space.hausdorff(&current, a)?;
        if v < eps {
            return Ok(Recurrence::Returned {
                eps,
                horizon,
                n,
                value: v,
            });
        }
        if v < min.1 {
            min = (n, v);
        }
    }
    Ok(Recurrence::Absent {
        eps,
        horizon,
        min_observed: min.1,
        at: min.0,
    })
}

/// Certifies `d_H(f^{kN}(A), A) < eps` for all `1 <= k <= K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct URCertificate {
    pub eps: f64,
    /// Progression step `N`.
    pub step: u64,
    /// Number of multiples `K` verified.
    pub multiples: u64,
    pub max_observed: f64,
}

impl URCertificate {
    /// Recomputes every claimed inequality.
    pub fn reverify(&self, system: &System, a: &FiniteSet) -> Result<bool, ClassifierError> {
        let worst = progression_worst(system, a, self.step, self.multiples)?;
        Ok(worst < self.eps && worst == self.max_observed)
    }

    /// Returns at `0, N, 2N, ..., KN` give syndetic returns with gap `N` on
    /// `[0, N K]`.
    pub fn to_ap(&self) -> APCertificate {
        APCertificate {
            eps: self.eps,
            gap_bound: self.step,
            horizon: self.step * self.multiples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum UrOutcome {
    Certified(URCertificate),
    /// No step qualified; `worst[i]` is `(N, max_k d_H(f^{kN}(A), A))`.
    Absent {
        eps: f64,
        multiples: u64,
        worst: Vec<(u64, f64)>,
    },
}

impl UrOutcome {
    pub fn certificate(&self) -> Option<&URCertificate> {
        match self {
            UrOutcome::Certified(c) => Some(c),
            UrOutcome::Absent { .. } => None,
        }
    }
}

fn progression_worst(system: &System, a: &FiniteSet, step: u64, multiples: u64) -> Result<f64, ClassifierError> {
    let space = system.space();
    let mut worst = 0.0f64;
    for k in 1..=multiples {
        let t = step
            .checked_mul(k)
            .ok_or_else(|| ClassifierError::Argument(format!("{step} * {k} overflows")))?;
        let v = space.hausdorff(&induced_power(system, a, t)?, a)?;
        worst = worst.max(v);
    }
    Ok(worst)
}

/// Checks one progression step `N` against `K` multiples.
pub fn ur_verify(
    system: &System,
    a: &FiniteSet,
    eps: f64,
    step: u64,
    multiples: u64,
) -> Result<Result<URCertificate, f64>, ClassifierError> {
    require_positive("eps", eps)?;
    if step == 0 || multiples == 0 {
        return Err(ClassifierError::Argument("step and multiples must be positive".into()));
    }
    let worst = progression_worst(system, a, step, multiples)?;
    if worst < eps {
        Ok(Ok(URCertificate {
            eps,
            step,
            multiples,
            max_observed: worst,
        }))
    } else {
        Ok(Err(worst))
    }
}

/// First `N <= n_max` whose progression `kN, k <= K` stays within `eps`.
pub fn ur_certificate(
    system: &System,
    a: &FiniteSet,
    eps: f64,
    n_max: u64,
    multiples: u64,
) -> Result<UrOutcome, ClassifierError> {
    let mut worst = Vec::new();
    for step in 1..=n_max {
        match ur_verify(system, a, eps, step, multiples)? {
            Ok(cert) => return Ok(UrOutcome::Certified(cert)),
            Err(w) => worst.push((step, w)),
        }
    }
    Ok(UrOutcome::Absent { eps, multiples, worst })
}

/// Every window of `gap_bound` consecutive times in `[0, horizon]` contains a
/// time `n` with `d_H(f^n(A), A) < eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct APCertificate {
    pub eps: f64,
    pub gap_bound: u64,
    pub horizon: u64,
}

impl APCertificate {
    pub fn reverify(&self, system: &System, a: &FiniteSet) -> Result<bool, ClassifierError> {
        let returns = return_times(system, a, self.eps, self.horizon)?;
        let mut is_return = alloc::vec![false; self.horizon as usize + 1];
        for r in returns {
            is_return[r as usize] = true;
        }
        let g = self.gap_bound as usize;
        if g == 0 || g > is_return.len() {
            return Ok(false);
        }
        // sliding window count
        let mut count = is_return[..g].iter().filter(|&&b| b).count();
        if count == 0 {
            return Ok(false);
        }
        for start in 1..=is_return.len() - g {
            count += usize::from(is_return[start + g - 1]);
            count -= usize::from(is_return[start - 1]);
            if count == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ApOutcome {
    Certified(APCertificate),
    /// `largest_gap` is the window length the sample would need.
    Absent {
        eps: f64,
        horizon: u64,
        gap_max: u64,
        largest_gap: u64,
    },
}

impl ApOutcome {
    pub fn certificate(&self) -> Option<&APCertificate> {
        match self {
            ApOutcome::Certified(c) => Some(c),
            ApOutcome::Absent { .. } => None,
        }
    }
}

/// Return times in `[0, horizon]`; time 0 always counts.
pub fn return_times(system: &System, a: &FiniteSet, eps: f64, horizon: u64) -> Result<Vec<u64>, ClassifierError> {
    let mut out = alloc::vec![0u64];
    let values = return_values(system, a, 1..horizon + 1)?;
    out.extend(
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < eps)
            .map(|(i, _)| i as u64 + 1),
    );
    Ok(out)
}

/// Smallest window length `g` such that every length-`g` window inside
/// `[0, horizon]` contains one of `returns` (sorted, starting at 0).
pub fn required_gap(returns: &[u64], horizon: u64) -> u64 {
    let inner = returns.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let tail = horizon - returns.last().copied().unwrap_or(0) + 1;
    inner.max(tail).max(1)
}

pub fn ap_certificate(
    system: &System,
    a: &FiniteSet,
    eps: f64,
    gap_max: u64,
    horizon: u64,
) -> Result<ApOutcome, ClassifierError> {
    require_positive("eps", eps)?;
    if gap_max >= horizon {
        return Err(ClassifierError::Argument(format!(
            "gap_max {gap_max} must be below horizon {horizon}"
        )));
    }
    let returns = return_times(system, a, eps, horizon)?;
    let g = required_gap(&returns, horizon);
    if g <= gap_max {
        Ok(ApOutcome::Certified(APCertificate {
            eps,
            gap_bound: g,
            horizon,
        }))
    } else {
        Ok(ApOutcome::Absent {
            eps,
            horizon,
            gap_max,
            largest_gap: g,
        })
    }
}

/// Finite surrogate for liminf / limsup of `d_H(f^n A, f^n B)` over a tail
/// window of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairVerdict {
    pub horizon: u64,
    pub tail_start: u64,
    pub eps_prox: f64,
    pub delta_dist: f64,
    pub liminf_proxy: f64,
    pub limsup_proxy: f64,
    pub proximal_at_scale: bool,
    pub asymptotic_at_scale: bool,
    pub li_yorke_at_scale: bool,
    /// `limsup_proxy >= delta_dist`.
    pub separated_at_scale: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairParams {
    pub horizon: u64,
    pub tail_fraction: f64,
    pub eps_prox: f64,
    pub delta_dist: f64,
}

impl PairParams {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(ClassifierError::Argument(format!(
                "tail_fraction must lie in (0, 1], got {}",
                self.tail_fraction
            )));
        }
        require_positive("eps_prox", self.eps_prox)?;
        if self.eps_prox >= self.delta_dist {
            return Err(ClassifierError::Argument(format!(
                "eps_prox {} must be below delta_dist {}",
                self.eps_prox, self.delta_dist
            )));
        }
        if self.horizon == 0 {
            return Err(ClassifierError::Argument("horizon must be at least 1".into()));
        }
        Ok(())
    }

    /// The last `ceil(tail_fraction * horizon)` times, ending at the horizon.
    pub fn tail(&self) -> RangeInclusive<u64> {
        let len = libm::ceil(self.tail_fraction * self.horizon as f64) as u64;
        let len = len.clamp(1, self.horizon);
        (self.horizon - len + 1)..=self.horizon
    }

    pub fn verdict(&self, tail_values: &[f64]) -> PairVerdict {
        let liminf = tail_values.iter().copied().fold(f64::INFINITY, f64::min);
        let limsup = tail_values.iter().copied().fold(0.0, f64::max);
        let proximal = liminf < self.eps_prox;
        let asymptotic = limsup < self.eps_prox;
        PairVerdict {
            horizon: self.horizon,
            tail_start: *self.tail().start(),
            eps_prox: self.eps_prox,
            delta_dist: self.delta_dist,
            liminf_proxy: liminf,
            limsup_proxy: limsup,
            proximal_at_scale: proximal,
            asymptotic_at_scale: asymptotic,
            li_yorke_at_scale: proximal && !asymptotic,
            separated_at_scale: limsup >= self.delta_dist,
        }
    }
}

/// `d_H(f^n(A), f^n(B))` for `n` in `times`.
pub fn pair_series(
    system: &System,
    a: &FiniteSet,
    b: &FiniteSet,
    times: RangeInclusive<u64>,
) -> Result<Vec<f64>, ClassifierError> {
    let space = system.space();
    let (start, end) = (*times.start(), *times.end());
    let mut out = Vec::with_capacity((end + 1).saturating_sub(start) as usize);
    if start > end {
        return Ok(out);
    }
    let mut fa = induced_power(system, a, start)?;
    let mut fb = induced_power(system, b, start)?;
    for n in start..=end {
        if n > start {
            fa = induced_step(system, &fa)?;
            fb = induced_step(system, &fb)?;
        }
        out.push(space.hausdorff(&fa, &fb)?);
    }
    Ok(out)
}

pub fn pair_classify(
    system: &System,
    a: &FiniteSet,
    b: &FiniteSet,
    params: &PairParams,
) -> Result<PairVerdict, ClassifierError> {
    params.validate()?;
    let values = pair_series(system, a, b, params.tail())?;
    Ok(params.verdict(&values))
}

/// One row of an equicontinuity profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionRow {
    pub scale: f64,
    /// `E(scale)`: worst orbit separation of an initially `scale`-close pair
    /// (0 when no pair is that close).
    pub modulus: f64,
    pub witness: Option<ExpansionWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionWitness {
    pub p: Point,
    pub q: Point,
    pub initial: f64,
    /// Time at which the separation `modulus` is attained.
    pub time: u64,
}

/// `E(delta) = max_{dist(p,q) < delta} max_{n <= horizon} dist(f^n p, f^n q)`
/// over carrier pairs, for each scale in `scales` (strictly decreasing).
pub fn equicontinuity_profile(
    system: &System,
    scales: &[f64],
    horizon: u64,
) -> Result<Vec<ExpansionRow>, ClassifierError> {
    if scales.is_empty() {
        return Err(ClassifierError::Argument("no scales given".into()));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ClassifierError::Argument("scales must be strictly decreasing".into()));
    }
    let space = system.space();
    let carrier = system.carrier();
    let pts = carrier.points();
    let widest = scales[0];

    // (initial distance, worst separation, time, i, j)
    let mut pairs: Vec<(f64, f64, u64, usize, usize)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d0 = space.dist(&pts[i], &pts[j])?;
            if d0 >= widest {
                continue;
            }
            let per = lcm(system.period_of(&pts[i])?, system.period_of(&pts[j])?).unwrap_or(u64::MAX);
            let reach = horizon.min(per.saturating_sub(1));
            let (mut p, mut q) = (pts[i].clone(), pts[j].clone());
            let (mut worst, mut at) = (d0, 0);
            for n in 1..=reach {
                p = system.step(&p)?;
                q = system.step(&q)?;
                let d = space.dist(&p, &q)?;
                if d > worst {
                    worst = d;
                    at = n;
                }
            }
            pairs.push((d0, worst, at, i, j));
        }
    }

    Ok(scales
        .iter()
        .map(|&scale| {
            let best = pairs
                .iter()
                .filter(|e| e.0 < scale)
                .fold(None::<&(f64, f64, u64, usize, usize)>, |acc, e| match acc {
                    Some(b) if b.1 >= e.1 => Some(b),
                    _ => Some(e),
                });
            ExpansionRow {
                scale,
                modulus: best.map_or(0.0, |b| b.1),
                witness: best.map(|b| ExpansionWitness {
                    p: pts[b.3].clone(),
                    q: pts[b.4].clone(),
                    initial: b.0,
                    time: b.2,
                }),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RejectReason {
    InsideBase,
    NotFixed,
    NotInCarrier,
    Duplicate,
}

/// Exact check of `d_H(f^n(A_z), A_z) = d_H(f^n(A), A)` over every `n` where
/// `2 d_H(f^n(A), A) < d(z, A)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationCheck {
    pub anchor_distance: f64,
    pub checked: usize,
    pub held: bool,
    pub first_failure: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScrambledFamily {
    pub base: FiniteSet,
    pub anchors: Vec<Point>,
    pub rejected: Vec<(Point, RejectReason)>,
    pub members: Vec<FiniteSet>,
    pub recurrence: Vec<Recurrence>,
    pub relation: Vec<RelationCheck>,
    pub pairs: Vec<PairEntry>,
}

impl ScrambledFamily {
    pub fn all_recurrent(&self) -> bool {
        self.recurrence.iter().all(|r| r.first_return().is_some())
    }

    pub fn all_li_yorke(&self) -> bool {
        self.pairs.iter().all(|p| p.verdict.li_yorke_at_scale)
    }

    pub fn relation_holds(&self) -> bool {
        self.relation.iter().all(|r| r.held)
    }
}

/// Picks up to `count` valid anchors: fixed carrier points outside `base`.
pub fn select_anchors(
    system: &System,
    base: &FiniteSet,
    anchors: &[Point],
    count: usize,
) -> (Vec<Point>, Vec<(Point, RejectReason)>) {
    let mut accepted: Vec<Point> = Vec::new();
    let mut rejected = Vec::new();
    for z in anchors {
        if accepted.len() == count {
            break;
        }
        let reason = if !system.contains(z) {
            Some(RejectReason::NotInCarrier)
        } else if base.contains(z) {
            Some(RejectReason::InsideBase)
        } else if system.period_of(z).ok() != Some(1) {
            Some(RejectReason::NotFixed)
        } else if accepted.contains(z) {
            Some(RejectReason::Duplicate)
        } else {
            None
        };
        match reason {
            Some(r) => rejected.push((z.clone(), r)),
            None => accepted.push(z.clone()),
        }
    }
    (accepted, rejected)
}

/// Relation check for one member `A_z = A U {z}` against the base series
/// (`base_series[n-1] = d_H(f^n(A), A)`).
pub fn relation_check(
    system: &System,
    base: &FiniteSet,
    anchor: &Point,
    base_series: &[f64],
) -> Result<RelationCheck, ClassifierError> {
    let space = system.space();
    let member = base.with_point(anchor.clone());
    let dz = space.point_set_dist(anchor, base)?;
    let mut checked = 0;
    let mut first_failure = None;
    let mut current = member.clone();
    for (i, &s) in base_series.iter().enumerate() {
        current = induced_step(system, &current)?;
        if 2.0 * s < dz {
            checked += 1;
            let v = space.hausdorff(&current, &member)?;
            if v != s && first_failure.is_none() {
                first_failure = Some(i as u64 + 1);
            }
        }
    }
    Ok(RelationCheck {
        anchor_distance: dz,
        checked,
        held: first_failure.is_none(),
        first_failure,
    })
}

/// Members `A_z = base U {z}`, their recurrence at `eps_prox`, the relation
/// check, and the verdict of every pair. Sequential; the `hyperlab` crate has
/// a parallel driver built from the same pieces.
pub fn scrambled_family(
    system: &System,
    base: &FiniteSet,
    anchors: &[Point],
    count: usize,
    params: &PairParams,
) -> Result<ScrambledFamily, ClassifierError> {
    params.validate()?;
    let (anchors, rejected) = select_anchors(system, base, anchors, count);
    let members: Vec<FiniteSet> = anchors.iter().map(|z| base.with_point(z.clone())).collect();
    let base_series = return_values(system, base, 1..params.horizon + 1)?;
    let mut recurrence = Vec::with_capacity(members.len());
    let mut relation = Vec::with_capacity(members.len());
    for (z, m) in anchors.iter().zip(&members) {
        recurrence.push(recurrence_certificate(system, m, params.eps_prox, params.horizon)?);
        relation.push(relation_check(system, base, z, &base_series)?);
    }
    let mut pairs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let verdict = pair_classify(system, &members[i], &members[j], params)?;
            pairs.push(PairEntry { i, j, verdict });
        }
    }
    Ok(ScrambledFamily {
        base: base.clone(),
        anchors,
        rejected,
        members,
        recurrence,
        relation,
        pairs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalReport {
    pub eps: f64,
    /// Index of the member nearest to `f(member)` within `eps`.
    pub successor: Vec<Option<usize>>,
    /// Terminal cycles of the successor map, each in orbit order.
    pub minimal: Vec<Vec<usize>>,
    pub unique: bool,
}

/// Minimal sub-families of a sampled family: the cycles of the induced map
/// read through the family at scale `eps`.
pub fn minimal_unique_check(family: &SetFamily, system: &System, eps: f64) -> Result<MinimalReport, ClassifierError> {
    if family.is_empty() {
        return Err(ClassifierError::EmptyFamily);
    }
    let successor = successor_map(family, system, eps)?;
    let minimal = functional_cycles(&successor);
    let space = system.space();
    let mut unique = minimal.len() == 1;
    if minimal.len() > 1 {
        unique = true;
        let first = &minimal[0];
        for other in &minimal[1..] {
            for (x, y) in [(first, other), (other, first)] {
                for &i in x.iter() {
                    let mut hit = false;
                    for &j in y.iter() {
                        if sets_close(space, &family.members()[i], &family.members()[j], eps)? {
                            hit = true;
                            break;
                        }
                    }
                    unique &= hit;
                }
            }
        }
    }
    Ok(MinimalReport {
        eps,
        successor,
        minimal,
        unique,
    })
}

/// For each member, the nearest member to its image within `eps`.
pub fn successor_map(family: &SetFamily, system: &System, eps: f64) -> Result<Vec<Option<usize>>, ClassifierError> {
    let space = system.space();
    family
        .members()
        .iter()
        .map(|m| {
            let img = induced_step(system, m)?;
            let mut best: Option<(usize, f64)> = None;
            for (j, other) in family.members().iter().enumerate() {
                let d = if *other == img {
                    0.0
                } else {
                    space.hausdorff(other, &img)?
                };
                let close = d == 0.0 || (eps > 0.0 && d < eps);
                if close && best.is_none_or(|(_, b)| d < b) {
                    best = Some((j, d));
                }
            }
            Ok(best.map(|(j, _)| j))
        })
        .collect()
}

/// Cycles of a partial functional graph, each listed from its smallest index
/// in successor order; cycles sorted by that index.
pub fn functional_cycles(successor: &[Option<usize>]) -> Vec<Vec<usize>> {
    let n = successor.len();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = alloc::vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = Some(start);
        while let Some(x) = v {
            match state[x] {
                0 => {
                    state[x] = 1;
                    path.push(x);
                    v = successor[x];
                }
                1 => {
                    let pos = path.iter().position(|&p| p == x).expect("on path");
                    let mut cyc = path[pos..].to_vec();
                    let m = cyc
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, &c)| c)
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    cyc.rotate_left(m);
                    cycles.push(cyc);
                    break;
                }
                _ => break,
            }
        }
        for p in path {
            state[p] = 2;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    cycles
}

/// UR scan on `A ∩ B`.
pub fn intersect_ur(
    system: &System,
    a: &FiniteSet,
    b: &FiniteSet,
    eps: f64,
    n_max: u64,
    multiples: u64,
) -> Result<(FiniteSet, UrOutcome), ClassifierError> {
    let meet = a.intersection(b).ok_or(ClassifierError::EmptyIntersection)?;
    let outcome = ur_certificate(system, &meet, eps, n_max, multiples)?;
    Ok((meet, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperspace::omega_sample;
    use crate::metric::DistanceTable;
    use crate::systems::{Builtin, Example63Config};

    fn houses() -> System {
        System::example63(&Example63Config::default()).unwrap()
    }

    fn origin() -> FiniteSet {
        FiniteSet::singleton(Point::on_circle(0, 1))
    }

    fn three_cycle() -> System {
        System::from_permutation(3, alloc::vec![1, 2, 0], DistanceTable::discrete(3)).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let f = houses();
        assert_eq!(
            recurrence_certificate(&f, &origin(), 0.1, 10).unwrap().first_return(),
            Some(1)
        );
        let c4 = f.builtin_set(&Builtin::C { depth: 4 }).unwrap();
        let n = recurrence_certificate(&f, &c4, 0.1, 300)
            .unwrap()
            .first_return()
            .unwrap();
        assert!(n <= 256);
        let d32 = f.builtin_set(&Builtin::D { max_level: 32 }).unwrap();
        match recurrence_certificate(&f, &d32, 0.5, 16).unwrap() {
            Recurrence::Absent { min_observed, .. } => assert!(min_observed >= 1.9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ur_examples() {
        let f = houses();
        let cert = ur_certificate(&f, &origin(), 0.1, 1, 100).unwrap();
        assert_eq!(cert.certificate().unwrap().step, 1);
        let c4 = f.builtin_set(&Builtin::C { depth: 4 }).unwrap();
        assert!(ur_certificate(&f, &c4, 0.2, 64, 64).unwrap().certificate().is_none());
    }

    #[test]
    fn ur_certificate_reverifies_and_implies_ap() {
        let f = houses();
        let h = f
            .builtin_set(&Builtin::H {
                max_level: 24,
                mesh: 256,
            })
            .unwrap();
        let cert = ur_verify(&f, &h, 0.3, 24, 50).unwrap().unwrap();
        assert!(cert.reverify(&f, &h).unwrap());
        let ap = cert.to_ap();
        assert_eq!(ap.gap_bound, 24);
        assert!(ap.reverify(&f, &h).unwrap());
    }

    #[test]
    fn ap_examples() {
        let f = houses();
        let ap = ap_certificate(&f, &origin(), 0.1, 2, 100).unwrap();
        assert_eq!(ap.certificate().unwrap().gap_bound, 1);
        let s = three_cycle();
        let a = FiniteSet::singleton(Point::Abstract(0));
        let ap = ap_certificate(&s, &a, 0.5, 4, 99).unwrap();
        assert_eq!(ap.certificate().unwrap().gap_bound, 3);
        assert!(ap.certificate().unwrap().reverify(&s, &a).unwrap());
        let bad = APCertificate {
            eps: 0.5,
            gap_bound: 2,
            horizon: 99,
        };
        assert!(!bad.reverify(&s, &a).unwrap());
        assert!(ap_certificate(&s, &a, 0.5, 99, 99).is_err());
    }

    #[test]
    fn required_gap_counts_the_censored_tail() {
        assert_eq!(required_gap(&[0, 3, 6, 9], 9), 3);
        assert_eq!(required_gap(&[0, 3], 9), 7);
        assert_eq!(required_gap(&[0], 0), 1);
    }

    #[test]
    fn pair_of_equal_sets_is_asymptotic() {
        let f = houses();
        let c = f.builtin_set(&Builtin::C { depth: 2 }).unwrap();
        let params = PairParams {
            horizon: 64,
            tail_fraction: 0.25,
            eps_prox: 0.05,
            delta_dist: 0.5,
        };
        let v = pair_classify(&f, &c, &c, &params).unwrap();
        assert_eq!(v.liminf_proxy, 0.0);
        assert_eq!(v.limsup_proxy, 0.0);
        assert!(v.asymptotic_at_scale && !v.li_yorke_at_scale);
        assert_eq!(params.tail(), 49..=64);
        let bad = PairParams {
            eps_prox: 0.6,
            ..params
        };
        assert!(pair_classify(&f, &c, &c, &bad).is_err());
    }

    #[test]
    fn pair_classify_is_symmetric() {
        let f = houses();
        let c = f.builtin_set(&Builtin::C { depth: 3 }).unwrap();
        let d = f.builtin_set(&Builtin::D { max_level: 16 }).unwrap();
        let params = PairParams {
            horizon: 300,
            tail_fraction: 0.5,
            eps_prox: 0.05,
            delta_dist: 0.5,
        };
        assert_eq!(
            pair_classify(&f, &c, &d, &params).unwrap(),
            pair_classify(&f, &d, &c, &params).unwrap()
        );
    }

    #[test]
    fn equicontinuity_examples() {
        let id = System::from_permutation(
            4,
            alloc::vec![0, 1, 2, 3],
            DistanceTable::from_fn(4, |i, j| (i as f64 - j as f64).abs()).unwrap(),
        )
        .unwrap();
        for row in equicontinuity_profile(&id, &[2.5, 1.5, 0.5], 10).unwrap() {
            assert!(row.modulus < row.scale);
        }
        let rows = equicontinuity_profile(&three_cycle(), &[0.5], 10).unwrap();
        assert_eq!(rows[0].modulus, 0.0);
        assert!(rows[0].witness.is_none());
        assert!(equicontinuity_profile(&id, &[0.5, 1.0], 3).is_err());
    }

    #[test]
    fn houses_are_not_equicontinuous() {
        let f = System::example63(&Example63Config::with_depth(3, 16)).unwrap();
        for n in [4u64, 16, 256] {
            // the nearest mesh point to u_n^0 is (1,0), at distance 1/n
            let delta = 1.0 / n as f64 * 1.001;
            let rows = equicontinuity_profile(&f, &[delta], 256).unwrap();
            assert!(rows[0].modulus >= 1.9, "n={n}: {:?}", rows[0]);
            let w = rows[0].witness.as_ref().unwrap();
            let circle_end = [&w.p, &w.q]
                .iter()
                .any(|p| p.as_circle().unwrap().height() == &crate::Rational::from_integer(0));
            assert!(circle_end);
        }
    }

    #[test]
    fn scrambled_family_of_one_has_no_pairs() {
        let f = houses();
        let c = f.builtin_set(&Builtin::C { depth: 3 }).unwrap();
        let params = PairParams {
            horizon: 256,
            tail_fraction: 0.25,
            eps_prox: 0.05,
            delta_dist: 0.1,
        };
        let fam = scrambled_family(&f, &c, &[Point::on_circle(0, 1), Point::on_circle(1, 2)], 1, &params).unwrap();
        assert_eq!(fam.members.len(), 1);
        assert!(fam.pairs.is_empty());
        assert_eq!(
            fam.rejected,
            alloc::vec![(Point::on_circle(0, 1), RejectReason::InsideBase)]
        );
        assert!(fam.relation_holds());
    }

    #[test]
    fn minimal_sets_of_periodic_samples() {
        let f = houses();
        let fam = omega_sample(&f, &origin(), 0, 8, 1e-9).unwrap();
        let rep = minimal_unique_check(&fam, &f, 1e-9).unwrap();
        assert_eq!(rep.minimal, alloc::vec![alloc::vec![0]]);
        assert!(rep.unique);
        let s = three_cycle();
        let fam = omega_sample(&s, &FiniteSet::singleton(Point::Abstract(0)), 0, 9, 1e-9).unwrap();
        let rep = minimal_unique_check(&fam, &s, 1e-9).unwrap();
        assert_eq!(rep.minimal, alloc::vec![alloc::vec![0, 1, 2]]);
        assert!(rep.unique);
        assert!(matches!(
            minimal_unique_check(&SetFamily::new(0.1), &s, 0.1),
            Err(ClassifierError::EmptyFamily)
        ));
    }

    #[test]
    fn two_disjoint_cycles_are_not_unique() {
        let s = System::from_permutation(4, alloc::vec![1, 0, 3, 2], DistanceTable::discrete(4)).unwrap();
        let fam = SetFamily::from_members((0..4).map(|i| FiniteSet::singleton(Point::Abstract(i))).collect(), 0.5);
        let rep = minimal_unique_check(&fam, &s, 0.5).unwrap();
        assert_eq!(rep.minimal.len(), 2);
        assert!(!rep.unique);
    }

    #[test]
    fn intersections() {
        let f = houses();
        let c = f.builtin_set(&Builtin::C { depth: 2 }).unwrap();
        let (meet, out) = intersect_ur(&f, &c, &c, 0.1, 16, 4).unwrap();
        assert_eq!(meet, c);
        assert_eq!(out.certificate().unwrap().step, 16);
        let mesh = f.circle_points(256).unwrap();
        let h1 = f
            .builtin_set(&Builtin::H {
                max_level: 16,
                mesh: 256,
            })
            .unwrap();
        let h2 = FiniteSet::new((1..=8u64).map(|n| Point::house(2 * n, n)))
            .unwrap()
            .union(&mesh);
        let (meet, out) = intersect_ur(&f, &h1, &h2, 0.1, 4, 10).unwrap();
        assert_eq!(meet, mesh);
        assert_eq!(out.certificate().unwrap().step, 1);
        let d = FiniteSet::singleton(Point::house(4, 1));
        assert!(matches!(
            intersect_ur(&f, &d, &origin(), 0.1, 1, 1),
            Err(ClassifierError::EmptyIntersection)
        ));
    }
}

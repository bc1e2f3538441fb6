//! Pointwise periodic homeomorphisms with an enumerable carrier.
//!
//! Two families are provided:
//!
//! * the rotating-houses system on `S^1 x {0}` plus the orbits
//!   `U_n = {u_n^k = (e^{2 pi i k/n}, 1/n)}`: each `U_n` is rotated by one
//!   position, the circle is fixed pointwise. The carrier is truncated to
//!   finitely many `U_n` and an equispaced mesh of the circle. Every such
//!   truncation is exactly invariant.
//! * map-table systems over abstract points, typically permutations of
//!   `0..n` with a [`DistanceTable`] metric.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::metric::{CirclePoint, DistanceTable, FiniteSet, MetricError, Point, Rational, Space};

/// Largest orbit size / mesh size accepted for the rotating-houses system.
pub const MAX_DENOMINATOR: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error("point {0} is not in the carrier")]
    NotInCarrier(Point),
    #[error("point {0} is not periodic")]
    NotPeriodic(Point),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("images do not form a permutation of 0..{n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    #[error("level {level} is not in the carrier; available levels: {available:?}")]
    MissingLevel { level: u64, available: Vec<u64> },
    #[error("mesh {requested} is not a sub-mesh of the carrier mesh {available}")]
    MissingMesh { requested: u64, available: u64 },
    #[error("operation needs the rotating-houses system")]
    NotHouses,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Truncation parameters for the rotating-houses system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example63Config {
    /// Orbit sizes `n` whose full orbit `U_n` is included.
    pub levels: Vec<u64>,
    /// Indices `n` of the `(1, 1/n)` family; each brings its orbit `U_n` along.
    #[serde(default)]
    pub extra_levels: Vec<u64>,
    /// Number of equispaced fixed points on the circle.
    pub circle_mesh: u64,
}

impl Default for Example63Config {
    fn default() -> Self {
        Self {
            levels: Self::tower(4),
            extra_levels: (1..=64).collect(),
            circle_mesh: 256,
        }
    }
}

impl Example63Config {
    /// Levels `2^{2^k}` for `k = 1..=depth`.
    pub fn tower(depth: u32) -> Vec<u64> {
        (1..=depth).map(|k| 1u64 << (1u32 << k)).collect()
    }

    /// Tower levels up to `depth`, no extras.
    pub fn with_depth(depth: u32, circle_mesh: u64) -> Self {
        Self {
            levels: Self::tower(depth),
            extra_levels: Vec::new(),
            circle_mesh,
        }
    }

    /// `(1, 1/n)` for `n <= max_level` plus the mesh; no tower levels.
    pub fn staircase(max_level: u64, circle_mesh: u64) -> Self {
        Self {
            levels: Vec::new(),
            extra_levels: (1..=max_level).collect(),
            circle_mesh,
        }
    }

    pub fn validate(&self) -> Result<(), SystemError> {
        if self.circle_mesh == 0 {
            return Err(SystemError::Config("circle_mesh must be at least 1".into()));
        }
        if self.circle_mesh > MAX_DENOMINATOR {
            return Err(SystemError::Config(format!(
                "circle_mesh {} exceeds the denominator cap {MAX_DENOMINATOR}",
                self.circle_mesh
            )));
        }
        for (name, list) in [("levels", &self.levels), ("extra_levels", &self.extra_levels)] {
            let mut seen = BTreeSet::new();
            for &n in list.iter() {
                if n == 0 {
                    return Err(SystemError::Config(format!("{name} contains 0")));
                }
                if n > MAX_DENOMINATOR {
                    return Err(SystemError::Config(format!(
                        "{name} entry {n} exceeds the denominator cap {MAX_DENOMINATOR}"
                    )));
                }
                if !seen.insert(n) {
                    return Err(SystemError::Config(format!("{name} repeats {n}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Dynamics {
    Houses {
        levels: BTreeSet<u64>,
        mesh: u64,
    },
    Table {
        images: Vec<usize>,
        periods: Vec<Option<u64>>,
    },
}

/// A pointwise periodic homeomorphism of a finite carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    dynamics: Dynamics,
    space: Space,
    descriptor: String,
}

impl System {
    pub fn example63(cfg: &Example63Config) -> Result<Self, SystemError> {
        cfg.validate()?;
        let levels: BTreeSet<u64> = cfg.levels.iter().chain(cfg.extra_levels.iter()).copied().collect();
        let descriptor = format!(
            "example63(levels={:?}, extra_levels={}, circle_mesh={})",
            cfg.levels,
            summarize_levels(&cfg.extra_levels),
            cfg.circle_mesh
        );
        Ok(System {
            dynamics: Dynamics::Houses {
                levels,
                mesh: cfg.circle_mesh,
            },
            space: Space::Circle,
            descriptor,
        })
    }

    /// A permutation of `0..n` acting on abstract points.
    pub fn from_permutation(n: usize, images: Vec<usize>, table: DistanceTable) -> Result<Self, SystemError> {
        if images.len() != n {
            return Err(SystemError::NotAPermutation {
                n,
                reason: format!("{} images given", images.len()),
            });
        }
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            if i >= n {
                return Err(SystemError::NotAPermutation {
                    n,
                    reason: format!("image {i} out of range"),
                });
            }
            if core::mem::replace(&mut seen[i], true) {
                return Err(SystemError::NotAPermutation {
                    n,
                    reason: format!("image {i} repeated"),
                });
            }
        }
        Self::from_map(images, table)
    }

    /// An arbitrary self-map of `0..n`. Not checked for bijectivity; see
    /// [`System::validate`].
    pub fn from_map(images: Vec<usize>, table: DistanceTable) -> Result<Self, SystemError> {
        let n = images.len();
        if table.size() != n {
            return Err(SystemError::Config(format!(
                "distance table has size {} but the map has {} points",
                table.size(),
                n
            )));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= n) {
            return Err(SystemError::Config(format!("image {bad} out of range 0..{n}")));
        }
        let periods = (0..n)
            .map(|start| {
                let mut p = images[start];
                for len in 1..=n as u64 {
                    if p == start {
                        return Some(len);
                    }
                    p = images[p];
                }
                None
            })
            .collect();
        let descriptor = format!("map(n={n}, images={images:?})");
        Ok(System {
            dynamics: Dynamics::Table { images, periods },
            space: Space::Table(table),
            descriptor,
        })
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Orbit sizes present in a rotating-houses carrier.
    pub fn levels(&self) -> Option<Vec<u64>> {
        match &self.dynamics {
            Dynamics::Houses { levels, .. } => Some(levels.iter().copied().collect()),
            Dynamics::Table { .. } => None,
        }
    }

    pub fn circle_mesh(&self) -> Option<u64> {
        match &self.dynamics {
            Dynamics::Houses { mesh, .. } => Some(*mesh),
            Dynamics::Table { .. } => None,
        }
    }

    /// The image table of a map-table system.
    pub fn images(&self) -> Option<&[usize]> {
        match &self.dynamics {
            Dynamics::Table { images, .. } => Some(images),
            Dynamics::Houses { .. } => None,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (&self.dynamics, p) {
            (Dynamics::Houses { levels, mesh }, Point::Circle(c)) => {
                let h = c.height();
                let a = c.angle();
                if h.is_zero() {
                    (*mesh as i128) % a.denom() == 0
                } else if *h.numer() == 1 {
                    let n = *h.denom();
                    u64::try_from(n).is_ok_and(|n| levels.contains(&n)) && n % a.denom() == 0
                } else {
                    false
                }
            }
            (Dynamics::Table { images, .. }, Point::Abstract(i)) => *i < images.len(),
            _ => false,
        }
    }

    pub fn contains_set(&self, a: &FiniteSet) -> bool {
        a.iter().all(|p| self.contains(p))
    }

    pub fn step(&self, p: &Point) -> Result<Point, SystemError> {
        self.step_n(p, 1)
    }

    /// `f^t(p)`, computed in closed form.
    pub fn step_n(&self, p: &Point, t: u64) -> Result<Point, SystemError> {
        if !self.contains(p) {
            return Err(SystemError::NotInCarrier(p.clone()));
        }
        match (&self.dynamics, p) {
            (Dynamics::Houses { .. }, Point::Circle(c)) => Ok(Point::Circle(rotate(c, t))),
            (Dynamics::Table { images, periods }, Point::Abstract(i)) => {
                let steps = match periods[*i] {
                    Some(per) => t % per,
                    None => t,
                };
                let mut j = *i;
                for _ in 0..steps {
                    j = images[j];
                }
                Ok(Point::Abstract(j))
            }
            _ => Err(SystemError::NotInCarrier(p.clone())),
        }
    }

    /// `f^{-1}(p)` for a periodic point.
    pub fn inverse_step(&self, p: &Point) -> Result<Point, SystemError> {
        let per = self.period_of(p)?;
        self.step_n(p, per - 1)
    }

    pub fn period_of(&self, p: &Point) -> Result<u64, SystemError> {
        if !self.contains(p) {
            return Err(SystemError::NotInCarrier(p.clone()));
        }
        match (&self.dynamics, p) {
            (Dynamics::Houses { .. }, Point::Circle(c)) => {
                if c.height().is_zero() {
                    Ok(1)
                } else {
                    Ok(*c.height().denom() as u64)
                }
            }
            (Dynamics::Table { periods, .. }, Point::Abstract(i)) => {
                periods[*i].ok_or_else(|| SystemError::NotPeriodic(p.clone()))
            }
            _ => Err(SystemError::NotInCarrier(p.clone())),
        }
    }

    /// Number of carrier points.
    pub fn carrier_len(&self) -> usize {
        match &self.dynamics {
            Dynamics::Houses { levels, mesh } => (levels.iter().sum::<u64>() + mesh) as usize,
            Dynamics::Table { images, .. } => images.len(),
        }
    }

    /// All carrier points, canonically ordered.
    pub fn carrier(&self) -> FiniteSet {
        let pts: Vec<Point> = match &self.dynamics {
            Dynamics::Houses { levels, mesh } => {
                let mut v = Vec::with_capacity(self.carrier_len());
                for &n in levels {
                    v.extend((0..n).map(|k| Point::house(n, k)));
                }
                v.extend((0..*mesh).map(|k| Point::on_circle(k as i128, *mesh as i128)));
                v
            }
            Dynamics::Table { images, .. } => (0..images.len()).map(Point::Abstract).collect(),
        };
        FiniteSet::new(pts).expect("carriers are non-empty")
    }

    /// Checks bijectivity on the carrier and that `period_of` matches the
    /// orbit length of every point.
    pub fn validate(&self) -> ValidationReport {
        let carrier = self.carrier();
        let index: BTreeMap<&Point, usize> = carrier.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut violations = Vec::new();
        let mut image_idx = alloc::vec![usize::MAX; carrier.len()];
        let mut hit: Vec<Option<usize>> = alloc::vec![None; carrier.len()];
        for (i, p) in carrier.iter().enumerate() {
            match self.step(p) {
                Ok(q) => match index.get(&q) {
                    Some(&j) => {
                        image_idx[i] = j;
                        if let Some(first) = hit[j] {
                            violations.push(Violation::NotABijection {
                                image: q.clone(),
                                preimages: (carrier.points()[first].clone(), p.clone()),
                            });
                        } else {
                            hit[j] = Some(i);
                        }
                    }
                    None => violations.push(Violation::LeavesCarrier {
                        point: p.clone(),
                        image: q,
                    }),
                },
                Err(_) => violations.push(Violation::LeavesCarrier {
                    point: p.clone(),
                    image: p.clone(),
                }),
            }
        }
        if let Some(j) = hit.iter().position(Option::is_none) {
            if violations.is_empty() {
                violations.push(Violation::NotSurjective(carrier.points()[j].clone()));
            }
        }

        let mut histogram = BTreeMap::new();
        if violations.is_empty() {
            let mut visited = alloc::vec![false; carrier.len()];
            for start in 0..carrier.len() {
                if visited[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut j = start;
                while !visited[j] {
                    visited[j] = true;
                    cycle.push(j);
                    j = image_idx[j];
                }
                let len = cycle.len() as u64;
                for &c in &cycle {
                    let p = &carrier.points()[c];
                    match self.period_of(p) {
                        Ok(per) if per == len => {}
                        Ok(per) => violations.push(Violation::PeriodMismatch {
                            point: p.clone(),
                            declared: per,
                            observed: len,
                        }),
                        Err(_) => violations.push(Violation::NotPeriodic(p.clone())),
                    }
                }
                *histogram.entry(len).or_insert(0usize) += cycle.len();
            }
        } else {
            for p in carrier.iter() {
                match self.period_of(p) {
                    Ok(per) => *histogram.entry(per).or_insert(0usize) += 1,
                    Err(_) => violations.push(Violation::NotPeriodic(p.clone())),
                }
            }
        }
        ValidationReport {
            carrier_size: carrier.len(),
            period_histogram: histogram,
            violations,
        }
    }

    /// The truncated sets `C`, `D`, `H` of the rotating-houses system.
    pub fn builtin_set(&self, which: &Builtin) -> Result<FiniteSet, SystemError> {
        let (levels, mesh) = match &self.dynamics {
            Dynamics::Houses { levels, mesh } => (levels, *mesh),
            Dynamics::Table { .. } => return Err(SystemError::NotHouses),
        };
        let need = |n: u64| {
            if levels.contains(&n) {
                Ok(())
            } else {
                Err(SystemError::MissingLevel {
                    level: n,
                    available: levels.iter().copied().collect(),
                })
            }
        };
        let origin = Point::on_circle(0, 1);
        let pts: Vec<Point> = match *which {
            Builtin::C { depth } => {
                let mut v = Vec::new();
                for n in Example63Config::tower(depth) {
                    need(n)?;
                    v.push(Point::house(n, 1));
                }
                v.push(origin);
                v
            }
            Builtin::D { max_level } => {
                let mut v = Vec::new();
                for n in 1..=max_level {
                    need(n)?;
                    v.push(Point::house(n, 0));
                }
                v.push(origin);
                v
            }
            Builtin::H { max_level, mesh: sub } => {
                if sub == 0 || mesh % sub != 0 {
                    return Err(SystemError::MissingMesh {
                        requested: sub,
                        available: mesh,
                    });
                }
                let mut v = Vec::new();
                for n in 1..=max_level {
                    need(n)?;
                    v.push(Point::house(n, 0));
                }
                v.extend((0..sub).map(|k| Point::on_circle(k as i128, sub as i128)));
                v
            }
        };
        Ok(FiniteSet::new(pts)?)
    }

    /// The fixed circle mesh with `m` points (must divide the carrier mesh).
    pub fn circle_points(&self, m: u64) -> Result<FiniteSet, SystemError> {
        let mesh = self.circle_mesh().ok_or(SystemError::NotHouses)?;
        if m == 0 || mesh % m != 0 {
            return Err(SystemError::MissingMesh {
                requested: m,
                available: mesh,
            });
        }
        Ok(FiniteSet::new((0..m).map(|k| Point::on_circle(k as i128, m as i128)))?)
    }

    /// The orbit `U_n`.
    pub fn level_orbit(&self, n: u64) -> Result<FiniteSet, SystemError> {
        let levels = self.levels().ok_or(SystemError::NotHouses)?;
        if !levels.contains(&n) {
            return Err(SystemError::MissingLevel {
                level: n,
                available: levels,
            });
        }
        Ok(FiniteSet::new((0..n).map(|k| Point::house(n, k)))?)
    }
}

fn rotate(c: &CirclePoint, t: u64) -> CirclePoint {
    if c.height().is_zero() {
        return c.clone();
    }
    let n = *c.height().denom();
    let k = c.angle().numer() * (n / c.angle().denom());
    let k = (k + (t as i128) % n) % n;
    CirclePoint::new(Rational::new(k, n), *c.height()).expect("height stays non-negative")
}

fn summarize_levels(levels: &[u64]) -> String {
    let contiguous = levels.windows(2).all(|w| w[1] == w[0] + 1);
    match (levels.first(), levels.last()) {
        (Some(a), Some(b)) if contiguous && levels.len() > 2 => format!("{a}..={b}"),
        _ => format!("{levels:?}"),
    }
}

/// Named sets of the rotating-houses system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum Builtin {
    /// `{u_{2^{2^k}}^1 : k = 1..=depth} U {(1,0)}`
    C { depth: u32 },
    /// `{(1, 1/n) : n <= max_level} U {(1,0)}`
    D { max_level: u64 },
    /// `{(1, 1/n) : n <= max_level} U` circle mesh
    H { max_level: u64, mesh: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotABijection { image: Point, preimages: (Point, Point) },
    NotSurjective(Point),
    LeavesCarrier { point: Point, image: Point },
    PeriodMismatch { point: Point, declared: u64, observed: u64 },
    NotPeriodic(Point),
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NotABijection { .. } | Violation::NotSurjective(_) => "not a bijection",
            Violation::LeavesCarrier { .. } => "image leaves the carrier",
            Violation::PeriodMismatch { .. } => "period mismatch",
            Violation::NotPeriodic(_) => "not periodic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub carrier_size: usize,
    /// Period -> number of carrier points with that period.
    pub period_histogram: BTreeMap<u64, usize>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn periods(&self) -> Vec<u64> {
        self.period_histogram.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> System {
        System::example63(&Example63Config {
            levels: alloc::vec![4, 16],
            extra_levels: alloc::vec![1, 2, 3],
            circle_mesh: 8,
        })
        .unwrap()
    }

    #[test]
    fn rotation_and_fixed_circle() {
        let f = System::example63(&Example63Config::default()).unwrap();
        assert_eq!(f.step(&Point::house(4, 1)).unwrap(), Point::house(4, 2));
        assert_eq!(f.step(&Point::house(4, 3)).unwrap(), Point::house(4, 0));
        let third = Point::on_circle(1, 3);
        // 1/3 is not on the 256-mesh
        assert!(f.step(&third).is_err());
        let g = System::example63(&Example63Config::with_depth(1, 3)).unwrap();
        assert_eq!(g.step(&third).unwrap(), third);
        assert_eq!(f.period_of(&Point::house(16, 5)).unwrap(), 16);
        assert_eq!(f.period_of(&Point::on_circle(5, 256)).unwrap(), 1);
    }

    #[test]
    fn step_n_matches_iteration() {
        let f = small();
        for p in f.carrier().iter() {
            let mut q = p.clone();
            for t in 0..40u64 {
                assert_eq!(f.step_n(p, t).unwrap(), q);
                q = f.step(&q).unwrap();
            }
            assert_eq!(f.step(&f.inverse_step(p).unwrap()).unwrap(), *p);
        }
    }

    #[test]
    fn carrier_includes_full_extra_orbits() {
        let f = small();
        assert_eq!(f.carrier_len(), 4 + 16 + 1 + 2 + 3 + 8);
        assert_eq!(f.carrier().len(), f.carrier_len());
        assert!(f.contains(&Point::house(3, 2)));
        assert!(!f.contains(&Point::house(5, 0)));
    }

    #[test]
    fn default_system_validates() {
        let f = System::example63(&Example63Config::default()).unwrap();
        let report = f.validate();
        assert!(report.is_ok(), "{:?}", report.violations);
        let periods = report.periods();
        for p in [1, 4, 16, 256, 65536] {
            assert!(periods.contains(&p));
        }
        // every U_n contributes n points of period n
        assert_eq!(report.period_histogram[&65536], 65536);
        assert_eq!(report.period_histogram[&1], 1 + 256);
        assert_eq!(report.carrier_size, f.carrier_len());
    }

    #[test]
    fn permutation_periods() {
        let t3 = DistanceTable::discrete(3);
        let s = System::from_permutation(3, alloc::vec![1, 2, 0], t3.clone()).unwrap();
        assert_eq!(s.period_of(&Point::Abstract(0)).unwrap(), 3);
        assert!(s.validate().is_ok());
        let id = System::from_permutation(2, alloc::vec![0, 1], DistanceTable::discrete(2)).unwrap();
        assert_eq!(id.period_of(&Point::Abstract(1)).unwrap(), 1);
        let pairs = System::from_permutation(4, alloc::vec![1, 0, 3, 2], DistanceTable::discrete(4)).unwrap();
        assert_eq!(pairs.period_of(&Point::Abstract(2)).unwrap(), 2);
    }

    #[test]
    fn non_permutations_rejected() {
        let t = DistanceTable::discrete(3);
        assert!(matches!(
            System::from_permutation(3, alloc::vec![1, 1, 0], t.clone()),
            Err(SystemError::NotAPermutation { .. })
        ));
        assert!(System::from_permutation(3, alloc::vec![1, 2, 3], t.clone()).is_err());
        assert!(System::from_permutation(2, alloc::vec![1, 0], t).is_err());
    }

    #[test]
    fn validate_reports_non_injective_map() {
        let s = System::from_map(alloc::vec![1, 1, 0], DistanceTable::discrete(3)).unwrap();
        let report = s.validate();
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| v.name() == "not a bijection"));
        assert!(report.violations.iter().any(|v| v.name() == "not periodic"));
    }

    #[test]
    fn config_errors() {
        let cfg = Example63Config {
            circle_mesh: 0,
            ..Default::default()
        };
        assert!(System::example63(&cfg).is_err());
        let cfg = Example63Config {
            levels: alloc::vec![4, 4],
            extra_levels: alloc::vec![],
            circle_mesh: 1,
        };
        assert!(System::example63(&cfg).is_err());
        let cfg = Example63Config {
            levels: alloc::vec![MAX_DENOMINATOR + 1],
            extra_levels: alloc::vec![],
            circle_mesh: 1,
        };
        assert!(matches!(System::example63(&cfg), Err(SystemError::Config(_))));
    }

    #[test]
    fn builtin_sets() {
        let f = System::example63(&Example63Config::default()).unwrap();
        let c = f.builtin_set(&Builtin::C { depth: 2 }).unwrap();
        let expect = FiniteSet::new([Point::house(4, 1), Point::house(16, 1), Point::on_circle(0, 1)]).unwrap();
        assert_eq!(c, expect);
        let d = f.builtin_set(&Builtin::D { max_level: 3 }).unwrap();
        let expect = FiniteSet::new([
            Point::house(1, 0),
            Point::house(2, 0),
            Point::house(3, 0),
            Point::on_circle(0, 1),
        ])
        .unwrap();
        assert_eq!(d, expect);
        let h = f.builtin_set(&Builtin::H { max_level: 2, mesh: 4 }).unwrap();
        assert_eq!(h.len(), 6);
        assert!(h.contains(&Point::on_circle(3, 4)));
        assert!(h.contains(&Point::house(2, 0)));
        let err = f.builtin_set(&Builtin::C { depth: 5 }).unwrap_err();
        assert!(matches!(err, SystemError::MissingLevel { level: 4294967296, .. }));
        assert!(f.builtin_set(&Builtin::D { max_level: 65 }).is_err());
    }
}

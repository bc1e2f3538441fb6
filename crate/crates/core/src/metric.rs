//! Exact points, the ambient metric, and the Hausdorff metric on finite sets.
//!
//! Identity is symbolic: circle points carry a reduced rational angle (in
//! turns) and a rational height, abstract points carry an index into a
//! [`DistanceTable`]. Geometry is numeric: distances are `f64` values derived
//! from the exact fields.
//!
//! For circle points the ambient space is `C x R` and
//!
//! ```text
//! dist((a, h), (b, k)) = sqrt((2 sin(pi |a - b|))^2 + (h - k)^2)
//! ```
//!
//! which is the Euclidean distance between `(e^{2 pi i a}, h)` and
//! `(e^{2 pi i b}, k)`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational used for angles and heights.
pub type Rational = Ratio<i128>;

/// Default slack for floating-point distance comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("points live in different ambient spaces: {0} vs {1}")]
    DomainMismatch(Box<Point>, Box<Point>),
    #[error("abstract point {index} is outside the distance table of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("a finite set must be non-empty")]
    EmptySet,
    #[error("height must be non-negative, got {0}")]
    NegativeHeight(Rational),
    #[error("distance table: {0}")]
    InvalidTable(TableViolation),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableViolation {
    #[error("expected {expected} entries for size {size}, got {got}")]
    Shape { size: usize, expected: usize, got: usize },
    #[error("entry ({0}, {1}) is not finite and non-negative")]
    Entry(usize, usize),
    #[error("non-zero diagonal at {0}")]
    Diagonal(usize),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroOffDiagonal(usize, usize),
    #[error("asymmetric entries at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality fails for ({0}, {1}, {2})")]
    Triangle(usize, usize, usize),
}

/// A point of `S^1 x [0, inf)`: angle in turns, reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CirclePoint {
    angle: Rational,
    height: Rational,
}

impl CirclePoint {
    pub fn new(angle: Rational, height: Rational) -> Result<Self, MetricError> {
        if height.is_negative() {
            return Err(MetricError::NegativeHeight(height));
        }
        Ok(Self {
            angle: reduce_turns(angle),
            height,
        })
    }

    /// The point `(e^{2 pi i k / n}, 1/n)`.
    ///
    /// # Panics
    ///
    /// If `n == 0`.
    pub fn house(n: u64, k: u64) -> Self {
        assert!(n > 0, "house level must be positive");
        let n = i128::from(n);
        Self {
            angle: Rational::new(i128::from(k) % n, n),
            height: Rational::new(1, n),
        }
    }

    /// A point on the base circle (height zero).
    pub fn on_circle(angle: Rational) -> Self {
        Self {
            angle: reduce_turns(angle),
            height: Rational::zero(),
        }
    }

    pub fn angle(&self) -> &Rational {
        &self.angle
    }

    pub fn height(&self) -> &Rational {
        &self.height
    }

    pub fn dist(&self, other: &Self) -> f64 {
        let chord = 2.0 * libm::sin(core::f64::consts::PI * turn_gap(&self.angle, &other.angle));
        let dh = rational_gap(&self.height, &other.height);
        libm::sqrt(chord * chord + dh * dh)
    }
}

impl fmt::Debug for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.angle, self.height)
    }
}

fn reduce_turns(angle: Rational) -> Rational {
    let r = angle - angle.floor();
    if r.is_negative() {
        r + Rational::one()
    } else {
        r
    }
}

/// `|a - b|` as an exact ratio of integers, then a single division.
fn rational_gap(a: &Rational, b: &Rational) -> f64 {
    let num = (a.numer() * b.denom() - b.numer() * a.denom()).abs();
    let den = a.denom() * b.denom();
    num as f64 / den as f64
}

/// Circular distance in turns, in `[0, 1/2]`.
fn turn_gap(a: &Rational, b: &Rational) -> f64 {
    let num = (a.numer() * b.denom() - b.numer() * a.denom()).abs();
    let den = a.denom() * b.denom();
    let num = num.min(den - num);
    num as f64 / den as f64
}

/// A point of the ambient space.
///
/// Serializes as `[angle_num, angle_den, h_num, h_den]` for circle-space
/// points and as a bare integer id for abstract points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Circle(CirclePoint),
    Abstract(usize),
}

impl Point {
    pub fn house(n: u64, k: u64) -> Self {
        Point::Circle(CirclePoint::house(n, k))
    }

    pub fn on_circle(num: i128, den: i128) -> Self {
        Point::Circle(CirclePoint::on_circle(Rational::new(num, den)))
    }

    /// Circle-space point from raw fractions.
    pub fn circle(angle: Rational, height: Rational) -> Result<Self, MetricError> {
        CirclePoint::new(angle, height).map(Point::Circle)
    }

    pub fn as_circle(&self) -> Option<&CirclePoint> {
        match self {
            Point::Circle(c) => Some(c),
            Point::Abstract(_) => None,
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Point::Circle(c) => [*c.angle.numer(), *c.angle.denom(), *c.height.numer(), *c.height.denom()].serialize(s),
            Point::Abstract(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::{Error, SeqAccess, Visitor};

        struct PointVisitor;

        impl<'de> Visitor<'de> for PointVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a point id or [angle_num, angle_den, height_num, height_den]")
            }

            fn visit_u64<E: Error>(self, v: u64) -> Result<Point, E> {
                usize::try_from(v).map(Point::Abstract).map_err(E::custom)
            }

            fn visit_i64<E: Error>(self, v: i64) -> Result<Point, E> {
                usize::try_from(v).map(Point::Abstract).map_err(E::custom)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Point, A::Error> {
                let mut v = [0i128; 4];
                for (i, slot) in v.iter_mut().enumerate() {
                    *slot = seq.next_element()?.ok_or_else(|| A::Error::invalid_length(i, &self))?;
                }
                if seq.next_element::<i128>()?.is_some() {
                    return Err(A::Error::invalid_length(5, &self));
                }
                let [an, ad, hn, hd] = v;
                if ad == 0 || hd == 0 {
                    return Err(A::Error::custom("zero denominator in circle point"));
                }
                Point::circle(Rational::new(an, ad), Rational::new(hn, hd)).map_err(A::Error::custom)
            }
        }

        d.deserialize_any(PointVisitor)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Circle(c) => c.fmt(f),
            Point::Abstract(i) => write!(f, "#{i}"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Canonical non-empty finite set of points: sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteSet(Vec<Point>);

impl FiniteSet {
    pub fn new<I: IntoIterator<Item = Point>>(points: I) -> Result<Self, MetricError> {
        let mut v: Vec<Point> = points.into_iter().collect();
        if v.is_empty() {
            return Err(MetricError::EmptySet);
        }
        v.sort_unstable();
        v.dedup();
        Ok(FiniteSet(v))
    }

    pub fn singleton(p: Point) -> Self {
        FiniteSet(alloc::vec![p])
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Point> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|p| other.contains(p))
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        FiniteSet(v)
    }

    pub fn with_point(&self, p: Point) -> FiniteSet {
        match self.0.binary_search(&p) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, p);
                FiniteSet(v)
            }
        }
    }

    /// `None` when the intersection is empty.
    pub fn intersection(&self, other: &FiniteSet) -> Option<FiniteSet> {
        let v: Vec<Point> = self.0.iter().filter(|p| other.contains(p)).cloned().collect();
        if v.is_empty() {
            None
        } else {
            Some(FiniteSet(v))
        }
    }

    pub fn into_vec(self) -> Vec<Point> {
        self.0
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let points = Vec::<Point>::deserialize(d)?;
        FiniteSet::new(points).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Point;
    type IntoIter = core::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Symmetric distance matrix backing abstract points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceTable {
    size: usize,
    entries: Vec<f64>,
}

impl DistanceTable {
    /// Row-major `size x size` entries, validated with the default tolerance.
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self, MetricError> {
        Self::with_tolerance(size, entries, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(size: usize, entries: Vec<f64>, tol: f64) -> Result<Self, MetricError> {
        let table = DistanceTable { size, entries };
        table.validate(tol).map_err(MetricError::InvalidTable)?;
        Ok(table)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(size: usize, mut f: F) -> Result<Self, MetricError> {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        Self::new(size, entries)
    }

    /// Every pair of distinct points at distance one.
    pub fn discrete(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { 0.0 } else { 1.0 }).expect("discrete metric is valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if i < self.size && j < self.size {
            Some(self.entries[i * self.size + j])
        } else {
            None
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn validate(&self, tol: f64) -> Result<(), TableViolation> {
        let n = self.size;
        if self.entries.len() != n * n {
            return Err(TableViolation::Shape {
                size: n,
                expected: n * n,
                got: self.entries.len(),
            });
        }
        let e = |i: usize, j: usize| self.entries[i * n + j];
        for i in 0..n {
            for j in 0..n {
                let v = e(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(TableViolation::Entry(i, j));
                }
                if i == j && v != 0.0 {
                    return Err(TableViolation::Diagonal(i));
                }
                if i != j && v == 0.0 {
                    return Err(TableViolation::ZeroOffDiagonal(i, j));
                }
                if v != e(j, i) {
                    return Err(TableViolation::Asymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if e(i, k) > e(i, j) + e(j, k) + tol {
                        return Err(TableViolation::Triangle(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The ambient metric space points are drawn from.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    /// `S^1 x [0, inf)` inside `C x R`, carrying [`Point::Circle`].
    Circle,
    /// A finite abstract space, carrying [`Point::Abstract`].
    Table(DistanceTable),
}

impl Space {
    pub fn dist(&self, p: &Point, q: &Point) -> Result<f64, MetricError> {
        match (self, p, q) {
            (Space::Circle, Point::Circle(a), Point::Circle(b)) => Ok(a.dist(b)),
            (Space::Table(t), Point::Abstract(i), Point::Abstract(j)) => {
                t.get(*i, *j).ok_or(MetricError::IndexOutOfRange {
                    index: (*i).max(*j),
                    size: t.size(),
                })
            }
            _ => Err(MetricError::DomainMismatch(Box::new(p.clone()), Box::new(q.clone()))),
        }
    }

    /// `d(p, A) = min_{a in A} d(p, a)`.
    pub fn point_set_dist(&self, p: &Point, a: &FiniteSet) -> Result<f64, MetricError> {
        let mut best = f64::INFINITY;
        for q in a {
            if p == q {
                return Ok(0.0);
            }
            let d = self.dist(p, q)?;
            if d < best {
                best = d;
            }
        }
        Ok(best)
    }

    /// `d(A, B) = min` over all pairs.
    pub fn set_dist(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64, MetricError> {
        let mut best = f64::INFINITY;
        for p in a {
            best = best.min(self.point_set_dist(p, b)?);
        }
        Ok(best)
    }

    /// `sup_{x in A} d(x, B)`.
    pub fn directed_hausdorff(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64, MetricError> {
        let mut worst = 0.0f64;
        for p in a {
            let d = self.point_set_dist(p, b)?;
            if d > worst {
                worst = d;
            }
        }
        Ok(worst)
    }

    /// Hausdorff distance by full pairwise enumeration.
    pub fn hausdorff(&self, a: &FiniteSet, b: &FiniteSet) -> Result<f64, MetricError> {
        if a == b {
            return Ok(0.0);
        }
        let ab = self.directed_hausdorff(a, b)?;
        let ba = self.directed_hausdorff(b, a)?;
        Ok(ab.max(ba))
    }

    /// Points of `A` strictly within `eps` of `center`. May be empty.
    pub fn ball_members(&self, a: &FiniteSet, center: &Point, eps: f64) -> Result<Vec<Point>, MetricError> {
        let mut out = Vec::new();
        for p in a {
            if self.dist(p, center)? < eps {
                out.push(p.clone());
            }
        }
        Ok(out)
    }

    /// Is `p` within `eps` of `q`? Exact mode (`eps == 0`) is symbolic equality.
    pub fn within(&self, p: &Point, q: &Point, eps: f64) -> Result<bool, MetricError> {
        if p == q {
            return Ok(true);
        }
        if eps <= 0.0 {
            return Ok(false);
        }
        Ok(self.dist(p, q)? < eps)
    }
}

/// Compare two distances with slack.
pub fn approx_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn house_angles_are_reduced() {
        let p = CirclePoint::house(4, 6);
        assert_eq!(*p.angle(), r(1, 2));
        assert_eq!(*p.height(), r(1, 4));
        let q = CirclePoint::new(r(-1, 4), r(0, 1)).unwrap();
        assert_eq!(*q.angle(), r(3, 4));
    }

    #[test]
    fn negative_height_rejected() {
        assert!(matches!(
            CirclePoint::new(r(0, 1), r(-1, 2)),
            Err(MetricError::NegativeHeight(_))
        ));
    }

    #[test]
    fn dist_examples() {
        let s = Space::Circle;
        let u40 = Point::house(4, 0);
        assert_eq!(s.dist(&u40, &u40).unwrap(), 0.0);
        let d = s.dist(&Point::on_circle(0, 1), &Point::on_circle(1, 2)).unwrap();
        assert_eq!(d, 2.0);
        let d = s.dist(&u40, &Point::house(4, 1)).unwrap();
        assert!((d - core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn mixed_points_are_rejected() {
        let s = Space::Circle;
        let err = s.dist(&Point::house(4, 0), &Point::Abstract(0)).unwrap_err();
        assert!(matches!(err, MetricError::DomainMismatch(..)));
    }

    #[test]
    fn set_dist_examples() {
        let s = Space::Circle;
        let a = FiniteSet::new([Point::house(4, 0)]).unwrap();
        let b = FiniteSet::new([Point::house(4, 1), Point::house(4, 2)]).unwrap();
        assert_eq!(s.set_dist(&a, &a).unwrap(), 0.0);
        assert!((s.set_dist(&a, &b).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-12);
        let one = FiniteSet::singleton(Point::on_circle(0, 1));
        let up = FiniteSet::singleton(Point::circle(r(0, 1), r(1, 8)).unwrap());
        assert!((s.set_dist(&one, &up).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_of_singletons_is_dist() {
        let s = Space::Circle;
        let a = FiniteSet::singleton(Point::on_circle(0, 1));
        let b = FiniteSet::singleton(Point::on_circle(1, 2));
        assert_eq!(s.hausdorff(&a, &b).unwrap(), 2.0);
        assert_eq!(s.hausdorff(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ball_members_examples() {
        let s = Space::Circle;
        let one = Point::on_circle(0, 1);
        let a = FiniteSet::singleton(one.clone());
        assert_eq!(s.ball_members(&a, &one, 0.1).unwrap(), alloc::vec![one.clone()]);
        let b = FiniteSet::singleton(Point::house(4, 1));
        assert!(s.ball_members(&b, &one, 0.1).unwrap().is_empty());
        let low = Point::circle(r(0, 1), r(1, 8)).unwrap();
        let high = Point::circle(r(0, 1), r(1, 2)).unwrap();
        let c = FiniteSet::new([low.clone(), high]).unwrap();
        assert_eq!(s.ball_members(&c, &one, 0.2).unwrap(), alloc::vec![low]);
    }

    #[test]
    fn finite_set_is_canonical() {
        let a = FiniteSet::new([Point::house(4, 1), Point::house(4, 0), Point::house(4, 1)]).unwrap();
        let b = FiniteSet::new([Point::house(4, 0), Point::house(4, 5)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(FiniteSet::new(core::iter::empty()).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(DistanceTable::new(2, alloc::vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        assert!(matches!(
            DistanceTable::new(2, alloc::vec![0.0, 1.0, 2.0, 0.0]),
            Err(MetricError::InvalidTable(TableViolation::Asymmetric(0, 1)))
        ));
        assert!(matches!(
            DistanceTable::new(3, alloc::vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]),
            Err(MetricError::InvalidTable(TableViolation::Triangle(..)))
        ));
        assert!(matches!(
            DistanceTable::new(2, alloc::vec![0.0, 0.0, 0.0, 0.0]),
            Err(MetricError::InvalidTable(TableViolation::ZeroOffDiagonal(0, 1)))
        ));
        let t = DistanceTable::discrete(3);
        let s = Space::Table(t);
        assert_eq!(s.dist(&Point::Abstract(0), &Point::Abstract(2)).unwrap(), 1.0);
        assert!(matches!(
            s.dist(&Point::Abstract(0), &Point::Abstract(3)),
            Err(MetricError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn subset_hausdorff_is_directed_from_superset() {
        let s = Space::Circle;
        let a = FiniteSet::new([Point::house(16, 1), Point::on_circle(0, 1)]).unwrap();
        let b = a.union(&FiniteSet::new([Point::house(16, 7), Point::on_circle(1, 3)]).unwrap());
        assert!(a.is_subset(&b));
        assert_eq!(s.hausdorff(&a, &b).unwrap(), s.directed_hausdorff(&b, &a).unwrap());
        assert_eq!(s.directed_hausdorff(&a, &b).unwrap(), 0.0);
    }
}

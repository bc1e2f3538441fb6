//! `eps`-chain digraphs on finite subsets, internal chain transitivity, weak
//! incompressibility and the cyclic component structure of ICT sets.
//!
//! `eps <= 0` is exact mode: `p -> q` only when `f(p) = q`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use serde::Serialize;

use crate::graph::{lcm, scc, DisjointSet};
use crate::hyperspace::HyperspaceError;
use crate::metric::{FiniteSet, MetricError, Point};
use crate::systems::{System, SystemError};

/// Largest set the subset enumeration in [`weak_incompressibility`] accepts.
pub const WI_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("set of {size} points exceeds the subset-enumeration cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("the set is not internally chain transitive at eps = {eps}")]
    NotIct { eps: f64 },
    #[error("images of component {component} land near components {targets:?}")]
    Straddle { component: usize, targets: Vec<usize> },
    #[error("component successor map {order:?} is not a single cycle")]
    NotSingleCycle { order: Vec<Option<usize>> },
    #[error("the set is empty")]
    Empty,
}

impl From<HyperspaceError> for ChainError {
    fn from(e: HyperspaceError) -> Self {
        match e {
            HyperspaceError::System(s) => ChainError::System(s),
            HyperspaceError::Metric(m) => ChainError::Metric(m),
            HyperspaceError::Argument(_) => ChainError::Empty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainDigraph {
    pub vertices: FiniteSet,
    pub eps: f64,
    /// `edges[i]` lists the heads `j` of edges `i -> j`, ascending.
    pub edges: Vec<Vec<usize>>,
}

impl ChainDigraph {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Graphviz rendering, vertices labelled by their points.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph chain {\n");
        let _ = writeln!(out, "  // eps = {}", self.eps);
        for (i, p) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{p}\"];");
        }
        for (i, heads) in self.edges.iter().enumerate() {
            for j in heads {
                let _ = writeln!(out, "  {i} -> {j};");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Strongly connected, with a self-loop when there is a single vertex.
    pub fn is_ict(&self) -> bool {
        match self.len() {
            0 => false,
            1 => self.has_edge(0, 0),
            _ => scc(&self.edges).1 == 1,
        }
    }

    /// Every proper non-empty `F` receives an edge from its complement.
    /// A single vertex needs its self-loop, matching [`ChainDigraph::is_ict`].
    pub fn weak_incompressibility(&self) -> Result<bool, ChainError> {
        let n = self.len();
        if n > WI_CAP {
            return Err(ChainError::TooLarge { size: n, cap: WI_CAP });
        }
        match n {
            0 => return Ok(false),
            1 => return Ok(self.has_edge(0, 0)),
            _ => {}
        }
        let out: Vec<u32> = self
            .edges
            .iter()
            .map(|heads| heads.iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for f in 1..full {
            let rest = full & !f;
            let mut reach = 0u32;
            let mut bits = rest;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                reach |= out[q];
                bits &= bits - 1;
            }
            if reach & f == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Edge `p -> q` iff `f(p) = q` or `dist(f(p), q) < eps`.
pub fn build_digraph(system: &System, s: &FiniteSet, eps: f64) -> Result<ChainDigraph, ChainError> {
    let space = system.space();
    let pts = s.points();
    let mut edges = Vec::with_capacity(pts.len());
    for p in pts {
        let fp = system.step(p)?;
        let mut heads = Vec::new();
        for (j, q) in pts.iter().enumerate() {
            if space.within(&fp, q, eps)? {
                heads.push(j);
            }
        }
        edges.push(heads);
    }
    Ok(ChainDigraph {
        vertices: s.clone(),
        eps,
        edges,
    })
}

pub fn is_ict(system: &System, s: &FiniteSet, eps: f64) -> Result<bool, ChainError> {
    Ok(build_digraph(system, s, eps)?.is_ict())
}

pub fn weak_incompressibility(system: &System, s: &FiniteSet, eps: f64) -> Result<bool, ChainError> {
    if s.len() > WI_CAP {
        return Err(ChainError::TooLarge {
            size: s.len(),
            cap: WI_CAP,
        });
    }
    build_digraph(system, s, eps)?.weak_incompressibility()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleDecomposition {
    pub period: usize,
    /// `components[i]` is mapped near `components[cycle_order[i]]`.
    pub components: Vec<FiniteSet>,
    pub cycle_order: Vec<usize>,
}

impl CycleDecomposition {
    /// lcm of the periods of all points.
    pub fn period_lcm(&self, system: &System) -> Result<Option<u64>, ChainError> {
        let mut l = Some(1u64);
        for c in &self.components {
            for p in c {
                let per = system.period_of(p)?;
                l = l.and_then(|x| lcm(x, per));
            }
        }
        Ok(l)
    }

    pub fn component_of(&self, p: &Point) -> Option<usize> {
        self.components.iter().position(|c| c.contains(p))
    }
}

/// `eps`-connected components of an ICT set and the cyclic order in which the
/// map permutes them. Components are numbered along the cycle starting from
/// the one holding the smallest point, so `cycle_order[i] = (i + 1) % N`.
pub fn component_cycle(system: &System, s: &FiniteSet, eps: f64) -> Result<CycleDecomposition, ChainError> {
    if !is_ict(system, s, eps)? {
        return Err(ChainError::NotIct { eps });
    }
    let space = system.space();
    let pts = s.points();
    let n = pts.len();
    let mut ds = DisjointSet::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if space.within(&pts[i], &pts[j], eps)? {
                ds.union(i, j);
            }
        }
    }
    let (label, count) = ds.labels();

    // successor component of every point, through its nearest eps-neighbour
    let mut targets: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); count];
    for (i, p) in pts.iter().enumerate() {
        let fp = system.step(p)?;
        let mut best: Option<(usize, f64)> = None;
        for (j, q) in pts.iter().enumerate() {
            if space.within(&fp, q, eps)? {
                let d = space.dist(&fp, q)?;
                if best.is_none_or(|(_, b)| d < b) {
                    best = Some((j, d));
                }
            }
        }
        if let Some((j, _)) = best {
            targets[label[i]].insert(label[j]);
        }
    }
    let mut next: Vec<Option<usize>> = Vec::with_capacity(count);
    for (c, t) in targets.iter().enumerate() {
        match t.len() {
            0 => next.push(None),
            1 => next.push(t.first().copied()),
            _ => {
                return Err(ChainError::Straddle {
                    component: c,
                    targets: t.iter().copied().collect(),
                })
            }
        }
    }

    // walk the cycle from the component of the first point
    let mut order = Vec::with_capacity(count);
    let mut seen = alloc::vec![false; count];
    let mut c = label[0];
    loop {
        if seen[c] {
            break;
        }
        seen[c] = true;
        order.push(c);
        match next[c] {
            Some(d) => c = d,
            None => return Err(ChainError::NotSingleCycle { order: next }),
        }
    }
    if order.len() != count || c != label[0] {
        return Err(ChainError::NotSingleCycle { order: next });
    }
    let mut position = alloc::vec![0usize; count];
    for (k, &c) in order.iter().enumerate() {
        position[c] = k;
    }
    let mut buckets: Vec<Vec<Point>> = alloc::vec![Vec::new(); count];
    for (i, p) in pts.iter().enumerate() {
        buckets[position[label[i]]].push(p.clone());
    }
    let components = buckets.into_iter().map(FiniteSet::new).collect::<Result<Vec<_>, _>>()?;
    Ok(CycleDecomposition {
        period: count,
        components,
        cycle_order: (0..count).map(|k| (k + 1) % count).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitLimitReport {
    /// Period `N` of the component cycle of the limit candidate.
    pub period: usize,
    /// The component `C_0` holding the base point.
    pub component: FiniteSet,
    /// `d_H(O_{f^N}(x_k), C_0)` for each supplied point.
    pub distances: Vec<f64>,
    /// The last distance is below `eps`.
    pub eventually_below: bool,
}

/// Distances from the `f^N`-orbits of `orbit_points` to the component of
/// `limit` containing `base`, where `N` is the period of the component cycle
/// of `limit` at `eps`. Orbits are followed for at most `horizon` steps of
/// `f^N`.
pub fn orbit_limit_check(
    system: &System,
    orbit_points: &[Point],
    base: &Point,
    limit: &FiniteSet,
    eps: f64,
    horizon: u64,
) -> Result<OrbitLimitReport, ChainError> {
    if orbit_points.is_empty() {
        return Err(ChainError::Empty);
    }
    let decomposition = component_cycle(system, limit, eps)?;
    let k = decomposition
        .component_of(base)
        .ok_or_else(|| ChainError::System(SystemError::Config(format!("base {base} is not in the limit set"))))?;
    let component = decomposition.components[k].clone();
    let n = decomposition.period as u64;
    let space = system.space();
    let mut distances = Vec::with_capacity(orbit_points.len());
    for x in orbit_points {
        let per = system.period_of(x)?;
        // the f^N-orbit of x closes after per / gcd(per, N) steps
        let steps = (per / crate::graph::gcd(per, n)).min(horizon.max(1));
        let mut pts = Vec::with_capacity(steps as usize);
        let mut y = x.clone();
        for _ in 0..steps {
            pts.push(y.clone());
            y = system.step_n(&y, n)?;
        }
        let orbit = FiniteSet::new(pts)?;
        distances.push(space.hausdorff(&orbit, &component)?);
    }
    let eventually_below = distances.last().is_some_and(|&d| d < eps);
    Ok(OrbitLimitReport {
        period: decomposition.period,
        component,
        distances,
        eventually_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DistanceTable;
    use crate::systems::Example63Config;

    fn houses() -> System {
        System::example63(&Example63Config::default()).unwrap()
    }

    fn perm(images: Vec<usize>) -> System {
        let n = images.len();
        System::from_permutation(n, images, DistanceTable::discrete(n)).unwrap()
    }

    fn abstract_set(ids: &[usize]) -> FiniteSet {
        FiniteSet::new(ids.iter().map(|&i| Point::Abstract(i))).unwrap()
    }

    #[test]
    fn digraph_examples() {
        let f = houses();
        let fixed = FiniteSet::singleton(Point::on_circle(0, 1));
        let g = build_digraph(&f, &fixed, 0.1).unwrap();
        assert_eq!(g.edges, alloc::vec![alloc::vec![0]]);
        let u4 = f.level_orbit(4).unwrap();
        let g = build_digraph(&f, &u4, 0.5).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_ict());
        let u4_16 = u4.union(&f.level_orbit(16).unwrap());
        let g = build_digraph(&f, &u4_16, 0.3).unwrap();
        assert!(g.edge_count() > 20);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph chain {") && dot.ends_with("}\n"));
    }

    #[test]
    fn ict_examples() {
        let f = houses();
        let fixed = FiniteSet::singleton(Point::on_circle(0, 1));
        assert!(is_ict(&f, &fixed, 0.1).unwrap());
        let two = FiniteSet::new([Point::on_circle(0, 1), Point::on_circle(1, 2)]).unwrap();
        assert!(!is_ict(&f, &two, 0.1).unwrap());
        assert!(is_ict(&f, &f.level_orbit(16).unwrap(), 1e-6).unwrap());
    }

    #[test]
    fn wi_examples() {
        let s = perm(alloc::vec![1, 2, 0, 4, 3]);
        assert!(weak_incompressibility(&s, &abstract_set(&[0, 1, 2]), 0.0).unwrap());
        assert!(!weak_incompressibility(&s, &abstract_set(&[0, 1, 2, 3, 4]), 0.0).unwrap());
        assert!(!weak_incompressibility(&s, &abstract_set(&[0, 1]), 0.0).unwrap());
        let big = perm((0..20).collect());
        let all = abstract_set(&(0..17).collect::<Vec<_>>());
        assert!(matches!(
            weak_incompressibility(&big, &all, 0.0),
            Err(ChainError::TooLarge { size: 17, cap: 16 })
        ));
    }

    #[test]
    fn cycles_of_levels_and_circle() {
        let f = houses();
        let mesh = f.circle_points(256).unwrap();
        let d = component_cycle(&f, &mesh, 0.05).unwrap();
        assert_eq!(d.period, 1);
        let u4 = f.level_orbit(4).unwrap();
        let d = component_cycle(&f, &u4, 0.5).unwrap();
        assert_eq!(d.period, 4);
        assert_eq!(d.cycle_order, alloc::vec![1, 2, 3, 0]);
        let both = u4.union(&mesh);
        let d = component_cycle(&f, &both, 1.0).unwrap();
        assert_eq!(d.period, 1);
        assert_eq!(d.components[0], both);
        assert!(matches!(
            component_cycle(&f, &both, 0.05),
            Err(ChainError::NotIct { .. })
        ));
    }

    #[test]
    fn exact_cycles_of_a_permutation() {
        let s = perm(alloc::vec![2, 0, 1]);
        let d = component_cycle(&s, &abstract_set(&[0, 1, 2]), 0.0).unwrap();
        assert_eq!(d.period, 3);
        assert_eq!(d.components[1], abstract_set(&[2]));
    }

    #[test]
    fn orbit_limits() {
        let f = houses();
        let mesh = f.circle_points(256).unwrap();
        let base = Point::on_circle(0, 1);
        let fixed = FiniteSet::singleton(base.clone());
        let r = orbit_limit_check(&f, &[base.clone(), base.clone()], &base, &fixed, 0.05, 10).unwrap();
        assert_eq!(r.distances, alloc::vec![0.0, 0.0]);
        // levels beyond the mesh resolution stop decreasing: U_65536 sits
        // between mesh points
        let xs: Vec<Point> = [4u64, 16, 256].iter().map(|&n| Point::house(n, 0)).collect();
        let r = orbit_limit_check(&f, &xs, &base, &mesh, 0.05, 1 << 17).unwrap();
        assert!(r.distances.windows(2).all(|w| w[1] < w[0]), "{:?}", r.distances);
        assert!(r.eventually_below);
    }

    #[test]
    fn collapsing_two_cycles() {
        // 0 <-> 1 and 2 <-> 3, with {2, 3} closer to each other than {0, 1}
        let table = DistanceTable::new(
            4,
            alloc::vec![
                0.0, 1.0, 2.0, 2.0, //
                1.0, 0.0, 2.0, 2.0, //
                2.0, 2.0, 0.0, 0.1, //
                2.0, 2.0, 0.1, 0.0,
            ],
        )
        .unwrap();
        let s = System::from_permutation(4, alloc::vec![1, 0, 3, 2], table).unwrap();
        let limit = abstract_set(&[2, 3]);
        let r = orbit_limit_check(
            &s,
            &[Point::Abstract(0), Point::Abstract(2)],
            &Point::Abstract(2),
            &limit,
            0.5,
            8,
        )
        .unwrap();
        assert_eq!(r.period, 1);
        assert_eq!(r.distances, alloc::vec![2.0, 0.0]);
    }
}

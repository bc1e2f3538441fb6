//! The twelve desk-scale checks behind `verify-theorems` and the acceptance
//! test. Each check returns its verdict together with the measured numbers.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use hyperlab_core::chains::component_cycle;
use hyperlab_core::classifiers::{
    ap_certificate, minimal_unique_check, pair_classify, required_gap, return_times, ur_certificate, ur_verify,
    PairParams, UrOutcome,
};
use hyperlab_core::entropy::entropy_slope;
use hyperlab_core::hyperspace::{induced_power, omega_sample, return_values, SetFamily};
use hyperlab_core::odometer::{d_alpha, f_alpha, odo_add, odometer_system, signature_match, OdometerAddress};
use hyperlab_core::systems::Builtin;
use hyperlab_core::{DistanceTable, Example63Config, FiniteSet, Point, System};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::permutation_corpus;
use crate::parallel;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl CheckOutcome {
    fn new(id: u8) -> Self {
        let (name, claim) = CHECKS[id as usize - 1];
        Self {
            id,
            name,
            claim,
            passed: true,
            details: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.passed = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(what.into());
    }

    fn error(id: u8, e: impl std::fmt::Display) -> Self {
        let mut c = Self::new(id);
        c.require(false, format!("error: {e}"));
        c
    }

    /// One line: `[PASS] 4 uniform-recurrence-of-H: <claim>`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.claim
        )
    }
}

pub const CHECKS: [(&str, &str); 12] = [
    (
        "hausdorff-metric-axioms",
        "d_H is a metric on 1000 random triples of finite sets (triangle slack 1e-9)",
    ),
    (
        "recurrence-of-C",
        "d_H(F^n(C), C) at n = 4, 16, 256 strictly decreases; n = 16 matches the oracle within 1e-3",
    ),
    (
        "non-recurrence-of-D",
        "min over 1 <= m <= 16 of d_H(F^m(D), D) >= 1.9 for D up to level 32",
    ),
    (
        "uniform-recurrence-of-H",
        "H (levels <= 24, mesh 256) returns within 0.3 at every multiple kN, N = 24, k <= 50",
    ),
    (
        "C-not-almost-periodic",
        "no progression N <= 64, k <= 64 certifies C at eps 0.2; required return gaps grow over 4 doubling horizons",
    ),
    (
        "ict-equals-weak-incompressibility",
        "exact-mode ICT and weak incompressibility agree on every subset of every corpus permutation (<= 10 points)",
    ),
    (
        "component-cycles",
        "ICT sets split into eps-components permuted as a single N-cycle with N dividing the period lcm",
    ),
    (
        "zero-entropy-growth",
        "spanning counts of 256 random sets grow with log-slope <= 0.01; identity and permutation controls stay constant",
    ),
    (
        "scrambled-family",
        "20 fixed anchors added to C give 190 Li-Yorke pairs at scale 0.05 and the return series relation holds exactly",
    ),
    (
        "asymptotic-containment",
        "D and H are asymptotic at resolution-matched scale, and D is a subset of H in every truncation",
    ),
    (
        "odometer-laws",
        "adding-machine addition is an abelian group law, f_alpha is minimal, d_alpha is a metric, signatures self-verify",
    ),
    (
        "unique-minimal-set",
        "the omega-sample of C has exactly one minimal sub-family, carrying the (4, 4, 16) cylinder structure",
    ),
];

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenDistance {
    pub p: Point,
    pub q: Point,
    /// Decimal string, 30 significant digits.
    pub d: String,
}

/// Values computed by the independent oracle in `tests/oracles`.
#[derive(Debug, Clone, Deserialize)]
pub struct Golden {
    pub distances: Vec<GoldenDistance>,
    pub hausdorff_f16_c3: f64,
    pub c4_returns: Vec<f64>,
    pub d32_min_over_16: f64,
    pub h24_worst_n24_k50: f64,
    pub c4_ur_worst_eps02: Vec<f64>,
    pub c4_ap_required_gaps_eps02: Vec<u64>,
    pub c4_ap_horizons: Vec<u64>,
}

pub fn golden() -> &'static Golden {
    static G: OnceLock<Golden> = OnceLock::new();
    G.get_or_init(|| serde_json::from_str(include_str!("../tests/golden/example63.json")).expect("golden file parses"))
}

fn default_system() -> &'static System {
    static S: OnceLock<System> = OnceLock::new();
    S.get_or_init(|| System::example63(&Example63Config::default()).expect("default configuration is valid"))
}

fn random_subsets(
    carrier: &[Point],
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
    rng: &mut ChaCha8Rng,
) -> Vec<FiniteSet> {
    (0..count)
        .map(|_| {
            let k = rng.gen_range(sizes.clone());
            FiniteSet::new(sample(rng, carrier.len(), k).into_iter().map(|i| carrier[i].clone())).expect("non-empty")
        })
        .collect()
}

pub fn hausdorff_metric_axioms(seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(1);
    let small = System::example63(&Example63Config::staircase(32, 16)).expect("valid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    for (label, system) in [("default", default_system()), ("staircase-32", &small)] {
        let carrier = system.carrier().into_vec();
        let space = system.space();
        for _ in 0..500 {
            let t = random_subsets(&carrier, 3, 1..=8, &mut rng);
            let (a, b, c) = (&t[0], &t[1], &t[2]);
            let h = |x: &FiniteSet, y: &FiniteSet| space.hausdorff(x, y).expect("carrier points");
            let (ab, ba, bc, ac) = (h(a, b), h(b, a), h(b, c), h(a, c));
            let ok = h(a, a) == 0.0 && ab == ba && (ab == 0.0) == (a == b) && ac <= ab + bc + 1e-9;
            if !ok {
                violations += 1;
            }
        }
        out.note(format!("{label}: 500 triples, carrier {}", carrier.len()));
    }
    out.require(violations == 0, format!("violations: {violations} of 1000"));
    out
}

pub fn recurrence_of_c() -> CheckOutcome {
    let mut out = CheckOutcome::new(2);
    let f = default_system();
    let mut run = || -> anyhow::Result<()> {
        let c = f.builtin_set(&Builtin::C { depth: 4 })?;
        let series = return_values(f, &c, 1..65537)?;
        let v: Vec<f64> = [4usize, 16, 256].iter().map(|&n| series[n - 1]).collect();
        let closed: Vec<f64> = [4u64, 16, 256]
            .iter()
            .map(|&n| Ok(f.space().hausdorff(&induced_power(f, &c, n)?, &c)?))
            .collect::<anyhow::Result<_>>()?;
        out.require(v == closed, format!("iterated {v:?} equals closed form"));
        out.require(v[0] > v[1] && v[1] > v[2], "strictly decreasing");
        let g = golden().c4_returns[1];
        out.require((v[1] - g).abs() <= 1e-3, format!("n = 16: {} vs oracle {g}", v[1]));
        out.note(format!("d_H(F^65536(C), C) = {}", series[65535]));
        Ok(())
    };
    match run() {
        Ok(()) => out,
        Err(e) => CheckOutcome::error(2, e),
    }
}

pub fn non_recurrence_of_d() -> CheckOutcome {
    let mut out = CheckOutcome::new(3);
    let f = default_system();
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let d = f.builtin_set(&Builtin::D { max_level: 32 })?;
        let min = return_values(f, &d, 1..17)?.into_iter().fold(f64::INFINITY, f64::min);
        out.require(min >= 1.9, format!("min = {min}"));
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(3, e);
    }
    out
}

pub fn uniform_recurrence_of_h() -> CheckOutcome {
    let mut out = CheckOutcome::new(4);
    let f = default_system();
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let h = f.builtin_set(&Builtin::H {
            max_level: 24,
            mesh: 256,
        })?;
        match ur_verify(f, &h, 0.3, 24, 50)? {
            Ok(cert) => {
                out.require(true, format!("N = 24, K = 50, max observed {}", cert.max_observed));
                out.require(cert.reverify(f, &h)?, "certificate re-verifies");
            }
            Err(worst) => out.require(false, format!("N = 24 fails with worst {worst}")),
        }
        if let UrOutcome::Certified(c) = ur_certificate(f, &h, 0.3, 24, 50)? {
            out.note(format!("smallest certifying N = {}", c.step));
        }
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(4, e);
    }
    out
}

pub fn c_not_almost_periodic() -> CheckOutcome {
    let mut out = CheckOutcome::new(5);
    let f = default_system();
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let c = f.builtin_set(&Builtin::C { depth: 4 })?;
        match ur_certificate(f, &c, 0.2, 64, 64)? {
            UrOutcome::Certified(cert) => out.require(false, format!("unexpected certificate {cert:?}")),
            UrOutcome::Absent { worst, .. } => {
                let best = worst.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
                out.require(true, format!("no certificate; smallest per-N worst {best}"));
            }
        }
        let horizons = &golden().c4_ap_horizons;
        let mut gaps = Vec::new();
        for &t in horizons {
            gaps.push(required_gap(&return_times(f, &c, 0.2, t)?, t));
            let ap = ap_certificate(f, &c, 0.2, 64, t)?;
            out.require(ap.certificate().is_none(), format!("horizon {t}: no gap <= 64"));
        }
        out.require(
            gaps.windows(2).all(|w| w[0] < w[1]),
            format!("required gaps {gaps:?} at {horizons:?}"),
        );
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(5, e);
    }
    out
}

fn subset_of(n: usize, mask: u32) -> FiniteSet {
    FiniteSet::new((0..n).filter(|i| mask & (1 << i) != 0).map(Point::Abstract)).expect("non-empty mask")
}

/// Criteria 6 and 7 share the enumeration; this returns both verdicts.
pub fn corpus_checks(seed: u64) -> (CheckOutcome, CheckOutcome) {
    let mut wi = CheckOutcome::new(6);
    let mut cyc = CheckOutcome::new(7);
    let corpus = permutation_corpus(10, seed);
    let (mut subsets, mut agree, mut ict_count, mut cycle_ok) = (0usize, 0usize, 0usize, 0usize);
    let mut violations: Vec<String> = Vec::new();
    for entry in &corpus {
        let f = &entry.system;
        let n = f.carrier_len();
        for mask in 1u32..(1 << n) {
            let s = subset_of(n, mask);
            let g = match hyperlab_core::chains::build_digraph(f, &s, 0.0) {
                Ok(g) => g,
                Err(e) => return (CheckOutcome::error(6, &e), CheckOutcome::error(7, e)),
            };
            subsets += 1;
            let ict = g.is_ict();
            if g.weak_incompressibility().ok() == Some(ict) {
                agree += 1;
            } else if violations.len() < 5 {
                violations.push(format!("{} subset {mask:#b}", f.descriptor()));
            }
            if ict {
                ict_count += 1;
                match component_cycle(f, &s, 0.0) {
                    Ok(d) if single_cycle(&d.cycle_order) && divides(d.period, d.period_lcm(f).ok().flatten()) => {
                        cycle_ok += 1
                    }
                    Ok(d) => violations.push(format!("{}: bad decomposition {d:?}", f.descriptor())),
                    Err(e) => violations.push(format!("{} subset {mask:#b}: {e}", f.descriptor())),
                }
            }
        }
    }
    wi.note(format!("{} systems", corpus.len()));
    wi.require(corpus.len() >= 20, "at least 20 systems");
    wi.require(agree == subsets, format!("agreement on {agree} of {subsets} subsets"));
    cyc.require(
        cycle_ok == ict_count,
        format!("{cycle_ok} of {ict_count} ICT corpus subsets decompose"),
    );

    // rotating levels below and above their neighbour gap
    let f = default_system();
    for n in [4u64, 16, 256] {
        let gap = 2.0 * (std::f64::consts::PI / n as f64).sin();
        let u = f.level_orbit(n).expect("tower level");
        for (eps, expected) in [(0.5 * gap, n as usize), (1.5 * gap, 1)] {
            match component_cycle(f, &u, eps) {
                Ok(d) => cyc.require(
                    d.period == expected && single_cycle(&d.cycle_order) && divides(d.period, Some(n)),
                    format!("U_{n} at eps {eps:.4}: period {}", d.period),
                ),
                Err(e) => cyc.require(false, format!("U_{n} at eps {eps:.4}: {e}")),
            }
        }
    }
    let mixed = f
        .level_orbit(4)
        .and_then(|a| Ok(a.union(&f.level_orbit(16)?).union(&f.circle_points(256)?)))
        .expect("tower levels");
    match component_cycle(f, &mixed, 0.3) {
        Ok(d) => cyc.require(
            d.period == 1,
            format!("U_4 + U_16 + mesh at eps 0.3: period {}", d.period),
        ),
        Err(e) => cyc.require(false, format!("U_4 + U_16 + mesh: {e}")),
    }
    cyc.require(
        violations.is_empty(),
        format!("violation reports: {}", violations.len()),
    );
    for v in violations.iter().take(5) {
        cyc.note(v.clone());
    }
    (wi, cyc)
}

fn single_cycle(order: &[usize]) -> bool {
    let mut seen = vec![false; order.len()];
    let mut c = 0;
    for _ in 0..order.len() {
        if seen[c] {
            return false;
        }
        seen[c] = true;
        c = order[c];
    }
    c == 0 && seen.iter().all(|&b| b)
}

fn divides(period: usize, lcm: Option<u64>) -> bool {
    lcm.is_some_and(|l| l % period as u64 == 0)
}

fn full_hyperspace(n: usize) -> SetFamily {
    SetFamily::from_members((1u32..(1 << n)).map(|m| subset_of(n, m)).collect(), 1e-9)
}

pub fn zero_entropy_growth(seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new(8);
    let f = default_system();
    let carrier = f.carrier().into_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    let family = SetFamily::from_members(random_subsets(&carrier, 256, 1..=4, &mut rng), 1e-9);
    match entropy_slope(f, &family, 64, 0.05) {
        Ok(r) => {
            let first = r.counts.first().map_or(0, |c| c.1);
            let last = r.counts.last().map_or(0, |c| c.1);
            out.require(
                r.entropy_zero_consistent(),
                format!("slope {} (r(1) = {first}, r(64) = {last})", r.slope),
            );
        }
        Err(e) => return CheckOutcome::error(8, e),
    }
    let identity = System::from_permutation(5, (0..5).collect(), DistanceTable::discrete(5)).expect("identity");
    let cycles = System::from_permutation(7, vec![1, 2, 3, 0, 5, 6, 4], DistanceTable::discrete(7)).expect("cycles");
    for (label, s, n) in [("identity", identity, 5usize), ("4+3 cycles", cycles, 7)] {
        match entropy_slope(&s, &full_hyperspace(n), 32, 0.5) {
            Ok(r) => out.require(
                r.is_constant() && r.slope == 0.0,
                format!("{label} control: constant count {}", r.counts[0].1),
            ),
            Err(e) => out.require(false, format!("{label}: {e}")),
        }
    }
    out
}

/// Angles `(192 + 3j) / 256`, `j < 20`: pairwise chord above 0.07 and more
/// than 0.1 away from `C`.
pub fn scrambled_anchors() -> Vec<Point> {
    (0..20).map(|j| Point::on_circle(192 + 3 * j, 256)).collect()
}

pub fn scrambled_family_check() -> CheckOutcome {
    let mut out = CheckOutcome::new(9);
    let f = default_system();
    let params = PairParams {
        horizon: 1 << 16,
        tail_fraction: 0.25,
        eps_prox: 0.05,
        delta_dist: 0.1,
    };
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let c = f.builtin_set(&Builtin::C { depth: 4 })?;
        let fam = parallel::scrambled_family(f, &c, &scrambled_anchors(), 20, &params)?;
        out.require(fam.members.len() == 20, format!("{} members", fam.members.len()));
        out.require(fam.pairs.len() == 190, format!("{} pairs", fam.pairs.len()));
        let ly = fam.pairs.iter().filter(|p| p.verdict.li_yorke_at_scale).count();
        out.require(ly == fam.pairs.len(), format!("{ly} pairs li_yorke_at_scale"));
        let worst_inf = fam.pairs.iter().map(|p| p.verdict.liminf_proxy).fold(0.0, f64::max);
        let least_sup = fam
            .pairs
            .iter()
            .map(|p| p.verdict.limsup_proxy)
            .fold(f64::INFINITY, f64::min);
        out.note(format!("max liminf proxy {worst_inf}, min limsup proxy {least_sup}"));
        out.require(fam.all_recurrent(), "every member returns within 0.05");
        let checked: usize = fam.relation.iter().map(|r| r.checked).sum();
        out.require(
            fam.relation_holds(),
            format!("relation exact at {checked} member-times"),
        );
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(9, e);
    }
    out
}

pub fn asymptotic_containment() -> CheckOutcome {
    let mut out = CheckOutcome::new(10);
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let f = System::example63(&Example63Config::staircase(512, 256))?;
        let d = f.builtin_set(&Builtin::D { max_level: 512 })?;
        let h = f.builtin_set(&Builtin::H {
            max_level: 512,
            mesh: 256,
        })?;
        let params = PairParams {
            horizon: 512,
            tail_fraction: 0.25,
            eps_prox: 0.05,
            delta_dist: 0.5,
        };
        let v = pair_classify(&f, &d, &h, &params)?;
        out.require(
            v.asymptotic_at_scale,
            format!("levels <= 512, horizon 512: limsup proxy {} < 0.05", v.limsup_proxy),
        );
        let mut truncations = 0;
        for level in [1u64, 2, 8, 16, 32, 64, 128, 512] {
            for mesh in [1u64, 4, 16, 256] {
                let g = System::example63(&Example63Config::staircase(level, mesh))?;
                let d = g.builtin_set(&Builtin::D { max_level: level })?;
                let h = g.builtin_set(&Builtin::H { max_level: level, mesh })?;
                if !d.is_subset(&h) {
                    out.require(false, format!("D not inside H at level {level}, mesh {mesh}"));
                }
                truncations += 1;
            }
        }
        out.require(true, format!("D subset of H in {truncations} truncations"));
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(10, e);
    }
    out
}

pub fn odometer_laws() -> CheckOutcome {
    let mut out = CheckOutcome::new(11);
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        for bases in [vec![2u64, 2, 2], vec![3, 2]] {
            let all = OdometerAddress::all(&bases)?;
            let zero = OdometerAddress::zero(bases.clone())?;
            let mut ok = true;
            for x in &all {
                ok &= odo_add(x, &zero)? == *x;
                for y in &all {
                    let xy = odo_add(x, y)?;
                    ok &= xy == odo_add(y, x)?;
                    for z in &all {
                        ok &= odo_add(&xy, z)? == odo_add(x, &odo_add(y, z)?)?;
                    }
                }
            }
            out.require(ok, format!("{bases:?}: associative, commutative, zero is the identity"));
        }
        for bases in [
            vec![2u64],
            vec![3],
            vec![2, 2],
            vec![3, 2],
            vec![2, 2, 2],
            vec![2, 3, 4],
            vec![4, 4, 16],
        ] {
            let m: u64 = bases.iter().product();
            let zero = OdometerAddress::zero(bases.clone())?;
            let mut seen = BTreeSet::new();
            let mut x = zero.clone();
            for _ in 0..m {
                seen.insert(x.clone());
                x = f_alpha(&x);
            }
            out.require(
                seen.len() as u64 == m && x == zero,
                format!("{bases:?}: zero orbit visits {} of {m}", seen.len()),
            );
            if bases.len() <= 3 && m <= 24 {
                let all = OdometerAddress::all(&bases)?;
                let mut metric = true;
                for x in &all {
                    for y in &all {
                        let d = d_alpha(x, y)?;
                        metric &= (d == 0.0) == (x == y) && d == d_alpha(y, x)?;
                        for z in &all {
                            metric &= d_alpha(x, z)? <= d + d_alpha(y, z)?;
                        }
                    }
                }
                out.require(metric, format!("{bases:?}: d_alpha metric axioms"));
            }
            let s = odometer_system(&bases)?;
            let fam = omega_sample(&s, &FiniteSet::singleton(Point::Abstract(0)), 0, m, 1e-9)?;
            let sig = signature_match(&fam, &bases, &s, 1e-9)?;
            out.require(sig.verified_cyclic, format!("{bases:?}: signature self-test"));
        }
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(11, e);
    }
    out
}

pub fn unique_minimal_set() -> CheckOutcome {
    let mut out = CheckOutcome::new(12);
    let f = default_system();
    let run = |out: &mut CheckOutcome| -> anyhow::Result<()> {
        let c = f.builtin_set(&Builtin::C { depth: 4 })?;
        let fam = omega_sample(f, &c, 0, 256, 0.05)?;
        out.note(format!("{} sample members", fam.len()));
        let rep = minimal_unique_check(&fam, f, 0.05)?;
        out.require(
            rep.minimal.len() == 1 && rep.unique,
            format!("{} minimal sub-families", rep.minimal.len()),
        );
        let sig = signature_match(&fam, &[4, 4, 16], f, 0.05)?;
        out.require(
            sig.verified_cyclic,
            format!("bases (4, 4, 16): cycle length {:?}", sig.period),
        );
        Ok(())
    };
    if let Err(e) = run(&mut out) {
        return CheckOutcome::error(12, e);
    }
    out
}

/// Runs one check by number (1-based).
pub fn run_check(id: u8, seed: u64) -> CheckOutcome {
    match id {
        1 => hausdorff_metric_axioms(seed),
        2 => recurrence_of_c(),
        3 => non_recurrence_of_d(),
        4 => uniform_recurrence_of_h(),
        5 => c_not_almost_periodic(),
        6 => corpus_checks(seed).0,
        7 => corpus_checks(seed).1,
        8 => zero_entropy_growth(seed),
        9 => scrambled_family_check(),
        10 => asymptotic_containment(),
        11 => odometer_laws(),
        12 => unique_minimal_set(),
        _ => CheckOutcome::error(1, format!("no check numbered {id}")),
    }
}

/// All twelve checks, in order. Independent checks run in parallel.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    use rayon::prelude::*;
    let mut out: Vec<CheckOutcome> = [1u8, 2, 3, 4, 5, 8, 9, 10, 11, 12]
        .par_iter()
        .map(|&id| run_check(id, seed))
        .collect();
    let (wi, cyc) = corpus_checks(seed);
    out.extend([wi, cyc]);
    out.sort_by_key(|c| c.id);
    out
}

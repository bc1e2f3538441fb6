//! One function per experiment: read parameters, compute, write reports.

use hyperlab_core::chains::{build_digraph, component_cycle, ChainError, WI_CAP};
use hyperlab_core::classifiers::minimal_unique_check;
use hyperlab_core::classifiers::{
    ap_certificate, pair_classify, pair_series, recurrence_certificate, required_gap, return_times, ur_certificate,
    ur_verify, PairParams, UrOutcome,
};
use hyperlab_core::entropy::entropy_slope;
use hyperlab_core::hyperspace::{omega_sample, orbit_series, SetFamily};
use hyperlab_core::odometer::signature_match;
use hyperlab_core::systems::Builtin;
use hyperlab_core::{FiniteSet, Point, System};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{num, ReportWriter};
use crate::scenario::{Experiment, LoadedScenario, SetSpec};
use crate::{parallel, theorems, Error};

/// What a finished run reports back to the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// A property the theory guarantees was violated at the tested scale.
    Violated(Vec<String>),
}

pub struct Context<'a> {
    pub scenario: &'a LoadedScenario,
    pub system: &'a System,
    pub seed: u64,
    pub tolerance: f64,
    pub writer: &'a mut ReportWriter,
}

fn c4() -> SetSpec {
    SetSpec::Builtin(Builtin::C { depth: 4 })
}

fn cfg<E: std::fmt::Display>(e: E) -> Error {
    Error::Config(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSeriesParams {
    pub set: SetSpec,
    pub horizon: u64,
}

impl Default for OrbitSeriesParams {
    fn default() -> Self {
        Self {
            set: c4(),
            horizon: 300,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyPairParams {
    pub a: SetSpec,
    pub b: SetSpec,
    pub horizon: u64,
    pub tail_fraction: f64,
    pub eps_prox: f64,
    pub delta_dist: f64,
}

impl Default for ClassifyPairParams {
    fn default() -> Self {
        Self {
            a: SetSpec::Builtin(Builtin::D { max_level: 64 }),
            b: SetSpec::Builtin(Builtin::H {
                max_level: 64,
                mesh: 256,
            }),
            horizon: 64,
            tail_fraction: 0.25,
            eps_prox: 0.05,
            delta_dist: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceScanParams {
    pub set: SetSpec,
    pub eps: f64,
    pub horizon: u64,
}

impl Default for RecurrenceScanParams {
    fn default() -> Self {
        Self {
            set: c4(),
            eps: 0.1,
            horizon: 300,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UrScanParams {
    pub set: SetSpec,
    pub eps: f64,
    pub n_max: u64,
    pub multiples: u64,
    /// Check only this progression step instead of scanning `1..=n_max`.
    #[serde(default)]
    pub step: Option<u64>,
}

impl Default for UrScanParams {
    fn default() -> Self {
        Self {
            set: SetSpec::Builtin(Builtin::H {
                max_level: 24,
                mesh: 256,
            }),
            eps: 0.3,
            n_max: 64,
            multiples: 50,
            step: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApScanParams {
    pub set: SetSpec,
    pub eps: f64,
    pub gap_max: u64,
    pub horizons: Vec<u64>,
}

impl Default for ApScanParams {
    fn default() -> Self {
        Self {
            set: c4(),
            eps: 0.2,
            gap_max: 64,
            horizons: vec![4096, 8192, 16384, 32768],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainParams {
    pub set: SetSpec,
    pub eps: f64,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            set: SetSpec::LevelOrbit(16),
            eps: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AnchorSpec {
    Points(Vec<Point>),
    /// Circle points `(start + stride * j) / mesh`.
    Mesh {
        mesh: u64,
        start: u64,
        stride: u64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScrambledParams {
    pub base: SetSpec,
    pub anchors: AnchorSpec,
    pub count: usize,
    pub horizon: u64,
    pub tail_fraction: f64,
    pub eps_prox: f64,
    pub delta_dist: f64,
}

impl Default for ScrambledParams {
    fn default() -> Self {
        Self {
            base: c4(),
            anchors: AnchorSpec::Mesh {
                mesh: 256,
                start: 192,
                stride: 3,
            },
            count: 20,
            horizon: 1 << 16,
            tail_fraction: 0.25,
            eps_prox: 0.05,
            delta_dist: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdometerParams {
    pub set: SetSpec,
    pub burn_in: u64,
    pub horizon: u64,
    pub eps: f64,
    pub bases: Vec<u64>,
}

impl Default for OdometerParams {
    fn default() -> Self {
        Self {
            set: c4(),
            burn_in: 0,
            horizon: 256,
            eps: 0.05,
            bases: vec![4, 4, 16],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Sets(Vec<SetSpec>),
    /// `count` seeded random subsets of the carrier with sizes in
    /// `min_size..=max_size`.
    Random {
        count: usize,
        min_size: usize,
        max_size: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyParams {
    pub family: FamilySpec,
    pub eps: f64,
    pub n_max: u64,
}

impl Default for EntropyParams {
    fn default() -> Self {
        Self {
            family: FamilySpec::Random {
                count: 256,
                min_size: 1,
                max_size: 4,
            },
            eps: 0.05,
            n_max: 64,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    /// Check numbers to run; all when absent.
    #[serde(default)]
    pub checks: Option<Vec<u8>>,
}

pub fn run(ctx: &mut Context<'_>) -> Result<Status, Error> {
    match ctx.scenario.scenario.experiment {
        Experiment::OrbitSeries => orbit(ctx),
        Experiment::ClassifyPair => classify(ctx),
        Experiment::RecurrenceScan => recurrence(ctx),
        Experiment::UrScan => ur(ctx),
        Experiment::ApScan => ap(ctx),
        Experiment::ChainAnalyze => chain(ctx),
        Experiment::ComponentCycle => cycle(ctx),
        Experiment::ScrambledFamily => scrambled(ctx),
        Experiment::OdometerSignature => odometer(ctx),
        Experiment::EntropyGrowth => entropy(ctx),
        Experiment::VerifyTheorems => verify(ctx),
    }
}

#[derive(Serialize)]
struct OrbitSummary<'a> {
    set: &'a FiniteSet,
    horizon: u64,
    min: Option<(u64, f64)>,
}

fn orbit(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: OrbitSeriesParams = ctx.scenario.parameters()?;
    let a = p.set.resolve(ctx.system)?;
    let stats = orbit_series(ctx.system, &a, p.horizon).map_err(cfg)?;
    ctx.writer.csv(
        "orbit_series.csv",
        &["n", "dH"],
        stats.iter().map(|(n, v)| [n.to_string(), num(v)]),
    )?;
    ctx.writer.json(
        "orbit_series.json",
        &OrbitSummary {
            set: &a,
            horizon: p.horizon,
            min: stats.min(),
        },
    )?;
    Ok(Status::Ok)
}

fn classify(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: ClassifyPairParams = ctx.scenario.parameters()?;
    let a = p.a.resolve(ctx.system)?;
    let b = p.b.resolve(ctx.system)?;
    let params = PairParams {
        horizon: p.horizon,
        tail_fraction: p.tail_fraction,
        eps_prox: p.eps_prox,
        delta_dist: p.delta_dist,
    };
    let verdict = pair_classify(ctx.system, &a, &b, &params).map_err(cfg)?;
    let tail = params.tail();
    let series = pair_series(ctx.system, &a, &b, tail.clone()).map_err(cfg)?;
    ctx.writer.csv(
        "pair_tail.csv",
        &["n", "dH"],
        tail.zip(series).map(|(n, v)| [n.to_string(), num(v)]),
    )?;
    ctx.writer.json("pair_verdict.json", &verdict)?;
    Ok(Status::Ok)
}

fn recurrence(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: RecurrenceScanParams = ctx.scenario.parameters()?;
    let a = p.set.resolve(ctx.system)?;
    let r = recurrence_certificate(ctx.system, &a, p.eps, p.horizon).map_err(cfg)?;
    ctx.writer.json("recurrence.json", &r)?;
    Ok(Status::Ok)
}

fn ur(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: UrScanParams = ctx.scenario.parameters()?;
    let a = p.set.resolve(ctx.system)?;
    let outcome = match p.step {
        Some(step) => match ur_verify(ctx.system, &a, p.eps, step, p.multiples).map_err(cfg)? {
            Ok(cert) => UrOutcome::Certified(cert),
            Err(w) => UrOutcome::Absent {
                eps: p.eps,
                multiples: p.multiples,
                worst: vec![(step, w)],
            },
        },
        None => ur_certificate(ctx.system, &a, p.eps, p.n_max, p.multiples).map_err(cfg)?,
    };
    if let UrOutcome::Absent { worst, .. } = &outcome {
        ctx.writer.csv(
            "ur_worst.csv",
            &["N", "worst"],
            worst.iter().map(|(n, w)| [n.to_string(), num(*w)]),
        )?;
    }
    ctx.writer.json("ur_scan.json", &outcome)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ApRow {
    horizon: u64,
    required_gap: u64,
    outcome: hyperlab_core::classifiers::ApOutcome,
}

fn ap(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: ApScanParams = ctx.scenario.parameters()?;
    let a = p.set.resolve(ctx.system)?;
    let mut rows = Vec::new();
    for &t in &p.horizons {
        let outcome = ap_certificate(ctx.system, &a, p.eps, p.gap_max, t).map_err(cfg)?;
        let gap = required_gap(&return_times(ctx.system, &a, p.eps, t).map_err(cfg)?, t);
        rows.push(ApRow {
            horizon: t,
            required_gap: gap,
            outcome,
        });
    }
    ctx.writer.csv(
        "ap_gaps.csv",
        &["horizon", "required_gap"],
        rows.iter().map(|r| [r.horizon.to_string(), r.required_gap.to_string()]),
    )?;
    ctx.writer.json("ap_scan.json", &rows)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ChainSummary {
    eps: f64,
    vertices: usize,
    edges: usize,
    ict: bool,
    weakly_incompressible: Option<bool>,
}

fn chain(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: ChainParams = ctx.scenario.parameters()?;
    let s = p.set.resolve(ctx.system)?;
    let g = build_digraph(ctx.system, &s, p.eps).map_err(cfg)?;
    let ict = g.is_ict();
    let wi = if g.len() <= WI_CAP {
        Some(g.weak_incompressibility().map_err(cfg)?)
    } else {
        None
    };
    ctx.writer.text("chain.dot", &g.to_dot())?;
    ctx.writer.json(
        "chain.json",
        &ChainSummary {
            eps: p.eps,
            vertices: g.len(),
            edges: g.edge_count(),
            ict,
            weakly_incompressible: wi,
        },
    )?;
    match wi {
        Some(w) if w != ict => Ok(Status::Violated(vec![format!(
            "ICT = {ict} but weak incompressibility = {w}"
        )])),
        _ => Ok(Status::Ok),
    }
}

fn cycle(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: ChainParams = ctx.scenario.parameters()?;
    let s = p.set.resolve(ctx.system)?;
    match component_cycle(ctx.system, &s, p.eps) {
        Ok(d) => {
            ctx.writer.json("decomposition.json", &d)?;
            Ok(Status::Ok)
        }
        Err(e @ (ChainError::Straddle { .. } | ChainError::NotSingleCycle { .. })) => {
            ctx.writer.json("violation.json", &e.to_string())?;
            Ok(Status::Violated(vec![e.to_string()]))
        }
        Err(e) => Err(cfg(e)),
    }
}

fn scrambled(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: ScrambledParams = ctx.scenario.parameters()?;
    let base = p.base.resolve(ctx.system)?;
    let anchors = match &p.anchors {
        AnchorSpec::Points(pts) => pts.clone(),
        AnchorSpec::Mesh { mesh, start, stride } => {
            if *mesh == 0 {
                return Err(Error::Config("anchor mesh must be positive".into()));
            }
            (0..p.count as u64)
                .map(|j| Point::on_circle(i128::from(start + stride * j), i128::from(*mesh)))
                .collect()
        }
    };
    let params = PairParams {
        horizon: p.horizon,
        tail_fraction: p.tail_fraction,
        eps_prox: p.eps_prox,
        delta_dist: p.delta_dist,
    };
    let fam = parallel::scrambled_family(ctx.system, &base, &anchors, p.count, &params).map_err(cfg)?;
    ctx.writer.csv(
        "pairs.csv",
        &["i", "j", "liminf_proxy", "limsup_proxy", "li_yorke_at_scale"],
        fam.pairs.iter().map(|e| {
            [
                e.i.to_string(),
                e.j.to_string(),
                num(e.verdict.liminf_proxy),
                num(e.verdict.limsup_proxy),
                e.verdict.li_yorke_at_scale.to_string(),
            ]
        }),
    )?;
    ctx.writer.json("scrambled_family.json", &fam)?;
    if fam.relation_holds() {
        Ok(Status::Ok)
    } else {
        Ok(Status::Violated(vec![
            "return series relation fails for some member".into()
        ]))
    }
}

#[derive(Serialize)]
struct OdometerReport {
    members: usize,
    minimal: hyperlab_core::classifiers::MinimalReport,
    signature: hyperlab_core::OdometerSignature,
}

fn odometer(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: OdometerParams = ctx.scenario.parameters()?;
    let a = p.set.resolve(ctx.system)?;
    let fam = omega_sample(ctx.system, &a, p.burn_in, p.horizon, p.eps).map_err(cfg)?;
    let minimal = minimal_unique_check(&fam, ctx.system, p.eps).map_err(cfg)?;
    let signature = signature_match(&fam, &p.bases, ctx.system, p.eps).map_err(cfg)?;
    ctx.writer.json(
        "omega_sample.json",
        &crate::io::FamilyFile {
            members: fam.members().to_vec(),
            times: fam.times().to_vec(),
        },
    )?;
    ctx.writer.json(
        "odometer_signature.json",
        &OdometerReport {
            members: fam.len(),
            minimal,
            signature,
        },
    )?;
    Ok(Status::Ok)
}

fn entropy(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: EntropyParams = ctx.scenario.parameters()?;
    let members = match &p.family {
        FamilySpec::Sets(specs) => specs
            .iter()
            .map(|s| s.resolve(ctx.system))
            .collect::<Result<Vec<_>, _>>()?,
        FamilySpec::Random {
            count,
            min_size,
            max_size,
        } => {
            let carrier = ctx.system.carrier().into_vec();
            if *min_size == 0 || min_size > max_size || *max_size > carrier.len() {
                return Err(Error::Config(format!(
                    "random family sizes {min_size}..={max_size} do not fit a carrier of {}",
                    carrier.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            (0..*count)
                .map(|_| {
                    let k = rng.gen_range(*min_size..=*max_size);
                    let idx = sample(&mut rng, carrier.len(), k);
                    FiniteSet::new(idx.into_iter().map(|i| carrier[i].clone())).map_err(cfg)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let family = SetFamily::from_members(members, ctx.tolerance);
    let report = entropy_slope(ctx.system, &family, p.n_max, p.eps).map_err(cfg)?;
    ctx.writer.csv(
        "spanning_counts.csv",
        &["n", "count"],
        report.counts.iter().map(|(n, c)| [n.to_string(), c.to_string()]),
    )?;
    ctx.writer.json("spanning_report.json", &report)?;
    if report.entropy_zero_consistent() {
        Ok(Status::Ok)
    } else {
        Ok(Status::Violated(vec![format!(
            "spanning-count slope {} exceeds {}",
            report.slope,
            hyperlab_core::entropy::ZERO_SLOPE_THRESHOLD
        )]))
    }
}

fn verify(ctx: &mut Context<'_>) -> Result<Status, Error> {
    let p: VerifyParams = ctx.scenario.parameters()?;
    let outcomes = match &p.checks {
        None => theorems::run_all(ctx.seed),
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|&&i| !(1..=12).contains(&i)) {
                return Err(Error::Config(format!("no check numbered {bad}; checks are 1..=12")));
            }
            ids.iter().map(|&i| theorems::run_check(i, ctx.seed)).collect()
        }
    };
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
        for d in &o.details {
            text.push_str("       ");
            text.push_str(d);
            text.push('\n');
        }
    }
    ctx.writer.text("traceability.txt", &text)?;
    ctx.writer.json("traceability.json", &outcomes)?;
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.line()).collect();
    if failed.is_empty() {
        Ok(Status::Ok)
    } else {
        Ok(Status::Violated(failed))
    }
}

//! Rayon drivers over the sequential building blocks of the core crate.
//! Results are collected in index order, so output does not depend on the
//! number of worker threads.

use hyperlab_core::classifiers::{
    pair_classify, recurrence_certificate, relation_check, select_anchors, ClassifierError, PairEntry, PairParams,
    ScrambledFamily,
};
use hyperlab_core::hyperspace::return_values;
use hyperlab_core::{FiniteSet, Point, System};
use rayon::prelude::*;

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
    let per_member: Vec<_> = anchors
        .par_iter()
        .zip(members.par_iter())
        .map(|(z, m)| {
            Ok((
                recurrence_certificate(system, m, params.eps_prox, params.horizon)?,
                relation_check(system, base, z, &base_series)?,
            ))
        })
        .collect::<Result<_, ClassifierError>>()?;
    let (recurrence, relation) = per_member.into_iter().unzip();
    let index: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
        .collect();
    let pairs = index
        .par_iter()
        .map(|&(i, j)| {
            let verdict = pair_classify(system, &members[i], &members[j], params)?;
            Ok(PairEntry { i, j, verdict })
        })
        .collect::<Result<Vec<_>, ClassifierError>>()?;
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

#[cfg(test)]
mod tests {
    use super::*;
    use hyperlab_core::systems::Builtin;
    use hyperlab_core::Example63Config;

    #[test]
    fn matches_the_sequential_version() {
        let f = System::example63(&Example63Config::with_depth(3, 64)).unwrap();
        let c = f.builtin_set(&Builtin::C { depth: 3 }).unwrap();
        let anchors: Vec<Point> = (40..64).step_by(4).map(|k| Point::on_circle(k, 64)).collect();
        let params = PairParams {
            horizon: 512,
            tail_fraction: 0.5,
            eps_prox: 0.05,
            delta_dist: 0.1,
        };
        let seq = hyperlab_core::classifiers::scrambled_family(&f, &c, &anchors, 5, &params).unwrap();
        let par = scrambled_family(&f, &c, &anchors, 5, &params).unwrap();
        assert_eq!(seq, par);
        assert_eq!(par.pairs.len(), 10);
    }
}

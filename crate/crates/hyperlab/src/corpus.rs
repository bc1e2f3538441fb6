//! The permutation test corpus: one system per cycle type on up to ten
//! points, with point labels shuffled by a seeded generator.

use hyperlab_core::{DistanceTable, System};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Partitions of `n` into non-increasing parts.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A permutation of `0..n` with the given cycle lengths, relabelled by
/// `labels` (`labels[i]` is the new name of position `i`).
pub fn permutation_with_cycles(cycles: &[usize], labels: &[usize]) -> Vec<usize> {
    let n: usize = cycles.iter().sum();
    let mut images = vec![0; n];
    let mut start = 0;
    for &len in cycles {
        for k in 0..len {
            let from = labels[start + k];
            let to = labels[start + (k + 1) % len];
            images[from] = to;
        }
        start += len;
    }
    images
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub cycle_type: Vec<usize>,
    pub system: System,
}

/// Every cycle type on `1..=max_points` points, discrete metric.
pub fn permutation_corpus(max_points: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_points {
        for cycle_type in partitions(n) {
            let mut labels: Vec<usize> = (0..n).collect();
            labels.shuffle(&mut rng);
            let images = permutation_with_cycles(&cycle_type, &labels);
            let system = System::from_permutation(n, images, DistanceTable::discrete(n))
                .expect("cycle construction yields a permutation")
                .with_descriptor(format!("cycles{cycle_type:?}"));
            out.push(CorpusEntry { cycle_type, system });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn corpus_has_the_requested_cycle_types() {
        let corpus = permutation_corpus(10, 1);
        assert_eq!(corpus.len(), 138);
        for entry in &corpus {
            let report = entry.system.validate();
            assert!(report.is_ok());
            let mut lengths: Vec<usize> = Vec::new();
            for (&per, &count) in &report.period_histogram {
                lengths.extend(std::iter::repeat_n(per as usize, count / per as usize));
            }
            lengths.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(lengths, entry.cycle_type);
        }
    }
}

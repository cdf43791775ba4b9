use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tabular::{ClassLabel, Dataset};

/// Fold index of every record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub folds: Vec<usize>,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] != fold).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.folds {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified `k`-fold split. Each class is shuffled with a generator seeded
/// by `seed`, the classes are laid end to end, and position `p` goes to fold
/// `p mod k`. Per-fold class counts therefore differ by at most one.
pub fn stratified_folds(data: &Dataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    stratify(&data.labels()?, k, seed)
}

pub fn stratify(labels: &[ClassLabel], k: usize, seed: u64) -> Result<FoldAssignment> {
    let n = labels.len();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds the {n} records")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(n);
    for class in [ClassLabel::No, ClassLabel::Yes] {
        let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
        if members.is_empty() {
            return Err(Error::SingleClass);
        }
        members.shuffle(&mut rng);
        order.extend(members);
    }
    let mut folds = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % k;
    }
    Ok(FoldAssignment { k, folds })
}

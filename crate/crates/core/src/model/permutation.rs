use crate::error::{usage, Result};

/// Hidden row labeling: row `i` of the unlabeled database becomes row
/// `forward(i)` of the labeled one. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingPermutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl LabelingPermutation {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let m = forward.len();
        let mut inverse = vec![usize::MAX; m];
        for (i, &l) in forward.iter().enumerate() {
            if l >= m {
                return Err(usage!("image {l} of row {i} outside 0..{m}"));
            }
            if inverse[l] != usize::MAX {
                return Err(usage!("rows {} and {i} both map to {l}", inverse[l]));
            }
            inverse[l] = i;
        }
        Ok(Self { forward, inverse })
    }

    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(usage!("index 0 in a 1-based permutation"));
        }
        Self::new(map.iter().map(|l| l - 1).collect())
    }

    pub fn identity(m: usize) -> Self {
        Self {
            forward: (0..m).collect(),
            inverse: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.forward[i]
    }

    pub fn apply_inverse(&self, l: usize) -> usize {
        self.inverse[l]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> Self {
        Self {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

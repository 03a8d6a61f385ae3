use serde::Serialize;

/// Tensor type (contravariant, covariant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Valence {
    V02,
    V03,
    V11,
    V12,
    V13,
}

impl Valence {
    pub fn rank(self) -> usize {
        match self {
            Valence::V02 | Valence::V11 => 2,
            Valence::V03 | Valence::V12 => 3,
            Valence::V13 => 4,
        }
    }
}

/// Dense components at a point, row-major with the upper index first.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorValue {
    valence: Valence,
    dim: usize,
    data: Vec<f64>,
}

impl TensorValue {
    pub fn zeros(valence: Valence, dim: usize) -> Self {
        Self {
            valence,
            dim,
            data: vec![0.0; dim.pow(valence.rank() as u32)],
        }
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(
            idx.len(),
            self.valence.rank(),
            "index count does not match valence"
        );
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let k = self.offset(idx);
        self.data[k] = v;
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    /// Largest absolute componentwise difference.
    pub fn max_diff(&self, other: &TensorValue) -> f64 {
        assert_eq!(
            (self.valence, self.dim),
            (other.valence, other.dim),
            "tensor shapes differ"
        );
        crate::linalg::max_abs(self.data.iter().zip(&other.data).map(|(a, b)| a - b))
    }

    /// Largest absolute component (NaN if any component is NaN).
    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(self.data.iter().copied())
    }
}

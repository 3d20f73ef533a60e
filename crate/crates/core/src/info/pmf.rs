use super::InfoError;

/// Entries below this magnitude count as exact zeros in entropy sums.
pub const ZERO_MASS: f64 = 1e-15;

/// Tolerance on the total mass of a validated [`Pmf`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Dense joint probability mass function over a fixed list of finite
/// variables, stored row-major in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    shape: Vec<usize>,
    values: Vec<f64>,
}

/// Checks a flat tensor against `shape` and wraps it as a [`Pmf`].
///
/// The values are never renormalized: a tensor whose mass is off by more
/// than [`NORMALIZATION_TOL`] is rejected.
pub fn validate_pmf(values: &[f64], shape: &[usize]) -> Result<Pmf, InfoError> {
    Pmf::new(values.to_vec(), shape.to_vec())
}

impl Pmf {
    pub fn new(values: Vec<f64>, shape: Vec<usize>) -> Result<Self, InfoError> {
        let expected: usize = shape.iter().product();
        if expected != values.len() || shape.iter().any(|&s| s == 0) {
            return Err(InfoError::ShapeMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| v.is_nan() || v < -ZERO_MASS)
        {
            return Err(InfoError::NegativeMass { index, value });
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(InfoError::NotNormalized { sum });
        }
        Ok(Self { shape, values })
    }

    /// Builds a pmf whose normalization the caller already guarantees.
    pub(crate) fn from_parts_unchecked(values: Vec<f64>, shape: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), shape.iter().product::<usize>());
        Self { shape, values }
    }

    /// Uniform pmf over the given alphabet sizes.
    pub fn uniform(shape: &[usize]) -> Self {
        let len: usize = shape.iter().product();
        Self::from_parts_unchecked(vec![1.0 / len as f64; len], shape.to_vec())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    /// Sums out every variable not listed in `keep`. The kept variables
    /// stay in their original relative order.
    pub fn marginalize(&self, keep: &[usize]) -> Result<Pmf, InfoError> {
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&index) = kept.iter().find(|&&k| k >= self.rank()) {
            return Err(InfoError::BadIndex {
                index,
                rank: self.rank(),
            });
        }
        Ok(self.marginal_sorted(&kept))
    }

    fn marginal_sorted(&self, kept: &[usize]) -> Pmf {
        let out_shape: Vec<usize> = kept.iter().map(|&k| self.shape[k]).collect();
        if kept.len() == self.rank() {
            return self.clone();
        }
        let out_len: usize = out_shape.iter().product();
        let mut out = vec![0.0; out_len];

        // Stride of each source axis inside the output tensor (0 if summed out).
        let mut out_stride = vec![0usize; self.rank()];
        let mut stride = 1;
        for (&axis, &size) in kept.iter().zip(&out_shape).rev() {
            out_stride[axis] = stride;
            stride *= size;
        }

        let mut digits = vec![0usize; self.rank()];
        let mut target = 0usize;
        for &p in &self.values {
            out[target] += p;
            for axis in (0..self.rank()).rev() {
                digits[axis] += 1;
                target += out_stride[axis];
                if digits[axis] < self.shape[axis] {
                    break;
                }
                target -= out_stride[axis] * digits[axis];
                digits[axis] = 0;
            }
        }
        Pmf::from_parts_unchecked(out, out_shape)
    }

    /// Shannon entropy in bits, with 0·log 0 = 0.
    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.values)
    }

    /// Entropy of the marginal over `vars`.
    pub fn entropy_of(&self, vars: &[usize]) -> Result<f64, InfoError> {
        if vars.is_empty() {
            return Ok(0.0);
        }
        Ok(self.marginalize(vars)?.entropy())
    }
}

/// Σ −p·log2 p over entries above [`ZERO_MASS`].
pub fn entropy_bits(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&p| p > ZERO_MASS)
        .map(|&p| -p * p.log2())
        .sum()
}

fn check_disjoint(rank: usize, sets: [&[usize]; 3]) -> Result<(), InfoError> {
    let mut seen = vec![false; rank];
    for set in sets {
        let mut local = set.to_vec();
        local.sort_unstable();
        local.dedup();
        for index in local {
            if index >= rank {
                return Err(InfoError::BadIndex { index, rank });
            }
            if seen[index] {
                return Err(InfoError::OverlappingSets { index });
            }
            seen[index] = true;
        }
    }
    Ok(())
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut all: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// I(A;B|C) in bits, evaluated as H(A,C) + H(B,C) − H(A,B,C) − H(C).
///
/// Negative round-off is clamped to zero.
pub fn conditional_mutual_information(
    joint: &Pmf,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<f64, InfoError> {
    check_disjoint(joint.rank(), [a, b, c])?;
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let h = |vars: Vec<usize>| -> f64 {
        if vars.is_empty() {
            0.0
        } else {
            joint.marginal_sorted(&vars).entropy()
        }
    };
    let value = h(union(&[a, c])) + h(union(&[b, c])) - h(union(&[a, b, c])) - h(union(&[c]));
    debug_assert!(value > -1e-9, "conditional mutual information {value} far below zero");
    Ok(value.max(0.0))
}

/// Tests A ⟂ B | C. The deviation is I(A;B|C) in bits.
pub fn check_conditional_independence(
    joint: &Pmf,
    a: &[usize],
    b: &[usize],
    c: &[usize],
    tol: f64,
) -> Result<(bool, f64), InfoError> {
    let deviation = conditional_mutual_information(joint, a, b, c)?;
    Ok((deviation <= tol, deviation))
}

//! Small statistics helpers shared by the metric and report modules.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shannon entropy in bits of a distribution given by non-negative counts.
/// Zero counts contribute nothing.
pub fn entropy_bits<T: Scalar>(counts: impl IntoIterator<Item = usize>) -> T {
    let counts: Vec<usize> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return T::zero();
    }
    let total = T::of_usize(total);
    let h = counts
        .into_iter()
        .map(|c| {
            let p = T::of_usize(c) / total;
            -p * p.log2()
        })
        .sum::<T>();
    // -0.0 for a degenerate distribution reads badly in reports.
    h.max(T::zero())
}

/// Pearson correlation coefficient.
///
/// Needs equal lengths of at least 3 and non-zero variance in both inputs.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::Undefined(format!("length mismatch ({} vs {})", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::Undefined(format!("need at least 3 points, have {}", x.len())));
    }
    let n = T::of_usize(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    let mut syy = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::Undefined("zero variance".into()));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    (!values.is_empty()).then(|| values.iter().copied().sum::<T>() / T::of_usize(values.len()))
}

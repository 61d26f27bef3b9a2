//! Small dense-vector helpers on slices.

pub(crate) fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum())
}

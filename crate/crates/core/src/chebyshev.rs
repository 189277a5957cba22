//! Chebyshev polynomials and the graded product basis on the square.

/// `T_0(x), …, T_n(x)`.
pub fn values(x: f64, n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(1.0);
    if n >= 1 {
        t.push(x);
    }
    for k in 1..n {
        t.push(2.0 * x * t[k] - t[k - 1]);
    }
    t
}

/// `T_k`, `T_k'` and `T_k''` for `k = 0..=n`.
pub fn with_derivatives(x: f64, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let t = values(x, n);
    let mut d1 = vec![0.0; n + 1];
    let mut d2 = vec![0.0; n + 1];
    if n >= 1 {
        d1[1] = 1.0;
    }
    for k in 1..n {
        d1[k + 1] = 2.0 * t[k] + 2.0 * x * d1[k] - d1[k - 1];
        d2[k + 1] = 4.0 * d1[k] + 2.0 * x * d2[k] - d2[k - 1];
    }
    (t, d1, d2)
}

/// Exponent pairs `(a, b)` of `T_a(x) T_b(y)` with `a + b ≤ n`, ordered by
/// total degree and, within a degree, by decreasing `a`.
pub fn graded_indices(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for d in 0..=n {
        for a in (0..=d).rev() {
            out.push((a, d - a));
        }
    }
    out
}

/// The basis vector `φ(x, y)` in graded order.
pub fn basis_vector(x: f64, y: f64, n: usize) -> Vec<f64> {
    let tx = values(x, n);
    let ty = values(y, n);
    graded_indices(n)
        .into_iter()
        .map(|(a, b)| tx[a] * ty[b])
        .collect()
}

/// `cos(iπ/m)` with exact mirror symmetry and exact zero at the center.
pub fn lobatto_coordinate(i: usize, m: usize) -> f64 {
    debug_assert!(i <= m && m > 0);
    if 2 * i == m {
        0.0
    } else if 2 * i > m {
        -lobatto_coordinate(m - i, m)
    } else {
        (i as f64 * std::f64::consts::PI / m as f64).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_identity() {
        for &x in &[-1.0, -0.3, 0.0, 0.77, 1.0] {
            let t = values(x, 12);
            let th = f64::acos(x);
            for (k, v) in t.iter().enumerate() {
                assert!((v - (k as f64 * th).cos()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_by_differences() {
        let (x, h) = (0.37, 1e-5);
        let (_, d1, d2) = with_derivatives(x, 9);
        let (tp, tm, t0) = (values(x + h, 9), values(x - h, 9), values(x, 9));
        for k in 0..=9 {
            assert!((d1[k] - (tp[k] - tm[k]) / (2.0 * h)).abs() < 1e-6);
            assert!((d2[k] - (tp[k] - 2.0 * t0[k] + tm[k]) / (h * h)).abs() < 1e-3);
        }
    }

    #[test]
    fn graded_order() {
        assert_eq!(graded_indices(2), vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        assert_eq!(basis_vector(0.5, 0.5, 1), vec![1.0, 0.5, 0.5]);
        assert_eq!(lobatto_coordinate(2, 4), 0.0);
        assert_eq!(lobatto_coordinate(3, 5), -lobatto_coordinate(2, 5));
    }
}

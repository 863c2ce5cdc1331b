use crate::rng::RngStream;

/// Uniform point on `S^n` (length `n + 1`) by normalising a Gaussian vector.
pub fn sample_sphere(n: usize, rng: &mut RngStream) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be at least 1");
    loop {
        let mut v: Vec<f64> = (0..=n).map(|_| rng.normal()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            v.iter_mut().for_each(|x| *x /= norm);
            return v;
        }
    }
}

/// The first `k` coordinates of a uniform point on `S^n`, without drawing the
/// other `n + 1 - k`: their squared norm is a chi-squared variate with
/// `n + 1 - k` degrees of freedom. Same law as the head of [`sample_sphere`].
pub fn sample_sphere_leading(n: usize, k: usize, rng: &mut RngStream) -> Vec<f64> {
    assert!(n >= 1, "sphere dimension must be at least 1");
    assert!(k >= 1 && k <= n + 1, "need 1 <= k <= n + 1");
    loop {
        let mut head: Vec<f64> = (0..k).map(|_| rng.normal()).collect();
        let rest = n + 1 - k;
        let tail = if rest > 0 { rng.chi_squared(rest as f64) } else { 0.0 };
        let norm = (head.iter().map(|x| x * x).sum::<f64>() + tail).sqrt();
        if norm > 0.0 && norm.is_finite() {
            head.iter_mut().for_each(|x| *x /= norm);
            return head;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm() {
        let mut rng = RngStream::new(42, 0);
        for n in [1, 2, 5, 40] {
            for _ in 0..1000 {
                let p = sample_sphere(n, &mut rng);
                assert_eq!(p.len(), n + 1);
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn first_coordinate_centered() {
        let mut rng = RngStream::new(42, 1);
        let n = 1_000_000;
        let mean = (0..n).map(|_| sample_sphere(3, &mut rng)[0]).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn band_on_s2() {
        // P(0 < x1 < 1/2) = 1/4 on S^2.
        let mut rng = RngStream::new(42, 2);
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| {
                let x = sample_sphere(2, &mut rng)[0];
                x > 0.0 && x < 0.5
            })
            .count();
        let f = hits as f64 / n as f64;
        let se = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!((f - 0.25).abs() < 4.0 * se, "{f}");
    }

    #[test]
    fn leading_full_is_a_sphere_point() {
        let mut rng = RngStream::new(42, 3);
        let p = sample_sphere_leading(4, 5, &mut rng);
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

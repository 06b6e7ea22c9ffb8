//! Uniform-grid Newton–Cotes rules.

/// Composite Simpson rule with `intervals` subintervals (rounded up to even).
pub fn simpson<F: FnMut(f64) -> f64>(a: f64, b: f64, intervals: usize, mut f: F) -> f64 {
    let n = even_intervals(intervals);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Trapezoidal rule over `nodes` equally spaced points including both ends.
pub fn trapezoid<T, F>(a: f64, b: f64, nodes: usize, mut f: F) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: FnMut(f64) -> T,
{
    assert!(nodes >= 2, "trapezoid needs at least two nodes");
    let h = (b - a) / (nodes - 1) as f64;
    let mut acc = T::default();
    for i in 0..nodes {
        let w = if i == 0 || i == nodes - 1 { 0.5 } else { 1.0 };
        acc = acc + f(a + i as f64 * h) * w;
    }
    acc * h
}

/// Smallest even interval count `>= n`, at least 2.
pub fn even_intervals(n: usize) -> usize {
    let n = n.max(2);
    n + n % 2
}

/// Even interval count whose spacing over `[a, b]` does not exceed `max_step`.
pub fn intervals_for_step(a: f64, b: f64, max_step: f64) -> usize {
    let n = ((b - a).abs() / max_step).ceil() as usize;
    even_intervals(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn simpson_exact_on_cubics() {
        let v = simpson(0.0, 2.0, 2, |x| x * x * x - x + 1.0);
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn simpson_rounds_odd_counts_up() {
        assert_eq!(even_intervals(3), 4);
        assert_eq!(even_intervals(0), 2);
        let v = simpson(0.0, std::f64::consts::PI, 101, f64::sin);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-7);
    }

    #[test]
    fn trapezoid_complex_gaussian() {
        let v: Complex64 = trapezoid(-10.0, 10.0, 201, |x| {
            Complex64::new((-x * x).exp(), 0.0)
        });
        assert_abs_diff_eq!(v.re, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0);
    }
}

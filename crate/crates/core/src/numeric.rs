//! Small numerical helpers shared across modules.

/// Correctly rounded sum of a sequence of finite floats.
///
/// Shewchuk's partials algorithm with the final half-way correction used by
/// CPython's `math.fsum`. The result is the exact sum rounded once, so it
/// does not depend on the order of the terms.
pub fn exact_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut partials: Vec<f64> = Vec::with_capacity(8);
    for mut x in terms {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }

    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // round-half-even fix when the remaining partials push past a tie
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Order-independent dot product (see [`exact_sum`]).
pub fn exact_dot(a: &[f64], b: &[f64]) -> f64 {
    exact_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    exact_sum(xs.iter().copied()) / xs.len() as f64
}

/// Sample standard deviation with the `n - 1` denominator; zero for `n < 2`.
pub fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss = exact_sum(xs.iter().map(|x| (x - m) * (x - m)));
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Median of a slice; the midpoint of the two central order statistics for
/// even lengths.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy = exact_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let sxx = exact_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    sxy / sxx
}

/// Trapezoidal quadrature weights for an ordered set of abscissae.
pub fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let p = points.len();
    match p {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..p)
            .map(|k| {
                let left = if k == 0 { points[0] } else { points[k - 1] };
                let right = if k == p - 1 {
                    points[p - 1]
                } else {
                    points[k + 1]
                };
                0.5 * (right - left)
            })
            .collect(),
    }
}

pub(crate) fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

pub(crate) fn choose3(k: u64) -> u64 {
    if k < 3 {
        0
    } else {
        k * (k - 1) * (k - 2) / 6
    }
}

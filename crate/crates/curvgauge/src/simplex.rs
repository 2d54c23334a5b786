//! Small deterministic Nelder-Mead maximizer.
//!
//! Derivative-free on purpose: the margin surface is piecewise (case
//! boundaries, admissibility clamps), so gradient steps are unreliable.
//! No randomness; the trajectory is a pure function of the start point.

pub struct SimplexResult {
    #[allow(dead_code)] // callers that track their own best only read evals
    pub x: Vec<f64>,
    #[allow(dead_code)]
    pub value: f64,
    pub evals: usize,
}

/// Maximizes `f` from `x0` with per-coordinate initial steps `step`,
/// running at most `max_iters` reflection cycles.
pub fn maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: &[f64],
    max_iters: usize,
) -> SimplexResult {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        // maximize f = minimize -f
        -f(x)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if step[i] != 0.0 { step[i] } else { 0.05 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    for _ in 0..max_iters {
        // order ascending by value (best first for minimization)
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        // flat values alone are not enough: a simplex straddling the
        // optimum symmetrically has equal values at full width
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0_f64, f64::max)
            })
            .fold(0.0_f64, f64::max);
        if (values[n] - values[0]).abs() < 1e-15 && diameter < 1e-10 {
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + ALPHA * (c - w))
            .collect();
        let fr = eval(&reflect, &mut evals);

        if fr < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + GAMMA * (c - w))
                .collect();
            let fe = eval(&expand, &mut evals);
            if fe < fr {
                simplex[n] = expand;
                values[n] = fe;
            } else {
                simplex[n] = reflect;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflect;
            values[n] = fr;
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + RHO * (w - c))
                .collect();
            let fc = eval(&contract, &mut evals);
            if fc < values[n] {
                simplex[n] = contract;
                values[n] = fc;
            } else {
                // shrink toward best
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + SIGMA * (*x - b);
                    }
                    values[i] = eval(&simplex[i].clone(), &mut evals);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    SimplexResult {
        x: simplex[best].clone(),
        value: -values[best],
        evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_maximum() {
        let f = |x: &[f64]| -(x[0] - 1.5).powi(2) - (x[1] + 0.5).powi(2) + 7.0;
        let r = maximize(f, &[0.0, 0.0], &[0.3, 0.3], 300);
        assert!((r.value - 7.0).abs() < 1e-8, "value {}", r.value);
        assert!((r.x[0] - 1.5).abs() < 1e-4);
        assert!((r.x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn tolerates_minus_infinity_regions() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NEG_INFINITY
            } else {
                -(x[0] - 0.2).powi(2)
            }
        };
        let r = maximize(f, &[0.5], &[0.2], 200);
        assert!((r.x[0] - 0.2).abs() < 1e-4);
    }

    #[test]
    fn is_deterministic() {
        let f = |x: &[f64]| -(x[0].sin() + x[1].cos()).powi(2) + x[0] * 0.01;
        let a = maximize(f, &[1.0, 2.0], &[0.1, 0.1], 150);
        let b = maximize(f, &[1.0, 2.0], &[0.1, 0.1], 150);
        assert_eq!(a.x, b.x);
        assert_eq!(a.value, b.value);
    }
}

//! Small numerical helpers shared by the distribution and estimator code.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// `ln(e^a + e^b)` without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `1 / (1 + e^{-t})`.
pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Natural log of `phi_k(b) = sum_{i>=0} b^i / (i + k)!`, i.e.
/// `phi_1 = (e^b - 1)/b`, `phi_2 = (e^b - 1 - b)/b^2`, `phi_3 = (e^b - 1 - b - b^2/2)/b^3`.
///
/// These are the integrals of the exponential core against `1`, `u` and `u^2/2`.
pub(crate) fn ln_phi(k: u32, b: f64) -> f64 {
    debug_assert!((1..=3).contains(&k));
    if b.abs() <= 1.0 {
        // 1/(k)! * sum_i b^i * k!/(i+k)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for i in 1..30u32 {
            term *= b / f64::from(i + k);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        let k_fact: f64 = (1..=k).map(f64::from).product();
        return sum.ln() - k_fact.ln();
    }
    // partial Taylor sum of e^b up to degree k-1
    let mut head = 0.0;
    let mut term = 1.0;
    for i in 0..k {
        if i > 0 {
            term *= b / f64::from(i);
        }
        head += term;
    }
    if b > 0.0 {
        b + (-head * (-b).exp()).ln_1p() - f64::from(k) * b.ln()
    } else {
        let num = b.exp() - head;
        let den = b.powi(k as i32);
        (num / den).ln()
    }
}

#[cfg(test)]
pub(crate) fn phi(k: u32, b: f64) -> f64 {
    ln_phi(k, b).exp()
}

/// `1/b - 1/(e^b - 1) = phi_2(b) / phi_1(b)`, strictly decreasing from 1 to 0.
pub(crate) fn exp_core_ratio(b: f64) -> f64 {
    (ln_phi(2, b) - ln_phi(1, b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_phi_matches_closed_forms() {
        for &b in &[-30.0, -3.0, -1.5, -0.9, -0.2, 1e-9, 0.3, 0.99, 1.01, 4.0, 40.0] {
            let e = f64::exp(b);
            let p1 = (e - 1.0) / b;
            let p2 = (e - 1.0 - b) / (b * b);
            let p3 = (e - 1.0 - b - 0.5 * b * b) / (b * b * b);
            if b.abs() > 1e-3 {
                assert!((phi(1, b) / p1 - 1.0).abs() < 1e-12, "phi1 at {b}");
            }
            if b.abs() > 0.05 {
                assert!((phi(2, b) / p2 - 1.0).abs() < 1e-10, "phi2 at {b}");
            }
            if b.abs() > 0.3 {
                assert!((phi(3, b) / p3 - 1.0).abs() < 1e-9, "phi3 at {b}");
            }
        }
        assert!((phi(1, 0.0) - 1.0).abs() < 1e-15);
        assert!((phi(2, 0.0) - 0.5).abs() < 1e-15);
        assert!((phi(3, 0.0) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn ln_phi_large_argument_does_not_overflow() {
        let v = ln_phi(1, 800.0);
        assert!((v - (800.0 - 800f64.ln())).abs() < 1e-12);
        assert!(ln_phi(3, 800.0).is_finite());
    }

    #[test]
    fn exp_core_ratio_limits_and_monotonicity() {
        assert!((exp_core_ratio(0.0) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        let mut b = -60.0;
        while b < 60.0 {
            let h = exp_core_ratio(b);
            assert!(h < prev && h > 0.0, "not decreasing at {b}");
            prev = h;
            b += 0.37;
        }
    }

    #[test]
    fn log_add_exp_is_stable() {
        assert!((log_add_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut v = vec![1e16, 1.0, -1e16];
        v.extend(std::iter::repeat(0.1).take(10));
        assert!((compensated_sum(v) - 2.0).abs() < 1e-12);
    }
}

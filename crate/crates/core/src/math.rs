//! Log-space binomial helpers.

/// `ln(i!)` for `i = 0..=max`.
#[derive(Clone, Debug)]
pub struct LnFactorial(Vec<f64>);

impl LnFactorial {
    pub fn new(max: usize) -> Self {
        let mut t = Vec::with_capacity(max + 1);
        t.push(0.0);
        let mut acc = 0.0f64;
        for i in 1..=max {
            acc += (i as f64).ln();
            t.push(acc);
        }
        Self(t)
    }

    pub fn max(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// `ln C(n, k)`, `-∞` when `k > n`.
    pub fn ln_choose(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.0[n] - self.0[k] - self.0[n - k]
    }

    /// Probability mass function of `Bin(n, p)` as a vector of length `n + 1`.
    pub fn binomial_pmf(&self, n: usize, p: f64) -> Vec<f64> {
        if p <= 0.0 {
            let mut v = vec![0.0; n + 1];
            v[0] = 1.0;
            return v;
        }
        if p >= 1.0 {
            let mut v = vec![0.0; n + 1];
            v[n] = 1.0;
            return v;
        }
        let (lp, lq) = (p.ln(), (-p).ln_1p());
        (0..=n)
            .map(|x| (self.ln_choose(n, x) + x as f64 * lp + (n - x) as f64 * lq).exp())
            .collect()
    }
}

/// Upper tails `P(X >= m)` for `m = 0..=n+1` from a pmf of length `n + 1`.
pub fn upper_tails(pmf: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; pmf.len() + 1];
    for i in (0..pmf.len()).rev() {
        t[i] = t[i + 1] + pmf[i];
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let f = LnFactorial::new(20);
        assert!((f.ln_choose(10, 3).exp() - 120.0).abs() < 1e-9);
        assert_eq!(f.ln_choose(3, 4), f64::NEG_INFINITY);
        let pmf = f.binomial_pmf(4, 0.5);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|x| x / 16.0);
        for (a, b) in pmf.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let t = upper_tails(&pmf);
        assert!((t[0] - 1.0).abs() < 1e-14);
        assert_eq!(t[5], 0.0);
    }
}

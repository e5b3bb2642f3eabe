//! Compensated floating-point accumulation.
//!
//! The identity checks compare sums of up to ~10^6 terms at 1e-9 relative
//! tolerance, so plain accumulation is not good enough. This is the
//! Kahan-Babuska (Neumaier) variant, which also handles terms larger than
//! the running sum.

/// Error-compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in; used to combine per-chunk partial sums.
    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated accumulator for complex values, component-wise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    pub re: CompensatedSum,
    pub im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: num_complex::Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: ComplexSum) {
        self.re.merge(other.re);
        self.im.merge(other.im);
    }

    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_naive_sum_loses() {
        // 1 + 1e100 - 1e100 + ... pattern where naive summation drops the ones.
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|k| (k as f64).sin() * 1e6).collect();
        let mut whole = CompensatedSum::new();
        for &x in &xs {
            whole.add(x);
        }
        let mut left = CompensatedSum::new();
        let mut right = CompensatedSum::new();
        for &x in &xs[..500] {
            left.add(x);
        }
        for &x in &xs[500..] {
            right.add(x);
        }
        left.merge(right);
        assert!((whole.value() - left.value()).abs() <= 1e-9 * whole.value().abs());
    }
}

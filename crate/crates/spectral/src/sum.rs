//! Compensated (Kahan) summation, used wherever a norm or energy must be
//! independent of iteration order and parallel schedule.

#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Sums an iterator with compensation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = KahanSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_small_terms() {
        // 1 + 1e-16 * 1e4 loses the small terms in naive f64 order.
        let mut terms = vec![1.0f64];
        terms.extend(std::iter::repeat(1e-16).take(10_000));
        let naive: f64 = terms.iter().sum();
        let comp = kahan_sum(terms.iter().copied());
        assert!((comp - (1.0 + 1e-12)).abs() < 1e-18);
        assert!(naive < comp);
    }
}

//! Compensated and order-fixed summation helpers.

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

pub fn compensated(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = CompensatedSum::new();
    s.extend(xs);
    s.value()
}

/// Pairwise reduction with a fixed tree shape, so the result depends only
/// on the input order and not on how the inputs were produced.
pub fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        len if len <= 8 => compensated(xs.iter().copied()),
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise(a) + pairwise(b)
        }
    }
}

/// Component-wise pairwise reduction of equal-length rows.
pub fn pairwise_rows<const W: usize>(rows: &[[f64; W]]) -> [f64; W] {
    let mut out = [0.0; W];
    let mut column = Vec::with_capacity(rows.len());
    for (c, slot) in out.iter_mut().enumerate() {
        column.clear();
        column.extend(rows.iter().map(|r| r[c]));
        *slot = pairwise(&column);
    }
    out
}

/// log Σ exp(x_i); −∞ for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + compensated(xs.iter().map(|x| (x - max).exp())).ln()
}

/// log(eˣ − 1) without cancellation for small x
pub fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// log(1 − e^{−x}) for x > 0
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

//! Small numeric helpers shared across modules.

/// Ceiling with a guard against floating-point fuzz: values within 1e-9 of
/// an integer are treated as that integer instead of being pushed up.
pub(crate) fn ceil_fuzz(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        nearest
    } else {
        x.ceil()
    }
}

/// Kahan compensated accumulator, so long reductions stay deterministic and
/// accurate regardless of magnitude differences.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub(crate) fn new() -> KahanSum {
        KahanSum::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

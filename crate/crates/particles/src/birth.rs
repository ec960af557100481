//! Branching-rate profiles: nondecreasing, bounded functions on `[0,1]`
//! mapping a particle's relative rank to its branching rate.

use crate::{Error, Result};

/// Closed-form shapes the simulators need. All variants are nondecreasing
/// and nonnegative on `[0,1]`; the constructor validates this on a grid plus
/// all breakpoints.
#[derive(Debug, Clone, PartialEq)]
enum BirthKind {
    /// Polynomial with coefficients in increasing degree.
    Poly(Vec<f64>),
    /// `1[x > 0]`: rate 0 for the leftmost rank, 1 for all others.
    IndicatorPositive,
    /// Right-continuous step function: value `values[s]` on
    /// `[breaks[s], breaks[s+1])` with implicit `breaks[0] = 0`, and
    /// `values[last]` on `[breaks[last], 1]`.
    Step { breaks: Vec<f64>, values: Vec<f64> },
}

/// A branching-rate profile `b : [0,1] -> [0, inf)`, nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BirthFunction {
    kind: BirthKind,
    b_max: f64,
}

const MONOTONE_CHECK_POINTS: usize = 1024;
const MONOTONE_SLACK: f64 = 1e-12;

impl BirthFunction {
    fn validated(kind: BirthKind) -> Result<Self> {
        let f = Self { kind, b_max: 0.0 };
        let mut points: Vec<f64> = (0..=MONOTONE_CHECK_POINTS)
            .map(|s| s as f64 / MONOTONE_CHECK_POINTS as f64)
            .collect();
        for &b in f.breakpoints().iter() {
            points.push(b);
            points.push((b - 1e-13).max(0.0));
        }
        points.sort_unstable_by(|a, b| a.partial_cmp(b).expect("grid points finite"));
        let mut prev = f64::NEG_INFINITY;
        let mut max = 0.0_f64;
        for &x in &points {
            let v = f.eval(x);
            if !v.is_finite() || v < -MONOTONE_SLACK {
                return Err(Error::InvalidBirth(format!("negative rate {v} at {x}")));
            }
            if v < prev - MONOTONE_SLACK {
                return Err(Error::InvalidBirth(format!(
                    "rate decreases near {x}: {prev} -> {v}"
                )));
            }
            prev = prev.max(v);
            max = max.max(v);
        }
        Ok(Self { b_max: max, ..f })
    }

    /// Constant rate 1.
    pub fn one() -> Self {
        Self::poly(vec![1.0]).expect("constant 1 is valid")
    }

    /// Identity rate `b(x) = x`.
    pub fn linear() -> Self {
        Self::poly(vec![0.0, 1.0]).expect("identity is valid")
    }

    /// `1[x > 0]`.
    pub fn indicator_positive() -> Self {
        Self::validated(BirthKind::IndicatorPositive).expect("indicator is valid")
    }

    /// `b(x) = x^e`.
    pub fn power(e: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; e + 1];
        coeffs[e] = 1.0;
        Self::poly(coeffs)
    }

    /// Polynomial with `coeffs[d]` the coefficient of `x^d`; must be
    /// nonnegative and nondecreasing on `[0,1]`.
    pub fn poly(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidBirth("empty coefficient list".into()));
        }
        Self::validated(BirthKind::Poly(coeffs))
    }

    /// Right-continuous nondecreasing step function. `breaks` are the
    /// interior jump locations in strictly increasing order within `(0,1]`;
    /// `values` has one more entry than `breaks`, the plateau heights from
    /// left to right.
    pub fn step(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidBirth(format!(
                "{} plateau values for {} breakpoints; need one more value",
                values.len(),
                breaks.len()
            )));
        }
        if breaks
            .windows(2)
            .any(|w| !(w[0] < w[1]))
            || breaks.iter().any(|&b| !(0.0 < b && b <= 1.0))
        {
            return Err(Error::InvalidBirth(
                "breakpoints must be strictly increasing within (0,1]".into(),
            ));
        }
        Self::validated(BirthKind::Step { breaks, values })
    }

    /// Rate at relative rank `x in [0,1]`.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            BirthKind::Poly(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            BirthKind::IndicatorPositive => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            BirthKind::Step { breaks, values } => {
                // partition_point gives the number of breaks <= x, which is
                // exactly the plateau index for a right-continuous step.
                let idx = breaks.partition_point(|&b| b <= x);
                values[idx]
            }
        }
    }

    /// Supremum of the rate over `[0,1]` (the value at 1, by monotonicity).
    pub fn b_max(&self) -> f64 {
        self.b_max
    }

    /// Monomial coefficients of a polynomial agreeing with the profile on
    /// `(0, 1]` (so everywhere except possibly at 0): the coefficients
    /// themselves for polynomial profiles, the constant 1 for the positive-
    /// rank indicator, and `None` for genuine step profiles. Integrals
    /// against this view coincide with integrals against the profile.
    pub fn poly_view(&self) -> Option<Vec<f64>> {
        match &self.kind {
            BirthKind::Poly(coeffs) => Some(coeffs.clone()),
            BirthKind::IndicatorPositive => Some(vec![1.0]),
            BirthKind::Step { .. } => None,
        }
    }

    /// Interior discontinuity locations (empty for continuous profiles).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            BirthKind::Step { breaks, .. } => breaks.clone(),
            BirthKind::IndicatorPositive => vec![f64::MIN_POSITIVE],
            BirthKind::Poly(_) => vec![],
        }
    }

    /// True when the profile is continuous on `[0,1]`.
    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, BirthKind::Poly(_))
    }

    /// Definite integral over `[a, b] subset [0,1]`, exact for polynomials
    /// and steps.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            BirthKind::Poly(coeffs) => {
                let anti = |x: f64| {
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(d, &c)| c * x.powi(d as i32 + 1) / (d as f64 + 1.0))
                        .sum::<f64>()
                };
                anti(b) - anti(a)
            }
            BirthKind::IndicatorPositive => b.max(0.0) - a.max(0.0),
            BirthKind::Step { breaks, values } => {
                let mut total = 0.0;
                let mut lo = a;
                for (idx, &v) in values.iter().enumerate() {
                    let hi = breaks.get(idx).copied().unwrap_or(f64::INFINITY).min(b);
                    if hi > lo {
                        total += v * (hi - lo);
                        lo = hi;
                    }
                    if lo >= b {
                        break;
                    }
                }
                total
            }
        }
    }
}

//! Closed-form functions `sum_m c_m x^m + sum_m d_m x^m ln(x)` on `[0, 1]`,
//! piecewise. This class is closed under the integrations that produce the
//! hydrodynamic tail fluxes from polynomial birth rates and atom-plus-
//! polynomial kill measures, so those fluxes evaluate without quadrature
//! error.

/// `sum_m poly[m] x^m + ln(x) * sum_m logpoly[m] x^m`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogPoly {
    pub poly: Vec<f64>,
    pub logpoly: Vec<f64>,
}

fn bump(v: &mut Vec<f64>, m: usize, c: f64) {
    if v.len() <= m {
        v.resize(m + 1, 0.0);
    }
    v[m] += c;
}

impl LogPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: usize, c: f64) {
        bump(&mut self.poly, m, c);
    }

    pub fn add_log_term(&mut self, m: usize, d: f64) {
        bump(&mut self.logpoly, m, d);
    }

    /// Value at `x in [0, 1]`. At `x = 0` the limit is taken: `x^m ln x -> 0`
    /// for `m >= 1`, and a nonzero constant log coefficient gives `-inf`
    /// times its sign.
    pub fn eval(&self, x: f64) -> f64 {
        let p: f64 = self.poly.iter().rev().fold(0.0, |acc, &c| acc * x + c);
        if self.logpoly.is_empty() {
            return p;
        }
        if x <= 0.0 {
            let d0 = self.logpoly.first().copied().unwrap_or(0.0);
            if d0 != 0.0 {
                return if d0 > 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                };
            }
            return p;
        }
        let q: f64 = self.logpoly.iter().rev().fold(0.0, |acc, &d| acc * x + d);
        p + q * x.ln()
    }

    /// Derivative at `x > 0`:
    /// `sum m c_m x^{m-1} + sum d_m x^{m-1} (m ln x + 1)`.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        debug_assert!(x > 0.0);
        let mut out = 0.0;
        for (m, &c) in self.poly.iter().enumerate().skip(1) {
            out += m as f64 * c * x.powi(m as i32 - 1);
        }
        let lx = x.ln();
        for (m, &d) in self.logpoly.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            if m == 0 {
                out += d / x;
            } else {
                out += d * x.powi(m as i32 - 1) * (m as f64 * lx + 1.0);
            }
        }
        out
    }

    /// One-sided derivative limit as `x -> 0+`, possibly infinite: finite
    /// iff no `ln x` (from `d_1`) and no `1/x` (from `d_0`) survives.
    pub fn derivative_limit_at_zero(&self) -> f64 {
        let d0 = self.logpoly.first().copied().unwrap_or(0.0);
        let d1 = self.logpoly.get(1).copied().unwrap_or(0.0);
        if d0 != 0.0 {
            // d0 / x dominates.
            return if d0 > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        if d1 != 0.0 {
            // d1 (ln x + 1) dominates.
            return if d1 > 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        self.poly.get(1).copied().unwrap_or(0.0)
    }

    /// Antiderivative with value 0 at `x = 0` (every primitive term vanishes
    /// there once the class excludes a bare `ln x` integrand constant — a
    /// `d_0 ln x` integrand yields `x ln x - x`, which also vanishes).
    pub fn antiderivative(&self) -> LogPoly {
        let mut out = LogPoly::zero();
        for (m, &c) in self.poly.iter().enumerate() {
            if c != 0.0 {
                out.add_term(m + 1, c / (m as f64 + 1.0));
            }
        }
        for (m, &d) in self.logpoly.iter().enumerate() {
            if d != 0.0 {
                let k = m as f64 + 1.0;
                out.add_log_term(m + 1, d / k);
                out.add_term(m + 1, -d / (k * k));
            }
        }
        out
    }
}

/// A function on `[0, 1]` given by [`LogPoly`] pieces on consecutive
/// intervals.
#[derive(Debug, Clone, Default)]
pub struct PiecewiseLogPoly {
    /// `(lo, hi, f)`, sorted, abutting, covering `[0, 1]`.
    pub pieces: Vec<(f64, f64, LogPoly)>,
}

impl PiecewiseLogPoly {
    /// Value at `x in [0, 1]`; each interior breakpoint belongs to the piece
    /// on its right, and `x = 1` to the last piece.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(!self.pieces.is_empty());
        let idx = self
            .pieces
            .partition_point(|&(lo, _, _)| lo <= x)
            .saturating_sub(1);
        self.pieces[idx].2.eval(x)
    }

    /// Derivative at `x` (one-sided limit at 0).
    pub fn eval_derivative(&self, x: f64) -> f64 {
        debug_assert!(!self.pieces.is_empty());
        let idx = self
            .pieces
            .partition_point(|&(lo, _, _)| lo <= x)
            .saturating_sub(1);
        let f = &self.pieces[idx].2;
        if x <= 0.0 {
            f.derivative_limit_at_zero()
        } else {
            f.eval_derivative(x)
        }
    }
}

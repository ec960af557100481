//! Reaction terms for the front equation: the mean-field source generated
//! by rank-jump dynamics, its finite-population counterpart, the
//! birth/kill tail fluxes of quantile branching-selection dynamics, and
//! custom closures. Every source carries exact one-sided derivatives at the
//! endpoints, which the wave routines need.

use std::sync::Arc;

use num::{BigInt, BigRational};
use particles::{choose_f64, choose_u128, BirthFunction, KillMeasure, PairDistribution};

use crate::logpoly::{LogPoly, PiecewiseLogPoly};
use crate::{Error, Result};

/// Which constructor produced a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    /// Mean-field jump source of a rank-jump model.
    JumpLimit,
    /// Finite-population jump source (without-replacement sampling).
    JumpFinite,
    /// Difference of tail fluxes, kill minus birth.
    TailPair,
    /// Caller-supplied closure.
    Custom,
}

#[derive(Clone)]
enum SourceForm {
    /// `sum_r beta[r-1] v^r (1-v)^{k-r}` — evaluated in this basis because
    /// for large `k` the monomial expansion cancels catastrophically while
    /// every term here is nonnegative on `[0,1]`.
    Bernstein { k: usize, beta: Vec<f64> },
    /// `lambda * sum_r cut[r-1] C(k,r) w_r(u)` with
    /// `w_r(u) = norm * prod_{l<r}(u - l/n) * prod_{l<k-r}(1 - u - l/n)`.
    FiniteJump {
        n: usize,
        k: usize,
        lambda: f64,
        cut: Vec<f64>,
        norm: f64,
    },
    /// Kill flux minus birth flux of a tail pair.
    TailDiff(TailSources),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A reaction term `h` on `[0, 1]` with exact endpoint derivatives.
#[derive(Clone)]
pub struct Source {
    kind: SourceKind,
    form: SourceForm,
    d_at_0: f64,
    d_at_1: f64,
}

impl std::fmt::Debug for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Source")
            .field("kind", &self.kind)
            .field("d_at_0", &self.d_at_0)
            .field("d_at_1", &self.d_at_1)
            .finish()
    }
}

impl Source {
    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    /// `h(v)`.
    pub fn eval(&self, v: f64) -> f64 {
        match &self.form {
            SourceForm::Bernstein { k, beta } => {
                let k = *k;
                let mut total = 0.0;
                // v^r (1-v)^{k-r} built incrementally from r = 1.
                let w = 1.0 - v;
                let mut vp = v; // v^r
                for (idx, &b) in beta.iter().enumerate() {
                    let r = idx + 1;
                    if b != 0.0 {
                        total += b * vp * w.powi((k - r) as i32);
                    }
                    vp *= v;
                }
                total
            }
            SourceForm::FiniteJump {
                n,
                k,
                lambda,
                cut,
                norm,
            } => {
                let nf = *n as f64;
                let mut total = 0.0;
                for (idx, &c) in cut.iter().enumerate() {
                    let r = idx + 1;
                    if c == 0.0 {
                        continue;
                    }
                    let mut w = *norm;
                    for l in 0..r {
                        w *= v - l as f64 / nf;
                    }
                    for l in 0..(k - r) {
                        w *= 1.0 - v - l as f64 / nf;
                    }
                    total += c * choose_f64(*k as u64, r as u64) * w;
                }
                lambda * total
            }
            SourceForm::TailDiff(tail) => tail.kill_flux(v) - tail.birth_flux(v),
            SourceForm::Custom(f) => f(v),
        }
    }

    /// One-sided derivative `h'(0+)`.
    pub fn derivative_at_zero(&self) -> f64 {
        self.d_at_0
    }

    /// One-sided derivative `h'(1-)`.
    pub fn derivative_at_one(&self) -> f64 {
        self.d_at_1
    }

    /// The source `a * h`.
    pub fn scaled(&self, a: f64) -> Source {
        let form = match &self.form {
            SourceForm::Bernstein { k, beta } => SourceForm::Bernstein {
                k: *k,
                beta: beta.iter().map(|&b| a * b).collect(),
            },
            SourceForm::FiniteJump {
                n,
                k,
                lambda,
                cut,
                norm,
            } => SourceForm::FiniteJump {
                n: *n,
                k: *k,
                lambda: a * lambda,
                cut: cut.clone(),
                norm: *norm,
            },
            other => {
                let inner = Source {
                    kind: self.kind,
                    form: other.clone(),
                    d_at_0: self.d_at_0,
                    d_at_1: self.d_at_1,
                };
                SourceForm::Custom(Arc::new(move |v| a * inner.eval(v)))
            }
        };
        Source {
            kind: self.kind,
            form,
            d_at_0: a * self.d_at_0,
            d_at_1: a * self.d_at_1,
        }
    }

    /// Wraps a closure with caller-supplied endpoint derivatives.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d_at_0: f64,
        d_at_1: f64,
    ) -> Source {
        Source {
            kind: SourceKind::Custom,
            form: SourceForm::Custom(Arc::new(f)),
            d_at_0,
            d_at_1,
        }
    }

    /// The logistic source `a v(1-v)`.
    pub fn logistic(a: f64) -> Source {
        Source {
            kind: SourceKind::Custom,
            form: SourceForm::Bernstein {
                k: 2,
                beta: vec![a],
            },
            d_at_0: a,
            d_at_1: -a,
        }
    }
}

/// Mean-field source of a rank-jump model with total rate `lambda` and pair
/// law `p`:
/// `h(v) = lambda * sum_{r=1}^{k-1} phat(r) C(k,r) v^r (1-v)^{k-r}`, where
/// `phat(r)` is the mass of pairs crossing the cut after rank `r`. Vanishes
/// exactly at 0 and 1; nonnegative on `[0,1]`; `h'(1) = -lambda k phat(k-1)`.
pub fn jump_source_limit(lambda: f64, pairs: &PairDistribution) -> Result<Source> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidSource(format!(
            "jump rate {lambda} must be finite and nonnegative"
        )));
    }
    let k = pairs.k();
    let beta: Vec<f64> = (1..k)
        .map(|r| {
            let phat = pairs
                .cut_crossing_mass(r)
                .expect("r ranges over 1..k, always valid");
            lambda * phat * choose_f64(k as u64, r as u64)
        })
        .collect();
    let d_at_0 = beta.first().copied().unwrap_or(0.0);
    let d_at_1 = -beta.last().copied().unwrap_or(0.0);
    Ok(Source {
        kind: SourceKind::JumpLimit,
        form: SourceForm::Bernstein { k, beta },
        d_at_0,
        d_at_1,
    })
}

/// Finite-population source of the same model with `n` particles: the
/// without-replacement analogue of [`jump_source_limit`]. At lattice points
/// `u = m/n` it equals
/// `lambda * sum_r phat(r) C(m,r) C(n-m,k-r) / C(n,k)`.
pub fn jump_source_finite(lambda: f64, pairs: &PairDistribution, n: usize) -> Result<Source> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidSource(format!(
            "jump rate {lambda} must be finite and nonnegative"
        )));
    }
    let k = pairs.k();
    if n < k {
        return Err(Error::InvalidSource(format!(
            "population {n} smaller than the sampled set size {k}"
        )));
    }
    let nf = n as f64;
    let norm: f64 = (0..k).map(|l| nf / (nf - l as f64)).product();
    let cut: Vec<f64> = (1..k)
        .map(|r| {
            pairs
                .cut_crossing_mass(r)
                .expect("r ranges over 1..k, always valid")
        })
        .collect();

    // Endpoint derivatives by the product rule: exactly one factor of each
    // w_r vanishes at each endpoint (u at 0; 1-u at 1).
    let mut d_at_0 = 0.0;
    let mut d_at_1 = 0.0;
    for (idx, &c) in cut.iter().enumerate() {
        let r = idx + 1;
        let ck = choose_f64(k as u64, r as u64);
        let mut at0 = norm;
        for l in 1..r {
            at0 *= -(l as f64) / nf;
        }
        for l in 0..(k - r) {
            at0 *= 1.0 - l as f64 / nf;
        }
        d_at_0 += lambda * c * ck * at0;
        let mut at1 = -norm;
        for l in 0..r {
            at1 *= 1.0 - l as f64 / nf;
        }
        for l in 1..(k - r) {
            at1 *= -(l as f64) / nf;
        }
        d_at_1 += lambda * c * ck * at1;
    }

    Ok(Source {
        kind: SourceKind::JumpFinite,
        form: SourceForm::FiniteJump {
            n,
            k,
            lambda,
            cut,
            norm,
        },
        d_at_0,
        d_at_1,
    })
}

/// Exact rational value of the finite-population weight
/// `w_r(m/n) = prod_{l<r}(m-l) * prod_{l<k-r}(n-m-l) / prod_{l<k}(n-l)`.
pub fn finite_weight_rational(n: u64, k: u64, r: u64, m: u64) -> BigRational {
    let mut numer = BigInt::from(1);
    for l in 0..r {
        numer *= BigInt::from(m as i64 - l as i64);
    }
    for l in 0..(k - r) {
        numer *= BigInt::from(n as i64 - m as i64 - l as i64);
    }
    let mut denom = BigInt::from(1);
    for l in 0..k {
        denom *= BigInt::from(n as i64 - l as i64);
    }
    BigRational::new(numer, denom)
}

/// Exact rational value of the without-replacement sampling probability
/// ratio `C(m,r) C(n-m,k-r) / C(n,k)`.
pub fn hypergeometric_ratio_rational(n: u64, k: u64, r: u64, m: u64) -> BigRational {
    let c = |a: u64, b: u64| {
        BigInt::from(choose_u128(a, b).expect("small arguments fit in u128"))
    };
    BigRational::new(c(m, r) * c(n - m, k - r), c(n, k))
}

/// The pair of tail fluxes of a quantile branching-selection model:
/// the birth flux `B(z) = integral of b over [1-z, 1]` and the kill flux
/// `G(z) = int_{1-z}^1 int_s^1 b(s/r) (1/r) D(dr) ds`, both exact for
/// polynomial-view birth profiles and atom-plus-polynomial kill measures.
#[derive(Debug, Clone)]
pub struct TailSources {
    birth: BirthFunction,
    /// `H(w) = int_0^w Inner(s) ds` where `Inner(s)` is the inner kill
    /// integral; then `G(z) = H(1) - H(1-z)`.
    inner_cum: PiecewiseLogPoly,
    inner_total: f64,
}

/// Builds the tail fluxes. The kill measure's atom at `-inf` never enters
/// (the inner integral ranges over `[s, 1]` with `s > 0`); an atom at 0 is
/// likewise never reached. Errors on genuine step birth profiles, whose
/// inner integral leaves the closed form this engine handles.
pub fn tail_sources(b: &BirthFunction, d: &KillMeasure) -> Result<TailSources> {
    let beta = b.poly_view().ok_or_else(|| {
        Error::InvalidSource(
            "tail fluxes need a polynomial-view birth profile; step profiles are not supported"
                .into(),
        )
    })?;

    // Breakpoints in s partition [0,1] so that no atom or density-piece
    // boundary lies strictly inside an interval.
    let mut breaks: Vec<f64> = vec![0.0, 1.0];
    for &(a, _) in d.atoms() {
        if a > 0.0 {
            breaks.push(a);
        }
    }
    for p in d.density() {
        if p.lo > 0.0 {
            breaks.push(p.lo);
        }
        if p.hi < 1.0 {
            breaks.push(p.hi);
        }
    }
    breaks.sort_unstable_by(|x, y| x.partial_cmp(y).expect("breakpoints finite"));
    breaks.dedup();

    // Inner(s) piece by piece.
    let mut inner_pieces: Vec<(f64, f64, LogPoly)> = Vec::new();
    for win in breaks.windows(2) {
        let (s_lo, s_hi) = (win[0], win[1]);
        let mut f = LogPoly::zero();
        for &(a, mass) in d.atoms() {
            // Contributes b(s/a) mass / a for s <= a.
            if a > 0.0 && mass != 0.0 && s_hi <= a {
                for (deg, &bd) in beta.iter().enumerate() {
                    if bd != 0.0 {
                        f.add_term(deg, bd * mass * a.powi(-(deg as i32) - 1));
                    }
                }
            }
        }
        for piece in d.density() {
            if s_lo >= piece.hi {
                continue;
            }
            for (deg, &bd) in beta.iter().enumerate() {
                if bd == 0.0 {
                    continue;
                }
                for (e, &ge) in piece.coeffs.iter().enumerate() {
                    if ge == 0.0 {
                        continue;
                    }
                    let coeff = bd * ge;
                    let p = e as i32 - deg as i32 - 1; // power of r after b(s/r)/r
                    if s_hi <= piece.lo {
                        // Integrate r over the whole piece: polynomial in s.
                        let val = power_integral(p, piece.lo, piece.hi);
                        f.add_term(deg, coeff * val);
                    } else {
                        // Interval inside the piece: integrate r over [s, hi).
                        debug_assert!(s_lo >= piece.lo && s_hi <= piece.hi);
                        if p == -1 {
                            f.add_term(deg, coeff * piece.hi.ln());
                            f.add_log_term(deg, -coeff);
                        } else {
                            let q = (p + 1) as f64;
                            f.add_term(deg, coeff * piece.hi.powi(p + 1) / q);
                            f.add_term(e, -coeff / q);
                        }
                    }
                }
            }
        }
        inner_pieces.push((s_lo, s_hi, f));
    }

    // Accumulate H(s) = int_0^s Inner.
    let mut cum_pieces: Vec<(f64, f64, LogPoly)> = Vec::new();
    let mut carried = 0.0;
    for (s_lo, s_hi, f) in inner_pieces {
        let mut big_f = f.antiderivative();
        let at_lo = big_f.eval(s_lo);
        big_f.add_term(0, carried - at_lo);
        carried = big_f.eval(s_hi);
        cum_pieces.push((s_lo, s_hi, big_f));
    }
    let inner_total = carried;

    Ok(TailSources {
        birth: b.clone(),
        inner_cum: PiecewiseLogPoly {
            pieces: cum_pieces,
        },
        inner_total,
    })
}

/// `int_A^B r^p dr` for integer `p`, `0 < A < B`.
fn power_integral(p: i32, a: f64, b: f64) -> f64 {
    if p == -1 {
        (b / a).ln()
    } else {
        let q = (p + 1) as f64;
        (b.powi(p + 1) - a.powi(p + 1)) / q
    }
}

impl TailSources {
    /// Birth flux `B(z)`: total branching rate carried by the top `z`
    /// fraction of ranks.
    pub fn birth_flux(&self, z: f64) -> f64 {
        let w = (1.0 - z).clamp(0.0, 1.0);
        self.birth.integral(w, 1.0)
    }

    /// Kill flux `G(z)`: rate at which kills remove mass from the top `z`
    /// fraction of ranks.
    pub fn kill_flux(&self, z: f64) -> f64 {
        let w = (1.0 - z).clamp(0.0, 1.0);
        self.inner_total - self.inner_cum.eval(w)
    }

    /// The solver-facing source `h(v) = G(v) - B(v)`, so that the tail
    /// equation `dV/dt = 1/2 V'' + B(V) - G(V)` reads `dV/dt = 1/2 V'' -
    /// h(V)`. Endpoint derivatives may be infinite (logarithmic kill flux).
    pub fn difference_source(&self) -> Source {
        // G'(z) = Inner(1-z), B'(z) = b(1-z).
        let d_at_0 = self.inner_cum.eval_derivative(1.0) - self.birth.eval(1.0);
        let d_at_1 = self.inner_cum.eval_derivative(0.0) - self.birth.eval(0.0);
        Source {
            kind: SourceKind::TailPair,
            form: SourceForm::TailDiff(self.clone()),
            d_at_0,
            d_at_1,
        }
    }
}

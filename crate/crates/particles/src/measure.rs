//! Kill measures: probabilities on `{-inf} union [0,1)` in atom-plus-density
//! form.
//!
//! A measure is an atom at `-inf` (the no-kill mass), a finite list of atoms
//! in `[0,1)`, and a piecewise-polynomial density on `[0,1)`. This closed
//! form keeps the CDF, its left limits, and the generalized inverse exact up
//! to floating-point evaluation of the piece polynomials. At construction,
//! density pieces are split at interior atom locations so the support walk
//! used by the generalized inverse sees strictly interleaved segments.

use crate::{Error, Result};

/// One polynomial density piece on `[lo, hi) subset [0,1)`. `coeffs[d]` is
/// the coefficient of `x^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl DensityPiece {
    fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    /// Antiderivative with value 0 at `self.lo`, evaluated at `x`.
    fn mass_up_to(&self, x: f64) -> f64 {
        integral(&self.coeffs, self.lo, x)
    }

    fn mass(&self) -> f64 {
        self.mass_up_to(self.hi)
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
    let anti = |x: f64| {
        coeffs
            .iter()
            .enumerate()
            .map(|(d, &c)| c * x.powi(d as i32 + 1) / (d as f64 + 1.0))
            .sum::<f64>()
    };
    anti(b) - anti(a)
}

/// Outcome of a kill draw at a branch of quantile `j`: either no particle
/// dies, or the particle at quantile `i in 1..=j-1` of the pre-branch
/// configuration dies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KillDecision {
    NoKill,
    Kill(usize),
}

/// A probability on `{-inf} union [0,1)`: atom at `-inf`, finite atoms in
/// `[0,1)`, piecewise-polynomial density. Total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct KillMeasure {
    mass_at_minus_inf: f64,
    atoms: Vec<(f64, f64)>,
    density: Vec<DensityPiece>,
}

/// Tolerance on the total mass at construction; the representation itself is
/// exact, only the caller's coefficients carry rounding.
const MASS_TOLERANCE: f64 = 1e-9;

/// Density nonnegativity is checked on this many points per piece.
const DENSITY_CHECK_POINTS: usize = 128;

impl KillMeasure {
    /// Builds and validates a measure. Atoms may lie inside density pieces;
    /// pieces are split at those locations internally.
    pub fn new(
        mass_at_minus_inf: f64,
        mut atoms: Vec<(f64, f64)>,
        density: Vec<DensityPiece>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidMeasure(msg));
        if !(0.0..=1.0).contains(&mass_at_minus_inf) {
            return invalid(format!("mass at -inf {mass_at_minus_inf} outside [0,1]"));
        }
        for &(loc, mass) in &atoms {
            if !(0.0..1.0).contains(&loc) {
                return invalid(format!("atom location {loc} outside [0,1)"));
            }
            if !(mass >= 0.0) || !mass.is_finite() {
                return invalid(format!("atom mass {mass} negative or non-finite"));
            }
        }
        atoms.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("atom locations finite"));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return invalid("duplicate atom locations".into());
        }
        let mut pieces = density;
        pieces.sort_unstable_by(|a, b| a.lo.partial_cmp(&b.lo).expect("piece bounds finite"));
        for p in &pieces {
            if !(0.0 <= p.lo && p.lo < p.hi && p.hi <= 1.0) {
                return invalid(format!("piece [{}, {}) not inside [0,1)", p.lo, p.hi));
            }
            for s in 0..=DENSITY_CHECK_POINTS {
                let x = p.lo + (p.hi - p.lo) * s as f64 / DENSITY_CHECK_POINTS as f64;
                let v = p.eval(x);
                if !(v >= -1e-12) || !v.is_finite() {
                    return invalid(format!("density negative ({v}) at {x}"));
                }
            }
        }
        if pieces.windows(2).any(|w| w[0].hi > w[1].lo) {
            return invalid("overlapping density pieces".into());
        }
        let pieces = split_pieces_at_atoms(pieces, &atoms);
        let total = mass_at_minus_inf
            + atoms.iter().map(|&(_, m)| m).sum::<f64>()
            + pieces.iter().map(DensityPiece::mass).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return invalid(format!("total mass {total} differs from 1"));
        }
        Ok(Self {
            mass_at_minus_inf,
            atoms,
            density: pieces,
        })
    }

    /// The no-kill mass `D(-inf)`.
    pub fn mass_at_minus_inf(&self) -> f64 {
        self.mass_at_minus_inf
    }

    /// Atoms in `[0,1)` as `(location, mass)`, sorted by location.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Density pieces, sorted and disjoint.
    pub fn density(&self) -> &[DensityPiece] {
        &self.density
    }

    /// Right-continuous CDF `D(x)`. Below 0 this equals the mass at `-inf`;
    /// at `x >= 1` it is 1.
    pub fn cdf(&self, x: f64) -> f64 {
        if x >= 1.0 {
            return 1.0;
        }
        self.mass_at_minus_inf + self.mass_on_unit_interval(x, true)
    }

    /// Left limit `D(x-)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        if x > 1.0 {
            return 1.0;
        }
        self.mass_at_minus_inf + self.mass_on_unit_interval(x, false)
    }

    /// Mass of atoms and density on `[0, x]` (inclusive when `inclusive`,
    /// else on `[0, x)`).
    fn mass_on_unit_interval(&self, x: f64, inclusive: bool) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let atom_mass: f64 = self
            .atoms
            .iter()
            .take_while(|&&(loc, _)| if inclusive { loc <= x } else { loc < x })
            .map(|&(_, m)| m)
            .sum();
        let density_mass: f64 = self
            .density
            .iter()
            .map(|p| {
                if x <= p.lo {
                    0.0
                } else if x >= p.hi {
                    p.mass()
                } else {
                    p.mass_up_to(x)
                }
            })
            .sum();
        atom_mass + density_mass
    }

    /// Generalized inverse `D^{-1}(y) = inf { x : D(x) >= y }` for
    /// `y in (0, 1]`. Returns `f64::NEG_INFINITY` iff `y <= D(-inf)`;
    /// otherwise a point in `[0, 1)`.
    pub fn generalized_inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y <= 1.0) {
            return Err(Error::InverseArgOutOfRange(y));
        }
        if y <= self.mass_at_minus_inf {
            return Ok(f64::NEG_INFINITY);
        }
        let mut cum = self.mass_at_minus_inf;
        let mut atom_idx = 0;
        let mut piece_idx = 0;
        // Walks atoms and (already split, hence non-straddling) density
        // pieces in location order, accumulating mass until y is covered.
        let mut last_support = 0.0;
        loop {
            let next_atom = self.atoms.get(atom_idx);
            let next_piece = self.density.get(piece_idx);
            let atom_first = match (next_atom, next_piece) {
                (Some(&(loc, _)), Some(piece)) => loc <= piece.lo,
                (Some(_), None) => true,
                (None, _) => false,
            };
            match (next_atom, next_piece) {
                (Some(&(loc, mass)), _) if atom_first => {
                    if y <= cum + mass {
                        return Ok(loc);
                    }
                    cum += mass;
                    last_support = loc;
                    atom_idx += 1;
                }
                (_, Some(piece)) => {
                    let mass = piece.mass();
                    if y <= cum + mass {
                        return Ok(invert_within_piece(piece, y - cum));
                    }
                    cum += mass;
                    last_support = piece.hi;
                    piece_idx += 1;
                }
                _ => {
                    // y exceeded the accumulated total by rounding slack only;
                    // return the supremum of the support, clamped into [0,1).
                    let top = if last_support >= 1.0 {
                        f64::from_bits(1.0_f64.to_bits() - 1)
                    } else {
                        last_support
                    };
                    return Ok(top);
                }
            }
        }
    }

    /// Samples the kill quantile at a branch of quantile `j >= 2` from the
    /// uniform draw `u in (0,1]`: no kill iff `D^{-1}(u) = -inf`, otherwise
    /// the `i` with `(i-1)/(j-1) <= D^{-1}(u) < i/(j-1)`. The induced law is
    /// `P(i) = D(i/(j-1)-) - D((i-1)/(j-1)-)`.
    pub fn sample_kill_quantile(&self, j: usize, u: f64) -> Result<KillDecision> {
        if j < 2 {
            return Err(Error::KillQuantileTooSmall(j));
        }
        let x = self.generalized_inverse(u)?;
        if x == f64::NEG_INFINITY {
            return Ok(KillDecision::NoKill);
        }
        let cells = (j - 1) as f64;
        let i = ((x * cells).floor() as usize + 1).clamp(1, j - 1);
        Ok(KillDecision::Kill(i))
    }

    /// Exact kill-law table at a branch of quantile `j`: probabilities for
    /// `i = 1..=j-1` (from CDF left-limit differences) plus the no-kill mass.
    pub fn kill_probabilities(&self, j: usize) -> Result<(Vec<f64>, f64)> {
        if j < 2 {
            return Err(Error::KillQuantileTooSmall(j));
        }
        let cells = (j - 1) as f64;
        let probs = (1..j)
            .map(|i| {
                self.cdf_left(i as f64 / cells) - self.cdf_left((i as f64 - 1.0) / cells)
            })
            .collect();
        Ok((probs, self.mass_at_minus_inf))
    }

    /// Pure-growth measure: all mass at `-inf` (never kills).
    pub fn bbm() -> Self {
        Self::new(1.0, vec![], vec![]).expect("point mass at -inf is valid")
    }

    /// Constant-population measure: point mass at 0 (always kills the
    /// leftmost particle).
    pub fn nbbm() -> Self {
        Self::new(0.0, vec![(0.0, 1.0)], vec![]).expect("point mass at 0 is valid")
    }

    /// Uniform density on `[0,1)`.
    pub fn uniform() -> Self {
        Self::new(
            0.0,
            vec![],
            vec![DensityPiece {
                lo: 0.0,
                hi: 1.0,
                coeffs: vec![1.0],
            }],
        )
        .expect("uniform density is valid")
    }

    /// The order-`k` beta-like measure with density
    /// `k (k-1) r (1-r)^{k-2}` on `[0,1)`, `k >= 2`.
    pub fn dk(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidMeasure(format!(
                "dk preset needs k >= 2, got {k}"
            )));
        }
        // k(k-1) r (1-r)^{k-2} expanded in powers of r.
        let mut coeffs = vec![0.0; k];
        let scale = (k * (k - 1)) as f64;
        let mut binom = 1.0;
        for m in 0..=(k - 2) {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[m + 1] = scale * sign * binom;
            binom = binom * (k - 2 - m) as f64 / (m as f64 + 1.0);
        }
        Self::new(
            0.0,
            vec![],
            vec![DensityPiece {
                lo: 0.0,
                hi: 1.0,
                coeffs,
            }],
        )
    }

    /// Measure with CDF `x^e` on `[0,1)` (density `e x^{e-1}`), `e >= 1`.
    pub fn power_cdf(e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidMeasure("power preset needs e >= 1".into()));
        }
        let mut coeffs = vec![0.0; e];
        coeffs[e - 1] = e as f64;
        Self::new(
            0.0,
            vec![],
            vec![DensityPiece {
                lo: 0.0,
                hi: 1.0,
                coeffs,
            }],
        )
    }

    /// `mass` at `-inf` plus `(1 - mass)` uniform on `[0,1)`.
    pub fn minus_inf_plus_uniform(mass: f64) -> Result<Self> {
        let pieces = if mass < 1.0 {
            vec![DensityPiece {
                lo: 0.0,
                hi: 1.0,
                coeffs: vec![1.0 - mass],
            }]
        } else {
            vec![]
        };
        Self::new(mass, vec![], pieces)
    }
}

/// Splits density pieces at interior atom locations so atoms never sit
/// strictly inside a piece.
fn split_pieces_at_atoms(pieces: Vec<DensityPiece>, atoms: &[(f64, f64)]) -> Vec<DensityPiece> {
    let mut out = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let mut lo = piece.lo;
        for &(loc, _) in atoms {
            if loc > lo && loc < piece.hi {
                out.push(DensityPiece {
                    lo,
                    hi: loc,
                    coeffs: piece.coeffs.clone(),
                });
                lo = loc;
            }
        }
        out.push(DensityPiece {
            lo,
            hi: piece.hi,
            coeffs: piece.coeffs,
        });
    }
    out
}

/// Solves `integral_{piece.lo}^{x} density = target` for `x` by bisection.
/// The piece mass is nonnegative, so the map is nondecreasing; 80 iterations
/// pin the root to the last ulp of the bracket.
fn invert_within_piece(piece: &DensityPiece, target: f64) -> f64 {
    let (mut lo, mut hi) = (piece.lo, piece.hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if piece.mass_up_to(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.min(f64::from_bits(1.0_f64.to_bits() - 1))
}

//! Template-driven orbit iteration and the escape test.
//!
//! Every other module decides boundedness through [`map_step`] and
//! [`exceeds`], so the arithmetic (and therefore every verdict) is shared
//! bit for bit between enumeration, field sweeps and Julia masks.

use num_complex::Complex64;

use crate::templates::TemplateRoot;

/// A point of the complex plane (a parameter `c` or a dynamic variable `z`).
pub type ComplexValue = Complex64;

/// One step of the quadratic family: `z^2 + c`.
#[inline(always)]
pub fn map_step(z: ComplexValue, c: ComplexValue) -> ComplexValue {
    z * z + c
}

/// Escape test against a squared radius.
///
/// An overflowing `|z|^2` counts as escaped, as does NaN (from `inf - inf`
/// after an earlier overflow).
#[inline(always)]
pub fn exceeds(z: ComplexValue, radius_sq: f64) -> bool {
    let n = z.norm_sqr();
    !(n <= radius_sq && n < f64::INFINITY)
}

/// The pair of quadratic parameters `(c0, c1)` together with its escape radius
/// `max(2, |c0|, |c1|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPair {
    c0: ComplexValue,
    c1: ComplexValue,
    radius: f64,
    radius_sq: f64,
}

impl ParamPair {
    pub fn new(c0: ComplexValue, c1: ComplexValue) -> Self {
        let radius = 2.0_f64.max(c0.norm()).max(c1.norm());
        let radius_sq = 4.0_f64.max(c0.norm_sqr()).max(c1.norm_sqr());
        ParamPair {
            c0,
            c1,
            radius,
            radius_sq,
        }
    }

    /// The pair `(c, c)`, whose template orbits are those of the single map `f_c`.
    pub fn diagonal(c: ComplexValue) -> Self {
        Self::new(c, c)
    }

    pub fn c0(&self) -> ComplexValue {
        self.c0
    }

    pub fn c1(&self) -> ComplexValue {
        self.c1
    }

    /// Parameter selected by a template bit.
    #[inline(always)]
    pub fn param(&self, bit: bool) -> ComplexValue {
        if bit {
            self.c1
        } else {
            self.c0
        }
    }

    pub fn escape_radius(&self) -> f64 {
        self.radius
    }

    /// Squared escape radius, computed from `|c|^2` directly so that the hot
    /// loops never take a square root.
    pub fn escape_radius_sq(&self) -> f64 {
        self.radius_sq
    }
}

/// Free-function form of [`ParamPair::escape_radius`].
pub fn escape_radius(pair: &ParamPair) -> f64 {
    pair.escape_radius()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitOutcome {
    Survived,
    /// First step `n >= 1` with `|xi_n| > R_e`.
    Escaped { step: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitResult {
    pub outcome: OrbitOutcome,
    /// `|xi_n|` at the escape step, or `|xi_N|` after a surviving run.
    /// Non-finite moduli are reported as `+inf`.
    pub final_modulus: f64,
}

impl OrbitResult {
    pub fn survived(&self) -> bool {
        self.outcome == OrbitOutcome::Survived
    }

    pub fn escape_step(&self) -> Option<usize> {
        match self.outcome {
            OrbitOutcome::Survived => None,
            OrbitOutcome::Escaped { step } => Some(step),
        }
    }
}

fn modulus(z: ComplexValue) -> f64 {
    let m = z.norm();
    if m.is_finite() {
        m
    } else {
        f64::INFINITY
    }
}

/// Iterates `xi0` along a sequence of template bits, stopping at the first
/// step whose modulus exceeds the escape radius. A modulus equal to the
/// radius is still bounded.
pub fn iterate_bits<I>(pair: &ParamPair, bits: I, xi0: ComplexValue) -> OrbitResult
where
    I: IntoIterator<Item = bool>,
{
    let radius_sq = pair.escape_radius_sq();
    let mut z = xi0;
    for (n, bit) in bits.into_iter().enumerate() {
        z = map_step(z, pair.param(bit));
        if exceeds(z, radius_sq) {
            return OrbitResult {
                outcome: OrbitOutcome::Escaped { step: n + 1 },
                final_modulus: modulus(z),
            };
        }
    }
    OrbitResult {
        outcome: OrbitOutcome::Survived,
        final_modulus: modulus(z),
    }
}

/// Applies `f_{c_{s_1}}, ..., f_{c_{s_N}}` to `xi0` in order.
pub fn iterate_root(pair: &ParamPair, root: &TemplateRoot, xi0: ComplexValue) -> OrbitResult {
    iterate_bits(pair, root.iter(), xi0)
}

/// Whether the critical orbit (`xi0 = 0`) stays within the escape radius
/// along the whole root.
pub fn survives(pair: &ParamPair, root: &TemplateRoot) -> bool {
    iterate_root(pair, root, ComplexValue::new(0.0, 0.0)).survived()
}

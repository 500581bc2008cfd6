// SPDX-License-Identifier: Apache-2.0

//! Commutator algebras on span{X, Y, Z, I} and their Jacobi classification.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the ten structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    U,
    V,
    C,
    W,
    Z,
    D,
    M,
    N,
    P,
    E,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::U,
        Param::V,
        Param::C,
        Param::W,
        Param::Z,
        Param::D,
        Param::M,
        Param::N,
        Param::P,
        Param::E,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::U => "u",
            Param::V => "v",
            Param::C => "c",
            Param::W => "w",
            Param::Z => "z",
            Param::D => "d",
            Param::M => "m",
            Param::N => "n",
            Param::P => "p",
            Param::E => "e",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown parameter `{s}`")))
    }
}

/// Structure constants of
///
/// ```text
/// [X,Y] = uX + vY + cI,   [Y,Z] = wY + zZ + dI,   [X,Z] = mX + nY + pZ + eI
/// ```
///
/// with `I` central.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraSpec {
    pub u: C64,
    pub v: C64,
    pub c: C64,
    pub w: C64,
    pub z: C64,
    pub d: C64,
    pub m: C64,
    pub n: C64,
    pub p: C64,
    pub e: C64,
}

impl AlgebraSpec {
    pub fn get(&self, p: Param) -> C64 {
        match p {
            Param::U => self.u,
            Param::V => self.v,
            Param::C => self.c,
            Param::W => self.w,
            Param::Z => self.z,
            Param::D => self.d,
            Param::M => self.m,
            Param::N => self.n,
            Param::P => self.p,
            Param::E => self.e,
        }
    }

    pub fn set(&mut self, p: Param, value: C64) {
        *match p {
            Param::U => &mut self.u,
            Param::V => &mut self.v,
            Param::C => &mut self.c,
            Param::W => &mut self.w,
            Param::Z => &mut self.z,
            Param::D => &mut self.d,
            Param::M => &mut self.m,
            Param::N => &mut self.n,
            Param::P => &mut self.p,
            Param::E => &mut self.e,
        } = value;
    }

    pub fn with(mut self, p: Param, value: impl Into<C64>) -> Self {
        self.set(p, value.into());
        self
    }

    /// Largest parameter modulus.
    pub fn max_modulus(&self) -> f64 {
        Param::ALL.iter().map(|&p| self.get(p).norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        Param::ALL.iter().all(|&p| {
            let x = self.get(p);
            x.re.is_finite() && x.im.is_finite()
        })
    }

    /// Structure constants after `X, Y, Z -> sigma X, sigma Y, sigma Z`: the
    /// linear coefficients scale by `sigma`, the central ones by `sigma^2`.
    pub fn rescaled(&self, sigma: f64) -> Self {
        let s2 = sigma * sigma;
        AlgebraSpec {
            u: self.u * sigma,
            v: self.v * sigma,
            c: self.c * s2,
            w: self.w * sigma,
            z: self.z * sigma,
            d: self.d * s2,
            m: self.m * sigma,
            n: self.n * sigma,
            p: self.p * sigma,
            e: self.e * s2,
        }
    }

    /// Structure constants after `Y -> lambda Y` with `X, Z` fixed.
    pub fn with_y_scaled(&self, lambda: f64) -> Self {
        AlgebraSpec {
            u: self.u * lambda,
            v: self.v,
            c: self.c * lambda,
            w: self.w,
            z: self.z * lambda,
            d: self.d * lambda,
            m: self.m,
            n: self.n / lambda,
            p: self.p,
            e: self.e,
        }
    }

    /// Homogeneous size used for scale discipline: the largest linear
    /// coefficient or square root of a central one.
    pub fn homogeneous_scale(&self) -> f64 {
        let lin = [self.u, self.v, self.w, self.z, self.m, self.n, self.p];
        let cen = [self.c, self.d, self.e];
        let a = lin.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let b = cen.iter().map(|x| x.norm().sqrt()).fold(0.0, f64::max);
        a.max(b)
    }
}

/// Left-hand sides of the linear system the Jacobi identity imposes on the
/// structure constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiResidual {
    pub r1: C64,
    pub r2: C64,
    pub r3: C64,
    pub r4: C64,
}

impl JacobiResidual {
    pub fn max_modulus(&self) -> f64 {
        [self.r1, self.r2, self.r3, self.r4].iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// `(uw + mz, vm - wp + n(z - u), pu + zv, c(w + m) + e(z - u) - d(p + v))`.
pub fn jacobi_residual(spec: &AlgebraSpec) -> JacobiResidual {
    let AlgebraSpec { u, v, c, w, z, d, m, n, p, e } = *spec;
    JacobiResidual {
        r1: u * w + m * z,
        r2: v * m - w * p + n * (z - u),
        r3: p * u + z * v,
        r4: c * (w + m) + e * (z - u) - d * (p + v),
    }
}

/// The thirteen Jacobi-consistent families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeTag {
    T1a,
    T1b,
    T1cI,
    T1cII,
    T1cIII,
    T1cIV,
    T1cV,
    T2a,
    T2b,
    T3a,
    T3b,
    T4,
    T5,
}

impl TypeTag {
    pub const ALL: [TypeTag; 13] = [
        TypeTag::T1a,
        TypeTag::T1b,
        TypeTag::T1cI,
        TypeTag::T1cII,
        TypeTag::T1cIII,
        TypeTag::T1cIV,
        TypeTag::T1cV,
        TypeTag::T2a,
        TypeTag::T2b,
        TypeTag::T3a,
        TypeTag::T3b,
        TypeTag::T4,
        TypeTag::T5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TypeTag::T1a => "T1a",
            TypeTag::T1b => "T1b",
            TypeTag::T1cI => "T1c_i",
            TypeTag::T1cII => "T1c_ii",
            TypeTag::T1cIII => "T1c_iii",
            TypeTag::T1cIV => "T1c_iv",
            TypeTag::T1cV => "T1c_v",
            TypeTag::T2a => "T2a",
            TypeTag::T2b => "T2b",
            TypeTag::T3a => "T3a",
            TypeTag::T3b => "T3b",
            TypeTag::T4 => "T4",
            TypeTag::T5 => "T5",
        }
    }

    /// Parameters left free by the Jacobi identity, in canonical order.
    pub fn free_params(self) -> &'static [Param] {
        use Param::*;
        match self {
            TypeTag::T1a => &[V, C, W, D, N, E],
            TypeTag::T1b => &[V, C, W, M, N, E],
            TypeTag::T1cI => &[V, W, M, N, E],
            TypeTag::T1cII => &[C, D, M, N, E],
            TypeTag::T1cIII => &[W, D, M, N, E],
            TypeTag::T1cIV => &[V, C, N, P, E],
            TypeTag::T1cV => &[M, N, P, E],
            TypeTag::T2a => &[C, Z, D, P],
            TypeTag::T2b => &[C, W, Z, D, N],
            TypeTag::T3a => &[U, C, D, M],
            TypeTag::T3b => &[U, V, C, D, N],
            TypeTag::T4 => &[U, V, C, W, D, N, E],
            TypeTag::T5 => &[U, V, C, W, Z, D],
        }
    }

    /// The subscript `D` of the classification table. For 1c-iii and 1c-iv the
    /// table reads "4 or 5"; this is the generic value 5.
    pub fn table_dimension(self) -> usize {
        match self {
            TypeTag::T1a | TypeTag::T1b | TypeTag::T5 => 6,
            TypeTag::T1cI | TypeTag::T1cII | TypeTag::T1cIII | TypeTag::T1cIV => 5,
            TypeTag::T1cV | TypeTag::T2a | TypeTag::T3a => 4,
            TypeTag::T2b | TypeTag::T3b => 5,
            TypeTag::T4 => 8,
        }
    }

    fn index(self) -> u64 {
        TypeTag::ALL.iter().position(|&t| t == self).unwrap() as u64
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TypeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TypeTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algebra type `{s}`")))
    }
}

/// A classified algebra type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraType {
    pub tag: TypeTag,
    pub free_params: Vec<Param>,
    pub dimension: usize,
}

impl AlgebraType {
    pub fn new(tag: TypeTag) -> Self {
        AlgebraType {
            tag,
            free_params: tag.free_params().to_vec(),
            dimension: tag.table_dimension(),
        }
    }

    /// Parameters fixed (to zero or by a constraint) by the Jacobi identity.
    pub fn constrained_params(&self) -> Vec<Param> {
        Param::ALL.into_iter().filter(|p| !self.free_params.contains(p)).collect()
    }
}

impl From<TypeTag> for AlgebraType {
    fn from(tag: TypeTag) -> Self {
        AlgebraType::new(tag)
    }
}

struct ZeroTest {
    tol: f64,
}

impl ZeroTest {
    fn is_zero(&self, quantity: &'static str, x: f64) -> Result<bool> {
        if x <= self.tol {
            Ok(true)
        } else if x < 10.0 * self.tol {
            Err(Error::AmbiguousClassification {
                quantity,
                magnitude: x,
                tol: self.tol,
                band: 10.0 * self.tol,
            })
        } else {
            Ok(false)
        }
    }
}

/// Classify a Jacobi-consistent spec.
///
/// Zero tests are relative: every parameter is divided by the largest
/// parameter modulus before comparison with `tol`, and products of two
/// parameters by its square.
pub fn classify(spec: &AlgebraSpec, tol: f64) -> Result<AlgebraType> {
    if !spec.is_finite() {
        return Err(Error::InvalidArgument("non-finite structure constant".into()));
    }
    let scale = spec.max_modulus();
    if scale == 0.0 {
        return Ok(AlgebraType::new(TypeTag::T1cV));
    }
    let jr = jacobi_residual(spec).max_modulus() / (scale * scale);
    if jr > tol {
        return Err(Error::JacobiViolation { residual: jr, tol });
    }
    let q = |x: C64| x.norm() / scale;
    let q2 = |x: C64| x.norm() / (scale * scale);
    let zt = ZeroTest { tol };
    let AlgebraSpec { u, v, c, w, z, d, .. } = *spec;

    let u0 = zt.is_zero("u", q(u))?;
    let z0 = zt.is_zero("z", q(z))?;
    let tag = match (u0, z0) {
        (true, true) => {
            if !zt.is_zero("cw - dv", q2(c * w - d * v))? {
                TypeTag::T1a
            } else if !zt.is_zero("cw", q2(c * w))? {
                TypeTag::T1b
            } else {
                let v0 = zt.is_zero("v", q(v))?;
                let w0 = zt.is_zero("w", q(w))?;
                let c0 = zt.is_zero("c", q(c))?;
                let d0 = zt.is_zero("d", q(d))?;
                if !v0 && !w0 {
                    TypeTag::T1cI
                } else if !c0 && !d0 {
                    TypeTag::T1cII
                } else if !d0 || !w0 {
                    TypeTag::T1cIII
                } else if !c0 || !v0 {
                    TypeTag::T1cIV
                } else {
                    TypeTag::T1cV
                }
            }
        }
        (true, false) => {
            if zt.is_zero("w", q(w))? {
                TypeTag::T2a
            } else {
                TypeTag::T2b
            }
        }
        (false, true) => {
            if zt.is_zero("v", q(v))? {
                TypeTag::T3a
            } else {
                TypeTag::T3b
            }
        }
        (false, false) => {
            if zt.is_zero("u - z", q(u - z))? {
                TypeTag::T4
            } else {
                TypeTag::T5
            }
        }
    };

    let mut ty = AlgebraType::new(tag);
    // 1c-iii and 1c-iv lose one free parameter when only one of the pair survives.
    let pair = match tag {
        TypeTag::T1cIII => Some((Param::W, Param::D)),
        TypeTag::T1cIV => Some((Param::V, Param::C)),
        _ => None,
    };
    if let Some((a, b)) = pair {
        let a0 = q(spec.get(a)) <= tol;
        let b0 = q(spec.get(b)) <= tol;
        if a0 || b0 {
            let dropped = if a0 { a } else { b };
            ty.free_params.retain(|&p| p != dropped);
            ty.dimension = 4;
        }
    }
    Ok(ty)
}

fn div(num: C64, den: C64, what: &'static str) -> Result<C64> {
    if den.norm() == 0.0 {
        Err(Error::DegenerateDivision(what))
    } else {
        Ok(num / den)
    }
}

/// Fill in the constrained parameters of a type from its free ones.
pub fn complete_spec(ty: &AlgebraType, free_values: &BTreeMap<Param, C64>) -> Result<AlgebraSpec> {
    let free = ty.tag.free_params();
    for p in free {
        if !free_values.contains_key(p) {
            return Err(Error::MissingParameter(p.name()));
        }
    }
    for p in free_values.keys() {
        if !free.contains(p) {
            return Err(Error::ExtraneousParameter(p.name()));
        }
    }
    let mut s = AlgebraSpec::default();
    for (&p, &x) in free_values {
        s.set(p, x);
    }
    match ty.tag {
        TypeTag::T1a => {
            s.m = -s.w;
            s.p = -s.v;
        }
        TypeTag::T1b => {
            s.d = div(s.c * s.w, s.v, "v")?;
            s.p = div(s.v * s.m, s.w, "w")?;
        }
        TypeTag::T1cI => {
            s.p = div(s.m * s.v, s.w, "w")?;
        }
        TypeTag::T1cII => {
            s.p = div(s.c * s.m, s.d, "d")?;
        }
        TypeTag::T1cIII => {
            s.p = C64::new(0.0, 0.0);
        }
        TypeTag::T1cIV => {
            s.m = C64::new(0.0, 0.0);
        }
        TypeTag::T1cV => {}
        TypeTag::T2a => {
            s.e = div(s.p * s.d, s.z, "z")?;
        }
        TypeTag::T2b => {
            s.p = div(s.n * s.z, s.w, "w")?;
            s.e = div(s.d * s.n, s.w, "w")? - div(s.c * s.w, s.z, "z")?;
        }
        TypeTag::T3a => {
            s.e = div(s.c * s.m, s.u, "u")?;
        }
        TypeTag::T3b => {
            s.m = div(s.n * s.u, s.v, "v")?;
            s.e = div(s.c * s.n, s.v, "v")? - div(s.d * s.v, s.u, "u")?;
        }
        TypeTag::T4 => {
            s.z = s.u;
            s.m = -s.w;
            s.p = -s.v;
        }
        TypeTag::T5 => {
            let (u, v, c, w, z, d) = (s.u, s.v, s.c, s.w, s.z, s.d);
            s.m = -div(u * w, z, "z")?;
            s.n = -v * w * (div(1.0.into(), u, "u")? + div(1.0.into(), z, "z")?);
            s.p = -div(v * z, u, "u")?;
            s.e = -div(c * w, z, "z")? - div(d * v, u, "u")?;
        }
    }
    Ok(s)
}

/// Quantities that must stay away from zero for a sampled spec of a type to
/// be well separated from neighbouring types and from the degenerate
/// denominators of its alpha formula. Each entry is `(value, degree)`.
pub(crate) fn separation_quantities(tag: TypeTag, s: &AlgebraSpec) -> Vec<(C64, i32)> {
    let AlgebraSpec { u, v, c, w, z, d, m, n: _, p, e: _ } = *s;
    match tag {
        TypeTag::T1a => vec![(c * w - d * v, 2), (v - w, 1)],
        TypeTag::T1b => vec![(c * w, 2), (v, 1), (w, 1), (m - w, 1), (v - w, 1)],
        TypeTag::T1cI => vec![(v, 1), (w, 1), (m - w, 1), (v - w, 1)],
        TypeTag::T1cII => vec![(c, 1), (d, 1), (m, 1), (d - c, 1)],
        TypeTag::T1cIII => vec![(m - w, 1)],
        TypeTag::T1cIV => vec![(p - v, 1)],
        TypeTag::T1cV => vec![(m - p, 1)],
        TypeTag::T2a => vec![(z, 1)],
        TypeTag::T2b => vec![(w, 1), (z, 1)],
        TypeTag::T3a => vec![(u, 1)],
        TypeTag::T3b => vec![(u, 1), (v, 1)],
        TypeTag::T4 => vec![(u, 1)],
        TypeTag::T5 => vec![(u, 1), (z, 1), (u - z, 1)],
    }
}

fn random_complex(rng: &mut ChaCha8Rng, scale: f64) -> C64 {
    let r = rng.gen_range(0.1 * scale..=scale);
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, theta)
}

/// Deterministic pseudo-random Jacobi-consistent spec of the given type.
///
/// Free parameters have modulus in `[scale/10, scale]`. Defining
/// inequalities and alpha-formula denominators are kept at least `scale/10`
/// (per power of the parameters) from zero by rejection.
pub fn sample_spec(tag: TypeTag, seed: u64, scale: f64) -> Result<AlgebraSpec> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ tag.index());
    let ty = AlgebraType::new(tag);
    for _ in 0..10_000 {
        let mut free = BTreeMap::new();
        for &p in tag.free_params() {
            free.insert(p, random_complex(&mut rng, scale));
        }
        // The one-sided subcases (d), (w), (c), (v) belong to 1c-iii / 1c-iv too.
        if matches!(tag, TypeTag::T1cIII | TypeTag::T1cIV) {
            let (a, b) = if tag == TypeTag::T1cIII { (Param::W, Param::D) } else { (Param::V, Param::C) };
            match rng.gen_range(0..4) {
                0 => {
                    free.insert(a, C64::new(0.0, 0.0));
                }
                1 => {
                    free.insert(b, C64::new(0.0, 0.0));
                }
                _ => {}
            }
        }
        let spec = complete_spec(&ty, &free)?;
        let ok = separation_quantities(tag, &spec)
            .iter()
            .all(|&(x, deg)| x.norm() >= 0.1 * scale.powi(deg));
        if ok {
            return Ok(spec);
        }
    }
    Err(Error::InvalidArgument(format!("could not sample a well-separated {tag} spec")))
}

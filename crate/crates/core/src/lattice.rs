//! The rank-2 Néron–Severi lattice `ℤΘ ⊕ ℤf` and Chern character tables.
//!
//! Intersections: `Θ² = −e`, `Θ·f = 1`, `f² = 0`. A class is recorded by its
//! table `(n, d, c, s) = (ch₀, f·ch₁, Θ·ch₁, ch₂)`; with Picard rank two the
//! first Chern class is recovered as `c₁ = dΘ + (c + e·d)f`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::rational::{fmt_q, half, is_half_integer, q, qstr, qz, zint, Q, Z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceGeometry {
    /// `e = −Θ²`; `e = 2` for an elliptic K3.
    pub e: i64,
}

impl SurfaceGeometry {
    pub fn new(e: i64) -> Result<Self> {
        require(e >= 1, || format!("surface invariant e = -Θ² must be ≥ 1, got {e}"))?;
        Ok(Self { e })
    }

    pub fn k3() -> Self {
        Self { e: 2 }
    }

    pub fn is_k3(&self) -> bool {
        self.e == 2
    }

    pub fn eq(&self) -> Q {
        q(self.e)
    }

    pub fn ez(&self) -> Z {
        Z::from(self.e)
    }

    /// `e/2`
    pub fn half_e(&self) -> Q {
        self.eq() * half()
    }
}

/// `alpha·Θ + beta·f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Divisor {
    #[serde(with = "qstr")]
    pub alpha: Q,
    #[serde(with = "qstr")]
    pub beta: Q,
}

impl Divisor {
    pub fn new(alpha: Q, beta: Q) -> Self {
        Self { alpha, beta }
    }

    pub fn ints(alpha: i64, beta: i64) -> Self {
        Self::new(q(alpha), q(beta))
    }

    pub fn zero() -> Self {
        Self::ints(0, 0)
    }

    pub fn theta() -> Self {
        Self::ints(1, 0)
    }

    pub fn fiber() -> Self {
        Self::ints(0, 1)
    }

    pub fn is_integral(&self) -> bool {
        self.alpha.is_integer() && self.beta.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self::new(&self.alpha * t, &self.beta * t)
    }

    /// `D·f`
    pub fn dot_fiber(&self) -> Q {
        self.alpha.clone()
    }

    /// `D·Θ`
    pub fn dot_theta(&self, g: SurfaceGeometry) -> Q {
        &self.beta - &self.alpha * g.eq()
    }

    pub fn square(&self, g: SurfaceGeometry) -> Q {
        pair(self, self, g)
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        Divisor::new(&self.alpha + &rhs.alpha, &self.beta + &rhs.beta)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::new(-&self.alpha, -&self.beta)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})Θ + ({})f", self.alpha, self.beta)
    }
}

/// Numerical class `(ch₀, f·ch₁, Θ·ch₁, ch₂)` in `ℤ ⊕ ℤ ⊕ ℤ ⊕ ½ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct ChernTable {
    #[serde(with = "zint")]
    pub n: Z,
    #[serde(with = "zint")]
    pub d: Z,
    #[serde(with = "zint")]
    pub c: Z,
    #[serde(with = "qstr")]
    pub s: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    #[serde(with = "zint")]
    n: Z,
    #[serde(with = "zint")]
    d: Z,
    #[serde(with = "zint")]
    c: Z,
    #[serde(with = "qstr")]
    s: Q,
}

impl TryFrom<RawTable> for ChernTable {
    type Error = Error;
    fn try_from(r: RawTable) -> Result<Self> {
        ChernTable::new(r.n, r.d, r.c, r.s).map_err(|e| Error::Schema(e.to_string()))
    }
}

impl ChernTable {
    pub fn new(n: Z, d: Z, c: Z, s: Q) -> Result<Self> {
        require(is_half_integer(&s), || format!("ch2 must lie in ½ℤ, got {}", fmt_q(&s)))?;
        Ok(Self { n, d, c, s })
    }

    /// Panics unless `2s ∈ ℤ`; for literals.
    pub fn from_i64(n: i64, d: i64, c: i64, s: Q) -> Self {
        Self::new(Z::from(n), Z::from(d), Z::from(c), s).expect("ch2 must lie in ½ℤ")
    }

    pub fn ints(n: i64, d: i64, c: i64, s: i64) -> Self {
        Self::from_i64(n, d, c, q(s))
    }

    pub fn zero() -> Self {
        Self::ints(0, 0, 0, 0)
    }

    /// The four generators `(1,0,0,0)`, `(0,1,0,0)`, `(0,0,1,0)`, `(0,0,0,1)`.
    pub fn basis() -> [ChernTable; 4] {
        [Self::ints(1, 0, 0, 0), Self::ints(0, 1, 0, 0), Self::ints(0, 0, 1, 0), Self::ints(0, 0, 0, 1)]
    }

    /// `s − d·c − (e/2)d² ∈ ℤ`, i.e. `ch₂ − c₁²/2` is integral.
    pub fn is_geometric_integral(&self, g: SurfaceGeometry) -> bool {
        let c1_sq_half = qz(&(&self.d * &self.c)) + g.half_e() * qz(&(&self.d * &self.d));
        (&self.s - c1_sq_half).is_integer()
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Z::from(k);
        Self { n: &self.n * &k, d: &self.d * &k, c: &self.c * &k, s: &self.s * qz(&k) }
    }

    /// `f·ch₁ / ch₀`; `None` on rank zero.
    pub fn mu_f(&self) -> Option<Q> {
        if self.n.is_zero() {
            None
        } else {
            Some(Q::new(self.d.clone(), self.n.clone()))
        }
    }
}

impl Add for &ChernTable {
    type Output = ChernTable;
    fn add(self, rhs: &ChernTable) -> ChernTable {
        ChernTable { n: &self.n + &rhs.n, d: &self.d + &rhs.d, c: &self.c + &rhs.c, s: &self.s + &rhs.s }
    }
}

impl Sub for &ChernTable {
    type Output = ChernTable;
    fn sub(self, rhs: &ChernTable) -> ChernTable {
        ChernTable { n: &self.n - &rhs.n, d: &self.d - &rhs.d, c: &self.c - &rhs.c, s: &self.s - &rhs.s }
    }
}

impl Neg for &ChernTable {
    type Output = ChernTable;
    fn neg(self) -> ChernTable {
        shift1(self)
    }
}

impl fmt::Display for ChernTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.d, self.c, self.s)
    }
}

/// A table with rational entries. Twisted characters `e^{−B}·ch` live here,
/// and so does the rational extension of the lattice, on which the
/// transforms below act without any integrality hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTable {
    #[serde(with = "qstr")]
    pub ch0: Q,
    #[serde(with = "qstr")]
    pub f_ch1: Q,
    #[serde(with = "qstr")]
    pub theta_ch1: Q,
    #[serde(with = "qstr")]
    pub ch2: Q,
}

impl QTable {
    pub fn new(ch0: Q, f_ch1: Q, theta_ch1: Q, ch2: Q) -> Self {
        Self { ch0, f_ch1, theta_ch1, ch2 }
    }

    /// `ω·ch₁` for `ω = Θ + b·f`.
    pub fn omega_ch1(&self, b: &Q) -> Q {
        &self.theta_ch1 + b * &self.f_ch1
    }

    pub fn to_chern(&self) -> Result<ChernTable> {
        require(self.ch0.is_integer() && self.f_ch1.is_integer() && self.theta_ch1.is_integer(), || {
            format!(
                "({}, {}, {}, {}) is not in ℤ⊕ℤ⊕ℤ⊕½ℤ",
                fmt_q(&self.ch0),
                fmt_q(&self.f_ch1),
                fmt_q(&self.theta_ch1),
                fmt_q(&self.ch2)
            )
        })?;
        ChernTable::new(self.ch0.to_integer(), self.f_ch1.to_integer(), self.theta_ch1.to_integer(), self.ch2.clone())
    }
}

impl From<&ChernTable> for QTable {
    fn from(v: &ChernTable) -> Self {
        QTable::new(qz(&v.n), qz(&v.d), qz(&v.c), v.s.clone())
    }
}

impl From<&QTable> for QTable {
    fn from(v: &QTable) -> Self {
        v.clone()
    }
}

impl Neg for &QTable {
    type Output = QTable;
    fn neg(self) -> QTable {
        QTable::new(-&self.ch0, -&self.f_ch1, -&self.theta_ch1, -&self.ch2)
    }
}

/// Intersection pairing on `NS(X)_ℚ`: `−e·α₁α₂ + α₁β₂ + α₂β₁`.
pub fn pair(d1: &Divisor, d2: &Divisor, g: SurfaceGeometry) -> Q {
    -(g.eq() * &d1.alpha * &d2.alpha) + &d1.alpha * &d2.beta + &d2.alpha * &d1.beta
}

pub fn c1_of(v: &ChernTable, g: SurfaceGeometry) -> Divisor {
    Divisor::new(qz(&v.d), qz(&(&v.c + g.ez() * &v.d)))
}

/// `ch(v)·e^{D}`.
pub fn multiply_by_exp(v: &QTable, div: &Divisor, g: SurfaceGeometry) -> QTable {
    let (a, b) = (&div.alpha, &div.beta);
    let (n, d, c, s) = (&v.ch0, &v.f_ch1, &v.theta_ch1, &v.ch2);
    QTable::new(n.clone(), d + n * a, c + n * (b - a * g.eq()), s + a * c + b * d + n * div.square(g) * half())
}

pub fn twist_q(v: &QTable, b: &Divisor, g: SurfaceGeometry) -> QTable {
    multiply_by_exp(v, &-b, g)
}

pub fn twist(v: &ChernTable, b: &Divisor, g: SurfaceGeometry) -> QTable {
    twist_q(&v.into(), b, g)
}

/// `v ↦ ch(E ⊗ 𝒪(D))` for an integral divisor `D`.
pub fn tensor(v: &ChernTable, div: &Divisor, g: SurfaceGeometry) -> Result<ChernTable> {
    require(div.is_integral(), || format!("tensor needs an integral divisor, got {div}"))?;
    multiply_by_exp(&v.into(), div, g).to_chern().map_err(|e| Error::Internal(format!("tensor left the lattice: {e}")))
}

/// `Υ_k: E ↦ E ⊗ 𝒪(−kΘ)`.
pub fn upsilon(v: &ChernTable, k: &Z, g: SurfaceGeometry) -> ChernTable {
    let kn = k * &v.n;
    let s = &v.s - qz(&(k * &v.c)) - g.half_e() * qz(&(k * &kn));
    ChernTable { n: v.n.clone(), d: &v.d - &kn, c: &v.c + g.ez() * &kn, s }
}

/// Action of the relative Fourier–Mukai transform `Φ` on rational tables.
pub fn phi_q(v: &QTable, g: SurfaceGeometry) -> QTable {
    let (n, d, c, s) = (&v.ch0, &v.f_ch1, &v.theta_ch1, &v.ch2);
    let (e, he) = (g.eq(), g.half_e());
    QTable::new(d.clone(), -n, s - &he * d + &e * n, -(c + &e * d - &he * n))
}

/// Action of the quasi-inverse `Φ̂` on rational tables; `Φ̂Φ[1] ≅ id`.
pub fn phihat_q(v: &QTable, g: SurfaceGeometry) -> QTable {
    let (n, d, c, s) = (&v.ch0, &v.f_ch1, &v.theta_ch1, &v.ch2);
    let (e, he) = (g.eq(), g.half_e());
    QTable::new(d.clone(), -n, s + &he * d + &e * n, -(c + &e * d + &he * n))
}

pub fn dual_d_q(v: &QTable) -> QTable {
    QTable::new(-&v.ch0, v.f_ch1.clone(), v.theta_ch1.clone(), -&v.ch2)
}

fn transform_in_lattice(v: &ChernTable, out: QTable, name: &str) -> Result<ChernTable> {
    out.to_chern().map_err(|_| {
        Error::Precondition(format!(
            "{name} maps {v} outside the lattice; only classes with ch₂ − c₁²/2 ∈ ℤ stay integral"
        ))
    })
}

/// `Φ` on the lattice. Defined exactly on classes with `ch₂ − c₁²/2 ∈ ℤ`
/// (classes of objects); elsewhere `Θ·ch₁(Φv)` is a half-integer.
pub fn phi(v: &ChernTable, g: SurfaceGeometry) -> Result<ChernTable> {
    transform_in_lattice(v, phi_q(&v.into(), g), "Φ")
}

pub fn phihat(v: &ChernTable, g: SurfaceGeometry) -> Result<ChernTable> {
    transform_in_lattice(v, phihat_q(&v.into(), g), "Φ̂")
}

/// `[1]`: negate every entry.
pub fn shift1(v: &ChernTable) -> ChernTable {
    ChernTable { n: -&v.n, d: -&v.d, c: -&v.c, s: -&v.s }
}

/// `E ↦ E^D = RHom(E, 𝒪)[1]`: `(n, d, c, s) ↦ (−n, d, c, −s)`.
pub fn dual_d(v: &ChernTable) -> ChernTable {
    ChernTable { n: -&v.n, d: v.d.clone(), c: v.c.clone(), s: -&v.s }
}

/// `Φ[1]` followed by the derived dual: `Φ(v)^∨` in the rational extension.
pub fn phi_shift_dual_q(v: &QTable, g: SurfaceGeometry) -> QTable {
    dual_d_q(&-&phi_q(v, g))
}

pub fn phi_shift_dual(v: &ChernTable, g: SurfaceGeometry) -> Result<ChernTable> {
    Ok(dual_d(&shift1(&phi(v, g)?)))
}

/// The six tables of the `Ψ_m` diagram, in arrow order:
/// `v →Φ[1]→ ·  →D→ · →⊗𝒪(−mΘ)→ · →Φ[1]→ · →D→ Ψ_m(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiDiagram {
    pub m: u64,
    pub input: ChernTable,
    pub after_phi: ChernTable,
    pub after_dual: ChernTable,
    pub after_twist: ChernTable,
    pub after_phi_again: ChernTable,
    pub output: ChernTable,
}

fn psi_precondition(v: &ChernTable, m: u64) -> Result<Z> {
    require(v.n > v.d && v.d.is_positive(), || format!("Ψ_m needs n > d > 0, got {v}"))?;
    let mz = Z::from(m);
    let r = &v.n - &mz * &v.d;
    require(m >= 1 && !r.is_negative() && r < v.d, || {
        format!("Ψ_m needs n = m·d + r with 0 ≤ r < d; m = {m} does not fit {v}")
    })?;
    Ok(r)
}

/// Runs the five arrows through the lattice primitives.
pub fn psi_m_diagram(v: &ChernTable, m: u64, g: SurfaceGeometry) -> Result<PsiDiagram> {
    psi_precondition(v, m)?;
    let after_phi = shift1(&phi(v, g)?);
    let after_dual = dual_d(&after_phi);
    let after_twist = upsilon(&after_dual, &Z::from(m), g);
    let after_phi_again = shift1(&phi(&after_twist, g)?);
    let output = dual_d(&after_phi_again);
    Ok(PsiDiagram { m, input: v.clone(), after_phi, after_dual, after_twist, after_phi_again, output })
}

/// `Ψ_m(n, d, c, s) = (r, d, c − m(s + e·r) − (e/2)·d·m², s)`, `n = m·d + r`.
pub fn psi_m_closed(v: &ChernTable, m: u64, g: SurfaceGeometry) -> Result<ChernTable> {
    let r = psi_precondition(v, m)?;
    let mq = q(m as i64);
    let c = qz(&v.c) - &mq * (&v.s + qz(&(g.ez() * &r))) - g.half_e() * qz(&v.d) * &mq * &mq;
    debug_assert!(c.is_integer());
    Ok(ChernTable { n: r, d: v.d.clone(), c: c.to_integer(), s: v.s.clone() })
}

/// Closed form, cross-checked against the diagram on every call.
pub fn psi_m(v: &ChernTable, m: u64, g: SurfaceGeometry) -> Result<ChernTable> {
    let closed = psi_m_closed(v, m, g)?;
    let chain = psi_m_diagram(v, m, g)?.output;
    if chain != closed {
        return Err(Error::Internal(format!(
            "Ψ_{m} closed form {closed} disagrees with the diagram composition {chain} on {v}"
        )));
    }
    Ok(closed)
}

/// `Δ = c₁² − 2·ch₀·ch₂ = 2dc + e·d² − 2ns`.
pub fn delta(v: &ChernTable, g: SurfaceGeometry) -> Q {
    qz(&(Z::from(2) * &v.d * &v.c + g.ez() * &v.d * &v.d)) - q(2) * qz(&v.n) * &v.s
}

/// `Δ_e = Δ − e·ch₀²`, invariant under `Φ[1]`, line-bundle twists and duals.
pub fn delta_e(v: &ChernTable, g: SurfaceGeometry) -> Q {
    delta(v, g) - qz(&(g.ez() * &v.n * &v.n))
}

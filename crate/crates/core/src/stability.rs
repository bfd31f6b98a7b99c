//! Central charges `Z_{a,B,ω} = −ch₂^B + a·ch₀ + i·ω·ch₁^B`, exact phase
//! comparison, slopes, discriminants and the closed-form chamber bounds.
//!
//! Throughout `B = pΘ + qf` and `ω = Θ + bf`, so `ω² = 2b − e`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{require, Error, Result};
use crate::lattice::{c1_of, delta, pair, twist, twist_q, ChernTable, Divisor, QTable, SurfaceGeometry};
use crate::rational::{fmt_q, half, max_q, q, qstr, qstr_opt, qz, Q, Z};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabParams {
    #[serde(with = "qstr")]
    pub a: Q,
    #[serde(with = "qstr")]
    pub p: Q,
    #[serde(with = "qstr")]
    pub q: Q,
    #[serde(with = "qstr")]
    pub b: Q,
}

impl StabParams {
    pub fn new(a: Q, p: Q, q: Q, b: Q) -> Self {
        Self { a, p, q, b }
    }

    pub fn b_field(&self) -> Divisor {
        Divisor::new(self.p.clone(), self.q.clone())
    }

    pub fn omega(&self) -> Divisor {
        Divisor::new(q(1), self.b.clone())
    }

    /// `U = 2a + e`
    pub fn u(&self, g: SurfaceGeometry) -> Q {
        q(2) * &self.a + g.eq()
    }

    /// `V = ω² = 2b − e`
    pub fn v(&self, g: SurfaceGeometry) -> Q {
        q(2) * &self.b - g.eq()
    }

    /// `ω·Θ = b − e > 0`
    pub fn is_ample(&self, g: SurfaceGeometry) -> bool {
        self.b > g.eq()
    }

    pub fn validate(&self, g: SurfaceGeometry) -> Result<()> {
        require(self.v(g).is_positive(), || format!("ω² = 2b − e must be positive, got b = {}", fmt_q(&self.b)))
    }

    /// From volume coordinates: `a = (U − e)/2`, `b = (V + e)/2`.
    pub fn from_volume(u: &Q, p: Q, qq: Q, v: &Q, g: SurfaceGeometry) -> Self {
        Self::new((u - g.eq()) * half(), p, qq, (v + g.eq()) * half())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "qstr")]
    pub re: Q,
    #[serde(with = "qstr")]
    pub im: Q,
}

impl ChargeValue {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self::new(&self.re * t, &self.im * t)
    }

    /// `re·other.im − im·other.re`
    pub fn cross(&self, other: &ChargeValue) -> Q {
        &self.re * &other.im - &self.im * &other.re
    }

    /// In `ℍ ∪ ℝ_{<0}`, where the phase lies in `(0, 1]`.
    pub fn in_half_plane(&self) -> bool {
        self.im.is_positive() || (self.im.is_zero() && self.re.is_negative())
    }
}

/// `(ch₀, ω·ch₁^B, ch₂^B)`, the three numbers every charge is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeParts {
    pub n: Q,
    pub im: Q,
    pub ch2: Q,
}

/// Accepts lattice tables and rational tables alike.
pub fn charge_parts(v: impl Into<QTable>, b_field: &Divisor, b: &Q, g: SurfaceGeometry) -> ChargeParts {
    let t = twist_q(&v.into(), b_field, g);
    ChargeParts { im: t.omega_ch1(b), n: t.ch0, ch2: t.ch2 }
}

pub fn central_charge(v: impl Into<QTable>, params: &StabParams, g: SurfaceGeometry) -> ChargeValue {
    let parts = charge_parts(v, &params.b_field(), &params.b, g);
    ChargeValue::new(-parts.ch2 + &params.a * parts.n, parts.im)
}

/// Orders phases in `(0, 1]` by the sign of a cross product.
pub fn phase_cmp(z1: &ChargeValue, z2: &ChargeValue) -> Result<Ordering> {
    for z in [z1, z2] {
        require(z.in_half_plane(), || format!("charge ({}, {}) lies outside ℍ ∪ ℝ_<0", fmt_q(&z.re), fmt_q(&z.im)))?;
    }
    Ok(match z1.cross(z2) {
        x if x.is_positive() => Ordering::Less,
        x if x.is_negative() => Ordering::Greater,
        _ => Ordering::Equal,
    })
}

/// `μ_{B,ω} = ω·ch₁^B / ch₀`, with `+∞` on rank zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slope {
    Finite(Q),
    PosInfinity,
}

impl Slope {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Slope::Finite(x) => Some(x),
            Slope::PosInfinity => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => f.write_str(&fmt_q(x)),
            Slope::PosInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn slope_mu(v: impl Into<QTable>, b_field: &Divisor, b: &Q, g: SurfaceGeometry) -> Slope {
    let parts = charge_parts(v, b_field, b, g);
    if parts.n.is_zero() {
        Slope::PosInfinity
    } else {
        Slope::Finite(parts.im / parts.n)
    }
}

/// `(ω·ch₁^B)² − 2ω²·ch₀·ch₂^B`
pub fn delta_bw(v: impl Into<QTable>, b_field: &Divisor, b: &Q, g: SurfaceGeometry) -> Q {
    let parts = charge_parts(v, b_field, b, g);
    delta_bw_parts(&parts, &(q(2) * b - g.eq()))
}

pub(crate) fn delta_bw_parts(parts: &ChargeParts, omega_sq: &Q) -> Q {
    &parts.im * &parts.im - q(2) * omega_sq * &parts.n * &parts.ch2
}

/// Strong Bogomolov–Gieseker on a K3:
/// `ch₂^B ≤ (ch₁^B)²/(2ch₀) − ch₀ + 1/ch₀`.
pub fn strong_bg_k3_ok(v: &ChernTable, b_field: &Divisor, g: SurfaceGeometry) -> Result<bool> {
    require(g.is_k3(), || format!("the strong Bogomolov–Gieseker check needs e = 2, got e = {}", g.e))?;
    require(v.n.is_positive(), || format!("rank must be positive, got {}", v.n))?;
    let n = qz(&v.n);
    let c1b = &c1_of(v, g) + &-&b_field.scale(&n);
    let ch2b = twist(v, b_field, g).ch2;
    Ok(ch2b <= pair(&c1b, &c1b, g) / (q(2) * &n) - &n + q(1) / &n)
}

/// Least `N ≥ 1` with `N·x·ω² ∈ ℤ` for every `x ∈ {α(b − e) + β : α, β ∈ ℤ}`.
pub fn integrality_constant(b: &Q, g: SurfaceGeometry) -> Result<Z> {
    let omega_sq = q(2) * b - g.eq();
    require(omega_sq.is_positive(), || format!("ω² = 2b − e must be positive, got b = {}", fmt_q(b)))?;
    // the value group is (1/den b)ℤ
    Ok((omega_sq / qz(b.denom())).denom().clone())
}

fn positive_rank_and_degree(parts: &ChargeParts) -> Result<()> {
    require(parts.n.is_positive(), || format!("rank must be positive, got {}", fmt_q(&parts.n)))?;
    require(parts.im.is_positive(), || format!("ω·ch₁^B must be positive, got {}", fmt_q(&parts.im)))
}

/// Walls for `v` along `{σ_{a,B,ω}}` lie below `(N/2)·μ_{B,ω}(v)·Δ_{B,ω}(v)`.
pub fn gieseker_bound(v: &ChernTable, b_field: &Divisor, b: &Q, g: SurfaceGeometry) -> Result<Q> {
    let parts = charge_parts(v, b_field, b, g);
    positive_rank_and_degree(&parts)?;
    let n = qz(&integrality_constant(b, g)?);
    let mu = &parts.im / &parts.n;
    let omega_sq = q(2) * b - g.eq();
    Ok(n * half() * mu * delta_bw_parts(&parts, &omega_sq))
}

/// For a one-dimensional class: `max{(ωc₁)²/2ω², (ωc₁)²/2ω² − ch₂^B}`.
pub fn onedim_bound(v: impl Into<QTable>, b_field: &Divisor, b: &Q, g: SurfaceGeometry) -> Result<Q> {
    let parts = charge_parts(v, b_field, b, g);
    require(parts.n.is_zero(), || format!("one-dimensional class must have rank 0, got {}", fmt_q(&parts.n)))?;
    require(parts.im.is_positive(), || format!("ω·c₁ must be positive, got {}", fmt_q(&parts.im)))?;
    let omega_sq = q(2) * b - g.eq();
    require(omega_sq.is_positive(), || format!("ω² = 2b − e must be positive, got b = {}", fmt_q(b)))?;
    let base = &parts.im * &parts.im / (q(2) * omega_sq);
    Ok(max_q(base.clone(), base - parts.ch2))
}

/// Twisting by `B = μ_f(v)Θ + λf` kills the fiber degree; walls then lie below
/// `max{N t³/(2n ω²), N t³/(2n ω²) − N·ch₂^B·t}` with `t = Θ·ch₁^B(v)`.
pub fn zerofiber_bound(v: &ChernTable, lambda: &Q, b: &Q, g: SurfaceGeometry) -> Result<Q> {
    require(v.n.is_positive(), || format!("rank must be positive, got {}", v.n))?;
    require(!v.d.is_negative(), || format!("fiber degree must be ≥ 0, got {}", v.d))?;
    require(!delta(v, g).is_negative(), || format!("Δ(v) must be ≥ 0, got {}", fmt_q(&delta(v, g))))?;
    let b_field = Divisor::new(Q::new(v.d.clone(), v.n.clone()), lambda.clone());
    let parts = charge_parts(v, &b_field, b, g);
    positive_rank_and_degree(&parts)?;
    let n = qz(&integrality_constant(b, g)?);
    let t = twist(v, &b_field, g).theta_ch1;
    let omega_sq = q(2) * b - g.eq();
    let first = &n * &t * &t * &t / (q(2) * &parts.n * omega_sq);
    let second = &first - &n * &parts.ch2 * &t;
    Ok(max_q(first, second))
}

/// Threshold on `ā` beyond which `Φ[1]` carries `σ_{ā,B̄,ω̄}` to a geometric
/// stability condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricityBound {
    #[serde(with = "qstr")]
    pub pbar: Q,
    #[serde(with = "qstr")]
    pub bbar: Q,
    /// `max{1/(2V̄), 1/(2V̄) + p̄}`
    #[serde(with = "qstr")]
    pub abar0: Q,
    /// Same threshold on `Ū = 2ā + e`: `max{1/V̄ + e, 1/V̄ + e + 2p̄}`.
    #[serde(with = "qstr")]
    pub ubar0: Q,
    #[serde(with = "qstr")]
    pub vbar: Q,
    /// `1/(2e)`, a `b̄`-uniform replacement valid when `p̄ ≤ 0`.
    #[serde(with = "qstr_opt")]
    pub uniform_abar0: Option<Q>,
}

pub fn geometricity_bound(pbar: &Q, bbar: &Q, g: SurfaceGeometry) -> Result<GeometricityBound> {
    require(bbar > &g.eq(), || format!("need b̄ > e for an ample ω̄, got b̄ = {}", fmt_q(bbar)))?;
    let vbar = q(2) * bbar - g.eq();
    let base = q(1) / (q(2) * &vbar);
    let abar0 = max_q(base.clone(), &base + pbar);
    let ubase = q(1) / &vbar + g.eq();
    let ubar0 = max_q(ubase.clone(), &ubase + q(2) * pbar);
    if q(2) * &abar0 + g.eq() != ubar0 {
        return Err(Error::Internal(format!(
            "geometricity bound disagrees between (ā, b̄) and (Ū, V̄) forms: {} vs {}",
            fmt_q(&abar0),
            fmt_q(&ubar0)
        )));
    }
    let uniform_abar0 = (!pbar.is_positive()).then(|| q(1) / (q(2) * g.eq()));
    Ok(GeometricityBound { pbar: pbar.clone(), bbar: bbar.clone(), abar0, ubar0, vbar, uniform_abar0 })
}

/// The potential wall `L(−Θ) ↪ L` for a line bundle class, sampled at `b̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineBundleWall {
    pub line_bundle: Divisor,
    #[serde(with = "qstr")]
    pub bbar: Q,
    /// `L²/2 − (LΘ + b̄·Lf)/(b̄ − e)·(LΘ + e/2)`
    #[serde(with = "qstr")]
    pub formula_value: Q,
    /// `Some` exactly when the formula value is positive.
    #[serde(with = "qstr_opt")]
    pub wall_at: Option<Q>,
    /// `max{L²/2, L²/2 − Lf(LΘ + e/2) + 1}`
    #[serde(with = "qstr")]
    pub sup_bound: Q,
    /// For `b̄` beyond this threshold the wall stays below `sup_bound`.
    #[serde(with = "qstr")]
    pub bbar_threshold: Q,
}

impl LineBundleWall {
    pub fn dominated(&self) -> bool {
        self.wall_at.as_ref().is_none_or(|a| a < &self.sup_bound)
    }
}

pub fn line_bundle_wall(l: &Divisor, bbar: &Q, g: SurfaceGeometry) -> Result<LineBundleWall> {
    require(l.is_integral(), || format!("line bundle class must be integral, got {l}"))?;
    require(l.alpha.is_positive(), || format!("need L·f > 0, got L = {l}"))?;
    require(bbar > &g.eq(), || format!("need b̄ > e, got b̄ = {}", fmt_q(bbar)))?;
    let e = g.eq();
    let half_sq = l.square(g) * half();
    let l_theta = l.dot_theta(g);
    let l_f = l.dot_fiber();
    let formula_value = &half_sq - (&l_theta + bbar * &l_f) / (bbar - &e) * (&l_theta + g.half_e());
    let sup_bound = max_q(half_sq.clone(), &half_sq - &l_f * (&l_theta + g.half_e()) + q(1));
    let bbar_threshold =
        max_q(max_q(e.clone(), -&l_theta / &l_f), &e - (&l_theta + g.half_e()) * (&l_theta + &e * &l.alpha));
    let wall_at = formula_value.is_positive().then(|| formula_value.clone());
    Ok(LineBundleWall { line_bundle: l.clone(), bbar: bbar.clone(), formula_value, wall_at, sup_bound, bbar_threshold })
}

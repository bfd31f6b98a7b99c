//! Transport of stability parameters across the relative Fourier–Mukai
//! transform: given barred parameters `(ā, B̄, ω̄)` find `(a, B, ω)` and
//! `T ∈ GL⁺(2, ℚ)` with `Z_{a,B,ω}(Φ(·)) = T·Z_{ā,B̄,ω̄}(·)`.
//!
//! In volume coordinates `U = 2a + e`, `V = 2b − e` the solution reads
//! `V = Ū + p̄²V̄`, `p = −p̄V̄/V`, `q = q̄ + (e/2)(p − p̄ − 1)`,
//! `U = V̄ − p²V`, so that `UV = ŪV̄`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::lattice::{delta_e, phi_q, phi_shift_dual_q, twist, twist_q, ChernTable, Divisor, QTable, SurfaceGeometry};
use crate::matrix::Mat2;
use crate::rational::{ceil_z, floor_z, fmt_q, half, max_q, q, qstr, qz, zint, Q, Z};
use crate::stability::{
    central_charge, delta_bw, integrality_constant, onedim_bound, slope_mu, ChargeValue, Slope, StabParams,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Volume {
    #[serde(rename = "U", with = "qstr")]
    pub u: Q,
    #[serde(rename = "V", with = "qstr")]
    pub v: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportResult {
    pub barred: StabParams,
    pub unbarred: StabParams,
    #[serde(rename = "T")]
    pub t: Mat2,
    #[serde(rename = "T_inverse")]
    pub t_inverse: Mat2,
    pub volume_barred: Volume,
    pub volume_unbarred: Volume,
    /// `a ≤ 0`; legitimate on the boundary of the geometric chamber.
    pub nonpositive_a: bool,
    /// `b̄ = e`: `ω̄` is nef but not ample.
    pub nef_boundary: bool,
}

/// `T = (−p, 1 + p·p̄; −1, p̄)`, `det T = 1`.
pub fn transport_matrix(p: &Q, pbar: &Q) -> Mat2 {
    Mat2::new(-p, q(1) + p * pbar, q(-1), pbar.clone())
}

/// `T′ = T⁻¹ = (p̄, −1 − p·p̄; 1, −p)`.
pub fn transport_matrix_inverse(p: &Q, pbar: &Q) -> Mat2 {
    Mat2::new(pbar.clone(), q(-1) - p * pbar, q(1), -p)
}

fn assemble(barred: StabParams, unbarred: StabParams, g: SurfaceGeometry) -> Result<TransportResult> {
    let t = transport_matrix(&unbarred.p, &barred.p);
    let t_inverse = transport_matrix_inverse(&unbarred.p, &barred.p);
    if !(&t_inverse * &t).eq(&Mat2::identity()) || !t.det().is_one() {
        return Err(Error::Internal(format!("transport matrix {t} is not unimodular with inverse {t_inverse}")));
    }
    let volume_barred = Volume { u: barred.u(g), v: barred.v(g) };
    let volume_unbarred = Volume { u: unbarred.u(g), v: unbarred.v(g) };
    if &volume_barred.u * &volume_barred.v != &volume_unbarred.u * &volume_unbarred.v {
        return Err(Error::Internal("volume invariant UV = ŪV̄ failed".into()));
    }
    Ok(TransportResult {
        nonpositive_a: !unbarred.a.is_positive(),
        nef_boundary: barred.b == g.eq(),
        barred,
        unbarred,
        t,
        t_inverse,
        volume_barred,
        volume_unbarred,
    })
}

/// Volume-coordinate solution without the `ā > 0`, `b̄ ≥ e` preconditions.
pub(crate) fn forward_volume(ubar: &Q, pbar: &Q, qbar: &Q, vbar: &Q, g: SurfaceGeometry) -> Result<TransportResult> {
    let v = ubar + pbar * pbar * vbar;
    require(v.is_positive(), || format!("V = Ū + p̄²V̄ must be positive, got {}", fmt_q(&v)))?;
    let p = -(pbar * vbar) / &v;
    let qq = qbar + g.half_e() * (&p - pbar - q(1));
    let u = vbar - &p * &p * &v;
    let barred = StabParams::from_volume(ubar, pbar.clone(), qbar.clone(), vbar, g);
    let unbarred = StabParams::from_volume(&u, p, qq, &v, g);
    assemble(barred, unbarred, g)
}

pub fn forward_transport(abar: &Q, pbar: &Q, qbar: &Q, bbar: &Q, g: SurfaceGeometry) -> Result<TransportResult> {
    require(abar.is_positive(), || format!("need ā > 0, got {}", fmt_q(abar)))?;
    require(bbar >= &g.eq(), || format!("need b̄ ≥ e, got b̄ = {}", fmt_q(bbar)))?;
    let e = g.eq();
    let res = forward_volume(&(q(2) * abar + &e), pbar, qbar, &(q(2) * bbar - &e), g)?;
    // the (a, b) presentation of the same solution
    let un = &res.unbarred;
    let b = (abar + &e) + pbar * pbar * (bbar - g.half_e());
    let p = -(pbar * (q(2) * bbar - &e)) / (q(2) * &b - &e);
    let a = (bbar - &e) - &p * &p * (&b - g.half_e());
    if un.b != b || un.p != p || un.a != a {
        return Err(Error::Internal("forward transport: (a, b) and (U, V) forms disagree".into()));
    }
    require(un.b > e, || "transport produced b ≤ e".into()).map_err(|err| Error::Internal(err.to_string()))?;
    Ok(res)
}

pub fn inverse_transport(a: &Q, p: &Q, qq: &Q, b: &Q, g: SurfaceGeometry) -> Result<TransportResult> {
    let e = g.eq();
    let v = q(2) * b - &e;
    require(v.is_positive(), || format!("need ω² = 2b − e > 0, got b = {}", fmt_q(b)))?;
    let u = q(2) * a + &e;
    let vbar = &u + p * p * &v;
    require(vbar.is_positive(), || format!("need V̄ = U + p²V > 0, got {}", fmt_q(&vbar)))?;
    let pbar = -(p * &v) / &vbar;
    let qbar = qq + g.half_e() * (&pbar - p + q(1));
    let ubar = &v - &pbar * &pbar * &vbar;
    let barred = StabParams::from_volume(&ubar, pbar, qbar, &vbar, g);
    let unbarred = StabParams::new(a.clone(), p.clone(), qq.clone(), b.clone());
    assemble(barred, unbarred, g)
}

/// The four linear relations between barred and unbarred parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub cons1: bool,
    pub cons2: bool,
    pub cons3: bool,
    pub cons4: bool,
}

impl ConstraintCheck {
    pub fn all(&self) -> bool {
        self.cons1 && self.cons2 && self.cons3 && self.cons4
    }
}

pub fn check_constraints(barred: &StabParams, unbarred: &StabParams, g: SurfaceGeometry) -> ConstraintCheck {
    let e = g.eq();
    let he = g.half_e();
    let (ab, pb, qb, bb) = (&barred.a, &barred.p, &barred.q, &barred.b);
    let (a, p, qq, b) = (&unbarred.a, &unbarred.p, &unbarred.q, &unbarred.b);
    ConstraintCheck {
        cons1: -(bb * pb) + qb == &he + (b - &e) * p + qq,
        cons2: ab + (bb - &he) * pb * pb == b - &e,
        cons3: bb - &e == a + (b - &he) * p * p,
        cons4: (bb - &e) * pb + qb == &he - b * p + qq,
    }
}

/// Checks `Z(transform(u)) = T·Z̄(u)` on the four lattice generators.
pub fn intertwines(
    unbarred: &StabParams,
    barred: &StabParams,
    t: &Mat2,
    transform: impl Fn(&QTable, SurfaceGeometry) -> QTable,
    g: SurfaceGeometry,
) -> bool {
    ChernTable::basis().iter().all(|u| {
        let lhs: ChargeValue = central_charge(transform(&u.into(), g), unbarred, g);
        lhs == t.apply(&central_charge(u, barred, g))
    })
}

pub fn intertwine_check(res: &TransportResult, g: SurfaceGeometry) -> bool {
    intertwines(&res.unbarred, &res.barred, &res.t, phi_q, g)
        && ChernTable::basis().iter().all(|u| {
            res.t_inverse.apply(&central_charge(phi_q(&u.into(), g), &res.unbarred, g))
                == central_charge(u, &res.barred, g)
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransportChecks {
    pub constraints: ConstraintCheck,
    pub intertwine: bool,
    pub det_t_is_one: bool,
    pub volume_invariant: bool,
}

impl TransportChecks {
    pub fn all(&self) -> bool {
        self.constraints.all() && self.intertwine && self.det_t_is_one && self.volume_invariant
    }
}

pub fn run_checks(res: &TransportResult, g: SurfaceGeometry) -> TransportChecks {
    TransportChecks {
        constraints: check_constraints(&res.barred, &res.unbarred, g),
        intertwine: intertwine_check(res, g),
        det_t_is_one: res.t.det().is_one(),
        volume_invariant: &res.volume_barred.u * &res.volume_barred.v
            == &res.volume_unbarred.u * &res.volume_unbarred.v,
    }
}

/// Boundary stability conditions on an elliptic K3: `B̄ = λΘ`, `H̄ = Θ + 2f`,
/// with `k + 1 < −2λ < k + 2` and `z > λ²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TxParams {
    #[serde(with = "qstr")]
    pub lambda: Q,
    #[serde(with = "qstr")]
    pub z: Q,
    #[serde(with = "zint")]
    pub k: Z,
}

impl TxParams {
    pub fn new(lambda: Q, z: Q, k: Z) -> Result<Self> {
        let params = Self { lambda, z, k };
        params.validate()?;
        Ok(params)
    }

    /// Picks the unique `k` with `k + 1 < −2λ < k + 2`.
    pub fn infer(lambda: Q, z: Q) -> Result<Self> {
        let m2l = -(q(2) * &lambda);
        require(!m2l.is_integer(), || format!("−2λ must not be an integer, got λ = {}", fmt_q(&lambda)))?;
        let k = floor_z(&m2l) - Z::from(1);
        Self::new(lambda, z, k)
    }

    pub fn validate(&self) -> Result<()> {
        let m2l = -(q(2) * &self.lambda);
        let k = qz(&self.k);
        require(&k + q(1) < m2l && m2l < &k + q(2), || {
            format!("need k + 1 < −2λ < k + 2, got k = {}, λ = {}", self.k, fmt_q(&self.lambda))
        })?;
        require(self.z > &self.lambda * &self.lambda, || {
            format!("need z > λ², got z = {}, λ = {}", fmt_q(&self.z), fmt_q(&self.lambda))
        })?;
        require(self.z.is_positive(), || format!("need z > 0, got {}", fmt_q(&self.z)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TxResult {
    pub params: TxParams,
    pub transport: TransportResult,
    /// `−1 + 1/(z+1) < a < 0`
    pub a_in_window: bool,
}

pub fn tx_transport(params: &TxParams, g: SurfaceGeometry) -> Result<TxResult> {
    require(g.is_k3(), || format!("boundary stability conditions need e = 2, got e = {}", g.e))?;
    params.validate()?;
    let (lam, z) = (&params.lambda, &params.z);
    let transport = forward_transport(&(z - lam * lam), lam, &q(0), &q(2), g)?;
    let z1 = z + q(1);
    let expected_b = z + q(2);
    let expected_a = -(lam * lam) / &z1;
    let expected_p = -(lam / &z1);
    let expected_q = -(lam / &z1) - (lam + q(1));
    let expected_t = Mat2::new(lam / &z1, q(1) - lam * lam / &z1, q(-1), lam.clone());
    let un = &transport.unbarred;
    if un.b != expected_b || un.a != expected_a || un.p != expected_p || un.q != expected_q || transport.t != expected_t
    {
        return Err(Error::Internal(format!(
            "boundary transport for λ = {}, z = {} disagrees with its closed form",
            fmt_q(lam),
            fmt_q(z)
        )));
    }
    let a_in_window = q(-1) + q(1) / &z1 < un.a && un.a.is_negative();
    if !a_in_window {
        return Err(Error::Internal(format!("a = {} left (−1 + 1/(z+1), 0)", fmt_q(&un.a))));
    }
    Ok(TxResult { params: params.clone(), transport, a_in_window })
}

/// Parameters making `σ_{ā,B̄,ω̄}` land in a Friedman chamber after `Φ[1]^D`,
/// with `B̄ = (μ_f/2)Θ + λf` and `Ū = (μ_f/2)²V̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivityCertificate {
    pub v: ChernTable,
    #[serde(with = "qstr")]
    pub lambda: Q,
    #[serde(rename = "Vbar", with = "zint")]
    pub vbar: Z,
    #[serde(rename = "Bbar")]
    pub bbar_field: Divisor,
    pub transport: TransportResult,
    /// `ω·ch₁^{−B}(Φ(v)^∨) > 0` exactly when `λ` exceeds this.
    #[serde(with = "qstr")]
    pub lambda_threshold: Q,
    /// `Φ(v)^∨` and its `(−B)`-twist.
    pub dual_transform: QTable,
    #[serde(with = "qstr")]
    pub twisted_fiber_degree: Q,
    #[serde(with = "qstr")]
    pub twisted_theta_degree: Q,
    #[serde(with = "qstr")]
    pub twisted_ch2: Q,
    /// `8·ch₀(v)⁴`, valid for every integral `V̄`.
    #[serde(with = "zint")]
    pub integrality_constant: Z,
    /// The least admissible constant at this particular `b`.
    #[serde(with = "zint")]
    pub integrality_constant_at_b: Z,
    /// Right-hand side of `U − e > max{…}`.
    #[serde(with = "qstr")]
    pub u_bound: Q,
    pub gieseker_condition: bool,
    pub geometric_condition: bool,
    /// Least integral `V̄ > e` meeting both conditions.
    #[serde(with = "zint")]
    pub min_vbar: Z,
}

fn certificate_geometric(pbar: &Q, vbar: &Z, g: SurfaceGeometry) -> bool {
    let vb = qz(vbar);
    let ubar = pbar * pbar * &vb;
    let base = q(1) / &vb + g.eq();
    ubar > max_q(base.clone(), base + q(2) * pbar)
}

pub fn projectivity_certificate(
    v: &ChernTable,
    lambda: &Q,
    vbar: &Z,
    g: SurfaceGeometry,
) -> Result<ProjectivityCertificate> {
    require(v.n.is_positive(), || format!("need ch₀(v) > 0, got {}", v.n))?;
    require(v.d.is_positive(), || format!("need f·ch₁(v) > 0, got {}", v.d))?;
    let de = delta_e(v, g);
    require(!de.is_negative(), || format!("need Δ_e(v) ≥ 0, got {}", fmt_q(&de)))?;
    require(lambda.is_positive(), || format!("need λ > 0, got {}", fmt_q(lambda)))?;
    require(vbar.is_positive(), || format!("need V̄ > 0, got {vbar}"))?;

    let (n, d) = (qz(&v.n), qz(&v.d));
    let mu_f = &d / &n;
    let pbar = &mu_f * half();
    let vb = qz(vbar);
    let transport = forward_volume(&(&pbar * &pbar * &vb), &pbar, lambda, &vb, g)?;
    let un = &transport.unbarred;
    let special_q = lambda + g.half_e() * (-(q(1) / &mu_f) - &mu_f * half() - q(1));
    if un.v(g) != &mu_f * &mu_f * &vb * half()
        || un.p != -(q(1) / &mu_f)
        || un.q != special_q
        || un.u(g) != &vb * half()
    {
        return Err(Error::Internal("certificate parameters disagree with their special forms".into()));
    }

    let w = phi_shift_dual_q(&v.into(), g);
    let tw = twist_q(&w, &-&un.b_field(), g);
    let lambda_threshold = (&v.s + g.half_e() * (&n + &d * &d / (q(2) * &n))) / &d;
    let closed_theta = lambda * &d - &lambda_threshold * &d;
    if !tw.f_ch1.is_zero() || tw.theta_ch1 != closed_theta {
        return Err(Error::Internal("twisted degrees of Φ(v)^∨ disagree with their closed forms".into()));
    }
    require(tw.theta_ch1.is_positive(), || {
        format!("need ω·ch₁^(−B)(Φ(v)^∨) > 0, i.e. λ > {}; got λ = {}", fmt_q(&lambda_threshold), fmt_q(lambda))
    })?;

    let big_n = Z::from(8) * v.n.pow(4);
    let at_b = integrality_constant(&un.b, g)?;
    if !big_n.is_multiple_of(&at_b) {
        return Err(Error::Internal(format!("integrality constant {at_b} does not divide {big_n}")));
    }
    let nq = qz(&big_n);
    let t = &tw.theta_ch1;
    let first = q(2) * &nq * t * t * t * &n * &n / (&d * &d * &d);
    let u_bound = max_q(first.clone(), &first - q(2) * &nq * &tw.ch2 * t);

    let e = g.eq();
    let gieseker_condition = un.u(g) - &e > u_bound;
    let geometric_condition = certificate_geometric(&pbar, vbar, g);

    // U = V̄/2, so the first condition is V̄ > 2(bound + e)
    let mut lo = floor_z(&(q(2) * (&u_bound + &e))) + Z::from(1);
    lo = lo.max(ceil_z(&(&e + half())).max(Z::from(1)));
    let mut hi = lo.clone();
    while !certificate_geometric(&pbar, &hi, g) {
        hi = &hi * Z::from(2);
    }
    while lo < hi {
        let mid: Z = (&lo + &hi) / Z::from(2);
        if certificate_geometric(&pbar, &mid, g) {
            hi = mid;
        } else {
            lo = mid + Z::from(1);
        }
    }

    Ok(ProjectivityCertificate {
        v: v.clone(),
        lambda: lambda.clone(),
        vbar: vbar.clone(),
        bbar_field: Divisor::new(pbar, lambda.clone()),
        lambda_threshold,
        dual_transform: w,
        twisted_fiber_degree: tw.f_ch1.clone(),
        twisted_theta_degree: tw.theta_ch1.clone(),
        twisted_ch2: tw.ch2.clone(),
        integrality_constant: big_n,
        integrality_constant_at_b: at_b,
        u_bound,
        gieseker_condition,
        geometric_condition,
        min_vbar: lo,
        transport,
    })
}

/// Friedman-chamber threshold for `B̄ = λf`: `V̄ = U > 2μΔ + e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FriedmanBound {
    pub v: ChernTable,
    #[serde(with = "qstr")]
    pub lambda: Q,
    #[serde(rename = "Ubar", with = "zint")]
    pub ubar: Z,
    /// `μ_{−B,ω}` and `Δ_{−B,ω}` of `Φ(v)[1]^D`.
    #[serde(with = "qstr")]
    pub mu: Q,
    #[serde(with = "qstr")]
    pub delta: Q,
    #[serde(rename = "Vbar_bound", with = "qstr")]
    pub vbar_bound: Q,
    #[serde(rename = "bbar_bound", with = "qstr")]
    pub bbar_bound: Q,
}

pub fn friedman_bound(v: &ChernTable, lambda: &Q, ubar: &Z, g: SurfaceGeometry) -> Result<FriedmanBound> {
    require(v.n.is_positive(), || format!("need ch₀(v) > 0, got {}", v.n))?;
    require(v.d.is_positive(), || format!("need f·ch₁(v) > 0, got {}", v.d))?;
    require(v.n.gcd(&v.d).is_one(), || format!("need gcd(ch₀, f·ch₁) = 1, got {v}"))?;
    let disc = delta_e(v, g) + qz(&(g.ez() * &v.d * &v.d));
    require(!disc.is_negative(), || format!("need Δ_e(v) + e(f·ch₁)² ≥ 0, got {}", fmt_q(&disc)))?;
    require(ubar.is_positive(), || format!("need Ū > 0, got {ubar}"))?;

    let (n, d, c, e) = (qz(&v.n), qz(&v.d), qz(&v.c), g.eq());
    let u = qz(ubar);
    let head = -&v.s + (&u - &e) * &n * half();
    let mu = &head / &d + lambda;
    let delta = (&head + lambda * &d) * (&head + lambda * &d) + q(2) * (&c + &e * &d - lambda * &n) * &d * &u;

    // same numbers straight from the lattice: B = (λ − e/2)f, b = (Ū + e)/2
    let w = phi_shift_dual_q(&v.into(), g);
    let minus_b = Divisor::new(q(0), -(lambda - g.half_e()));
    let b = (&u + &e) * half();
    if slope_mu(&w, &minus_b, &b, g) != Slope::Finite(mu.clone()) || delta_bw(&w, &minus_b, &b, g) != delta {
        return Err(Error::Internal("Friedman bound closed forms disagree with the lattice computation".into()));
    }

    let vbar_bound = q(2) * &mu * &delta + &e;
    let bbar_bound = (&vbar_bound + &e) * half();
    Ok(FriedmanBound { v: v.clone(), lambda: lambda.clone(), ubar: ubar.clone(), mu, delta, vbar_bound, bbar_bound })
}

/// Thresholds for a class of fiber degree zero with `B̄ = λf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroFiberBounds {
    pub v: ChernTable,
    #[serde(with = "qstr")]
    pub lambda: Q,
    /// `Θ·ch₁^B̄(v)`
    #[serde(with = "qstr")]
    pub theta_degree: Q,
    #[serde(with = "qstr")]
    pub a0: Q,
    #[serde(rename = "Ubar", with = "qstr")]
    pub ubar: Q,
    #[serde(with = "qstr")]
    pub bbar_bound: Q,
}

pub fn zero_fiber_bounds(v: &ChernTable, lambda: &Q, g: SurfaceGeometry) -> Result<ZeroFiberBounds> {
    require(v.n.is_positive(), || format!("need ch₀(v) > 0, got {}", v.n))?;
    require(v.d.is_zero(), || format!("need f·ch₁(v) = 0, got {}", v.d))?;
    let dl = crate::lattice::delta(v, g);
    require(!dl.is_negative(), || format!("need Δ(v) ≥ 0, got {}", fmt_q(&dl)))?;
    let b_field = Divisor::new(q(0), lambda.clone());
    let tw = twist(v, &b_field, g);
    let t = tw.theta_ch1.clone();
    require(t.is_positive(), || format!("need Θ·ch₁^B̄(v) > 0, got {}", fmt_q(&t)))?;

    let n = qz(&v.n);
    let e = g.eq();
    let cube = &t * &t * &t / &n;
    let a0 = max_q(cube.clone(), &cube - &tw.ch2 * &t);
    let ubar = q(2) * max_q(a0.clone(), q(1) / (q(2) * &e)) + &e;
    let x = -&v.s - g.half_e() * &n + &ubar * half() * &n;
    let head = &x * &x / (q(2) * &ubar);
    let bbar_bound = max_q(&head + &e, &head - qz(&v.c) + lambda * &n + &e);

    // Φ(v)[1] is one-dimensional; its bound at B = (λ − e/2)f, V = Ū is b̄ − e
    let w = -&phi_q(&v.into(), g);
    let b = (&ubar + &e) * half();
    let via_lattice = onedim_bound(&w, &Divisor::new(q(0), lambda - g.half_e()), &b, g)? + &e;
    if via_lattice != bbar_bound {
        return Err(Error::Internal("zero-fiber b̄ bound disagrees with the one-dimensional estimate".into()));
    }
    Ok(ZeroFiberBounds { v: v.clone(), lambda: lambda.clone(), theta_degree: t, a0, ubar, bbar_bound })
}

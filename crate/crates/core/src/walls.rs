//! Numerical walls for a class `v` along the ray `{σ_{a,B,ω}}_{a>0}`.
//!
//! For a candidate subobject class `A` the phases of `Z_a(A)` and `Z_a(v)`
//! agree when `a·(n_A·Im v − n_v·Im A) = ch₂^B(A)·Im v − ch₂^B(v)·Im A`,
//! which is linear in `a`. Enumeration scans a finite box of
//! `(ch₀, f·ch₁, Θ·ch₁)` and derives the admissible `ch₂` range of each
//! stratum from the two Bogomolov-type inequalities and `a > 0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::lattice::{ChernTable, Divisor, SurfaceGeometry};
use crate::rational::{ceil_z, floor_z, fmt_q, half, q, qstr, qz, to_f64, Q, Z};
use crate::stability::{charge_parts, delta_bw_parts, ChargeParts};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WallSolution {
    NoWall,
    WallAt {
        #[serde(with = "qstr")]
        a: Q,
    },
    /// Phases agree for every `a`.
    AllA,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRange {
    #[serde(with = "qstr")]
    pub lo: Q,
    #[serde(with = "qstr")]
    pub hi: Q,
}

/// Inclusive integer ranges for `(n_A, d_A, c_A)` and an optional `s_A` range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub n: [i64; 2],
    pub d: [i64; 2],
    pub c: [i64; 2],
    #[serde(default)]
    pub s: Option<QRange>,
    /// Also admit `Im A = 0` and `Im A = Im v`.
    #[serde(default)]
    pub include_boundary: bool,
}

impl SearchBox {
    pub fn symmetric(n: i64, d: i64, c: i64) -> Self {
        Self { n: [-n, n], d: [-d, d], c: [-c, c], s: None, include_boundary: false }
    }

    pub fn is_empty(&self) -> bool {
        self.n[0] > self.n[1] || self.d[0] > self.d[1] || self.c[0] > self.c[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallEntry {
    #[serde(with = "qstr")]
    pub a: Q,
    pub witnesses: Vec<ChernTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallReport {
    pub v: ChernTable,
    #[serde(rename = "B")]
    pub b_field: Divisor,
    #[serde(rename = "omega")]
    pub omega: Divisor,
    pub e: i64,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    pub walls: Vec<WallEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic: Option<bool>,
}

impl WallReport {
    pub fn max_wall(&self) -> Option<&Q> {
        self.walls.last().map(|w| &w.a)
    }

    /// `a, n_A, d_A, c_A, s_A`, one row per witness.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("a\tn_A\td_A\tc_A\ts_A\n");
        for w in &self.walls {
            for a in &w.witnesses {
                let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", fmt_q(&w.a), a.n, a.d, a.c, fmt_q(&a.s));
            }
        }
        out
    }
}

fn sort_key(t: &ChernTable) -> (Z, Z, Z, Q) {
    (t.n.clone(), t.d.clone(), t.c.clone(), t.s.clone())
}

pub fn solve_wall(
    v: &ChernTable,
    a_class: &ChernTable,
    b_field: &Divisor,
    b: &Q,
    g: SurfaceGeometry,
) -> Result<WallSolution> {
    let pv = charge_parts(v, b_field, b, g);
    let pa = charge_parts(a_class, b_field, b, g);
    require(!(pv.im.is_zero() && pa.im.is_zero()), || format!("Im Z vanishes on both {v} and {a_class}"))?;
    Ok(solve_parts(&pv, &pa))
}

fn solve_parts(pv: &ChargeParts, pa: &ChargeParts) -> WallSolution {
    let coeff = &pa.n * &pv.im - &pv.n * &pa.im;
    let constant = &pa.ch2 * &pv.im - &pv.ch2 * &pa.im;
    match (coeff.is_zero(), constant.is_zero()) {
        (false, _) => WallSolution::WallAt { a: constant / coeff },
        (true, true) => WallSolution::AllA,
        (true, false) => WallSolution::NoWall,
    }
}

/// Interval of `x = ch₂^B(A)` cut out by the filters; `None` marks an open side.
struct Interval {
    lo: Option<Q>,
    hi: Option<Q>,
}

impl Interval {
    fn raise(&mut self, x: Q) {
        if self.lo.as_ref().is_none_or(|l| &x > l) {
            self.lo = Some(x);
        }
    }
    fn lower(&mut self, x: Q) {
        if self.hi.as_ref().is_none_or(|h| &x < h) {
            self.hi = Some(x);
        }
    }
}

struct Setup<'a> {
    v: &'a ChernTable,
    pv: ChargeParts,
    b_field: &'a Divisor,
    b: &'a Q,
    omega_sq: Q,
    g: SurfaceGeometry,
    search_box: &'a SearchBox,
}

impl Setup<'_> {
    /// `ch₂^B(A) − s_A`, which depends only on `(n_A, d_A, c_A)`.
    fn ch2_offset(&self, n: &Q, d: &Q, c: &Q) -> Q {
        let (p, qq) = (&self.b_field.alpha, &self.b_field.beta);
        -(p * c + qq * d) + n * (-(self.g.eq() * p * p) + q(2) * p * qq) * half()
    }

    fn im_of(&self, n: &Q, d: &Q, c: &Q) -> Q {
        let (p, qq) = (&self.b_field.alpha, &self.b_field.beta);
        (c - n * (qq - self.g.eq() * p)) + self.b * (d - n * p)
    }

    fn stratum(&self, na: i64, da: i64) -> Result<Vec<(Q, ChernTable)>> {
        let mut found = Vec::new();
        let (n, d) = (q(na), q(da));
        let nv = &self.pv.n;
        let m = nv - &n;
        let two_v = q(2) * &self.omega_sq;
        for ca in self.search_box.c[0]..=self.search_box.c[1] {
            let c = q(ca);
            let im_a = self.im_of(&n, &d, &c);
            let inside = if self.search_box.include_boundary {
                !im_a.is_negative() && im_a <= self.pv.im
            } else {
                im_a.is_positive() && im_a < self.pv.im
            };
            if !inside {
                continue;
            }
            let k = &n * &self.pv.im - nv * &im_a;
            if k.is_zero() {
                continue;
            }
            let mut iv = Interval { lo: None, hi: None };
            // Δ_{B,ω}(A) ≥ 0
            if n.is_positive() {
                iv.lower(&im_a * &im_a / (&two_v * &n));
            } else if n.is_negative() {
                iv.raise(&im_a * &im_a / (&two_v * &n));
            }
            // Δ_{B,ω}(v − A) ≥ 0
            let im_q = &self.pv.im - &im_a;
            if m.is_positive() {
                iv.raise(&self.pv.ch2 - &im_q * &im_q / (&two_v * &m));
            } else if m.is_negative() {
                iv.lower(&self.pv.ch2 - &im_q * &im_q / (&two_v * &m));
            }
            // a > 0
            let pivot = &self.pv.ch2 * &im_a / &self.pv.im;
            if k.is_positive() {
                iv.raise(pivot);
            } else {
                iv.lower(pivot);
            }
            let offset = self.ch2_offset(&n, &d, &c);
            let mut s_lo = iv.lo.map(|x| x - &offset);
            let mut s_hi = iv.hi.map(|x| x - &offset);
            if let Some(user) = &self.search_box.s {
                if s_lo.as_ref().is_none_or(|l| &user.lo > l) {
                    s_lo = Some(user.lo.clone());
                }
                if s_hi.as_ref().is_none_or(|h| &user.hi < h) {
                    s_hi = Some(user.hi.clone());
                }
            }
            let (Some(s_lo), Some(s_hi)) = (s_lo, s_hi) else {
                return Err(Error::UnboundedStratum { n: na, d: da, c: ca });
            };
            let mut j = ceil_z(&(q(2) * s_lo));
            let j_hi = floor_z(&(q(2) * s_hi));
            while j <= j_hi {
                let s = Q::new(j.clone(), Z::from(2));
                j += 1;
                let pa = ChargeParts { n: n.clone(), im: im_a.clone(), ch2: &s + &offset };
                if delta_bw_parts(&pa, &self.omega_sq).is_negative() {
                    continue;
                }
                let pq = ChargeParts { n: m.clone(), im: im_q.clone(), ch2: &self.pv.ch2 - &pa.ch2 };
                if delta_bw_parts(&pq, &self.omega_sq).is_negative() {
                    continue;
                }
                if let WallSolution::WallAt { a } = solve_parts(&self.pv, &pa) {
                    if a.is_positive() {
                        let table = ChernTable::new(Z::from(na), Z::from(da), Z::from(ca), s)?;
                        debug_assert_eq!(
                            solve_wall(self.v, &table, self.b_field, self.b, self.g).ok(),
                            Some(WallSolution::WallAt { a: a.clone() })
                        );
                        found.push((a, table));
                    }
                }
            }
        }
        Ok(found)
    }
}

#[cfg(feature = "parallel")]
fn run_strata(setup: &Setup<'_>, strata: &[(i64, i64)]) -> Result<Vec<Vec<(Q, ChernTable)>>> {
    strata.par_iter().map(|&(n, d)| setup.stratum(n, d)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_strata(setup: &Setup<'_>, strata: &[(i64, i64)]) -> Result<Vec<Vec<(Q, ChernTable)>>> {
    strata.iter().map(|&(n, d)| setup.stratum(n, d)).collect()
}

pub fn enumerate_walls(
    v: &ChernTable,
    b_field: &Divisor,
    b: &Q,
    search_box: &SearchBox,
    g: SurfaceGeometry,
) -> Result<WallReport> {
    let omega_sq = q(2) * b - g.eq();
    require(omega_sq.is_positive(), || format!("ω² = 2b − e must be positive, got b = {}", fmt_q(b)))?;
    let pv = charge_parts(v, b_field, b, g);
    require(pv.im.is_positive(), || format!("need ω·ch₁^B(v) > 0, got {}", fmt_q(&pv.im)))?;
    if let Some(s) = &search_box.s {
        require(s.lo <= s.hi, || "empty ch2 range".into())?;
    }

    let strata: Vec<(i64, i64)> = (search_box.n[0]..=search_box.n[1])
        .flat_map(|n| (search_box.d[0]..=search_box.d[1]).map(move |d| (n, d)))
        .collect();
    let setup = Setup { v, pv, b_field, b, omega_sq, g, search_box };
    let mut merged: BTreeMap<Q, Vec<ChernTable>> = BTreeMap::new();
    for part in run_strata(&setup, &strata)? {
        for (a, table) in part {
            merged.entry(a).or_default().push(table);
        }
    }
    let walls = merged
        .into_iter()
        .map(|(a, mut witnesses)| {
            witnesses.sort_by_key(sort_key);
            witnesses.dedup();
            WallEntry { a, witnesses }
        })
        .collect();
    Ok(WallReport {
        v: v.clone(),
        b_field: b_field.clone(),
        omega: Divisor::new(q(1), b.clone()),
        e: g.e,
        search_box: search_box.clone(),
        walls,
        generic: None,
    })
}

/// Classes `A` in the box with `0 < n_A < n_v`, `μ_{B,ω}(A) = μ_{B,ω}(v)` and
/// `ch₂^B(A)/n_A = ch₂^B(v)/n_v`: properly semistable witnesses.
pub fn non_generic_witnesses(
    v: &ChernTable,
    b_field: &Divisor,
    b: &Q,
    search_box: &SearchBox,
    g: SurfaceGeometry,
) -> Result<Vec<ChernTable>> {
    require(v.n.is_positive(), || format!("need ch₀(v) > 0, got {}", v.n))?;
    let omega_sq = q(2) * b - g.eq();
    let pv = charge_parts(v, b_field, b, g);
    let setup = Setup { v, pv, b_field, b, omega_sq, g, search_box };
    let nv = qz(&v.n);
    let mut out = Vec::new();
    let n_hi = search_box.n[1].min(i64::try_from(&v.n).unwrap_or(i64::MAX).saturating_sub(1));
    for na in search_box.n[0].max(1)..=n_hi {
        let n = q(na);
        for da in search_box.d[0]..=search_box.d[1] {
            let d = q(da);
            for ca in search_box.c[0]..=search_box.c[1] {
                let c = q(ca);
                if setup.im_of(&n, &d, &c) * &nv != &setup.pv.im * &n {
                    continue;
                }
                let s = &setup.pv.ch2 * &n / &nv - setup.ch2_offset(&n, &d, &c);
                if !(q(2) * &s).is_integer() {
                    continue;
                }
                if let Some(r) = &search_box.s {
                    if s < r.lo || s > r.hi {
                        continue;
                    }
                }
                out.push(ChernTable::new(Z::from(na), Z::from(da), Z::from(ca), s)?);
            }
        }
    }
    Ok(out)
}

pub fn is_generic_ray(
    v: &ChernTable,
    b_field: &Divisor,
    b: &Q,
    search_box: &SearchBox,
    g: SurfaceGeometry,
) -> Result<bool> {
    Ok(non_generic_witnesses(v, b_field, b, search_box, g)?.is_empty())
}

/// One `<line>` per wall at height `a`, labelled by its first witness; the
/// optional bound is drawn as a dashed path.
pub fn render_svg(report: &WallReport, bound: Option<&Q>) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 400.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 390.0;
    let top_value = report.walls.iter().map(|w| to_f64(&w.a)).chain(bound.map(to_f64)).fold(1.0_f64, f64::max) * 1.1;
    let y = |a: f64| BOTTOM - (a / top_value) * (BOTTOM - TOP);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(out, r#"<title>walls for v = {} along a &gt; 0</title>"#, report.v);
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{W}" height="{H}" fill="#ffffff"/>"##);
    let _ = writeln!(out, r##"<path d="M {LEFT} {BOTTOM} L {LEFT} {TOP}" stroke="#000000" fill="none"/>"##);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">a</text>"#, LEFT - 4.0, TOP - 10.0);
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">0</text>"#, LEFT - 20.0, BOTTOM + 4.0);
    if let Some(bound) = bound {
        let yb = y(to_f64(bound));
        let _ = writeln!(
            out,
            r##"<path d="M {LEFT} {yb:.3} L {RIGHT} {yb:.3}" stroke="#c0392b" stroke-dasharray="6 4" fill="none"/>"##
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.1}" y="{:.3}" fill="#c0392b">bound {}</text>"##,
            RIGHT + 6.0,
            yb + 4.0,
            fmt_q(bound)
        );
    }
    for w in &report.walls {
        let yw = y(to_f64(&w.a));
        let first = &w.witnesses[0];
        let more = if w.witnesses.len() > 1 { format!(" +{}", w.witnesses.len() - 1) } else { String::new() };
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{yw:.3}" x2="{RIGHT}" y2="{yw:.3}" stroke="#2c3e50"><title>a = {}</title></line>"##,
            fmt_q(&w.a)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.3}">{} A={}{}</text>"#,
            RIGHT + 6.0,
            yw + 4.0,
            fmt_q(&w.a),
            first,
            more
        );
    }
    out.push_str("</svg>\n");
    out
}

//! Browser bindings for `ellstab`. Each export takes strings and returns a
//! JSON document with the same field layout as the command-line tool; errors
//! surface as a thrown string.

use ellstab::euclid::{euclid_reduce, replay, EuclidTrace};
use ellstab::lattice::{ChernTable, Divisor, SurfaceGeometry};
use ellstab::rational::{parse_q, qstr, Q};
use ellstab::stability::{gieseker_bound, onedim_bound};
use ellstab::transport::{forward_transport, run_checks, TransportChecks, TransportResult};
use ellstab::walls::{enumerate_walls, render_svg, SearchBox, WallReport};
use num_traits::{Signed, Zero};
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn geometry(e: i32) -> Result<SurfaceGeometry, String> {
    SurfaceGeometry::new(i64::from(e)).map_err(|err| err.to_string())
}

fn rational(name: &str, text: &str) -> Result<Q, String> {
    parse_q(text).map_err(|err| format!("{name}: {err}"))
}

fn table(text: &str) -> Result<ChernTable, String> {
    serde_json::from_str(text).map_err(|err| format!("table: {err}"))
}

fn to_json<T: Serialize>(value: &T) -> Out {
    serde_json::to_string(value).map_err(|err| err.to_string())
}

#[derive(Serialize)]
struct TransportRecord {
    command: &'static str,
    e: i64,
    result: TransportResult,
    checks: TransportChecks,
}

/// Barred `(ā, p̄, q̄, b̄)` to unbarred parameters, with the consistency checks.
#[wasm_bindgen]
pub fn transport_forward(e: i32, abar: &str, pbar: &str, qbar: &str, bbar: &str) -> Out {
    let g = geometry(e)?;
    let result = forward_transport(
        &rational("abar", abar)?,
        &rational("pbar", pbar)?,
        &rational("qbar", qbar)?,
        &rational("bbar", bbar)?,
        g,
    )
    .map_err(|err| err.to_string())?;
    let checks = run_checks(&result, g);
    to_json(&TransportRecord { command: "transport forward", e: g.e, result, checks })
}

#[derive(Serialize)]
struct BoundSummary {
    kind: &'static str,
    #[serde(with = "qstr")]
    value: Q,
}

#[derive(Serialize)]
struct WallsRecord {
    #[serde(flatten)]
    report: WallReport,
    bound: Option<BoundSummary>,
    all_walls_below_bound: Option<bool>,
    svg: String,
}

fn parse_box(text: &str) -> Result<SearchBox, String> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse::<i64>().ok().filter(|x| *x >= 0))
        .collect::<Option<_>>()
        .ok_or_else(|| format!("box: expected N,D,C with non-negative integers, got {text:?}"))?;
    match parts.as_slice() {
        [n, d, c] => Ok(SearchBox::symmetric(*n, *d, *c)),
        _ => Err(format!("box: expected N,D,C, got {text:?}")),
    }
}

/// Walls for `v` (a JSON table) along the `a`-ray with `B = pΘ + qf`,
/// `ω = Θ + bf`, in the symmetric box `N,D,C`, plus an SVG rendering.
#[wasm_bindgen]
pub fn walls_svg(e: i32, v: &str, p: &str, q: &str, b: &str, search_box: &str) -> Out {
    let g = geometry(e)?;
    let v = table(v)?;
    let b_field = Divisor::new(rational("p", p)?, rational("q", q)?);
    let b = rational("b", b)?;
    let sb = parse_box(search_box)?;
    let report = enumerate_walls(&v, &b_field, &b, &sb, g).map_err(|err| err.to_string())?;
    let bound = if v.n.is_zero() {
        onedim_bound(&v, &b_field, &b, g).ok().map(|value| BoundSummary { kind: "onedim", value })
    } else {
        gieseker_bound(&v, &b_field, &b, g).ok().map(|value| BoundSummary { kind: "gieseker", value })
    };
    let below = bound.as_ref().map(|bd| report.walls.iter().filter(|w| w.a.is_positive()).all(|w| w.a < bd.value));
    let svg = render_svg(&report, bound.as_ref().map(|bd| &bd.value));
    to_json(&WallsRecord { report, bound, all_walls_below_bound: below, svg })
}

#[derive(Serialize)]
struct EuclidRecord {
    #[serde(flatten)]
    trace: EuclidTrace,
    replay: bool,
}

/// Euclidean reduction of `v` (a JSON table) to rank one, replayed.
#[wasm_bindgen]
pub fn euclid_trace(e: i32, v: &str) -> Out {
    let g = geometry(e)?;
    let v = table(v)?;
    let trace = euclid_reduce(&v, g).map_err(|err| err.to_string())?;
    let replayed = replay(&trace, g).map_err(|err| err.to_string())?;
    to_json(&EuclidRecord { trace, replay: replayed })
}

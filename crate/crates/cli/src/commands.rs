use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ellstab::euclid::{euclid_reduce, replay};
use ellstab::lattice::{
    dual_d, phi, phi_q, phihat, phihat_q, psi_m, psi_m_diagram, shift1, tensor, upsilon, ChernTable, Divisor,
    PsiDiagram, QTable, SurfaceGeometry,
};
use ellstab::rational::{fmt_q, parse_q, qstr, qz, zint, Q, Z};
use ellstab::stability::{
    geometricity_bound, gieseker_bound, integrality_constant, line_bundle_wall, onedim_bound, zerofiber_bound,
    GeometricityBound, LineBundleWall,
};
use ellstab::transport::{
    forward_transport, friedman_bound, inverse_transport, projectivity_certificate, run_checks, tx_transport,
    zero_fiber_bounds, TransportChecks, TxParams,
};
use ellstab::walls::{enumerate_walls, is_generic_ray, render_svg, WallReport};
use ellstab::{EuclidTrace, SearchBox};
use serde::Serialize;

use crate::config::{CheckLevel, Format, RunConfig};
use crate::{BoundKind, BoundsCmd, FieldArgs, TableInput, TransformOp, TransportCmd, Usage, WallsArgs};

pub struct Ctx {
    pub cfg: RunConfig,
    pub g: SurfaceGeometry,
}

impl Ctx {
    fn full(&self) -> bool {
        self.cfg.check == CheckLevel::Full
    }

    fn json_only(&self, command: &str) -> Result<()> {
        if self.cfg.format != Format::Json {
            bail!(Usage(format!("{command} supports --format json only")));
        }
        Ok(())
    }
}

/// A `--verify`/`--check full` failure; the record is still printed.
#[derive(Debug)]
pub struct CheckFailed {
    pub what: String,
    pub output: String,
}

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "consistency check failed: {}", self.what)
    }
}

impl std::error::Error for CheckFailed {}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = serde_json::to_string_pretty(value).context("serializing output")?;
    out.push('\n');
    Ok(out)
}

fn read_table(input: &TableInput) -> Result<ChernTable> {
    match (&input.input, &input.v) {
        (Some(_), Some(_)) => bail!(Usage("give the table either as a file or with --v, not both".into())),
        (None, None) => bail!(Usage("missing input table: pass a JSON file, - for stdin, or --v n,d,c,s".into())),
        (None, Some(inline)) => parse_inline(inline),
        (Some(path), None) => {
            let text = read_source(path)?;
            serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())).into())
        }
    }
}

fn read_source(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn parse_inline(text: &str) -> Result<ChernTable> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [n, d, c, s] = parts.as_slice() else {
        bail!(Usage(format!("--v expects n,d,c,s, got {text:?}")));
    };
    let int = |name: &str, x: &str| -> Result<Z> {
        x.parse::<Z>().map_err(|_| Usage(format!("--v: {name} must be an integer, got {x:?}")).into())
    };
    let s = parse_q(s).map_err(|e| Usage(format!("--v: s: {e}")))?;
    ChernTable::new(int("n", n)?, int("d", d)?, int("c", c)?, s).map_err(|e| Usage(format!("--v: {e}")).into())
}

fn field(args: &FieldArgs) -> Divisor {
    Divisor::new(args.p.clone(), args.q.clone())
}

#[derive(Serialize)]
struct Identity {
    name: &'static str,
    holds: bool,
}

#[derive(Serialize)]
struct TransformRecord {
    op: &'static str,
    e: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor: Option<Divisor>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_zint")]
    m: Option<Z>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_zint")]
    k: Option<Z>,
    input: ChernTable,
    output: ChernTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagram: Option<PsiDiagram>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<Vec<Identity>>,
}

mod opt_zint {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Z>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(z) => zint::serialize(z, s),
            None => s.serialize_none(),
        }
    }
}

fn op_name(op: TransformOp) -> &'static str {
    match op {
        TransformOp::Phi => "phi",
        TransformOp::Phihat => "phihat",
        TransformOp::Dual => "dual",
        TransformOp::Shift => "shift",
        TransformOp::Tensor => "tensor",
        TransformOp::Psi => "psi",
        TransformOp::Upsilon => "upsilon",
    }
}

fn integral(name: &str, x: &Option<Q>) -> Result<Q> {
    match x {
        Some(v) if v.is_integer() => Ok(v.clone()),
        Some(v) => bail!(Usage(format!("--{name} must be an integer, got {}", fmt_q(v)))),
        None => bail!(Usage(format!("--op tensor needs --{name}"))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn transform(
    ctx: &Ctx,
    op: TransformOp,
    table: &TableInput,
    alpha: Option<Q>,
    beta: Option<Q>,
    m: Option<u64>,
    k: Option<i64>,
    verify: bool,
) -> Result<String> {
    if ctx.cfg.format == Format::SvgJson {
        bail!(Usage("transform supports --format json or tsv".into()));
    }
    let g = ctx.g;
    let v = read_table(table)?;
    let vq = QTable::from(&v);
    let neg_v = -&vq;
    let mut record = TransformRecord {
        op: op_name(op),
        e: g.e,
        divisor: None,
        m: None,
        k: None,
        input: v.clone(),
        output: v.clone(),
        diagram: None,
        verify: None,
    };
    let mut identities = Vec::new();
    match op {
        TransformOp::Phi => {
            record.output = phi(&v, g)?;
            identities.push(Identity { name: "phihat(phi(v)) = -v", holds: phihat_q(&phi_q(&vq, g), g) == neg_v });
            identities.push(Identity { name: "phi(phihat(v)) = -v", holds: phi_q(&phihat_q(&vq, g), g) == neg_v });
        }
        TransformOp::Phihat => {
            record.output = phihat(&v, g)?;
            identities.push(Identity { name: "phi(phihat(v)) = -v", holds: phi_q(&phihat_q(&vq, g), g) == neg_v });
            identities.push(Identity { name: "phihat(phi(v)) = -v", holds: phihat_q(&phi_q(&vq, g), g) == neg_v });
        }
        TransformOp::Dual => {
            record.output = dual_d(&v);
            identities.push(Identity { name: "dual(dual(v)) = v", holds: dual_d(&record.output) == v });
        }
        TransformOp::Shift => {
            record.output = shift1(&v);
            identities.push(Identity { name: "shift(shift(v)) = v", holds: shift1(&record.output) == v });
        }
        TransformOp::Tensor => {
            let d = Divisor::new(integral("alpha", &alpha)?, integral("beta", &beta)?);
            record.output = tensor(&v, &d, g)?;
            let back = tensor(&record.output, &-&d, g)?;
            identities.push(Identity { name: "tensor(-D)(tensor(D)(v)) = v", holds: back == v });
            record.divisor = Some(d);
        }
        TransformOp::Psi => {
            let m = m.ok_or_else(|| Usage("--op psi needs --m".into()))?;
            record.output = psi_m(&v, m, g)?;
            let diagram = psi_m_diagram(&v, m, g)?;
            identities.push(Identity {
                name: "closed form = five-arrow composition",
                holds: diagram.output == record.output,
            });
            record.diagram = (verify || ctx.full()).then_some(diagram);
            record.m = Some(Z::from(m));
        }
        TransformOp::Upsilon => {
            let k = k.ok_or_else(|| Usage("--op upsilon needs --k".into()))?;
            let kz = Z::from(k);
            record.output = upsilon(&v, &kz, g);
            let via_tensor = tensor(&v, &Divisor::new(-qz(&kz), Q::from_integer(Z::from(0))), g)?;
            identities
                .push(Identity { name: "upsilon_k(v) = tensor(-k Theta)(v)", holds: via_tensor == record.output });
            record.k = Some(kz);
        }
    }
    let all = identities.iter().all(|i| i.holds);
    let failed: Vec<&str> = identities.iter().filter(|i| !i.holds).map(|i| i.name).collect();
    if verify || ctx.full() {
        record.verify = Some(identities);
    }
    let out = match ctx.cfg.format {
        Format::Tsv => {
            let o = &record.output;
            format!("n\td\tc\ts\n{}\t{}\t{}\t{}\n", o.n, o.d, o.c, fmt_q(&o.s))
        }
        _ => to_json(&record)?,
    };
    if (verify || ctx.full()) && !all {
        bail!(CheckFailed { what: failed.join("; "), output: out });
    }
    Ok(out)
}

#[derive(Serialize)]
struct Record<'a, T: Serialize> {
    command: &'a str,
    e: i64,
    result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<TransportChecks>,
}

fn transport_record<T: Serialize>(
    ctx: &Ctx,
    command: &str,
    result: T,
    checks: Option<TransportChecks>,
) -> Result<String> {
    let ok = checks.as_ref().is_none_or(TransportChecks::all);
    let out = to_json(&Record { command, e: ctx.g.e, result, checks })?;
    if !ok {
        bail!(CheckFailed { what: format!("{command}: transport checks"), output: out });
    }
    Ok(out)
}

pub fn transport(ctx: &Ctx, cmd: TransportCmd) -> Result<String> {
    ctx.json_only("transport")?;
    let g = ctx.g;
    match cmd {
        TransportCmd::Forward { abar, pbar, qbar, bbar } => {
            let res = forward_transport(&abar, &pbar, &qbar, &bbar, g)?;
            let checks = ctx.full().then(|| run_checks(&res, g));
            transport_record(ctx, "transport forward", res, checks)
        }
        TransportCmd::Inverse { a, p, q, b } => {
            let res = inverse_transport(&a, &p, &q, &b, g)?;
            let checks = ctx.full().then(|| run_checks(&res, g));
            transport_record(ctx, "transport inverse", res, checks)
        }
        TransportCmd::Tx { lambda, z, k } => {
            let params = match k {
                Some(k) => TxParams::new(lambda, z, Z::from(k))?,
                None => TxParams::infer(lambda, z)?,
            };
            let res = tx_transport(&params, g)?;
            let checks = ctx.full().then(|| run_checks(&res.transport, g));
            transport_record(ctx, "transport tx", res, checks)
        }
        TransportCmd::Thm54 { table, lambda, vbar } => {
            let v = read_table(&table)?;
            let cert = projectivity_certificate(&v, &lambda, &Z::from(vbar), g)?;
            let checks = ctx.full().then(|| run_checks(&cert.transport, g));
            transport_record(ctx, "transport thm54", cert, checks)
        }
        TransportCmd::Friedman56 { table, lambda, ubar } => {
            let v = read_table(&table)?;
            let res = friedman_bound(&v, &lambda, &Z::from(ubar), g)?;
            transport_record(ctx, "transport friedman56", res, None)
        }
        TransportCmd::Thm58 { table, lambda } => {
            let v = read_table(&table)?;
            let res = zero_fiber_bounds(&v, &lambda, g)?;
            transport_record(ctx, "transport thm58", res, None)
        }
    }
}

#[derive(Serialize)]
struct BoundRecord {
    kind: &'static str,
    e: i64,
    v: ChernTable,
    #[serde(rename = "B")]
    b_field: Divisor,
    omega: Divisor,
    #[serde(with = "qstr")]
    bound: Q,
    #[serde(with = "zint")]
    integrality_constant: Z,
}

#[derive(Serialize)]
struct LineBundleRecord {
    #[serde(flatten)]
    wall: LineBundleWall,
    dominated: bool,
}

#[derive(Serialize)]
struct GeometricRecord {
    e: i64,
    #[serde(flatten)]
    bound: GeometricityBound,
}

pub fn bounds(ctx: &Ctx, cmd: BoundsCmd) -> Result<String> {
    ctx.json_only("bounds")?;
    let g = ctx.g;
    let omega = |b: &Q| Divisor::new(Q::from_integer(Z::from(1)), b.clone());
    match cmd {
        BoundsCmd::Gieseker { table, field: f } => {
            let v = read_table(&table)?;
            let bf = field(&f);
            let bound = gieseker_bound(&v, &bf, &f.b, g)?;
            let n = integrality_constant(&f.b, g)?;
            to_json(&BoundRecord {
                kind: "gieseker",
                e: g.e,
                v,
                b_field: bf,
                omega: omega(&f.b),
                bound,
                integrality_constant: n,
            })
        }
        BoundsCmd::Onedim { table, field: f } => {
            let v = read_table(&table)?;
            let bf = field(&f);
            let bound = onedim_bound(&v, &bf, &f.b, g)?;
            let n = integrality_constant(&f.b, g)?;
            to_json(&BoundRecord {
                kind: "onedim",
                e: g.e,
                v,
                b_field: bf,
                omega: omega(&f.b),
                bound,
                integrality_constant: n,
            })
        }
        BoundsCmd::Zerofiber { table, lambda, b } => {
            let v = read_table(&table)?;
            let bound = zerofiber_bound(&v, &lambda, &b, g)?;
            let bf = Divisor::new(Q::new(v.d.clone(), v.n.clone()), lambda);
            let n = integrality_constant(&b, g)?;
            to_json(&BoundRecord {
                kind: "zerofiber",
                e: g.e,
                v,
                b_field: bf,
                omega: omega(&b),
                bound,
                integrality_constant: n,
            })
        }
        BoundsCmd::Geometric { pbar, bbar } => {
            to_json(&GeometricRecord { e: g.e, bound: geometricity_bound(&pbar, &bbar, g)? })
        }
        BoundsCmd::Linebundle { alpha, beta, bbar } => {
            let wall = line_bundle_wall(&Divisor::ints(alpha, beta), &bbar, g)?;
            let dominated = wall.dominated();
            to_json(&LineBundleRecord { wall, dominated })
        }
    }
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
    /// Every wall with `a > 0` lies strictly below the bound.
    all_walls_below_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<String>,
}

fn search_box(cfg: &RunConfig, args: &WallsArgs) -> SearchBox {
    let mut b = cfg.search_box.clone();
    if let Some([n, d, c]) = args.search_box {
        b = SearchBox { s: b.s, include_boundary: b.include_boundary, ..SearchBox::symmetric(n, d, c) };
    }
    if let Some(r) = args.n_range {
        b.n = r;
    }
    if let Some(r) = args.d_range {
        b.d = r;
    }
    if let Some(r) = args.c_range {
        b.c = r;
    }
    if args.s_range.is_some() {
        b.s = args.s_range.clone();
    }
    b.include_boundary |= args.include_boundary;
    b
}

fn wall_bound(ctx: &Ctx, args: &WallsArgs, v: &ChernTable, bf: &Divisor) -> Result<Option<BoundSummary>> {
    let g = ctx.g;
    let b = &args.field.b;
    let kind = match args.bound {
        BoundKind::None => return Ok(None),
        BoundKind::Auto => {
            let auto = if v.n == Z::from(0) {
                onedim_bound(v, bf, b, g).map(|x| ("onedim", x))
            } else {
                gieseker_bound(v, bf, b, g).map(|x| ("gieseker", x))
            };
            return Ok(auto.ok().map(|(kind, value)| BoundSummary { kind, value }));
        }
        k => k,
    };
    let summary = match kind {
        BoundKind::Gieseker => BoundSummary { kind: "gieseker", value: gieseker_bound(v, bf, b, g)? },
        BoundKind::Onedim => BoundSummary { kind: "onedim", value: onedim_bound(v, bf, b, g)? },
        _ => {
            let twist = Divisor::new(Q::new(v.d.clone(), v.n.clone()), args.lambda.clone());
            if v.n == Z::from(0) || &twist != bf {
                bail!(Usage(format!("--bound zerofiber needs B = μ_f(v)Θ + λf = {twist}; pass matching --p and --q")));
            }
            BoundSummary { kind: "zerofiber", value: zerofiber_bound(v, &args.lambda, b, g)? }
        }
    };
    Ok(Some(summary))
}

pub fn walls(ctx: &Ctx, args: &WallsArgs) -> Result<String> {
    let g = ctx.g;
    let v = read_table(&args.table)?;
    let bf = field(&args.field);
    let sb = search_box(&ctx.cfg, args);
    let mut report = enumerate_walls(&v, &bf, &args.field.b, &sb, g)?;
    if args.generic {
        report.generic = Some(is_generic_ray(&v, &bf, &args.field.b, &sb, g)?);
    }
    let bound = wall_bound(ctx, args, &v, &bf)?;
    let below = bound
        .as_ref()
        .map(|bd| report.walls.iter().filter(|w| w.a > Q::from_integer(Z::from(0))).all(|w| w.a < bd.value));
    match ctx.cfg.format {
        Format::Tsv => Ok(report.to_tsv()),
        Format::Json => to_json(&WallsRecord { report, bound, all_walls_below_bound: below, svg: None }),
        Format::SvgJson => {
            let svg = render_svg(&report, bound.as_ref().map(|b| &b.value));
            to_json(&WallsRecord { report, bound, all_walls_below_bound: below, svg: Some(svg) })
        }
    }
}

#[derive(Serialize)]
struct EuclidRecord {
    #[serde(flatten)]
    trace: EuclidTrace,
    #[serde(skip_serializing_if = "Option::is_none")]
    replay: Option<bool>,
}

fn euclid_tsv(trace: &EuclidTrace) -> String {
    let mut out = String::from("step\tmove\tparam\tn\td\tc\ts\n");
    let row = |step: usize, name: &str, param: String, t: &ChernTable| {
        format!("{step}\t{name}\t{param}\t{}\t{}\t{}\t{}\n", t.n, t.d, t.c, fmt_q(&t.s))
    };
    out.push_str(&row(0, "input", String::new(), &trace.input));
    for (i, mv) in trace.moves.iter().enumerate() {
        let (name, param) = match &mv.kind {
            ellstab::MoveKind::Upsilon { k } => ("Upsilon", k.to_string()),
            ellstab::MoveKind::Psi { m } => ("Psi", m.to_string()),
            ellstab::MoveKind::FinalPhiDualStep { k } => ("FinalPhiDualStep", k.to_string()),
        };
        out.push_str(&row(i + 1, name, param, &mv.after));
    }
    out
}

pub fn euclid(ctx: &Ctx, table: &TableInput) -> Result<String> {
    if ctx.cfg.format == Format::SvgJson {
        bail!(Usage("euclid supports --format json or tsv".into()));
    }
    let v = read_table(table)?;
    let trace = euclid_reduce(&v, ctx.g)?;
    let replayed = if ctx.full() { Some(replay(&trace, ctx.g)?) } else { None };
    let out = match ctx.cfg.format {
        Format::Tsv => euclid_tsv(&trace),
        _ => to_json(&EuclidRecord { trace, replay: replayed })?,
    };
    if replayed == Some(false) {
        bail!(CheckFailed { what: "euclid: replay through lattice primitives".into(), output: out });
    }
    Ok(out)
}

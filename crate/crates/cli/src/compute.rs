use anyhow::{bail, Result};
use clap::ValueEnum;
use finsler_core::curvature::h_tensor;
use finsler_core::identities::{Op, PointContext};
use finsler_core::{ChartPoint, ConnectionKind, Direction, PiTensor, Slot};
use serde::Serialize;

use crate::run::{resolve_metric, write_output};
use crate::ComputeArgs;

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum DerivativeDir {
    /// Along horizontal lifts `βē_k = δ_k`.
    H,
    /// Along vertical lifts `γē_k = ∂/∂y^k`.
    V,
}

#[derive(Serialize)]
struct Component {
    index: Vec<usize>,
    value: f64,
}

#[derive(Serialize)]
struct ComputeOutput {
    metric: String,
    object: String,
    connection: Option<ConnectionKind>,
    derivative: Option<&'static str>,
    point: String,
    slots: Vec<&'static str>,
    convention: String,
    components: Vec<Component>,
}

/// Object name, whether it depends on the connection, and its index convention.
const OBJECTS: &[(&str, bool, &str)] = &[
    ("g", false, "[i][j] = g_ij = ∂²E/∂y^i∂y^j, E = L²/2"),
    ("g_inv", false, "[i][j] = g^ij"),
    ("C", false, "[i][j][k] = C_ijk = ¼ ∂³L²/∂y^i∂y^j∂y^k"),
    ("spray", false, "[i] = G^i"),
    ("N", false, "[i][j] = N^i_j = ∂G^i/∂y^j"),
    ("dN", false, "[i][j][k] = ∂N^i_j/∂y^k"),
    ("H", true, "[i][j][k] = H^i_jk with D_{δ_k} ē_j = H^i_jk ē_i"),
    ("V", true, "[i][j][k] = V^i_jk with D_{∂/∂y^k} ē_j = V^i_jk ē_i"),
    ("Q", true, "[x][y][i] = Q(ē_x, ē_y)^i"),
    ("T", true, "[x][y][i] = T(ē_x, ē_y)^i"),
    ("Rhat", true, "[x][y][i] = R̂(ē_x, ē_y)^i"),
    ("Phat", true, "[x][y][i] = P̂(ē_x, ē_y)^i"),
    ("Shat", true, "[x][y][i] = Ŝ(ē_x, ē_y)^i"),
    ("R", true, "[x][y][z][i] = (R(ē_x, ē_y) ē_z)^i"),
    ("P", true, "[x][y][z][i] = (P(ē_x, ē_y) ē_z)^i"),
    ("S", true, "[x][y][z][i] = (S(ē_x, ē_y) ē_z)^i"),
    ("H-tensor", false, "[x][i] = R̂(η̄, ē_x)^i"),
    ("barthel", false, "[x][y][i] = 𝕽(δ_x, δ_y)^i = −v[δ_x, δ_y]"),
];

fn slot_name(s: Slot) -> &'static str {
    match s {
        Slot::Up => "up",
        Slot::Down => "down",
        Slot::Inert => "label",
    }
}

fn derivative_op(object: &str, k: ConnectionKind) -> Option<Op> {
    Some(match object {
        "g" => Op::G,
        "Q" => Op::Q(k),
        "T" => Op::T(k),
        "Rhat" => Op::Rhat,
        "Phat" => Op::Phat(k),
        "R" => Op::R(k),
        "P" => Op::P(k),
        "S" => Op::S(k),
        "H-tensor" => Op::HTensor,
        _ => return None,
    })
}

fn object_values(ctx: &PointContext<f64>, object: &str, k: ConnectionKind) -> Result<PiTensor<f64>> {
    let n = ctx.n;
    let fd = &ctx.fd;
    let b = ctx.bundle(k);
    Ok(match object {
        "g" => fd.g.clone(),
        "g_inv" => fd.g_inv.clone(),
        "C" => fd.c.clone(),
        "spray" => PiTensor::new(n, vec![Slot::Up], fd.spray.clone()),
        "N" => fd.nl.clone(),
        "dN" => fd.dn.clone(),
        "H" => b.data.h.values(),
        "V" => b.data.v.values(),
        "Q" => b.tv.q.clone(),
        "T" => b.tv.t.clone(),
        "Rhat" => b.tv.rhat.clone(),
        "Phat" => b.tv.phat.clone(),
        "Shat" => b.tv.shat.clone(),
        "R" => ctx.cv(k)?.r.clone(),
        "P" => ctx.cv(k)?.p.clone(),
        "S" => ctx.cv(k)?.s.clone(),
        "H-tensor" => h_tensor(&b.tors.rhat, &ctx.frame).values(),
        "barthel" => ctx.barthel_direct()?.clone(),
        other => bail!("unknown object `{other}`"),
    })
}

pub fn run(args: &ComputeArgs) -> Result<()> {
    let spec = resolve_metric(&args.metric)?;
    let Some(&(name, per_connection, convention)) = OBJECTS.iter().find(|o| o.0 == args.object) else {
        let names: Vec<&str> = OBJECTS.iter().map(|o| o.0).collect();
        bail!("unknown object `{}`; expected one of {}", args.object, names.join(", "));
    };
    let point: ChartPoint<f64> = args.point.parse()?;
    if point.dim() != spec.dim {
        bail!("point has dimension {}, metric has {}", point.dim(), spec.dim);
    }
    let ctx = PointContext::new(&spec, &point, args.order)?;
    let k = args.connection;
    let (values, convention, derivative) = match args.derivative {
        None => (object_values(&ctx, name, k)?, convention.to_string(), None),
        Some(d) => {
            let Some(op) = derivative_op(name, k) else {
                bail!("covariant derivatives are available for g, Q, T, Rhat, Phat, R, P, S, H-tensor");
            };
            let (dir, label, lift) = match d {
                DerivativeDir::H => (Direction::H, "h", "δ_k"),
                DerivativeDir::V => (Direction::V, "v", "∂/∂y^k"),
            };
            let v = ctx.d(k, op, dir)?;
            let conv = format!("{convention}, with a last slot [k] for the covariant derivative along {lift}");
            ((*v).clone(), conv, Some(label))
        }
    };
    let out = ComputeOutput {
        metric: spec.label(),
        object: name.to_string(),
        connection: (per_connection || derivative.is_some()).then_some(k),
        derivative,
        point: point.to_string(),
        slots: values.slots().iter().map(|s| slot_name(*s)).collect(),
        convention,
        components: values
            .indices()
            .map(|i| Component {
                value: values.at(&i),
                index: i,
            })
            .collect(),
    };
    write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&out)? + "\n"))
}

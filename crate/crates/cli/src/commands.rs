use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use gbc_core::audit::{run_audit, AuditConfig, Bound, Tolerances};
use gbc_core::coords::{gradients, grid_points, scan_grid, sup_gradient_scan, values, CoordinateKind, CoordsError};
use gbc_core::fem::{build_mesh, convergence_study, FemSettings, MeshFile};
use gbc_core::geometry::{geometric_constants, normalize_to_unit_diameter, PolygonFile};
use gbc_core::interp::TestField;
use gbc_core::sampling::ShapeLimits;
use gbc_core::{GeometryError, Polygon, Vec2};
use serde::Serialize;
use serde_json::json;

use crate::{CheckArgs, Command, ConvergeArgs, EvalArgs, FieldName, Format, PentagonArgs, PropertiesArgs};

/// Runs one command. `Ok(false)` means the command completed but a check it
/// performs failed.
pub fn run(command: Command) -> Result<bool> {
    match command {
        Command::Eval(a) => eval(a),
        Command::CheckPolygon(a) => check_polygon(a),
        Command::PentagonStudy(a) => pentagon_study(a),
        Command::Converge(a) => converge(a),
        Command::Properties(a) => properties(a),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn read_polygon(path: &Path) -> Result<Polygon> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = PolygonFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_polygon().with_context(|| format!("polygon in {}", path.display()))
}

/// Six significant digits.
fn sig6(v: f64) -> String {
    format!("{v:.5e}")
}

#[derive(Debug, Serialize)]
struct PointRow {
    x: f64,
    y: f64,
    status: &'static str,
    lambda: Vec<f64>,
    grad: Vec<Vec2>,
}

/// Outside and boundary points become flagged rows; any other failure, such
/// as Wachspress coordinates on a polygon with a straight angle, aborts.
fn eval_point(p: &Polygon, x: Vec2, kind: CoordinateKind) -> Result<PointRow> {
    let row = |status, lambda, grad| PointRow { x: x.x, y: x.y, status, lambda, grad };
    match gradients(p, x, kind) {
        Ok(e) => Ok(row("ok", e.lambda.clone(), e.gradients().to_vec())),
        Err(CoordsError::Geometry(GeometryError::OutsidePolygon { .. })) => Ok(row("outside", vec![], vec![])),
        Err(CoordsError::Geometry(GeometryError::PointTooCloseToBoundary { .. })) => {
            Ok(row("boundary", values(p, x, kind)?.lambda, vec![]))
        }
        Err(e) => Err(e.into()),
    }
}

fn point_rows_csv(n: usize, rows: &[PointRow]) -> String {
    let mut out = String::from("x,y,status");
    for i in 0..n {
        write!(out, ",lambda_{i}").unwrap();
    }
    for i in 0..n {
        write!(out, ",grad_x_{i},grad_y_{i}").unwrap();
    }
    out.push('\n');
    for r in rows {
        write!(out, "{},{},{}", r.x, r.y, r.status).unwrap();
        for i in 0..n {
            match r.lambda.get(i) {
                Some(v) => write!(out, ",{v}").unwrap(),
                None => out.push(','),
            }
        }
        for i in 0..n {
            match r.grad.get(i) {
                Some(g) => write!(out, ",{},{}", g.x, g.y).unwrap(),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}

/// `x,y,i,lambda_i,grad_x,grad_y` for every vertex at every scanned point.
fn surface_dump(p: &Polygon, kind: CoordinateKind, grid_n: usize, margin: f64) -> Result<String> {
    let mut out = String::from("x,y,i,lambda_i,grad_x,grad_y\n");
    for x in scan_grid(p, grid_n, margin) {
        let e = gradients(p, x, kind)?;
        for (i, (l, g)) in e.lambda.iter().zip(e.gradients()).enumerate() {
            writeln!(out, "{},{},{i},{l},{},{}", x.x, x.y, g.x, g.y).unwrap();
        }
    }
    Ok(out)
}

fn eval(a: EvalArgs) -> Result<bool> {
    let modes = usize::from(!a.points.is_empty()) + usize::from(a.grid.is_some() && !a.scan) + usize::from(a.scan);
    ensure!(modes == 1, "give exactly one of --point, --grid or --scan");
    ensure!(a.dump.is_none() || a.scan, "--dump needs --scan");
    if let Some(g) = a.grid {
        ensure!(g >= 1, "--grid must be positive");
    }
    ensure!(a.margin > 0.0, "--margin must be positive");
    let p = read_polygon(&a.polygon)?;

    if a.scan {
        let grid_n = a.grid.unwrap_or(256);
        let scan = sup_gradient_scan(&p, a.kind, grid_n, a.margin)?;
        let text = match a.output.format {
            Format::Json => to_json(&scan)?,
            Format::Csv => {
                let mut out = String::from("vertex_index,max_grad_norm\n");
                for (i, g) in scan.per_vertex.iter().enumerate() {
                    writeln!(out, "{i},{g}").unwrap();
                }
                out
            }
            Format::Md => {
                let mut out = String::from("| vertex | max gradient norm |\n|---|---|\n");
                for (i, g) in scan.per_vertex.iter().enumerate() {
                    writeln!(out, "| {i} | {} |", sig6(*g)).unwrap();
                }
                out
            }
        };
        if let Some(path) = &a.dump {
            let dump = surface_dump(&p, a.kind, grid_n, a.margin)?;
            fs::write(path, dump).with_context(|| format!("writing {}", path.display()))?;
        }
        emit(&a.output.out, &text)?;
        return Ok(true);
    }

    let pts = match a.grid {
        Some(g) => grid_points(&p, g),
        None => a.points,
    };
    let rows = pts.iter().map(|&x| eval_point(&p, x, a.kind)).collect::<Result<Vec<_>>>()?;
    let text = match a.output.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => point_rows_csv(p.len(), &rows),
        Format::Md => bail!("eval writes csv or json"),
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

fn check_polygon(a: CheckArgs) -> Result<bool> {
    ensure!(a.gamma_star > 0.0 && a.d_star > 0.0, "thresholds must be positive");
    let p = read_polygon(&a.polygon)?;
    let (q, _) = normalize_to_unit_diameter(&p);
    let c = geometric_constants(&q);
    let g1 = c.aspect_ratio < a.gamma_star;
    let g2 = c.min_edge > a.d_star;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let quantities = [
        ("gamma", c.aspect_ratio),
        ("d_min", c.min_edge),
        ("beta_min", c.beta_min),
        ("beta_max", c.beta_max),
        ("h_star", c.h_star),
        ("alpha_star", c.alpha_star),
    ];
    let text = match a.format {
        Format::Json => to_json(&json!({
            "vertices": p.len(),
            "diameter": p.diameter(),
            "normalized": c,
            "gamma_star": a.gamma_star,
            "d_star": a.d_star,
            "g1": verdict(g1),
            "g2": verdict(g2),
        }))?,
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            for (k, v) in quantities {
                writeln!(out, "{k},{}", sig6(v)).unwrap();
            }
            writeln!(out, "g1,{}\ng2,{}", verdict(g1), verdict(g2)).unwrap();
            out
        }
        Format::Md => {
            let mut out = format!("{} vertices, diameter {}, constants after scaling to unit diameter\n\n", p.len(), sig6(p.diameter()));
            out.push_str("| quantity | value |\n|---|---|\n");
            for (k, v) in quantities {
                writeln!(out, "| {k} | {} |", sig6(v)).unwrap();
            }
            writeln!(out, "\nG1 gamma < {}: {}", a.gamma_star, verdict(g1)).unwrap();
            writeln!(out, "G2 d_min > {}: {}", a.d_star, verdict(g2)).unwrap();
            out
        }
    };
    emit(&a.out, &text)?;
    Ok(g1 && g2)
}

fn pentagon_study(a: PentagonArgs) -> Result<bool> {
    ensure!(!a.apex.is_empty(), "--apex needs at least one value");
    ensure!(a.apex.iter().all(|&x| x > 1.0 && x.is_finite()), "apex heights must exceed 1");
    ensure!(a.grid >= 8, "--grid must be at least 8");
    ensure!(a.margin > 0.0, "--margin must be positive");
    if let Some(dir) = &a.dump {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    #[derive(Serialize)]
    struct Row {
        apex: f64,
        kind: CoordinateKind,
        max_grad_norm: f64,
        per_vertex: Vec<f64>,
        argmax: Vec2,
    }
    let mut rows = Vec::new();
    for &apex in &a.apex {
        let p = Polygon::pentagon(apex)?;
        for kind in CoordinateKind::ALL {
            let scan = sup_gradient_scan(&p, kind, a.grid, a.margin)?;
            if let Some(dir) = &a.dump {
                let path = dir.join(format!("pentagon_{apex}_{kind}.csv"));
                fs::write(&path, surface_dump(&p, kind, a.grid, a.margin)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            rows.push(Row { apex, kind, max_grad_norm: scan.overall, per_vertex: scan.per_vertex, argmax: scan.argmax });
        }
    }
    let text = match a.output.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("apex,kind,max_grad_norm\n");
            for r in &rows {
                writeln!(out, "{},{},{}", r.apex, r.kind, sig6(r.max_grad_norm)).unwrap();
            }
            out
        }
        Format::Md => {
            let mut out = String::from("| apex | mvc | wachspress |\n|---|---|---|\n");
            for pair in rows.chunks(2) {
                writeln!(out, "| {} | {} | {} |", pair[0].apex, sig6(pair[0].max_grad_norm), sig6(pair[1].max_grad_norm))
                    .unwrap();
            }
            out
        }
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

fn converge(a: ConvergeArgs) -> Result<bool> {
    ensure!(!a.levels.is_empty(), "--levels needs at least one value");
    ensure!(a.levels.iter().all(|&n| (1..=128).contains(&n)), "levels must lie in 1..=128");
    ensure!(a.levels.windows(2).all(|w| w[0] < w[1]), "levels must be strictly increasing");
    let field = match a.field {
        FieldName::SinExp => TestField::SinExp,
        FieldName::X2 => TestField::XSquared,
        FieldName::Xy => TestField::XY,
        FieldName::Y2 => TestField::YSquared,
        FieldName::Affine => TestField::Affine { a: 1.0, b: 2.0, c: -1.0 },
    };
    let report = convergence_study(&a.levels, &field, field.name(), &FemSettings::default())?;
    if let Some(path) = &a.mesh {
        let finest = build_mesh(*a.levels.last().unwrap())?;
        fs::write(path, to_json(&MeshFile::from(&finest))?).with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match a.output.format {
        Format::Json => to_json(&report)?,
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    };
    emit(&a.output.out, &text)?;
    Ok(true)
}

fn properties(a: PropertiesArgs) -> Result<bool> {
    ensure!(a.polygons >= 1 && a.samples >= 1, "--polygons and --samples must be at least 1");
    ensure!(a.gamma_star > 0.0 && a.d_star > 0.0, "thresholds must be positive");
    let mut config = AuditConfig {
        seed: a.seed,
        polygons: a.polygons,
        samples: a.samples,
        limits: ShapeLimits { gamma_star: a.gamma_star, d_star: a.d_star, ..ShapeLimits::default() },
        ..AuditConfig::default()
    };
    if let Some(t) = a.tol {
        ensure!(t > 0.0, "--tol must be positive");
        config.tolerances = Tolerances::uniform(t);
    }
    let report = run_audit(&config)?;
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Md => report.to_text(),
        Format::Csv => {
            let mut out = String::from("check,checked,violations,extreme,bound,limit\n");
            for c in &report.checks {
                let bound = match c.bound {
                    Bound::AtMost => "at_most",
                    Bound::AtLeast => "at_least",
                };
                writeln!(out, "{},{},{},{},{bound},{}", c.name, c.checked, c.violations, sig6(c.extreme), c.limit).unwrap();
            }
            out
        }
    };
    emit(&a.out, &text)?;
    Ok(report.total_violations() == 0)
}

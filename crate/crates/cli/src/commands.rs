use std::path::{Path, PathBuf};

use isoconn_core::isoconn::{
    iso_connectivity_zone, l4_closed_form_spectrum, l4_validity, parametric_l4, ParametricL4,
    ZoneGrid,
};
use isoconn_core::isospectral::{permutation_family, similarity_transform, FamilyMode};
use isoconn_core::matcore::{ones_axis_rotation, permutation_matrix, symmetric_eigendecomposition};
use isoconn_core::mobility::{integrate_connectivity_change, mirror_moves};
use isoconn_core::render::render_svg;
use isoconn_core::spectral::{
    algebraic_connectivity, is_isospectral, spectral_distance, EIGENVALUE_TOLERANCE,
};
use isoconn_core::topology::{build_laplacian, is_connected, validate_laplacian};
use isoconn_core::{AgentConfiguration, Error, SquareMatrix};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{csv_text, emit, format_float, round_value};
use crate::{Cli, Command, Common, ConfigSource, Format, Source};

/// Zone membership tolerance when `--tol` is absent.
const DEFAULT_ZONE_TOL: f64 = 1e-3;
/// Family size when sampling and no `--limit` is given.
const DEFAULT_SAMPLE_LIMIT: usize = 100;

enum Cell {
    Num(f64),
    Text(String),
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

/// Result of one subcommand before formatting.
enum Rendered {
    Data { json: Value, table: Option<Table> },
    Svg(String),
}

fn data(json: Value) -> Rendered {
    Rendered::Data { json, table: None }
}

fn tabular(json: Value, table: Table) -> Rendered {
    Rendered::Data {
        json,
        table: Some(table),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let format = resolve_format(&cli.command, cli.common.format)?;
    if let Some(tol) = cli.common.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Usage(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    let rendered = dispatch(&cli.command, &cli.common)?;
    let text = match (rendered, format) {
        (Rendered::Svg(svg), _) => svg,
        (Rendered::Data { mut json, .. }, Format::Json) => {
            round_value(&mut json, cli.common.decimals());
            let mut s = serde_json::to_string_pretty(&json).expect("values are serializable");
            s.push('\n');
            s
        }
        (Rendered::Data { table: Some(t), .. }, Format::Csv) => {
            let decimals = cli.common.decimals();
            let rows: Vec<Vec<String>> = t
                .rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|c| match c {
                            Cell::Num(x) => format_float(x, decimals),
                            Cell::Text(s) => s,
                        })
                        .collect()
                })
                .collect();
            let header: Vec<&str> = t.header.iter().map(String::as_str).collect();
            csv_text(&header, &rows)?
        }
        _ => unreachable!("format checked before dispatch"),
    };
    emit(&text, cli.common.output.as_deref())
}

fn resolve_format(command: &Command, requested: Option<Format>) -> Result<Format, CliError> {
    let (name, default, allowed): (&str, Format, &[Format]) = match command {
        Command::Render { .. } => ("render", Format::Svg, &[Format::Svg]),
        Command::Spectrum(_) => ("spectrum", Format::Json, &[Format::Json, Format::Csv]),
        Command::Connectivity(_) => ("connectivity", Format::Json, &[Format::Json, Format::Csv]),
        Command::Isospectral { .. } => ("isospectral", Format::Json, &[Format::Json, Format::Csv]),
        Command::Moves(_) => ("moves", Format::Json, &[Format::Json, Format::Csv]),
        Command::Zone { .. } => ("zone", Format::Json, &[Format::Json, Format::Csv]),
        Command::Transform { .. } => ("transform", Format::Json, &[Format::Json]),
        Command::Integrate { .. } => ("integrate", Format::Json, &[Format::Json]),
        Command::Parametric { .. } => ("parametric", Format::Json, &[Format::Json]),
    };
    let format = requested.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(CliError::Usage(
            format!("{name} does not support --format {format:?}").to_lowercase(),
        ))
    }
}

fn dispatch(command: &Command, common: &Common) -> Result<Rendered, CliError> {
    let tol = common.tol;
    match command {
        Command::Spectrum(source) => spectrum(source),
        Command::Connectivity(source) => connectivity(source, tol.unwrap_or(EIGENVALUE_TOLERANCE)),
        Command::Isospectral {
            matrix,
            input,
            enumerate,
            dedupe,
            limit,
        } => isospectral(
            matrix,
            input.as_deref(),
            *enumerate,
            *dedupe,
            *limit,
            common,
        ),
        Command::Transform {
            source,
            perm,
            q,
            theta,
        } => transform(
            source,
            perm.as_deref(),
            q.as_deref(),
            *theta,
            tol.unwrap_or(EIGENVALUE_TOLERANCE),
        ),
        Command::Moves(source) => moves(source),
        Command::Integrate {
            source,
            path,
            steps,
        } => integrate(source, path, *steps),
        Command::Zone {
            source,
            grid,
            target,
        } => zone(source, grid, *target, tol.unwrap_or(DEFAULT_ZONE_TOL)),
        Command::Parametric { alpha, beta } => parametric(*alpha, *beta),
        Command::Render { input, mobile } => render(input, mobile.as_deref()),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

struct Loaded {
    laplacian: SquareMatrix,
    config: Option<AgentConfiguration>,
}

impl Loaded {
    fn labels(&self) -> Vec<String> {
        match &self.config {
            Some(c) => c.agents.iter().map(|a| a.id.clone()).collect(),
            None => (0..self.laplacian.order()).map(|i| i.to_string()).collect(),
        }
    }
}

fn load(source: &Source) -> Result<Loaded, CliError> {
    load_one(source.input.as_deref(), source.matrix.as_deref())
}

fn load_one(input: Option<&Path>, matrix: Option<&Path>) -> Result<Loaded, CliError> {
    match (input, matrix) {
        (Some(path), None) => {
            let config: AgentConfiguration = read_json(path)?;
            Ok(Loaded {
                laplacian: build_laplacian(&config)?,
                config: Some(config),
            })
        }
        (None, Some(path)) => Ok(Loaded {
            laplacian: read_json(path)?,
            config: None,
        }),
        _ => Err(CliError::Usage(
            "exactly one of --input or --matrix is required".into(),
        )),
    }
}

fn load_config(source: &ConfigSource) -> Result<(AgentConfiguration, usize), CliError> {
    let config: AgentConfiguration = read_json(&source.input)?;
    let mobile = resolve_agent(&config, &source.mobile)?;
    Ok((config, mobile))
}

fn resolve_agent(config: &AgentConfiguration, key: &str) -> Result<usize, CliError> {
    match config.index_of(key) {
        Ok(i) => Ok(i),
        Err(e) => match key.parse::<usize>() {
            Ok(i) => {
                config.check_index(i)?;
                Ok(i)
            }
            Err(_) => Err(e.into()),
        },
    }
}

fn spectrum(source: &Source) -> Result<Rendered, CliError> {
    let loaded = load(source)?;
    let d = symmetric_eigendecomposition(&loaded.laplacian)?;
    let labels = loaded.labels();
    let mut header = vec!["index".to_string(), "eigenvalue".to_string()];
    header.extend(labels.iter().map(|l| format!("v_{l}")));
    let rows = d
        .eigenvalues
        .iter()
        .zip(&d.eigenvectors)
        .enumerate()
        .map(|(i, (&lambda, v))| {
            let mut row = vec![Cell::Text((i + 1).to_string()), Cell::Num(lambda)];
            row.extend(v.iter().map(|&x| Cell::Num(x)));
            row
        })
        .collect();
    let json = json!({
        "order": d.order(),
        "labels": labels,
        "eigenvalues": d.eigenvalues,
        "eigenvectors": d.eigenvectors,
        "residual": d.residual,
        "sweeps": d.sweeps,
    });
    Ok(tabular(json, Table { header, rows }))
}

fn connectivity(source: &Source, tol: f64) -> Result<Rendered, CliError> {
    let loaded = load(source)?;
    let report = algebraic_connectivity(&loaded.laplacian)?;
    let validation = validate_laplacian(&loaded.laplacian, tol);
    let labels = loaded.labels();
    let rows = labels
        .iter()
        .zip(&report.fiedler)
        .map(|(l, &x)| vec![Cell::Text(l.clone()), Cell::Num(x)])
        .collect();
    let json = json!({
        "labels": labels,
        "lambda2": report.lambda2,
        "fiedler": report.fiedler,
        "degenerate": report.degenerate,
        "gap": report.gap(),
        "spectrum": report.spectrum,
        "connected": validation.connected,
        "graph_connected": loaded.config.as_ref().map(is_connected),
        "validation": validation,
        "tol": tol,
    });
    let header = vec!["agent".to_string(), "fiedler".to_string()];
    Ok(tabular(json, Table { header, rows }))
}

fn isospectral(
    matrices: &[PathBuf],
    input: Option<&Path>,
    enumerate: bool,
    dedupe: bool,
    limit: Option<usize>,
    common: &Common,
) -> Result<Rendered, CliError> {
    let tol = common.tol.unwrap_or(EIGENVALUE_TOLERANCE);
    if matrices.len() > 2 {
        return Err(CliError::Usage("at most two --matrix files".into()));
    }
    if matrices.len() == 2 {
        if enumerate {
            return Err(CliError::Usage("--enumerate takes a single matrix".into()));
        }
        let a: SquareMatrix = read_json(&matrices[0])?;
        let b: SquareMatrix = read_json(&matrices[1])?;
        let ea = symmetric_eigendecomposition(&a)?.eigenvalues;
        let eb = symmetric_eigendecomposition(&b)?.eigenvalues;
        let json = json!({
            "isospectral": is_isospectral(&a, &b, tol)?,
            "spectral_distance": spectral_distance(&a, &b)?,
            "spectrum_a": ea,
            "spectrum_b": eb,
            "tol": tol,
        });
        let rows = ea
            .iter()
            .zip(&eb)
            .enumerate()
            .map(|(i, (&x, &y))| vec![Cell::Text((i + 1).to_string()), Cell::Num(x), Cell::Num(y)])
            .collect();
        let header = ["index", "eigenvalue_a", "eigenvalue_b"]
            .map(String::from)
            .to_vec();
        return Ok(tabular(json, Table { header, rows }));
    }
    if !enumerate {
        return Err(CliError::Usage(
            "pass --enumerate or two --matrix files".into(),
        ));
    }
    if limit == Some(0) {
        return Err(CliError::Usage("--limit must be at least 1".into()));
    }
    let loaded = load_one(input, matrices.first().map(PathBuf::as_path))?;
    let n = loaded.laplacian.order();
    let mode = match (FamilyMode::auto(n), common.seed) {
        (FamilyMode::Sample { .. }, Some(seed)) => FamilyMode::Sample { seed },
        (mode, _) => mode,
    };
    let (mode_name, seed, default_limit) = match mode {
        FamilyMode::Enumerate => ("enumerate", None, usize::MAX),
        FamilyMode::Sample { seed } => ("sample", Some(seed), DEFAULT_SAMPLE_LIMIT),
    };
    let family = permutation_family(
        &loaded.laplacian,
        limit.unwrap_or(default_limit),
        dedupe,
        mode,
    )?;
    let base = symmetric_eigendecomposition(&loaded.laplacian)?.eigenvalues;

    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (k, e) in family.iter().enumerate() {
        let perm = e.perm.clone().unwrap_or_default();
        let iso = is_isospectral(&loaded.laplacian, &e.result, tol)?;
        rows.push(vec![
            Cell::Text((k + 1).to_string()),
            Cell::Text(
                perm.iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            Cell::Text(iso.to_string()),
            Cell::Text(e.laplacian_structured.to_string()),
            Cell::Text(e.distinct_from_base.to_string()),
        ]);
        entries.push(json!({
            "perm": perm,
            "result": e.result,
            "isospectral": iso,
            "laplacian_structured": e.laplacian_structured,
            "distinct_from_base": e.distinct_from_base,
        }));
    }
    let json = json!({
        "order": n,
        "mode": mode_name,
        "seed": seed,
        "dedupe": dedupe,
        "count": family.len(),
        "base": loaded.laplacian,
        "base_spectrum": base,
        "entries": entries,
        "tol": tol,
    });
    let header = [
        "index",
        "perm",
        "isospectral",
        "laplacian_structured",
        "distinct_from_base",
    ]
    .map(String::from)
    .to_vec();
    Ok(tabular(json, Table { header, rows }))
}

fn transform(
    source: &Source,
    perm: Option<&[usize]>,
    q: Option<&Path>,
    theta: Option<f64>,
    tol: f64,
) -> Result<Rendered, CliError> {
    if perm.is_none() && q.is_none() && theta.is_none() {
        return Err(CliError::Usage(
            "one of --perm, --q or --theta is required".into(),
        ));
    }
    let loaded = load(source)?;
    let n = loaded.laplacian.order();
    let q = match (perm, q, theta) {
        (Some(p), _, _) => {
            if p.len() != n {
                return Err(Error::OrderMismatch {
                    left: n,
                    right: p.len(),
                }
                .into());
            }
            permutation_matrix(p)?
        }
        (_, Some(path), _) => read_json(path)?,
        (_, _, Some(t)) => ones_axis_rotation(n, t)?,
        _ => unreachable!(),
    };
    let e = similarity_transform(&loaded.laplacian, &q)?;
    let json = json!({
        "perm": e.perm,
        "transform": e.transform,
        "result": e.result,
        "isospectral": is_isospectral(&loaded.laplacian, &e.result, tol)?,
        "laplacian_structured": e.laplacian_structured,
        "laplacian_failures": validate_laplacian(&e.result, tol).failures(),
        "distinct_from_base": e.distinct_from_base,
        "tol": tol,
    });
    Ok(data(json))
}

fn moves(source: &ConfigSource) -> Result<Rendered, CliError> {
    let (config, mobile) = load_config(source)?;
    let solution = mirror_moves(&config, mobile)?;
    let mut json = serde_json::to_value(&solution).expect("serializable");
    json["mobile_id"] = json!(config.agents[mobile].id);
    json["preserved_neighbor_ids"] = json!(solution
        .preserved_neighbors
        .iter()
        .map(|&j| config.agents[j].id.clone())
        .collect::<Vec<_>>());
    let rows = solution
        .alternatives
        .iter()
        .map(|p| vec![Cell::Num(p[0]), Cell::Num(p[1])])
        .collect();
    let header = vec!["x".to_string(), "y".to_string()];
    Ok(tabular(json, Table { header, rows }))
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("invalid number {s:?} in {what}")))
        })
        .collect()
}

fn parse_path(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| match parse_numbers(pair, "--path")?.as_slice() {
            &[x, y] => Ok([x, y]),
            _ => Err(CliError::Usage(format!("waypoint {pair:?} is not x,y"))),
        })
        .collect()
}

fn integrate(source: &ConfigSource, path: &str, steps: usize) -> Result<Rendered, CliError> {
    let waypoints = parse_path(path)?;
    if waypoints.is_empty() {
        return Err(CliError::Usage("--path needs at least one waypoint".into()));
    }
    let (config, mobile) = load_config(source)?;
    let result = integrate_connectivity_change(&config, mobile, &waypoints, steps)?;
    for w in result.warnings() {
        eprintln!("warning: {w}");
    }
    let mut json = serde_json::to_value(&result).expect("serializable");
    json["reliable"] = json!(result.is_reliable());
    json["error"] = json!((result.integral - result.direct).abs());
    json["warnings"] = json!(result.warnings());
    Ok(data(json))
}

fn parse_grid(text: &str) -> Result<ZoneGrid, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 6 {
        return Err(CliError::Usage(
            "--grid is x_min,x_max,y_min,y_max,nx,ny".into(),
        ));
    }
    let bounds = parse_numbers(&parts[..4].join(","), "--grid")?;
    let count = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("invalid grid count {s:?}")))
    };
    Ok(ZoneGrid {
        x_min: bounds[0],
        x_max: bounds[1],
        y_min: bounds[2],
        y_max: bounds[3],
        nx: count(parts[4])?,
        ny: count(parts[5])?,
    })
}

fn zone(
    source: &ConfigSource,
    grid: &str,
    target: Option<f64>,
    tol: f64,
) -> Result<Rendered, CliError> {
    let grid = parse_grid(grid)?;
    let (config, mobile) = load_config(source)?;
    let sample = iso_connectivity_zone(&config, mobile, target, grid, tol)?;
    let rows = sample
        .accepted
        .iter()
        .map(|p| vec![Cell::Num(p.x), Cell::Num(p.y), Cell::Num(p.lambda2)])
        .collect();
    let header = ["x", "y", "lambda2"].map(String::from).to_vec();
    let json = serde_json::to_value(&sample).expect("serializable");
    Ok(tabular(json, Table { header, rows }))
}

fn parametric(alpha: f64, beta: f64) -> Result<Rendered, CliError> {
    let p = ParametricL4::new(alpha, beta)?;
    let matrix = parametric_l4(p);
    let numeric = symmetric_eigendecomposition(&matrix)?;
    let json = json!({
        "alpha": alpha,
        "beta": beta,
        "matrix": matrix,
        "discriminant": p.discriminant(),
        "closed_form": l4_closed_form_spectrum(p)?,
        "eigenvalues": numeric.eigenvalues,
        "modal_matrix": numeric.modal_matrix(),
        "validity": l4_validity(p),
    });
    Ok(data(json))
}

fn render(input: &Path, mobile: Option<&str>) -> Result<Rendered, CliError> {
    let config: AgentConfiguration = read_json(input)?;
    let ghosts = match mobile {
        Some(key) => mirror_moves(&config, resolve_agent(&config, key)?)?.alternatives,
        None => Vec::new(),
    };
    Ok(Rendered::Svg(render_svg(&config, &ghosts)))
}

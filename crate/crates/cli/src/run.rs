//! Pipeline stages and their artifacts.

use crate::args::Format;
use crate::config::{CliConfig, CommandKind, Source};
use crate::error::{at, CliError};
use crate::num::Num;
use mdca_core::grid::load_binary_image;
use mdca_core::harness::ErrorReport;
use mdca_core::{
    compute_mdcas, gauss_discretize, lambda_mdca_estimate, mdca_estimate, run_experiment, run_sweep, trace_boundary,
    DigitalCurve, GridSpec, Method, MdcaSet, PixelSet,
};
use serde::Serialize;

/// Rendered artifact plus a one-line summary for the error stream.
pub struct Artifact {
    pub bytes: Vec<u8>,
    pub summary: String,
}

#[derive(Serialize)]
struct Grid {
    h: Num,
    origin: [Num; 2],
    width: usize,
    height: usize,
}

impl From<&GridSpec> for Grid {
    fn from(s: &GridSpec) -> Self {
        Grid {
            h: Num(s.h),
            origin: [Num(s.origin.x), Num(s.origin.y)],
            width: s.width,
            height: s.height,
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(at("output"))?;
    out.push(b'\n');
    Ok(out)
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(at("output"))?;
    for row in rows {
        w.write_record(&row).map_err(at("output"))?;
    }
    w.into_inner().map_err(at("output"))
}

fn pixels(cfg: &CliConfig) -> Result<PixelSet, CliError> {
    match &cfg.source {
        Source::Shape(shape) => {
            let spec = GridSpec::covering(shape.bounds(), cfg.h).map_err(at("rasterize"))?;
            gauss_discretize(shape.as_ref(), &spec).map_err(at("rasterize"))
        }
        Source::Image(path) => load_binary_image(path, cfg.h).map_err(at("rasterize")),
    }
}

fn curve(cfg: &CliConfig) -> Result<DigitalCurve, CliError> {
    trace_boundary(&pixels(cfg)?).map_err(at("trace"))
}

fn arcs(curve: &DigitalCurve) -> Result<MdcaSet, CliError> {
    compute_mdcas(curve).map_err(at("mdca"))
}

pub fn run(cfg: &CliConfig) -> Result<Artifact, CliError> {
    match cfg.command {
        CommandKind::Rasterize => rasterize(cfg),
        CommandKind::Trace => trace(cfg),
        CommandKind::Mdca => mdca(cfg),
        CommandKind::Curvature => curvature(cfg),
        CommandKind::Convergence => convergence(cfg),
    }
}

fn rasterize(cfg: &CliConfig) -> Result<Artifact, CliError> {
    #[derive(Serialize)]
    struct Out {
        source: String,
        grid: Grid,
        count: usize,
        pixels: Vec<[usize; 2]>,
    }
    let px = pixels(cfg)?;
    let spec = *px.spec();
    let bytes = match cfg.format {
        Format::Json => json(&Out {
            source: cfg.source.label(),
            grid: Grid::from(&spec),
            count: px.len(),
            pixels: px.iter().map(|(i, j)| [i, j]).collect(),
        })?,
        Format::Csv => csv_table(
            &["i", "j", "x", "y"],
            px.iter().map(|(i, j)| {
                let p = spec.grid_point(i, j);
                vec![i.to_string(), j.to_string(), Num(p.x).to_string(), Num(p.y).to_string()]
            }),
        )?,
    };
    Ok(Artifact {
        bytes,
        summary: format!("{} pixels on a {}x{} grid", px.len(), spec.width, spec.height),
    })
}

fn trace(cfg: &CliConfig) -> Result<Artifact, CliError> {
    #[derive(Serialize)]
    struct Edge {
        index: usize,
        start: [i64; 2],
        end: [i64; 2],
        inner: [i64; 2],
        outer: [i64; 2],
    }
    #[derive(Serialize)]
    struct Out {
        source: String,
        grid: Grid,
        length: usize,
        edges: Vec<Edge>,
    }
    let c = curve(cfg)?;
    let edges = c.edges().iter().enumerate().map(|(index, e)| Edge {
        index,
        start: [e.start.x, e.start.y],
        end: [e.end.x, e.end.y],
        inner: [e.inner.0, e.inner.1],
        outer: [e.outer.0, e.outer.1],
    });
    let bytes = match cfg.format {
        Format::Json => json(&Out {
            source: cfg.source.label(),
            grid: Grid::from(c.spec()),
            length: c.len(),
            edges: edges.collect(),
        })?,
        Format::Csv => csv_table(
            &["index", "start_x", "start_y", "end_x", "end_y", "inner_i", "inner_j", "outer_i", "outer_j"],
            edges.map(|e| {
                [e.index as i64, e.start[0], e.start[1], e.end[0], e.end[1], e.inner[0], e.inner[1], e.outer[0], e.outer[1]]
                    .iter()
                    .map(|v| v.to_string())
                    .collect()
            }),
        )?,
    };
    Ok(Artifact {
        bytes,
        summary: format!("{} boundary edges", c.len()),
    })
}

fn mdca(cfg: &CliConfig) -> Result<Artifact, CliError> {
    #[derive(Serialize)]
    struct Arc {
        index: usize,
        i: usize,
        j: usize,
        n: usize,
        center: [Num; 2],
        radius: Num,
        k_h: Num,
        encloses: mdca_core::Enclosed,
    }
    #[derive(Serialize)]
    struct Out {
        source: String,
        grid: Grid,
        curve_length: usize,
        count: usize,
        arcs: Vec<Arc>,
    }
    let c = curve(cfg)?;
    let set = arcs(&c)?;
    let rows = set.iter().enumerate().map(|(index, a)| Arc {
        index,
        i: a.start,
        j: a.end,
        n: a.len,
        center: [Num(a.circle.center.x), Num(a.circle.center.y)],
        radius: Num(a.circle.radius),
        k_h: Num(a.curvature),
        encloses: a.circle.encloses,
    });
    let bytes = match cfg.format {
        Format::Json => json(&Out {
            source: cfg.source.label(),
            grid: Grid::from(c.spec()),
            curve_length: c.len(),
            count: set.len(),
            arcs: rows.collect(),
        })?,
        Format::Csv => csv_table(
            &["index", "i", "j", "n", "center_x", "center_y", "radius", "k_h", "encloses"],
            rows.map(|a| {
                vec![
                    a.index.to_string(),
                    a.i.to_string(),
                    a.j.to_string(),
                    a.n.to_string(),
                    a.center[0].to_string(),
                    a.center[1].to_string(),
                    a.radius.to_string(),
                    a.k_h.to_string(),
                    match a.encloses {
                        mdca_core::Enclosed::Inner => "inner".into(),
                        mdca_core::Enclosed::Outer => "outer".into(),
                    },
                ]
            }),
        )?,
    };
    Ok(Artifact {
        bytes,
        summary: format!("{} maximal arcs on {} edges", set.len(), c.len()),
    })
}

fn curvature(cfg: &CliConfig) -> Result<Artifact, CliError> {
    #[derive(Serialize)]
    struct Edge {
        index: usize,
        mid_x: Num,
        mid_y: Num,
        #[serde(skip_serializing_if = "Option::is_none")]
        mdca: Option<Num>,
        #[serde(skip_serializing_if = "Option::is_none")]
        lambda_mdca: Option<Num>,
    }
    #[derive(Serialize)]
    struct Out {
        source: String,
        grid: Grid,
        lambda: mdca_core::Lambda,
        length: usize,
        edges: Vec<Edge>,
    }
    let c = curve(cfg)?;
    let set = arcs(&c)?;
    let want = |m: Method| cfg.method.is_none_or(|x| x == m);
    let plain = if want(Method::Mdca) {
        Some(mdca_estimate(&c, &set).map_err(at("curvature"))?)
    } else {
        None
    };
    let weighted = if want(Method::LambdaMdca) {
        Some(lambda_mdca_estimate(&c, &set, cfg.lambda).map_err(at("curvature"))?)
    } else {
        None
    };
    let rows = (0..c.len()).map(|k| {
        let mid = c.midpoint(k);
        Edge {
            index: k,
            mid_x: Num(mid.x),
            mid_y: Num(mid.y),
            mdca: plain.as_ref().map(|p| Num(p.values[k])),
            lambda_mdca: weighted.as_ref().map(|p| Num(p.values[k])),
        }
    });
    let bytes = match cfg.format {
        Format::Json => json(&Out {
            source: cfg.source.label(),
            grid: Grid::from(c.spec()),
            lambda: cfg.lambda,
            length: c.len(),
            edges: rows.collect(),
        })?,
        Format::Csv => {
            let mut header = vec!["index", "mid_x", "mid_y"];
            if plain.is_some() {
                header.push("mdca");
            }
            if weighted.is_some() {
                header.push("lambda_mdca");
            }
            csv_table(
                &header,
                rows.map(|e| {
                    let mut row = vec![e.index.to_string(), e.mid_x.to_string(), e.mid_y.to_string()];
                    row.extend(e.mdca.map(|v| v.to_string()));
                    row.extend(e.lambda_mdca.map(|v| v.to_string()));
                    row
                }),
            )?
        }
    };
    Ok(Artifact {
        bytes,
        summary: format!("curvature on {} edges from {} maximal arcs", c.len(), set.len()),
    })
}

#[derive(Serialize)]
struct Row {
    h: Num,
    avg: Num,
    max: Num,
    edges: usize,
    arcs: usize,
    excluded: usize,
}

#[derive(Serialize)]
struct Report {
    shape: String,
    method: Method,
    lambda: mdca_core::Lambda,
    rows: Vec<Row>,
    slope_avg: Option<Num>,
    intercept_avg: Option<Num>,
    slope_max: Option<Num>,
    intercept_max: Option<Num>,
}

impl From<&ErrorReport> for Report {
    fn from(r: &ErrorReport) -> Self {
        Report {
            shape: r.shape.clone(),
            method: r.method,
            lambda: r.lambda,
            rows: r
                .rows
                .iter()
                .map(|row| Row {
                    h: Num(row.h),
                    avg: Num(row.avg),
                    max: Num(row.max),
                    edges: row.edges,
                    arcs: row.arcs,
                    excluded: row.excluded,
                })
                .collect(),
            slope_avg: r.slope_avg.map(Num),
            intercept_avg: r.intercept_avg.map(Num),
            slope_max: r.slope_max.map(Num),
            intercept_max: r.intercept_max.map(Num),
        }
    }
}

fn convergence(cfg: &CliConfig) -> Result<Artifact, CliError> {
    let Source::Shape(shape) = &cfg.source else {
        return Err(CliError::Usage("convergence needs a shape".into()));
    };
    let stage = |e: mdca_core::HarnessError| CliError::Pipeline {
        stage: e.stage(),
        message: e.to_string(),
    };
    let reports: Vec<ErrorReport> = match cfg.method {
        Some(m) => vec![run_experiment(shape.as_ref(), m, &cfg.resolutions, cfg.lambda).map_err(stage)?],
        None => {
            let sweep = run_sweep(shape.as_ref(), &cfg.resolutions, cfg.lambda).map_err(stage)?;
            vec![sweep.mdca, sweep.lambda_mdca]
        }
    };
    let bytes = match cfg.format {
        Format::Json => match reports.as_slice() {
            [one] => json(&Report::from(one))?,
            [plain, weighted] => {
                #[derive(Serialize)]
                struct Both {
                    mdca: Report,
                    lambda_mdca: Report,
                }
                json(&Both {
                    mdca: Report::from(plain),
                    lambda_mdca: Report::from(weighted),
                })?
            }
            _ => unreachable!("one or two reports"),
        },
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(|v| Num(v).to_string()).unwrap_or_default();
            csv_table(
                &["shape", "method", "h", "avg", "max", "edges", "arcs", "excluded", "slope_avg", "slope_max"],
                reports.iter().flat_map(|r| {
                    r.rows.iter().map(move |row| {
                        vec![
                            r.shape.clone(),
                            r.method.to_string(),
                            Num(row.h).to_string(),
                            Num(row.avg).to_string(),
                            Num(row.max).to_string(),
                            row.edges.to_string(),
                            row.arcs.to_string(),
                            row.excluded.to_string(),
                            opt(r.slope_avg),
                            opt(r.slope_max),
                        ]
                    })
                }),
            )?
        }
    };
    let summary = reports
        .iter()
        .map(|r| {
            let s = |v: Option<f64>| v.map(|v| format!("{v:.3}")).unwrap_or_else(|| "n/a".into());
            format!("{} {}: slope avg {} max {}", r.shape, r.method, s(r.slope_avg), s(r.slope_max))
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Artifact { bytes, summary })
}

//! Merging of command-line flags with an optional JSON config file.

use crate::args::{Command, Format, InputArgs, OutputArgs};
use crate::error::CliError;
use mdca_core::groundtruth::PolynomialShape;
use mdca_core::harness::default_resolutions;
use mdca_core::{catalog_shape, ImplicitShape, Lambda, Method};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Shape entry of a config file: a catalog name or a polynomial
/// `{ "name", "terms": [{ "coef", "px", "py" }], "bounds": { "min", "max" } }`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ShapeEntry {
    Name(String),
    Polynomial(PolynomialShape),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub shape: Option<ShapeEntry>,
    pub image: Option<PathBuf>,
    pub h: Option<f64>,
    pub resolutions: Option<Vec<f64>>,
    pub method: Option<Method>,
    pub lambda: Option<Lambda>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        // Image paths in a config are relative to the config file.
        if let (Some(img), Some(dir)) = (&cfg.image, path.parent()) {
            if img.is_relative() {
                cfg.image = Some(dir.join(img));
            }
        }
        Ok(cfg)
    }
}

/// Where the pixels come from.
#[derive(Clone)]
pub enum Source {
    Shape(Arc<dyn ImplicitShape>),
    Image(PathBuf),
}

impl Source {
    pub fn label(&self) -> String {
        match self {
            Source::Shape(s) => s.name().to_string(),
            Source::Image(p) => p.display().to_string(),
        }
    }
}

impl std::fmt::Debug for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Shape(s) => write!(f, "Shape({})", s.name()),
            Source::Image(p) => write!(f, "Image({})", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Rasterize,
    Trace,
    Mdca,
    Curvature,
    Convergence,
}

/// Fully resolved options of one invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: CommandKind,
    pub source: Source,
    pub h: f64,
    pub resolutions: Vec<f64>,
    /// `None` reports both estimators.
    pub method: Option<Method>,
    pub lambda: Lambda,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn shape_from_entry(entry: ShapeEntry) -> Result<Arc<dyn ImplicitShape>, CliError> {
    match entry {
        ShapeEntry::Name(name) => catalog_shape(&name).map_err(|e| CliError::Usage(e.to_string())),
        ShapeEntry::Polynomial(p) => {
            p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Arc::new(p))
        }
    }
}

fn source(flags: &InputArgs, file: &mut FileConfig) -> Result<Source, CliError> {
    let (shape, image) = if flags.shape.is_some() || flags.image.is_some() {
        (flags.shape.clone().map(ShapeEntry::Name), flags.image.clone())
    } else {
        (file.shape.take(), file.image.take())
    };
    match (shape, image) {
        (Some(s), None) => Ok(Source::Shape(shape_from_entry(s)?)),
        (None, Some(p)) => Ok(Source::Image(p)),
        (Some(_), Some(_)) => Err(CliError::Usage("give either a shape or an image, not both".into())),
        (None, None) => Err(CliError::Usage("no input: use --shape or --image".into())),
    }
}

fn positive(what: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{what} must be positive and finite, got {v}")))
    }
}

impl CliConfig {
    pub fn resolve(command: &Command) -> Result<Self, CliError> {
        let input = match command {
            Command::Rasterize(a) | Command::Trace(a) | Command::Mdca(a) => &a.input,
            Command::Curvature(a) => &a.stage.input,
            Command::Convergence(a) => &a.input,
        };
        let mut file = match &input.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let source = source(input, &mut file)?;
        let (kind, h, output, method, lambda, resolutions): (_, _, &OutputArgs, _, _, _) = match command {
            Command::Rasterize(a) => (CommandKind::Rasterize, a.h, &a.output, None, None, None),
            Command::Trace(a) => (CommandKind::Trace, a.h, &a.output, None, None, None),
            Command::Mdca(a) => (CommandKind::Mdca, a.h, &a.output, None, None, None),
            Command::Curvature(a) => (CommandKind::Curvature, a.stage.h, &a.stage.output, a.method, a.lambda, None),
            Command::Convergence(a) => (
                CommandKind::Convergence,
                None,
                &a.output,
                a.method,
                a.lambda,
                a.resolutions.clone(),
            ),
        };
        let h = positive("h", h.or(file.h).unwrap_or(1.0))?;
        let resolutions = resolutions.or(file.resolutions).unwrap_or_else(default_resolutions);
        if resolutions.is_empty() {
            return Err(CliError::Usage("resolutions must not be empty".into()));
        }
        for &r in &resolutions {
            positive("every resolution", r)?;
        }
        if kind == CommandKind::Convergence && matches!(source, Source::Image(_)) {
            return Err(CliError::Usage("convergence needs a shape with known curvature, not an image".into()));
        }
        Ok(CliConfig {
            command: kind,
            source,
            h,
            resolutions,
            method: method.map(Method::from).or(file.method),
            lambda: lambda.map(Lambda::from).or(file.lambda).unwrap_or_default(),
            output: output.output.clone().or(file.output),
            format: output.format.or(file.format).unwrap_or_default(),
        })
    }
}

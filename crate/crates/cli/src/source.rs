//! Where instances come from: files, the built-in catalog or the generator.

use std::path::{Path, PathBuf};

use clap::Args;
use fair_alloc::datagen::{generate_synthetic, paper_instance, GenSpec};
use fair_alloc::io::read_instance_file;
use fair_alloc::{CardinalityBounds, Instance};

use crate::error::{io_error, CliError, CliResult};

/// An instance ready to run, with whatever came along with it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub id: String,
    pub instance: Instance,
    pub bounds: Option<CardinalityBounds>,
    pub seed: Option<u64>,
}

impl Loaded {
    /// Bounds from the command line win over those stored with the instance.
    pub fn bounds_or(&self, flag: Option<CardinalityBounds>) -> CliResult<CardinalityBounds> {
        flag.or(self.bounds).ok_or_else(|| {
            CliError::Usage(format!("instance `{}` carries no bounds; pass --bounds l1,l2,r1,r2", self.id))
        })
    }

    /// `id` made safe for use in a file name.
    pub fn file_stem(&self) -> String {
        self.id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '-' }).collect()
    }
}

pub fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once(',').ok_or_else(|| format!("expected M,N, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    let (m, n) = (parse(m)?, parse(n)?);
    if m == 0 || n == 0 {
        return Err("sizes must be positive".into());
    }
    Ok((m, n))
}

pub fn parse_bounds(s: &str) -> Result<CardinalityBounds, String> {
    s.parse::<CardinalityBounds>().map_err(|e| e.to_string())
}

pub fn generated_id(m: usize, n: usize, seed: u64) -> String {
    format!("syn-{m}x{n}-s{seed}")
}

pub fn load_file(path: &Path) -> CliResult<Loaded> {
    let file = read_instance_file(path).map_err(|e| match e {
        fair_alloc::Error::Io { .. } => CliError::Core(e),
        other => CliError::Parse(other),
    })?;
    let instance = file.instance().map_err(CliError::Parse)?;
    let id = file
        .id
        .clone()
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    Ok(Loaded { id, instance, bounds: file.bounds, seed: file.seed })
}

pub fn load_paper(name: &str) -> CliResult<Loaded> {
    let (instance, bounds) = paper_instance(name)?;
    Ok(Loaded { id: name.to_string(), instance, bounds: Some(bounds), seed: None })
}

pub fn load_generated(m: usize, n: usize, seed: u64) -> CliResult<Loaded> {
    let instance = generate_synthetic(&GenSpec::new(m, n, seed))?;
    Ok(Loaded { id: generated_id(m, n, seed), instance, bounds: None, seed: Some(seed) })
}

/// Exactly one instance.
#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SingleSource {
    /// Instance file (JSON).
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    /// Built-in instance: table-a:<alpha>, table-b, table-c, table-d, theorem-3[:<eps>].
    #[arg(long, value_name = "NAME")]
    pub paper: Option<String>,
    /// Generate an M x N synthetic instance from --seed.
    #[arg(long, value_name = "M,N", value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
}

impl SingleSource {
    pub fn load(&self, seed: u64) -> CliResult<Loaded> {
        match (&self.instance, &self.paper, self.size) {
            (Some(path), _, _) => load_file(path),
            (_, Some(name), _) => load_paper(name),
            (_, _, Some((m, n))) => load_generated(m, n, seed),
            _ => Err(CliError::Usage("one of --instance, --paper or --size is required".into())),
        }
    }
}

/// One or more instances.
#[derive(Debug, Clone, Args)]
pub struct ManySources {
    /// Instance file (repeatable).
    #[arg(long, value_name = "PATH")]
    pub instance: Vec<PathBuf>,
    /// Every `*.json` instance file in a directory, in name order.
    #[arg(long, value_name = "DIR")]
    pub dir: Option<PathBuf>,
    /// Built-in instance (repeatable).
    #[arg(long, value_name = "NAME")]
    pub paper: Vec<String>,
    /// Generate M x N synthetic instances with seeds --seed, --seed + 1, ...
    #[arg(long, value_name = "M,N", value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
    /// Number of generated instances.
    #[arg(long, default_value_t = 1, requires = "size")]
    pub count: u64,
}

impl ManySources {
    pub fn load(&self, seed: u64) -> CliResult<Vec<Loaded>> {
        let mut out = Vec::new();
        for path in &self.instance {
            out.push(load_file(path)?);
        }
        if let Some(dir) = &self.dir {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .map_err(|e| io_error(dir, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            for path in paths {
                out.push(load_file(&path)?);
            }
        }
        for name in &self.paper {
            out.push(load_paper(name)?);
        }
        if let Some((m, n)) = self.size {
            for k in 0..self.count {
                out.push(load_generated(m, n, seed + k)?);
            }
        }
        if out.is_empty() {
            return Err(CliError::Usage("no instances given (use --instance, --dir, --paper or --size)".into()));
        }
        Ok(out)
    }
}

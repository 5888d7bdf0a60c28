//! `generate`: instance files plus a manifest.

use std::path::Path;

use fair_alloc::datagen::{build_param_grid, paper_instance};
use fair_alloc::io::InstanceFile;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::source::load_generated;
use crate::{create_dir, write_text, GenerateArgs};

pub const MANIFEST_HEADER: [&str; 6] = ["id", "file", "m", "n", "seed", "bounds"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub id: String,
    pub file: String,
    pub m: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub bounds: Option<String>,
}

fn file_name(id: &str) -> String {
    let stem: String =
        id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '-' }).collect();
    format!("{stem}.json")
}

fn write_entry(dir: &Path, file: &InstanceFile) -> CliResult<ManifestEntry> {
    let id = file.id.clone().expect("generated files carry an id");
    let name = file_name(&id);
    write_text(&dir.join(&name), &file.to_json())?;
    Ok(ManifestEntry {
        id,
        file: name,
        m: file.m,
        n: file.n,
        seed: file.seed,
        bounds: file.bounds.map(|b| b.to_string()),
    })
}

/// Writes the requested instances and `manifest.csv` into `args.out`;
/// returns the manifest entries in file order.
pub fn generate(args: &GenerateArgs) -> CliResult<Vec<ManifestEntry>> {
    create_dir(&args.out)?;
    let mut entries = Vec::new();
    if let Some((m, n)) = args.size {
        for k in 0..args.count {
            let loaded = load_generated(m, n, args.seed + k)?;
            let mut file = InstanceFile::from_instance(&loaded.instance);
            file.id = Some(loaded.id);
            file.seed = loaded.seed;
            file.bounds = args.bounds;
            entries.push(write_entry(&args.out, &file)?);
        }
        if let Some(profile) = args.grid {
            let grid = build_param_grid(m, n, profile)?;
            let mut text = serde_json::to_string_pretty(&grid).expect("grids serialise");
            text.push('\n');
            write_text(&args.out.join("grid.json"), &text)?;
        }
    } else if args.grid.is_some() {
        return Err(CliError::Usage("--grid needs --size".into()));
    }
    for name in &args.paper {
        let (inst, bounds) = paper_instance(name)?;
        let mut file = InstanceFile::from_instance(&inst);
        file.id = Some(name.clone());
        file.bounds = Some(bounds);
        entries.push(write_entry(&args.out, &file)?);
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Core(fair_alloc::Error::Csv(e));
    w.write_record(MANIFEST_HEADER).map_err(err)?;
    for e in &entries {
        w.write_record([
            e.id.clone(),
            e.file.clone(),
            e.m.to_string(),
            e.n.to_string(),
            e.seed.map(|s| s.to_string()).unwrap_or_default(),
            e.bounds.clone().unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| err(e.into_error().into()))?;
    write_text(&args.out.join("manifest.csv"), &String::from_utf8(bytes).expect("CSV is UTF-8"))?;
    Ok(entries)
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    generate(args).map(|_| ())
}

//! Command-line front end: parse JSON instances, run the downset and module
//! operations, and emit canonical JSON or rank-2 figures.
//!
//! Exit codes: 0 success, 2 validation/schema error, 3 budget or overflow.

use clap::{Args, Parser, Subcommand, ValueEnum};
use podec::cone::enumerate_faces;
use podec::downset::{orthant_faces, IntDownset};
use podec::io::{
    self, to_canonical_json, ConeDto, DownsetComponentDto, DownsetDecompositionDto,
    DownsetDto, ModuleComponentDto, ModuleDecompositionDto, ModuleDto, RegionDto,
};
use podec::module::{
    classify_element, primary_decomposition_module, realize, ModuleError,
};
use podec::oracle::{self, GridBox};
use podec::render::{face_label, render_ascii, render_svg, Panel};
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "podec", about = "Primary decomposition of downsets and hull modules", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Downset instance file (JSON).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// List the faces of a partially ordered group.
    Faces {
        /// Group presentation file (JSON).
        #[arg(long)]
        cone: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Localize a downset along a face.
    Localize {
        #[command(flatten)]
        input: InputArg,
        /// Face: coordinate names ("x", "x,y"), indices ("0,2"), or "-".
        #[arg(long)]
        face: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Support of a downset at a face, as a region.
    Support {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        face: String,
        /// Support of the localization along the face.
        #[arg(long, conflicts_with = "global")]
        local: bool,
        /// Support inside the ambient group (default).
        #[arg(long)]
        global: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Canonical primary decomposition of a downset.
    DecomposeDownset {
        #[command(flatten)]
        input: InputArg,
        /// Greedily drop components whose removal keeps the union intact.
        #[arg(long)]
        prune: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Primary decomposition of a hull-presented module.
    DecomposeModule {
        /// Module presentation file (JSON).
        #[arg(long)]
        module: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Classify every generator of a module presentation against a face.
    Classify {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        face: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check a downset instance against the brute-force grid oracle.
    Check {
        #[command(flatten)]
        input: InputArg,
        /// Grid window LO..HI, e.g. "-4,-4..4,4" (default: fitted).
        #[arg(long, value_name = "LO..HI")]
        r#box: Option<String>,
    },
    /// Draw a downset or its decomposition (rank 2 only).
    Render {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        /// Window LO..HI, e.g. "-4,-4..4,4" (default: fitted).
        #[arg(long, value_name = "LO..HI")]
        r#box: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

enum CliError {
    Validation(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<podec::downset::DownsetError> for CliError {
    fn from(e: podec::downset::DownsetError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::BoxTooLarge { .. } | ModuleError::BoxTooSmall(_) => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<podec::cone::ConeError> for CliError {
    fn from(e: podec::cone::ConeError) -> Self {
        let m = e.to_string();
        if m.contains("overflow") || m.contains("budget") {
            CliError::Budget(m)
        } else {
            CliError::Validation(m)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn load_downset(path: &PathBuf) -> Result<IntDownset, CliError> {
    let dto: DownsetDto = read_json(path)?;
    Ok(io::downset_from_dto(&dto)?)
}

/// Face spec: "-" or "" for the trivial face, else comma-separated
/// coordinate names (x, y, z) or 0-based indices.
fn parse_face(spec: &str, rank: usize) -> Result<BTreeSet<usize>, CliError> {
    let spec = spec.trim();
    if spec.is_empty() || spec == "-" || spec == "{}" {
        return Ok(BTreeSet::new());
    }
    let mut face = BTreeSet::new();
    for part in spec.split(',') {
        let i = match part.trim() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            t => t.parse::<usize>().map_err(|_| {
                CliError::Validation(format!("--face: cannot read coordinate {t:?}"))
            })?,
        };
        if i >= rank {
            return Err(CliError::Validation(format!(
                "--face: coordinate {i} out of range for rank {rank}"
            )));
        }
        face.insert(i);
    }
    Ok(face)
}

/// Window spec "LO..HI" with comma-separated coordinates on both sides.
fn parse_box(spec: &str, rank: usize) -> Result<(Vec<i64>, Vec<i64>), CliError> {
    let bad = || CliError::Validation(format!("--box: cannot read window {spec:?}"));
    let (lo_s, hi_s) = spec.split_once("..").ok_or_else(bad)?;
    let parse_vec = |s: &str| -> Result<Vec<i64>, CliError> {
        s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad())).collect()
    };
    let lo = parse_vec(lo_s)?;
    let hi = parse_vec(hi_s)?;
    if lo.len() != rank || hi.len() != rank || lo.iter().zip(&hi).any(|(a, b)| a > b) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Fitted window: all apexes plus the origin, padded by three on each side.
fn fitted_box(d: &IntDownset) -> (Vec<i64>, Vec<i64>) {
    let n = d.rank();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for p in d.pieces() {
        for i in 0..n {
            lo[i] = lo[i].min(p.apex[i]);
            hi[i] = hi[i].max(p.apex[i]);
        }
    }
    for i in 0..n {
        lo[i] -= 3;
        hi[i] += 3;
    }
    (lo, hi)
}

fn emit(out: &OutArg, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn decompose(
    d: &IntDownset,
    prune: bool,
) -> Result<Vec<(BTreeSet<usize>, IntDownset)>, CliError> {
    let comps = d.canonical_decomposition()?;
    Ok(if prune { d.prune_redundant(&comps)? } else { comps })
}

fn components_dto(comps: &[(BTreeSet<usize>, IntDownset)]) -> DownsetDecompositionDto {
    DownsetDecompositionDto {
        components: comps
            .iter()
            .map(|(face, comp)| DownsetComponentDto {
                face: face.iter().cloned().collect(),
                pieces: io::downset_to_dto(comp).pieces,
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct ClassifyRow {
    generator: usize,
    degree: Vec<i64>,
    persistent: bool,
    transient: bool,
    coprimary: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Faces { cone, out } => {
            let dto: ConeDto = read_json(&cone)?;
            let presentation = io::cone_from_dto(&dto)?;
            let lattice = enumerate_faces(&presentation)?;
            emit(&out, &to_canonical_json(&io::faces_to_dtos(&lattice)))
        }
        Command::Localize { input, face, out } => {
            let d = load_downset(&input.input)?;
            let tau = parse_face(&face, d.rank())?;
            let localized = d.localize(&tau)?;
            emit(&out, &to_canonical_json(&io::downset_to_dto(&localized)))
        }
        Command::Support { input, face, local, global: _, out } => {
            let d = load_downset(&input.input)?;
            let tau = parse_face(&face, d.rank())?;
            let region =
                if local { d.local_support(&tau)? } else { d.global_support(&tau)? };
            emit(&out, &to_canonical_json(&io::region_to_dto(&region)))
        }
        Command::DecomposeDownset { input, prune, out } => {
            let d = load_downset(&input.input)?;
            let comps = decompose(&d, prune)?;
            emit(&out, &to_canonical_json(&components_dto(&comps)))
        }
        Command::DecomposeModule { module, out } => {
            let dto: ModuleDto = read_json(&module)?;
            let h = io::module_from_dto(&dto)?;
            let rm = realize(&h)?;
            let dec = primary_decomposition_module(&rm)?;
            let payload = ModuleDecompositionDto {
                components: dec
                    .components
                    .iter()
                    .map(|c| ModuleComponentDto {
                        face: c.face.iter().cloned().collect(),
                        dims: c.quotient.dims().to_vec(),
                    })
                    .collect(),
                kernel_intersection_dims: dec.certificate.clone(),
            };
            emit(&out, &to_canonical_json(&payload))
        }
        Command::Classify { module, face, out } => {
            let dto: ModuleDto = read_json(&module)?;
            let h = io::module_from_dto(&dto)?;
            let rm = realize(&h)?;
            let tau = parse_face(&face, h.grid.rank())?;
            let mut rows = Vec::new();
            for (i, g) in h.generators.iter().enumerate() {
                let idx = h
                    .grid
                    .index(&g.degree)
                    .ok_or_else(|| ModuleError::DegreeOutsideBox(g.degree.clone()))?;
                // The generator's image in the realized module.
                let v = rm.embed[idx].mul_vec(&g.coeffs);
                let c = classify_element(&rm.module, &g.degree, &v, &tau)?;
                rows.push(ClassifyRow {
                    generator: i,
                    degree: g.degree.clone(),
                    persistent: c.persistent,
                    transient: c.transient,
                    coprimary: c.coprimary,
                });
            }
            emit(&out, &to_canonical_json(&rows))
        }
        Command::Check { input, r#box } => {
            let d = load_downset(&input.input)?;
            let (lo, hi) = match r#box {
                Some(s) => parse_box(&s, d.rank())?,
                None => fitted_box(&d),
            };
            let grid = GridBox::new(lo, hi)
                .map_err(|e| CliError::Validation(format!("--box: {e}")))?;
            check_against_oracle(&d, &grid)?;
            eprintln!("ok: symbolic operations match the grid oracle on the window");
            Ok(())
        }
        Command::Render { input, format, r#box, out } => {
            let d = load_downset(&input.input)?;
            let (lo, hi) = match r#box {
                Some(s) => parse_box(&s, d.rank())?,
                None => fitted_box(&d),
            };
            match format {
                Format::Json => {
                    let payload: RegionDto = io::region_to_dto(&d.to_region());
                    emit(&out, &to_canonical_json(&payload))
                }
                Format::Svg | Format::Ascii => {
                    let comps = decompose(&d, false)?;
                    let panels: Vec<Panel> = comps
                        .iter()
                        .map(|(face, comp)| Panel {
                            label: face_label(face, d.rank()),
                            downset: comp.clone(),
                        })
                        .collect();
                    let text = match format {
                        Format::Svg => render_svg(&panels, &lo, &hi)
                            .map_err(|e| CliError::Validation(e.to_string()))?,
                        _ => {
                            let mut s = String::new();
                            for p in &panels {
                                s.push_str(&p.label);
                                s.push('\n');
                                s.push_str(
                                    &render_ascii(&p.downset, &lo, &hi)
                                        .map_err(|e| CliError::Validation(e.to_string()))?,
                                );
                            }
                            s
                        }
                    };
                    emit(&out, &text)
                }
            }
        }
    }
}

/// Run every downset operation against its brute-force counterpart on the
/// given window.
fn check_against_oracle(d: &IntDownset, grid: &GridBox) -> Result<(), CliError> {
    let fail = |what: &str, q: Vec<i64>| {
        CliError::Validation(format!("oracle mismatch in {what} at {q:?}"))
    };
    let n = d.rank();
    let symbolic = oracle::checked_tabulation(d, grid, 1)
        .map_err(|e| CliError::Validation(format!("--box: {e}")))?;
    for tau in orthant_faces(n) {
        let loc = oracle::from_downset(&d.localize(&tau)?, grid);
        if let Some(q) = loc.first_mismatch(&oracle::grid_localize(&symbolic, &tau)) {
            return Err(fail("localize", q));
        }
        let sup = oracle::from_region(&d.global_support(&tau)?, grid);
        if let Some(q) = sup.first_mismatch(&oracle::grid_global_support(&symbolic, n, &tau)) {
            return Err(fail("global support", q));
        }
        let comp = oracle::from_downset(&d.primary_component(&tau)?, grid);
        if let Some(q) =
            comp.first_mismatch(&oracle::grid_primary_component(&symbolic, n, &tau))
        {
            return Err(fail("primary component", q));
        }
    }
    let comps = d.canonical_decomposition()?;
    let mut union = oracle::GridSet::empty(grid.clone());
    for (_, c) in &comps {
        union = union.union(&oracle::from_downset(c, grid));
    }
    if let Some(q) = union.first_mismatch(&symbolic) {
        return Err(fail("decomposition union", q));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

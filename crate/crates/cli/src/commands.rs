use std::fs;
use std::path::{Path, PathBuf};

use etf_forge::designs::SteinerSystem;
use etf_forge::etf::{
    assemble_etf, compute_params, naimark_complement, verify_equiangular, verify_tight, EtfMatrix, FlatChoice, Frame,
    RowAssignment,
};
use etf_forge::flat::{best_flat, dft_matrix, FlatKind};
use etf_forge::io::{read_design, read_frame, write_dense, write_design, write_steiner, LoadedFrame};
use etf_forge::params::{
    admissible as admissibility, enumerate_families, format_table_csv, format_table_text, recover_design_params, AdmissibilityVerdict,
    Family, Recovery,
};
use etf_forge::rip::{block_dependency_certificate, gershgorin_report, ric_exhaustive, RicOptions};
use etf_forge::{DesignError, EtfError, FlatError, IoError, ParamError, RipError};

use crate::args::{
    AdmissibleArgs, ComplementArgs, ExportArgs, FamilyArgs, FamilyName, FlatArgs, GenerateArgs, ImportArgs, ParamsArgs, PathArgs,
    RipArgs, RipMode, TableArgs, TableFormat, VerifyArgs,
};

pub const EXIT_PARAM: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn param(message: impl Into<String>) -> Self {
        Self { code: EXIT_PARAM, message: message.into() }
    }

    fn verify(message: impl Into<String>) -> Self {
        Self { code: EXIT_VERIFY, message: message.into() }
    }
}

impl From<DesignError> for Failure {
    fn from(e: DesignError) -> Self {
        Failure::param(e.to_string())
    }
}

impl From<FlatError> for Failure {
    fn from(e: FlatError) -> Self {
        Failure::param(e.to_string())
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        Failure::param(e.to_string())
    }
}

impl From<EtfError> for Failure {
    fn from(e: EtfError) -> Self {
        match e {
            EtfError::NotTight(_) => Failure::verify(e.to_string()),
            _ => Failure::param(e.to_string()),
        }
    }
}

impl From<RipError> for Failure {
    fn from(e: RipError) -> Self {
        match e {
            RipError::Etf(inner) => inner.into(),
            other => Failure::param(other.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Design(d) => d.into(),
            IoError::Flat(f) => f.into(),
            IoError::Etf(x) => x.into(),
            other => Failure { code: EXIT_IO, message: other.to_string() },
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn require<T>(value: Option<T>, flag: &str, family: FamilyName) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::param(format!("--{flag} is required for --family {family:?}").to_lowercase()))
}

fn family_of(args: &FamilyArgs) -> Result<Family, Failure> {
    let fam = args.family;
    Ok(match fam {
        FamilyName::Pair => Family::TwoBlocks { v: require(args.v, "v", fam)? },
        FamilyName::Triple => Family::ThreeBlocks { v: require(args.v, "v", fam)? },
        FamilyName::Affine => Family::Affine { q: require(args.q, "q", fam)?, n: require(args.n, "n", fam)? },
        FamilyName::Projective => Family::Projective { q: require(args.q, "q", fam)?, n: require(args.n, "n", fam)? },
        FamilyName::Unital => Family::Unital { q: require(args.q, "q", fam)? },
    })
}

/// Builds the family's design; on failure reports the admissibility of the
/// requested parameters alongside the generator's error.
fn build_design(args: &FamilyArgs) -> Result<(Family, SteinerSystem), Failure> {
    let family = family_of(args)?;
    let built = family.build().expect("every selectable family has a generator");
    match built {
        Ok(design) => Ok((family, design)),
        Err(e) => {
            let verdict = match (args.family, args.v) {
                (FamilyName::Pair, Some(v)) => Some(admissibility(2, v)),
                (FamilyName::Triple, Some(v)) => Some(admissibility(3, v)),
                _ => None,
            };
            let message = match verdict {
                Some(verdict) => format!("{e}\nadmissibility of (k, v): {verdict}"),
                None => e.to_string(),
            };
            Err(Failure::param(message))
        }
    }
}

fn assemble(design: &SteinerSystem, flat: &FlatArgs) -> Result<EtfMatrix, Failure> {
    let r = design.r().ok_or_else(|| Failure::param("design has non-integral replication number"))?;
    let flats = match &flat.flats {
        Some(path) => {
            let descriptors: Vec<String> = serde_json::from_str(&fs::read_to_string(path)?)
                .map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })?;
            let built = descriptors.iter().map(|d| d.parse::<FlatKind>()?.build()).collect::<Result<Vec<_>, FlatError>>()?;
            FlatChoice::PerPoint(built)
        }
        None if flat.prefer_real || !flat.complex => FlatChoice::Shared(best_flat(r + 1, true)?),
        None => FlatChoice::Shared(dft_matrix(r + 1)?),
    };
    Ok(assemble_etf(design, &flats, &RowAssignment::OmitRow(flat.omit_row))?)
}

fn summary(etf: &dyn Frame, real: bool) -> String {
    let p = compute_params(etf);
    format!(
        "{}x{} {} ETF: alpha={:.17}, redundancy={:.17}, density={:.17}",
        p.m,
        p.n,
        if real { "real" } else { "complex" },
        p.alpha,
        p.redundancy,
        p.density
    )
}

fn default_out(design: &SteinerSystem, family: FamilyName) -> PathBuf {
    let m = design.b();
    let n = design.v() * (design.r().unwrap_or(0) + 1);
    PathBuf::from(format!("{}-{m}x{n}.mtx", format!("{family:?}").to_lowercase()))
}

pub fn generate(args: &GenerateArgs) -> CmdResult {
    let (family, design) = build_design(&args.family)?;
    let etf = assemble(&design, &args.flat)?;
    let out = args.out.clone().unwrap_or_else(|| default_out(&design, args.family.family));
    write_steiner(&out, &etf, &family.to_string())?;
    if let Some(path) = &args.design_out {
        write_design(path, &design)?;
    }
    println!("{}", summary(&etf, etf.is_real()));
    println!("wrote {}", out.display());
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let (loaded, meta) = read_frame(&args.path)?;
    let frame = loaded.as_frame();
    let tight = verify_tight(frame, args.tol);
    let eq = verify_equiangular(frame, args.tol);
    let params = compute_params(frame);
    let density_ok = match &loaded {
        // Sparse frames must match the density formula; dense ones are
        // checked against the sidecar only.
        LoadedFrame::Steiner(_) => params.density_consistent,
        LoadedFrame::Dense(_) => (params.density - meta.density).abs() <= 1e-12,
    };
    let welch_ok = (eq.coherence - params.alpha).abs() <= args.tol;

    if args.json {
        let report = serde_json::json!({
            "params": params,
            "tight": tight,
            "equiangular": eq,
            "density_ok": density_ok,
            "welch_ok": welch_ok,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("{}", summary(frame, meta.real));
        println!(
            "tight: {} (max offdiag {:.3e}, max diag dev {:.3e}{})",
            pass(tight.passed),
            tight.max_offdiag,
            tight.max_diag_dev,
            match tight.exact {
                Some(true) => ", exact integer check passed",
                Some(false) => ", exact integer check FAILED",
                None => "",
            }
        );
        println!("equiangular: {} (max pair dev {:.3e}, max norm dev {:.3e})", pass(eq.passed), eq.max_pair_dev, eq.max_norm_dev);
        println!("density: {} ({:.17})", pass(density_ok), params.density);
        println!("welch: {} (coherence {:.17}, bound {:.17})", pass(welch_ok), eq.coherence, params.alpha);
    }

    if !tight.passed {
        let (i, j) = tight.counterexample.unwrap_or((0, 0));
        return Err(Failure::verify(format!("not tight: F F* entry ({i}, {j}) off by more than the tolerance")));
    }
    if let Some(n) = eq.norm_counterexample {
        return Err(Failure::verify(format!("column {n} does not have unit norm")));
    }
    if let Some(w) = eq.worst_pair.filter(|_| !eq.passed) {
        return Err(Failure::verify(format!("columns ({}, {}) have inner product modulus {:.17}, expected {:.17}", w.a, w.b, w.modulus, eq.alpha)));
    }
    if !density_ok {
        return Err(Failure::verify(format!("density {:.17} does not match the expected value", params.density)));
    }
    if !welch_ok {
        return Err(Failure::verify(format!("coherence {:.17} differs from the Welch bound {:.17}", eq.coherence, params.alpha)));
    }
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn params(args: &ParamsArgs) -> CmdResult {
    let rec = recover_design_params(args.m, args.n)?;
    println!("{rec}");
    if let Recovery::Steiner(p) = &rec {
        if let Some(verdict) = p.verdict() {
            println!("{verdict}");
        }
    }
    Ok(())
}

pub fn admissible(args: &AdmissibleArgs) -> CmdResult {
    let verdict = admissibility(args.k, args.v);
    println!("{verdict}");
    if matches!(verdict, AdmissibilityVerdict::Inadmissible { .. }) {
        return Err(Failure::param(format!("(k, v) = ({}, {}) is inadmissible", args.k, args.v)));
    }
    Ok(())
}

pub fn table(args: &TableArgs) -> CmdResult {
    let rows = enumerate_families(args.max_m);
    match args.format {
        TableFormat::Text => print!("{}", format_table_text(&rows)),
        TableFormat::Csv => print!("{}", format_table_csv(&rows)),
    }
    Ok(())
}

pub fn rip(args: &RipArgs) -> CmdResult {
    let (loaded, _) = read_frame(&args.path)?;
    let frame = loaded.as_frame();
    let report = match args.mode {
        RipMode::Gershgorin => gershgorin_report(frame, args.k)?,
        RipMode::Exhaustive => {
            let opts = RicOptions {
                budget: args.budget,
                allow_sampling: !args.no_sampling,
                samples: args.samples,
                seed: args.seed,
                early_exit: args.early_exit,
            };
            ric_exhaustive(frame, args.k, &opts)?
        }
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(())
}

pub fn certificate(args: &PathArgs) -> CmdResult {
    let (loaded, _) = read_frame(&args.path)?;
    let LoadedFrame::Steiner(etf) = loaded else {
        return Err(EtfError::NoProvenance.into());
    };
    let cert = block_dependency_certificate(&etf)?;
    println!("{}", serde_json::to_string(&cert).expect("certificate serializes"));
    if !cert.passed {
        return Err(Failure::verify(format!(
            "block columns are not dependent: sigma_min {:.3e}, residual {:.3e}",
            cert.sigma_min, cert.dependency_residual
        )));
    }
    Ok(())
}

fn complement_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}-complement.mtx"))
}

pub fn complement(args: &ComplementArgs) -> CmdResult {
    let (loaded, meta) = read_frame(&args.path)?;
    let comp = naimark_complement(loaded.as_frame(), args.tol)?;
    let out = args.out.clone().unwrap_or_else(|| complement_path(&args.path));
    let family = format!("Naimark complement of {}", meta.family);
    let written = write_dense(&out, &comp, &family)?;
    println!("{}", summary(&comp, written.real));
    println!("wrote {}", out.display());
    Ok(())
}

pub fn export(args: &ExportArgs) -> CmdResult {
    let (_, design) = build_design(&args.family)?;
    write_design(&args.out, &design)?;
    println!("({}, {}) design with {} blocks, sha256 {}", design.k(), design.v(), design.b(), design.digest());
    println!("wrote {}", args.out.display());
    Ok(())
}

pub fn import(args: &ImportArgs) -> CmdResult {
    let design = read_design(&args.design)?;
    let etf = assemble(&design, &args.flat)?;
    write_steiner(&args.out, &etf, &args.label)?;
    println!("{}", summary(&etf, etf.is_real()));
    println!("wrote {}", args.out.display());
    Ok(())
}

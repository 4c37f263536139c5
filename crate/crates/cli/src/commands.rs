//! Implementations of the `borsuk` subcommands.

use std::path::{Path, PathBuf};
use std::time::Instant;

use borsuk_core::covers::{build_demo_r2, build_ucs_r4};
use borsuk_core::error::{Error, Result};
use borsuk_core::optimize::{
    certify, multistart_search_detailed, one_part_baseline, Certificate, SearchParams,
    DEFAULT_THRESHOLD,
};
use borsuk_core::polytope::{part_polytopes, UpperBoundContext};
use borsuk_core::specfile::{
    fmt_f64, parse_certificate, serialize_certificate, ElementReport, RunReport, SpecFile,
    TOOL_VERSION,
};

use crate::figure;

/// Previously reported best certified diameters for the four covers, used
/// by `reproduce` for side-by-side comparison.
pub const REFERENCE_DMAX: [(&str, f64); 4] = [
    ("U1", 0.99906),
    ("U2", 0.99809),
    ("U3", 0.99987),
    ("U4p", 0.99978),
];

/// Writes the four cover skeletons (no direction systems) into `out_dir`.
/// Re-running produces byte-identical files.
pub fn build_ucs(out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let defaults = SearchParams::default();
    let mut written = Vec::new();
    for cover in build_ucs_r4()?.elements {
        let path = out_dir.join(format!("{}.spec", cover.label()));
        let spec = SpecFile::new(cover, defaults.m_lower, defaults.m_upper, defaults.seed);
        spec.write_to(&path)?;
        written.push(path);
    }
    Ok(written)
}

/// Flags of the `search` subcommand; `None` falls back to the spec file.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub restarts: usize,
    pub m_lower: Option<usize>,
    pub m_upper: Option<usize>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub threshold: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 50,
            m_lower: None,
            m_upper: None,
            seed: None,
            workers: 0,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

/// Runs the multistart search on the cover of a spec file and writes the
/// completed spec (with the winning direction system) plus the
/// certificate next to `out` (same stem, `.cert` extension).
pub fn search(spec_path: &Path, opts: &SearchOptions, out: &Path) -> Result<Certificate> {
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument(
            "restart budget must be positive".into(),
        ));
    }
    let spec = SpecFile::read_from(spec_path)?;
    let params = SearchParams {
        n_restarts: opts.restarts,
        m_lower: opts.m_lower.unwrap_or(spec.m_lower),
        m_upper: opts.m_upper.unwrap_or(spec.m_upper),
        seed: opts.seed.unwrap_or(spec.seed),
        workers: opts.workers,
        threshold: opts.threshold,
        ..SearchParams::default()
    };
    let outcome = multistart_search_detailed(&spec.cover, &params)?;
    let cert = outcome.certificate;
    let mut solved = SpecFile::new(spec.cover, params.m_lower, params.m_upper, params.seed);
    solved.directions = Some(cert.system.clone());
    if let Some(dir) = out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    solved.write_to(out)?;
    std::fs::write(cert_path(out), serialize_certificate(&cert))?;
    Ok(cert)
}

/// Certificate path derived from a spec output path.
pub fn cert_path(spec_out: &Path) -> PathBuf {
    spec_out.with_extension("cert")
}

/// Re-certifies the configuration stored in a spec file; this is the sole
/// authority for "pass".  The caller maps `pass` to the exit code.
pub fn verify(spec_path: &Path, m_upper: Option<usize>, threshold: f64) -> Result<Certificate> {
    let spec = SpecFile::read_from(spec_path)?;
    let Some(ds) = spec.directions else {
        return Err(Error::InvalidArgument(
            "spec file has no direction system to verify".into(),
        ));
    };
    certify(
        &spec.cover,
        &ds,
        m_upper.unwrap_or(spec.m_upper),
        threshold,
        spec.seed,
    )
}

/// Human-readable verification summary, diameters first.
pub fn format_verification(cert: &Certificate) -> String {
    let mut s = String::new();
    s.push_str(&format!("cover: {}\n", cert.cover_label));
    let rounded: Vec<String> = cert
        .part_diameters
        .iter()
        .map(|d| format!("{d:.5}"))
        .collect();
    s.push_str(&format!("diameters: {{{}}}\n", rounded.join(", ")));
    s.push_str(&format!("d_max: {:.5}\n", cert.d_best));
    s.push_str(&format!("d_max-exact: {}\n", fmt_f64(cert.d_best)));
    s.push_str(&format!("threshold: {}\n", fmt_f64(cert.threshold)));
    s.push_str(&format!("pass: {}\n", cert.pass));
    s
}

/// Runs the full planar pipeline on both demo covers and emits, per cover,
/// the completed spec, the certificate and plain-text figure data (cover
/// boundary, circumscribed polygon, inscribed samples, part polygons).
pub fn demo2d(m_lower: usize, m_upper: usize, out_dir: &Path) -> Result<Vec<Certificate>> {
    std::fs::create_dir_all(out_dir)?;
    let mut certs = Vec::new();
    for cover in build_demo_r2()? {
        let params = SearchParams {
            n_restarts: 20,
            m_lower,
            m_upper,
            m_finetune: m_upper.min(9),
            ..SearchParams::default()
        };
        let outcome = multistart_search_detailed(&cover, &params)?;
        let cert = outcome.certificate;
        let label = cover.label().to_string();
        let mut solved = SpecFile::new(cover.clone(), m_lower, m_upper, params.seed);
        solved.directions = Some(cert.system.clone());
        solved.write_to(&out_dir.join(format!("{label}.spec")))?;
        std::fs::write(
            out_dir.join(format!("{label}.cert")),
            serialize_certificate(&cert),
        )?;
        let ctx = UpperBoundContext::new(&cover, m_upper)?;
        let parts = part_polytopes(ctx.polytope(), &cert.system)?;
        let fig = figure::planar_figure(&cover, &cert.system, m_lower, ctx.polytope(), &parts)?;
        std::fs::write(out_dir.join(format!("{label}_figure.txt")), fig)?;
        certs.push(cert);
    }
    Ok(certs)
}

/// Flags of the `reproduce` subcommand.
#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub budget: usize,
    pub m_lower: usize,
    pub m_upper: usize,
    pub seed: u64,
    pub workers: usize,
    pub threshold: f64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            budget: 50,
            m_lower: 5,
            m_upper: 9,
            seed: 2024,
            workers: 0,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

fn checkpoint_stamp(opts: &ReproduceOptions) -> String {
    format!(
        "budget {} m-lower {} m-upper {} seed {} threshold {}\n",
        opts.budget,
        opts.m_lower,
        opts.m_upper,
        opts.seed,
        fmt_f64(opts.threshold)
    )
}

/// Runs the search over all four covers with the given budget, writing
/// per-element solved specs, certificates and a `report.txt`.
///
/// Completed elements are checkpointed: a rerun with identical options
/// reuses any element whose `.done` stamp, certificate and solved spec
/// are already present, which is what makes long runs resumable.
pub fn reproduce(opts: &ReproduceOptions, out_dir: &Path) -> Result<RunReport> {
    if opts.budget == 0 {
        return Err(Error::InvalidArgument(
            "restart budget must be positive".into(),
        ));
    }
    std::fs::create_dir_all(out_dir)?;
    let started = Instant::now();
    let stamp = checkpoint_stamp(opts);
    let mut elements = Vec::new();
    for (i, cover) in build_ucs_r4()?.elements.into_iter().enumerate() {
        let label = cover.label().to_string();
        let solved_path = out_dir.join(format!("{label}.solved.spec"));
        let cert_file = out_dir.join(format!("{label}.cert"));
        let done_path = out_dir.join(format!("{label}.done"));
        let baseline = one_part_baseline(&cover, opts.m_upper)?;
        let resumed = match std::fs::read_to_string(&done_path) {
            Ok(existing) if existing.lines().next() == stamp.lines().next() => {
                match std::fs::read_to_string(&cert_file) {
                    Ok(text) => match parse_certificate(&text, &cover) {
                        Ok(cert) if SpecFile::read_from(&solved_path).is_ok() => {
                            let finetuned = existing
                                .lines()
                                .nth(1)
                                .and_then(|l| l.strip_prefix("finetuned "))
                                .and_then(|v| v.parse().ok())
                                .unwrap_or(0);
                            eprintln!(
                                "{label}: resuming from checkpoint (d_best {:.6})",
                                cert.d_best
                            );
                            Some((cert, finetuned))
                        }
                        _ => None,
                    },
                    Err(_) => None,
                }
            }
            _ => None,
        };
        let (cert, finetuned) = match resumed {
            Some(pair) => pair,
            None => {
                let params = SearchParams {
                    n_restarts: opts.budget,
                    m_lower: opts.m_lower,
                    m_upper: opts.m_upper,
                    seed: opts.seed,
                    workers: opts.workers,
                    threshold: opts.threshold,
                    ..SearchParams::default()
                };
                eprintln!("{label}: searching with {} restarts", opts.budget);
                let outcome = multistart_search_detailed(&cover, &params)?;
                let finetuned = outcome
                    .restarts
                    .iter()
                    .filter(|r| r.upper.is_some())
                    .count();
                let cert = outcome.certificate;
                let mut solved =
                    SpecFile::new(cover.clone(), opts.m_lower, opts.m_upper, opts.seed);
                solved.directions = Some(cert.system.clone());
                solved.write_to(&solved_path)?;
                std::fs::write(&cert_file, serialize_certificate(&cert))?;
                std::fs::write(&done_path, format!("{stamp}finetuned {finetuned}\n"))?;
                (cert, finetuned)
            }
        };
        elements.push(ElementReport {
            label,
            d_best: cert.d_best,
            pass: cert.pass,
            baseline,
            reference: REFERENCE_DMAX[i].1,
            finetuned,
            restarts: opts.budget,
        });
    }
    let global_pass = elements.iter().all(|e| e.pass);
    let report = RunReport {
        tool_version: TOOL_VERSION.to_string(),
        seed: opts.seed,
        budget_restarts: opts.budget,
        m_lower: opts.m_lower,
        m_upper: opts.m_upper,
        threshold: opts.threshold,
        elements,
        global_pass,
        wall_seconds: Some(started.elapsed().as_secs_f64()),
    };
    std::fs::write(out_dir.join("report.txt"), report.serialize())?;
    Ok(report)
}

/// Summary table printed by `reproduce`: achieved bounds are best found
/// at the given budget, next to the previously reported references.
pub fn format_report(report: &RunReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "best found at budget {} (m_lower {}, m_upper {}, seed {})\n",
        report.budget_restarts, report.m_lower, report.m_upper, report.seed
    ));
    s.push_str("element  d_best    reference  baseline  pass\n");
    for e in &report.elements {
        s.push_str(&format!(
            "{:<8} {:<9.5} {:<10.5} {:<9.5} {}\n",
            e.label, e.d_best, e.reference, e.baseline, e.pass
        ));
    }
    s.push_str(&format!("global pass: {}\n", report.global_pass));
    s
}

//! Line-oriented text formats for covers, direction systems, certificates
//! and run reports.
//!
//! The formats are key/value lines with space-separated numeric arrays,
//! ordered deterministically so that emitted files are byte-reproducible
//! and diffable.  Floats are written with 17 significant digits, which
//! round-trips `f64` exactly; `parse(serialize(x))` reproduces `x` and
//! re-serializing yields identical bytes.  Lines starting with `#` are
//! comments and carry no data.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Ball, Cover, Halfspace, Point, Rotation};
use crate::optimize::Certificate;
use crate::partition::{DirectionSystem, Mode, TemplateKind};

/// Version string recorded in emitted files.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Format schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// A cover plus optional direction system and search provenance.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub tool_version: String,
    pub seed: u64,
    pub m_lower: usize,
    pub m_upper: usize,
    pub cover: Cover,
    pub directions: Option<DirectionSystem>,
}

impl SpecFile {
    pub fn new(cover: Cover, m_lower: usize, m_upper: usize, seed: u64) -> SpecFile {
        SpecFile {
            tool_version: TOOL_VERSION.to_string(),
            seed,
            m_lower,
            m_upper,
            cover,
            directions: None,
        }
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "borsuk-spec {SCHEMA_VERSION}");
        let _ = writeln!(s, "tool-version {}", self.tool_version);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "m-lower {}", self.m_lower);
        let _ = writeln!(s, "m-upper {}", self.m_upper);
        write_cover(&mut s, &self.cover);
        match &self.directions {
            None => {
                let _ = writeln!(s, "directions none");
            }
            Some(ds) => write_directions(&mut s, ds),
        }
        s
    }

    pub fn parse(text: &str) -> Result<SpecFile> {
        let mut lines = LineReader::new(text);
        let header = lines.take_line("borsuk-spec")?;
        parse_schema(&header, lines.line_no())?;
        let tool_version = lines.take_line("tool-version")?.trim().to_string();
        let seed: u64 = lines.take_value("seed")?;
        let m_lower: usize = lines.take_value("m-lower")?;
        let m_upper: usize = lines.take_value("m-upper")?;
        let cover = read_cover(&mut lines)?;
        let directions = read_directions(&mut lines, &cover)?;
        Ok(SpecFile {
            tool_version,
            seed,
            m_lower,
            m_upper,
            cover,
            directions,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.serialize())?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<SpecFile> {
        let text = std::fs::read_to_string(path)?;
        SpecFile::parse(&text)
    }
}

/// Serializes a certificate, embedding its direction system.
pub fn serialize_certificate(cert: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "borsuk-certificate {SCHEMA_VERSION}");
    let _ = writeln!(s, "tool-version {TOOL_VERSION}");
    let _ = writeln!(s, "cover-label {}", cert.cover_label);
    let _ = writeln!(s, "seed {}", cert.seed);
    let _ = writeln!(s, "m-upper {}", cert.m_upper);
    let _ = writeln!(s, "threshold {}", fmt_f64(cert.threshold));
    let _ = writeln!(s, "parts {}", cert.part_diameters.len());
    for (i, d) in cert.part_diameters.iter().enumerate() {
        let _ = writeln!(s, "part {i} diameter {}", fmt_f64(*d));
    }
    let _ = writeln!(s, "d-best {}", fmt_f64(cert.d_best));
    let _ = writeln!(s, "pass {}", cert.pass);
    write_directions(&mut s, &cert.system);
    s
}

/// Parses a certificate; the matching cover is needed to validate the
/// embedded direction system.
pub fn parse_certificate(text: &str, cover: &Cover) -> Result<Certificate> {
    let mut lines = LineReader::new(text);
    let header = lines.take_line("borsuk-certificate")?;
    parse_schema(&header, lines.line_no())?;
    let _tool: String = lines.take_line("tool-version")?.trim().to_string();
    let label = lines.take_line("cover-label")?.trim().to_string();
    if label != cover.label() {
        return Err(Error::InvalidArgument(format!(
            "certificate is for cover {label}, not {}",
            cover.label()
        )));
    }
    let seed: u64 = lines.take_value("seed")?;
    let m_upper: usize = lines.take_value("m-upper")?;
    let threshold: f64 = lines.take_value("threshold")?;
    let parts: usize = lines.take_value("parts")?;
    let mut part_diameters = Vec::with_capacity(parts);
    for i in 0..parts {
        let rest = lines.take_line("part")?;
        let mut toks = rest.split_whitespace();
        let idx: usize = parse_tok(toks.next(), lines.line_no(), "part index")?;
        if idx != i {
            return Err(lines.err(format!("expected part {i}, got {idx}")));
        }
        expect_tok(toks.next(), "diameter", lines.line_no())?;
        part_diameters.push(parse_tok(toks.next(), lines.line_no(), "diameter")?);
    }
    let d_best: f64 = lines.take_value("d-best")?;
    let pass: bool = lines.take_value("pass")?;
    let directions = read_directions(&mut lines, cover)?
        .ok_or_else(|| Error::InvalidArgument("certificate lacks a direction system".into()))?;
    Ok(Certificate {
        cover_label: label,
        system: directions,
        part_diameters,
        d_best,
        m_upper,
        seed,
        threshold,
        pass,
    })
}

/// One element's row of a reproduction report.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementReport {
    pub label: String,
    pub d_best: f64,
    pub pass: bool,
    pub baseline: f64,
    pub reference: f64,
    pub finetuned: usize,
    pub restarts: usize,
}

/// Aggregated reproduction run over the covering system.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub tool_version: String,
    pub seed: u64,
    pub budget_restarts: usize,
    pub m_lower: usize,
    pub m_upper: usize,
    pub threshold: f64,
    pub elements: Vec<ElementReport>,
    pub global_pass: bool,
    /// Wall clock, serialized only as a comment so reports stay
    /// byte-deterministic for a fixed seed.
    pub wall_seconds: Option<f64>,
}

impl RunReport {
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "borsuk-report {SCHEMA_VERSION}");
        let _ = writeln!(s, "tool-version {}", self.tool_version);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "budget-restarts {}", self.budget_restarts);
        let _ = writeln!(s, "m-lower {}", self.m_lower);
        let _ = writeln!(s, "m-upper {}", self.m_upper);
        let _ = writeln!(s, "threshold {}", fmt_f64(self.threshold));
        let _ = writeln!(s, "elements {}", self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(
                s,
                "element {i} label {} d-best {} pass {} baseline {} reference {} finetuned {} restarts {}",
                e.label,
                fmt_f64(e.d_best),
                e.pass,
                fmt_f64(e.baseline),
                fmt_f64(e.reference),
                e.finetuned,
                e.restarts,
            );
        }
        let _ = writeln!(s, "global-pass {}", self.global_pass);
        if let Some(w) = self.wall_seconds {
            let _ = writeln!(s, "# wall-clock-seconds {w:.3}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<RunReport> {
        let mut lines = LineReader::new(text);
        let header = lines.take_line("borsuk-report")?;
        parse_schema(&header, lines.line_no())?;
        let tool_version = lines.take_line("tool-version")?.trim().to_string();
        let seed = lines.take_value("seed")?;
        let budget_restarts = lines.take_value("budget-restarts")?;
        let m_lower = lines.take_value("m-lower")?;
        let m_upper = lines.take_value("m-upper")?;
        let threshold = lines.take_value("threshold")?;
        let count: usize = lines.take_value("elements")?;
        let mut elements = Vec::with_capacity(count);
        for i in 0..count {
            let rest = lines.take_line("element")?;
            let mut t = rest.split_whitespace();
            let idx: usize = parse_tok(t.next(), lines.line_no(), "element index")?;
            if idx != i {
                return Err(lines.err(format!("expected element {i}, got {idx}")));
            }
            expect_tok(t.next(), "label", lines.line_no())?;
            let label = parse_tok::<String>(t.next(), lines.line_no(), "label")?;
            expect_tok(t.next(), "d-best", lines.line_no())?;
            let d_best = parse_tok(t.next(), lines.line_no(), "d-best")?;
            expect_tok(t.next(), "pass", lines.line_no())?;
            let pass = parse_tok(t.next(), lines.line_no(), "pass")?;
            expect_tok(t.next(), "baseline", lines.line_no())?;
            let baseline = parse_tok(t.next(), lines.line_no(), "baseline")?;
            expect_tok(t.next(), "reference", lines.line_no())?;
            let reference = parse_tok(t.next(), lines.line_no(), "reference")?;
            expect_tok(t.next(), "finetuned", lines.line_no())?;
            let finetuned = parse_tok(t.next(), lines.line_no(), "finetuned")?;
            expect_tok(t.next(), "restarts", lines.line_no())?;
            let restarts = parse_tok(t.next(), lines.line_no(), "restarts")?;
            elements.push(ElementReport {
                label,
                d_best,
                pass,
                baseline,
                reference,
                finetuned,
                restarts,
            });
        }
        let global_pass = lines.take_value("global-pass")?;
        Ok(RunReport {
            tool_version,
            seed,
            budget_restarts,
            m_lower,
            m_upper,
            threshold,
            elements,
            global_pass,
            wall_seconds: None,
        })
    }
}

/// 17 significant digits: exact decimal round-trip for `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(" ")
}

fn write_cover(s: &mut String, cover: &Cover) {
    let _ = writeln!(s, "cover-label {}", cover.label());
    let _ = writeln!(s, "cover-dimension {}", cover.dimension());
    let _ = writeln!(s, "cover-witness {}", fmt_vec(cover.witness().coords()));
    let _ = writeln!(s, "cover-balls {}", cover.balls().len());
    for (i, b) in cover.balls().iter().enumerate() {
        let _ = writeln!(
            s,
            "ball {i} radius {} center {}",
            fmt_f64(b.radius()),
            fmt_vec(b.center().coords())
        );
    }
    let _ = writeln!(s, "cover-halfspaces {}", cover.halfspaces().len());
    for (i, h) in cover.halfspaces().iter().enumerate() {
        let _ = writeln!(
            s,
            "halfspace {i} offset {} normal {}",
            fmt_f64(h.offset()),
            fmt_vec(h.normal())
        );
    }
}

fn write_directions(s: &mut String, ds: &DirectionSystem) {
    match ds.mode() {
        Mode::Rigid { kind, rotation } => {
            let name = match kind {
                TemplateKind::Hypercube => "rigid-hypercube",
                TemplateKind::Hexagon => "rigid-hexagon",
            };
            let _ = writeln!(s, "directions {name}");
            let _ = writeln!(s, "apex {}", fmt_vec(ds.apex().coords()));
            let n = rotation.dim();
            for i in 0..n {
                let row: Vec<f64> = (0..n).map(|j| rotation.entry(i, j)).collect();
                let _ = writeln!(s, "rotation {i} {}", fmt_vec(&row));
            }
        }
        Mode::Free => {
            let _ = writeln!(s, "directions free");
            let _ = writeln!(s, "apex {}", fmt_vec(ds.apex().coords()));
            for (i, d) in ds.directions().iter().enumerate() {
                let _ = writeln!(s, "direction {i} {}", fmt_vec(d));
            }
        }
    }
}

fn read_cover(lines: &mut LineReader) -> Result<Cover> {
    let label = lines.take_line("cover-label")?.trim().to_string();
    let dim: usize = lines.take_value("cover-dimension")?;
    let witness = parse_floats(&lines.take_line("cover-witness")?, dim, lines.line_no())?;
    let n_balls: usize = lines.take_value("cover-balls")?;
    let mut balls = Vec::with_capacity(n_balls);
    for i in 0..n_balls {
        let rest = lines.take_line("ball")?;
        let mut t = rest.split_whitespace();
        let idx: usize = parse_tok(t.next(), lines.line_no(), "ball index")?;
        if idx != i {
            return Err(lines.err(format!("expected ball {i}, got {idx}")));
        }
        expect_tok(t.next(), "radius", lines.line_no())?;
        let radius: f64 = parse_tok(t.next(), lines.line_no(), "radius")?;
        expect_tok(t.next(), "center", lines.line_no())?;
        let center: Vec<f64> = t
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| lines.err(format!("bad center: {e}")))?;
        if center.len() != dim {
            return Err(lines.err(format!("ball center needs {dim} coordinates")));
        }
        balls.push(Ball::new(Point::from(center), radius).map_err(|e| lines.err(e.to_string()))?);
    }
    let n_hs: usize = lines.take_value("cover-halfspaces")?;
    let mut halfspaces = Vec::with_capacity(n_hs);
    for i in 0..n_hs {
        let rest = lines.take_line("halfspace")?;
        let mut t = rest.split_whitespace();
        let idx: usize = parse_tok(t.next(), lines.line_no(), "halfspace index")?;
        if idx != i {
            return Err(lines.err(format!("expected halfspace {i}, got {idx}")));
        }
        expect_tok(t.next(), "offset", lines.line_no())?;
        let offset: f64 = parse_tok(t.next(), lines.line_no(), "offset")?;
        expect_tok(t.next(), "normal", lines.line_no())?;
        let normal: Vec<f64> = t
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| lines.err(format!("bad normal: {e}")))?;
        if normal.len() != dim {
            return Err(lines.err(format!("halfspace normal needs {dim} coordinates")));
        }
        halfspaces.push(Halfspace::new(normal, offset).map_err(|e| lines.err(e.to_string()))?);
    }
    Cover::new(dim, balls, halfspaces, label, Point::from(witness))
        .map_err(|e| lines.err(format!("invalid cover: {e}")))
}

fn read_directions(lines: &mut LineReader, cover: &Cover) -> Result<Option<DirectionSystem>> {
    let kind_tok = lines.take_line("directions")?.trim().to_string();
    let dim = cover.dimension();
    match kind_tok.as_str() {
        "none" => Ok(None),
        "rigid-hypercube" | "rigid-hexagon" => {
            let kind = if kind_tok == "rigid-hypercube" {
                TemplateKind::Hypercube
            } else {
                TemplateKind::Hexagon
            };
            let apex = parse_floats(&lines.take_line("apex")?, dim, lines.line_no())?;
            let mut entries = Vec::with_capacity(dim * dim);
            for i in 0..dim {
                let rest = lines.take_line("rotation")?;
                let mut t = rest.split_whitespace();
                let idx: usize = parse_tok(t.next(), lines.line_no(), "rotation row index")?;
                if idx != i {
                    return Err(lines.err(format!("expected rotation row {i}, got {idx}")));
                }
                for x in t {
                    entries.push(
                        x.parse::<f64>()
                            .map_err(|e| lines.err(format!("bad rotation entry: {e}")))?,
                    );
                }
                if entries.len() != (i + 1) * dim {
                    return Err(lines.err(format!("rotation row {i} needs {dim} entries")));
                }
            }
            let rotation =
                Rotation::from_rows(dim, entries).map_err(|e| lines.err(e.to_string()))?;
            let ds = DirectionSystem::rigid(kind, rotation, Point::from(apex), cover)
                .map_err(|e| lines.err(format!("invalid direction system: {e}")))?;
            Ok(Some(ds))
        }
        "free" => {
            let apex = parse_floats(&lines.take_line("apex")?, dim, lines.line_no())?;
            let count = TemplateKind::for_dimension(dim)
                .map_err(|e| lines.err(e.to_string()))?
                .template()
                .directions
                .len();
            let mut dirs = Vec::with_capacity(count);
            for i in 0..count {
                let rest = lines.take_line("direction")?;
                let mut t = rest.split_whitespace();
                let idx: usize = parse_tok(t.next(), lines.line_no(), "direction index")?;
                if idx != i {
                    return Err(lines.err(format!("expected direction {i}, got {idx}")));
                }
                let d: Vec<f64> = t
                    .map(|x| x.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| lines.err(format!("bad direction: {e}")))?;
                if d.len() != dim {
                    return Err(lines.err(format!("direction needs {dim} coordinates")));
                }
                dirs.push(d);
            }
            let ds = DirectionSystem::free(Point::from(apex), dirs, cover)
                .map_err(|e| lines.err(format!("invalid direction system: {e}")))?;
            Ok(Some(ds))
        }
        other => Err(lines.err(format!("unknown directions mode '{other}'"))),
    }
}

fn parse_schema(rest: &str, line: usize) -> Result<()> {
    let v: u32 = rest.trim().parse().map_err(|_| Error::Parse {
        line,
        message: "bad schema version".into(),
    })?;
    if v != SCHEMA_VERSION {
        return Err(Error::Parse {
            line,
            message: format!("unsupported schema version {v}"),
        });
    }
    Ok(())
}

fn parse_floats(rest: &str, expect: usize, line: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = rest
        .split_whitespace()
        .map(|x| x.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line,
            message: format!("bad float: {e}"),
        })?;
    if v.len() != expect {
        return Err(Error::Parse {
            line,
            message: format!("expected {expect} floats, got {}", v.len()),
        });
    }
    Ok(v)
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse::<T>().map_err(|e| Error::Parse {
        line,
        message: format!("bad {what}: {e}"),
    })
}

fn expect_tok(tok: Option<&str>, want: &str, line: usize) -> Result<()> {
    match tok {
        Some(t) if t == want => Ok(()),
        Some(t) => Err(Error::Parse {
            line,
            message: format!("expected '{want}', got '{t}'"),
        }),
        None => Err(Error::Parse {
            line,
            message: format!("expected '{want}'"),
        }),
    }
}

struct LineReader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> LineReader<'a> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        LineReader { lines, pos: 0 }
    }

    fn line_no(&self) -> usize {
        if self.pos == 0 {
            1
        } else {
            self.lines.get(self.pos - 1).map(|(n, _)| *n).unwrap_or(1)
        }
    }

    fn err(&self, message: String) -> Error {
        Error::Parse {
            line: self.line_no(),
            message,
        }
    }

    /// Consumes the next line, requiring it to start with `key`; returns
    /// the remainder.
    fn take_line(&mut self, key: &str) -> Result<String> {
        let Some(&(no, line)) = self.lines.get(self.pos) else {
            return Err(Error::Parse {
                line: self.lines.last().map(|(n, _)| *n).unwrap_or(0) + 1,
                message: format!("unexpected end of file, wanted '{key}'"),
            });
        };
        self.pos += 1;
        match line.strip_prefix(key) {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => Ok(rest.trim().to_string()),
            _ => Err(Error::Parse {
                line: no,
                message: format!("expected '{key}', got '{line}'"),
            }),
        }
    }

    fn take_value<T: std::str::FromStr>(&mut self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let rest = self.take_line(key)?;
        rest.trim().parse::<T>().map_err(|e| Error::Parse {
            line: self.line_no(),
            message: format!("bad value for '{key}': {e}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers;
    use crate::geometry;
    use crate::partition::DirectionSystem;

    #[test]
    fn spec_roundtrip_without_directions() {
        let cover = covers::build_ucs_r4().unwrap().elements.remove(3);
        let spec = SpecFile::new(cover, 5, 9, 77);
        let text = spec.serialize();
        let back = SpecFile::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
        assert_eq!(back.cover.label(), "U4p");
        assert_eq!(back.cover.halfspaces().len(), 9);
        assert!(back.directions.is_none());
    }

    #[test]
    fn spec_roundtrip_with_rigid_directions() {
        let cover = covers::build_ucs_r4().unwrap().elements.remove(1);
        let mut spec = SpecFile::new(cover.clone(), 3, 5, 9);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            geometry::haar_orthogonal(4, 4),
            cover.witness().clone(),
            &cover,
        )
        .unwrap();
        spec.directions = Some(ds);
        let text = spec.serialize();
        let back = SpecFile::parse(&text).unwrap();
        assert_eq!(back.serialize(), text, "canonical form must be a fixpoint");
        let ds2 = back.directions.unwrap();
        for (a, b) in ds2
            .directions()
            .iter()
            .zip(spec.directions.as_ref().unwrap().directions())
        {
            assert_eq!(a, b, "directions survive the round trip bit-exactly");
        }
    }

    #[test]
    fn spec_roundtrip_free_directions() {
        let cover = covers::build_demo_r2().unwrap().remove(1);
        let tpl = TemplateKind::Hexagon.template();
        let ds = DirectionSystem::free(cover.witness().clone(), tpl.directions, &cover).unwrap();
        let mut spec = SpecFile::new(cover, 7, 17, 0);
        spec.directions = Some(ds);
        let text = spec.serialize();
        let back = SpecFile::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
    }

    #[test]
    fn corrupted_apex_is_rejected() {
        let cover = covers::build_ucs_r4().unwrap().elements.remove(0);
        let mut spec = SpecFile::new(cover.clone(), 5, 9, 1);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hypercube,
            geometry::haar_orthogonal(1, 4),
            cover.witness().clone(),
            &cover,
        )
        .unwrap();
        spec.directions = Some(ds);
        let text = spec.serialize();
        // Push the apex far outside the cover.
        let broken = text.replace(
            &format!("apex {}", fmt_vec(cover.witness().coords())),
            "apex 9e0 0e0 0e0 0e0",
        );
        assert!(matches!(SpecFile::parse(&broken), Err(Error::Parse { .. })));
    }

    #[test]
    fn certificate_roundtrip() {
        let cover = covers::build_demo_r2().unwrap().remove(0);
        let ds = DirectionSystem::rigid(
            TemplateKind::Hexagon,
            geometry::haar_orthogonal(2, 2),
            cover.witness().clone(),
            &cover,
        )
        .unwrap();
        let cert = Certificate {
            cover_label: cover.label().to_string(),
            system: ds,
            part_diameters: vec![0.91, 0.95, 0.89],
            d_best: 0.95,
            m_upper: 17,
            seed: 3,
            threshold: 1.0 - 1e-6,
            pass: true,
        };
        let text = serialize_certificate(&cert);
        let back = parse_certificate(&text, &cover).unwrap();
        assert_eq!(serialize_certificate(&back), text);
        assert_eq!(back.d_best, cert.d_best);
        assert!(back.pass);
    }

    #[test]
    fn report_roundtrip_ignores_timing_comment() {
        let report = RunReport {
            tool_version: TOOL_VERSION.to_string(),
            seed: 11,
            budget_restarts: 50,
            m_lower: 5,
            m_upper: 9,
            threshold: 1.0 - 1e-6,
            elements: vec![ElementReport {
                label: "U1".into(),
                d_best: 1.01,
                pass: false,
                baseline: 1.27,
                reference: 0.99906,
                finetuned: 12,
                restarts: 50,
            }],
            global_pass: false,
            wall_seconds: Some(12.5),
        };
        let text = report.serialize();
        assert!(text.contains("# wall-clock-seconds"));
        let back = RunReport::parse(&text).unwrap();
        assert_eq!(back.wall_seconds, None);
        assert_eq!(back.elements, report.elements);
        // Determinism: the non-comment body does not depend on timing.
        let mut again = report.clone();
        again.wall_seconds = Some(99.0);
        let strip = |t: &str| {
            t.lines()
                .filter(|l| !l.starts_with('#'))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&text), strip(&again.serialize()));
    }
}

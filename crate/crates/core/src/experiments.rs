//! Experiment runners behind the command-line front end.
//!
//! Each runner returns an in-memory summary and, when given an output root,
//! writes `<root>/<command>/<label>/` holding the data files and a
//! `manifest.json` with their SHA-256 checksums. Data files never contain
//! timings, so identical parameters give byte-identical data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codes::{
    build_code, weight_spectrum, FunctionalCode, Mode, WeightSpectrum, EXHAUSTIVE_CAP,
};
use crate::error::{Error, Result};
use crate::forms::{classify, Form, HermitianForm, QuadraticForm, VarietyClass};
use crate::geometry::{verify_weight_theorems, ConfigContext, VerificationReport};
use crate::gf::Field;
use crate::intersect::{projective_quadric_count, scan_point_set, ScanOptions, ScanResult, SCAN_CAP};
use crate::pairs::{conjecture1, conjecture2, pair_census, ConjectureReport, HyperplaneTable};
use crate::presets::{preset, Variety};
use crate::proj::Space;

/// Directory of cached spectra, keyed by a digest of the generator matrix.
pub const CACHE_ENV: &str = "HERMCODES_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub q: u32,
}

impl FieldSpec {
    pub fn of(field: &Field) -> FieldSpec {
        FieldSpec {
            p: field.characteristic(),
            e: field.degree(),
            q: field.order(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub field: FieldSpec,
    pub variety: String,
    pub mode: String,
    pub wall_time_secs: f64,
    /// File name -> hex SHA-256.
    pub files: BTreeMap<String, String>,
    pub version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn run_label(variety: &str, q: u32, h: u32) -> String {
    format!("{variety}-q{q}-h{h}")
}

pub fn mode_name(mode: Mode) -> String {
    match mode {
        Mode::Exhaustive => "exhaustive".into(),
        Mode::Sampled { samples, seed } => format!("sampled(samples={samples}, seed={seed})"),
    }
}

/// Collects data files for one run and seals them with a manifest.
pub struct RunOutput {
    dir: PathBuf,
    files: BTreeMap<String, String>,
}

impl RunOutput {
    pub fn create(root: &Path, command: &str, label: &str) -> Result<RunOutput> {
        let dir = root.join(command).join(label);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(RunOutput {
            dir,
            files: BTreeMap::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(io_err(&path))?;
        self.files.insert(name.to_string(), sha256_hex(contents));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(json_err)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn finish(self, mut manifest: RunManifest) -> Result<PathBuf> {
        manifest.files = self.files;
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).map_err(json_err)?;
        text.push('\n');
        fs::write(&path, text).map_err(io_err(&path))?;
        Ok(self.dir)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |e| Error::Unsupported(format!("{}: {e}", path.display()))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Unsupported(format!("json: {e}"))
}

fn manifest(
    command: &str,
    parameters: &[(&str, String)],
    field: &Field,
    variety: &str,
    mode: Mode,
    started: Instant,
) -> RunManifest {
    RunManifest {
        command: command.into(),
        parameters: parameters
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect(),
        field: FieldSpec::of(field),
        variety: variety.into(),
        mode: mode_name(mode),
        wall_time_secs: started.elapsed().as_secs_f64(),
        files: BTreeMap::new(),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

/// Why an exhaustive run is refused, with the size arithmetic spelled out.
pub fn refusal(what: &str, q: u32, exponent: usize, size: f64, cap: f64) -> Error {
    Error::Unsupported(format!(
        "{what}: exhaustive enumeration needs {q}^{exponent} = {size:.4e} steps, above the cap {cap:.1e}; \
         rerun with --mode sampled"
    ))
}

fn check_walk(code: &FunctionalCode, mode: Mode, what: &str) -> Result<()> {
    if mode == Mode::Exhaustive {
        let q = code.field().order();
        let k = code.dimension();
        let size = (q as f64).powi(k as i32);
        if size > EXHAUSTIVE_CAP {
            return Err(refusal(what, q, k, size, EXHAUSTIVE_CAP));
        }
    }
    Ok(())
}

/// Digest of the generator matrix and field; equal digests give equal spectra.
pub fn code_digest(code: &FunctionalCode) -> String {
    let mut h = Sha256::new();
    let f = code.field();
    h.update(f.order().to_le_bytes());
    h.update(f.modulus().iter().flat_map(|c| c.to_le_bytes()).collect::<Vec<u8>>());
    let g = code.generator();
    h.update((g.rows() as u64).to_le_bytes());
    for i in 0..g.rows() {
        for e in g.row(i) {
            h.update(e.0.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

/// Spectrum of `code`, read from or stored in `$HERMCODES_CACHE` for exhaustive runs.
pub fn cached_spectrum(code: &FunctionalCode, mode: Mode) -> Result<WeightSpectrum> {
    let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let path = match (&cache, mode) {
        (Some(dir), Mode::Exhaustive) => Some(dir.join(format!("spectrum-{}.json", code_digest(code)))),
        _ => None,
    };
    if let Some(p) = &path {
        if let Ok(text) = fs::read_to_string(p) {
            if let Ok(s) = serde_json::from_str::<WeightSpectrum>(&text) {
                return Ok(s);
            }
        }
    }
    let spectrum = weight_spectrum(code, mode)?;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        let text = serde_json::to_string(&spectrum).map_err(json_err)?;
        fs::write(p, text).map_err(io_err(p))?;
    }
    Ok(spectrum)
}

pub fn spectrum_csv(spectrum: &WeightSpectrum) -> String {
    let mut out = String::from("weight,count\n");
    for (w, c) in &spectrum.counts {
        let _ = writeln!(out, "{w},{c}");
    }
    out
}

/// One row per stored representative, with the message and its quadric when `h = 2`.
pub fn representatives_csv(code: &FunctionalCode, spectrum: &WeightSpectrum) -> String {
    let mut out = String::from("weight,index,message,form\n");
    for (w, reps) in &spectrum.representatives {
        for (i, m) in reps.iter().enumerate() {
            let msg: Vec<String> = m.iter().map(|e| e.0.to_string()).collect();
            let form = if code.degree() == 2 {
                code.message_quadric(m).to_string()
            } else {
                String::new()
            };
            let _ = writeln!(out, "{w},{i},{},\"{form}\"", msg.join(" "));
        }
    }
    out
}

pub fn histogram_csv(scan: &ScanResult) -> String {
    let mut out = String::from("intersection,forms\n");
    for (v, c) in &scan.histogram {
        let _ = writeln!(out, "{v},{c}");
    }
    out
}

/// Coefficient list (as accepted by `classify --form`) and polynomial of each form.
pub fn forms_text(forms: &[QuadraticForm]) -> String {
    let mut out = String::new();
    for f in forms {
        let coeffs: Vec<String> = f.coeffs().iter().map(|e| e.0.to_string()).collect();
        let _ = writeln!(out, "{}\t{f}", coeffs.join(","));
    }
    out
}

pub fn load_variety(name: &str, q: u32) -> Result<(Space, Variety)> {
    let field = Field::with_order(q)?;
    let v = preset(name, &field)?;
    let space = Space::new(v.dim(), field)?;
    Ok((space, v))
}

/// Result of `classify`.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyRun {
    pub class: VarietyClass,
    pub points: usize,
}

impl ClassifyRun {
    pub fn summary(&self) -> String {
        format!("{} (counted {} points)", self.class, self.points)
    }
}

pub fn run_classify_form(space: &Space, form: &Form) -> Result<ClassifyRun> {
    let class = classify(space, form)?;
    let points = crate::forms::variety_points(space, form)?.len();
    Ok(ClassifyRun { class, points })
}

pub fn run_classify_preset(name: &str, q: u32) -> Result<ClassifyRun> {
    let (space, v) = load_variety(name, q)?;
    let form = v
        .form()
        .ok_or_else(|| Error::Unsupported(format!("{name} is not defined by a form")))?;
    run_classify_form(&space, form)
}

/// Parses `text` as a quadric coefficient list, or as a row-major hermitian matrix.
pub fn parse_form(field: &Field, n: usize, text: &str, hermitian: bool) -> Result<Form> {
    if hermitian {
        Ok(Form::Hermitian(HermitianForm::parse(field, n, text)?))
    } else {
        Ok(Form::Quadric(QuadraticForm::parse(field, n, text)?))
    }
}

/// Result of `spectrum`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRun {
    pub label: String,
    pub length: usize,
    pub dimension: usize,
    pub min_distance: Option<usize>,
    pub first_weights: Vec<usize>,
    pub spectrum: WeightSpectrum,
    pub verification: Option<VerificationReport>,
    pub out_dir: Option<PathBuf>,
}

impl SpectrumRun {
    pub fn summary(&self) -> String {
        let d = self.min_distance.map_or("-".into(), |d| d.to_string());
        let ws: Vec<String> = self.first_weights.iter().map(|w| w.to_string()).collect();
        let exact = if self.spectrum.exact { "" } else { " (sampled; d is an upper bound)" };
        format!(
            "[{},{},{d}]{exact}\nfirst weights: {}",
            self.length,
            self.dimension,
            ws.join(", ")
        )
    }
}

pub fn run_spectrum(variety: &str, q: u32, h: u32, mode: Mode, out: Option<&Path>) -> Result<SpectrumRun> {
    let started = Instant::now();
    let (space, v) = load_variety(variety, q)?;
    let form = v
        .form()
        .ok_or_else(|| Error::Unsupported(format!("{variety} is not defined by a form")))?;
    let code = build_code(&space, form, h)?;
    let label = run_label(variety, q, h);
    check_walk(&code, mode, &label)?;
    let spectrum = cached_spectrum(&code, mode)?;
    let verification = if h == 2 && spectrum.exact {
        let ctx = ConfigContext::new(&space, form)?;
        let report = verify_weight_theorems(&ctx, &code, &spectrum)?;
        (!report.checks.is_empty()).then_some(report)
    } else {
        None
    };
    let mut run = SpectrumRun {
        label: label.clone(),
        length: code.length(),
        dimension: code.dimension(),
        min_distance: spectrum.min_distance(),
        first_weights: spectrum.weights().into_iter().filter(|&w| w > 0).take(5).collect(),
        spectrum,
        verification,
        out_dir: None,
    };
    if let Some(root) = out {
        let mut o = RunOutput::create(root, "spectrum", &label)?;
        o.write("data.csv", spectrum_csv(&run.spectrum).as_bytes())?;
        o.write("representatives.csv", representatives_csv(&code, &run.spectrum).as_bytes())?;
        if let Some(rep) = &run.verification {
            o.write_json("verification.json", rep)?;
        }
        let m = manifest(
            "spectrum",
            &[("variety", variety.into()), ("q", q.to_string()), ("h", h.to_string())],
            space.field(),
            variety,
            mode,
            started,
        );
        run.out_dir = Some(o.finish(m)?);
    }
    Ok(run)
}

/// Result of `scan-max`.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRun {
    pub label: String,
    pub scan: ScanResult,
    pub out_dir: Option<PathBuf>,
}

impl ScanRun {
    pub fn summary(&self) -> String {
        let s = &self.scan;
        let proper = s.max_proper.map_or("-".into(), |m| m.to_string());
        format!(
            "{} forms scanned over {} points; max below |X| = {proper} ({} attaining forms); \
             forms vanishing on X: {}",
            s.forms_scanned,
            s.points,
            s.argmax_total,
            s.kernel_classes()
        )
    }
}

pub fn run_scan(variety: &str, q: u32, mode: Mode, out: Option<&Path>) -> Result<ScanRun> {
    let started = Instant::now();
    let (space, v) = load_variety(variety, q)?;
    if mode == Mode::Exhaustive {
        let size = projective_quadric_count(space.dim(), q);
        if size > SCAN_CAP {
            let m = crate::forms::num_quadratic_coeffs(space.dim());
            return Err(Error::Unsupported(format!(
                "{variety} over GF({q}): exhaustive scan needs ({q}^{m} - 1)/({q} - 1) = {size:.4e} quadrics, \
                 above the cap {SCAN_CAP:.1e}; rerun with --mode sampled"
            )));
        }
    }
    let points = v.points(&space)?;
    let scan = scan_point_set(&space, &points, mode, &ScanOptions::default())?;
    let label = run_label(variety, q, 2);
    let mut run = ScanRun {
        label: label.clone(),
        scan,
        out_dir: None,
    };
    if let Some(root) = out {
        let mut o = RunOutput::create(root, "scan-max", &label)?;
        o.write("data.csv", histogram_csv(&run.scan).as_bytes())?;
        o.write("argmax.txt", forms_text(&run.scan.argmax).as_bytes())?;
        o.write("kernel.txt", forms_text(&run.scan.kernel).as_bytes())?;
        o.write_json("summary.json", &run.scan)?;
        let m = manifest(
            "scan-max",
            &[("variety", variety.into()), ("q", q.to_string())],
            space.field(),
            variety,
            mode,
            started,
        );
        run.out_dir = Some(o.finish(m)?);
    }
    Ok(run)
}

/// Conjecture 1 for `h = 1..=hmax` on the non-singular hermitian variety of PG(4, t^2).
/// Degrees whose exact spectrum is out of reach are reported as refusals.
pub fn run_conjecture1(t: u32, hmax: u32, out: Option<&Path>) -> Result<Vec<Result<ConjectureReport>>> {
    let started = Instant::now();
    let q = t * t;
    let (space, v) = load_variety("hermitian4", q)?;
    let x = v.form().expect("hermitian preset");
    let ctx = ConfigContext::new(&space, x)?;
    let table = HyperplaneTable::new(&ctx)?;
    let mut reports = Vec::new();
    for h in 1..=hmax {
        let r = if h == 1 {
            conjecture1(&ctx, &table, 1, None)
        } else {
            build_code(&space, x, h).and_then(|code| {
                check_walk(&code, Mode::Exhaustive, &format!("conjecture 1, t={t}, h={h}"))?;
                let s = cached_spectrum(&code, Mode::Exhaustive)?;
                conjecture1(&ctx, &table, h, Some(&s))
            })
        };
        reports.push(r);
    }
    if let Some(root) = out {
        write_reports(root, &format!("conjecture1-q{q}-h{hmax}"), &space, &reports, t, started)?;
    }
    Ok(reports)
}

/// Conjecture 2 at `N = 3, 4` over GF(t^2).
pub fn run_conjecture2(t: u32, out: Option<&Path>) -> Result<Vec<Result<ConjectureReport>>> {
    let started = Instant::now();
    let q = t * t;
    let mut reports = Vec::new();
    let mut last_space = None;
    for name in ["hermitian3", "hermitian4"] {
        let (space, v) = load_variety(name, q)?;
        let x = v.form().expect("hermitian preset").clone();
        let r = (|| {
            let ctx = ConfigContext::new(&space, &x)?;
            let code = build_code(&space, &x, 2)?;
            check_walk(&code, Mode::Exhaustive, &format!("conjecture 2, {name}, t={t}"))?;
            let s = cached_spectrum(&code, Mode::Exhaustive)?;
            let table = HyperplaneTable::new(&ctx)?;
            let census = pair_census(&ctx, &table);
            let mut rep = conjecture2(&ctx, &census, &s)?;
            rep.details.insert(
                0,
                format!("code [{}, {}, {}]", code.length(), code.dimension(), s.min_distance().unwrap_or(0)),
            );
            Ok(rep)
        })();
        reports.push(r);
        last_space = Some(space);
    }
    if let (Some(root), Some(space)) = (out, last_space) {
        write_reports(root, &format!("conjecture2-q{q}-h2"), &space, &reports, t, started)?;
    }
    Ok(reports)
}

fn write_reports(
    root: &Path,
    label: &str,
    space: &Space,
    reports: &[Result<ConjectureReport>],
    t: u32,
    started: Instant,
) -> Result<()> {
    let mut o = RunOutput::create(root, "conjectures", label)?;
    let mut csv = String::from("conjecture,parameters,verdict\n");
    let mut json = Vec::new();
    for r in reports {
        match r {
            Ok(rep) => {
                let _ = writeln!(csv, "{},\"{}\",{}", rep.name, rep.parameters, rep.verdict());
                json.push(serde_json::json!({ "verdict": rep.verdict(), "report": rep }));
            }
            Err(e) => {
                let _ = writeln!(csv, ",,REFUSED");
                json.push(serde_json::json!({ "verdict": "REFUSED", "reason": e.to_string() }));
            }
        }
    }
    o.write("data.csv", csv.as_bytes())?;
    o.write_json("reports.json", &json)?;
    let m = manifest(
        "conjectures",
        &[("t", t.to_string())],
        space.field(),
        "hermitian",
        Mode::Exhaustive,
        started,
    );
    o.finish(m)?;
    Ok(())
}

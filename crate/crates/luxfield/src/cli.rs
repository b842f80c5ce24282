//! Batch command line: `decompose`, `timeseries`, `compare`, `render`.
//!
//! Exit codes: 0 success, 1 IO failure (unreadable input directory,
//! unwritable output), 2 some inputs failed (listed on stderr and in
//! `errors.json`, the rest still processed), 64 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use luxfield_core::analysis::{self, ComparisonRecord, PhotometricSummary, RateQuantity, SpeedMethod};
use luxfield_core::geometry::{AzimuthConvention, Banding};
use luxfield_core::photometry::ColorDifferenceMetric;
use luxfield_core::render::{self, encode, Exposure, ProbeRenderConfig, RenderError, RenderedImage};
use luxfield_core::session::{assemble_session, MeasurementPair, SessionMetadata, TimeWindow};
use luxfield_core::solar::solar_position;
use luxfield_core::{decompose, Colorimeter, CubicMeasurement, Timestamp};
use serde_json::{json, Value};

use crate::export::{self, Cell, Table};
use crate::imageio::write_png;
use crate::ingest::{self, Dialect, DialectMapping, FileFailure, IngestError};
use crate::observer::{colorimeter_from_env, OBSERVER_DIR_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "luxfield", version, about = "Spectral cubic illumination analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file dialect.
    #[arg(long, global = true, value_enum, default_value_t = Dialect::Canonical)]
    pub dialect: Dialect,
    /// JSON column mapping for vendor dialects (overrides `<file>.mapping.json`).
    #[arg(long, global = true)]
    pub mapping: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = AzimuthArg::Compass)]
    pub azimuth_convention: AzimuthArg,
    /// Chromaticity difference metric for comparisons.
    #[arg(long, global = true, value_enum, default_value_t = MetricArg::Xy)]
    pub cd_metric: MetricArg,
    /// Average-speed formula for temporal rates.
    #[arg(long, global = true, value_enum, default_value_t = AvsArg::Local)]
    pub avs_method: AvsArg,
    /// Band width in nm for spectral renders.
    #[arg(long, global = true, default_value_t = 20.0)]
    pub bands_nm: f64,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize each measurement file (directories are expanded).
    Decompose {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Series, average speeds and correlations for a session directory.
    Timeseries {
        session_dir: PathBuf,
        /// `name=HH:MM-HH:MM[@±HH:MM]`, repeatable.
        #[arg(long = "window")]
        windows: Vec<String>,
        #[arg(long, default_value = "")]
        site: String,
        #[arg(long, default_value = "")]
        sky: String,
    },
    /// Shade-versus-light comparisons from a `scene_id,role,path` manifest.
    Compare { manifest: PathBuf },
    /// Render probe spheres, square maps or spectral sub-band probes.
    Render {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderKind::Probe)]
        kind: RenderKind,
        /// Probe diameter and map height in pixels.
        #[arg(long, default_value_t = 256)]
        size: usize,
        /// Rotate the light field so its vector points up.
        #[arg(long)]
        normalize_up: bool,
        /// Fixed exposure; the 99th-percentile mapping is used otherwise.
        #[arg(long)]
        exposure: Option<f64>,
        #[arg(long, default_value_t = 2.2)]
        gamma: f64,
        /// Name used in output files; defaults to the input file stem.
        #[arg(long)]
        session: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AzimuthArg {
    Compass,
    Mathematical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    /// Euclidean distance in CIE 1931 (x, y).
    Xy,
    /// Euclidean distance in CIE 1976 (u′, v′).
    Uv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AvsArg {
    Local,
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderKind {
    Probe,
    Map,
    Spectral,
}

impl From<AzimuthArg> for AzimuthConvention {
    fn from(a: AzimuthArg) -> Self {
        match a {
            AzimuthArg::Compass => AzimuthConvention::Compass,
            AzimuthArg::Mathematical => AzimuthConvention::Mathematical,
        }
    }
}

impl From<MetricArg> for ColorDifferenceMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Xy => ColorDifferenceMetric::XyEuclidean,
            MetricArg::Uv => ColorDifferenceMetric::UvEuclidean,
        }
    }
}

impl From<AvsArg> for SpeedMethod {
    fn from(m: AvsArg) -> Self {
        match m {
            AvsArg::Local => SpeedMethod::Local,
            AvsArg::Range => SpeedMethod::Range,
        }
    }
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Fatal outcome of a command.
enum Fatal {
    Usage(String),
    Io(String),
}

struct Ctx<'a> {
    cli: &'a Cli,
    colorimeter: Colorimeter,
    mapping: Option<DialectMapping>,
    settings: Vec<(String, String)>,
    errors: Vec<(String, String)>,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn convention(&self) -> AzimuthConvention {
        self.cli.azimuth_convention.into()
    }

    fn fail(&mut self, what: impl Into<String>, error: impl ToString) {
        let (what, error) = (what.into(), error.to_string());
        let _ = writeln!(self.stderr, "error: {what}: {error}");
        self.errors.push((what, error));
    }

    fn fail_files(&mut self, failures: Vec<FileFailure>) {
        for f in failures {
            self.fail(f.path.display().to_string(), f.error);
        }
    }

    fn out_path(&self, name: &str) -> PathBuf {
        self.cli.out.join(name)
    }

    fn write_table(&mut self, table: &Table, stem: &str) -> Result<(), Fatal> {
        table
            .write_csv(&self.out_path(&format!("{stem}.csv")))
            .and_then(|_| table.write_json(&self.out_path(&format!("{stem}.json"))))
            .map_err(|e| Fatal::Io(e.to_string()))?;
        let _ = writeln!(self.stdout, "wrote {} ({} rows)", self.out_path(&format!("{stem}.csv")).display(), table.rows.len());
        Ok(())
    }

    fn summarize(&self, m: &CubicMeasurement) -> PhotometricSummary {
        analysis::summarize(&decompose(m), m.timestamp, &self.colorimeter, self.convention())
    }

    fn load(&self, path: &Path) -> Result<CubicMeasurement, IngestError> {
        ingest::load_measurement(path, self.cli.dialect, self.mapping.as_ref())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    execute(&cli, stdout, stderr)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let colorimeter = match colorimeter_from_env() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: observer tables: {e}");
            return EXIT_IO;
        }
    };
    let mapping = match &cli.mapping {
        None => None,
        Some(p) => match std::fs::read_to_string(p) {
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", p.display());
                return EXIT_IO;
            }
            Ok(text) => match DialectMapping::from_json(&text) {
                Ok(m) => Some(m),
                Err(e) => {
                    let _ = writeln!(stderr, "error: {}: {e}", p.display());
                    return EXIT_USAGE;
                }
            },
        },
    };
    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        let _ = writeln!(stderr, "error: {}: {e}", cli.out.display());
        return EXIT_IO;
    }

    let mut settings = vec![
        ("luxfield_version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("dialect".into(), value_name(&cli.dialect)),
        ("azimuth_convention".into(), value_name(&cli.azimuth_convention)),
        ("cd_metric".into(), value_name(&cli.cd_metric)),
        ("avs_method".into(), value_name(&cli.avs_method)),
        ("bands_nm".into(), cli.bands_nm.to_string()),
        (
            "observer".into(),
            std::env::var(OBSERVER_DIR_ENV).unwrap_or_else(|_| "embedded CIE 2012 2 degree".into()),
        ),
    ];
    if let Command::Timeseries { windows, .. } = &cli.command {
        settings.push(("windows".into(), windows.join(";")));
    }

    let mut ctx = Ctx {
        cli,
        colorimeter,
        mapping,
        settings,
        errors: Vec::new(),
        stdout,
        stderr,
    };
    let result = match &cli.command {
        Command::Decompose { paths } => cmd_decompose(&mut ctx, paths),
        Command::Timeseries {
            session_dir,
            windows,
            site,
            sky,
        } => cmd_timeseries(&mut ctx, session_dir, windows, site, sky),
        Command::Compare { manifest } => cmd_compare(&mut ctx, manifest),
        Command::Render {
            path,
            kind,
            size,
            normalize_up,
            exposure,
            gamma,
            session,
        } => {
            let opts = RenderOpts {
                kind: *kind,
                size: *size,
                normalize_up: *normalize_up,
                exposure: *exposure,
                gamma: *gamma,
                session: session.clone(),
            };
            cmd_render(&mut ctx, path, &opts)
        }
    };
    match result {
        Err(Fatal::Usage(msg)) => {
            let _ = writeln!(ctx.stderr, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(Fatal::Io(msg)) => {
            let _ = writeln!(ctx.stderr, "error: {msg}");
            EXIT_IO
        }
        Ok(()) if ctx.errors.is_empty() => EXIT_OK,
        Ok(()) => {
            let report: Vec<Value> = ctx.errors.iter().map(|(w, e)| json!({"input": w, "error": e})).collect();
            let text = serde_json::to_string_pretty(&report).expect("error report serializes") + "\n";
            if let Err(e) = export::write(&ctx.out_path("errors.json"), text) {
                let _ = writeln!(ctx.stderr, "error: {e}");
                return EXIT_IO;
            }
            let _ = writeln!(ctx.stderr, "{} input(s) failed; see errors.json", ctx.errors.len());
            EXIT_PARTIAL
        }
    }
}

fn expand_inputs(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Fatal> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            files.extend(ingest::list_measurement_files(p).map_err(|e| Fatal::Io(e.to_string()))?);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cmd_decompose(ctx: &mut Ctx, paths: &[PathBuf]) -> Result<(), Fatal> {
    let files = expand_inputs(paths)?;
    if files.is_empty() {
        return Err(Fatal::Usage("no input files".into()));
    }
    let (loaded, failed) = ingest::load_all(&files, ctx.cli.dialect, ctx.mapping.as_ref());
    ctx.fail_files(failed);
    let mut rows: Vec<(String, PhotometricSummary)> = loaded
        .iter()
        .map(|(p, m)| (p.display().to_string(), ctx.summarize(m)))
        .collect();
    rows.sort_by(|a, b| a.1.timestamp.cmp(&b.1.timestamp).then_with(|| a.0.cmp(&b.0)));
    let table = export::summary_table(&rows, &ctx.settings);
    ctx.write_table(&table, "summary")
}

const SERIES_QUANTITIES: [(RateQuantity, &str); 2] = [(RateQuantity::Cct, "cct"), (RateQuantity::Illuminance, "illuminance")];

fn component_value(s: &PhotometricSummary, component: usize, q: RateQuantity) -> f64 {
    let c = [&s.symmetric, &s.scalar, &s.vector][component];
    match q {
        RateQuantity::Cct => c.cct_kelvin().unwrap_or(f64::NAN),
        RateQuantity::Illuminance => c.illuminance,
    }
}

fn stats_table(ctx: &Ctx, summaries: &[PhotometricSummary], windows: &[TimeWindow]) -> Table {
    let cols = ["statistic", "component", "quantity", "window", "method", "value", "p", "n"];
    let mut t = Table::new(cols.iter().map(|c| c.to_string()).collect(), &ctx.settings);
    let method: SpeedMethod = ctx.cli.avs_method.into();
    for w in windows {
        for (ci, cname) in export::COMPONENTS.iter().enumerate() {
            for (q, qname) in SERIES_QUANTITIES {
                let series: Vec<(Timestamp, f64)> = summaries
                    .iter()
                    .map(|s| (s.timestamp, component_value(s, ci, q)))
                    .collect();
                let n_defined = series.iter().filter(|(t, v)| w.contains(*t) && v.is_finite()).count();
                let rate = analysis::average_speed(&series, w, q, method).ok();
                t.push(vec![
                    Cell::Text("average_speed".into()),
                    Cell::Text(cname.to_string()),
                    Cell::Text(qname.into()),
                    Cell::Text(w.name.clone()),
                    Cell::Text(value_name(&ctx.cli.avs_method)),
                    rate.map(|r| r.average_speed).into(),
                    Cell::Num(None),
                    Cell::Int(Some(n_defined as i64)),
                ]);
            }
        }
        let (alt, diff): (Vec<f64>, Vec<f64>) = summaries
            .iter()
            .filter(|s| w.contains(s.timestamp))
            .filter_map(|s| Some((s.direction.ok()?.altitude_deg, s.diffuseness.ok()?)))
            .unzip();
        let r = luxfield_core::stats::pearson(&alt, &diff).ok();
        t.push(vec![
            Cell::Text("pearson".into()),
            Cell::Text("vector".into()),
            Cell::Text("altitude~diffuseness".into()),
            Cell::Text(w.name.clone()),
            Cell::Text(String::new()),
            r.map(|c| c.r).into(),
            r.map(|c| c.p).into(),
            Cell::Int(Some(alt.len() as i64)),
        ]);
    }
    t
}

fn cmd_timeseries(ctx: &mut Ctx, dir: &Path, window_specs: &[String], site: &str, sky: &str) -> Result<(), Fatal> {
    let files = ingest::list_measurement_files(dir).map_err(|e| Fatal::Io(e.to_string()))?;
    if files.is_empty() {
        return Err(Fatal::Usage(format!("{}: no measurement files", dir.display())));
    }
    let (loaded, failed) = ingest::load_all(&files, ctx.cli.dialect, ctx.mapping.as_ref());
    ctx.fail_files(failed);
    let Some(first) = loaded.iter().map(|(_, m)| m.timestamp).min() else {
        return Ok(());
    };
    let specs = window_specs
        .iter()
        .map(|s| ingest::parse_window_spec(s, first))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Fatal::Usage(e.to_string()))?;

    let mut sources: BTreeMap<Timestamp, String> = BTreeMap::new();
    for (p, m) in &loaded {
        sources.entry(m.timestamp).or_insert_with(|| p.display().to_string());
    }
    let location = loaded.iter().find_map(|(_, m)| m.location);
    let device = loaded.first().map(|(_, m)| m.device.clone()).unwrap_or_default();
    let measurements: Vec<CubicMeasurement> = loaded.into_iter().map(|(_, m)| m).collect();
    let meta = SessionMetadata {
        site: site.to_string(),
        device,
        sky: sky.to_string(),
    };
    let session = match assemble_session(measurements, &specs, meta) {
        Ok(s) => s,
        Err(e) => {
            ctx.fail(dir.display().to_string(), e);
            return Ok(());
        }
    };

    let summaries: Vec<PhotometricSummary> = session.measurements().iter().map(|m| ctx.summarize(m)).collect();
    let rows: Vec<(String, PhotometricSummary)> = summaries
        .iter()
        .map(|s| (sources.get(&s.timestamp).cloned().unwrap_or_default(), *s))
        .collect();
    let series = export::summary_table(&rows, &ctx.settings);
    ctx.write_table(&series, "series")?;

    let mut windows = vec![session.full_span()];
    windows.extend(session.windows().iter().cloned());
    let stats = stats_table(ctx, &summaries, &windows);
    ctx.write_table(&stats, "stats")?;

    if let Some(loc) = location {
        let cols = ["timestamp", "altitude_deg", "azimuth_deg"];
        let mut t = Table::new(cols.iter().map(|c| c.to_string()).collect(), &ctx.settings);
        t.settings.push(("latitude".into(), loc.latitude_deg.to_string()));
        t.settings.push(("longitude".into(), loc.longitude_deg.to_string()));
        for s in &summaries {
            let p = solar_position(s.timestamp, loc);
            let az = match ctx.convention() {
                AzimuthConvention::Compass => p.azimuth_deg,
                AzimuthConvention::Mathematical => (90.0 - p.azimuth_deg).rem_euclid(360.0),
            };
            t.push(vec![
                Cell::Text(ingest::format_timestamp(s.timestamp)),
                p.altitude_deg.into(),
                az.into(),
            ]);
        }
        ctx.write_table(&t, "sunpath")?;
    }
    Ok(())
}

#[derive(Default)]
struct ScenePaths {
    lit: Option<PathBuf>,
    shaded: Option<PathBuf>,
}

fn read_manifest(ctx: &mut Ctx, manifest: &Path) -> Result<BTreeMap<u32, ScenePaths>, Fatal> {
    let text = std::fs::read_to_string(manifest).map_err(|e| Fatal::Io(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut scenes: BTreeMap<u32, ScenePaths> = BTreeMap::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                ctx.fail(manifest.display().to_string(), e);
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        let where_ = format!("{}:{line}", manifest.display());
        if record.iter().all(str::is_empty) || record.get(0) == Some("scene_id") {
            continue;
        }
        if record.len() != 3 {
            ctx.fail(where_, "expected scene_id,role,path");
            continue;
        }
        let Ok(id) = record[0].parse::<u32>() else {
            ctx.fail(where_, format!("bad scene id `{}`", &record[0]));
            continue;
        };
        let path = base.join(&record[2]);
        let entry = scenes.entry(id).or_default();
        let slot = match record[1].to_ascii_lowercase().as_str() {
            "lit" | "light" => &mut entry.lit,
            "shaded" | "shade" => &mut entry.shaded,
            other => {
                ctx.fail(where_, format!("unknown role `{other}`"));
                continue;
            }
        };
        if slot.is_some() {
            ctx.fail(where_, format!("scene {id} lists role `{}` twice", &record[1]));
            continue;
        }
        *slot = Some(path);
    }
    Ok(scenes)
}

fn cmd_compare(ctx: &mut Ctx, manifest: &Path) -> Result<(), Fatal> {
    let scenes = read_manifest(ctx, manifest)?;
    let metric: ColorDifferenceMetric = ctx.cli.cd_metric.into();
    let mut records: Vec<ComparisonRecord> = Vec::new();
    for (id, paths) in scenes {
        let (Some(lit), Some(shaded)) = (paths.lit, paths.shaded) else {
            ctx.fail(format!("scene {id}"), "unmatched pair: needs one lit and one shaded file");
            continue;
        };
        let lit_m = ctx.load(&lit);
        let shaded_m = ctx.load(&shaded);
        let (lit_m, shaded_m) = match (lit_m, shaded_m) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                for (p, r) in [(lit, a.err()), (shaded, b.err())] {
                    if let Some(e) = r {
                        ctx.fail(p.display().to_string(), e);
                    }
                }
                continue;
            }
        };
        match MeasurementPair::new(id, lit_m, shaded_m) {
            Ok(pair) => records.push(analysis::compare_pair(&pair, &ctx.colorimeter, metric, ctx.convention())),
            Err(e) => ctx.fail(format!("scene {id}"), e),
        }
    }
    let table = export::comparison_table(&records, &ctx.settings);
    ctx.write_table(&table, "comparisons")?;
    let agg = export::comparison_aggregate(&records, &ctx.settings);
    ctx.write_table(&agg, "comparison_summary")
}

struct RenderOpts {
    kind: RenderKind,
    size: usize,
    normalize_up: bool,
    exposure: Option<f64>,
    gamma: f64,
    session: Option<String>,
}

fn render_usage(e: RenderError) -> Fatal {
    Fatal::Usage(e.to_string())
}

fn cmd_render(ctx: &mut Ctx, path: &Path, opts: &RenderOpts) -> Result<(), Fatal> {
    let m = match ctx.load(path) {
        Ok(m) => m,
        Err(e @ IngestError::Io { .. }) => return Err(Fatal::Io(e.to_string())),
        Err(e) => {
            ctx.fail(path.display().to_string(), e);
            return Ok(());
        }
    };
    let session = opts.session.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "session".into())
    });
    let prefix = format!("{session}_{}", ingest::file_stamp(m.timestamp));
    let c = decompose(&m);
    let exposure = match opts.exposure {
        Some(k) => Exposure::Fixed(k),
        None => Exposure::Percentile99,
    };
    let cfg = ProbeRenderConfig {
        size: opts.size,
        normalize_vector_up: opts.normalize_up,
        exposure,
        gamma: opts.gamma,
        ..ProbeRenderConfig::default()
    };
    let mut outputs: Vec<(String, RenderedImage)> = Vec::new();
    match opts.kind {
        RenderKind::Probe => {
            let img = render::render_probe(&c, &ctx.colorimeter, &cfg).map_err(render_usage)?;
            outputs.push((format!("{prefix}_probe.png"), img));
        }
        RenderKind::Map => {
            let img = render::render_square_map(&c, &ctx.colorimeter, 2 * opts.size, opts.size, exposure, opts.gamma)
                .map_err(render_usage)?;
            outputs.push((format!("{prefix}_map.png"), img));
        }
        RenderKind::Spectral => {
            let s = render::render_spectral_superposition(&c, &ctx.colorimeter, Banding::FixedWidth(ctx.cli.bands_nm), &cfg)
                .map_err(render_usage)?;
            for band in &s.bands {
                let img = encode(&band.image, exposure, opts.gamma).map_err(render_usage)?;
                outputs.push((format!("{prefix}_spectral-{}.png", band.label), img));
            }
            // both composites share one exposure so they can be compared
            let shared = match exposure {
                Exposure::Fixed(k) => Exposure::Fixed(k),
                Exposure::Percentile99 => Exposure::Fixed(s.superposed.percentile_exposure()),
            };
            let sup = encode(&s.superposed, shared, opts.gamma).map_err(render_usage)?;
            let lum = encode(&s.luminance_only, shared, opts.gamma).map_err(render_usage)?;
            outputs.push((format!("{prefix}_superposed.png"), sup));
            outputs.push((format!("{prefix}_luminance-only.png"), lum));
        }
    }
    for (name, img) in outputs {
        let out = ctx.out_path(&name);
        write_png(&img, &out).map_err(|e| Fatal::Io(e.to_string()))?;
        let total = img.width * img.height * 3;
        let _ = writeln!(
            ctx.stdout,
            "wrote {} (exposure {}, clipped {} of {} channels)",
            out.display(),
            export::fmt_sig(img.exposure),
            img.clipped_channels,
            total
        );
    }
    Ok(())
}

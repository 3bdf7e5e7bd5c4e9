use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use harness_cli::preview::{load_validity, save_png, save_validity};
use harness_cli::{evaluate, run_experiment, run_pipeline, wedge_loss, ExperimentSpec, MetricsReport, SceneSpec};
use lf_core::{
    downsample_views_along, extract_epi, io::write_disparity_map, load_lightfield, save_lightfield,
    synth_lightfield_4d, AngularAxis, BitDepth, Exec, Layer, LightField,
};
use reconstruct::{ClassicalParams, CompletionBackend, ReconstructOptions};
use shear_refocus::{build_focal_stack, Boundary, Kernel, ReconstructionConfig, ShearOptions};
use spectrum::{conjugate_symmetry_deviation, detect_view_lines, efs_slice_route, efs_spatial_route, LineOptions};

#[derive(Parser)]
#[command(name = "efslab", version, about = "Focal-stack spectrum light field tools")]
struct Cli {
    /// Run rows one after another on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render a layered scene.
    Gen(GenArgs),
    /// Keep every n-th view.
    Downsample(DownsampleArgs),
    /// Focal stack of one EPI.
    Refocus(RefocusArgs),
    /// Focal-stack spectrum tools.
    #[command(subcommand)]
    Efs(EfsCmd),
    /// Focal-layer bounds and apex angles.
    Analyze(AnalyzeArgs),
    /// Densify a sparse field.
    Reconstruct(ReconstructArgs),
    /// Compare a field against a reference.
    Eval(EvalArgs),
    /// Run an experiment spec.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Depth {
    #[value(name = "8")]
    Eight,
    #[value(name = "16")]
    Sixteen,
}

impl From<Depth> for BitDepth {
    fn from(d: Depth) -> Self {
        match d {
            Depth::Eight => BitDepth::Eight,
            Depth::Sixteen => BitDepth::Sixteen,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Linear,
    Cubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    ZeroFill,
    Periodic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    U,
    V,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out: PathBuf,
    /// JSON scene description (layers, wrap_x, texture).
    #[arg(long, conflicts_with = "disparity")]
    scene: Option<PathBuf>,
    /// Single fronto-parallel layer with this disparity, px per view.
    #[arg(long)]
    disparity: Option<f64>,
    #[arg(long, default_value_t = 25)]
    views: usize,
    #[arg(long, default_value_t = 1)]
    rows: usize,
    #[arg(long, default_value_t = 64)]
    height: usize,
    #[arg(long, default_value_t = 64)]
    width: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    wrap: bool,
    #[arg(long, value_enum, default_value = "16")]
    bit_depth: Depth,
    /// Also write per-view disparity maps.
    #[arg(long)]
    disparity_maps: bool,
}

#[derive(Args)]
struct DownsampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    factor: usize,
    #[arg(long)]
    keep_last: bool,
    #[arg(long, value_enum, default_value = "u")]
    axis: Axis,
    #[arg(long, value_enum, default_value = "16")]
    bit_depth: Depth,
}

#[derive(Args)]
struct StackArgs {
    #[arg(long)]
    input: PathBuf,
    /// Image row of the EPI.
    #[arg(long)]
    row: Option<usize>,
    #[arg(long, default_value_t = 0)]
    view_row: usize,
    #[arg(long, allow_hyphen_values = true)]
    dmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    dmax: f64,
    #[arg(long)]
    nf: usize,
    #[arg(long)]
    uref: Option<usize>,
    #[arg(long, value_enum, default_value = "linear")]
    kernel: KernelArg,
}

impl StackArgs {
    fn load(&self) -> Result<(lf_core::Epi, ReconstructionConfig)> {
        let lf = load_lightfield(&self.input)?;
        let u_ref = self.uref.unwrap_or((lf.n_u() - 1) / 2);
        let row = self.row.unwrap_or(lf.height() / 2);
        let epi = extract_epi(&lf, row, self.view_row, u_ref)?;
        let cfg = ReconstructionConfig::new(self.dmin, self.dmax, self.nf, u_ref, lf.n_u())?
            .with_shear(shear(self.kernel, BoundaryArg::ZeroFill));
        Ok((epi, cfg))
    }
}

#[derive(Args)]
struct RefocusArgs {
    #[command(flatten)]
    stack: StackArgs,
    /// Output stem; writes <stem>.json, <stem>.bin and <stem>.png.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Spatial,
    Slice,
}

#[derive(Subcommand)]
enum EfsCmd {
    /// Build the EFS of one EPI.
    Build {
        #[command(flatten)]
        stack: StackArgs,
        #[arg(long, value_enum, default_value = "spatial")]
        route: Route,
        /// Output stem for the complex grid; a log-magnitude PNG goes next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect view lines in a saved EFS.
    Lines {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        delta_alpha: f64,
        #[arg(long)]
        uref: f64,
        #[arg(long)]
        views: usize,
        #[arg(long, default_value_t = 1.5)]
        tolerance: f64,
    },
    /// Conjugate-symmetry deviation of a saved EFS.
    Symmetry {
        #[arg(long)]
        grid: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    views: usize,
    #[arg(long, default_value_t = 1.0)]
    kb: f64,
    #[arg(long)]
    zmin: f64,
    #[arg(long)]
    zmax: f64,
    /// Scene distribution factor.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Sweep Z_max from each of these Z_min values and print CSV.
    #[arg(long, value_delimiter = ',')]
    sweep_zmin: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    zstep: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Oracle,
    Classical,
    External,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Sparse field.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "classical")]
    backend: BackendArg,
    /// Dense ground truth on the target grid: feeds the oracle and the metrics.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Directory of completed grids for the external backend.
    #[arg(long)]
    external: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    dmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    dmax: f64,
    #[arg(long)]
    nf: usize,
    #[arg(long)]
    target_views: usize,
    #[arg(long)]
    uref: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    refs: Vec<usize>,
    #[arg(long)]
    passthrough: bool,
    #[arg(long, value_enum, default_value = "linear")]
    kernel: KernelArg,
    #[arg(long, value_enum, default_value = "zero-fill")]
    boundary: BoundaryArg,
    #[arg(long, default_value_t = ClassicalParams::default().lambda)]
    lambda: f64,
    #[arg(long, default_value_t = ClassicalParams::default().iterations)]
    iterations: usize,
    #[arg(long)]
    include_invalid: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    reference: PathBuf,
    /// Field to score; validity masks stored next to it are honoured.
    #[arg(long)]
    test: PathBuf,
    #[arg(long)]
    include_invalid: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
    /// Override the spec's output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn shear(kernel: KernelArg, boundary: BoundaryArg) -> ShearOptions {
    ShearOptions {
        kernel: match kernel {
            KernelArg::Linear => Kernel::Linear,
            KernelArg::Cubic => Kernel::Cubic,
        },
        boundary: match boundary {
            BoundaryArg::ZeroFill => Boundary::ZeroFill,
            BoundaryArg::Periodic => Boundary::Periodic,
        },
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn gen(a: &GenArgs) -> Result<()> {
    let spec = match (&a.scene, a.disparity) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).with_context(|| p.display().to_string())?;
            serde_json::from_str::<SceneSpec>(&text).with_context(|| p.display().to_string())?
        }
        (None, Some(d)) => SceneSpec {
            layers: vec![Layer::constant(d, a.seed)],
            wrap_x: false,
            texture: None,
        },
        (None, None) => bail!("give --scene or --disparity"),
    };
    let mut geom = spec.geometry();
    geom.wrap_x |= a.wrap;
    let g = synth_lightfield_4d(&geom, a.views, a.rows, a.height, a.width, a.seed)?;
    save_lightfield(&g.field, &a.out, a.bit_depth.into())?;
    if a.disparity_maps {
        for v in 0..g.field.n_v() {
            for u in 0..g.field.n_u() {
                let name = lf_core::io::disparity_file_name(u, v);
                write_disparity_map(&a.out.join(name), g.disparity_map(u, v))?;
            }
        }
    }
    eprintln!("wrote {} views to {}", g.field.n_u() * g.field.n_v(), a.out.display());
    Ok(())
}

fn downsample(a: &DownsampleArgs) -> Result<()> {
    let lf = load_lightfield(&a.input)?;
    let axis = match a.axis {
        Axis::U => AngularAxis::U,
        Axis::V => AngularAxis::V,
    };
    let out = downsample_views_along(&lf, a.factor, a.keep_last, axis)?;
    save_lightfield(&out, &a.out, a.bit_depth.into())?;
    eprintln!("{} x {} views -> {} x {}", lf.n_v(), lf.n_u(), out.n_v(), out.n_u());
    Ok(())
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn normalized(a: &ndarray::Array2<f64>) -> ndarray::Array2<f64> {
    let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    a.mapv(|v| (v - lo) / span)
}

fn refocus(a: &RefocusArgs) -> Result<()> {
    let (epi, cfg) = a.stack.load()?;
    let fs = build_focal_stack(&epi, &cfg)?;
    shear_refocus::io::save_focal_stack(&fs, &a.out)?;
    save_png(normalized(&fs.data).view(), &with_ext(&a.out, ".png"))?;
    Ok(())
}

fn efs(cmd: &EfsCmd) -> Result<()> {
    match cmd {
        EfsCmd::Build { stack, route, out } => {
            let (epi, cfg) = stack.load()?;
            let grid = match route {
                Route::Spatial => efs_spatial_route(&build_focal_stack(&epi, &cfg)?)?,
                Route::Slice => efs_slice_route(&epi, &cfg)?.efs,
            };
            spectrum::io::save_grid(&grid, out)?;
            let mag = grid.data.mapv(|v| (1.0 + v.norm()).ln());
            save_png(normalized(&mag).view(), &with_ext(out, ".png"))?;
        }
        EfsCmd::Lines {
            grid,
            delta_alpha,
            uref,
            views,
            tolerance,
        } => {
            let g = spectrum::io::load_grid(grid)?;
            let opts = LineOptions {
                tolerance_deg: *tolerance,
                ..LineOptions::default()
            };
            print_json(&detect_view_lines(&g, *delta_alpha, *uref, *views, &opts)?)?;
        }
        EfsCmd::Symmetry { grid } => {
            let g = spectrum::io::load_grid(grid)?;
            let dev = conjugate_symmetry_deviation(&g);
            let peak = g.max_magnitude();
            print_json(&serde_json::json!({
                "deviation": dev,
                "max_magnitude": peak,
                "relative": if peak > 0.0 { dev / peak } else { 0.0 },
            }))?;
        }
    }
    Ok(())
}

fn analyze(a: &AnalyzeArgs) -> Result<()> {
    if !a.sweep_zmin.is_empty() {
        let rows = sampling::layer_bound_sweep(&a.sweep_zmin, a.zmax, a.zstep, a.kb, a.views, a.s)?;
        let mut w = csv::Writer::from_writer(std::io::stdout());
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        return Ok(());
    }
    let bound = sampling::min_focal_layers(a.zmin, a.zmax, a.kb, a.views, a.s)?;
    let da = sampling::max_delta_alpha(a.views)?;
    print_json(&serde_json::json!({
        "n_u": a.views,
        "d_min": a.kb / a.zmax,
        "d_max": a.kb / a.zmin,
        "delta_alpha_max": da,
        "apex_angle_continuous_deg": sampling::apex_angle(a.views, None)?.to_degrees(),
        "apex_angle_at_bound_deg": sampling::apex_angle(a.views, Some(da))?.to_degrees(),
        "bound": bound.bound,
        "n_f_min": bound.n_f_min,
    }))
}

fn reconstruct_cmd(a: &ReconstructArgs, exec: Exec) -> Result<()> {
    let sparse = load_lightfield(&a.input)?;
    let u_ref = a.uref.unwrap_or((sparse.n_u() - 1) / 2);
    let cfg = ReconstructionConfig::new(a.dmin, a.dmax, a.nf, u_ref, a.target_views)?
        .with_shear(shear(a.kernel, a.boundary));
    let truth = a.truth.as_ref().map(|p| load_lightfield(p)).transpose()?;
    let backend = match a.backend {
        BackendArg::Oracle => match &truth {
            Some(t) => CompletionBackend::Oracle(Arc::new(t.clone())),
            None => bail!("the oracle backend needs --truth"),
        },
        BackendArg::Classical => CompletionBackend::Classical(ClassicalParams {
            lambda: a.lambda,
            iterations: a.iterations,
        }),
        BackendArg::External => match &a.external {
            Some(d) => CompletionBackend::External(d.clone()),
            None => bail!("the external backend needs --external"),
        },
    };
    let opts = ReconstructOptions {
        exec,
        passthrough: a.passthrough,
    };
    let rec = run_pipeline(&sparse, &cfg, &a.refs, &backend, opts)?;
    save_lightfield(&rec.field, &a.out, BitDepth::Sixteen)?;
    save_validity(&rec.valid, &a.out)?;
    let (per_view, loss) = match &truth {
        Some(t) => {
            let mask = (!a.include_invalid).then_some(&rec.valid);
            (evaluate(t, &rec.field, mask)?, Some(wedge_loss(t, &cfg, sparse.n_u(), exec)?))
        }
        None => (Vec::new(), None),
    };
    let report = MetricsReport::new(per_view, Some(rec.efs_symmetry), loss);
    report.write_json(&a.out.join("metrics.json"))?;
    report.write_csv(&a.out.join("per_view.csv"))?;
    eprintln!(
        "{} -> {} views, mean PSNR {:.2} dB",
        sparse.n_u(),
        rec.field.n_u(),
        report.mean_psnr
    );
    Ok(())
}

fn eval(a: &EvalArgs) -> Result<()> {
    let reference: LightField = load_lightfield(&a.reference)?;
    let test = load_lightfield(&a.test)?;
    let valid = if a.include_invalid {
        None
    } else {
        load_validity(&a.test, test.n_v(), test.height(), test.width())?
    };
    let report = MetricsReport::new(evaluate(&reference, &test, valid.as_ref())?, None, None);
    match &a.out {
        Some(p) => report.write_json(p)?,
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

fn run(a: &RunArgs, sequential: bool) -> Result<()> {
    let mut spec = ExperimentSpec::load(&a.spec)?;
    if let Some(o) = &a.output {
        spec.output = o.clone();
    }
    spec.sequential |= sequential;
    let out = run_experiment(&spec)?;
    eprintln!(
        "{}: mean PSNR {:.2} dB, mean SSIM {:.4}, {} files in {}",
        spec.name,
        out.metrics.mean_psnr,
        out.metrics.mean_ssim,
        out.files.len(),
        spec.output.display()
    );
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    harness_cli::init_threads()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match &cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Downsample(a) => downsample(a),
        Cmd::Refocus(a) => refocus(a),
        Cmd::Efs(c) => efs(c),
        Cmd::Analyze(a) => analyze(a),
        Cmd::Reconstruct(a) => reconstruct_cmd(a, exec),
        Cmd::Eval(a) => eval(a),
        Cmd::Run(a) => run(a, cli.sequential),
    }
}

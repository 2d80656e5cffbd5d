//! The `rosq` command line: argument parsing, the drivers behind each
//! subcommand, and exit codes.

pub mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chart::{render, Format};
use crate::detection::{certify_detection, detection_window, DetectionClass, Family};
use crate::engine::{page_length, run_bpr, run_to_einfty, turn_page, Differential};
use crate::error::{Error, Result};
use crate::homotopy::{check_strongly_even, check_vanishing_krho_minus_1, homotopy_groups, periodicity, Extension};
use crate::oracle::{compare_with_engine, oracle_page_homology};
use crate::pages::{Page, Span, Theory, Truncation, Window};

use cache::{cache_dir, cache_file_name, CacheEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PATTERN_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rosq", version, about = "RO(C2)-graded homotopy fixed point spectral sequences of E_n and BP_R")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a spectral sequence to E∞ and cache every page.
    Compute(ComputeArgs),
    /// Run vanishing, strongly-even, periodicity and oracle checks.
    Check(CheckArgs),
    /// Render a page of the integer-graded part as SVG or JSON.
    Chart(ChartArgs),
    /// Certify Hurewicz detection of h_i, h_j^2, g_k.
    Detect(DetectArgs),
    /// Integer-stem E∞ columns and their groups.
    Homotopy(HomotopyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    En,
    Bpr,
}

/// Parameters shared by every subcommand that runs the engine.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Height n (for bpr: the number of retained vbar generators).
    #[arg(long, default_value_t = 2)]
    pub height: u32,
    /// Truncation degree D of the ubar-series.
    #[arg(long = "series-deg", default_value_t = 6)]
    pub series_deg: u32,
    /// 2-adic precision M (default n + 3).
    #[arg(long = "witt-prec")]
    pub witt_prec: Option<u32>,
    /// Stem range A..B (default -8..max(40, 2^(n+3))).
    #[arg(long, allow_hyphen_values = true)]
    pub stems: Option<Span>,
    /// Range C..D of the sigma-coefficient (default 0..0).
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<Span>,
    /// Filtration range 0..S (default 0..max(48, 2^(n+2))).
    #[arg(long, allow_hyphen_values = true)]
    pub filt: Option<Span>,
}

impl RunArgs {
    fn validate(&self) -> Result<()> {
        if self.height == 0 || self.height > crate::pages::MAX_HEIGHT {
            return Err(Error::Usage(format!("--height must be in 1..={}", crate::pages::MAX_HEIGHT)));
        }
        if self.series_deg == 0 {
            return Err(Error::Usage("--series-deg must be at least 1".into()));
        }
        if self.witt_prec.is_some_and(|m| m == 0 || m > 62) {
            return Err(Error::Usage("--witt-prec must be in 1..=62".into()));
        }
        Ok(())
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.series_deg, self.witt_prec.unwrap_or(self.height + 3))
    }

    pub fn window(&self) -> Result<Window> {
        let n = self.height;
        let stems = self.stems.unwrap_or(Span::new(-8, 40.max(1 << (n + 3))));
        let filt = self.filt.unwrap_or(Span::new(0, 48.max(1 << (n + 2))));
        Ok(Window::new(stems, self.sigma.unwrap_or(Span::new(0, 0)), filt)?)
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum, default_value = "en")]
    pub theory: TheoryArg,
    #[command(flatten)]
    pub run: RunArgs,
    /// bpr only: keep vbar-monomials of polynomial degree below this.
    #[arg(long = "poly-cap")]
    pub poly_cap: Option<i64>,
    /// Cache file to write (default: a parameter-named file in $ROSQ_CACHE_DIR).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the cache as JSON.
    #[arg(long = "export-json")]
    pub export_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub periodicity: bool,
    #[arg(long)]
    pub vanishing: bool,
    #[arg(long = "strongly-even")]
    pub strongly_even: bool,
    /// Compare every page with the brute-force oracle.
    #[arg(long)]
    pub oracle: bool,
    /// k-range for --vanishing and --strongly-even.
    #[arg(long, allow_hyphen_values = true, default_value = "-2..2")]
    pub k: Span,
    /// Ignore any cached result.
    #[arg(long)]
    pub recompute: bool,
}

#[derive(Debug, Args)]
pub struct ChartArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Page: 3, 7, 15, … or inf.
    #[arg(long, default_value = "3")]
    pub page: Page,
    #[arg(long, default_value = "svg")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub recompute: bool,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[arg(long, default_value_t = 2)]
    pub height: u32,
    /// h<i>, h<j>^2 or g<k>.
    #[arg(long, required_unless_present = "all")]
    pub class: Option<DetectionClass>,
    /// Every class with index up to n + 1.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HomotopyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a driver produced: text for stdout (or `--out`) and whether every
/// check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String> {
    match out {
        Some(p) => {
            cache::write_atomic(p, text.as_bytes())?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text),
    }
}

fn default_cache_path(theory: Theory, height: u32, t: Truncation, w: &Window, cap: Option<i64>) -> PathBuf {
    cache_dir().join(cache_file_name(theory, height, t, w, cap))
}

/// Load the E_n cache for these parameters, or compute and store it.
fn en_entry(run: &RunArgs, recompute: bool) -> Result<(CacheEntry, PathBuf)> {
    run.validate()?;
    let (w, t) = (run.window()?, run.truncation());
    let path = default_cache_path(Theory::En, run.height, t, &w, None);
    if !recompute && path.exists() {
        return Ok((cache::load(&path)?, path));
    }
    let entry = CacheEntry::from_run(&run_to_einfty(run.height, &w, t.series_deg, t.witt_prec)?);
    cache::save(&entry, &path)?;
    Ok((entry, path))
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<Outcome> {
    args.run.validate()?;
    let (w, t) = (args.run.window()?, args.run.truncation());
    let entry = match args.theory {
        TheoryArg::En => {
            if args.poly_cap.is_some() {
                return Err(Error::Usage("--poly-cap only applies to --theory bpr".into()));
            }
            CacheEntry::from_run(&run_to_einfty(args.run.height, &w, t.series_deg, t.witt_prec)?)
        }
        TheoryArg::Bpr => CacheEntry::from_bpr(&run_bpr(&w, args.run.height, args.poly_cap, t.witt_prec)?, args.poly_cap),
    };
    let path = args.out.clone().unwrap_or_else(|| {
        default_cache_path(entry.theory, entry.height, entry.truncation, &entry.window, entry.poly_cap)
    });
    cache::save(&entry, &path)?;
    let mut text = String::new();
    let _ = writeln!(text, "{} n={} window {} D={} M={}", entry.theory, entry.height, w, t.series_deg, t.witt_prec);
    for l in &entry.pages {
        let _ = writeln!(text, "{:>5}: {} nonzero points", l.page.to_string(), l.interior_count());
    }
    let _ = writeln!(text, "cache: {}", path.display());
    if let Some(p) = &args.export_json {
        cache::write_atomic(p, cache::export_json(&entry)?.as_bytes())?;
        let _ = writeln!(text, "json: {}", p.display());
    }
    Ok(Outcome { text, passed: true })
}

pub fn cmd_check(args: &CheckArgs) -> Result<Outcome> {
    let mut run = args.run.clone();
    let n = run.height;
    let any = args.periodicity || args.vanishing || args.strongly_even || args.oracle;
    let (per, van, even) = if any {
        (args.periodicity, args.vanishing, args.strongly_even)
    } else {
        (true, true, true)
    };
    if (van || even) && run.sigma.is_none() {
        run.sigma = Some(Span::new(args.k.lo.min(0), args.k.hi.max(0)));
    }
    let (entry, _) = en_entry(&run, args.recompute)?;
    let spectral = crate::engine::SpectralRun {
        height: entry.height,
        truncation: entry.truncation,
        pages: entry.pages[..entry.pages.len() - 1].to_vec(),
        arrows: Vec::new(),
        einfty: entry.einfty().clone(),
    };
    let mut text = String::new();
    let mut passed = true;
    let mut verdict = |text: &mut String, ok: bool, line: String| {
        passed &= ok;
        let _ = writeln!(text, "{line}: {}", if ok { "pass" } else { "FAIL" });
    };
    if per {
        let expected = 1u64 << (n + 2);
        match periodicity(&spectral.einfty)? {
            Some(p) => {
                let _ = writeln!(text, "period {p}");
                verdict(&mut text, p == expected, format!("periodicity (expected {expected})"));
            }
            None => verdict(&mut text, false, "periodicity: none within the window".into()),
        }
    }
    if van {
        for v in check_vanishing_krho_minus_1(&spectral, args.k)? {
            let detail = v
                .points
                .iter()
                .map(|p| format!("l={} {}", p.ell, p.death_page.map_or("alive".to_string(), |r| format!("d{r}"))))
                .collect::<Vec<_>>()
                .join(", ");
            verdict(&mut text, v.pass(), format!("vanishing k={} ({detail})", v.k));
        }
    }
    if even {
        for v in check_strongly_even(&spectral, args.k)? {
            verdict(&mut text, v.pass(), format!("strongly-even k={} ({} {}, restriction {})", v.k, v.bottom, v.bottom_monomial, v.restriction));
        }
    }
    if args.oracle {
        let t = entry.truncation;
        let full = run_to_einfty(n, &entry.window, t.series_deg, t.witt_prec)?;
        let report = oracle_page_homology(&entry.window, n, t.series_deg, t.witt_prec, n)?;
        let mismatches = compare_with_engine(&full, &report);
        for m in mismatches.iter().take(10) {
            let _ = writeln!(text, "  mismatch {} {}: engine 2^{} oracle 2^{}", m.page, m.at, m.engine_order_log2, m.oracle_order_log2);
        }
        verdict(&mut text, mismatches.is_empty(), format!("oracle ({} mismatches)", mismatches.len()));
    }
    Ok(Outcome { text, passed })
}

pub fn cmd_chart(args: &ChartArgs) -> Result<Outcome> {
    let (entry, _) = en_entry(&args.run, args.recompute)?;
    let lattice = entry
        .page(args.page)
        .ok_or_else(|| Error::Usage(format!("page {} is not available", args.page)))?;
    let arrows: Vec<Differential> = if lattice.page == Page::Infinity {
        Vec::new()
    } else {
        turn_page(lattice)?.1
    };
    let w = entry.window;
    let text = render(lattice, &arrows, w.stems, w.filtration, args.format)?;
    Ok(Outcome { text: emit(&args.out, text)?, passed: true })
}

pub fn cmd_detect(args: &DetectArgs) -> Result<Outcome> {
    let n = args.height;
    if n == 0 || n > crate::pages::MAX_HEIGHT {
        return Err(Error::Usage(format!("--height must be in 1..={}", crate::pages::MAX_HEIGHT)));
    }
    let classes: Vec<DetectionClass> = match args.class {
        Some(c) if !args.all => vec![c],
        _ => (1..=n + 1)
            .flat_map(|i| [Family::H, Family::HSquared, Family::G].map(|f| DetectionClass { family: f, index: i }))
            .collect(),
    };
    let mut reports = Vec::new();
    let mut violation = None;
    for c in classes {
        let t = Truncation::default_for(n);
        let run = run_to_einfty(n, &detection_window(c, n), t.series_deg, t.witt_prec)?;
        let report = certify_detection(c, &run)?;
        if let Err(e) = report.check_consistency() {
            violation.get_or_insert(e);
        }
        reports.push(report);
    }
    let mut text = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])?
    } else {
        serde_json::to_string_pretty(&reports)?
    };
    text.push('\n');
    let text = emit(&args.out, text)?;
    if let Some(e) = violation {
        eprint!("{text}");
        return Err(e);
    }
    Ok(Outcome { text, passed: true })
}

pub fn cmd_homotopy(args: &HomotopyArgs) -> Result<Outcome> {
    let mut run = args.run.clone();
    if run.stems.is_none() {
        run.stems = Some(Span::new(0, 8));
    }
    if run.filt.is_none() {
        run.filt = Some(Span::new(0, i64::from(page_length(run.height)) + 1));
    }
    let (entry, _) = en_entry(&run, false)?;
    let stems = entry.window.stems;
    let reports = homotopy_groups(entry.einfty(), stems)?;
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&reports)?;
        s.push('\n');
        s
    } else {
        let mut s = format!("{:>5}  {:<28}  E∞ column (s: descriptor)\n", "stem", "group");
        for r in &reports {
            let group = match &r.extension {
                Extension::Resolved(g) => g.clone(),
                Extension::ExtensionsUnresolved => "extensions-unresolved".into(),
            };
            let column = r.entries.iter().map(|e| format!("{}: {}", e.s, e.descriptor)).collect::<Vec<_>>().join(", ");
            let line = format!("{:>5}  {:<28}  {}", r.stem.a, group, column);
            let _ = writeln!(s, "{}", line.trim_end());
        }
        s
    };
    Ok(Outcome { text: emit(&args.out, text)?, passed: true })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Check(a) => cmd_check(a),
        Command::Chart(a) => cmd_chart(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Homotopy(a) => cmd_homotopy(a),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_pattern_violation() {
        EXIT_PATTERN_VIOLATION
    } else {
        EXIT_USAGE
    }
}

/// Parse `args` (including the program name), run, print, and return the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            print!("{}", o.text);
            if o.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// The cache path `compute` would use for these flags.
pub fn cache_path_for(theory: Theory, run: &RunArgs, poly_cap: Option<i64>) -> Result<PathBuf> {
    Ok(default_cache_path(theory, run.height, run.truncation(), &run.window()?, poly_cap))
}

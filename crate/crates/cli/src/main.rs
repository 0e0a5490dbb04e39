use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use trefoil_cli::verify::{self, Suite};
use trefoil_cli::{algebraic_tolerance, angle_text};
use trefoil_core::format::{g17, json_number};
use trefoil_core::holonomy::{generators_ab, nil_generators, relator_check, Holonomy};
use trefoil_core::surgery::plot::{p1_csv, p1_svg, p2_csv, p2_svg, Which, Window};
use trefoil_core::surgery::{analyze, from_seifert, seifert_of, ConeOrder, SurgerySpec};
use trefoil_core::GeomError;

/// Geometric structures on Dehn surgeries of the left-handed trefoil knot.
#[derive(Parser)]
#[command(name = "trefoil-geom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Geometry, angles, length, volume and Seifert symbol of (T_{p/q}, r).
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Holonomy generators as JSON, with the relator residual.
    Holonomy {
        #[arg(long, allow_negative_numbers = true, required_unless_present = "nil_t")]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        theta: f64,
        /// Parameter t of the Nil family a_t, b_t.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "alpha")]
        nil_t: Option<f64>,
    },
    /// Runs an invariant suite; exit status 2 when any check fails.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TextOrJson::Json)]
        format: TextOrJson,
    },
    /// Region plots P1 (x = rp, y = rq) and P2 (lattice S(m, n)).
    Plot {
        #[arg(long, value_enum)]
        which: PlotWhich,
        /// Window as x0,x1,y0,y1.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Raster spacing for P1.
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Defaults to the extension of --out, then csv.
        #[arg(long, value_enum)]
        format: Option<PlotFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seifert symbol of (T_{p/q}, r), or the surgery behind S(m, n).
    Seifert {
        #[arg(
            short,
            long,
            allow_negative_numbers = true,
            required_unless_present = "m"
        )]
        p: Option<i64>,
        #[arg(short, long, allow_negative_numbers = true, default_value_t = 1)]
        q: i64,
        #[arg(short, long, default_value = "1")]
        r: String,
        #[arg(
            short,
            long,
            allow_negative_numbers = true,
            requires = "n",
            conflicts_with = "p"
        )]
        m: Option<i64>,
        #[arg(short, long, allow_negative_numbers = true)]
        n: Option<i64>,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(short, long, allow_negative_numbers = true)]
    p: i64,
    #[arg(short, long, allow_negative_numbers = true)]
    q: i64,
    /// Cone order: integer, a/b, decimal or inf.
    #[arg(short, long, default_value = "1")]
    r: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotWhich {
    P1,
    P2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotFormat {
    Csv,
    Svg,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn parse_spec(p: i64, q: i64, r: &str) -> Result<SurgerySpec, Failure> {
    let r: ConeOrder = r.parse()?;
    Ok(SurgerySpec::new(p, q, r)?)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values are serialisable")
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { spec, format } => {
            classify(parse_spec(spec.p, spec.q, &spec.r)?, format)
        }
        Command::Holonomy {
            alpha,
            theta,
            nil_t,
        } => holonomy(alpha, theta, nil_t),
        Command::Verify {
            suite,
            seed,
            format,
        } => {
            let tol = algebraic_tolerance().map_err(Failure::Usage)?;
            let report = verify::run(suite, seed, tol);
            match format {
                TextOrJson::Json => emit(&(pretty(&json!(report)) + "\n")),
                TextOrJson::Text => {
                    let mut buf = String::new();
                    for c in &report.checks {
                        let mark = if c.passed { "PASS" } else { "FAIL" };
                        let _ = writeln!(
                            buf,
                            "{mark} {} residual={} tol={} {}",
                            c.name,
                            g17(c.residual),
                            g17(c.tolerance),
                            c.detail
                        );
                    }
                    buf.push_str(if report.passed {
                        "all checks passed\n"
                    } else {
                        "verification failed\n"
                    });
                    emit(&buf);
                }
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Plot {
            which,
            window,
            step,
            format,
            out,
        } => plot(which, window, step, format, out),
        Command::Seifert { p, q, r, m, n } => {
            let value = match (p, m, n) {
                (_, Some(m), Some(n)) => {
                    let spec = from_seifert(m, n)?;
                    json!({ "m": m, "n": n, "p": spec.p(), "q": spec.q(), "r": spec.r() })
                }
                (Some(p), _, _) => {
                    let spec = parse_spec(p, q, &r)?;
                    let data = seifert_of(&spec)?;
                    json!({
                        "p": spec.p(), "q": spec.q(), "r": spec.r(),
                        "m": data.m, "n": data.n, "gcd": data.gcd,
                        "symbol": data.symbol(),
                        "cone_angle": json_number(data.cone_angle()),
                    })
                }
                _ => return Err(Failure::Usage("give -p/-q/-r or -m/-n".into())),
            };
            emit(&(pretty(&value) + "\n"));
            Ok(())
        }
    }
}

fn classify(spec: SurgerySpec, format: TextOrJson) -> Result<(), Failure> {
    let g = analyze(&spec)?;
    if format == TextOrJson::Json {
        emit(&(pretty(&json!(g)) + "\n"));
        return Ok(());
    }
    let mut buf = String::new();
    let _ = writeln!(buf, "surgery      {spec}");
    let _ = writeln!(buf, "class        {}", g.class);
    let opt_angle = |x: Option<f64>| x.map_or("n/a".to_string(), angle_text);
    let _ = writeln!(buf, "alpha        {}", opt_angle(g.alpha));
    let _ = writeln!(buf, "theta        {}", opt_angle(g.theta));
    let _ = writeln!(buf, "S            {}", g.s.map_or("n/a".to_string(), g17));
    let _ = writeln!(buf, "cone angle   {}", angle_text(g.cone_angle));
    match g.length {
        Some(l) => {
            let _ = writeln!(
                buf,
                "length       {} (signed {})",
                angle_text(l.magnitude),
                g17(l.signed)
            );
        }
        None => {
            let _ = writeln!(buf, "length       n/a");
        }
    }
    let _ = writeln!(
        buf,
        "volume       {}",
        g.volume.map_or("undefined".to_string(), g17)
    );
    match &g.seifert {
        Some(d) => {
            let _ = writeln!(buf, "seifert      S({},{}) = {}", d.m, d.n, d.symbol());
        }
        None => {
            let _ = writeln!(
                buf,
                "seifert      none (cone order {} is not a whole number)",
                spec.r()
            );
        }
    }
    emit(&buf);
    Ok(())
}

fn holonomy(alpha: Option<f64>, theta: f64, nil_t: Option<f64>) -> Result<(), Failure> {
    let (h, body) = match (alpha, nil_t) {
        (_, Some(t)) => {
            let pair = nil_generators(t);
            (Holonomy::Nil(pair), json!(pair))
        }
        (Some(alpha), None) => match generators_ab(alpha, theta) {
            Ok(pair) => (Holonomy::Curved(pair), json!(pair)),
            Err(GeomError::NilRegime { alpha }) => {
                return Err(Failure::Usage(format!(
                "alpha = {alpha} is the Nil threshold pi/6; use --nil-t <t> for the Nil generators"
            )))
            }
            Err(e) => return Err(e.into()),
        },
        (None, None) => return Err(Failure::Usage("give --alpha or --nil-t".into())),
    };
    let mut body = body;
    body["relator"] = json!(relator_check(&h));
    emit(&(pretty(&body) + "\n"));
    Ok(())
}

fn parse_window(text: &str) -> Result<Window, Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("cannot read window {text:?}")))?;
    match parts.as_slice() {
        [x0, x1, y0, y1] => Window::new(*x0, *x1, *y0, *y1)
            .ok_or_else(|| Failure::Usage(format!("window {text:?} has no area"))),
        _ => Err(Failure::Usage(
            "window needs four numbers x0,x1,y0,y1".into(),
        )),
    }
}

fn plot(
    which: PlotWhich,
    window: Option<String>,
    step: f64,
    format: Option<PlotFormat>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let which = match which {
        PlotWhich::P1 => Which::P1,
        PlotWhich::P2 => Which::P2,
    };
    let window = match window {
        Some(w) => parse_window(&w)?,
        None => Window::default_for(which),
    };
    if !step.is_finite() || step <= 0.0 {
        return Err(Failure::Usage("step must be positive".into()));
    }
    let from_ext = out
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| e.to_str())
        .and_then(|e| PlotFormat::from_str(e, true).ok());
    let format = format.or(from_ext).unwrap_or(PlotFormat::Csv);
    let text = match (which, format) {
        (Which::P1, PlotFormat::Csv) => p1_csv(&window, step),
        (Which::P1, PlotFormat::Svg) => p1_svg(&window, step),
        (Which::P2, PlotFormat::Csv) => p2_csv(&window),
        (Which::P2, PlotFormat::Svg) => p2_svg(&window),
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

//! Batch front end: build, analyze and verify carpet graphs with
//! deterministic, scriptable output.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use carpet::boundary::{
    antipodal_sequence, axis_ray_sequence, classify_directions, corner_and_fg_sequences,
    diagonal_sequence, nonbusemann_witness, shifted_antipodal, DiagonalDirection, Direction,
    SequenceRep,
};
use carpet::build::{build_level_with_cap, Coord, DEFAULT_LEVEL_CAP};
use carpet::catalog::{catalog, CatalogOptions};
use carpet::export::{export, ExportOptions, Format};
use carpet::metric::{
    ball, check_almost_geodesic, check_geodesic_chain, check_weakly_geodesic, distance, phi,
    DistCache, DEFAULT_EPSILON,
};
use carpet::sample::sample_measure;
use carpet::verify::{all_passed, run_suite, Outcome, VerifyOptions};
use carpet::word::{are_isomorphic, WordSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the build-level cap.
pub const LEVEL_CAP_ENV: &str = "CARPET_LEVEL_CAP";

#[derive(Parser)]
#[command(
    name = "carpet",
    version,
    about = "Carpet graph construction and boundary analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    D1,
    D3,
    D5,
    D7,
}

impl DirectionArg {
    fn get(self) -> Direction {
        match self {
            DirectionArg::D1 => Direction::North,
            DirectionArg::D3 => Direction::West,
            DirectionArg::D5 => Direction::South,
            DirectionArg::D7 => Direction::East,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadrantArg {
    D13,
    D35,
    D57,
    D71,
}

impl QuadrantArg {
    fn get(self) -> DiagonalDirection {
        match self {
            QuadrantArg::D13 => DiagonalDirection::NorthWest,
            QuadrantArg::D35 => DiagonalDirection::SouthWest,
            QuadrantArg::D57 => DiagonalDirection::SouthEast,
            QuadrantArg::D71 => DiagonalDirection::NorthEast,
        }
    }
}

/// Representative family selector shared by `horo`, `rays` and `witness`.
#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Antipodal far-side points.
    Z,
    /// Clockwise far corners.
    B,
    /// Counterclockwise far corners.
    C,
    /// Side points at two thirds.
    F,
    /// Side points at one third.
    G,
    /// Diagonal quadrant points.
    Diag,
    /// Shifted antipodal points (see --shift).
    Shift,
    /// Far-side crossings of one straight axis ray (see --offset).
    Axis,
}

#[derive(Args)]
struct FamilySelector {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Obstruction direction; defaults to the word's first one.
    #[arg(long, value_enum)]
    direction: Option<DirectionArg>,
    /// Quadrant for --family diag.
    #[arg(long, value_enum)]
    quadrant: Option<QuadrantArg>,
    /// Transverse shift for --family shift.
    #[arg(long, default_value_t = 1)]
    shift: i64,
    /// Transverse offset for --family axis.
    #[arg(long, default_value_t = 0)]
    offset: i64,
}

impl FamilySelector {
    fn resolve(&self, word: &WordSpec, max_level: u32) -> Result<SequenceRep> {
        let dir = match self.direction {
            Some(d) => d.get(),
            None => classify_directions(word)
                .obstruction_directions()
                .first()
                .copied()
                .ok_or_else(|| anyhow!("word {word} has no obstruction; pass --direction"))?,
        };
        let seq = match self.family {
            FamilyArg::Z => antipodal_sequence(word, dir, max_level)?,
            FamilyArg::B => corner_and_fg_sequences(word, dir, max_level)?.0,
            FamilyArg::C => corner_and_fg_sequences(word, dir, max_level)?.1,
            FamilyArg::F => corner_and_fg_sequences(word, dir, max_level)?.2,
            FamilyArg::G => corner_and_fg_sequences(word, dir, max_level)?.3,
            FamilyArg::Shift => shifted_antipodal(word, dir, self.shift, max_level)?,
            FamilyArg::Axis => axis_ray_sequence(word, dir, self.offset, max_level)?,
            FamilyArg::Diag => {
                let quad = self
                    .quadrant
                    .map(QuadrantArg::get)
                    .or_else(|| {
                        classify_directions(word)
                            .diagonal_directions()
                            .first()
                            .copied()
                    })
                    .ok_or_else(|| anyhow!("word {word} has no diagonal growth"))?;
                diagonal_sequence(word, quad, max_level)?
            }
        };
        Ok(seq)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build one finite level and export it.
    Build {
        #[arg(long)]
        word: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Emit absolute coordinates instead of root-relative ones.
        #[arg(long)]
        absolute: bool,
        /// Smallest hole level listed in JSON output.
        #[arg(long, default_value_t = 2)]
        min_hole_level: u32,
        /// Output file (written atomically); stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Growth, diagonal and obstruction profile of a word.
    Classify {
        #[arg(long)]
        word: String,
    },
    /// Symbolic boundary catalog with numeric evidence.
    Catalog {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 2)]
        probe_radius: u32,
        #[arg(long, default_value_t = 2)]
        window: usize,
        #[arg(long)]
        skip_evidence: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Geodesic distance between two vertices.
    Distance {
        #[arg(long)]
        word: String,
        #[arg(long)]
        level: u32,
        /// Root-relative "x,y" (absolute with --absolute).
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        absolute: bool,
    },
    /// Horofunction value table of a representative family over root probes.
    Horo {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        family: FamilySelector,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 2)]
        probe_radius: u32,
    },
    /// Ray-definition checks for a representative family.
    Rays {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        family: FamilySelector,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 1)]
        probe_radius: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Search for a pair of vertices with disjoint geodesics to the family.
    Witness {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        family: FamilySelector,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 2)]
        search_radius: u32,
        #[arg(long, default_value_t = 2)]
        tail: usize,
    },
    /// Decide unrooted isomorphism of two words.
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Monte Carlo digit-coverage experiment.
    Sample {
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 100)]
        prefix_len: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Run the full invariant suite for a word.
    Verify {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 6)]
        max_level: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
    },
}

/// Runs the CLI against `argv` (with the program name first), writing to
/// `out`. Returns the process exit code.
pub fn run<W: Write>(argv: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders --help/--version as "errors" with success status
            if err.use_stderr() {
                eprint!("{err}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{err}");
            return EXIT_OK;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(err) => {
            if err.downcast_ref::<carpet::word::ParseError>().is_some()
                || matches!(
                    err.downcast_ref::<carpet::build::BuildError>(),
                    Some(carpet::build::BuildError::LevelCapExceeded { .. })
                        | Some(carpet::build::BuildError::LevelTooSmall(_))
                )
            {
                eprintln!("error: {err}");
                EXIT_USAGE
            } else {
                eprintln!("error: {err:#}");
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn level_cap() -> u32 {
    std::env::var(LEVEL_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_LEVEL_CAP)
}

fn parse_word(text: &str) -> Result<WordSpec> {
    WordSpec::parse(text).map_err(anyhow::Error::new)
}

fn parse_coord(text: &str) -> Result<Coord> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| anyhow!("coordinate must be \"x,y\", got {text:?}"))?;
    Ok(Coord::new(
        x.trim().parse().context("bad x coordinate")?,
        y.trim().parse().context("bad y coordinate")?,
    ))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(bytes)?;
    tmp.persist(path)
        .map_err(|e| anyhow!("persisting {}: {}", path.display(), e.error))?;
    Ok(())
}

fn emit<W: Write>(out: &mut W, target: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match target {
        Some(path) => {
            write_atomic(path, bytes)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn json_line<W: Write, T: serde::Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<i32> {
    match cli.command {
        Command::Build {
            word,
            level,
            format,
            absolute,
            min_hole_level,
            output,
        } => {
            let word = parse_word(&word)?;
            let g = build_level_with_cap(&word, level, level_cap())?;
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Dot => Format::Dot,
                FormatArg::Csv => Format::Csv,
            };
            let opts = ExportOptions {
                absolute,
                min_hole_level,
            };
            let mut bytes = Vec::new();
            export(&g, format, &opts, &mut bytes)?;
            emit(out, &output, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Classify { word } => {
            let word = parse_word(&word)?;
            let profile = classify_directions(&word);
            json_line(
                out,
                &serde_json::json!({ "word": word, "profile": profile }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Catalog {
            word,
            max_level,
            probe_radius,
            window,
            skip_evidence,
            output,
        } => {
            let word = parse_word(&word)?;
            let opts = CatalogOptions {
                max_level,
                level_cap: level_cap(),
                probe_radius,
                window,
                skip_evidence,
                ..CatalogOptions::default()
            };
            let cat = catalog(&word, &opts)?;
            let mut bytes = serde_json::to_vec_pretty(&cat)?;
            bytes.push(b'\n');
            emit(out, &output, &bytes)?;
            Ok(EXIT_OK)
        }
        Command::Distance {
            word,
            level,
            from,
            to,
            absolute,
        } => {
            let word = parse_word(&word)?;
            let g = build_level_with_cap(&word, level, level_cap())?;
            let mut cache = DistCache::new(&g);
            let (mut u, mut v) = (parse_coord(&from)?, parse_coord(&to)?);
            if !absolute {
                u = g.to_absolute(u);
                v = g.to_absolute(v);
            }
            let d = distance(&g, &mut cache, u, v)?;
            json_line(
                out,
                &serde_json::json!({
                    "word": word, "level": level,
                    "from": g.to_relative(u), "to": g.to_relative(v),
                    "distance": d,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Horo {
            word,
            family,
            max_level,
            probe_radius,
        } => {
            let word = parse_word(&word)?;
            let seq = family.resolve(&word, max_level)?;
            let g = build_level_with_cap(&word, max_level, level_cap())?;
            let mut cache = DistCache::new(&g);
            let root = g.root_abs();
            let levels = seq.levels();
            let mut table = Vec::new();
            for probe in ball(&g, &mut cache, root, probe_radius)? {
                let mut values = std::collections::BTreeMap::new();
                for &m in &levels {
                    let p = g.to_absolute(seq.point(m).unwrap());
                    values.insert(m.to_string(), phi(&g, &mut cache, root, probe, p)?);
                }
                table.push(serde_json::json!({
                    "probe": g.to_relative(probe),
                    "values": values,
                }));
            }
            json_line(
                out,
                &serde_json::json!({
                    "word": word, "family": seq.family,
                    "direction": seq.direction, "quadrant": seq.quadrant,
                    "levels": levels, "table": table,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Rays {
            word,
            family,
            max_level,
            probe_radius,
            epsilon,
        } => {
            let word = parse_word(&word)?;
            let seq = family.resolve(&word, max_level)?;
            let g = build_level_with_cap(&word, max_level, level_cap())?;
            let mut cache = DistCache::new(&g);
            let root = g.root_abs();
            let probes = ball(&g, &mut cache, root, probe_radius)?;
            let ray = seq.to_ray_sample(&g, &mut cache)?;
            let weakly = check_weakly_geodesic(&g, &mut cache, &ray, &probes, epsilon, None)?;
            let almost = check_almost_geodesic(&g, &mut cache, &ray, epsilon, None)?;
            let pts: Vec<Coord> = seq.points.values().map(|&p| g.to_absolute(p)).collect();
            let chain = check_geodesic_chain(&g, &mut cache, root, &pts)?;
            json_line(
                out,
                &serde_json::json!({
                    "word": word, "family": seq.family, "direction": seq.direction,
                    "epsilon": epsilon,
                    "weakly_geodesic": weakly,
                    "almost_geodesic": almost,
                    "geodesic_chain": chain,
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Witness {
            word,
            family,
            max_level,
            search_radius,
            tail,
        } => {
            let word = parse_word(&word)?;
            let seq = family.resolve(&word, max_level)?;
            let g = build_level_with_cap(&word, max_level, level_cap())?;
            let mut cache = DistCache::new(&g);
            let pair = nonbusemann_witness(&g, &mut cache, &seq, search_radius, tail)?;
            json_line(
                out,
                &serde_json::json!({
                    "word": word, "family": seq.family, "direction": seq.direction,
                    "search_radius": search_radius, "tail": tail,
                    "witness": pair.map(|(u, v)| serde_json::json!({"v1": u, "v2": v})),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Iso { left, right } => {
            let left = parse_word(&left)?;
            let right = parse_word(&right)?;
            let result = are_isomorphic(&left, &right);
            json_line(
                out,
                &serde_json::json!({
                    "left": left, "right": right,
                    "isomorphic": result.isomorphic,
                    "witness": result.witness.map(|s| s.cycle_notation()),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Sample {
            samples,
            prefix_len,
            seed,
        } => {
            let report = sample_measure(samples, prefix_len, seed);
            json_line(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            word,
            max_level,
            seed,
            json,
        } => {
            let word = parse_word(&word)?;
            let opts = VerifyOptions {
                max_level,
                level_cap: level_cap(),
                seed,
                ..VerifyOptions::default()
            };
            let results = run_suite(&word, &opts)?;
            if json {
                json_line(out, &serde_json::json!({ "word": word, "checks": results }))?;
            } else {
                for r in &results {
                    let tag = match r.outcome {
                        Outcome::Pass => "PASS",
                        Outcome::Fail => "FAIL",
                        Outcome::Skipped => "SKIPPED",
                    };
                    writeln!(out, "[{tag:7}] {} — {}", r.name, r.detail)?;
                }
            }
            Ok(if all_passed(&results) {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
    }
}

/// Convenience wrapper used by tests: runs with string args and captures
/// stdout.
pub fn run_capture(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["carpet".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let code = run(&argv, &mut out);
    (code, String::from_utf8(out).expect("utf8 output"))
}

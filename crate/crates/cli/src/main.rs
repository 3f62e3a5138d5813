use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fanforge_core::certifier::{certify, verify_witness, CertLimits, CertTask, Verdict};
use fanforge_core::fans::{enumerate_fans, fan_indices};
use fanforge_core::fragility::{is_s_fragile, ClassPredicate, MinorSet};
use fanforge_core::glue::{core, decompose, glue_wheels, random_blueprint, DecomposeOptions};
use fanforge_core::io::{self, load_matroid, MtxFile};
use fanforge_core::iso::has_minor;
use fanforge_core::recognizer::{is_fan_extension, SearchLimits};
use fanforge_core::repr::ReprMatroid;
use fanforge_core::{catalog, Error, Matroid, Structure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "fanforge", version, about = "Fans, wheel gluing and fan-extension certification for small matroids")]
struct Cli {
    /// Seed for commands that draw random structures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on recognizer search states and on candidates per level.
    #[arg(long, global = true, env = "FANFORGE_CAP")]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Cmd {
    /// Size, rank, bases and connectivity of a matroid.
    Show {
        #[arg(long)]
        matroid: String,
    },
    /// Fans of a matroid.
    Fans {
        #[arg(long)]
        matroid: String,
        #[arg(long, default_value_t = 3)]
        min_len: usize,
    },
    /// Whether `minor` is isomorphic to a minor of `matroid`.
    HasMinor {
        #[arg(long)]
        matroid: String,
        #[arg(long)]
        minor: String,
    },
    /// Per-element fragility verdicts.
    Fragile {
        #[arg(long)]
        matroid: String,
        /// Comma-separated excluded minors.
        #[arg(long = "S", value_delimiter = ',', required = true)]
        s: Vec<String>,
    },
    /// Glue wheels onto a core as described by a blueprint.
    Glue {
        #[arg(long, conflicts_with = "random")]
        bp: Option<PathBuf>,
        /// Draw a random blueprint over this core instead.
        #[arg(long)]
        random: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_wheels: usize,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
    },
    /// Core(N) for a fan family of N.
    Core {
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        fans: Option<PathBuf>,
    },
    /// Write a fan-extension of N as wheels glued onto Core(N).
    Decompose {
        #[arg(long)]
        matroid: String,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        fans: Option<PathBuf>,
        /// Skip the exhaustive hypothesis check.
        #[arg(long)]
        no_verify: bool,
    },
    /// Decide whether a matroid is a fan-extension of N.
    IsFanExtension {
        #[arg(long)]
        matroid: String,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        fans: Option<PathBuf>,
    },
    /// Check every class member with at most `depth` extra elements.
    Certify {
        #[arg(long = "N", conflicts_with = "n_file")]
        n: Option<String>,
        /// N from a `.mtx` or `.graft` file.
        #[arg(long = "N-file")]
        n_file: Option<PathBuf>,
        /// Excluded minors of the fragile class; omit for the whole field class.
        #[arg(long = "S", value_delimiter = ',')]
        s: Vec<String>,
        #[arg(long, default_value_t = 2)]
        field: u8,
        #[arg(long)]
        fans: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Write the machine-readable result here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List catalog entries, or print one as `.mtx`.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
}

enum Outcome {
    Ok,
    Negative,
}

fn limits(cap: Option<usize>) -> SearchLimits {
    let mut l = SearchLimits::default();
    if let Some(c) = cap {
        l.max_states = c;
    }
    l
}

fn load_n(n: Option<&str>, fans: Option<&Path>) -> anyhow::Result<(MtxFile, Vec<Vec<String>>)> {
    let ff = match fans {
        Some(p) => Some(io::parse_fans(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let name = n
        .map(str::to_string)
        .or_else(|| ff.as_ref().and_then(|f| f.target.clone()))
        .ok_or_else(|| Error::Input("N is required (use --N or a `target` line in the fans file)".into()))?;
    let mtx = load_matroid(&name)?;
    let fans = match ff {
        Some(f) => f.fans,
        None if name == "N12" => catalog::n12_fans()?,
        None => return Err(Error::Input("--fans is required for this N".into()).into()),
    };
    Ok((mtx, fans))
}

fn need_repr(m: MtxFile) -> anyhow::Result<ReprMatroid> {
    m.repr.ok_or_else(|| Error::Input(format!("{} has no representation", m.name)).into())
}

fn minor_set(names: &[String]) -> anyhow::Result<MinorSet> {
    Ok(MinorSet::new(names.iter().map(|n| load_matroid(n).map(|m| m.matroid)).collect::<Result<_, _>>()?))
}

fn print_glued(cli: &Cli, name: &str, m: &Matroid, r: &ReprMatroid, fans: &[Vec<String>]) {
    print!("{}", io::write_mtx(name, m, Some(r)));
    if cli.format == Format::Text {
        for f in fans {
            println!("# fan {}", f.join(" "));
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let machine = cli.format == Format::Machine;
    match &cli.cmd {
        Cmd::Show { matroid } => {
            let f = load_matroid(matroid)?;
            let m = &f.matroid;
            if machine {
                print!("{}", io::write_mtx(&f.name, m, f.repr.as_ref()));
            } else {
                println!("matroid {}", f.name);
                println!("elements {} ({})", m.len(), m.labels().join(" "));
                println!("rank {}", m.full_rank());
                println!("bases {}", m.num_bases());
                println!("3-connected {}", yes(m.is_3connected()));
                if let Some(r) = &f.repr {
                    println!("field {}", r.field);
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Fans { matroid, min_len } => {
            let m = load_matroid(matroid)?.matroid;
            for f in enumerate_fans(&m, *min_len) {
                let kind = if f.fan.is_spoke(0) { "triangle-first" } else { "triad-first" };
                println!("fan {}{}{}", f.fan.labels(&m).join(" "), if machine { "" } else { "  # " }, if machine {
                    String::new()
                } else {
                    format!("{kind}{}", if f.maximal { ", maximal" } else { "" })
                });
            }
            Ok(Outcome::Ok)
        }
        Cmd::HasMinor { matroid, minor } => {
            let m = load_matroid(matroid)?.matroid;
            let n = load_matroid(minor)?.matroid;
            match has_minor(&m, &n) {
                Some(w) => {
                    println!("minor: yes");
                    println!("contract {}", m.labels_of(w.contract).join(" "));
                    println!("delete {}", m.labels_of(w.delete).join(" "));
                    for (i, &j) in w.map.iter().enumerate() {
                        println!("map {} {}", n.label(i), m.label(j));
                    }
                    Ok(Outcome::Ok)
                }
                None => {
                    println!("minor: no");
                    Ok(Outcome::Negative)
                }
            }
        }
        Cmd::Fragile { matroid, s } => {
            let m = load_matroid(matroid)?.matroid;
            let rep = is_s_fragile(&m, &minor_set(s)?);
            if !machine {
                println!("# S-minor present: {}", yes(rep.has_minor));
            }
            for l in rep.lines() {
                println!("{l}");
            }
            Ok(Outcome::Ok)
        }
        Cmd::Glue { bp, random, max_wheels, max_rank } => {
            let bp = match (bp, random) {
                (Some(p), _) => {
                    let dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
                    io::parse_bp(&std::fs::read_to_string(p)?, |f| {
                        let path = dir.join(f);
                        let spec = if path.exists() { path.to_string_lossy().into_owned() } else { f.to_string() };
                        load_matroid(&spec)?.repr.ok_or_else(|| Error::Input(format!("core {f} has no representation")))
                    })?
                }
                (None, Some(name)) => {
                    let core = need_repr(load_matroid(name)?)?;
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    random_blueprint(&mut rng, &core, *max_wheels, *max_rank)
                        .ok_or_else(|| Error::Input(format!("{name} has no triangle")))?
                }
                (None, None) => return Err(Error::Input("give --bp or --random".into()).into()),
            };
            if random.is_some() && !machine {
                for l in io::write_bp(&bp, "core").lines() {
                    println!("# {l}");
                }
            }
            let g = glue_wheels(&bp)?;
            print_glued(cli, "glued", &g.matroid, &g.repr, &g.fans);
            Ok(Outcome::Ok)
        }
        Cmd::Core { n, fans } => {
            let (mtx, fans) = load_n(n.as_deref(), fans.as_deref())?;
            let c = core(&need_repr(mtx)?, &fans)?;
            let cm = c.core.to_matroid()?;
            print!("{}", io::write_mtx("core", &cm, Some(&c.core)));
            if !machine {
                for l in io::write_bp(&c.base, "core").lines() {
                    println!("# {l}");
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Decompose { matroid, n, fans, no_verify } => {
            let m = load_matroid(matroid)?.matroid;
            let (mtx, fans) = load_n(n.as_deref(), fans.as_deref())?;
            let opts = DecomposeOptions { verify_hypotheses: !no_verify, limits: limits(cli.cap) };
            let d = decompose(&m, &need_repr(mtx)?, &fans, None, opts)?;
            print!("{}", io::write_bp(&d.blueprint, "core"));
            for (g, l) in &d.relabel {
                println!("relabel {g} {l}");
            }
            for f in &d.family {
                println!("family {}", f.join(" "));
            }
            Ok(Outcome::Ok)
        }
        Cmd::IsFanExtension { matroid, n, fans } => {
            let m = load_matroid(matroid)?.matroid;
            let (mtx, fans) = load_n(n.as_deref(), fans.as_deref())?;
            let nm = mtx.matroid;
            let idx = fan_indices(&nm, &fans)?;
            match is_fan_extension(&m, &nm, &idx, limits(cli.cap))? {
                Some(t) => {
                    println!("fan-extension: yes");
                    for l in t.lines(&m) {
                        println!("{l}");
                    }
                    Ok(Outcome::Ok)
                }
                None => {
                    println!("fan-extension: no");
                    Ok(Outcome::Negative)
                }
            }
        }
        Cmd::Certify { n, n_file, s, field, fans, depth, out } => {
            let n_spec = n_file.as_ref().map(|p| p.to_string_lossy().into_owned()).or_else(|| n.clone());
            let (mtx, fans) = load_n(n_spec.as_deref(), fans.as_deref())?;
            let nm = mtx.matroid.clone();
            let repr = need_repr(mtx)?;
            if repr.field.p() != *field {
                return Err(Error::Input(format!("N is given over {} but --field is {field}", repr.field)).into());
            }
            let class = ClassPredicate { s: if s.is_empty() { None } else { Some(minor_set(s)?) } };
            let mut task = CertTask::new(repr, fan_indices(&nm, &fans)?, class);
            task.depth = *depth;
            if let Some(c) = cli.cap {
                task.limits = CertLimits { max_candidates: c, search: limits(Some(c)) };
            }
            let r = certify(&task)?;
            let verified = r.witness.as_ref().map(|w| verify_witness(&task, w));
            let text = io::write_result(&r, &[]);
            if let Some(p) = out {
                std::fs::write(p, &text)?;
            }
            if machine {
                print!("{text}");
            } else {
                for l in &r.levels {
                    println!("level {}: {} generated, {} in class, {} checked", l.level, l.generated, l.in_class, l.checked);
                }
                match &r.witness {
                    None => println!("certified"),
                    Some(w) => {
                        println!("counterexample at level {} (verified: {})", w.level, yes(verified == Some(true)));
                        print!("{}", io::write_mtx("witness", &w.matroid.to_matroid()?, Some(&w.matroid)));
                    }
                }
                if r.relative_to_representation {
                    println!("note: relative to the given representation");
                }
            }
            Ok(if r.verdict == Verdict::Certified { Outcome::Ok } else { Outcome::Negative })
        }
        Cmd::Catalog { name } => {
            match name {
                Some(n) => {
                    let e = catalog::get(n)?;
                    print!("{}", io::write_mtx(&e.name, &e.matroid, e.repr.as_ref()));
                }
                None => {
                    for n in catalog::NAMES {
                        let e = catalog::get(n)?;
                        println!("{:<8} {:>2} elements  rank {}  {}", e.name, e.matroid.len(), e.matroid.full_rank(), e.provenance);
                    }
                    println!("wheel<r>, whirl<r> for r in 2..=12");
                }
            }
            Ok(Outcome::Ok)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::ResourceCap(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

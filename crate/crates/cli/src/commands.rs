use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::json;

use flagstar::bounds::{edge_bound_check, t_upper_chain};
use flagstar::complex::{
    coherent_orientation, diameter, iso_search, iso_sign, validate_closed_pseudomanifold, LinkIso, SimplicialComplex,
    VertexId,
};
use flagstar::decoder::{calibrate_params, recover_permutation, DecoderThresholds};
use flagstar::encoder::{encode, make_row, BaseBlock, ConstructionParams};
use flagstar::experiment::{run_pipeline, write_truth, ExperimentConfig};
use flagstar::flagcheck::{self, verify_fns};
use flagstar::generators;
use flagstar::io::{self, IoError};
use flagstar::surgery::{star_connected_sum, star_handle, SurgeryOptions};

use crate::{Command, Kind, MapArgs};

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input (exit 2).
    Usage(anyhow::Error),
    /// A check failed or a computation was refused (exit 1).
    Failed(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Failed(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failed(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(e.into())
}

fn read(path: &Path) -> Result<SimplicialComplex> {
    io::read_complex(path).map_err(|e| {
        let e = anyhow::Error::from(e).context(format!("reading {}", path.display()));
        CliError::Usage(e)
    })
}

fn write(k: &SimplicialComplex, output: Option<&Path>, json: bool) -> Result<()> {
    match output {
        Some(p) => io::write_complex(p, k, json)
            .map_err(|e: IoError| anyhow::Error::from(e).context(format!("writing {}", p.display())).into()),
        None => {
            print!("{}", if json { io::to_json_string(k) + "\n" } else { io::canonical_serialize(k) });
            Ok(())
        }
    }
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

/// A vertex given by label, or by id when no label matches.
fn vertex(k: &SimplicialComplex, spec: &str) -> Result<VertexId> {
    if let Some(v) = k.find_label(spec) {
        return Ok(v);
    }
    match spec.parse::<VertexId>() {
        Ok(v) if (v as usize) < k.vertex_count() => Ok(v),
        _ => Err(usage(anyhow!("no vertex with label or id `{spec}`"))),
    }
}

fn choose_map(
    n: &SimplicialComplex,
    v: VertexId,
    m: &SimplicialComplex,
    u: VertexId,
    args: &MapArgs,
) -> Result<LinkIso> {
    let (lv, lu) = (n.link(v).context("link of v")?, m.link(u).context("link of u")?);
    let maps = iso_search(&lv, &lu, usize::MAX).context("isomorphism search")?;
    if maps.is_empty() {
        return Err(CliError::Failed(anyhow!("the links of {v} and {u} are not isomorphic")));
    }
    if args.reversing {
        let on = coherent_orientation(n).context("orienting the left complex")?;
        let om = coherent_orientation(m).context("orienting the right complex")?;
        for map in &maps {
            let iso = LinkIso::from_local(v, u, &lv, &lu, map);
            if iso_sign(n, &on, m, &om, &iso).context("orientation sign")? == -1 {
                return Ok(iso);
            }
        }
        return Err(CliError::Failed(anyhow!("no orientation-reversing link isomorphism")));
    }
    let map = maps
        .get(args.map_index)
        .ok_or_else(|| usage(anyhow!("--map-index {} but only {} isomorphisms", args.map_index, maps.len())))?;
    Ok(LinkIso::from_local(v, u, &lv, &lu, map))
}

fn surgery_options(args: &MapArgs) -> SurgeryOptions {
    SurgeryOptions {
        enforce_fns: args.enforce_fns,
        enforce_orientation_reversing: args.reversing,
        ..SurgeryOptions::default()
    }
}

fn parse_perm(s: &str, k: usize) -> Result<Vec<usize>> {
    let sigma = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| usage(anyhow!("bad permutation `{s}`: {e}")))?;
    if sigma.len() != k {
        return Err(usage(anyhow!("permutation `{s}` has {} entries, --k is {k}", sigma.len())));
    }
    flagstar::encoder::check_permutation(&sigma).map_err(usage)?;
    Ok(sigma)
}

fn sign_note(sign: Option<i8>) -> String {
    match sign {
        Some(s) => format!("orientation sign {s:+}"),
        None => "inputs not orientable".into(),
    }
}

fn params(base_row: usize, proof_scale: bool) -> ConstructionParams {
    ConstructionParams { base_row_length: base_row, proof_scale, ..ConstructionParams::default() }
}

fn generate(kind: Kind, n: Option<usize>, m: Option<usize>) -> Result<SimplicialComplex> {
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| usage(anyhow!("{kind:?} needs --{name}")));
    let k = match kind {
        Kind::Icosahedron => generators::icosahedron(),
        Kind::Cell600 => generators::cell600_boundary().0,
        Kind::Cycle => generators::cycle(need(n, "n")?).map_err(usage)?,
        Kind::SimplexBoundary => generators::simplex_boundary(need(n, "n")?).map_err(usage)?,
        Kind::CrossPolytope => generators::cross_polytope_boundary(need(n, "n")?).map_err(usage)?,
        Kind::CompleteBipartite => generators::complete_bipartite(need(n, "n")?, need(m, "m")?).map_err(usage)?,
        Kind::Row => {
            let base = BaseBlock::cell600().context("base block")?;
            make_row(&base, need(n, "n")?, "c").map_err(usage)?.labeled(&base)
        }
    };
    Ok(k)
}

fn thresholds_for(path: Option<&PathBuf>, base_row: usize) -> Result<DecoderThresholds> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(usage)?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display())).map_err(usage)
        }
        None => {
            eprintln!("calibrating for base row length {base_row}");
            let params = params(base_row, false);
            let base = params.base().map_err(usage)?;
            Ok(calibrate_params(&params, &base).context("calibration")?.thresholds)
        }
    }
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate { kind, n, m, output, json } => {
            write(&generate(kind, n, m)?, output.as_deref(), json)?;
        }
        Command::Verify { file, oracle } => {
            let k = read(&file)?;
            let fns = verify_fns(&k);
            let pm = validate_closed_pseudomanifold(&k);
            let oracle_agrees = oracle.then(|| {
                flagcheck::oracle::is_flag(&k) == fns.is_flag
                    && flagcheck::oracle::has_induced_square(&k) == fns.has_induced_square
            });
            let ok = fns.is_fns && pm.is_closed_pseudomanifold() && oracle_agrees != Some(false);
            print_json(&json!({ "fns": fns, "pseudomanifold": pm, "oracle_agrees": oracle_agrees, "ok": ok }));
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Glue { left, right, v, u, map, output, json } => {
            let (n, m) = (read(&left)?, read(&right)?);
            let (v, u) = (vertex(&n, &v)?, vertex(&m, &u)?);
            let iso = choose_map(&n, v, &m, u, &map)?;
            let g = star_connected_sum(&n, v, &m, u, &iso, &surgery_options(&map)).context("connected sum")?;
            eprintln!("glued: {} vertices, {}", g.complex.vertex_count(), sign_note(g.iso_sign));
            write(&g.complex, output.as_deref(), json)?;
        }
        Command::Handle { file, v, u, map, output, json } => {
            let n = read(&file)?;
            let (v, u) = (vertex(&n, &v)?, vertex(&n, &u)?);
            let iso = choose_map(&n, v, &n, u, &map)?;
            let h = star_handle(&n, v, u, &iso, &surgery_options(&map)).context("handle")?;
            eprintln!(
                "handle: {} vertices, site distance {}, {}",
                h.complex.vertex_count(),
                h.distance,
                sign_note(h.iso_sign)
            );
            write(&h.complex, output.as_deref(), json)?;
        }
        Command::Encode { k, perm, base_row, proof_scale, output, roles, json } => {
            let sigma = parse_perm(&perm, k)?;
            let params = params(base_row, proof_scale);
            let base = params.base().map_err(usage)?;
            eprintln!("base block: {} copies, diameter {}", base.copies, base.diameter);
            let enc = encode(&sigma, &params, &base).context("encoding")?;
            eprintln!("encoded: {} vertices, {} base copies", enc.complex.vertex_count(), enc.truth.copies);
            if let Some(r) = roles {
                write_truth(&r, &enc.truth).context("writing roles")?;
            }
            write(&enc.complex, output.as_deref(), json)?;
        }
        Command::Decode { file, k, thresholds, base_row, report } => {
            let thr = thresholds_for(thresholds.as_ref(), base_row)?;
            let complex = read(&file)?;
            let rep = recover_permutation(&complex.skeleton_graph(), &thr, k).context("decoding")?;
            if let Some(p) = report {
                std::fs::write(&p, serde_json::to_string_pretty(&rep).expect("serializable"))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            println!("{}", rep.sigma.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
        }
        Command::Calibrate { base_row, output } => {
            let params = params(base_row, false);
            let base = params.base().map_err(usage)?;
            let cal = calibrate_params(&params, &base).context("calibration")?;
            if let Some(p) = output {
                std::fs::write(&p, serde_json::to_string_pretty(&cal.thresholds).expect("serializable"))
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            print_json(&cal);
        }
        Command::Bounds { x, file } => {
            let report = match (x, file) {
                (Some(x), None) => t_upper_chain(x).map_err(usage)?,
                (None, Some(f)) => edge_bound_check(&read(&f)?),
                _ => return Err(usage(anyhow!("give exactly one of --x and --file"))),
            };
            let ok = report.chain_pass && (report.edge_pass || !report.hypotheses_hold);
            print_json(&json!({ "report": report, "ok": ok }));
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Stats { file } => {
            let k = read(&file)?;
            let f = k.f_vector();
            let diam = diameter(&k.skeleton_graph()).ok().map(|d| d.value);
            print_json(&json!({
                "dim": k.dim(),
                "f_vector": f.0,
                "euler_characteristic": f.euler_characteristic(),
                "diameter": diam,
                "fns": flagcheck::is_fns(&k),
            }));
        }
        Command::Pipeline { config, output_dir } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))
                .map_err(usage)?;
            let mut cfg = ExperimentConfig::from_json(&text).map_err(usage)?;
            if let Some(d) = output_dir {
                cfg.output_dir = d;
            }
            let summary = run_pipeline(&cfg, |msg| eprintln!("{msg}")).context("pipeline")?;
            for run in &summary.runs {
                eprintln!("{}: {}", run.artifact, if run.ok { "ok" } else { "FAILED" });
            }
            if !summary.all_ok {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

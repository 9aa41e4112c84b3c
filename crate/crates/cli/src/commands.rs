use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use kuhn3::catalog::{export, instantiate_full};
use kuhn3::dynamics::{random_interior_profile, RunMetadata};
use kuhn3::ode::Tolerances;
use kuhn3::stability::{classify_equilibrium_with, StabilityTolerances};
use kuhn3::{
    average_profit_rate, best_response_check, classify, equilibrium_profit, integrate, solutions_for_pot,
    ClassifyConfig, DynamicsClassification, FreeParams, Freq, Gains, IntegrateConfig, PotSize, SolutionId,
    StrategyProfile, Trajectory, Validity, NUM_FREQS,
};
use serde::Serialize;

use crate::failure::{Failure, VERIFICATION};
use crate::{ListingFormat, SimulateArgs, TrajectoryFormat};

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::io(path, e))
}

pub fn read_gains(path: &Path) -> Result<Gains, Failure> {
    let map: BTreeMap<String, f64> = read_json(path)?;
    let mut k = [1.0; NUM_FREQS];
    for (name, v) in map {
        let f = Freq::from_name(&name).ok_or_else(|| Failure::io(path, format!("unknown frequency {name:?}")))?;
        k[f.index()] = v;
    }
    Ok(Gains::new(k)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::usage(e))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Listed {
    id: SolutionId,
    profile: StrategyProfile,
    free_params: Vec<kuhn3::catalog::ResolvedParam>,
    profit_24: [f64; 3],
}

#[derive(Serialize)]
struct Range {
    id: SolutionId,
    validity: Validity,
}

#[derive(Serialize)]
struct Listing {
    pot: PotSize,
    solutions: Vec<Listed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranges: Option<Vec<Range>>,
}

pub fn equilibria(pot: f64, all_ranges: bool, format: ListingFormat) -> Result<ExitCode, Failure> {
    let pot = PotSize::new(pot)?;
    let mut solutions = Vec::new();
    for id in solutions_for_pot(pot) {
        let inst = instantiate_full(id, pot, &FreeParams::midpoint())?;
        let profit_24 = equilibrium_profit(id, pot, &FreeParams::midpoint())?.times_24();
        solutions.push(Listed {
            id,
            profile: inst.profile,
            free_params: inst.free_params,
            profit_24,
        });
    }
    let ranges = all_ranges.then(|| {
        SolutionId::ALL
            .into_iter()
            .map(|id| Range {
                id,
                validity: id.validity(),
            })
            .collect::<Vec<_>>()
    });
    let listing = Listing { pot, solutions, ranges };
    match format {
        ListingFormat::Json => print_json(&listing)?,
        ListingFormat::Text => print!("{}", listing_text(&listing)),
    }
    Ok(ExitCode::SUCCESS)
}

fn listing_text(l: &Listing) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "pot {}: {} solution(s)", l.pot, l.solutions.len());
    for e in &l.solutions {
        let _ = writeln!(s, "solution {}", e.id);
        let freqs: Vec<String> = Freq::ALL.iter().map(|&f| format!("{f}={:.6}", e.profile[f])).collect();
        let _ = writeln!(s, "  {}", freqs.join(" "));
        for p in &e.free_params {
            let _ = writeln!(s, "  free {} = {:.6} in [{:.6}, {:.6}]", p.name, p.value, p.lo, p.hi);
        }
        let [a, b, c] = e.profit_24;
        let _ = writeln!(s, "  24E = ({a:.6}, {b:.6}, {c:.6})");
    }
    if let Some(ranges) = &l.ranges {
        let _ = writeln!(s, "validity ranges");
        for r in ranges {
            let text = match r.validity {
                Validity::Point(p) => format!("P = {p:.4}"),
                Validity::Interval { lo, hi: Some(hi) } => format!("{lo:.4} <= P <= {hi:.4}"),
                Validity::Interval { lo, hi: None } => format!("P >= {lo:.4}"),
            };
            let _ = writeln!(s, "  {:<4}{text}", r.id.to_string());
        }
    }
    s
}

pub fn verify(path: &Path, pot: f64, tol: f64) -> Result<ExitCode, Failure> {
    let pot = PotSize::new(pot)?;
    if !(tol >= 0.0) {
        return Err(Failure::usage(format!("tolerance must be non-negative, got {tol}")));
    }
    let profile: StrategyProfile = read_json(path)?;
    let report = best_response_check(&profile, pot, tol);
    print_json(&report)?;
    Ok(if report.is_equilibrium {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFICATION)
    })
}

pub fn parse_free(items: &[String]) -> Result<FreeParams, Failure> {
    let mut free = FreeParams::midpoint();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("free parameter {item:?} is not NAME=VALUE")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| Failure::usage(format!("free parameter {item:?}: {e}")))?;
        free = free.with(name.trim(), value);
    }
    Ok(free)
}

pub fn stability(id: &str, pot: f64, free: &[String]) -> Result<ExitCode, Failure> {
    let pot = PotSize::new(pot)?;
    let id: SolutionId = id.parse()?;
    let free = parse_free(free)?;
    let report = classify_equilibrium_with(id, pot, &free, &Gains::default(), StabilityTolerances::default())?;
    print_json(&report)?;
    Ok(ExitCode::SUCCESS)
}

pub fn catalog(samples: usize, cap: f64) -> Result<ExitCode, Failure> {
    if !(cap >= 2.0) {
        return Err(Failure::usage(format!("cap must be ≥ 2, got {cap}")));
    }
    print_json(&export(samples, cap))?;
    Ok(ExitCode::SUCCESS)
}

/// The catalog family whose profit rate is closest (max norm) to `rate_24`.
pub fn nearest_solution(pot: PotSize, rate_24: [f64; 3]) -> Option<(SolutionId, [f64; 3], f64)> {
    solutions_for_pot(pot)
        .into_iter()
        .filter_map(|id| {
            let e = equilibrium_profit(id, pot, &FreeParams::midpoint()).ok()?.times_24();
            let d = (0..3).map(|i| (e[i] - rate_24[i]).abs()).fold(0.0, f64::max);
            Some((id, e, d))
        })
        .min_by(|a, b| a.2.total_cmp(&b.2))
}

fn times_24(r: [f64; 3]) -> [f64; 3] {
    r.map(|v| 24.0 * v)
}

fn fmt3(v: [f64; 3]) -> String {
    format!("({:.6}, {:.6}, {:.6})", v[0], v[1], v[2])
}

pub fn simulation_summary(
    traj: &Trajectory,
    classification: &Result<DynamicsClassification, kuhn3::Error>,
) -> Result<String, Failure> {
    let mut s = String::new();
    let end = traj.end_time();
    let whole = times_24(average_profit_rate(traj, 0.0, end)?);
    match classification {
        Ok(c) => {
            let _ = writeln!(s, "classification: {:?} ({})", c.label, c.label.colour());
            if let Some(p) = c.period {
                let _ = writeln!(s, "period: {p:.4}");
            }
            if let Some(r) = c.peak_autocorrelation {
                let _ = writeln!(s, "peak autocorrelation: {r:.6}");
            }
            if let Some(t) = c.absorption_time {
                let _ = writeln!(s, "absorption time: {t}");
            }
            let _ = writeln!(s, "boundary fraction: {:.4}", c.boundary_fraction);
            let flags: Vec<String> = Freq::ALL.iter().map(|&f| format!("{f}={:?}", c.flag(f))).collect();
            let _ = writeln!(s, "limits: {}", flags.join(" "));
        }
        Err(e) => {
            let _ = writeln!(s, "classification: unavailable ({e})");
        }
    }
    let _ = writeln!(s, "24 x profit rate over [0, {end}]: {}", fmt3(whole));
    let window = match classification {
        Ok(c) if c.tail_start < end => {
            let tail = times_24(average_profit_rate(traj, c.tail_start, end)?);
            let _ = writeln!(s, "24 x profit rate over [{}, {end}]: {}", c.tail_start, fmt3(tail));
            tail
        }
        _ => whole,
    };
    match nearest_solution(traj.pot, window) {
        Some((id, e, d)) => {
            let _ = writeln!(s, "nearest catalog solution: {id}, 24E = {}, max deviation {d:.6}", fmt3(e));
        }
        None => {
            let _ = writeln!(s, "nearest catalog solution: none");
        }
    }
    Ok(s)
}

pub fn simulate(args: &SimulateArgs) -> Result<ExitCode, Failure> {
    let pot = PotSize::new(args.pot)?;
    if !(args.t_end > 0.0) {
        return Err(Failure::usage(format!("t-end must be positive, got {}", args.t_end)));
    }
    let (initial, seed) = match &args.init {
        Some(path) => (read_json::<StrategyProfile>(path)?, None),
        None => (random_interior_profile(args.seed, 0.1), Some(args.seed)),
    };
    let gains = match &args.gains {
        Some(path) => read_gains(path)?,
        None => Gains::default(),
    };
    let config = IntegrateConfig {
        tol: Tolerances {
            rtol: args.rtol,
            atol: args.atol,
        },
        sample_dt: args.sample_dt,
        clamp: args.clamp,
        ..IntegrateConfig::default()
    };
    let traj = integrate(&initial, pot, &gains, args.t_end, &config)?;
    let classification = classify(&traj, &ClassifyConfig::default());
    let summary = simulation_summary(&traj, &classification)?;

    let meta = RunMetadata {
        pot,
        gains,
        seed,
        t_end: args.t_end,
        config,
        classification: classification.as_ref().ok().cloned(),
    };
    let write = |out: &mut dyn Write| -> io::Result<()> {
        match args.format {
            TrajectoryFormat::Csv => traj.write_csv(&mut *out)?,
            TrajectoryFormat::Json => {
                traj.write_json(&meta, &mut *out)?;
                writeln!(out)?;
            }
        }
        out.flush()
    };
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::io(path, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| Failure::io(path, e))?;
            print!("{summary}");
        }
        None => {
            write(&mut BufWriter::new(io::stdout().lock()))?;
            eprint!("{summary}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use kuhn3::dynamics::random_interior_profile;
use kuhn3::{
    classify, classify_equilibrium, equilibrium_profit, instantiate, integrate, solutions_for_pot, ClassifyConfig,
    FreeParams, Freq, Gains, IntegrateConfig, PotSize,
};
use rayon::prelude::*;

use crate::failure::Failure;
use crate::{SweepArgs, SweepWhat};

/// Pots `a, a + h, ...` up to `b`, rounded to 12 decimals.
pub fn pot_grid(a: f64, b: f64, h: f64) -> Result<Vec<f64>, Failure> {
    PotSize::new(a)?;
    if !(b > a) || !b.is_finite() {
        return Err(Failure::usage(format!("pot-max must exceed pot-min, got [{a}, {b}]")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Failure::usage(format!("step must be positive, got {h}")));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect())
}

fn header(what: SweepWhat) -> String {
    match what {
        SweepWhat::Frequencies => {
            let names: Vec<&str> = Freq::ALL.iter().map(|f| f.name()).collect();
            format!("pot,id,{}", names.join(","))
        }
        SweepWhat::Profits => "pot,id,e1_x24,e2_x24,e3_x24".into(),
        SweepWhat::Stability => "pot,id,verdict,max_real_part,oscillatory_pairs,zero_modes".into(),
        SweepWhat::Classification => {
            "pot,seed,label,colour,peak_autocorrelation,period,boundary_fraction,absorption_time".into()
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn rows_at(p: f64, args: &SweepArgs) -> Result<String, Failure> {
    let pot = PotSize::new(p)?;
    let free = FreeParams::midpoint();
    let mut s = String::new();
    match args.what {
        SweepWhat::Frequencies => {
            for id in solutions_for_pot(pot) {
                let profile = instantiate(id, pot, &free)?;
                let _ = write!(s, "{p},{id}");
                for v in profile.as_array() {
                    let _ = write!(s, ",{v}");
                }
                s.push('\n');
            }
        }
        SweepWhat::Profits => {
            for id in solutions_for_pot(pot) {
                let [a, b, c] = equilibrium_profit(id, pot, &free)?.times_24();
                let _ = writeln!(s, "{p},{id},{a},{b},{c}");
            }
        }
        SweepWhat::Stability => {
            for id in solutions_for_pot(pot) {
                let r = classify_equilibrium(id, pot, &free)?;
                let _ = writeln!(
                    s,
                    "{p},{id},{:?},{},{},{}",
                    r.verdict, r.max_real_part, r.oscillatory_pairs, r.zero_modes
                );
            }
        }
        SweepWhat::Classification => {
            for seed in args.seed..args.seed + args.runs {
                let initial = random_interior_profile(seed, 0.1);
                let traj = integrate(&initial, pot, &Gains::default(), args.t_end, &IntegrateConfig::default())?;
                let c = classify(&traj, &ClassifyConfig::default())?;
                let _ = writeln!(
                    s,
                    "{p},{seed},{:?},{},{},{},{},{}",
                    c.label,
                    c.label.colour(),
                    opt(c.peak_autocorrelation),
                    opt(c.period),
                    c.boundary_fraction,
                    opt(c.absorption_time)
                );
            }
        }
    }
    Ok(s)
}

pub fn table(args: &SweepArgs) -> Result<String, Failure> {
    if args.runs == 0 {
        return Err(Failure::usage("runs must be at least 1"));
    }
    if !(args.t_end > 0.0) {
        return Err(Failure::usage(format!("t-end must be positive, got {}", args.t_end)));
    }
    let pots = pot_grid(args.pot_min, args.pot_max, args.step)?;
    let rows: Vec<String> = pots
        .par_iter()
        .map(|&p| rows_at(p, args))
        .collect::<Result<_, _>>()?;
    let mut out = header(args.what);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
    }
    Ok(out)
}

pub fn sweep(args: &SweepArgs) -> Result<ExitCode, Failure> {
    let text = table(args)?;
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

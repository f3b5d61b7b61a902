use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use bdl_core::asymptotics::{self, DiluteInputs, Formula, HigherOrderConstants};
use bdl_core::bogoliubov::{self, GridSpec, InteractionMode, SolverSpec, SweepPoint};
use bdl_core::liebliniger::{self, LiebLinigerSolution, QuadSpec};
use bdl_core::reproduce;
use bdl_core::scattering::{self, ScatterSpec};
use bdl_core::Dim;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ModeName, RunConfig};
use crate::record::ResultRecord;
use crate::{CliError, ErrorClass};

const REAL_PAIRING_NOTE: &str = "pairing amplitudes alpha(p) restricted to real values";

fn render(record: &ResultRecord) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(record).map_err(|e| CliError::input(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::input(format!("cannot write {}: {e}", path.display()))
}

fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Write a CSV with a header row, replacing any existing file.
fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = if is_stdout(path) {
        Box::new(io::stdout().lock())
    } else {
        Box::new(fs::File::create(path).map_err(|e| io_error(path, e))?)
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header).map_err(|e| io_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// Append one row, writing the header first if the file is new or empty.
fn append_csv(path: &Path, header: &[&str], row: Vec<String>) -> Result<(), CliError> {
    if is_stdout(path) {
        return write_csv(path, header, &[row]);
    }
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_error(path, e))?;
    let empty = file.metadata().map_err(|e| io_error(path, e))?.len() == 0;
    let mut w = csv::Writer::from_writer(file);
    if empty {
        w.write_record(header).map_err(|e| io_error(path, e))?;
    } else {
        let existing = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        let first = existing.lines().next().unwrap_or_default();
        if first != header.join(",") {
            return Err(CliError::input(format!(
                "{} has header '{first}', expected '{}'",
                path.display(),
                header.join(",")
            )));
        }
    }
    w.write_record(&row).map_err(|e| io_error(path, e))?;
    w.flush().map_err(|e| io_error(path, e))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn dim_of(d: u8) -> Result<Dim, CliError> {
    Dim::try_from(d).map_err(CliError::from)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::input(format!("cannot start worker pool: {e}")))
}

pub fn parse_constants(arg: &str) -> Result<HigherOrderConstants, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::input(format!("cannot read constants {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid constants: {e}")))
}

pub fn scatter(mut cfg: RunConfig) -> Result<String, CliError> {
    let potential = cfg.require_potential()?.clone();
    let dim = dim_of(*cfg.dim.get_or_insert(3))?;
    let spec = ScatterSpec {
        steps: *cfg.grid_points.get_or_insert(ScatterSpec::default().steps),
        ..ScatterSpec::default()
    };
    if spec.steps < 2 {
        return Err(CliError::input("--grid-points must be at least 2"));
    }
    let sol = scattering::solve(&potential, dim, &spec)?;
    if let Some(path) = &cfg.csv {
        let rows: Vec<_> = sol.grid.iter().zip(&sol.u).map(|(r, u)| vec![num(*r), num(*u)]).collect();
        write_csv(path, &["r", "u"], &rows)?;
    }
    let outputs = json!({
        "a": sol.a,
        "R": sol.range,
        "residual": sol.exterior_residual,
        "richardson_error": sol.richardson_error,
        "outer_radius": sol.outer_radius(),
    });
    render(&ResultRecord::new(cfg, outputs, json!({ "scatter": spec }), Vec::new()))
}

/// Resolve the interaction mode and record the choices in `cfg`.
fn interaction(cfg: &mut RunConfig) -> Result<InteractionMode, CliError> {
    let mode = *cfg.mode.get_or_insert(if cfg.potential.is_some() {
        ModeName::Full
    } else {
        ModeName::ScatteringConstant
    });
    match mode {
        ModeName::Full => {
            if cfg.a.is_some() {
                return Err(CliError::input(
                    "--a applies to the scattering-constant mode; the full mode derives a from the potential",
                ));
            }
            Ok(InteractionMode::FullPotential(cfg.require_potential()?.clone()))
        }
        ModeName::ScatteringConstant => {
            let a = match (cfg.a, &cfg.potential) {
                (Some(a), _) => a,
                (None, Some(v)) => scattering::solve(v, Dim::Three, &ScatterSpec::default())?.a,
                (None, None) => *cfg.a.get_or_insert(1.0),
            };
            Ok(InteractionMode::ScatteringConstant { a })
        }
    }
}

fn grid_spec(cfg: &mut RunConfig) -> GridSpec {
    GridSpec {
        nodes: *cfg.grid_nodes.get_or_insert(GridSpec::default().nodes),
        cutoff: cfg.cutoff,
        ..GridSpec::default()
    }
}

pub fn bog_min(mut cfg: RunConfig) -> Result<String, CliError> {
    let rho = cfg.require(cfg.rho, "rho")?;
    let mode = interaction(&mut cfg)?;
    let grid = grid_spec(&mut cfg);
    let solver = SolverSpec::default();
    let min = bogoliubov::minimize(rho, &mode, &grid, &solver)?;
    let a = min.diagnostics.scattering_length;
    let x = rho * a.powi(3);
    let outputs = json!({
        "mode": mode.name(),
        "rho": rho,
        "a": a,
        "rho_a3": x,
        "energy": min.energy,
        "e_over_4pi_rho2_a": min.energy.total / (4.0 * std::f64::consts::PI * rho * rho * a),
        "lhy_prediction": 1.0 + asymptotics::lhy_coefficient() * x.sqrt(),
        "depletion": bogoliubov::depletion(&min.state),
        "diagnostics": min.diagnostics,
    });
    let settings = json!({ "grid": grid, "solver": solver });
    render(&ResultRecord::new(cfg, outputs, settings, vec![REAL_PAIRING_NOTE.into()]))
}

pub fn bog_sweep(mut cfg: RunConfig, jobs: Option<usize>) -> Result<String, CliError> {
    let sweep = cfg.sweep.clone().expect("sweep resolved by caller");
    if sweep.parameter != "rho_a3" {
        return Err(CliError::input(format!(
            "bog-sweep sweeps rho_a3, not '{}'",
            sweep.parameter
        )));
    }
    let xs = sweep.values()?;
    let mode = interaction(&mut cfg)?;
    let grid = grid_spec(&mut cfg);
    let solver = SolverSpec::default();
    let a = bogoliubov::mode_scattering_length(&mode)?;
    let points: Vec<SweepPoint> = pool(jobs)?.install(|| {
        xs.par_iter()
            .map(|&x| bogoliubov::sweep_point(x, &mode, a, &grid, &solver))
            .collect::<Result<_, _>>()
    })?;
    let rows: Vec<_> = points
        .iter()
        .map(|p| {
            vec![
                num(p.rho_a3),
                num(p.e_over_4pi_rho2_a),
                num(p.depletion_fraction),
                p.iterations.to_string(),
            ]
        })
        .collect();
    let header = ["rho_a3", "e_over_4pi_rho2_a", "depletion_fraction", "iterations"];
    if let Some(path) = &cfg.csv {
        write_csv(path, &header, &rows)?;
        if is_stdout(path) {
            return Ok(String::new());
        }
    }
    let fit = bogoliubov::lhy_slope(&points)?;
    let outputs = json!({
        "mode": mode.name(),
        "a": a,
        "points": points,
        "fit": {
            "intercept": fit.intercept,
            "slope": fit.slope,
            "rms_residual": fit.rms_residual,
            "lhy_coefficient": asymptotics::lhy_coefficient(),
        },
    });
    let settings = json!({ "grid": grid, "solver": solver, "csv_columns": header });
    render(&ResultRecord::new(cfg, outputs, settings, vec![REAL_PAIRING_NOTE.into()]))
}

pub fn asymptote(mut cfg: RunConfig) -> Result<String, CliError> {
    let formula = cfg
        .formula
        .ok_or_else(|| CliError::input("--formula is required"))?;
    let dim = dim_of(*cfg.dim.get_or_insert(formula.dim().as_u8()))?;
    let rho = cfg.require(cfg.rho, "rho")?;
    let a = cfg.require(cfg.a, "a")?;
    let uses_constants = matches!(formula, Formula::MoraCastin | Formula::Wu);
    let consts = if uses_constants {
        *cfg.constants.get_or_insert_with(HigherOrderConstants::default)
    } else {
        HigherOrderConstants::default()
    };
    let inputs = DiluteInputs::new(rho, a, dim)?;
    let e = formula.evaluate(&inputs, &consts)?;
    if let Some(path) = &cfg.csv {
        append_csv(
            path,
            &["formula", "dim", "rho", "a", "energy_density"],
            vec![formula.name().into(), dim.as_u8().to_string(), num(rho), num(a), num(e)],
        )?;
    }
    let outputs = json!({
        "formula": formula.name(),
        "dim": dim.as_u8(),
        "energy_density": e,
        "energy_per_particle": e / rho,
        "diluteness": inputs.diluteness(),
    });
    let mut notes = Vec::new();
    let mut settings = json!({ "euler_gamma": asymptotics::EULER_GAMMA });
    if uses_constants {
        notes.push(consts.provenance_note().to_string());
        settings["constants"] = serde_json::to_value(consts).map_err(|e| CliError::input(e.to_string()))?;
    }
    render(&ResultRecord::new(cfg, outputs, settings, notes))
}

pub fn estimate(cfg: RunConfig) -> Result<String, CliError> {
    let rho = cfg.require(cfg.rho, "rho")?;
    let a = cfg.require(cfg.a, "a")?;
    let r_trap = cfg.require(cfg.r_trap, "R-trap")?;
    let l_box = cfg.require(cfg.l_box, "L-box")?;
    let est = asymptotics::physical_estimates(rho, a, r_trap, l_box)?;
    if let Some(path) = &cfg.csv {
        append_csv(
            path,
            &[
                "rho",
                "a",
                "r_trap",
                "l_box",
                "healing_length",
                "mode_count",
                "depletion_bound",
            ],
            vec![
                num(rho),
                num(a),
                num(r_trap),
                num(l_box),
                num(est.healing_length),
                num(est.mode_count),
                num(est.depletion_bound),
            ],
        )?;
    }
    let outputs = serde_json::to_value(est).map_err(|e| CliError::input(e.to_string()))?;
    render(&ResultRecord::new(cfg, outputs, Value::Null, Vec::new()))
}

fn ll_summary(s: &LiebLinigerSolution) -> Value {
    json!({
        "gamma": s.gamma,
        "lambda": s.lambda,
        "e_tilde": s.e_tilde,
        "e_tilde_over_tonks": s.e_tilde / liebliniger::tonks_e_tilde(),
        "residual": s.residual,
    })
}

pub fn lieb_liniger(mut cfg: RunConfig, jobs: Option<usize>) -> Result<String, CliError> {
    let spec = QuadSpec {
        nodes: *cfg.nodes.get_or_insert(QuadSpec::default().nodes),
        ..QuadSpec::default()
    };
    let settings = json!({ "quadrature": spec });
    if let Some(sweep) = cfg.sweep.clone() {
        if sweep.parameter != "gamma" {
            return Err(CliError::input(format!(
                "lieb-liniger sweeps gamma, not '{}'",
                sweep.parameter
            )));
        }
        if cfg.gamma.is_some() || cfg.rho.is_some() || cfg.c.is_some() {
            return Err(CliError::input("a gamma sweep excludes --gamma, --rho and --c"));
        }
        let gammas = sweep.values()?;
        let sols: Vec<LiebLinigerSolution> = pool(jobs)?.install(|| {
            gammas
                .par_iter()
                .map(|&g| liebliniger::solve(g, &spec))
                .collect::<Result<_, _>>()
        })?;
        if let Some(path) = &cfg.csv {
            let rows: Vec<_> = sols
                .iter()
                .map(|s| vec![num(s.gamma), num(s.lambda), num(s.e_tilde), num(s.residual)])
                .collect();
            write_csv(path, &["gamma", "lambda", "e_tilde", "residual"], &rows)?;
        }
        let outputs = json!({ "points": sols.iter().map(ll_summary).collect::<Vec<_>>() });
        return render(&ResultRecord::new(cfg, outputs, settings, Vec::new()));
    }

    let gamma = match (cfg.gamma, cfg.rho, cfg.c) {
        (Some(g), None, None) => g,
        (None, Some(rho), Some(c)) => {
            if !(rho > 0.0 && c > 0.0) {
                return Err(CliError::input("--rho and --c must be positive"));
            }
            c / rho
        }
        _ => return Err(CliError::input("give either --gamma or both --rho and --c")),
    };
    let sol = liebliniger::solve(gamma, &spec)?;
    if let Some(path) = &cfg.csv {
        let rows: Vec<_> = sol.nodes.iter().zip(&sol.g).map(|(x, g)| vec![num(*x), num(*g)]).collect();
        write_csv(path, &["x", "g"], &rows)?;
    }
    let mut outputs = ll_summary(&sol);
    if let (Some(rho), Some(_)) = (cfg.rho, cfg.c) {
        outputs["energy_density"] = json!(rho.powi(3) * sol.e_tilde);
    }
    render(&ResultRecord::new(cfg, outputs, settings, Vec::new()))
}

pub fn reproduce(cfg: RunConfig, as_json: bool, only: &[String]) -> Result<String, CliError> {
    let runners: [(&str, fn() -> reproduce::CriterionReport); 10] = [
        ("scattering-oracles", reproduce::scattering_oracles),
        ("identity-8pi-a", reproduce::identity),
        ("lhy-coefficient", reproduce::lhy_coefficient),
        ("bogoliubov-negative", reproduce::bogoliubov_negative),
        ("alpha-identity", reproduce::alpha_identity),
        ("lieb-liniger", reproduce::lieb_liniger),
        ("hardcore-1d", reproduce::hardcore_1d),
        ("mode-count", reproduce::mode_count),
        ("depletion", reproduce::depletion),
        ("dimensional-scaling", reproduce::scaling),
    ];
    if let Some(unknown) = only.iter().find(|id| !runners.iter().any(|(r, _)| r == id)) {
        let ids: Vec<_> = runners.iter().map(|(id, _)| *id).collect();
        return Err(CliError::input(format!(
            "unknown criterion '{unknown}', expected one of {}",
            ids.join(", ")
        )));
    }
    let reports: Vec<_> = runners
        .iter()
        .filter(|(id, _)| only.is_empty() || only.iter().any(|o| o == id))
        .map(|(_, run)| run())
        .collect();
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();

    let text = if as_json {
        let outputs = json!({ "passed": failed.is_empty(), "criteria": reports });
        render(&ResultRecord::new(cfg, outputs, Value::Null, Vec::new()))?
    } else {
        let mut t = String::new();
        for r in &reports {
            t.push_str(&r.summary_line());
            t.push('\n');
            for c in &r.checks {
                t.push_str(&format!("    {c}\n"));
            }
            if let Some(note) = r.note {
                t.push_str(&format!("    note: {note}\n"));
            }
        }
        t.push_str(&format!("{} of {} criteria passed\n", reports.len() - failed.len(), reports.len()));
        t
    };
    if failed.is_empty() {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError {
            class: ErrorClass::CriteriaFailed,
            message: format!("failed criteria: {}", failed.join(", ")),
        })
    }
}

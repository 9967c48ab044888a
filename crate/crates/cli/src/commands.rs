use std::f64::consts::PI;

use coherent_loops::asymptotics::{allowed_window, bisect_allowed_boundary, wigner_d_asym_ly, Validity};
use coherent_loops::coherent::{
    coherent_inner, coherent_state, fibrewise_norm_field, loop_state_quadrature, CoherentSpec,
};
use coherent_loops::hopf::{constant_height_loop, section_south, section_u, standard_lift, Loop};
use coherent_loops::special::HalfInt;
use coherent_loops::stationary::{
    csp_contribution, csp_leading_term, find_stationary_points, quadrature_oracle, LoopPairIntegrand,
};
use coherent_loops::su2::{wigner_d_exact, RepLevel, Su2Element};
use coherent_loops::verify::{run_suite, VerifyConfig, VerifyReport};
use rayon::prelude::*;

use crate::config::{weight, ConfigError, Options, StateKind};
use crate::table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum CmdError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] coherent_loops::Error),
}

const WIGNER_COLUMNS: [&str; 8] = ["beta", "d_exact", "d_asym", "abs_err", "allowed", "A", "nu", "V"];

fn wigner_row(level: RepLevel, m1: HalfInt, m2: HalfInt, beta: f64) -> Result<Vec<Cell>, coherent_loops::Error> {
    let exact = wigner_d_exact(level, m2, m1, beta)?;
    let r = wigner_d_asym_ly(level, m1, m2, beta)?;
    let nan = f64::NAN;
    let asym = r.value.unwrap_or(nan);
    Ok(vec![
        Cell::Float(beta),
        Cell::Float(exact),
        Cell::Float(asym),
        Cell::Float((asym - exact).abs()),
        Cell::Flag(r.validity == Validity::Allowed),
        Cell::Float(r.area.unwrap_or(nan)),
        Cell::Float(r.nu.unwrap_or(nan)),
        Cell::Float(r.volume.unwrap_or(nan)),
    ])
}

/// Exact and asymptotic `d^j_{m2 m1}` over a beta sweep, or over all `m2`
/// at one beta when `m2` is absent.
pub fn wigner(opts: &Options) -> Result<Table, CmdError> {
    let k = opts.level_k()?;
    let level = RepLevel::new(k);
    let m1 = weight("m1", opts.m1, k)?;
    if opts.m2.is_none() {
        let beta = opts.beta()?;
        let mut cols = vec!["m2"];
        cols.extend(WIGNER_COLUMNS);
        let mut table = Table::new(&cols);
        let weights: Vec<HalfInt> = (0..=k as i64).map(|a| HalfInt::from_twice(k as i64 - 2 * a)).rev().collect();
        let rows: Result<Vec<Vec<Cell>>, _> = weights
            .par_iter()
            .map(|&m2| {
                let mut row = vec![Cell::Weight(m2.value())];
                row.extend(wigner_row(level, m1, m2, beta)?);
                Ok(row)
            })
            .collect();
        table.rows = rows.map_err(CmdError::Compute)?;
        return Ok(table);
    }
    let m2 = weight("m2", opts.m2, k)?;
    let betas = opts.betas()?;
    let tol = opts.tol()?;
    if let Some((lo, hi)) = allowed_window(level, m1, m2)? {
        let width = hi - lo;
        let mid = 0.5 * (lo + hi);
        let edges: Vec<f64> = [(lo - 0.5 * width).max(0.0), (hi + 0.5 * width).min(PI)]
            .iter()
            .map(|&out| bisect_allowed_boundary(level, m1, m2, mid, out, tol))
            .collect::<Result<_, _>>()?;
        eprintln!("allowed window: ({:.16e}, {:.16e})", edges[0], edges[1]);
    } else {
        eprintln!("allowed window: empty");
    }
    let mut table = Table::new(&WIGNER_COLUMNS);
    let rows: Result<Vec<Vec<Cell>>, _> = betas.par_iter().map(|&b| wigner_row(level, m1, m2, b)).collect();
    table.rows = rows?;
    Ok(table)
}

/// `|v(x)|` for a loop state or a coherent state.
pub fn field(opts: &Options) -> Result<Table, CmdError> {
    let k = opts.level_k()?;
    let level = RepLevel::new(k);
    let (nt, np) = opts.grid((91, 180))?;
    let v = match opts.state.unwrap_or_default() {
        StateKind::Loop => {
            let m = weight("m1", opts.m1, k)?;
            if m.twice().unsigned_abs() == k as u64 {
                return Err(ConfigError::Field { field: "m1", msg: "pole weights have no loop state".into() }.into());
            }
            loop_state_quadrature(level, &standard_lift(&constant_height_loop(k, m)?))?.state
        }
        StateKind::Coherent => {
            let theta = opts.theta.unwrap_or(0.0);
            if !(0.0..=PI).contains(&theta) {
                return Err(ConfigError::Field { field: "theta", msg: format!("{theta} is outside [0, pi]") }.into());
            }
            let phi = opts.phi.unwrap_or(0.0);
            let base = if theta > PI / 2.0 { section_south(theta, phi) } else { section_u(theta, phi)? };
            coherent_state(&CoherentSpec { level, base })
        }
    };
    let mut table = Table::new(&["theta", "phi", "norm"]);
    table.rows = fibrewise_norm_field(&v, nt, np)?
        .into_iter()
        .map(|s| vec![Cell::Float(s.theta), Cell::Float(s.phi), Cell::Float(s.norm)])
        .collect();
    Ok(table)
}

/// `<psi_{gamma(s)}, psi_{sigma(t)}>` on the torus, with `gamma` the loop of
/// weight `m1` and `sigma = R_y(beta)` applied to the loop of weight `m2`.
pub fn torus(opts: &Options) -> Result<Table, CmdError> {
    let k = opts.level_k()?;
    let level = RepLevel::new(k);
    let (m1, m2) = (weight("m1", opts.m1, k)?, weight("m2", opts.m2, k)?);
    for (name, m) in [("m1", m1), ("m2", m2)] {
        if m.twice().unsigned_abs() == k as u64 {
            return Err(ConfigError::Field { field: name, msg: "pole weights give point loops".into() }.into());
        }
    }
    let beta = opts.beta()?;
    let (ns, nt) = opts.grid((128, 128))?;
    let nodes = opts.nodes()?;
    let gamma: Loop = constant_height_loop(k, m1)?;
    let sigma = constant_height_loop(k, m2)?.rotated(&Su2Element::uy(beta));
    let (gl, sl) = (standard_lift(&gamma), standard_lift(&sigma));

    let rows: Result<Vec<Vec<Vec<Cell>>>, coherent_loops::Error> = (0..ns)
        .into_par_iter()
        .map(|i| {
            let s = 2.0 * PI * i as f64 / ns as f64;
            let p = gl.lift(s);
            (0..nt)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / nt as f64;
                    let z = coherent_inner(level, &p, &sl.lift(t))?;
                    Ok(vec![Cell::Float(s), Cell::Float(t), Cell::Float(z.norm()), Cell::Float(z.arg())])
                })
                .collect()
        })
        .collect();
    let mut table = Table::new(&["s", "t", "magnitude", "phase"]);
    table.rows = rows?.into_iter().flatten().collect();

    let f = LoopPairIntegrand { gamma: gl, sigma: sl, k };
    match find_stationary_points(&f, 128) {
        Ok(points) => {
            for p in &points {
                eprintln!("saddle: s={:.16e} t={:.16e} contribution={:.16e}", p.s, p.t, csp_contribution(k, p));
            }
            let oracle = quadrature_oracle(&f, k, nodes, 1 << 14)?;
            eprintln!(
                "torus integral: stationary phase {:.16e}, quadrature {:.16e} ({} nodes)",
                csp_leading_term(k, &points),
                oracle.value,
                oracle.nodes
            );
        }
        // the grid is still meaningful, e.g. for coincident loops
        Err(e) => eprintln!("no saddle analysis: {e}"),
    }
    Ok(table)
}

pub fn verify(opts: &Options) -> Result<VerifyReport, CmdError> {
    let defaults = VerifyConfig::default();
    let trials = opts.trials.unwrap_or(defaults.trials);
    if trials == 0 {
        return Err(ConfigError::Field { field: "trials", msg: "must be at least 1".into() }.into());
    }
    let cfg = VerifyConfig {
        seed: opts.seed.unwrap_or(defaults.seed),
        trials,
        tol_scale: opts.tol_scale()?,
        flip_lift_sign: opts.flip_lift_sign,
    };
    Ok(run_suite(&cfg))
}

//! Command implementations: each turns parsed arguments into a table.

use rayon::prelude::*;
use xxlde::bose::{
    effective_spin_couplings, end_probe_fields, end_probe_params, end_site_entanglement, superlattice_fields,
    superlattice_params, BhParams,
};
use xxlde::chain::{build_couplings, CouplingPattern, DisorderSpec};
use xxlde::fermion::end_to_end;
use xxlde::oracle::oracle_gap;
use xxlde::sweep::{disorder_statistics, length_sweep};
use xxlde::teleport::{critical_temperature, prepare_teleport, thermal_fidelity_map, QubitInput, TcGrid, TeleportConfig};
use xxlde::units::Temperature;

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

fn temperature(t: f64) -> CliResult<Temperature> {
    Ok(Temperature::new(t)?)
}

pub fn sweep_length(a: &SweepLengthArgs) -> CliResult<Table> {
    let reports = length_sweep(&a.pattern, a.n.values(), temperature(a.temperature)?)?;
    let mut t = Table::new(vec!["n", "x", "concurrence", "fully_entangled_fraction", "fidelity", "gap", "degenerate"]);
    for r in reports {
        t.push(vec![
            r.sites.into(),
            r.x.into(),
            r.concurrence.into(),
            r.fully_entangled_fraction.into(),
            r.fidelity.into(),
            r.gap.into(),
            r.degenerate.into(),
        ]);
    }
    Ok(t)
}

fn coupling_pattern(a: &SweepCouplingsArgs, lambda: f64, mu: Option<f64>) -> CliResult<CouplingPattern> {
    Ok(match a.kind {
        SweepKind::Alternating => CouplingPattern::alternating(lambda),
        SweepKind::Endprobe => CouplingPattern::end_probe(lambda),
        SweepKind::Hybrid => CouplingPattern::hybrid(
            lambda,
            a.ntilde.ok_or_else(|| CliError::Config("hybrid sweeps require --ntilde".into()))?,
        ),
        SweepKind::Lambdamu => CouplingPattern::lambda_mu(
            lambda,
            mu.ok_or_else(|| CliError::Config("lambdamu sweeps require --mu".into()))?,
        ),
    })
}

pub fn sweep_couplings(a: &SweepCouplingsArgs) -> CliResult<Table> {
    let mus: Vec<Option<f64>> = match (&a.mu, a.kind) {
        (Some(m), SweepKind::Lambdamu) => m.values().iter().map(|&v| Some(v)).collect(),
        (None, SweepKind::Lambdamu) => return Err(CliError::Config("lambdamu sweeps require --mu".into())),
        (Some(_), _) => return Err(CliError::Config("--mu only applies to lambdamu sweeps".into())),
        (None, _) => vec![None],
    };
    let temp = temperature(a.temperature)?;
    let mut points = Vec::new();
    for &n in a.n.values() {
        for &lambda in a.lambda.values() {
            for &mu in &mus {
                let pattern = coupling_pattern(a, lambda, mu)?;
                pattern.validate()?;
                points.push((n, lambda, mu, pattern));
            }
        }
    }
    let reports = points
        .par_iter()
        .map(|(n, _, _, p)| Ok(end_to_end(&build_couplings(p, *n)?, temp)?))
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(vec!["n", "lambda", "mu", "x", "concurrence", "fidelity", "gap"]);
    for ((n, lambda, mu, _), r) in points.iter().zip(reports) {
        t.push(vec![
            (*n).into(),
            (*lambda).into(),
            (*mu).into(),
            r.x.into(),
            r.concurrence.into(),
            r.fidelity.into(),
            r.gap.into(),
        ]);
    }
    Ok(t)
}

pub fn gap(a: &GapArgs) -> CliResult<Table> {
    let reports = length_sweep(&a.pattern, a.n.values(), Temperature::ZERO)?;
    let oracle = if a.oracle {
        a.n.values()
            .par_iter()
            .map(|&n| Ok(Some(oracle_gap(&build_couplings(&a.pattern, n)?)?)))
            .collect::<CliResult<Vec<_>>>()?
    } else {
        vec![None; reports.len()]
    };
    let mut columns = vec!["n", "gap", "degenerate"];
    if a.oracle {
        columns.push("oracle_gap");
    }
    let mut t = Table::new(columns);
    for (r, o) in reports.iter().zip(oracle) {
        let mut row: Vec<Cell> = vec![r.sites.into(), r.gap.into(), r.degenerate.into()];
        if a.oracle {
            row.push(o.into());
        }
        t.push(row);
    }
    Ok(t)
}

pub fn disorder(a: &DisorderArgs) -> CliResult<Table> {
    let spec = DisorderSpec::new(a.chi, a.seed, a.samples)?;
    let temp = temperature(a.temperature)?;
    let mut t = Table::new(vec!["n", "clean", "min", "max", "mean", "fraction_above_clean", "samples"]);
    for &n in a.n.values() {
        let s = disorder_statistics(&a.pattern, n, &spec, temp)?;
        t.push(vec![
            n.into(),
            s.clean.into(),
            s.min.into(),
            s.max.into(),
            s.mean.into(),
            s.fraction_above_clean.into(),
            s.samples.into(),
        ]);
    }
    Ok(t)
}

fn bose_params(a: &BoseHubbardArgs, u: f64) -> CliResult<BhParams> {
    let mut params = match (a.lattice, a.bosons) {
        (Lattice::Superlattice, None) => superlattice_params(a.sites, a.epsilon, u)?,
        (Lattice::Endprobe, None) => end_probe_params(a.sites, a.epsilon, u)?,
        (Lattice::Superlattice, Some(n)) => BhParams::new(a.sites, n, u, superlattice_fields(a.sites, a.epsilon)?)?,
        (Lattice::Endprobe, Some(n)) => BhParams::new(a.sites, n, u, end_probe_fields(a.sites, a.epsilon)?)?,
    };
    if let Some(cap) = a.cap {
        params = params.with_cap(cap)?;
    }
    Ok(params)
}

pub fn bose_hubbard(a: &BoseHubbardArgs) -> CliResult<Table> {
    // Regime warnings are logged by the mapping itself, once per U.
    let rows = a
        .u
        .values()
        .par_iter()
        .map(|&u| {
            let params = bose_params(a, u)?;
            let chain = effective_spin_couplings(&params)?;
            Ok((u, end_site_entanglement(&params)?, chain))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let chain = &rows[0].2;
    let spin_sites = chain.spin_sites.len();
    let spin = end_to_end(&build_couplings(&chain.pattern, spin_sites)?, Temperature::ZERO)?.concurrence;
    let mut t = Table::new(vec![
        "u",
        "energy",
        "gap",
        "log_negativity",
        "effective_concurrence",
        "projection_weight",
        "spin_sites",
        "spin_concurrence",
    ]);
    for (u, e, _) in rows {
        t.push(vec![
            u.into(),
            e.energy.into(),
            e.gap.into(),
            e.log_negativity.into(),
            e.effective_concurrence.into(),
            e.projection_weight.into(),
            spin_sites.into(),
            spin.into(),
        ]);
    }
    Ok(t)
}

pub fn teleport(a: &TeleportArgs) -> CliResult<Table> {
    let config = TeleportConfig {
        channel: a.pattern.clone().unwrap_or_else(|| CouplingPattern::lambda_mu(a.lambda, a.mu)),
        channel_sites: a.n,
        nu: a.nu,
        temperature: temperature(a.temperature)?,
        time: a.time,
    };
    if a.alpha.values().iter().any(|m| !(0.0..=1.0).contains(m)) {
        return Err(CliError::Config("--alpha values must lie in [0, 1]".into()));
    }
    let response = prepare_teleport(&config)?;
    let mut t = Table::new(vec!["alpha", "fidelity", "success_probability"]);
    for &m in a.alpha.values() {
        let (f, p) = match a.phase {
            Some(phase) => {
                let r = response.evaluate(&QubitInput::from_modulus(m, phase)?);
                (r.fidelity, r.success_probability)
            }
            None => {
                let r = response.phase_averaged(m, a.phase_points)?;
                (r.fidelity, r.success_probability)
            }
        };
        t.push(vec![m.into(), f.into(), p.into()]);
    }
    Ok(t)
}

pub fn tc(a: &TcArgs) -> CliResult<Table> {
    let grid = TcGrid { lambda_points: a.grid.lambda_points, mu_points: a.grid.mu_points };
    grid.validate()?;
    if let Some(temp) = a.map_temperature {
        let (lambdas, mus) = grid.axes();
        let mut t = Table::new(vec!["n", "lambda", "mu", "fidelity"]);
        for &n in a.n.values() {
            let map = thermal_fidelity_map(n, &lambdas, &mus, temperature(temp)?)?;
            for (l, m, f) in map.rows() {
                t.push(vec![n.into(), l.into(), m.into(), f.into()]);
            }
        }
        return Ok(t);
    }
    let mut t = Table::new(vec!["n", "critical_temperature"]);
    for &n in a.n.values() {
        t.push(vec![n.into(), critical_temperature(n, grid, a.tolerance)?.into()]);
    }
    Ok(t)
}

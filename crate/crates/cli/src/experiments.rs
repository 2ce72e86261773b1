//! The experiments behind `emergent run`.

use emergent_core::algebra::{
    blue_red_residual, check_idempotent, check_left_division, check_one_parameter_law,
    check_right_division, check_self_distributivity, check_trivial_at_neutral, probe_scales,
};
use emergent_core::groupoid::{deformed_dif, deformed_dif_residual, dilate_arrow, norm_arrow};
use emergent_core::limits::{
    conical_group_check, differential_checks, estimate_limit, limit_along, tangent_distance_check,
    uniformity_probe, ConvergenceReport, Expr, SmoothMap, DEFAULT_CONVERGENCE_TOL,
    FINITE_SAMPLE_CAVEAT,
};
use emergent_core::models::{default_quandle_scales, quandle_view_check};
use emergent_core::sampling::sample_ball;
use emergent_core::{
    approx_sum, blue_construction, op, Arrow, CompactSample, DilationModel, Point, ScaleElement,
};

use crate::config::{Experiment, ExperimentConfig};
use crate::report::{CheckEntry, Report};
use crate::CliError;

type Model = dyn DilationModel;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let model = cfg.model.build()?;
    let m = model.as_ref();
    let mut report = Report::new(cfg.clone());
    let extra_ok = match cfg.experiment {
        Experiment::Axioms => axioms(m, cfg, &mut report)?,
        Experiment::BlueRed => blue_red(m, cfg, &mut report)?,
        Experiment::Conical => conical(m, cfg, &mut report)?,
        Experiment::Convergence => convergence(m, cfg, &mut report)?,
        Experiment::Differential => differential(cfg, &mut report)?,
        Experiment::Distance => distance(m, cfg, &mut report)?,
        Experiment::Groupoid => groupoid(m, cfg, &mut report)?,
    };
    report.finish(extra_ok);
    Ok(report)
}

fn sample(m: &Model, cfg: &ExperimentConfig) -> Result<Vec<Point>, CliError> {
    Ok(sample_ball(
        m,
        &m.base_point(),
        cfg.sample_radius,
        cfg.sample_size,
        cfg.seed,
    )?)
}

/// Probe scales, restricted to contractions on local models so points stay in the domain.
fn scales_for(m: &Model) -> Vec<ScaleElement> {
    let mut scales = probe_scales(m.scale_kind());
    if m.locality().is_some() {
        scales.retain(|eps| m.contraction(eps) <= 1.0);
    }
    scales
}

fn fill_from_convergence(report: &mut Report, r: &ConvergenceReport) {
    for ((eps, value), residual) in r.net.iter().zip(&r.values).zip(r.residuals()) {
        report.push_row(*eps, value.clone(), residual);
    }
    report.extrapolated = Some(r.extrapolated_limit.clone());
    report.rate = r.empirical_rate;
}

fn convergence_note(r: &ConvergenceReport) -> String {
    format!(
        "limit from {} net points (Richardson column {}); converged: {}; inconclusive: {}",
        r.used,
        r.richardson_order,
        r.converged,
        r.inconclusive()
    )
}

fn axioms(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let tol = cfg.tol;
    let sample = sample(m, cfg)?;
    let scales = scales_for(m);

    let mut idem = 0.0f64;
    let mut one_param = 0.0f64;
    let mut left = 0.0f64;
    let mut sd = 0.0f64;
    let mut right: Option<f64> = None;
    for eps in &scales {
        idem = idem.max(check_idempotent(m, eps, &sample, tol)?.max_residual);
        left = left.max(check_left_division(m, eps, &sample, tol)?.max_residual);
        sd = sd.max(check_self_distributivity(m, eps, &sample, tol)?.max_residual);
        for mu in &scales {
            one_param =
                one_param.max(check_one_parameter_law(m, eps, mu, &sample, tol)?.max_residual);
        }
        if let Some(r) = check_right_division(m, eps, &sample, tol) {
            right = Some(right.unwrap_or(0.0).max(r?.max_residual));
        }
    }

    let (x, u, _) = m.reference_triple();
    for eps in cfg.net.elements()? {
        let row_idem = check_idempotent(m, &eps, &sample, tol)?.max_residual;
        let row_law = check_one_parameter_law(m, &eps, &cfg.net.ratio, &sample, tol)?.max_residual;
        idem = idem.max(row_idem);
        one_param = one_param.max(row_law);
        report.push_row(eps, op(m, &eps, &x, &u)?, row_idem.max(row_law));
    }
    let trivial = check_trivial_at_neutral(m, &sample, tol)?.max_residual;

    report.check("idempotency", CheckEntry::asserted(idem, tol));
    report.check("trivial-at-neutral", CheckEntry::asserted(trivial, tol));
    report.check("one-parameter-law", CheckEntry::asserted(one_param, tol));
    report.check("left-division", CheckEntry::asserted(left, tol));
    if let Some(r) = right {
        report.check("right-division", CheckEntry::asserted(r, tol));
    }
    let sd_entry = if m.self_distributive() {
        CheckEntry::asserted(sd, tol)
    } else {
        CheckEntry::reported(sd, tol)
    };
    report.check("self-distributivity", sd_entry);

    let quandle = quandle_view_check(m, &default_quandle_scales(m), &sample, tol)?;
    report.notes.push(quandle.to_string());

    let limit = limit_along(m, &cfg.net, DEFAULT_CONVERGENCE_TOL, |eps| {
        op(m, eps, &x, &u)
    })?;
    report.extrapolated = Some(limit.extrapolated_limit);
    report.rate = limit.empirical_rate;
    Ok(true)
}

fn convergence(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let expr = cfg.expr.unwrap_or(Expr::Sum);
    let (x, u, v) = m.reference_triple();
    let r = estimate_limit(m, expr, &x, &u, &v, &cfg.net, cfg.tol)?;
    fill_from_convergence(report, &r);
    report.check(
        "converged",
        CheckEntry::asserted(r.max_successive_delta, cfg.tol),
    );
    report.notes.push(convergence_note(&r));

    let compact = CompactSample::around(m, &x, cfg.sample_radius, cfg.sample_size, cfg.seed)?;
    let probe = uniformity_probe(m, expr, &compact, &cfg.net, cfg.tol)?;
    let last = probe.sup_deltas.last().copied().unwrap_or(0.0);
    report.check("uniformity", CheckEntry::reported(last, cfg.tol));
    report.notes.push(format!(
        "uniformity: sup deltas decreasing over the final {} steps: {}; {}",
        probe.tail, probe.decreasing, FINITE_SAMPLE_CAVEAT
    ));
    Ok(!r.inconclusive())
}

fn blue_red(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let (x, u, v) = m.reference_triple();
    let mut worst = 0.0f64;
    for eps in cfg.net.elements()? {
        let blue = blue_construction(m, &eps, &x, &u, &v)?;
        let red = approx_sum(m, &eps, &x, &u, &v)?;
        let residual = blue.gap(&red);
        worst = worst.max(residual);
        report.push_row(eps, blue, residual);
    }

    let sample = sample(m, cfg)?;
    let n = sample.len();
    let mut sampled = 0.0f64;
    for eps in scales_for(m) {
        for i in 0..n {
            let (a, b, c) = (&sample[i], &sample[(i + 1) % n], &sample[(i + 2) % n]);
            sampled = sampled.max(blue_red_residual(m, &eps, a, b, c)?);
        }
    }

    let entry = |r| {
        if m.self_distributive() {
            CheckEntry::asserted(r, cfg.tol)
        } else {
            CheckEntry::reported(r, cfg.tol)
        }
    };
    report.check("blue-equals-red", entry(worst));
    report.check("blue-equals-red-sample", entry(sampled));
    if !m.self_distributive() {
        report.notes.push(
            "dilations are not self-distributive here; the discrepancy is only measured".into(),
        );
    }
    let limit = estimate_limit(m, Expr::Sum, &x, &u, &v, &cfg.net, DEFAULT_CONVERGENCE_TOL)?;
    report.extrapolated = Some(limit.extrapolated_limit);
    report.rate = limit.empirical_rate;
    Ok(true)
}

fn groupoid(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let (x, u, v) = m.reference_triple();
    let g_ref = Arrow::new(u.clone(), x.clone());
    let h_ref = Arrow::new(v.clone(), x.clone());
    let sample = sample(m, cfg)?;
    let n = sample.len();
    let pairs: Vec<(Arrow, Arrow)> = (0..n)
        .map(|i| {
            let base = sample[i].clone();
            (
                Arrow::new(sample[(i + 1) % n].clone(), base.clone()),
                Arrow::new(sample[(i + 2) % n].clone(), base),
            )
        })
        .collect();

    let mut relation = 0.0f64;
    let mut homogeneity = 0.0f64;
    for eps in cfg.net.elements()? {
        let mut row = deformed_dif_residual(m, &eps, &g_ref, &h_ref)?;
        for (g, h) in &pairs {
            row = row.max(deformed_dif_residual(m, &eps, g, h)?);
            if m.metric_dilations() {
                let scaled = norm_arrow(m, &dilate_arrow(m, &eps, g)?)?;
                homogeneity =
                    homogeneity.max((scaled - m.contraction(&eps) * norm_arrow(m, g)?).abs());
            }
        }
        relation = relation.max(row);
        let d = deformed_dif(m, &eps, &g_ref, &h_ref)?;
        report.push_row(eps, d.target, row);
    }
    report.check("defining-relation", CheckEntry::asserted(relation, cfg.tol));
    if m.metric_dilations() {
        report.check(
            "norm-homogeneity",
            CheckEntry::asserted(homogeneity, cfg.tol),
        );
    }
    let limit = estimate_limit(
        m,
        Expr::DifTarget,
        &x,
        &u,
        &v,
        &cfg.net,
        DEFAULT_CONVERGENCE_TOL,
    )?;
    report.notes.push(convergence_note(&limit));
    report.extrapolated = Some(limit.extrapolated_limit);
    report.rate = limit.empirical_rate;
    Ok(true)
}

fn conical(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let (x, u, v) = m.reference_triple();
    let compact = CompactSample::around(m, &x, cfg.sample_radius, cfg.sample_size, cfg.seed)?;
    let c = conical_group_check(m, &x, &compact, &cfg.net, cfg.tol)?;
    for (name, law) in [
        ("neutrality", &c.neutrality),
        ("associativity", &c.associativity),
        ("inverse", &c.inverse),
        ("conicality", &c.conicality),
    ] {
        report.check(name, CheckEntry::asserted(law.residual, law.tol));
    }
    if c.inconclusive {
        report
            .notes
            .push("inconclusive: some limit did not converge at first order".into());
    }
    report.notes.push(c.caveat.to_string());

    let r = estimate_limit(m, Expr::Sum, &x, &u, &v, &cfg.net, DEFAULT_CONVERGENCE_TOL)?;
    fill_from_convergence(report, &r);
    Ok(!c.inconclusive)
}

fn differential_points(map: SmoothMap) -> (Point, Point, Point) {
    match map.dim() {
        2 => (
            Point::from([1.0, 1.0]),
            Point::from([1.0, 0.0]),
            Point::from([0.5, -1.0]),
        ),
        _ => (
            Point::from([0.3, -0.2, 0.5]),
            Point::from([1.0, 0.5, -1.0]),
            Point::from([-0.25, 1.0, 0.75]),
        ),
    }
}

fn differential(cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let map = cfg.map.unwrap_or(SmoothMap::SquareFirst);
    let (x, u, v) = differential_points(map);
    let d = differential_checks(map, &x, &u, &v, 2.0, &cfg.net, cfg.tol)?;
    fill_from_convergence(report, &d.convergence);
    report.check("jacobian", CheckEntry::asserted(d.jvp_residual, cfg.tol));
    report.check(
        "homogeneity",
        CheckEntry::asserted(d.homogeneity_residual, cfg.tol),
    );
    report.check(
        "additivity",
        CheckEntry::asserted(d.additivity_residual, cfg.tol),
    );
    report.notes.push(format!("map {}", map.name()));
    report.notes.push(convergence_note(&d.convergence));
    Ok(!d.convergence.inconclusive())
}

fn distance(m: &Model, cfg: &ExperimentConfig, report: &mut Report) -> Result<bool, CliError> {
    let (x, y, z) = m.reference_triple();
    let d = tangent_distance_check(m, &x, &y, &z, &cfg.net, cfg.tol)?;
    fill_from_convergence(report, &d.convergence);
    report.check(
        "converged",
        CheckEntry::asserted(d.convergence.max_successive_delta, cfg.tol),
    );
    report.notes.push(convergence_note(&d.convergence));
    Ok(!d.convergence.inconclusive())
}

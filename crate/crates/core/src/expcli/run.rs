use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Experiment, ExperimentConfig};
use super::output::{write_outputs, Artifact, Manifest, RunOutput};
use crate::chebpade::{bridge_class_l, bridge_prop1, default_probes};
use crate::equilibrium::{nikishin_zero_check, solve_scalar, solve_vector, EquilibriumProblem, ExternalField};
use crate::error::{Error, Result};
use crate::functions::{laurent_coeffs, FunctionSpec};
use crate::hermite::{hp_type1, HPTriple};
use crate::numkernel::{cabs, laurent_mul, Circle, Complex, LaurentTail, PrecisionCtx};
use crate::pade::{check_contour_orthogonality, multipoint_pade, pade_at_infinity, InterpolationTable};
use crate::roots::{find_roots, probe_circle, trimmed_hausdorff, ZeroSet};

/// Resolves `cfg`, runs the experiment and writes its outputs to the
/// configured directory.
pub fn run_experiment(cfg: ExperimentConfig) -> Result<Manifest> {
    let cfg = cfg.resolve()?;
    let out = cfg.out.clone().expect("resolved");
    let run = compute_experiment(&cfg)?;
    write_outputs(&run, &out)
}

/// Runs a resolved configuration without touching the file system.
pub fn compute_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let exp = cfg.experiment()?;
    let ctx = cfg.precision()?;
    let (artifacts, mut summary) = match exp {
        Experiment::FigHp | Experiment::FigChe => figures(cfg, exp, &ctx)?,
        Experiment::MarkovDemo => markov_demo(cfg, &ctx)?,
        Experiment::Prop1Check => prop1_check(cfg, &ctx)?,
        Experiment::ClasslCheck => classl_check(cfg, &ctx)?,
        Experiment::EquilibriumCheck => equilibrium_check(cfg, &ctx)?,
        Experiment::InterpDemo => interp_demo(cfg, &ctx)?,
    };
    summary["precision"] = serde_json::to_value(ctx.meta())?;
    Ok(RunOutput {
        experiment: exp.id().to_string(),
        config: serde_json::to_value(cfg)?,
        summary,
        artifacts,
    })
}

/// Process exit code for an error: 2 for invalid input, 3 for solver failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Step { source, .. } => exit_code(source),
        Error::NonConvergence(_) | Error::MassMismatch(..) | Error::EmptySet => 3,
        _ => 2,
    }
}

type Produced = (Vec<Artifact>, Value);

fn function(cfg: &ExperimentConfig) -> Result<&FunctionSpec> {
    cfg.function
        .as_ref()
        .ok_or_else(|| Error::Config("experiment needs a function".into()))
}

fn zeros_csv(zs: &ZeroSet, n: usize, object: &str, label: &str) -> Artifact {
    let mut zs = zs.clone();
    zs.n = n;
    Artifact::csv(object, n, zs.to_csv_string()).labelled(label)
}

struct Tuple {
    hp: HPTriple,
    zeros: [ZeroSet; 3],
}

fn tuple_zeros(f1: &LaurentTail, f2: &LaurentTail, n: usize, tag: &str, ctx: &PrecisionCtx) -> Result<Tuple> {
    let hp = hp_type1(f1, f2, n, ctx).map_err(|e| e.in_step(format!("{tag} Hermite–Padé n={n}")))?;
    let roots = |p, name: &str| {
        find_roots(p, name, ctx).map_err(|e| e.in_step(format!("{tag} zeros of {name} n={n}")))
    };
    let zeros = [roots(&hp.q0, "Q0")?, roots(&hp.q1, "Q1")?, roots(&hp.q2, "Q2")?];
    Ok(Tuple { hp, zeros })
}

/// Figure runs: Padé zeros of `f` and Hermite–Padé zeros of `[1, f, f^2]`
/// (`fig-hp`) or `[1, 1/sqrt(z^2 - 1), f]` (`fig-che`), with the trimmed
/// Hausdorff distance between the two tuples' `Q_{n,2}` zero sets.
fn figures(cfg: &ExperimentConfig, exp: Experiment, ctx: &PrecisionCtx) -> Result<Produced> {
    let f = function(cfg)?;
    let pade: Vec<(Vec<Artifact>, Value)> = cfg
        .pade_orders()
        .par_iter()
        .map(|&n| -> Result<_> {
            let tail = laurent_coeffs(f, 2 * n + 1, ctx).map_err(|e| e.in_step(format!("Laurent tail n={n}")))?;
            let pq = pade_at_infinity(&tail, n, ctx).map_err(|e| e.in_step(format!("Padé n={n}")))?;
            let p = find_roots(&pq.p, "Q0", ctx).map_err(|e| e.in_step(format!("Padé numerator zeros n={n}")))?;
            let q = find_roots(&pq.q, "Q1", ctx).map_err(|e| e.in_step(format!("Padé denominator zeros n={n}")))?;
            let arts = vec![
                zeros_csv(&p, n, "pade_Q0", "blue"),
                zeros_csv(&q, n, "pade_Q1", "red"),
            ];
            Ok((arts, json!({"n": n, "degenerate": pq.is_degenerate(), "nullity": pq.nullity})))
        })
        .collect::<Result<_>>()?;

    let hp: Vec<(Vec<Artifact>, Value)> = cfg
        .orders()
        .par_iter()
        .map(|&n| -> Result<_> {
            let order = 3 * n + 2;
            let (tf, ti) = rayon::join(
                || laurent_coeffs(f, order, ctx),
                || laurent_coeffs(&FunctionSpec::InvSqrt, order, ctx),
            );
            let tf = tf.map_err(|e| e.in_step(format!("Laurent tail of f n={n}")))?;
            let ti = ti.map_err(|e| e.in_step(format!("Laurent tail of 1/sqrt(z^2-1) n={n}")))?;
            let tf2 = laurent_mul(&tf, &tf);
            let (a, b) = rayon::join(
                || tuple_zeros(&tf, &tf2, n, "[1, f, f^2]", ctx),
                || tuple_zeros(&ti, &tf, n, "[1, 1/sqrt(z^2-1), f]", ctx),
            );
            let (a, b) = (a?, b?);
            let distance = trimmed_hausdorff(&a.zeros[2].to_f64(), &b.zeros[2].to_f64(), cfg.probes.trim)?;
            let own = if exp == Experiment::FigHp { &a } else { &b };
            let arts = ["blue", "red", "black"]
                .iter()
                .enumerate()
                .map(|(i, colour)| zeros_csv(&own.zeros[i], n, &format!("hp_Q{i}"), colour))
                .collect();
            let info = json!({
                "n": n,
                "degenerate_f_f2": a.hp.degenerate,
                "degenerate_invsqrt_f": b.hp.degenerate,
                "defect_order": own.hp.defect_order,
                "q2_trimmed_hausdorff": distance,
                "trim": cfg.probes.trim,
                "conjugate_pairing_error": own.zeros.iter().map(ZeroSet::conjugate_pairing_error).collect::<Vec<_>>(),
            });
            Ok((arts, info))
        })
        .collect::<Result<_>>()?;

    let (mut artifacts, pade_info): (Vec<Vec<Artifact>>, Vec<Value>) = pade.into_iter().unzip();
    let (hp_arts, hp_info): (Vec<Vec<Artifact>>, Vec<Value>) = hp.into_iter().unzip();
    artifacts.extend(hp_arts);
    Ok((
        artifacts.into_iter().flatten().collect(),
        json!({"function": f.label(), "pade": pade_info, "hermite_pade": hp_info}),
    ))
}

/// Poles of Padé approximants of a Markov function and the error at `z = 0`.
fn markov_demo(cfg: &ExperimentConfig, ctx: &PrecisionCtx) -> Result<Produced> {
    let f = function(cfg)?;
    let top = *cfg.orders().iter().max().expect("validated");
    let tail = laurent_coeffs(f, 2 * top + 1, ctx).map_err(|e| e.in_step("Laurent tail"))?;
    let value = f.bind(ctx)?.eval(&ctx.zero())?;
    let rows: Vec<(Artifact, Value, f64)> = cfg
        .orders()
        .par_iter()
        .map(|&n| -> Result<_> {
            let pq = pade_at_infinity(&tail.truncated(2 * n + 1), n, ctx).map_err(|e| e.in_step(format!("Padé n={n}")))?;
            let poles = find_roots(&pq.q, "Q", ctx).map_err(|e| e.in_step(format!("poles n={n}")))?;
            let err = cabs(&Complex::with_val(ctx.bits(), &value - pq.eval(&ctx.zero()))).to_f64();
            let max_imag = poles.to_f64().iter().map(|p| p.1.abs()).fold(0.0, f64::max);
            let info = json!({"n": n, "error_at_0": err, "max_pole_imag": max_imag, "degenerate": pq.is_degenerate()});
            Ok((zeros_csv(&poles, n, "poles", "poles"), info, err))
        })
        .collect::<Result<_>>()?;
    let mut table = String::from("n,error_at_0,ratio\n");
    let mut prev: Option<f64> = None;
    for (&n, (_, _, err)) in cfg.orders().iter().zip(&rows) {
        let ratio = prev.map(|p| format!("{:e}", err / p)).unwrap_or_default();
        table.push_str(&format!("{n},{err:e},{ratio}\n"));
        prev = Some(*err);
    }
    let (mut artifacts, infos): (Vec<Artifact>, Vec<Value>) = rows.into_iter().map(|(a, i, _)| (a, i)).unzip();
    artifacts.push(Artifact::csv("errors", top, table));
    Ok((artifacts, json!({"function": f.label(), "orders": infos})))
}

fn prop1_check(cfg: &ExperimentConfig, ctx: &PrecisionCtx) -> Result<Produced> {
    let p = &cfg.nikishin;
    let reports = cfg
        .orders()
        .par_iter()
        .map(|&n| bridge_prop1(&p.mu, &p.sigma, n, ctx).map_err(|e| e.in_step(format!("bridge n={n}"))))
        .collect::<Result<Vec<_>>>()?;
    let artifacts = reports
        .iter()
        .map(|r| Artifact::json("bridge", r.n, r))
        .collect::<Result<_>>()?;
    let summary = reports
        .iter()
        .map(|r| json!({"n": r.n, "deviation_log2": r.deviation_log2, "degenerate": r.degenerate_cheb || r.degenerate_hp}))
        .collect::<Vec<_>>();
    Ok((artifacts, json!({"reports": summary})))
}

fn classl_check(cfg: &ExperimentConfig, ctx: &PrecisionCtx) -> Result<Produced> {
    let p = &cfg.class_l;
    let probes = default_probes(ctx);
    let reports = cfg
        .orders()
        .par_iter()
        .map(|&n| {
            bridge_class_l(&p.a1, &p.a2, p.alpha, n, &probes, ctx).map_err(|e| e.in_step(format!("class (L) bridge n={n}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let artifacts = reports
        .iter()
        .map(|r| Artifact::json("classl", r.n, r))
        .collect::<Result<_>>()?;
    let summary = reports
        .iter()
        .map(|r| json!({"n": r.n, "literal_deviation": r.literal_deviation, "prop1_form_deviation": r.prop1_form_deviation}))
        .collect::<Vec<_>>();
    Ok((artifacts, json!({"reports": summary})))
}

fn equilibrium_check(cfg: &ExperimentConfig, ctx: &PrecisionCtx) -> Result<Produced> {
    let p = &cfg.nikishin;
    let cells = cfg.cells.expect("resolved");
    let (scalar, vector) = rayon::join(
        || solve_scalar(&p.mu, 1.0, ExternalField::Zero, cells),
        || solve_vector(&EquilibriumProblem::nikishin(p.mu.clone(), p.sigma.clone(), cells)),
    );
    let scalar = scalar.map_err(|e| e.in_step("scalar equilibrium"))?;
    let vector = vector.map_err(|e| e.in_step("vector equilibrium"))?;
    let probes = probe_circle(cfg.probes.radius, cfg.probes.count);
    let reports = cfg
        .orders()
        .par_iter()
        .map(|&n| nikishin_zero_check(&p.mu, &p.sigma, n, &vector, &probes, ctx).map_err(|e| e.in_step(format!("zero distribution n={n}"))))
        .collect::<Result<Vec<_>>>()?;

    let density = |sol: &crate::equilibrium::EquilibriumSolution| -> Result<String> {
        let mut buf = Vec::new();
        sol.write_density_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("ascii csv"))
    };
    let mut artifacts = vec![
        Artifact::csv("scalar_density", cells, density(&scalar)?),
        Artifact::csv("vector_density", cells, density(&vector)?),
    ];
    let mut table = String::from("n,q2_vs_lambda1,omega_vs_half_lambda0,omega_count,omega_expected\n");
    for r in &reports {
        artifacts.push(zeros_csv(&r.q2_zeros, r.n, "Q2", "black"));
        artifacts.push(zeros_csv(&r.omega_zeros, r.n, "omega", "omega"));
        table.push_str(&format!(
            "{},{:e},{:e},{},{}\n",
            r.n, r.q2_discrepancy, r.omega_discrepancy, r.omega_count, r.omega_expected
        ));
    }
    let top = *cfg.orders().iter().max().expect("validated");
    artifacts.push(Artifact::csv("discrepancy", top, table));
    Ok((
        artifacts,
        json!({
            "scalar": {"energy": scalar.energy, "kkt_residual": scalar.kkt_residual},
            "vector": {"energy": vector.energy, "kkt_residual": vector.kkt_residual,
                       "constants": vector.components.iter().map(|c| c.constant).collect::<Vec<_>>()},
            "probe_radius": cfg.probes.radius,
            "reports": reports,
        }),
    ))
}

/// Multipoint Padé with `2n` nodes on a circle and the contour
/// orthogonality integrals around the cut.
fn interp_demo(cfg: &ExperimentConfig, ctx: &PrecisionCtx) -> Result<Produced> {
    let spec = function(cfg)?;
    let f = spec.bind(ctx)?;
    let c = &cfg.nodes;
    let contour = Circle::from_f64(c.center, c.contour_radius, ctx);
    let rows = cfg
        .orders()
        .par_iter()
        .map(|&n| -> Result<Vec<Artifact>> {
            let table = InterpolationTable::circle(c.center, c.radius, 2 * n, 0.0, ctx)?;
            let pq = multipoint_pade(|z| f.eval(z), &table, None, n, ctx)
                .map_err(|e| e.in_step(format!("multipoint Padé n={n}")))?;
            let ort = check_contour_orthogonality(&pq.q, |z| f.eval(z), &table, &contour, ctx)
                .map_err(|e| e.in_step(format!("contour orthogonality n={n}")))?;
            let poles = find_roots(&pq.q, "Q", ctx).map_err(|e| e.in_step(format!("poles n={n}")))?;
            let mut csv = String::from("k,integral,scale,relative\n");
            for k in 0..ort.integrals.len() {
                csv.push_str(&format!(
                    "{k},{:e},{:e},{:e}\n",
                    ort.integrals[k].to_f64(),
                    ort.scales[k].to_f64(),
                    ort.relative(k)
                ));
            }
            let mut record = pq.record("multipoint_pade", ctx);
            record
                .metadata
                .insert("orthogonality_max_relative".into(), format!("{:e}", ort.max_relative_below(n)));
            Ok(vec![
                zeros_csv(&poles, n, "poles", "poles"),
                Artifact::csv("orthogonality", n, csv),
                Artifact::json("pade", n, &record)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        rows.into_iter().flatten().collect(),
        json!({"function": spec.label(), "nodes": c}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(exit_code(&Error::NonConvergence("x".into()).in_step("s")), 3);
        assert_eq!(exit_code(&Error::Domain("x".into()).in_step("s")), 2);
    }

    #[test]
    fn prop1_small_run_is_deterministic() {
        let mut cfg = ExperimentConfig::new(Experiment::Prop1Check);
        cfg.n = Some(vec![3]);
        let cfg = cfg.resolve().unwrap();
        let a = compute_experiment(&cfg).unwrap();
        let b = compute_experiment(&cfg).unwrap();
        assert_eq!(a.artifacts.len(), 1);
        assert_eq!(a.artifacts[0].file_name("prop1-check"), "prop1-check_bridge_3.json");
        assert_eq!(a.artifacts[0].bytes, b.artifacts[0].bytes);
        assert_eq!(a.config["bits"], 512);
    }
}

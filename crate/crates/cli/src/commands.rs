use equipart_core::codes::SearchOptions;
use equipart_core::feasibility::lloyd_check_quotients;
use equipart_core::{
    godsil_condition, higman_condition, io, is_equitable, search_completely_regular, trace_profile,
    verify_theorem2, AssociationScheme, CodeRecord, Error, IntMatrix, Mode, SpectralData, Value, Verdict,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{parse_sizes, AutomorphismArgs, CrcArgs, PartitionArgs, SchemeInput};
use crate::report::{
    matrix_lines, tuple, Check, ErrorInfo, RunReport, EXIT_NEGATIVE, EXIT_POSITIVE,
};
use crate::{describe_scheme, error_kind, load_scheme, read_input, to_json, Context, Failure, Loaded};

type Exit = Result<i32, Failure>;

const DUALITY_BOUND: f64 = 1e-8;

fn spectral_data(loaded: &Loaded, ctx: &Context) -> Result<SpectralData, Failure> {
    Ok(SpectralData::compute(&loaded.scheme, ctx.tolerances)?)
}

fn tolerance_of(spec: &SpectralData) -> Option<f64> {
    (spec.mode() == Mode::Float).then_some(spec.tolerances.integrality)
}

fn strings(values: &[Value]) -> Vec<String> {
    values.iter().map(Value::to_string).collect()
}

fn verdict_names(v: &[Verdict]) -> Vec<&'static str> {
    v.iter().map(|x| x.name()).collect()
}

fn exact_check(name: &str, ok: bool, details: serde_json::Value) -> Check {
    Check {
        name: name.into(),
        verdict: Verdict::from_bool(ok).name().into(),
        mode: "exact".into(),
        tolerance: None,
        details,
    }
}

fn matrices_json(ms: &[IntMatrix]) -> serde_json::Value {
    to_json(&ms.iter().map(IntMatrix::to_rows).collect::<Vec<_>>())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn scheme_verify(report: &mut RunReport, args: &SchemeInput, ctx: &Context) -> Exit {
    let loaded = match load_scheme(report, args, ctx) {
        Ok(l) => l,
        Err(Failure::Core(e @ (Error::Axiom(_) | Error::NotDistanceRegular { .. } | Error::Disconnected { .. }))) => {
            let axiom = match &e {
                Error::Axiom(v) => Some(v.axiom()),
                _ => None,
            };
            match axiom {
                Some(n) => report.line(format!("axioms: fail (axiom {n}: {e})")),
                None => report.line(format!("scheme: fail ({e})")),
            }
            report.check(exact_check("axioms", false, json!({ "axiom": axiom, "witness": e.to_string() })));
            report.error = Some(ErrorInfo {
                kind: error_kind(&e).into(),
                message: e.to_string(),
            });
            return Ok(EXIT_NEGATIVE);
        }
        Err(f) => return Err(f),
    };
    let s = &loaded.scheme;
    let spec = SpectralData::compute(s, ctx.tolerances);
    describe_scheme(report, &loaded, spec.as_ref().ok(), ctx);
    if let Err(e) = &spec {
        report.warnings.push(format!("spectra unavailable: {e}"));
    }
    let d = s.classes();
    let p = s.intersection_numbers();
    let table: Vec<Vec<Vec<u64>>> = (0..=d)
        .map(|i| (0..=d).map(|j| (0..=d).map(|k| p.get(i, j, k)).collect()).collect())
        .collect();
    report.line("axioms 1-4: pass");
    report.line(format!("intersection numbers: available (p_ij^k, 0 <= i, j, k <= {d})"));
    for (i, rows) in table.iter().enumerate().skip(1) {
        report.lines.extend(matrix_lines(&format!("L_{i} [j][k] = p_{i}j^k"), rows));
    }
    report.check(exact_check(
        "axioms",
        true,
        json!({ "valencies": s.valencies(), "intersection_numbers": table }),
    ));
    Ok(EXIT_POSITIVE)
}

pub fn spectra(report: &mut RunReport, args: &SchemeInput, ctx: &Context) -> Exit {
    let loaded = load_scheme(report, args, ctx)?;
    let spec = spectral_data(&loaded, ctx)?;
    describe_scheme(report, &loaded, Some(&spec), ctx);
    let duality = spec.check_duality(&loaded.scheme)?;
    let ok = duality.passes(DUALITY_BOUND);
    report.check(Check {
        name: "duality".into(),
        verdict: Verdict::from_bool(ok).name().into(),
        mode: spec.mode().name().into(),
        tolerance: (spec.mode() == Mode::Float).then_some(DUALITY_BOUND),
        details: json!({
            "pq": duality.pq,
            "q_v_equals_p_f": duality.pq_relation,
            "idempotent_sum": duality.idempotent_sum,
            "idempotent_products": duality.idempotent_products,
            "reconstruction": duality.reconstruction,
        }),
    });
    if !ok {
        return Err(Error::Inconsistent(format!(
            "duality identities fail (max error {:e})",
            duality.max_error()
        ))
        .into());
    }
    let p = spec.p_strings();
    let q = spec.q_strings();
    report.lines.extend(matrix_lines("P", &p));
    report.lines.extend(matrix_lines("Q", &q));
    report.line(format!("f = {}", tuple(spec.multiplicities())));
    report.line(match spec.mode() {
        Mode::Exact => "duality (PQ = vI, Q_ij v_i = P_ji f_j, idempotents): exact".to_string(),
        Mode::Float => format!("duality (PQ = vI, Q_ij v_i = P_ji f_j, idempotents): max error {:e}", duality.max_error()),
    });
    report.check(Check {
        name: "eigenmatrices".into(),
        verdict: Verdict::Pass.name().into(),
        mode: spec.mode().name().into(),
        tolerance: None,
        details: json!({ "P": p, "Q": q, "multiplicities": spec.multiplicities() }),
    });
    Ok(EXIT_POSITIVE)
}

pub fn partition_check(report: &mut RunReport, args: &PartitionArgs, ctx: &Context) -> Exit {
    let loaded = load_scheme(report, &args.scheme, ctx)?;
    let s = &loaded.scheme;
    let text = read_input(report, "partition", &args.partition)?;
    let pi = io::parse_partition(s, &text)?;
    let spec = spectral_data(&loaded, ctx)?;
    describe_scheme(report, &loaded, Some(&spec), ctx);

    let cells: Vec<String> = pi
        .cells()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("C_{} = {{{}}}", k + 1, c.iter().map(|&x| s.label(x)).collect::<Vec<_>>().join(", ")))
        .collect();
    report.line(format!("cells: {}", cells.join(" ")));

    let eq = is_equitable(s, &pi)?;
    let descriptions: Vec<String> = eq.violations.iter().map(|v| v.describe(s)).collect();
    report.line(format!("equitable: {}", yes_no(eq.equitable)));
    if let Some(w) = eq.witness() {
        report.line(format!("witness: {}", w.describe(s)));
        report.line(format!("violations ({}):", descriptions.len()));
        for d in &descriptions {
            report.line(format!("  {d}"));
        }
    }
    if let Some(q) = &eq.quotients {
        for (i, n) in q.iter().enumerate() {
            report.lines.extend(matrix_lines(&format!("N_{i}"), &n.to_rows()));
        }
    }
    report.check(exact_check(
        "equitable",
        eq.equitable,
        json!({
            "cells": pi.cells().iter().map(|c| c.iter().map(|&x| s.label(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "violations": descriptions,
            "quotients": eq.quotients.as_deref().map(matrices_json),
        }),
    ));

    // Necessary conditions failing on an equitable partition means a bug.
    let mut inconsistent = false;
    if args.feasibility {
        let traces = trace_profile(s, &pi)?;
        let g = godsil_condition(s, &spec, &pi)?;
        report.line(format!("trace profile <F,A_i> = {}", tuple(&traces)));
        report.line(format!(
            "<F,E_j> = {} [{}]",
            tuple(&strings(&g.values)),
            spec.mode().name()
        ));
        report.line(format!(
            "projector integrality: {} {}",
            g.overall.name(),
            tuple(&verdict_names(&g.verdicts))
        ));
        report.check(Check {
            name: "projector-integrality".into(),
            verdict: g.overall.name().into(),
            mode: spec.mode().name().into(),
            tolerance: g.tolerance,
            details: json!({
                "trace_profile": traces.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "values": strings(&g.values),
                "direct": strings(&g.direct),
                "verdicts": verdict_names(&g.verdicts),
            }),
        });
        inconsistent |= eq.equitable && g.overall == Verdict::Fail;
        match &eq.quotients {
            Some(q) => {
                let l = lloyd_check_quotients(s, q)?;
                report.line(format!(
                    "lloyd: {} (char_poly(N_i) | char_poly(A_i): {})",
                    Verdict::from_bool(l.passes).name(),
                    tuple(&l.divides.iter().map(|&b| yes_no(b)).collect::<Vec<_>>())
                ));
                report.check(exact_check(
                    "lloyd",
                    l.passes,
                    json!({
                        "divides": l.divides,
                        "quotient_char_polys": l.quotient_polys.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    }),
                ));
                inconsistent |= !l.passes;
            }
            None => report.line("lloyd: not applicable (partition is not equitable)"),
        }
    }
    if args.theorem2 {
        if eq.equitable {
            let t = verify_theorem2(s, &spec, &pi)?;
            report.line(format!("<F,E_j> = {}", tuple(&strings(&t.godsil_values))));
            report.line(format!("m_j = dim(W_j H) = {}", tuple(&t.subduced)));
            report.line(format!(
                "equality: {}; quotient spectra match: {}",
                yes_no(t.equality),
                yes_no(t.spectra_match.iter().all(|&b| b))
            ));
            report.check(Check {
                name: "theorem2".into(),
                verdict: Verdict::from_bool(t.holds).name().into(),
                mode: spec.mode().name().into(),
                tolerance: tolerance_of(&spec),
                details: json!({
                    "values": strings(&t.godsil_values),
                    "subduced": t.subduced,
                    "spectra_match": t.spectra_match,
                }),
            });
            inconsistent |= !t.holds;
        } else {
            report.line("theorem2: not applicable (partition is not equitable)");
        }
    }
    if inconsistent {
        return Err(Error::Inconsistent("a necessary condition fails on an equitable partition".into()).into());
    }
    Ok(if eq.equitable { EXIT_POSITIVE } else { EXIT_NEGATIVE })
}

pub fn automorphism(report: &mut RunReport, args: &AutomorphismArgs, ctx: &Context) -> Exit {
    let loaded = load_scheme(report, &args.scheme, ctx)?;
    let s = &loaded.scheme;
    let text = read_input(report, "permutation", &args.permutation)?;
    let perm = io::parse_permutation(s, &text)?;
    let spec = spectral_data(&loaded, ctx)?;
    describe_scheme(report, &loaded, Some(&spec), ctx);
    let h = higman_condition(s, &spec, &perm, !args.no_precheck)?;
    report.line(format!("automorphism: {}", yes_no(h.is_automorphism)));
    report.line(format!("alpha = {}", tuple(&h.alpha)));
    report.check(exact_check("commutation", h.is_automorphism, json!({ "alpha": h.alpha })));
    if !h.evaluated {
        report.line("not an automorphism");
        return Ok(EXIT_NEGATIVE);
    }
    report.line(format!("<P,E_j> = {} [{}]", tuple(&strings(&h.values)), spec.mode().name()));
    report.line(format!("higman: {} {}", h.overall.name(), tuple(&verdict_names(&h.verdicts))));
    if let Some(c) = &h.caveat {
        report.warnings.push(c.clone());
    }
    report.check(Check {
        name: "higman".into(),
        verdict: h.overall.name().into(),
        mode: spec.mode().name().into(),
        tolerance: tolerance_of(&spec),
        details: json!({
            "values": strings(&h.values),
            "direct": strings(&h.direct),
            "verdicts": verdict_names(&h.verdicts),
            "caveat": h.caveat,
        }),
    });
    match (h.is_automorphism, h.overall) {
        (true, Verdict::Fail) => {
            Err(Error::Inconsistent("Higman's condition fails for an automorphism".into()).into())
        }
        (false, _) => Ok(EXIT_NEGATIVE),
        (true, _) => Ok(EXIT_POSITIVE),
    }
}

#[derive(Serialize)]
struct PrefilterJson {
    projector_integrality: &'static str,
    lloyd: Option<bool>,
}

#[derive(Serialize)]
struct RecordJson {
    vertices: Vec<String>,
    relation: usize,
    covering_radius: usize,
    cell_sizes: Vec<usize>,
    completely_regular: bool,
    quotients: Option<serde_json::Value>,
    prefilter: Option<PrefilterJson>,
}

fn record_json(s: &AssociationScheme, r: &CodeRecord) -> RecordJson {
    RecordJson {
        vertices: r.code.iter().map(|&x| s.label(x).to_string()).collect(),
        relation: r.relation,
        covering_radius: r.covering_radius,
        cell_sizes: r.cell_sizes.clone(),
        completely_regular: r.completely_regular,
        quotients: r.quotients.as_deref().map(matrices_json),
        prefilter: r.prefilter.as_ref().map(|p| PrefilterJson {
            projector_integrality: p.godsil.name(),
            lloyd: p.lloyd,
        }),
    }
}

pub fn crc_search(report: &mut RunReport, args: &CrcArgs, ctx: &Context) -> Exit {
    let (lo, hi) = parse_sizes(&args.sizes)
        .ok_or_else(|| Failure::Input(format!("--sizes expects \"a..b\", got {:?}", args.sizes)))?;
    let loaded = load_scheme(report, &args.scheme, ctx)?;
    let s = &loaded.scheme;
    describe_scheme(report, &loaded, None, ctx);
    let options = SearchOptions {
        min_size: lo,
        max_size: hi,
        budget: args.budget,
        dedup_signature: args.dedup,
        prefilter: args.prefilter,
        parallel: !args.serial,
        tolerances: ctx.tolerances,
    };
    let out = search_completely_regular(s, args.relation, &options)?;
    let found: Vec<&CodeRecord> = out.completely_regular().collect();
    report.line(format!("relation: {}; sizes {lo}..{hi}; budget {}", args.relation, args.budget));
    report.line(format!("candidates examined: {}", out.candidates_examined));
    if args.dedup {
        report.line(format!("skipped by signature: {}", out.skipped_duplicates));
    }
    report.line(format!("completely regular: {}", found.len()));
    report.line(format!("exhaustive: {}", yes_no(out.exhaustive)));
    for r in &found {
        let labels: Vec<&str> = r.code.iter().map(|&x| s.label(x)).collect();
        report.line(format!(
            "  {{{}}} rho={} cells={}",
            labels.join(", "),
            r.covering_radius,
            tuple(&r.cell_sizes)
        ));
    }
    if let Some(path) = &args.out {
        let records: Vec<RecordJson> = out.records.iter().map(|r| record_json(s, r)).collect();
        let body = json!({
            "relation": args.relation,
            "sizes": [lo, hi],
            "budget": args.budget,
            "exhaustive": out.exhaustive,
            "candidates_examined": out.candidates_examined,
            "records": records,
        });
        let mut text = serde_json::to_string_pretty(&body).expect("records serialize");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        report.line(format!("records written: {}", path.display()));
    }
    report.check(exact_check(
        "completely-regular-search",
        true,
        json!({
            "candidates_examined": out.candidates_examined,
            "exhaustive": out.exhaustive,
            "skipped_duplicates": out.skipped_duplicates,
            "completely_regular": found.iter().map(|r| record_json(s, r)).collect::<Vec<_>>(),
        }),
    ));
    Ok(EXIT_POSITIVE)
}

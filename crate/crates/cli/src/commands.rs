use std::fmt::Write as _;
use std::path::Path;

use ctp_core::checks::{run_all, run_suite, CheckReport};
use ctp_core::enumerate::{cyclic_transversals, vertices};
use ctp_core::extform::{build_flownet, export_lp};
use ctp_core::ineq::{all_los, los, separate_los, separate_los_fixed_eta, LinIneq, LosSpec};
use ctp_core::rational::{format_rational, parse_rational};
use ctp_core::reduce::{
    bsp_config, cut_config, from_sat, matching_config, packing_config, packing_config_small, perfect_matching_config,
    stable_set_config, Graph, ReductionResult, SatFormula, SetFamily,
};
use ctp_core::relax::{ct_rank, rank_r_membership};
use ctp_core::verify::{
    affine_dim, ctp_necessary_condition, is_facet, is_valid, polytope_equal, HPolytope, NecessaryOutcome, Side, VPolytope,
};
use ctp_core::{BitMatrix, BitVec, BlockConfiguration, CtpError, RationalPoint, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::settings::CliConfig;
use crate::{Command, Output, VerifyCommand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Problem {
    Sat,
    Stab,
    Pack,
    Match,
    Pmatch,
    Bsp,
    Cut,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CtpError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CtpError::Io(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<BlockConfiguration> {
    BlockConfiguration::from_json(&read(path)?)
}

fn load_ineq(path: &Path) -> Result<LinIneq> {
    LinIneq::from_json(&read(path)?)
}

fn ineq_json(q: &LinIneq) -> Value {
    serde_json::from_str(&q.to_json()).expect("valid json")
}

fn point_json(b: &BlockConfiguration, x: &RationalPoint) -> Result<Value> {
    Ok(serde_json::from_str(&b.point_to_json(x)?).expect("valid json"))
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn plain_point(x: &RationalPoint) -> Value {
    Value::Array(x.iter().map(|v| Value::String(format_rational(v))).collect())
}

pub(crate) fn dispatch(cmd: Command, cfg: &CliConfig) -> Result<Output> {
    match cmd {
        Command::Enum { config, count_only } => enumerate(&config, count_only, cfg),
        Command::Los {
            config,
            eta,
            list: _,
            separate,
            restrict,
        } => los_cmd(&config, eta.as_deref(), separate.as_deref(), restrict, cfg),
        Command::Extform {
            config,
            out,
            no_prune,
            objective,
        } => extform(&config, &out, !no_prune, objective.as_deref(), cfg),
        Command::Relax { config, r, point } => relax(&config, r, &point, cfg),
        Command::Ctrank { config, ineq } => ctrank(&config, &ineq, cfg),
        Command::Reduce {
            problem,
            input,
            out,
            k,
            no_rhs_block,
            small,
        } => reduce(problem, &input, &out, k, !no_rhs_block, small),
        Command::Verify { check } => verify(check, cfg),
        Command::CheckPaper { suite } => check_paper(&suite, cfg),
    }
}

fn enumerate(path: &Path, count_only: bool, cfg: &CliConfig) -> Result<Output> {
    let b = load_config(path)?;
    let ct = cyclic_transversals(&b, &cfg.limits)?;
    if count_only {
        return Ok(Output::ok(ct.len().to_string(), json!({ "count": ct.len() })));
    }
    let rows: Vec<Value> = ct.iter().map(|xi| json!(xi.to_bitstrings())).collect();
    let text = rows.iter().map(compact).collect::<Vec<_>>().join("\n");
    Ok(Output::ok(text, Value::Array(rows)))
}

fn parse_eta(b: &BlockConfiguration, s: &str) -> Result<BitVec> {
    let eta: BitVec = s.parse()?;
    if eta.width() != b.d() {
        return Err(CtpError::WidthMismatch {
            expected: b.d(),
            found: eta.width(),
        });
    }
    if eta.is_zero() {
        return Err(CtpError::InvalidLos("eta must be nonzero".into()));
    }
    Ok(eta)
}

fn spec_json(spec: &LosSpec) -> Value {
    json!({ "eta": spec.eta.to_string(), "odd_set": spec.blocks_one_based() })
}

fn los_cmd(path: &Path, eta: Option<&str>, separate: Option<&Path>, restrict: bool, cfg: &CliConfig) -> Result<Output> {
    let b = load_config(path)?;
    let eta = eta.map(|s| parse_eta(&b, s)).transpose()?;
    if let Some(p) = separate {
        let x = b.point_from_json(&read(p)?)?;
        let found = match &eta {
            Some(e) => separate_los_fixed_eta(&b, e, &x)?,
            None => separate_los(&b, &x, restrict, &cfg.limits)?.map(|(s, _)| s),
        };
        return match found {
            None => Ok(Output::ok("no violated LOS inequality", json!({ "violated": false }))),
            Some(spec) => {
                let q = los(&b, &spec)?;
                let lhs = q.evaluate(&b, &x)?.lhs;
                let text = format!(
                    "violated: eta={} I={:?} lhs={}\n{}",
                    spec.eta,
                    spec.blocks_one_based(),
                    format_rational(&lhs),
                    q.to_json()
                );
                Ok(Output::failed(
                    text,
                    json!({ "violated": true, "los": spec_json(&spec), "lhs": format_rational(&lhs), "inequality": ineq_json(&q) }),
                ))
            }
        };
    }
    let list: Vec<(LosSpec, LinIneq)> = match &eta {
        Some(e) => ctp_core::ineq::odd_subsets(b.len())
            .map(|s| {
                let spec = LosSpec::new(*e, s)?;
                let q = los(&b, &spec)?;
                Ok((spec, q))
            })
            .collect::<Result<_>>()?,
        None => all_los(&b, restrict, &cfg.limits)?,
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for (spec, q) in &list {
        let v = ineq_json(q);
        let _ = writeln!(text, "eta={} I={:?} {}", spec.eta, spec.blocks_one_based(), compact(&v));
        rows.push(json!({ "los": spec_json(spec), "inequality": v }));
    }
    Ok(Output::ok(text, Value::Array(rows)))
}

fn extform(path: &Path, out: &Path, prune: bool, objective: Option<&Path>, cfg: &CliConfig) -> Result<Output> {
    let b = load_config(path)?;
    let obj = objective.map(load_ineq).transpose()?;
    if let Some(q) = &obj {
        q.check_indices(&b)?;
    }
    let net = build_flownet(&b, prune, &cfg.limits)?;
    export_lp(&net, obj.as_ref().map(|q| &q.coeffs), out)?;
    let (nodes, arcs) = (net.nodes().len(), net.arcs().len());
    Ok(Output::ok(
        format!("wrote {}: {nodes} nodes, {arcs} arcs", out.display()),
        json!({ "out": out.display().to_string(), "nodes": nodes, "arcs": arcs, "pruned": prune }),
    ))
}

fn matrix_json(m: &BitMatrix) -> Value {
    json!(m.rows().map(|r| r.to_string()).collect::<Vec<_>>())
}

fn relax(path: &Path, r: usize, point: &Path, cfg: &CliConfig) -> Result<Output> {
    let b = load_config(path)?;
    let x = b.point_from_json(&read(point)?)?;
    let rep = rank_r_membership(&b, r, &x, &cfg.limits)?;
    match rep.violating {
        None => Ok(Output::ok(format!("member of R^{r}"), json!({ "member": true, "r": r }))),
        Some(phi) => Ok(Output::failed(
            format!("not a member of R^{r}; violating map:\n{phi}"),
            json!({ "member": false, "r": r, "phi": matrix_json(&phi) }),
        )),
    }
}

fn ctrank(path: &Path, ineq: &Path, cfg: &CliConfig) -> Result<Output> {
    let b = load_config(path)?;
    let q = load_ineq(ineq)?;
    let res = match ct_rank(&b, &q, &cfg.limits) {
        Err(CtpError::InvalidInequality(msg)) => {
            return Ok(Output::failed(
                format!("inequality is not valid for the CTP: {msg}"),
                json!({ "valid": false, "reason": msg }),
            ))
        }
        other => other?,
    };
    let mut text = format!("CT-rank {}", res.rank);
    let mut out = json!({ "valid": true, "rank": res.rank });
    if let (Some(p), Some(lhs)) = (&res.certificate, &res.certificate_lhs) {
        let _ = write!(text, "\ncertificate in R^{} with lhs {}:\n{}", res.rank - 1, format_rational(lhs), b.point_to_json(p)?);
        out["certificate"] = point_json(&b, p)?;
        out["certificate_lhs"] = json!(format_rational(lhs));
    }
    Ok(Output::ok(text, out))
}

#[derive(Deserialize)]
struct BspFile {
    matrix: Vec<String>,
    rhs: Option<String>,
}

fn read_sat(path: &Path) -> Result<SatFormula> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        SatFormula::from_json(&text)
    } else {
        SatFormula::from_dimacs(&text)
    }
}

fn reduce(problem: Problem, input: &Path, out: &Path, k: Option<usize>, rhs_block: bool, small: bool) -> Result<Output> {
    let res: ReductionResult = match problem {
        Problem::Sat => {
            let f = read_sat(input)?;
            let k = k.unwrap_or_else(|| f.max_clause_len().max(1));
            from_sat(&f, k)?
        }
        Problem::Stab => stable_set_config(&Graph::from_json(&read(input)?)?)?,
        Problem::Pack => {
            let fam = SetFamily::from_json(&read(input)?)?;
            if small {
                packing_config_small(&fam)?
            } else {
                packing_config(&fam)?
            }
        }
        Problem::Match => matching_config(&Graph::from_json(&read(input)?)?)?,
        Problem::Pmatch => perfect_matching_config(&Graph::from_json(&read(input)?)?)?,
        Problem::Cut => cut_config(&Graph::from_json(&read(input)?)?, rhs_block)?,
        Problem::Bsp => {
            let file: BspFile = serde_json::from_str(&read(input)?)?;
            let cols = file.matrix.first().map_or(0, String::len);
            let rows: Vec<&str> = file.matrix.iter().map(String::as_str).collect();
            let m = BitMatrix::from_strs(cols, &rows)?;
            let rhs = file.rhs.as_deref().map(str::parse::<BitVec>).transpose()?;
            bsp_config(&m, rhs.as_ref(), rhs_block)?
        }
    };
    let c = &res.config;
    write(out, &c.to_json())?;
    let projection: Vec<Value> = res
        .projection
        .iter()
        .map(|p| json!({ "block": p.block + 1, "elem": p.elem.to_string() }))
        .collect();
    Ok(Output::ok(
        format!("wrote {}: length {}, size {}, rank {}", out.display(), c.len(), c.size(), c.rank()),
        json!({ "out": out.display().to_string(), "length": c.len(), "size": c.size(), "rank": c.rank(), "projection": projection }),
    ))
}

fn config_vertices(path: &Path, cfg: &CliConfig) -> Result<(BlockConfiguration, VPolytope)> {
    let b = load_config(path)?;
    let v = VPolytope::new(vertices(&b, &cfg.limits)?);
    Ok((b, v))
}

/// Vertices as a JSON array of arrays of integers or `"p/q"` strings.
fn read_vertices(path: &Path) -> Result<VPolytope> {
    let raw: Vec<Vec<Value>> = serde_json::from_str(&read(path)?)?;
    let mut pts = Vec::with_capacity(raw.len());
    for row in raw {
        let coords = row
            .iter()
            .map(|v| match v {
                Value::String(s) => parse_rational(s),
                Value::Number(n) if n.is_i64() => Ok(ctp_core::rational::int(n.as_i64().unwrap_or(0))),
                other => Err(CtpError::Parse(format!("bad coordinate {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        pts.push(RationalPoint(coords));
    }
    if let Some(first) = pts.first() {
        if pts.iter().any(|p| p.len() != first.len()) {
            return Err(CtpError::DimensionMismatch("vertices have different lengths".into()));
        }
    }
    Ok(VPolytope::new(pts))
}

fn verify(check: VerifyCommand, cfg: &CliConfig) -> Result<Output> {
    match check {
        VerifyCommand::Dim { config } => {
            let (b, v) = config_vertices(&config, cfg)?;
            let d = affine_dim(&v.vertices);
            Ok(Output::ok(
                format!("dimension {d} ({} vertices, {} coordinates)", v.len(), b.size()),
                json!({ "dim": d, "vertices": v.len(), "coordinates": b.size() }),
            ))
        }
        VerifyCommand::Valid { config, ineq } => {
            let (b, v) = config_vertices(&config, cfg)?;
            let q = load_ineq(&ineq)?;
            let rep = is_valid(&q.coeffs.dense(&b)?, &q.rhs, &v);
            let min = rep.min_lhs.as_ref().map(format_rational);
            if rep.valid {
                return Ok(Output::ok(
                    format!("valid; minimum lhs {}", min.as_deref().unwrap_or("-")),
                    json!({ "valid": true, "min_lhs": min }),
                ));
            }
            let w = &v.vertices[rep.worst.unwrap_or(0)];
            Ok(Output::failed(
                format!("violated at a vertex with lhs {}:\n{}", min.as_deref().unwrap_or("-"), b.point_to_json(w)?),
                json!({ "valid": false, "min_lhs": min, "vertex": point_json(&b, w)? }),
            ))
        }
        VerifyCommand::Facet { config, ineq } => {
            let (b, v) = config_vertices(&config, cfg)?;
            let q = load_ineq(&ineq)?;
            match is_facet(&q.coeffs.dense(&b)?, &q.rhs, &v) {
                Ok(true) => Ok(Output::ok("facet", json!({ "valid": true, "facet": true }))),
                Ok(false) => Ok(Output::failed(
                    "valid but not facet-defining",
                    json!({ "valid": true, "facet": false }),
                )),
                Err(CtpError::InvalidInequality(msg)) => Ok(Output::failed(
                    format!("not valid: {msg}"),
                    json!({ "valid": false, "facet": false }),
                )),
                Err(e) => Err(e),
            }
        }
        VerifyCommand::Equal { config, extra } => {
            let (b, v) = config_vertices(&config, cfg)?;
            let mut h = HPolytope::transversal_polytope(&b);
            for (_, q) in all_los(&b, false, &cfg.limits)? {
                h.add_lin_ineq(&b, &q)?;
            }
            for p in &extra {
                h.add_lin_ineq(&b, &load_ineq(p)?)?;
            }
            let rep = polytope_equal(&v, &h, &cfg.limits)?;
            match (&rep.witness, rep.equal) {
                (None, _) | (_, true) => Ok(Output::ok(
                    format!("equal: {} vertices", v.len()),
                    json!({ "equal": true, "vertices": v.len() }),
                )),
                (Some((side, p)), false) => {
                    let what = match side {
                        Side::HOnly => "vertex of the inequality system that is not a CTP vertex",
                        Side::VOnly => "CTP vertex that is not a vertex of the inequality system",
                    };
                    Ok(Output::failed(
                        format!(
                            "not equal ({} vs {} vertices); {what}:\n{}",
                            rep.h_vertices,
                            v.len(),
                            b.point_to_json(p)?
                        ),
                        json!({ "equal": false, "h_vertices": rep.h_vertices, "vertices": v.len(),
                                "side": format!("{side:?}"), "witness": point_json(&b, p)? }),
                    ))
                }
            }
        }
        VerifyCommand::Necessary { config, vertices } => {
            let v = match (config, vertices) {
                (_, Some(p)) => read_vertices(&p)?,
                (Some(c), None) => config_vertices(&c, cfg)?.1,
                (None, None) => return Err(CtpError::InvalidInput("need a configuration or --vertices".into())),
            };
            match ctp_necessary_condition(&v, &cfg.limits)? {
                NecessaryOutcome::PassVacuous => Ok(Output::ok(
                    format!("pass: {} vertices is a power of two", v.len()),
                    json!({ "passed": true, "vacuous": true, "vertices": v.len() }),
                )),
                NecessaryOutcome::Pass => Ok(Output::ok(
                    format!("pass: every vertex pair lies in a proper face ({} vertices)", v.len()),
                    json!({ "passed": true, "vacuous": false, "vertices": v.len() }),
                )),
                NecessaryOutcome::Fail(a, c) => Ok(Output::failed(
                    format!(
                        "fail: the midpoint of vertices {a} and {c} is interior\n{}\n{}",
                        compact(&plain_point(&v.vertices[a])),
                        compact(&plain_point(&v.vertices[c]))
                    ),
                    json!({ "passed": false, "pair": [a, c],
                            "vertices": [plain_point(&v.vertices[a]), plain_point(&v.vertices[c])] }),
                )),
            }
        }
    }
}

fn check_paper(suite: &str, cfg: &CliConfig) -> Result<Output> {
    let reports: Vec<CheckReport> = if suite == "all" {
        run_all(cfg.seed, &cfg.limits)
    } else {
        vec![run_suite(suite, cfg.seed, &cfg.limits)?]
    };
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{}", r.summary_line());
        for line in &r.details {
            let _ = writeln!(text, "    {line}");
        }
    }
    let all_ok = reports.iter().all(|r| r.passed && r.within_budget());
    let json = json!({ "seed": cfg.seed, "passed": all_ok, "reports": reports });
    Ok(if all_ok { Output::ok(text, json) } else { Output::failed(text, json) })
}

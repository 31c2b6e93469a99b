//! Subcommand implementations. Every command computes a JSON payload (through
//! the cache when the work is nontrivial) and renders its text output from
//! that payload, so cold and warm runs print the same bytes.

use std::path::Path;

use kpcat_core::homological::{ext_dims, standard_filtration};
use kpcat_core::kp::{kp_module, tilting_module, FullTilting};
use kpcat_core::perm::{Permutation, Weight};
use kpcat_core::poly::MultiPoly;
use kpcat_core::ringel::{
    conjecture_dims, projective_cover, restricted_tensor, ringel_f, verify_ext_symmetry, verify_hw_axioms,
    verify_ringel, verify_tensor_dual, EndAlgebra,
};
use kpcat_core::schubert::{schubert_expand, schubert_poly};
use kpcat_core::weightmod::WeightModule;
use kpcat_core::Error;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::{Cli, Command, Suite, View};

pub enum CliError {
    /// Bad user input; exit code 2.
    Invalid(String),
    /// A computation failed; exit code 1.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Internal(_) => CliError::Failed(err.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub text: String,
    pub json: Value,
    /// False when an assertion checked by the command fails.
    pub passed: bool,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn with_format(mut payload: Value) -> Value {
    payload["format"] = json!(1);
    payload
}

fn passed_flag(payload: &Value) -> bool {
    payload["passed"].as_bool().unwrap_or(true)
}

fn parse_perm(s: &str, n: usize) -> CliResult<Permutation> {
    let w = Permutation::parse(s)?;
    if !w.in_s_inf(n) {
        return Err(Error::NotInSInfinity(w.notation(n), n).into());
    }
    Ok(w)
}

fn parse_weight(s: &str, n: usize) -> CliResult<Weight> {
    let lambda = Weight::parse(s)?;
    if lambda.n() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: lambda.n(),
        }
        .into());
    }
    Ok(lambda)
}

fn check_n(n: usize) -> CliResult<()> {
    if n == 0 {
        Err(invalid("n must be positive"))
    } else {
        Ok(())
    }
}

/// A resolved module argument.
struct ModuleArg {
    label: String,
    /// Canonical description used in cache keys.
    key: Value,
    module: WeightModule,
}

fn load_module_file(path: &Path, n: usize) -> CliResult<WeightModule> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("reading {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("parsing {}: {e}", path.display())))?;
    let body = value.get("module").unwrap_or(&value);
    let module = WeightModule::from_json(body)?;
    module.validate()?;
    if module.n() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: module.n(),
        }
        .into());
    }
    Ok(module)
}

fn resolve_module(arg: &str, n: usize) -> CliResult<ModuleArg> {
    if arg == "T" {
        return Ok(ModuleArg {
            label: "T".into(),
            key: json!("T"),
            module: FullTilting::new(n).module,
        });
    }
    let path = arg.strip_prefix('@').map(Path::new).or_else(|| {
        let p = Path::new(arg);
        (arg.ends_with(".json") || p.is_file()).then_some(p)
    });
    if let Some(path) = path {
        let module = load_module_file(path, n)?;
        return Ok(ModuleArg {
            label: path.display().to_string(),
            key: module.to_json(),
            module,
        });
    }
    let w = parse_perm(arg, n)?;
    let module = kp_module(&w, n)?.module;
    Ok(ModuleArg {
        label: format!("S_{}", w.notation(n)),
        key: json!(w.notation(n)),
        module,
    })
}

fn weight_label(lambda: &Weight) -> String {
    match Permutation::from_code(lambda) {
        Ok(w) if lambda.is_nonnegative() => format!("S_{lambda} [{}]", w.notation(lambda.n())),
        _ => format!("S_{lambda}"),
    }
}

fn module_payload(module: &WeightModule) -> Value {
    let ch = module.character();
    json!({
        "dim": module.dim(),
        "character": ch.to_json(),
        "character_text": ch.to_string(),
        "module": module.to_json(),
    })
}

fn render_view(payload: &Value, view: View, header: String) -> String {
    if view.dims {
        payload["dim"].to_string()
    } else if view.character {
        payload["character_text"].as_str().unwrap_or_default().to_string()
    } else {
        format!(
            "{header}: dim {}\ncharacter: {}",
            payload["dim"],
            payload["character_text"].as_str().unwrap_or_default()
        )
    }
}

pub fn run(cli: &Cli, cache: &Cache) -> CliResult<Outcome> {
    match &cli.command {
        Command::Schubert { n, perm } => {
            check_n(*n)?;
            let w = parse_perm(perm, *n)?;
            let poly = schubert_poly(&w, *n)?;
            let payload = json!({"n": n, "perm": w.notation(*n), "poly": poly.to_json(), "text": poly.to_string()});
            Ok(Outcome {
                text: poly.to_string(),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Kp { n, perm, view } => {
            check_n(*n)?;
            let w = parse_perm(perm, *n)?;
            let payload = cache.get_or_compute("kp", &json!({"n": n, "perm": w.notation(*n)}), || {
                let kp = kp_module(&w, *n)?;
                let mut p = module_payload(&kp.module);
                p["perm"] = json!(w.notation(*n));
                p["highest_weight"] = json!(kp.highest_weight().0);
                CliResult::Ok(p)
            })?;
            let header = format!(
                "S_{} (highest weight {})",
                w.notation(*n),
                Weight(serde_json::from_value(payload["highest_weight"].clone()).unwrap_or_default())
            );
            Ok(Outcome {
                text: render_view(&payload, *view, header),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Tilting { n, lambda, view } => {
            check_n(*n)?;
            let lambda = parse_weight(lambda, *n)?;
            if !lambda.in_lambda() {
                return Err(Error::NotInLambda(lambda, *n).into());
            }
            let payload = cache.get_or_compute("tilting", &json!({"lambda": lambda.0}), || {
                let mut p = module_payload(&tilting_module(&lambda)?);
                p["lambda"] = json!(lambda.0);
                CliResult::Ok(p)
            })?;
            Ok(Outcome {
                text: render_view(&payload, *view, format!("T{lambda}")),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Char { n, module } => {
            check_n(*n)?;
            let m = resolve_module(module, *n)?;
            let ch = m.module.character();
            let payload =
                json!({"module": m.label, "dim": m.module.dim(), "character": ch.to_json(), "text": ch.to_string()});
            Ok(Outcome {
                text: ch.to_string(),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Expand { n, poly, module } => {
            check_n(*n)?;
            let (label, f) = match (poly, module) {
                (Some(p), _) => (p.clone(), MultiPoly::parse(p, *n)?),
                (None, Some(arg)) => {
                    let m = resolve_module(arg, *n)?;
                    (format!("ch {}", m.label), m.module.character())
                }
                (None, None) => return Err(invalid("one of --poly or --module is required")),
            };
            if !f.is_nonnegative_exponent() {
                return Err(invalid("the polynomial has negative exponents"));
            }
            let expansion = schubert_expand(&f)?;
            let terms: Vec<Value> = expansion
                .iter()
                .map(|(w, c)| json!({"perm": w.notation(*n), "coeff": c.to_string()}))
                .collect();
            let text = if expansion.is_empty() {
                "0".to_string()
            } else {
                expansion
                    .iter()
                    .map(|(w, c)| {
                        if *c == 1.into() {
                            format!("S_{}", w.notation(*n))
                        } else {
                            format!("{c}*S_{}", w.notation(*n))
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
                    .replace("+ -", "- ")
            };
            let payload = json!({"input": label, "expansion": terms});
            Ok(Outcome {
                text,
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Hom { n, from, to } => {
            check_n(*n)?;
            let (a, b) = (resolve_module(from, *n)?, resolve_module(to, *n)?);
            let payload = cache.get_or_compute("hom", &json!({"n": n, "from": a.key, "to": b.key}), || {
                CliResult::Ok(json!({"dim": a.module.hom_space(&b.module).len()}))
            })?;
            let mut payload = payload;
            payload["from"] = json!(a.label);
            payload["to"] = json!(b.label);
            Ok(Outcome {
                text: payload["dim"].to_string(),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Ext {
            n,
            from,
            to,
            max_degree,
        } => {
            check_n(*n)?;
            let (a, b) = (resolve_module(from, *n)?, resolve_module(to, *n)?);
            let args = json!({"n": n, "from": a.key, "to": b.key, "top": max_degree});
            let mut payload = cache.get_or_compute("ext", &args, || {
                CliResult::Ok(json!({"dims": ext_dims(&a.module, &b.module, *max_degree)}))
            })?;
            payload["from"] = json!(a.label);
            payload["to"] = json!(b.label);
            let dims: Vec<u64> = serde_json::from_value(payload["dims"].clone()).unwrap_or_default();
            let text = dims
                .iter()
                .enumerate()
                .map(|(i, d)| format!("Ext^{i}({}, {}) = {d}", a.label, b.label))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome {
                text,
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Filtration { n, module } => {
            check_n(*n)?;
            let m = resolve_module(module, *n)?;
            let mut payload = cache.get_or_compute("filtration", &json!({"n": n, "module": m.key}), || {
                CliResult::Ok(match standard_filtration(&m.module) {
                    Ok(filt) => json!({
                        "filtered": true,
                        "layers": filt.layers.iter().map(|l| json!({
                            "label": l.label.0,
                            "multiplicity": l.multiplicity,
                        })).collect::<Vec<_>>(),
                    }),
                    Err(Error::NotStandardlyFiltered(lambda)) => json!({"filtered": false, "failed_at": lambda.0}),
                    Err(err) => return Err(err.into()),
                })
            })?;
            payload["module"] = json!(m.label);
            let text = if payload["filtered"] == json!(true) {
                let mut lines = vec![format!("standard filtration of {}, bottom to top:", m.label)];
                for layer in payload["layers"].as_array().into_iter().flatten() {
                    let lambda = Weight(serde_json::from_value(layer["label"].clone()).unwrap_or_default());
                    lines.push(format!("  {} x{}", weight_label(&lambda), layer["multiplicity"]));
                }
                lines.join("\n")
            } else {
                let lambda = Weight(serde_json::from_value(payload["failed_at"].clone()).unwrap_or_default());
                format!("{} has no standard filtration (fails at weight {lambda})", m.label)
            };
            Ok(Outcome {
                text,
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Dual { n, perm } => {
            check_n(*n)?;
            let w = parse_perm(perm, *n)?;
            if !w.in_s_n(*n) {
                return Err(invalid(format!("{w} is not in S_{n}")));
            }
            let payload = cache.get_or_compute("dual", &json!({"n": n, "perm": w.notation(*n)}), || {
                let t = FullTilting::new(*n);
                let fs = ringel_f(&kp_module(&w, *n)?.module, &t).module;
                let wbar = w.conjugate_w0(*n)?;
                let iso = fs.is_isomorphic(&kp_module(&wbar, *n)?.module).is_witness();
                let mut p = module_payload(&fs);
                p["perm"] = json!(w.notation(*n));
                p["dual_perm"] = json!(wbar.notation(*n));
                p["passed"] = json!(iso);
                CliResult::Ok(p)
            })?;
            let rel = if passed_flag(&payload) { "≅" } else { "≇" };
            let text = format!(
                "F(S_{}) {rel} S_{}: dim {}\ncharacter: {}",
                w.notation(*n),
                payload["dual_perm"].as_str().unwrap_or_default(),
                payload["dim"],
                payload["character_text"].as_str().unwrap_or_default()
            );
            let passed = passed_flag(&payload);
            Ok(Outcome {
                text,
                json: with_format(payload),
                passed,
            })
        }
        Command::Tensor {
            n,
            left,
            right,
            restricted,
            view,
        } => {
            check_n(*n)?;
            let (a, b) = (resolve_module(left, *n)?, resolve_module(right, *n)?);
            let args = json!({"n": n, "left": a.key, "right": b.key, "restricted": restricted});
            let payload = cache.get_or_compute("tensor", &args, || {
                let m = if *restricted {
                    restricted_tensor(&a.module, &b.module).module
                } else {
                    a.module.tensor(&b.module)
                };
                CliResult::Ok(module_payload(&m))
            })?;
            let header = if *restricted {
                format!("({} ⊗ {})^Λ_{n}", a.label, b.label)
            } else {
                format!("{} ⊗ {}", a.label, b.label)
            };
            Ok(Outcome {
                text: render_view(&payload, *view, header),
                json: with_format(payload),
                passed: true,
            })
        }
        Command::Conjecture { n, k, graded } => {
            check_n(*n)?;
            let payload = cache.get_or_compute("conjecture", &json!({"n": n, "k": k}), || {
                let row = conjecture_dims(*n, *k);
                let mut p = serde_json::to_value(&row).map_err(|e| CliError::Failed(e.to_string()))?;
                p["matches"] = json!(row.matches());
                p["passed"] = json!(row.matches() || !row.asserted);
                CliResult::Ok(p)
            })?;
            let mode = if payload["asserted"] == json!(true) {
                "asserted"
            } else {
                "report"
            };
            let verdict = if payload["matches"] == json!(true) {
                "agrees"
            } else {
                "differs"
            };
            let mut text = format!(
                "dim (T^⊗{k})^Λ_{n} = {}, expected (k+1)^(n choose 2) = {}: {verdict} [{mode}]",
                payload["dim"], payload["expected"]
            );
            if *graded {
                let list = |v: &Value| {
                    v.as_array()
                        .into_iter()
                        .flatten()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                text.push_str(&format!(
                    "\ngraded: {}\nexpected k^d C(n choose 2, d): {}",
                    list(&payload["graded"]),
                    list(&payload["expected_graded"])
                ));
            }
            let passed = passed_flag(&payload);
            Ok(Outcome {
                text,
                json: with_format(payload),
                passed,
            })
        }
        Command::Verify { suite, n, sample } => {
            check_n(*n)?;
            let sample = sample
                .as_ref()
                .map(|s| s.iter().map(|p| parse_perm(p, *n)).collect::<CliResult<Vec<_>>>())
                .transpose()?;
            if sample.is_some() && *suite != Suite::Ringel {
                return Err(invalid("--sample applies to the ringel suite only"));
            }
            let sample_key = sample
                .as_ref()
                .map(|s| s.iter().map(|w| w.notation(*n)).collect::<Vec<_>>());
            let args = json!({"suite": format!("{suite:?}"), "n": n, "sample": sample_key});
            let payload = cache.get_or_compute("verify", &args, || run_suite(*suite, *n, sample))?;
            let passed = passed_flag(&payload);
            let mut lines = vec![format!(
                "suite {} (n = {n}): {}",
                payload["suite"].as_str().unwrap_or_default(),
                if passed { "PASS" } else { "FAIL" }
            )];
            for c in payload["checks"].as_array().into_iter().flatten() {
                lines.push(format!(
                    "  {} {}: {}",
                    if c["passed"] == json!(true) { "PASS" } else { "FAIL" },
                    c["name"].as_str().unwrap_or_default(),
                    c["detail"].as_str().unwrap_or_default()
                ));
            }
            for l in payload["projective_covers"].as_array().into_iter().flatten() {
                lines.push(format!(
                    "  P{} = E π_{}",
                    Weight(serde_json::from_value(l["lambda"].clone()).unwrap_or_default()),
                    Weight(serde_json::from_value(l["idempotent"].clone()).unwrap_or_default())
                ));
            }
            Ok(Outcome {
                text: lines.join("\n"),
                json: with_format(payload),
                passed,
            })
        }
    }
}

fn run_suite(suite: Suite, n: usize, sample: Option<Vec<Permutation>>) -> CliResult<Value> {
    if n < 2 {
        return Err(invalid("verification suites need n >= 2"));
    }
    let report = match suite {
        Suite::Axioms => verify_hw_axioms(n)?,
        Suite::Ringel => verify_ringel(n, sample)?,
        Suite::TensorDual => verify_tensor_dual(n, None)?,
        Suite::ExtSymmetry => verify_ext_symmetry(n, 2, Some(1))?,
    };
    let mut payload = serde_json::to_value(&report).map_err(|e| CliError::Failed(e.to_string()))?;
    payload["passed"] = json!(report.passed());
    if suite == Suite::Axioms {
        let e = EndAlgebra::new(&FullTilting::new(n));
        let covers = kpcat_core::perm::lambda_n(n)
            .iter()
            .map(|l| {
                let p = projective_cover(&e, l)?;
                Ok(json!({"lambda": l.0, "idempotent": p.idempotent.0}))
            })
            .collect::<kpcat_core::Result<Vec<_>>>()?;
        payload["projective_covers"] = json!(covers);
    }
    Ok(payload)
}

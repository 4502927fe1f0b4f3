use std::collections::BTreeMap;

use fldkit::classes::{self, membership, ClassSpec, Operator, Predicate};
use fldkit::ef::{check_caps, play, verify_trace, Player};
use fldkit::fld::{
    build_witness_formulas, enumerate_decompositions_with_budget, transfer_decomposition_with_budget,
    verify_block_definability, Mode,
};
use fldkit::logic::{evaluate, parse, relativize as relativize_formula, Assignment};
use fldkit::poset::{automorphisms, canonical_form, CanonicalForm};
use fldkit::verify::{run_suite, Suite, SuiteConfig};
use fldkit::{FinitePoset, Formula};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::report::{Check, Inputs, Outcome};
use crate::{ClosureArgs, DecomposeArgs, EfArgs, EvalArgs, PosetArg, RelativizeArgs, VerifyArgs};

fn load_poset(inputs: &mut Inputs, label: &str, path: &str) -> Result<FinitePoset, CliError> {
    let text = inputs.read_file(label, path)?;
    Ok(FinitePoset::from_json_str(&text)?)
}

/// `STR` or `@FILE`.
fn load_formula(inputs: &mut Inputs, label: &str, arg: &str) -> Result<Formula, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => inputs.read_file(label, path)?,
        None => {
            inputs.record(label, arg);
            arg.to_owned()
        }
    };
    Ok(parse(text.trim())?)
}

fn element(x: &FinitePoset, name: &str) -> Result<usize, CliError> {
    x.index_of(name)
        .ok_or_else(|| CliError::Semantic(format!("unknown element `{name}`")))
}

fn parse_mode(text: &str) -> Result<Mode, CliError> {
    text.parse().map_err(CliError::Parse)
}

pub fn eval(a: &EvalArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let x = load_poset(inputs, "poset", &a.poset)?;
    let f = load_formula(inputs, "formula", &a.formula)?;
    let mut pairs = Vec::new();
    for item in &a.assign {
        let (var, elem) = item
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("assignment `{item}` is not of the form var=element")))?;
        pairs.push((var.trim().to_owned(), elem.trim().to_owned()));
    }
    inputs.record("assign", &a.assign.join(","));
    let assignment = Assignment::from_names(&x, &pairs)?;
    let value = evaluate(&x, &f, &assignment)?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let assigned: BTreeMap<&str, &str> = assignment.iter().map(|(v, e)| (v, x.name(e))).collect();
    let mut out = Outcome::new(json!({
        "formula": f.to_string(),
        "value": value,
        "free_variables": free,
        "assignment": assigned,
        "quantifier_rank": f.quantifier_rank(),
    }));
    out.human.push(format!("{f}: {value}"));
    if a.check && !value {
        out.code = 1;
    }
    Ok(out)
}

pub fn decompose(a: &DecomposeArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let x = load_poset(inputs, "poset", &a.poset)?;
    let mode = parse_mode(&a.mode)?;
    let all = enumerate_decompositions_with_budget(&x, mode, a.partition_budget)?;
    let total = all.len();
    let listed: Vec<(usize, _)> = match a.pick {
        Some(i) if i >= total => {
            return Err(CliError::Semantic(format!("--pick {i}: only {total} decompositions")));
        }
        Some(i) => vec![(i, all[i].clone())],
        None => all.into_iter().enumerate().collect(),
    };
    let sentences = if a.sentences.is_empty() {
        None
    } else {
        let mut fs = Vec::new();
        for (i, s) in a.sentences.iter().enumerate() {
            fs.push(load_formula(inputs, &format!("sentence{i}"), s)?);
        }
        Some(fs)
    };
    let target = match &a.transfer {
        Some(path) => Some(load_poset(inputs, "transfer", path)?),
        None => None,
    };

    let mut checks = Vec::new();
    let mut formulas = Vec::new();
    let mut transfers = Vec::new();
    for (i, d) in &listed {
        let needs_witness = a.emit_formulas || target.is_some();
        let w = if needs_witness {
            Some(build_witness_formulas(d, sentences.as_deref())?)
        } else {
            None
        };
        if a.emit_formulas {
            let w = w.as_ref().expect("built above");
            formulas.push(json!({"decomposition": i, "formulas": w.to_json()}));
            let r = verify_block_definability(d)?;
            checks.push(Check {
                name: format!("block-definability[{i}]"),
                passed: r.passed(),
                counterexample: (!r.passed()).then(|| json!({"decomposition": d.to_json(), "report": r})),
            });
        }
        if let Some(y) = &target {
            let w = w.as_ref().expect("built above");
            let t = transfer_decomposition_with_budget(y, w, a.tuple_budget)?;
            if let Some(t) = &t {
                checks.push(Check {
                    name: format!("transfer[{i}]"),
                    passed: t.passed(),
                    counterexample: (!t.passed()).then(|| json!({"decomposition": d.to_json(), "transfer": t.to_json(y)})),
                });
            }
            transfers.push(json!({
                "decomposition": i,
                "found": t.is_some(),
                "transfer": t.as_ref().map(|t| t.to_json(y)),
            }));
        }
    }
    let mut results = json!({
        "mode": mode,
        "count": total,
        "decompositions": listed.iter().map(|(i, d)| json!({"position": i, "decomposition": d.to_json()})).collect::<Vec<_>>(),
    });
    if a.emit_formulas {
        results["formulas"] = Value::Array(formulas);
    }
    if target.is_some() {
        results["transfers"] = Value::Array(transfers.clone());
    }
    let mut out = Outcome::new(results);
    out.human.push(format!("{total} {mode} decompositions"));
    if target.is_some() {
        let found = transfers.iter().filter(|t| t["found"] == json!(true)).count();
        out.human.push(format!("transfer: {found} of {} witness formulas satisfied in the target", transfers.len()));
    }
    out.checks = checks;
    Ok(out)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(CliError::Parse)?]
    };
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    let mut human = Vec::new();
    for s in suites {
        let config = SuiteConfig {
            bound: a.bound.unwrap_or(s.default_bound()),
            seed: a.seed,
            max_k: a.k,
        };
        let r = run_suite(s, config)?;
        human.push(format!(
            "{} {} (bound {}, {} checks)",
            if r.passed { "PASS" } else { "FAIL" },
            s,
            r.bound,
            r.checks
        ));
        checks.push(Check {
            name: s.name().to_owned(),
            passed: r.passed,
            counterexample: r.counterexample.clone(),
        });
        reports.push(serde_json::to_value(&r).expect("plain data"));
    }
    let mut out = Outcome::new(Value::Array(reports));
    out.checks = checks;
    out.human = human;
    Ok(out)
}

pub fn ef(a: &EfArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let l = load_poset(inputs, "left", &a.left)?;
    let r = load_poset(inputs, "right", &a.right)?;
    check_caps(&l, &r, a.k, a.max_rounds, a.max_size)?;
    if a.left_pins.len() != a.right_pins.len() {
        return Err(CliError::Semantic(format!(
            "{} left pins but {} right pins",
            a.left_pins.len(),
            a.right_pins.len()
        )));
    }
    inputs.record("pins", &format!("{}|{}", a.left_pins.join(","), a.right_pins.join(",")));
    let lp = a.left_pins.iter().map(|n| element(&l, n)).collect::<Result<Vec<_>, _>>()?;
    let rp = a.right_pins.iter().map(|n| element(&r, n)).collect::<Result<Vec<_>, _>>()?;
    let trace = play(&l, &lp, &r, &rp, a.k);
    let equivalent = trace.winner == Player::Second;
    let replay = verify_trace(&l, &lp, &r, &rp, &trace);
    let mut out = Outcome::new(json!({"equivalent": equivalent, "k": a.k, "game": trace}));
    out.checks.push(Check {
        name: "trace-replay".into(),
        passed: replay.is_ok(),
        counterexample: replay.err().map(|e| json!({"error": e.to_string()})),
    });
    out.human.push(format!(
        "player {} wins the {}-round game",
        if equivalent { "II" } else { "I" },
        a.k
    ));
    if a.check && !equivalent {
        out.code = 1;
    }
    Ok(out)
}

pub fn classify(a: &PosetArg, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let x = load_poset(inputs, "poset", &a.poset)?;
    let canon = canonical_form(&x)?;
    let predicates: BTreeMap<&str, bool> = Predicate::ALL.iter().map(|p| (p.name(), p.holds(&x))).collect();
    let mut counts = BTreeMap::new();
    for mode in [Mode::Fld1, Mode::Fld0] {
        let ds = enumerate_decompositions_with_budget(&x, mode, fldkit::fld::DEFAULT_PARTITION_BUDGET)?;
        counts.insert(mode.as_str(), ds.len());
    }
    let n = classes::find_n(&x).map(|q| q.iter().map(|&e| x.name(e).to_owned()).collect::<Vec<_>>());
    let mut out = Outcome::new(json!({
        "canonical": canon.to_string(),
        "size": x.len(),
        "predicates": predicates,
        "decompositions": counts,
        "n_embedding": n,
    }));
    let held: Vec<&str> = predicates.iter().filter(|(_, &v)| v).map(|(k, _)| *k).collect();
    out.human.push(format!("{canon}: {}", held.join(", ")));
    Ok(out)
}

pub fn closure(a: &ClosureArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    inputs.record("base", &a.base);
    if let Some(path) = a.base.strip_prefix("seeds:") {
        inputs.read_file("seeds", path.trim())?;
    }
    let base = ClassSpec::parse(&a.base)?;
    let op: Operator = a.op.parse().map_err(CliError::Parse)?;
    let r = match (a.budget, op) {
        (Some(b), _) => classes::closure(op, &base, a.bound, b)?,
        (None, Operator::Sigma) => classes::closure_sigma(&base, a.bound)?,
        (None, Operator::SigmaRooted) => classes::closure_sigma_rooted(&base, a.bound)?,
        (None, Operator::UnionProduct) => classes::closure_union_product(&base, a.bound)?,
    };
    let mut results = serde_json::to_value(r.to_json()).expect("plain data");
    results["base"] = json!(base.to_string());
    results["size"] = json!(r.members().len());
    let mut out = Outcome::new(Value::Null);
    out.checks.push(Check {
        name: format!("{op}-cross-check"),
        passed: r.cross_check,
        counterexample: (!r.cross_check).then(|| json!({"operator": op, "base": base.to_string(), "bound": a.bound})),
    });
    out.human.push(format!(
        "{} members up to size {}, stable after stage {}",
        r.members().len(),
        a.bound,
        r.stabilized_at
    ));
    if let Some(path) = &a.member {
        let x = load_poset(inputs, "member", path)?;
        let c = membership(&x, &base, op)?;
        out.human.push(format!("member: {}", c.is_some()));
        results["member"] = json!({"in_closure": c.is_some(), "construction": c});
    }
    out.results = results;
    Ok(out)
}

pub fn canon(a: &PosetArg, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let x = load_poset(inputs, "poset", &a.poset)?;
    let c: CanonicalForm = canonical_form(&x)?;
    let mut out = Outcome::new(json!({
        "canonical": c.to_string(),
        "size": x.len(),
        "automorphisms": automorphisms(&x).len(),
        "poset": c.to_poset().to_json(),
    }));
    out.human.push(c.to_string());
    Ok(out)
}

pub fn relativize(a: &RelativizeArgs, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let psi = load_formula(inputs, "formula", &a.formula)?;
    let phi = load_formula(inputs, "relativizer", &a.relativizer)?;
    inputs.record("params", &format!("{}|{}", a.params.join(","), a.subject));
    let rel = relativize_formula(&psi, &phi, &a.params, &a.subject)?;
    let mut out = Outcome::new(json!({
        "formula": rel.to_string(),
        "quantifier_rank": rel.quantifier_rank(),
        "free_variables": rel.free_vars(),
    }));
    out.human.push(rel.to_string());
    Ok(out)
}

//! Command-line front end.
//!
//! Exit codes: 0 for success (or a positive verdict), 1 for a
//! mathematically valid negative result (infeasible candidate,
//! contradiction found, failed audit, nonzero residual, non-integral
//! index), 2 for input errors (parse failures, precondition violations).
//! `--json` switches every subcommand from text to the output envelope.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use autsurf_core::constraints::{
    census, check_candidate, CensusFamily, CensusRow, Feasibility, PetersCase, RuleId, RuleTable,
};
use autsurf_core::covering::{free_genus_bounds, parse_group_spec};
use autsurf_core::dedekind::{dedekind_sum_closed, dedekind_sum_direct, DedekindInput};
use autsurf_core::defect::{defect_closed, defect_direct, DefectValue};
use autsurf_core::equivindex::{
    cr_index, decomposition_audit, CurveDatum, EquivIndexError, OrbifoldData,
};
use autsurf_core::gsignature::{
    g_signature_balance, lefschetz_lower_bound, prime_square_exclusion, BettiData,
    SurfaceInvariants,
};
use autsurf_core::Rational;

use output::{approx_json, biguint_json, rational_json, Envelope};

#[derive(Parser)]
#[command(
    name = "autsurf",
    version,
    about = "Exact arithmetic for automorphism constraints on surfaces of general type"
)]
struct Cli {
    /// Emit the JSON output envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Closed,
    Both,
}

impl Method {
    fn key(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Closed => "closed",
            Method::Both => "both",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    #[value(name = "2c2")]
    TwoC2,
    #[value(name = "3c2")]
    ThreeC2,
}

#[derive(Subcommand)]
enum Command {
    /// Dedekind sum s(q,p), by the defining sum, the closed form, or both.
    Dedekind {
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        p: i64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Signature defect I_{p,q} of an isolated fixed point.
    Defect {
        #[arg(long)]
        p: i64,
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        /// Also evaluate the cotangent-sum oracle.
        #[arg(long)]
        oracle: bool,
        /// Oracle precision in fractional bits (>= 64).
        #[arg(long, default_value_t = 128, requires = "oracle")]
        bits: u32,
    },
    /// Lefschetz fixed-point count or lower bound from Betti data.
    Lefschetz {
        #[arg(long)]
        b1: u32,
        #[arg(long)]
        b2: u32,
        #[arg(long)]
        b3: u32,
        /// Trace of the action on H^1, as an exact fraction.
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        trace1: Option<Rational>,
        /// Trace of the action on H^3, as an exact fraction.
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        trace3: Option<Rational>,
    },
    /// Residual of the G-signature equation |G| sign(M/G) = sign(M) + sum of defects.
    Balance {
        #[arg(long)]
        order: u64,
        #[arg(long, allow_negative_numbers = true)]
        sign_quotient: i64,
        #[arg(long, allow_negative_numbers = true)]
        sign_total: i64,
        /// Comma-separated exact fractions, e.g. 2/3,2/3,-2/3.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        defects: String,
    },
    /// Exclusion of an automorphism of order p^2 (p = 2 or 3).
    Part1 {
        #[arg(long)]
        p: u8,
        #[arg(long)]
        c2: i64,
    },
    /// Free-genus bounds of a finite group given as a cyclic product.
    FreeGenus {
        /// Group spec, e.g. C2^6 or C3xC9.
        #[arg(long)]
        group: String,
    },
    /// Equivariant Cauchy-Riemann half-index of orbifold data from a JSON file.
    Index {
        #[arg(long)]
        file: PathBuf,
    },
    /// Audit a curve decomposition (JSON list of curves) against c1^2 and |G|.
    Audit {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        c1sq: i64,
        #[arg(long)]
        order: u64,
    },
    /// Check a (surface, group) candidate against the rule table.
    Check {
        #[arg(long)]
        c1sq: i64,
        #[arg(long)]
        c2: i64,
        /// Group spec, e.g. C2^2.
        #[arg(long)]
        group: String,
        /// Rule to disable (repeatable), by key, e.g. cai_threshold.
        #[arg(long = "disable-rule")]
        disable_rule: Vec<String>,
    },
    /// Rank-by-rank feasibility census for one geography case.
    Census {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long)]
        max_rank: u32,
        /// Rule to disable (repeatable), by key, e.g. cai_threshold.
        #[arg(long = "disable-rule")]
        disable_rule: Vec<String>,
    },
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let numer: BigInt = numer
        .trim()
        .parse()
        .map_err(|_| format!("invalid numerator in '{s}'"))?;
    let denom: BigInt = denom
        .trim()
        .parse()
        .map_err(|_| format!("invalid denominator in '{s}'"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Rational::new(numer, denom))
}

fn parse_defects(list: &str) -> Result<Vec<DefectValue>, String> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|part| {
            let r = parse_rational_arg(part.trim())?;
            DefectValue::try_new(r).map_err(|e| e.to_string())
        })
        .collect()
}

fn parse_rules(disable: &[String]) -> Result<RuleTable, String> {
    let mut rules = RuleTable::default();
    for key in disable {
        let rule = RuleId::from_key(key).ok_or_else(|| {
            let known: Vec<_> = RuleId::ALL.iter().map(|r| r.key()).collect();
            format!("unknown rule '{key}'; known rules: {}", known.join(", "))
        })?;
        rules.disable(rule);
    }
    Ok(rules)
}

/// Result of a successfully dispatched subcommand. `negative` marks a
/// mathematically valid negative verdict (exit code 1).
struct Outcome {
    subcommand: &'static str,
    inputs: Value,
    result: Value,
    citations: Vec<RuleId>,
    text: String,
    negative: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                let envelope = Envelope {
                    subcommand: outcome.subcommand,
                    inputs: outcome.inputs,
                    result: outcome.result,
                    citations: outcome
                        .citations
                        .iter()
                        .map(|r| (r.key(), r.citation()))
                        .collect(),
                };
                println!("{}", envelope.render());
            } else {
                println!("{}", outcome.text);
            }
            if outcome.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: &Command) -> Result<Outcome, String> {
    match command {
        Command::Dedekind { q, p, method } => run_dedekind(*q, *p, *method),
        Command::Defect { p, q, oracle, bits } => run_defect(*p, *q, *oracle, *bits),
        Command::Lefschetz {
            b1,
            b2,
            b3,
            trace1,
            trace3,
        } => run_lefschetz(*b1, *b2, *b3, trace1.clone(), trace3.clone()),
        Command::Balance {
            order,
            sign_quotient,
            sign_total,
            defects,
        } => run_balance(*order, *sign_quotient, *sign_total, defects),
        Command::Part1 { p, c2 } => run_part1(*p, *c2),
        Command::FreeGenus { group } => run_free_genus(group),
        Command::Index { file } => run_index(file),
        Command::Audit { file, c1sq, order } => run_audit(file, *c1sq, *order),
        Command::Check {
            c1sq,
            c2,
            group,
            disable_rule,
        } => run_check(*c1sq, *c2, group, disable_rule),
        Command::Census {
            case,
            max_rank,
            disable_rule,
        } => run_census(*case, *max_rank, disable_rule),
    }
}

fn run_dedekind(q: i64, p: i64, method: Method) -> Result<Outcome, String> {
    let input = DedekindInput::new(q, p).map_err(|e| e.to_string())?;
    let (value, result) = match method {
        Method::Direct => {
            let v = dedekind_sum_direct(&input);
            let result = json!({ "s": rational_json(&v) });
            (v, result)
        }
        Method::Closed => {
            let v = dedekind_sum_closed(&input).map_err(|e| e.to_string())?;
            let result = json!({ "s": rational_json(&v) });
            (v, result)
        }
        Method::Both => {
            let direct = dedekind_sum_direct(&input);
            let closed = dedekind_sum_closed(&input).map_err(|e| e.to_string())?;
            debug_assert_eq!(direct, closed);
            let result = json!({
                "s": rational_json(&direct),
                "direct": rational_json(&direct),
                "closed": rational_json(&closed),
            });
            (direct, result)
        }
    };
    Ok(Outcome {
        subcommand: "dedekind",
        inputs: json!({ "q": q, "p": p, "method": method.key() }),
        result,
        citations: vec![],
        text: format!("s({q},{p}) = {value}"),
        negative: false,
    })
}

fn run_defect(p: i64, q: i64, oracle: bool, bits: u32) -> Result<Outcome, String> {
    let exact = defect_closed(p, q).map_err(|e| e.to_string())?;
    let mut result = json!({ "defect": rational_json(exact.value()) });
    let mut text = format!("I_{{{p},{q}}} = {exact}");
    if oracle {
        let approx = defect_direct(p, q, bits).map_err(|e| e.to_string())?;
        result["oracle"] = approx_json(&approx);
        text.push_str(&format!(
            "\noracle: {approx} (bits = {}, |error| <= 2^{})",
            approx.frac_bits(),
            approx.err_exp()
        ));
    }
    Ok(Outcome {
        subcommand: "defect",
        inputs: json!({ "p": p, "q": q, "oracle": oracle, "bits": bits }),
        result,
        citations: vec![],
        text,
        negative: false,
    })
}

fn run_lefschetz(
    b1: u32,
    b2: u32,
    b3: u32,
    trace1: Option<Rational>,
    trace3: Option<Rational>,
) -> Result<Outcome, String> {
    let exact = trace1.is_some() && trace3.is_some();
    let betti =
        BettiData::new(b1, b2, b3, trace1.clone(), trace3.clone()).map_err(|e| e.to_string())?;
    let count = lefschetz_lower_bound(&betti).map_err(|e| e.to_string())?;
    let text = if exact {
        format!("fixed points = {count} (exact Lefschetz count)")
    } else {
        format!("fixed points >= {count} (chi(M) lower bound)")
    };
    let trace_json = |t: &Option<Rational>| t.as_ref().map(rational_json).unwrap_or(Value::Null);
    Ok(Outcome {
        subcommand: "lefschetz",
        inputs: json!({
            "b1": b1, "b2": b2, "b3": b3,
            "trace1": trace_json(&trace1),
            "trace3": trace_json(&trace3),
        }),
        result: json!({ "count": count, "exact": exact }),
        citations: vec![],
        text,
        negative: false,
    })
}

fn run_balance(
    order: u64,
    sign_quotient: i64,
    sign_total: i64,
    defects: &str,
) -> Result<Outcome, String> {
    if order == 0 {
        return Err("group order must be at least 1".into());
    }
    let parsed = parse_defects(defects)?;
    let residual = g_signature_balance(order, sign_quotient, sign_total, &parsed);
    let consistent = residual.is_zero();
    let defects_echo: Vec<Value> = parsed.iter().map(|d| rational_json(d.value())).collect();
    Ok(Outcome {
        subcommand: "balance",
        inputs: json!({
            "order": order,
            "sign_quotient": sign_quotient,
            "sign_total": sign_total,
            "defects": defects_echo,
        }),
        result: json!({ "residual": rational_json(&residual), "consistent": consistent }),
        citations: vec![],
        text: format!(
            "residual = {residual} ({})",
            if consistent {
                "data consistent"
            } else {
                "data inconsistent"
            }
        ),
        negative: !consistent,
    })
}

fn run_part1(p: u8, c2: i64) -> Result<Outcome, String> {
    let report = prime_square_exclusion(p, c2).map_err(|e| e.to_string())?;
    let text = format!(
        "exclusion of an order-{order} automorphism (p = {p}), c2 = {c2}:\n\
         \x20 fixed points of g:        |X^g| >= {fp} (Lefschetz bound)\n\
         \x20 defect per fixed point:   I_{{{order},-1}} = {de}\n\
         \x20 defects on the g^{p} fixed set have type I_{{{p},-1}} = {dp} >= 0\n\
         \x20 G-signature equation forces c1^2 >= {req}\n\
         \x20 Miyaoka-Yau inequality caps c1^2 <= {cap}\n\
         \x20 contradiction: {verdict}",
        order = report.element_order,
        fp = report.fixed_points_lower_bound,
        de = report.defect_at_element,
        dp = report.defect_at_power,
        req = report.required_c1sq,
        cap = report.miyaoka_yau_cap,
        verdict = if report.contradiction { "yes" } else { "no" },
    );
    Ok(Outcome {
        subcommand: "part1",
        inputs: json!({ "p": p, "c2": c2 }),
        result: json!({
            "element_order": report.element_order,
            "fixed_points_lower_bound": report.fixed_points_lower_bound,
            "defect_at_element": rational_json(&report.defect_at_element),
            "defect_at_power": rational_json(&report.defect_at_power),
            "power_defects_nonnegative": report.power_defects_nonnegative,
            "required_c1sq": report.required_c1sq,
            "miyaoka_yau_cap": report.miyaoka_yau_cap,
            "contradiction": report.contradiction,
        }),
        citations: vec![report.rule],
        negative: report.contradiction,
        text,
    })
}

fn run_free_genus(group: &str) -> Result<Outcome, String> {
    let profile = parse_group_spec(group).map_err(|e| e.to_string())?;
    let (lower, upper) = free_genus_bounds(&profile).map_err(|e| e.to_string())?;
    Ok(Outcome {
        subcommand: "free-genus",
        inputs: json!({ "group": group }),
        result: json!({
            "group": profile.to_string(),
            "order": biguint_json(profile.order()),
            "min_generators": profile.min_generators(),
            "free_genus_lower": biguint_json(&lower),
            "free_genus_upper": biguint_json(&upper),
        }),
        citations: vec![],
        text: format!(
            "{profile}: |G| = {}, minimal generators r = {}\nfree genus bounds: [{lower}, {upper}]",
            profile.order(),
            profile.min_generators()
        ),
        negative: false,
    })
}

fn run_index(file: &PathBuf) -> Result<Outcome, String> {
    let raw =
        fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let data: OrbifoldData =
        serde_json::from_str(&raw).map_err(|e| format!("invalid orbifold data: {e}"))?;
    let inputs = json!({ "orbifold": serde_json::to_value(&data).expect("serializable") });
    match cr_index(&data) {
        Ok(index) => Ok(Outcome {
            subcommand: "index",
            inputs,
            result: json!({ "integral": true, "index": index }),
            citations: vec![],
            text: format!("equivariant CR half-index d = {index}"),
            negative: false,
        }),
        Err(EquivIndexError::NonIntegralIndex(value)) => Ok(Outcome {
            subcommand: "index",
            inputs,
            result: json!({ "integral": false, "value": rational_json(&value) }),
            citations: vec![],
            text: format!("index {value} is not an integer; the orbifold data is inconsistent"),
            negative: true,
        }),
        Err(other) => Err(other.to_string()),
    }
}

fn run_audit(file: &PathBuf, c1sq: i64, order: u64) -> Result<Outcome, String> {
    let raw =
        fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let curves: Vec<CurveDatum> =
        serde_json::from_str(&raw).map_err(|e| format!("invalid curve list: {e}"))?;
    if order == 0 {
        return Err("group order must be at least 1".into());
    }
    if c1sq < 1 {
        return Err(format!("c1^2 must be at least 1, got {c1sq}"));
    }
    let report = decomposition_audit(c1sq, order, &curves);
    let mut text = String::new();
    for check in &report.checks {
        let location = match check.curve {
            Some(i) => format!("curve {i}"),
            None => "global".to_string(),
        };
        text.push_str(&format!(
            "  [{}] {} ({location}): {}\n",
            if check.passed { "ok" } else { "FAIL" },
            check.kind,
            check.detail
        ));
    }
    text.push_str(&format!(
        "audit: {}",
        if report.passed { "PASS" } else { "FAIL" }
    ));
    Ok(Outcome {
        subcommand: "audit",
        inputs: json!({
            "c1sq": c1sq,
            "order": order,
            "curves": serde_json::to_value(&curves).expect("serializable"),
        }),
        result: serde_json::to_value(&report).expect("serializable"),
        citations: vec![RuleId::ThmBDivisibility, RuleId::ThmCBound],
        negative: !report.passed,
        text,
    })
}

fn run_check(c1sq: i64, c2: i64, group: &str, disable: &[String]) -> Result<Outcome, String> {
    let rules = parse_rules(disable)?;
    let surface = SurfaceInvariants::new(c1sq, c2).map_err(|e| e.to_string())?;
    let profile = parse_group_spec(group).map_err(|e| e.to_string())?;
    let report = check_candidate(&surface, &profile, &rules).map_err(|e| e.to_string())?;

    let mut text = format!(
        "candidate: c1^2 = {c1sq}, c2 = {c2}, group {profile} (|G| = {}, r = {})\n",
        profile.order(),
        profile.min_generators()
    );
    for check in &report.checks {
        text.push_str(&format!(
            "  [{:8}] {}: {}\n",
            check.status.key(),
            check.rule,
            check.detail
        ));
    }
    text.push_str(&format!("verdict: {}", report.verdict));

    let checks_json: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "rule": c.rule.key(),
                "status": c.status.key(),
                "detail": c.detail,
            })
        })
        .collect();
    let citations = RuleId::ALL
        .into_iter()
        .filter(|r| rules.is_enabled(*r))
        .collect();
    let infeasible = report.verdict == autsurf_core::constraints::Verdict::Infeasible;
    Ok(Outcome {
        subcommand: "check",
        inputs: json!({
            "c1sq": c1sq,
            "c2": c2,
            "group": group,
            "disabled_rules": disable,
        }),
        result: json!({ "verdict": report.verdict.key(), "checks": checks_json }),
        citations,
        negative: infeasible,
        text,
    })
}

fn census_row_json(row: &CensusRow) -> Value {
    let (status, values) = match &row.feasibility {
        Feasibility::FeasibleUnbounded => ("feasible-unbounded", Vec::new()),
        Feasibility::Feasible { c1sq_values } => ("feasible", c1sq_values.clone()),
        Feasibility::Infeasible => ("infeasible", Vec::new()),
    };
    json!({
        "rank": row.rank,
        "order": row.order,
        "status": status,
        "c1sq_values": values,
        "note": row.note,
    })
}

fn run_census(case: CaseArg, max_rank: u32, disable: &[String]) -> Result<Outcome, String> {
    let rules = parse_rules(disable)?;
    let (case, family) = match case {
        CaseArg::TwoC2 => (PetersCase::TwoC2, CensusFamily::ElementaryAbelianTwo),
        CaseArg::ThreeC2 => (PetersCase::ThreeC2, CensusFamily::ThreeGroup),
    };
    let table = census(case, family, max_rank, &rules).map_err(|e| e.to_string())?;

    let mut text = format!(
        "census: case {case}, family {family}, ranks 1..{max_rank}\n\
         {:>4}  {:>12}  {:<20}  {}\n",
        "rank", "order", "status", "surviving c1^2 / note"
    );
    for row in &table.rows {
        let (status, detail) = match &row.feasibility {
            Feasibility::FeasibleUnbounded => ("feasible-unbounded", row.note.clone()),
            Feasibility::Feasible { c1sq_values } => {
                let list = c1sq_values
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                ("feasible", format!("{{{list}}}"))
            }
            Feasibility::Infeasible => ("infeasible", row.note.clone()),
        };
        text.push_str(&format!(
            "{:>4}  {:>12}  {:<20}  {}\n",
            row.rank, row.order, status, detail
        ));
    }
    text.pop();

    let citations = RuleId::ALL
        .into_iter()
        .filter(|r| rules.is_enabled(*r))
        .collect();
    Ok(Outcome {
        subcommand: "census",
        inputs: json!({
            "case": case.key(),
            "max_rank": max_rank,
            "disabled_rules": disable,
        }),
        result: json!({
            "case": case.key(),
            "family": family.key(),
            "rows": table.rows.iter().map(census_row_json).collect::<Vec<_>>(),
        }),
        citations,
        negative: false,
        text,
    })
}

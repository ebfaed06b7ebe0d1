use std::time::Instant;

use serde_json::{json, Value};
use wreathvar::criteria::{
    decide_finite_pair, decide_pair, decide_sets, descriptor_of, parse_descriptor, parse_set, schreier_rank,
    shmelkin_necessary, Decision,
};
use wreathvar::embeddings::{kk_embedding, Transversal};
use wreathvar::laws::{check_law_with, discriminate, separate_by_law_with, LawOptions};
use wreathvar::structure::{
    center, derived_series, derived_subgroup, generate_subgroup, lower_central_series, Subgroup,
};
use wreathvar::varieties::{relatively_free, variety_membership, Membership};
use wreathvar::{parse_word, Budget, Error, Group, GroupElement, LawVerdict, Nilpotency, Word};

use crate::expr::{parse_group_expr, ExprError, GroupExpr};
use crate::report::Report;
use crate::suite;

/// Exit status for a successful command.
pub const EXIT_OK: i32 = 0;
/// `verify-paper` found a failing item.
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
/// The budget ran out, or `verify-paper` skipped an item.
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::Inconclusive(_) => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalSpec {
    Base,
    Center,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    Pair,
    Finite,
    Sets,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Info {
        expr: String,
    },
    Law {
        word: String,
        expr: String,
    },
    Separate {
        holds: String,
        fails: String,
        word: String,
    },
    Free {
        expr: String,
        rank: usize,
    },
    Member {
        h: String,
        g: String,
    },
    Kk {
        expr: String,
        normal: NormalSpec,
    },
    Criterion {
        kind: CriterionKind,
        left: String,
        right: String,
    },
    Shmelkin {
        a: String,
        b: String,
    },
    Schreier {
        n: u64,
        c: u32,
    },
    Discriminate {
        expr: String,
        words: String,
    },
    VerifyPaper {
        allow_skip: bool,
    },
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub budget: u64,
    pub seed: u64,
}

/// A finished command: the report and the process exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// What a command computed, before timing and budget are attached.
pub(crate) struct Body {
    pub inputs: Value,
    pub verdict: Value,
    pub trace: Vec<String>,
    pub certificate: Value,
    pub exit_code: i32,
}

impl Body {
    fn ok(inputs: Value, verdict: Value, trace: Vec<String>, certificate: Value) -> Body {
        Body {
            inputs,
            verdict,
            trace,
            certificate,
            exit_code: EXIT_OK,
        }
    }
}

pub(crate) struct Ctx {
    pub budget: Budget,
    pub seed: u64,
}

impl Ctx {
    fn group(&self, text: &str) -> Result<(GroupExpr, Group), CliError> {
        let e = parse_group_expr(text)?;
        let g = e.build(&self.budget)?;
        Ok((e, g))
    }

    fn law_options(&self) -> LawOptions {
        LawOptions {
            seed: self.seed,
            shortcuts: true,
        }
    }
}

pub fn run(command: &Command, argv: Vec<String>, opts: Options) -> Result<Outcome, CliError> {
    let ctx = Ctx {
        budget: Budget::new(opts.budget),
        seed: opts.seed,
    };
    let start = Instant::now();
    let mut body = match command {
        Command::Info { expr } => info(&ctx, expr)?,
        Command::Law { word, expr } => law(&ctx, word, expr)?,
        Command::Separate { holds, fails, word } => separate(&ctx, holds, fails, word)?,
        Command::Free { expr, rank } => free(&ctx, expr, *rank)?,
        Command::Member { h, g } => member(&ctx, h, g)?,
        Command::Kk { expr, normal } => kk(&ctx, expr, *normal)?,
        Command::Criterion { kind, left, right } => criterion(*kind, left, right)?,
        Command::Shmelkin { a, b } => shmelkin(&ctx, a, b)?,
        Command::Schreier { n, c } => schreier(*n, *c)?,
        Command::Discriminate { expr, words } => discriminate_cmd(&ctx, expr, words)?,
        Command::VerifyPaper { allow_skip } => suite::verify(&ctx, *allow_skip),
    };
    if let Value::Object(map) = &mut body.inputs {
        map.insert("budget".into(), json!(opts.budget));
        map.insert("seed".into(), json!(opts.seed));
    }
    Ok(Outcome {
        report: Report {
            command: argv,
            inputs: body.inputs,
            verdict: body.verdict,
            trace: body.trace,
            certificate: body.certificate,
            elapsed_ms: start.elapsed().as_millis() as u64,
            budget_used: ctx.budget.used(),
        },
        exit_code: body.exit_code,
    })
}

fn word(text: &str) -> Result<Word, CliError> {
    Ok(parse_word(text)?)
}

fn elements(xs: &[GroupElement]) -> Value {
    let map: serde_json::Map<String, Value> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| (format!("x{}", i + 1), json!(x.to_string())))
        .collect();
    Value::Object(map)
}

fn info(ctx: &Ctx, text: &str) -> Result<Body, CliError> {
    let (e, g) = ctx.group(text)?;
    let exponent = g.exponent()?;
    let abelian = g.is_abelian();
    let nilpotency = lower_central_series(&g)?.verdict;
    let derived = derived_series(&g)?;
    let solvable = derived.last().is_some_and(Subgroup::is_trivial);
    let centre = center(&g)?.order();
    let class = match &nilpotency {
        Nilpotency::Class(c) => format!("class {c}"),
        Nilpotency::NotNilpotent { .. } => "not nilpotent".into(),
    };
    let verdict = format!(
        "order {}, exponent {exponent}, {class}, {}",
        g.order(),
        if abelian { "abelian" } else { "non-abelian" }
    );
    let mut trace = vec![
        format!("lower central series: {nilpotency}"),
        format!(
            "derived series orders: {:?}",
            derived.iter().map(Subgroup::order).collect::<Vec<_>>()
        ),
        format!("centre has order {centre}"),
    ];
    let mut cert = json!({
        "order": g.order().to_string(),
        "exponent": exponent,
        "abelian": abelian,
        "nilpotency": nilpotency.to_string(),
        "derived_length": if solvable { json!(derived.len() - 1) } else { Value::Null },
        "center_order": centre,
    });
    if abelian && g.order_u64() != Some(1) {
        let d = descriptor_of(&g)?;
        trace.push(format!("descriptor {d}"));
        cert["descriptor"] = json!(d.to_string());
    }
    Ok(Body::ok(json!({ "group": e.to_string() }), json!(verdict), trace, cert))
}

fn law(ctx: &Ctx, word_text: &str, expr: &str) -> Result<Body, CliError> {
    let w = word(word_text)?;
    let (e, g) = ctx.group(expr)?;
    let inputs = json!({ "word": w.to_string(), "group": e.to_string() });
    let v = check_law_with(&g, &w, ctx.law_options());
    let trace = vec![format!("{w} ≡ 1 in {e}: {v}")];
    Ok(match v {
        LawVerdict::Holds { method } => Body::ok(
            inputs,
            json!("holds"),
            trace,
            json!({ "method": format!("{method:?}").to_lowercase() }),
        ),
        LawVerdict::Fails { witness, value } => Body::ok(
            inputs,
            json!("fails"),
            trace,
            json!({ "witness": elements(&witness), "value": value.to_string() }),
        ),
        LawVerdict::Unknown { reason } => Body {
            inputs,
            verdict: json!("unknown"),
            trace,
            certificate: json!({ "reason": reason }),
            exit_code: EXIT_BUDGET,
        },
    })
}

fn separate(ctx: &Ctx, holds: &str, fails: &str, word_text: &str) -> Result<Body, CliError> {
    let (eh, gh) = ctx.group(holds)?;
    let (ef, gf) = ctx.group(fails)?;
    let w = word(word_text)?;
    let inputs = json!({ "holds_in": eh.to_string(), "fails_in": ef.to_string(), "word": w.to_string() });
    Ok(match separate_by_law_with(&gh, &gf, &w, ctx.law_options())? {
        Some(cert) => Body::ok(
            inputs,
            json!("separated"),
            vec![cert.to_string()],
            json!({
                "word": cert.word.to_string(),
                "method": format!("{:?}", cert.method).to_lowercase(),
                "witness": elements(&cert.witness),
                "value": cert.value.to_string(),
            }),
        ),
        None => Body::ok(
            inputs,
            json!("not separated"),
            vec![format!("{w} does not hold in {eh} and fail in {ef}")],
            Value::Null,
        ),
    })
}

fn free(ctx: &Ctx, expr: &str, rank: usize) -> Result<Body, CliError> {
    let (e, g) = ctx.group(expr)?;
    let f = relatively_free(&g, rank)?;
    let fg = f.as_group()?;
    let exponent = fg.exponent()?;
    let trace = vec![
        format!(
            "generated by {rank} coordinate projections in {e}^{}",
            g.order_u64().unwrap_or(0).pow(rank as u32)
        ),
        format!("order {}, exponent {exponent}", f.order()),
    ];
    Ok(Body::ok(
        json!({ "group": e.to_string(), "rank": rank }),
        json!(f.order()),
        trace,
        json!({ "order": f.order(), "exponent": exponent, "abelian": fg.is_abelian() }),
    ))
}

fn member(ctx: &Ctx, h_text: &str, g_text: &str) -> Result<Body, CliError> {
    let (eh, h) = ctx.group(h_text)?;
    let (eg, g) = ctx.group(g_text)?;
    let inputs = json!({ "h": eh.to_string(), "g": eg.to_string() });
    let m = variety_membership(&h, &h.generators(), &g)?;
    let trace = vec![format!("{eh} in var({eg}): {m}")];
    Ok(match m {
        Membership::Member => Body::ok(inputs, json!("member"), trace, Value::Null),
        Membership::NonMember => Body::ok(inputs, json!("non-member"), trace, Value::Null),
        Membership::Inconclusive(why) => Body {
            inputs,
            verdict: json!("inconclusive"),
            trace,
            certificate: json!({ "reason": why }),
            exit_code: EXIT_BUDGET,
        },
    })
}

fn kk(ctx: &Ctx, expr: &str, spec: NormalSpec) -> Result<Body, CliError> {
    let (e, g) = ctx.group(expr)?;
    let (name, n) = match spec {
        NormalSpec::Base => {
            let gens = g
                .base_generator_payloads()
                .ok_or_else(|| CliError::Input(format!("{e} has no base subgroup")))?;
            let gens: Vec<GroupElement> = gens.iter().map(|p| g.element(p)).collect::<Result<_, _>>()?;
            ("base", generate_subgroup(&g, &gens, true)?)
        }
        NormalSpec::Center => ("center", center(&g)?),
        NormalSpec::Derived => ("derived", derived_subgroup(&g)?),
    };
    let mut phi = kk_embedding(&g, &n, Transversal::Canonical)?;
    let v = phi.verify(ctx.seed).clone();
    let verdict = if v.is_hom && v.is_injective {
        "embedding"
    } else {
        "not an embedding"
    };
    let trace = vec![
        format!(
            "N = {name} of order {}, quotient of order {}",
            n.order(),
            g.order_u64().unwrap_or(0) / n.order()
        ),
        format!("codomain {} of order {}", phi.codomain(), phi.codomain().order()),
        format!(
            "{} {} pairs checked: hom {}, injective {}",
            if v.exhaustive { "all" } else { "sampled" },
            v.pairs_checked,
            v.is_hom,
            v.is_injective
        ),
    ];
    Ok(Body::ok(
        json!({ "group": e.to_string(), "normal": name }),
        json!(verdict),
        trace,
        json!({
            "normal_order": n.order(),
            "codomain_order": phi.codomain().order().to_string(),
            "image_order": v.image_order,
            "is_hom": v.is_hom,
            "is_injective": v.is_injective,
            "pairs_checked": v.pairs_checked,
            "exhaustive": v.exhaustive,
        }),
    ))
}

fn decision_body(inputs: Value, d: &Decision) -> Body {
    Body::ok(
        inputs,
        json!(d.holds),
        d.trace(),
        serde_json::to_value(d).expect("decision serializes"),
    )
}

fn criterion(kind: CriterionKind, left: &str, right: &str) -> Result<Body, CliError> {
    match kind {
        CriterionKind::Pair => {
            let (a, b) = (parse_descriptor(left)?, parse_descriptor(right)?);
            let inputs = json!({ "a": a.to_string(), "b": b.to_string() });
            Ok(decision_body(inputs, &decide_pair(&a, &b)))
        }
        CriterionKind::Finite => {
            let (a, b) = (parse_descriptor(left)?, parse_descriptor(right)?);
            let holds = decide_finite_pair(&a, &b)?;
            let (ea, eb) = (a.exponent(), b.exponent());
            Ok(Body::ok(
                json!({ "a": a.to_string(), "b": b.to_string() }),
                json!(holds),
                vec![format!(
                    "exponents {ea} and {eb} are {}",
                    if holds { "coprime" } else { "not coprime" }
                )],
                Value::Null,
            ))
        }
        CriterionKind::Sets => {
            let (x, y) = (parse_set(left)?, parse_set(right)?);
            let inputs = json!({ "x": x.to_string(), "y": y.to_string() });
            Ok(decision_body(inputs, &decide_sets(&x, &y)))
        }
    }
}

fn shmelkin(ctx: &Ctx, a: &str, b: &str) -> Result<Body, CliError> {
    let (ea, ga) = ctx.group(a)?;
    let (eb, gb) = ctx.group(b)?;
    let r = shmelkin_necessary(&ga, &gb)?;
    let trace = if r.holds {
        vec!["B abelian, A nilpotent, exponents coprime: the necessary condition holds".to_string()]
    } else {
        r.reasons.clone()
    };
    Ok(Body::ok(
        json!({ "a": ea.to_string(), "b": eb.to_string() }),
        json!(r.holds),
        trace,
        serde_json::to_value(&r).expect("report serializes"),
    ))
}

fn schreier(n: u64, c: u32) -> Result<Body, CliError> {
    let t = schreier_rank(n, c)?;
    Ok(Body::ok(
        json!({ "n": n, "c": c }),
        json!(t),
        vec![format!("({n} - 1) * {n}^{c} + 1 = {t}")],
        Value::Null,
    ))
}

/// Splits at commas outside brackets, so `[x1,x2],x3` is two words.
pub fn split_words(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

fn discriminate_cmd(ctx: &Ctx, expr: &str, words_text: &str) -> Result<Body, CliError> {
    let (e, g) = ctx.group(expr)?;
    let words: Vec<Word> = split_words(words_text)
        .into_iter()
        .map(word)
        .collect::<Result<_, _>>()?;
    let shown: Vec<String> = words.iter().map(Word::to_string).collect();
    let inputs = json!({ "group": e.to_string(), "words": shown });
    Ok(match discriminate(&g, &words)? {
        Some(a) => Body::ok(
            inputs,
            json!("found"),
            vec![format!(
                "all {} words are nontrivial at the first assignment listed",
                words.len()
            )],
            json!({ "witness": elements(&a) }),
        ),
        None => Body::ok(
            inputs,
            json!("none"),
            vec![format!("no assignment in {e} makes every word nontrivial")],
            Value::Null,
        ),
    })
}

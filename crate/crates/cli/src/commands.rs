use std::fmt::Write as _;
use std::str::FromStr;

use hsums::algebra::algebraic_reduce;
use hsums::asymptotics::{
    asym_eval, route, series_from_kernel_to, Branch, ContinuationConfig, Continuator,
};
use hsums::expr::{eval_rational, parse, Env, Evaluator};
use hsums::identities::{basis_cumulative, basis_list, catalog, completeness, Catalog, Section, Verifier};
use hsums::mellin;
use hsums::num::{complex_abs, fmt_sci, Precision};
use hsums::specfun::SpecFun;
use hsums::{Error, IndexVector};
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use crate::args::{BranchArg, Cli, Variable, Verb};
use crate::points::{complex_list, int_list};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Fail = 1,
    Usage = 2,
    Inconclusive = 3,
}

pub struct Report {
    pub text: String,
    pub json: Value,
    pub status: Status,
    /// Diagnostics printed after the report.
    pub stderr: Vec<String>,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, status: Status::Ok, stderr: Vec::new() }
    }
}

pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::Quadrature { .. }) { Status::Inconclusive } else { Status::Usage };
        Self { status, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { status: Status::Usage, message: message.into() }
}

type Out = Result<Report, Failure>;

pub fn run(cli: &Cli) -> Out {
    let digits = cli.global.digits;
    let prec = Precision::digits(digits);
    match &cli.global.catalog {
        Some(_) if !matches!(cli.verb, Verb::Verify { .. }) => {
            return Err(usage("--catalog only applies to `verify`"));
        }
        _ => {}
    }
    match &cli.verb {
        Verb::Eval { expr, n } => eval(expr, n.as_deref(), prec),
        Verb::Mellin { atom, n } => mellin_cmd(atom, n, prec),
        Verb::Reduce { vectors } => reduce(vectors),
        Verb::Verify { section, n } => verify(cli, section, n, prec),
        Verb::Basis { weight, cumulative } => basis(*weight, *cumulative),
        Verb::Continue { vector, n, branch, check_shift } => continue_cmd(vector, n, *branch, *check_shift, prec),
        Verb::Constants => constants(prec),
        Verb::Asym { kernel, terms, variable, z } => asym(kernel, *terms, *variable, z.as_deref(), prec),
    }
}

fn eval(text: &str, n: Option<&str>, prec: Precision) -> Out {
    let expr = parse(text)?;
    let ns: Vec<Option<i64>> = match n {
        Some(list) => int_list(list).map_err(usage)?.into_iter().map(Some).collect(),
        None if expr.mentions_n() => return Err(usage(format!("`{expr}` depends on N; pass --N"))),
        None => vec![None],
    };
    let ev = Evaluator::new(prec);
    let mut text = String::new();
    let mut results = Vec::new();
    for n in ns {
        let env = n.map(Env::at_n).unwrap_or_default();
        let (exact, value) = match eval_rational(&expr, &env)? {
            Some(q) => (true, q.to_string()),
            None => (false, fmt_sci(&ev.value(&expr, &env)?, prec.requested() as usize)),
        };
        match n {
            Some(n) => writeln!(text, "N={n}  {value}"),
            None => writeln!(text, "{value}"),
        }
        .expect("write to string");
        results.push(json!({ "N": n, "exact": exact, "value": value }));
    }
    let json = json!({
        "schema": "hsums-eval/1",
        "expr": expr.to_string(),
        "digits": prec.requested(),
        "results": results,
    });
    Ok(Report::ok(text, json))
}

fn mellin_cmd(text: &str, n: &str, prec: Precision) -> Out {
    let atom = mellin::atom(text).or_else(|_| mellin::atom(&format!("{text}(N)")))?;
    let ns = int_list(n).map_err(usage)?;
    let ev = Evaluator::new(prec);
    let bits = ev.bits();
    let mut out = String::new();
    let mut results = Vec::new();
    for n in ns {
        let arg = atom.arg.at(&Rational::from(n));
        let v = ev.mellin().eval(&atom, &Float::with_val(bits, &arg))?;
        let value = fmt_sci(&v.value, prec.requested() as usize);
        writeln!(out, "N={n}  {value}").expect("write to string");
        results.push(json!({ "N": n, "value": value, "error_estimate": fmt_sci(&v.error, 3), "level": v.level }));
    }
    let json = json!({
        "schema": "hsums-mellin/1",
        "atom": hsums::expr::Expr::Mellin(Box::new(atom)).to_string(),
        "digits": prec.requested(),
        "results": results,
    });
    Ok(Report::ok(out, json))
}

fn vector(s: &str) -> Result<IndexVector, Failure> {
    IndexVector::from_str(s).map_err(Failure::from)
}

fn reduce(vectors: &[String]) -> Out {
    let mut text = String::new();
    let mut items = Vec::new();
    for s in vectors {
        let v = vector(s)?;
        let p = algebraic_reduce(&v);
        writeln!(text, "S[{v}] = {p}").expect("write to string");
        items.push(json!({ "vector": v.entries(), "reduction": serde_json::to_value(&p).expect("serializes") }));
    }
    Ok(Report::ok(text, json!({ "schema": "hsums-reduce/1", "results": items })))
}

fn verify(cli: &Cli, section: &str, n: &str, prec: Precision) -> Out {
    let section = Section::from_str(section).map_err(|e| usage(e.to_string()))?;
    let ns = int_list(n).map_err(usage)?;
    let loaded;
    let cat: &Catalog = match &cli.global.catalog {
        Some(path) => {
            loaded = Catalog::load(path)?;
            &loaded
        }
        None => catalog(),
    };
    let rels = cat.select(section);
    if rels.is_empty() {
        return Err(usage("the selected section is empty"));
    }
    let summary = Verifier::new(prec).verify_all(&rels, &ns)?;
    let mut json = serde_json::to_value(&summary).expect("summary serializes");
    if section == Section::All {
        json["completeness"] = serde_json::to_value(completeness(cat)).expect("serializes");
    }
    let status = if summary.failed > 0 {
        Status::Fail
    } else if summary.inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    let stderr = summary
        .failures()
        .map(|r| {
            let res = r.max_residual.as_ref().map(|v| fmt_sci(v, 3)).unwrap_or_else(|| "-".into());
            format!("{:?}: {} (max residual {res})", r.outcome, r.id).to_lowercase()
        })
        .collect();
    Ok(Report { text: summary.to_text(), json, status, stderr })
}

fn basis(weight: u32, cumulative: bool) -> Out {
    let list = if cumulative { basis_cumulative(weight) } else { basis_list(weight) };
    let mut text = String::new();
    for b in &list {
        writeln!(text, "{}", b.kernel()).expect("write to string");
    }
    let json = json!({
        "schema": "hsums-basis/1",
        "weight": weight,
        "cumulative": cumulative,
        "count": list.len(),
        "functions": serde_json::to_value(&list).expect("serializes"),
    });
    Ok(Report::ok(text, json))
}

fn fmt_complex(z: &Complex, digits: usize) -> (String, String) {
    let re = Float::with_val(z.prec().0, z.real());
    let im = Float::with_val(z.prec().0, z.imag());
    (fmt_sci(&re, digits), fmt_sci(&im, digits))
}

fn continue_cmd(text: &str, n: &str, branch: Option<BranchArg>, check_shift: bool, prec: Precision) -> Out {
    let v = vector(text)?;
    let how = route(&v)?;
    let points = complex_list(n).map_err(usage)?;
    let engine = Continuator::new(ContinuationConfig::new(prec, Branch::Even))?;
    let digits = prec.requested() as usize;
    let mut out = String::new();
    let mut results = Vec::new();
    for (re, im) in points {
        let z = engine.complex(re, im);
        let b = match branch {
            Some(BranchArg::Even) => Branch::Even,
            Some(BranchArg::Odd) => Branch::Odd,
            None if im == 0.0 && re.fract() == 0.0 => Branch::of(re as i64),
            None => Branch::Even,
        };
        let value = engine.evaluate(&v, &z, b, 0)?;
        let (vr, vi) = fmt_complex(&value, digits);
        let mut item = json!({
            "N": { "re": re, "im": im },
            "branch": b.to_string(),
            "shift": engine.shift_for(&z),
            "value": { "re": vr, "im": vi },
        });
        write!(out, "N={re}{im:+}i  branch={b}  {vr} + ({vi})i").expect("write to string");
        if check_shift {
            let other = engine.evaluate(&v, &z, b, 1)?;
            let d = complex_abs(&Complex::with_val(engine.bits(), &value - &other));
            item["shift_difference"] = json!(fmt_sci(&d, 3));
            write!(out, "  shift difference {}", fmt_sci(&d, 3)).expect("write to string");
        }
        out.push('\n');
        results.push(item);
    }
    let cfg = engine.config();
    let json = json!({
        "schema": "hsums-continue/1",
        "vector": v.entries(),
        "route": how.to_string(),
        "digits": prec.requested(),
        "z_min": cfg.z_min,
        "terms": cfg.terms,
        "results": results,
    });
    Ok(Report::ok(format!("S[{v}] via {how} (z_min {}, {} terms)\n{out}", cfg.z_min, cfg.terms), json))
}

fn constants(prec: Precision) -> Out {
    let table = SpecFun::shared(prec).constants_table()?;
    let w = table.iter().map(|c| c.name.len()).max().unwrap_or(4);
    let mut text = String::new();
    for c in &table {
        writeln!(text, "{:<w$}  {}", c.name, c.value).expect("write to string");
    }
    let json = json!({
        "schema": "hsums-constants/1",
        "digits": prec.requested(),
        "constants": serde_json::to_value(&table).expect("serializes"),
    });
    Ok(Report::ok(text, json))
}

fn asym(text: &str, terms: usize, variable: Variable, z: Option<&str>, prec: Precision) -> Out {
    if !(1..=150).contains(&terms) {
        return Err(usage("--terms must be in 1..=150"));
    }
    let kernel = parse(text)?;
    let mut series = series_from_kernel_to(&kernel, terms + 4)?;
    if variable == Variable::N {
        series = series.reexpand(0);
    }
    let var = if variable == Variable::N { "N" } else { "N+1" };
    let base = if variable == Variable::N { "N" } else { "(N+1)" };
    let mut out = format!("M[{kernel}] ~ sum_k c_k/{base}^k\n");
    let entries: Vec<_> = series.entries().into_iter().take(terms).collect();
    for e in &entries {
        writeln!(out, "{:>3}  {}", e.k, e.coeff).expect("write to string");
    }
    let mut json = json!({
        "schema": "hsums-asym/1",
        "kernel": kernel.to_string(),
        "variable": var,
        "coefficients": serde_json::to_value(&entries).expect("serializes"),
    });
    if let Some(list) = z {
        let bits = prec.bits();
        let mut evals = Vec::new();
        for (re, im) in complex_list(list).map_err(usage)? {
            let point = Complex::with_val(bits, (re, im));
            let r = asym_eval(&series, &point, terms)?;
            let (vr, vi) = fmt_complex(&r.value, prec.requested() as usize);
            let bound = fmt_sci(&r.bound, 3);
            writeln!(out, "z={re}{im:+}i  {vr} + ({vi})i  (first omitted term {bound})").expect("write to string");
            evals.push(json!({ "z": { "re": re, "im": im }, "value": { "re": vr, "im": vi }, "bound": bound }));
        }
        json["evaluations"] = Value::Array(evals);
    }
    Ok(Report::ok(out, json))
}

use std::fmt::Write as _;

use rug::{Float, Rational};
use serde::Serialize;

use super::catalog::{Domain, Relation};
use crate::error::{Error, Result};
use crate::expr::{eval_rational, term_weights, Env, Evaluator};
use crate::num::{fmt_sci, serialize_float, Precision};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Numerics did not settle; neither pass nor fail.
    Inconclusive,
}

/// A point a relation is checked at.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    N(i64),
    X(Rational),
    Constant,
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::N(n) => write!(f, "N={n}"),
            Point::X(x) => write!(f, "x={x}"),
            Point::Constant => f.write_str("const"),
        }
    }
}

impl Point {
    fn env(&self) -> Env {
        match self {
            Point::N(n) => Env::at_n(*n),
            Point::X(x) => Env::at_x(x.clone()),
            Point::Constant => Env::default(),
        }
    }
}

fn ser_opt_float<S: serde::Serializer>(v: &Option<Float>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(f) => serialize_float(f, s),
        None => s.serialize_none(),
    }
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointResult {
    #[serde(serialize_with = "ser_display")]
    pub point: Point,
    /// `|lhs - rhs|`; absent when evaluation failed.
    #[serde(serialize_with = "ser_opt_float")]
    pub residual: Option<Float>,
    /// Both sides were rational and compared exactly.
    pub exact: bool,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub group: String,
    pub superseded: bool,
    pub digits: u32,
    #[serde(serialize_with = "serialize_float")]
    pub tolerance: Float,
    #[serde(serialize_with = "ser_opt_float")]
    pub max_residual: Option<Float>,
    pub outcome: Outcome,
    pub points: Vec<PointResult>,
}

impl VerificationReport {
    fn new(rel: &Relation, prec: Precision, points: Vec<PointResult>) -> Self {
        let outcome = if points.iter().any(|p| p.outcome == Outcome::Fail) {
            Outcome::Fail
        } else if points.iter().any(|p| p.outcome == Outcome::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        let max_residual = points.iter().filter_map(|p| p.residual.as_ref()).max_by(|a, b| a.total_cmp(b)).cloned();
        Self {
            id: rel.id.clone(),
            group: rel.group.to_string(),
            superseded: !rel.is_authoritative(),
            digits: prec.requested(),
            tolerance: prec.tolerance(),
            max_residual,
            outcome,
            points,
        }
    }
}

/// Results over a set of relations.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema: &'static str,
    pub digits: u32,
    pub ns: Vec<i64>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    /// Literal transcriptions that fail while their corrected records pass.
    pub superseded_failing: usize,
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    fn new(prec: Precision, ns: &[i64], reports: Vec<VerificationReport>) -> Self {
        let auth = || reports.iter().filter(|r| !r.superseded);
        Self {
            schema: "hsums-verify/1",
            digits: prec.requested(),
            ns: ns.to_vec(),
            passed: auth().filter(|r| r.outcome == Outcome::Pass).count(),
            failed: auth().filter(|r| r.outcome == Outcome::Fail).count(),
            inconclusive: auth().filter(|r| r.outcome == Outcome::Inconclusive).count(),
            superseded_failing: reports.iter().filter(|r| r.superseded && r.outcome != Outcome::Pass).count(),
            reports,
        }
    }

    /// Every authoritative relation passed.
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.inconclusive == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.superseded && r.outcome != Outcome::Pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = self.reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        let _ = writeln!(s, "{:<w$}  {:<10}  {:>12}  outcome", "id", "group", "max |res|");
        for r in &self.reports {
            let res = r.max_residual.as_ref().map(|v| fmt_sci(v, 3)).unwrap_or_else(|| "-".into());
            let mut outcome = match r.outcome {
                Outcome::Pass => "pass".to_string(),
                Outcome::Fail => "FAIL".to_string(),
                Outcome::Inconclusive => "inconclusive".to_string(),
            };
            if r.superseded {
                outcome.push_str(" (superseded)");
            }
            if let Some(e) = r.points.iter().find_map(|p| p.error.as_ref()) {
                let _ = write!(outcome, ": {e}");
            }
            let _ = writeln!(s, "{:<w$}  {:<10}  {:>12}  {}", r.id, r.group, res, outcome);
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} inconclusive at {} digits; {} superseded transcriptions do not hold",
            self.passed, self.failed, self.inconclusive, self.digits, self.superseded_failing
        );
        s
    }
}

/// Checks relations at one working precision.
#[derive(Debug)]
pub struct Verifier {
    eval: Evaluator,
    prec: Precision,
}

impl Verifier {
    pub fn new(prec: Precision) -> Self {
        Self { eval: Evaluator::new(prec), prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.eval
    }

    fn points(rel: &Relation, ns: &[i64]) -> Vec<Point> {
        match &rel.domain {
            Domain::N => ns.iter().map(|&n| Point::N(n)).collect(),
            Domain::X(xs) => xs.iter().cloned().map(Point::X).collect(),
            Domain::Constant => vec![Point::Constant],
        }
    }

    /// One side minus the other at one point.
    pub fn check_point(&self, rel: &Relation, point: &Point) -> PointResult {
        let env = point.env();
        let bits = self.eval.bits();
        let tol = self.prec.tolerance();
        let exact = (|| -> Result<Option<Rational>> {
            let (Some(l), Some(r)) = (eval_rational(&rel.lhs, &env)?, eval_rational(&rel.rhs, &env)?) else {
                return Ok(None);
            };
            Ok(Some(l - r))
        })();
        let numeric = match exact {
            Ok(Some(d)) => {
                let ok = d == 0;
                return PointResult {
                    point: point.clone(),
                    residual: Some(Float::with_val(bits, d.abs())),
                    exact: true,
                    outcome: if ok { Outcome::Pass } else { Outcome::Fail },
                    error: None,
                };
            }
            Ok(None) => self.eval.value(&rel.lhs, &env).and_then(|l| Ok(l - self.eval.value(&rel.rhs, &env)?)),
            Err(e) => Err(e),
        };
        match numeric {
            Ok(d) => {
                let r = d.abs();
                let outcome = if r.is_finite() && r < tol { Outcome::Pass } else { Outcome::Fail };
                PointResult { point: point.clone(), residual: Some(r), exact: false, outcome, error: None }
            }
            Err(e) => PointResult {
                point: point.clone(),
                residual: None,
                exact: false,
                outcome: if matches!(e, Error::Quadrature { .. }) { Outcome::Inconclusive } else { Outcome::Fail },
                error: Some(e.to_string()),
            },
        }
    }

    /// Checks `rel` at every `N` in `ns` (or at its own points for
    /// `x`-domain and constant relations).
    pub fn verify(&self, rel: &Relation, ns: &[i64]) -> Result<VerificationReport> {
        if let Some(n) = ns.iter().find(|&&n| n < 1) {
            return Err(Error::Domain(format!("verification needs N >= 1, got {n}")));
        }
        let points = Self::points(rel, ns);
        let results = par::map(&points, |p| self.check_point(rel, p));
        Ok(VerificationReport::new(rel, self.prec, results))
    }

    /// Checks many relations, spreading all `(relation, point)` pairs over
    /// the thread pool.
    pub fn verify_all(&self, rels: &[&Relation], ns: &[i64]) -> Result<Summary> {
        if let Some(n) = ns.iter().find(|&&n| n < 1) {
            return Err(Error::Domain(format!("verification needs N >= 1, got {n}")));
        }
        let jobs: Vec<(usize, Point)> = rels
            .iter()
            .enumerate()
            .flat_map(|(i, r)| Self::points(r, ns).into_iter().map(move |p| (i, p)))
            .collect();
        let results = par::map(&jobs, |(i, p)| (*i, self.check_point(rels[*i], p)));
        let mut per: Vec<Vec<PointResult>> = vec![Vec::new(); rels.len()];
        for (i, r) in results {
            per[i].push(r);
        }
        let reports = rels.iter().zip(per).map(|(r, pts)| VerificationReport::new(r, self.prec, pts)).collect();
        Ok(Summary::new(self.prec, ns, reports))
    }
}

/// The common weight of every additive term on both sides.
pub fn check_weight(rel: &Relation) -> Result<i32> {
    let mut ws = term_weights(&rel.lhs)?;
    ws.extend(term_weights(&rel.rhs)?);
    let w = ws[0];
    if ws.iter().any(|&v| v != w) {
        return Err(Error::Catalog(format!("{}: unbalanced weights {ws:?}", rel.id)));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::catalog;

    #[test]
    fn exact_and_numeric_points() {
        let v = Verifier::new(Precision::digits(30));
        let c = catalog();
        let r = v.verify(c.get("S3,3.euler").unwrap(), &[1, 4, 9]).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert!(r.points.iter().all(|p| p.exact));
        let r = v.verify(c.get("S-5,1").unwrap(), &[3]).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        assert!(!r.points[0].exact);
        assert!(v.verify(c.get("S-5,1").unwrap(), &[0]).is_err());
    }

    #[test]
    fn printed_variants_fail() {
        let v = Verifier::new(Precision::digits(30));
        let c = catalog();
        for id in ["S3,1,1,1.printed", "S-4,2.printed", "S-3,-3.printed"] {
            let r = v.verify(c.get(id).unwrap(), &[1, 2]).unwrap();
            assert_eq!(r.outcome, Outcome::Fail, "{id}");
            assert!(r.superseded);
        }
    }

    #[test]
    fn empty_n_list_is_trivially_fine() {
        let v = Verifier::new(Precision::digits(20));
        let rels: Vec<_> = catalog().select(crate::identities::Section::Depth(5));
        let s = v.verify_all(&rels, &[]).unwrap();
        assert!(s.all_pass());
        assert!(s.reports.iter().all(|r| r.points.is_empty()));
    }

    #[test]
    fn weights_balance() {
        for r in catalog().relations() {
            let w = check_weight(r).unwrap_or_else(|e| panic!("{e}"));
            if r.lhs_sum().is_some() {
                assert_eq!(w, 6, "{}", r.id);
            }
        }
    }
}

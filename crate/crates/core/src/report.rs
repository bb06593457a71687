//! Analysis reports shared by the CLI and by fixtures. The JSON form and the
//! text form are rendered from the same [`Report`].

use std::fmt::Write as _;

use serde::Serialize;

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::format::{ratfun_to_string, scalar_to_string};
use crate::pencilroots::{pencil_maximal_set, Pencil};
use crate::poleremoval::{coalescent_maximal_set, Recovery};
use crate::ratfun::Point;
use crate::ratmat::{left_minimal_indices, minimal_basis, smith_mcmillan_at, RatMat};
use crate::rootvec::{at_infinity, eigenvectors_of, maximal_set, MaximalSet};
use crate::scalar::{Context, Scalar};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorEntry {
    pub order: usize,
    pub vector: Vec<String>,
    /// The vector evaluated at the point.
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pipeline {
    pub recovery: String,
    pub lambda: Vec<String>,
    pub d: usize,
    pub m: usize,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub backend: String,
    pub point: String,
    pub normal_rank: usize,
    /// Rank of R(λ0); absent when λ0 is a pole.
    pub rank_at_point: Option<usize>,
    pub pole_order: usize,
    pub sigmas: Vec<i64>,
    pub minimal_indices_right: Vec<usize>,
    pub minimal_indices_left: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_set: Option<Vec<VectorEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_kernel: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<Pipeline>,
}

fn strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(scalar_to_string).collect()
}

fn columns<S: Scalar>(m: &Mat<S>) -> Vec<Vec<String>> {
    (0..m.ncols()).map(|j| strings(&m.col(j))).collect()
}

fn point_from<S: Scalar>(p: &Point<S>) -> String {
    p.to_string()
}

/// Sigmas, ranks and minimal indices of `r` at a point.
pub fn structure_report<S: Scalar>(r: &RatMat<S>, at: &Point<S>, ctx: &Context) -> Result<Report> {
    let local = smith_mcmillan_at(r, at, ctx)?;
    let (rank_at_point, pole_order) = match at {
        Point::Finite(x) => (r.eval(x).map(|m| m.rank(ctx)), r.pole_order(x, ctx)),
        Point::Infinity => {
            let rr = r.substitute_reciprocal();
            (rr.eval(&S::zero()).map(|m| m.rank(ctx)), rr.pole_order(&S::zero(), ctx))
        }
    };
    Ok(Report {
        schema: SCHEMA,
        backend: S::NAME.to_string(),
        point: point_from(at),
        normal_rank: r.normal_rank(ctx),
        rank_at_point,
        pole_order,
        sigmas: local.sigmas,
        minimal_indices_right: minimal_basis(r, ctx)?.indices,
        minimal_indices_left: left_minimal_indices(r, ctx)?,
        route: None,
        maximal_set: None,
        local_kernel: None,
        eigenvectors: None,
        pipeline: None,
    })
}

fn attach_set<S: Scalar>(report: &mut Report, set: &MaximalSet<S>, ctx: &Context) {
    report.maximal_set = Some(
        set.vectors
            .iter()
            .map(|v| VectorEntry {
                order: v.order,
                vector: v.vec.iter().map(ratfun_to_string).collect(),
                value: strings(&v.value()),
            })
            .collect(),
    );
    report.local_kernel = Some(columns(&set.kernel));
    report.eigenvectors = Some(
        eigenvectors_of(set, false, ctx)
            .into_iter()
            .map(|e| strings(&e.representative))
            .collect(),
    );
}

/// Maximal set at the point. Poles are handled by the feedback pipeline,
/// infinity by the reciprocal substitution.
pub fn rootvectors_report<S: Scalar>(
    r: &RatMat<S>,
    at: &Point<S>,
    recovery: Recovery,
    ctx: &Context,
) -> Result<Report> {
    let mut report = structure_report(r, at, ctx)?;
    match at {
        Point::Infinity => {
            report.route = Some("infinity".into());
            attach_set(&mut report, &at_infinity(r, ctx)?, ctx);
        }
        Point::Finite(_) if report.pole_order > 0 => return coalescent_report(r, at, recovery, ctx),
        Point::Finite(x) => {
            report.route = Some("direct".into());
            attach_set(&mut report, &maximal_set(r, x, ctx)?, ctx);
        }
    }
    Ok(report)
}

/// The feedback pipeline, whether or not the point is a pole.
pub fn coalescent_report<S: Scalar>(
    r: &RatMat<S>,
    at: &Point<S>,
    recovery: Recovery,
    ctx: &Context,
) -> Result<Report> {
    let Point::Finite(x) = at else {
        return Err(Error::Precondition("the feedback pipeline needs a finite point".into()));
    };
    let mut report = structure_report(r, at, ctx)?;
    let run = coalescent_maximal_set(r, x, recovery, ctx)?;
    report.route = Some("coalescent".into());
    attach_set(&mut report, &run.set, ctx);
    report.pipeline = Some(Pipeline {
        recovery: match run.recovery {
            Recovery::Truncated => "truncated",
            Recovery::Exact => "exact",
        }
        .into(),
        lambda: strings(&run.lambda),
        d: run.d,
        m: run.m,
        log: run.log,
    });
    Ok(report)
}

/// Root polynomials of a pencil at its point, found by the Toeplitz search.
pub fn pencil_report<S: Scalar>(p: &Pencil<S>, ctx: &Context) -> Result<Report> {
    let r = p.to_ratmat();
    let set = pencil_maximal_set(p, ctx)?;
    let mut report = structure_report(&r, &Point::Finite(p.at.clone()), ctx)?;
    report.route = Some("pencil".into());
    attach_set(&mut report, &set, ctx);
    Ok(report)
}

fn list<T: ToString>(v: &[T]) -> String {
    if v.is_empty() {
        "none".into()
    } else {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
    }
}

fn bracket(v: &[String]) -> String {
    format!("[{}]", v.join(", "))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "point: {} ({} backend)", self.point, self.backend);
        let _ = writeln!(s, "normal rank: {}", self.normal_rank);
        match self.rank_at_point {
            Some(k) => {
                let _ = writeln!(s, "rank at point: {k}");
            }
            None => {
                let _ = writeln!(s, "rank at point: pole of order {}", self.pole_order);
            }
        }
        let _ = writeln!(s, "sigmas: ({})", self.sigmas.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        let _ = writeln!(s, "right minimal indices: {}", list(&self.minimal_indices_right));
        let _ = writeln!(s, "left minimal indices: {}", list(&self.minimal_indices_left));
        if let Some(route) = &self.route {
            let _ = writeln!(s, "route: {route}");
        }
        if let Some(set) = &self.maximal_set {
            if set.is_empty() {
                let _ = writeln!(s, "maximal set: empty (not an eigenvalue)");
            } else {
                let _ = writeln!(s, "maximal set:");
                for v in set {
                    let _ = writeln!(s, "  order {}: {}  value {}", v.order, bracket(&v.vector), bracket(&v.value));
                }
            }
        }
        if let Some(k) = &self.local_kernel {
            if !k.is_empty() {
                let _ = writeln!(s, "local kernel at point:");
                for v in k {
                    let _ = writeln!(s, "  {}", bracket(v));
                }
            }
        }
        if let Some(ev) = &self.eigenvectors {
            if !ev.is_empty() {
                let _ = writeln!(s, "eigenvectors:");
                for v in ev {
                    let _ = writeln!(s, "  {}", bracket(v));
                }
            }
        }
        if let Some(p) = &self.pipeline {
            let _ = writeln!(s, "pipeline ({} recovery): d = {}, m = {}", p.recovery, p.d, p.m);
            for line in &p.log {
                let _ = writeln!(s, "  {line}");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_matrix_rows;
    use crate::scalar::{Exact, Float};

    fn rm<S: Scalar>(src: &str) -> RatMat<S> {
        RatMat::new(parse_matrix_rows(src).unwrap()).unwrap()
    }

    fn zero<S: Scalar>() -> Point<S> {
        Point::Finite(S::zero())
    }

    #[test]
    fn structure_of_small_examples() {
        let ctx = Context::default();
        let r = rm::<Exact>("1, 0; 1/l, 1");
        let rep = structure_report(&r, &zero(), &ctx).unwrap();
        assert_eq!(rep.sigmas, vec![1, -1]);
        assert_eq!(rep.rank_at_point, None);
        assert!(rep.minimal_indices_right.is_empty() && rep.minimal_indices_left.is_empty());

        let rep = structure_report(&rm::<Exact>("l, l^2"), &zero(), &ctx).unwrap();
        assert_eq!(rep.sigmas, vec![1]);
        assert_eq!(rep.minimal_indices_right, vec![1]);
        assert_eq!(rep.rank_at_point, Some(0));
    }

    #[test]
    fn rootvector_routes() {
        let ctx = Context::default();
        let r = rm::<Exact>("1, 0; 1/l, 1");
        let rep = rootvectors_report(&r, &zero(), Recovery::Truncated, &ctx).unwrap();
        assert_eq!(rep.route.as_deref(), Some("coalescent"));
        let set = rep.maximal_set.as_ref().unwrap();
        assert_eq!(set[0].vector, vec!["λ".to_string(), "λ - 1".to_string()]);
        assert!(rep.to_text().contains("pipeline (truncated recovery): d = 1, m = 1"));

        let rep = rootvectors_report(&rm::<Exact>("1, l; 0, 1"), &Point::Infinity, Recovery::Truncated, &ctx).unwrap();
        assert_eq!(rep.route.as_deref(), Some("infinity"));
        assert_eq!(rep.maximal_set.unwrap()[0].order, 1);

        let rep = rootvectors_report(&rm::<Exact>("1, 0; 0, 1"), &zero(), Recovery::Truncated, &ctx).unwrap();
        assert_eq!(rep.route.as_deref(), Some("direct"));
        assert!(rep.maximal_set.unwrap().is_empty());
    }

    #[test]
    fn json_and_text_agree() {
        let ctx = Context::default();
        let r = rm::<Float>("l^2, l; 0, l^2");
        let rep = rootvectors_report(&r, &zero(), Recovery::Truncated, &ctx).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        let text = rep.to_text();
        for entry in v["maximal_set"].as_array().unwrap() {
            assert!(text.contains(&format!("order {}:", entry["order"])));
            for x in entry["vector"].as_array().unwrap() {
                assert!(text.contains(x.as_str().unwrap()));
            }
        }
        assert!(coalescent_report(&r, &Point::Infinity, Recovery::Exact, &ctx).is_err());
    }
}

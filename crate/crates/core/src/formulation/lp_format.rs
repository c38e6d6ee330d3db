//! CPLEX LP text output.
//!
//! Coefficients with a terminating decimal expansion are written exactly.
//! Others are written to 17 significant digits, preceded by a comment line
//! `\ exact <where>: <p/q>` so the exact value survives in the file.

use std::collections::HashSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lp::{LinearModel, ObjSense, Relation, VarKind};
use crate::rational::Rational;

const WRAP: usize = 100;

fn number(r: &Rational, place: impl FnOnce() -> String, notes: &mut Vec<String>) -> String {
    if !r.is_terminating_decimal() {
        notes.push(format!("\\ exact {}: {r}", place()));
    }
    r.to_decimal_string()
}

fn check_names(model: &LinearModel) -> Result<()> {
    let mut seen = HashSet::new();
    for v in &model.vars {
        if v.name.is_empty() || !seen.insert(v.name.as_str()) {
            return Err(Error::NameCollision(format!("variable name {:?} is empty or repeated", v.name)));
        }
    }
    let mut rows = HashSet::new();
    for c in &model.constraints {
        if c.name.is_empty() || !rows.insert(c.name.as_str()) {
            return Err(Error::NameCollision(format!("row name {:?} is empty or repeated", c.name)));
        }
    }
    if rows.contains("obj") {
        return Err(Error::NameCollision("row name \"obj\" is reserved for the objective".into()));
    }
    Ok(())
}

/// Writes `label: t1 + t2 ...` with continuation lines, returning comment notes.
fn linear(out: &mut String, label: &str, terms: &[(usize, Rational)], model: &LinearModel, tail: &str) -> Vec<String> {
    let mut notes = Vec::new();
    let mut pieces = Vec::new();
    for (k, (i, c)) in terms.iter().enumerate() {
        let name = &model.vars[*i].name;
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let coef = if mag.is_one() {
            String::new()
        } else {
            format!("{} ", number(&mag, || format!("{label} {name}"), &mut notes))
        };
        if k == 0 && sign == "+" {
            pieces.push(format!("{coef}{name}"));
        } else {
            pieces.push(format!("{sign} {coef}{name}"));
        }
    }
    if !tail.is_empty() {
        pieces.push(tail.to_string());
    }
    let mut line = format!(" {label}:");
    let mut lines = Vec::new();
    for p in pieces {
        if line.len() + 1 + p.len() > WRAP && line.trim_start().len() > label.len() + 1 {
            lines.push(std::mem::replace(&mut line, "  ".to_string()));
            line.push_str(&p);
        } else {
            line.push(' ');
            line.push_str(&p);
        }
    }
    lines.push(line);
    for n in &notes {
        out.push_str(n);
        out.push('\n');
    }
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    notes
}

pub fn emit_lp(model: &LinearModel) -> Result<String> {
    check_names(model)?;
    let mut out = String::new();
    out.push_str(match model.objective.sense {
        ObjSense::Minimize => "Minimize\n",
        ObjSense::Maximize => "Maximize\n",
    });
    let constant = &model.objective.constant;
    let tail = if constant.is_zero() {
        String::new()
    } else {
        let mut notes = Vec::new();
        let s = number(&constant.abs(), || "obj constant".into(), &mut notes);
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
        let sign = if constant.is_negative() { "-" } else { "+" };
        if model.objective.terms.is_empty() && sign == "+" {
            s
        } else {
            format!("{sign} {s}")
        }
    };
    linear(&mut out, "obj", &model.objective.terms, model, &tail);

    out.push_str("Subject To\n");
    for c in &model.constraints {
        let op = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let mut notes = Vec::new();
        let rhs = number(&c.rhs, || format!("{} rhs", c.name), &mut notes);
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
        let terms: Vec<(usize, Rational)> =
            if c.terms.is_empty() && !model.vars.is_empty() { vec![(0, Rational::zero())] } else { c.terms.clone() };
        linear(&mut out, &c.name, &terms, model, &format!("{op} {rhs}"));
    }

    out.push_str("Bounds\n");
    for v in &model.vars {
        let binary_default = v.kind == VarKind::Binary
            && v.lower.as_ref().is_some_and(|l| l.is_zero())
            && v.upper.as_ref().is_some_and(|u| u.is_one());
        if binary_default {
            continue;
        }
        let mut notes = Vec::new();
        let line = match (&v.lower, &v.upper) {
            (None, None) => format!(" {} free", v.name),
            (Some(l), None) if l.is_zero() => continue,
            (Some(l), None) => format!(" {} >= {}", v.name, number(l, || format!("{} lower", v.name), &mut notes)),
            (None, Some(u)) => {
                format!(" -inf <= {} <= {}", v.name, number(u, || format!("{} upper", v.name), &mut notes))
            }
            (Some(l), Some(u)) => format!(
                " {} <= {} <= {}",
                number(l, || format!("{} lower", v.name), &mut notes),
                v.name,
                number(u, || format!("{} upper", v.name), &mut notes)
            ),
        };
        for n in notes {
            out.push_str(&n);
            out.push('\n');
        }
        out.push_str(&line);
        out.push('\n');
    }

    for (title, kind) in [("Binary", VarKind::Binary), ("General", VarKind::Integer)] {
        let names: Vec<&str> = model.vars.iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            continue;
        }
        writeln!(out, "{title}").unwrap();
        for chunk in names.chunks(8) {
            writeln!(out, " {}", chunk.join(" ")).unwrap();
        }
    }
    out.push_str("End\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Objective;

    #[test]
    fn one_free_bounded_variable() {
        let mut m = LinearModel::new();
        m.add_bounded("x", Rational::zero(), Rational::one());
        let text = emit_lp(&m).unwrap();
        assert_eq!(text, "Minimize\n obj:\nSubject To\nBounds\n 0 <= x <= 1\nEnd\n");
    }

    #[test]
    fn non_terminating_coefficients_keep_an_exact_comment() {
        let mut m = LinearModel::new();
        let x = m.add_nonneg("x");
        let y = m.add_var("y", Some(Rational::zero()), Some(Rational::one()), VarKind::Binary);
        m.add_constraint(
            "c1",
            vec![(x, Rational::new(1, 3)), (y, Rational::from_int(-2))],
            Relation::Ge,
            Rational::new(5, 2),
        );
        m.set_objective(Objective::maximize(vec![(x, Rational::one())]));
        let text = emit_lp(&m).unwrap();
        assert!(text.starts_with("Maximize\n obj: x\n"));
        assert!(text.contains("\\ exact c1 x: 1/3\n c1: 0.33333333333333333 x - 2 y >= 2.5\n"), "{text}");
        assert!(text.contains("Binary\n y\n"));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut m = LinearModel::new();
        m.add_nonneg("x");
        m.add_nonneg("x");
        assert!(matches!(emit_lp(&m), Err(Error::NameCollision(_))));
    }

    #[test]
    fn long_rows_wrap() {
        let mut m = LinearModel::new();
        let vars: Vec<usize> = (0..60).map(|i| m.add_nonneg(format!("var{i}"))).collect();
        m.add_constraint(
            "long",
            vars.iter().map(|&v| (v, Rational::from_int(3))).collect(),
            Relation::Le,
            Rational::one(),
        );
        let text = emit_lp(&m).unwrap();
        assert!(text.lines().all(|l| l.len() <= WRAP + 12));
        assert!(text.lines().filter(|l| l.starts_with("  ")).count() > 1);
    }
}

use std::fmt::Write;

use super::ast::{BinOp, Expr, MetricSpec};

const ADD: u8 = 1;
const MUL: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => ADD,
        Expr::Bin(..) => MUL,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => 4,
        _ => ATOM,
    }
}

fn number(x: f64) -> String {
    format!("{x:?}").trim_end_matches(".0").to_string()
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = print_expr(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}

/// Canonical text; parentheses are emitted exactly where the tree needs them.
pub fn print_expr(e: &Expr) -> String {
    match e {
        Expr::Num(x) => number(*x),
        Expr::Ident(s) => s.clone(),
        Expr::Neg(inner) => format!("-{}", wrap(inner, UNARY)),
        Expr::Bin(op, a, b) => {
            let (sym, p) = match op {
                BinOp::Add => ("+", ADD),
                BinOp::Sub => ("-", ADD),
                BinOp::Mul => ("*", MUL),
                BinOp::Div => ("/", MUL),
            };
            format!("{} {sym} {}", wrap(a, p), wrap(b, p + 1))
        }
        Expr::Pow(base, exp) => {
            let exp_text = match exp.as_ref() {
                Expr::Num(x) => number(*x),
                Expr::Neg(inner) if matches!(inner.as_ref(), Expr::Num(_)) => print_expr(exp),
                other => format!("({})", print_expr(other)),
            };
            format!("{}^{exp_text}", wrap(base, ATOM))
        }
        Expr::Call(f, arg) => format!("{}({})", f.name(), print_expr(arg)),
    }
}

pub fn print_metric(spec: &MetricSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "metric \"{}\" {{", spec.name);
    let _ = writeln!(out, "  coords: {};", spec.coords.join(", "));
    if !spec.params.is_empty() {
        let ps: Vec<String> = spec.params.iter().map(|(n, v)| format!("{n} = {}", number(*v))).collect();
        let _ = writeln!(out, "  params: {};", ps.join(", "));
    }
    for (n, e) in &spec.lets {
        let _ = writeln!(out, "  let {n} = {};", print_expr(e));
    }
    for ((a, b), e) in &spec.components {
        let _ = writeln!(out, "  g[{a},{b}] = {};", print_expr(e));
    }
    out.push_str("}\n");
    out
}

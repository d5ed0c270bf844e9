use super::ast::{BinOp, Expr, Func, MetricSpec};
use super::error::EvalError;
use crate::jet::{seed1, seed2, Jet1};
use crate::linalg::{inverse_adjugate, map_mat, symmetric_eigenvalues, Mat4};
use crate::metric::{MetricField, MetricJet2};
use crate::multivector::MetricError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricEvalError {
    #[error(transparent)]
    Domain(#[from] EvalError),
    #[error("at ({}, {}, {}, {}): {source}", point[0], point[1], point[2], point[3])]
    Signature { point: [f64; 4], source: MetricError },
}

impl MetricEvalError {
    pub fn point(&self) -> [f64; 4] {
        match self {
            MetricEvalError::Domain(e) => e.point,
            MetricEvalError::Signature { point, .. } => *point,
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    PowInt(Box<Node>, i32),
    PowReal(Box<Node>, f64),
    Call(Func, Box<Node>),
}

/// A metric spec with identifiers resolved to slots, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledMetric {
    pub spec: MetricSpec,
    params: Vec<f64>,
    lets: Vec<Node>,
    components: Vec<((usize, usize), Node)>,
}

fn compile(e: &Expr, names: &[String]) -> Node {
    match e {
        Expr::Num(x) => Node::Num(*x),
        Expr::Ident(s) => Node::Var(names.iter().position(|n| n == s).expect("identifiers resolved at parse")),
        Expr::Neg(a) => Node::Neg(Box::new(compile(a, names))),
        Expr::Bin(op, a, b) => Node::Bin(*op, Box::new(compile(a, names)), Box::new(compile(b, names))),
        Expr::Pow(a, p) => {
            let p = p.constant_value().expect("constant exponent checked at parse");
            let base = Box::new(compile(a, names));
            if p.fract() == 0.0 && p.abs() < 1e6 {
                Node::PowInt(base, p as i32)
            } else {
                Node::PowReal(base, p)
            }
        }
        Expr::Call(f, a) => Node::Call(*f, Box::new(compile(a, names))),
    }
}

fn eval_node<S: Scalar>(n: &Node, env: &[S], point: [f64; 4]) -> Result<S, EvalError> {
    let fail = |msg: String| EvalError { point, msg };
    Ok(match n {
        Node::Num(x) => S::from_f64(*x),
        Node::Var(i) => env[*i],
        Node::Neg(a) => -eval_node(a, env, point)?,
        Node::Bin(op, a, b) => {
            let (a, b) = (eval_node(a, env, point)?, eval_node(b, env, point)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.re() == 0.0 {
                        return Err(fail("division by zero".into()));
                    }
                    a / b
                }
            }
        }
        Node::PowInt(a, k) => {
            let a = eval_node(a, env, point)?;
            if *k < 0 && a.re() == 0.0 {
                return Err(fail("zero raised to a negative power".into()));
            }
            a.powi(*k)
        }
        Node::PowReal(a, p) => {
            let a = eval_node(a, env, point)?;
            if a.re() <= 0.0 {
                return Err(fail(format!("non-positive base {} raised to non-integer power {p}", a.re())));
            }
            (a.ln().scale(*p)).exp()
        }
        Node::Call(f, a) => {
            let a = eval_node(a, env, point)?;
            let x = a.re();
            match f {
                Func::Sqrt if x <= 0.0 => return Err(fail(format!("sqrt of non-positive value {x}"))),
                Func::Log if x <= 0.0 => return Err(fail(format!("log of non-positive value {x}"))),
                Func::Abs if x == 0.0 => return Err(fail("abs is not differentiable at 0".into())),
                Func::Tan if x.cos() == 0.0 => return Err(fail("tan at a pole".into())),
                _ => {}
            }
            match f {
                Func::Sqrt => a.sqrt(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Exp => a.exp(),
                Func::Log => a.ln(),
                Func::Abs => a.abs(),
            }
        }
    })
}

impl CompiledMetric {
    pub fn new(spec: MetricSpec) -> Self {
        let mut names: Vec<String> = spec.coords.to_vec();
        names.extend(spec.params.iter().map(|(n, _)| n.clone()));
        names.extend(spec.lets.iter().map(|(n, _)| n.clone()));
        let lets = spec.lets.iter().map(|(_, e)| compile(e, &names)).collect();
        let components = spec.components.iter().map(|(k, e)| (*k, compile(e, &names))).collect();
        CompiledMetric {
            params: spec.params.iter().map(|(_, v)| *v).collect(),
            spec,
            lets,
            components,
        }
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// g_{μν} at seeded coordinates.
    pub fn eval_components<S: Scalar>(&self, x: [S; 4]) -> Result<Mat4<S>, EvalError> {
        let point = [x[0].re(), x[1].re(), x[2].re(), x[3].re()];
        let mut env: Vec<S> = x.to_vec();
        env.extend(self.params.iter().map(|&p| S::from_f64(p)));
        for (k, node) in self.lets.iter().enumerate() {
            let v = eval_node(node, &env, point)?;
            if !v.all_finite() {
                return Err(EvalError {
                    point,
                    msg: format!("'{}' is not finite", self.spec.lets[k].0),
                });
            }
            env.push(v);
        }
        let mut g = [[S::zero(); 4]; 4];
        for ((a, b), node) in &self.components {
            let v = eval_node(node, &env, point)?;
            if !v.all_finite() {
                return Err(EvalError {
                    point,
                    msg: format!("g[{a},{b}] is not finite"),
                });
            }
            g[*a][*b] = v;
            g[*b][*a] = v;
        }
        Ok(g)
    }

    /// Metric, inverse and determinant with Lorentzian-signature validation.
    pub fn eval_field<S: Scalar>(&self, x: [S; 4]) -> Result<MetricField<S>, MetricEvalError> {
        let point = [x[0].re(), x[1].re(), x[2].re(), x[3].re()];
        let g = self.eval_components(x)?;
        let (g_inv, det) = inverse_adjugate(&g);
        let signature = |source| MetricEvalError::Signature { point, source };
        if det.re() == 0.0 || !det.all_finite() {
            return Err(signature(MetricError::Singular(det.re())));
        }
        let ev = symmetric_eigenvalues(&map_mat(&g, |v| v.re()));
        if !(det.re() < 0.0 && ev[0] < 0.0 && ev[1] < 0.0 && ev[2] < 0.0 && ev[3] > 0.0) {
            return Err(signature(MetricError::NotLorentzian(ev)));
        }
        Ok(MetricField { g, g_inv, det })
    }

    pub fn eval_jet2(&self, x: [f64; 4]) -> Result<MetricJet2, MetricEvalError> {
        Ok(MetricJet2 {
            point: x,
            field: self.eval_field(seed2(x))?,
        })
    }

    pub fn eval_jet1(&self, x: [f64; 4]) -> Result<MetricField<Jet1>, MetricEvalError> {
        self.eval_field(seed1(x))
    }
}

/// Evaluate a spec's 2-jet at a point.
pub fn eval_metric_jet2(spec: &MetricSpec, point: [f64; 4]) -> Result<MetricJet2, MetricEvalError> {
    CompiledMetric::new(spec.clone()).eval_jet2(point)
}

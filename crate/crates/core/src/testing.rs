//! Random inputs and finite-difference oracles shared by the test suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::{BinOp, CompiledMetric, Expr, Func, MetricSpec};
use crate::jet::{seed1, seed2};

const VARS: [&str; 4] = ["t", "x", "y", "z"];

fn num(x: f64) -> Box<Expr> {
    Box::new(Expr::Num(x))
}

/// Random rational-trigonometric expression in t, x, y, z that is smooth everywhere.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) {
            Expr::Ident(VARS[rng.gen_range(0..4)].into())
        } else {
            Expr::Num((rng.gen_range(-2.0f64..2.0) * 8.0).round() / 8.0)
        };
    }
    match rng.gen_range(0..9) {
        0 => Expr::Bin(BinOp::Add, Box::new(random_expr(rng, depth - 1)), Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Bin(BinOp::Sub, Box::new(random_expr(rng, depth - 1)), Box::new(random_expr(rng, depth - 1))),
        2 | 3 => Expr::Bin(BinOp::Mul, Box::new(random_expr(rng, depth - 1)), Box::new(random_expr(rng, depth - 1))),
        4 => {
            let den = Expr::Bin(BinOp::Add, num(1.5), Box::new(Expr::Call(Func::Sin, Box::new(random_expr(rng, depth - 1)))));
            Expr::Bin(BinOp::Div, Box::new(random_expr(rng, depth - 1)), Box::new(den))
        }
        5 => Expr::Call([Func::Sin, Func::Cos][rng.gen_range(0..2)], Box::new(random_expr(rng, depth - 1))),
        6 => {
            let inner = Expr::Bin(BinOp::Mul, num(0.25), Box::new(Expr::Call(Func::Cos, Box::new(random_expr(rng, depth - 1)))));
            Expr::Call(Func::Exp, Box::new(inner))
        }
        7 => {
            let arg = Expr::Bin(BinOp::Add, num(1.0), Box::new(Expr::Pow(Box::new(random_expr(rng, depth - 1)), num(2.0))));
            Expr::Call(Func::Sqrt, Box::new(arg))
        }
        _ => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
    }
}

/// A spec whose g[0,0] is `e`, for evaluating a bare expression.
pub fn expression_spec(e: Expr) -> MetricSpec {
    MetricSpec {
        name: "expr".into(),
        coords: VARS.map(String::from),
        params: vec![],
        lets: vec![],
        components: vec![((0, 0), e)],
    }
}

#[derive(Clone, Debug, Default)]
pub struct JetCheck {
    pub expressions: usize,
    pub max_gradient_error: f64,
    pub max_hessian_error: f64,
    pub max_hessian_asymmetry: f64,
    /// Whether the depth-2 outer gradient equals the depth-1 gradient bitwise.
    pub nesting_exact: bool,
}

/// Compares jet derivatives of random expressions with central differences
/// (gradient h = 1e-6, Hessian h = 1e-4 on plain values).
pub fn jet_finite_difference_check(seed: u64, count: usize) -> JetCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = JetCheck {
        expressions: count,
        nesting_exact: true,
        ..Default::default()
    };
    for _ in 0..count {
        let e = random_expr(&mut rng, 4);
        let m = CompiledMetric::new(expression_spec(e));
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
        let f = |p: [f64; 4]| m.eval_components(p).expect("smooth expression")[0][0];
        let j1 = m.eval_components(seed1(x)).unwrap()[0][0];
        let j2 = m.eval_components(seed2(x)).unwrap()[0][0];
        let h = 1e-6;
        for i in 0..4 {
            let (mut xp, mut xm) = (x, x);
            xp[i] += h;
            xm[i] -= h;
            let fd = (f(xp) - f(xm)) / (2.0 * h);
            out.max_gradient_error = out.max_gradient_error.max((fd - j1.partials[i]).abs());
            if j2.value.partials[i].to_bits() != j1.partials[i].to_bits() {
                out.nesting_exact = false;
            }
        }
        let hess = j2.hessian();
        let h = 1e-4;
        for i in 0..4 {
            for k in 0..4 {
                let shift = |di: f64, dk: f64| {
                    let mut p = x;
                    p[i] += di;
                    p[k] += dk;
                    f(p)
                };
                let fd = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h);
                out.max_hessian_error = out.max_hessian_error.max((fd - hess[i][k]).abs());
                out.max_hessian_asymmetry = out.max_hessian_asymmetry.max((hess[i][k] - hess[k][i]).abs());
            }
        }
    }
    out
}

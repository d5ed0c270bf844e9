#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Abs,
}

impl Func {
    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    /// Base raised to a constant exponent expression (literals only).
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Ident(_) => 1,
            Expr::Neg(e) | Expr::Call(_, e) => 1 + e.depth(),
            Expr::Bin(_, a, b) | Expr::Pow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Value of an identifier-free expression.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Num(x) => Some(*x),
            Expr::Ident(_) | Expr::Call(..) => None,
            Expr::Neg(e) => e.constant_value().map(|v| -v),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.constant_value()?, b.constant_value()?);
                Some(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                })
            }
            Expr::Pow(a, b) => Some(a.constant_value()?.powf(b.constant_value()?)),
        }
    }
    /// Evaluates a closed expression; `pi` is the only identifier allowed.
    pub fn evaluate_closed(&self) -> Option<f64> {
        Some(match self {
            Expr::Num(x) => *x,
            Expr::Ident(s) if s == "pi" => std::f64::consts::PI,
            Expr::Ident(_) => return None,
            Expr::Neg(e) => -e.evaluate_closed()?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.evaluate_closed()?, b.evaluate_closed()?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Expr::Pow(a, b) => a.evaluate_closed()?.powf(b.evaluate_closed()?),
            Expr::Call(f, a) => {
                let a = a.evaluate_closed()?;
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
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    pub coords: [String; 4],
    pub params: Vec<(String, f64)>,
    pub lets: Vec<(String, Expr)>,
    /// Components g_{μν} with μ ≤ ν in declaration order; absent entries are zero.
    pub components: Vec<((usize, usize), Expr)>,
}

impl MetricSpec {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Overrides a parameter. `m` aliases `r_g = 2m` when only `r_g` is declared.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<(), String> {
        if let Some(p) = self.params.iter_mut().find(|(n, _)| n == name) {
            p.1 = value;
            return Ok(());
        }
        if name == "m" {
            if let Some(p) = self.params.iter_mut().find(|(n, _)| n == "r_g") {
                p.1 = 2.0 * value;
                return Ok(());
            }
        }
        Err(format!("metric '{}' has no parameter '{}'", self.name, name))
    }

    pub fn component(&self, mu: usize, nu: usize) -> Option<&Expr> {
        let key = (mu.min(nu), mu.max(nu));
        self.components.iter().find(|(k, _)| *k == key).map(|(_, e)| e)
    }

    /// True when every spatial off-diagonal component is absent.
    pub fn spatially_diagonal(&self) -> bool {
        self.components.iter().all(|((a, b), _)| a == b || *a == 0)
    }
}

//! A small expression language for immersion components and warping
//! functions. Parsed once, evaluated over plain reals or second-order jets.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom { "^" integer } ;
//! atom    = number | variable | function "(" expr ")" | "(" expr ")" ;
//! function = "sin" | "cos" | "exp" | "log" | "sqrt" | "sinh" | "cosh" ;
//! integer = [ "-" ] digit { digit } ;
//! number  = digit { digit } [ "." { digit } ] [ ("e" | "E") [ "+" | "-" ] digit { digit } ] ;
//! ```
//!
//! Binary operators of equal precedence associate to the left; `^` binds
//! tighter than unary minus (`-x^2` is `-(x^2)`) and only takes integer
//! literal exponents, which keeps jet propagation exact and branch-cut free.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::taylor2::Taylor2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Neg => "-",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
        }
    }

    fn from_name(s: &str) -> Option<UnaryFn> {
        Some(match s {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "sqrt" => UnaryFn::Sqrt,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Unary(UnaryFn, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Power with an integer literal exponent.
    Pow(Box<Expr>, i32),
}

/// A parsed expression together with the declared variable names (variable
/// nodes store indices into this list).
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    pub root: Expr,
    pub vars: Vec<String>,
}

/// The scalar kinds an expression can be evaluated over. Implementations
/// must compute the value slot with the same f64 operations so that plain
/// and jet evaluation agree bit for bit.
pub trait EvalScalar: Clone {
    fn from_const(c: f64, dim: usize) -> Self;
    /// Seed width this scalar carries (0 for plain reals); literals in an
    /// expression are materialized at the width of the environment.
    fn jet_dim(&self) -> usize;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn log(&self) -> Result<Self>;
    fn sqrt(&self) -> Result<Self>;
    fn powi(&self, n: i32) -> Result<Self>;
}

impl EvalScalar for f64 {
    fn from_const(c: f64, _dim: usize) -> Self {
        c
    }
    fn jet_dim(&self) -> usize {
        0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Result<Self> {
        if o.abs() < 1e-300 {
            return Err(Error::DomainError(format!("division by zero (denominator {o})")));
        }
        Ok(self / o)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn log(&self) -> Result<Self> {
        if *self <= 0.0 {
            return Err(Error::DomainError(format!("log of non-positive value {self}")));
        }
        Ok(self.ln())
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            return Err(Error::DomainError(format!("sqrt of negative value {self}")));
        }
        Ok(f64::sqrt(*self))
    }
    fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 && self.abs() < 1e-300 {
            return Err(Error::DomainError(format!(
                "negative power of zero (base {self}, exponent {n})"
            )));
        }
        Ok(f64::powi(*self, n))
    }
}

impl EvalScalar for Taylor2 {
    fn from_const(c: f64, dim: usize) -> Self {
        Taylor2::constant(c, dim)
    }
    fn jet_dim(&self) -> usize {
        self.dim()
    }
    fn add(&self, o: &Self) -> Self {
        Taylor2::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Taylor2::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Taylor2::mul(self, o)
    }
    fn neg(&self) -> Self {
        Taylor2::neg(self)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        Taylor2::div(self, o)
    }
    fn sin(&self) -> Self {
        Taylor2::sin(self)
    }
    fn cos(&self) -> Self {
        Taylor2::cos(self)
    }
    fn exp(&self) -> Self {
        Taylor2::exp(self)
    }
    fn sinh(&self) -> Self {
        Taylor2::sinh(self)
    }
    fn cosh(&self) -> Self {
        Taylor2::cosh(self)
    }
    fn log(&self) -> Result<Self> {
        Taylor2::ln(self)
    }
    fn sqrt(&self) -> Result<Self> {
        Taylor2::sqrt(self)
    }
    fn powi(&self, n: i32) -> Result<Self> {
        Taylor2::powi(self, n)
    }
}

impl ExprAst {
    /// Evaluates over any scalar kind; `env` is indexed by variable order.
    pub fn eval<S: EvalScalar>(&self, env: &[S]) -> Result<S> {
        if env.len() != self.vars.len() {
            return Err(Error::dim(self.vars.len(), env.len(), "expression environment"));
        }
        let dim = env.first().map(|s| s.jet_dim()).unwrap_or(0);
        eval_node(&self.root, env, dim)
    }

    /// Convenience: plain-real evaluation.
    pub fn eval_f64(&self, env: &[f64]) -> Result<f64> {
        self.eval(env)
    }
}

fn eval_node<S: EvalScalar>(node: &Expr, env: &[S], dim: usize) -> Result<S> {
    Ok(match node {
        Expr::Num(c) => S::from_const(*c, dim),
        Expr::Var(i) => env[*i].clone(),
        Expr::Unary(f, a) => {
            let a = eval_node(a, env, dim)?;
            match f {
                UnaryFn::Neg => a.neg(),
                UnaryFn::Sin => a.sin(),
                UnaryFn::Cos => a.cos(),
                UnaryFn::Exp => a.exp(),
                UnaryFn::Sinh => a.sinh(),
                UnaryFn::Cosh => a.cosh(),
                UnaryFn::Log => a.log()?,
                UnaryFn::Sqrt => a.sqrt()?,
            }
        }
        Expr::Binary(op, a, b) => {
            let a = eval_node(a, env, dim)?;
            let b = eval_node(b, env, dim)?;
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b)?,
            }
        }
        Expr::Pow(a, n) => eval_node(a, env, dim)?.powi(*n)?,
    })
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Spanned { tok: Tok::Plus, pos: i });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, pos: i });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, pos: i });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, pos: i });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, pos: i });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, pos: i });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, pos: i });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mark = i;
                    i += 1;
                    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                        i += 1;
                    }
                    if i < bytes.len() && bytes[i].is_ascii_digit() {
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        i = mark; // bare `e` belongs to the next token
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::ParseError {
                    pos: start,
                    expected: vec!["number".into()],
                    found: text.to_string(),
                })?;
                out.push(Spanned {
                    tok: Tok::Num(value),
                    pos: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(src[start..i].to_string()),
                    pos: start,
                });
            }
            other => {
                return Err(Error::ParseError {
                    pos: i,
                    expected: vec!["token".into()],
                    found: other.to_string(),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    src_len: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.src_len)
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(s) => format!("{:?}", s.tok),
        }
    }

    fn err(&self, expected: &[&str]) -> Error {
        Error::ParseError {
            pos: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.found(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Binary(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Binary(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Binary(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek().map(|s| &s.tok), Some(Tok::Minus)) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnaryFn::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while matches!(self.peek().map(|s| &s.tok), Some(Tok::Caret)) {
            self.bump();
            let mut negate = false;
            if matches!(self.peek().map(|s| &s.tok), Some(Tok::Minus)) {
                self.bump();
                negate = true;
            }
            match self.bump() {
                Some(Spanned { tok: Tok::Num(v), pos }) => {
                    if v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
                        return Err(Error::ParseError {
                            pos,
                            expected: vec!["integer exponent".into()],
                            found: format!("{v}"),
                        });
                    }
                    let mut n = v as i32;
                    if negate {
                        n = -n;
                    }
                    base = Expr::Pow(Box::new(base), n);
                }
                other => {
                    return Err(Error::ParseError {
                        pos: other.as_ref().map(|s| s.pos).unwrap_or(self.src_len),
                        expected: vec!["integer exponent".into()],
                        found: other
                            .map(|s| format!("{:?}", s.tok))
                            .unwrap_or_else(|| "end of input".into()),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Spanned { tok: Tok::Num(v), .. }) => Ok(Expr::Num(v)),
            Some(Spanned {
                tok: Tok::Ident(name),
                pos,
            }) => {
                if let Some(f) = UnaryFn::from_name(&name) {
                    match self.bump() {
                        Some(Spanned { tok: Tok::LParen, .. }) => {}
                        _ => {
                            self.pos -= 1;
                            return Err(self.err(&["("]));
                        }
                    }
                    let inner = self.expr()?;
                    match self.bump() {
                        Some(Spanned { tok: Tok::RParen, .. }) => {}
                        _ => {
                            if self.pos <= self.toks.len() && self.peek().is_some() {
                                self.pos -= 1;
                            }
                            return Err(self.err(&[")"]));
                        }
                    }
                    return Ok(Expr::Unary(f, Box::new(inner)));
                }
                match self.vars.iter().position(|v| v == &name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(Error::UnknownVariable { name, pos }),
                }
            }
            Some(Spanned { tok: Tok::LParen, .. }) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Spanned { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => {
                        if self.peek().is_some() {
                            self.pos -= 1;
                        }
                        Err(self.err(&[")"]))
                    }
                }
            }
            other => {
                let pos = other.as_ref().map(|s| s.pos).unwrap_or(self.src_len);
                Err(Error::ParseError {
                    pos,
                    expected: vec!["number".into(), "variable".into(), "function".into(), "(".into()],
                    found: other
                        .map(|s| format!("{:?}", s.tok))
                        .unwrap_or_else(|| "end of input".into()),
                })
            }
        }
    }
}

/// Parses `source` against the declared variable names.
pub fn parse(source: &str, variables: &[&str]) -> Result<ExprAst> {
    if source.trim().is_empty() {
        return Err(Error::ParseError {
            pos: 0,
            expected: vec!["expression".into()],
            found: "empty input".into(),
        });
    }
    let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src_len: source.len(),
        vars: &vars,
    };
    let root = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(&["end of input", "operator"]));
    }
    Ok(ExprAst { root, vars })
}

// ---------------------------------------------------------------------------
// Printing (round-trips through the parser)
// ---------------------------------------------------------------------------

impl ExprAst {
    fn fmt_node(&self, node: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match node {
            Expr::Num(v) => {
                if *v < 0.0 {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var(i) => write!(f, "{}", self.vars[*i]),
            Expr::Unary(UnaryFn::Neg, a) => {
                write!(f, "-(")?;
                self.fmt_node(a, f)?;
                write!(f, ")")
            }
            Expr::Unary(func, a) => {
                write!(f, "{}(", func.name())?;
                self.fmt_node(a, f)?;
                write!(f, ")")
            }
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "(")?;
                self.fmt_node(a, f)?;
                write!(f, " {sym} ")?;
                self.fmt_node(b, f)?;
                write!(f, ")")
            }
            Expr::Pow(a, n) => {
                write!(f, "(")?;
                self.fmt_node(a, f)?;
                if *n < 0 {
                    write!(f, ")^-{}", -(*n as i64))
                } else {
                    write!(f, ")^{n}")
                }
            }
        }
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_node(&self.root, f)
    }
}

/// Jet evaluation entry point used by the charts: seeds all variables and
/// returns the full 2-jet.
pub fn eval_jet(ast: &ExprAst, point: &[f64]) -> Result<Taylor2> {
    let d = ast.vars.len();
    if point.len() != d {
        return Err(Error::dim(d, point.len(), "jet evaluation point"));
    }
    let env: Vec<Taylor2> = point
        .iter()
        .enumerate()
        .map(|(i, v)| Taylor2::variable(*v, i, d))
        .collect();
    ast.eval(&env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parse_and_eval_basics() {
        let ast = parse("x*cos(t) - y", &["x", "y", "t"]).unwrap();
        assert_eq!(ast.eval_f64(&[1.0, 2.0, 0.0]).unwrap(), -1.0);

        let seven = parse("7", &[]).unwrap();
        assert_eq!(seven.eval_f64(&[]).unwrap(), 7.0);
    }

    #[test]
    fn unbalanced_call_reports_position() {
        let err = parse("sin(", &["x"]).unwrap_err();
        match err {
            Error::ParseError { pos, .. } => assert_eq!(pos, 4),
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let err = parse("x + q", &["x"]).unwrap_err();
        assert!(matches!(err, Error::UnknownVariable { ref name, .. } if name == "q"));
    }

    #[test]
    fn precedence_and_associativity() {
        let ast = parse("2 + 3 * 4 ^ 2", &[]).unwrap();
        assert_eq!(ast.eval_f64(&[]).unwrap(), 50.0);
        let ast = parse("8 - 3 - 2", &[]).unwrap();
        assert_eq!(ast.eval_f64(&[]).unwrap(), 3.0);
        let ast = parse("8 / 4 / 2", &[]).unwrap();
        assert_eq!(ast.eval_f64(&[]).unwrap(), 1.0);
        // ^ binds tighter than unary minus.
        let ast = parse("-2^2", &[]).unwrap();
        assert_eq!(ast.eval_f64(&[]).unwrap(), -4.0);
        let ast = parse("x^-1", &["x"]).unwrap();
        assert_eq!(ast.eval_f64(&[4.0]).unwrap(), 0.25);
        // Non-integer exponents are rejected.
        assert!(parse("x^0.5", &["x"]).is_err());
    }

    #[test]
    fn taylor_eval_of_sum_of_squares() {
        let ast = parse("x^2 + y^2", &["x", "y"]).unwrap();
        let jet = eval_jet(&ast, &[3.0, 4.0]).unwrap();
        assert_eq!(jet.value(), 25.0);
        assert_abs_diff_eq!(jet.grad()[0], 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jet.grad()[1], 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jet.hess().get(0, 0), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(jet.hess().get(1, 1), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(jet.hess().get(0, 1), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn radius_gradient() {
        let ast = parse("sqrt(x*x + y*y)", &["x", "y"]).unwrap();
        assert_eq!(ast.eval_f64(&[3.0, 4.0]).unwrap(), 5.0);
        let jet = eval_jet(&ast, &[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(jet.grad()[0], 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(jet.grad()[1], 0.8, epsilon = 1e-14);
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        let ast = parse("1/x", &["x"]).unwrap();
        assert!(matches!(ast.eval_f64(&[0.0]), Err(Error::DomainError(_))));
    }

    #[test]
    fn plain_and_jet_values_agree_bitwise() {
        let sources = [
            "x*cos(t) - y/(1 + x^2)",
            "sqrt(x*x + y*y + 0.1) * exp(t/3)",
            "sinh(x) + cosh(y) - log(2 + t^2)",
            "(x - y)^3 / (t + 2.5)",
        ];
        let pts = [[0.3, -0.7, 1.1], [1.5, 2.0, -0.4], [-0.2, 0.9, 0.0]];
        for src in sources {
            let ast = parse(src, &["x", "y", "t"]).unwrap();
            for p in pts {
                let plain = ast.eval_f64(&p).unwrap();
                let jet = eval_jet(&ast, &p).unwrap();
                assert_eq!(plain.to_bits(), jet.value().to_bits(), "source {src}");
            }
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let sources = [
            "x*cos(t) - y",
            "-x^2 + 3.5/(y - 2)",
            "sqrt(x*x + y*y)",
            "sinh(t)^3 - cosh(t)^-2",
            "1e-3 * x + 2.5e2",
        ];
        for src in sources {
            let ast = parse(src, &["x", "y", "t"]).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed, &["x", "y", "t"]).unwrap();
            assert_eq!(ast.root, reparsed.root, "printed form: {printed}");
        }
    }

    #[test]
    fn parser_is_total_on_garbage() {
        // Pseudo-random byte soup from a fixed generator: parse must return
        // Ok or a structured error, never panic.
        let alphabet: &[u8] = b"xyt+-*/^()0123456789. sincoqrf_";
        let mut state = 0xdeadbeefu64;
        for _ in 0..10_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let len = (state >> 60) as usize;
            let mut s = String::new();
            let mut local = state;
            for _ in 0..len {
                local = local.wrapping_mul(6364136223846793005).wrapping_add(99);
                s.push(alphabet[(local >> 33) as usize % alphabet.len()] as char);
            }
            let _ = parse(&s, &["x", "y", "t"]);
        }
    }
}

//! Finsler fundamental functions `L(x, y)`: expression trees, a small parser, the
//! built-in families, and numerical validation of the Finsler axioms.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::geometry::{metric_tensor, ChartPoint, Sampler};
use crate::jets::{seed_variables, Jet, JetError};
use crate::linalg::{jacobi_eigenvalues, solve_dense};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("function `{name}` at byte {pos} takes 1 argument, got {got}")]
    Arity { pos: usize, name: String, got: usize },
    #[error("variable `{name}` at byte {pos} is out of range 1..{dim}")]
    VariableOutOfRange { pos: usize, name: String, dim: usize },
    #[error("unknown metric family `{0}`")]
    UnknownFamily(String),
    #[error("parameter error: {0}")]
    Params(String),
    #[error("randers positivity fails: |b|_a = {norm:.6} >= 1 at x = {x:?}")]
    RandersNorm { norm: f64, x: Vec<f64> },
    #[error("domain error in {op} at `{subexpr}`: {detail}")]
    Domain {
        op: &'static str,
        subexpr: String,
        detail: String,
    },
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("invalid metric document: {0}")]
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sqrt, Func::Exp, Func::Log, Func::Sin, Func::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Expression tree over the coordinates. Variable indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Const(f64),
    X(usize),
    Y(usize),
    Neg(Box<ExprNode>),
    Binary(BinOp, Box<ExprNode>, Box<ExprNode>),
    /// Constant exponent; integral exponents evaluate by repeated multiplication and
    /// accept any base, other exponents need a positive base.
    Pow(Box<ExprNode>, f64),
    Call(Func, Box<ExprNode>),
}

impl ExprNode {
    pub fn c(v: f64) -> Self {
        ExprNode::Const(v)
    }

    pub fn bin(op: BinOp, a: ExprNode, b: ExprNode) -> Self {
        ExprNode::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn add(a: ExprNode, b: ExprNode) -> Self {
        Self::bin(BinOp::Add, a, b)
    }

    pub fn mul(a: ExprNode, b: ExprNode) -> Self {
        Self::bin(BinOp::Mul, a, b)
    }

    pub fn pow(a: ExprNode, e: f64) -> Self {
        ExprNode::Pow(Box::new(a), e)
    }

    pub fn call(f: Func, a: ExprNode) -> Self {
        ExprNode::Call(f, Box::new(a))
    }

    /// Left-folded sum; `0` for an empty list.
    pub fn sum(terms: Vec<ExprNode>) -> Self {
        let mut it = terms.into_iter();
        match it.next() {
            None => ExprNode::Const(0.0),
            Some(first) => it.fold(first, ExprNode::add),
        }
    }

    pub fn depends_on_x(&self) -> bool {
        self.any(&|e| matches!(e, ExprNode::X(_)))
    }

    pub fn depends_on_y(&self) -> bool {
        self.any(&|e| matches!(e, ExprNode::Y(_)))
    }

    fn any(&self, pred: &dyn Fn(&ExprNode) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            ExprNode::Const(_) | ExprNode::X(_) | ExprNode::Y(_) => false,
            ExprNode::Neg(a) | ExprNode::Pow(a, _) | ExprNode::Call(_, a) => a.any(pred),
            ExprNode::Binary(_, a, b) => a.any(pred) || b.any(pred),
        }
    }

    /// Largest variable index used, 1-based; 0 if there are none.
    pub fn max_var(&self) -> usize {
        match self {
            ExprNode::Const(_) => 0,
            ExprNode::X(i) | ExprNode::Y(i) => i + 1,
            ExprNode::Neg(a) | ExprNode::Pow(a, _) | ExprNode::Call(_, a) => a.max_var(),
            ExprNode::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Text that [`parse_expr`] maps back to an identical tree.
    pub fn unparse(&self) -> String {
        match self {
            ExprNode::Const(v) => format!("{v}"),
            ExprNode::X(i) => format!("x{}", i + 1),
            ExprNode::Y(i) => format!("y{}", i + 1),
            ExprNode::Neg(a) => format!("-{}", a.unparse_base()),
            ExprNode::Binary(op, a, b) => {
                format!("({} {} {})", a.unparse(), op.symbol(), b.unparse())
            }
            ExprNode::Pow(a, e) => format!("{}^{}", a.unparse_base(), e),
            ExprNode::Call(f, a) => format!("{}({})", f.name(), a.unparse()),
        }
    }

    fn unparse_base(&self) -> String {
        match self {
            ExprNode::Const(v) if *v >= 0.0 => self.unparse(),
            ExprNode::X(_) | ExprNode::Y(_) | ExprNode::Call(..) | ExprNode::Binary(..) => {
                self.unparse()
            }
            ExprNode::Neg(_) => self.unparse(),
            _ => format!("({})", self.unparse()),
        }
    }

    /// Evaluates the tree on plain scalars.
    pub fn eval_value<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<S, MetricError> {
        let ctx = ValueCtx { x, y };
        self.eval_with(&ctx)
    }

    /// Evaluates the tree on seeded jets `[x¹..xⁿ, y¹..yⁿ]`.
    pub fn eval_jet<S: Scalar>(&self, vars: &[Jet<S>]) -> Result<Jet<S>, MetricError> {
        let ctx = JetCtx { vars };
        self.eval_with(&ctx)
    }

    fn eval_with<V: Clone, C: EvalCtx<V>>(&self, ctx: &C) -> Result<V, MetricError> {
        let wrap = |node: &ExprNode, e: (&'static str, String)| MetricError::Domain {
            op: e.0,
            subexpr: node.unparse(),
            detail: e.1,
        };
        Ok(match self {
            ExprNode::Const(v) => ctx.constant(*v),
            ExprNode::X(i) => ctx.x(*i),
            ExprNode::Y(i) => ctx.y(*i),
            ExprNode::Neg(a) => ctx.neg(&a.eval_with(ctx)?),
            ExprNode::Binary(op, a, b) => {
                let (va, vb) = (a.eval_with(ctx)?, b.eval_with(ctx)?);
                match op {
                    BinOp::Add => ctx.add(&va, &vb),
                    BinOp::Sub => ctx.sub(&va, &vb),
                    BinOp::Mul => ctx.mul(&va, &vb),
                    BinOp::Div => ctx.div(&va, &vb).map_err(|e| wrap(self, e))?,
                }
            }
            ExprNode::Pow(a, e) => {
                let va = a.eval_with(ctx)?;
                if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
                    ctx.powi(&va, *e as i32).map_err(|err| wrap(self, err))?
                } else {
                    ctx.powf(&va, *e).map_err(|err| wrap(self, err))?
                }
            }
            ExprNode::Call(f, a) => {
                let va = a.eval_with(ctx)?;
                ctx.call(*f, &va).map_err(|e| wrap(self, e))?
            }
        })
    }
}

impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.unparse())
    }
}

type EvalResult<V> = Result<V, (&'static str, String)>;

trait EvalCtx<V> {
    fn constant(&self, v: f64) -> V;
    fn x(&self, i: usize) -> V;
    fn y(&self, i: usize) -> V;
    fn neg(&self, a: &V) -> V;
    fn add(&self, a: &V, b: &V) -> V;
    fn sub(&self, a: &V, b: &V) -> V;
    fn mul(&self, a: &V, b: &V) -> V;
    fn div(&self, a: &V, b: &V) -> EvalResult<V>;
    fn powi(&self, a: &V, e: i32) -> EvalResult<V>;
    fn powf(&self, a: &V, e: f64) -> EvalResult<V>;
    fn call(&self, f: Func, a: &V) -> EvalResult<V>;
}

struct ValueCtx<'a, S> {
    x: &'a [S],
    y: &'a [S],
}

/// Integer power by the same binary exponentiation the jets use, so order-0 jets and
/// plain values agree bit for bit.
fn powu_value<S: Scalar>(base: S, mut e: u32) -> S {
    let mut result = S::one();
    let mut b = base;
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            result = if first { b } else { result * b };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            b = b * b;
        }
    }
    result
}

impl<S: Scalar> EvalCtx<S> for ValueCtx<'_, S> {
    fn constant(&self, v: f64) -> S {
        S::lit(v)
    }
    fn x(&self, i: usize) -> S {
        self.x[i]
    }
    fn y(&self, i: usize) -> S {
        self.y[i]
    }
    fn neg(&self, a: &S) -> S {
        -*a
    }
    fn add(&self, a: &S, b: &S) -> S {
        *a + *b
    }
    fn sub(&self, a: &S, b: &S) -> S {
        *a - *b
    }
    fn mul(&self, a: &S, b: &S) -> S {
        *a * *b
    }
    fn div(&self, a: &S, b: &S) -> EvalResult<S> {
        if b.is_zero() || !b.is_finite() {
            return Err(("div", "divisor has zero constant term".into()));
        }
        Ok(*a / *b)
    }
    fn powi(&self, a: &S, e: i32) -> EvalResult<S> {
        let base = if e < 0 { self.div(&S::one(), a)? } else { *a };
        Ok(powu_value(base, e.unsigned_abs()))
    }
    fn powf(&self, a: &S, e: f64) -> EvalResult<S> {
        if !(*a > S::zero()) {
            return Err(("pow", format!("real exponent needs a positive base, got {a}")));
        }
        Ok(a.powf(S::lit(e)))
    }
    fn call(&self, f: Func, a: &S) -> EvalResult<S> {
        Ok(match f {
            Func::Sqrt => {
                if !(*a > S::zero()) {
                    return Err(("sqrt", format!("non-positive argument {a}")));
                }
                a.sqrt()
            }
            Func::Log => {
                if !(*a > S::zero()) {
                    return Err(("log", format!("non-positive argument {a}")));
                }
                a.ln()
            }
            Func::Exp => a.exp(),
            Func::Sin => a.sin(),
            Func::Cos => a.cos(),
        })
    }
}

struct JetCtx<'a, S> {
    vars: &'a [Jet<S>],
}

fn jet_err(e: JetError) -> (&'static str, String) {
    match e {
        JetError::Domain { op, detail } => (op, detail),
        other => ("jet", other.to_string()),
    }
}

impl<S: Scalar> EvalCtx<Jet<S>> for JetCtx<'_, S> {
    fn constant(&self, v: f64) -> Jet<S> {
        self.vars[0].lift(S::lit(v))
    }
    fn x(&self, i: usize) -> Jet<S> {
        self.vars[i].clone()
    }
    fn y(&self, i: usize) -> Jet<S> {
        self.vars[self.vars.len() / 2 + i].clone()
    }
    fn neg(&self, a: &Jet<S>) -> Jet<S> {
        -a
    }
    fn add(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a + b
    }
    fn sub(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a - b
    }
    fn mul(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a * b
    }
    fn div(&self, a: &Jet<S>, b: &Jet<S>) -> EvalResult<Jet<S>> {
        a.try_div(b).map_err(jet_err)
    }
    fn powi(&self, a: &Jet<S>, e: i32) -> EvalResult<Jet<S>> {
        a.try_powi(e).map_err(jet_err)
    }
    fn powf(&self, a: &Jet<S>, e: f64) -> EvalResult<Jet<S>> {
        a.try_powf(S::lit(e)).map_err(jet_err)
    }
    fn call(&self, f: Func, a: &Jet<S>) -> EvalResult<Jet<S>> {
        match f {
            Func::Sqrt => a.try_sqrt().map_err(jet_err),
            Func::Log => a.try_ln().map_err(jet_err),
            Func::Exp => Ok(a.exp()),
            Func::Sin => Ok(a.sin()),
            Func::Cos => Ok(a.cos()),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, MetricError> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() || c == b'.' {
                i = lx.number(i)?;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(src[start..i].to_string()), start));
            } else if b"+-*/^(),".contains(&c) {
                lx.toks.push((Tok::Op(c as char), i));
                i += 1;
            } else {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(MetricError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }

    fn number(&mut self, start: usize) -> Result<usize, MetricError> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = &self.src[start..i];
        let v: f64 = text.parse().map_err(|_| MetricError::Syntax {
            pos: start,
            msg: format!("malformed number `{text}`"),
        })?;
        self.toks.push((Tok::Num(v), start));
        Ok(i)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), MetricError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, what: &str) -> MetricError {
        let found = match self.peek() {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        MetricError::Syntax {
            pos: self.pos(),
            msg: format!("{what}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<ExprNode, MetricError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ExprNode::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<ExprNode, MetricError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = ExprNode::bin(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<ExprNode, MetricError> {
        let base = self.base()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let sign = match self.peek() {
            Tok::Op('-') => {
                self.bump();
                -1.0
            }
            Tok::Op('+') => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ExprNode::pow(base, sign * v))
            }
            _ => Err(self.unexpected("exponent must be a signed number")),
        }
    }

    fn base(&mut self) -> Result<ExprNode, MetricError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ExprNode::Const(v))
            }
            Tok::Op('-') => {
                self.bump();
                Ok(ExprNode::Neg(Box::new(self.base()?)))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                self.ident(name, pos)
            }
            _ => Err(self.unexpected("expected a number, variable, function or `(`")),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<ExprNode, MetricError> {
        if let Some(f) = Func::from_name(&name) {
            self.expect('(')?;
            let arg = self.expr()?;
            if *self.peek() == Tok::Op(',') {
                let mut got = 1;
                while *self.peek() == Tok::Op(',') {
                    self.bump();
                    self.expr()?;
                    got += 1;
                }
                return Err(MetricError::Arity { pos, name, got });
            }
            self.expect(')')?;
            return Ok(ExprNode::call(f, arg));
        }
        let (head, digits) = name.split_at(1);
        let is_var = (head == "x" || head == "y")
            && !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit());
        if !is_var {
            return Err(MetricError::UnknownIdentifier { pos, name });
        }
        let idx: usize = digits.parse().unwrap_or(0);
        if idx == 0 || idx > self.dim {
            return Err(MetricError::VariableOutOfRange {
                pos,
                name,
                dim: self.dim,
            });
        }
        Ok(if head == "x" {
            ExprNode::X(idx - 1)
        } else {
            ExprNode::Y(idx - 1)
        })
    }
}

/// Parses an expression over `x1..xn, y1..yn`.
pub fn parse_expr(text: &str, dim: usize) -> Result<ExprNode, MetricError> {
    let toks = Lexer::run(text)?;
    let mut p = Parser { toks, at: 0, dim };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("unexpected trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Metric specifications

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Euclidean,
    RiemannianSphere,
    RiemannianCustom,
    Randers,
    MinkowskiQuartic,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Euclidean,
        Family::RiemannianSphere,
        Family::RiemannianCustom,
        Family::Randers,
        Family::MinkowskiQuartic,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Euclidean => "euclidean",
            Family::RiemannianSphere => "riemannian_sphere",
            Family::RiemannianCustom => "riemannian_custom",
            Family::Randers => "randers",
            Family::MinkowskiQuartic => "minkowski_quartic",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Family, MetricError> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == tag)
            .ok_or_else(|| MetricError::UnknownFamily(tag.to_string()))
    }

    /// One-paragraph description of the family and its parameters.
    pub fn doc(self) -> &'static str {
        match self {
            Family::Euclidean => "L = sqrt(sum (y^i)^2). No parameters.",
            Family::RiemannianSphere => {
                "Round unit sphere in nested polar coordinates: L^2 = (y1)^2 + sin^2(x1) (y2)^2 \
                 + sin^2(x1) sin^2(x2) (y3)^2 + ... No parameters."
            }
            Family::RiemannianCustom => {
                "L = sqrt(a_ij(x) y^i y^j). Parameter `a`: n x n table of expressions in x \
                 (strings or numbers), symmetric. Default a_ij = delta_ij + 0.1 x_i x_j."
            }
            Family::Randers => {
                "L = sqrt(a_ij(x) y^i y^j) + b_i(x) y^i. Parameters `a` (n x n table) and `b` \
                 (length-n list) of expressions in x; requires |b|_a < 1. Default \
                 a_ij = delta_ij + 0.2 sin(x_i) sin(x_j), b = (0.3 cos(x2), 0.2 sin(x1), 0.1 x1, 0.1 x2, ...)."
            }
            Family::MinkowskiQuartic => "L = (sum (y^i)^4)^(1/4), independent of x. No parameters.",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSource {
    Family {
        family: Family,
        #[serde(default)]
        params: Map<String, Value>,
    },
    Expression {
        text: String,
    },
}

/// A validated Finsler fundamental function in `dim` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub dim: usize,
    pub source: MetricSource,
    pub description: String,
    lagrangian: ExprNode,
}

impl MetricSpec {
    /// The tree of `L`.
    pub fn lagrangian(&self) -> &ExprNode {
        &self.lagrangian
    }

    pub fn family(&self) -> Option<Family> {
        match &self.source {
            MetricSource::Family { family, .. } => Some(*family),
            MetricSource::Expression { .. } => None,
        }
    }

    /// `L` does not depend on position, so the Barthel connection vanishes.
    pub fn is_locally_minkowski(&self) -> bool {
        !self.lagrangian.depends_on_x()
    }

    /// `L²` is a quadratic form in `y`.
    pub fn is_riemannian(&self) -> bool {
        matches!(
            self.family(),
            Some(Family::Euclidean | Family::RiemannianSphere | Family::RiemannianCustom)
        )
    }

    /// Box from which base coordinates are sampled.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        match self.family() {
            Some(Family::RiemannianSphere) => {
                let lo = 0.3;
                vec![(lo, std::f64::consts::PI - lo); self.dim]
            }
            _ => vec![(-1.0, 1.0); self.dim],
        }
    }

    pub fn eval_value<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<S, MetricError> {
        self.lagrangian.eval_value(x, y)
    }

    pub fn eval_jet<S: Scalar>(&self, vars: &[Jet<S>]) -> Result<Jet<S>, MetricError> {
        self.lagrangian.eval_jet(vars)
    }

    /// Short label such as `builtin:randers` or `expr:sqrt(y1^2 + y2^2)`.
    pub fn label(&self) -> String {
        match &self.source {
            MetricSource::Family { family, .. } => format!("builtin:{family}"),
            MetricSource::Expression { text } => format!("expr:{text}"),
        }
    }
}

/// Parses `text` as the fundamental function `L` in dimension `dim`.
pub fn parse_metric(text: &str, dim: usize) -> Result<MetricSpec, MetricError> {
    if dim < 2 {
        return Err(MetricError::Dimension(dim));
    }
    let lagrangian = parse_expr(text, dim)?;
    Ok(MetricSpec {
        dim,
        source: MetricSource::Expression {
            text: text.to_string(),
        },
        description: format!("L = {text}"),
        lagrangian,
    })
}

fn y(i: usize) -> ExprNode {
    ExprNode::Y(i)
}

fn x(i: usize) -> ExprNode {
    ExprNode::X(i)
}

fn coefficient(v: &Value, dim: usize, what: &str) -> Result<ExprNode, MetricError> {
    let e = match v {
        Value::Number(n) => ExprNode::Const(
            n.as_f64()
                .ok_or_else(|| MetricError::Params(format!("{what}: bad number")))?,
        ),
        Value::String(s) => parse_expr(s, dim)?,
        other => {
            return Err(MetricError::Params(format!(
                "{what}: expected a number or expression string, got {other}"
            )))
        }
    };
    if e.depends_on_y() {
        return Err(MetricError::Params(format!(
            "{what}: coefficient expressions may depend on x only"
        )));
    }
    Ok(e)
}

fn matrix_param(
    params: &Map<String, Value>,
    key: &str,
    dim: usize,
    default: impl Fn(usize, usize) -> ExprNode,
) -> Result<Vec<Vec<ExprNode>>, MetricError> {
    let Some(v) = params.get(key) else {
        return Ok((0..dim)
            .map(|i| (0..dim).map(|j| default(i, j)).collect())
            .collect());
    };
    let rows = v
        .as_array()
        .filter(|r| r.len() == dim)
        .ok_or_else(|| MetricError::Params(format!("`{key}` must be a {dim} x {dim} table")))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().filter(|r| r.len() == dim).ok_or_else(|| {
                MetricError::Params(format!("`{key}` must be a {dim} x {dim} table"))
            })?;
            row.iter()
                .enumerate()
                .map(|(j, c)| coefficient(c, dim, &format!("{key}[{}][{}]", i + 1, j + 1)))
                .collect()
        })
        .collect()
}

fn vector_param(
    params: &Map<String, Value>,
    key: &str,
    dim: usize,
    default: impl Fn(usize) -> ExprNode,
) -> Result<Vec<ExprNode>, MetricError> {
    let Some(v) = params.get(key) else {
        return Ok((0..dim).map(default).collect());
    };
    let items = v
        .as_array()
        .filter(|r| r.len() == dim)
        .ok_or_else(|| MetricError::Params(format!("`{key}` must be a list of length {dim}")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, c)| coefficient(c, dim, &format!("{key}[{}]", i + 1)))
        .collect()
}

/// `a_ij y^i y^j`, written with each off-diagonal pair once.
fn quadratic_form(a: &[Vec<ExprNode>]) -> ExprNode {
    let n = a.len();
    let mut terms = Vec::new();
    for i in 0..n {
        for j in i..n {
            let coef = a[i][j].clone();
            if coef == ExprNode::Const(0.0) {
                continue;
            }
            let mono = if i == j {
                ExprNode::pow(y(i), 2.0)
            } else {
                ExprNode::mul(ExprNode::c(2.0), ExprNode::mul(y(i), y(j)))
            };
            terms.push(if coef == ExprNode::Const(1.0) {
                mono
            } else {
                ExprNode::mul(coef, mono)
            });
        }
    }
    ExprNode::sum(terms)
}

fn check_symmetric(a: &[Vec<ExprNode>], probes: &[Vec<f64>]) -> Result<(), MetricError> {
    let n = a.len();
    let zeros = vec![0.0; n];
    for p in probes {
        for i in 0..n {
            for j in (i + 1)..n {
                let aij: f64 = a[i][j].eval_value(p, &zeros)?;
                let aji: f64 = a[j][i].eval_value(p, &zeros)?;
                if (aij - aji).abs() > 1e-12 * (1.0 + aij.abs()) {
                    return Err(MetricError::Params(format!(
                        "`a` is not symmetric: a[{}][{}] != a[{}][{}] at x = {p:?}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

fn probe_points(bounds: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let mut sampler = Sampler::new(bounds.to_vec(), 0x5eed_0f_b0);
    let mut pts: Vec<Vec<f64>> = (0..64).map(|_| sampler.next_point::<f64>().x).collect();
    pts.push(bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect());
    pts
}

/// `‖b‖_a = sqrt(b_i a^{ij} b_j)` at every probe point, failing at the first `≥ 1`.
fn check_randers(
    a: &[Vec<ExprNode>],
    b: &[ExprNode],
    probes: &[Vec<f64>],
) -> Result<(), MetricError> {
    let n = a.len();
    let zeros = vec![0.0; n];
    for p in probes {
        let am: Vec<Vec<f64>> = a
            .iter()
            .map(|row| row.iter().map(|c| c.eval_value(p, &zeros)).collect())
            .collect::<Result<_, _>>()?;
        let bv: Vec<f64> = b
            .iter()
            .map(|c| c.eval_value(p, &zeros))
            .collect::<Result<_, _>>()?;
        let norm2 = match solve_dense(&am, &bv) {
            Some(sol) => sol.iter().zip(&bv).map(|(s, b)| s * b).sum::<f64>(),
            None => f64::INFINITY,
        };
        let eig = jacobi_eigenvalues(&am);
        if !(eig.iter().all(|&e| e > 0.0) && norm2 < 1.0) {
            return Err(MetricError::RandersNorm {
                norm: norm2.max(0.0).sqrt(),
                x: p.clone(),
            });
        }
    }
    Ok(())
}

/// Builds a member of a built-in family. Unknown parameter keys are rejected.
pub fn builtin_metric(
    family: Family,
    dim: usize,
    params: Map<String, Value>,
) -> Result<MetricSpec, MetricError> {
    if dim < 2 {
        return Err(MetricError::Dimension(dim));
    }
    let allowed: &[&str] = match family {
        Family::RiemannianCustom => &["a"],
        Family::Randers => &["a", "b"],
        _ => &[],
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(MetricError::Params(format!(
            "family {family} does not take parameter `{k}`"
        )));
    }
    let lagrangian = match family {
        Family::Euclidean => ExprNode::call(
            Func::Sqrt,
            ExprNode::sum((0..dim).map(|i| ExprNode::pow(y(i), 2.0)).collect()),
        ),
        Family::RiemannianSphere => {
            let mut terms = Vec::new();
            for i in 0..dim {
                let mut t = ExprNode::pow(y(i), 2.0);
                for j in (0..i).rev() {
                    t = ExprNode::mul(ExprNode::pow(ExprNode::call(Func::Sin, x(j)), 2.0), t);
                }
                terms.push(t);
            }
            ExprNode::call(Func::Sqrt, ExprNode::sum(terms))
        }
        Family::RiemannianCustom => {
            let a = matrix_param(&params, "a", dim, |i, j| {
                let off = ExprNode::mul(ExprNode::c(0.1), ExprNode::mul(x(i), x(j)));
                if i == j {
                    ExprNode::add(ExprNode::c(1.0), off)
                } else {
                    off
                }
            })?;
            check_symmetric(&a, &probe_points(&vec![(-1.0, 1.0); dim]))?;
            ExprNode::call(Func::Sqrt, quadratic_form(&a))
        }
        Family::Randers => {
            let a = matrix_param(&params, "a", dim, |i, j| {
                let s = ExprNode::mul(
                    ExprNode::c(0.2),
                    ExprNode::mul(ExprNode::call(Func::Sin, x(i)), ExprNode::call(Func::Sin, x(j))),
                );
                if i == j {
                    ExprNode::add(ExprNode::c(1.0), s)
                } else {
                    s
                }
            })?;
            let b = vector_param(&params, "b", dim, |i| match i {
                0 => ExprNode::mul(ExprNode::c(0.3), ExprNode::call(Func::Cos, x(1))),
                1 => ExprNode::mul(ExprNode::c(0.2), ExprNode::call(Func::Sin, x(0))),
                k => ExprNode::mul(ExprNode::c(0.1), x((k - 2) % dim)),
            })?;
            let probes = probe_points(&vec![(-1.0, 1.0); dim]);
            check_symmetric(&a, &probes)?;
            check_randers(&a, &b, &probes)?;
            let linear = ExprNode::sum(
                b.into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != ExprNode::Const(0.0))
                    .map(|(i, c)| ExprNode::mul(c, y(i)))
                    .collect(),
            );
            ExprNode::add(ExprNode::call(Func::Sqrt, quadratic_form(&a)), linear)
        }
        Family::MinkowskiQuartic => ExprNode::pow(
            ExprNode::sum((0..dim).map(|i| ExprNode::pow(y(i), 4.0)).collect()),
            0.25,
        ),
    };
    Ok(MetricSpec {
        dim,
        description: format!("{family}: L = {}", lagrangian.unparse()),
        source: MetricSource::Family { family, params },
        lagrangian,
    })
}

/// On-disk metric document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricFile {
    pub dim: usize,
    pub kind: String,
    pub body: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl MetricFile {
    pub fn into_spec(self) -> Result<MetricSpec, MetricError> {
        match self.kind.as_str() {
            "expression" => {
                if !self.params.is_empty() {
                    return Err(MetricError::Document(
                        "expression metrics take no params".into(),
                    ));
                }
                parse_metric(&self.body, self.dim)
            }
            "family" => builtin_metric(Family::from_tag(&self.body)?, self.dim, self.params),
            other => Err(MetricError::Document(format!(
                "kind must be \"expression\" or \"family\", got {other:?}"
            ))),
        }
    }

    pub fn from_json(text: &str) -> Result<MetricSpec, MetricError> {
        let f: MetricFile =
            serde_json::from_str(text).map_err(|e| MetricError::Document(e.to_string()))?;
        f.into_spec()
    }
}

impl From<&MetricSpec> for MetricFile {
    fn from(spec: &MetricSpec) -> Self {
        match &spec.source {
            MetricSource::Family { family, params } => MetricFile {
                dim: spec.dim,
                kind: "family".into(),
                body: family.tag().into(),
                params: params.clone(),
            },
            MetricSource::Expression { text } => MetricFile {
                dim: spec.dim,
                kind: "expression".into(),
                body: text.clone(),
                params: Map::new(),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Validation

pub const HOMOGENEITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub samples: usize,
    /// Largest `|y·∂_y L − L| / (1 + |L|)`.
    pub homogeneity_residual_max: f64,
    /// Samples where `L` fails to evaluate, `L ≤ 0`, or `g` is not positive definite.
    pub positivity_violations: usize,
    pub min_eigenvalue: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Checks the Euler identity and positive definiteness at `count` sampled points.
pub fn validate_metric(spec: &MetricSpec, sampler: &mut Sampler, count: usize) -> ValidationReport {
    let mut report = ValidationReport {
        samples: count,
        homogeneity_residual_max: 0.0,
        positivity_violations: 0,
        min_eigenvalue: f64::INFINITY,
        pass: false,
        notes: Vec::new(),
    };
    for _ in 0..count {
        let p: ChartPoint<f64> = sampler.next_point();
        let note = |report: &mut ValidationReport, msg: String| {
            report.positivity_violations += 1;
            if report.notes.len() < 8 {
                report.notes.push(msg);
            }
        };
        let vars = seed_variables(&p.x, &p.y, 1);
        let l = match spec.eval_jet(&vars) {
            Ok(l) => l,
            Err(e) => {
                note(&mut report, format!("{p}: {e}"));
                continue;
            }
        };
        let l0 = l.value();
        let euler: f64 = (0..spec.dim)
            .map(|i| p.y[i] * l.dy(i).map(|d| d.value()).unwrap_or(f64::NAN))
            .sum();
        let h = (euler - l0).abs() / (1.0 + l0.abs());
        report.homogeneity_residual_max = if h.is_nan() {
            f64::NAN
        } else {
            report.homogeneity_residual_max.max(h)
        };
        if !(l0 > 0.0) {
            note(&mut report, format!("{p}: L = {l0} is not positive"));
            continue;
        }
        match metric_tensor(spec, &p) {
            Ok(g) => {
                let m: Vec<Vec<f64>> = (0..spec.dim)
                    .map(|i| (0..spec.dim).map(|j| *g.get(&[i, j])).collect())
                    .collect();
                let lam = jacobi_eigenvalues(&m)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                report.min_eigenvalue = report.min_eigenvalue.min(lam);
                if !(lam > 0.0) {
                    note(&mut report, format!("{p}: g has eigenvalue {lam:.6e}"));
                }
            }
            Err(e) => note(&mut report, format!("{p}: {e}")),
        }
    }
    report.pass = report.homogeneity_residual_max <= HOMOGENEITY_TOL
        && report.positivity_violations == 0
        && count > 0;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_euclidean_and_randers() {
        let e = parse_expr("sqrt(y1^2 + y2^2)", 2).unwrap();
        assert_eq!(
            e,
            ExprNode::call(
                Func::Sqrt,
                ExprNode::add(ExprNode::pow(y(0), 2.0), ExprNode::pow(y(1), 2.0))
            )
        );
        let r = parse_expr("sqrt(y1^2 + y2^2) + 0.3*y1", 2).unwrap();
        assert_eq!(r, ExprNode::add(e, ExprNode::mul(ExprNode::c(0.3), y(0))));
    }

    #[test]
    fn error_positions_are_byte_accurate() {
        assert_eq!(
            parse_expr("sqrt(y1^2 + z)", 2),
            Err(MetricError::UnknownIdentifier {
                pos: 12,
                name: "z".into()
            })
        );
        assert!(matches!(
            parse_expr("y3 + y1", 2),
            Err(MetricError::VariableOutOfRange { pos: 0, .. })
        ));
        assert!(matches!(
            parse_expr("sin(x1, x2)", 2),
            Err(MetricError::Arity { pos: 0, got: 2, .. })
        ));
        assert!(matches!(
            parse_expr("y1 + * y2", 2),
            Err(MetricError::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            parse_expr("(y1", 2),
            Err(MetricError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("y1^x1", 2),
            Err(MetricError::Syntax { pos: 3, .. })
        ));
    }

    #[test]
    fn unary_minus_binds_to_base() {
        let e = parse_expr("-y1^2", 2).unwrap();
        assert_eq!(e, ExprNode::pow(ExprNode::Neg(Box::new(y(0))), 2.0));
        assert_eq!(e.eval_value(&[0.0, 0.0], &[3.0, 0.0]).unwrap(), 9.0);
        let f = parse_expr("y1^-2", 2).unwrap();
        assert_eq!(f, ExprNode::pow(y(0), -2.0));
    }

    #[test]
    fn unparse_round_trips() {
        for text in [
            "sqrt(y1^2 + y2^2) + 0.3*y1",
            "-(x1 - x2)^3 / exp(-y1)",
            "(y1^4 + y2^4)^0.25",
            "log(2 + sin(x1)*cos(x2)) * y1 - --y2",
            "1e-3*y1 + 2.5e2*y2^-1",
        ] {
            let t = parse_expr(text, 2).unwrap();
            assert_eq!(parse_expr(&t.unparse(), 2).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn domain_error_names_subexpression() {
        let e = parse_expr("sqrt(y1 - 2)", 2).unwrap();
        match e.eval_value(&[0.0, 0.0], &[1.0, 0.0]) {
            Err(MetricError::Domain { op, subexpr, .. }) => {
                assert_eq!(op, "sqrt");
                assert_eq!(subexpr, "sqrt((y1 - 2))");
            }
            other => panic!("{other:?}"),
        }
        let vars = seed_variables(&[0.0, 0.0], &[1.0, 0.0], 2);
        assert!(matches!(e.eval_jet(&vars), Err(MetricError::Domain { op: "sqrt", .. })));
    }

    #[test]
    fn order_zero_jet_matches_value_exactly() {
        let spec = builtin_metric(Family::Randers, 3, Map::new()).unwrap();
        let (xs, ys) = ([0.3, -0.7, 0.11], [1.3, -0.4, 0.8]);
        let v: f64 = spec.eval_value(&xs, &ys).unwrap();
        let j = spec.eval_jet(&seed_variables(&xs, &ys, 0)).unwrap();
        assert_eq!(j.value(), v);
    }

    #[test]
    fn families_build() {
        for f in Family::ALL {
            for dim in 2..=4 {
                let s = builtin_metric(f, dim, Map::new()).unwrap();
                assert_eq!(s.dim, dim);
                assert_eq!(s.is_locally_minkowski(), matches!(f, Family::Euclidean | Family::MinkowskiQuartic));
            }
        }
        let sphere = builtin_metric(Family::RiemannianSphere, 2, Map::new()).unwrap();
        let l: f64 = sphere.eval_value(&[0.5, 0.0], &[1.0, 2.0]).unwrap();
        assert!((l * l - (1.0 + 0.5f64.sin().powi(2) * 4.0)).abs() < 1e-14);
        let q = builtin_metric(Family::MinkowskiQuartic, 2, Map::new()).unwrap();
        let l: f64 = q.eval_value(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((l - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn randers_rejects_long_b() {
        let mut params = Map::new();
        params.insert("b".into(), serde_json::json!([1.2, 0]));
        assert!(matches!(
            builtin_metric(Family::Randers, 2, params),
            Err(MetricError::RandersNorm { .. })
        ));
        let mut bad = Map::new();
        bad.insert("b".into(), serde_json::json!([0.1]));
        assert!(matches!(
            builtin_metric(Family::Randers, 2, bad),
            Err(MetricError::Params(_))
        ));
        let mut unknown = Map::new();
        unknown.insert("c".into(), serde_json::json!(1));
        assert!(builtin_metric(Family::Euclidean, 2, unknown).is_err());
    }

    #[test]
    fn metric_file_round_trip() {
        let text = r#"{"dim": 2, "kind": "family", "body": "randers",
                       "params": {"a": [[1, 0], [0, 1]], "b": ["0.3", 0]}}"#;
        let spec = MetricFile::from_json(text).unwrap();
        assert_eq!(spec.family(), Some(Family::Randers));
        let back = MetricFile::from(&spec).into_spec().unwrap();
        assert_eq!(back, spec);
        let e = MetricFile::from_json(r#"{"dim": 2, "kind": "expression", "body": "sqrt(y1^2+y2^2)"}"#)
            .unwrap();
        assert!(e.is_locally_minkowski());
    }

    #[test]
    fn validation_verdicts() {
        let spec = builtin_metric(Family::Euclidean, 2, Map::new()).unwrap();
        let mut s = Sampler::for_spec(&spec, 1);
        let r = validate_metric(&spec, &mut s, 10);
        assert!(r.pass);
        assert!(r.homogeneity_residual_max <= 1e-12);
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-12);

        let randers = builtin_metric(Family::Randers, 2, Map::new()).unwrap();
        let r = validate_metric(&randers, &mut Sampler::for_spec(&randers, 2), 20);
        assert!(r.pass, "{r:?}");

        let quad = parse_metric("y1^2 + y2^2", 2).unwrap();
        let r = validate_metric(&quad, &mut Sampler::for_spec(&quad, 3), 10);
        assert!(!r.pass);
        assert!(r.homogeneity_residual_max > 1e-3);

        let indef = parse_metric("sqrt(y1^2 - y2^2)", 2).unwrap();
        let r = validate_metric(&indef, &mut Sampler::for_spec(&indef, 4), 20);
        assert!(!r.pass);
        assert!(r.positivity_violations > 0);
    }
}

//! A small expression language for defining vector fields in text.
//!
//! A field of dimension `n` is written as `n` expressions over the variables
//! `x1..xn`, separated by `;` or newlines:
//!
//! ```text
//! -x2; x1                 # rotation in the plane
//! x1^2 - 0.25; x2 - 0.5
//! ```
//!
//! Grammar (whitespace-insensitive, `#` starts a comment):
//!
//! ```text
//! field := expr ((';' | '\n') expr)*
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := base ('^' unary)?
//! base  := number | 'pi' | 'e' | var | func '(' expr ')' | 'norm2' '(' ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x1^2`
//! is `-(x1^2)` and `2^-1` is `0.5`. Functions: `sin cos exp tanh abs sqrt`;
//! `norm2()` is the squared Euclidean norm of the whole variable vector.

use std::f64::consts;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::field::FieldSpec;

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Tanh,
    Abs,
    Sqrt,
}

impl UnaryOp {
    pub const FUNCTIONS: [UnaryOp; 6] = [
        UnaryOp::Sin,
        UnaryOp::Cos,
        UnaryOp::Exp,
        UnaryOp::Tanh,
        UnaryOp::Abs,
        UnaryOp::Sqrt,
    ];

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "tanh" => UnaryOp::Tanh,
            "abs" => UnaryOp::Abs,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            UnaryOp::Neg => -v,
            UnaryOp::Sin => v.sin(),
            UnaryOp::Cos => v.cos(),
            UnaryOp::Exp => v.exp(),
            UnaryOp::Tanh => v.tanh(),
            UnaryOp::Abs => v.abs(),
            UnaryOp::Sqrt => v.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 5] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Pow,
    ];

    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Mul => " * ",
            BinaryOp::Div => " / ",
            BinaryOp::Pow => "^",
        }
    }

    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Div => a / b,
            BinaryOp::Pow => power(a, b),
        }
    }
}

/// Real-valued power; a negative base with a non-integer exponent is NaN.
fn power(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Zero-based variable index: `Var(0)` is `x1`.
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Norm2,
}

impl Expr {
    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Largest zero-based variable index referenced, if any.
    pub fn max_variable(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Norm2 => None,
            Expr::Var(i) => Some(*i),
            Expr::Unary(_, e) => e.max_variable(),
            Expr::Binary(_, a, b) => a.max_variable().max(b.max_variable()),
        }
    }

    /// IEEE-754 evaluation; may return NaN or infinity.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Unary(op, e) => op.apply(e.eval_unchecked(x)),
            Expr::Binary(op, a, b) => op.apply(a.eval_unchecked(x), b.eval_unchecked(x)),
            Expr::Norm2 => x.iter().map(|v| v * v).sum(),
        }
    }

    /// Evaluates at `x`, rejecting non-finite results.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if let Some(i) = self.max_variable() {
            if i >= x.len() {
                return Err(Error::DimensionMismatch {
                    expected: i + 1,
                    found: x.len(),
                });
            }
        }
        let v = self.eval_unchecked(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: x.to_vec() })
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Binary(BinaryOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimal parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c == consts::PI => f.write_str("pi"),
            Expr::Const(c) if *c == consts::E => f.write_str("e"),
            Expr::Const(c) if *c < 0.0 || c.is_sign_negative() => write!(f, "({c})"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Norm2 => f.write_str("norm2()"),
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expr::Unary(op, e) => write!(f, "{}({e})", op.name()),
            Expr::Binary(BinaryOp::Pow, a, b) => {
                write_child(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_child(f, b, b.precedence() < 3)
            }
            Expr::Binary(op, a, b) => {
                let p = self.precedence();
                write_child(f, a, a.precedence() < p)?;
                f.write_str(op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("expected {expected} expressions, found {found}")]
    Arity { expected: usize, found: usize },
}

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at line {line}, column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Separator,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("number {v}"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Separator => "separator".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> std::result::Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Spanned>, token| {
            out.push(Spanned {
                token,
                line: start_line,
                column: start_col,
            })
        };
        match c {
            '\n' => {
                push(&mut out, Token::Separator);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            ';' => push(&mut out, Token::Separator),
            '+' => push(&mut out, Token::Plus),
            '-' => push(&mut out, Token::Minus),
            '*' => push(&mut out, Token::Star),
            '/' => push(&mut out, Token::Slash),
            '^' => push(&mut out, Token::Caret),
            '(' => push(&mut out, Token::LParen),
            ')' => push(&mut out, Token::RParen),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let err = |msg: String| ParseError {
                    kind: ParseErrorKind::Syntax(msg),
                    line: start_line,
                    column: start_col,
                };
                let value: f64 = text
                    .parse()
                    .map_err(|_| err(format!("malformed number `{text}`")))?;
                if !value.is_finite() {
                    return Err(err(format!("number `{text}` is out of range")));
                }
                col += i - start;
                push(&mut out, Token::Number(value));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                push(&mut out, Token::Ident(chars[start..i].iter().collect()));
                continue;
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax(format!("unexpected character {other:?}")),
                    line,
                    column: col,
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        token: Token::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    depth: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError {
            kind,
            line: t.line,
            column: t.column,
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> PResult<()> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(ParseErrorKind::Syntax(format!(
                "expected {what}, found {}",
                self.peek().describe()
            ))))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_here(ParseErrorKind::Syntax("expression nested too deeply".into())));
        }
        Ok(())
    }

    fn list(&mut self) -> PResult<Vec<(Expr, usize, usize)>> {
        let mut exprs = Vec::new();
        loop {
            while *self.peek() == Token::Separator {
                self.bump();
            }
            if *self.peek() == Token::Eof {
                return Ok(exprs);
            }
            let (line, column) = (self.tokens[self.pos].line, self.tokens[self.pos].column);
            exprs.push((self.expr()?, line, column));
            match self.peek() {
                Token::Separator | Token::Eof => {}
                other => {
                    let msg = format!("expected `;`, newline or end of input, found {}", other.describe());
                    return Err(self.error_here(ParseErrorKind::Syntax(msg)));
                }
            }
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => break,
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => break,
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let e = if *self.peek() == Token::Minus {
            self.bump();
            Expr::unary(UnaryOp::Neg, self.unary()?)
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.base()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn base(&mut self) -> PResult<Expr> {
        let here = self.pos;
        let t = self.bump();
        match t.token {
            Token::Number(v) => Ok(Expr::Const(v)),
            Token::LParen => {
                let e = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(e)
            }
            Token::Ident(name) => {
                if *self.peek() == Token::LParen {
                    self.bump();
                    if name == "norm2" {
                        self.expect(Token::RParen, "`)` (norm2 takes no arguments)")?;
                        return Ok(Expr::Norm2);
                    }
                    let Some(op) = UnaryOp::from_name(&name) else {
                        self.pos = here;
                        return Err(self.error_here(ParseErrorKind::UnknownFunction(name)));
                    };
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "`)`")?;
                    return Ok(Expr::unary(op, arg));
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::Const(consts::PI)),
                    "e" => return Ok(Expr::Const(consts::E)),
                    _ => {}
                }
                if let Some(index) = variable_index(&name) {
                    return Ok(Expr::Var(index));
                }
                self.pos = here;
                Err(self.error_here(ParseErrorKind::UnknownIdentifier(name)))
            }
            other => {
                self.pos = here;
                Err(self.error_here(ParseErrorKind::Syntax(format!(
                    "expected an operand, found {}",
                    other.describe()
                ))))
            }
        }
    }
}

/// `x1` -> 0, `x12` -> 11; anything else (including `x0`, `x01`) is not a variable.
fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

fn parse_list(text: &str) -> PResult<Vec<(Expr, usize, usize)>> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    parser.list()
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> PResult<Expr> {
    let mut list = parse_list(text)?;
    match list.len() {
        1 => Ok(list.pop().unwrap().0),
        found => Err(ParseError {
            kind: ParseErrorKind::Arity { expected: 1, found },
            line: 1,
            column: 1,
        }),
    }
}

fn check_variables(list: &[(Expr, usize, usize)], dim: usize) -> PResult<()> {
    for (e, line, column) in list {
        if let Some(i) = e.max_variable() {
            if i >= dim {
                return Err(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(format!("x{} (field dimension is {dim})", i + 1)),
                    line: *line,
                    column: *column,
                });
            }
        }
    }
    Ok(())
}

/// Parses an `n`-dimensional field.
pub fn parse_field(text: &str, dim: usize) -> Result<FieldSpec> {
    let list = parse_list(text)?;
    if list.len() != dim {
        let (line, column) = list.get(dim).map(|(_, l, c)| (*l, *c)).unwrap_or((1, 1));
        return Err(ParseError {
            kind: ParseErrorKind::Arity {
                expected: dim,
                found: list.len(),
            },
            line,
            column,
        }
        .into());
    }
    check_variables(&list, dim)?;
    FieldSpec::from_expressions(dim, list.into_iter().map(|(e, ..)| e).collect())
}

/// Parses a field whose dimension is the number of expressions.
pub fn parse_field_infer_dim(text: &str) -> Result<FieldSpec> {
    let list = parse_list(text)?;
    if list.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Arity { expected: 1, found: 0 },
            line: 1,
            column: 1,
        }
        .into());
    }
    let dim = list.len();
    check_variables(&list, dim)?;
    FieldSpec::from_expressions(dim, list.into_iter().map(|(e, ..)| e).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str, x: &[f64]) -> Result<f64> {
        parse_expr(text).unwrap().evaluate(x)
    }

    #[test]
    fn evaluates_examples() {
        assert_eq!(eval("x1*x2 + 1", &[2.0, 3.0]).unwrap(), 7.0);
        assert_eq!(eval("sin(x1)", &[0.0]).unwrap(), 0.0);
        assert!(matches!(eval("1/x1", &[0.0]), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn field_examples() {
        let rot = parse_field("-x2; x1", 2).unwrap();
        assert_eq!(rot.evaluate(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);

        let f = parse_field("x1^2; x2", 2).unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);

        let err = parse_field("x1; x2; x3", 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Parse(ParseError {
                kind: ParseErrorKind::Arity { expected: 2, found: 3 },
                ..
            })
        ));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("-x1^2", &[3.0]).unwrap(), -9.0);
        assert_eq!(eval("2^3^2", &[]).unwrap(), 512.0);
        assert_eq!(eval("2^-1", &[]).unwrap(), 0.5);
        assert_eq!(eval("1 - 2 - 3", &[]).unwrap(), -4.0);
        assert_eq!(eval("8 / 4 / 2", &[]).unwrap(), 1.0);
        assert_eq!(eval("1 + 2 * 3", &[]).unwrap(), 7.0);
        assert_eq!(eval("(1 + 2) * 3", &[]).unwrap(), 9.0);
        assert_eq!(eval("--x1", &[2.0]).unwrap(), 2.0);
        assert_eq!(eval("norm2()", &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(eval("pi", &[]).unwrap(), consts::PI);
        assert_eq!(eval("e", &[]).unwrap(), consts::E);
        assert_eq!(eval("1.5e2 + .5", &[]).unwrap(), 150.5);
    }

    #[test]
    fn negative_base_with_fractional_exponent_is_a_domain_error() {
        assert!(eval("x1^0.5", &[-4.0]).is_err());
        assert_eq!(eval("x1^3", &[-2.0]).unwrap(), -8.0);
        assert!(eval("sqrt(x1)", &[-1.0]).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("x1;\n  foo").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
        assert_eq!((e.line, e.column), (2, 3));

        let e = parse_expr("log(x1)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownFunction("log".into()));
        assert_eq!((e.line, e.column), (1, 1));

        let e = parse_expr("x1 + * 2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 6);

        let e = parse_expr("(x1").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        assert!(parse_expr("1e999").is_err());
        assert!(parse_expr("x0").is_err());
        assert!(parse_expr("x1 x2").is_err());
        assert!(parse_expr("x1 $ 2").is_err());
    }

    #[test]
    fn variables_beyond_dimension_are_unknown() {
        let err = parse_field("x1; x3", 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Parse(ParseError {
                kind: ParseErrorKind::UnknownIdentifier(_),
                line: 1,
                column: 5
            })
        ));
    }

    #[test]
    fn comments_blank_lines_and_trailing_separators() {
        let f = parse_field("# rotation\n-x2\n\nx1;\n", 2).unwrap();
        assert_eq!(f.evaluate(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        let g = parse_field_infer_dim("x1; x2; x3").unwrap();
        assert_eq!(g.dim(), 3);
        assert!(parse_field_infer_dim("  # nothing\n").is_err());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = "(".repeat(100_000);
        assert!(parse_expr(&text).is_err());
        let text = "-".repeat(100_000) + "1";
        assert!(parse_expr(&text).is_err());
    }

    #[test]
    fn display_round_trips_tricky_trees() {
        for text in [
            "-x1^2",
            "(-x1)^2",
            "x1^-x2",
            "2^3^2",
            "(2^3)^2",
            "x1 - (x2 - x3)",
            "x1 / (x2 * x3)",
            "-(x1 + x2)",
            "--x1",
            "sin(x1 + 1) * norm2()",
            "x1 - -x2",
            "pi * e",
        ] {
            let e = parse_expr(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{text} -> {printed}");
        }
    }
}

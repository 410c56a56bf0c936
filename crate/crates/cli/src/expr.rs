//! Arithmetic expressions in `t` for coefficient and load profiles.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?          right-associative
//! atom  := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | exp | tanh | sqrt | abs
//! ```
//!
//! So `-2^2 = -4` and `2^3^2 = 512`.

use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Tanh,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DivisionByZero,
    NegativeSqrt(f64),
    NonFinite,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero => write!(f, "division by zero"),
            EvalError::NegativeSqrt(v) => write!(f, "sqrt of negative value {v:?}"),
            EvalError::NonFinite => write!(f, "non-finite value"),
        }
    }
}

impl Expr {
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Pi => PI,
            Expr::Neg(e) => -e.eval(t)?,
            Expr::Bin(op, l, r) => {
                let (l, r) = (l.eval(t)?, r.eval(t)?);
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div if r == 0.0 => return Err(EvalError::DivisionByZero),
                    BinOp::Div => l / r,
                    BinOp::Pow => l.powf(r),
                }
            }
            Expr::Call(func, arg) => {
                let x = arg.eval(t)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Tanh => x.tanh(),
                    Func::Sqrt if x < 0.0 => return Err(EvalError::NegativeSqrt(x)),
                    Func::Sqrt => x.sqrt(),
                    Func::Abs => x.abs(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => write!(f, "t"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, l, r) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({l}{sym}{r})")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
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
            let text = &src[start..i];
            let v = text.parse::<f64>().map_err(|_| ParseError {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    let ch = src[i..].chars().next().unwrap_or(c);
                    return Err(ParseError {
                        offset: i,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            };
            out.push((i, tok));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "t" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Pi),
                    _ => {
                        let Some(func) = Func::from_name(&name) else {
                            return Err(ParseError {
                                offset: at,
                                message: format!("unknown identifier `{name}`"),
                            });
                        };
                        if self.peek() != Some(&Tok::LParen) {
                            return self.err(format!("expected `(` after `{name}`"));
                        }
                        self.pos += 1;
                        let arg = self.expr()?;
                        self.close()?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Some(_) => self.err("expected a number, `t`, `pi`, a function or `(`"),
            None => self.err("unexpected end of expression"),
        }
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else if self.peek().is_none() {
            self.err("missing `)`")
        } else {
            self.err("expected `)`")
        }
    }
}

pub fn parse_expression(source: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(source)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: source.len(),
    };
    let e = parser.expr()?;
    if parser.pos < parser.toks.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, t: f64) -> f64 {
        parse_expression(src).unwrap().eval(t).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!((eval("1000*sin(pi*t)^2", 0.5) - 1000.0).abs() < 1e-9);
        assert_eq!(eval("t", 0.25), 0.25);
        let err = parse_expression("2*(3+").unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("-2^2", 0.0), -4.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("2^-1", 0.0), 0.5);
        assert_eq!(eval("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(eval("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(eval("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(eval("--t", 3.0), 3.0);
        assert_eq!(eval("2.5e-1 + 1E2", 0.0), 100.25);
        assert_eq!(eval("  abs( -t ) ", 2.0), 2.0);
        assert!((eval("sqrt(4)*exp(0)+cos(0)-tanh(0)", 0.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse_expression("foo(t)").unwrap_err().offset, 0);
        assert!(parse_expression("foo(t)").unwrap_err().message.contains("unknown identifier"));
        assert_eq!(parse_expression("1 + $").unwrap_err().offset, 4);
        assert_eq!(parse_expression("sin t").unwrap_err().offset, 4);
        assert_eq!(parse_expression("(1 2)").unwrap_err().offset, 3);
        assert_eq!(parse_expression("1 2").unwrap_err().offset, 2);
        assert_eq!(parse_expression("").unwrap_err().offset, 0);
    }

    #[test]
    fn evaluation_errors() {
        let e = parse_expression("1/(t-1)").unwrap();
        assert_eq!(e.eval(1.0), Err(EvalError::DivisionByZero));
        let e = parse_expression("sqrt(t)").unwrap();
        assert!(matches!(e.eval(-1.0), Err(EvalError::NegativeSqrt(_))));
        let e = parse_expression("exp(t)").unwrap();
        assert_eq!(e.eval(1e4), Err(EvalError::NonFinite));
    }

    #[test]
    fn display_reparses_to_same_values() {
        let src = "-3*t^2 + sin(pi*t)/(1+t) - 2^-t";
        let e = parse_expression(src).unwrap();
        let again = parse_expression(&e.to_string()).unwrap();
        for t in [0.0, 0.3, 1.7] {
            assert_eq!(e.eval(t), again.eval(t));
        }
    }
}

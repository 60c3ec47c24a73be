//! Expression language for metric components, spinor fields, basis
//! changes and force fields: coordinates x0..x3, arithmetic, and a small
//! set of elementary functions, evaluated with order-2 Taylor jets.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::scalar::Jet2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    Num(f64),
    /// Coordinate x0..x3.
    Var(usize),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Div(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

impl Expression {
    pub fn num(v: f64) -> Expression {
        Expression::Num(v)
    }

    pub fn zero() -> Expression {
        Expression::Num(0.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expression::Num(v) if *v == 0.0)
    }

    /// Evaluate to a second-order jet at the point `x`.
    pub fn eval_jet(&self, x: &[f64; 4]) -> Result<Jet2> {
        match self {
            Expression::Num(v) => Ok(Jet2::constant(*v)),
            Expression::Var(k) => Ok(Jet2::variable(*k, x[*k])),
            Expression::Neg(a) => Ok(-a.eval_jet(x)?),
            Expression::Add(a, b) => Ok(a.eval_jet(x)? + b.eval_jet(x)?),
            Expression::Sub(a, b) => Ok(a.eval_jet(x)? - b.eval_jet(x)?),
            Expression::Mul(a, b) => Ok(a.eval_jet(x)? * b.eval_jet(x)?),
            Expression::Div(a, b) => {
                let d = b.eval_jet(x)?;
                if d.v == 0.0 {
                    return Err(Error::Domain {
                        func: "div",
                        arg: 0.0,
                    });
                }
                Ok(a.eval_jet(x)? / d)
            }
            Expression::Pow(a, b) => {
                let base = a.eval_jet(x)?;
                let exp = b.eval_jet(x)?;
                let is_const = exp.d == [0.0; 4] && exp.h == [[0.0; 4]; 4];
                let rounded = libm::round(exp.v);
                if is_const && (exp.v - rounded).abs() < 1e-12 && rounded.abs() < 64.0 {
                    Ok(base.powi(rounded as i64))
                } else {
                    if base.v <= 0.0 {
                        return Err(Error::Domain {
                            func: "pow",
                            arg: base.v,
                        });
                    }
                    // base^exp = exp(exp * log base)
                    let ln = base.compose(libm::log(base.v), 1.0 / base.v, -1.0 / (base.v * base.v));
                    let prod = exp * ln;
                    Ok(prod.compose(
                        libm::exp(prod.v),
                        libm::exp(prod.v),
                        libm::exp(prod.v),
                    ))
                }
            }
            Expression::Call(f, a) => {
                let u = a.eval_jet(x)?;
                let v = u.v;
                match f {
                    Func::Sin => Ok(u.compose(libm::sin(v), libm::cos(v), -libm::sin(v))),
                    Func::Cos => Ok(u.compose(libm::cos(v), -libm::sin(v), -libm::cos(v))),
                    Func::Tan => {
                        let t = libm::tan(v);
                        let sec2 = 1.0 + t * t;
                        Ok(u.compose(t, sec2, 2.0 * t * sec2))
                    }
                    Func::Exp => {
                        let e = libm::exp(v);
                        Ok(u.compose(e, e, e))
                    }
                    Func::Log => {
                        if v <= 0.0 {
                            return Err(Error::Domain { func: "log", arg: v });
                        }
                        Ok(u.compose(libm::log(v), 1.0 / v, -1.0 / (v * v)))
                    }
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(Error::Domain {
                                func: "sqrt",
                                arg: v,
                            });
                        }
                        let s = libm::sqrt(v);
                        Ok(u.compose(s, 0.5 / s, -0.25 / (s * v)))
                    }
                    Func::Sinh => Ok(u.compose(libm::sinh(v), libm::cosh(v), libm::sinh(v))),
                    Func::Cosh => Ok(u.compose(libm::cosh(v), libm::sinh(v), libm::cosh(v))),
                    Func::Tanh => {
                        let t = libm::tanh(v);
                        let sech2 = 1.0 - t * t;
                        Ok(u.compose(t, sech2, -2.0 * t * sech2))
                    }
                }
            }
        }
    }

    /// Plain value at a point.
    pub fn eval(&self, x: &[f64; 4]) -> Result<f64> {
        Ok(self.eval_jet(x)?.v)
    }

    /// Render back to source form. Fully parenthesized below the top
    /// level so that parse(print(e)) reproduces the tree exactly.
    pub fn print(&self) -> String {
        match self {
            Expression::Num(v) => {
                if *v < 0.0 {
                    format!("({v})")
                } else {
                    v.to_string()
                }
            }
            Expression::Var(k) => format!("x{k}"),
            Expression::Neg(a) => format!("(-{})", a.print()),
            Expression::Add(a, b) => format!("({} + {})", a.print(), b.print()),
            Expression::Sub(a, b) => format!("({} - {})", a.print(), b.print()),
            Expression::Mul(a, b) => format!("({} * {})", a.print(), b.print()),
            Expression::Div(a, b) => format!("({} / {})", a.print(), b.print()),
            Expression::Pow(a, b) => format!("({} ^ {})", a.print(), b.print()),
            Expression::Call(f, a) => format!("{}({})", f.name(), a.print()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

pub fn parse_expression(text: &str) -> Result<Expression> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("end of input or operator"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len_utf8();
            true
        } else {
            false
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = Expression::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = Expression::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                lhs = Expression::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat('/') {
                let rhs = self.unary()?;
                lhs = Expression::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    // unary := '-' unary | power      (unary minus binds looser than ^)
    fn unary(&mut self) -> Result<Expression> {
        if self.eat('-') {
            Ok(Expression::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    // power := atom ('^' unary)?      (right-associative)
    fn power(&mut self) -> Result<Expression> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            Ok(Expression::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expression> {
        match self.peek() {
            Some('(') => {
                self.eat('(');
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.error("number, variable, function, or '('")),
        }
    }

    fn number(&mut self) -> Result<Expression> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        let mut seen_dot = false;
        while end < bytes.len() {
            let c = bytes[end] as char;
            if c.is_ascii_digit() {
                end += 1;
            } else if c == '.' && !seen_dot {
                seen_dot = true;
                end += 1;
            } else if (c == 'e' || c == 'E')
                && end > start
                && end + 1 < bytes.len()
                && (bytes[end + 1].is_ascii_digit()
                    || ((bytes[end + 1] == b'+' || bytes[end + 1] == b'-')
                        && end + 2 < bytes.len()
                        && bytes[end + 2].is_ascii_digit()))
            {
                end += 2; // exponent marker plus sign or first digit
                while end < bytes.len() && (bytes[end] as char).is_ascii_digit() {
                    end += 1;
                }
                break;
            } else {
                break;
            }
        }
        let text = &self.src[start..end];
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = end;
                Ok(Expression::Num(v))
            }
            Err(_) => Err(self.error("numeric literal")),
        }
    }

    fn ident(&mut self) -> Result<Expression> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && (bytes[end] as char).is_ascii_alphanumeric() {
            end += 1;
        }
        let name = &self.src[start..end];
        self.pos = end;
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(k) = rest.parse::<usize>() {
                if k < 4 {
                    return Ok(Expression::Var(k));
                }
                self.pos = start;
                return Err(self.error("variable x0..x3"));
            }
        }
        if let Some(f) = Func::from_name(name) {
            if !self.eat('(') {
                return Err(self.error("'(' after function name"));
            }
            let arg = self.expr()?;
            if !self.eat(')') {
                return Err(self.error("')'"));
            }
            return Ok(Expression::Call(f, Box::new(arg)));
        }
        self.pos = start;
        Err(self.error("variable x0..x3 or function name"))
    }
}

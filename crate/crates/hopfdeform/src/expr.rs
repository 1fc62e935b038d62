//! Arithmetic expressions over integer key components.
//!
//! Grammar: `+ - * /`, integer powers `^n`, parentheses, decimal literals,
//! the imaginary unit `i`, and variables bound by the caller.

use hopfdeform_core::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(Scalar),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

/// A parsed expression with variables resolved to slot indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| format!("bad number '{}'", text))?;
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()×−".contains(c) {
            out.push(Tok::Op(match c {
                '×' => '*',
                '−' => '-',
                other => other,
            }));
            i += 1;
        } else {
            return Err(format!("unexpected character '{}'", c));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [(&'a str, usize)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, String> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Node, String> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, String> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    self.pos += 1;
                    Ok(Node::Pow(Box::new(base), v as u32))
                }
                _ => Err("exponent must be a non-negative integer literal".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Node, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(Scalar::real(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(&(_, slot)) = self.vars.iter().find(|(n, _)| *n == name) {
                    Ok(Node::Var(slot))
                } else if name == "i" {
                    Ok(Node::Num(Scalar::I))
                } else {
                    Err(format!("unknown variable '{}'", name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(inner)
            }
            Some(t) => Err(format!("unexpected token {:?}", t)),
            None => Err("unexpected end of expression".into()),
        }
    }
}

impl Expr {
    /// Parses `src`; `vars` maps each accepted name to the slot it reads.
    pub fn parse(src: &str, vars: &[(&str, usize)]) -> Result<Self, String> {
        let toks = tokenize(src)?;
        let mut p = Parser { toks, pos: 0, vars };
        let root = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(format!("trailing input at token {}", p.pos));
        }
        Ok(Expr {
            source: src.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, slots: &[i32]) -> Scalar {
        eval(&self.root, slots)
    }
}

fn eval(n: &Node, slots: &[i32]) -> Scalar {
    match n {
        Node::Num(v) => *v,
        Node::Var(i) => Scalar::real(slots[*i] as f64),
        Node::Neg(a) => -eval(a, slots),
        Node::Add(a, b) => eval(a, slots) + eval(b, slots),
        Node::Sub(a, b) => eval(a, slots) - eval(b, slots),
        Node::Mul(a, b) => eval(a, slots) * eval(b, slots),
        Node::Div(a, b) => eval(a, slots) / eval(b, slots),
        Node::Pow(a, k) => eval(a, slots).powi(*k),
    }
}

/// Variable table for a function of one key in `ℤ^d`: `k1..kd`, with `k`
/// and `m` naming the first component.
pub fn key_vars(d: usize) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = (0..d).map(|i| (format!("k{}", i + 1), i)).collect();
    if d >= 1 {
        v.push(("k".into(), 0));
        v.push(("m".into(), 0));
    }
    v
}

/// Variable table for a function of two keys in `ℤ^d`: `k1..kd` and
/// `l1..ld`, with `m`, `k` and `n`, `l` naming the first components.
pub fn pair_vars(d: usize) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = (0..d).map(|i| (format!("k{}", i + 1), i)).collect();
    v.extend((0..d).map(|i| (format!("l{}", i + 1), d + i)));
    if d >= 1 {
        v.push(("k".into(), 0));
        v.push(("m".into(), 0));
        v.push(("l".into(), d));
        v.push(("n".into(), d));
    }
    v
}

/// Parses against an owned variable table.
pub fn parse_with(src: &str, vars: &[(String, usize)]) -> Result<Expr, String> {
    let borrowed: Vec<(&str, usize)> = vars.iter().map(|(n, i)| (n.as_str(), *i)).collect();
    Expr::parse(src, &borrowed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_cocycle_expression() {
        let e = parse_with("m^2*n + m*n^2", &pair_vars(1)).unwrap();
        assert_eq!(e.eval(&[2, 3]), Scalar::real(30.0));
        assert_eq!(e.eval(&[-1, 4]), Scalar::real(4.0 - 16.0));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_with("-k^3/3 + 2*(k - 1)", &key_vars(1)).unwrap();
        assert!((e.eval(&[3]).re - (-9.0 + 4.0)).abs() < 1e-15);
        let e = parse_with("-2^2", &[]).unwrap();
        assert_eq!(e.eval(&[]), Scalar::real(-4.0));
    }

    #[test]
    fn imaginary_unit_and_components() {
        let e = parse_with("i*(k1*l2 - k2*l1)", &pair_vars(2)).unwrap();
        assert_eq!(e.eval(&[1, 0, 0, 1]), Scalar::I);
    }

    #[test]
    fn errors() {
        assert!(parse_with("m +", &pair_vars(1)).is_err());
        assert!(parse_with("q", &pair_vars(1)).is_err());
        assert!(parse_with("m^n", &pair_vars(1)).is_err());
        assert!(parse_with("(m", &pair_vars(1)).is_err());
        assert!(parse_with("m $ n", &pair_vars(1)).is_err());
    }
}

//! Expressions in one complex variable `x`.
//!
//! ```text
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = primary [ "^" unary ]
//! primary = number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
//! func    = "exp" | "sin" | "cos" | "sqrt" | "log"
//! ```
//!
//! `^` binds tighter than unary minus and associates to the right, so
//! `-x^2` is `-(x^2)` and `2^3^2` is `2^(3^2)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::conditioning::{NodeClass, RadiusRule};
use crate::error::{Error, Result};
use crate::funcspace::{AnalyticFn, EvalFn};

pub const MAX_SOURCE_LEN: usize = 4096;
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sqrt,
    Log,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "log" => Func::Log,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Log => "log",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    E,
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Apply(Func, Box<Expr>),
}

/// Fully parenthesised; re-parsing the output gives back the same tree for
/// non-negative literals.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => f.write_str("pi"),
            Expr::E => f.write_str("e"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Apply(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl Expr {
    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::E | Expr::Var => 1,
            Expr::Neg(a) | Expr::Apply(_, a) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Whether evaluation goes through a principal branch: a power with a
    /// non-integer exponent, `sqrt` or `log`.
    pub fn has_branch_cut(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::E | Expr::Var => false,
            Expr::Apply(Func::Sqrt | Func::Log, _) => true,
            Expr::Neg(a) | Expr::Apply(_, a) => a.has_branch_cut(),
            Expr::Pow(a, b) => integer_exponent(b).is_none() || a.has_branch_cut(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_branch_cut() || b.has_branch_cut()
            }
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let domain = |message: &str| Error::ExprDomain {
            subexpr: self.to_string(),
            message: message.into(),
        };
        Ok(match self {
            Expr::Num(v) => Complex64::new(*v, 0.0),
            Expr::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            Expr::E => Complex64::new(std::f64::consts::E, 0.0),
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let d = b.eval(z)?;
                if d == Complex64::new(0.0, 0.0) {
                    return Err(domain("division by zero"));
                }
                a.eval(z)? / d
            }
            Expr::Pow(a, b) => {
                let base = a.eval(z)?;
                match integer_exponent(b) {
                    Some(k) => {
                        if k < 0 && base == Complex64::new(0.0, 0.0) {
                            return Err(domain("zero raised to a negative power"));
                        }
                        powi(base, k)
                    }
                    None => {
                        let w = b.eval(z)?;
                        if base == Complex64::new(0.0, 0.0) {
                            if w.re > 0.0 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                return Err(domain("zero raised to a non-positive power"));
                            }
                        } else {
                            (w * base.ln()).exp()
                        }
                    }
                }
            }
            Expr::Apply(func, a) => {
                let v = a.eval(z)?;
                match func {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Sqrt => v.sqrt(),
                    Func::Log => {
                        if v == Complex64::new(0.0, 0.0) {
                            return Err(domain("logarithm of zero"));
                        }
                        v.ln()
                    }
                }
            }
        })
    }
}

/// Exponent given as an integer literal, possibly negated.
fn integer_exponent(e: &Expr) -> Option<i32> {
    match e {
        Expr::Num(v) if v.fract() == 0.0 && v.abs() <= 1024.0 => Some(*v as i32),
        Expr::Neg(inner) => integer_exponent(inner).map(|k| -k),
        _ => None,
    }
}

fn powi(base: Complex64, k: i32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut b = base;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    if k < 0 {
        result.inv()
    } else {
        result
    }
}

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
    Comma,
    End,
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
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
                let v: f64 = text
                    .parse()
                    .map_err(|_| parse_error(start, format!("malformed number `{text}`")))?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(parse_error(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(parse_error(self.offset(), format!("expected {what}")))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(parse_error(self.offset(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        self.enter()?;
        let out = if *self.peek() == Tok::Minus {
            self.bump();
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(out)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                self.depth -= 1;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                "e" => Ok(Expr::E),
                _ => {
                    let func = Func::from_name(&name)
                        .ok_or_else(|| parse_error(at, format!("unknown identifier `{name}`")))?;
                    self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                    self.enter()?;
                    if *self.peek() == Tok::RParen {
                        return Err(parse_error(self.offset(), format!("`{name}` takes one argument, got none")));
                    }
                    let arg = self.expr()?;
                    if *self.peek() == Tok::Comma {
                        return Err(parse_error(self.offset(), format!("`{name}` takes one argument")));
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    self.depth -= 1;
                    Ok(Expr::Apply(func, Box::new(arg)))
                }
            },
            Tok::End => Err(parse_error(at, "unexpected end of input")),
            other => Err(parse_error(at, format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    if src.len() > MAX_SOURCE_LEN {
        return Err(parse_error(MAX_SOURCE_LEN, "expression longer than 4096 bytes"));
    }
    if src.trim().is_empty() {
        return Err(parse_error(0, "empty expression"));
    }
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(parse_error(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Wraps a parsed expression as an [`AnalyticFn`]. `rho_max` is the
/// caller's claim about the analyticity region; expressions with branch
/// cuts accept only the `Fixed` and `Auto` radius rules.
pub fn from_expr(src: &str, rho_max: f64, rule: Option<RadiusRule>) -> Result<AnalyticFn> {
    let ast = parse(src)?;
    let branch_cut = ast.has_branch_cut();
    if branch_cut {
        if let Some(r) = &rule {
            if !matches!(r, RadiusRule::Fixed(_) | RadiusRule::Auto { .. }) {
                return Err(Error::InvalidArgument(
                    "expressions with branch cuts accept only fixed or auto radius rules".into(),
                ));
            }
        }
    }
    let ast = Arc::new(ast);
    let eval: EvalFn = Arc::new(move |z| ast.eval(z));
    let mut f = AnalyticFn::new(src.trim(), rho_max, eval)?.with_branch_cut(branch_cut);
    if let Some(rule) = rule {
        f = f.with_radius_rule(rule);
    }
    let class = if rho_max.is_finite() { NodeClass::PoleLike } else { NodeClass::EntireLike };
    Ok(f.with_node_class(class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::registry_lookup;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("exp(x)").unwrap(), Expr::Apply(Func::Exp, b(Expr::Var)));
        assert_eq!(
            parse("1/(x-2)").unwrap(),
            Expr::Div(b(Expr::Num(1.0)), b(Expr::Sub(b(Expr::Var), b(Expr::Num(2.0)))))
        );
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(b(Expr::Pow(b(Expr::Var), b(Expr::Num(2.0)))))
        );
    }

    #[test]
    fn associativity() {
        assert_eq!(
            parse("2^3^2").unwrap(),
            Expr::Pow(b(Expr::Num(2.0)), b(Expr::Pow(b(Expr::Num(3.0)), b(Expr::Num(2.0)))))
        );
        assert_eq!(
            parse("1 - 2 - 3").unwrap(),
            Expr::Sub(b(Expr::Sub(b(Expr::Num(1.0)), b(Expr::Num(2.0)))), b(Expr::Num(3.0)))
        );
        assert_eq!(parse("8/4/2").unwrap().eval(Complex64::new(0.0, 0.0)).unwrap().re, 1.0);
        assert_eq!(parse(" 2 *\tx ").unwrap(), parse("2*x").unwrap());
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = |s: &str| match parse(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(err(""), 0);
        assert_eq!(err("x +"), 3);
        assert_eq!(err("foo(x)"), 0);
        assert_eq!(err("exp(x, 2)"), 5);
        assert_eq!(err("exp()"), 4);
        assert_eq!(err("(x"), 2);
        assert_eq!(err("x $ 1"), 2);
        assert_eq!(err("x x"), 2);
        let deep = format!("{}x{}", "(".repeat(70), ")".repeat(70));
        assert!(parse(&deep).is_err());
        assert!(parse(&"1+".repeat(3000)).is_err());
    }

    #[test]
    fn eval_examples() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(parse("exp(x)").unwrap().eval(zero).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse("1/(x-2)").unwrap().eval(zero).unwrap(), Complex64::new(-0.5, 0.0));
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(parse("(x+1)/(x^2+1)").unwrap().eval(one).unwrap(), one);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let zero = Complex64::new(0.0, 0.0);
        match parse("1 + 1/x").unwrap().eval(zero) {
            Err(Error::ExprDomain { subexpr, .. }) => assert_eq!(subexpr, "(1.0 / x)"),
            other => panic!("{other:?}"),
        }
        assert!(parse("log(x)").unwrap().eval(zero).is_err());
        assert!(parse("x^-1").unwrap().eval(zero).is_err());
        assert!(parse("x^0.5").unwrap().eval(zero).unwrap() == zero);
    }

    #[test]
    fn branch_cut_flag() {
        assert!(!parse("x^3 + exp(x)").unwrap().has_branch_cut());
        assert!(!parse("x^-2").unwrap().has_branch_cut());
        assert!(parse("(2-x)^0.5").unwrap().has_branch_cut());
        assert!(parse("sqrt(2-x)").unwrap().has_branch_cut());
        assert!(from_expr("(2-x)^0.5", 3.7, Some(RadiusRule::Pole { a: 3.7, refined: false })).is_err());
        let f = from_expr("(2-x)^0.5", 3.7, Some(RadiusRule::Fixed(2.0))).unwrap();
        assert!(f.has_branch_cut());
    }

    fn random_tree(rng: &mut ChaCha8Rng, depth: usize, allow_branch: bool) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            return match rng.gen_range(0..4) {
                0 => Expr::Var,
                1 => Expr::Pi,
                2 => Expr::E,
                _ => Expr::Num((rng.gen_range(0.0..10.0f64) * 8.0).round() / 8.0),
            };
        }
        let sub = |rng: &mut ChaCha8Rng| b(random_tree(rng, depth - 1, allow_branch));
        match rng.gen_range(0..8) {
            0 => Expr::Neg(sub(rng)),
            1 => Expr::Add(sub(rng), sub(rng)),
            2 => Expr::Sub(sub(rng), sub(rng)),
            3 => Expr::Mul(sub(rng), sub(rng)),
            4 => Expr::Div(sub(rng), sub(rng)),
            5 => Expr::Pow(sub(rng), b(Expr::Num(rng.gen_range(0..4) as f64))),
            _ => {
                let funcs: &[Func] = if allow_branch {
                    &[Func::Exp, Func::Sin, Func::Cos, Func::Sqrt, Func::Log]
                } else {
                    &[Func::Exp, Func::Sin, Func::Cos]
                };
                Expr::Apply(funcs[rng.gen_range(0..funcs.len())], sub(rng))
            }
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let tree = random_tree(&mut rng, 6, true);
            let printed = tree.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(reparsed, tree, "{printed}");
            assert_eq!(parse(&reparsed.to_string()).unwrap(), reparsed);
        }
    }

    #[test]
    fn schwarz_symmetry_of_real_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..200 {
            let tree = random_tree(&mut rng, 4, false);
            for k in 0..10 {
                let z = Complex64::new(-1.0 + 0.2 * k as f64, 0.3 + 0.05 * k as f64);
                let (Ok(a), Ok(b)) = (tree.eval(z.conj()), tree.eval(z)) else {
                    continue;
                };
                if !(a.norm().is_finite() && b.norm().is_finite()) {
                    continue;
                }
                assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0), "{tree}");
                checked += 1;
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn agrees_with_registry() {
        let pairs = [
            ("exp(x)", registry_lookup("exp", &[]).unwrap()),
            ("1/(x-2)", registry_lookup("pole", &[2.0]).unwrap()),
            ("(x+1)/(x^2+4)", registry_lookup("rational4", &[]).unwrap()),
            ("exp(2*x) + cos(2*x + 3)", registry_lookup("exp2cos", &[]).unwrap()),
        ];
        for (src, f) in pairs {
            let g = from_expr(src, f.rho_max(), None).unwrap();
            for j in 0..50 {
                let u = Complex64::from_polar(1.0 + 0.02 * j as f64, 0.37 * j as f64);
                let z = (u + u.inv()) * 0.5;
                let a = f.eval(z).unwrap();
                let b = g.eval(z).unwrap();
                assert!((a - b).norm() <= 1e-14 * a.norm(), "{src} at {z}");
            }
        }
    }
}

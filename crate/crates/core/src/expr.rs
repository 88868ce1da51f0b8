//! Entire-function expressions and the harmonic functions built from them.
//!
//! The grammar only admits constants, `z`, sums, products, non-negative
//! integer powers and `exp`, so every expression is an entire function and
//! its real and imaginary parts are harmonic on the whole plane.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abstract syntax tree of an entire function of one complex variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Z,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        Expr::Const(c.into())
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn z() -> Self {
        Expr::Z
    }

    pub fn add(l: Expr, r: Expr) -> Self {
        Expr::Add(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Expr, r: Expr) -> Self {
        Expr::Mul(Box::new(l), Box::new(r))
    }

    pub fn neg(e: Expr) -> Self {
        Expr::Neg(Box::new(e))
    }

    pub fn pow(e: Expr, k: u32) -> Self {
        Expr::Pow(Box::new(e), k)
    }

    pub fn exp(e: Expr) -> Self {
        Expr::Exp(Box::new(e))
    }

    /// Parses an expression in the textual grammar (see [`parse_expr`]).
    pub fn parse(src: &str) -> Result<Self> {
        parse_expr(src)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Z => z,
            Expr::Add(l, r) => l.eval(z) + r.eval(z),
            Expr::Mul(l, r) => l.eval(z) * r.eval(z),
            Expr::Neg(e) => -e.eval(z),
            Expr::Pow(e, k) => e.eval(z).powu(*k),
            Expr::Exp(e) => e.eval(z).exp(),
        }
    }

    /// Symbolic derivative with respect to `z`.
    ///
    /// Only zero and one factors are folded away; no other simplification is
    /// attempted.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::real(0.0),
            Expr::Z => Expr::real(1.0),
            Expr::Add(l, r) => s_add(l.derivative(), r.derivative()),
            Expr::Mul(l, r) => s_add(
                s_mul(l.derivative(), (**r).clone()),
                s_mul((**l).clone(), r.derivative()),
            ),
            Expr::Neg(e) => s_neg(e.derivative()),
            Expr::Pow(_, 0) => Expr::real(0.0),
            Expr::Pow(e, k) => {
                let outer = if *k == 1 {
                    Expr::real(1.0)
                } else if *k == 2 {
                    s_mul(Expr::real(2.0), (**e).clone())
                } else {
                    s_mul(Expr::real(*k as f64), Expr::pow((**e).clone(), k - 1))
                };
                s_mul(outer, e.derivative())
            }
            Expr::Exp(e) => s_mul(self.clone(), e.derivative()),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Z => false,
            Expr::Add(l, r) | Expr::Mul(l, r) => l.is_constant() && r.is_constant(),
            Expr::Neg(e) | Expr::Exp(e) => e.is_constant(),
            Expr::Pow(e, k) => *k == 0 || e.is_constant(),
        }
    }

    /// Coefficients `a_0..a_n` when the expression is a polynomial in `z`
    /// (exp of a constant counts as a constant). Trailing zero coefficients
    /// are trimmed, so the length minus one is the exact degree.
    pub fn polynomial_coefficients(&self) -> Option<Vec<Complex64>> {
        let mut coeffs = self.poly()?;
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        Some(coeffs)
    }

    pub fn polynomial_degree(&self) -> Option<usize> {
        self.polynomial_coefficients().map(|c| c.len() - 1)
    }

    fn poly(&self) -> Option<Vec<Complex64>> {
        Some(match self {
            Expr::Const(c) => vec![*c],
            Expr::Z => vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            Expr::Add(l, r) => {
                let (a, b) = (l.poly()?, r.poly()?);
                let mut out = vec![Complex64::new(0.0, 0.0); a.len().max(b.len())];
                for (i, c) in a.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in b.iter().enumerate() {
                    out[i] += c;
                }
                out
            }
            Expr::Mul(l, r) => poly_mul(&l.poly()?, &r.poly()?),
            Expr::Neg(e) => e.poly()?.into_iter().map(|c| -c).collect(),
            Expr::Pow(e, k) => {
                let base = e.poly()?;
                let mut out = vec![Complex64::new(1.0, 0.0)];
                for _ in 0..*k {
                    out = poly_mul(&out, &base);
                }
                out
            }
            Expr::Exp(e) => {
                if e.is_constant() {
                    vec![e.eval(Complex64::new(0.0, 0.0)).exp()]
                } else {
                    return None;
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if !is_atomic_const(*c) => 1,
            _ => 5,
        }
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.re == 0.0 && c.im == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if c.re == 1.0 && c.im == 0.0)
}

fn s_add(l: Expr, r: Expr) -> Expr {
    if is_zero(&l) {
        r
    } else if is_zero(&r) {
        l
    } else {
        Expr::add(l, r)
    }
}

fn s_mul(l: Expr, r: Expr) -> Expr {
    if is_zero(&l) || is_zero(&r) {
        Expr::real(0.0)
    } else if is_one(&l) {
        r
    } else if is_one(&r) {
        l
    } else {
        Expr::mul(l, r)
    }
}

fn s_neg(e: Expr) -> Expr {
    if is_zero(&e) {
        e
    } else {
        Expr::neg(e)
    }
}

/// Constants the parser produces directly: non-negative reals and `i`.
fn is_atomic_const(c: Complex64) -> bool {
    (c.im == 0.0 && c.re >= 0.0 && c.re.is_finite() && !c.re.is_sign_negative())
        || (c.re == 0.0 && c.im == 1.0)
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `Display` for f64 is shortest-roundtrip and never uses exponents,
    // which keeps the output inside the number grammar.
    write!(f, "{}", x)
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.re == 0.0 && c.im == 1.0 {
        return f.write_str("i");
    }
    if c.im == 0.0 {
        if c.re >= 0.0 && !c.re.is_sign_negative() {
            return write_real(f, c.re);
        }
        f.write_str("-")?;
        return write_real(f, -c.re);
    }
    // General complex constant: printed as an equivalent sum, which reparses
    // to a different (but numerically identical) tree.
    if c.re != 0.0 {
        if c.re < 0.0 {
            f.write_str("-")?;
        }
        write_real(f, c.re.abs())?;
        f.write_str(if c.im < 0.0 { " - " } else { " + " })?;
    } else if c.im < 0.0 {
        f.write_str("-")?;
    }
    write_real(f, c.im.abs())?;
    f.write_str("*i")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "({})", e)
            } else {
                write!(f, "{}", e)
            }
        }
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Z => f.write_str("z"),
            Expr::Add(l, r) => {
                wrap(f, l, 1)?;
                match &**r {
                    Expr::Neg(inner) => {
                        f.write_str(" - ")?;
                        wrap(f, inner, 2)
                    }
                    _ => {
                        f.write_str(" + ")?;
                        wrap(f, r, 2)
                    }
                }
            }
            Expr::Mul(l, r) => {
                wrap(f, l, 2)?;
                f.write_str("*")?;
                wrap(f, r, 3)
            }
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, 3)
            }
            Expr::Pow(e, k) => {
                wrap(f, e, 5)?;
                write!(f, "^{}", k)
            }
            Expr::Exp(e) => write!(f, "exp({})", e),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let mut value = parse_decimal(&src[start..i], start)?;
                // rational literal `p/q`
                if i < bytes.len() && bytes[i] == b'/' {
                    let den_start = i + 1;
                    let mut j = den_start;
                    while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                        j += 1;
                    }
                    if j == den_start {
                        return Err(Error::syntax(i, "expected denominator after '/'"));
                    }
                    let den = parse_decimal(&src[den_start..j], den_start)?;
                    if den == 0.0 {
                        return Err(Error::syntax(den_start, "zero denominator"));
                    }
                    value /= den;
                    i = j;
                }
                out.push((start, Tok::Num(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::syntax(start, format!("unexpected character '{}'", other)))
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn parse_decimal(s: &str, pos: usize) -> Result<f64> {
    if s.matches('.').count() > 1 || s == "." {
        return Err(Error::syntax(pos, format!("malformed number '{}'", s)));
    }
    s.parse::<f64>()
        .map_err(|_| Error::syntax(pos, format!("malformed number '{}'", s)))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::syntax(at, format!("expected {}", what))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::add(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::add(acc, Expr::neg(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = Expr::mul(acc, self.factor()?);
        }
        Ok(acc)
    }

    // Unary minus is handled here rather than in `base` so that `-z^2`
    // means `-(z^2)`.
    fn factor(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            return match self.bump() {
                Some(Tok::Num(k)) => {
                    if k.fract() != 0.0 {
                        Err(Error::BadExponent { pos: at, detail: format!("fractional exponent {}", k) })
                    } else if k > u32::MAX as f64 {
                        Err(Error::BadExponent { pos: at, detail: format!("exponent {} too large", k) })
                    } else {
                        Ok(Expr::pow(base, k as u32))
                    }
                }
                Some(Tok::Minus) => Err(Error::BadExponent {
                    pos: at,
                    detail: "negative exponent".into(),
                }),
                _ => Err(Error::BadExponent {
                    pos: at,
                    detail: "exponent must be a non-negative integer literal".into(),
                }),
            };
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(x)) => Ok(Expr::real(x)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "z" => Ok(Expr::Z),
                "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                "pi" => Ok(Expr::real(std::f64::consts::PI)),
                "e" => Ok(Expr::real(std::f64::consts::E)),
                "exp" => {
                    self.expect(Tok::LParen, "'(' after exp")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::exp(e))
                }
                _ => Err(Error::UnknownIdentifier { pos: at, name }),
            },
            Some(_) => Err(Error::syntax(at, "expected an operand")),
            None => Err(Error::syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses the expression grammar
///
/// ```text
/// expr   := term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := '-' factor | base ('^' uint)?
/// base   := 'z' | number | 'i' | 'pi' | 'e' | 'exp' '(' expr ')' | '(' expr ')'
/// ```
///
/// Numbers are decimals or rationals written `p/q`.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, len: src.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Harmonic components and maps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Real,
    Imag,
}

/// `Re F` or `Im F` for an entire expression `F`, with `F'` kept alongside
/// for exact gradients.
#[derive(Debug, Clone)]
pub struct HarmonicComponent {
    expr: Arc<Expr>,
    deriv: Arc<Expr>,
    part: Part,
}

impl PartialEq for HarmonicComponent {
    fn eq(&self, other: &Self) -> bool {
        self.part == other.part && self.expr == other.expr
    }
}

impl HarmonicComponent {
    pub fn new(expr: Expr, part: Part) -> Self {
        let deriv = expr.derivative();
        Self { expr: Arc::new(expr), deriv: Arc::new(deriv), part }
    }

    pub fn re(expr: Expr) -> Self {
        Self::new(expr, Part::Real)
    }

    pub fn im(expr: Expr) -> Self {
        Self::new(expr, Part::Imag)
    }

    /// Parses `re(<expr>)` or `im(<expr>)`.
    pub fn parse(src: &str) -> Result<Self> {
        let s = src.trim();
        let (part, rest) = if let Some(r) = s.strip_prefix("re") {
            (Part::Real, r)
        } else if let Some(r) = s.strip_prefix("im") {
            (Part::Imag, r)
        } else {
            return Err(Error::MapLiteral(format!("expected re(...) or im(...), got '{}'", s)));
        };
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::MapLiteral(format!("unbalanced selector in '{}'", s)))?;
        Ok(Self::new(parse_expr(inner)?, part))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn part(&self) -> Part {
        self.part
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        let w = self.expr.eval(z);
        match self.part {
            Part::Real => w.re,
            Part::Imag => w.im,
        }
    }

    /// `(∂x, ∂y)` via Cauchy–Riemann.
    pub fn gradient(&self, z: Complex64) -> (f64, f64) {
        let d = self.deriv.eval(z);
        match self.part {
            Part::Real => (d.re, -d.im),
            Part::Imag => (d.im, d.re),
        }
    }

    /// The same function written as the real part of an expression.
    pub fn as_real_part_expr(&self) -> Expr {
        match self.part {
            Part::Real => (*self.expr).clone(),
            // Im F = Re(-i F)
            Part::Imag => Expr::mul(Expr::Const(Complex64::new(0.0, -1.0)), (*self.expr).clone()),
        }
    }

    /// `a·self + b·other`, expressed as a real part.
    pub fn linear_combination(a: f64, u: &HarmonicComponent, b: f64, v: &HarmonicComponent) -> Self {
        let l = Expr::mul(Expr::real(a), u.as_real_part_expr());
        let r = Expr::mul(Expr::real(b), v.as_real_part_expr());
        Self::re(Expr::add(l, r))
    }

    /// Adds a real constant.
    pub fn shifted(&self, c: f64) -> Self {
        let e = Expr::add(self.as_real_part_expr(), Expr::real(c));
        Self::re(e)
    }

    /// Structural test, sharpened for polynomials: `Re(c zⁿ)` with `n ≥ 1`
    /// vanishes identically only when `c = 0`.
    pub fn is_constant(&self) -> bool {
        self.expr.is_constant() || self.polynomial_degree() == Some(0)
    }

    /// Degree when this is the real/imaginary part of a polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        let coeffs = self.expr.polynomial_coefficients()?;
        // Re(c z^n) and Im(c z^n) vanish identically only when c = 0, except
        // for n = 0 where one of them may be zero; that case is degree 0 anyway.
        Some(coeffs.len() - 1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial_degree().is_some()
    }
}

impl fmt::Display for HarmonicComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sel = match self.part {
            Part::Real => "re",
            Part::Imag => "im",
        };
        write!(f, "{}({})", sel, self.expr)
    }
}

/// An entire harmonic map `f = u + iv`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap {
    pub u: HarmonicComponent,
    pub v: HarmonicComponent,
    pub name: Option<String>,
}

impl HarmonicMap {
    pub fn new(u: HarmonicComponent, v: HarmonicComponent) -> Self {
        Self { u, v, name: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Parses a map literal `u=re(<expr>); v=im(<expr>)`. Either selector may
    /// be used on either side.
    pub fn parse(src: &str) -> Result<Self> {
        let mut u = None;
        let mut v = None;
        for piece in src.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = piece
                .split_once('=')
                .ok_or_else(|| Error::MapLiteral(format!("missing '=' in '{}'", piece)))?;
            let comp = HarmonicComponent::parse(rhs)?;
            match lhs.trim() {
                "u" if u.is_none() => u = Some(comp),
                "v" if v.is_none() => v = Some(comp),
                other => {
                    return Err(Error::MapLiteral(format!("unexpected or repeated component '{}'", other)))
                }
            }
        }
        match (u, v) {
            (Some(u), Some(v)) => Ok(Self::new(u, v)),
            _ => Err(Error::MapLiteral("map literal needs both u and v".into())),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        Complex64::new(self.u.eval(z), self.v.eval(z))
    }

    pub fn is_constant(&self) -> bool {
        self.u.is_constant() && self.v.is_constant()
    }

    /// `e^{iθ} f`.
    pub fn rotated(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let u = HarmonicComponent::linear_combination(c, &self.u, -s, &self.v);
        let v = HarmonicComponent::linear_combination(s, &self.u, c, &self.v);
        let name = self.name.as_ref().map(|n| format!("{}@rot({})", n, theta));
        Self { u, v, name }
    }

    pub fn literal(&self) -> String {
        format!("u={}; v={}", self.u, self.v)
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    literal: String,
}

impl Serialize for HarmonicMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr { name: self.name.clone(), literal: self.literal() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HarmonicMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MapRepr::deserialize(d)?;
        let mut f = HarmonicMap::parse(&repr.literal).map_err(serde::de::Error::custom)?;
        f.name = repr.name;
        Ok(f)
    }
}

impl fmt::Display for HarmonicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

/// Evaluates `u(z) + i v(z)`.
pub fn eval_map(f: &HarmonicMap, z: Complex64) -> Complex64 {
    f.eval(z)
}

/// Parses a constant such as `1+2*i` or `pi*i` (any `z`-free expression).
pub fn parse_complex(src: &str) -> Result<Complex64> {
    let e = parse_expr(src)?;
    if !e.is_constant() {
        return Err(Error::MapLiteral(format!("'{}' is not a constant", src)));
    }
    Ok(e.eval(Complex64::new(0.0, 0.0)))
}

/// Formats a complex number as `a+bi` with `-0` normalized to `0`.
pub fn format_complex(w: Complex64) -> String {
    let re = if w.re == 0.0 { 0.0 } else { w.re };
    let im = if w.im == 0.0 { 0.0 } else { w.im };
    if im < 0.0 {
        format!("{}-{}i", re, -im)
    } else {
        format!("{}+{}i", re, im)
    }
}

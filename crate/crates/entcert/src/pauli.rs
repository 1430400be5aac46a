//! Text expressions over Pauli operators.
//!
//! Grammar, informally: an expression is a sum of terms joined by `+` and
//! `-`; a term is a product of factors written side by side (an optional `*`
//! is allowed); a factor is a real scalar, a parenthesized expression, or a
//! Pauli letter `I`, `X`, `Y`, `Z` with an optional 1-based site suffix
//! (`X3` acts on qubit 3). Letters without a suffix fill sites left to
//! right: within a term, each unindexed letter lands one site after the
//! previous letter, so `XZ` means `X1 Z2` and `Z2X` means `Z2 X3`.
//!
//! Examples: `Z1 Z2`, `0.5*(Z1Z2 + II)`,
//! `3*IIII - 0.5*(Z1Z2 + IIII)(Z2X3X4 + IIII)`.
//!
//! The result must come out Hermitian; products such as `X1Z1` alone have
//! complex off-diagonal structure and are rejected at the end unless the
//! full expression cancels the imaginary parts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, HilbertShape};

const MAX_SITES: usize = 10;

type Mat2 = [Complex64; 4];

const fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single(letter: char) -> Mat2 {
    match letter {
        'I' => [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)],
        'X' => [cx(0.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)],
        'Y' => [cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)],
        'Z' => [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)],
        _ => unreachable!("lexer only emits IXYZ"),
    }
}

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Atom(char, Option<usize>),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    current: Token,
    token_pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lx = Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            current: Token::End,
            token_pos: 0,
        };
        lx.advance()?;
        Ok(lx)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let before = &self.src[..pos.min(self.src.len())];
        let line = 1 + before.matches('\n').count();
        let column = before.chars().rev().take_while(|&ch| ch != '\n').count() + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        self.error_at(self.token_pos, message)
    }

    fn advance(&mut self) -> Result<()> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.token_pos = self.pos;
        if self.pos >= self.bytes.len() {
            self.current = Token::End;
            return Ok(());
        }
        let b = self.bytes[self.pos];
        self.current = match b {
            b'+' => {
                self.pos += 1;
                Token::Plus
            }
            b'-' => {
                self.pos += 1;
                Token::Minus
            }
            b'*' => {
                self.pos += 1;
                Token::Star
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'I' | b'X' | b'Y' | b'Z' => {
                let letter = b as char;
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos > start {
                    let idx: usize = self.src[start..self.pos].parse().map_err(|_| {
                        self.error_at(start, "site index does not fit in a machine integer")
                    })?;
                    Token::Atom(letter, Some(idx))
                } else {
                    Token::Atom(letter, None)
                }
            }
            b'0'..=b'9' | b'.' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                // Exponent suffix: 1e-3, 2.5E4.
                if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
                    let mut probe = self.pos + 1;
                    if probe < self.bytes.len() && matches!(self.bytes[probe], b'+' | b'-') {
                        probe += 1;
                    }
                    if probe < self.bytes.len() && self.bytes[probe].is_ascii_digit() {
                        self.pos = probe;
                        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit()
                        {
                            self.pos += 1;
                        }
                    }
                }
                let text = &self.src[start..self.pos];
                let value: f64 = text
                    .parse()
                    .map_err(|_| self.error_at(start, format!("malformed number '{text}'")))?;
                Token::Num(value)
            }
            _ => {
                let ch = self.src[self.pos..].chars().next().unwrap_or('?');
                return Err(self.error_at(
                    self.pos,
                    format!("unexpected character '{ch}'; expected I, X, Y, Z, a number, or an operator"),
                ));
            }
        };
        Ok(())
    }
}

/// A partially built term: a scalar times independent per-site 2x2 blocks,
/// or an already dense matrix once parentheses force one.
enum Val {
    Blocks {
        coeff: Complex64,
        sites: Vec<Option<Mat2>>,
    },
    Dense(Vec<Complex64>),
}

struct Parser<'a> {
    lx: Lexer<'a>,
    sites: usize,
}

impl<'a> Parser<'a> {
    fn dim(&self) -> usize {
        1 << self.sites
    }

    fn densify(&self, val: Val) -> Vec<Complex64> {
        match val {
            Val::Dense(m) => m,
            Val::Blocks { coeff, sites } => {
                let mut data = vec![coeff];
                let mut dim = 1usize;
                for block in &sites {
                    let b = block.unwrap_or_else(|| single('I'));
                    let new_dim = dim * 2;
                    let mut next = vec![cx(0.0, 0.0); new_dim * new_dim];
                    for i1 in 0..dim {
                        for j1 in 0..dim {
                            let base = data[i1 * dim + j1];
                            for i2 in 0..2 {
                                for j2 in 0..2 {
                                    next[(i1 * 2 + i2) * new_dim + (j1 * 2 + j2)] =
                                        base * b[i2 * 2 + j2];
                                }
                            }
                        }
                    }
                    data = next;
                    dim = new_dim;
                }
                data
            }
        }
    }

    fn expr(&mut self) -> Result<Vec<Complex64>> {
        let d = self.dim();
        let mut acc = vec![cx(0.0, 0.0); d * d];
        let mut first = true;
        loop {
            let sign = match self.lx.current {
                Token::Plus => {
                    self.lx.advance()?;
                    1.0
                }
                Token::Minus => {
                    self.lx.advance()?;
                    -1.0
                }
                _ if first => 1.0,
                _ => break,
            };
            let term = self.term()?;
            let dense = self.densify(term);
            for (a, t) in acc.iter_mut().zip(dense) {
                *a += sign * t;
            }
            first = false;
        }
        if first {
            return Err(self.lx.error_here("empty expression"));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Val> {
        let mut val = Val::Blocks {
            coeff: cx(1.0, 0.0),
            sites: vec![None; self.sites],
        };
        let mut cursor = 0usize;
        let mut have_factor = false;
        loop {
            match self.lx.current.clone() {
                Token::Num(x) => {
                    self.lx.advance()?;
                    val = self.mul_scalar(val, x);
                }
                Token::Atom(letter, explicit) => {
                    let site = match explicit {
                        Some(0) => {
                            return Err(self
                                .lx
                                .error_here("site indices are 1-based; index 0 is invalid"));
                        }
                        Some(k) => k - 1,
                        None => cursor,
                    };
                    if site >= self.sites {
                        return Err(self.lx.error_here(format!(
                            "site index {} out of range for {} sites",
                            site + 1,
                            self.sites
                        )));
                    }
                    self.lx.advance()?;
                    cursor = site + 1;
                    val = self.mul_site(val, site, single(letter));
                }
                Token::LParen => {
                    self.lx.advance()?;
                    let inner = self.expr()?;
                    if self.lx.current != Token::RParen {
                        return Err(self.lx.error_here("expected closing ')'"));
                    }
                    self.lx.advance()?;
                    val = self.mul_dense(val, inner);
                }
                Token::Star => {
                    if !have_factor {
                        return Err(self.lx.error_here("'*' with nothing to multiply"));
                    }
                    self.lx.advance()?;
                    // The next token must start a factor.
                    match self.lx.current {
                        Token::Num(_) | Token::Atom(..) | Token::LParen => continue,
                        _ => return Err(self.lx.error_here("expected a factor after '*'")),
                    }
                }
                _ => break,
            }
            have_factor = true;
        }
        if !have_factor {
            return Err(self.lx.error_here("expected a term"));
        }
        Ok(val)
    }

    fn mul_scalar(&self, val: Val, x: f64) -> Val {
        match val {
            Val::Blocks { coeff, sites } => Val::Blocks {
                coeff: coeff * x,
                sites,
            },
            Val::Dense(m) => Val::Dense(m.into_iter().map(|z| z * x).collect()),
        }
    }

    fn mul_site(&self, val: Val, site: usize, op: Mat2) -> Val {
        match val {
            Val::Blocks { coeff, mut sites } => {
                sites[site] = Some(match sites[site] {
                    Some(existing) => mul2(&existing, &op),
                    None => op,
                });
                Val::Blocks { coeff, sites }
            }
            Val::Dense(m) => {
                let factor = self.densify(Val::Blocks {
                    coeff: cx(1.0, 0.0),
                    sites: {
                        let mut s = vec![None; self.sites];
                        s[site] = Some(op);
                        s
                    },
                });
                Val::Dense(dense_mul(self.dim(), &m, &factor))
            }
        }
    }

    fn mul_dense(&self, val: Val, rhs: Vec<Complex64>) -> Val {
        let lhs = self.densify(val);
        Val::Dense(dense_mul(self.dim(), &lhs, &rhs))
    }
}

fn dense_mul(n: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![cx(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Parses a Pauli expression on the given number of qubit sites.
pub fn parse_pauli(expr: &str, sites: usize) -> Result<HermitianOperator> {
    if sites == 0 || sites > MAX_SITES {
        return Err(Error::Shape(format!(
            "pauli expressions support 1 to {MAX_SITES} sites, got {sites}"
        )));
    }
    let mut parser = Parser {
        lx: Lexer::new(expr)?,
        sites,
    };
    let dense = parser.expr()?;
    if parser.lx.current != Token::End {
        return Err(parser.lx.error_here("unexpected trailing input"));
    }
    HermitianOperator::from_entries(HilbertShape::qubits(sites)?, dense)
}

/// Expands a qubit-lattice operator in the Pauli basis and renders it back
/// as an expression `parse_pauli` accepts. Coefficients print with Rust's
/// shortest round-trip float formatting, so parse(format(op)) reproduces
/// the operator to machine precision.
pub fn format_pauli(op: &HermitianOperator) -> Result<String> {
    let dims = op.shape().dims();
    if dims.iter().any(|&d| d != 2) {
        return Err(Error::Shape(
            "pauli formatting needs an all-qubit tensor layout".into(),
        ));
    }
    let sites = dims.len();
    if sites > MAX_SITES {
        return Err(Error::Shape(format!(
            "pauli formatting supports up to {MAX_SITES} sites"
        )));
    }
    let dim = 1usize << sites;
    let scale = op
        .data()
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);

    let mut out = String::new();
    // Pauli letters per site, counted in base 4: 0=I, 1=X, 2=Y, 3=Z.
    for code in 0..(4usize.pow(sites as u32)) {
        let mut letters = vec![0usize; sites];
        let mut rest = code;
        for site in (0..sites).rev() {
            letters[site] = rest % 4;
            rest /= 4;
        }
        // tr[P op] using the one-nonzero-entry-per-row structure of P.
        let mut tr = cx(0.0, 0.0);
        for row in 0..dim {
            let mut col = 0usize;
            let mut phase = cx(1.0, 0.0);
            for (site, &letter) in letters.iter().enumerate() {
                let bit = (row >> (sites - 1 - site)) & 1;
                let (colbit, ph) = match letter {
                    0 => (bit, cx(1.0, 0.0)),
                    1 => (1 - bit, cx(1.0, 0.0)),
                    // Y[1][0] = i, Y[0][1] = -i
                    2 => (1 - bit, if bit == 1 { cx(0.0, 1.0) } else { cx(0.0, -1.0) }),
                    _ => (bit, if bit == 1 { cx(-1.0, 0.0) } else { cx(1.0, 0.0) }),
                };
                col = (col << 1) | colbit;
                phase *= ph;
            }
            tr += phase * op.entry(col, row);
        }
        let coeff = tr / dim as f64;
        debug_assert!(coeff.im.abs() < 1e-9 * scale);
        let c = coeff.re;
        if c.abs() <= 1e-12 * scale {
            continue;
        }
        let sign = if c < 0.0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0.0 {
                out.push_str("- ");
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mut label = String::new();
        for (site, &letter) in letters.iter().enumerate() {
            if letter == 0 {
                continue;
            }
            label.push(match letter {
                1 => 'X',
                2 => 'Y',
                _ => 'Z',
            });
            label.push_str(&(site + 1).to_string());
        }
        if label.is_empty() {
            out.push_str(&format!("{}", c.abs()));
        } else {
            out.push_str(&format!("{}*{}", c.abs(), label));
        }
    }
    if out.is_empty() {
        out.push('0');
        out.push_str(&"I".repeat(sites.min(1)));
        // "0I" parses to the zero operator on one site; pad the rest.
        if sites > 1 {
            out = format!("0*I1 I{sites}");
        }
    }
    Ok(out)
}

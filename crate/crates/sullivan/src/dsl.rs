//! The `.sm` model description language.
//!
//! A model file declares generators and then differentials:
//!
//! ```text
//! # comments run to the end of the line
//! gen x2:2
//! gen x4:4
//! gen y5:5
//! gen y7:7
//! d y5 = x2^3 - 2 x2 x4
//! d y7 = x4^2 - x2^2 x4
//! ```
//!
//! Polynomials use integer or `p/q` rational coefficients, `^` powers, and
//! juxtaposition or `*` for products. Factors multiply in written order, so
//! odd generators pick up the usual sign rules. Generators without a `d`
//! line have zero differential. The canonical printer emits one `gen` line
//! per generator in validated order and one `d` line per nonzero
//! differential, with monomial factors in declaration order, so
//! parse→print→parse is the identity on the parsed structure.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::gens::Gens;
use crate::model::{ModelError, SullivanModel, ValidationIssue};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::Rat;

/// A parse or validation diagnostic, anchored to a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for DslError {}

/// A parsed model together with the line of each declaration, for
/// diagnostics that surface after parsing.
#[derive(Debug)]
pub struct ModelSource {
    pub text: String,
    pub model: SullivanModel,
    /// Generator name to the line of its `gen` declaration.
    pub gen_lines: BTreeMap<String, usize>,
    /// Generator name to the line of its `d` declaration.
    pub d_lines: BTreeMap<String, usize>,
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<SullivanModel, DslError> {
    parse_source(text).map(|src| src.model)
}

/// Parses and validates a model file, keeping the source span map.
pub fn parse_source(text: &str) -> Result<ModelSource, DslError> {
    let mut gen_decls: Vec<(String, u32, usize, usize)> = Vec::new();
    let mut d_decls: Vec<(String, usize, usize, Vec<Token>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(raw, line_no)?;
        let Some(head) = tokens.first() else { continue };
        match &head.kind {
            TokenKind::Ident(word) if word == "gen" => {
                let (name, name_col, degree) = parse_gen_line(&tokens, line_no)?;
                if gen_decls.iter().any(|(n, _, _, _)| *n == name) {
                    return Err(DslError {
                        line: line_no,
                        col: name_col,
                        message: format!("generator `{name}` is declared twice"),
                    });
                }
                gen_decls.push((name, degree, line_no, name_col));
            }
            TokenKind::Ident(word) if word == "d" => {
                let (name, name_col, rhs) = parse_d_line(&tokens, line_no)?;
                if d_decls.iter().any(|(n, _, _, _)| *n == name) {
                    return Err(DslError {
                        line: line_no,
                        col: name_col,
                        message: format!("differential of `{name}` is declared twice"),
                    });
                }
                d_decls.push((name, line_no, name_col, rhs));
            }
            other => {
                return Err(DslError {
                    line: line_no,
                    col: head.col,
                    message: format!(
                        "expected `gen` or `d` at the start of the line, found {}",
                        other.describe()
                    ),
                });
            }
        }
    }

    let gens = Gens::new(
        gen_decls.iter().map(|(n, deg, _, _)| (n.clone(), *deg)).collect(),
    )
    .map_err(|e| {
        let spot = gen_decls
            .iter()
            .find(|(n, _, _, _)| e.to_string().contains(n.as_str()))
            .map_or((1, 1), |(_, _, line, col)| (*line, *col));
        DslError { line: spot.0, col: spot.1, message: e.to_string() }
    })?;

    let mut images = vec![Poly::zero(); gens.v_count()];
    let mut d_lines = BTreeMap::new();
    for (name, line_no, name_col, rhs) in d_decls {
        let Some(index) = gens.v_by_name(&name) else {
            return Err(DslError {
                line: line_no,
                col: name_col,
                message: format!("unknown generator `{name}` in a `d` declaration"),
            });
        };
        images[index] = parse_poly(&rhs, line_no, &gens)?;
        d_lines.insert(name, line_no);
    }

    let gen_lines: BTreeMap<String, usize> =
        gen_decls.into_iter().map(|(n, _, line, _)| (n, line)).collect();
    let model = SullivanModel::new(gens, crate::model::Differential::new(images))
        .map_err(|e| validation_error(&e, &gen_lines, &d_lines))?;
    Ok(ModelSource { text: text.to_string(), model, gen_lines, d_lines })
}

/// Renders a model back into the language, in validated generator order.
#[must_use]
pub fn print_model(model: &SullivanModel) -> String {
    let gens = model.gens();
    let mut out = String::new();
    for i in 0..gens.v_count() {
        out.push_str(&format!("gen {}:{}\n", gens.v_name(i), gens.degree(gens.id_of_v(i))));
    }
    for i in 0..gens.v_count() {
        let image = model.diff().image(i);
        if !image.is_zero() {
            out.push_str(&format!("d {} = {}\n", gens.v_name(i), image.display(gens)));
        }
    }
    out
}

fn validation_error(
    err: &ModelError,
    gen_lines: &BTreeMap<String, usize>,
    d_lines: &BTreeMap<String, usize>,
) -> DslError {
    let ModelError::Validation(issues) = err;
    let spot = issues
        .first()
        .map(issue_name)
        .and_then(|name| d_lines.get(name).or_else(|| gen_lines.get(name)))
        .copied()
        .unwrap_or(1);
    DslError { line: spot, col: 1, message: err.to_string() }
}

fn issue_name(issue: &ValidationIssue) -> &str {
    match issue {
        ValidationIssue::ParametricImage { name }
        | ValidationIssue::SuspensionInImage { name }
        | ValidationIssue::WrongDegree { name, .. }
        | ValidationIssue::NotDecomposable { name, .. }
        | ValidationIssue::NoValidOrder { name }
        | ValidationIssue::DSquareNonzero { name, .. } => name,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    Number(BigInt),
    Caret,
    Star,
    Plus,
    Minus,
    Colon,
    Equals,
    Slash,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Number(n) => format!("`{n}`"),
            TokenKind::Caret => "`^`".to_string(),
            TokenKind::Star => "`*`".to_string(),
            TokenKind::Plus => "`+`".to_string(),
            TokenKind::Minus => "`-`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Equals => "`=`".to_string(),
            TokenKind::Slash => "`/`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    col: usize,
    len: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, DslError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            tokens.push(Token { kind: TokenKind::Ident(word), col, len: i - start });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().expect("digit runs parse as integers");
            tokens.push(Token { kind: TokenKind::Number(n), col, len: i - start });
        } else {
            let kind = match c {
                '^' => TokenKind::Caret,
                '*' => TokenKind::Star,
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                ':' => TokenKind::Colon,
                '=' => TokenKind::Equals,
                '/' => TokenKind::Slash,
                other => {
                    return Err(DslError {
                        line: line_no,
                        col,
                        message: format!("unexpected character `{other}`"),
                    });
                }
            };
            tokens.push(Token { kind, col, len: 1 });
            i += 1;
        }
    }
    Ok(tokens)
}

fn parse_gen_line(tokens: &[Token], line_no: usize) -> Result<(String, usize, u32), DslError> {
    let fail = |col: usize, message: String| Err(DslError { line: line_no, col, message });
    let name = match tokens.get(1) {
        Some(Token { kind: TokenKind::Ident(name), .. }) => name.clone(),
        other => {
            return fail(
                token_col(other, tokens),
                "expected a generator name after `gen`".to_string(),
            );
        }
    };
    let name_col = tokens[1].col;
    if !matches!(tokens.get(2), Some(Token { kind: TokenKind::Colon, .. })) {
        return fail(token_col(tokens.get(2), tokens), "expected `:` after the name".to_string());
    }
    let degree = match tokens.get(3) {
        Some(Token { kind: TokenKind::Number(n), col, .. }) => {
            u32::try_from(n).map_err(|_| DslError {
                line: line_no,
                col: *col,
                message: format!("degree {n} is out of range"),
            })?
        }
        other => {
            return fail(token_col(other, tokens), "expected a degree after `:`".to_string());
        }
    };
    if let Some(extra) = tokens.get(4) {
        return fail(extra.col, format!("unexpected {} after the degree", extra.kind.describe()));
    }
    Ok((name, name_col, degree))
}

fn parse_d_line(
    tokens: &[Token],
    line_no: usize,
) -> Result<(String, usize, Vec<Token>), DslError> {
    let fail = |col: usize, message: String| Err(DslError { line: line_no, col, message });
    let name = match tokens.get(1) {
        Some(Token { kind: TokenKind::Ident(name), .. }) => name.clone(),
        other => {
            return fail(
                token_col(other, tokens),
                "expected a generator name after `d`".to_string(),
            );
        }
    };
    let name_col = tokens[1].col;
    if !matches!(tokens.get(2), Some(Token { kind: TokenKind::Equals, .. })) {
        return fail(token_col(tokens.get(2), tokens), "expected `=` after the name".to_string());
    }
    if tokens.len() == 3 {
        return fail(end_col(tokens), "expected a polynomial after `=`".to_string());
    }
    Ok((name, name_col, tokens[3..].to_vec()))
}

fn token_col(token: Option<&Token>, all: &[Token]) -> usize {
    token.map_or_else(|| end_col(all), |t| t.col)
}

fn end_col(tokens: &[Token]) -> usize {
    tokens.last().map_or(1, |t| t.col + t.len)
}

/// Parses `term (('+'|'-') term)*`, where a term is an optional rational
/// coefficient followed by powered generator factors, multiplied in written
/// order.
fn parse_poly(tokens: &[Token], line_no: usize, gens: &Gens) -> Result<Poly, DslError> {
    let mut pos = 0;
    let mut total = Poly::zero();
    let mut negate = false;
    if let Some(Token { kind: TokenKind::Minus, .. }) = tokens.first() {
        negate = true;
        pos = 1;
    } else if let Some(Token { kind: TokenKind::Plus, .. }) = tokens.first() {
        pos = 1;
    }
    loop {
        let term = parse_term(tokens, &mut pos, line_no, gens)?;
        total = if negate { total.sub(&term) } else { total.add(&term) };
        match tokens.get(pos) {
            None => return Ok(total),
            Some(Token { kind: TokenKind::Plus, .. }) => negate = false,
            Some(Token { kind: TokenKind::Minus, .. }) => negate = true,
            Some(other) => {
                return Err(DslError {
                    line: line_no,
                    col: other.col,
                    message: format!("expected `+`, `-`, or end of line, found {}", other.kind.describe()),
                });
            }
        }
        pos += 1;
    }
}

fn parse_term(
    tokens: &[Token],
    pos: &mut usize,
    line_no: usize,
    gens: &Gens,
) -> Result<Poly, DslError> {
    let mut poly = Poly::one();
    let mut seen_factor = false;

    if let Some(Token { kind: TokenKind::Number(n), .. }) = tokens.get(*pos) {
        let numer = n.clone();
        *pos += 1;
        let mut denom = BigInt::from(1);
        if matches!(tokens.get(*pos), Some(Token { kind: TokenKind::Slash, .. })) {
            *pos += 1;
            match tokens.get(*pos) {
                Some(Token { kind: TokenKind::Number(d), col, .. }) => {
                    if d == &BigInt::from(0) {
                        return Err(DslError {
                            line: line_no,
                            col: *col,
                            message: "zero denominator in a coefficient".to_string(),
                        });
                    }
                    denom = d.clone();
                    *pos += 1;
                }
                other => {
                    return Err(DslError {
                        line: line_no,
                        col: token_col(other, tokens),
                        message: "expected a denominator after `/`".to_string(),
                    });
                }
            }
        }
        poly = poly.scale(&Rat::new(numer, denom));
        seen_factor = true;
        if matches!(tokens.get(*pos), Some(Token { kind: TokenKind::Star, .. })) {
            *pos += 1;
        }
    }

    while let Some(Token { kind: TokenKind::Ident(name), col, .. }) = tokens.get(*pos) {
        let Some(index) = gens.v_by_name(name) else {
            return Err(DslError {
                line: line_no,
                col: *col,
                message: format!("unknown generator `{name}`"),
            });
        };
        *pos += 1;
        let mut exponent = 1u32;
        if matches!(tokens.get(*pos), Some(Token { kind: TokenKind::Caret, .. })) {
            *pos += 1;
            match tokens.get(*pos) {
                Some(Token { kind: TokenKind::Number(e), col, .. }) => {
                    exponent = u32::try_from(e).map_err(|_| DslError {
                        line: line_no,
                        col: *col,
                        message: format!("exponent {e} is out of range"),
                    })?;
                    *pos += 1;
                }
                other => {
                    return Err(DslError {
                        line: line_no,
                        col: token_col(other, tokens),
                        message: "expected an exponent after `^`".to_string(),
                    });
                }
            }
        }
        let factor = Poly::monomial(Monomial::from_sorted(vec![(gens.id_of_v(index), 1)]));
        for _ in 0..exponent {
            poly = poly.mul(&factor, gens);
        }
        seen_factor = true;
        if matches!(tokens.get(*pos), Some(Token { kind: TokenKind::Star, .. })) {
            *pos += 1;
        }
    }

    if seen_factor {
        Ok(poly)
    } else {
        Err(DslError {
            line: line_no,
            col: token_col(tokens.get(*pos), tokens),
            message: "expected a coefficient or a generator".to_string(),
        })
    }
}

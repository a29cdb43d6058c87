//! Text input: polynomial systems and raw supports.
//!
//! ```text
//! keep x0 x1
//! eliminate t
//! f0 = x0 - (t^2 + 1)   # comment
//! f1 = x1 - t^-1*3
//! ```
//!
//! Raw supports skip polynomial syntax:
//!
//! ```text
//! dim 2 split 1
//! polytope 0: (0,0) (2,0) (0,2)
//! polytope 1: (0,0) (3,0) (0,3)
//! ```

use num_bigint::BigInt;

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial `{0}` is zero")]
    EmptyPolynomial(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Self { line, col, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

/// A named polynomial as written in the input.
#[derive(Clone, Debug)]
pub struct Named {
    pub name: String,
    pub poly: Poly,
}

/// Polynomials over `keep_vars` followed by `elim_vars`.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub keep_vars: Vec<String>,
    pub elim_vars: Vec<String>,
    pub polynomials: Vec<Named>,
}

impl PolySystem {
    pub fn supports(&self) -> Vec<Vec<Vec<i64>>> {
        self.polynomials.iter().map(|p| p.poly.support()).collect()
    }
}

/// Raw supports with a projection split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSupports {
    pub dim: usize,
    pub split: usize,
    pub sets: Vec<Vec<Vec<i64>>>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Lines with comments removed, numbered from 1, blank ones skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn col_of(line: &str, sub: &str) -> usize {
    let off = sub.as_ptr() as usize - line.as_ptr() as usize;
    line[..off].chars().count() + 1
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char)
}

/// Recursive descent over one expression.
///
/// ```text
/// expr   := ["+"|"-"] term (("+"|"-") term)*
/// term   := factor ("*" factor)*
/// factor := atom ["^" ["-"] int | "^" "(" ["-"] int ")"]
/// atom   := int | ident | "(" expr ")"
/// ```
pub struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
    vars: &'a [String],
}

impl<'a> ExprParser<'a> {
    /// `col0` is the column of the first character of `src` in its line.
    pub fn new(src: &str, line: usize, col0: usize, vars: &'a [String]) -> Self {
        Self { chars: src.chars().collect(), pos: 0, line, col0, vars }
    }

    pub fn parse(mut self) -> Result<Poly, ParseError> {
        let p = self.expr()?;
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.err(format!("unexpected `{c}`")));
        }
        Ok(p)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line, self.col0 + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let n = self.vars.len();
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.err("expected an integer exponent"));
        }
        let mut k: i64 = digits.parse().map_err(|_| self.err("exponent out of range"))?;
        if neg {
            k = -k;
        }
        if paren && !self.eat(')') {
            return Err(self.err("expected `)`"));
        }
        base.pow(k).ok_or_else(|| {
            ParseError::syntax(self.line, self.col0 + at, "negative power of a non-monomial")
        })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        self.skip_ws();
        let n = self.vars.len();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                Ok(Poly::constant(n, d.parse::<BigInt>().expect("digits")))
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.peek().is_some_and(is_ident_char) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(n, i)),
                    None => Err(ParseError {
                        line: self.line,
                        col: self.col0 + start,
                        kind: ParseErrorKind::UnknownVariable(name),
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Splits `name = expr`, returning the trimmed name and the expression with
/// its starting column.
pub fn split_assignment(line_no: usize, line: &str) -> Result<(String, &str, usize), ParseError> {
    let Some(eq) = line.find('=') else {
        return Err(ParseError::syntax(line_no, 1, "expected `name = polynomial`"));
    };
    let name = line[..eq].trim();
    if !valid_name(name) {
        let col = if name.is_empty() { col_of(line, &line[eq..]) } else { col_of(line, name) };
        return Err(ParseError::syntax(line_no, col, format!("invalid name `{name}`")));
    }
    let rhs = &line[eq + 1..];
    Ok((name.to_string(), rhs, col_of(line, rhs)))
}

fn names(line_no: usize, line: &str, rest: &str, seen: &[String]) -> Result<Vec<String>, ParseError> {
    let mut out: Vec<String> = Vec::new();
    for tok in rest.split_whitespace() {
        if !valid_name(tok) {
            return Err(ParseError::syntax(line_no, col_of(line, tok), format!("invalid variable name `{tok}`")));
        }
        if out.iter().chain(seen).any(|v| v == tok) {
            return Err(ParseError::syntax(line_no, col_of(line, tok), format!("duplicate variable `{tok}`")));
        }
        out.push(tok.to_string());
    }
    Ok(out)
}

pub fn parse_system(text: &str) -> Result<PolySystem, ParseError> {
    let mut keep: Option<Vec<String>> = None;
    let mut elim: Option<Vec<String>> = None;
    let mut polys = Vec::new();
    let mut last_line = 1;
    for (no, line) in content_lines(text) {
        last_line = no;
        let trimmed = line.trim_start();
        let word = trimmed.split_whitespace().next().unwrap_or("");
        let rest = &trimmed[word.len()..];
        match word {
            "keep" | "eliminate" if !line.contains('=') => {
                if !polys.is_empty() {
                    return Err(ParseError::syntax(no, col_of(line, trimmed), "variable declarations must precede polynomials"));
                }
                let slot = if word == "keep" { &mut keep } else { &mut elim };
                if slot.is_some() {
                    return Err(ParseError::syntax(no, col_of(line, trimmed), format!("repeated `{word}` line")));
                }
                let other: Vec<String> = keep.iter().chain(elim.iter()).flatten().cloned().collect();
                let vs = names(no, line, rest, &other)?;
                if word == "keep" {
                    keep = Some(vs);
                } else {
                    elim = Some(vs);
                }
            }
            _ => {
                let (Some(k), Some(e)) = (&keep, &elim) else {
                    return Err(ParseError::syntax(no, 1, "expected `keep` and `eliminate` lines first"));
                };
                let vars: Vec<String> = k.iter().chain(e).cloned().collect();
                let (name, rhs, col) = split_assignment(no, line)?;
                let poly = ExprParser::new(rhs, no, col, &vars).parse()?;
                if poly.is_zero() {
                    return Err(ParseError { line: no, col, kind: ParseErrorKind::EmptyPolynomial(name) });
                }
                polys.push(Named { name, poly });
            }
        }
    }
    let (Some(keep_vars), Some(elim_vars)) = (keep, elim) else {
        return Err(ParseError::syntax(last_line, 1, "missing `keep` or `eliminate` line"));
    };
    Ok(PolySystem { keep_vars, elim_vars, polynomials: polys })
}

fn parse_int(no: usize, line: &str, tok: &str) -> Result<i64, ParseError> {
    tok.trim()
        .parse()
        .map_err(|_| ParseError::syntax(no, col_of(line, tok), format!("expected an integer, found `{}`", tok.trim())))
}

/// Parses `(c1,...,cn)` groups, checking the arity.
fn parse_points(no: usize, line: &str, mut rest: &str, dim: usize) -> Result<Vec<Vec<i64>>, ParseError> {
    let mut out = Vec::new();
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            return Ok(out);
        }
        if !rest.starts_with('(') {
            return Err(ParseError::syntax(no, col_of(line, rest), "expected `(`"));
        }
        let Some(close) = rest.find(')') else {
            return Err(ParseError::syntax(no, col_of(line, rest), "unclosed `(`"));
        };
        let inner = &rest[1..close];
        let coords = inner.split(',').map(|t| parse_int(no, line, t)).collect::<Result<Vec<_>, _>>()?;
        if coords.len() != dim {
            return Err(ParseError::syntax(
                no,
                col_of(line, rest),
                format!("point has {} coordinates, expected {dim}", coords.len()),
            ));
        }
        out.push(coords);
        rest = &rest[close + 1..];
    }
}

pub fn parse_raw(text: &str) -> Result<RawSupports, ParseError> {
    let mut lines = content_lines(text);
    let Some((no, head)) = lines.next() else {
        return Err(ParseError::syntax(1, 1, "empty input"));
    };
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "dim" || toks[2] != "split" {
        return Err(ParseError::syntax(no, 1, "expected `dim <n> split <k>`"));
    }
    let dim = parse_int(no, head, toks[1])?;
    let split = parse_int(no, head, toks[3])?;
    if dim < 1 || split < 1 || split >= dim {
        return Err(ParseError::syntax(no, col_of(head, toks[3]), "need 0 < split < dim"));
    }
    let (dim, split) = (dim as usize, split as usize);
    let mut sets = Vec::new();
    for (no, line) in lines {
        let t = line.trim_start();
        let Some(rest) = t.strip_prefix("polytope") else {
            return Err(ParseError::syntax(no, col_of(line, t), "expected `polytope <i>:`"));
        };
        let Some(colon) = rest.find(':') else {
            return Err(ParseError::syntax(no, col_of(line, rest), "expected `:`"));
        };
        let idx = parse_int(no, line, &rest[..colon])?;
        if idx != sets.len() as i64 {
            return Err(ParseError::syntax(no, col_of(line, rest), format!("expected polytope {}", sets.len())));
        }
        let pts = parse_points(no, line, &rest[colon + 1..], dim)?;
        if pts.is_empty() {
            return Err(ParseError {
                line: no,
                col: col_of(line, t),
                kind: ParseErrorKind::EmptyPolynomial(format!("polytope {idx}")),
            });
        }
        sets.push(pts);
    }
    Ok(RawSupports { dim, split, sets })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intro_system() {
        let text = "keep x0 x1 x2 x3\neliminate y1 y2 y3\n\
            f0 = x0 - (y1*y2 + y3 + 1)\n\
            f1 = x1 - (y1*y3 + y2 + 1)\n\
            f2 = x2 - (y1*y3 + y1 + 1)\n\
            f3 = x3 - (y1^3 + y2^5 + y3^7)\n";
        let s = parse_system(text).unwrap();
        let sup = s.supports();
        assert_eq!(sup.len(), 4);
        assert!(sup.iter().flatten().all(|e| e.len() == 7));
        assert_eq!(
            sup[0],
            vec![vec![0, 0, 0, 0, 0, 0, 0], vec![0, 0, 0, 0, 0, 0, 1], vec![0, 0, 0, 0, 1, 1, 0], vec![1, 0, 0, 0, 0, 0, 0]]
        );
    }

    #[test]
    fn small_cases() {
        let s = parse_system("keep x\neliminate\nf = 1").unwrap();
        assert_eq!(s.supports(), vec![vec![vec![0]]]);
        let s = parse_system("keep x\neliminate y\nf = x^-2*y + 3  # laurent").unwrap();
        assert_eq!(s.supports(), vec![vec![vec![-2, 1], vec![0, 0]]]);
        let s = parse_system("keep x\neliminate y\nf = -x^(-1) - -y").unwrap_err();
        assert_eq!((s.line, s.col), (3, 15));
    }

    #[test]
    fn errors() {
        let e = parse_system("keep x\neliminate y\n\nf = x + z").unwrap_err();
        assert_eq!(e, ParseError { line: 4, col: 9, kind: ParseErrorKind::UnknownVariable("z".into()) });
        let e = parse_system("keep x\neliminate y\nf = x*y - y*x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyPolynomial("f".into()));
        let e = parse_system("keep x\neliminate y\nf = (x + 1").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.col), (3, 11));
        let e = parse_system("keep x\neliminate y\nf = (x + 1)^-1").unwrap_err();
        assert_eq!((e.line, e.col), (3, 14));
        assert!(parse_system("f = 1").is_err());
        assert!(parse_system("keep x\neliminate x\n").is_err());
    }

    #[test]
    fn raw_triangles() {
        let r = parse_raw("dim 2 split 1\npolytope 0: (0,0) (2,0) (0,2)\npolytope 1: (0,0) (3,0) (0, 3)\n").unwrap();
        assert_eq!(r.dim, 2);
        assert_eq!(r.split, 1);
        assert_eq!(r.sets[1], vec![vec![0, 0], vec![3, 0], vec![0, 3]]);
        let e = parse_raw("dim 2 split 1\npolytope 0: (0,0) (2,0,1)\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 19));
        assert!(parse_raw("dim 2 split 2\n").is_err());
        assert!(parse_raw("dim 2 split 1\npolytope 1: (0,0)\n").is_err());
    }
}

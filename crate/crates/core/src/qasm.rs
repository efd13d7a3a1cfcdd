//! Reader and writer for the small QASM dialect of the benchmark listings.
//!
//! Accepted programs have optional `OPENQASM 2.0;` and `include` headers,
//! exactly one `qreg` and one `creg`, then gate statements drawn from
//! `x y z h s sdg t tdg u1(expr) cx barrier measure`. Angle expressions
//! may use decimal literals, `pi`, `+ - * /`, parentheses and unary minus.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate};

/// 1-based line and column of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownGate,
    UndeclaredRegister,
    IndexOutOfRange,
    BadAngleExpr,
    Syntax,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind:?}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        let mut message = message.into();
        if message.is_empty() {
            message = format!("{kind:?}");
        }
        ParseError {
            span,
            kind,
            message,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str,
    Arrow,
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = SourceSpan { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            Tok::Number(chars[start..i].iter().collect())
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::new(span, ParseErrorKind::Syntax, "unterminated string"));
            }
            i += 1;
            Tok::Str
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            Tok::Arrow
        } else if "()[];,+-*/{}".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError::new(
                span,
                ParseErrorKind::Syntax,
                format!("unexpected character {c:?}"),
            ));
        };
        col += i - start;
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan { line, column: col },
    });
    Ok(out)
}

struct Register {
    name: String,
    size: usize,
}

enum Operand {
    Bit(usize),
    Whole,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qreg: Option<Register>,
    creg: Option<Register>,
    circuit: Option<Circuit>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, span: SourceSpan, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(span, ParseErrorKind::Syntax, msg))
    }

    fn expect_sym(&mut self, c: char) -> PResult<SourceSpan> {
        let t = self.next();
        match t.tok {
            Tok::Sym(s) if s == c => Ok(t.span),
            other => self.syntax(t.span, format!("expected `{c}`, found {}", describe(&other))),
        }
    }

    fn expect_ident(&mut self) -> PResult<(String, SourceSpan)> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.span)),
            other => self.syntax(t.span, format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn expect_uint(&mut self) -> PResult<(usize, SourceSpan)> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) if s.chars().all(|c| c.is_ascii_digit()) => match s.parse::<usize>() {
                Ok(v) => Ok((v, t.span)),
                Err(_) => Err(ParseError::new(
                    t.span,
                    ParseErrorKind::IndexOutOfRange,
                    format!("integer {s} is too large"),
                )),
            },
            other => self.syntax(t.span, format!("expected integer, found {}", describe(other))),
        }
    }

    fn parse_program(mut self) -> PResult<Circuit> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::Ident(word) => match word.as_str() {
                    "OPENQASM" => {
                        self.next();
                        let v = self.next();
                        if !matches!(v.tok, Tok::Number(_)) {
                            return self.syntax(v.span, "expected version number");
                        }
                        self.expect_sym(';')?;
                    }
                    "include" => {
                        self.next();
                        let s = self.next();
                        if s.tok != Tok::Str {
                            return self.syntax(s.span, "expected quoted file name");
                        }
                        self.expect_sym(';')?;
                    }
                    "qreg" | "creg" => self.parse_decl()?,
                    _ => self.parse_statement()?,
                },
                other => return self.syntax(t.span, format!("unexpected {}", describe(other))),
            }
        }
        match self.circuit {
            Some(c) => Ok(c),
            None => {
                let span = self.peek().span;
                let missing = if self.qreg.is_none() { "qreg" } else { "creg" };
                self.syntax(span, format!("missing {missing} declaration"))
            }
        }
    }

    fn parse_decl(&mut self) -> PResult<()> {
        let (kw, kw_span) = self.expect_ident()?;
        let (name, _) = self.expect_ident()?;
        self.expect_sym('[')?;
        let (size, _) = self.expect_uint()?;
        self.expect_sym(']')?;
        self.expect_sym(';')?;
        let slot = if kw == "qreg" { &mut self.qreg } else { &mut self.creg };
        if slot.is_some() {
            return Err(ParseError::new(
                kw_span,
                ParseErrorKind::Syntax,
                format!("only one {kw} declaration is supported"),
            ));
        }
        *slot = Some(Register { name, size });
        if let (Some(q), Some(c)) = (&self.qreg, &self.creg) {
            if q.name == c.name {
                return self.syntax(kw_span, "quantum and classical registers share a name");
            }
            self.circuit = Some(Circuit::new(q.size, c.size));
        }
        Ok(())
    }

    fn operand(&mut self, quantum: bool) -> PResult<(Operand, SourceSpan)> {
        let (name, span) = self.expect_ident()?;
        let reg = if quantum { &self.qreg } else { &self.creg };
        let size = match reg {
            Some(r) if r.name == name => r.size,
            _ => {
                return Err(ParseError::new(
                    span,
                    ParseErrorKind::UndeclaredRegister,
                    format!("`{name}` is not a declared {} register", if quantum { "quantum" } else { "classical" }),
                ))
            }
        };
        if !matches!(self.peek().tok, Tok::Sym('[')) {
            return Ok((Operand::Whole, span));
        }
        self.next();
        let (idx, idx_span) = self.expect_uint()?;
        self.expect_sym(']')?;
        if idx >= size {
            return Err(ParseError::new(
                idx_span,
                ParseErrorKind::IndexOutOfRange,
                format!("{name}[{idx}] exceeds register size {size}"),
            ));
        }
        Ok((Operand::Bit(idx), span))
    }

    fn operand_list(&mut self) -> PResult<Vec<(Operand, SourceSpan)>> {
        let mut out = vec![self.operand(true)?];
        while matches!(self.peek().tok, Tok::Sym(',')) {
            self.next();
            out.push(self.operand(true)?);
        }
        Ok(out)
    }

    fn push(&mut self, gate: Gate, span: SourceSpan) -> PResult<()> {
        let circuit = self.circuit.as_mut().expect("checked by caller");
        circuit.append(gate).map(|_| ()).map_err(|e| {
            let kind = match e {
                CircuitError::QubitOutOfRange { .. } | CircuitError::ClbitOutOfRange { .. } => {
                    ParseErrorKind::IndexOutOfRange
                }
                CircuitError::NonFiniteAngle(_) => ParseErrorKind::BadAngleExpr,
                _ => ParseErrorKind::Syntax,
            };
            ParseError::new(span, kind, e.to_string())
        })
    }

    fn parse_statement(&mut self) -> PResult<()> {
        let (name, span) = self.expect_ident()?;
        let single: Option<fn(usize) -> Gate> = match name.as_str() {
            "x" => Some(Gate::X),
            "y" => Some(Gate::Y),
            "z" => Some(Gate::Z),
            "h" => Some(Gate::H),
            "s" => Some(Gate::S),
            "sdg" => Some(Gate::Sdg),
            "t" => Some(Gate::T),
            "tdg" => Some(Gate::Tdg),
            _ => None,
        };
        let known = single.is_some() || matches!(name.as_str(), "u1" | "cx" | "barrier" | "measure");
        if !known {
            return Err(ParseError::new(
                span,
                ParseErrorKind::UnknownGate,
                format!("unknown gate `{name}`"),
            ));
        }
        if self.circuit.is_none() {
            return Err(ParseError::new(
                span,
                ParseErrorKind::UndeclaredRegister,
                "gate statement before both registers are declared",
            ));
        }
        let nq = self.qreg.as_ref().map_or(0, |r| r.size);
        let lambda = if name == "u1" {
            let open = self.expect_sym('(')?;
            let value = self.angle(open)?;
            self.expect_sym(')')?;
            Some(value)
        } else {
            None
        };

        match name.as_str() {
            "measure" => {
                let (q, _) = self.operand(true)?;
                let t = self.next();
                if t.tok != Tok::Arrow {
                    return self.syntax(t.span, format!("expected `->`, found {}", describe(&t.tok)));
                }
                let (c, cspan) = self.operand(false)?;
                self.expect_sym(';')?;
                match (q, c) {
                    (Operand::Bit(q), Operand::Bit(c)) => self.push(Gate::measure(q, c), span),
                    (Operand::Whole, Operand::Whole) => {
                        let nc = self.creg.as_ref().map_or(0, |r| r.size);
                        if nc != nq {
                            return self.syntax(cspan, "register sizes differ in whole-register measure");
                        }
                        (0..nq).try_for_each(|i| self.push(Gate::measure(i, i), span))
                    }
                    _ => self.syntax(cspan, "cannot mix a register and a single bit in measure"),
                }
            }
            "barrier" => {
                let ops = self.operand_list()?;
                self.expect_sym(';')?;
                let mut qs = Vec::new();
                for (op, _) in ops {
                    match op {
                        Operand::Bit(q) => qs.push(q),
                        Operand::Whole => qs.extend(0..nq),
                    }
                }
                self.push(Gate::Barrier(qs), span)
            }
            "cx" => {
                let ops = self.operand_list()?;
                self.expect_sym(';')?;
                match ops.as_slice() {
                    [(Operand::Bit(c), _), (Operand::Bit(t), _)] => self.push(Gate::cx(*c, *t), span),
                    [_, _] => self.syntax(span, "cx takes single-qubit operands"),
                    _ => self.syntax(span, format!("cx takes 2 operands, got {}", ops.len())),
                }
            }
            _ => {
                let ops = self.operand_list()?;
                self.expect_sym(';')?;
                if ops.len() != 1 {
                    return self.syntax(span, format!("{name} takes 1 operand, got {}", ops.len()));
                }
                let make = |q: usize| match lambda {
                    Some(l) => Gate::u1(q, l),
                    None => single.expect("single-qubit gate")(q),
                };
                match ops[0].0 {
                    Operand::Bit(q) => self.push(make(q), span),
                    Operand::Whole => (0..nq).try_for_each(|q| self.push(make(q), span)),
                }
            }
        }
    }

    fn angle(&mut self, open: SourceSpan) -> PResult<f64> {
        let start = self.pos;
        let mut depth = 0usize;
        while !matches!(self.peek().tok, Tok::Eof) {
            match self.peek().tok {
                Tok::Sym('(') => depth += 1,
                Tok::Sym(')') if depth == 0 => break,
                Tok::Sym(')') => depth -= 1,
                Tok::Sym(';') => break,
                _ => {}
            }
            self.next();
        }
        let toks: Vec<Tok> = self.toks[start..self.pos].iter().map(|t| t.tok.clone()).collect();
        let span = self.toks.get(start).map_or(open, |t| t.span);
        let bad = |m: &str| ParseError::new(span, ParseErrorKind::BadAngleExpr, m.to_string());
        let mut ev = ExprEval { toks: &toks, pos: 0 };
        let v = ev.expr().ok_or_else(|| bad("malformed angle expression"))?;
        if ev.pos != toks.len() {
            return Err(bad("trailing tokens in angle expression"));
        }
        if !v.is_finite() {
            return Err(bad("angle is not finite"));
        }
        Ok(v)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("number {s}"),
        Tok::Str => "string".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Recursive-descent evaluator over lexed angle tokens.
struct ExprEval<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl ExprEval<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expr(&mut self) -> Option<f64> {
        let mut v = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.term()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Some(v)
    }

    fn term(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        while let Some(Tok::Sym(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.unary()?;
            v = if c == '*' { v * r } else { v / r };
        }
        Some(v)
    }

    fn unary(&mut self) -> Option<f64> {
        match self.peek()? {
            Tok::Sym('-') => {
                self.pos += 1;
                Some(-self.unary()?)
            }
            Tok::Sym('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Option<f64> {
        let t = self.peek()?.clone();
        self.pos += 1;
        match t {
            Tok::Number(s) => s.parse::<f64>().ok(),
            Tok::Ident(s) if s == "pi" => Some(PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                match self.peek()? {
                    Tok::Sym(')') => {
                        self.pos += 1;
                        Some(v)
                    }
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

/// Evaluates a standalone angle expression such as `-3*pi/8`.
pub fn eval_angle(text: &str) -> Option<f64> {
    let toks: Vec<Tok> = lex(text).ok()?.into_iter().map(|t| t.tok).filter(|t| *t != Tok::Eof).collect();
    let mut ev = ExprEval { toks: &toks, pos: 0 };
    let v = ev.expr()?;
    (ev.pos == toks.len() && v.is_finite()).then_some(v)
}

/// Parses a program into a circuit, stopping at the first error.
pub fn parse(source: &str) -> Result<Circuit, ParseError> {
    let toks = lex(source)?;
    Parser {
        toks,
        pos: 0,
        qreg: None,
        creg: None,
        circuit: None,
    }
    .parse_program()
}

/// Shortest text for `lambda` that evaluates back to the identical `f64`:
/// a `k*pi/n` form with `n <= 16` when one exists, else a decimal.
pub fn format_angle(lambda: f64) -> String {
    if lambda == 0.0 {
        return if lambda.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let mut best: Option<String> = None;
    for n in 1..=16i64 {
        let k = (lambda * n as f64 / PI).round();
        if k == 0.0 || k.abs() > 1e6 {
            continue;
        }
        let k = k as i64;
        let text = pi_form(k, n);
        if eval_angle(&text) == Some(lambda) && best.as_ref().is_none_or(|b| text.len() < b.len()) {
            best = Some(text);
        }
    }
    let decimal = format!("{lambda}");
    match best {
        Some(b) if b.len() <= decimal.len() || eval_angle(&decimal) != Some(lambda) => b,
        _ => decimal,
    }
}

fn pi_form(k: i64, n: i64) -> String {
    let sign = if k < 0 { "-" } else { "" };
    let ka = k.abs();
    match (ka, n) {
        (1, 1) => format!("{sign}pi"),
        (_, 1) => format!("{sign}{ka}*pi"),
        (1, _) => format!("{sign}pi/{n}"),
        _ => format!("{sign}{ka}*pi/{n}"),
    }
}

/// Canonical program text; `parse(&serialize(c))` reproduces `c` gate for gate.
pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\ncreg c[{}];\n", circuit.num_qubits(), circuit.num_clbits()));
    for g in circuit.gates() {
        let line = match g {
            Gate::U1 { qubit, lambda } => format!("u1({}) q[{qubit}];", format_angle(*lambda)),
            other => format!("{other};"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn minimal_program() {
        let c = parse("qreg q[2]; creg c[2]; x q[0]; measure q[0] -> c[0];").unwrap();
        assert_eq!(c.gates(), &[Gate::X(0), Gate::measure(0, 0)]);
    }

    #[test]
    fn index_out_of_range() {
        let e = parse("qreg q[5];\ncreg c[5];\ncx q[0],q[7];").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::IndexOutOfRange);
        assert_eq!(e.span, SourceSpan { line: 3, column: 11 });
    }

    #[test]
    fn error_kinds() {
        let kind = |s: &str| parse(s).unwrap_err().kind;
        assert_eq!(kind("qreg q[1]; creg c[1]; ccx q[0];"), ParseErrorKind::UnknownGate);
        assert_eq!(kind("qreg q[1]; creg c[1]; x r[0];"), ParseErrorKind::UndeclaredRegister);
        assert_eq!(kind("x q[0];"), ParseErrorKind::UndeclaredRegister);
        assert_eq!(kind("qreg q[1]; creg c[1]; u1(pi/) q[0];"), ParseErrorKind::BadAngleExpr);
        assert_eq!(kind("qreg q[1]; creg c[1]; u1(1/0) q[0];"), ParseErrorKind::BadAngleExpr);
        assert_eq!(kind("qreg q[1]; qreg r[1]; creg c[1];"), ParseErrorKind::Syntax);
        assert_eq!(kind("qreg q[1]; creg c[1]; x q[0]"), ParseErrorKind::Syntax);
        assert_eq!(kind("qreg q[2]; creg c[2]; cx q[1],q[1];"), ParseErrorKind::Syntax);
        assert_eq!(kind("qreg q[1];"), ParseErrorKind::Syntax);
        assert_eq!(kind("qreg q[1]; creg c[1]; measure q[0] -> c[3];"), ParseErrorKind::IndexOutOfRange);
    }

    #[test]
    fn headers_comments_and_crlf() {
        let src = "OPENQASM 2.0;\r\ninclude \"qelib1.inc\";\r\n// note\r\nqreg q[1];\r\n\r\ncreg c[1];\r\nh q[0]; // trailing\r\n";
        assert_eq!(parse(src).unwrap().gates(), &[Gate::H(0)]);
    }

    #[test]
    fn angle_forms() {
        assert_eq!(eval_angle("pi/4"), Some(FRAC_PI_4));
        assert_eq!(eval_angle("-pi"), Some(-PI));
        assert_eq!(eval_angle("3*pi/8"), Some(3.0 * PI / 8.0));
        assert_eq!(eval_angle("0.25"), Some(0.25));
        assert_eq!(eval_angle("-(pi/2)"), Some(-PI / 2.0));
        assert_eq!(eval_angle("pi pi"), None);
    }

    #[test]
    fn serializer_forms() {
        assert_eq!(
            serialize(&Circuit::new(1, 1)),
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\n"
        );
        let mut c = Circuit::new(2, 2);
        c.append(Gate::u1(1, FRAC_PI_4)).unwrap();
        assert!(serialize(&c).contains("u1(pi/4) q[1];"));
        assert_eq!(format_angle(-3.0 * PI / 8.0), "-3*pi/8");
        assert_eq!(format_angle(0.1), "0.1");
        assert_eq!(format_angle(PI), "pi");
    }

    #[test]
    fn whole_register_forms() {
        let c = parse("qreg q[3]; creg c[3]; h q; barrier q; measure q -> c;").unwrap();
        assert_eq!(c.len(), 3 + 1 + 3);
        assert_eq!(c.gates()[3], Gate::Barrier(vec![0, 1, 2]));
    }

    #[test]
    fn round_trip_keeps_barriers() {
        let src = "qreg q[3]; creg c[2]; h q[0]; barrier q[0],q[2]; u1(-0.3) q[2]; cx q[2],q[1]; measure q[2] -> c[1];";
        let c = parse(src).unwrap();
        assert!(parse(&serialize(&c)).unwrap().same_structure(&c));
    }
}

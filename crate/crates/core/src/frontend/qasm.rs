//! OpenQASM 2 subset: one quantum register, the closed gate set, optional
//! terminal measurements (ignored).

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported gate \"{name}\" at {line}:{col}")]
    UnsupportedGate { name: String, line: usize, col: usize },
    #[error("expected exactly one quantum register, found {found}")]
    RegisterCount { found: usize },
    #[error("circuit contains telegate markers, which have no QASM form")]
    MarkerPresent,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Arrow,
    Punct(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let syntax = |line, col, msg: String| QasmError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
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
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
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
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s
                .parse()
                .map_err(|_| syntax(tl, tc, format!("malformed number \"{s}\"")))?;
            col += i - start;
            out.push(Token { tok: Tok::Number(v), line: tl, col: tc });
            continue;
        }
        if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(syntax(tl, tc, "unterminated string".into()));
            }
            let s: String = chars[start + 1..i].iter().collect();
            i += 1;
            col += i - start;
            out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
            continue;
        }
        if "[](),;+-*/^{}=".contains(c) {
            i += 1;
            col += 1;
            out.push(Token { tok: Tok::Punct(c), line: tl, col: tc });
            continue;
        }
        return Err(syntax(tl, tc, format!("unexpected character '{c}'")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

struct Register {
    name: String,
    size: usize,
}

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

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Punct(p) if p == c => Ok(()),
            _ => self.err(&t, format!("expected '{c}'")),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t)),
            _ => self.err(&t, "expected identifier"),
        }
    }

    fn integer(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => self.err(&t, "expected non-negative integer"),
        }
    }

    fn skip_statement(&mut self) -> Result<(), QasmError> {
        loop {
            let t = self.next();
            match t.tok {
                Tok::Punct(';') => return Ok(()),
                Tok::Eof => return self.err(&t, "unexpected end of input"),
                _ => {}
            }
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_punct('+') {
                v += self.term()?;
            } else if self.eat_punct('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.power()?;
        loop {
            if self.eat_punct('*') {
                v *= self.power()?;
            } else if self.eat_punct('/') {
                v /= self.power()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn power(&mut self) -> Result<f64, QasmError> {
        let base = self.unary()?;
        if self.eat_punct('^') {
            let exp = self.power()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_punct('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_punct('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(v) => Ok(*v),
            Tok::Punct('(') => {
                let v = self.expr()?;
                self.expect_punct(')')?;
                Ok(v)
            }
            Tok::Ident(name) if name == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(name) => {
                let f: fn(f64) -> f64 = match name.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return self.err(&t, format!("unknown identifier \"{name}\" in expression")),
                };
                self.expect_punct('(')?;
                let v = self.expr()?;
                self.expect_punct(')')?;
                Ok(f(v))
            }
            _ => self.err(&t, "expected expression"),
        }
    }

    /// `name[i]` or a bare register name (`None` index).
    fn operand(&mut self, qreg: Option<&Register>) -> Result<(Option<usize>, Token), QasmError> {
        let (name, t) = self.ident()?;
        let reg = match qreg {
            Some(r) if r.name == name => r,
            _ => return self.err(&t, format!("unknown quantum register \"{name}\"")),
        };
        if self.eat_punct('[') {
            let idx = self.integer()?;
            self.expect_punct(']')?;
            if idx >= reg.size {
                return self.err(&t, format!("index {idx} out of range for {name}[{}]", reg.size));
            }
            Ok((Some(idx), t))
        } else {
            Ok((None, t))
        }
    }
}

/// Parses the supported OpenQASM 2 subset into a circuit with id `"qasm"`.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with_id(text, "qasm")
}

pub fn parse_qasm_with_id(text: &str, id: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut qreg: Option<Register> = None;
    let mut qregs = 0;
    let mut cregs = 0;
    let mut measured = false;
    let mut gates: Vec<Gate> = Vec::new();

    loop {
        let t = p.peek().clone();
        let word = match &t.tok {
            Tok::Eof => break,
            Tok::Ident(w) => w.clone(),
            _ => return p.err(&t, "expected statement"),
        };
        match word.as_str() {
            "OPENQASM" => {
                p.next();
                let v = p.next();
                if !matches!(v.tok, Tok::Number(_)) {
                    return p.err(&v, "expected version number");
                }
                p.expect_punct(';')?;
            }
            "include" => {
                p.next();
                let s = p.next();
                if !matches!(s.tok, Tok::Str(_)) {
                    return p.err(&s, "expected file name string");
                }
                p.expect_punct(';')?;
            }
            "qreg" | "creg" => {
                p.next();
                let (name, _) = p.ident()?;
                p.expect_punct('[')?;
                let size = p.integer()?;
                p.expect_punct(']')?;
                p.expect_punct(';')?;
                if word == "qreg" {
                    qregs += 1;
                    if qregs > 1 {
                        return Err(QasmError::RegisterCount { found: qregs });
                    }
                    qreg = Some(Register { name, size });
                } else {
                    cregs += 1;
                    if cregs > 1 {
                        return p.err(&t, "only a single classical register is supported");
                    }
                }
            }
            "measure" => {
                measured = true;
                p.next();
                p.skip_statement()?;
            }
            "barrier" => {
                p.next();
                p.skip_statement()?;
            }
            _ => {
                p.next();
                let kind = match word.as_str() {
                    "U" => Some(GateKind::U3),
                    "CX" => Some(GateKind::Cx),
                    w => GateKind::from_qasm_name(w),
                };
                let Some(kind) = kind else {
                    return Err(QasmError::UnsupportedGate { name: word, line: t.line, col: t.col });
                };
                if measured {
                    return p.err(&t, "gates after measurement are not supported");
                }
                let mut params = Vec::new();
                if p.eat_punct('(') && !p.eat_punct(')') {
                    loop {
                        params.push(p.expr()?);
                        if p.eat_punct(')') {
                            break;
                        }
                        p.expect_punct(',')?;
                    }
                }
                if params.len() != kind.param_count() {
                    return p.err(
                        &t,
                        format!("{word} takes {} parameter(s), got {}", kind.param_count(), params.len()),
                    );
                }
                let mut operands = vec![p.operand(qreg.as_ref())?];
                while p.eat_punct(',') {
                    operands.push(p.operand(qreg.as_ref())?);
                }
                p.expect_punct(';')?;
                let arity = kind.fixed_arity().unwrap_or(0);
                if operands.len() != arity {
                    return p.err(&t, format!("{word} takes {arity} qubit(s), got {}", operands.len()));
                }
                match (arity, operands[0].0) {
                    // broadcast a single-qubit gate over the whole register
                    (1, None) => {
                        let size = qreg.as_ref().map_or(0, |r| r.size);
                        gates.extend((0..size).map(|q| Gate::new(kind, &[q], &params)));
                    }
                    _ => {
                        let mut qs = Vec::with_capacity(arity);
                        for (idx, tok) in &operands {
                            match idx {
                                Some(i) => qs.push(*i),
                                None => return p.err(tok, "register broadcast is only supported for single-qubit gates"),
                            }
                        }
                        gates.push(Gate::new(kind, &qs, &params));
                    }
                }
            }
        }
    }
    let reg = qreg.ok_or(QasmError::RegisterCount { found: 0 })?;
    Ok(Circuit::new(id, reg.size, gates)?)
}

/// Deterministic QASM text: one gate per line, angles with 17 significant
/// digits.
pub fn emit_qasm(c: &Circuit) -> Result<String, QasmError> {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.width());
    for g in c.gates() {
        let name = g.kind.qasm_name().ok_or(QasmError::MarkerPresent)?;
        out.push_str(name);
        if !g.params.is_empty() {
            let ps: Vec<String> = g.params.iter().map(|p| format!("{p:.16e}")).collect();
            let _ = write!(out, "({})", ps.join(","));
        }
        let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", qs.join(","));
    }
    Ok(out)
}

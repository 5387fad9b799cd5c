//! OpenQASM 2.0 subset: parser, lowering to [`Circuit`], and emitter.
//!
//! Accepted input is the `OPENQASM 2.0;` header, `include` lines, one `qreg`
//! and at most one `creg`, and statements built from `h`, `x`, `t`, `tdg`,
//! `rx(expr)`, `cx`, `swap`, `cswap`, `reset`, `barrier` and
//! `measure q[i] -> c[j]`. Gate definitions, `opaque` and `if` are reported
//! as unsupported rather than skipped.

mod emit;
mod expr;
mod lexer;

use std::fmt;

use thiserror::Error;

use crate::angle::AngleValue;
use crate::circuit::{Circuit, GateKind, GateOp};

pub use emit::{emit, emit_with_names};
pub use lexer::{tokenize, Token, TokenKind};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QasmErrorKind {
    UnexpectedChar(char),
    UnterminatedString,
    Expected {
        expected: String,
        found: String,
    },
    MissingSemicolon {
        found: String,
    },
    UnsupportedVersion(String),
    UnknownGate(String),
    Unsupported(String),
    UnknownRegister(String),
    DuplicateRegister(String),
    MultipleRegisters(&'static str),
    MissingQreg,
    IndexOutOfRange {
        register: String,
        index: usize,
        size: usize,
    },
    OperandCount {
        gate: String,
        expected: usize,
        found: usize,
    },
    DuplicateOperand(usize),
    MalformedExpression(String),
}

impl fmt::Display for QasmErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            Self::UnterminatedString => f.write_str("unterminated string"),
            Self::Expected { expected, found } => write!(f, "expected {expected}, found `{found}`"),
            Self::MissingSemicolon { found } => write!(f, "missing `;` before `{found}`"),
            Self::UnsupportedVersion(v) => write!(f, "unsupported OpenQASM version {v}"),
            Self::UnknownGate(name) => write!(f, "unknown gate `{name}`"),
            Self::Unsupported(what) => write!(f, "unsupported construct: {what}"),
            Self::UnknownRegister(name) => write!(f, "undeclared register `{name}`"),
            Self::DuplicateRegister(name) => write!(f, "register `{name}` declared twice"),
            Self::MultipleRegisters(kind) => {
                write!(f, "only one {kind} is supported")
            }
            Self::MissingQreg => f.write_str("program declares no qreg"),
            Self::IndexOutOfRange {
                register,
                index,
                size,
            } => write!(f, "index {index} out of range for {register}[{size}]"),
            Self::OperandCount {
                gate,
                expected,
                found,
            } => write!(f, "`{gate}` takes {expected} qubits, got {found}"),
            Self::DuplicateOperand(q) => write!(f, "qubit {q} appears twice in one statement"),
            Self::MalformedExpression(msg) => write!(f, "malformed expression: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct QasmError {
    pub span: SourceSpan,
    pub kind: QasmErrorKind,
}

impl QasmError {
    pub(crate) fn new(span: SourceSpan, kind: QasmErrorKind) -> Self {
        Self { span, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterDecl {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Gate {
        kind: GateKind,
        angle: Option<AngleValue>,
        qubits: Vec<usize>,
    },
    Reset(usize),
    Barrier(Vec<usize>),
    Measure {
        qubit: usize,
        clbit: usize,
    },
}

/// A statement with operands already resolved to register indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QasmProgram {
    pub version: String,
    pub includes: Vec<String>,
    pub qreg: RegisterDecl,
    pub creg: Option<RegisterDecl>,
    pub statements: Vec<Statement>,
}

/// Parses program text.
pub fn parse(text: &str) -> Result<QasmProgram, QasmError> {
    let tokens = tokenize(text)?;
    Parser {
        tokens: &tokens,
        pos: 0,
    }
    .program()
}

/// Parses and lowers in one step.
pub fn parse_circuit(text: &str) -> Result<Circuit, QasmError> {
    parse(text).map(|p| lower(&p))
}

/// Parses a standalone angle such as `2pi/3`, `0.5pi`, `pi/2` or `1.25`.
/// A number directly followed by `pi` or `(` multiplies.
pub fn parse_angle(text: &str) -> Result<AngleValue, QasmError> {
    let tokens = tokenize(text)?;
    let mut p = expr::ExprParser::new(&tokens, 0, true);
    let angle = p.parse_angle()?;
    let rest = &tokens[p.pos.min(tokens.len() - 1)];
    if rest.kind != TokenKind::Eof {
        return Err(QasmError::new(
            rest.span,
            QasmErrorKind::MalformedExpression(format!("unexpected `{}`", rest.kind)),
        ));
    }
    Ok(angle)
}

/// Flat token texts, for whitespace-insensitive comparison of programs.
pub fn token_stream(text: &str) -> Result<Vec<String>, QasmError> {
    Ok(tokenize(text)?
        .into_iter()
        .filter(|t| t.kind != TokenKind::Eof)
        .map(|t| t.kind.to_string())
        .collect())
}

/// Maps register-indexed statements onto a flat [`Circuit`].
pub fn lower(program: &QasmProgram) -> Circuit {
    let nc = program.creg.as_ref().map_or(0, |c| c.size);
    let mut circuit = Circuit::new(program.qreg.size, nc);
    for statement in &program.statements {
        let op = match &statement.kind {
            StatementKind::Gate {
                kind,
                angle,
                qubits,
            } => GateOp {
                kind: *kind,
                qubits: qubits.clone(),
                angle: *angle,
                clbit: None,
            },
            StatementKind::Reset(q) => GateOp::new(GateKind::Reset, &[*q]),
            StatementKind::Barrier(qs) => GateOp::new(GateKind::Barrier, qs),
            StatementKind::Measure { qubit, clbit } => GateOp::measure(*qubit, *clbit),
        };
        circuit.push(op);
    }
    circuit
}

fn gate_for(name: &str) -> Option<GateKind> {
    Some(match name {
        "h" => GateKind::H,
        "x" => GateKind::X,
        "t" => GateKind::T,
        "tdg" => GateKind::Tdg,
        "rx" => GateKind::Rx,
        "cx" => GateKind::Cx,
        "swap" => GateKind::Swap,
        "cswap" => GateKind::Cswap,
        _ => return None,
    })
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &'a Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> &'a Token {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expected(token: &Token, expected: &str) -> QasmError {
        QasmError::new(
            token.span,
            QasmErrorKind::Expected {
                expected: expected.to_owned(),
                found: token.kind.to_string(),
            },
        )
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<&'a Token, QasmError> {
        let t = self.advance();
        if t.kind == kind {
            Ok(t)
        } else {
            Err(Self::expected(t, what))
        }
    }

    fn semicolon(&mut self) -> Result<(), QasmError> {
        let t = self.peek();
        if t.kind == TokenKind::Semicolon {
            self.pos += 1;
            return Ok(());
        }
        // Blame the last token of the unterminated statement, not whatever follows it.
        let last = &self.tokens[self.pos.saturating_sub(1)];
        Err(QasmError::new(
            last.span,
            QasmErrorKind::MissingSemicolon {
                found: t.kind.to_string(),
            },
        ))
    }

    fn ident(&mut self, what: &str) -> Result<(&'a str, SourceSpan), QasmError> {
        let t = self.advance();
        match &t.kind {
            TokenKind::Ident(s) => Ok((s, t.span)),
            _ => Err(Self::expected(t, what)),
        }
    }

    fn integer(&mut self) -> Result<usize, QasmError> {
        let t = self.advance();
        match &t.kind {
            TokenKind::Int(s) => s.parse().map_err(|_| Self::expected(t, "an index")),
            _ => Err(Self::expected(t, "an integer")),
        }
    }

    fn program(mut self) -> Result<QasmProgram, QasmError> {
        let (header, span) = self.ident("`OPENQASM`")?;
        if header != "OPENQASM" {
            return Err(Self::expected(&self.tokens[self.pos - 1], "`OPENQASM`"));
        }
        let version_token = self.advance();
        let version = match &version_token.kind {
            TokenKind::Real(v) | TokenKind::Int(v) => v.clone(),
            _ => return Err(Self::expected(version_token, "a version number")),
        };
        if version != "2.0" && version != "2" {
            return Err(QasmError::new(
                span,
                QasmErrorKind::UnsupportedVersion(version),
            ));
        }
        self.semicolon()?;

        let mut includes = Vec::new();
        let mut qreg: Option<RegisterDecl> = None;
        let mut creg: Option<RegisterDecl> = None;
        let mut statements = Vec::new();

        loop {
            let token = self.peek();
            let name = match &token.kind {
                TokenKind::Eof => break,
                TokenKind::Ident(name) => name.as_str(),
                _ => return Err(Self::expected(token, "a statement")),
            };
            let span = token.span;
            self.pos += 1;
            match name {
                "include" => {
                    let t = self.advance();
                    match &t.kind {
                        TokenKind::Str(s) => includes.push(s.clone()),
                        _ => return Err(Self::expected(t, "a quoted file name")),
                    }
                    self.semicolon()?;
                }
                "qreg" | "creg" => {
                    let decl = self.register_decl()?;
                    let (slot, other, kind) = if name == "qreg" {
                        (&mut qreg, &creg, "qreg")
                    } else {
                        (&mut creg, &qreg, "creg")
                    };
                    if other.as_ref().is_some_and(|o| o.name == decl.name) {
                        return Err(QasmError::new(
                            span,
                            QasmErrorKind::DuplicateRegister(decl.name),
                        ));
                    }
                    if slot.is_some() {
                        return Err(QasmError::new(span, QasmErrorKind::MultipleRegisters(kind)));
                    }
                    *slot = Some(decl);
                }
                "measure" => {
                    let qubit = self.operand(&qreg, span)?;
                    self.expect(TokenKind::Arrow, "`->`")?;
                    let clbit = self.operand(&creg, span)?;
                    self.semicolon()?;
                    statements.push(Statement {
                        kind: StatementKind::Measure { qubit, clbit },
                        span,
                    });
                }
                "reset" => {
                    let q = self.operand(&qreg, span)?;
                    self.semicolon()?;
                    statements.push(Statement {
                        kind: StatementKind::Reset(q),
                        span,
                    });
                }
                "barrier" => {
                    let qubits = self.barrier_operands(&qreg, span)?;
                    self.semicolon()?;
                    statements.push(Statement {
                        kind: StatementKind::Barrier(qubits),
                        span,
                    });
                }
                "gate" | "opaque" | "if" | "U" | "CX" => {
                    return Err(QasmError::new(
                        span,
                        QasmErrorKind::Unsupported(format!("`{name}`")),
                    ))
                }
                _ => {
                    let kind = gate_for(name).ok_or_else(|| {
                        QasmError::new(span, QasmErrorKind::UnknownGate(name.to_owned()))
                    })?;
                    let angle = self.gate_parameter(kind, name)?;
                    let mut qubits = vec![self.operand(&qreg, span)?];
                    while self.peek().kind == TokenKind::Comma {
                        self.pos += 1;
                        qubits.push(self.operand(&qreg, span)?);
                    }
                    let expected = kind.arity().unwrap_or(qubits.len());
                    if qubits.len() != expected {
                        return Err(QasmError::new(
                            span,
                            QasmErrorKind::OperandCount {
                                gate: name.to_owned(),
                                expected,
                                found: qubits.len(),
                            },
                        ));
                    }
                    check_distinct(&qubits, span)?;
                    self.semicolon()?;
                    statements.push(Statement {
                        kind: StatementKind::Gate {
                            kind,
                            angle,
                            qubits,
                        },
                        span,
                    });
                }
            }
        }

        let qreg =
            qreg.ok_or_else(|| QasmError::new(self.peek().span, QasmErrorKind::MissingQreg))?;
        Ok(QasmProgram {
            version,
            includes,
            qreg,
            creg,
            statements,
        })
    }

    fn register_decl(&mut self) -> Result<RegisterDecl, QasmError> {
        let (name, _) = self.ident("a register name")?;
        self.expect(TokenKind::LBracket, "`[`")?;
        let size = self.integer()?;
        self.expect(TokenKind::RBracket, "`]`")?;
        self.semicolon()?;
        Ok(RegisterDecl {
            name: name.to_owned(),
            size,
        })
    }

    fn gate_parameter(
        &mut self,
        kind: GateKind,
        name: &str,
    ) -> Result<Option<AngleValue>, QasmError> {
        let has_parens = self.peek().kind == TokenKind::LParen;
        match (kind, has_parens) {
            (GateKind::Rx, true) => {
                self.pos += 1;
                let mut p = expr::ExprParser::new(self.tokens, self.pos, false);
                let angle = p.parse_angle()?;
                self.pos = p.pos;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(Some(angle))
            }
            (GateKind::Rx, false) => Err(Self::expected(self.peek(), "`(` with the rx angle")),
            (_, true) => Err(QasmError::new(
                self.peek().span,
                QasmErrorKind::Unsupported(format!("parameters on `{name}`")),
            )),
            (_, false) => Ok(None),
        }
    }

    /// `name[index]`, checked against the declared register.
    fn operand(
        &mut self,
        reg: &Option<RegisterDecl>,
        stmt: SourceSpan,
    ) -> Result<usize, QasmError> {
        let (name, span) = self.ident("a register operand")?;
        let decl = resolve(reg, name, span)?;
        if self.peek().kind != TokenKind::LBracket {
            return Err(QasmError::new(
                self.peek().span,
                QasmErrorKind::Unsupported(format!("whole-register operand `{name}`")),
            ));
        }
        self.pos += 1;
        let index = self.integer()?;
        self.expect(TokenKind::RBracket, "`]`")?;
        if index >= decl.size {
            return Err(QasmError::new(
                stmt.max(span),
                QasmErrorKind::IndexOutOfRange {
                    register: decl.name.clone(),
                    index,
                    size: decl.size,
                },
            ));
        }
        Ok(index)
    }

    fn barrier_operands(
        &mut self,
        reg: &Option<RegisterDecl>,
        stmt: SourceSpan,
    ) -> Result<Vec<usize>, QasmError> {
        let mut qubits = Vec::new();
        loop {
            let indexed = self
                .tokens
                .get(self.pos + 1)
                .is_some_and(|t| t.kind == TokenKind::LBracket);
            if indexed {
                qubits.push(self.operand(reg, stmt)?);
            } else {
                let (name, span) = self.ident("a register operand")?;
                let decl = resolve(reg, name, span)?;
                qubits.extend(0..decl.size);
            }
            if self.peek().kind != TokenKind::Comma {
                break;
            }
            self.pos += 1;
        }
        check_distinct(&qubits, stmt)?;
        Ok(qubits)
    }
}

fn resolve<'r>(
    reg: &'r Option<RegisterDecl>,
    name: &str,
    span: SourceSpan,
) -> Result<&'r RegisterDecl, QasmError> {
    reg.as_ref()
        .filter(|r| r.name == name)
        .ok_or_else(|| QasmError::new(span, QasmErrorKind::UnknownRegister(name.to_owned())))
}

fn check_distinct(qubits: &[usize], span: SourceSpan) -> Result<(), QasmError> {
    for (i, q) in qubits.iter().enumerate() {
        if qubits[..i].contains(q) {
            return Err(QasmError::new(span, QasmErrorKind::DuplicateOperand(*q)));
        }
    }
    Ok(())
}

use super::lexer::{tokenize, Token, TokenKind};
use super::{Location, ParseDiagnostic};
use crate::circuit::{BinaryOp, ParamExpr};
use crate::diagnostics::ErrorCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegisterKind {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub kind: RegisterKind,
    pub name: String,
    pub size: usize,
    pub loc: Location,
}

/// A register operand: `q[1]` or the whole register `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub register: String,
    pub index: Option<usize>,
    pub loc: Location,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    GateApplication {
        name: String,
        params: Vec<ParamExpr>,
        args: Vec<Argument>,
    },
    Measure {
        qubit: Argument,
        bit: Argument,
    },
    Reset {
        qubit: Argument,
    },
    Barrier {
        args: Vec<Argument>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub loc: Location,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Declaration(Declaration),
    Statement(Statement),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Include {
    pub path: String,
    pub loc: Location,
}

/// Parsed program. Declarations and statements stay interleaved in source
/// order so lowering can enforce declare-before-use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub version: String,
    pub includes: Vec<Include>,
    pub items: Vec<Item>,
}

impl Program {
    pub fn declarations(&self) -> impl Iterator<Item = &Declaration> {
        self.items.iter().filter_map(|i| match i {
            Item::Declaration(d) => Some(d),
            Item::Statement(_) => None,
        })
    }

    pub fn statements(&self) -> impl Iterator<Item = &Statement> {
        self.items.iter().filter_map(|i| match i {
            Item::Statement(s) => Some(s),
            Item::Declaration(_) => None,
        })
    }
}

pub fn parse(text: &str) -> Result<Program, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text)?;
    let end = tokens.last().map_or(Location { line: 1, column: 1 }, |t| {
        Location {
            line: t.loc.line,
            column: t.loc.column + t.text.chars().count(),
        }
    });
    Parser {
        tokens,
        pos: 0,
        end,
        errors: Vec::new(),
    }
    .program()
}

type PResult<T> = Result<T, ParseDiagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: Location,
    errors: Vec<ParseDiagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn here(&self) -> Location {
        self.peek().map_or(self.end, |t| t.loc)
    }

    fn advance(&mut self) -> Option<&Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        let found = match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of input".to_string(),
        };
        ParseDiagnostic::new(
            ErrorCode::Syntax,
            format!("expected {expected}, found {found}"),
            self.here(),
        )
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Token> {
        if self.peek_kind() == Some(kind) {
            Ok(self.advance().cloned().expect("peeked"))
        } else {
            Err(self.unexpected(kind.describe()))
        }
    }

    fn skip_past(&mut self, kind: TokenKind) {
        while let Some(tok) = self.advance() {
            if tok.kind == kind {
                break;
            }
        }
    }

    fn program(mut self) -> Result<Program, Vec<ParseDiagnostic>> {
        let version = match self.header() {
            Ok(v) => v,
            Err(d) => return Err(vec![d]),
        };
        let mut includes = Vec::new();
        if self.peek_kind() == Some(TokenKind::Include) {
            match self.include() {
                Ok(inc) => includes.push(inc),
                Err(d) => {
                    self.errors.push(d);
                    self.skip_past(TokenKind::Semicolon);
                }
            }
        }
        let mut items = Vec::new();
        while self.peek().is_some() {
            match self.item() {
                Ok(Some(item)) => items.push(item),
                Ok(None) => {}
                Err(d) => {
                    self.errors.push(d);
                    self.skip_past(TokenKind::Semicolon);
                }
            }
        }
        if self.errors.is_empty() {
            Ok(Program {
                version,
                includes,
                items,
            })
        } else {
            Err(self.errors)
        }
    }

    fn header(&mut self) -> PResult<String> {
        let loc = self.here();
        if !self.eat(TokenKind::OpenQasm) {
            return Err(ParseDiagnostic::new(
                ErrorCode::Version,
                "missing `OPENQASM 2.0;` header",
                loc,
            ));
        }
        let version = match self.peek() {
            Some(t) if matches!(t.kind, TokenKind::Real | TokenKind::Integer) => t.text.clone(),
            _ => {
                return Err(ParseDiagnostic::new(
                    ErrorCode::Version,
                    "missing version number after `OPENQASM`",
                    self.here(),
                ))
            }
        };
        if version != "2.0" {
            return Err(ParseDiagnostic::new(
                ErrorCode::Version,
                format!("unsupported OpenQASM version `{version}`, only 2.0 is accepted"),
                self.here(),
            ));
        }
        self.pos += 1;
        self.expect(TokenKind::Semicolon)?;
        Ok(version)
    }

    fn include(&mut self) -> PResult<Include> {
        let loc = self.expect(TokenKind::Include)?.loc;
        let path_tok = self.expect(TokenKind::Str)?;
        let path = path_tok.text.trim_matches('"').to_string();
        if path != "qelib1.inc" {
            return Err(ParseDiagnostic::new(
                ErrorCode::Syntax,
                format!("only \"qelib1.inc\" may be included, found \"{path}\""),
                path_tok.loc,
            ));
        }
        self.expect(TokenKind::Semicolon)?;
        Ok(Include { path, loc })
    }

    fn item(&mut self) -> PResult<Option<Item>> {
        let tok = self.peek().cloned().expect("caller checked");
        let loc = tok.loc;
        let kind = match tok.kind {
            TokenKind::Qreg | TokenKind::Creg => {
                self.pos += 1;
                let name = self.expect(TokenKind::Identifier)?.text;
                self.expect(TokenKind::LBracket)?;
                let size = self.integer()?;
                self.expect(TokenKind::RBracket)?;
                self.expect(TokenKind::Semicolon)?;
                let kind = if tok.kind == TokenKind::Qreg {
                    RegisterKind::Quantum
                } else {
                    RegisterKind::Classical
                };
                return Ok(Some(Item::Declaration(Declaration {
                    kind,
                    name,
                    size,
                    loc,
                })));
            }
            TokenKind::Include => {
                return Err(ParseDiagnostic::new(
                    ErrorCode::Syntax,
                    "`include` is only allowed directly after the header",
                    loc,
                ))
            }
            TokenKind::Gate => {
                self.errors.push(ParseDiagnostic::new(
                    ErrorCode::UnsupportedGate,
                    "user-defined gate declarations are not supported",
                    loc,
                ));
                self.skip_past(TokenKind::RBrace);
                return Ok(None);
            }
            TokenKind::Opaque => {
                return Err(ParseDiagnostic::new(
                    ErrorCode::UnsupportedGate,
                    "opaque gate declarations are not supported",
                    loc,
                ))
            }
            TokenKind::If => {
                return Err(ParseDiagnostic::new(
                    ErrorCode::ClassicalIf,
                    "classically controlled `if` statements are not supported",
                    loc,
                ))
            }
            TokenKind::Measure => {
                self.pos += 1;
                let qubit = self.argument()?;
                self.expect(TokenKind::Arrow)?;
                let bit = self.argument()?;
                StatementKind::Measure { qubit, bit }
            }
            TokenKind::Reset => {
                self.pos += 1;
                StatementKind::Reset {
                    qubit: self.argument()?,
                }
            }
            TokenKind::Barrier => {
                self.pos += 1;
                StatementKind::Barrier {
                    args: self.argument_list()?,
                }
            }
            TokenKind::Identifier => {
                self.pos += 1;
                let mut params = Vec::new();
                if self.eat(TokenKind::LParen) && !self.eat(TokenKind::RParen) {
                    loop {
                        params.push(self.expr()?);
                        if self.eat(TokenKind::RParen) {
                            break;
                        }
                        self.expect(TokenKind::Comma)?;
                    }
                }
                StatementKind::GateApplication {
                    name: tok.text.clone(),
                    params,
                    args: self.argument_list()?,
                }
            }
            _ => return Err(self.unexpected("a statement")),
        };
        self.expect(TokenKind::Semicolon)?;
        Ok(Some(Item::Statement(Statement { kind, loc })))
    }

    fn integer(&mut self) -> PResult<usize> {
        let tok = self.expect(TokenKind::Integer)?;
        tok.text.parse().map_err(|_| {
            ParseDiagnostic::new(ErrorCode::Syntax, "integer literal too large", tok.loc)
        })
    }

    fn argument(&mut self) -> PResult<Argument> {
        let tok = self.expect(TokenKind::Identifier)?;
        let index = if self.eat(TokenKind::LBracket) {
            let i = self.integer()?;
            self.expect(TokenKind::RBracket)?;
            Some(i)
        } else {
            None
        };
        Ok(Argument {
            register: tok.text,
            index,
            loc: tok.loc,
        })
    }

    fn argument_list(&mut self) -> PResult<Vec<Argument>> {
        let mut args = vec![self.argument()?];
        while self.eat(TokenKind::Comma) {
            args.push(self.argument()?);
        }
        Ok(args)
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> PResult<ParamExpr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinaryOp::Add,
                Some(TokenKind::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = ParamExpr::binary(op, lhs, self.term()?);
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> PResult<ParamExpr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinaryOp::Mul,
                Some(TokenKind::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = ParamExpr::binary(op, lhs, self.unary()?);
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> PResult<ParamExpr> {
        if self.eat(TokenKind::Minus) {
            return Ok(ParamExpr::negate(self.unary()?));
        }
        self.power()
    }

    // power := primary ('^' unary)?
    fn power(&mut self) -> PResult<ParamExpr> {
        let base = self.primary()?;
        if self.eat(TokenKind::Caret) {
            return Ok(ParamExpr::binary(BinaryOp::Pow, base, self.unary()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<ParamExpr> {
        match self.peek_kind() {
            Some(TokenKind::Integer | TokenKind::Real) => {
                let text = self.advance().expect("peeked").text.clone();
                Ok(ParamExpr::number(&text))
            }
            Some(TokenKind::Pi) => {
                self.pos += 1;
                Ok(ParamExpr::Pi)
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            Some(TokenKind::Identifier) => {
                let tok = self.peek().expect("peeked");
                Err(ParseDiagnostic::new(
                    ErrorCode::Syntax,
                    format!(
                        "`{}` is not allowed in a gate parameter; only numbers, pi and + - * / ^ are",
                        tok.text
                    ),
                    tok.loc,
                ))
            }
            _ => Err(self.unexpected("a parameter expression")),
        }
    }
}

/// Parses a standalone parameter expression such as `pi/2`.
pub fn parse_param(text: &str) -> Result<ParamExpr, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: Location { line: 1, column: text.chars().count() + 1 },
        errors: Vec::new(),
    };
    let expr = parser.expr().map_err(|d| vec![d])?;
    if parser.peek().is_some() {
        return Err(vec![parser.unexpected("end of expression")]);
    }
    Ok(expr)
}

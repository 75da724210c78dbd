use super::{Location, ParseDiagnostic};
use crate::diagnostics::ErrorCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    OpenQasm,
    Include,
    Qreg,
    Creg,
    Gate,
    Opaque,
    Measure,
    Reset,
    Barrier,
    If,
    Pi,
    Identifier,
    Integer,
    Real,
    Str,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semicolon,
    Comma,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    EqEq,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        match self {
            TokenKind::OpenQasm => "`OPENQASM`",
            TokenKind::Include => "`include`",
            TokenKind::Qreg => "`qreg`",
            TokenKind::Creg => "`creg`",
            TokenKind::Gate => "`gate`",
            TokenKind::Opaque => "`opaque`",
            TokenKind::Measure => "`measure`",
            TokenKind::Reset => "`reset`",
            TokenKind::Barrier => "`barrier`",
            TokenKind::If => "`if`",
            TokenKind::Pi => "`pi`",
            TokenKind::Identifier => "identifier",
            TokenKind::Integer => "integer",
            TokenKind::Real => "real number",
            TokenKind::Str => "string",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::Semicolon => "`;`",
            TokenKind::Comma => "`,`",
            TokenKind::Arrow => "`->`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Caret => "`^`",
            TokenKind::EqEq => "`==`",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub loc: Location,
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "OPENQASM" => TokenKind::OpenQasm,
        "include" => TokenKind::Include,
        "qreg" => TokenKind::Qreg,
        "creg" => TokenKind::Creg,
        "gate" => TokenKind::Gate,
        "opaque" => TokenKind::Opaque,
        "measure" => TokenKind::Measure,
        "reset" => TokenKind::Reset,
        "barrier" => TokenKind::Barrier,
        "if" => TokenKind::If,
        "pi" => TokenKind::Pi,
        _ => return None,
    })
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek_second(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }

    fn loc(&self) -> Location {
        Location {
            line: self.line,
            column: self.column,
        }
    }
}

/// Splits source text into tokens. `//` comments and whitespace are dropped.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Vec<ParseDiagnostic>> {
    let mut cur = Cursor {
        chars: src.char_indices().peekable(),
        src,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let loc = cur.loc();
        let start = cur.offset();
        let kind = match c {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '/' if cur.peek_second() == Some('/') => {
                cur.eat_while(|c| c != '\n');
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let end = cur.offset();
                keyword(&src[start..end]).unwrap_or(TokenKind::Identifier)
            }
            c if c.is_ascii_digit() || (c == '.' && cur.peek_second().is_some_and(|d| d.is_ascii_digit())) => {
                lex_number(&mut cur)
            }
            '"' => {
                cur.bump();
                cur.eat_while(|c| c != '"' && c != '\n');
                if cur.peek() == Some('"') {
                    cur.bump();
                    TokenKind::Str
                } else {
                    errors.push(ParseDiagnostic::new(
                        ErrorCode::Syntax,
                        "unterminated string literal",
                        loc,
                    ));
                    continue;
                }
            }
            '-' if cur.peek_second() == Some('>') => {
                cur.bump();
                cur.bump();
                TokenKind::Arrow
            }
            '=' if cur.peek_second() == Some('=') => {
                cur.bump();
                cur.bump();
                TokenKind::EqEq
            }
            _ => {
                cur.bump();
                match c {
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    ';' => TokenKind::Semicolon,
                    ',' => TokenKind::Comma,
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '/' => TokenKind::Slash,
                    '^' => TokenKind::Caret,
                    other => {
                        errors.push(ParseDiagnostic::new(
                            ErrorCode::Syntax,
                            format!("unexpected character `{other}`"),
                            loc,
                        ));
                        continue;
                    }
                }
            }
        };
        let end = cur.offset();
        tokens.push(Token {
            kind,
            text: src[start..end].to_string(),
            loc,
        });
    }

    if errors.is_empty() {
        Ok(tokens)
    } else {
        Err(errors)
    }
}

// int | int '.' digits* exp? | '.' digits+ exp? | int exp
fn lex_number(cur: &mut Cursor<'_>) -> TokenKind {
    let mut real = false;
    cur.eat_while(|c| c.is_ascii_digit());
    if cur.peek() == Some('.') {
        real = true;
        cur.bump();
        cur.eat_while(|c| c.is_ascii_digit());
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let mut ahead = cur.chars.clone();
        ahead.next();
        let mut next = ahead.next().map(|(_, c)| c);
        if matches!(next, Some('+' | '-')) {
            next = ahead.next().map(|(_, c)| c);
        }
        if next.is_some_and(|c| c.is_ascii_digit()) {
            real = true;
            cur.bump();
            if matches!(cur.peek(), Some('+' | '-')) {
                cur.bump();
            }
            cur.eat_while(|c| c.is_ascii_digit());
        }
    }
    if real {
        TokenKind::Real
    } else {
        TokenKind::Integer
    }
}

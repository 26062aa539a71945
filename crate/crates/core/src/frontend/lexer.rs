use crate::error::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Punct,
    Literal,
    EndOfInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punct, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "false",
    "final",
    "finally",
    "float",
    "for",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "true",
    "try",
    "void",
    "volatile",
    "while",
];

/// Multi-character operators, longest first.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", "...", "&&", "||", "==", "!=", "<=", ">=", "->", "::", "++", "--", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
];

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }
}

/// Splits Java-like source into tokens. Comments and the contents of string and
/// character literals never surface as identifiers or keywords.
pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek(0) {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
        } else if cur.starts_with("//") {
            while let Some(c) = cur.peek(0) {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
        } else if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(SyntaxError::Unterminated {
                        what: "block comment",
                        line,
                        column,
                    });
                }
            }
        } else if cur.starts_with("\"\"\"") {
            for _ in 0..3 {
                cur.bump();
            }
            let mut text = String::from("\"\"\"");
            loop {
                if cur.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        cur.bump();
                    }
                    text.push_str("\"\"\"");
                    break;
                }
                match cur.bump() {
                    Some('\\') => {
                        text.push('\\');
                        if let Some(e) = cur.bump() {
                            text.push(e);
                        }
                    }
                    Some(ch) => text.push(ch),
                    None => {
                        return Err(SyntaxError::Unterminated {
                            what: "text block",
                            line,
                            column,
                        })
                    }
                }
            }
            tokens.push(tok(TokenKind::Literal, text, line, column));
        } else if c == '"' || c == '\'' {
            let what = if c == '"' {
                "string literal"
            } else {
                "character literal"
            };
            let mut text = String::new();
            text.push(c);
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        text.push('\\');
                        match cur.bump() {
                            Some('\n') | None => {
                                return Err(SyntaxError::Unterminated { what, line, column })
                            }
                            Some(e) => text.push(e),
                        }
                    }
                    Some('\n') | None => {
                        return Err(SyntaxError::Unterminated { what, line, column })
                    }
                    Some(ch) => {
                        text.push(ch);
                        if ch == c {
                            break;
                        }
                    }
                }
            }
            tokens.push(tok(TokenKind::Literal, text, line, column));
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let mut text = String::new();
            while let Some(ch) = cur.peek(0) {
                if ch.is_alphanumeric() || ch == '_' || ch == '$' {
                    text.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            let kind = if KEYWORDS.contains(&text.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(tok(kind, text, line, column));
        } else if c.is_ascii_digit()
            || (c == '.' && cur.peek(1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut text = String::new();
            while let Some(ch) = cur.peek(0) {
                let exponent_sign = (ch == '+' || ch == '-')
                    && matches!(text.chars().last(), Some('e' | 'E' | 'p' | 'P'))
                    && !text.starts_with("0x")
                    && !text.starts_with("0X");
                if ch.is_alphanumeric() || ch == '_' || ch == '.' || exponent_sign {
                    text.push(ch);
                    cur.bump();
                } else {
                    break;
                }
            }
            tokens.push(tok(TokenKind::Literal, text, line, column));
        } else {
            let op = OPERATORS.iter().find(|op| cur.starts_with(op));
            let text = match op {
                Some(op) => {
                    for _ in 0..op.chars().count() {
                        cur.bump();
                    }
                    op.to_string()
                }
                None => {
                    cur.bump();
                    c.to_string()
                }
            };
            tokens.push(tok(TokenKind::Punct, text, line, column));
        }
    }

    tokens.push(tok(
        TokenKind::EndOfInput,
        String::new(),
        cur.line,
        cur.column,
    ));
    Ok(tokens)
}

fn tok(kind: TokenKind, text: String, line: usize, column: usize) -> Token {
    Token {
        kind,
        text,
        line,
        column,
    }
}

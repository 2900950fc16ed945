//! Line-oriented tokenizer for decks.
//!
//! The first physical line is the title and is never tokenized. Comment
//! lines (leading `*`) and blank lines are dropped, and a line starting with
//! `+` continues the previous logical line.

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Word,
    LParen,
    RParen,
    Equals,
    /// A character that cannot appear in any token. Reported by the parser.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// Text as written in the deck.
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    /// Uppercased text, for keyword comparison.
    pub fn upper(&self) -> String {
        self.text.to_ascii_uppercase()
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// One logical line after continuation joining.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalLine {
    /// 1-based physical line number where the logical line starts.
    pub line: usize,
    pub tokens: Vec<Token>,
}

/// Result of tokenizing a whole deck.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenStream {
    pub title: String,
    pub lines: Vec<LogicalLine>,
}

impl TokenStream {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.lines.iter().flat_map(|l| l.tokens.iter())
    }
}

/// Tokenize a deck. Total: never fails, bad characters become
/// [`TokenKind::Error`] tokens.
pub fn tokenize(text: &str) -> TokenStream {
    let mut physical = text.lines().enumerate();
    let title = physical.next().map(|(_, l)| l.trim().to_string()).unwrap_or_default();

    let mut lines: Vec<LogicalLine> = Vec::new();
    for (idx, raw) in physical {
        let lineno = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('+') {
            let offset = raw.len() - rest.len();
            let toks = tokenize_line(rest, lineno, offset);
            match lines.last_mut() {
                Some(prev) => prev.tokens.extend(toks),
                // A continuation with nothing to continue stands alone.
                None => lines.push(LogicalLine {
                    line: lineno,
                    tokens: toks,
                }),
            }
            continue;
        }
        let toks = tokenize_line(raw, lineno, 0);
        if !toks.is_empty() {
            lines.push(LogicalLine {
                line: lineno,
                tokens: toks,
            });
        }
    }
    TokenStream { title, lines }
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && !matches!(c, '(' | ')' | '=' | ',')
}

fn tokenize_line(text: &str, line: usize, col_offset: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        let column = col_offset + start + 1;
        // SPICE treats commas as whitespace inside argument lists.
        if c.is_whitespace() || c == ',' {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '=' => Some(TokenKind::Equals),
            c if c.is_control() => Some(TokenKind::Error),
            _ => None,
        };
        if let Some(kind) = single {
            chars.next();
            out.push(Token {
                kind,
                text: c.to_string(),
                line,
                column,
            });
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if !is_word_char(c) {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        out.push(Token {
            kind: TokenKind::Word,
            text: text[start..end].to_string(),
            line,
            column,
        });
    }
    out
}

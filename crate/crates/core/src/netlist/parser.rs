//! Deck grammar: element cards, analysis directives, `.PRINT` and `.END`.

use std::fmt;

use thiserror::Error;

use super::deck::*;
use super::lexer::{tokenize, LogicalLine, Token, TokenKind};
use super::value::parse_value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("malformed value '{0}'")]
    MalformedValue(String),
    #[error("unknown card kind '{0}'")]
    UnknownCardKind(String),
    #[error("more than one analysis directive (.OP/.AC/.TRAN)")]
    MultipleAnalyses,
    #[error("no analysis directive (.OP/.AC/.TRAN)")]
    MissingAnalysis,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Every error found in a deck, in line order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<ParseError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

impl ParseErrors {
    pub fn iter(&self) -> impl Iterator<Item = &ParseError> {
        self.0.iter()
    }
}

type LineResult<T> = Result<T, ParseErrorKind>;

fn syntax<T>(msg: impl Into<String>) -> LineResult<T> {
    Err(ParseErrorKind::Syntax(msg.into()))
}

/// Cursor over the tokens of one logical line.
struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Cursor { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn word(&mut self, what: &str) -> LineResult<&'a Token> {
        match self.next() {
            Some(t) if t.is_word() => Ok(t),
            Some(t) => syntax(format!("expected {what}, found '{}'", t.text)),
            None => syntax(format!("expected {what}")),
        }
    }

    fn value(&mut self, what: &str) -> LineResult<f64> {
        let t = self.word(what)?;
        parse_value(&t.text).map_err(|_| ParseErrorKind::MalformedValue(t.text.clone()))
    }

    fn expect(&mut self, kind: TokenKind, text: &str) -> LineResult<()> {
        match self.next() {
            Some(t) if t.kind == kind => Ok(()),
            Some(t) => syntax(format!("expected '{text}', found '{}'", t.text)),
            None => syntax(format!("expected '{text}'")),
        }
    }

    /// Next token is a word that parses as a number.
    fn peek_is_value(&self) -> bool {
        self.peek().is_some_and(|t| t.is_word() && parse_value(&t.text).is_ok())
    }

    fn finish(&self) -> LineResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => syntax(format!("unexpected '{}'", t.text)),
        }
    }
}

/// Parse deck text into a [`Deck`], collecting every error with its line.
pub fn parse_deck(text: &str) -> Result<Deck, ParseErrors> {
    let stream = tokenize(text);
    let mut cards = Vec::new();
    let mut directives = Vec::new();
    let mut errors = Vec::new();
    let mut analysis_seen = false;
    let mut ended = false;

    for line in &stream.lines {
        let report = |errors: &mut Vec<ParseError>, kind| errors.push(ParseError { line: line.line, kind });
        if ended {
            report(&mut errors, ParseErrorKind::Syntax("content after .END".into()));
            continue;
        }
        if let Some(bad) = line.tokens.iter().find(|t| t.kind == TokenKind::Error) {
            report(
                &mut errors,
                ParseErrorKind::Syntax(format!("invalid character {:?} at column {}", bad.text, bad.column)),
            );
            continue;
        }
        let first = &line.tokens[0];
        if first.is_word() && first.text.starts_with('.') {
            match parse_directive(line) {
                Ok(d) => {
                    if matches!(d, Directive::Op | Directive::Ac(_) | Directive::Tran(_)) {
                        if analysis_seen {
                            report(&mut errors, ParseErrorKind::MultipleAnalyses);
                            continue;
                        }
                        analysis_seen = true;
                    }
                    if d == Directive::End {
                        ended = true;
                    }
                    directives.push(d);
                }
                Err(kind) => report(&mut errors, kind),
            }
        } else {
            match parse_card(line) {
                Ok(card) => cards.push(card),
                Err(kind) => report(&mut errors, kind),
            }
        }
    }

    if !analysis_seen && errors.is_empty() {
        let line = stream.lines.last().map_or(1, |l| l.line);
        errors.push(ParseError {
            line,
            kind: ParseErrorKind::MissingAnalysis,
        });
    }
    if errors.is_empty() {
        Ok(Deck {
            title: stream.title,
            cards,
            directives,
        })
    } else {
        Err(ParseErrors(errors))
    }
}

fn parse_directive(line: &LogicalLine) -> LineResult<Directive> {
    let mut cur = Cursor::new(&line.tokens);
    let head = cur.next().expect("non-empty line").upper();
    let directive = match head.as_str() {
        ".OP" => Directive::Op,
        ".END" => Directive::End,
        ".AC" => {
            let sweep = cur.word("sweep type")?;
            if sweep.upper() != "DEC" {
                return syntax(format!("unsupported sweep type '{}' (only DEC)", sweep.text));
            }
            let pts = cur.value("points per decade")?;
            let fstart = cur.value("start frequency")?;
            let fstop = cur.value("stop frequency")?;
            if pts < 1.0 || pts.fract() != 0.0 {
                return syntax("points per decade must be a positive integer");
            }
            if fstart <= 0.0 || fstop <= fstart {
                return syntax("AC sweep needs 0 < fstart < fstop");
            }
            Directive::Ac(SweepSpec {
                pts_per_decade: pts as usize,
                fstart,
                fstop,
            })
        }
        ".TRAN" => {
            let tstep = cur.value("time step")?;
            let tstop = cur.value("stop time")?;
            if !(tstep > 0.0 && tstep <= tstop) {
                return syntax("transient needs 0 < tstep <= tstop");
            }
            Directive::Tran(TranSpec { tstep, tstop })
        }
        ".PRINT" => {
            // Optional analysis-type word, as in `.PRINT TRAN V(out)`.
            if let Some(t) = cur.peek() {
                let next_is_paren = cur.tokens.get(cur.pos + 1).is_some_and(|n| n.kind == TokenKind::LParen);
                if t.is_word() && !next_is_paren && matches!(t.upper().as_str(), "OP" | "AC" | "TRAN" | "DC") {
                    cur.next();
                }
            }
            let mut probes = Vec::new();
            while !cur.at_end() {
                probes.push(parse_probe(&mut cur)?);
            }
            if probes.is_empty() {
                return syntax(".PRINT needs at least one probe");
            }
            Directive::Print(probes)
        }
        _ => return syntax(format!("unknown directive '{}'", line.tokens[0].text)),
    };
    cur.finish()?;
    Ok(directive)
}

fn parse_probe(cur: &mut Cursor<'_>) -> LineResult<Probe> {
    let head = cur.word("probe")?;
    let kind = head.upper();
    cur.expect(TokenKind::LParen, "(")?;
    let inner = cur.word("probe argument")?;
    cur.expect(TokenKind::RParen, ")")?;
    match kind.as_str() {
        "V" => Ok(Probe::Voltage(inner.text.clone())),
        "I" => Ok(Probe::current(&inner.text)),
        _ => syntax(format!("unknown probe '{}'", head.text)),
    }
}

fn parse_card(line: &LogicalLine) -> LineResult<ElementCard> {
    let mut cur = Cursor::new(&line.tokens);
    let first = cur.word("element")?;
    let (kind, name) = if let Some(kind) = CardKind::conveyor_keyword(&first.text) {
        (kind, cur.word("conveyor name")?.text.clone())
    } else if let Some(kind) = CardKind::from_name_prefix(&first.text) {
        (kind, first.text.clone())
    } else {
        return Err(ParseErrorKind::UnknownCardKind(first.text.clone()));
    };

    let mut nodes = Vec::with_capacity(kind.node_count());
    for _ in 0..kind.node_count() {
        nodes.push(cur.word("node name")?.text.clone());
    }

    let mut params = Params::new();
    match kind {
        CardKind::Resistor | CardKind::Capacitor => {
            let v = cur.value("element value")?;
            params.insert(ParamKey::Value, ParamValue::Number(v));
            parse_keyword_params(&mut cur, kind, &mut params)?;
        }
        CardKind::VSource | CardKind::ISource => parse_source_spec(&mut cur, &mut params)?,
        _ => parse_keyword_params(&mut cur, kind, &mut params)?,
    }
    cur.finish()?;
    Ok(ElementCard {
        kind,
        name,
        nodes,
        params,
        line: line.line,
    })
}

fn insert_once(params: &mut Params, key: ParamKey, value: ParamValue) -> LineResult<()> {
    if params.insert(key, value).is_some() {
        return syntax(format!("parameter {} given twice", key.keyword()));
    }
    Ok(())
}

/// `DC <v>`, `AC <mag> [<phase>]` and `SIN(<off> <ampl> <freq>)` in any order.
fn parse_source_spec(cur: &mut Cursor<'_>, params: &mut Params) -> LineResult<()> {
    while let Some(t) = cur.peek() {
        let key = ParamKey::from_keyword(&t.text).filter(|k| matches!(k, ParamKey::Dc | ParamKey::Ac | ParamKey::Sin));
        let Some(key) = key else {
            return syntax(format!("expected DC, AC or SIN, found '{}'", t.text));
        };
        cur.next();
        let value = match key {
            ParamKey::Dc => ParamValue::Number(cur.value("DC value")?),
            ParamKey::Ac => {
                let mag = cur.value("AC magnitude")?;
                let phase_deg = if cur.peek_is_value() {
                    Some(cur.value("AC phase")?)
                } else {
                    None
                };
                ParamValue::Phasor { mag, phase_deg }
            }
            _ => {
                cur.expect(TokenKind::LParen, "(")?;
                let offset = cur.value("SIN offset")?;
                let amplitude = cur.value("SIN amplitude")?;
                let freq = cur.value("SIN frequency")?;
                cur.expect(TokenKind::RParen, ")")?;
                ParamValue::Sin(SinSpec {
                    offset,
                    amplitude,
                    freq,
                })
            }
        };
        insert_once(params, key, value)?;
    }
    Ok(())
}

/// `KEY=VALUE` pairs for capacitor and conveyor cards.
fn parse_keyword_params(cur: &mut Cursor<'_>, kind: CardKind, params: &mut Params) -> LineResult<()> {
    while !cur.at_end() {
        let t = cur.word("parameter")?;
        let key = ParamKey::from_keyword(&t.text).filter(|&k| k != ParamKey::Value && kind.allows(k));
        let Some(key) = key else {
            return syntax(format!("parameter '{}' is not legal on a {kind} card", t.text));
        };
        cur.expect(TokenKind::Equals, "=")?;
        let v = cur.word("parameter value")?;
        let upper = v.upper();
        let value = match key {
            ParamKey::Level => match upper.as_str() {
                "IDEAL" => ParamValue::Level(Level::Ideal),
                "MACRO" => ParamValue::Level(Level::Macro),
                _ => return syntax(format!("LEVEL must be IDEAL or MACRO, found '{}'", v.text)),
            },
            ParamKey::Ry | ParamKey::Rz if upper == "INF" || upper == "INFINITY" => ParamValue::Infinite,
            _ => ParamValue::Number(parse_value(&v.text).map_err(|_| ParseErrorKind::MalformedValue(v.text.clone()))?),
        };
        insert_once(params, key, value)?;
    }
    Ok(())
}

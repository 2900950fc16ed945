//! Deck front-end: tokenizer, parser, pretty-printer and elaboration into
//! a validated [`Circuit`].
//!
//! Conveyor cards list their terminals in Y, X, Z order.

mod circuit;
mod deck;
mod elaborate;
pub mod lexer;
mod parser;
mod pretty;
mod value;

pub use circuit::{Circuit, MacroPorts, NodeId, NodeTable};
pub use deck::*;
pub use elaborate::{elaborate, ElaborateError, ElaborateErrorKind};
pub use lexer::{tokenize, Token, TokenKind, TokenStream};
pub use parser::{parse_deck, ParseError, ParseErrorKind, ParseErrors};
pub use pretty::pretty_print;
pub use value::{format_value, parse_value, MalformedValue};

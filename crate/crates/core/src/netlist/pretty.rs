use std::fmt::Write;

use super::deck::*;
use super::value::format_value;

/// Render a deck back to canonical text. Parsing the output yields an
/// equal [`Deck`].
pub fn pretty_print(deck: &Deck) -> String {
    let mut out = String::new();
    out.push_str(&deck.title);
    out.push('\n');
    for card in &deck.cards {
        write_card(&mut out, card);
        out.push('\n');
    }
    for d in &deck.directives {
        match d {
            Directive::Op => out.push_str(".OP"),
            Directive::Ac(s) => {
                let _ = write!(
                    out,
                    ".AC DEC {} {} {}",
                    s.pts_per_decade,
                    format_value(s.fstart),
                    format_value(s.fstop)
                );
            }
            Directive::Tran(s) => {
                let _ = write!(out, ".TRAN {} {}", format_value(s.tstep), format_value(s.tstop));
            }
            Directive::Print(probes) => {
                out.push_str(".PRINT");
                for p in probes {
                    let _ = write!(out, " {p}");
                }
            }
            Directive::End => out.push_str(".END"),
        }
        out.push('\n');
    }
    out
}

fn write_card(out: &mut String, card: &ElementCard) {
    if card.kind.is_conveyor() {
        let _ = write!(out, "{} {}", card.kind, card.name);
    } else {
        out.push_str(&card.name);
    }
    for n in &card.nodes {
        let _ = write!(out, " {n}");
    }
    for (key, value) in &card.params {
        match (key, value) {
            (ParamKey::Value, ParamValue::Number(v)) => {
                let _ = write!(out, " {}", format_value(*v));
            }
            (ParamKey::Dc, ParamValue::Number(v)) => {
                let _ = write!(out, " DC {}", format_value(*v));
            }
            (ParamKey::Ac, ParamValue::Phasor { mag, phase_deg }) => {
                let _ = write!(out, " AC {}", format_value(*mag));
                if let Some(p) = phase_deg {
                    let _ = write!(out, " {}", format_value(*p));
                }
            }
            (ParamKey::Sin, ParamValue::Sin(s)) => {
                let _ = write!(
                    out,
                    " SIN({} {} {})",
                    format_value(s.offset),
                    format_value(s.amplitude),
                    format_value(s.freq)
                );
            }
            (key, ParamValue::Number(v)) => {
                let _ = write!(out, " {}={}", key.keyword(), format_value(*v));
            }
            (key, ParamValue::Infinite) => {
                let _ = write!(out, " {}=INF", key.keyword());
            }
            (key, ParamValue::Level(l)) => {
                let l = match l {
                    Level::Ideal => "IDEAL",
                    Level::Macro => "MACRO",
                };
                let _ = write!(out, " {}={l}", key.keyword());
            }
            (key, other) => unreachable!("parser never pairs {key:?} with {other:?}"),
        }
    }
}

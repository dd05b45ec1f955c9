//! Line-oriented text form for signatures.
//!
//! One declaration per line; `#` starts a comment; blank lines are ignored.
//! `render` emits a canonical form that `parse` inverts exactly.

use super::{MaskConfig, PoolDecl, PoolKind, SequenceDecl, Signature, SignatureOptions};
use crate::error::Error;
use crate::symbol::{ArgOrder, Symbol};
use crate::Result;
use std::fmt::Write as _;

pub(super) fn render(sig: &Signature) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "option max-parents {}", sig.max_parents);
    if sig.masks.enabled() {
        let mut parts = Vec::new();
        if sig.masks.depth {
            parts.push("depth");
        }
        if sig.masks.arg_number {
            parts.push("argnum");
        }
        let _ = writeln!(out, "option masks {}", parts.join(" "));
        if sig.masks.depth {
            let _ = writeln!(out, "option max-depth {}", sig.masks.max_depth);
        }
        if sig.masks.negation_bypass {
            out.push_str("option negation-bypass\n");
        }
    }
    if let Some(neg) = &sig.negation {
        let _ = writeln!(out, "option negation {neg}");
    }
    if sig.isolate_negation {
        out.push_str("option negation-isolate\n");
    }
    let _ = writeln!(
        out,
        "option parent-constraints {}",
        if sig.parent_constraints_enabled() { "on" } else { "off" }
    );
    for pool in sig.pools() {
        let kind = match pool.kind {
            PoolKind::Root => "root",
            PoolKind::Internal => "internal",
            PoolKind::Both => "both",
        };
        let _ = writeln!(
            out,
            "pool {kind} {}/{} {} {}",
            pool.name,
            pool.arity,
            order_word(pool.arg_order),
            pool.count
        );
    }
    if let Some(seq) = &sig.sequence {
        let _ =
            writeln!(out, "sequence length {} slots {} vocab {}", seq.length, seq.slots, seq.vocab);
    }
    let (roots, internals) = sig.declared();
    for sym in roots {
        let _ = writeln!(out, "root {}", symbol_decl(sym));
    }
    for sym in internals {
        let _ = writeln!(out, "internal {}", symbol_decl(sym));
    }
    out
}

fn order_word(order: ArgOrder) -> &'static str {
    match order {
        ArgOrder::Ordered => "ordered",
        ArgOrder::Unordered => "unordered",
    }
}

fn symbol_decl(sym: &Symbol) -> String {
    match sym.arg_order {
        ArgOrder::Ordered => format!("{}/{}", sym.label, sym.arity),
        ArgOrder::Unordered => format!("{}/{} unordered", sym.label, sym.arity),
    }
}

pub(super) fn parse(input: &str) -> Result<Signature> {
    let mut roots = Vec::new();
    let mut internals = Vec::new();
    let mut options = SignatureOptions::default();
    let mut masks = MaskConfig::default();
    let mut masks_stated = false;

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let text = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut words = text.split_whitespace();
        let Some(head) = words.next() else { continue };
        let rest: Vec<&str> = words.collect();
        match head {
            "option" => parse_option(line, &rest, &mut options, &mut masks, &mut masks_stated)?,
            "pool" => options.pools.push(parse_pool(line, &rest)?),
            "sequence" => {
                if options.sequence.is_some() {
                    return Err(parse_err(line, "duplicate sequence declaration"));
                }
                options.sequence = Some(parse_sequence(line, &rest)?);
            }
            "root" => roots.push(parse_symbol(line, &rest)?),
            "internal" => internals.push(parse_symbol(line, &rest)?),
            other => return Err(parse_err(line, format!("unknown declaration `{other}`"))),
        }
    }

    options.masks = masks;
    Signature::declare(roots, internals, options)
}

fn parse_option(
    line: usize,
    rest: &[&str],
    options: &mut SignatureOptions,
    masks: &mut MaskConfig,
    masks_stated: &mut bool,
) -> Result<()> {
    let Some((&name, args)) = rest.split_first() else {
        return Err(parse_err(line, "option needs a name"));
    };
    match name {
        "max-parents" => options.max_parents = parse_u32(line, args.first(), "max-parents")?,
        "masks" => {
            if *masks_stated {
                return Err(parse_err(line, "duplicate masks option"));
            }
            *masks_stated = true;
            for &word in args {
                match word {
                    "depth" => masks.depth = true,
                    "argnum" => masks.arg_number = true,
                    other => {
                        return Err(parse_err(line, format!("unknown mask component `{other}`")))
                    }
                }
            }
            if !masks.enabled() {
                return Err(parse_err(line, "masks option lists no components"));
            }
        }
        "max-depth" => masks.max_depth = parse_u32(line, args.first(), "max-depth")?,
        "negation-bypass" => masks.negation_bypass = true,
        "negation" => {
            let Some(&label) = args.first() else {
                return Err(parse_err(line, "negation needs a label"));
            };
            options.negation = Some(label.to_string());
        }
        "negation-isolate" => options.isolate_negation = true,
        "parent-constraints" => {
            options.parent_constraints = match args.first() {
                Some(&"on") => Some(true),
                Some(&"off") => Some(false),
                _ => return Err(parse_err(line, "parent-constraints needs on or off")),
            };
        }
        other => return Err(parse_err(line, format!("unknown option `{other}`"))),
    }
    Ok(())
}

fn parse_pool(line: usize, rest: &[&str]) -> Result<PoolDecl> {
    let [kind, name_arity, order, count] = rest else {
        return Err(parse_err(line, "pool needs: kind name/arity order count"));
    };
    let kind = match *kind {
        "root" => PoolKind::Root,
        "internal" => PoolKind::Internal,
        "both" => PoolKind::Both,
        other => return Err(parse_err(line, format!("unknown pool kind `{other}`"))),
    };
    let (name, arity) = split_label_arity(line, name_arity)?;
    let arg_order = parse_order(line, order)?;
    let count = parse_u32(line, Some(count), "pool count")?;
    Ok(PoolDecl { name, kind, arity, arg_order, count })
}

fn parse_sequence(line: usize, rest: &[&str]) -> Result<SequenceDecl> {
    let ["length", length, "slots", slots, "vocab", vocab] = rest else {
        return Err(parse_err(line, "sequence needs: length N slots N vocab N"));
    };
    Ok(SequenceDecl {
        length: parse_u32(line, Some(length), "length")?,
        slots: parse_u32(line, Some(slots), "slots")?,
        vocab: parse_u32(line, Some(vocab), "vocab")?,
    })
}

fn parse_symbol(line: usize, rest: &[&str]) -> Result<Symbol> {
    let (label, arity) = match rest {
        [name_arity] | [name_arity, "ordered"] => split_label_arity(line, name_arity)?,
        [name_arity, "unordered"] => {
            let (label, arity) = split_label_arity(line, name_arity)?;
            return Ok(Symbol::unordered(label, arity));
        }
        _ => return Err(parse_err(line, "symbol needs: label/arity [ordered|unordered]")),
    };
    Ok(Symbol::ordered(label, arity))
}

fn parse_order(line: usize, word: &str) -> Result<ArgOrder> {
    match word {
        "ordered" => Ok(ArgOrder::Ordered),
        "unordered" => Ok(ArgOrder::Unordered),
        other => Err(parse_err(line, format!("expected ordered or unordered, got `{other}`"))),
    }
}

fn split_label_arity(line: usize, word: &str) -> Result<(String, u32)> {
    let Some((label, arity)) = word.rsplit_once('/') else {
        return Err(parse_err(line, format!("`{word}` is missing /arity")));
    };
    if label.is_empty() {
        return Err(parse_err(line, "empty label"));
    }
    let arity =
        arity.parse().map_err(|_| parse_err(line, format!("bad arity in `{word}`")))?;
    Ok((label.to_string(), arity))
}

fn parse_u32(line: usize, word: Option<&&str>, what: &str) -> Result<u32> {
    let Some(word) = word else {
        return Err(parse_err(line, format!("{what} needs a number")));
    };
    word.parse().map_err(|_| parse_err(line, format!("{what}: `{word}` is not a number")))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column: 1, message: message.into() }
}

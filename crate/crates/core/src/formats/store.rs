//! Text persistence for constraint systems.
//!
//! A system file records everything needed to rebuild the system bit for
//! bit: the signature text, the split widths, `t`, and the seed, plus the
//! digest of the system they produce and any label bindings accumulated so
//! far. Loading reruns the deterministic construction and refuses the file
//! if the rebuilt digest disagrees, so a stale or edited file can never
//! silently decode against the wrong constraints.

use crate::binding::Binder;
use crate::constraints::{ConstraintSystem, Widths};
use crate::error::Error;
use crate::Result;
use crate::signature::Signature;

const HEADER: &str = "satvec system v1";

/// Renders a system, and optionally its binder, to the persistence format.
#[must_use]
pub fn system_to_text(system: &ConstraintSystem, binder: Option<&Binder>) -> String {
    let w = system.widths();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("seed {}\n", system.seed()));
    out.push_str(&format!("t {}\n", system.t()));
    out.push_str(&format!("width ordered {}\n", w.ordered));
    out.push_str(&format!("width unordered {}\n", w.unordered));
    out.push_str(&format!("width child {}\n", w.child));
    out.push_str(&format!("width parent {}\n", w.parent));
    out.push_str(&format!("width sequence {}\n", w.sequence));
    out.push_str(&format!("digest {}\n", hex::encode(system.digest())));
    out.push_str("begin signature\n");
    out.push_str(&system.signature().to_text());
    out.push_str("end signature\n");
    if let Some(binder) = binder.filter(|b| !b.is_empty()) {
        out.push_str("begin bindings\n");
        out.push_str(&binder.to_lines());
        out.push_str("end bindings\n");
    }
    out
}

/// Rebuilds a system and its binder from the persistence format, verifying
/// the recorded digest against the reconstruction.
pub fn system_from_text(input: &str) -> Result<(ConstraintSystem, Binder)> {
    let fail = |line: usize, message: String| Error::Parse { line, column: 1, message };
    let mut lines = input.lines().enumerate();

    let (_, header) =
        lines.next().ok_or_else(|| fail(1, "empty system file".into()))?;
    if header.trim_end() != HEADER {
        return Err(fail(1, format!("expected the header {HEADER:?}")));
    }

    let mut seed: Option<u64> = None;
    let mut t: Option<u32> = None;
    let mut widths = Widths::uniform(1);
    let mut widths_seen = 0u32;
    let mut digest: Option<String> = None;

    let mut signature_text = String::new();
    let mut binding_lines: Vec<(usize, String)> = Vec::new();
    enum Section {
        Head,
        Signature,
        Bindings,
        Done,
    }
    let mut section = Section::Head;

    for (index, raw) in lines {
        let line_no = index + 1;
        let line = raw.trim_end();
        match section {
            Section::Head => {
                let mut fields = line.split_whitespace();
                match fields.next() {
                    Some("seed") => {
                        let value = fields.next().ok_or_else(|| fail(line_no, "seed needs a value".into()))?;
                        seed = Some(
                            value
                                .parse()
                                .map_err(|_| fail(line_no, format!("bad seed {value}")))?,
                        );
                    }
                    Some("t") => {
                        let value = fields.next().ok_or_else(|| fail(line_no, "t needs a value".into()))?;
                        t = Some(
                            value
                                .parse()
                                .map_err(|_| fail(line_no, format!("bad t {value}")))?,
                        );
                    }
                    Some("width") => {
                        let family = fields
                            .next()
                            .ok_or_else(|| fail(line_no, "width needs a family".into()))?;
                        let value: u32 = fields
                            .next()
                            .ok_or_else(|| fail(line_no, "width needs a value".into()))?
                            .parse()
                            .map_err(|_| fail(line_no, "bad width value".into()))?;
                        let slot = match family {
                            "ordered" => &mut widths.ordered,
                            "unordered" => &mut widths.unordered,
                            "child" => &mut widths.child,
                            "parent" => &mut widths.parent,
                            "sequence" => &mut widths.sequence,
                            other => {
                                return Err(fail(line_no, format!("unknown width family {other}")))
                            }
                        };
                        *slot = value;
                        widths_seen += 1;
                    }
                    Some("digest") => {
                        let value = fields
                            .next()
                            .ok_or_else(|| fail(line_no, "digest needs a value".into()))?;
                        digest = Some(value.to_string());
                    }
                    Some("begin") if fields.next() == Some("signature") => {
                        section = Section::Signature;
                    }
                    Some(other) => {
                        return Err(fail(line_no, format!("unexpected field {other}")))
                    }
                    None => {}
                }
            }
            Section::Signature => {
                if line == "end signature" {
                    section = Section::Bindings;
                } else {
                    signature_text.push_str(line);
                    signature_text.push('\n');
                }
            }
            Section::Bindings => match line.split_whitespace().next() {
                Some("begin") => {}
                Some("end") => section = Section::Done,
                Some(_) => binding_lines.push((line_no, line.to_string())),
                None => {}
            },
            Section::Done => {
                if !line.trim().is_empty() {
                    return Err(fail(line_no, "trailing content after the bindings".into()));
                }
            }
        }
    }

    let seed = seed.ok_or_else(|| fail(1, "missing seed".into()))?;
    let t = t.ok_or_else(|| fail(1, "missing t".into()))?;
    if widths_seen != 5 {
        return Err(fail(1, format!("expected 5 width lines, found {widths_seen}")));
    }
    let expected = digest.ok_or_else(|| fail(1, "missing digest".into()))?;

    let sig = Signature::parse_text(&signature_text)?;
    let system = ConstraintSystem::build(sig, widths, t, seed)?;
    let got = hex::encode(system.digest());
    if got != expected {
        return Err(Error::DigestMismatch { expected, got });
    }

    let mut binder = Binder::for_signature(system.signature())?;
    for (line_no, line) in binding_lines {
        binder.load_line(line_no, &line)?;
    }
    Ok((system, binder))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::clause::{self, ClauseSignatureSpec};
    use crate::formats::sentence;

    fn clause_fixture() -> (ConstraintSystem, Binder) {
        let sig = clause_signature_small();
        let system = ConstraintSystem::build(sig, Widths::uniform(2), 2, 5).unwrap();
        let mut binder = Binder::for_signature(system.signature()).unwrap();
        let caps = clause::ClauseCaps::default();
        let parsed = clause::parse_clause("p(a) | ~q(b)", &caps).unwrap();
        clause::bind_clause(&parsed, &mut binder).unwrap();
        (system, binder)
    }

    fn clause_signature_small() -> Signature {
        clause::clause_signature(&ClauseSignatureSpec {
            constants: 4,
            unary: 3,
            binary: 2,
            ternary: 0,
            variables: 3,
            ..ClauseSignatureSpec::default()
        })
        .unwrap()
    }

    #[test]
    fn systems_round_trip_with_their_bindings() {
        let (system, binder) = clause_fixture();
        let text = system_to_text(&system, Some(&binder));
        let (loaded, loaded_binder) = system_from_text(&text).unwrap();
        assert_eq!(loaded.digest(), system.digest());
        assert_eq!(loaded.len(), system.len());
        assert_eq!(loaded_binder.to_lines(), binder.to_lines());
        assert_eq!(system_to_text(&loaded, Some(&loaded_binder)), text);
    }

    #[test]
    fn sequence_systems_round_trip_without_bindings() {
        let sig = sentence::sentence_signature(4, 8).unwrap();
        let system = ConstraintSystem::build(sig, Widths::uniform(3), 2, 9).unwrap();
        let text = system_to_text(&system, None);
        let (loaded, binder) = system_from_text(&text).unwrap();
        assert_eq!(loaded.digest(), system.digest());
        assert!(binder.is_empty());
    }

    #[test]
    fn edited_files_are_refused() {
        let (system, _) = clause_fixture();
        let text = system_to_text(&system, None);

        let tampered = text.replace("seed 5", "seed 6");
        assert!(matches!(system_from_text(&tampered), Err(Error::DigestMismatch { .. })));

        let garbled = text.replace("width ordered", "width sideways");
        assert!(matches!(system_from_text(&garbled), Err(Error::Parse { .. })));

        assert!(matches!(system_from_text("not a system"), Err(Error::Parse { .. })));
    }
}

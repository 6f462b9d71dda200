//! The 69-token character inventory and text encoding.
//!
//! Token order is frozen so id sequences and checkpoints are portable:
//! pad = 0, the 66 printable characters in inventory order at 1..=66,
//! space = 67, unknown = 68.

use alloc::string::String;
use alloc::vec::Vec;

/// The 66 printable characters, in inventory order.
pub const PRINTABLES: &str =
    "abcdefghijklmnopqrstuvwxyz0123456789-,;.!?:'\"/|\\_@#$%^&*~`+=<>()[]";

pub const VOCAB_SIZE: usize = 69;
pub const PAD_ID: usize = 0;
pub const SPACE_ID: usize = 67;
pub const UNK_ID: usize = 68;

/// Glyph used when decoding the unknown token.
pub const UNK_GLYPH: char = '\u{fffd}';

/// Fixed character-to-id mapping over the 69 tokens.
pub struct Vocabulary {
    ascii_to_id: [usize; 128],
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        let mut ascii_to_id = [UNK_ID; 128];
        for (i, c) in PRINTABLES.chars().enumerate() {
            ascii_to_id[c as usize] = i + 1;
        }
        ascii_to_id[b' ' as usize] = SPACE_ID;
        Vocabulary { ascii_to_id }
    }

    pub fn size(&self) -> usize {
        VOCAB_SIZE
    }

    /// Id of a (already lowercased) character; anything outside the
    /// inventory maps to the unknown token.
    pub fn id_of(&self, c: char) -> usize {
        if (c as usize) < 128 {
            self.ascii_to_id[c as usize]
        } else {
            UNK_ID
        }
    }

    /// Character for an id: `None` for pad, the replacement glyph for
    /// unknown, and ids outside the vocabulary.
    pub fn char_of(&self, id: usize) -> Option<char> {
        match id {
            PAD_ID => None,
            SPACE_ID => Some(' '),
            id if (1..=66).contains(&id) => PRINTABLES.chars().nth(id - 1),
            _ => Some(UNK_GLYPH),
        }
    }

    /// Lowercases, maps characters to ids, truncates to `s`, and right-pads
    /// with the pad token. Total on any input string.
    pub fn encode(&self, text: &str, s: usize) -> Vec<usize> {
        let mut ids = Vec::with_capacity(s);
        ids.extend(
            text.chars()
                .flat_map(char::to_lowercase)
                .map(|c| self.id_of(c))
                .take(s),
        );
        ids.resize(s, PAD_ID);
        ids
    }

    /// Inverse of [`Vocabulary::encode`] over non-pad ids; unknowns decode to
    /// the replacement glyph, pads are dropped.
    pub fn decode(&self, ids: &[usize]) -> String {
        ids.iter().filter_map(|&id| self.char_of(id)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn inventory_counts() {
        assert_eq!(PRINTABLES.chars().count(), 66);
        let v = Vocabulary::new();
        assert_eq!(v.size(), 69);
        // unique ids for every printable
        let mut seen = [false; VOCAB_SIZE];
        for c in PRINTABLES.chars() {
            let id = v.id_of(c);
            assert!(!seen[id], "duplicate id {id}");
            seen[id] = true;
        }
    }

    #[test]
    fn frozen_id_assignment() {
        let v = Vocabulary::new();
        assert_eq!(v.id_of('a'), 1);
        assert_eq!(v.id_of('z'), 26);
        assert_eq!(v.id_of('0'), 27);
        assert_eq!(v.id_of('9'), 36);
        assert_eq!(v.id_of('-'), 37);
        assert_eq!(v.id_of('\\'), 48);
        assert_eq!(v.id_of(']'), 66);
        assert_eq!(v.id_of('{'), UNK_ID);
        assert_eq!(v.id_of(' '), SPACE_ID);
        assert_eq!(v.id_of('\u{1f600}'), UNK_ID);
        assert_eq!(v.id_of('\n'), UNK_ID);
    }

    #[test]
    fn encode_pads_and_lowercases() {
        let v = Vocabulary::new();
        assert_eq!(v.encode("", 4), vec![0, 0, 0, 0]);
        assert_eq!(v.encode("AB", 4), vec![1, 2, 0, 0]);
    }

    #[test]
    fn encode_truncates_prefix() {
        let v = Vocabulary::new();
        let long: String = core::iter::repeat('x').take(2000).collect();
        let ids = v.encode(&long, 1014);
        assert_eq!(ids.len(), 1014);
        assert!(ids.iter().all(|&id| id == v.id_of('x')));
    }

    #[test]
    fn roundtrip_with_unknown_sentinel() {
        let v = Vocabulary::new();
        let ids = v.encode("Hi \u{1f600}!", 10);
        assert_eq!(v.decode(&ids), "hi \u{fffd}!");
    }

    #[test]
    fn printable_roundtrip() {
        let v = Vocabulary::new();
        for c in PRINTABLES.chars() {
            assert_eq!(v.char_of(v.id_of(c)), Some(c));
        }
    }
}

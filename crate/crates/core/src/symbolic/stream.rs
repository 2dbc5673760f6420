use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::SymbolicError;

pub const MAX_ALPHABET: usize = 16;

/// Observed record of a process: symbol indices into an ordered alphabet of
/// distinct character codes.
///
/// Single-symbol alphabets are accepted so that a constant record can be fed
/// to inference, which reports it as the trivial one-state machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolStream {
    alphabet: Vec<char>,
    data: Vec<u8>,
}

impl SymbolStream {
    pub fn new(alphabet: Vec<char>, data: Vec<u8>) -> Result<Self, SymbolicError> {
        check_alphabet(&alphabet)?;
        if let Some((position, &index)) = data.iter().enumerate().find(|(_, &s)| s as usize >= alphabet.len()) {
            return Err(SymbolicError::SymbolOutOfRange {
                position,
                index,
                size: alphabet.len(),
            });
        }
        Ok(Self { alphabet, data })
    }

    /// Builds a stream from symbol characters. Whitespace in `symbols` is ignored.
    pub fn from_chars(alphabet: &str, symbols: &str) -> Result<Self, SymbolicError> {
        let alphabet: Vec<char> = alphabet.chars().collect();
        check_alphabet(&alphabet)?;
        let mut data = Vec::with_capacity(symbols.len());
        for c in symbols.chars().filter(|c| !c.is_whitespace()) {
            match alphabet.iter().position(|&a| a == c) {
                Some(i) => data.push(i as u8),
                None => {
                    return Err(SymbolicError::Parse(format!(
                        "symbol {c:?} not in alphabet {:?}",
                        alphabet.iter().collect::<String>()
                    )))
                }
            }
        }
        Ok(Self { alphabet, data })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Symbol characters without the header.
    pub fn symbols(&self) -> String {
        self.data.iter().map(|&s| self.alphabet[s as usize]).collect()
    }

    /// Applies a permutation of symbol indices: symbol `i` becomes `perm[i]`.
    /// The alphabet is kept, so the rendered text changes.
    pub fn relabel(&self, perm: &[u8]) -> Result<Self, SymbolicError> {
        let n = self.alphabet.len();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| (p as usize) >= n || std::mem::replace(&mut seen[p as usize], true))
        {
            return Err(SymbolicError::InvalidAlphabet(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        let data = self.data.iter().map(|&s| perm[s as usize]).collect();
        Ok(Self {
            alphabet: self.alphabet.clone(),
            data,
        })
    }
}

fn check_alphabet(alphabet: &[char]) -> Result<(), SymbolicError> {
    if alphabet.is_empty() || alphabet.len() > MAX_ALPHABET {
        return Err(SymbolicError::InvalidAlphabet(format!(
            "size {} outside 1..={MAX_ALPHABET}",
            alphabet.len()
        )));
    }
    let mut seen = HashSet::new();
    for &c in alphabet {
        if c.is_whitespace() {
            return Err(SymbolicError::InvalidAlphabet("whitespace symbol".into()));
        }
        if !seen.insert(c) {
            return Err(SymbolicError::InvalidAlphabet(format!("duplicate symbol {c:?}")));
        }
    }
    Ok(())
}

/// File format: a header line `alphabet: <chars>` followed by symbol characters,
/// whitespace and newlines ignored.
impl FromStr for SymbolStream {
    type Err = SymbolicError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim_start();
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        let alphabet = header
            .trim_end_matches('\r')
            .strip_prefix("alphabet:")
            .ok_or_else(|| SymbolicError::Parse("missing `alphabet:` header".into()))?
            .trim();
        if alphabet.is_empty() {
            return Err(SymbolicError::Parse("empty alphabet".into()));
        }
        if alphabet.chars().any(char::is_whitespace) {
            return Err(SymbolicError::Parse(format!(
                "alphabet {alphabet:?} contains whitespace"
            )));
        }
        Self::from_chars(alphabet, body).map_err(|e| match e {
            SymbolicError::InvalidAlphabet(msg) => SymbolicError::Parse(msg),
            other => other,
        })
    }
}

impl fmt::Display for SymbolStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet.iter().collect::<String>())?;
        for chunk in self.data.chunks(80) {
            let line: String = chunk.iter().map(|&s| self.alphabet[s as usize]).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

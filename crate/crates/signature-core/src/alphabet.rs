use serde::{Deserialize, Serialize};

use crate::ScenarioError;

/// An ordered finite symbol set with one designated padding symbol.
///
/// The symbol order is significant: it fixes the length-lexicographic
/// enumeration of instances and therefore which witness a detector reports
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<char>,
    pad: char,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>, pad: char) -> Result<Self, ScenarioError> {
        if symbols.is_empty() {
            return Err(ScenarioError::EmptyAlphabet);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(ScenarioError::DuplicateSymbol(c));
            }
        }
        if !symbols.contains(&pad) {
            return Err(ScenarioError::PadNotInAlphabet(pad));
        }
        Ok(Alphabet { symbols, pad })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn pad(&self) -> char {
        self.pad
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    /// Number of instances of length at most `n`: sum of |Σ|^j for j = 0..=n.
    pub fn domain_size(&self, n: usize) -> u64 {
        let k = self.symbols.len() as u64;
        let mut total = 0u64;
        let mut pow = 1u64;
        for _ in 0..=n {
            total = total.saturating_add(pow);
            pow = pow.saturating_mul(k);
        }
        total
    }

    /// All instances of length at most `max_len`, in length-lexicographic
    /// order with lexicographic ties broken by the configured symbol order.
    pub fn instances_up_to(&self, max_len: usize) -> Instances {
        Instances {
            iter: InstanceIter::new(self.symbols.clone()),
            max_len,
        }
    }

    /// The unbounded length-lexicographic instance stream.
    pub fn instance_stream(&self) -> InstanceIter {
        InstanceIter::new(self.symbols.clone())
    }
}

/// A workload instance: a string over a scenario's alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instance(String);

impl Instance {
    /// Validates every character against the alphabet.
    pub fn new(text: impl Into<String>, alphabet: &Alphabet) -> Result<Self, ScenarioError> {
        let text = text.into();
        if let Some(bad) = text.chars().find(|c| !alphabet.contains(*c)) {
            return Err(ScenarioError::MalformedInstance { text, bad });
        }
        Ok(Instance(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The instance with `n` copies of the pad symbol appended.
    pub fn padded(&self, pad: char, n: usize) -> Instance {
        let mut text = self.0.clone();
        text.extend(std::iter::repeat_n(pad, n));
        Instance(text)
    }

    /// The instance with every trailing pad symbol removed.
    pub fn strip_pads(&self, pad: char) -> Instance {
        Instance(self.0.trim_end_matches(pad).to_string())
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Infinite length-lexicographic enumeration of strings over a symbol order.
///
/// Yields the empty string, then all length-1 strings in symbol order, then
/// all length-2 strings, and so on. Deterministic and injective.
#[derive(Debug, Clone)]
pub struct InstanceIter {
    symbols: Vec<char>,
    // digits[i] indexes into symbols; little-endian odometer over the
    // current length, None before the first call.
    digits: Option<Vec<usize>>,
}

impl InstanceIter {
    fn new(symbols: Vec<char>) -> Self {
        InstanceIter {
            symbols,
            digits: None,
        }
    }

    fn render(&self, digits: &[usize]) -> Instance {
        Instance(digits.iter().map(|&d| self.symbols[d]).collect())
    }
}

impl Iterator for InstanceIter {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        match &mut self.digits {
            None => {
                self.digits = Some(Vec::new());
                Some(Instance(String::new()))
            }
            Some(digits) => {
                // Most-significant digit first; increment from the right.
                let base = self.symbols.len();
                let mut i = digits.len();
                loop {
                    if i == 0 {
                        // Carry past the leftmost digit: grow length.
                        digits.iter_mut().for_each(|d| *d = 0);
                        digits.push(0);
                        break;
                    }
                    i -= 1;
                    if digits[i] + 1 < base {
                        digits[i] += 1;
                        for d in digits[i + 1..].iter_mut() {
                            *d = 0;
                        }
                        break;
                    }
                }
                let digits = digits.clone();
                Some(self.render(&digits))
            }
        }
    }
}

/// Bounded-length view over [`InstanceIter`].
#[derive(Debug, Clone)]
pub struct Instances {
    iter: InstanceIter,
    max_len: usize,
}

impl Iterator for Instances {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        let next = self.iter.next()?;
        if next.len() > self.max_len {
            None
        } else {
            Some(next)
        }
    }
}

use std::collections::VecDeque;
use std::sync::Arc;

use crate::ast::ProgramIndex;

/// Character universe for enumerated payloads, name tokens, and pattern
/// literals: the default scenario alphabet plus the characters of its
/// positive witness implementation, in byte order.
pub const DEFAULT_ENUM_CHARSET: &[char] = &['#', 'D', 'Y', 'a', 'b', 'n', 'y'];

/// The first `stage + 1` programs of the canonical enumeration.
///
/// The enumeration is deterministic, injective, and ordered by text length
/// with lexicographic ties; a smaller stage is always a prefix of a larger
/// one. Machine-simulation nodes are not generated (their literals live in a
/// separate token grammar); they remain valid indices reachable through the
/// gadget constructors.
pub fn enumerate_programs(stage: usize) -> Vec<ProgramIndex> {
    program_stream().take(stage + 1).collect()
}

/// The unbounded enumeration stream over the default charset.
pub fn program_stream() -> ProgramEnumerator {
    ProgramEnumerator::new(DEFAULT_ENUM_CHARSET.to_vec())
}

/// Length-lexicographic generator of grammar-valid canonical texts.
pub struct ProgramEnumerator {
    charset: Vec<char>,
    levels: Vec<Arc<Vec<String>>>,
    pending: VecDeque<String>,
    next_len: usize,
}

impl ProgramEnumerator {
    pub fn new(mut charset: Vec<char>) -> ProgramEnumerator {
        charset.sort_unstable();
        charset.dedup();
        ProgramEnumerator {
            charset,
            levels: Vec::new(),
            pending: VecDeque::new(),
            next_len: 0,
        }
    }

    fn level(&self, len: usize) -> &[String] {
        self.levels.get(len).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// All charset strings of exactly `len`, in lexicographic order.
    fn charset_strings(&self, len: usize) -> Vec<String> {
        let mut out = Vec::new();
        let k = self.charset.len();
        if len == 0 {
            out.push(String::new());
            return out;
        }
        let mut digits = vec![0usize; len];
        loop {
            out.push(digits.iter().map(|&d| self.charset[d]).collect());
            let mut i = len;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if digits[i] + 1 < k {
                    digits[i] += 1;
                    digits[i + 1..].iter_mut().for_each(|d| *d = 0);
                    break;
                }
            }
        }
    }

    /// Canonical decimal literals of exactly `len` digits.
    fn decimals(len: usize) -> Vec<String> {
        match len {
            0 => Vec::new(),
            1 => (0..=9).map(|d: u32| d.to_string()).collect(),
            _ => {
                let mut out = Vec::new();
                let lo = 10u64.pow(len as u32 - 1);
                let hi = 10u64.pow(len as u32);
                for v in lo..hi {
                    out.push(v.to_string());
                }
                out
            }
        }
    }

    fn build_level(&mut self, target: usize) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();

        match target {
            5 => {
                out.push("FIRST".to_string());
                out.push("INPUT".to_string());
            }
            6 => out.push("SECOND".to_string()),
            _ => {}
        }

        // (CONST s): 8 + |s|
        if target >= 8 {
            for s in self.charset_strings(target - 8) {
                out.push(format!("(CONST {s})"));
            }
        }
        // (MATCH_PAD s) and (PAD_COUNT s): 12 + |s|
        if target >= 12 {
            for s in self.charset_strings(target - 12) {
                out.push(format!("(MATCH_PAD {s})"));
                out.push(format!("(PAD_COUNT {s})"));
            }
        }
        // (NUM d): 6 + |d|
        if target >= 7 {
            for d in Self::decimals(target - 6) {
                out.push(format!("(NUM {d})"));
            }
        }
        // (SQ t): 5 + |t|
        if target >= 5 {
            for t in self.level(target - 5) {
                out.push(format!("(SQ {t})"));
            }
        }
        // Binary forms.
        self.binary(&mut out, "CONCAT", target, 10);
        self.binary(&mut out, "EQ", target, 6);
        self.binary(&mut out, "EVAL", target, 8);
        self.binary(&mut out, "SPECIALIZE", target, 14);
        // (IF c t e): |c| + |t| + |e| + 7
        if target >= 7 + 15 {
            let budget = target - 7;
            for lc in 5..=budget.saturating_sub(10) {
                for lt in 5..=budget.saturating_sub(lc + 5) {
                    let le = budget - lc - lt;
                    for c in self.level(lc) {
                        for t in self.level(lt) {
                            for e in self.level(le) {
                                out.push(format!("(IF {c} {t} {e})"));
                            }
                        }
                    }
                }
            }
        }
        // (ORACLE n t): |n| + |t| + 10, names non-empty.
        if target >= 16 {
            let budget = target - 10;
            for ln in 1..=budget.saturating_sub(5) {
                let lt = budget - ln;
                for n in self.charset_strings(ln) {
                    for t in self.level(lt) {
                        out.push(format!("(ORACLE {n} {t})"));
                    }
                }
            }
        }

        out.sort_unstable();
        out
    }

    fn binary(&self, out: &mut Vec<String>, head: &str, target: usize, overhead: usize) {
        if target < overhead + 10 {
            return;
        }
        let budget = target - overhead;
        for la in 5..=budget.saturating_sub(5) {
            let lb = budget - la;
            for a in self.level(la) {
                for b in self.level(lb) {
                    out.push(format!("({head} {a} {b})"));
                }
            }
        }
    }
}

impl Iterator for ProgramEnumerator {
    type Item = ProgramIndex;

    fn next(&mut self) -> Option<ProgramIndex> {
        loop {
            if let Some(text) = self.pending.pop_front() {
                return Some(ProgramIndex::from_canonical(text));
            }
            let len = self.next_len;
            self.next_len += 1;
            let level = self.build_level(len);
            self.levels.resize(len + 1, Arc::new(Vec::new()));
            self.levels[len] = Arc::new(level.clone());
            self.pending.extend(level);
        }
    }
}

use std::collections::HashMap;

const WORD: usize = u64::BITS as usize;

/// Match masks of a pattern split into 64-bit blocks.
///
/// Bit `r` of block `b` for character `c` is set when `pattern[64 * b + r] == c`.
/// ASCII characters live in a flat table, everything else in a map.
#[derive(Debug, Clone)]
pub struct PatternMask {
    len: usize,
    blocks: usize,
    ascii: Vec<u64>,
    other: HashMap<char, Vec<u64>>,
    zeros: Vec<u64>,
}

impl PatternMask {
    pub fn new(pattern: &[char]) -> Self {
        let blocks = pattern.len().div_ceil(WORD).max(1);
        let mut ascii = vec![0u64; 128 * blocks];
        let mut other: HashMap<char, Vec<u64>> = HashMap::new();
        for (i, &c) in pattern.iter().enumerate() {
            let (block, bit) = (i / WORD, i % WORD);
            if c.is_ascii() {
                ascii[c as usize * blocks + block] |= 1 << bit;
            } else {
                other.entry(c).or_insert_with(|| vec![0; blocks])[block] |= 1 << bit;
            }
        }
        Self {
            len: pattern.len(),
            blocks,
            ascii,
            other,
            zeros: vec![0; blocks],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn get(&self, c: char) -> &[u64] {
        if c.is_ascii() {
            let start = c as usize * self.blocks;
            &self.ascii[start..start + self.blocks]
        } else {
            self.other.get(&c).map_or(&self.zeros, Vec::as_slice)
        }
    }

    /// Global edit distance between the pattern and `text`.
    pub fn distance(&self, text: &[char]) -> usize {
        if self.len == 0 {
            return text.len();
        }
        let last = self.blocks - 1;
        let last_bit = 1u64 << ((self.len - 1) % WORD);

        // Column 0 of the DP is 0..=m, i.e. every vertical delta is +1.
        let mut pv = vec![!0u64; self.blocks];
        let mut mv = vec![0u64; self.blocks];
        let mut score = self.len;

        for &c in text {
            let eq = self.get(c);
            // Row 0 is the 0..=n ramp, so each column enters with +1.
            let mut carry: i8 = 1;
            for b in 0..self.blocks {
                let out_bit = if b == last { last_bit } else { 1 << (WORD - 1) };
                carry = advance_block(&mut pv[b], &mut mv[b], eq[b], carry, out_bit);
            }
            score = (score as isize + carry as isize) as usize;
        }
        score
    }
}

/// One column step of Myers' recurrence for a single block.
///
/// `hin` is the horizontal delta entering at the top of the block; the return
/// value is the horizontal delta observed at `out_bit`.
#[inline]
fn advance_block(pv: &mut u64, mv: &mut u64, eq: u64, hin: i8, out_bit: u64) -> i8 {
    let (p, m) = (*pv, *mv);
    let xv = eq | m;
    let eq = if hin < 0 { eq | 1 } else { eq };
    let xh = ((eq & p).wrapping_add(p) ^ p) | eq;

    let mut ph = m | !(xh | p);
    let mut mh = p & xh;

    let hout = if ph & out_bit != 0 {
        1
    } else if mh & out_bit != 0 {
        -1
    } else {
        0
    };

    ph <<= 1;
    mh <<= 1;
    match hin {
        h if h < 0 => mh |= 1,
        h if h > 0 => ph |= 1,
        _ => {}
    }

    *pv = mh | !(xv | ph);
    *mv = ph & xv;
    hout
}

/// Levenshtein distance via the block-based bit-vector algorithm.
///
/// The shorter string becomes the pattern, so a pair of 200-character
/// strings needs four blocks per text character instead of a 200-cell row.
pub fn levenshtein_bitparallel(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_bitparallel_chars(&a, &b)
}

pub fn levenshtein_bitparallel_chars(a: &[char], b: &[char]) -> usize {
    let (text, pattern) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    PatternMask::new(pattern).distance(text)
}

#[cfg(test)]
mod tests {
    use super::super::dp::{levenshtein_chars, tests::all_strings};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        assert_eq!(levenshtein_bitparallel("kitten", "sitting"), 3);
        assert_eq!(levenshtein_bitparallel("", "x"), 1);
        assert_eq!(levenshtein_bitparallel("", ""), 0);
        assert_eq!(levenshtein_bitparallel("gotong", "gotong royong"), 7);
        assert_eq!(levenshtein_bitparallel("ärsip", "arsip"), 1);
    }

    #[test]
    fn exhaustive_small_alphabet() {
        let strings = all_strings(&['a', 'b', 'c'], 4);
        for a in &strings {
            for b in &strings {
                assert_eq!(levenshtein_bitparallel_chars(a, b), levenshtein_chars(a, b));
            }
        }
    }

    #[test]
    fn block_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alphabet = ['a', 'b', 'c', 'd', 'é'];
        for _ in 0..2000 {
            let la = rng.random_range(60..=200);
            let lb = rng.random_range(60..=200);
            let a: Vec<char> = (0..la).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect();
            let b: Vec<char> = (0..lb).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect();
            assert_eq!(levenshtein_bitparallel_chars(&a, &b), levenshtein_chars(&a, &b));
        }
    }

    #[test]
    fn pattern_mask_is_reusable() {
        let pattern: Vec<char> = "surat".chars().collect();
        let mask = PatternMask::new(&pattern);
        for text in ["surat", "surta", "serta", "", "suratsurat"] {
            let t: Vec<char> = text.chars().collect();
            assert_eq!(mask.distance(&t), levenshtein_chars(&pattern, &t));
        }
    }
}

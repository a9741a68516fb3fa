//! Deterministic generators for fuzz-style tests. Hand-rolled xorshift so
//! frozen expectations can never drift with external crate versions.

use growdex::text::UpdateOp;

/// xorshift64* — deterministic, seedable, good enough for test mixing.
#[derive(Debug, Clone)]
pub struct XorShift {
    state: u64,
}

impl XorShift {
    pub fn new(seed: u64) -> XorShift {
        XorShift {
            state: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform value in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// True with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// The first `sigma` lowercase letters as the working alphabet.
pub fn alphabet(sigma: usize) -> Vec<char> {
    assert!((1..=26).contains(&sigma));
    (0..sigma).map(|i| (b'a' + i as u8) as char).collect()
}

/// Fully-online op sequence: `n` appends over at most `max_texts` texts and
/// `sigma` letters. Biased toward staying on the same text and repeating
/// characters, so unary runs and deep per-text structure appear often.
pub fn random_ops(seed: u64, n: usize, max_texts: usize, sigma: usize) -> Vec<UpdateOp> {
    let letters = alphabet(sigma);
    let mut rng = XorShift::new(seed ^ 0xC0FF_EE00_D15E_A5E5);
    let mut ops = Vec::with_capacity(n);
    let mut texts = 0usize;
    let mut last_text = 1usize;
    let mut last_char: Vec<char> = Vec::new();
    for _ in 0..n {
        let k = if texts == 0 {
            1
        } else if rng.chance(1, 2) {
            last_text
        } else {
            // Any existing text, or one beyond (capped by max_texts).
            1 + rng.below(texts.min(max_texts - 1) as u64 + 1) as usize
        };
        if k > texts {
            texts = k;
            last_char.push('a');
        }
        let c = if rng.chance(1, 4) {
            last_char[k - 1]
        } else {
            letters[rng.below(sigma as u64) as usize]
        };
        last_char[k - 1] = c;
        last_text = k;
        ops.push(UpdateOp::new(k, c));
    }
    ops
}

/// Semi-online sequence: each text fully written before the next starts.
/// Text count and lengths are seed-derived; total length is `n`.
pub fn semi_online_ops(seed: u64, n: usize, max_texts: usize, sigma: usize) -> Vec<UpdateOp> {
    let letters = alphabet(sigma);
    let mut rng = XorShift::new(seed ^ 0x5EED_5EED_5EED_5EED);
    let texts = 1 + rng.below(max_texts as u64) as usize;
    let mut ops = Vec::with_capacity(n);
    let mut last = 'a';
    for i in 0..n {
        // Piecewise text assignment: text index grows with i.
        let k = 1 + (i * texts) / n.max(1);
        let c = if rng.chance(1, 4) {
            last
        } else {
            letters[rng.below(sigma as u64) as usize]
        };
        last = c;
        ops.push(UpdateOp::new(k.min(texts), c));
    }
    ops
}

/// Random pattern over the same alphabet, for query fuzzing.
pub fn random_pattern(rng: &mut XorShift, max_len: usize, sigma: usize) -> Vec<char> {
    let letters = alphabet(sigma);
    let len = rng.below(max_len as u64 + 1) as usize;
    (0..len)
        .map(|_| letters[rng.below(sigma as u64) as usize])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ops_are_valid_and_deterministic() {
        let a = random_ops(7, 300, 5, 3);
        let b = random_ops(7, 300, 5, 3);
        assert_eq!(a, b);
        let mut texts = 0;
        for op in &a {
            assert!(op.text_id >= 1 && op.text_id <= texts + 1);
            texts = texts.max(op.text_id);
            assert!(('a'..='c').contains(&op.ch));
        }
        assert!(texts <= 5);
    }

    #[test]
    fn semi_online_ops_never_return_to_a_text() {
        let ops = semi_online_ops(3, 200, 4, 2);
        let mut seen_max = 0usize;
        for op in &ops {
            assert!(
                op.text_id >= seen_max || op.text_id == seen_max,
                "text ids must be non-decreasing"
            );
            assert!(op.text_id <= seen_max + 1);
            seen_max = seen_max.max(op.text_id);
        }
    }
}

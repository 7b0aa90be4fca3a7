//! Flat bitset over `u64` words, sized for marking passes over `[0, len)`.

pub(crate) struct BitVec64 {
    words: Vec<u64>,
    len: u64,
}

impl BitVec64 {
    pub fn zeros(len: u64) -> Self {
        let nwords = (len as usize).div_ceil(64);
        BitVec64 {
            words: vec![0; nwords],
            len,
        }
    }

    pub fn ones(len: u64) -> Self {
        let mut v = Self::zeros(len);
        for w in &mut v.words {
            *w = !0;
        }
        // mask the tail so count_ones stays honest
        let tail = (len % 64) as u32;
        if tail != 0 {
            if let Some(last) = v.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        v
    }

    #[inline]
    pub fn set(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn clear(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    /// Set every multiple of `step` in `[from, len)`.
    pub fn set_multiples(&mut self, step: u64, from: u64) {
        debug_assert!(step > 0);
        let mut m = from.div_ceil(step) * step;
        while m < self.len {
            self.set(m);
            m += step;
        }
    }

    /// Clear every multiple of `step` in `[from, len)`.
    pub fn clear_multiples(&mut self, step: u64, from: u64) {
        debug_assert!(step > 0);
        let mut m = from.div_ceil(step) * step;
        while m < self.len {
            self.clear(m);
            m += step;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of set bits with index in `[lo, hi]` (inclusive, clamped to len).
    pub fn count_range(&self, lo: u64, hi: u64) -> u64 {
        let hi = hi.min(self.len.saturating_sub(1));
        if lo > hi {
            return 0;
        }
        let mut total = 0u64;
        let (wlo, whi) = ((lo >> 6) as usize, (hi >> 6) as usize);
        for wi in wlo..=whi {
            let mut w = self.words[wi];
            if wi == wlo {
                w &= !0u64 << (lo & 63);
            }
            if wi == whi {
                let tail = (hi & 63) as u32;
                if tail < 63 {
                    w &= (1u64 << (tail + 1)) - 1;
                }
            }
            total += w.count_ones() as u64;
        }
        total
    }
}

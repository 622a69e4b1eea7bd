//! Fixed-width packing of short words into a `u128`.
//!
//! Letter ids run from 1 to n and 0 terminates the word. Letters are stored
//! from the most significant end, so integer order is lexicographic order
//! with a proper prefix sorting first.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Packed(pub u128);

impl fmt::Debug for Packed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Packed({:#x})", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Codec {
    width: u32,
}

impl Codec {
    /// Smallest codec able to hold `letters` distinct letter ids.
    pub fn for_letters(letters: usize) -> Codec {
        let width = (usize::BITS - letters.leading_zeros()).max(1);
        Codec { width }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn capacity(&self) -> usize {
        (128 / self.width) as usize
    }

    pub fn check_capacity(&self, len: usize) -> Result<()> {
        if len > self.capacity() {
            return Err(Error::Capacity(format!(
                "words of length {len} do not fit ({} letters of {} bits at most)",
                self.capacity(),
                self.width
            )));
        }
        Ok(())
    }

    pub fn empty(&self) -> Packed {
        Packed(0)
    }

    pub fn len(&self, w: Packed) -> usize {
        if w.0 == 0 {
            return 0;
        }
        ((127 - w.0.trailing_zeros()) / self.width) as usize + 1
    }

    pub fn get(&self, w: Packed, i: usize) -> u32 {
        let shift = 128 - self.width * (i as u32 + 1);
        ((w.0 >> shift) & self.mask()) as u32
    }

    fn mask(&self) -> u128 {
        (1u128 << self.width) - 1
    }

    /// Concatenation; the caller guarantees the result fits.
    #[inline]
    pub fn concat(&self, a: Packed, b: Packed) -> Packed {
        if a.0 == 0 {
            return b;
        }
        let shift = self.width * self.len(a) as u32;
        if shift >= 128 {
            return a;
        }
        Packed(a.0 | (b.0 >> shift))
    }

    /// Concatenation with an explicit length for `a`.
    #[inline]
    pub fn concat_len(&self, a: Packed, a_len: usize, b: Packed) -> Packed {
        let shift = self.width * a_len as u32;
        if shift >= 128 {
            return a;
        }
        Packed(a.0 | (b.0 >> shift))
    }

    pub fn push(&self, w: Packed, id: u32) -> Packed {
        debug_assert!(id != 0 && (id as u128) <= self.mask());
        let i = self.len(w);
        let shift = 128 - self.width * (i as u32 + 1);
        Packed(w.0 | ((id as u128) << shift))
    }

    pub fn single(&self, id: u32) -> Packed {
        self.push(Packed(0), id)
    }

    pub fn encode(&self, ids: &[u32]) -> Packed {
        debug_assert!(ids.len() <= self.capacity());
        ids.iter().fold(Packed(0), |w, &id| self.push(w, id))
    }

    pub fn decode(&self, w: Packed) -> Vec<u32> {
        (0..self.len(w)).map(|i| self.get(w, i)).collect()
    }

    pub fn reverse(&self, w: Packed) -> Packed {
        let mut ids = self.decode(w);
        ids.reverse();
        self.encode(&ids)
    }

    /// Rewrites every letter through `map` (0 erases the letter) into `target`.
    pub fn map_into(&self, w: Packed, map: &[u32], target: &Codec) -> Packed {
        let mut out = Packed(0);
        let mut len = 0u32;
        for i in 0..self.len(w) {
            let id = map[self.get(w, i) as usize];
            if id != 0 {
                let shift = 128 - target.width * (len + 1);
                out.0 |= (id as u128) << shift;
                len += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn width_grows_with_alphabet() {
        assert_eq!(Codec::for_letters(1).width(), 1);
        assert_eq!(Codec::for_letters(3).width(), 2);
        assert_eq!(Codec::for_letters(4).width(), 3);
        assert_eq!(Codec::for_letters(8).capacity(), 32);
    }

    proptest! {
        #[test]
        fn roundtrip_and_order(a in prop::collection::vec(1u32..6, 0..20), b in prop::collection::vec(1u32..6, 0..20)) {
            let c = Codec::for_letters(5);
            let pa = c.encode(&a);
            let pb = c.encode(&b);
            prop_assert_eq!(c.decode(pa), a.clone());
            prop_assert_eq!(c.len(pa), a.len());
            prop_assert_eq!(pa.cmp(&pb), a.cmp(&b));
            let joined: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
            if joined.len() <= c.capacity() {
                prop_assert_eq!(c.decode(c.concat(pa, pb)), joined);
            }
            let mut r = a.clone();
            r.reverse();
            prop_assert_eq!(c.decode(c.reverse(pa)), r);
        }
    }
}

//! Reduced words in the infinite dihedral Weyl group W = <s0, s1 | s0^2 =
//! s1^2 = 1> and the Weyl-group-valued distance between chambers of the
//! tree.
//!
//! A reduced word is an alternating string determined by its length and
//! first letter; s0 is the reflection through type-0 panels (vertices of
//! even a).

use std::fmt;

use crate::tree::{distance, Chamber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElem {
    len: u32,
    /// First letter (0 or 1); `None` for the identity.
    first: Option<u8>,
}

impl WeylElem {
    pub fn identity() -> WeylElem {
        WeylElem { len: 0, first: None }
    }

    pub fn generator(t: u8) -> WeylElem {
        assert!(t <= 1);
        WeylElem {
            len: 1,
            first: Some(t),
        }
    }

    fn alternating(len: u32, first: u8) -> WeylElem {
        if len == 0 {
            WeylElem::identity()
        } else {
            WeylElem {
                len,
                first: Some(first),
            }
        }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_identity(&self) -> bool {
        self.len == 0
    }

    pub fn first(&self) -> Option<u8> {
        self.first
    }

    pub fn last(&self) -> Option<u8> {
        self.first.map(|f| f ^ ((self.len - 1) % 2) as u8)
    }

    /// Reversal of the alternating word.
    pub fn inverse(&self) -> WeylElem {
        match self.first {
            None => *self,
            Some(f) => {
                let first = if self.len % 2 == 1 { f } else { f ^ 1 };
                WeylElem::alternating(self.len, first)
            }
        }
    }

    /// Right multiplication by the generator s_t (always reduced or a
    /// cancellation by the dihedral relations).
    pub fn append(&self, t: u8) -> WeylElem {
        assert!(t <= 1);
        match self.last() {
            None => WeylElem::generator(t),
            Some(last) if last != t => WeylElem::alternating(self.len + 1, self.first.unwrap()),
            Some(_) => {
                // s_t s_t = 1 cancels the last letter.
                WeylElem::alternating(self.len - 1, self.first.unwrap())
            }
        }
    }

    /// All reduced words of length <= max_len, in report order (length, then
    /// first letter).
    pub fn enumerate(max_len: u32) -> Vec<WeylElem> {
        let mut out = vec![WeylElem::identity()];
        for n in 1..=max_len {
            for f in 0..=1u8 {
                out.push(WeylElem::alternating(n, f));
            }
        }
        out
    }
}

impl fmt::Display for WeylElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first {
            None => write!(f, "1"),
            Some(first) => {
                let letters: Vec<String> = (0..self.len)
                    .map(|i| format!("s{}", first ^ (i % 2) as u8))
                    .collect();
                write!(f, "{}", letters.join(" "))
            }
        }
    }
}

/// Weyl distance between chambers: length is the half-sum of same-type
/// endpoint distances, the first letter is the type of the endpoint of `c`
/// strictly closer to `d`.
pub fn weyl_distance(c: &Chamber, d: &Chamber) -> WeylElem {
    let d0 = distance(c.type0(), d.type0());
    let d1 = distance(c.type1(), d.type1());
    debug_assert_eq!((d0 + d1) % 2, 0);
    let n = ((d0 + d1) / 2) as u32;
    if n == 0 {
        return WeylElem::identity();
    }
    let near = |v: &crate::tree::Vertex| distance(v, d.type0()).min(distance(v, d.type1()));
    let (n0, n1) = (near(c.type0()), near(c.type1()));
    debug_assert_ne!(n0, n1, "distinct chambers have a unique closer endpoint");
    let first = if n0 < n1 { 0 } else { 1 };
    WeylElem::alternating(n, first)
}

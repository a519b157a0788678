//! Exact algebra of the diagonal 2×2 letters `I`, `Z`, `U = (I+Z)/2`,
//! `D = (I-Z)/2` and of sparse tensor words built from them.
//!
//! The four letters are closed under multiplication up to a sign and the zero
//! matrix: `UZ = U`, `DZ = -D`, `UD = 0`. Signs are kept apart from the word so
//! that a word is a canonical hash key; the zero product is its own value so a
//! dead term is dropped instead of carried with a zero coefficient.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Index of a trace slot (one 2-dimensional tensor factor).
pub type Slot = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("word occupies slot {slot}, which is outside the trace domain")]
    OccupiedSlotOutsideDomain { slot: Slot },
}

/// One of the four commuting diagonal letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    Z,
    U,
    D,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::Z, Letter::U, Letter::D];

    /// Diagonal entries of the concrete matrix.
    pub fn diag(self) -> [i8; 2] {
        match self {
            Letter::I => [1, 1],
            Letter::Z => [1, -1],
            Letter::U => [1, 0],
            Letter::D => [0, 1],
        }
    }

    /// Trace of the 2×2 matrix: `I → 2`, `Z → 0`, `U → 1`, `D → 1`.
    pub fn trace(self) -> u32 {
        match self {
            Letter::I => 2,
            Letter::Z => 0,
            Letter::U | Letter::D => 1,
        }
    }

    /// `true` for the rank-one projectors `U` and `D`.
    pub fn is_projector(self) -> bool {
        matches!(self, Letter::U | Letter::D)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Letter::I => 'I',
            Letter::Z => 'Z',
            Letter::U => 'U',
            Letter::D => 'D',
        };
        write!(f, "{c}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A letter with a sign, or the zero matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignedLetter {
    Zero,
    Signed(Sign, Letter),
}

impl SignedLetter {
    pub fn plus(letter: Letter) -> Self {
        SignedLetter::Signed(Sign::Plus, letter)
    }

    pub fn minus(letter: Letter) -> Self {
        SignedLetter::Signed(Sign::Minus, letter)
    }
}

/// Exact product of two letters.
pub fn letter_mul(a: Letter, b: Letter) -> SignedLetter {
    use Letter::*;
    match (a, b) {
        (I, x) | (x, I) => SignedLetter::plus(x),
        (Z, Z) => SignedLetter::plus(I),
        (U, U) | (U, Z) | (Z, U) => SignedLetter::plus(U),
        (D, D) => SignedLetter::plus(D),
        (D, Z) | (Z, D) => SignedLetter::minus(D),
        (U, D) | (D, U) => SignedLetter::Zero,
    }
}

pub fn letter_trace(a: Letter) -> f64 {
    f64::from(a.trace())
}

/// Tensor product of letters over slots, stored sparsely.
///
/// Slots not listed carry `I`. Entries are sorted by slot and never hold `I`,
/// so structural equality is matrix equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorWord {
    entries: Vec<(Slot, Letter)>,
}

impl TensorWord {
    /// The all-identity word.
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(slot: Slot, letter: Letter) -> Self {
        Self::from_entries([(slot, letter)])
    }

    /// Builds a word from arbitrary entries. Later entries for the same slot
    /// are multiplied into earlier ones; the result must not be zero.
    ///
    /// # Panics
    /// If two entries for the same slot multiply to zero or to a negative sign;
    /// use [`word_mul`] to combine words that can cancel.
    pub fn from_entries(entries: impl IntoIterator<Item = (Slot, Letter)>) -> Self {
        let mut w = TensorWord::identity();
        for (slot, letter) in entries {
            match word_mul(&w, &TensorWord::raw(slot, letter)) {
                Some((Sign::Plus, p)) => w = p,
                other => {
                    panic!("entries for slot {slot} do not combine to a positive word: {other:?}")
                }
            }
        }
        w
    }

    fn raw(slot: Slot, letter: Letter) -> Self {
        if letter == Letter::I {
            Self::identity()
        } else {
            TensorWord {
                entries: vec![(slot, letter)],
            }
        }
    }

    pub fn get(&self, slot: Slot) -> Letter {
        match self.entries.binary_search_by_key(&slot, |&(s, _)| s) {
            Ok(i) => self.entries[i].1,
            Err(_) => Letter::I,
        }
    }

    /// Occupied (non-identity) entries in slot order.
    pub fn entries(&self) -> &[(Slot, Letter)] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn occupied_slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.entries.iter().map(|&(s, _)| s)
    }

    /// Drops the entry at `slot`, returning the letter that was there.
    pub fn remove(&mut self, slot: Slot) -> Letter {
        match self.entries.binary_search_by_key(&slot, |&(s, _)| s) {
            Ok(i) => self.entries.remove(i).1,
            Err(_) => Letter::I,
        }
    }
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, (s, l)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{l}")?;
        }
        write!(f, "}}")
    }
}

/// Slot-wise product of two words; `None` is the zero matrix.
pub fn word_mul(a: &TensorWord, b: &TensorWord) -> Option<(Sign, TensorWord)> {
    let mut out = Vec::with_capacity(a.entries.len() + b.entries.len());
    let mut sign = Sign::Plus;
    let (mut i, mut j) = (0, 0);
    let (x, y) = (&a.entries, &b.entries);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(&(sa, la)), Some(&(sb, lb))) if sa == sb => {
                i += 1;
                j += 1;
                match letter_mul(la, lb) {
                    SignedLetter::Zero => return None,
                    SignedLetter::Signed(s, l) => {
                        sign = sign.times(s);
                        (sa, l)
                    }
                }
            }
            (Some(&(sa, la)), Some(&(sb, _))) if sa < sb => {
                i += 1;
                (sa, la)
            }
            (Some(_), Some(&e)) | (None, Some(&e)) => {
                j += 1;
                e
            }
            (Some(&e), None) => {
                i += 1;
                e
            }
            (None, None) => unreachable!(),
        };
        if take.1 != Letter::I {
            out.push(take);
        }
    }
    Some((sign, TensorWord { entries: out }))
}

/// Trace of `w` over the tensor factors listed in `slots`.
pub fn word_trace(w: &TensorWord, slots: &BTreeSet<Slot>) -> Result<f64, AlgebraError> {
    if let Some(slot) = w.occupied_slots().find(|s| !slots.contains(s)) {
        return Err(AlgebraError::OccupiedSlotOutsideDomain { slot });
    }
    let mut t = 1.0;
    for &s in slots {
        t *= letter_trace(w.get(s));
    }
    Ok(t)
}

/// A tensor word over at most 64 lanes packed into two bit masks.
///
/// Per lane, `proj` marks a projector (`U`/`D`) and `high` selects `Z` among
/// `{I, Z}` or `D` among `{U, D}`. Lanes are dense indices the sweep evaluator
/// assigns to live slots; they are recycled once a slot retires.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedWord {
    proj: u64,
    high: u64,
}

pub const MAX_LANES: usize = 64;

impl PackedWord {
    pub const IDENTITY: PackedWord = PackedWord { proj: 0, high: 0 };

    pub fn with(self, lane: usize, letter: Letter) -> Self {
        debug_assert!(lane < MAX_LANES);
        let bit = 1u64 << lane;
        let (p, h) = match letter {
            Letter::I => (0, 0),
            Letter::Z => (0, bit),
            Letter::U => (bit, 0),
            Letter::D => (bit, bit),
        };
        PackedWord {
            proj: (self.proj & !bit) | p,
            high: (self.high & !bit) | h,
        }
    }

    pub fn get(self, lane: usize) -> Letter {
        let bit = 1u64 << lane;
        match (self.proj & bit != 0, self.high & bit != 0) {
            (false, false) => Letter::I,
            (false, true) => Letter::Z,
            (true, false) => Letter::U,
            (true, true) => Letter::D,
        }
    }

    /// Resets `lane` to `I`.
    pub fn clear(self, lane: usize) -> Self {
        let keep = !(1u64 << lane);
        PackedWord {
            proj: self.proj & keep,
            high: self.high & keep,
        }
    }

    pub fn is_identity(self) -> bool {
        self.proj == 0 && self.high == 0
    }

    /// Lane-wise product; `None` is the zero matrix.
    #[inline]
    pub fn times(self, other: PackedWord) -> Option<(Sign, PackedWord)> {
        let (p1, h1, p2, h2) = (self.proj, self.high, other.proj, other.high);
        // U·D on a lane.
        if p1 & p2 & (h1 ^ h2) != 0 {
            return None;
        }
        let proj = p1 | p2;
        let high = (h1 & p1) | (h2 & p2) | (!p1 & !p2 & (h1 ^ h2));
        // Z·D contributes -1.
        let neg = ((!p1 & h1) & (p2 & h2)) | ((!p2 & h2) & (p1 & h1));
        let sign = if neg.count_ones() % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Some((sign, PackedWord { proj, high }))
    }
}

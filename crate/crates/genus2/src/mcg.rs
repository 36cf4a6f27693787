//! The action of the five standard twist generators on the fiber group.
//!
//! The fiber surface has genus two; its fundamental group (punctured) is free
//! on `a1..a4`, and each twist generator `D1..D5` acts by an automorphism
//! that rewrites at most two of the four generators:
//!
//! ```text
//! D1: a2 -> a2 a1            D2: a1 -> a1 a2^-1
//! D3: a2 -> a3^-1 a1 a2      and  a4 -> a3^-1 a1 a4
//! D4: a3 -> a3 a4            D5: a4 -> a4 a3^-1
//! ```
//!
//! with all remaining generators fixed. A negative twist applies the inverse
//! substitution (`D1^-1: a2 -> a2 a1^-1`, `D3^-1: a2 -> a1^-1 a3 a2`, ...).

use crate::words::{GroupWord, Letter, Sym, TwistLetter, TwistWord, A1, A2, A3, A4};

/// An endomorphism of the free fiber group, recorded by the images of
/// `a1..a4`. Every value constructed here is an automorphism (each twist
/// substitution is invertible).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceAutomorphism {
    /// `images[i]` is the image of `a(i+1)`.
    pub images: [GroupWord; 4],
}

impl SurfaceAutomorphism {
    pub fn identity() -> SurfaceAutomorphism {
        SurfaceAutomorphism {
            images: [
                GroupWord::single(A1, 1),
                GroupWord::single(A2, 1),
                GroupWord::single(A3, 1),
                GroupWord::single(A4, 1),
            ],
        }
    }

    /// Image of a single fiber generator.
    pub fn image_of(&self, sym: Sym) -> &GroupWord {
        debug_assert!(sym.is_fiber());
        &self.images[sym.0 as usize]
    }

    /// Applies the automorphism to an arbitrary word in the fiber generators,
    /// extending the generator images homomorphically. The result is freely
    /// reduced.
    pub fn apply(&self, word: &GroupWord) -> GroupWord {
        let mut out = Vec::new();
        for &l in &word.letters {
            let img = self.image_of(l.sym);
            if l.exp == 1 {
                out.extend_from_slice(&img.letters);
            } else {
                out.extend(img.letters.iter().rev().map(|x| x.inverse()));
            }
        }
        GroupWord { letters: out }.free_reduce()
    }
}

/// Image of one fiber generator under a single signed twist.
pub fn apply_twist(letter: TwistLetter, sym: Sym) -> GroupWord {
    debug_assert!(sym.is_fiber());
    let e = letter.sign;
    let changed: Option<Vec<Letter>> = match (letter.index, sym) {
        // a2 -> a2 a1^e
        (1, A2) => Some(vec![Letter::new(A2, 1), Letter::new(A1, e)]),
        // a1 -> a1 a2^-e
        (2, A1) => Some(vec![Letter::new(A1, 1), Letter::new(A2, -e)]),
        // a2 -> (a3^-1 a1)^e a2, and the same prefix for a4
        (3, A2) | (3, A4) => {
            let mut prefix = if e == 1 {
                vec![Letter::new(A3, -1), Letter::new(A1, 1)]
            } else {
                vec![Letter::new(A1, -1), Letter::new(A3, 1)]
            };
            prefix.push(Letter::new(sym, 1));
            Some(prefix)
        }
        // a3 -> a3 a4^e
        (4, A3) => Some(vec![Letter::new(A3, 1), Letter::new(A4, e)]),
        // a4 -> a4 a3^-e
        (5, A4) => Some(vec![Letter::new(A4, 1), Letter::new(A3, -e)]),
        _ => None,
    };
    match changed {
        Some(letters) => GroupWord { letters },
        None => GroupWord::single(sym, 1),
    }
}

/// The automorphism of the fiber group induced by a twist word. The leftmost
/// letter of the word is the outermost map: letters are consumed right to
/// left, each rewriting the images accumulated so far.
pub fn automorphism_of(word: &TwistWord) -> SurfaceAutomorphism {
    let mut phi = SurfaceAutomorphism::identity();
    for letter in word.letters().into_iter().rev() {
        let step = SurfaceAutomorphism {
            images: [
                apply_twist(letter, A1),
                apply_twist(letter, A2),
                apply_twist(letter, A3),
                apply_twist(letter, A4),
            ],
        };
        phi = SurfaceAutomorphism {
            images: [
                step.apply(&phi.images[0]),
                step.apply(&phi.images[1]),
                step.apply(&phi.images[2]),
                step.apply(&phi.images[3]),
            ],
        };
    }
    phi
}

/// The four-parameter monodromy family `D2^e2 D1^e1 D3^e3 D4^e4 D5^n`, with
/// the trailing syllable omitted when `n = 0`. Each `eps[i]` must be ±1.
pub fn family_word(eps: [i8; 4], n: i64) -> TwistWord {
    for e in eps {
        assert!(e == 1 || e == -1, "family signs must be +1 or -1");
    }
    let mut syl = vec![
        (2u8, eps[1] as i64),
        (1u8, eps[0] as i64),
        (3u8, eps[2] as i64),
        (4u8, eps[3] as i64),
    ];
    if n != 0 {
        syl.push((5, n));
    }
    TwistWord::from_syllables(&syl)
}

/// The genus-two surface relator `[a1, a2] [a4, a3] = a1 a2 a1^-1 a2^-1 a4 a3 a4^-1 a3^-1`.
pub fn surface_relator() -> GroupWord {
    GroupWord::from_pairs(&[
        (A1, 1),
        (A2, 1),
        (A1, -1),
        (A2, -1),
        (A4, 1),
        (A3, 1),
        (A4, -1),
        (A3, -1),
    ])
}

//! Generator alphabets, star maps, U(1)-weights, and oriented rewrite rules
//! for the fixed family of algebra presentations used throughout the crate:
//!
//! - `suq2`     — quantum SU(2) with generators `a b c d`
//! - `sphere`   — the standard Podles sphere with generators `A B`
//! - `disc`     — the quantum disc with generator `z`
//! - `discext`  — the quantum disc extended by the self-adjoint letter `s`
//!   (the square root of `1 - z z'`), the exact home of the Toeplitz-side
//!   images of SU(2) generators
//! - `circle`   — Laurent polynomials on the circle, generator `u`
//! - `isometry` — the universal isometry `S` with the single relation
//!   `S' S = 1`, the exact home of strong-connection and Bass computations
//!
//! Every rule strictly decreases a weighted degree-lexicographic word order,
//! so rewriting terminates; confluence of each rule set is exercised by the
//! test suite in [`crate::confluence`].

use crate::scalar::QRat;
use std::fmt;
use std::sync::OnceLock;

/// Index of a generator letter inside its presentation's alphabet.
pub type Letter = u8;

/// A word over one presentation's alphabet (the empty word is the unit).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

/// Identifier of a registered presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PresId {
    SuQ2,
    Sphere,
    Disc,
    DiscExt,
    Circle,
    Isometry,
}

impl PresId {
    pub fn name(self) -> &'static str {
        match self {
            PresId::SuQ2 => "suq2",
            PresId::Sphere => "sphere",
            PresId::Disc => "disc",
            PresId::DiscExt => "discext",
            PresId::Circle => "circle",
            PresId::Isometry => "isometry",
        }
    }

    pub fn from_name(name: &str) -> Option<PresId> {
        match name {
            "suq2" => Some(PresId::SuQ2),
            "sphere" => Some(PresId::Sphere),
            "disc" => Some(PresId::Disc),
            "discext" => Some(PresId::DiscExt),
            "circle" => Some(PresId::Circle),
            "isometry" => Some(PresId::Isometry),
            _ => None,
        }
    }

    pub fn all() -> [PresId; 6] {
        [
            PresId::SuQ2,
            PresId::Sphere,
            PresId::Disc,
            PresId::DiscExt,
            PresId::Circle,
            PresId::Isometry,
        ]
    }

    /// The registered presentation data.
    pub fn get(self) -> &'static Presentation {
        registry(self)
    }
}

impl fmt::Display for PresId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Per-letter data: display name, U(1)-weight, degree weight of the
/// termination order, and the image under the star map as a scaled word.
#[derive(Clone, Debug)]
pub struct LetterInfo {
    pub name: &'static str,
    pub weight: i64,
    pub order_degree: u32,
    pub star_coeff: QRat,
    pub star_word: Word,
}

/// An oriented rewrite rule `lhs -> sum of scaled words`.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Vec<(Word, QRat)>,
}

/// A presentation: alphabet plus rewrite rules.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub id: PresId,
    pub letters: Vec<LetterInfo>,
    pub rules: Vec<Rule>,
}

impl Presentation {
    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_name(&self, l: Letter) -> &'static str {
        self.letters[l as usize].name
    }

    pub fn letter_by_name(&self, name: &str) -> Option<Letter> {
        self.letters
            .iter()
            .position(|info| info.name == name)
            .map(|i| i as Letter)
    }

    pub fn word_weight(&self, w: &Word) -> i64 {
        w.0.iter().map(|&l| self.letters[l as usize].weight).sum()
    }

    fn word_degree(&self, w: &Word) -> u64 {
        w.0.iter()
            .map(|&l| self.letters[l as usize].order_degree as u64)
            .sum()
    }

    /// The word order used for termination and canonical printing: weighted
    /// degree first, then lexicographic on letter indices.
    pub fn word_cmp(&self, a: &Word, b: &Word) -> std::cmp::Ordering {
        self.word_degree(a)
            .cmp(&self.word_degree(b))
            .then_with(|| a.0.cmp(&b.0))
    }

    /// Leftmost redex: `(position, rule index)` of the first rule LHS that
    /// occurs as a subword, scanning positions left to right.
    pub fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.0.len() {
            for (ri, rule) in self.rules.iter().enumerate() {
                let l = rule.lhs.0.len();
                if pos + l <= w.0.len() && w.0[pos..pos + l] == rule.lhs.0[..] {
                    return Some((pos, ri));
                }
            }
        }
        None
    }

    /// All redexes of a word, for strategy enumeration.
    pub fn all_redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for pos in 0..w.0.len() {
            for (ri, rule) in self.rules.iter().enumerate() {
                let l = rule.lhs.0.len();
                if pos + l <= w.0.len() && w.0[pos..pos + l] == rule.lhs.0[..] {
                    out.push((pos, ri));
                }
            }
        }
        out
    }

    /// Replace the redex at `pos` by the rule's right-hand side, producing
    /// the scaled words `prefix * rhs * suffix`.
    pub fn apply_rule(&self, w: &Word, pos: usize, rule_idx: usize) -> Vec<(Word, QRat)> {
        let rule = &self.rules[rule_idx];
        let l = rule.lhs.0.len();
        debug_assert_eq!(&w.0[pos..pos + l], &rule.lhs.0[..]);
        rule.rhs
            .iter()
            .map(|(rw, rc)| {
                let mut nw = Vec::with_capacity(w.0.len() - l + rw.0.len());
                nw.extend_from_slice(&w.0[..pos]);
                nw.extend_from_slice(&rw.0);
                nw.extend_from_slice(&w.0[pos + l..]);
                (Word(nw), rc.clone())
            })
            .collect()
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.0.len() {
            let l = w.0[i];
            let mut run = 1;
            while i + run < w.0.len() && w.0[i + run] == l {
                run += 1;
            }
            let name = self.letter_name(l);
            if run == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{}^{}", name, run));
            }
            i += run;
        }
        parts.join(" ")
    }
}

fn w(letters: &[Letter]) -> Word {
    Word(letters.to_vec())
}

fn letter(
    name: &'static str,
    weight: i64,
    order_degree: u32,
    star_coeff: QRat,
    star_word: Word,
) -> LetterInfo {
    LetterInfo {
        name,
        weight,
        order_degree,
        star_coeff,
        star_word,
    }
}

fn rule(lhs: Word, rhs: Vec<(Word, QRat)>) -> Rule {
    Rule { lhs, rhs }
}

fn build_suq2() -> Presentation {
    let one = QRat::one();
    let q = QRat::q_pow(1);
    let qi = QRat::q_pow(-1);
    // Letter order b=0 < c=1 < a=2 < d=3, so the commutation rules push a's
    // and d's toward each other and every word containing both an a and a d
    // eventually contracts through a d -> 1 + q b c or d a -> 1 + q^-1 b c.
    // Normal words are b^j c^k a^i and b^j c^k d^l, a PBW basis. a and d
    // carry order degree 2 so the contraction rules decrease the order.
    let letters = vec![
        letter("b", -1, 1, -&q, w(&[1])),
        letter("c", 1, 1, -&qi, w(&[0])),
        letter("a", 1, 2, one.clone(), w(&[3])),
        letter("d", -1, 2, one.clone(), w(&[2])),
    ];
    let (b, c, a, d) = (0u8, 1u8, 2u8, 3u8);
    let rules = vec![
        rule(w(&[c, b]), vec![(w(&[b, c]), one.clone())]),
        rule(w(&[a, b]), vec![(w(&[b, a]), q.clone())]),
        rule(w(&[a, c]), vec![(w(&[c, a]), q.clone())]),
        rule(w(&[d, b]), vec![(w(&[b, d]), qi.clone())]),
        rule(w(&[d, c]), vec![(w(&[c, d]), qi.clone())]),
        rule(
            w(&[d, a]),
            vec![(Word::empty(), one.clone()), (w(&[b, c]), qi.clone())],
        ),
        rule(
            w(&[a, d]),
            vec![(Word::empty(), one.clone()), (w(&[b, c]), q.clone())],
        ),
    ];
    Presentation {
        id: PresId::SuQ2,
        letters,
        rules,
    }
}

fn build_sphere() -> Presentation {
    let one = QRat::one();
    let q2 = QRat::q_pow(2);
    let q2i = QRat::q_pow(-2);
    let q4 = QRat::q_pow(4);
    // letters: A=0 < B=1 < B'=2; A is self-adjoint.
    let letters = vec![
        letter("A", 0, 1, one.clone(), w(&[0])),
        letter("B", 0, 1, one.clone(), w(&[2])),
        letter("B'", 0, 1, one.clone(), w(&[1])),
    ];
    let rules = vec![
        rule(w(&[1, 0]), vec![(w(&[0, 1]), q2.clone())]),
        rule(w(&[2, 0]), vec![(w(&[0, 2]), q2i)]),
        rule(
            w(&[2, 1]),
            vec![(w(&[0]), one.clone()), (w(&[0, 0]), -&one)],
        ),
        rule(w(&[1, 2]), vec![(w(&[0]), q2.clone()), (w(&[0, 0]), -&q4)]),
    ];
    Presentation {
        id: PresId::Sphere,
        letters,
        rules,
    }
}

fn build_disc() -> Presentation {
    let one = QRat::one();
    let q2 = QRat::q_pow(2);
    // letters: z=0 < z'=1
    let letters = vec![
        letter("z", 1, 1, one.clone(), w(&[1])),
        letter("z'", -1, 1, one.clone(), w(&[0])),
    ];
    let rules = vec![rule(
        w(&[1, 0]),
        vec![(Word::empty(), &one - &q2), (w(&[0, 1]), q2.clone())],
    )];
    Presentation {
        id: PresId::Disc,
        letters,
        rules,
    }
}

fn build_discext() -> Presentation {
    let one = QRat::one();
    let q = QRat::q_pow(1);
    let qi = QRat::q_pow(-1);
    let q2 = QRat::q_pow(2);
    // letters: s=0 < z=1 < z'=2; s is self-adjoint with s^2 = 1 - z z'.
    let letters = vec![
        letter("s", 0, 1, one.clone(), w(&[0])),
        letter("z", 1, 1, one.clone(), w(&[2])),
        letter("z'", -1, 1, one.clone(), w(&[1])),
    ];
    let rules = vec![
        rule(w(&[1, 0]), vec![(w(&[0, 1]), qi)]),
        rule(w(&[2, 0]), vec![(w(&[0, 2]), q)]),
        rule(
            w(&[1, 2]),
            vec![(Word::empty(), one.clone()), (w(&[0, 0]), -&one)],
        ),
        rule(
            w(&[2, 1]),
            vec![(Word::empty(), one.clone()), (w(&[0, 0]), -&q2)],
        ),
    ];
    Presentation {
        id: PresId::DiscExt,
        letters,
        rules,
    }
}

fn build_circle() -> Presentation {
    let one = QRat::one();
    // letters: u=0 < u'=1, a unitary: both products rewrite to 1.
    let letters = vec![
        letter("u", 1, 1, one.clone(), w(&[1])),
        letter("u'", -1, 1, one.clone(), w(&[0])),
    ];
    let rules = vec![
        rule(w(&[0, 1]), vec![(Word::empty(), one.clone())]),
        rule(w(&[1, 0]), vec![(Word::empty(), one.clone())]),
    ];
    Presentation {
        id: PresId::Circle,
        letters,
        rules,
    }
}

fn build_isometry() -> Presentation {
    let one = QRat::one();
    // letters: S=0 < S'=1; only S' S = 1, so S S' is a normal word.
    let letters = vec![
        letter("S", 1, 1, one.clone(), w(&[1])),
        letter("S'", -1, 1, one.clone(), w(&[0])),
    ];
    let rules = vec![rule(w(&[1, 0]), vec![(Word::empty(), one.clone())])];
    Presentation {
        id: PresId::Isometry,
        letters,
        rules,
    }
}

fn registry(id: PresId) -> &'static Presentation {
    static SUQ2: OnceLock<Presentation> = OnceLock::new();
    static SPHERE: OnceLock<Presentation> = OnceLock::new();
    static DISC: OnceLock<Presentation> = OnceLock::new();
    static DISCEXT: OnceLock<Presentation> = OnceLock::new();
    static CIRCLE: OnceLock<Presentation> = OnceLock::new();
    static ISOMETRY: OnceLock<Presentation> = OnceLock::new();
    match id {
        PresId::SuQ2 => SUQ2.get_or_init(build_suq2),
        PresId::Sphere => SPHERE.get_or_init(build_sphere),
        PresId::Disc => DISC.get_or_init(build_disc),
        PresId::DiscExt => DISCEXT.get_or_init(build_discext),
        PresId::Circle => CIRCLE.get_or_init(build_circle),
        PresId::Isometry => ISOMETRY.get_or_init(build_isometry),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn every_rule_strictly_decreases_the_word_order() {
        for id in PresId::all() {
            let p = id.get();
            for rule in &p.rules {
                for (rw, _) in &rule.rhs {
                    assert_eq!(
                        p.word_cmp(rw, &rule.lhs),
                        Ordering::Less,
                        "{}: rhs word {:?} does not decrease below lhs {:?}",
                        id,
                        rw,
                        rule.lhs
                    );
                }
            }
        }
    }

    #[test]
    fn every_rule_is_weight_homogeneous() {
        for id in PresId::all() {
            let p = id.get();
            for rule in &p.rules {
                let lw = p.word_weight(&rule.lhs);
                for (rw, _) in &rule.rhs {
                    assert_eq!(lw, p.word_weight(rw), "{}: rule not homogeneous", id);
                }
            }
        }
    }

    #[test]
    fn star_is_an_involution_on_letters() {
        for id in PresId::all() {
            let p = id.get();
            for l in 0..p.alphabet_size() as Letter {
                let info = &p.letters[l as usize];
                assert_eq!(info.star_word.len(), 1, "letter star images are letters");
                let m = info.star_word.0[0];
                let back = &p.letters[m as usize];
                let coeff = &info.star_coeff * &back.star_coeff;
                assert_eq!(back.star_word.0[0], l);
                assert!(
                    coeff.is_one(),
                    "{}: star not involutive on letter {}",
                    id,
                    l
                );
            }
        }
    }

    #[test]
    fn letter_lookup_round_trips() {
        let p = PresId::SuQ2.get();
        for name in ["a", "b", "c", "d"] {
            let l = p.letter_by_name(name).unwrap();
            assert_eq!(p.letter_name(l), name);
        }
        assert_eq!(p.letter_by_name("x"), None);
    }
}

//! Noncommutative polynomials over a fixed presentation, with normalization
//! to the PBW normal form by oriented rewriting.
//!
//! An [`NCPoly`] is a finite Q(q)-linear combination of words over one
//! presentation's alphabet. Arithmetic is free (no rewriting); [`NCPoly::normalize`]
//! rewrites every term to normal form, and two polynomials represent the
//! same algebra element exactly when their normal forms agree term by term.

use crate::error::{AlgebraError, Result};
use crate::presentation::{Letter, PresId, Word};
use crate::scalar::QRat;
use std::collections::BTreeMap;
use std::fmt;

/// Result of the U(1)-weight of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Homogeneous(i64),
    NonHomogeneous,
}

impl Weight {
    pub fn homogeneous(self) -> Option<i64> {
        match self {
            Weight::Homogeneous(n) => Some(n),
            Weight::NonHomogeneous => None,
        }
    }
}

/// A noncommutative polynomial: finite map from words to nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPoly {
    pres: PresId,
    terms: BTreeMap<Word, QRat>,
}

impl NCPoly {
    pub fn zero(pres: PresId) -> Self {
        NCPoly {
            pres,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: PresId) -> Self {
        NCPoly::scalar(pres, QRat::one())
    }

    pub fn scalar(pres: PresId, c: QRat) -> Self {
        let mut p = NCPoly::zero(pres);
        p.add_term(Word::empty(), c);
        p
    }

    /// A single generator letter by index.
    pub fn letter(pres: PresId, l: Letter) -> Self {
        assert!(
            (l as usize) < pres.get().alphabet_size(),
            "letter {} out of range for {}",
            l,
            pres
        );
        let mut p = NCPoly::zero(pres);
        p.add_term(Word::single(l), QRat::one());
        p
    }

    /// A single generator by display name.
    pub fn generator(pres: PresId, name: &str) -> Result<Self> {
        match pres.get().letter_by_name(name) {
            Some(l) => Ok(NCPoly::letter(pres, l)),
            None => Err(AlgebraError::UnknownGenerator {
                name: name.to_string(),
                algebra: pres,
            }),
        }
    }

    pub fn from_word(pres: PresId, w: Word, c: QRat) -> Self {
        let mut p = NCPoly::zero(pres);
        p.add_term(w, c);
        p
    }

    pub fn presentation(&self) -> PresId {
        self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> QRat {
        self.terms.get(w).cloned().unwrap_or_else(QRat::zero)
    }

    /// Scalar content if the polynomial is a multiple of the empty word.
    pub fn as_scalar(&self) -> Option<QRat> {
        match self.terms.len() {
            0 => Some(QRat::zero()),
            1 => {
                let (w, c) = self.terms.iter().next().unwrap();
                if w.is_empty() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn add_term(&mut self, w: Word, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_pres(&self, other: &NCPoly) {
        assert_eq!(
            self.pres, other.pres,
            "mixed presentations: {} vs {}",
            self.pres, other.pres
        );
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        self.assert_same_pres(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            pres: self.pres,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &QRat) -> NCPoly {
        if s.is_zero() {
            return NCPoly::zero(self.pres);
        }
        NCPoly {
            pres: self.pres,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    /// Free product: concatenates words, no rewriting.
    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        self.assert_same_pres(other);
        let mut out = NCPoly::zero(self.pres);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> NCPoly {
        let mut acc = NCPoly::one(self.pres);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rewrite to the PBW normal form. Idempotent; terminates because every
    /// rule strictly decreases the presentation's word order.
    pub fn normalize(&self) -> NCPoly {
        let pres = self.pres.get();
        let mut out = NCPoly::zero(self.pres);
        let mut stack: Vec<(Word, QRat)> = self
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        while let Some((w, c)) = stack.pop() {
            match pres.find_redex(&w) {
                None => out.add_term(w, c),
                Some((pos, ri)) => {
                    for (nw, nc) in pres.apply_rule(&w, pos, ri) {
                        stack.push((nw, &c * &nc));
                    }
                }
            }
        }
        out
    }

    /// True when every word is already in normal form.
    pub fn is_normal(&self) -> bool {
        let pres = self.pres.get();
        self.terms.keys().all(|w| pres.find_redex(w).is_none())
    }

    /// Normalized product.
    pub fn mul_normalized(&self, other: &NCPoly) -> NCPoly {
        self.mul(other).normalize()
    }

    /// Equality of algebra elements: identical normal forms.
    pub fn equivalent(&self, other: &NCPoly) -> bool {
        self.pres == other.pres && self.normalize() == other.normalize()
    }

    /// Star (adjoint): anti-multiplicative, fixes Q(q) scalars (q is a real
    /// parameter), letters map through the presentation's star table. The
    /// result is normalized.
    pub fn star(&self) -> NCPoly {
        let pres = self.pres.get();
        let mut out = NCPoly::zero(self.pres);
        for (w, c) in &self.terms {
            let mut coeff = c.clone();
            let mut word = Vec::with_capacity(w.len());
            for &l in w.letters().iter().rev() {
                let info = &pres.letters[l as usize];
                coeff = &coeff * &info.star_coeff;
                word.extend_from_slice(&info.star_word.0);
            }
            out.add_term(Word(word), coeff);
        }
        out.normalize()
    }

    /// Common U(1)-weight of the normal form, or `NonHomogeneous`. The zero
    /// polynomial is `NonHomogeneous` by convention.
    pub fn weight(&self) -> Weight {
        let nf = self.normalize();
        let pres = self.pres.get();
        let mut seen: Option<i64> = None;
        if nf.terms.is_empty() {
            return Weight::NonHomogeneous;
        }
        for w in nf.terms.keys() {
            let wt = pres.word_weight(w);
            match seen {
                None => seen = Some(wt),
                Some(s) if s == wt => {}
                Some(_) => return Weight::NonHomogeneous,
            }
        }
        Weight::Homogeneous(seen.unwrap())
    }

    /// Decomposition of the normal form by U(1)-weight.
    pub fn weight_decomposition(&self) -> BTreeMap<i64, NCPoly> {
        let nf = self.normalize();
        let pres = self.pres.get();
        let mut out: BTreeMap<i64, NCPoly> = BTreeMap::new();
        for (w, c) in &nf.terms {
            let wt = pres.word_weight(w);
            out.entry(wt)
                .or_insert_with(|| NCPoly::zero(self.pres))
                .add_term(w.clone(), c.clone());
        }
        out
    }

    /// Canonical text: terms sorted by the presentation's word order, scalars
    /// in canonical Q(q) text, unit coefficients omitted on nonempty words.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let pres = self.pres.get();
        let mut words: Vec<&Word> = self.terms.keys().collect();
        words.sort_by(|a, b| pres.word_cmp(a, b));
        let mut out = String::new();
        for (i, w) in words.iter().enumerate() {
            let c = &self.terms[*w];
            let neg = c.display_is_negative();
            let mag = c.display_magnitude();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if w.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&pres.word_to_string(w));
            } else {
                out.push_str(&mag);
                out.push(' ');
                out.push_str(&pres.word_to_string(w));
            }
        }
        out
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

/// Convenience constructors for frequently used generators.
pub mod gens {
    use super::*;

    fn g(pres: PresId, name: &str) -> NCPoly {
        NCPoly::generator(pres, name).expect("registered generator")
    }

    pub fn a() -> NCPoly {
        g(PresId::SuQ2, "a")
    }
    pub fn b() -> NCPoly {
        g(PresId::SuQ2, "b")
    }
    pub fn c() -> NCPoly {
        g(PresId::SuQ2, "c")
    }
    pub fn d() -> NCPoly {
        g(PresId::SuQ2, "d")
    }
    pub fn s() -> NCPoly {
        g(PresId::DiscExt, "s")
    }
    pub fn z_ext() -> NCPoly {
        g(PresId::DiscExt, "z")
    }
    pub fn z_star_ext() -> NCPoly {
        g(PresId::DiscExt, "z'")
    }
    pub fn z() -> NCPoly {
        g(PresId::Disc, "z")
    }
    pub fn z_star() -> NCPoly {
        g(PresId::Disc, "z'")
    }
    pub fn u() -> NCPoly {
        g(PresId::Circle, "u")
    }
    pub fn u_star() -> NCPoly {
        g(PresId::Circle, "u'")
    }
    /// The circle basis element `u^n` for any integer `n`.
    pub fn u_pow(n: i64) -> NCPoly {
        if n >= 0 {
            u().pow(n as u32)
        } else {
            u_star().pow((-n) as u32)
        }
    }
    pub fn shift() -> NCPoly {
        g(PresId::Isometry, "S")
    }
    pub fn shift_star() -> NCPoly {
        g(PresId::Isometry, "S'")
    }
}

#[cfg(test)]
mod tests {
    use super::gens::*;
    use super::*;

    fn q() -> QRat {
        QRat::q_pow(1)
    }

    #[test]
    fn relation_ad_minus_qbc_normalizes_to_one() {
        let x = a().mul(&d()).sub(&b().mul(&c()).scale(&q()));
        assert_eq!(x.normalize(), NCPoly::one(PresId::SuQ2));
    }

    #[test]
    fn redundant_relation_da_minus_qinv_bc_normalizes_to_one() {
        let x = d().mul(&a()).sub(&b().mul(&c()).scale(&QRat::q_pow(-1)));
        assert_eq!(x.normalize(), NCPoly::one(PresId::SuQ2));
    }

    #[test]
    fn normalize_is_idempotent_and_fixes_one() {
        let x = d().mul(&a()).mul(&b());
        let n1 = x.normalize();
        assert_eq!(n1.normalize(), n1);
        assert_eq!(
            NCPoly::one(PresId::SuQ2).normalize(),
            NCPoly::one(PresId::SuQ2)
        );
    }

    #[test]
    fn normal_form_of_dab() {
        // d a b = b + q^-1 b^2 c, frozen from exhaustive strategy agreement
        // (see confluence tests).
        let x = d().mul(&a()).mul(&b()).normalize();
        let expect = b().add(&b().pow(2).mul(&c()).scale(&QRat::q_pow(-1)));
        assert_eq!(x, expect);
        assert_eq!(x.to_canonical_string(), "b + q^-1 b^2 c");
    }

    #[test]
    fn star_on_generators_matches_the_involution() {
        assert_eq!(a().star(), d());
        assert_eq!(b().star(), c().scale(&-&q()));
        assert_eq!(star_of_star(&b()), b());
        fn star_of_star(x: &NCPoly) -> NCPoly {
            x.star().star()
        }
    }

    #[test]
    fn star_is_anti_multiplicative() {
        // star(a b) = star(b) star(a) = -q c d, already a normal word
        let lhs = a().mul(&b()).star();
        let rhs = b().star().mul(&a().star()).normalize();
        assert_eq!(lhs, rhs);
        let expect = c().mul(&d()).scale(&-&q()).normalize();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn weights_of_generators_and_products() {
        assert_eq!(a().weight(), Weight::Homogeneous(1));
        assert_eq!(b().mul(&c()).weight(), Weight::Homogeneous(0));
        assert_eq!(a().add(&b()).weight(), Weight::NonHomogeneous);
        assert_eq!(NCPoly::zero(PresId::SuQ2).weight(), Weight::NonHomogeneous);
    }

    #[test]
    fn disc_relation_holds_in_the_extended_presentation() {
        // z' z - q^2 z z' = 1 - q^2 after eliminating s
        let lhs = z_star_ext()
            .mul(&z_ext())
            .sub(&z_ext().mul(&z_star_ext()).scale(&QRat::q_pow(2)));
        let rhs = NCPoly::scalar(PresId::DiscExt, &QRat::one() - &QRat::q_pow(2));
        assert_eq!(lhs.normalize(), rhs);
    }

    #[test]
    fn sphere_relations_are_consistent_with_the_suq2_embedding() {
        // A = -q^-1 b c, B = -b a; the commutation B A = q^2 A B holds in
        // SU_q(2), and so do both B'B and BB' relations.
        let a_img = b().mul(&c()).scale(&-&QRat::q_pow(-1));
        let b_img = b().mul(&a()).neg();
        let lhs = b_img.mul(&a_img).normalize();
        let rhs = a_img.mul(&b_img).scale(&QRat::q_pow(2)).normalize();
        assert_eq!(lhs, rhs);

        let bsb = b_img.star().mul(&b_img).normalize();
        let expect = a_img.sub(&a_img.mul(&a_img)).normalize();
        assert_eq!(bsb, expect);

        let bbs = b_img.mul(&b_img.star()).normalize();
        let expect2 = a_img
            .scale(&QRat::q_pow(2))
            .sub(&a_img.mul(&a_img).scale(&QRat::q_pow(4)))
            .normalize();
        assert_eq!(bbs, expect2);
    }

    #[test]
    fn sphere_presentation_relations_normalize_to_zero() {
        let p = PresId::Sphere;
        let a = NCPoly::letter(p, 0);
        let b = NCPoly::letter(p, 1);
        let bs = NCPoly::letter(p, 2);
        // B A = q^2 A B
        let r1 = b.mul(&a).sub(&a.mul(&b).scale(&QRat::q_pow(2)));
        assert!(r1.normalize().is_zero());
        // B' B = A - A^2
        let r2 = bs.mul(&b).sub(&a.sub(&a.pow(2)));
        assert!(r2.normalize().is_zero());
        // B B' = q^2 A - q^4 A^2
        let r3 = b.mul(&bs).sub(
            &a.scale(&QRat::q_pow(2))
                .sub(&a.pow(2).scale(&QRat::q_pow(4))),
        );
        assert!(r3.normalize().is_zero());
        // star of the commutation: A B' = q^2 B' A
        let r4 = a.mul(&bs).sub(&bs.mul(&a).scale(&QRat::q_pow(2)));
        assert!(r4.normalize().is_zero());
    }

    #[test]
    fn isometry_leaves_ss_star_alone() {
        let p = shift().mul(&shift_star()).normalize();
        assert_eq!(p.num_terms(), 1);
        let q = shift_star().mul(&shift()).normalize();
        assert_eq!(q, NCPoly::one(PresId::Isometry));
    }

    #[test]
    fn circle_words_collapse_to_powers() {
        let x = u().mul(&u_star()).mul(&u()).normalize();
        assert_eq!(x, u());
        assert_eq!(u_pow(-3).normalize(), u_star().pow(3));
    }

    #[test]
    fn canonical_text_examples() {
        assert_eq!(NCPoly::zero(PresId::SuQ2).to_canonical_string(), "0");
        assert_eq!(NCPoly::one(PresId::SuQ2).to_canonical_string(), "1");
        // b precedes a in the word order (a carries order degree 2)
        let x = a().sub(&b().scale(&q()));
        assert_eq!(x.to_canonical_string(), "-q b + a");
        let y = b().pow(2).mul(&c()).scale(&QRat::q_pow(-1));
        assert_eq!(y.to_canonical_string(), "q^-1 b^2 c");
    }

    #[test]
    fn unknown_generator_is_reported() {
        let err = NCPoly::generator(PresId::Disc, "a").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown generator"), "{}", msg);
        assert!(msg.contains("disc"), "{}", msg);
    }
}

//! Confluence and termination harness for the registered rewrite systems.
//!
//! Rule sets ship fixed (no user completion), so soundness is established by
//! testing: for every word up to a length bound, every one-step reduction
//! choice must normalize to the same PBW normal form. Together with the
//! strictly decreasing word order this gives confluence on the checked
//! fragment by Newman's lemma; rules never lengthen words, so intermediate
//! words stay inside the checked fragment.

use crate::ncpoly::NCPoly;
use crate::par::{map_collect, Parallelism};
use crate::presentation::{Letter, PresId, Word};
use serde::Serialize;

/// A word whose reduction strategies disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Divergence {
    pub word: String,
    pub strategy_a: String,
    pub strategy_b: String,
}

/// Outcome of a confluence sweep over one presentation.
#[derive(Clone, Debug, Serialize)]
pub struct ConfluenceReport {
    pub presentation: String,
    pub max_len: usize,
    pub words_checked: usize,
    pub exhaustive: bool,
    pub divergences: Vec<Divergence>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.divergences.is_empty()
    }
}

fn enumerate_words(alphabet: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * alphabet);
        for w in &frontier {
            for l in 0..alphabet as Letter {
                let mut v = w.0.clone();
                v.push(l);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Deterministic sub-sample when the word count exceeds `samples`:
/// a fixed-stride selection, so reports are reproducible.
fn select_words(mut words: Vec<Word>, samples: usize) -> (Vec<Word>, bool) {
    if samples == 0 || words.len() <= samples {
        return (words, true);
    }
    let stride = words.len() / samples;
    let picked = words
        .drain(..)
        .step_by(stride.max(1))
        .take(samples)
        .collect();
    (picked, false)
}

fn check_word(pres: PresId, w: &Word) -> Option<Divergence> {
    let p = pres.get();
    let base = NCPoly::from_word(pres, w.clone(), crate::scalar::QRat::one());
    let reference = base.normalize();
    for (pos, ri) in p.all_redexes(w) {
        let mut acc = NCPoly::zero(pres);
        for (nw, nc) in p.apply_rule(w, pos, ri) {
            acc = acc.add(&NCPoly::from_word(pres, nw, nc));
        }
        let reduct = acc.normalize();
        if reduct != reference {
            return Some(Divergence {
                word: p.word_to_string(w),
                strategy_a: reference.to_canonical_string(),
                strategy_b: reduct.to_canonical_string(),
            });
        }
    }
    None
}

/// Check that all reduction strategies agree on every word of length at most
/// `max_len` (exhaustively when the word count allows, else a deterministic
/// sample of `samples` words).
pub fn check_confluence(pres: PresId, max_len: usize, samples: usize) -> ConfluenceReport {
    check_confluence_with(pres, max_len, samples, Parallelism::auto())
}

/// Same as [`check_confluence`] with an explicit parallelism strategy; the
/// report is identical either way.
pub fn check_confluence_with(
    pres: PresId,
    max_len: usize,
    samples: usize,
    par: Parallelism,
) -> ConfluenceReport {
    assert!(max_len >= 3, "confluence sweeps need max_len >= 3");
    let alphabet = pres.get().alphabet_size();
    let (words, exhaustive) = select_words(enumerate_words(alphabet, max_len), samples);
    let words_checked = words.len();
    let results = map_collect(par, words, |w| check_word(pres, &w));
    let divergences: Vec<Divergence> = results.into_iter().flatten().collect();
    ConfluenceReport {
        presentation: pres.name().to_string(),
        max_len,
        words_checked,
        exhaustive,
        divergences,
    }
}

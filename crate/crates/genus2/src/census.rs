//! Census of monodromy words: canonical representatives under a documented
//! equivalence, per-bundle classification records, exhaustive enumeration,
//! and the seeded random search.
//!
//! The equivalence is generated by five moves on letter sequences, each of
//! which preserves the bundle up to homeomorphism:
//!
//! * (a) free cancellation of an adjacent `Di Di^-1` pair;
//! * (b) cyclic rotation by one letter (conjugating the monodromy);
//! * (c) swapping adjacent letters `Di Dj` with `|i-j| >= 2` (twists along
//!   disjoint curves commute);
//! * (d) the chain flip `i -> 6-i` (a symmetry of the twist configuration);
//! * (e) reversal with all exponents negated (the inverse monodromy).
//!
//! This relation is deliberately coarser than full mapping-class-group
//! conjugacy (no braid moves, no conjugacy solver): it never merges words
//! that could present different bundles, but may list several
//! representatives of the same bundle.

use crate::presentation::FiberType;
use crate::simplify::{certify_bundle, Budgets, RankStatus};
use crate::words::{TwistLetter, TwistWord};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use thiserror::Error;

/// Orbit-size cap for canonicalization; orbits larger than this are not
/// fully explored and the input word is returned unchanged, flagged.
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

/// Exhaustive enumeration is capped at this word length.
pub const ENUMERATION_MAX_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("exhaustive enumeration allows lengths 1..={ENUMERATION_MAX_LEN}, got {0}")]
    LengthCap(usize),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

/// Result of canonicalization. When `canonical` is false the orbit hit the
/// size cap and `word` is the unchanged input rather than a true least
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub word: TwistWord,
    pub canonical: bool,
}

fn seq_cmp(a: &[TwistLetter], b: &[TwistLetter]) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().map(|l| l.rank()).cmp(b.iter().map(|l| l.rank())))
}

/// All single-move neighbors of a letter sequence.
fn neighbors(state: &[TwistLetter]) -> Vec<Vec<TwistLetter>> {
    let n = state.len();
    let mut out = Vec::new();
    // (a) free cancellation
    for i in 0..n.saturating_sub(1) {
        if state[i + 1] == state[i].inverse() {
            let mut next = Vec::with_capacity(n - 2);
            next.extend_from_slice(&state[..i]);
            next.extend_from_slice(&state[i + 2..]);
            out.push(next);
        }
    }
    // (b) cyclic rotation by one letter
    if n >= 2 {
        let mut next = state[1..].to_vec();
        next.push(state[0]);
        out.push(next);
    }
    // (c) far commutation
    for i in 0..n.saturating_sub(1) {
        if (state[i].index as i8 - state[i + 1].index as i8).abs() >= 2 {
            let mut next = state.to_vec();
            next.swap(i, i + 1);
            out.push(next);
        }
    }
    // (d) chain flip
    if n > 0 {
        out.push(state.iter().map(|l| TwistLetter::new(6 - l.index, l.sign)).collect());
    }
    // (e) reversal with negated exponents
    if n > 0 {
        out.push(state.iter().rev().map(|l| l.inverse()).collect());
    }
    out
}

enum OrbitOutcome {
    /// Full orbit explored; holds the least member.
    Complete(Vec<TwistLetter>),
    /// Early exit: some member is smaller than the input.
    SmallerFound,
    /// Orbit larger than the cap.
    CapExceeded,
}

fn orbit_scan(input: &[TwistLetter], cap: usize, stop_on_smaller: bool) -> OrbitOutcome {
    let mut visited: HashSet<Vec<TwistLetter>> = HashSet::new();
    let mut queue: VecDeque<Vec<TwistLetter>> = VecDeque::new();
    visited.insert(input.to_vec());
    queue.push_back(input.to_vec());
    let mut least = input.to_vec();

    while let Some(state) = queue.pop_front() {
        for next in neighbors(&state) {
            if visited.contains(&next) {
                continue;
            }
            if seq_cmp(&next, &least) == Ordering::Less {
                least = next.clone();
                if stop_on_smaller {
                    return OrbitOutcome::SmallerFound;
                }
            }
            if visited.len() >= cap {
                return OrbitOutcome::CapExceeded;
            }
            visited.insert(next.clone());
            queue.push_back(next);
        }
    }
    OrbitOutcome::Complete(least)
}

/// Least representative of the word's equivalence orbit, exploring at most
/// `cap` orbit members.
pub fn canonicalize_with_cap(word: &TwistWord, cap: usize) -> CanonicalForm {
    match orbit_scan(&word.letters(), cap, false) {
        OrbitOutcome::Complete(least) => {
            CanonicalForm { word: TwistWord::from_letters(&least), canonical: true }
        }
        OrbitOutcome::SmallerFound => unreachable!("not requested"),
        OrbitOutcome::CapExceeded => CanonicalForm { word: word.clone(), canonical: false },
    }
}

pub fn canonicalize(word: &TwistWord) -> CanonicalForm {
    canonicalize_with_cap(word, DEFAULT_ORBIT_CAP)
}

/// All canonical forms of nonempty words of length ≤ `max_len`, sorted.
/// Every canonical form is its own canonical representative, so the set is
/// found by enumerating freely reduced, commutation-ordered sequences and
/// keeping those that are least in their orbit. The empty form appears once
/// cancelling words are in range (length ≥ 2). Words whose orbit exceeds the
/// cap are kept conservatively (duplicates are possible there, merges are
/// not).
pub fn enumerate_words(max_len: usize) -> Result<Vec<TwistWord>, CensusError> {
    if !(1..=ENUMERATION_MAX_LEN).contains(&max_len) {
        return Err(CensusError::LengthCap(max_len));
    }
    let alphabet: Vec<TwistLetter> = (1..=5)
        .flat_map(|i| [TwistLetter::new(i, 1), TwistLetter::new(i, -1)])
        .collect();
    let mut out: BTreeSet<TwistWord> = BTreeSet::new();
    if max_len >= 2 {
        out.insert(TwistWord::empty());
    }

    let mut prefix: Vec<TwistLetter> = Vec::with_capacity(max_len);
    fn rec(
        prefix: &mut Vec<TwistLetter>,
        max_len: usize,
        alphabet: &[TwistLetter],
        out: &mut BTreeSet<TwistWord>,
    ) {
        if !prefix.is_empty() {
            match orbit_scan(prefix, DEFAULT_ORBIT_CAP, true) {
                OrbitOutcome::SmallerFound => {} // not canonical
                OrbitOutcome::Complete(least) => {
                    if least == *prefix {
                        out.insert(TwistWord::from_letters(prefix));
                    }
                }
                OrbitOutcome::CapExceeded => {
                    out.insert(TwistWord::from_letters(prefix));
                }
            }
        }
        if prefix.len() == max_len {
            return;
        }
        for &l in alphabet {
            if let Some(&last) = prefix.last() {
                // A canonical word is freely reduced and has its far-commuting
                // neighbors in order; prune everything else.
                if l == last.inverse() {
                    continue;
                }
                if (last.index as i8 - l.index as i8).abs() >= 2 && l.rank() < last.rank() {
                    continue;
                }
            }
            prefix.push(l);
            rec(prefix, max_len, alphabet, out);
            prefix.pop();
        }
    }
    rec(&mut prefix, max_len, &alphabet, &mut out);
    Ok(out.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Classification records
// ---------------------------------------------------------------------------

/// One classified bundle: the canonical monodromy word plus homology and
/// rank data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub word: TwistWord,
    pub fiber: FiberType,
    pub beta1: usize,
    pub torsion: Vec<BigInt>,
    pub rank_lower: usize,
    pub rank_upper: usize,
    pub rank_status: RankStatus,
}

impl CensusRecord {
    fn torsion_strings(&self) -> Vec<String> {
        self.torsion.iter().map(|d| d.to_string()).collect()
    }
}

impl Serialize for CensusRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            word: &'a TwistWord,
            fiber: FiberType,
            beta1: usize,
            torsion: Vec<String>,
            rank_lower: usize,
            rank_upper: usize,
            rank_status: RankStatus,
        }
        Wire {
            word: &self.word,
            fiber: self.fiber,
            beta1: self.beta1,
            torsion: self.torsion_strings(),
            rank_lower: self.rank_lower,
            rank_upper: self.rank_upper,
            rank_status: self.rank_status,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CensusRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            word: TwistWord,
            fiber: FiberType,
            beta1: usize,
            torsion: Vec<String>,
            rank_lower: usize,
            rank_upper: usize,
            rank_status: RankStatus,
        }
        let w = Wire::deserialize(d)?;
        let torsion = w
            .torsion
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CensusRecord {
            word: w.word,
            fiber: w.fiber,
            beta1: w.beta1,
            torsion,
            rank_lower: w.rank_lower,
            rank_upper: w.rank_upper,
            rank_status: w.rank_status,
        })
    }
}

fn record_cmp(a: &CensusRecord, b: &CensusRecord) -> Ordering {
    a.word
        .cmp(&b.word)
        .then_with(|| a.fiber.label().cmp(b.fiber.label()))
        .then_with(|| a.beta1.cmp(&b.beta1))
        .then_with(|| a.torsion.cmp(&b.torsion))
        .then_with(|| a.rank_lower.cmp(&b.rank_lower))
        .then_with(|| a.rank_upper.cmp(&b.rank_upper))
        .then_with(|| a.rank_status.label().cmp(b.rank_status.label()))
}

/// Classifies one bundle: canonical word, homology, and rank bounds.
pub fn classify_with_cap(
    word: &TwistWord,
    fiber: FiberType,
    budgets: &Budgets,
    orbit_cap: usize,
) -> CensusRecord {
    let canonical = canonicalize_with_cap(word, orbit_cap).word;
    let cert = certify_bundle(word, fiber, budgets);
    CensusRecord {
        word: canonical,
        fiber,
        beta1: cert.certificate.homology.beta1,
        torsion: cert.certificate.homology.torsion.clone(),
        rank_lower: cert.certificate.lower,
        rank_upper: cert.certificate.upper,
        rank_status: cert.certificate.status,
    }
}

pub fn classify(word: &TwistWord, fiber: FiberType, budgets: &Budgets) -> CensusRecord {
    classify_with_cap(word, fiber, budgets, DEFAULT_ORBIT_CAP)
}

/// Classifies a batch in parallel (inherits the ambient rayon pool) and
/// sorts the records into canonical-word order, so output is deterministic
/// regardless of scheduling.
pub fn classify_all(
    words: &[TwistWord],
    fiber: FiberType,
    budgets: &Budgets,
    orbit_cap: usize,
) -> Vec<CensusRecord> {
    let mut records: Vec<CensusRecord> = words
        .par_iter()
        .map(|w| classify_with_cap(w, fiber, budgets, orbit_cap))
        .collect();
    records.sort_by(record_cmp);
    records
}

// ---------------------------------------------------------------------------
// Random search
// ---------------------------------------------------------------------------

/// Deterministic sample of `count` monodromy words: lengths uniform in
/// `1..=max_len`, letters uniform over the ten `Di^±1` (in the fixed letter
/// order), then syllable normalization — which may cancel a word down to
/// empty (the trivial monodromy; still a valid bundle).
pub fn sample_words(count: usize, max_len: usize, seed: u64) -> Vec<TwistWord> {
    assert!(max_len >= 1, "max_len must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let len = rng.gen_range(1..=max_len);
        let letters: Vec<TwistLetter> = (0..len)
            .map(|_| {
                let k: u8 = rng.gen_range(0..10);
                TwistLetter::new(k / 2 + 1, if k % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        out.push(TwistWord::from_letters(&letters));
    }
    out
}

/// The seeded random census: sample, classify, sort.
pub fn random_search(
    count: usize,
    max_len: usize,
    seed: u64,
    fiber: FiberType,
    budgets: &Budgets,
    orbit_cap: usize,
) -> Vec<CensusRecord> {
    classify_all(&sample_words(count, max_len, seed), fiber, budgets, orbit_cap)
}

/// How many records are certified rank-two (the search's target hits).
pub fn rank_two_count(records: &[CensusRecord]) -> usize {
    records
        .iter()
        .filter(|r| r.rank_status == RankStatus::Exact && r.rank_upper == 2)
        .count()
}

// ---------------------------------------------------------------------------
// Output formats
// ---------------------------------------------------------------------------

pub const CSV_HEADER: [&str; 7] =
    ["word", "fiber", "beta1", "torsion", "rank_lower", "rank_upper", "rank_status"];

pub fn write_csv<W: std::io::Write>(records: &[CensusRecord], out: W) -> Result<(), CensusError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.word.to_string(),
            r.fiber.label().to_string(),
            r.beta1.to_string(),
            r.torsion_strings().join(";"),
            r.rank_lower.to_string(),
            r.rank_upper.to_string(),
            r.rank_status.label().to_string(),
        ])?;
    }
    w.flush().map_err(CensusError::Io)?;
    Ok(())
}

pub fn write_jsonl<W: std::io::Write>(
    records: &[CensusRecord],
    mut out: W,
) -> Result<(), CensusError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The built-in reference table
// ---------------------------------------------------------------------------

/// Expected invariants for the thirty built-in monodromy words. A rank value
/// of 2 is a certified two-generator claim; 3 marks entries recorded as
/// upper-bound data only.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub word: TwistWord,
    pub rank_closed: u32,
    pub beta1_closed: usize,
    pub rank_punctured: u32,
    pub beta1_punctured: usize,
}

pub fn table1_rows() -> Vec<Table1Row> {
    let raw = include_str!("../data/table1.csv");
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(raw.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec.expect("built-in table is well-formed");
            Table1Row {
                word: TwistWord::parse(&rec[0]).expect("built-in word parses"),
                rank_closed: rec[1].parse().expect("rank_closed"),
                beta1_closed: rec[2].parse().expect("beta1_closed"),
                rank_punctured: rec[3].parse().expect("rank_punctured"),
                beta1_punctured: rec[4].parse().expect("beta1_punctured"),
            }
        })
        .collect()
}

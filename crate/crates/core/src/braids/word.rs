use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BraidError;

/// Artin generator `s_index^sign`: the strands at positions `index` and `index + 1`
/// (1-based) exchange; `sign = +1` is the counterclockwise half twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[i64; 2]", try_from = "[i64; 2]")]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

impl Letter {
    pub fn new(index: usize, sign: i8) -> Self {
        Self { index, sign }
    }

    pub fn inverse(self) -> Self {
        Self { sign: -self.sign, ..self }
    }
}

impl From<Letter> for [i64; 2] {
    fn from(l: Letter) -> Self {
        [l.index as i64, l.sign as i64]
    }
}

impl TryFrom<[i64; 2]> for Letter {
    type Error = BraidError;
    fn try_from(v: [i64; 2]) -> Result<Self, Self::Error> {
        if v[0] < 1 || (v[1] != 1 && v[1] != -1) {
            return Err(BraidError::InvalidLetter { index: v[0].max(0) as usize, n: 0 });
        }
        Ok(Letter::new(v[0] as usize, v[1] as i8))
    }
}

/// Word in the Artin generators of the braid group on `n` strands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    n: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self, BraidError> {
        for l in &letters {
            if l.index == 0 || l.index >= n || l.sign.abs() != 1 {
                return Err(BraidError::InvalidLetter { index: l.index, n });
            }
        }
        Ok(Self { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, letters: Vec::new() }
    }

    /// Word from `(index, sign)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, i8)]) -> Result<Self, BraidError> {
        Self::new(n, pairs.iter().map(|&(i, s)| Letter::new(i, s)).collect())
    }

    pub fn generator(n: usize, index: usize, sign: i8) -> Result<Self, BraidError> {
        Self::new(n, vec![Letter::new(index, sign)])
    }

    /// Pure braid generator `A_ij^sign` (1 <= i < j <= n):
    /// `s_{j-1} ... s_{i+1} s_i^2 s_{i+1}^-1 ... s_{j-1}^-1`.
    pub fn full_twist(n: usize, i: usize, j: usize, sign: i8) -> Result<Self, BraidError> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if i == 0 || j > n || i == j {
            return Err(BraidError::InvalidLetter { index: j, n });
        }
        let mut letters = Vec::new();
        for k in (i + 1..j).rev() {
            letters.push(Letter::new(k, 1));
        }
        letters.push(Letter::new(i, 1));
        letters.push(Letter::new(i, 1));
        for k in i + 1..j {
            letters.push(Letter::new(k, -1));
        }
        let w = Self { n, letters };
        Ok(if sign < 0 { w.inverse() } else { w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free reduction: cancels adjacent `s_i^e s_i^-e` pairs.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { n: self.n, letters: out }
    }

    pub fn inverse(&self) -> Self {
        Self { n: self.n, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Letters of `self` followed by those of `next`, unreduced.
    pub fn then(&self, next: &BraidWord) -> Result<Self, BraidError> {
        if self.n != next.n {
            return Err(BraidError::StrandMismatch { left: self.n, right: next.n });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&next.letters);
        Ok(Self { n: self.n, letters })
    }

    /// `k`-th power for `k >= 0`; negative powers use the inverse.
    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Self { n: self.n, letters }
    }

    /// `perm[i]` is the final position of the strand starting at position `i` (0-based).
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.n).collect();
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut perm = vec![0; self.n];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign as i64).sum()
    }

    /// Signed crossing counts between strands, labeled by starting position;
    /// entry `[i][j]` is twice the linking number of strands `i` and `j` (0-based).
    pub fn crossing_counts(&self) -> Vec<Vec<i64>> {
        let mut at: Vec<usize> = (0..self.n).collect();
        let mut counts = vec![vec![0i64; self.n]; self.n];
        for l in &self.letters {
            let (a, b) = (at[l.index - 1], at[l.index]);
            counts[a][b] += l.sign as i64;
            counts[b][a] += l.sign as i64;
            at.swap(l.index - 1, l.index);
        }
        counts
    }

    /// Half the signed crossing count of strands `i` and `j` (1-based labels).
    pub fn linking_number(&self, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i > self.n || j > self.n || i == j {
            return 0.0;
        }
        self.crossing_counts()[i - 1][j - 1] as f64 / 2.0
    }

    /// JSON array of `[index, sign]` pairs.
    pub fn to_json_array(&self) -> String {
        serde_json::to_string(&self.letters).expect("letters serialize")
    }

    pub fn from_json_array(n: usize, json: &str) -> Result<Self, BraidError> {
        let letters: Vec<Letter> = serde_json::from_str(json).map_err(|e| BraidError::Parse(e.to_string()))?;
        Self::new(n, letters)
    }

    /// Parses the compact text form with an explicit strand count.
    pub fn parse_with_strands(text: &str, n: usize) -> Result<Self, BraidError> {
        let letters = parse_letters(text)?;
        Self::new(n, letters)
    }
}

fn parse_letters(text: &str) -> Result<Vec<Letter>, BraidError> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let bad = || BraidError::Parse(format!("malformed letter {token:?}"));
        let rest = token.strip_prefix('s').ok_or_else(bad)?;
        let (idx, sign) = match rest.split_once('^') {
            Some((i, "-1")) => (i, -1),
            Some((i, "1")) => (i, 1),
            Some(_) => return Err(bad()),
            None => (rest, 1),
        };
        let index: usize = idx.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        letters.push(Letter::new(index, sign));
    }
    Ok(letters)
}

impl FromStr for BraidWord {
    type Err = BraidError;

    /// Parses `"s1 s2^-1 s3"`; the strand count is one more than the largest index
    /// (at least 2).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let letters = parse_letters(text)?;
        let n = letters.iter().map(|l| l.index + 1).max().unwrap_or(2).max(2);
        Self::new(n, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if l.sign > 0 {
                write!(f, "s{}", l.index)?;
            } else {
                write!(f, "s{}^-1", l.index)?;
            }
        }
        Ok(())
    }
}

/// `compose(a, b)` is `a` after `b`: the letters of `b` followed by those of `a`,
/// freely reduced. This matches the product `gamma(g, f(x)) . gamma(f, x)`.
pub fn braid_compose(a: &BraidWord, b: &BraidWord) -> Result<BraidWord, BraidError> {
    Ok(b.then(a)?.reduce())
}

pub fn braid_inverse(a: &BraidWord) -> BraidWord {
    a.inverse().reduce()
}

/// Positive permutation braid that carries the strand at position `p` to position
/// `target[p]` (bubble sort, each swap one positive letter).
pub fn permutation_braid(target: &[usize]) -> BraidWord {
    let n = target.len();
    // arr[q] = starting position of the strand now at position q.
    let mut arr: Vec<usize> = (0..n).collect();
    let mut letters = Vec::new();
    loop {
        let mut swapped = false;
        for q in 0..n.saturating_sub(1) {
            if target[arr[q]] > target[arr[q + 1]] {
                arr.swap(q, q + 1);
                letters.push(Letter::new(q + 1, 1));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    BraidWord { n, letters }
}

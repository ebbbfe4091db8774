#![allow(dead_code)]

pub mod seifert;

use paramorphism::braids::{BraidWord, Letter};

/// Every word of exactly `len` letters in `B_n`.
pub fn all_words(n: usize, len: usize) -> Vec<BraidWord> {
    let gens: Vec<Letter> = (1..n).flat_map(|i| [Letter::new(i, 1), Letter::new(i, -1)]).collect();
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|prefix: Vec<Letter>| {
                gens.iter().map(move |g| {
                    let mut next = prefix.clone();
                    next.push(*g);
                    next
                })
            })
            .collect();
    }
    words.into_iter().map(|l| BraidWord::new(n, l).unwrap()).collect()
}

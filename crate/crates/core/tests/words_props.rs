mod common;

use std::collections::BTreeSet;

use fsword::words::{
    complement, conjugates, find_squares, first_forbidden_circular_square, is_circular_fs, is_circular_square_free,
    is_fs_word, is_square_free, least_rotation, project_to_ternary, CircularWord, Word, BINARY, QUATERNARY,
};
use proptest::prelude::*;

use common::*;

fn binary_word(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 0..=max_len)
}

fn word_over(k: u8, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..k, 0..=max_len)
}

#[test]
fn linear_fs_matches_oracle_up_to_14() {
    for len in 0..=14 {
        for bits in 0..1u64 << len {
            let w = bits_to_word(bits, len);
            let word = Word::new(BINARY, w.clone()).unwrap();
            assert_eq!(is_fs_word(&word).unwrap(), naive_fs(&w), "{word}");
        }
    }
}

#[test]
fn circular_fs_matches_conjugate_oracle_up_to_14() {
    for len in 0..=14 {
        for bits in 0..1u64 << len {
            let w = bits_to_word(bits, len);
            let cw = CircularWord::new(Word::new(BINARY, w.clone()).unwrap());
            assert_eq!(is_circular_fs(&cw).unwrap(), naive_circular_fs(&w), "{cw}");
            assert_eq!(is_circular_square_free(&cw), naive_circular_square_free(&w));
        }
    }
}

#[test]
fn least_rotation_matches_naive_up_to_20() {
    for len in 1..=20usize {
        let step = if len <= 14 { 1 } else { 37 };
        for bits in (0..1u64 << len).step_by(step) {
            let w = bits_to_word(bits, len);
            let s = least_rotation(&w);
            let booth: Vec<u8> = w[s..].iter().chain(&w[..s]).copied().collect();
            assert_eq!(booth, naive_least_rotation(&w));
        }
    }
}

proptest! {
    #[test]
    fn rotation_invariance(w in word_over(3, 24), shift in 0usize..64) {
        let word = Word::new(fsword::words::TERNARY, w.clone()).unwrap();
        let rotated = word.rotate(shift);
        let a = CircularWord::new(word);
        let b = CircularWord::new(rotated);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(is_circular_square_free(&a), is_circular_square_free(&b));
        prop_assert_eq!(a.representative().symbols().to_vec(), naive_least_rotation(&w));
    }

    #[test]
    fn binary_rotation_invariance(w in binary_word(30), shift in 0usize..64) {
        let word = Word::new(BINARY, w).unwrap();
        let a = CircularWord::new(word.clone());
        let b = CircularWord::new(word.rotate(shift));
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(is_circular_fs(&a).unwrap(), is_circular_fs(&b).unwrap());
    }

    #[test]
    fn find_squares_is_complete(w in word_over(4, 30)) {
        let word = Word::new(QUATERNARY, w.clone()).unwrap();
        let found: BTreeSet<(usize, usize)> = find_squares(&word).iter().map(|s| (s.index, s.period)).collect();
        prop_assert_eq!(&found, &naive_squares(&w));
        for s in find_squares(&word) {
            prop_assert_eq!(s.root.len(), s.period);
            prop_assert_eq!(word.factor(s.index - 1, s.period), s.root.clone());
            prop_assert_eq!(word.factor(s.index - 1 + s.period, s.period), s.root);
        }
        prop_assert_eq!(is_square_free(&word), found.is_empty());
    }

    #[test]
    fn binary_find_squares_is_complete(w in binary_word(30)) {
        let word = Word::new(BINARY, w.clone()).unwrap();
        let found: BTreeSet<(usize, usize)> = find_squares(&word).iter().map(|s| (s.index, s.period)).collect();
        prop_assert_eq!(found, naive_squares(&w));
        prop_assert_eq!(is_fs_word(&word).unwrap(), naive_fs(&w));
    }

    #[test]
    fn fs_is_factor_closed(w in binary_word(60)) {
        // longest FS prefix of a random word
        let mut len = w.len();
        while !naive_fs(&w[..len]) {
            len -= 1;
        }
        let word = Word::new(BINARY, w[..len].to_vec()).unwrap();
        prop_assert!(is_fs_word(&word).unwrap());
        for start in 0..=word.len() {
            for len in 0..=word.len() - start {
                prop_assert!(is_fs_word(&word.factor(start, len)).unwrap());
            }
        }
    }

    #[test]
    fn projection_keeps_squares(w in word_over(4, 24), target in 0u8..3) {
        let word = Word::new(QUATERNARY, w).unwrap();
        let projected = project_to_ternary(&word, target).unwrap();
        prop_assert_eq!(projected.len(), word.len());
        for s in find_squares(&word) {
            let x = projected.factor(s.index - 1, s.period);
            let y = projected.factor(s.index - 1 + s.period, s.period);
            prop_assert_eq!(x, y);
        }
        if is_square_free(&projected) {
            prop_assert!(is_square_free(&word));
        }
    }

    #[test]
    fn reversed_complement_preserves_fs(w in binary_word(40)) {
        let word = Word::new(BINARY, w).unwrap();
        let mut flipped = complement(&word).unwrap().into_symbols();
        flipped.reverse();
        let c = Word::new(BINARY, flipped).unwrap();
        prop_assert_eq!(is_fs_word(&word).unwrap(), is_fs_word(&c).unwrap());
        let (a, b) = (CircularWord::new(word), CircularWord::new(c));
        prop_assert_eq!(is_circular_fs(&a).unwrap(), is_circular_fs(&b).unwrap());
    }

    #[test]
    fn conjugates_are_rotations(w in word_over(3, 16)) {
        let word = Word::new(fsword::words::TERNARY, w.clone()).unwrap();
        let got: Vec<Vec<u8>> = conjugates(&word).into_iter().map(|c| c.into_symbols()).collect();
        prop_assert_eq!(got, rotations(&w));
    }

    #[test]
    fn forbidden_circular_square_is_a_real_square(w in binary_word(24)) {
        let cw = CircularWord::new(Word::new(BINARY, w).unwrap());
        match first_forbidden_circular_square(&cw).unwrap() {
            None => prop_assert!(is_circular_fs(&cw).unwrap()),
            Some(s) => {
                prop_assert!(!is_circular_fs(&cw).unwrap());
                let doubled = cw.representative().concat(cw.representative()).unwrap();
                prop_assert!(2 * s.period <= cw.len());
                prop_assert_eq!(doubled.factor(s.index - 1, s.period), s.root.clone());
                prop_assert_eq!(doubled.factor(s.index - 1 + s.period, s.period), s.root);
            }
        }
    }
}

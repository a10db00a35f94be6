use std::collections::BTreeSet;

/// A letter of the free group on `r` generators: generator index and sign.
type Letter = (u8, bool);

fn inverse(l: Letter) -> Letter {
    (l.0, !l.1)
}

fn reduced_words(r: u8, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..r).flat_map(|g| [(g, true), (g, false)]).collect();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w| {
                letters
                    .iter()
                    .filter(|&&l| w.last().is_none_or(|&x| x != inverse(l)))
                    .map(|&l| {
                        let mut w2 = w.clone();
                        w2.push(l);
                        w2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    words
}

fn cyclically_reduced(w: &[Letter]) -> bool {
    match (w.first(), w.last()) {
        (Some(&a), Some(&b)) => w.len() == 1 || a != inverse(b),
        _ => false,
    }
}

fn is_proper_power(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).any(|k| n.is_multiple_of(k) && (k..n).all(|i| w[i] == w[i - k]))
}

/// Canonical label of the conjugacy class of the cyclic subgroup generated by
/// a cyclically reduced word: least rotation of the word or of its inverse.
fn class_label(w: &[Letter]) -> Vec<Letter> {
    let inv: Vec<Letter> = w.iter().rev().map(|&l| inverse(l)).collect();
    let rotations = |v: &[Letter]| -> Vec<Vec<Letter>> {
        (0..v.len())
            .map(|k| v[k..].iter().chain(&v[..k]).copied().collect())
            .collect()
    };
    rotations(w)
        .into_iter()
        .chain(rotations(&inv))
        .min()
        .expect("word is nonempty")
}

/// Number of conjugacy classes of maximal infinite cyclic subgroups of the
/// free group of rank `r` with a generator of cyclically reduced length at
/// most `max_len`.
///
/// Every nontrivial element is conjugate to a cyclically reduced word, and the
/// maximal cyclic subgroups are those generated by words that are not proper
/// powers; two such subgroups are conjugate when the generating words agree up
/// to rotation and inversion.
pub fn count_maximal_cyclic_classes(r: u8, max_len: usize) -> usize {
    let mut classes = BTreeSet::new();
    for len in 1..=max_len {
        for w in reduced_words(r, len) {
            if cyclically_reduced(&w) && !is_proper_power(&w) {
                classes.insert(class_label(&w));
            }
        }
    }
    classes.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_has_one_class() {
        for len in 1..6 {
            assert_eq!(count_maximal_cyclic_classes(1, len), 1);
        }
    }

    #[test]
    fn rank_two_grows() {
        // length 1: a, b; length 2: ab, ab^-1
        assert_eq!(count_maximal_cyclic_classes(2, 1), 2);
        assert_eq!(count_maximal_cyclic_classes(2, 2), 4);
        let counts: Vec<usize> = (1..=6).map(|l| count_maximal_cyclic_classes(2, l)).collect();
        assert!(counts.windows(2).all(|w| w[1] > w[0]), "{counts:?}");
    }

    #[test]
    fn proper_powers() {
        let a = (0, true);
        let b = (1, true);
        assert!(is_proper_power(&[a, a]));
        assert!(is_proper_power(&[a, b, a, b]));
        assert!(!is_proper_power(&[a, b, b]));
    }
}

/// Character-level Levenshtein distance (unit-cost insert, delete,
/// substitute), counted over Unicode scalar values.
pub fn edit_distance(a: &str, b: &str) -> usize {
    strsim::levenshtein(a, b)
}

/// `1 - lev / max(len)`, with two empty strings counting as identical.
pub fn normalized_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance(a, b) as f64 / longest as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_examples() {
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("xyz", "xyz"), 0);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
    }

    #[test]
    fn similarity_of_one_substitution_in_ten() {
        let s = normalized_similarity("CCCCCCCCCC", "CCCCCCCCCN");
        assert!((s - 0.9).abs() < 1e-12);
    }
}

//! Golden pins for exact orders and formats other components rely on.

use barriers::ideals::canonical_enumeration;

/// The sequence enumeration order is load-bearing for threshold tables, so
/// its exact prefix is pinned.
#[test]
fn enumeration_matches_golden_file() {
    let golden = include_str!("golden/enumeration.txt");
    let expected: Vec<Vec<u64>> = golden
        .lines()
        .map(|line| {
            if line == "()" {
                Vec::new()
            } else {
                line.split(',').map(|t| t.parse().unwrap()).collect()
            }
        })
        .collect();
    let got = canonical_enumeration(expected.len());
    assert_eq!(got, expected);
}

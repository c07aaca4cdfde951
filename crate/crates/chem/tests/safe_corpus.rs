use toxcliff_chem::{canonicalize, decode_safe, encode_safe, tokenize_fragments, SafeString};

fn drugs() -> Vec<(String, String)> {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/drugs.tsv"))
            .unwrap();
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (n, s) = l.split_once('\t').unwrap();
            (n.to_string(), s.to_string())
        })
        .collect()
}

#[test]
fn drugs_round_trip_through_safe() {
    let mut multi = 0;
    for (name, smi) in drugs() {
        let c = canonicalize(&smi).unwrap();
        let safe = encode_safe(&c).unwrap_or_else(|e| panic!("{name}: {e}"));
        let toks = tokenize_fragments(safe.as_str()).unwrap();
        if toks.len() > 1 {
            multi += 1;
        }
        assert_eq!(decode_safe(&safe).unwrap(), c, "{name}: {safe}");
        // every rotation of the fragment order decodes the same
        for k in 1..toks.len() {
            let mut t: Vec<&str> = toks.iter().map(|t| t.as_str()).collect();
            t.rotate_left(k);
            assert_eq!(
                decode_safe(&SafeString::new(t.join("."))).unwrap(),
                c,
                "{name}: rotation {k}"
            );
        }
        // encoding is a function of the molecule, not the input spelling
        assert_eq!(
            encode_safe(&canonicalize(&c.to_string()).unwrap()).unwrap(),
            safe
        );
    }
    println!("{multi} molecules split into several fragments");
    assert!(multi > 60);
}

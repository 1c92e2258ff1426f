//! Lemma + suffix splitting against an externally generated inflection
//! table (form, lemma, Penn tag, regular flag).

use jabberwock_core::morph::{from_penn, reattach, split_morph, tag_pos, tokenize, ParsedToken, SuffixRule, TagLexicon};

/// Rows the generating lemmatizer marks regular but that are not English
/// spellings (`freeer`) or use non-default orthography (British `civiller`,
/// Latin `viae`). Excluded from the lemma check only; they still round-trip.
const REFERENCE_DEFECTS: [&str; 8] = ["freeer", "freeest", "trueer", "blueer", "blueest", "viae", "civiller", "civillest"];

struct Row {
    form: String,
    lemma: String,
    tag: String,
    regular: bool,
}

fn rows() -> Vec<Row> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/inflections_en.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let c: Vec<&str> = l.split('\t').collect();
            Row { form: c[0].into(), lemma: c[1].into(), tag: c[2].into(), regular: c[3] == "1" }
        })
        .collect()
}

/// Token for `form` carrying the table's tag. With `use_lexicon` the
/// lexicon's lemma for that reading is offered first; without it the
/// splitter works from spelling alone.
fn token(form: &str, tag: &str, lexicon: &TagLexicon, use_lexicon: bool) -> ParsedToken {
    let toks = tokenize(form);
    assert_eq!(toks.len(), 1, "{form} tokenizes into {} pieces", toks.len());
    let mut t = tag_pos(&toks, lexicon).remove(0);
    let lower = form.to_lowercase();
    let (pos, feature) = from_penn(tag, "").unwrap();
    t.pos = pos;
    t.feature = feature;
    t.proper = false;
    t.lemma = lower.clone();
    if use_lexicon {
        if let Some(e) = lexicon.lookup(&lower).and_then(|es| es.iter().find(|e| e.feature == feature)) {
            t.lemma = e.lemma.clone();
        }
    }
    t
}

#[test]
fn table_is_large_enough() {
    let rows = rows();
    assert!(rows.len() >= 2000, "{}", rows.len());
    assert!(rows.iter().filter(|r| r.regular).count() >= 1500);
}

#[test]
fn regular_rows_agree_with_reference_lemma() {
    let lex = TagLexicon::embedded();
    for use_lexicon in [true, false] {
        let mismatches: Vec<String> = rows()
            .iter()
            .filter(|r| r.regular && !REFERENCE_DEFECTS.contains(&r.form.as_str()))
            .filter_map(|r| {
                let t = split_morph(token(&r.form, &r.tag, &lex, use_lexicon), &lex);
                (t.lemma != r.lemma || t.suffix_rule == SuffixRule::None)
                    .then(|| format!("{} {}: got {} {:?}, want {}", r.form, r.tag, t.lemma, t.suffix_rule, r.lemma))
            })
            .collect();
        if use_lexicon {
            assert!(mismatches.is_empty(), "{} mismatches:\n{}", mismatches.len(), mismatches.join("\n"));
        } else {
            // Spelling alone cannot separate e.g. `hoped` (hope) from
            // `hopped` (hop) without knowing the lemma set; require most.
            let n = rows().iter().filter(|r| r.regular).count();
            assert!(mismatches.len() * 50 < n, "{} of {n} mismatches:\n{}", mismatches.len(), mismatches.join("\n"));
        }
    }
}

#[test]
fn every_row_round_trips() {
    let lex = TagLexicon::embedded();
    for r in rows() {
        for use_lexicon in [true, false] {
            let t = split_morph(token(&r.form, &r.tag, &lex, use_lexicon), &lex);
            assert_eq!(reattach(&t.lemma, t.suffix_rule, &t.casing), r.form, "{} {}", r.form, r.tag);
            assert_eq!(t.lemma, t.lemma.to_lowercase());
        }
    }
}

#[test]
fn irregular_rows_keep_their_surface() {
    let lex = TagLexicon::embedded();
    for r in rows().iter().filter(|r| !r.regular) {
        let t = split_morph(token(&r.form, &r.tag, &lex, true), &lex);
        if t.suffix_rule == SuffixRule::None {
            assert_eq!(t.lemma, r.form.to_lowercase());
        }
    }
}

//! Prompt protocol for the translation and gloss turns.

use jabberwock_core::translation::GlossTable;

/// Bumped whenever prompt wording changes; part of every cache key.
pub const PROTOCOL_VERSION: &str = "jw-prompt-v1";

pub const TASK_SENTENCE: &str = "In this passage, open-class English words were replaced with nonsense words. \
Translate the passage to regular English as best you can.";

pub const RESEMBLANCE_INSTRUCTION: &str =
    "Ignore any resemblance between the nonsense words and real English words.";

pub const SPECIFICITY_INSTRUCTION: &str = "Aim for a specific translation: commit to your best guess for each word \
instead of giving up and using a placeholder such as 'something' or 'someone' or the nonce word itself.";

pub fn build_translation_prompt(degraded_text: &str) -> String {
    format!("{TASK_SENTENCE} {RESEMBLANCE_INSTRUCTION} {SPECIFICITY_INSTRUCTION}\n\nPassage:\n{degraded_text}")
}

pub fn build_gloss_prompt(nonces: &[String]) -> String {
    let mut s = String::from(
        "Now give a single-word English translation for each nonsense word below, based on your translation. \
Answer with one line per word in the form `nonsense -> english`.\n",
    );
    for n in nonces {
        s.push('\n');
        s.push_str(n);
    }
    s
}

fn clean(s: &str) -> String {
    s.trim()
        .trim_matches(|c: char| matches!(c, '*' | '`' | '"' | '\'' | '_' | '“' | '”' | '‘' | '’') || c.is_whitespace())
        .trim()
        .to_string()
}

fn strip_bullet(line: &str) -> &str {
    let t = line.trim_start();
    let t = t.trim_start_matches(['-', '*', '•']).trim_start();
    let digits = t.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits > 0 {
        let rest = &t[digits..];
        if let Some(r) = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')')) {
            return r.trim_start();
        }
    }
    t
}

fn split_pair(line: &str) -> Option<(String, String)> {
    if line.trim_start().starts_with('|') {
        let cells: Vec<String> = line.split('|').map(clean).filter(|c| !c.is_empty()).collect();
        return (cells.len() >= 2).then(|| (cells[0].clone(), cells[1].clone()));
    }
    let line = strip_bullet(line);
    for sep in ["->", "→", "=>", "—", "–", ":", "="] {
        if let Some((k, v)) = line.split_once(sep) {
            return Some((clean(k), clean(v)));
        }
    }
    None
}

/// Reads `nonce -> word` pairs (also `:`, `→`, `=`, bullets and markdown
/// table rows). Returns the table and every non-blank line that did not
/// yield a pair for a requested nonce.
pub fn parse_gloss(reply: &str, nonces: &[String]) -> (GlossTable, Vec<String>) {
    let mut table = GlossTable::new();
    let mut unparsed = Vec::new();
    for line in reply.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.chars().all(|c| matches!(c, '|' | '-' | ':' | ' ')) {
            continue;
        }
        match split_pair(trimmed) {
            Some((k, v)) if !v.is_empty() => {
                let key = k.to_lowercase();
                if let Some(n) = nonces.iter().find(|n| n.to_lowercase() == key) {
                    table.entry(n.clone()).or_insert(v);
                } else {
                    unparsed.push(trimmed.to_string());
                }
            }
            _ => unparsed.push(trimmed.to_string()),
        }
    }
    (table, unparsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn prompt_shape() {
        let text = "A throse clirsed into a ghoathe to glarn some scrill";
        let p = build_translation_prompt(text);
        assert!(p.starts_with(TASK_SENTENCE));
        assert!(p.contains(
            "instead of giving up and using a placeholder such as 'something' or 'someone' or the nonce word itself"
        ));
        assert!(p.ends_with(text));
        assert_eq!(p, build_translation_prompt(text));
    }

    #[test]
    fn tolerant_gloss_parsing() {
        let reply = "Here you go:\n\n1. throse -> boy\n- **clirse**: walk\n| ghoathe | store |\n|---|---|\nglarn → buy\nscrill = gum\nfoo -> bar\n";
        let (t, unparsed) = parse_gloss(reply, &ns(&["throse", "clirse", "ghoathe", "glarn", "scrill"]));
        assert_eq!(t.len(), 5, "{t:?} {unparsed:?}");
        assert_eq!(t["throse"], "boy");
        assert_eq!(t["clirse"], "walk");
        assert_eq!(t["ghoathe"], "store");
        assert_eq!(unparsed, ["Here you go:", "foo -> bar"]);
    }

    #[test]
    fn empty_gloss_prompt_lists_nothing() {
        let p = build_gloss_prompt(&[]);
        assert_eq!(p.lines().filter(|l| !l.is_empty()).count(), 1);
    }
}

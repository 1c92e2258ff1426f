#!/usr/bin/env python3
"""Regenerates the shipped lexical resources under crates/core/data.

Inputs (all installable with pip; the Brill lexicon and tagged samples come
from the `pattern3` sdist, unpacked at --pattern-dir):

    pip install wordfreq lemminflect english-words
    pip download pattern3 --no-deps && tar xzf pattern3-3.0.0.tar.gz

Outputs:
    dictionary_en.txt   reference dictionary for neighbourhood counts
    freq_en.tsv         per-billion word counts with a corpus_size header
    lexicon_en.tsv      form, lemma, Penn tag, prior
    ../tests/fixtures/inflections_en.tsv   form, lemma, Penn tag, regular flag
"""
import argparse
import collections
import os
import re

import lemminflect
import wordfreq
from english_words import get_english_words_set

ALPHA = re.compile(r"[a-z]+")
UPOS_FOR_PENN = {
    "NN": "NOUN", "NNS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV",
}
KEEP_TAGS = set(UPOS_FOR_PENN) | {
    "DT", "PDT", "WDT", "IN", "TO", "CC", "PRP", "PRP$", "WP", "WP$", "WRB",
    "MD", "CD", "UH", "FW", "EX", "RP", "POS", "LS", "SYM",
}


def read_brill(path):
    brill = {}
    for line in open(path, encoding="utf-8"):
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) >= 2 and ALPHA.fullmatch(parts[0]):
            brill[parts[0]] = parts[1]
    return brill


def tagged_counts(paths):
    counts = collections.defaultdict(collections.Counter)
    for path in paths:
        for line in open(path, encoding="utf-8"):
            for item in line.split():
                word, _, tag = item.rpartition("/")
                word = word.lower()
                if ALPHA.fullmatch(word) and tag in KEEP_TAGS:
                    counts[word][tag] += 1
    return counts


def lemminflect_tags(form):
    """Penn tags under which lemminflect generates `form` from some lemma."""
    out = {}
    for upos, lemmas in lemminflect.getAllLemmas(form).items():
        for lemma in lemmas:
            for tag, forms in lemminflect.getAllInflections(lemma, upos).items():
                if form in forms and tag in UPOS_FOR_PENN:
                    out.setdefault(tag, lemma.lower())
    return out


def lemma_for(form, tag):
    upos = UPOS_FOR_PENN.get(tag)
    if upos is None:
        return form
    lemmas = lemminflect.getLemma(form, upos, lemmatize_oov=False)
    return lemmas[0].lower() if lemmas else form


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pattern-dir", required=True)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "crates", "core", "data"))
    args = ap.parse_args()
    en = os.path.join(args.pattern_dir, "pattern3", "text", "en")
    corpora = os.path.join(args.pattern_dir, "test", "corpora")

    brill = read_brill(os.path.join(en, "en-lexicon.txt"))
    web2 = get_english_words_set(["web2"], lower=True)
    ranked = [w for w in wordfreq.top_n_list("en", 400000, wordlist="large")
              if ALPHA.fullmatch(w) and (w in web2 or w in brill)]

    dictionary = ranked[:50000]
    with open(os.path.join(args.out, "dictionary_en.txt"), "w") as f:
        f.write("\n".join(sorted(dictionary)) + "\n")

    with open(os.path.join(args.out, "freq_en.tsv"), "w") as f:
        f.write("corpus_size\t1000000000\n")
        for w in dictionary:
            count = round(10 ** wordfreq.zipf_frequency(w, "en", wordlist="large"))
            f.write(f"{w}\t{count}\n")

    counts = tagged_counts([os.path.join(corpora, "tagged-en-oanc.txt"),
                            os.path.join(corpora, "tagged-en-wsj.txt")])
    lexicon_forms = [w for w in ranked if w in brill][:30000]
    rows = []
    for form in lexicon_forms:
        votes = collections.Counter()
        for tag, c in counts.get(form, {}).items():
            votes[tag] += c
        if brill[form] in KEEP_TAGS:
            votes[brill[form]] += 3
        for tag in lemminflect_tags(form):
            votes[tag] += 1
        total = sum(votes.values())
        if total == 0:
            continue
        for tag, v in votes.most_common():
            prior = v / total
            if prior < 0.05:
                continue
            rows.append((form, lemma_for(form, tag), tag, prior))
    with open(os.path.join(args.out, "lexicon_en.tsv"), "w") as f:
        f.write("# form\tlemma\tpos\tprior\n")
        for form, lemma, tag, prior in rows:
            f.write(f"{form}\t{lemma}\t{tag}\t{prior:.4f}\n")

    # Inflection table: common lemmas crossed with their inflected forms.
    # `regular` marks rows where the dictionary form equals lemminflect's
    # rule-based (out-of-vocabulary) inflection.
    table = []
    seen = set()
    for w in ranked[:20000]:
        for upos in ("NOUN", "VERB", "ADJ"):
            if w not in lemminflect.getAllLemmas(w).get(upos, ()):
                continue
            rule_based = lemminflect.getAllInflectionsOOV(w, upos)
            for tag, forms in lemminflect.getAllInflections(w, upos).items():
                if tag not in ("NNS", "VBD", "VBG", "VBZ", "JJR", "JJS"):
                    continue
                form = forms[0]
                if not ALPHA.fullmatch(form) or form == w or (form, tag) in seen:
                    continue
                seen.add((form, tag))
                regular = int(form in rule_based.get(tag, ()))
                table.append((form, w, tag, regular))
        if len(table) >= 2000:
            break
    with open(os.path.join(args.out, "..", "tests", "fixtures", "inflections_en.tsv"), "w") as f:
        f.write("# form\tlemma\tpos\tregular\n")
        for row in table[:2000]:
            f.write("\t".join(map(str, row)) + "\n")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Builds the 150-passage test corpus from the public-domain text of
Alice's Adventures in Wonderland (plain text extracted from the PDF shipped
in the pattern3 sdist test corpora).

Fifty passages per genre. Fiction passages are narrative excerpts verbatim.
Screenplay passages reformat excerpts into scene headings, action lines and
character cues. Spoken passages recast excerpts as a loosely punctuated
monologue with fillers. Nine fiction/spoken pairs share a pair_id and carry
contrasting provenance so pair-level analyses have data to run on.
"""
import json
import re
import sys

LIGATURES = {"ﬁ": "fi", "ﬂ": "fl", "ﬀ": "ff", "ﬃ": "ffi", "ﬄ": "ffl"}
FILLERS = ["So", "Um", "You know", "I mean", "Like", "Okay so", "And, uh", "Right, so"]
SCENES = ["HALL", "RIVERBANK", "GARDEN", "COTTAGE", "WOOD", "TEA TABLE", "CROQUET GROUND", "COURTROOM"]
TARGET_WORDS = 110


def clean(raw):
    lines = []
    for line in raw.splitlines():
        s = line.strip()
        if not s or re.fullmatch(r"\d+", s):
            continue
        if re.match(r"^\d+ CHAPTER \d+\.", s) or re.match(r"^Chapter \d+$", s):
            continue
        lines.append(s)
    text = ""
    for s in lines:
        if text.endswith("-"):
            text += s
        else:
            text += (" " if text else "") + s
    for k, v in LIGATURES.items():
        text = text.replace(k, v)
    text = re.sub(r"\bW (?=[A-Z]{2})", "W", text)
    text = re.sub(r"- (?=[A-Z])", "-", text)
    start = text.find("Alice was beginning")
    return re.sub(r"\s+", " ", text[start:])


def sentences(text):
    parts = re.split(r"(?:(?<=[.!?]’)|(?<=[.!?]))\s+(?=[‘A-Z(])", text)
    out = []
    for p in parts:
        p = p.strip()
        if re.fullmatch(r"Chapter \d+ .*", p):
            continue
        out.append(p)
    return out


def chunks(sents):
    cur, words = [], 0
    for s in sents:
        cur.append(s)
        words += len(s.split())
        if words >= TARGET_WORDS:
            yield " ".join(cur)
            cur, words = [], 0


def as_screenplay(text, idx):
    out = [f"INT. {SCENES[idx % len(SCENES)]} - DAY", ""]
    for s in sentences(text):
        quotes = re.findall(r"‘([^’]*(?:’[a-z][^’]*)*)’", s)
        if quotes:
            m = re.search(r"said (?:the )?([A-Z][a-z]+)", s)
            speaker = (m.group(1) if m else "Alice").upper()
            line = " ".join(q.strip(" ,") for q in quotes if q.strip(" ,"))
            if line:
                out += [speaker, line, ""]
        else:
            out.append(s)
    return "\n".join(out).strip()


def as_spoken(text, idx):
    out = []
    for i, s in enumerate(sentences(text)):
        s = s.replace("‘", "").replace("(", "").replace(")", "")
        s = re.sub(r"’(?![a-z])", "", s)
        s = s.replace(";", ",").replace(":", ",")
        if i % 2 == 0:
            s = FILLERS[(idx + i) % len(FILLERS)] + ", " + s[0].lower() + s[1:]
        out.append(s)
    return " ".join(out)


def main():
    raw = open(sys.argv[1], encoding="utf-8").read()
    blocks = list(chunks(sentences(clean(raw))))
    assert len(blocks) >= 150, len(blocks)
    records = [{"schema_version": 1}]
    for i in range(50):
        fiction = blocks[i * 3]
        screen = blocks[i * 3 + 1]
        spoken = blocks[i * 3 + 2]
        pair = f"pair{i // 5:02}" if i % 5 == 0 and i // 5 < 9 else None
        records.append({"id": f"fic{i:03}", "genre": "fiction",
                        "provenance": "in_pretraining", "pair_id": pair, "text": fiction})
        records.append({"id": f"scr{i:03}", "genre": "screenplay",
                        "provenance": "in_pretraining", "text": as_screenplay(screen, i)})
        spk = {"id": f"spk{i:03}", "genre": "spoken", "provenance": "novel" if pair else "unknown",
               "text": as_spoken(spoken, i)}
        if pair:
            # A topic-matched re-telling of the fiction excerpt.
            spk["pair_id"] = pair
            spk["text"] = as_spoken(fiction, i)
        records.append(spk)
    for r in records:
        if r.get("pair_id") is None:
            r.pop("pair_id", None)
        print(json.dumps(r, ensure_ascii=False))


if __name__ == "__main__":
    main()

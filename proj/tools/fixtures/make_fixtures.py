"""Generate the synthetic test fixtures under tests/data.

Outputs:
  table1_train.tsv      4000 labelled rows with fixed label counts
  synth_train.tsv       120 labelled rows with learnable cue words
  synth_test.tsv        40 labelled rows, same generator
  synth_words.txt       300-d vectors for most fixture stems
  synth_sent_train.tsv  512-d vectors for the synth_train ids
  synth_sent_test.tsv   512-d vectors for the synth_test ids
  tiny_train.tsv        8 labelled rows for the tf-idf golden run
  tiny_test.tsv         4 labelled rows for the tf-idf golden run

Run from the repository root: python3 tools/fixtures/make_fixtures.py
"""
import os
import random

from nltk.stem.porter import PorterStemmer

OUT = os.path.join("tests", "data")
HEADER = "id\ttext\tmisogynous\tmisogyny_category\ttarget\n"

CATEGORY_CUES = {
    "stereotype": ["kitchen", "sandwich", "cook"],
    "dominance": ["obey", "silent", "control"],
    "derailing": ["fake", "lie", "exaggerate"],
    "sexual_harassment": ["threat", "grab", "follow"],
    "discredit": ["stupid", "dumb", "useless"],
}
TARGET_CUES = {
    "active": ["@anna", "@maria", "@kate"],
    "passive": ["women", "girls", "ladies"],
}
NEUTRAL = ["weather", "coffee", "game", "music", "train", "movie", "garden",
           "book", "pizza", "holiday", "football", "concert"]
FILLER = ["today", "really", "think", "people", "time", "world", "news",
          "morning", "friend", "city", "week", "night"]
DECOR = ["", "", " https://t.co/abc", " 🙄", " !!", " I'll see", " don't care",
         " 😂😂", " #tbt"]


def write_rows(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(HEADER)
        for r in rows:
            f.write("\t".join(str(v) for v in r) + "\n")


def table1(rng):
    cats = (["discredit"] * 1014 + ["derailing"] * 92 + ["dominance"] * 148 +
            ["sexual_harassment"] * 352 + ["stereotype"] * 179)
    targets = ["active"] * 1058 + ["passive"] * 727
    rng.shuffle(cats)
    rng.shuffle(targets)
    labels = [(1, c, t) for c, t in zip(cats, targets)] + [(0, "0", "0")] * 2215
    rng.shuffle(labels)
    rows = []
    for i, (m, c, t) in enumerate(labels):
        words = rng.sample(FILLER + NEUTRAL, 5)
        rows.append((f"t{i + 1:04d}", " ".join(words), m, c, t))
    write_rows(os.path.join(OUT, "table1_train.tsv"), rows)


def synth_rows(rng, prefix, n_per_category, n_neutral):
    rows = []
    for cat, cues in CATEGORY_CUES.items():
        for k in range(n_per_category):
            target = "active" if k % 2 == 0 else "passive"
            words = [rng.choice(TARGET_CUES[target]), rng.choice(cues),
                     rng.choice(cues)] + rng.sample(FILLER, 3)
            rng.shuffle(words)
            rows.append([None, " ".join(words) + rng.choice(DECOR), 1, cat, target])
    for _ in range(n_neutral):
        words = rng.sample(NEUTRAL, 2) + rng.sample(FILLER, 3)
        rng.shuffle(words)
        rows.append([None, " ".join(words) + rng.choice(DECOR), 0, "0", "0"])
    rng.shuffle(rows)
    for i, r in enumerate(rows):
        r[0] = f"{prefix}{i + 1:03d}"
    return rows


def vector(rng, dim):
    return " ".join(f"{rng.gauss(0.0, 0.5):.4f}" for _ in range(dim))


def embeddings(rng, train, test):
    stem = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS).stem
    vocab = set()
    for cues in list(CATEGORY_CUES.values()) + list(TARGET_CUES.values()):
        vocab.update(stem(w.lstrip("@")) for w in cues)
    vocab.update(stem(w) for w in NEUTRAL + FILLER)
    # A few stems stay out of the table so the out-of-vocabulary path is used.
    vocab -= {stem("garden"), stem("week")}
    with open(os.path.join(OUT, "synth_words.txt"), "w", encoding="utf-8") as f:
        for w in sorted(vocab):
            f.write(f"{w} {vector(rng, 300)}\n")
    for name, rows in (("synth_sent_train.tsv", train), ("synth_sent_test.tsv", test)):
        with open(os.path.join(OUT, name), "w", encoding="utf-8") as f:
            f.write("dim\t512\n")
            for r in rows:
                f.write(f"{r[0]}\t{vector(rng, 512)}\n")


def tiny():
    train = [
        ("a1", "You stupid woman, go back to the kitchen", 1, "stereotype", "active"),
        ("a2", "Lovely weather for a walk today", 0, "0", "0"),
        ("a3", "Women are useless and dumb", 1, "discredit", "passive"),
        ("a4", "Great game last night!", 0, "0", "0"),
        ("a5", "Shut up and obey, woman", 1, "dominance", "active"),
        ("a6", "Coffee first, then music", 0, "0", "0"),
        ("a7", "She is stupid, all women are", 1, "discredit", "passive"),
        ("a8", "The concert was great", 0, "0", "0"),
    ]
    test = [
        ("b1", "stupid woman in the kitchen", 1, "stereotype", "active"),
        ("b2", "great weather and coffee", 0, "0", "0"),
        ("b3", "useless women", 1, "discredit", "passive"),
        ("b4", "music all night", 0, "0", "0"),
    ]
    write_rows(os.path.join(OUT, "tiny_train.tsv"), train)
    write_rows(os.path.join(OUT, "tiny_test.tsv"), test)


def main():
    rng = random.Random(20181017)
    table1(rng)
    train = synth_rows(rng, "s", 12, 60)
    test = synth_rows(rng, "q", 4, 20)
    write_rows(os.path.join(OUT, "synth_train.tsv"), train)
    write_rows(os.path.join(OUT, "synth_test.tsv"), test)
    embeddings(rng, train, test)
    tiny()


if __name__ == "__main__":
    main()

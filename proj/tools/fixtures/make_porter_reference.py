"""Freeze reference Porter stems for the stemmer tests.

Uses nltk's PorterStemmer in MARTIN_EXTENSIONS mode, which follows Martin
Porter's published C implementation. The word list is every lowercase
alphabetic run found in the given text files, plus a fixed set of classic
examples.
"""
import re
import sys

from nltk.stem.porter import PorterStemmer

CLASSIC = """caresses ponies ties caress cats feed agreed plastered bled motoring
sing conflated troubled sized hopping tanned falling hissing fizzed failing
filing happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization predication
operator feudalism decisiveness hopefulness callousness formaliti sensitiviti
sensibiliti triplicate formative formalize electriciti electrical hopeful
goodness revival allowance inference airliner gyroscopic adjustable defensible
irritant replacement adjustment dependent adoption homologou communism activate
angulariti homologous effective bowdlerize probate rate cease controll roll
running ladies run generalizations logical archaeology women kitchen hysterical
misogyny misogynist harassment dominance derailing stereotype discredit""".split()


def main(out_path, *sources):
    words = set(CLASSIC)
    for path in sources:
        with open(path, errors="ignore") as f:
            words.update(w for w in re.findall(r"[a-z]+", f.read().lower())
                         if 1 <= len(w) <= 24)
    stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
    with open(out_path, "w") as out:
        for w in sorted(words):
            out.write(f"{w}\t{stemmer.stem(w, to_lowercase=False)}\n")


if __name__ == "__main__":
    main(*sys.argv[1:])

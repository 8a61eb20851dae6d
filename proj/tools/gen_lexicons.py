#!/usr/bin/env python3
"""Regenerate the bundled lexicons under data/.

Development-time helper; the C++ toolkit only reads the generated text files.
Requires: wordfreq, lemminflect, pyspellchecker.

    python3 tools/gen_lexicons.py --out data
"""
import argparse
import hashlib
import os

import lemminflect
import wordfreq
from spellchecker import SpellChecker

CLOSED_CLASS = set("""
the a an this that these those some any each every no another either neither all both
in on at by for with about against between into through during before after above below
from up down of off over under to among without within across behind beyond near since
until upon toward towards despite except via per onto around along throughout beside
i me my mine myself you your yours yourself yourselves he him his himself she her hers
herself it its itself we us our ours ourselves they them their theirs themselves who whom
whose which what someone somebody anyone anybody everyone everybody something anything
everything nothing nobody none and or but nor yet because although though while if unless
whereas whether not very also too so just only even still already always never often
sometimes usually here there now then again soon ever quite rather almost really well
perhaps maybe however therefore thus more most less least away back together ago later
instead else anyway indeed once twice today tomorrow yesterday tonight
""".split())

# Verbs whose noun reading dominates in learner text; keeping them out of the
# verb lexicon lets singular/plural edits on them type as NOUN:NUM.
NOUN_DOMINANT = set("""
time people way year day man thing world life hand part child eye woman place week case
point number group problem fact home water room mother area money story month lot
book job word business issue side kind head house service friend father power hour game
line end member law car city name team minute idea kid body information school face
others level office door health person art war history party result morning reason
research girl guy moment air teacher force education interest interests paper
food table price market age family student company system program question government
night country state music color sound light picture music page land report mind
""".split())

REAL_CONFUSIONS = [
    ["their", "there"], ["then", "than"], ["affect", "effect"], ["accept", "except"],
    ["to", "too", "two"], ["lose", "loose"], ["advice", "advise"], ["weather", "whether"],
    ["quiet", "quite"], ["were", "where"], ["piece", "peace"], ["principal", "principle"],
    ["stationary", "stationery"], ["complement", "compliment"], ["desert", "dessert"],
    ["breath", "breathe"], ["sight", "site", "cite"], ["hear", "here"], ["know", "no"],
    ["new", "knew"], ["right", "write"], ["buy", "by"], ["week", "weak"], ["whole", "hole"],
    ["brake", "break"], ["passed", "past"], ["personal", "personnel"], ["economic", "economical"],
    ["historic", "historical"], ["rise", "raise"], ["lend", "borrow"], ["among", "between"],
    ["fewer", "less"], ["lie", "lay"], ["bring", "take"], ["say", "tell"], ["make", "do"],
    ["see", "look", "watch"], ["hear", "listen"], ["learn", "teach"], ["remember", "remind"],
    ["for", "four"], ["one", "won"], ["meat", "meet"], ["mail", "male"], ["plain", "plane"],
    ["steal", "steel"], ["tail", "tale"], ["waist", "waste"], ["wait", "weight"],
    ["flour", "flower"], ["hour", "our"], ["road", "rode"], ["sea", "see"], ["son", "sun"],
]

FIXED_TYPOS = {"equipment": ["equipmet"], "therefore": ["therefofe"], "locale": ["louce"]}

KEYBOARD = {
    "q": "wa", "w": "qes", "e": "wrd", "r": "etf", "t": "ryg", "y": "tuh", "u": "yij",
    "i": "uok", "o": "ipl", "p": "ol", "a": "qsz", "s": "adwx", "d": "sfe", "f": "dgr",
    "g": "fht", "h": "gjy", "j": "hku", "k": "jli", "l": "ko", "z": "xa", "x": "zcs",
    "c": "xvd", "v": "cbf", "b": "vng", "n": "bmh", "m": "nj",
}

# Commonly superfluous words (inserted by learners) and commonly omitted words
# (deleted by learners).  Kept disjoint so the implausible swap is observable.
INSERTIONS = """of to in for on at with that is be as from about by very will have are has been it
so also there much just more which do""".split()
DELETIONS = """the a an and was were would can could should not this these those some any
each its their our than then when while still even only""".split()


def stable_hash(s):
    return int(hashlib.sha256(s.encode()).hexdigest()[:16], 16)


def typos(word, dictionary, count=2):
    h = stable_hash(word)
    out = []
    candidates = []
    n = len(word)
    for i in range(1, n - 1):
        candidates.append(word[:i] + word[i + 1:])                       # deletion
        if word[i] != word[i + 1]:
            candidates.append(word[:i] + word[i + 1] + word[i] + word[i + 2:])  # swap
        for c in KEYBOARD.get(word[i], ""):
            candidates.append(word[:i] + c + word[i + 1:])               # key slip
        candidates.append(word[:i] + word[i] + word[i:])                 # doubling
    seen = set()
    for k in range(len(candidates)):
        cand = candidates[(h + k * 7919) % len(candidates)]
        if cand in seen or cand in dictionary or cand == word:
            continue
        seen.add(cand)
        out.append(cand)
        if len(out) == count:
            break
    return out


def write(path, header, lines):
    with open(path, "w", encoding="utf-8") as f:
        f.write(header)
        for line in lines:
            f.write(line + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    ap.add_argument("--verbs", type=int, default=1500)
    ap.add_argument("--typo-words", type=int, default=2500)
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    spell = SpellChecker()
    top = wordfreq.top_n_list("en", 60000)
    base_words = [w for w in top if w.isalpha() and w.isascii() and w in spell]

    # --- verbs -----------------------------------------------------------
    claimed = set()
    verb_lines = []
    for w in top:
        if len(verb_lines) >= args.verbs:
            break
        if not (w.isalpha() and w.isascii()) or w in CLOSED_CLASS or w in NOUN_DOMINANT:
            continue
        lemmas = lemminflect.getAllLemmas(w).get("VERB")
        if not lemmas or lemmas[0] != w:
            continue
        infl = lemminflect.getAllInflections(w, upos="VERB")
        if not infl or "VBD" not in infl:
            continue
        past = infl["VBD"][0]
        if wordfreq.zipf_frequency(past, "en") < 2.5 and w != "be":
            continue
        forms = [w]
        for tag in ("VBZ", "VBP", "VBD", "VBN", "VBG"):
            for f in infl.get(tag, ()):
                if f.isalpha() and f not in forms:
                    forms.append(f)
        if w in claimed:
            continue
        forms = [f for f in forms if f == w or f not in claimed]
        if len(forms) < 2:
            continue
        claimed.update(forms)
        verb_lines.append(f"{w}: " + ", ".join(forms[1:]))

    # --- nouns with irregular plurals --------------------------------------
    noun_lines = []
    for w in top[:40000]:
        if not (w.isalpha() and w.isascii()):
            continue
        lemmas = lemminflect.getAllLemmas(w).get("NOUN")
        if not lemmas or lemmas[0] != w:
            continue
        plural = lemminflect.getAllInflections(w, upos="NOUN").get("NNS", (None,))[0]
        if not plural or plural == w or not plural.isalpha():
            continue
        regular = {w + "s", w + "es"}
        if w.endswith("y"):
            regular.add(w[:-1] + "ies")
        if plural in regular:
            continue
        noun_lines.append(f"{w}: {plural}")

    # --- adjective degree groups -----------------------------------------
    adj_lines = []
    adj_claimed = set()
    for w in top[:30000]:
        if not (w.isalpha() and w.isascii()):
            continue
        lemmas = lemminflect.getAllLemmas(w).get("ADJ")
        if not lemmas or lemmas[0] != w:
            continue
        infl = lemminflect.getAllInflections(w, upos="ADJ")
        forms = [f for tag in ("JJR", "JJS") for f in infl.get(tag, ())]
        forms = [f for f in forms if f.isalpha() and f != w and f not in adj_claimed]
        if not forms or w in adj_claimed:
            continue
        if any(wordfreq.zipf_frequency(f, "en") < 1.5 for f in forms):
            continue
        adj_claimed.update([w] + forms)
        adj_lines.append(f"{w}: " + ", ".join(forms))

    # --- dictionary -----------------------------------------------------
    dictionary = set(base_words)
    for line in verb_lines + noun_lines + adj_lines:
        lemma, rest = line.split(": ")
        dictionary.add(lemma)
        dictionary.update(rest.split(", "))
    dictionary.update(w for group in REAL_CONFUSIONS for w in group)
    dictionary.update(CLOSED_CLASS)
    dictionary.update(INSERTIONS)
    dictionary.update(DELETIONS)
    for bad in ("recieved", "childs", "alot", "definately", "teached", "goed", "runned"):
        dictionary.discard(bad)

    # --- confusions -------------------------------------------------------
    confusions = {}
    for group in REAL_CONFUSIONS:
        for w in group:
            confusions.setdefault(w, [])
            for c in group:
                if c != w and c not in confusions[w]:
                    confusions[w].append(c)
    for w, ts in FIXED_TYPOS.items():
        confusions.setdefault(w, []).extend(t for t in ts if t not in confusions.get(w, []))
    typo_count = 0
    for w in base_words:
        if typo_count >= args.typo_words:
            break
        if len(w) < 5 or w in CLOSED_CLASS or w in confusions:
            continue
        ts = typos(w, dictionary)
        if ts:
            confusions[w] = ts
            typo_count += 1
    for w in list(confusions):
        for t in confusions[w]:
            assert t != w

    hdr = "# Generated by tools/gen_lexicons.py from wordfreq + lemminflect data.\n"
    write(os.path.join(args.out, "verbs.txt"),
          hdr + "# lemma: inflected forms (3sg, present, past, participle, gerund)\n", verb_lines)
    write(os.path.join(args.out, "nouns_irregular.txt"),
          hdr + "# singular: irregular plural\n", noun_lines)
    write(os.path.join(args.out, "adjectives.txt"),
          hdr + "# positive: comparative, superlative\n", adj_lines)
    write(os.path.join(args.out, "confusions.txt"),
          hdr + "# word: commonly confused or misspelled counterparts\n",
          [f"{w}: " + ", ".join(cs) for w, cs in confusions.items()])
    write(os.path.join(args.out, "insertions.txt"),
          hdr + "# words learners commonly insert unnecessarily\n", INSERTIONS)
    write(os.path.join(args.out, "deletions.txt"),
          hdr + "# words learners commonly omit\n", DELETIONS)
    write(os.path.join(args.out, "dictionary.txt"),
          hdr + "# spelling dictionary, one lower-case word per line\n", sorted(dictionary))
    print(f"verbs={len(verb_lines)} nouns={len(noun_lines)} adjectives={len(adj_lines)} "
          f"confusions={len(confusions)} dictionary={len(dictionary)}")


if __name__ == "__main__":
    main()

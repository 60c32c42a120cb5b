"""Reference Porter stemmer (original published algorithm).

Independent transliteration used to cross-check the C++ implementation and
to generate frozen test vectors. Rule tables are written out directly from
the published step definitions rather than ported from the C++ code.
"""

VOWELS = "aeiou"


def _is_consonant(word, i):
    ch = word[i]
    if ch in VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem):
    """Number of VC sequences in [C](VC)^m[V]."""
    forms = "".join("c" if _is_consonant(stem, i) else "v" for i in range(len(stem)))
    return forms.count("vc")


def _has_vowel(stem):
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word):
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word):
    if len(word) < 3:
        return False
    if not (
        _is_consonant(word, len(word) - 1)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 3)
    ):
        return False
    return word[-1] not in "wxy"


def _replace_suffix(word, suffix, replacement):
    return word[: len(word) - len(suffix)] + replacement


def _rule_table(word, rules, min_measure):
    """First matching suffix wins; condition applies to the matched stem."""
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > min_measure:
                return stem + replacement
            return word
    return word


def _step1a(word):
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-3] + "i"
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        return word[:-1] if _measure(stem) > 0 else word
    hit = None
    if word.endswith("ed") and _has_vowel(word[:-2]):
        hit = word[:-2]
    elif word.endswith("ing") and _has_vowel(word[:-3]):
        hit = word[:-3]
    if hit is None:
        return word
    if hit.endswith("at") or hit.endswith("bl") or hit.endswith("iz"):
        return hit + "e"
    if _ends_double_consonant(hit) and hit[-1] not in "lsz":
        return hit[:-1]
    if _measure(hit) == 1 and _ends_cvc(hit):
        return hit + "e"
    return hit


def _step1c(word):
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


STEP2_RULES = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
]

STEP3_RULES = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]

STEP4_SUFFIXES = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def _step4(word):
    # Longest matching suffix decides; "ion" additionally needs stem end s/t.
    best = None
    for suffix in STEP4_SUFFIXES:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best)):
            best = suffix
    if best is None:
        return word
    stem = word[: len(word) - len(best)]
    if best == "ion" and (not stem or stem[-1] not in "st"):
        return word
    return stem if _measure(stem) > 1 else word


def _step5a(word):
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word):
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        return word[:-1]
    return word


def stem(word):
    if len(word) <= 2 or not word.isascii() or not word.islower() or not word.isalpha():
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _rule_table(word, STEP2_RULES, 0)
    word = _rule_table(word, STEP3_RULES, 0)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word


if __name__ == "__main__":
    import sys

    for w in sys.argv[1:]:
        print(w, "->", stem(w))

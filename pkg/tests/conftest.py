from limitsetlab import moebius as mo


def reduced_words(labels, max_len, rng, count):
    """Random freely reduced words as lists of (label, sign)."""
    letters = [(lab, s) for lab in labels for s in (1, -1)]
    words = []
    for _ in range(count):
        n = int(rng.integers(1, max_len + 1))
        word = []
        while len(word) < n:
            lab, s = letters[rng.integers(len(letters))]
            if word and word[-1][0] == lab and word[-1][1] == -s:
                continue
            word.append((lab, s))
        words.append(word)
    return words


def word_map(group, word):
    out = mo.identity()
    for lab, s in word:
        g = group.generator(lab)
        out = mo.compose(out, g if s == 1 else g.inverse())
    return out

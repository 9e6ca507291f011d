"""Words, free-group automorphisms and the relation checks for the tetrahedral configuration group.

The group is generated by ``y1, y2, y3`` (swap the center vertex of a planar
configuration with extremal vertex ``i``) or, in a second presentation, by
``X, R, S``.  It acts on the free group ``F3 = <a1, a2, a3>`` of the graph
complement by

    y_i . a_i = a_i,        y_i . a_j = a_i a_j^-1   (i != j),

and maps onto ``S4`` by ``y_i -> (0 i)``.  Both images are homomorphisms
with ``image(u v) = image(u) o image(v)``, so a word acts right to left.
Relations are verified as equalities in these two quotients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations, product

__all__ = [
    "FreeAutomorphism",
    "FreeWord",
    "GroupWord",
    "Permutation4",
    "act_generator",
    "act_word",
    "aut_of_word",
    "exponent_sums",
    "parse_free_word",
    "parse_group_word",
    "perm_image",
    "pure_subgroup_data",
    "subgroup_order",
    "tau",
    "translate",
    "translate_to_xrs",
    "verify_all",
    "verify_y_relations",
]

RANK = 3


def _reduce(letters):
    out = []
    for g in letters:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word in ``a1, a2, a3``; letter ``+i`` is ``a_i`` and ``-i`` its inverse."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple(int(g) for g in self.letters)
        if any(g == 0 or abs(g) > RANK for g in letters):
            raise ValueError(f"letters must be nonzero integers in [-{RANK}, {RANK}]")
        object.__setattr__(self, "letters", _reduce(letters))

    @classmethod
    def generator(cls, i, exp=1):
        return cls((i if exp > 0 else -i,))

    def __mul__(self, other):
        return FreeWord(self.letters + other.letters)

    def inverse(self):
        return FreeWord(tuple(-g for g in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"a{g}" if g > 0 else f"a{-g}^-1" for g in self.letters)


IDENTITY_WORD = FreeWord()


@dataclass(frozen=True)
class FreeAutomorphism:
    """Endomorphism of ``F3`` given by the images of ``a1, a2, a3``."""

    images: tuple

    @classmethod
    def identity(cls):
        return cls(tuple(FreeWord.generator(i) for i in range(1, RANK + 1)))

    @classmethod
    def conjugation(cls, w):
        """``a -> w a w^-1``."""
        return cls(tuple(w * FreeWord.generator(i) * w.inverse() for i in range(1, RANK + 1)))

    def __call__(self, word):
        out = []
        for g in word.letters:
            img = self.images[abs(g) - 1]
            out.extend(img.letters if g > 0 else img.inverse().letters)
        return FreeWord(tuple(out))

    def compose(self, other):
        """``self o other``."""
        return FreeAutomorphism(tuple(self(img) for img in other.images))

    def __str__(self):
        return ", ".join(f"a{i + 1} -> {w}" for i, w in enumerate(self.images))


def _y_aut(i, exp):
    images = []
    for j in range(1, RANK + 1):
        if j == i:
            images.append(FreeWord((i,)))
        elif exp > 0:
            images.append(FreeWord((i, -j)))
        else:
            images.append(FreeWord((-j, i)))
    return FreeAutomorphism(tuple(images))


@dataclass(frozen=True)
class GroupWord:
    """Reduced word over ``y1, y2, y3`` (``alphabet="y"``) or ``X, R, S`` (``alphabet="XRS"``).

    ``letters`` holds ``(name, exponent)`` pairs with exponent ``+-1``.
    """

    alphabet: str
    letters: tuple = ()

    def __post_init__(self):
        names = _ALPHABETS.get(self.alphabet)
        if names is None:
            raise ValueError(f"unknown alphabet {self.alphabet!r}")
        letters = []
        for name, e in self.letters:
            if name not in names or e not in (1, -1):
                raise ValueError(f"bad letter {name}^{e} for alphabet {self.alphabet}")
            letters.append((name, e))
        out = []
        for g in letters:
            if out and out[-1] == (g[0], -g[1]):
                out.pop()
            else:
                out.append(g)
        object.__setattr__(self, "letters", tuple(out))

    def __mul__(self, other):
        if other.alphabet != self.alphabet:
            raise ValueError("cannot multiply words over different alphabets")
        return GroupWord(self.alphabet, self.letters + other.letters)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return GroupWord(self.alphabet, self.letters * k)

    def inverse(self):
        return GroupWord(self.alphabet, tuple((g, -e) for g, e in reversed(self.letters)))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(g if e > 0 else f"{g}^-1" for g, e in self.letters)


_ALPHABETS = {"y": ("y1", "y2", "y3"), "XRS": ("X", "R", "S")}

_TOKEN = re.compile(r"^([A-Za-z]+\d*)(?:\^(-?\d+))?$")


def _tokens(text):
    out = []
    for tok in text.replace("*", " ").split():
        match = _TOKEN.match(tok)
        if not match:
            raise ValueError(f"cannot parse token {tok!r}")
        name, exp = match.group(1), int(match.group(2) or 1)
        out.extend([(name, 1 if exp > 0 else -1)] * abs(exp))
    return out


def parse_group_word(text):
    """Parse e.g. ``"y1 y2^-1"`` or ``"X R^-1 S^3"``; ``"1"`` or ``""`` is the empty word."""
    if text.strip() in ("", "1"):
        return GroupWord("y")
    letters = _tokens(text)
    for alphabet, names in _ALPHABETS.items():
        if all(g in names for g, _ in letters):
            return GroupWord(alphabet, tuple(letters))
    raise ValueError(f"word {text!r} mixes alphabets or uses unknown generators")


def parse_free_word(text):
    """Parse e.g. ``"a1 a2^-1"``."""
    if text.strip() in ("", "1"):
        return IDENTITY_WORD
    letters = []
    for name, e in _tokens(text):
        if not re.fullmatch(r"a[1-3]", name):
            raise ValueError(f"unknown free generator {name!r}")
        letters.append(e * int(name[1]))
    return FreeWord(tuple(letters))


def y_word(*pairs):
    """``y_word((1, 1), (2, -1))`` is ``y1 y2^-1``."""
    return GroupWord("y", tuple((f"y{i}", e) for i, e in pairs))


# ---------------------------------------------------------------------------
# Translation between the two presentations
# ---------------------------------------------------------------------------

_XRS_TO_Y = {
    "S": y_word((3, -1), (2, 1)),
    "R": y_word((2, -1), (3, 1), (1, -1), (2, 1)),
    "X": y_word((3, -1), (1, 1), (3, -1)),
}


def _xrs(text):
    return parse_group_word(text)


_Y_TO_XRS = {
    "y3": _xrs("X^-1 S R^-1 S^-1"),
    "y2": _xrs("R X^-1 S R^-1 S^-1 R^-1"),
    "y1": _xrs("R^-1 X^-1 S R^-1 S^-1 R"),
}


def _substitute(word, table, alphabet):
    out = GroupWord(alphabet)
    for g, e in word.letters:
        img = table[g]
        out = out * (img if e > 0 else img.inverse())
    return out


def translate(word):
    """Rewrite an ``X, R, S`` word over ``y1, y2, y3``."""
    if word.alphabet != "XRS":
        raise ValueError("translate expects an X, R, S word")
    return _substitute(word, _XRS_TO_Y, "y")


def translate_to_xrs(word):
    """Rewrite a ``y`` word over ``X, R, S``."""
    if word.alphabet != "y":
        raise ValueError("translate_to_xrs expects a y word")
    return _substitute(word, _Y_TO_XRS, "XRS")


def _as_y(word):
    return translate(word) if word.alphabet == "XRS" else word


# ---------------------------------------------------------------------------
# The two images
# ---------------------------------------------------------------------------

def act_generator(i, exp, w):
    """Apply ``y_i^exp`` (``exp = +-1``) to the free word ``w``."""
    if i not in (1, 2, 3) or exp not in (1, -1):
        raise ValueError("generator must be y1, y2 or y3 with exponent +-1")
    return _y_aut(i, exp)(w)


def aut_of_word(word):
    """The automorphism of ``F3`` induced by ``word``; ``aut(u v) = aut(u) o aut(v)``."""
    word = _as_y(word)
    aut = FreeAutomorphism.identity()
    for g, e in word.letters:
        aut = aut.compose(_y_aut(int(g[1]), e))
    return aut


def act_word(word, w):
    return aut_of_word(word)(w)


@dataclass(frozen=True)
class Permutation4:
    """Bijection of ``{0, 1, 2, 3}`` stored as its image tuple; ``0`` labels the center vertex."""

    image: tuple

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if sorted(image) != [0, 1, 2, 3]:
            raise ValueError(f"{self.image} is not a permutation of 0..3")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls):
        return cls((0, 1, 2, 3))

    @classmethod
    def transposition(cls, a, b):
        img = [0, 1, 2, 3]
        img[a], img[b] = b, a
        return cls(tuple(img))

    def compose(self, other):
        """``self o other``."""
        return Permutation4(tuple(self.image[other.image[x]] for x in range(4)))

    def inverse(self):
        inv = [0] * 4
        for x, y in enumerate(self.image):
            inv[y] = x
        return Permutation4(tuple(inv))

    def cycles(self):
        seen, out = set(), []
        for x in range(4):
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self.image[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self.image[y]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"


def perm_image(word):
    """Image in ``S4`` under ``y_i -> (0 i)``."""
    word = _as_y(word)
    p = Permutation4.identity()
    for g, _ in word.letters:
        p = p.compose(Permutation4.transposition(0, int(g[1])))
    return p


def subgroup_order(generators):
    """Order of the subgroup of ``S4`` generated by ``generators`` (closure by search)."""
    seen = {Permutation4.identity()}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = p.compose(g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def exponent_sums(word, gens):
    """Exponent sum of each generator in ``gens`` (the image in the abelianization)."""
    return tuple(sum(e for g, e in word.letters if g == name) for name in gens)


def tau(i=1, j=2):
    """The central loop ``(y_i y_j^-1)^3``."""
    return y_word((i, 1), (j, -1)) ** 3


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    family: str
    label: str
    passed: bool


def _same_image(lhs, rhs):
    return aut_of_word(lhs) == aut_of_word(rhs) and perm_image(lhs) == perm_image(rhs)


def relation_instances():
    """Every index instantiation of the three relation families, as ``(family, label, lhs, rhs)``."""
    out = []
    pairs = list(permutations((1, 2, 3), 2))
    for (j, i), (k, m) in product(pairs, repeat=2):
        out.append(("i", f"(y{j} y{i}^-1)^3 = (y{k} y{m}^-1)^3",
                    y_word((j, 1), (i, -1)) ** 3, y_word((k, 1), (m, -1)) ** 3))
    for i, j in pairs:
        out.append(("ii", f"y{i} y{j}^-1 y{i} = y{j}^-1 y{i} y{j}^-1",
                    y_word((i, 1), (j, -1), (i, 1)), y_word((j, -1), (i, 1), (j, -1))))
    for i, j, k in permutations((1, 2, 3)):
        out.append(("iii", f"y{k} y{j}^-1 y{i} y{j}^-1 y{k} = y{j}^-1 y{i} y{j}^-1",
                    y_word((k, 1), (j, -1), (i, 1), (j, -1), (k, 1)),
                    y_word((j, -1), (i, 1), (j, -1))))
    return out


def verify_y_relations():
    """Check every relation instance in both quotients."""
    return [Check(fam, label, _same_image(lhs, rhs))
            for fam, label, lhs, rhs in relation_instances()]


def pure_subgroup_data():
    """Checks on the kernel of the map to ``S4``."""
    ident = FreeAutomorphism.identity()
    e = Permutation4.identity()
    out = []
    for i in (1, 2, 3):
        sq = y_word((i, 1), (i, 1))
        out.append(Check("pure", f"y{i}^2 -> () in S4", perm_image(sq) == e))
        out.append(Check("pure", f"y{i}^2 acts as conjugation by a{i}",
                         aut_of_word(sq) == FreeAutomorphism.conjugation(FreeWord.generator(i))))
    for i, j in permutations((1, 2, 3), 2):
        t = tau(i, j)
        out.append(Check("pure", f"(y{i} y{j}^-1)^3 acts trivially",
                         aut_of_word(t) == ident and perm_image(t) == e))
        out.append(Check("pure", f"(y{i} y{j}^-1)^6 acts trivially",
                         aut_of_word(t ** 2) == ident and perm_image(t ** 2) == e))
        half = y_word((i, 1), (j, -1), (i, 1))
        out.append(Check("pure", f"(y{i} y{j}^-1 y{i})^2 acts as tau",
                         aut_of_word(half ** 2) == ident and perm_image(half ** 2) == e))
    return out


def _translation_checks():
    out = []
    for name in ("y1", "y2", "y3"):
        w = GroupWord("y", ((name, 1),))
        back = translate(translate_to_xrs(w))
        out.append(Check("translation", f"{name} -> X,R,S -> y", _same_image(back, w)))
    for name in ("X", "R", "S"):
        w = GroupWord("XRS", ((name, 1),))
        back = translate_to_xrs(translate(w))
        out.append(Check("translation", f"{name} -> y -> X,R,S", _same_image(back, w)))
    x, r, s = (GroupWord("XRS", ((g, 1),)) for g in "XRS")
    chain = [("X^2", x ** 2), ("R^3", r ** 3), ("S^3", s ** 3), ("(SR)^3", (s * r) ** 3)]
    for (na, a), (nb, b) in zip(chain, chain[1:]):
        out.append(Check("XRS", f"{na} = {nb}", _same_image(a, b)))
    out.append(Check("XRS", "X R = R^-1 X", _same_image(x * r, r.inverse() * x)))
    return out


def _misc_checks():
    a1, a2 = FreeWord.generator(1), FreeWord.generator(2)
    gens = [Permutation4.transposition(0, i) for i in (1, 2, 3)]
    out = [
        Check("action", "y1 . a2 = a1 a2^-1", act_generator(1, 1, a2) == a1 * a2.inverse()),
        Check("action", "y1 . a1 = a1", act_generator(1, 1, a1) == a1),
        Check("S4", "(0 1), (0 2), (0 3) generate a group of order 24",
              subgroup_order(gens) == 24),
    ]
    for i in (1, 2, 3):
        out.append(Check("S4", f"y{i} -> (0 {i})",
                         perm_image(y_word((i, 1))) == Permutation4.transposition(0, i)))
    for i, j in permutations((1, 2, 3), 2):
        rel_i = y_word((i, 1), (j, -1)) ** 3 * (y_word((j, 1), (i, -1)) ** 3).inverse()
        rel_ii = y_word((i, 1), (j, -1), (i, 1)) * y_word((j, -1), (i, 1), (j, -1)).inverse()
        names = (f"y{i}", f"y{j}")
        out.append(Check("abelianization", f"relation (i) on y{i}, y{j} has exponents (6, -6)",
                         exponent_sums(rel_i, names) == (6, -6)))
        out.append(Check("abelianization", f"relation (ii) on y{i}, y{j} has exponents (1, 1)",
                         exponent_sums(rel_ii, names) == (1, 1)))
    return out


def verify_all():
    """All group checks, in a fixed order."""
    return verify_y_relations() + pure_subgroup_data() + _translation_checks() + _misc_checks()

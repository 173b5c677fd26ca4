"""Exact arithmetic in the universal enveloping algebra.

Elements are sparse rational combinations of PBW monomials.  A monomial is
an exponent tuple over the algebra's fixed basis order; the product it
denotes is b_0^e_0 b_1^e_1 ... with factors in increasing position.
Arbitrary products are rewritten into this basis by bubbling adjacent
out-of-order pairs, x y -> y x + [x, y]; each swap strictly lowers the
inversion count at fixed degree and bracket terms drop the degree, so the
rewriting terminates.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .liealg import GeneratorId, LieAlgebra

Monomial = tuple[int, ...]  # exponents indexed by basis position

NEG_INF = float("-inf")


def monomial_degree(mono: Monomial) -> int:
    return sum(mono)


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    return (sum(mono), mono)


def monomial_word(mono: Monomial) -> tuple[int, ...]:
    """Positions of the monomial's factors, in increasing order."""
    word = []
    for i, e in enumerate(mono):
        word.extend([i] * e)
    return tuple(word)


def word_monomial(dim: int, word: Sequence[int]) -> Monomial:
    expo = [0] * dim
    for p in word:
        expo[p] += 1
    return tuple(expo)


class UEAElement:
    """Sparse map from PBW monomials to nonzero exact rationals."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: LieAlgebra, terms: dict[Monomial, Fraction] | None = None):
        self.alg = alg
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = c
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, alg: LieAlgebra) -> "UEAElement":
        return cls(alg)

    @classmethod
    def one(cls, alg: LieAlgebra) -> "UEAElement":
        return cls(alg, {(0,) * alg.dim: Fraction(1)})

    @classmethod
    def generator(cls, alg: LieAlgebra, g: GeneratorId) -> "UEAElement":
        expo = [0] * alg.dim
        expo[alg.position(g)] = 1
        return cls(alg, {tuple(expo): Fraction(1)})

    # -- linear structure ---------------------------------------------
    def __add__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return UEAElement(self.alg, out)

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) - c
        return UEAElement(self.alg, out)

    def __neg__(self) -> "UEAElement":
        return UEAElement(self.alg, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "UEAElement":
        c = Fraction(c)
        return UEAElement(self.alg, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            return multiply(self.alg, self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return (isinstance(other, UEAElement) and self.alg.spec == other.alg.spec
                and self.terms == other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def __repr__(self):
        return f"UEAElement({pretty(self)})"

    def __str__(self):
        return pretty(self)


def degree(a: UEAElement):
    return a.degree()


def is_zero(a: UEAElement) -> bool:
    return a.is_zero()


def add(a: UEAElement, b: UEAElement) -> UEAElement:
    return a + b


def subtract(a: UEAElement, b: UEAElement) -> UEAElement:
    return a - b


def scale(a: UEAElement, c) -> UEAElement:
    return a.scale(c)


def _first_descent(word: tuple[int, ...]) -> int:
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            return i
    return -1


def normal_order(alg: LieAlgebra, word: Iterable[GeneratorId | int]) -> UEAElement:
    """PBW expansion of the left-to-right product of ``word``."""
    positions = tuple(
        g if isinstance(g, int) else alg.position(g) for g in word
    )
    table = alg.pair_table
    dim = alg.dim
    done: dict[Monomial, Fraction] = {}
    work: dict[tuple[int, ...], Fraction] = {positions: Fraction(1)}
    while work:
        w, c = work.popitem()
        i = _first_descent(w)
        if i < 0:
            mono = word_monomial(dim, w)
            newc = done.get(mono, Fraction(0)) + c
            if newc:
                done[mono] = newc
            elif mono in done:
                del done[mono]
            continue
        a, b = w[i], w[i + 1]
        head, tail = w[:i], w[i + 2:]
        swapped = head + (b, a) + tail
        work[swapped] = work.get(swapped, Fraction(0)) + c
        if not work[swapped]:
            del work[swapped]
        for k, ck in table[a][b]:
            shorter = head + (k,) + tail
            newc = work.get(shorter, Fraction(0)) + c * ck
            if newc:
                work[shorter] = newc
            elif shorter in work:
                del work[shorter]
    return UEAElement(alg, done)


def multiply(alg: LieAlgebra, a: UEAElement, b: UEAElement) -> UEAElement:
    """Bilinear extension of normal ordering on concatenated words."""
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        wa = monomial_word(ma)
        for mb, cb in b.terms.items():
            c = ca * cb
            wb = monomial_word(mb)
            if not wa or not wb or wa[-1] <= wb[0]:
                # concatenation already ordered: merge exponents directly
                mono = tuple(x + y for x, y in zip(ma, mb))
                newc = out.get(mono, Fraction(0)) + c
                if newc:
                    out[mono] = newc
                elif mono in out:
                    del out[mono]
            else:
                for mono, ck in normal_order(alg, wa + wb).terms.items():
                    newc = out.get(mono, Fraction(0)) + c * ck
                    if newc:
                        out[mono] = newc
                    elif mono in out:
                        del out[mono]
    return UEAElement(alg, out)


def commutator(alg: LieAlgebra, a: UEAElement, x: GeneratorId | int) -> UEAElement:
    """[a, x] = a x - x a in normal form, for a basis generator x."""
    p = x if isinstance(x, int) else alg.position(x)
    out: dict[Monomial, Fraction] = {}
    for mono, c in a.terms.items():
        w = monomial_word(mono)
        for m2, ck in normal_order(alg, w + (p,)).terms.items():
            newc = out.get(m2, Fraction(0)) + c * ck
            if newc:
                out[m2] = newc
            elif m2 in out:
                del out[m2]
        for m2, ck in normal_order(alg, (p,) + w).terms.items():
            newc = out.get(m2, Fraction(0)) - c * ck
            if newc:
                out[m2] = newc
            elif m2 in out:
                del out[m2]
    return UEAElement(alg, out)


def omega_positions(alg: LieAlgebra) -> tuple[int, ...]:
    """The involution on generators, as a permutation of basis positions.

    H and C swap, the diagonal generators (D, J and the central element)
    are fixed, and index n of each translation tower maps to 2*ell - n,
    with the towers themselves swapping when both are present.
    """
    spec = alg.spec
    n2 = spec.two_ell
    img: list[int] = [0] * alg.dim
    for g, i in alg.positions.items():
        if g.kind == "H":
            tgt = GeneratorId("C")
        elif g.kind == "C":
            tgt = GeneratorId("H")
        elif g.kind == "P":
            tgt = GeneratorId("Q" if spec.d == 2 else "P", n2 - g.index)
        elif g.kind == "Q":
            tgt = GeneratorId("P", n2 - g.index)
        else:  # D, J, M, Theta are fixed
            tgt = g
        img[i] = alg.positions[tgt]
    return tuple(img)


def omega(alg: LieAlgebra, a: UEAElement) -> UEAElement:
    """Involutive anti-automorphism: products reverse, then re-order."""
    img = omega_positions(alg)
    out: dict[Monomial, Fraction] = {}
    for mono, c in a.terms.items():
        word = tuple(img[p] for p in reversed(monomial_word(mono)))
        for m2, ck in normal_order(alg, word).terms.items():
            newc = out.get(m2, Fraction(0)) + c * ck
            if newc:
                out[m2] = newc
            elif m2 in out:
                del out[m2]
    return UEAElement(alg, out)


def from_term_list(alg: LieAlgebra,
                   terms: Iterable[tuple[object, Sequence[str]]]) -> UEAElement:
    """Build an element from (coefficient, generator-name word) pairs.

    Words need not be pre-ordered; they are normal ordered as products.
    """
    acc = UEAElement.zero(alg)
    for c, names in terms:
        word = [alg.generator(n) for n in names]
        acc = acc + normal_order(alg, word).scale(Fraction(c))
    return acc


def _mono_names(alg: LieAlgebra, mono: Monomial) -> dict[str, int]:
    return {alg.basis[i].name: e for i, e in enumerate(mono) if e}


def pretty_monomial(alg: LieAlgebra, mono: Monomial) -> str:
    if not any(mono):
        return "1"
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(alg.basis[i].name)
        elif e > 1:
            parts.append(f"{alg.basis[i].name}^{e}")
    return "*".join(parts)


def pretty(a: UEAElement) -> str:
    if not a.terms:
        return "0"
    bits = []
    for mono in sorted(a.terms, key=grlex_key, reverse=True):
        c = a.terms[mono]
        mtxt = pretty_monomial(a.alg, mono)
        if mtxt == "1":
            txt = str(abs(c))
        elif abs(c) == 1:
            txt = mtxt
        else:
            txt = f"{abs(c)}*{mtxt}"
        bits.append(("- " if c < 0 else "+ ") + txt)
    out = " ".join(bits)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def to_json_dict(a: UEAElement) -> dict:
    entries = []
    for mono in sorted(a.terms, key=grlex_key):
        entries.append({
            "monomial": _mono_names(a.alg, mono),
            "coeff": str(a.terms[mono]),
        })
    return {"terms": entries}


def to_json(a: UEAElement) -> str:
    return json.dumps(to_json_dict(a), indent=2, sort_keys=True)


def from_json_dict(alg: LieAlgebra, data: dict) -> UEAElement:
    terms: dict[Monomial, Fraction] = {}
    for entry in data["terms"]:
        expo = [0] * alg.dim
        for name, e in entry["monomial"].items():
            expo[alg.position(alg.generator(name))] = int(e)
        mono = tuple(expo)
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(entry["coeff"])
    return UEAElement(alg, terms)

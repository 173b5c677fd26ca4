"""Structure-constant Lie algebras for the centrally extended conformal
Galilei families, with exact rational arithmetic throughout.

Two families are supported:

* ``d=1`` with half-odd ``ell`` (central element ``M``),
* ``d=2`` with integer ``ell`` (exotic central element ``Theta``).

Everything here is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

SparseVec = dict[int, Fraction]  # basis position -> coefficient


class InvalidSpecError(ValueError):
    """Raised for (d, ell) pairs outside the two supported families."""


@dataclass(frozen=True)
class AlgebraSpec:
    """Parameters (d, ell) selecting one algebra from the two families."""

    d: int
    ell: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ell", Fraction(self.ell))
        if self.d not in (1, 2):
            raise InvalidSpecError(f"unsupported spatial dimension d={self.d}")
        if self.ell <= 0:
            raise InvalidSpecError(f"ell must be positive, got {self.ell}")
        if self.d == 1 and self.ell.denominator != 2:
            raise InvalidSpecError(
                f"d=1 requires half-odd ell (no central extension at ell={self.ell})"
            )
        if self.d == 2 and self.ell.denominator != 1:
            raise InvalidSpecError(
                f"d=2 requires integer ell (exotic extension), got ell={self.ell}"
            )

    @property
    def two_ell(self) -> int:
        return int(2 * self.ell)

    @property
    def dim(self) -> int:
        # 2*d*ell + d(d+1)/2 + 4 for both families
        return self.d * self.two_ell + self.d * (self.d + 1) // 2 + 4

    @property
    def central_kind(self) -> str:
        return "M" if self.d == 1 else "Theta"

    def ell_str(self) -> str:
        return str(self.ell)


def parse_spec(d: int | str, ell: int | str | Fraction) -> AlgebraSpec:
    try:
        return AlgebraSpec(int(d), Fraction(ell))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidSpecError):
            raise
        raise InvalidSpecError(f"cannot parse algebra spec d={d!r} ell={ell!r}") from exc


@dataclass(frozen=True)
class GeneratorId:
    """One basis generator; ``index`` is used only by the P/Q towers."""

    kind: str
    index: Optional[int] = None

    @property
    def name(self) -> str:
        if self.index is None:
            return self.kind
        return f"{self.kind}{self.index}"

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"GeneratorId({self.name})"


def _gen(kind: str, index: Optional[int] = None) -> GeneratorId:
    return GeneratorId(kind, index)


def central_pairing(spec: AlgebraSpec, m: int) -> int:
    """Coefficient of the central element in the degree-complementary
    bracket of the translation towers, as an exact integer.

    d=1: (-1)^(m+ell+1/2) (2ell-m)! m!    d=2: (-1)^m (2ell-m)! m!
    """
    n2 = spec.two_ell
    if not 0 <= m <= n2:
        raise ValueError(f"index {m} outside 0..{n2}")
    mag = math.factorial(n2 - m) * math.factorial(m)
    if spec.d == 1:
        sign = -1 if (m + (n2 + 1) // 2) % 2 else 1
    else:
        sign = -1 if m % 2 else 1
    return sign * mag


def _basis_d1(spec: AlgebraSpec) -> list[GeneratorId]:
    # M, P_0 .. P_{ell-3/2}, H, P_{ell-1/2}, D, P_{ell+1/2}, C, P_{ell+3/2} .. P_{2ell}
    half = (spec.two_ell - 1) // 2
    basis = [_gen("M")]
    basis += [_gen("P", n) for n in range(half)]
    basis += [_gen("H"), _gen("P", half), _gen("D"), _gen("P", half + 1), _gen("C")]
    basis += [_gen("P", n) for n in range(half + 2, spec.two_ell + 1)]
    return basis


def _basis_d2(spec: AlgebraSpec) -> list[GeneratorId]:
    # Theta, Q_0, P_0, .., Q_{l-1}, P_{l-1}, H, D, J, Q_l, P_l, C, Q_{l+1}, P_{l+1}, ..
    ell = int(spec.ell)
    basis = [_gen("Theta")]
    for n in range(ell):
        basis += [_gen("Q", n), _gen("P", n)]
    basis += [_gen("H"), _gen("D"), _gen("J"), _gen("Q", ell), _gen("P", ell), _gen("C")]
    for n in range(ell + 1, spec.two_ell + 1):
        basis += [_gen("Q", n), _gen("P", n)]
    return basis


class LieAlgebra:
    """A basis with a sparse bracket table over exact rationals.

    ``brackets`` stores [b_i, b_j] only for i < j; antisymmetry is
    synthesized on lookup.  ``pair_table`` is the dense per-pair expansion
    (both orientations) used by the normal-ordering hot path.
    """

    __slots__ = ("spec", "basis", "positions", "by_name", "brackets", "pair_table")

    def __init__(self, spec: AlgebraSpec, basis: Iterable[GeneratorId],
                 brackets: dict[tuple[int, int], SparseVec]):
        self.spec = spec
        self.basis = tuple(basis)
        self.positions = {g: i for i, g in enumerate(self.basis)}
        self.by_name = {g.name: g for g in self.basis}
        clean = {}
        for (i, j), vec in brackets.items():
            if i >= j:
                raise ValueError(f"bracket key ({i},{j}) must satisfy i < j")
            vec = {k: Fraction(c) for k, c in vec.items() if c != 0}
            if vec:
                clean[(i, j)] = vec
        self.brackets = clean
        dim = len(self.basis)
        table = [[() for _ in range(dim)] for _ in range(dim)]
        for (i, j), vec in clean.items():
            table[i][j] = tuple(sorted(vec.items()))
            table[j][i] = tuple((k, -c) for k, c in table[i][j])
        self.pair_table = tuple(tuple(row) for row in table)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def position(self, g: GeneratorId) -> int:
        return self.positions[g]

    def generator(self, name: str) -> GeneratorId:
        try:
            return self.by_name[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r} in this algebra") from None

    def central_position(self) -> int:
        return self.positions[self.by_name[self.spec.central_kind]]

    def __eq__(self, other):
        return (isinstance(other, LieAlgebra) and self.spec == other.spec
                and self.basis == other.basis and self.brackets == other.brackets)

    def __hash__(self):
        return hash((self.spec, self.basis))

    def __repr__(self):
        return f"LieAlgebra(d={self.spec.d}, ell={self.spec.ell}, dim={self.dim})"


def make_cga(spec: AlgebraSpec) -> LieAlgebra:
    """Build the centrally extended conformal Galilei algebra for ``spec``."""
    n2 = spec.two_ell
    basis = _basis_d1(spec) if spec.d == 1 else _basis_d2(spec)
    pos = {g: i for i, g in enumerate(basis)}
    brackets: dict[tuple[int, int], SparseVec] = {}

    def put(x: GeneratorId, y: GeneratorId, combo: dict[GeneratorId, int | Fraction]):
        i, j = pos[x], pos[y]
        vec = {pos[g]: Fraction(c) for g, c in combo.items() if c != 0}
        if not vec:
            return
        if i < j:
            brackets[(i, j)] = vec
        else:
            brackets[(j, i)] = {k: -c for k, c in vec.items()}

    H, D, C = _gen("H"), _gen("D"), _gen("C")
    put(D, H, {H: 2})
    put(D, C, {C: -2})
    put(C, H, {D: 1})

    towers = ["P"] if spec.d == 1 else ["Q", "P"]
    for kind in towers:
        for n in range(n2 + 1):
            g = _gen(kind, n)
            if n >= 1:
                put(H, g, {_gen(kind, n - 1): -n})
            put(D, g, {g: n2 - 2 * n})
            if n < n2:
                put(C, g, {_gen(kind, n + 1): n2 - n})

    if spec.d == 1:
        central = _gen("M")
        for m in range(n2 + 1):
            n = n2 - m
            if m < n:
                put(_gen("P", m), _gen("P", n), {central: central_pairing(spec, m)})
    else:
        central = _gen("Theta")
        J = _gen("J")
        for n in range(n2 + 1):
            put(J, _gen("Q", n), {_gen("Q", n): 1})
            put(J, _gen("P", n), {_gen("P", n): -1})
        for m in range(n2 + 1):
            put(_gen("Q", m), _gen("P", n2 - m), {central: central_pairing(spec, m)})

    return LieAlgebra(spec, basis, brackets)


def bracket(alg: LieAlgebra, x: GeneratorId, y: GeneratorId) -> SparseVec:
    """Expansion of [x, y] in the basis (total on the basis)."""
    i, j = alg.position(x), alg.position(y)
    return dict(alg.pair_table[i][j])


def _ad_vec(alg: LieAlgebra, vec: SparseVec, k: int) -> SparseVec:
    """[vec, b_k] extended linearly."""
    out: SparseVec = {}
    for i, c in vec.items():
        for u, cu in alg.pair_table[i][k]:
            newc = out.get(u, 0) + c * cu
            if newc:
                out[u] = newc
            elif u in out:
                del out[u]
    return out


def jacobi_check(alg: LieAlgebra) -> Optional[tuple[GeneratorId, GeneratorId, GeneratorId]]:
    """Exhaustive Jacobi identity check; None on pass, else the first
    failing triple in basis order."""
    dim = alg.dim
    for i in range(dim):
        for j in range(i + 1, dim):
            bij = dict(alg.pair_table[i][j])
            for k in range(j + 1, dim):
                acc = _ad_vec(alg, bij, k)
                for u, c in _ad_vec(alg, dict(alg.pair_table[j][k]), i).items():
                    acc[u] = acc.get(u, 0) + c
                for u, c in _ad_vec(alg, dict(alg.pair_table[k][i]), j).items():
                    acc[u] = acc.get(u, 0) + c
                if any(c != 0 for c in acc.values()):
                    return (alg.basis[i], alg.basis[j], alg.basis[k])
    return None


def _exact_rank(matrix: list[list[Fraction]]) -> int:
    """Row rank over the rationals by plain Gaussian elimination."""
    rows = [row[:] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] / pv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def bb_count(alg: LieAlgebra, trials: int = 5, seed: int = 0) -> int:
    """Number of generalised invariants: dim(g) minus the generic rank of
    the structure matrix C(x)_ij = sum_k c_ij^k x_k.

    The generic rank is taken as the maximum exact rank over ``trials``
    evaluations at pseudo-random integer points drawn from ``seed``.  The
    result is a lower bound on the true count; the failure probability
    (every sampled point non-generic) vanishes rapidly in ``trials``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dim = alg.dim
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        x = [Fraction(rng.randint(-10**4, 10**4)) for _ in range(dim)]
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for (i, j), vec in alg.brackets.items():
            val = sum((c * x[k] for k, c in vec.items()), Fraction(0))
            mat[i][j] = val
            mat[j][i] = -val
        best = max(best, _exact_rank(mat))
    return dim - best


def to_json_dict(alg: LieAlgebra) -> dict:
    entries = []
    for (i, j) in sorted(alg.brackets):
        vec = alg.brackets[(i, j)]
        entries.append({
            "x": alg.basis[i].name,
            "y": alg.basis[j].name,
            "value": [{"gen": alg.basis[k].name, "coeff": str(vec[k])}
                      for k in sorted(vec)],
        })
    return {
        "spec": {"d": alg.spec.d, "ell": alg.spec.ell_str()},
        "basis": [g.name for g in alg.basis],
        "brackets": entries,
    }


def to_json(alg: LieAlgebra) -> str:
    return json.dumps(to_json_dict(alg), indent=2, sort_keys=True)

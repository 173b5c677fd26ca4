"""Assembly and exact solution of the linear systems behind the Casimir
search.

Two routes produce the space of Casimir operators at a fixed grade and
degree bound:

* ``pipeline`` first keeps only ansatz combinations whose realisation as a
  differential operator collapses into the parameter-polynomial span of
  the realised diagonal operators (candidate generation), then imposes the
  symmetry and reduced-commutator conditions on the candidate span;
* ``algebraic`` imposes those conditions directly on the full ansatz.

Both paths finish with a full verification against every generator.  The
reduced conditions (omega-symmetry plus commutators with a small generator
subset) provably imply full centrality for these families; if a reduced
solution ever failed the full check that would falsify the reduction, so
it aborts loudly rather than reporting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional

from .grading import AnsatzBasis, GradeVector, default_target_grades, enumerate_ansatz, grade_of
from .liealg import AlgebraSpec, GeneratorId, LieAlgebra
from .realization import VarSet, realize_element
from .uea import Monomial, UEAElement, commutator, from_json_dict, multiply, omega, to_json_dict

Vector = tuple[Fraction, ...]


class ReducedCheckError(RuntimeError):
    """An element passing the reduced conditions failed the exhaustive
    centrality check; this contradicts the symmetry-reduction argument and
    indicates an implementation fault."""


@dataclass
class LinearSystem:
    """Sparse exact system: one column per ansatz monomial, one row per
    tagged constraint; entries reproduce the tagged coefficient exactly."""

    columns: list
    rows: list[tuple]
    matrix: list[dict[int, Fraction]]


def _integerize(row: dict[int, Fraction]) -> dict[int, int]:
    den = 1
    for c in row.values():
        den = lcm(den, c.denominator)
    ints = {k: int(c * den) for k, c in row.items() if c}
    if not ints:
        return {}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
    return ints


def nullspace(sys: LinearSystem) -> list[Vector]:
    """Nullspace basis in reduced echelon form over the columns.

    Forward elimination is fraction-free over the integers (cross
    multiplication with gcd reduction); back substitution is rational.
    Pivots are chosen deterministically: leftmost column first, then the
    smallest row tag."""
    ncols = len(sys.columns)
    active: list[tuple[int, dict[int, int]]] = []
    for idx, row in enumerate(sys.matrix):
        ints = _integerize(row)
        if ints:
            active.append((idx, ints))
    pivot_rows: list[dict[int, int]] = []
    pivot_cols: list[int] = []
    for col in range(ncols):
        best = None
        for item in active:
            if col in item[1] and (best is None or item[0] < best[0]):
                best = item
        if best is None:
            continue
        active.remove(best)
        piv = best[1]
        pv = piv[col]
        reduced: list[tuple[int, dict[int, int]]] = []
        for idx, r in active:
            a = r.get(col)
            if not a:
                reduced.append((idx, r))
                continue
            r2 = {c: pv * x for c, x in r.items()}
            for c, x in piv.items():
                v = r2.get(c, 0) - a * x
                if v:
                    r2[c] = v
                elif c in r2:
                    del r2[c]
            if r2:
                g = 0
                for v in r2.values():
                    g = gcd(g, v)
                if g > 1:
                    r2 = {c: v // g for c, v in r2.items()}
                reduced.append((idx, r2))
        active = reduced
        pivot_rows.append(piv)
        pivot_cols.append(col)

    frows = [{c: Fraction(x) for c, x in r.items()} for r in pivot_rows]
    for k in range(len(frows) - 1, -1, -1):
        col = pivot_cols[k]
        pv = frows[k][col]
        frows[k] = {c: x / pv for c, x in frows[k].items()}
        for i in range(k):
            a = frows[i].get(col)
            if a:
                for c, x in frows[k].items():
                    v = frows[i].get(c, Fraction(0)) - a * x
                    if v:
                        frows[i][c] = v
                    elif c in frows[i]:
                        del frows[i][c]

    pivot_set = set(pivot_cols)
    basis: list[Vector] = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for k, col in enumerate(pivot_cols):
            a = frows[k].get(f)
            if a:
                v[col] = -a
        basis.append(tuple(v))
    return basis


# -- span utilities over dense rational vectors ------------------------

def rref(vectors: Iterable[Vector], ncols: int) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form of a list of vectors; returns (rows,
    pivot columns), rows sorted by pivot."""
    rows: list[dict[int, Fraction]] = []
    pivots: list[int] = []
    for vec in vectors:
        cur = {i: c for i, c in enumerate(vec) if c}
        cur = _reduce_row(rows, pivots, cur)
        if not cur:
            continue
        p = min(cur)
        pv = cur[p]
        cur = {c: x / pv for c, x in cur.items()}
        for r in rows:
            a = r.get(p)
            if a:
                for c, x in cur.items():
                    v = r.get(c, Fraction(0)) - a * x
                    if v:
                        r[c] = v
                    elif c in r:
                        del r[c]
        pos = sum(1 for q in pivots if q < p)
        rows.insert(pos, cur)
        pivots.insert(pos, p)
    return rows, pivots


def _reduce_row(rows: list[dict[int, Fraction]], pivots: list[int],
                vec: dict[int, Fraction]) -> dict[int, Fraction]:
    out = dict(vec)
    for row, p in zip(rows, pivots):
        a = out.get(p)
        if a:
            for c, x in row.items():
                v = out.get(c, Fraction(0)) - a * x
                if v:
                    out[c] = v
                elif c in out:
                    del out[c]
    return out


def reduce_vector(rows: list[dict[int, Fraction]], pivots: list[int], vec: Vector) -> Vector:
    cur = _reduce_row(rows, pivots, {i: c for i, c in enumerate(vec) if c})
    return tuple(cur.get(i, Fraction(0)) for i in range(len(vec)))


def span_contains(rows, pivots, vec: Vector) -> bool:
    return not any(reduce_vector(rows, pivots, vec))


def rref_vectors(vectors: Iterable[Vector], ncols: int) -> list[Vector]:
    rows, _ = rref(vectors, ncols)
    return [tuple(r.get(i, Fraction(0)) for i in range(ncols)) for r in rows]


# -- elements <-> vectors ----------------------------------------------

def element_vector(basis: AnsatzBasis, elem: UEAElement) -> Vector:
    index = basis.index()
    vec = [Fraction(0)] * len(basis.monomials)
    for mono, c in elem.terms.items():
        try:
            vec[index[mono]] = c
        except KeyError:
            raise ValueError(
                f"element has a monomial outside the ansatz (grade/degree mismatch)"
            ) from None
    return tuple(vec)


def vector_element(alg: LieAlgebra, basis: AnsatzBasis, vec: Iterable[Fraction]) -> UEAElement:
    return UEAElement(alg, {m: c for m, c in zip(basis.monomials, vec) if c})


def primitive(elem: UEAElement) -> UEAElement:
    """Integer coefficients with gcd 1 and a positive coefficient on the
    graded-lex leading monomial."""
    if elem.is_zero():
        return elem
    den = 1
    for c in elem.terms.values():
        den = lcm(den, c.denominator)
    num = 0
    for c in elem.terms.values():
        num = gcd(num, abs(c.numerator * (den // c.denominator)))
    out = elem.scale(Fraction(den, num))
    if out.terms[out.leading_monomial()] < 0:
        out = -out
    return out


def proportional(a: UEAElement, b: UEAElement) -> bool:
    """True when a = s*b for one nonzero rational s."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return primitive(a) == primitive(b)


# -- condition systems --------------------------------------------------

def reduced_check_generators(alg: LieAlgebra) -> list[GeneratorId]:
    """Generator subset whose vanishing commutators, together with
    omega-symmetry, force commutation with the whole algebra."""
    n2 = alg.spec.two_ell
    if alg.spec.d == 1:
        return [alg.generator("H"), alg.generator(f"P{n2}")]
    return [alg.generator("H"), alg.generator("J"),
            alg.generator(f"P{n2}"), alg.generator(f"Q{n2}")]


def _monomial_element(alg: LieAlgebra, mono: Monomial) -> UEAElement:
    return UEAElement(alg, {mono: Fraction(1)})


def casimir_conditions_system(alg: LieAlgebra, basis: AnsatzBasis) -> LinearSystem:
    """Rows: omega(K) = K plus [K, g] = 0 for the reduced generator set,
    with one row per monomial appearing in a residual."""
    rows: dict[tuple, dict[int, Fraction]] = {}
    checks = reduced_check_generators(alg)
    for ci, mono in enumerate(basis.monomials):
        elem = _monomial_element(alg, mono)
        for g in checks:
            for m2, c in commutator(alg, elem, g).terms.items():
                rows.setdefault(("comm", g.name, m2), {})[ci] = c
        for m2, c in (omega(alg, elem) - elem).terms.items():
            rows.setdefault(("omega", "", m2), {})[ci] = c
    tags = sorted(rows)
    return LinearSystem(columns=list(basis.monomials), rows=tags,
                        matrix=[rows[t] for t in tags])


def _cartan_operator_basis(alg: LieAlgebra):
    """Identity plus the realised diagonal generators (D, and J for d=2).
    A Casimir acts on the realisation's lowest-weight structure through
    these, so candidate combinations are those whose realisation lies in
    their span with parameter-polynomial coefficients."""
    from .realization import DiffOp, realize_generator

    vs = VarSet.for_spec(alg.spec)
    ops = [DiffOp.identity(vs), realize_generator(alg.spec, alg.generator("D"))]
    if alg.spec.d == 2:
        ops.append(realize_generator(alg.spec, alg.generator("J")))
    return ops


def _param_monomials(vs: VarSet, max_degree: int):
    """All parameter exponent tuples of total degree <= max_degree, as
    full-length exponent tuples (variable slots zero)."""
    nv, nparams = vs.nvars, len(vs.parameters)

    def rec(k: int, remaining: int):
        if k == nparams:
            yield ()
            return
        for e in range(remaining + 1):
            for rest in rec(k + 1, remaining - e):
                yield (e,) + rest

    return [(0,) * nv + tail for tail in rec(0, max_degree)]


def realization_candidate_system(alg: LieAlgebra, basis: AnsatzBasis) -> LinearSystem:
    """Rows demand that the realised combination equals a sum of the
    diagonal operators (identity, D, and J for d=2) with
    parameter-polynomial coefficients, identically in all variables.

    Columns are the ansatz monomials followed by auxiliary columns, one
    per (diagonal operator, parameter monomial) pair; candidate vectors
    are nullspace vectors projected onto the ansatz block."""
    rows: dict[tuple, dict[int, Fraction]] = {}
    vs = VarSet.for_spec(alg.spec)
    nv = vs.nvars
    pmax = 0
    images = []
    for mono in basis.monomials:
        op = realize_element(alg, _monomial_element(alg, mono))
        images.append(op)
        for poly in op.terms.values():
            for e in poly.terms:
                pmax = max(pmax, sum(e[nv:]))
    for ci, op in enumerate(images):
        for dkey, poly in op.terms.items():
            for e, c in poly.terms.items():
                rows.setdefault(("real", dkey, e), {})[ci] = c
    ncols = len(basis.monomials)
    columns: list = list(basis.monomials)
    for bi, bop in enumerate(_cartan_operator_basis(alg)):
        for pm in _param_monomials(vs, pmax):
            ci = len(columns)
            columns.append(("aux", bi, pm))
            for dkey, poly in bop.terms.items():
                for e, c in poly.terms.items():
                    shifted = tuple(a + b for a, b in zip(e, pm))
                    # auxiliary directions are subtracted from the image
                    rows.setdefault(("real", dkey, shifted), {})[ci] = -c
    tags = sorted(rows)
    return LinearSystem(columns=columns, rows=tags,
                        matrix=[rows[t] for t in tags])


def candidate_vectors(alg: LieAlgebra, basis: AnsatzBasis) -> list[Vector]:
    sys = realization_candidate_system(alg, basis)
    n = len(basis.monomials)
    projected = [v[:n] for v in nullspace(sys)]
    return rref_vectors([v for v in projected if any(v)], n)


def candidates_via_realization(alg: LieAlgebra, grade: GradeVector,
                               max_degree: int) -> list[UEAElement]:
    """Combinations over the graded ansatz that behave like Casimirs when
    restricted to the realisation, as a reduced-echelon basis."""
    basis = enumerate_ansatz(alg, grade, max_degree)
    return [primitive(vector_element(alg, basis, v))
            for v in candidate_vectors(alg, basis)]


def verify_casimir(alg: LieAlgebra, K: UEAElement
                   ) -> Optional[tuple[GeneratorId, UEAElement]]:
    """Exhaustive centrality check; None on pass, else the first failing
    generator with its residual."""
    for g in alg.basis:
        res = commutator(alg, K, g)
        if not res.is_zero():
            return (g, res)
    return None


# -- reports -------------------------------------------------------------

@dataclass
class CasimirReport:
    """A solved Casimir subspace at one grade/degree target."""

    spec: AlgebraSpec
    grade: GradeVector
    max_degree: int
    ansatz: AnsatzBasis
    candidate_basis: Optional[list[UEAElement]]
    casimir_basis: list[UEAElement]
    canonical: list[UEAElement]
    lower_products: list[UEAElement]
    verification: dict[str, int]
    verified: bool
    provenance: str
    casimir_vectors: list[Vector] = field(default_factory=list, repr=False)
    candidate_vectors: Optional[list[Vector]] = field(default=None, repr=False)

    @property
    def candidate_dim(self) -> Optional[int]:
        if self.candidate_basis is None:
            return None
        return len(self.candidate_basis)

    @property
    def casimir_dim(self) -> int:
        return len(self.casimir_basis)

    def to_json_dict(self) -> dict:
        return {
            "spec": {"d": self.spec.d, "ell": self.spec.ell_str()},
            "grade": list(self.grade),
            "max_degree": self.max_degree,
            "canonical": [to_json_dict(e) for e in self.canonical],
            "candidate_dim": self.candidate_dim,
            "casimir_dim": self.casimir_dim,
            "verified": self.verified,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def report_elements_from_json(alg: LieAlgebra, data: dict) -> list[UEAElement]:
    """Canonical elements of a serialized report (used by verify/realize)."""
    return [from_json_dict(alg, entry) for entry in data["canonical"]]


def known_lower_casimirs(alg: LieAlgebra, max_degree: int,
                         method: str = "algebraic") -> list[tuple[UEAElement, GradeVector, int]]:
    """The central generator plus canonical Casimirs solved at strictly
    smaller default targets, as (element, grade, degree) triples."""
    central = alg.basis[alg.central_position()]
    known = [(UEAElement.generator(alg, central),
              grade_of(alg, tuple(1 if i == alg.central_position() else 0
                                  for i in range(alg.dim))), 1)]
    for g0, d0 in default_target_grades(alg.spec):
        if d0 < max_degree:
            rep = solve_casimirs(alg, g0, d0, method=method)
            for e in rep.canonical:
                known.append((e, g0, d0))
    return known


def lower_casimir_products(alg: LieAlgebra, grade: GradeVector, max_degree: int,
                           method: str = "algebraic") -> list[UEAElement]:
    """PBW expansions of all products of lower Casimirs with the target
    grade and admissible degree (the subspace quotiented away when
    presenting canonical representatives)."""
    known = known_lower_casimirs(alg, max_degree, method)
    out: list[UEAElement] = []
    exps: list[list[int]] = [[]]
    for _, g0, d0 in known:
        exps = [e + [k] for e in exps for k in range(max_degree // d0 + 1)]
    zero = tuple(0 for _ in grade)
    for e in exps:
        total_deg = sum(k * known[i][2] for i, k in enumerate(e))
        if not 1 <= total_deg <= max_degree:
            continue
        gsum = zero
        for i, k in enumerate(e):
            gsum = tuple(a + k * b for a, b in zip(gsum, known[i][1]))
        if gsum != tuple(grade):
            continue
        prod = UEAElement.one(alg)
        for i, k in enumerate(e):
            for _ in range(k):
                prod = multiply(alg, prod, known[i][0])
        out.append(prod)
    return out


def solve_casimirs(alg: LieAlgebra, grade: GradeVector, max_degree: int,
                   method: str = "pipeline") -> CasimirReport:
    """Run the search at one (grade, degree) target.

    The Casimir space is returned in reduced echelon form over the ansatz
    (identical for both methods when they agree); canonical
    representatives are the space reduced modulo products of lower
    Casimirs, primitive and with positive leading coefficient.
    """
    if method not in ("pipeline", "algebraic"):
        raise ValueError(f"unknown method {method!r}")
    basis = enumerate_ansatz(alg, grade, max_degree)
    ncols = len(basis.monomials)

    cand_vecs: Optional[list[Vector]] = None
    if method == "pipeline":
        cand_vecs = candidate_vectors(alg, basis)
        cand_elems = [vector_element(alg, basis, v) for v in cand_vecs]
        rows: dict[tuple, dict[int, Fraction]] = {}
        checks = reduced_check_generators(alg)
        for ci, elem in enumerate(cand_elems):
            for g in checks:
                for m2, c in commutator(alg, elem, g).terms.items():
                    rows.setdefault(("comm", g.name, m2), {})[ci] = c
            for m2, c in (omega(alg, elem) - elem).terms.items():
                rows.setdefault(("omega", "", m2), {})[ci] = c
        tags = sorted(rows)
        sub = LinearSystem(columns=list(range(len(cand_elems))), rows=tags,
                           matrix=[rows[t] for t in tags])
        combos = nullspace(sub)
        raw = []
        for combo in combos:
            acc = [Fraction(0)] * ncols
            for coeff, cv in zip(combo, cand_vecs):
                if coeff:
                    for i, x in enumerate(cv):
                        if x:
                            acc[i] += coeff * x
            raw.append(tuple(acc))
    else:
        raw = nullspace(casimir_conditions_system(alg, basis))

    cas_vecs = rref_vectors(raw, ncols)
    cas_elems = [vector_element(alg, basis, v) for v in cas_vecs]

    verification = {g.name: 0 for g in alg.basis}
    for e in cas_elems:
        for g in alg.basis:
            res = commutator(alg, e, g)
            if not res.is_zero():
                verification[g.name] += len(res.terms)
                raise ReducedCheckError(
                    f"reduced conditions accepted a non-Casimir: residual against "
                    f"{g.name} is {res}"
                )

    lower = lower_casimir_products(alg, grade, max_degree, method=method)
    lower_vecs = [element_vector(basis, e) for e in lower]
    lrows, lpivots = rref(lower_vecs, ncols)
    crows, cpivots = rref(cas_vecs, ncols)
    for lv in lower_vecs:
        if not span_contains(crows, cpivots, lv):
            raise ReducedCheckError("a product of lower Casimirs escaped the solved space")
    reduced = [reduce_vector(lrows, lpivots, v) for v in cas_vecs]
    canonical_vecs = rref_vectors([v for v in reduced if any(v)], ncols)
    canonical = [primitive(vector_element(alg, basis, v)) for v in canonical_vecs]

    return CasimirReport(
        spec=alg.spec,
        grade=tuple(grade),
        max_degree=max_degree,
        ansatz=basis,
        candidate_basis=None if cand_vecs is None else
            [primitive(vector_element(alg, basis, v)) for v in cand_vecs],
        casimir_basis=[primitive(e) for e in cas_elems],
        canonical=canonical,
        lower_products=[primitive(e) for e in lower],
        verification=verification,
        verified=True,
        provenance=method,
        casimir_vectors=cas_vecs,
        candidate_vectors=cand_vecs,
    )

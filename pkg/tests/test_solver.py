from fractions import Fraction

import pytest

from cgcasimir.liealg import bb_count
from cgcasimir.solver import (
    CasimirReport,
    LinearSystem,
    candidates_via_realization,
    element_vector,
    nullspace,
    primitive,
    proportional,
    reduce_vector,
    rref,
    span_contains,
    vector_element,
    verify_casimir,
)
from cgcasimir.uea import UEAElement, from_json_dict, from_term_list, multiply

import known_casimirs as kc

Fr = Fraction


def sys_from_rows(rows, ncols):
    return LinearSystem(
        columns=list(range(ncols)),
        rows=[("r", i, ()) for i in range(len(rows))],
        matrix=[{j: Fr(v) for j, v in enumerate(row) if v} for row in rows],
    )


def test_nullspace_identity():
    assert nullspace(sys_from_rows([[1, 0], [0, 1]], 2)) == []


def test_nullspace_zero_matrix():
    basis = nullspace(sys_from_rows([[0, 0, 0]], 3))
    assert basis == [
        (Fr(1), Fr(0), Fr(0)),
        (Fr(0), Fr(1), Fr(0)),
        (Fr(0), Fr(0), Fr(1)),
    ]


def test_nullspace_hand_checked():
    basis = nullspace(sys_from_rows([[1, 1, 0], [0, 1, 1]], 3))
    assert basis == [(Fr(1), Fr(-1), Fr(1))]


def test_nullspace_kills_fraction_rows():
    rows = [[Fr(1, 2), Fr(1, 3), 0], [0, Fr(2, 7), Fr(1, 5)]]
    (vec,) = nullspace(sys_from_rows(rows, 3))
    for row in rows:
        assert sum(c * v for c, v in zip(row, vec)) == 0


def test_nullspace_randomized_rank_nullity():
    # oracle: dense Gaussian elimination over Fraction (the liealg rank
    # routine), an independent code path from the fraction-free solver
    import random

    from cgcasimir.liealg import _exact_rank

    rng = random.Random(77)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[Fr(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(ncols)]
                for _ in range(nrows)]
        basis = nullspace(sys_from_rows(rows, ncols))
        rank = _exact_rank([r[:] for r in rows])
        assert len(basis) == ncols - rank
        for vec in basis:
            for row in rows:
                assert sum(c * v for c, v in zip(row, vec)) == 0
        # returned vectors are linearly independent
        rrows, _ = rref(basis, ncols)
        assert len(rrows) == len(basis)


def test_rref_and_span_utilities():
    rows, pivots = rref([(Fr(2), Fr(4)), (Fr(1), Fr(2))], 2)
    assert pivots == [0]
    assert rows == [{0: Fr(1), 1: Fr(2)}]
    assert span_contains(rows, pivots, (Fr(3), Fr(6)))
    assert not span_contains(rows, pivots, (Fr(1), Fr(0)))
    assert reduce_vector(rows, pivots, (Fr(1), Fr(2))) == (Fr(0), Fr(0))


def test_primitive_normalization(algebra):
    alg = algebra(1, "3/2")
    k = from_term_list(alg, kc.D1_L32_QUARTIC)
    p = primitive(k.scale(Fr(-3, 7)))
    assert p == primitive(k)
    assert all(c.denominator == 1 for c in p.terms.values())
    assert p.terms[p.leading_monomial()] > 0
    assert proportional(k, p)


def test_candidates_contain_central(algebra):
    alg = algebra(2, 1)
    cands = candidates_via_realization(alg, (0, 1, 0), 1)
    theta = UEAElement.generator(alg, alg.generator("Theta"))
    assert len(cands) == 1 and proportional(cands[0], theta)


def test_candidates_d1_contain_known(solved, algebra):
    alg = algebra(1, "3/2")
    rep = solved(1, "3/2", (0, 6), 4, "pipeline")
    basis = rep.ansatz
    rows, pivots = rref(rep.candidate_vectors, len(basis.monomials))
    for terms in (kc.D1_L32_QUARTIC, [(1, ["M", "M"])]):
        e = from_term_list(alg, terms)
        assert span_contains(rows, pivots, element_vector(basis, e))


def test_candidates_d2_l2_contain_published_pair(solved, algebra):
    alg = algebra(2, 2)
    rep = solved(2, 2, (0, 2, 0), 4, "pipeline")
    basis = rep.ansatz
    rows, pivots = rref(rep.candidate_vectors, len(basis.monomials))
    ka = from_term_list(alg, kc.D2_L2_QUARTIC_CAND_A)
    kb = from_term_list(alg, kc.D2_L2_QUARTIC_CAND_B)
    assert span_contains(rows, pivots, element_vector(basis, ka))
    assert span_contains(rows, pivots, element_vector(basis, kb))


KNOWN_TARGETS = [
    (1, "3/2", (0, 6), 4, ("d1_l3/2", "quartic")),
    (1, "5/2", (0, 10), 4, ("d1_l5/2", "quartic")),
    (2, 1, (0, 1, 0), 2, ("d2_l1", "quadratic")),
    (2, 2, (0, 1, 0), 2, ("d2_l2", "quadratic")),
    (2, 3, (0, 1, 0), 2, ("d2_l3", "quadratic")),
]


@pytest.mark.parametrize("d,ell,grade,deg,key", KNOWN_TARGETS)
def test_solve_reproduces_published_casimirs(d, ell, grade, deg, key, solved, algebra):
    alg = algebra(d, ell)
    rep = solved(d, ell, grade, deg, "pipeline")
    known = from_term_list(alg, kc.KNOWN[key])
    assert rep.verified
    assert len(rep.canonical) == 1
    assert proportional(rep.canonical[0], known)


@pytest.mark.parametrize("d,ell", [(1, "3/2"), (1, "5/2")])
def test_d1_quartic_space_includes_central_square(d, ell, solved, algebra):
    alg = algebra(d, ell)
    grade = (0, 2 * alg.spec.two_ell)
    rep = solved(d, ell, grade, 4, "pipeline")
    assert rep.casimir_dim == 2
    basis = rep.ansatz
    rows, pivots = rref(rep.casimir_vectors, len(basis.monomials))
    m2 = from_term_list(alg, [(1, ["M", "M"])])
    assert span_contains(rows, pivots, element_vector(basis, m2))


@pytest.mark.parametrize("ell,key", [(1, "d2_l1"), (2, "d2_l2")])
def test_d2_quartic_canonical_complement(ell, key, solved, algebra):
    alg = algebra(2, ell)
    rep = solved(2, ell, (0, 2, 0), 4, "pipeline")
    basis = rep.ansatz
    ncols = len(basis.monomials)
    known = from_term_list(alg, kc.KNOWN[(key, "quartic")])
    lrows, lpivots = rref([element_vector(basis, e) for e in rep.lower_products], ncols)
    reduced = vector_element(alg, basis, reduce_vector(
        lrows, lpivots, element_vector(basis, known)))
    assert len(rep.canonical) == 1
    assert proportional(reduced, rep.canonical[0])
    # the quotiented subspace is the central square, the product of the
    # central element with the quadratic Casimir, and its square
    assert len(rep.lower_products) == 3


def test_beyond_gated_range_d1(algebra):
    # larger ell is exposed, not gated; spot-check one value
    from cgcasimir import solve_casimirs

    alg = algebra(1, "11/2")
    rep = solve_casimirs(alg, (0, 22), 4, method="algebraic")
    assert rep.verified and rep.casimir_dim == 2 and len(rep.canonical) == 1


def test_d2_l3_quartic_display_in_canonical_complement(solved, algebra):
    # the largest published quartic, against the solved space at ell=3
    alg = algebra(2, 3)
    rep = solved(2, 3, (0, 2, 0), 4, "algebraic")
    basis = rep.ansatz
    ncols = len(basis.monomials)
    known = from_term_list(alg, kc.D2_L3_QUARTIC)
    lrows, lpivots = rref([element_vector(basis, e) for e in rep.lower_products], ncols)
    reduced = vector_element(alg, basis, reduce_vector(
        lrows, lpivots, element_vector(basis, known)))
    assert len(rep.canonical) == 1
    assert proportional(reduced, rep.canonical[0])


def test_d2_l3_quartic_path_agreement(solved):
    rp = solved(2, 3, (0, 2, 0), 4, "pipeline")
    ra = solved(2, 3, (0, 2, 0), 4, "algebraic")
    assert rp.casimir_vectors == ra.casimir_vectors
    assert rp.candidate_dim > rp.casimir_dim


def test_d2_l2_candidate_span_strictly_larger(solved, algebra):
    alg = algebra(2, 2)
    rep = solved(2, 2, (0, 2, 0), 4, "pipeline")
    assert rep.candidate_dim > rep.casimir_dim
    basis = rep.ansatz
    crows, cpivots = rref(rep.casimir_vectors, len(basis.monomials))
    ka = from_term_list(alg, kc.D2_L2_QUARTIC_CAND_A)
    kb = from_term_list(alg, kc.D2_L2_QUARTIC_CAND_B)
    assert not span_contains(crows, cpivots, element_vector(basis, ka))
    assert not span_contains(crows, cpivots, element_vector(basis, kb))
    assert span_contains(crows, cpivots, element_vector(basis, ka - kb))
    assert (ka - kb) == from_term_list(alg, kc.D2_L2_QUARTIC)


PATH_TARGETS = [
    (1, "3/2", (0, 6), 4),
    (1, "5/2", (0, 10), 4),
    (2, 1, (0, 1, 0), 2),
    (2, 2, (0, 1, 0), 2),
    (2, 3, (0, 1, 0), 2),
    (2, 1, (0, 2, 0), 4),
    (2, 2, (0, 2, 0), 4),
]


@pytest.mark.parametrize("d,ell,grade,deg", PATH_TARGETS)
def test_path_agreement(d, ell, grade, deg, solved):
    rp = solved(d, ell, grade, deg, "pipeline")
    ra = solved(d, ell, grade, deg, "algebraic")
    assert rp.casimir_vectors == ra.casimir_vectors
    assert [e.terms for e in rp.canonical] == [e.terms for e in ra.canonical]
    assert ra.candidate_dim is None and rp.candidate_dim is not None


@pytest.mark.parametrize("d,ell,grade,deg", PATH_TARGETS)
def test_casimir_span_inside_candidate_span(d, ell, grade, deg, solved):
    rep = solved(d, ell, grade, deg, "pipeline")
    ncols = len(rep.ansatz.monomials)
    rows, pivots = rref(rep.candidate_vectors, ncols)
    for vec in rep.casimir_vectors:
        assert span_contains(rows, pivots, vec)


@pytest.mark.parametrize("d,ell,grade,deg", PATH_TARGETS)
def test_full_verification_of_solved_bases(d, ell, grade, deg, solved, algebra):
    # every element satisfying the reduced conditions commutes with the
    # whole algebra, not just the checked subset
    alg = algebra(d, ell)
    rep = solved(d, ell, grade, deg, "pipeline")
    for e in rep.casimir_basis:
        assert verify_casimir(alg, e) is None


def test_verify_casimir_examples(solved, algebra):
    alg = algebra(2, 2)
    ka = from_term_list(alg, kc.D2_L2_QUARTIC_CAND_A)
    bad = verify_casimir(alg, ka)
    assert bad is not None
    gen, residual = bad
    assert not residual.is_zero()
    assert gen.name in {g.name for g in alg.basis}
    theta = UEAElement.generator(alg, alg.generator("Theta"))
    assert verify_casimir(alg, theta) is None
    assert verify_casimir(alg, from_term_list(alg, kc.D2_L2_QUARTIC)) is None


def test_count_consistency_with_bb(solved, algebra):
    # canonical Casimirs across the default targets, plus the central
    # generator, match the structure-matrix count
    for d, ells, targets in [
        (1, ["3/2", "5/2"], [((0, None), 4)]),
        (2, [1, 2], [((0, 1, 0), 2), ((0, 2, 0), 4)]),
    ]:
        for ell in ells:
            alg = algebra(d, ell)
            total = 1  # central generator
            if d == 1:
                grades = [((0, 2 * alg.spec.two_ell), 4)]
            else:
                grades = targets
            for grade, deg in grades:
                total += len(solved(d, ell, grade, deg, "pipeline").canonical)
            assert total == bb_count(alg)


def test_products_of_casimirs_are_casimirs(solved, algebra):
    alg = algebra(2, 1)
    k2 = solved(2, 1, (0, 1, 0), 2, "pipeline").canonical[0]
    theta = UEAElement.generator(alg, alg.generator("Theta"))
    assert verify_casimir(alg, multiply(alg, k2, theta)) is None
    assert verify_casimir(alg, multiply(alg, k2, k2)) is None
    alg1 = algebra(1, "3/2")
    k4 = solved(1, "3/2", (0, 6), 4, "pipeline").canonical[0]
    m = UEAElement.generator(alg1, alg1.generator("M"))
    assert verify_casimir(alg1, multiply(alg1, k4, m)) is None


def test_report_json_schema(solved, algebra):
    rep = solved(2, 1, (0, 1, 0), 2, "pipeline")
    data = rep.to_json_dict()
    assert set(data) == {"spec", "grade", "max_degree", "canonical", "candidate_dim",
                         "casimir_dim", "verified", "provenance"}
    assert data["spec"] == {"d": 2, "ell": "1"}
    assert data["grade"] == [0, 1, 0]
    assert data["verified"] is True
    assert data["provenance"] == "pipeline"
    alg = algebra(2, 1)
    parsed = [from_json_dict(alg, entry) for entry in data["canonical"]]
    assert parsed == rep.canonical


def test_element_vector_rejects_off_ansatz(solved, algebra):
    alg = algebra(2, 1)
    rep = solved(2, 1, (0, 1, 0), 2, "pipeline")
    with pytest.raises(ValueError):
        element_vector(rep.ansatz, UEAElement.generator(alg, alg.generator("H")))


def test_solve_rejects_unknown_method(algebra):
    from cgcasimir import solve_casimirs
    with pytest.raises(ValueError):
        solve_casimirs(algebra(2, 1), (0, 1, 0), 2, method="guess")

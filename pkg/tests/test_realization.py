import random
from fractions import Fraction

import pytest

from cgcasimir.liealg import GeneratorId
from cgcasimir.realization import (
    DiffOp,
    Poly,
    VarSet,
    compose,
    diffop_json_dict,
    is_parameter_scalar,
    parameter_scalar_part,
    pretty_diffop,
    realize_element,
    realize_generator,
    verify_realization,
)
from cgcasimir.uea import UEAElement, from_term_list, multiply

import known_casimirs as kc


def test_varset_layout():
    from cgcasimir import parse_spec
    vs = VarSet.for_spec(parse_spec(1, "5/2"))
    assert vs.variables == ("t", "x0", "x1", "x2")
    assert vs.parameters == ("delta", "m")
    vs2 = VarSet.for_spec(parse_spec(2, 2))
    assert vs2.variables == ("t", "x0", "x1", "x2", "y0", "y1")
    assert vs2.parameters == ("delta", "r", "theta")


def test_generator_images(algebra):
    alg = algebra(1, "3/2")
    spec = alg.spec
    vs = VarSet.for_spec(spec)
    h = realize_generator(spec, GeneratorId("H"))
    assert h == DiffOp.partial(vs, "t").scale(-1)
    assert pretty_diffop(h) == "-∂_t"
    m = realize_generator(spec, GeneratorId("M"))
    assert m == DiffOp.from_poly(Poly.symbol(vs, "m"))
    d = realize_generator(spec, GeneratorId("D"))
    expect = (DiffOp.from_poly(Poly.symbol(vs, "delta"))
              + compose(DiffOp.from_poly(Poly.symbol(vs, "t")), DiffOp.partial(vs, "t")).scale(-2)
              + compose(DiffOp.from_poly(Poly.symbol(vs, "x0")), DiffOp.partial(vs, "x0")).scale(-3)
              + compose(DiffOp.from_poly(Poly.symbol(vs, "x1")), DiffOp.partial(vs, "x1")).scale(-1))
    assert d == expect


def test_central_images_d2(algebra):
    alg = algebra(2, 1)
    theta = realize_generator(alg.spec, GeneratorId("Theta"))
    vs = VarSet.for_spec(alg.spec)
    assert theta == DiffOp.from_poly(Poly.symbol(vs, "theta")).scale(-1)


def test_compose_leibniz_base(algebra):
    vs = VarSet.for_spec(algebra(1, "3/2").spec)
    dt = DiffOp.partial(vs, "t")
    t = DiffOp.from_poly(Poly.symbol(vs, "t"))
    # d/dt ∘ t = t d/dt + 1
    assert compose(dt, t) == compose(t, dt) + DiffOp.identity(vs)
    assert compose(DiffOp.identity(vs), dt) == dt
    assert compose(dt, DiffOp.identity(vs)) == dt


def test_compose_reproduces_bracket(algebra):
    alg = algebra(1, "3/2")
    spec = alg.spec
    d = realize_generator(spec, GeneratorId("D"))
    h = realize_generator(spec, GeneratorId("H"))
    assert compose(d, h) - compose(h, d) == h.scale(2)


def _random_op(vs, rng, nterms=3):
    terms = {}
    for _ in range(nterms):
        deriv = [0] * vs.nvars
        for _ in range(rng.randint(0, 2)):
            deriv[rng.randrange(vs.nvars)] += 1
        expo = [0] * vs.nsyms
        for _ in range(rng.randint(0, 2)):
            expo[rng.randrange(vs.nsyms)] += 1
        poly = Poly(vs, {tuple(expo): Fraction(rng.randint(-3, 3), 1)})
        key = tuple(deriv)
        terms[key] = terms.get(key, Poly.zero(vs)) + poly
    return DiffOp(vs, terms)


def test_compose_associative_randomized(algebra):
    vs = VarSet.for_spec(algebra(1, "3/2").spec)
    rng = random.Random(31)
    for _ in range(25):
        a, b, c = (_random_op(vs, rng) for _ in range(3))
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


@pytest.mark.parametrize("d,ell", [(1, "1/2"), (1, "3/2"), (1, "5/2"),
                                   (2, 1), (2, 2), (2, 3)])
def test_verify_realization(d, ell, algebra):
    assert verify_realization(algebra(d, ell)) == []


def test_verify_realization_fault_injection(algebra):
    alg = algebra(1, "3/2")
    ops = {g: realize_generator(alg.spec, g) for g in alg.basis}
    ops[alg.generator("C")] = ops[alg.generator("C")].scale(-1)
    failures = verify_realization(alg, ops)
    assert failures
    assert any({x.name, y.name} == {"C", "H"} for x, y, _ in failures)


def test_realize_element_basics(algebra):
    alg = algebra(1, "3/2")
    vs = VarSet.for_spec(alg.spec)
    assert realize_element(alg, UEAElement.one(alg)) == DiffOp.identity(vs)
    m2 = from_term_list(alg, [(1, ["M", "M"])])
    op = realize_element(alg, m2)
    assert op == DiffOp.from_poly(Poly.symbol(vs, "m", 2))
    ok, residual = is_parameter_scalar(op)
    assert ok and residual.is_zero()


def test_realize_casimirs_are_parameter_scalars(algebra):
    alg = algebra(2, 1)
    k2 = from_term_list(alg, kc.D2_L1_QUADRATIC)
    op = realize_element(alg, k2)
    ok, _ = is_parameter_scalar(op)
    assert ok
    scalar = parameter_scalar_part(op)
    vs = op.vs
    assert not scalar.is_zero()
    used = {vs.sym_name(i) for e in scalar.terms for i, k in enumerate(e) if k}
    assert used <= {"r", "theta"}

    alg1 = algebra(1, "3/2")
    ok1, _ = is_parameter_scalar(realize_element(alg1, from_term_list(alg1, kc.D1_L32_QUARTIC)))
    assert ok1


def test_is_parameter_scalar_residual(algebra):
    vs = VarSet.for_spec(algebra(1, "3/2").spec)
    dt = DiffOp.partial(vs, "t")
    ok, residual = is_parameter_scalar(dt)
    assert not ok and residual == dt
    tx = DiffOp.from_poly(Poly.symbol(vs, "t"))
    ok2, residual2 = is_parameter_scalar(tx)
    assert not ok2 and residual2 == tx


def test_realize_is_morphism_randomized(algebra):
    alg = algebra(1, "3/2")
    rng = random.Random(41)
    for _ in range(15):
        terms_a = {}
        terms_b = {}
        for terms in (terms_a, terms_b):
            for _ in range(2):
                word = sorted(rng.randrange(alg.dim) for _ in range(rng.randint(0, 2)))
                expo = [0] * alg.dim
                for p in word:
                    expo[p] += 1
                terms[tuple(expo)] = Fraction(rng.randint(-3, 3), 1)
        a, b = UEAElement(alg, terms_a), UEAElement(alg, terms_b)
        assert realize_element(alg, multiply(alg, a, b)) == compose(
            realize_element(alg, a), realize_element(alg, b))


def test_casimir_image_commutes_with_generator_images(algebra):
    alg = algebra(2, 1)
    k2 = realize_element(alg, from_term_list(alg, kc.D2_L1_QUADRATIC))
    for g in alg.basis:
        img = realize_generator(alg.spec, g)
        assert (compose(k2, img) - compose(img, k2)).is_zero()


def test_diffop_json(algebra):
    alg = algebra(1, "3/2")
    op = realize_generator(alg.spec, GeneratorId("D"))
    data = diffop_json_dict(op)
    assert {"deriv": {"t": 1}, "poly": [{"monomial": {"t": 1}, "coeff": "-2"}]} in data["terms"]
    const = next(e for e in data["terms"] if e["deriv"] == {})
    assert const["poly"] == [{"monomial": {"delta": 1}, "coeff": "1"}]

import pytest

from cgcasimir import make_cga, parse_spec, solve_casimirs


@pytest.fixture(scope="session")
def algebra():
    cache = {}

    def get(d, ell):
        key = (d, str(ell))
        if key not in cache:
            cache[key] = make_cga(parse_spec(d, ell))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def solved(algebra):
    """Memoized solver runs; most tests share a handful of targets."""
    cache = {}

    def get(d, ell, grade, degree, method="pipeline"):
        key = (d, str(ell), tuple(grade), degree, method)
        if key not in cache:
            cache[key] = solve_casimirs(algebra(d, ell), grade, degree, method=method)
        return cache[key]

    return get

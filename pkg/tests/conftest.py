import pytest

from hyperpos import groebner as groebner_mod
from hyperpos.groebner import normal_form, s_polynomial
from hyperpos.polyring import parse_poly


@pytest.fixture(autouse=True)
def _no_disk_cache():
    # individual tests opt in; nothing may leak a cache dir to its neighbours
    groebner_mod.set_cache_dir(None)
    yield
    groebner_mod.set_cache_dir(None)


def parse_many(texts, nvars):
    return tuple(parse_poly(t, nvars) for t in texts)


def certify(gb):
    """Buchberger certificate: all S-polynomials of basis pairs reduce to zero."""
    gens = gb.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            spoly = s_polynomial(gens[i], gens[j], gb.order)
            assert normal_form(spoly, gb).is_zero, (i, j)

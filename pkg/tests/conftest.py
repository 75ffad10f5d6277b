import functools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fusion2.blockmat import Matrix, Shape, TypedMatrix
from fusion2.scalar import FieldSpec, Scalar, parse_field

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIELD_TEXTS = ["Q", "Q[t^2=5]", "F2", "F3", "F5", "F7", "F2[t^2+t+1]", "F3[t^2=2]"]
FIELDS = [parse_field(t) for t in FIELD_TEXTS]


@functools.lru_cache(maxsize=None)
def scalars(field: FieldSpec):
    if field.p:
        hi = field.p - 1
        b = st.integers(0, hi) if field.is_extension else st.just(0)
        return st.builds(lambda a, bb: Scalar(field, a, bb), st.integers(0, hi), b)
    q = st.fractions(min_value=-6, max_value=6, max_denominator=4)
    b = q if field.is_extension else st.just(Fraction(0))
    return st.builds(lambda a, bb: Scalar(field, a, bb), q, b)


@functools.lru_cache(maxsize=None)
def _entries(field: FieldSpec, k: int):
    """k random field elements, drawn as one flat list of primitives."""
    if field.p:
        return st.lists(st.integers(0, field.order - 1), min_size=k, max_size=k).map(
            lambda xs: [field.from_index(x) if field.is_extension else x for x in xs])
    q = st.fractions(min_value=-6, max_value=6, max_denominator=4)
    w = 2 if field.is_extension else 1
    return st.lists(q, min_size=w * k, max_size=w * k).map(
        lambda xs: [Scalar(field, *xs[w * i:w * i + w]) for i in range(k)])


@functools.lru_cache(maxsize=None)
def matrices(field: FieldSpec, rows, cols):
    """Random matrices with fixed or drawn dimensions (ints or strategies)."""
    rs = rows if isinstance(rows, st.SearchStrategy) else st.just(rows)
    cs = cols if isinstance(cols, st.SearchStrategy) else st.just(cols)

    @st.composite
    def build(draw):
        r, c = draw(rs), draw(cs)
        vals = draw(_entries(field, r * c))
        return Matrix.from_rows(field, [vals[i * c:(i + 1) * c] for i in range(r)], ncols=c)

    return build()


@functools.lru_cache(maxsize=None)
def shapes(hi: int = 2):
    return st.builds(Shape, st.integers(0, hi), st.integers(0, hi))


@functools.lru_cache(maxsize=None)
def typed(field: FieldSpec, out: Shape, inp: Shape):
    return st.builds(lambda a, b: TypedMatrix(out, inp, a, b),
                     matrices(field, out.m1, inp.m1), matrices(field, out.m2, inp.m2))


fields = st.sampled_from(FIELDS)


@pytest.fixture(params=FIELD_TEXTS)
def field(request):
    return parse_field(request.param)


@functools.lru_cache(maxsize=None)
def associators(field: FieldSpec, rule, raw: bool = True):
    from fusion2.pentagon import Associator

    k1, k2 = rule.m * rule.n, rule.m + rule.n ** 2
    return st.builds(lambda a, b: Associator(rule, a, b, raw=raw),
                     matrices(field, k1, k1), matrices(field, k2, k2))

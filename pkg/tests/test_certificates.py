import copy
import json

import pytest
import sympy as sp

from fusion2.certificates import (M_GREATER_ONE_N_ZERO, M_TWO_N_TWO, TWO_M_GREATER_N_SQUARED,
                                  check_certificate, nonexistence_certificate,
                                  nonexistence_reason)
from fusion2.fusion import FusionRule

CASES = [((2, 0), M_GREATER_ONE_N_ZERO), ((3, 0), M_GREATER_ONE_N_ZERO),
         ((5, 0), M_GREATER_ONE_N_ZERO), ((2, 1), TWO_M_GREATER_N_SQUARED),
         ((3, 1), TWO_M_GREATER_N_SQUARED), ((3, 2), TWO_M_GREATER_N_SQUARED),
         ((4, 2), TWO_M_GREATER_N_SQUARED), ((2, 2), M_TWO_N_TWO)]


@pytest.fixture(scope="module")
def certs():
    return {mn: nonexistence_certificate(FusionRule(*mn)) for mn, _ in CASES}


def test_reason_regions():
    for m in range(6):
        for n in range(6):
            if m + n == 0:
                continue
            got = nonexistence_reason(FusionRule(m, n))
            if m > 1 and n == 0:
                assert got == M_GREATER_ONE_N_ZERO
            elif m > 1 and 2 * m > n * n:
                assert got == TWO_M_GREATER_N_SQUARED
            elif (m, n) == (2, 2):
                assert got == M_TWO_N_TWO
            else:
                assert got is None
    with pytest.raises(ValueError):
        nonexistence_certificate(FusionRule(1, 1))
    with pytest.raises(ValueError):
        nonexistence_certificate(FusionRule(2, 3))


@pytest.mark.parametrize("mn,kind", CASES, ids=str)
def test_certificates_validate(certs, mn, kind):
    cert = certs[mn]
    assert cert.kind == kind
    res = check_certificate(cert)
    assert res.ok, res.steps
    assert [s[0] for s in res.steps] == [s.name for s in cert.steps]
    json.dumps(cert.to_json())


def test_n0_certificate_contents(certs):
    # I_m (x) B against I_[m]: entry (0,0) is b_11 - 1, entry (1,1) is b_11
    step = certs[(3, 0)].steps[0]
    b11 = sp.Symbol("b_1_1")
    eqs = [sp.sympify(e) for e in step.data["equations"]]
    assert {str(s) for e in eqs for s in e.free_symbols} == {str(b11)}
    assert sp.solve(eqs, dict=True) == []


def test_substitution_vectors_for_3_2(certs):
    cert = certs[(3, 2)]
    step = {s.name: s for s in cert.steps}
    assert list(step["substitute-t=p=q=k"].data["x"]) == ["1", "2", "3"]
    assert step["substitute-t=p=l,q=k"].data["l"] == {"1": 2, "2": 1, "3": 1}
    for k in range(1, 4):
        x = step["substitute-t=p=q=k"].data["x"][str(k)]
        y = step["substitute-t=p=l,q=k"].data["y"][str(k)]
        assert len(x) == len(y) == 3 + 4
        assert y[:3] == ["0"] * 3
    assert step["sylvester"].data["bound"] == 2 * 3 * 2 - 8 > 0


def _tamper(cert, fn):
    bad = copy.deepcopy(cert)
    fn(bad)
    return check_certificate(bad)


def _step(cert, name):
    return next(s for s in cert.steps if s.name == name)


TAMPERS = {
    "kind": lambda c: setattr(c, "kind", M_GREATER_ONE_N_ZERO),
    "drop-step": lambda c: c.steps.pop(2),
    "reorder": lambda c: c.steps.reverse(),
    "x-vector": lambda c: _step(c, "substitute-t=p=q=k").data["x"]["1"].__setitem__(0, "0"),
    "l-choice": lambda c: _step(c, "substitute-t=p=l,q=k").data["l"].__setitem__("1", 1),
    "uniqueness": lambda c: _step(c, "uniqueness").data["difference_head"]["2"].reverse(),
    "entries": lambda c: _step(c, "entrywise").data.__setitem__("entries", 1),
    "ranks": lambda c: _step(c, "ranks").data.__setitem__("rank_L23", 1),
}


@pytest.mark.parametrize("name", sorted(TAMPERS))
def test_tampered_lambda22_steps_rejected(certs, name):
    assert not _tamper(certs[(3, 2)], TAMPERS[name]).ok


def test_tampered_sylvester_rejected(certs):
    def fn(c):
        _step(c, "sylvester").data["inner"] = 100
    assert not _tamper(certs[(3, 2)], fn).ok


def test_tampered_m2n2_rejected(certs):
    cert = certs[(2, 2)]

    def drop_vector(c):
        _step(c, "kernel-vectors").data["vectors"].pop()

    def drop_minor(c):
        _step(c, "minors").data["minors"].pop()

    def bound(c):
        _step(c, "contradiction").data["kernel_dim"] = 3

    for fn in (drop_vector, drop_minor, bound):
        assert not _tamper(cert, fn).ok


def test_tampered_n0_rejected(certs):
    def fn(c):
        c.steps[0].data["equations"][0] = "b_1_1 - 2"
    assert not _tamper(certs[(2, 0)], fn).ok

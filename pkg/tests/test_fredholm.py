from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qspectral.dirac import SignProjectionClass
from qspectral.fredholm import (EXPECTED_TABLE, IndexNotStable, MULTIPLICITY_CAP, build_u, canonical_unitary_pairing,
                                canonical_unitary_problem, class_problem, direct_sum, generic_u_pairing, index,
                                index_table, multiplicity_pairing, multiplicity_problem, restricted_index,
                                stabilized_index, u_problem, generic_predicate, identity_problem)
from qspectral.truncation import IntWindow, TruncatedOperator, TruncationWindow

W = TruncationWindow(12, 12)


def shift_on_z(w: IntWindow, power: int) -> TruncatedOperator:
    return TruncatedOperator.from_labels(w, (((t - power,), (t,), 1) for (t,) in w.labels() if w.contains((t - power,))),
                                         margin=abs(power))


@pytest.mark.parametrize("power", [-3, -1, 0, 1, 2])
def test_toeplitz_index_oracle(power):
    """Compression of e_t -> e_{t-k} to t >= 0 has index k (kernel e_0..e_{k-1})."""
    res = stabilized_index("toeplitz", lambda w: shift_on_z(w, power), IntWindow(10),
                           lambda l: l[0] >= 0, lambda l: l[0] >= 0, guard=abs(power))
    assert res.index == power
    assert res.methods == ("exact", "exact")


def test_unstable_index_is_reported():
    zero = lambda w: TruncatedOperator.zero(w)
    with pytest.raises(IndexNotStable):
        stabilized_index("bad", zero, IntWindow(6), lambda l: l[0] >= 0, lambda l: l[0] >= 0 and l[0] % 2 == 0, 0)


def test_u_is_unitary_on_interior():
    assert u_problem(generic_predicate(), W).interior_isometric()


def test_generic_pairing():
    res = generic_u_pairing(W)
    assert res.index == 1
    assert res.kernel_dims == (1, 1) and res.cokernel_dims == (0, 0)
    assert res.status == "stable"


@pytest.mark.parametrize("kind", ["P1", "P2", "P3", "P4"])
@pytest.mark.parametrize("E", [frozenset(), frozenset({0}), frozenset({-1, 1})])
def test_class_table(kind, E):
    cls = SignProjectionClass(kind, frozenset(x for x in E if -2 < x < 2), 2)
    assert index(class_problem(cls, TruncationWindow(8, 8))).index == EXPECTED_TABLE[kind]


def test_index_table_runs_all_classes():
    table = index_table(TruncationWindow(6, 6), cutoffs=(1,))
    assert len(table) == 3 * 4
    assert {r.index for r in table} == {-1, 0, 1}


@pytest.mark.parametrize("m", [-3, -2, -1, 1, 2, 3])
def test_multiplicity_pairing(m):
    assert multiplicity_pairing(m, TruncationWindow(8, 8)).index == m


def test_multiplicity_bounds():
    with pytest.raises(ValueError):
        multiplicity_problem(0, W)
    with pytest.raises(ValueError):
        multiplicity_problem(MULTIPLICITY_CAP + 1, W)


def test_direct_sum_is_additive():
    p = u_problem(generic_predicate(), TruncationWindow(8, 8))
    assert index(direct_sum(p, p)).index == 2


def test_compact_perturbation_invariance():
    p = u_problem(generic_predicate(), TruncationWindow(8, 8))
    assert index(p.perturbed([(0, 0, 0), (0, 1, 2)])).index == 1


def test_canonical_unitary():
    prob = canonical_unitary_problem(TruncationWindow(8, 8))
    assert prob.interior_isometric()
    assert canonical_unitary_pairing(TruncationWindow(8, 8)).index == 1
    assert canonical_unitary_pairing(TruncationWindow(8, 8), "identity").index == 0
    assert canonical_unitary_pairing(TruncationWindow(8, 8), "zero").index == 0
    with pytest.raises(ValueError):
        canonical_unitary_problem(W, "other")


def test_identity_has_index_zero():
    assert index(identity_problem(generic_predicate(), TruncationWindow(6, 6))).index == 0


def test_build_u_entries():
    u = build_u(TruncationWindow(4, 4))
    # row 0 gets b, whose action at n = 0 is the bilateral shift
    assert u.entry((0, 1), (0, 2)) == 1
    assert u.entry((2, 1), (2, 1)) == 1


def test_as_dict_shape():
    d = generic_u_pairing(TruncationWindow(6, 6)).as_dict()
    assert d["windows"] == [[6, 6], [12, 12]] and d["index"] == 1

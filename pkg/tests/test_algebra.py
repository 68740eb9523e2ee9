import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypervar.algebra import (
    AlgebraError,
    FiniteAlgebra,
    Partition,
    algebra_from_json,
    algebra_to_json,
    congruence_generated,
    derived_algebra,
    evaluate,
    isomorphic,
    quotient,
    satisfies,
    trivial_algebra,
)
from hypervar.bands import free_band, word
from hypervar.hypersub import band_sigma, lattice_swap
from hypervar.lattices import chain, dual
from hypervar.terms import BANDS, LATTICES, parse_identity, parse_term

from helpers import band_tables, congruence_closure

LZ2 = FiniteAlgebra(2, BANDS, {"mul": np.array([[0, 0], [1, 1]])})
RZ2 = FiniteAlgebra(2, BANDS, {"mul": np.array([[0, 1], [0, 1]])})
SL2 = FiniteAlgebra(2, BANDS, {"mul": np.array([[0, 0], [0, 1]])})


def test_evaluate():
    t = parse_term("xyx", BANDS)
    assert evaluate(LZ2, t, {0: 1, 1: 0}) == 1
    assert evaluate(RZ2, t, {0: 1, 1: 0}) == 1
    assert evaluate(SL2, t, {0: 1, 1: 0}) == 0


def test_satisfies_with_witness():
    e = parse_identity("xy = yx", BANDS)
    assert satisfies(SL2, e)
    v = satisfies(LZ2, e)
    assert not v
    a, b = v.witness[0], v.witness[1]
    assert v.values == (a, b) and a != b
    assert "fails at" in v.describe()


def test_derived_algebra_examples():
    # the s2 (projection to y) derived algebra of LZ2 is RZ2
    assert derived_algebra(LZ2, band_sigma("s2")).same_tables(RZ2)
    assert derived_algebra(LZ2, band_sigma("s4")).same_tables(RZ2)
    assert derived_algebra(SL2, band_sigma("s4")).same_tables(SL2)


def test_invalid_tables_rejected():
    with pytest.raises(AlgebraError):
        FiniteAlgebra(2, BANDS, {"mul": np.array([[0, 2], [1, 1]])})
    with pytest.raises(AlgebraError):
        FiniteAlgebra(2, BANDS, {"mul": np.array([0, 1])})
    with pytest.raises(AlgebraError):
        FiniteAlgebra(2, BANDS, {})


def test_congruence_on_free_band_2():
    fb = free_band(2)
    xy, yx = fb.index(word("xy")), fb.index(word("yx"))
    p = congruence_generated(fb, [(xy, yx)])
    blocks = sorted(sorted(fb.label(i) for i in b) for b in p.block_lists())
    assert blocks == sorted([[word("x")], [word("y")], sorted(map(word, ["xy", "yx", "xyx", "yxy"]))])
    q = quotient(fb, p)
    assert q.size == 3
    assert satisfies(q, parse_identity("xy = yx", BANDS))


def test_quotient_labels_and_generators():
    fb = free_band(2)
    p = congruence_generated(fb, [(fb.index(word("x")), fb.index(word("y")))])
    q = quotient(fb, p)
    assert q.size == 1
    assert q.labels == (word("x"),)
    assert tuple(q.generators) == (0, 0)


def test_partition_order():
    a = Partition(np.array([0, 0, 1, 2]))
    b = Partition(np.array([5, 5, 5, 7]))
    assert a.refines(b) and not b.refines(a)
    assert Partition.discrete(4).refines(a)
    assert Partition(np.array([3, 3, 1, 0])) == Partition(np.array([0, 0, 1, 2]))


def test_isomorphic():
    assert isomorphic(LZ2, RZ2) is None
    assert isomorphic(LZ2, LZ2) is not None
    c2 = chain(2)
    phi = isomorphic(dual(c2), c2)
    assert phi is not None and list(phi) == [1, 0]
    assert isomorphic(trivial_algebra(BANDS), LZ2) is None


def test_json_round_trip():
    for alg in (LZ2, chain(3)):
        back = algebra_from_json(algebra_to_json(alg))
        assert back.same_tables(alg)
        assert back.signature == alg.signature
    with pytest.raises(AlgebraError):
        algebra_from_json('{"ops": {}}')


def test_swap_is_an_involution_on_tables():
    c = chain(4)
    assert derived_algebra(derived_algebra(c, lattice_swap()), lattice_swap()).same_tables(c)
    assert dual(c).signature == LATTICES


# -- properties against the naive closure oracle ------------------------------

SMALL_BANDS = [FiniteAlgebra(n, BANDS, {"mul": t}) for n in (3, 4) for t in band_tables(n)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_BANDS), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), max_size=3))
def test_congruence_matches_oracle(alg, raw):
    pairs = [(a % alg.size, b % alg.size) for a, b in raw]
    p = congruence_generated(alg, pairs)
    rel = congruence_closure(alg, pairs)
    for a in range(alg.size):
        for b in range(alg.size):
            assert p.same(a, b) == ((a, b) in rel)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 158), st.integers(0, 158)), min_size=1, max_size=3), st.data())
def test_congruence_monotone_and_idempotent(pairs, data):
    fb = free_band(3)
    sub = data.draw(st.lists(st.sampled_from(pairs), max_size=len(pairs)))
    big = congruence_generated(fb, pairs)
    small = congruence_generated(fb, sub)
    assert small.refines(big)
    # closing the congruence again adds nothing
    again = congruence_generated(fb, [(a, b) for b_list in big.block_lists() for a in b_list for b in b_list[:1]])
    assert again == big

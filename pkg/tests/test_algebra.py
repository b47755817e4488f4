import itertools

import numpy as np
import pytest

from graphsem.algebra import (
    FiniteLattice,
    LatticeError,
    ModalAlgebra,
    NotNormal,
    algebra_validates,
    box_image,
    build_frame_FA,
    build_graph_XL,
    canonical_map,
    check_algebra_iso,
    check_canonical_extension,
    check_canonical_map,
    check_filtidl_lemma,
    dia_image,
    enumerate_lattices,
    fi_pairs,
    filter_gen,
    filters,
    find_isomorphism,
    ideal_gen,
    ideals,
    is_filter,
    is_ideal,
    normal_boxes,
    normal_dias,
    random_modal_algebra,
)
from graphsem.frames import check_compat_parts
from graphsem.logic import parse_sequent
from graphsem.relcore import StateSet, converse


def m2():
    return FiniteLattice.from_order(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def idx(L, *labels):
    return StateSet.from_labels(L.carrier, labels)


def brute_filters(L):
    """Nonempty up-sets closed under binary meets."""
    n = len(L)
    out = []
    for bits in itertools.product([False, True], repeat=n):
        S = [i for i in range(n) if bits[i]]
        if not S:
            continue
        up = all(bits[j] for i in S for j in range(n) if L.leq[i, j])
        meet = all(bits[L.meet(i, j)] for i in S for j in S)
        if up and meet:
            out.append(frozenset(S))
    return set(out)


class TestLattices:
    def test_chain(self):
        L = FiniteLattice.chain(3)
        assert (L.bottom, L.top) == (0, 2)
        assert L.meet(1, 2) == 1 and L.join(0, 1) == 1

    def test_m2_tables(self):
        L = m2()
        a, b = L.carrier.index("a"), L.carrier.index("b")
        assert L.labels[L.meet(a, b)] == "bot"
        assert L.labels[L.join(a, b)] == "top"

    def test_not_a_lattice(self):
        # two incomparable maximal elements
        with pytest.raises(LatticeError):
            FiniteLattice.from_order(["x", "y", "z"], [("x", "y"), ("x", "z")])

    def test_not_an_order(self):
        with pytest.raises(LatticeError):
            FiniteLattice.from_order(["x", "y"], [("x", "y"), ("y", "x")])

    def test_counts(self):
        assert [len(enumerate_lattices(n)) for n in range(1, 7)] == [1, 1, 1, 2, 5, 15]

    def test_operator_counts(self):
        # with at most five elements
        boxes = sum(len(list(normal_boxes(L))) for n in range(1, 6) for L in enumerate_lattices(n))
        dias = sum(len(list(normal_dias(L))) for n in range(1, 6) for L in enumerate_lattices(n))
        assert boxes == dias == 308

    def test_isomorphism_search(self):
        L = m2()
        swapped = FiniteLattice.from_order(["bot", "b", "a", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
        phi = find_isomorphism(L, swapped)
        assert phi is not None
        assert find_isomorphism(L, FiniteLattice.chain(4)) is None


class TestFiltersIdeals:
    def test_two_chain(self):
        L = FiniteLattice.chain(2)
        assert {frozenset(F.indices()) for F in filters(L)} == {frozenset({1}), frozenset({0, 1})}
        assert len(ideals(L)) == 2

    def test_one_element(self):
        assert len(filters(FiniteLattice.chain(1))) == 1

    def test_m2_filters_against_brute_force(self):
        L = m2()
        got = {frozenset(F.indices()) for F in filters(L)}
        assert got == brute_filters(L)
        assert len(got) == 4

    def test_all_small_lattices_against_brute_force(self):
        for n in range(1, 6):
            for L in enumerate_lattices(n):
                assert {frozenset(F.indices()) for F in filters(L)} == brute_filters(L)
                assert all(is_filter(L, F) for F in filters(L))
                assert all(is_ideal(L, J) for J in ideals(L))

    def test_generation(self):
        L = m2()
        assert filter_gen(L, idx(L, "top")) == idx(L, "top")
        assert ideal_gen(L, idx(L, "a", "b")) == StateSet.full(L.carrier)
        assert ideal_gen(L, []) == idx(L, "bot")
        assert filter_gen(L, []) == idx(L, "top")
        assert filter_gen(L, idx(L, "a", "b")) == StateSet.full(L.carrier)

    def test_images(self):
        L = m2()
        A = ModalAlgebra.identity(L)
        K = idx(L, "a", "top")
        assert box_image(A, K) == K and dia_image(A, K) == K
        assert box_image(A, StateSet.empty(L.carrier)) == StateSet.empty(L.carrier)

    def test_filtidl_lemma_examples(self):
        assert check_filtidl_lemma(ModalAlgebra.identity(FiniteLattice.chain(2)))
        L = m2()
        top = np.full(4, L.top)
        assert check_filtidl_lemma(ModalAlgebra(L, top, np.arange(4)))


class TestNormality:
    def test_rejects_non_normal(self):
        L = FiniteLattice.chain(2)
        with pytest.raises(NotNormal):
            ModalAlgebra(L, np.array([0, 0]), np.arange(2))
        with pytest.raises(NotNormal):
            ModalAlgebra(L, np.arange(2), np.array([1, 1]))

    def test_adjoints(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            A = random_modal_algebra(rng, int(rng.integers(1, 7)))
            le = A.lattice.leq
            n = len(A)
            for a in range(n):
                for b in range(n):
                    assert le[A.blackdia[a], b] == le[a, A.box[b]]
                    assert le[A.dia[a], b] == le[a, A.blackbox[b]]


class TestDualGraph:
    def test_two_chain(self):
        Z, E, pairs = build_graph_XL(FiniteLattice.chain(2))
        assert [(p.F.indices(), p.J.indices()) for p in pairs] == [([1], [0])]
        assert E.is_reflexive()

    def test_one_element_has_no_states(self):
        Z, E, pairs = build_graph_XL(FiniteLattice.chain(1))
        assert len(Z) == 0
        assert check_canonical_extension(FiniteLattice.chain(1))

    def test_lenient_mode_breaks_the_one_element_case(self):
        assert not check_canonical_extension(FiniteLattice.chain(1), strict=False)

    def test_m2_states(self):
        L = m2()
        brute = [(F, J) for F in brute_filters(L) for J in brute_filters_dual(L) if not F & J]
        assert len(fi_pairs(L)) == len(brute) == 7

    def test_E_reflexive_on_all_small_lattices(self):
        for n in range(1, 6):
            for L in enumerate_lattices(n):
                _, E, _ = build_graph_XL(L)
                assert E.is_reflexive()

    def test_canonical_extension(self):
        assert check_canonical_extension(FiniteLattice.chain(2))
        assert check_canonical_extension(m2())
        for n in range(1, 6):
            for L in enumerate_lattices(n):
                assert check_canonical_extension(L)


def brute_filters_dual(L):
    n = len(L)
    out = set()
    for bits in itertools.product([False, True], repeat=n):
        S = [i for i in range(n) if bits[i]]
        if S and all(bits[j] for i in S for j in range(n) if L.leq[j, i]) and all(bits[L.join(i, j)] for i in S for j in S):
            out.add(frozenset(S))
    return out


class TestFrameFA:
    def test_identity_gives_E_and_its_converse(self):
        for L in (FiniteLattice.chain(3), m2(), *enumerate_lattices(5)):
            f = build_frame_FA(ModalAlgebra.identity(L))
            assert f.Rbox == f.E
            assert f.Rdia == converse(f.E)

    def test_constant_top_box(self):
        L = m2()
        A = ModalAlgebra(L, np.full(4, L.top), np.arange(4))
        f = build_frame_FA(A)
        # box[J] = {top} for every J, and every filter contains top, so no pair is related
        assert len(f.Rbox) == 0
        assert check_compat_parts(f.E, f.Rbox, f.Rdia).ok

    def test_random_algebras(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            A = random_modal_algebra(rng, int(rng.integers(1, 7)))
            f = build_frame_FA(A)
            assert check_compat_parts(f.E, f.Rbox, f.Rdia).ok
            assert check_filtidl_lemma(A)
            assert check_canonical_map(A)

    def test_algebra_iso_by_search(self):
        rng = np.random.default_rng(10)
        for _ in range(30):
            A = random_modal_algebra(rng, int(rng.integers(2, 6)))
            assert check_algebra_iso(A)

    def test_canonical_map_is_order_embedding(self):
        L = m2()
        f = build_frame_FA(ModalAlgebra.identity(L))
        h = canonical_map(L, f)
        for a in range(4):
            for b in range(4):
                assert (h[a].extent <= h[b].extent) == bool(L.leq[a, b])


class TestValidates:
    def test_identity_sequent(self):
        A = ModalAlgebra.identity(m2())
        assert algebra_validates(A, parse_sequent("p |- p"))

    def test_normality_valid_everywhere(self):
        rng = np.random.default_rng(12)
        seq = parse_sequent("[]p & []q |- [](p & q)")
        for _ in range(100):
            assert algebra_validates(random_modal_algebra(rng, int(rng.integers(1, 7))), seq)

    def test_T_fails_somewhere(self):
        rng = np.random.default_rng(13)
        seq = parse_sequent("[]p |- p")
        assert any(not algebra_validates(random_modal_algebra(rng, 4), seq) for _ in range(50))

    def test_cap(self):
        with pytest.raises(RuntimeError):
            algebra_validates(ModalAlgebra.identity(m2()), parse_sequent("p & q |- r"), cap=10)

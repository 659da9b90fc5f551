import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mdgc.complexes import loop_order_complex
from mdgc.differentials import assemble, assemble_matrix, delta_rep
from mdgc.graphspace import generate_basis, make_family
from mdgc.homology import (FiniteComplex, HomologyRow, format_homology, homology,
                           is_chain_map, is_quasi_isomorphism, map_matrices, mapping_cone,
                           parse_homology)
from mdgc.matrix import (SparseRationalMatrix, format_matrix, parse_matrix, rank, rank_dense,
                         rank_exact, rank_mod_p)

from oracles import dense_rank, modp_rank, sympy_rank


@st.composite
def matrices(draw, max_dim=8):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    vals = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)),
                     st.fractions(min_value=-4, max_value=4, max_denominator=3))
    return SparseRationalMatrix.from_dense([[draw(vals) for _ in range(c)] for _ in range(r)]) \
        if r and c else SparseRationalMatrix(r, c)


@st.composite
def low_rank(draw):
    # products of thin factors have predictable rank deficits
    m = draw(matrices(6))
    n = draw(matrices(6))
    if m.cols != n.rows:
        n = SparseRationalMatrix.from_dense(
            [[Fraction(draw(st.integers(-2, 2))) for _ in range(max(n.cols, 1))]
             for _ in range(m.cols)]) if m.cols else SparseRationalMatrix(0, n.cols)
    return m @ n if m.cols else m


@settings(max_examples=200, deadline=None)
@given(st.one_of(matrices(), low_rank()))
def test_rank_oracles(m):
    r = rank_exact(m)
    assert r == sympy_rank(m) == dense_rank(m) == rank_dense(m)
    assert r == rank_exact(m.transpose())
    assert rank_mod_p(m, 1_000_003) == modp_rank(m, 1_000_003) == r


def test_rank_examples():
    assert rank_exact(SparseRationalMatrix(3, 4)) == 0
    eye = SparseRationalMatrix.from_entries(5, 5, ((i, i, Fraction(1)) for i in range(5)))
    assert rank_exact(eye) == 5


def test_bad_prime_is_reported():
    m = SparseRationalMatrix.from_dense([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(8)]])
    rep = rank(m, primes=(7, 1_000_003))
    assert rep.rank == 2 and rep.bad_primes == (7,)
    half = SparseRationalMatrix.from_dense([[Fraction(1, 7)]])
    assert rank(half, primes=(7,)).bad_primes == (7,)


def test_matrix_text_round_trip():
    m = SparseRationalMatrix.from_dense([[Fraction(1, 2), 0, Fraction(-3)], [0, 0, Fraction(5, 7)]])
    text = format_matrix(m)
    assert text.splitlines()[0] == "2 3 3"
    assert parse_matrix(text) == m
    assert format_matrix(parse_matrix(text)) == text


def test_shuffled_basis_invariance():
    fam = make_family("GC", 3)
    cx = loop_order_complex(fam, 3).complex
    dims = homology(cx).dims
    rng = random.Random(7)
    for _ in range(3):
        cells = {d: rng.sample(cs, len(cs)) for d, cs in cx.cells.items()}
        cx2 = FiniteComplex(cells, name="shuffled")
        for d, cs in cells.items():
            cx2.boundary[d] = assemble(cs, cx2.index.get(d - 1, {}), len(cells.get(d - 1, [])),
                                       lambda g: delta_rep(g, fam))
        assert homology(cx2).dims == dims


def _complex(cells, boundary):
    cx = FiniteComplex(cells, name="test")
    cx.boundary.update(boundary)
    return cx


def test_homology_of_small_complexes():
    iso = _complex({0: ["a"], 1: ["b"]},
                   {1: SparseRationalMatrix.from_dense([[Fraction(2)]])})
    assert homology(iso).dims == {0: 0, 1: 0}
    zero = _complex({0: ["a", "b"], 1: ["c"]}, {})
    assert homology(zero).dims == {0: 2, 1: 1}
    bad = _complex({0: ["a"], 1: ["b"], 2: ["c"]},
                   {1: SparseRationalMatrix.from_dense([[Fraction(1)]]),
                    2: SparseRationalMatrix.from_dense([[Fraction(1)]])})
    with pytest.raises(ValueError):
        homology(bad)


@pytest.mark.parametrize("name,n,b", [("GC", 2, 2), ("GC", 3, 2), ("GC", 2, 3), ("GC", 3, 3)])
def test_cones(name, n, b):
    cx = loop_order_complex(make_family(name, n), b).complex
    ident = map_matrices(cx, cx, lambda g: {g: Fraction(1)})
    assert is_chain_map(cx, cx, ident)
    assert is_quasi_isomorphism(cx, cx, ident)
    assert all(x == 0 for x in homology(mapping_cone(cx, cx, ident)).dims.values())
    zero = map_matrices(cx, cx, lambda g: {})
    hc = homology(mapping_cone(cx, cx, zero)).dims
    h = homology(cx).dims
    # Cone_d = C_{d-1} + C_d
    for d in set(hc) | set(h):
        assert hc.get(d, 0) == h.get(d - 1, 0) + h.get(d, 0)


def test_cone_rejects_non_chain_map():
    src = _complex({0: ["a"], 1: ["b"]}, {1: SparseRationalMatrix.from_dense([[Fraction(1)]])})
    dst = _complex({0: ["x"], 1: ["y"]}, {1: SparseRationalMatrix(1, 1)})
    fm = map_matrices(src, dst, lambda g: {"x": Fraction(1)} if g == "a" else {})
    assert not is_chain_map(src, dst, fm)
    with pytest.raises(ValueError):
        mapping_cone(src, dst, fm)


@pytest.mark.parametrize("name,n,b", [("GC", 2, 3), ("GC", 3, 3), ("D1GC", 2, 2), ("O1GC", 3, 2)])
def test_euler_and_kernel_containment(name, n, b):
    fam = make_family(name, n)
    lc = loop_order_complex(fam, b, max_v=2 * b)
    res = lc.homology()
    cx = lc.complex
    assert res.euler == sum((-1) ** (d % 2) * cx.dim(d) for d in cx.cells)
    for d in cx.cells:
        if d + 1 in cx.cells:
            kernel = cx.dim(d) - res.ranks[d].rank
            assert kernel >= res.ranks[d + 1].rank
    assert not res.bad_primes()


def test_homology_table_round_trip():
    rows = [HomologyRow("GC_n2", 2, 3, 0, 0), HomologyRow("GC_n2", 2, 2, 0, 1)]
    text = format_homology(rows)
    assert text.splitlines()[0] == "family n b degree dim"
    assert sorted(parse_homology(text), key=repr) == sorted(rows, key=repr)


def test_known_gc_homology():
    gc2 = make_family("GC", 2)
    assert loop_order_complex(gc2, 2).homology().dims == {-1: 0, 0: 1}
    assert all(x == 0 for x in loop_order_complex(gc2, 3).homology().dims.values())
    gc3 = make_family("GC", 3)
    for b in (1, 2, 3):
        dims = loop_order_complex(gc3, b).homology().dims
        assert {d: x for d, x in dims.items() if x} == {-3: 1}


def test_single_stratum_rank_against_dense():
    fam = make_family("D1GC", 2)
    for v in range(2, 5):
        src = generate_basis(fam, v, v + 3)
        m = assemble_matrix(src, generate_basis(fam, v - 1, v + 2), "C")
        assert rank_exact(m) == rank_dense(m)

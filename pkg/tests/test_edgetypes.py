from fractions import Fraction

import pytest

from mdgc.core import ConfigurationError
from mdgc.edgetypes import (alternating, change_basis, check_module, dotted_vector,
                            format_module, make_sigma_fix, make_sigma_pm, make_sigma_sk,
                            make_sigma_u, parse_module, skeleton_reversal_sign,
                            solid_vector, with_thick)

HALF = Fraction(1, 2)


def all_modules():
    for n in (1, 2, 3):
        mu = -1 if n % 2 else 1
        yield make_sigma_pm(n, mu)
        yield make_sigma_pm(n, -mu)
        yield make_sigma_fix(n)
        yield make_sigma_sk(n, 6)
        for u in range(0, 4):
            for t in range(0, u + 1):
                yield make_sigma_u(n, u, t)
        yield with_thick(make_sigma_u(n, 2))


@pytest.mark.parametrize("mod", list(all_modules()), ids=lambda m: f"n{m.n}-{'/'.join(m.names)}")
def test_module_axioms(mod):
    assert check_module(mod) == []


def test_sigma_pm():
    m = make_sigma_pm(2, -1)
    assert m.rev == ((0, -1),) and m.contraction == (0,)
    assert make_sigma_pm(3, -1).contraction == (1,)
    with pytest.raises(ConfigurationError):
        make_sigma_pm(2, -1, contraction=1)


def test_sigma_fix():
    m = make_sigma_fix(3)
    assert m.rev[m[">"]] == (m["<"], 1)
    assert m.contraction[m[">"]] == 1
    assert m.contraction[m["<"]] == -1
    assert make_sigma_fix(2).contraction == (1, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_skeleton_tables(n):
    mu = -1 if n % 2 else 1
    sk = make_sigma_sk(n, 4)
    a, b = sk["><"], sk["<>"]
    assert sk.rev[a] == (a, 1 if (1 - n) % 2 == 0 else -1)
    assert sk.d(a) == {sk[">"]: 1, sk["<"]: -mu}
    assert sk.d(b) == {sk[">"]: -1, sk["<"]: mu}
    for nm in sk.names:
        assert sk.degree[sk[nm]] == len(nm) - n
        if sk.contraction[sk[nm]]:
            assert sk.degree[sk[nm]] == 1 - n


def _string_reversal_oracle(n: int, t: int) -> int:
    # reversing e_1 x_1 e_2 ... x_{t-1} e_t: count transpositions of graded items
    items = []
    for i in range(t):
        items.append(("e", i, (1 - n) % 2))
        if i < t - 1:
            items.append(("x", i, n % 2))
    rev_e = [it for it in items if it[0] == "e"][::-1]
    rev_x = [it for it in items if it[0] == "x"][::-1]
    target = []
    for i in range(t):
        target.append(rev_e[i])
        if i < t - 1:
            target.append(rev_x[i])
    pos = {it: k for k, it in enumerate(target)}
    sign = 1
    seq = [pos[it] for it in items]
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j] and items[i][2] and items[j][2]:
                sign = -sign
    return sign


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("t", range(1, 9))
def test_reversal_sign_law(n, t):
    assert skeleton_reversal_sign(n, t) == _string_reversal_oracle(n, t)


def test_reversal_listed_rows():
    for n in (2, 3):
        sk = make_sigma_sk(n, 3)
        assert sk.rev[sk[">"]] == (sk["<"], 1)
        assert sk.rev[sk["><"]][1] == (-1) ** (1 - n)
        assert sk.rev[sk["><>"]] == (sk["<><"], -1)


def test_solid_dotted():
    for n in (2, 3):
        mu = -1 if n % 2 else 1
        sk = make_sigma_sk(n, 3)
        assert solid_vector(n, 1, sk) == {sk[">"]: HALF, sk["<"]: HALF * mu}
        assert dotted_vector(n, 1, sk) == {sk[">"]: 1, sk["<"]: -mu}
        m = make_sigma_u(n, 2, 0)
        assert m.d(m["s2"]) == {m["d1"]: 1}
        assert m.d(m["d1"]) == {}
        assert m.rev[m["d1"]] == (m["d1"], -mu)
        assert m.rev[m["s1"]] == (m["s1"], mu)


@pytest.mark.parametrize("n", [2, 3])
def test_basis_change_is_invertible(n):
    sk = make_sigma_sk(n, 4)
    names, named = [], []
    for t in range(1, 5):
        for nm, vec in ((f"s{t}", solid_vector(n, t, sk)), (f"d{t}", dotted_vector(n, t, sk))):
            names.append(nm)
            named.append({sk.names[i]: c for i, c in vec.items()})
    solid = change_basis(sk, names, named)
    assert check_module(solid) == []
    # differential on the new basis: s(t+1) -> d(t) -> 0, s1 -> 0
    for t in range(1, 5):
        assert solid.d(solid[f"d{t}"]) == {}
        want = {solid[f"d{t - 1}"]: 1} if t > 1 else {}
        assert solid.d(solid[f"s{t}"]) == want
    # reversal signs by length mod 4, opposite for odd n
    s_sign = {0: 1, 1: 1, 2: -1, 3: -1}
    d_sign = {0: 1, 1: -1, 2: -1, 3: 1}
    flip = -1 if n % 2 else 1
    for t in range(1, 5):
        assert solid.rev[solid[f"s{t}"]] == (solid[f"s{t}"], s_sign[t % 4] * flip)
        assert solid.rev[solid[f"d{t}"]] == (solid[f"d{t}"], d_sign[t % 4] * flip)
    # going back with the inverse vectors recovers the alternating basis exactly
    inv = []
    for nm in sk.names:
        t, first = len(nm), nm[0]
        s, d = f"s{t}", f"d{t}"
        sign = 1 if first == ">" else -1
        mu = -1 if n % 2 else 1
        if t % 2:
            inv.append({s: 1, d: HALF * sign} if first == ">" else {s: mu, d: -HALF * mu})
        else:
            inv.append({s: sign, d: HALF})
    back = change_basis(solid, list(sk.names), inv)
    assert back == sk


def test_bounded_bases():
    assert make_sigma_u(2, 0).names == ("s1",)
    assert make_sigma_u(3, 1).names == (">", "<", "s2")
    assert make_sigma_u(3, 2).names == (">", "<", "><", "<>", "s3")
    with pytest.raises(ConfigurationError):
        make_sigma_u(2, 1, 3)


def test_alternating():
    assert alternating(3, "<") == "<><"
    assert alternating(1, ">") == ">"


def test_thick_edge():
    for n in (2, 3):
        m = with_thick(make_sigma_u(n, 1))
        i = m["T"]
        assert m.degree[i] == 1 - n
        assert m.rev[i] == (i, -1 if n % 2 else 1)
        assert m.d(i) == {} and m.contraction[i] == 0


@pytest.mark.parametrize("mod", list(all_modules())[:12], ids=lambda m: f"n{m.n}-{len(m)}")
def test_table_round_trip(mod):
    text = format_module(mod)
    assert format_module(parse_module(text)) == text
    assert parse_module(text) == mod

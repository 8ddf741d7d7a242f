import numpy as np
import pytest

from acckit.gf import GF, FieldError, _DEFAULT_MODULI, parse_field

from _oracles import poly_field_mul

AXIOM_SIZES = [3, 5, 7, 9, 27, 31, 49, 81, 83]


def make_field(s):
    fields = {3: GF(3), 5: GF(5), 7: GF(7), 9: GF(3, 2), 27: GF(3, 3),
              31: GF(31), 49: GF(7, 2), 81: GF(3, 4), 83: GF(83)}
    return fields[s]


def test_enumerate_elements():
    assert GF(3).elements() == [0, 1, 2]
    assert GF(7).elements() == list(range(7))
    g9 = GF(3, 2, (1, 0, 1))
    # encoding a + 3b for coefficient vector (a, b)
    assert g9.elements() == [a + 3 * b for b in range(3) for a in range(3)]


def test_identity_conventions():
    for s in AXIOM_SIZES:
        gf = make_field(s)
        for a in gf.elements():
            assert gf.add(a, 0) == a
            assert gf.mul(a, 1) == a
            assert gf.mul(a, 0) == 0


def test_basic_arithmetic_trivial_cases():
    g3, g7 = GF(3), GF(7)
    assert g3.add(1, 2) == 0
    assert g7.mul(3, 5) == 1
    assert g7.inv(3) == 5
    assert g3.pow(2, 2) == 1


def test_extension_field_against_polynomial_oracle():
    g9 = GF(3, 2, (1, 0, 1))
    assert g9.mul(3, 3) == 2  # x * x = -1
    assert g9.pow(3, 2) == 2
    for gf in (g9, GF(3, 3), GF(7, 2), GF(2, 4)):
        for a in gf.elements():
            for b in gf.elements():
                assert gf.mul(a, b) == poly_field_mul(a, b, gf.p, gf.modulus)


def _table_triples(gf, limit_random=None):
    s = gf.s
    if limit_random is None:
        idx = np.arange(s**3, dtype=np.int64)
        a = idx // (s * s)
        b = (idx // s) % s
        c = idx % s
    else:
        rng = np.random.default_rng(20240)
        a, b, c = rng.integers(0, s, size=(3, limit_random))
    return a, b, c


@pytest.mark.parametrize("s", AXIOM_SIZES)
def test_field_axioms(s):
    gf = make_field(s)
    add, mul = gf.add_table, gf.mul_table
    a, b, c = _table_triples(gf, limit_random=None if s <= 81 else 10**5)
    # closure
    assert add.min() >= 0 and add.max() < s
    assert mul.min() >= 0 and mul.max() < s
    # commutativity
    assert np.array_equal(add, add.T)
    assert np.array_equal(mul, mul.T)
    # associativity
    assert np.array_equal(add[add[a, b], c], add[a, add[b, c]])
    assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]])
    # distributivity
    assert np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]])


@pytest.mark.parametrize("s", AXIOM_SIZES)
def test_fermat_lagrange(s):
    gf = make_field(s)
    for a in range(1, gf.s):
        assert gf.pow(a, gf.s - 1) == 1


def test_inverses_and_zero_division():
    for s in AXIOM_SIZES:
        gf = make_field(s)
        for a in range(1, gf.s):
            assert gf.mul(a, gf.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            gf.inv(0)


def test_pow_zero_convention():
    for gf in (GF(5), GF(3, 2)):
        for a in gf.elements():
            assert gf.pow(a, 0) == 1


def test_builtin_moduli_all_valid():
    for (p, e) in _DEFAULT_MODULI:
        gf = GF(p, e)
        assert gf.s == p**e
        assert gf.mul(1, 1) == 1


def test_out_of_range_elements_rejected():
    gf = GF(5)
    with pytest.raises(FieldError):
        gf.add(5, 0)
    with pytest.raises(FieldError):
        gf.mul(-1, 2)


def test_construction_errors():
    with pytest.raises(FieldError):
        GF(4)
    with pytest.raises(FieldError):
        GF(3, 0)
    with pytest.raises(FieldError):
        GF(3, 2, (2, 0, 1))  # has root 1, reducible
    with pytest.raises(FieldError):
        GF(3, 2, (1, 0, 1, 0))  # wrong length
    with pytest.raises(FieldError):
        GF(3, 2, (1, 0, 2))  # not monic
    with pytest.raises(FieldError):
        GF(2, 17)  # 2^17 over the size cap
    with pytest.raises(FieldError):
        GF(13, 2)  # no built-in modulus
    GF(13, 2, (2, 0, 1))  # but an explicit irreducible one works


def test_parse_field():
    assert parse_field("7") == GF(7)
    assert parse_field("3^2") == GF(3, 2)
    assert parse_field("3^2:1,0,1") == GF(3, 2, (1, 0, 1))
    with pytest.raises(FieldError):
        parse_field("4")
    with pytest.raises(FieldError):
        parse_field("7:1,2")
    with pytest.raises(FieldError):
        parse_field("3^x")
    assert parse_field("3^2").spec_string() == "3^2:1,0,1"


def test_fields_are_pure_and_reusable():
    g = GF(3, 2)
    before = [g.mul(a, b) for a in range(9) for b in range(9)]
    _ = [g.pow(a, 5) for a in range(9)]
    after = [g.mul(a, b) for a in range(9) for b in range(9)]
    assert before == after

import itertools
import json

import pytest

from acckit.cwcodes import (CodeError, ConstantWeightCode, check_condition_8,
                            export_code, family_from_code, greedy_lexicode,
                            import_code, stochastic_search, verify_cw_code)
from acckit.fixturegen import FIXTURE_DIR, cyclic_weight5_code


def test_greedy_small_complete():
    code = greedy_lexicode(4, 2, 2)
    assert code.N == 6  # every pair of distinct equal-weight words works
    assert verify_cw_code(code).ok


def test_greedy_deterministic():
    a = greedy_lexicode(12, 4, 3)
    b = greedy_lexicode(12, 4, 3)
    assert a.words == b.words


def test_greedy_known_sizes():
    # regression pins for the deterministic scan; the table optima are 31
    # and >= 84, which the greedy scan does not reach on its own
    assert greedy_lexicode(21, 6, 4).N == 26
    assert greedy_lexicode(20, 6, 5).N == 71
    assert greedy_lexicode(21, 18, 13).N == 1


def test_greedy_parameter_errors():
    with pytest.raises(CodeError):
        greedy_lexicode(4, 2, 5)  # w > q
    with pytest.raises(CodeError):
        greedy_lexicode(10, 10, 4)  # d > 2w
    with pytest.warns(UserWarning):
        code = greedy_lexicode(6, 3, 3)  # odd distance rounds up
    assert code.d == 4


def test_verify_catches_defects():
    ok = ConstantWeightCode(5, 2, 2, [0b00011, 0b00101])
    assert verify_cw_code(ok).ok
    dup = ConstantWeightCode(5, 2, 2, [0b00011, 0b00011])
    v = verify_cw_code(dup)
    assert not v.ok and v.indices == (0, 1)
    wrong_weight = ConstantWeightCode(5, 2, 2, [0b00111])
    assert not verify_cw_code(wrong_weight).ok
    too_long = ConstantWeightCode(3, 2, 2, [0b1001])
    assert not verify_cw_code(too_long).ok
    close = ConstantWeightCode(6, 3, 4, [0b000111, 0b001011])
    v = verify_cw_code(close)
    assert not v.ok and "distance" in v.reason


def test_family_from_code():
    code = greedy_lexicode(4, 2, 2)
    fam = family_from_code(code)
    assert fam.n == 6 and fam.universe.v == 4
    assert all(m.bit_count() == 2 for m in fam.members)
    bad = ConstantWeightCode(5, 2, 2, [0b00011, 0b00011])
    with pytest.raises(CodeError):
        family_from_code(bad)


def test_family_intersection_bound_from_distance():
    # d = 6, w = 4: pairwise overlap at most w - d/2 = 1
    code = import_code(FIXTURE_DIR / "example5_inner_code.json")
    assert code.N == 31
    cap = code.w - code.d // 2
    for a, b in itertools.combinations(code.words, 2):
        assert (a & b).bit_count() <= cap


def test_fixture_q20_code():
    code = import_code(FIXTURE_DIR / "example3_inner_code.json")
    assert (code.q, code.N, code.d, code.w) == (20, 83, 6, 5)
    for a, b in itertools.combinations(code.words, 2):
        assert (a & b).bit_count() <= 2


def test_cyclic_generator_full_size():
    words = cyclic_weight5_code()
    assert len(words) == 84
    code = ConstantWeightCode(20, 5, 6, words)
    assert verify_cw_code(code).ok


def test_condition_8_cases():
    b1 = ConstantWeightCode(21, 4, 6, greedy_lexicode(21, 6, 4).words)
    b2 = ConstantWeightCode(21, 13, 18, greedy_lexicode(21, 18, 13).words)
    c8 = check_condition_8(b1, b2, 3)
    assert (c8.first, c8.second, c8.third) == (True, True, True)
    assert c8.all_ok

    same = greedy_lexicode(4, 2, 2)
    c8 = check_condition_8(same, same, 2)
    assert not c8.third  # w2 = 2 is not > K*w1 = 4
    assert not c8.all_ok

    singles = ConstantWeightCode(4, 1, 2, [0b0001, 0b0010])
    big = ConstantWeightCode(4, 3, 4, [0b0111])
    c8 = check_condition_8(singles, big, 5)
    assert c8.first  # K * (w1 - d1/2) = 0 < 1 for any K


def test_condition_8_length_mismatch():
    a = ConstantWeightCode(4, 1, 2, [0b0001])
    b = ConstantWeightCode(5, 3, 4, [0b00111])
    with pytest.raises(CodeError):
        check_condition_8(a, b, 2)


def test_stochastic_search_single_word():
    code = stochastic_search(21, 18, 13, 1, seed=0, budget=10)
    assert code.N == 1
    assert verify_cw_code(code).ok
    assert code.words[0].bit_count() == 13


def test_stochastic_search_reaches_greedy_optimum():
    code = stochastic_search(4, 2, 2, 6, seed=1, budget=5000)
    assert code.N == 6


def test_stochastic_search_reproducible():
    a = stochastic_search(10, 4, 3, 12, seed=9, budget=3000)
    b = stochastic_search(10, 4, 3, 12, seed=9, budget=3000)
    assert a.words == b.words
    assert verify_cw_code(a).ok


def test_stochastic_search_best_effort():
    # impossible target: only floor(9/3) = 3 pairwise-disjoint weight-3 words
    code = stochastic_search(9, 6, 3, 5, seed=0, budget=2000)
    assert 1 <= code.N < 5
    assert verify_cw_code(code).ok


def test_import_export_roundtrip(tmp_path):
    code = greedy_lexicode(10, 4, 4)
    p = tmp_path / "code.json"
    export_code(code, p)
    again = import_code(p)
    assert again.words == code.words and again.d == code.d

    t = tmp_path / "code.txt"
    export_code(code, t)
    again = import_code(t)
    assert again.words == code.words
    assert again.d >= code.d  # observed minimum distance

    data = json.loads(p.read_text())
    data["words"][0] = "1110000000"  # wrong weight
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    with pytest.raises(CodeError):
        import_code(bad)
    assert import_code(bad, verify=False).N == code.N


def test_import_rejects_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\"q\": 4}")
    with pytest.raises(CodeError):
        import_code(p)
    t = tmp_path / "bad.txt"
    t.write_text("0101\n011\n")
    with pytest.raises(CodeError):
        import_code(t)
    t2 = tmp_path / "bad2.txt"
    t2.write_text("01x1\n")
    with pytest.raises(CodeError):
        import_code(t2)

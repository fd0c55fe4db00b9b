import math

from skewbrace import golden

GROUPS = ["C12", "C6xC2", "A4", "D12", "Dic12"]


def test_size12_table():
    t = golden.braces_12()
    assert sum(t.values()) == 38
    assert [t[("A4", f)] for f in GROUPS] == [0, 2, 4, 0, 2]


def test_totals_are_consistent():
    data = golden.load_table("totals_12p")
    for r, c in data["classes"].items():
        rows = c["rows"]
        assert [sum(col) for col in zip(*rows)] == c["column_totals"]
        assert sum(map(sum, rows)) == c["total"]


def test_subtables_restrict_to_totals():
    # each class keeps the kernels k with 12/k dividing gcd(12, p - 1)
    for r in (1, 5, 7, 11):
        tot = golden.totals_12p(r)
        sub = golden.subtables_12p(r)
        for key, v in tot.items():
            got = sum(map(sum, sub[key][2])) if key in sub else 0
            assert got == v, (r, key)


def test_kernel_availability():
    sub5 = golden.subtables_12p(5)
    rows, cols, _ = sub5[("C12", "C12")]
    assert rows == cols == ["x", ":6", ":3"]
    assert math.gcd(12, 4) == 4
    sub11 = golden.subtables_12p(11)
    assert sub11[("C12", "C12")][0] == ["x", ":6"]

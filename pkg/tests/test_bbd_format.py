import pytest

from bbd.errors import ParseError
from bbd.services.bbd_format import parse, parse_many, serialize, serialize_many, to_dot
from bbd.services.constructions import complete_bipartite, directed_cycle

from conftest import X, Y, sample

D8_TEXT = """a=4
X0 -> Y0
X1 -> Y1
X2 -> Y0
X2 -> Y1
X2 -> Y2
X2 -> Y3
X3 -> Y0
X3 -> Y1
X3 -> Y2
X3 -> Y3
Y0 -> X0
Y0 -> X1
Y0 -> X2
Y0 -> X3
Y1 -> X0
Y1 -> X1
Y1 -> X2
Y1 -> X3
Y2 -> X2
Y3 -> X3
"""

D10_TEXT = """a=5
X0 -> Y0
X1 -> Y0
X1 -> Y1
X1 -> Y2
X1 -> Y3
X1 -> Y4
X2 -> Y0
X2 -> Y1
X2 -> Y2
X2 -> Y3
X2 -> Y4
X3 -> Y0
X3 -> Y1
X3 -> Y2
X3 -> Y3
X3 -> Y4
X4 -> Y4
Y0 -> X0
Y0 -> X1
Y0 -> X2
Y0 -> X3
Y1 -> X3
Y2 -> X1
Y3 -> X2
Y4 -> X1
Y4 -> X2
Y4 -> X3
Y4 -> X4
"""


def test_d8_golden(d8):
    assert serialize(d8) == D8_TEXT
    assert d8.arc_count == 20


def test_d10_golden(d10):
    assert serialize(d10) == D10_TEXT
    assert d10.arc_count == 28


def test_parse_accepts_comments_blank_lines_and_lowercase():
    d = parse("# two-cycle\n\na=1\n  x0 -> y0\n# back\nY0->X0\n")
    assert d.a == 1
    assert d.has_arc(X(0), Y(0)) and d.has_arc(Y(0), X(0))


def test_serialize_roundtrip_on_random_digraphs():
    for d in sample(200, max_a=6, seed=11):
        assert parse(serialize(d)) == d


@pytest.mark.parametrize(
    "text, line",
    [
        ("", None),
        ("X0 -> Y0\n", 1),
        ("a=2\nX0 -> X1\n", 2),
        ("a=2\nX0 -> Y2\n", 2),
        ("a=2\nX0 -> Y1\nX0 -> Y1\n", 3),
        ("# c\na=2\nX0 - Y1\n", 3),
        ("a=0\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line


def test_parse_many_splits_on_headers():
    stream = serialize_many([directed_cycle(3), complete_bipartite(2)])
    first, second = parse_many(stream)
    assert first == directed_cycle(3)
    assert second == complete_bipartite(2)


def test_to_dot_has_two_ranks(d8):
    dot = to_dot(d8)
    assert dot.startswith("digraph D {")
    assert dot.count("rank=same") == 2
    assert '"X0" -> "Y0";' in dot
    assert dot.count("->") == 20

import pytest
from hypothesis import given

from arbotails.errors import AmbiguousZero, InvalidArgument, NotAlternating, NotReduced, TreeSyntaxError
from arbotails.trees import (
    KNOWN_TREES,
    W,
    Weight,
    bipartition,
    degree,
    mirror,
    montesinos,
    parse_tree,
    pretzel,
    to_dsl,
    two_bridge,
    validate_reduced,
)

from conftest import tree_strategy


def weights(t):
    return [str(w) for w in t.weights]


def test_parse_five_two():
    t = parse_tree("(-2 (3))")
    assert weights(t) == ["-2", "3"]
    assert t.adjacency == ((1,), (0,))


def test_parse_pretzel_center():
    t = parse_tree("(-0 (3) (3) (2))")
    assert weights(t) == ["-0", "3", "3", "2"]
    assert degree(t, 0) == 3
    assert t.adjacency[0] == (1, 2, 3)


def test_single_vertex():
    t = parse_tree("(5)")
    assert weights(t) == ["5"] and degree(t, 0) == 0


def test_root_marker_roundtrips():
    t = parse_tree("root (-1 (3) (2))")
    assert t.root == 0
    assert to_dsl(t) == "root (-1 (3) (2))"


@pytest.mark.parametrize(
    "text, position",
    [("(3 (", 4), ("(3))", 3), ("((3)", 1), ("(3 x)", 3), ("", 0)],
)
def test_syntax_errors_report_position(text, position):
    with pytest.raises(TreeSyntaxError) as info:
        parse_tree(text)
    assert info.value.position == position


def test_unsigned_zero_is_ambiguous():
    with pytest.raises(AmbiguousZero):
        parse_tree("(0 (3) (3) (2))")
    with pytest.raises(InvalidArgument):
        W("0")
    assert W("+0") == Weight(0, 1)


def test_bipartition_examples():
    p = bipartition(parse_tree("(-2 (3))"))
    assert p.plus == {1} and p.minus == {0}
    p = bipartition(two_bridge([3, 1, 3]))
    assert p.plus == {1} and p.minus == {0, 2}
    with pytest.raises(NotAlternating) as info:
        bipartition(parse_tree("(2 (3))"))
    assert info.value.vertices == (0,)


def test_signed_zero_decides_side():
    assert bipartition(parse_tree("(+0 (-3) (-3) (-2))")).plus == {0}
    assert bipartition(parse_tree("(-0 (3) (3) (2))")).minus == {0}


def test_reducedness():
    assert validate_reduced(parse_tree(KNOWN_TREES["8_5"])) == []
    assert validate_reduced(parse_tree("(-0 (3))")) == [0]
    assert validate_reduced(parse_tree(KNOWN_TREES["11a_250"])) == []
    assert validate_reduced(montesinos([[4]], 0)) == [0]


def test_mirror_of_five_two():
    assert weights(mirror(parse_tree("(-2 (3))"))) == ["2", "-3"]


def test_two_bridge_family():
    assert weights(two_bridge([2, 3])) == ["-2", "3"]
    assert weights(two_bridge([3, 2])) == ["-3", "2"]
    assert to_dsl(two_bridge([3, 1, 3])) == KNOWN_TREES["7_4"]
    assert weights(two_bridge([3])) == ["-3"]
    with pytest.raises(InvalidArgument):
        two_bridge([2, 0])


def test_montesinos_family():
    assert to_dsl(montesinos([[3], [3], [2]], 1)) == KNOWN_TREES["9_16"]
    assert to_dsl(montesinos([[3], [3], [2]], 0)) == KNOWN_TREES["8_5"]
    assert to_dsl(montesinos([[2, 3], [4]], 2)) == "(-2 (2 (-3)) (4))"
    assert degree(montesinos([[2], [3], [4], [5]], 1), 0) == 4


def test_pretzel_family():
    assert to_dsl(pretzel([3, 3, 2])) == KNOWN_TREES["8_5"]
    assert weights(pretzel([3, 5, 2])) == ["-0", "3", "5", "2"]
    with pytest.raises(NotReduced):
        pretzel([2, 2])


def test_degree_examples():
    assert degree(parse_tree("(4)"), 0) == 0
    t = parse_tree("(-2 (3))")
    assert degree(t, 0) == degree(t, 1) == 1


def test_known_trees_are_alternating_and_reduced():
    for text in KNOWN_TREES.values():
        t = parse_tree(text)
        bipartition(t)
        assert validate_reduced(t) == []


@given(tree_strategy())
def test_dsl_roundtrip(t):
    # parsing renumbers vertices depth-first; the text form is the invariant
    text = to_dsl(t)
    again = parse_tree(text)
    assert to_dsl(again) == text
    assert parse_tree(to_dsl(again)) == again


@given(tree_strategy())
def test_mirror_swaps_sides(t):
    p, q = bipartition(t), bipartition(mirror(t))
    assert (q.plus, q.minus) == (p.minus, p.plus)
    assert mirror(mirror(t)) == t


@given(tree_strategy())
def test_bipartition_is_proper(t):
    p = bipartition(t)
    assert p.plus | p.minus == set(t.vertices)
    for u, v in t.edges():
        assert (u in p.plus) != (v in p.plus)

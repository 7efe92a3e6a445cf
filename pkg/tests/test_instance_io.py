import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subsetkconn.generate import GenSpec, generate
from subsetkconn.instance_io import (
    InstanceFile,
    ParseError,
    dumps_solution,
    loads_instance,
    loads_solution,
)

GOOD = """subsetkconn-instance 1
# a comment
n 4
k 1
terminals 0 3
edge 0 1 2
edge 1 3 2   # trailing comment
edge 0 2 1
edge 2 3 1
purchased 0 1
"""


def test_parse_text():
    f = loads_instance(GOOD)
    assert (f.n, f.k, f.terminals) == (4, 1, [0, 3])
    assert f.edges == [(0, 1, 2), (1, 3, 2), (0, 2, 1), (2, 3, 1)]
    assert f.purchased == [(0, 1)]
    inst = f.to_instance()
    assert inst.purchased == {(0, 1)}


def test_text_and_json_round_trip():
    f = loads_instance(GOOD)
    assert loads_instance(f.dumps_text()) == f
    assert loads_instance(f.dumps_json()) == f


def test_rooted_file():
    f = loads_instance(GOOD.replace("terminals 0 3", "terminals 3\nroot 0"))
    ri = f.to_rooted()
    assert ri.root == 0 and ri.terminals == (3,)
    with pytest.raises(Exception):
        f.to_instance()


@pytest.mark.parametrize(
    "text,line",
    [
        (GOOD.replace("edge 2 3 1", "edge 2 3 1\nedge 3 2 5"), 10),
        (GOOD.replace("edge 0 2 1", "edge 0 2 -1"), 8),
        (GOOD.replace("edge 0 2 1", "edge 0 2 x"), 8),
        (GOOD.replace("edge 0 2 1", "edge 0 9 1"), 8),
        (GOOD.replace("k 1", "k 1\nk 2"), 5),
        (GOOD.replace("n 4", "vertices 4"), 3),
        (GOOD.replace("purchased 0 1", "purchased 0 3"), 10),
        ("garbage\n", 1),
        ("subsetkconn-instance 2\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        loads_instance(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_fields():
    with pytest.raises(ParseError, match="terminals"):
        loads_instance("subsetkconn-instance 1\nn 3\nk 1\n")
    with pytest.raises(ParseError):
        loads_instance("")


def test_bad_json():
    with pytest.raises(ParseError):
        loads_instance('{"format": "other"}')
    with pytest.raises(ParseError):
        loads_instance('{"format": "subsetkconn-instance", "version": 1, "n": 3}')
    with pytest.raises(ParseError):
        loads_instance("{not json")


def test_solution_round_trip():
    edges = [(2, 3), (0, 1)]
    assert loads_solution(dumps_solution(edges)) == [(0, 1), (2, 3)]
    assert loads_solution('{"solution": [[1, 0]]}') == [(0, 1)]
    with pytest.raises(ParseError):
        loads_solution("edge 0 1\n")


@settings(max_examples=40)
@given(st.sampled_from(["random-geometric", "power-of-k-core", "padded-tree"]), st.integers(0, 10**6))
def test_generated_files_round_trip(model, seed):
    f = generate(GenSpec(model=model, n=12, num_terminals=5, k=2, seed=seed))
    assert loads_instance(f.dumps_text()) == f
    assert loads_instance(f.dumps_json()) == f
    assert InstanceFile.from_parts(f.graph(), f.terminals, f.k, f.purchased) == f

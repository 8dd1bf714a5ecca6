import json
import random

import pytest

from smodlab.frontend.cli import main
from smodlab.frontend.formulas import (Atom, Bang, Dual, Lolli, One,
                                       ParseError, Plus, Tensor, Top, With,
                                       Zero, parse_formula, print_formula)
from smodlab.frontend.interpreter import (InterpretError, interpret_formula,
                                          interpret_morphism)
from smodlab.frontend.workspace import (WorkspaceError, load_workspace,
                                        loads_workspace)
from smodlab.linmaps import compose, is_morphism

WS_TEXT = """
semiring I
cohspace A { atoms [a, b, c]; coherent (a, b); }
cohspace B { atoms [x, y]; coherent (x, y); }
pcoh P { atoms [p, q]; gen (1, 0); gen (0, 1); }
glue G { web [g, h]; u (1, 0); u (0, 1); }
module M = coherence(A)
module N = free(I, web [m1, m2])
matrix swap : N -> N = 0 1; 1 0
formula X = A -o B
"""


@pytest.fixture
def ws():
    return loads_workspace(WS_TEXT)


@pytest.fixture
def ws_file(tmp_path):
    p = tmp_path / "demo.llw"
    p.write_text(WS_TEXT)
    return str(p)


# ---------------------------------------------------------------------------
# formulas


def test_precedence():
    f = parse_formula("A -o B * C + D")
    assert isinstance(f, Lolli)
    assert isinstance(f.right, Plus)
    assert isinstance(f.right.left, Tensor)


def test_bang_needs_degree():
    assert parse_formula("!2 A") == Bang(Atom("A"), 2)
    with pytest.raises(ParseError):
        parse_formula("! A")


def test_par_desugars():
    f = parse_formula("A ⅋ B")
    assert f == Dual(Tensor(Dual(Atom("A")), Dual(Atom("B"))))


def test_units():
    assert parse_formula("1") == One()
    assert parse_formula("0") == Zero()
    assert parse_formula("T") == Top()


@pytest.mark.parametrize("bad", ["", "A -o", "(A", "A &", "2", "A ^ ^ -o", "!A"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def _random_ast(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([Atom("A"), Atom("B"), One(), Zero(), Top()])
    kind = rng.randrange(6)
    if kind == 0:
        return Tensor(_random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == 1:
        return Lolli(_random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == 2:
        return With(_random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == 3:
        return Plus(_random_ast(rng, depth - 1), _random_ast(rng, depth - 1))
    if kind == 4:
        return Dual(_random_ast(rng, depth - 1))
    return Bang(_random_ast(rng, depth - 1), rng.randrange(1, 4))


def test_print_parse_round_trip_random():
    rng = random.Random(7)
    for _ in range(500):
        ast = _random_ast(rng, 5)
        assert parse_formula(print_formula(ast)) == ast


# ---------------------------------------------------------------------------
# workspaces


def test_workspace_loads(ws):
    assert set(ws.spaces) == {"A", "B", "P"}
    assert set(ws.modules) == {"M", "N"}
    assert "swap" in ws.matrices and "X" in ws.formulas and "G" in ws.glues


def test_workspace_duplicate_name():
    with pytest.raises(WorkspaceError):
        loads_workspace(WS_TEXT + "module A = free(I, web [z])\n")


def test_workspace_bad_matrix_shape():
    with pytest.raises(WorkspaceError):
        loads_workspace("module N = free(I, web [a, b])\n"
                        "matrix f : N -> N = 1 0\n")


def test_workspace_unknown_semiring():
    with pytest.raises(WorkspaceError):
        loads_workspace("semiring Q\n")


def test_workspace_dead_atom_reported():
    with pytest.raises(WorkspaceError):
        loads_workspace("pcoh P { atoms [a, b]; gen (1, 0); }\n")


# ---------------------------------------------------------------------------
# interpreter


@pytest.mark.parametrize("text", [
    "1", "0", "T", "A", "A * B", "A -o B", "A & B", "A + B", "A^",
    "P", "P * P", "P^", "!2 P", "!2 A", "X",
])
def test_interpret_formula_everywhere(ws, text):
    den = interpret_formula(ws, parse_formula(text))
    assert den.module.semiring is not None


def test_interpret_unbound_atom(ws):
    with pytest.raises(InterpretError):
        interpret_formula(ws, parse_formula("Nope"))


def test_combinators_all_are_morphisms(ws):
    terms = [
        "id(A)", "swap", "comp(swap, swap)", "tensor(swap, id(N))",
        "pair(id(N), swap)", "proj1(A, B)", "proj2(A, B)",
        "inj1(A, B)", "inj2(A, B)", "curry(tensor(id(A), id(B)))",
        "apply(A, B)", "promote(P, 2, {p:1/2, q:1/2})",
        "derelict(P, 2)", "comult(P, 2)",
    ]
    for term in terms:
        f = interpret_morphism(ws, term)
        assert is_morphism(f).ok, term


def test_pairing_projection_identity(ws):
    mp = interpret_morphism(ws, "pair(id(N), swap)")
    pr = interpret_morphism(ws, "proj1(N, N)")
    ident = interpret_morphism(ws, "id(N)")
    assert compose(mp, pr).matrix == ident.matrix


def test_curry_apply_triangle(ws):
    f = interpret_morphism(ws, "tensor(id(A), id(B))")
    tri = interpret_morphism(
        ws, "comp(tensor(curry(tensor(id(A), id(B))), id(B)), apply(B, A * B))")
    assert sorted(f.matrix.entries) == sorted(tri.matrix.entries)


def test_morphism_type_mismatch(ws):
    with pytest.raises(InterpretError):
        interpret_morphism(ws, "comp(swap, id(A))")


# ---------------------------------------------------------------------------
# CLI


def test_cli_check_axioms():
    assert main(["check-axioms", "I"]) == 0
    assert main(["check-axioms", "nope"]) == 2


def test_cli_eval_and_show(ws_file, capsys):
    assert main(["eval", ws_file, "comp(swap, swap)"]) == 0
    assert capsys.readouterr().out.strip() == "1 0; 0 1"
    assert main(["show-matrix", ws_file, "swap"]) == 0
    assert capsys.readouterr().out.strip() == "0 1; 1 0"


def test_cli_dual_bipolar_bang(ws_file, capsys):
    assert main(["dual", ws_file, "P"]) == 0
    assert main(["bipolar", ws_file, "P", "(1/2, 1/2)"]) == 0
    assert capsys.readouterr().out.strip().endswith("true")
    assert main(["bipolar", ws_file, "P", "(1, 1)"]) == 0
    assert capsys.readouterr().out.strip().endswith("false")
    assert main(["bang", ws_file, "P", "--degree", "2"]) == 0


def test_cli_glue_and_morphism(ws_file):
    assert main(["glue-close", ws_file, "G"]) == 0
    assert main(["check-morphism", ws_file, "swap"]) == 0


def test_cli_json_format(ws_file, capsys):
    assert main(["--format", "json", "bipolar", ws_file, "P", "(1/3, 1/3)"]) == 0
    assert json.loads(capsys.readouterr().out) == {"member": True}


def test_cli_usage_errors(ws_file):
    assert main(["eval", "missing.llw", "id(A)"]) == 2
    assert main(["eval", ws_file, "comp(swap)"]) == 2


def test_cli_check_comonoid(ws_file):
    assert main(["check-comonoid", ws_file, "P", "--degree", "2"]) == 0


def test_load_workspace_from_disk(ws_file):
    ws = load_workspace(ws_file)
    assert "swap" in ws.matrices

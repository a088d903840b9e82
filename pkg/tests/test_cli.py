import io
import json

import pytest

from bigcm.cli import EXIT_BOUND, EXIT_FAIL, EXIT_OK, EXIT_USAGE, run_command
from bigcm.cli.parse import ParseError, parse_input
from bigcm.polycore import format_poly

SESSION = """\
# a small session
p: 7
vars: x y z
relations: x^3 + y^3 + z^3
ideal I: x, y
poly u: z^2
free F: 2
module M:
  x, y
  0, z
submodule N of F: [x, 0], [y, z]
map alpha: R -> F: [1, 0]
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_session():
    sess = parse_input(SESSION)
    assert sess.ring.poly_ring.p == 7
    assert [format_poly(f) for f in sess.ideals["I"]] == ["x", "y"]
    assert format_poly(sess.polys["u"]) == "z^2"
    assert sess.modules["M"].ngens == 2 and len(sess.modules["M"].relations) == 2
    F, vecs = sess.submodules["N"]
    assert F is sess.modules["F"] and len(vecs) == 2
    assert sess.maps["alpha"].target is sess.modules["F"]


def test_parse_errors():
    with pytest.raises(ParseError, match="modulus not prime"):
        parse_input("p: 6\nvars: x\n")
    with pytest.raises(ParseError) as info:
        parse_input("p: 7\nvars: x y\npoly f: x + * y\n")
    assert info.value.line == 3
    with pytest.raises(ParseError):
        parse_input("p: 7\nvars: x\nideal I: x\nideal I: x^2\n")


def test_round_trip_format():
    sess = parse_input("p: 7\nvars: x y z\npoly f: 3*x^2*y - z\n")
    text = format_poly(sess.polys["f"])
    assert text == "3*x^2*y + 6*z"
    assert format_poly(parse_input(f"p: 7\nvars: x y z\npoly f: {text}\n").polys["f"]) == text


def test_gb_output(tmp_path):
    ring_file = tmp_path / "xy.txt"
    ring_file.write_text("p: 7\nvars: x y\n")
    code, out, _ = run("gb", "--ring", str(ring_file), "x^2 - y", "y^2")
    assert code == EXIT_OK
    assert out.splitlines() == ["y^2", "x^2 + 6*y"]


def test_exit_codes():
    assert run("member", "--ring", "poly-7-xyz", "z^2", "x", "y")[0] == EXIT_FAIL
    assert run("member", "--ring", "poly-7-xyz", "x*z", "x", "y")[0] == EXIT_OK
    assert run("fclosure", "--ring", "cubic-cone-2", "--degree-bound", "0", "x", "y")[0] == EXIT_BOUND
    assert run("gb", "--ring", "no-such-ring", "x")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("gb", "--ring", "poly-7-xy", "x +")[0] == EXIT_USAGE


def test_colon_and_fclosure_output():
    code, out, _ = run("colon", "--ring", "segre-7", "a-e", "b", "d")
    assert code == EXIT_OK and "c*g" in out
    code, out, _ = run("fclosure", "--ring", "cubic-cone-2", "--json", "x", "y")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["degree_bound"] == 5


def test_check_axioms_json_is_reproducible():
    argv = ("check-axioms", "--ring", "cubic-cone-7", "--closure", "identity", "--seed", "1", "--count", "5", "--json")
    first, second = run(*argv), run(*argv)
    assert first[0] == EXIT_OK
    assert first[1] == second[1]
    data = json.loads(first[1])
    assert data["seed"] == 1 and data["count"] == 5
    assert all(r["elapsed_ms"] is None for r in data["reports"])


def test_modify_chain_with_seeded_relation():
    code, out, _ = run(
        "modify-chain", "--ring", "poly-7-xyz", "--sop", "x,y,z", "--t-max", "1", "--relation-u", "x", "--relation-us", "y", "--json"
    )
    assert code == EXIT_OK
    assert len(json.loads(out)["stages"]) == 2


@pytest.mark.slow
def test_repro_command():
    code, out, _ = run("repro-example-5-2", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["ok"] and all(c["ok"] for c in data["checks"])

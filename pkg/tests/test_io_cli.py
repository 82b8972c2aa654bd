import io
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohadt.cli import main
from cohadt.coha import sigma
from cohadt.dtseries import compute_dt_table
from cohadt.errors import AsymmetricMatrix, NegativeEntry, NotSymmetric, ParseError, UnknownVariable
from cohadt.io import (
    format_poly,
    parse_gamma,
    parse_poly,
    parse_quiver,
    quiver_digest,
    serialize_quiver,
    table_from_json,
    table_to_json,
    table_to_tsv,
)
from cohadt.poly import MultiPoly, symmetric_orbit_sum
from cohadt.quiver import Quiver


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def qfile(tmp_path):
    def make(arrows, names=None):
        names = names or [f"v{i}" for i in range(len(arrows))]
        p = tmp_path / f"q{abs(hash(str(arrows)))}.json"
        p.write_text(json.dumps({"vertices": names, "arrows": arrows}))
        return str(p)

    return make


# quiver files


def test_parse_quiver_examples():
    Q = parse_quiver('{"vertices":["v"],"arrows":[[2]]}')
    assert Q.arrows == ((2,),) and Q.names == ("v",)
    Q = parse_quiver('{"vertices":["a","b"],"arrows":[[1,2],[2,0]]}')
    assert Q.arrows == ((1, 2), (2, 0))
    with pytest.raises(AsymmetricMatrix):
        parse_quiver('{"vertices":["a","b"],"arrows":[[0,1],[2,0]]}')


def test_asymmetry_diagnostic_is_located():
    text = '{"vertices": ["a", "b"],\n "arrows": [[0, 1],\n            [2, 0]]}'
    with pytest.raises(AsymmetricMatrix) as exc:
        parse_quiver(text)
    assert (exc.value.line, exc.value.column) == (3, 14)
    assert str(exc.value).startswith("line 3, column 14:")


def test_parse_quiver_rejections():
    with pytest.raises(NegativeEntry):
        parse_quiver('{"vertices":["a"],"arrows":[[-1]]}')
    for bad in ["{", "[]", '{"vertices":["a"]}', '{"vertices":["a","a"],"arrows":[[0,0],[0,0]]}',
                '{"vertices":["a"],"arrows":[[1,2]]}', '{"vertices":["a"],"arrows":[[1.5]]}']:
        with pytest.raises(ParseError):
            parse_quiver(bad)


@st.composite
def symmetric_quivers(draw):
    n = draw(st.integers(1, 4))
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = draw(st.integers(0, 6))
    names = draw(st.lists(st.text("abcxyz_", min_size=1, max_size=4), min_size=n, max_size=n, unique=True))
    return Quiver(tuple(tuple(r) for r in a), tuple(names))


@given(symmetric_quivers())
def test_quiver_round_trip(Q):
    assert parse_quiver(serialize_quiver(Q)) == Q


# polynomials


def test_parse_poly_examples():
    Q = Quiver.loops(0)
    assert parse_poly("x[0,1] + x[0,2]", Q, (2,)) == sigma((2,))
    f = parse_poly("3/2 * x[0,1]^2 + 3/2 * x[0,2]^2", Q, (2,))
    assert f.poly.terms == {(2, 0): Fraction(3, 2), (0, 2): Fraction(3, 2)}
    with pytest.raises(UnknownVariable):
        parse_poly("x[0,3]", Q, (2,))
    with pytest.raises(UnknownVariable):
        parse_poly("x[1,1]", Q, (2,))
    with pytest.raises(NotSymmetric):
        parse_poly("x[0,1]", Q, (2,))
    with pytest.raises(ParseError):
        parse_poly("x[0,1] +", Q, (2,))
    with pytest.raises(ParseError):
        parse_poly("1/0", Q, (1,))


def test_format_poly_round_trip():
    Q = Quiver(((1, 1), (1, 1)))
    f = parse_poly("-2*x[0,1]*x[1,1] + 1/3 + x[0,1]^2 + x[0,2]^2 - 2*x[0,2]*x[1,1]^1 + x[0,1]*x[0,2]^0 + x[0,2]", Q, (2, 1))
    text = format_poly(f.poly)
    assert parse_poly(text, Q, (2, 1)) == f
    assert format_poly(MultiPoly((1,))) == "0"
    assert format_poly(MultiPoly.constant((2,), -1)) == "-1"


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_parse_poly_rejects_perturbed_symmetric(seed):
    rng = random.Random(seed)
    gamma = rng.choice([(2,), (3,), (2, 1), (1, 2), (2, 2)])
    Q = Quiver(tuple(tuple(0 for _ in gamma) for _ in gamma))
    n = sum(gamma)

    exps = [tuple(rng.randint(0, 2) for _ in range(n)) for _ in range(rng.randint(1, 3))]
    sym = symmetric_orbit_sum(gamma, exps)
    assert parse_poly(format_poly(sym), Q, gamma)
    # perturb by a monomial whose orbit is nontrivial
    while True:
        e = tuple(rng.randint(0, 2) for _ in range(n))
        orbit = symmetric_orbit_sum(gamma, [e])
        if len(orbit.terms) > 1:
            break
    bumped = sym + MultiPoly(gamma, {e: Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 3))})
    with pytest.raises(NotSymmetric):
        parse_poly(format_poly(bumped), Q, gamma)


def test_parse_gamma():
    assert parse_gamma("1,1") == (1, 1)
    assert parse_gamma("(2)") == (2,)
    with pytest.raises(ParseError):
        parse_gamma("a,b")


# tables


def test_table_serialization_round_trip():
    Q = Quiver(((1, 2), (2, 0)))
    t = compute_dt_table(Q, 3)
    t.quiver_digest = quiver_digest(Q)
    back = table_from_json(table_to_json(t))
    assert back == t
    assert table_to_json(back) == table_to_json(t)
    lines = table_to_tsv(t).splitlines()
    assert lines[0] == "gamma\tk\tc" and "1,1\t-3\t1" in lines
    with pytest.raises(ParseError):
        table_from_json('{"entries": []}')


# command line


def test_cli_dt_examples(qfile):
    code, out, _ = run("dt", "--quiver", qfile([[1]]), "--max-dim", "4")
    assert code == 0 and out == "gamma\tk\tc\n1\t0\t1\n"
    code, out, _ = run("dt", "--quiver", qfile([[2]]), "--max-dim", "2")
    assert code == 0 and out == "gamma\tk\tc\n1\t-1\t1\n2\t-4\t1\n"


def test_cli_dt_json_and_omega(qfile, tmp_path):
    target = tmp_path / "t.json"
    code, out, err = run("dt", "--quiver", qfile([[2]]), "--max-dim", "2", "--format", "json",
                         "--out", str(target), "--omega")
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert doc["metadata"]["max_dim"] == 2 and len(doc["metadata"]["quiver_digest"]) == 64
    assert "Omega(1) = q^{-1/2}" in err


def test_cli_exit_codes(qfile, tmp_path):
    assert run("dt", "--quiver", str(tmp_path / "missing.json"), "--max-dim", "2")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices":["a","b"],"arrows":[[0,1],[2,0]]}')
    code, _, err = run("dt", "--quiver", str(bad), "--max-dim", "2")
    assert code == 1 and "line 1" in err
    assert run("dt", "--max-dim", "2")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("dt", "--quiver", qfile([[0]]), "--max-dim", "2", "--qprec", "1")[0] == 3
    assert run("dt", "--quiver", qfile([[0]]), "--max-dim", "-1")[0] == 1


def test_cli_determinism_and_cache(qfile, tmp_path):
    q = qfile([[1, 2], [2, 0]])
    cache = tmp_path / "cache"
    plain = run("dt", "--quiver", q, "--max-dim", "3", "--format", "json")
    first = run("dt", "--quiver", q, "--max-dim", "3", "--format", "json", "--cache", str(cache))
    second = run("dt", "--quiver", q, "--max-dim", "3", "--format", "json", "--cache", str(cache))
    again = run("dt", "--quiver", q, "--max-dim", "3", "--format", "json")
    assert plain[1] == first[1] == second[1] == again[1]
    assert "cache hit" in second[2] and "cache hit" not in first[2]
    assert len(list(cache.iterdir())) == 1


def test_cli_cache_from_environment(qfile, tmp_path, monkeypatch):
    monkeypatch.setenv("COHA_CACHE_DIR", str(tmp_path / "envcache"))
    q = qfile([[1]])
    run("dt", "--quiver", q, "--max-dim", "2")
    assert len(list((tmp_path / "envcache").iterdir())) == 1


@pytest.mark.parametrize("arrows,D", [([[0]], 3), ([[1]], 3), ([[2]], 3), ([[1, 1], [1, 1]], 2)])
def test_cli_verify_examples(qfile, arrows, D):
    code, out, _ = run("verify", "--quiver", qfile(arrows), "--max-dim", str(D))
    assert code == 0
    assert out.splitlines()[0] == "gamma\tk\tfactorize\toracle\tstatus"
    assert out.rstrip().endswith("verify: PASS")


def test_cli_verify_detects_corrupted_cache(qfile, tmp_path):
    q = qfile([[1, 1], [1, 1]])
    cache = tmp_path / "cache"
    assert run("verify", "--quiver", q, "--max-dim", "2", "--cache", str(cache))[0] == 0
    (entry,) = cache.iterdir()
    doc = json.loads(entry.read_text())
    doc["entries"][0]["c"] += 1
    entry.write_text(json.dumps(doc))
    code, out, _ = run("verify", "--quiver", q, "--max-dim", "2", "--cache", str(cache))
    assert code == 2 and "MISMATCH" in out and "verify: FAIL" in out


def test_cli_mult_examples(qfile):
    q0, q1 = qfile([[0]]), qfile([[1]])
    base = ["mult", "--gamma1", "1", "--gamma2", "1"]
    code, out, _ = run(*base, "--quiver", q0, "--poly1", "1", "--poly2", "1")
    assert code == 0 and out.splitlines()[0] == "0"
    assert run(*base, "--quiver", q1, "--poly1", "1", "--poly2", "1")[1].splitlines()[0] == "2"
    code, out, _ = run(*base, "--quiver", q0, "--poly1", "x[0,1]", "--poly2", "1")
    assert out == "-1\nbidegree: ((2),4)\n"
    code, out, _ = run(*base, "--quiver", q0, "--poly1", "x[0,1]", "--poly2", "1", "--star")
    assert code == 0 and out.splitlines()[0] == "-1"
    code, _, err = run("mult", "--quiver", q0, "--gamma1", "2", "--poly1", "x[0,1]", "--gamma2", "1", "--poly2", "1")
    assert code == 1 and "not invariant" in err


def test_cli_mult_star_sign(qfile):
    q = qfile([[1, 1], [1, 1]])
    args = ["mult", "--quiver", q, "--gamma1", "1,0", "--poly1", "1", "--gamma2", "0,1", "--poly2", "1"]
    plain = run(*args)[1].splitlines()[0]
    star = run(*args, "--star")[1].splitlines()[0]
    Q = Quiver(((1, 1), (1, 1)))
    # psi((1,0),(0,1)) = 1 for this quiver, so the twist flips the sign
    assert parse_poly(star, Q, (1, 1)) == -parse_poly(plain, Q, (1, 1))


def test_cli_reineke_examples():
    code, out, _ = run("reineke", "--loops", "1", "--max-n", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("DT_1^(1)(q) = 1\t")
    assert all(" = 0\t" in line for line in lines[1:])
    code, out, _ = run("reineke", "--loops", "2", "--max-n", "2")
    assert code == 0 and out.splitlines()[1].startswith("DT_2^(2)(q) = q\t[ok]")
    assert run("reineke", "--loops", "0", "--max-n", "4")[0] == 1

import json
import math

import pytest

import orlicz


def test_luxemburg_norm_is_euclidean_for_t2():
    f = orlicz.OrliczFn.power(2.0)
    assert f(3.0) == 9.0
    assert orlicz.luxemburg_norm(f, [(1, 3.0), (2, 4.0)]) == pytest.approx(5.0, rel=1e-10)


def test_certify_reports_constants():
    c = orlicz.certify(orlicz.OrliczFn.power(2.0), 2.0)
    assert c["C"] == pytest.approx(2.0)
    assert c["M_prime"] == pytest.approx(4 / math.e**2, rel=1e-9)


def test_schema_errors_map_to_value_error():
    with pytest.raises(ValueError):
        orlicz.OrliczFn.power(1.0)
    with pytest.raises(orlicz.SchemaError):
        orlicz.extend(orlicz.OrliczFn.power(2.0), 0.5)


def test_twisted_norm_and_F():
    z2 = orlicz.TwistedSpace.z2()
    assert z2.preset == "z2"
    assert orlicz.twisted_norm(z2, [], [(1, 1.0)]) == pytest.approx(1.0)
    F = orlicz.kp_F(z2, [(1, 1.0), (2, 1.0)])
    assert [i for i, _ in F] == [1, 2]
    assert F[0][1] == pytest.approx(math.log(math.sqrt(2.0)), rel=1e-9)
    assert 7.33 < z2.L_bound < 7.332
    assert z2.phi(3.0, 0.0) == 9.0


def test_quasiconvexity_constant_within_bound():
    z2 = orlicz.TwistedSpace.z2()
    L = orlicz.quasiconvexity_constant(z2, 20000, 3)
    assert 1.0 < L <= z2.L_bound


def test_t2_pipeline_closed_forms():
    p = orlicz.t2_pipeline()
    assert p.alpha == 0.5
    assert p.M == pytest.approx(1.0, abs=1e-9)
    assert p.N(1.0, [1.0]) == pytest.approx(math.sqrt(2) + 0.5, abs=1e-12)
    assert p.star_iterate([[1.0], [0.0]]) == pytest.approx([math.sqrt(2)] * 2)
    assert p.triangle_max_violation(5000) <= 1e-10


def test_run_cli_round_trip(tmp_path):
    seq = tmp_path / "s.json"
    seq.write_text(json.dumps({"dim": 1, "entries": [[1, 3], [2, 4]]}))
    code, out, _ = orlicz.run_cli(["norm", "--p", "2", "--seq", str(seq)])
    assert code == 0
    assert json.loads(out)["report"]["norm"] == pytest.approx(5.0)
    code, _, err = orlicz.run_cli(["envelope", "--resolution", "40"])
    assert code == 2
    assert "schema error" in err

import json
import os
import shutil
import subprocess
from fractions import Fraction

import numpy as np
import pytest

import trigonal


def cli():
    path = os.environ.get("TRIGONAL_CLI") or shutil.which("trigonal")
    if not path:
        pytest.skip("trigonal executable not available")
    return path


def test_version():
    assert trigonal.version().count(".") == 2


def test_curve_roundtrip_and_discriminant():
    c = trigonal.Curve(0, 0, 0, -1)
    assert not c.is_symbolic
    assert trigonal.Curve.from_json(c.to_json()).to_json() == c.to_json()
    assert c.discriminant() == "-256"
    assert trigonal.Curve(0, "1/2", 0, 0).lambda_(6) == "1/2"
    assert trigonal.Curve.symbolic().is_symbolic
    assert abs(c.evaluate_f(2, 1)) > 0


def test_sigma_leading_part():
    s = trigonal.sigma_expansion(trigonal.Curve.symbolic(), 5)
    assert decode(s["series"]) == {"u1": 1, "u2^2*u3": -1, "u3^5": Fraction(1, 20)}


def test_exact_addition_formula():
    r = trigonal.check("prop41", trigonal.Curve(), "exact")
    assert r["verdict"] == "pass"
    assert r["kappa"]["value"] == "1"


def test_unknown_identity():
    with pytest.raises(ValueError):
        trigonal.check("nope", trigonal.Curve())


def test_numeric_sigma_is_odd():
    ctx = trigonal.numeric_context(trigonal.Curve(0, 0, 0, -1))
    assert ctx.tau.shape == (3, 3)
    assert np.allclose(ctx.tau, ctx.tau.T, atol=1e-12)
    assert np.linalg.eigvalsh(ctx.tau.imag).min() > 0
    u = np.array([0.31 + 0.12j, -0.22 + 0.41j, 0.53 - 0.28j])
    s, _, _ = ctx.sigma(u)
    t, _, _ = ctx.sigma(-u)
    assert abs(s + t) < 1e-12 * abs(s)
    r = trigonal.check("lemma36", trigonal.Curve(0, 0, 0, -1), "numeric", context=ctx)
    assert r["verdict"] == "pass"


def test_cli_sigma_coefficients():
    out = subprocess.run([cli(), "sigma", "--cutoff", "5"], capture_output=True, text=True, check=True)
    assert decode(json.loads(out.stdout)["series"]) == {"u1": 1, "u2^2*u3": -1, "u3^5": Fraction(1, 20)}


def decode(series):
    """{monomial text: Fraction} from the series JSON (vars, exp, coef)."""
    names = [v["name"] for v in series["vars"]]
    out = {}
    for t in series["terms"]:
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, t["exp"]) if e]
        out["*".join(factors) or "1"] = Fraction(t["coef"])
    return out


def test_cli_unknown_flag_exits_2():
    r = subprocess.run([cli(), "sigma", "--bogus"], capture_output=True, text=True)
    assert r.returncode == 2


def test_cli_verify_exact():
    r = subprocess.run([cli(), "verify", "--identity", "prop41", "--mode", "exact"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["verdict"] == "pass"

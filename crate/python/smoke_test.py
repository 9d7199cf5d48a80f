"""Smoke test for the chromlag Python extension.

Build and install first:
    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/chromlag-*.whl
then run `python python/smoke_test.py`.
"""

import cmath
import json

import chromlag


def main() -> None:
    # standard necklace: Ψ = 1; the strand mutation gives (X;q²)∞
    s = chromlag.Seed.necklace(1)
    assert s.validate() == []
    assert len(s.wavefunction(5)) == 1
    path = json.dumps([{"op": "mutate", "edge": "s1", "sign": 1}])
    end, psi = chromlag.evaluate_path(s, path, order=6)
    assert end.wavefunction(6) == psi
    assert chromlag.ov_invariants(psi) == [([1], -1, -1)]
    assert s.check_mutation("s1", 1, 4)

    # canoe with A = 0: coefficient of X^v is 1/(q²;q²)_v
    f = chromlag.canoe_wavefunction([[0]], order=5)
    for v in range(6):
        assert f.coefficient([v]) == chromlag.inverse_qpoch2(v), v
    f2 = chromlag.Series.from_json(f.to_json())
    assert f2 == f

    # framing duality and disk invariants
    assert chromlag.canoe_wavefunction([[1, 1], [1, 0]], order=4, dual=True) is not None
    rows = chromlag.disk_invariants([[-2]])
    assert [n for _, n in rows] == [1, 1, 3, 10, 40, 171, 791]
    try:
        chromlag.dt_series([[-1]])
        raise AssertionError("negative adjacency accepted")
    except ValueError:
        pass

    summary = json.loads(chromlag.foam_h1("prism"))
    assert summary["rank"] == 2 and summary["framing_parameter_rank"] == 3

    _, _, failures, ok = chromlag.chromatic_check("cube", samples=50)
    assert ok and failures == 0

    # dilogarithm: φ(0) and the inversion identity
    h = cmath.exp(0.3j)
    p0 = chromlag.phi(0j, h)
    assert abs(abs(p0) - 1) < 1e-10
    res, thr, passed = chromlag.verify_identity("inversion", points=5)
    assert passed and res < thr
    assert "cube" in chromlag.identity_names()

    results = chromlag.golden([1, 3, 8])
    assert all(r[2] for r in results), results
    print("python smoke test passed")


if __name__ == "__main__":
    main()

import math

import pytest

import ftnet

SIMPLEX = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
SQUARE = [[1, 0], [0, 1], [-1, 0], [0, -1]]


def test_solve_regular_tetrahedron():
    sol = ftnet.solve(SIMPLEX, [1, 1, 1, 1])
    assert sol.floating
    assert max(abs(x) for x in sol.point) < 1e-9
    assert sol.objective == pytest.approx(4 * math.sqrt(3))


def test_absorbed_triangle():
    assert ftnet.classify([[0, 0], [1, 0], [0, 1]], [1, 1, 5]) == 2
    assert ftnet.classify([[0, 0], [1, 0], [0, 1]], [1, 1, 1]) is None


def test_inverse_round_trip():
    a0 = [0.1, -0.05, 0.2]
    weights = ftnet.inverse_tetrahedron(a0, SIMPLEX, 1.0)
    assert weights.conserved()
    assert sum(weights.weights) == pytest.approx(1.0)
    sol = ftnet.solve(SIMPLEX, weights.weights)
    assert max(abs(p - q) for p, q in zip(sol.point, a0)) < 1e-7


def test_equiangular_triangle():
    a = 2 * math.pi / 3
    s = ftnet.mixed_inverse_triangle(a, a, 1.0, 1.0 / 3)
    assert s.weights == pytest.approx([1 / 3] * 3, abs=1e-12)
    assert ftnet.residual_for_unique_inverse_triangle(a, a) == pytest.approx(1 / 3)


def test_simplex_roots():
    a = math.acos(-1 / 3)
    opposite, same = ftnet.cos_alpha_candidates([a] * 5)
    assert opposite == pytest.approx(-1 / 3, abs=1e-12)
    assert same == pytest.approx(1.0, abs=1e-12)


def test_square_plasticity():
    lo, hi = ftnet.feasible_b4_interval([0, 0], SQUARE, 1.0)
    assert (lo, hi) == pytest.approx((0.0, 0.5))
    s = ftnet.quadrilateral_plasticity([0, 0], SQUARE, 1.0, 0.25)
    assert s.weights == pytest.approx([0.25] * 4)
    assert s.residual == pytest.approx(0.5)


def test_errors_carry_codes():
    with pytest.raises(ftnet.FtnetError) as info:
        ftnet.quadrilateral_plasticity([3, 0], SQUARE, 1.0, 0.25)
    assert info.value.args[0] == "NotInterior"
    with pytest.raises(ValueError):
        ftnet.solve([[0, 0], [1, 0], [2, 0]], [1, 1, 1])


def test_oracle():
    r = ftnet.brute_force_min(SIMPLEX, [1, 1, 1, 1], levels=6, seed=3)
    assert max(abs(x) for x in r.minimizer) < 1e-4


def test_run_documents():
    code, result = ftnet.run("solve", {"geometry": {"points": SIMPLEX, "weights": [1, 1, 1, 1]}})
    assert code == 0
    assert result["outputs"]["case"]["kind"] == "floating"

    code, err = ftnet.run("solve", {"geometry": {"points": SIMPLEX}})
    assert code == 2
    assert err["error"]["pointer"] == "/geometry/weights"

    code, csv = ftnet.run("plasticity-quad", {"geometry": {"points": SQUARE, "a0": [0, 0]}}, sweep=5)
    assert code == 0
    assert len(csv.strip().splitlines()) == 6

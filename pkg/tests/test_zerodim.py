from fractions import Fraction
from math import factorial

import pytest
from scipy.integrate import quad

from loopvertex.graphs import UnionFind
from loopvertex.intermediate import iter_phi4_graphs
from loopvertex.series import QI2, SqrtLambdaSeries
from loopvertex.zerodim import (
    IdentityCheckSample,
    double_factorial,
    gaussian_moment,
    intermediate_field_identity_check,
    log_expansion,
    log_vertex_expansion,
    log_z,
    loop_vertex_contributions,
    wick_count,
    z_from_feynman,
    z_from_loop_vertices,
)

F = Fraction
PER_K = {
    1: [-2, 24, -640],
    2: [-1, 22, F(-320, 3) - 624],
    3: [0, 6, -300],
    4: [0, F(1, 2), F(-80, 3) - 30],
    5: [0, 0, -5],
    6: [0, 0, F(-1, 6)],
}


def test_moments():
    assert [gaussian_moment(k) for k in range(9)] == [1, 0, 1, 0, 3, 0, 15, 0, 105]
    assert double_factorial(11) == 10395
    with pytest.raises(ValueError):
        gaussian_moment(-1)


def test_moments_against_quadrature():
    import math
    for k in range(0, 9, 2):
        val, _ = quad(lambda s: s**k * math.exp(-s * s / 2) / math.sqrt(2 * math.pi), -40, 40)
        assert abs(val - gaussian_moment(k)) < 1e-8


def test_log_expansion_coefficients():
    # log(1+x) with x = 2 i sqrt2 mu sigma: x, -x^2/2, x^3/3
    p = log_expansion(3, 3)
    assert p[1][1] == QI2(i_sqrt2=2)
    assert p[2][2] == QI2(4)             # -(2 i sqrt2)^2 / 2 = 4
    assert p[3][3] == QI2(i_sqrt2=F(-16, 3))
    assert log_vertex_expansion(3, 3)[2][2] == QI2(2)


def test_per_k_rows_reproduced():
    contrib = loop_vertex_contributions(3)
    assert contrib[0] == SqrtLambdaSeries.constant(1, 6)
    for k, row in PER_K.items():
        assert contrib[k].lambda_coefficients() == [0, *row], k


def test_total_z_loop_vertex_side():
    assert z_from_loop_vertices(3).lambda_coefficients() == [1, -3, F(105, 2), F(-10395, 6)]


def test_feynman_side_counts_matchings():
    assert [wick_count(n) for n in range(4)] == [1, 3, 105, 10395]
    assert sum(1 for _ in iter_phi4_graphs(2)) == 105


@pytest.mark.parametrize("order", [1, 2, 3])
def test_sides_agree(order):
    assert z_from_feynman(order) == z_from_loop_vertices(order)


def test_odd_and_irrational_parts_cancel():
    z = z_from_loop_vertices(3)
    assert z.is_real_in_lambda()
    # individual loop-vertex powers are real too once sigma is integrated
    for term in loop_vertex_contributions(3):
        assert term.is_real_in_lambda()


def test_coefficient_growth_closed_form():
    z = z_from_feynman(5).lambda_coefficients()
    for n in range(6):
        assert abs(z[n]) == F(double_factorial(4 * n - 1), factorial(n))
    assert z[4] == F(675675, 8)
    assert z[5] == F(-43648605, 8)


def connected_matching_count(n):
    """Labeled connected order-n graphs, by union-find over each matching."""
    count = 0
    for g in iter_phi4_graphs(n):
        uf = UnionFind(range(1, n + 1))
        for (a, _), (b, _) in g.pairing:
            uf.union(a, b)
        count += len({uf.find(v) for v in range(1, n + 1)}) == 1
    return count


def test_log_z_is_connected_graphs():
    lz = log_z(3).lambda_coefficients()
    assert lz == [0, -3, 48, -1584]
    for n in (1, 2, 3):
        assert lz[n] == F((-1) ** n * connected_matching_count(n), factorial(n))


def test_z_against_direct_quadrature():
    import math
    lam = 1e-3
    val, _ = quad(lambda p: math.exp(-p * p / 2 - lam * p**4) / math.sqrt(2 * math.pi), -30, 30,
                  epsabs=1e-13)
    series = sum(float(c) * lam**n for n, c in enumerate(z_from_feynman(4).lambda_coefficients()))
    assert abs(val - series) < 2e-8  # first omitted term is about 5.5e6 lam^5


@pytest.mark.parametrize("phi, lam", [(0, 0.1), (1, 0.01), (0.5, 0.05)])
def test_identity_check(phi, lam):
    res = intermediate_field_identity_check(IdentityCheckSample(phi, lam))
    assert res.residual < 1e-8
    assert abs(res.imag) < 1e-8


def test_identity_check_rejects_bad_settings():
    with pytest.raises(ValueError):
        IdentityCheckSample(0, 0.1, step=0)
    with pytest.raises(ValueError):
        IdentityCheckSample(0, -1)

import math

import pytest

try:
    import _core as iso
except ImportError:  # pragma: no cover
    iso = pytest.importorskip("isospec")


def test_clifford_space_dims():
    s = iso.clifford_space(3, 1, 1)
    assert s.k == 8 and s.l == 3
    assert iso.clifford_min_dim(7) == 8


def test_serialization_roundtrip():
    s = iso.clifford_space(3, 2, 0)
    back = iso.parse_endo_space(s.serialize())
    assert back.k == s.k and back.l == s.l


def test_anticommutator_and_unit_rescale():
    s = iso.clifford_space(3, 1, 0)
    ok, degenerate, residual = iso.is_anticommutator(s, [1.0, 0.0, 0.0])
    assert ok and not degenerate and residual < 1e-12
    S, A0 = iso.rescale_to_unit(2.0 * s.basis[0])
    assert abs(S[0, 0] - 2.0) < 1e-12


def test_einstein_solvable_extension():
    g = iso.SolvGroup(iso.MetricGroup(iso.clifford_space(3, 1, 0)), 1.0)
    rx, rz, rt = iso.ricci_eigenvalues_c(g)
    assert max(abs(rx + 4), abs(rz + 4), abs(rt + 4)) < 1e-12


def test_nonconjugacy_and_intertwining_small():
    s11 = iso.sigma_ab_deform(iso.clifford_space(3, 1, 0), 0, 1, 1)
    s20 = iso.sigma_ab_deform(iso.clifford_space(3, 1, 0), 0, 2, 0)
    distinguished, invariant, _ = iso.nonconjugacy_certificate(s11, s20)
    assert distinguished and invariant == "generated-lie-algebra-dimension"
    ok, worst, _ = iso.verify_intertwining(s11, s20, 2, 1e-8)
    assert ok and worst <= 1e-8


def test_cayley_roundtrip():
    g = iso.MetricGroup(iso.clifford_space(3, 1, 0))
    x, z, t = iso.cayley(g, [0.1, 0.2, -0.1, 0.0], [0.05, -0.3, 0.1], 0.2)
    assert t > 0
    bx, bz, bu = iso.cayley_inverse(g, x, z, t)
    assert max(abs(bx[0] - 0.1), abs(bz[1] + 0.3), abs(bu - 0.2)) < 1e-10


def test_geodesic_sphere_profile():
    prof = iso.Profile.geodesic_sphere(1.0)
    t = math.e
    assert abs(prof.D(0.0, t)) < 1e-9

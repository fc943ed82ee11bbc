import random

import pytest

from morseflow import (
    Cell,
    Complex,
    QQ,
    SignInconsistency,
    ZZ,
    assign_incidence_signs,
    cellular_chain_complex,
    homology,
    normalized_chain_complex,
    order_complex,
    validate_complex,
)

from helpers import RP2_FACETS, cell_name, random_complex, simplicial_to_complex
from morseflow.fixtures import fig2_complex, sphere_complex


def test_sphere_is_valid():
    assert validate_complex(sphere_complex()).ok


def test_edge_with_one_vertex_face_is_invalid():
    cx = Complex([Cell("v", 0), Cell("e", 1)], [("e", "v")])
    report = validate_complex(cx)
    assert not report.ok
    assert any(f.code == "edge_faces" for f in report.findings)


def test_three_intermediates_breaks_diamond():
    # a third edge between the top cell t and the vertex w of the sphere
    base = sphere_complex()
    cells = list(base.cells) + [Cell("e", 1)]
    covers = list(base.covers) + [("t", "e"), ("e", "w"), ("e", "y")]
    report = validate_complex(Complex(cells, covers))
    assert any(f.code == "diamond" for f in report.findings)


def test_grading_violation_reported():
    cx = Complex([Cell("v", 0), Cell("f", 2)], [("f", "v")])
    report = validate_complex(cx)
    assert any(f.code == "grading" for f in report.findings)


def test_json_round_trip():
    cx = sphere_complex()
    again = Complex.from_json(cx.to_json())
    assert again.covers == cx.covers
    assert [c.id for c in again.cells] == [c.id for c in cx.cells]


def test_json_diagnostics():
    with pytest.raises(ValueError, match="line"):
        Complex.from_json("{not json")
    with pytest.raises(ValueError, match="cells\\[0\\]"):
        Complex.from_json('{"cells": [{"id": "a"}], "covers": []}')
    with pytest.raises(ValueError, match="duplicate"):
        Complex.from_json('{"cells": [{"id": "a", "dim": 0}, {"id": "a", "dim": 0}], "covers": []}')


def test_single_edge_sign_convention():
    cx = Complex([Cell("a", 0), Cell("b", 0), Cell("e", 1)], [("e", "a"), ("e", "b")])
    signs = assign_incidence_signs(cx)
    assert signs("e", "a") == 1
    assert signs("e", "b") == -1


def test_signs_deterministic():
    cx = fig2_complex()
    s1 = assign_incidence_signs(cx)
    s2 = assign_incidence_signs(cx)
    assert s1.sign == s2.sign


def _d_squared_is_zero(cx):
    cc = cellular_chain_complex(cx, assign_incidence_signs(cx), ZZ)
    cc.check_boundary_squares_to_zero()
    return True


def test_fig2_signs_pass_boundary_oracle():
    assert _d_squared_is_zero(fig2_complex())
    assert _d_squared_is_zero(sphere_complex())


def test_random_complexes_signs_pass_boundary_oracle():
    rng = random.Random(23)
    for _ in range(25):
        cx = random_complex(rng)
        assert validate_complex(cx).ok
        assert _d_squared_is_zero(cx)


def test_sphere_homology_ranks():
    cc = cellular_chain_complex(sphere_complex(), assign_incidence_signs(sphere_complex()), ZZ)
    s = homology(cc)
    assert s.betti() == (1, 0, 1)
    assert all(t == () for t in s.torsion())


def test_fig2_homology_ranks():
    cx = fig2_complex()
    s = homology(cellular_chain_complex(cx, assign_incidence_signs(cx), ZZ))
    assert s.betti() == (1, 1, 0)


def test_empty_complex():
    cx = Complex([], [])
    assert validate_complex(cx).ok
    cc = cellular_chain_complex(cx, assign_incidence_signs(cx), ZZ)
    assert homology(cc).betti() == (0,)


def test_cone_over_projective_plane_has_no_orientation():
    # passes the combinatorial proxies but no sign assignment exists
    cx = simplicial_to_complex(RP2_FACETS)
    cells = list(cx.cells) + [Cell("cone", 3)]
    covers = list(cx.covers) + [("cone", cell_name(f)) for f in RP2_FACETS]
    coned = Complex(cells, covers)
    assert validate_complex(coned).ok
    with pytest.raises(SignInconsistency):
        assign_incidence_signs(coned)


def test_cellular_homology_matches_face_poset_order_complex():
    rng = random.Random(5)
    fixtures = [sphere_complex(), fig2_complex()] + [random_complex(rng, 10) for _ in range(8)]
    for cx in fixtures:
        cellular = homology(cellular_chain_complex(cx, assign_incidence_signs(cx), QQ)).betti()
        ids = cx.ids()
        oc = order_complex(ids, lambda a, b: a == b or cx.is_face(b, a))
        barycentric = homology(normalized_chain_complex(oc, QQ)).betti()
        top = max(len(cellular), len(barycentric))
        pad = lambda t: tuple(t) + (0,) * (top - len(t))
        assert pad(cellular) == pad(barycentric)

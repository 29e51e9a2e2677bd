"""Simplices, Welch bounds, Steiner/Tremain frames, and the exact verifier."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from equiframes.designs import find_parallel_class, make_sts, standard_embedding
from equiframes.frames import (
    FrameMatrix,
    gram_matrix,
    load_frame_exact,
    naimark_residuals,
    real_gram_signs,
    simplex_from_hadamard,
    steiner_etf,
    store_frame_csv,
    store_frame_exact,
    tremain_etf,
    tremain_params,
    verify_etf,
    welch_bound,
)
from equiframes.hadamard import fourier, kronecker, normalize, real_hadamard, sylvester
from equiframes.scalar import ExtScalar


def build_tremain(v=None, h=None, parallel=False, rows=None):
    if h is not None:
        v = 2 * h - 1
    else:
        h = (v + 1) // 2
    sts = make_sts(v)
    cls = find_parallel_class(sts) if parallel else None
    emb = standard_embedding(sts, cls)
    h1 = normalize(real_hadamard(h))
    h2 = normalize(kronecker(sylvester(1), h1))
    r1, r2 = rows if rows else (h - 1, 0)
    return tremain_etf(
        sts, emb, simplex_from_hadamard(h1, r1), simplex_from_hadamard(h2, r2)
    )


def test_simplex_sylvester1():
    sim = simplex_from_hadamard(sylvester(1), 0)
    assert sim.dim == 1 and sim.count == 2
    assert [x.to_complex() for x in sim.entries[0]] == [1, -1]
    assert [x.to_complex() for x in sim.naimark] == [1, 1]
    assert naimark_residuals(sim) == []


def test_simplex_row_out_of_range():
    with pytest.raises(ValueError):
        simplex_from_hadamard(sylvester(1), 2)


def test_naimark_identity_fourier5():
    sim = simplex_from_hadamard(fourier(5), 0)
    assert sim.dim == 4 and sim.count == 5
    assert naimark_residuals(sim) == []
    # inner products of distinct columns are the negated removed-row products
    g = ExtScalar.from_int(0, 5)
    for r in range(4):
        g = g + sim.entries[r][0] * sim.entries[r][1].conjugate()
    assert g == -(sim.naimark[0] * sim.naimark[1].conjugate())


def test_welch_bound_values():
    assert welch_bound(15, 36).squared == Fraction(1, 25)
    assert abs(welch_bound(15, 36).value - 0.2) < 1e-15
    assert welch_bound(7, 28).squared == Fraction(1, 9)
    assert welch_bound(5, 10).squared == Fraction(1, 9)
    with pytest.raises(ValueError):
        welch_bound(10, 10)
    with pytest.raises(ValueError):
        welch_bound(12, 7)


def test_tremain_params_examples():
    assert tremain_params(v=7) == (15, 36)
    assert tremain_params(h=8) == (51, 136)
    assert tremain_params(h=28) == (551, 1596)
    with pytest.raises(ValueError):
        tremain_params(v=5)
    with pytest.raises(ValueError):
        tremain_params(h=6)
    with pytest.raises(ValueError):
        tremain_params()


def test_steiner_etf_fano():
    sts = make_sts(7)
    emb = standard_embedding(sts)
    f = steiner_etf(sts, emb, simplex_from_hadamard(sylvester(2), 3))
    assert (f.dim, f.count) == (7, 28)
    rep = verify_etf(f)
    assert rep.is_etf
    assert rep.norm_sq == 3
    assert rep.tight_constant == 12
    assert rep.gram_abs_sq == 1
    # off-diagonal Gram values are exactly +-1
    signs = real_gram_signs(f)
    assert set(np.unique(signs)) <= {-1, 0, 1}


def test_steiner_etf_v3_degenerate():
    sts = make_sts(3)
    f = steiner_etf(sts, standard_embedding(sts), simplex_from_hadamard(sylvester(1), 0))
    assert (f.dim, f.count) == (1, 6)
    rep = verify_etf(f)
    assert rep.is_tight and rep.is_equiangular


def test_steiner_etf_bose9():
    # R = 4 here, so the simplex needs 5 vectors in dimension 4
    sts = make_sts(9)
    f = steiner_etf(sts, standard_embedding(sts), simplex_from_hadamard(fourier(5), 0))
    assert (f.dim, f.count) == (12, 45)
    assert verify_etf(f).is_etf


def test_steiner_etf_dimension_mismatch():
    sts = make_sts(7)
    with pytest.raises(ValueError):
        steiner_etf(sts, standard_embedding(sts), simplex_from_hadamard(sylvester(3), 0))


def test_tremain_v7_certificate():
    f = build_tremain(v=7)
    assert (f.dim, f.count) == (15, 36)
    rep = verify_etf(f)
    assert rep.is_etf and rep.meets_welch
    assert rep.norm_sq == 5
    assert rep.tight_constant == 12
    assert rep.coherence_sq == Fraction(1, 25)


def test_tremain_h2_real():
    f = build_tremain(h=2)
    assert (f.dim, f.count) == (5, 10)
    rep = verify_etf(f)
    assert rep.is_etf and rep.norm_sq == 3


def test_tremain_complex_v7():
    sts = make_sts(7)
    emb = standard_embedding(sts)
    f = tremain_etf(
        sts, emb,
        simplex_from_hadamard(fourier(4), 0),
        simplex_from_hadamard(fourier(8), 0),
    )
    assert not f.is_real_rational()
    rep = verify_etf(f)
    assert rep.is_etf and rep.norm_sq == 5 and rep.meets_welch


def test_exact_real_path_matches_general_path():
    """Full component-level agreement of the two independent Gram routes."""
    from equiframes.frames import _real_gram_components
    from equiframes.scalar import CycInt

    for f in (build_tremain(h=2), build_tremain(v=7)):
        g = gram_matrix(f)
        comps, k = _real_gram_components(f)
        for i in range(f.count):
            for j in range(f.count):
                rebuilt = ExtScalar(
                    CycInt.from_int(int(comps[0][i, j]), f.order),
                    CycInt.from_int(int(comps[1][i, j]), f.order),
                    CycInt.from_int(int(comps[2][i, j]), f.order),
                    CycInt.from_int(int(comps[3][i, j]), f.order),
                    2 * k,
                )
                assert rebuilt == g[i][j], f"Gram mismatch at ({i},{j})"


def test_verifier_flags_broken_frame():
    f = build_tremain(v=7)
    rows = [list(r) for r in f.entries]
    zero = ExtScalar.from_int(0, f.order)
    # zero out one nonzero entry
    done = False
    for r in range(f.dim):
        for j in range(f.count):
            if not rows[r][j].is_zero():
                rows[r][j] = zero
                done = True
                break
        if done:
            break
    broken = FrameMatrix(tuple(tuple(r) for r in rows), f.order,
                         f.block_rows, f.point_rows, f.extra_rows)
    rep = verify_etf(broken)
    assert not rep.is_etf
    assert rep.witness is not None
    repf = verify_etf(broken, mode="float")
    assert not repf.is_etf


def test_float_and_exact_agree():
    from equiframes.pipelines import build_tremain as pipeline_build

    for make in (lambda: build_tremain(v=7), lambda: build_tremain(h=2),
                 lambda: build_tremain(h=8), lambda: pipeline_build(v=9)):
        f = make()
        exact = verify_etf(f)
        approx = verify_etf(f, mode="float")
        assert exact.is_etf and approx.is_etf
        assert approx.max_residual < 1e-10


def test_tremain_rejects_bad_simplex_sizes():
    sts = make_sts(7)
    emb = standard_embedding(sts)
    good_r = simplex_from_hadamard(sylvester(2), 0)
    good_v = simplex_from_hadamard(sylvester(3), 0)
    with pytest.raises(ValueError):
        tremain_etf(sts, emb, good_v, good_v)
    with pytest.raises(ValueError):
        tremain_etf(sts, emb, good_r, good_r)


def test_gram_case_values_match_construction():
    """Spot-check the four structural Gram cases against provenance data."""
    f = build_tremain(v=7)
    prov = f.provenance
    g = gram_matrix(f)
    r1 = prov.sim_r.count  # R+1
    v = prov.sts.num_points
    # same point, different simplex indices: a_s * conj(a_s')
    for s in range(r1):
        for s2 in range(s + 1, r1):
            expect = prov.sim_r.naimark[s] * prov.sim_r.naimark[s2].conjugate()
            assert g[0 * r1 + s][0 * r1 + s2] == expect
    # between the point-space columns: b_t * conj(b_t')
    base = v * r1
    for t in range(3):
        for t2 in range(t + 1, 4):
            expect = prov.sim_v.naimark[t] * prov.sim_v.naimark[t2].conjugate()
            assert g[base + t][base + t2] == expect


def test_exact_file_roundtrip(tmp_path):
    f = build_tremain(v=7)
    path = tmp_path / "frame.etf"
    store_frame_exact(path, f)
    loaded = load_frame_exact(path)
    assert (loaded.dim, loaded.count) == (f.dim, f.count)
    assert loaded.block_rows == f.block_rows
    for i in range(f.dim):
        for j in range(f.count):
            assert loaded.entries[i][j] == f.entries[i][j]
    assert verify_etf(loaded).is_etf


def test_csv_export(tmp_path):
    f = build_tremain(h=2)
    path = tmp_path / "frame.csv"
    store_frame_csv(path, f)
    rows = path.read_text().strip().split("\n")
    assert len(rows) == 5
    assert len(rows[0].split(",")) == 20


def test_naimark_identity_all_rows_small_orders():
    for h in (sylvester(2), fourier(3), fourier(5), sylvester(3)):
        for row in range(h.order):
            assert naimark_residuals(simplex_from_hadamard(h, row)) == []

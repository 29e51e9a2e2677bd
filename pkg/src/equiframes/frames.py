"""Unimodular simplices, Steiner and Tremain frames, and exact certification.

Frames are stored unscaled: every vector of a Tremain frame has squared
norm R + 2 and distinct vectors meet in a unimodular inner product, so the
coherence of the unit-normalized family is 1/(R + 2), the Welch bound for
these dimensions.  Verification recomputes the full Gram matrix and frame
operator from the entries; it never trusts the construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from pathlib import Path

import numpy as np

from equiframes.designs import EmbeddingAssignment, SteinerTripleSystem
from equiframes.hadamard import ButsonMatrix
from equiframes.scalar import CycInt, ExtScalar, cyclotomic_poly


@dataclass(frozen=True)
class UnimodularSimplex:
    """Columns of a Hadamard matrix with one row removed.

    The removed row is kept as the Naimark complement: its entries a_i
    satisfy <phi_i, phi_j> + a_i * conj(a_j) = n [i = j].
    """

    entries: tuple[tuple[ExtScalar, ...], ...]  # (n-1) rows x n columns
    naimark: tuple[ExtScalar, ...]
    source: ButsonMatrix
    removed_row: int

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def count(self) -> int:
        return len(self.naimark)


def simplex_from_hadamard(h: ButsonMatrix, row: int) -> UnimodularSimplex:
    """Delete one row of a (verified) Hadamard matrix; keep it as complement."""
    if row < 0 or row >= h.order:
        raise ValueError(f"row {row} out of range for order {h.order}")
    table = h.value_table
    entries = tuple(
        tuple(table[e] for e in h.exponents[i])
        for i in range(h.order)
        if i != row
    )
    naimark = tuple(table[e] for e in h.exponents[row])
    return UnimodularSimplex(entries, naimark, h, row)


def naimark_residuals(sim: UnimodularSimplex) -> list[tuple[int, int]]:
    """Pairs (i, j) violating the complement identity; empty when exact."""
    n = sim.count
    bad = []
    for i in range(n):
        for j in range(n):
            total = sim.naimark[i] * sim.naimark[j].conjugate()
            for row in sim.entries:
                total = total + row[i] * row[j].conjugate()
            expect = ExtScalar.from_int(n if i == j else 0)
            if total != expect:
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class WelchBound:
    squared: Fraction
    value: float


def welch_bound(m: int, n: int) -> WelchBound:
    """Lower bound on the coherence of n unit vectors in dimension m."""
    if not (1 <= m < n):
        raise ValueError(f"need N > M >= 1, got M={m}, N={n}")
    sq = Fraction(n - m, m * (n - 1))
    return WelchBound(sq, float(sq) ** 0.5)


def tremain_params(v: int | None = None, h: int | None = None) -> tuple[int, int]:
    """(dimension, vector count) for the complex (by V) or real (by h) family."""
    if (v is None) == (h is None):
        raise ValueError("give exactly one of v, h")
    if v is not None:
        if v < 3 or v % 6 not in (1, 3):
            raise ValueError(f"V must be 1 or 3 (mod 6) and >= 3, got {v}")
        return (v + 2) * (v + 3) // 6, (v + 1) * (v + 2) // 2
    if h < 1 or h % 3 == 0:
        raise ValueError(f"h must be 1 or 2 (mod 3) and >= 1, got {h}")
    return (h + 1) * (2 * h + 1) // 3, h * (2 * h + 1)


@dataclass(frozen=True)
class SteinerProvenance:
    sts: SteinerTripleSystem
    embedding: EmbeddingAssignment
    simplex: UnimodularSimplex


@dataclass(frozen=True)
class TremainProvenance:
    sts: SteinerTripleSystem
    embedding: EmbeddingAssignment
    sim_r: UnimodularSimplex  # R+1 vectors in dimension R
    sim_v: UnimodularSimplex  # V+1 vectors in dimension V


@dataclass(frozen=True)
class FrameMatrix:
    """Dense matrix of exact scalars with labelled coordinate bands.

    Rows split into block coordinates, point coordinates and one optional
    extra coordinate (Tremain frames use all three bands; Steiner frames
    only the first).
    """

    entries: tuple[tuple[ExtScalar, ...], ...]
    order: int
    block_rows: int
    point_rows: int
    extra_rows: int
    provenance: SteinerProvenance | TremainProvenance | None = None

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def count(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def is_real_rational(self) -> bool:
        """True when every entry lives in Z[sqrt2, sqrt3]/2^k (no roots)."""
        return len(cyclotomic_poly(self.order)) - 1 == 1

    @cached_property
    def column_supports(self) -> tuple[tuple[int, ...], ...]:
        zero_ids: dict[int, bool] = {}

        def is_zero(x: ExtScalar) -> bool:
            r = zero_ids.get(id(x))
            if r is None:
                r = zero_ids[id(x)] = x.is_zero()
            return r

        cols: list[list[int]] = [[] for _ in range(self.count)]
        for r, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if not is_zero(x):
                    cols[j].append(r)
        return tuple(tuple(c) for c in cols)

    def to_complex_array(self) -> np.ndarray:
        cache: dict[int, complex] = {}
        out = np.empty((self.dim, self.count), dtype=np.complex128)
        for r, row in enumerate(self.entries):
            for j, x in enumerate(row):
                v = cache.get(id(x))
                if v is None:
                    v = cache[id(x)] = x.to_complex()
                out[r, j] = v
        return out


def _zeta_tables(q: int, order: int) -> dict[str, list[ExtScalar]]:
    """Shared entry objects for every weighted root of unity a frame needs."""
    roots = [ExtScalar.root(order, e * (order // q)) for e in range(q)]
    s2 = ExtScalar.sqrt2(order=order)
    half_s2 = ExtScalar.sqrt2(order=order, k=1)
    half_s6 = ExtScalar.sqrt6(order=order, k=1)
    return {
        "one": roots,
        "sqrt2": [s2 * z for z in roots],
        "half_sqrt2": [half_s2 * z for z in roots],
        "half_sqrt6": [half_s6 * z for z in roots],
    }


def steiner_etf(
    sts: SteinerTripleSystem,
    emb: EmbeddingAssignment,
    sim: UnimodularSimplex,
) -> FrameMatrix:
    """Embed each simplex vector at each point: B x V(R+1) frame."""
    r = sts.replication
    if sim.dim != r or sim.count != r + 1:
        raise ValueError(
            f"need a simplex of {r + 1} vectors in dimension {r}, "
            f"got {sim.count} in dimension {sim.dim}"
        )
    if emb.sts is not sts and emb.sts != sts:
        raise ValueError("embedding belongs to a different system")
    q = sim.source.root_order
    order = q
    tables = _zeta_tables(q, order)
    zero = ExtScalar.from_int(0, order)
    b = sts.block_count
    n_cols = sts.num_points * (r + 1)
    rows = [[zero] * n_cols for _ in range(b)]
    hexp = sim.source.exponents
    src_rows = [i for i in range(sim.source.order) if i != sim.removed_row]
    for v in range(sts.num_points):
        for s in range(r + 1):
            col = v * (r + 1) + s
            for pos in range(r):
                rows[emb.orders[v][pos]][col] = tables["one"][hexp[src_rows[pos]][s]]
    return FrameMatrix(
        tuple(tuple(row) for row in rows),
        order,
        block_rows=b,
        point_rows=0,
        extra_rows=0,
        provenance=SteinerProvenance(sts, emb, sim),
    )


def tremain_etf(
    sts: SteinerTripleSystem,
    emb: EmbeddingAssignment,
    sim_r: UnimodularSimplex,
    sim_v: UnimodularSimplex,
) -> FrameMatrix:
    """Combine an embedded simplex family with a point-space simplex.

    Columns come in two kinds: for each point v and simplex index s, the
    embedded vector with a sqrt(2)-weighted complement entry at point row v;
    then V+1 columns carrying the point-space simplex at weight sqrt(1/2)
    with a sqrt(3/2)-weighted complement entry in the last row.
    """
    r, v_pts = sts.replication, sts.num_points
    if sim_r.dim != r or sim_r.count != r + 1:
        raise ValueError(f"first simplex must be {r + 1} vectors in dimension {r}")
    if sim_v.dim != v_pts or sim_v.count != v_pts + 1:
        raise ValueError(
            f"second simplex must be {v_pts + 1} vectors in dimension {v_pts}"
        )
    q1 = sim_r.source.root_order
    q2 = sim_v.source.root_order
    order = q1 * q2 // gcd(q1, q2)
    t1 = _zeta_tables(q1, order)
    t2 = _zeta_tables(q2, order)
    zero = ExtScalar.from_int(0, order)
    b = sts.block_count
    m = b + v_pts + 1
    n_cols = v_pts * (r + 1) + v_pts + 1
    rows = [[zero] * n_cols for _ in range(m)]

    h1 = sim_r.source.exponents
    rows1 = [i for i in range(sim_r.source.order) if i != sim_r.removed_row]
    naimark1 = h1[sim_r.removed_row]
    for v in range(v_pts):
        for s in range(r + 1):
            col = v * (r + 1) + s
            for pos in range(r):
                rows[emb.orders[v][pos]][col] = t1["one"][h1[rows1[pos]][s]]
            rows[b + v][col] = t1["sqrt2"][naimark1[s]]

    h2 = sim_v.source.exponents
    rows2 = [i for i in range(sim_v.source.order) if i != sim_v.removed_row]
    naimark2 = h2[sim_v.removed_row]
    for t in range(v_pts + 1):
        col = v_pts * (r + 1) + t
        for v in range(v_pts):
            rows[b + v][col] = t2["half_sqrt2"][h2[rows2[v]][t]]
        rows[m - 1][col] = t2["half_sqrt6"][naimark2[t]]

    return FrameMatrix(
        tuple(tuple(row) for row in rows),
        order,
        block_rows=b,
        point_rows=v_pts,
        extra_rows=1,
        provenance=TremainProvenance(sts, emb, sim_r, sim_v),
    )


def gram_matrix(frame: FrameMatrix) -> list[list[ExtScalar]]:
    """Exact Gram via sparse column dot products (reference path)."""
    supports = frame.column_supports
    cols = [
        {r: frame.entries[r][j] for r in supports[j]} for j in range(frame.count)
    ]
    conj_cache: dict[int, ExtScalar] = {}

    def conj(x: ExtScalar) -> ExtScalar:
        c = conj_cache.get(id(x))
        if c is None:
            c = conj_cache[id(x)] = x.conjugate()
        return c

    zero = ExtScalar.from_int(0, frame.order)
    n = frame.count
    g = [[zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a, bm = cols[i], cols[j]
            if len(bm) < len(a):
                total = zero
                for r, y in bm.items():
                    x = a.get(r)
                    if x is not None:
                        total = total + x * conj(y)
            else:
                total = zero
                for r, x in a.items():
                    y = bm.get(r)
                    if y is not None:
                        total = total + x * conj(y)
            g[i][j] = total
            if i != j:
                g[j][i] = conj(total)
    return g


# ---------------------------------------------------------------------------
# fast exact path for frames over Z[sqrt2, sqrt3] (real, no roots of unity)


def _real_components(frame: FrameMatrix) -> tuple[np.ndarray, int]:
    """Integer coordinate arrays (4, M, N) of 2^k * entries, plus k.

    Only valid when the frame order is 1 or 2, where each scalar component
    is a plain integer and the (1, sqrt2, sqrt3, sqrt6) coordinates are
    unique.
    """
    if not frame.is_real_rational():
        raise ValueError("frame has genuine root-of-unity entries")
    comp_cache: dict[int, tuple[int, int, int, int, int]] = {}

    def comps(x: ExtScalar) -> tuple[int, int, int, int, int]:
        c = comp_cache.get(id(x))
        if c is None:
            c = comp_cache[id(x)] = (
                x.a.coeffs[0], x.b.coeffs[0], x.c.coeffs[0], x.d.coeffs[0], x.k,
            )
        return c

    k_max = 0
    for row in frame.entries:
        for x in row:
            k = comps(x)[4]
            if k > k_max:
                k_max = k
    out = np.zeros((4, frame.dim, frame.count), dtype=np.int64)
    for r, row in enumerate(frame.entries):
        for j, x in enumerate(row):
            a, b, c, d, k = comps(x)
            f = 1 << (k_max - k)
            out[0, r, j] = a * f
            out[1, r, j] = b * f
            out[2, r, j] = c * f
            out[3, r, j] = d * f
    return out, k_max


def _exact_int_matmul(at: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a.T @ b in float64, exact because magnitudes stay far below 2^53."""
    bound = at.shape[0] * max(1, int(np.abs(at).max())) * max(1, int(np.abs(b).max()))
    assert bound < 2 ** 52, "entries too large for the float64 fast path"
    prod = at.astype(np.float64).T @ b.astype(np.float64)
    return np.rint(prod).astype(np.int64)


def _surd_product_components(x: np.ndarray, y: np.ndarray | None = None):
    """Componentwise (x0..x3) * (y0..y3) under the surd multiplication table."""
    if y is None:
        y = x
    p = {}
    for i in range(4):
        for j in range(4):
            p[i, j] = x[i] * y[j]
    g0 = p[0, 0] + 2 * p[1, 1] + 3 * p[2, 2] + 6 * p[3, 3]
    g1 = p[0, 1] + p[1, 0] + 3 * (p[2, 3] + p[3, 2])
    g2 = p[0, 2] + p[2, 0] + 2 * (p[1, 3] + p[3, 1])
    g3 = p[0, 3] + p[3, 0] + p[1, 2] + p[2, 1]
    return g0, g1, g2, g3


def _real_gram_components(frame: FrameMatrix, rows: bool = False):
    """(4, N, N) integer Gram of 2^k-scaled entries (or row Gram), plus k."""
    comps, k = _real_components(frame)
    mats = []
    done: dict[tuple[int, int], np.ndarray] = {}
    for i in range(4):
        for j in range(4):
            if (j, i) in done:
                done[(i, j)] = done[(j, i)].T
                continue
            if not comps[i].any() or not comps[j].any():
                shape = (
                    (frame.dim, frame.dim) if rows else (frame.count, frame.count)
                )
                done[(i, j)] = np.zeros(shape, dtype=np.int64)
                continue
            if rows:
                done[(i, j)] = _exact_int_matmul(comps[i].T, comps[j].T)
            else:
                done[(i, j)] = _exact_int_matmul(comps[i], comps[j])
    g0 = done[0, 0] + 2 * done[1, 1] + 3 * done[2, 2] + 6 * done[3, 3]
    g1 = done[0, 1] + done[1, 0] + 3 * (done[2, 3] + done[3, 2])
    g2 = done[0, 2] + done[2, 0] + 2 * (done[1, 3] + done[3, 1])
    g3 = done[0, 3] + done[3, 0] + done[1, 2] + done[2, 1]
    return np.stack([g0, g1, g2, g3]), k


def real_gram_signs(frame: FrameMatrix) -> np.ndarray:
    """Sign matrix of a real frame's Gram, exact, with unimodular check.

    Requires every off-diagonal Gram value to be a nonzero rational (no
    surd part), which holds for real Steiner and Tremain frames.
    """
    g, _ = _real_gram_components(frame)
    off = ~np.eye(frame.count, dtype=bool)
    if g[1][off].any() or g[2][off].any() or g[3][off].any():
        raise ValueError("off-diagonal Gram values have surd parts")
    if not g[0][off].all():
        raise ValueError("some off-diagonal Gram values vanish")
    signs = np.sign(g[0]).astype(np.int8)
    np.fill_diagonal(signs, 0)
    return signs


@dataclass(frozen=True)
class ETFReport:
    mode: str
    dim: int
    count: int
    equal_norms: bool
    norm_sq: Fraction | None
    is_tight: bool
    tight_constant: Fraction | None
    is_equiangular: bool
    gram_abs_sq: Fraction | None
    coherence_sq: Fraction | None
    coherence: float | None
    welch_sq: Fraction
    welch: float
    is_etf: bool
    meets_welch: bool
    max_residual: float | None = None
    witness: str | None = None

    def to_dict(self) -> dict:
        def frac(x):
            return None if x is None else [x.numerator, x.denominator]

        return {
            "mode": self.mode,
            "M": self.dim,
            "N": self.count,
            "equal_norms": self.equal_norms,
            "norm_sq": frac(self.norm_sq),
            "is_tight": self.is_tight,
            "tight_constant": frac(self.tight_constant),
            "is_equiangular": self.is_equiangular,
            "gram_abs_sq": frac(self.gram_abs_sq),
            "coherence_sq": frac(self.coherence_sq),
            "coherence": self.coherence,
            "welch_sq": frac(self.welch_sq),
            "welch": self.welch,
            "is_etf": self.is_etf,
            "meets_welch": self.meets_welch,
            "max_residual": self.max_residual,
            "witness": self.witness,
        }


def _report(
    frame: FrameMatrix,
    mode: str,
    equal_norms: bool,
    norm_sq: Fraction | None,
    is_tight: bool,
    is_equiangular: bool,
    gram_abs_sq: Fraction | None,
    max_residual: float | None = None,
    witness: str | None = None,
) -> ETFReport:
    m, n = frame.dim, frame.count
    wb = welch_bound(m, n)
    tight_constant = None
    if is_tight and norm_sq is not None:
        tight_constant = Fraction(n, m) * norm_sq
    coherence_sq = None
    coherence = None
    if equal_norms and norm_sq and gram_abs_sq is not None:
        coherence_sq = gram_abs_sq / (norm_sq * norm_sq)
        coherence = float(coherence_sq) ** 0.5
    is_etf = is_tight and is_equiangular
    meets = coherence_sq == wb.squared if coherence_sq is not None else False
    return ETFReport(
        mode, m, n, equal_norms, norm_sq, is_tight, tight_constant,
        is_equiangular, gram_abs_sq, coherence_sq, coherence,
        wb.squared, wb.value, is_etf, meets, max_residual, witness,
    )


def _verify_exact_general(frame: FrameMatrix) -> ETFReport:
    g = gram_matrix(frame)
    n, m = frame.count, frame.dim
    witness = None
    norm0 = g[0][0]
    equal_norms = True
    for i in range(1, n):
        if g[i][i] != norm0:
            equal_norms = False
            witness = f"norms differ at columns 0 and {i}"
            break
    norm_frac = norm0.as_fraction()

    is_equi = True
    common: ExtScalar | None = None
    for i in range(n):
        for j in range(i + 1, n):
            sq = g[i][j].abs_sq()
            if common is None:
                common = sq
            elif sq != common:
                is_equi = False
                witness = witness or f"|Gram| differs at pair (0,1) vs ({i},{j})"
                break
        if not is_equi:
            break
    gram_abs = common.as_fraction() if (is_equi and common is not None) else None

    # frame operator: rows of the frame against each other
    is_tight = equal_norms
    if is_tight:
        conj_cache: dict[int, ExtScalar] = {}

        def conj(x: ExtScalar) -> ExtScalar:
            c = conj_cache.get(id(x))
            if c is None:
                c = conj_cache[id(x)] = x.conjugate()
            return c

        target = ExtScalar.from_int(n, frame.order) * norm0
        m_scalar = ExtScalar.from_int(m, frame.order)
        zero = ExtScalar.from_int(0, frame.order)
        for r in range(m):
            for s in range(r, m):
                total = zero
                row_r, row_s = frame.entries[r], frame.entries[s]
                for j in range(n):
                    x = row_r[j]
                    y = row_s[j]
                    total = total + x * conj(y)
                if r == s:
                    if total * m_scalar != target:
                        is_tight = False
                        witness = witness or f"frame operator diagonal off at {r}"
                        break
                elif not total.is_zero():
                    is_tight = False
                    witness = witness or f"frame operator off-diagonal ({r},{s})"
                    break
            if not is_tight:
                break

    return _report(
        frame, "exact", equal_norms, norm_frac, is_tight, is_equi, gram_abs,
        witness=witness,
    )


def _verify_exact_real(frame: FrameMatrix) -> ETFReport:
    g, k = _real_gram_components(frame)
    n, m = frame.count, frame.dim
    scale = 1 << (2 * k)
    witness = None

    diag = g[:, range(n), range(n)]
    equal_norms = bool(
        all((diag[c] == diag[c][0]).all() for c in range(4))
    )
    norm_frac = None
    if equal_norms and diag[1][0] == 0 and diag[2][0] == 0 and diag[3][0] == 0:
        norm_frac = Fraction(int(diag[0][0]), scale)
    if not equal_norms:
        witness = "norms differ"

    off = ~np.eye(n, dtype=bool)
    # |g|^2 = g * conj(g) = g^2 for real frames
    s0, s1, s2, s3 = _surd_product_components(g)
    is_equi = True
    gram_abs = None
    vals = [comp[off] for comp in (s0, s1, s2, s3)]
    if any(v.size and v.min() != v.max() for v in vals):
        is_equi = False
        witness = witness or "|Gram|^2 not constant off the diagonal"
    elif vals[1][0] == 0 and vals[2][0] == 0 and vals[3][0] == 0:
        gram_abs = Fraction(int(vals[0][0]), scale * scale)

    fo, _ = _real_gram_components(frame, rows=True)
    offm = ~np.eye(m, dtype=bool)
    is_tight = equal_norms and not any(fo[c][offm].any() for c in range(4))
    if is_tight:
        fdiag = fo[:, range(m), range(m)]
        # M * (frame operator diagonal) == N * norm_sq, both at scale 4^k
        for c in range(4):
            if fdiag[c].min() != fdiag[c].max() or (
                m * int(fdiag[c][0]) != n * int(diag[c][0])
            ):
                is_tight = False
                break
    if not is_tight and witness is None:
        witness = "frame operator is not a multiple of the identity"

    return _report(
        frame, "exact", equal_norms, norm_frac, is_tight, is_equi, gram_abs,
        witness=witness,
    )


def _verify_float(frame: FrameMatrix, tol: float) -> ETFReport:
    a = frame.to_complex_array()
    n, m = frame.count, frame.dim
    g = a.conj().T @ a
    norms = g.diagonal().real
    norm_mean = norms.mean()
    res_norms = float(np.abs(norms - norm_mean).max())
    off = ~np.eye(n, dtype=bool)
    mods = np.abs(g[off])
    mod_mean = mods.mean()
    res_equi = float(np.abs(mods - mod_mean).max())
    fo = a @ a.conj().T
    const = n * norm_mean / m
    res_tight = float(np.abs(fo - const * np.eye(m)).max())
    max_res = max(res_norms, res_equi, res_tight)
    equal_norms = res_norms <= tol
    is_equi = res_equi <= tol
    is_tight = res_tight <= tol and equal_norms
    norm_frac = Fraction(round(norm_mean)) if abs(norm_mean - round(norm_mean)) < tol else None
    gram_sq = mod_mean * mod_mean
    gram_frac = None
    if gram_sq and abs(gram_sq - round(gram_sq)) < max(tol, 1e-8):
        gram_frac = Fraction(round(gram_sq))
    report = _report(
        frame, "float", equal_norms, norm_frac, is_tight, is_equi, gram_frac,
        max_residual=max_res,
    )
    return report


def verify_etf(frame: FrameMatrix, mode: str = "exact", tol: float = 1e-10) -> ETFReport:
    """Certify equal norms, tightness, and equiangularity of a frame.

    Exact mode recomputes the full Gram matrix and frame operator in exact
    arithmetic; float mode does the same numerically under ``tol``.
    """
    if mode == "float":
        return _verify_float(frame, tol)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if frame.is_real_rational():
        return _verify_exact_real(frame)
    return _verify_exact_general(frame)


# ---------------------------------------------------------------------------
# file formats


def _cyc_token(c: CycInt) -> str:
    return ",".join(map(str, c.coeffs))


def store_frame_exact(path: str | Path, frame: FrameMatrix) -> None:
    """Header `M N m`, band sizes, then entries as (a|b|c|d|k) tuples."""
    lines = [
        f"{frame.dim} {frame.count} {frame.order}",
        f"bands {frame.block_rows} {frame.point_rows} {frame.extra_rows}",
    ]
    for row in frame.entries:
        toks = []
        for x in row:
            toks.append(
                f"({_cyc_token(x.a)}|{_cyc_token(x.b)}|{_cyc_token(x.c)}"
                f"|{_cyc_token(x.d)}|{x.k})"
            )
        lines.append(" ".join(toks))
    Path(path).write_text("\n".join(lines) + "\n")


def load_frame_exact(path: str | Path) -> FrameMatrix:
    raw = [ln for ln in Path(path).read_text().split("\n") if ln.strip()]
    head = raw[0].split()
    if len(head) != 3:
        raise ValueError(f"{path}: bad frame header {raw[0]!r}")
    m, n, order = map(int, head)
    band_line = raw[1].split()
    if band_line[0] != "bands" or len(band_line) != 4:
        raise ValueError(f"{path}: bad band line {raw[1]!r}")
    b, p, e = map(int, band_line[1:])
    if b + p + e != m:
        raise ValueError(f"{path}: bands {b}+{p}+{e} != M={m}")
    if len(raw) != m + 2:
        raise ValueError(f"{path}: expected {m} entry rows")
    cache: dict[str, ExtScalar] = {}

    def parse(tok: str) -> ExtScalar:
        got = cache.get(tok)
        if got is not None:
            return got
        if not (tok.startswith("(") and tok.endswith(")")):
            raise ValueError(f"{path}: bad entry token {tok!r}")
        parts = tok[1:-1].split("|")
        if len(parts) != 5:
            raise ValueError(f"{path}: bad entry token {tok!r}")
        comps = [
            CycInt(order, [int(t) for t in part.split(",")]) for part in parts[:4]
        ]
        val = ExtScalar(*comps, k=int(parts[4]))
        cache[tok] = val
        return val

    rows = []
    for ln in raw[2:]:
        row = tuple(parse(tok) for tok in ln.split())
        if len(row) != n:
            raise ValueError(f"{path}: row has {len(row)} entries, expected {n}")
        rows.append(row)
    return FrameMatrix(tuple(rows), order, b, p, e)


def store_frame_csv(path: str | Path, frame: FrameMatrix) -> None:
    """Float CSV: M rows of alternating real,imag parts (2N fields)."""
    a = frame.to_complex_array()
    lines = []
    for r in range(frame.dim):
        fields = []
        for j in range(frame.count):
            fields.append(repr(a[r, j].real))
            fields.append(repr(a[r, j].imag))
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")

"""Hyperbolic toral groups acting on the complex projective plane.

A hyperbolic integer matrix A spawns the cyclic-by-lattice group of
projective maps (k, n, m) |-> [[A^k, (n, m)], [0, 1]].  Conjugating by the
eigenbasis diagonalizes the block, the affine chart splits into four
half-plane products, and accumulation of the group produces kernel lines
lying in two real pencils plus the line at infinity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import ProductPoint
from .sol import SolElement


# ---------------------------------------------------------------------------
# projective primitives

def _normalize_homogeneous(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Scale to sup-norm one with the first significant entry real positive."""
    v = np.asarray(v, dtype=complex)
    m = np.abs(v).max()
    if m == 0:
        raise ValueError("homogeneous data cannot be identically zero")
    v = v / m
    flat = v.flatten()
    idx = np.nonzero(np.abs(flat) > tol)[0][0]
    pivot = flat[idx]
    return v * (pivot.conjugate() / abs(pivot))


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of P^2_C in normalized homogeneous coordinates."""

    coords: np.ndarray

    def __init__(self, coords: Sequence[complex]) -> None:
        c = np.asarray(coords, dtype=complex)
        if c.shape != (3,):
            raise ValueError("projective point needs 3 homogeneous coordinates")
        object.__setattr__(self, "coords", _normalize_homogeneous(c))

    def gap(self, other: "ProjectivePoint") -> float:
        return float(np.abs(self.coords - other.coords).max())


@dataclass(frozen=True)
class ProjectiveLine:
    """Line of P^2_C in normalized dual coordinates; z is on the line iff dual . z = 0."""

    dual: np.ndarray

    def __init__(self, dual: Sequence[complex]) -> None:
        d = np.asarray(dual, dtype=complex)
        if d.shape != (3,):
            raise ValueError("projective line needs 3 dual coordinates")
        object.__setattr__(self, "dual", _normalize_homogeneous(d))

    def gap(self, other: "ProjectiveLine") -> float:
        return float(np.abs(self.dual - other.dual).max())

    def contains(self, p: ProjectivePoint, tol: float = 1e-10) -> bool:
        return abs(np.dot(self.dual, p.coords)) <= tol


def line_through(p: ProjectivePoint, q: ProjectivePoint) -> ProjectiveLine:
    """The unique line through two distinct points, by the bilinear cross product."""
    d = np.cross(p.coords, q.coords)
    if np.abs(d).max() < 1e-12:
        raise ValueError("points coincide, no unique line")
    return ProjectiveLine(d)


def lines_intersection(l1: ProjectiveLine, l2: ProjectiveLine) -> ProjectivePoint:
    c = np.cross(l1.dual, l2.dual)
    if np.abs(c).max() < 1e-12:
        raise ValueError("lines coincide, no unique intersection")
    return ProjectivePoint(c)


def lines_concurrent(l1: ProjectiveLine, l2: ProjectiveLine, l3: ProjectiveLine,
                     tol: float = 1e-8) -> bool:
    """Whether three lines share a point: determinant of normalized duals below tol."""
    det = np.linalg.det(np.vstack([l1.dual, l2.dual, l3.dual]))
    return abs(det) <= tol


@dataclass(frozen=True)
class PseudoProjectiveMap:
    """Nonzero 3 x 3 complex matrix up to scale, possibly singular."""

    matrix: np.ndarray

    def __init__(self, matrix) -> None:
        M = np.asarray(matrix, dtype=complex)
        if M.shape != (3, 3):
            raise ValueError("pseudo-projective map needs a 3 x 3 matrix")
        object.__setattr__(self, "matrix", _normalize_homogeneous(M))

    def gap(self, other: "PseudoProjectiveMap") -> float:
        return float(np.abs(self.matrix - other.matrix).max())

    def kernel(self, rank_tol: float = 1e-8) -> Tuple[int, np.ndarray]:
        """Numerical kernel dimension and an orthonormal basis (columns)."""
        _, s, vt = np.linalg.svd(self.matrix)
        dim = int(np.sum(s < rank_tol))
        basis = vt[3 - dim:].conj().T if dim else np.zeros((3, 0))
        return dim, basis

    def kernel_projective(self, rank_tol: float = 1e-8):
        """None, a ProjectivePoint, or a ProjectiveLine, by kernel dimension."""
        dim, basis = self.kernel(rank_tol)
        if dim == 0 or dim == 3:
            return None
        if dim == 1:
            return ProjectivePoint(basis[:, 0])
        return line_through(ProjectivePoint(basis[:, 0]), ProjectivePoint(basis[:, 1]))


# ---------------------------------------------------------------------------
# hyperbolic toral groups

def _int_mat(M) -> List[List[int]]:
    A = [[int(M[i][j]) for j in range(2)] for i in range(2)]
    for i in range(2):
        for j in range(2):
            if A[i][j] != M[i][j]:
                raise ValueError("matrix entries must be integers")
    return A


def _imul(X, Y):
    return [[X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]],
            [X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]]]


def _ipow(A, k: int):
    """Exact integer power of a determinant-one matrix, any sign of k."""
    if k < 0:
        A = [[A[1][1], -A[0][1]], [-A[1][0], A[0][0]]]
        k = -k
    R = [[1, 0], [0, 1]]
    while k:
        if k & 1:
            R = _imul(R, A)
        A = _imul(A, A)
        k >>= 1
    return R


@dataclass(frozen=True)
class ToralGroupSpec:
    """Hyperbolic A in SL(2, Z) together with its eigendata.

    lam is the eigenvalue above one; P holds normalized eigenvector columns,
    so A P = P diag(lam, 1/lam).  The translation lattice in conjugated
    coordinates is spanned by the columns of P^{-1}.
    """

    A: tuple
    lam: float
    P: np.ndarray
    P_inv: np.ndarray

    @classmethod
    def from_matrix(cls, A) -> "ToralGroupSpec":
        M = _int_mat(A)
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        if det != 1:
            raise ValueError("matrix must have determinant one")
        tr = M[0][0] + M[1][1]
        if tr <= 2:
            # an eigenvalue above one needs trace above two; negate first if
            # the trace is below minus two
            raise ValueError("matrix must be hyperbolic with trace above two")
        lam = (tr + math.sqrt(tr * tr - 4)) / 2.0
        mu = 1.0 / lam

        def eigvec(ev: float) -> np.ndarray:
            if M[0][1] != 0:
                v = np.array([M[0][1], ev - M[0][0]], dtype=float)
            elif M[1][0] != 0:
                v = np.array([ev - M[1][1], M[1][0]], dtype=float)
            else:
                raise ValueError("matrix is diagonal, not hyperbolic")
            v = v / np.abs(v).max()
            lead = v[np.nonzero(np.abs(v) > 1e-12)[0][0]]
            return v if lead > 0 else -v

        P = np.column_stack([eigvec(lam), eigvec(mu)])
        return cls(tuple(tuple(r) for r in M), lam, P, np.linalg.inv(P))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A)

    @property
    def lattice_basis(self) -> np.ndarray:
        return self.P_inv.copy()


def toral_element(spec: ToralGroupSpec, k: int, n: int, m: int,
                  form: str = "integral") -> np.ndarray:
    """3 x 3 matrix of the group element (k, n, m).

    integral: exact integer block matrix [[A^k, (n, m)], [0, 1]].
    conjugated: float matrix [[diag(lam^k, lam^-k), P^{-1}(n, m)], [0, 1]].
    """
    if form == "integral":
        Ak = _ipow([list(r) for r in spec.A], k)
        out = np.empty((3, 3), dtype=object)
        out[0, 0], out[0, 1], out[0, 2] = Ak[0][0], Ak[0][1], n
        out[1, 0], out[1, 1], out[1, 2] = Ak[1][0], Ak[1][1], m
        out[2, 0], out[2, 1], out[2, 2] = 0, 0, 1
        return out
    if form == "conjugated":
        out = np.zeros((3, 3))
        out[0, 0] = spec.lam ** k
        out[1, 1] = spec.lam ** (-k)
        out[:2, 2] = spec.P_inv @ np.array([n, m], dtype=float)
        out[2, 2] = 1.0
        return out
    raise ValueError(f"unknown form {form!r}")


def toral_act(spec: ToralGroupSpec, g: Tuple[int, int, int],
              z: ProductPoint) -> ProductPoint:
    """Conjugated affine action on the product of half planes.

    The first factor scales by lam^k, the second by lam^-k, and the
    conjugated lattice vector translates the real parts.
    """
    k, n, m = g
    s = spec.lam ** k
    u, v = spec.P_inv @ np.array([n, m], dtype=float)
    return ProductPoint.from_complex(s * z.z1.complex + u, z.z2.complex / s + v)


def projective_act(matrix: np.ndarray, p: ProjectivePoint) -> ProjectivePoint:
    """Image of a point under a projective transformation."""
    img = np.asarray(matrix, dtype=complex) @ p.coords
    return ProjectivePoint(img)


def toral_compose(spec: ToralGroupSpec,
                  g: Tuple[int, int, int],
                  h: Tuple[int, int, int]) -> Tuple[int, int, int]:
    """Exact semidirect product law (k, b)(k', b') = (k + k', b + A^k b')."""
    k, n, m = g
    k2, n2, m2 = h
    Ak = _ipow([list(r) for r in spec.A], k)
    return (k + k2, n + Ak[0][0] * n2 + Ak[0][1] * m2, m + Ak[1][0] * n2 + Ak[1][1] * m2)


def word_ball(spec: ToralGroupSpec, n: int) -> List[Tuple[int, int, int]]:
    """Elements (k, n, m) with |k| + |n| + |m| <= n, sorted."""
    if n < 0:
        raise ValueError("word bound must be nonnegative")
    out = []
    for k in range(-n, n + 1):
        rem_k = n - abs(k)
        for a in range(-rem_k, rem_k + 1):
            rem = rem_k - abs(a)
            for b in range(-rem, rem + 1):
                out.append((k, a, b))
    return sorted(out)


# ---------------------------------------------------------------------------
# limit kernels

@dataclass(frozen=True)
class LimitLine:
    line: ProjectiveLine
    weight: int          # number of ball elements accumulating on this line


@dataclass(frozen=True)
class LimitKernelResult:
    lines: List[LimitLine]
    points: List[Tuple[ProjectivePoint, int]]
    nonconverged: List[Tuple[int, int, int]]


def _power_limit(M: np.ndarray, cluster_eps: float,
                 max_iter: int = 120) -> Tuple[Optional[np.ndarray], float]:
    """Accumulation matrix of the powers of M in pseudo-projective space.

    Normalized repeated squaring; the sequence clusters when successive
    lifts agree within cluster_eps.  Returns (limit, final gap).
    """
    L = _normalize_homogeneous(M)
    stop = min(cluster_eps, 1e-14)
    gap = math.inf
    for _ in range(max_iter):
        L2 = _normalize_homogeneous(L @ L)
        gap = float(np.abs(L2 - L).max())
        L = L2
        if gap <= stop:
            break
    return (L if gap <= cluster_eps else None), gap


def pseudo_limit_kernels(spec: ToralGroupSpec, n: int,
                         cluster_eps: float = 1e-6,
                         rank_tol: float = 1e-8) -> LimitKernelResult:
    """Kernel lines and points of accumulation maps of the word ball.

    Every nonidentity element's normalized power sequence clusters on a
    singular pseudo-projective map; kernels come from singular values below
    rank_tol, two-dimensional ones projectivized to lines.  Finite word
    balls never carry near-singular lifts themselves at these tolerances,
    so accumulation is what produces the kernels.
    """
    if cluster_eps <= 0 or rank_tol <= 0:
        raise ValueError("clustering parameters must be positive")
    ball = word_ball(spec, n)
    if len(ball) <= 1:
        return LimitKernelResult([], [], [])
    lines: List[ProjectiveLine] = []
    line_weights: List[int] = []
    points: List[ProjectivePoint] = []
    point_weights: List[int] = []
    bad: List[Tuple[int, int, int]] = []
    for kmn in ball:
        if kmn == (0, 0, 0):
            continue
        M = toral_element(spec, *kmn, form="conjugated")
        limit, _ = _power_limit(M, cluster_eps)
        if limit is None:
            bad.append(kmn)
            continue
        ker = PseudoProjectiveMap(limit).kernel_projective(rank_tol)
        if ker is None:
            bad.append(kmn)
        elif isinstance(ker, ProjectiveLine):
            for i, known in enumerate(lines):
                if known.gap(ker) < 1e-9:
                    line_weights[i] += 1
                    break
            else:
                lines.append(ker)
                line_weights.append(1)
        else:
            for i, known in enumerate(points):
                if known.gap(ker) < 1e-9:
                    point_weights[i] += 1
                    break
            else:
                points.append(ker)
                point_weights.append(1)
    return LimitKernelResult(
        [LimitLine(l, w) for l, w in zip(lines, line_weights)],
        list(zip(points, point_weights)),
        bad,
    )


def classify_limit_line(line: ProjectiveLine, tol: float = 1e-8):
    """Match a line against the limit family.

    Returns ("infinity", None), ("pencil1", r) for z1 = r z3,
    ("pencil2", r) for z2 = r z3, or ("unclassified", None).
    """
    l1, l2, l3 = line.dual
    if abs(l1) <= tol and abs(l2) <= tol:
        return ("infinity", None)
    if abs(l2) <= tol and abs(l1) > tol:
        r = -l3 / l1
        if abs(r.imag) <= tol:
            return ("pencil1", float(r.real))
    if abs(l1) <= tol and abs(l2) > tol:
        r = -l3 / l2
        if abs(r.imag) <= tol:
            return ("pencil2", float(r.real))
    return ("unclassified", None)


def reference_limit_lines() -> List[ProjectiveLine]:
    """Closed-form members of the limit family: the line at infinity and two
    members of each pencil, enough to witness four in general position."""
    return [
        ProjectiveLine([0, 0, 1]),
        ProjectiveLine([1, 0, 0]),
        ProjectiveLine([1, 0, -1]),
        ProjectiveLine([0, 1, 0]),
        ProjectiveLine([0, 1, -1]),
    ]


# ---------------------------------------------------------------------------
# general position

@dataclass(frozen=True)
class GeneralPositionResult:
    size: int
    witness: Tuple[int, ...]      # indices into the deduplicated line list
    exhaustive: bool


def _dedupe_lines(lines: Sequence[ProjectiveLine]) -> List[ProjectiveLine]:
    kept: List[ProjectiveLine] = []
    for l in lines:
        if all(l.gap(k) >= 1e-9 for k in kept):
            kept.append(l)
    return kept


def general_position_max(lines: Sequence[ProjectiveLine],
                         tol: float = 1e-8) -> GeneralPositionResult:
    """Largest subset with no three concurrent lines.

    Exhaustive branch and bound up to 20 distinct lines; greedy seeding with
    remove-and-extend local search above that, flagged non-exhaustive.
    """
    ls = _dedupe_lines(lines)
    nl = len(ls)
    if nl == 0:
        return GeneralPositionResult(0, (), True)

    duals = np.array([l.dual for l in ls])

    def concurrent(i: int, j: int, k: int) -> bool:
        return abs(np.linalg.det(duals[[i, j, k]])) <= tol

    def compatible(idx: int, chosen: Tuple[int, ...]) -> bool:
        return all(not concurrent(a, b, idx)
                   for a, b in itertools.combinations(chosen, 2))

    def greedy(start: Tuple[int, ...], order: Iterable[int]) -> Tuple[int, ...]:
        chosen = tuple(start)
        for i in order:
            if i not in chosen and compatible(i, chosen):
                chosen = chosen + (i,)
        return chosen

    if nl <= 20:
        best: Tuple[int, ...] = ()

        def extend(chosen: Tuple[int, ...], start: int) -> None:
            nonlocal best
            if len(chosen) > len(best):
                best = chosen
            if len(chosen) + (nl - start) <= len(best):
                return
            for i in range(start, nl):
                if compatible(i, chosen):
                    extend(chosen + (i,), i + 1)

        extend((), 0)
        return GeneralPositionResult(len(best), best, True)

    best = greedy((), range(nl))
    improved = True
    while improved:
        improved = False
        for drop in range(len(best)):
            trial = greedy(tuple(x for i, x in enumerate(best) if i != drop), range(nl))
            if len(trial) > len(best):
                best = trial
                improved = True
                break
    return GeneralPositionResult(len(best), best, False)


# ---------------------------------------------------------------------------
# discontinuity domain

@dataclass(frozen=True)
class MembershipResult:
    in_domain: bool
    signs: Optional[Tuple[int, int]]
    reason: str


def kulkarni_membership(spec: ToralGroupSpec, p: ProjectivePoint,
                        tol: float = 0.0) -> MembershipResult:
    """Locate a point (conjugated coordinates) relative to the discontinuity
    region, the four products of open half-planes."""
    z1, z2, z3 = p.coords
    if abs(z3) <= tol:
        return MembershipResult(False, None, "on the line at infinity")
    u1, u2 = z1 / z3, z2 / z3
    if abs(u1.imag) <= tol:
        return MembershipResult(False, None, "first coordinate real")
    if abs(u2.imag) <= tol:
        return MembershipResult(False, None, "second coordinate real")
    return MembershipResult(True, (1 if u1.imag > 0 else -1, 1 if u2.imag > 0 else -1),
                            "interior point")


Box4 = Tuple[Tuple[float, float], Tuple[float, float],
             Tuple[float, float], Tuple[float, float]]


def _check_box(box: Box4) -> None:
    (x1, y1, x2, y2) = box
    for lo, hi in box:
        if not lo <= hi:
            raise ValueError("box intervals must be ordered")
    if y1[0] <= 0 or y2[0] <= 0:
        raise ValueError("box must keep both heights away from the limit set")


def intersecting_elements(spec: ToralGroupSpec, box: Box4,
                          n: int) -> List[Tuple[int, int, int]]:
    """Ball elements whose conjugated affine image of the box meets the box.

    The action is interval-exact: z1 scales by lam^k and translates, z2 by
    lam^{-k}; overlaps are padded outward by 1e-12.
    """
    _check_box(box)
    (x1, y1, x2, y2) = box
    pad = 1e-12
    hits = []
    for (k, a, b) in word_ball(spec, n):
        s = spec.lam ** k
        u, v = spec.P_inv @ np.array([a, b], dtype=float)
        if s * y1[0] > y1[1] + pad or s * y1[1] < y1[0] - pad:
            continue
        if y2[0] / s > y2[1] + pad or y2[1] / s < y2[0] - pad:
            continue
        if s * x1[0] + u > x1[1] + pad or s * x1[1] + u < x1[0] - pad:
            continue
        if x2[0] / s + v > x2[1] + pad or x2[1] / s + v < x2[0] - pad:
            continue
        hits.append((k, a, b))
    return hits


def proper_discontinuity_count(spec: ToralGroupSpec, box: Box4, n: int) -> int:
    """Number of word-ball elements moving the box onto itself somewhere."""
    return len(intersecting_elements(spec, box, n))


# ---------------------------------------------------------------------------
# lattice embeddings and isomorphism

def sol_lattice_embed(spec: ToralGroupSpec, k: int, n: int, m: int) -> SolElement:
    """Element of the continuous solvable group acting like (k, n, m).

    The conjugated affine action matches the standard solvable action with
    t = k log(lam) and the conjugated translation pair.
    """
    u, v = spec.P_inv @ np.array([n, m], dtype=float)
    return SolElement(k * math.log(spec.lam), float(u), float(v))


@dataclass(frozen=True)
class LatticeIsoResult:
    status: str                        # "found" | "refuted" | "not_found"
    conjugator: Optional[np.ndarray]   # integer matrix U with U A U^{-1} = target
    target: Optional[str]              # "B" | "B_inverse"


def _validate_hyperbolic(M) -> List[List[int]]:
    A = _int_mat(M)
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if det != 1:
        raise ValueError("matrix must have determinant one")
    if abs(A[0][0] + A[1][1]) <= 2:
        raise ValueError("matrix must be hyperbolic")
    return A


def _conjugates_to(U, A, B) -> bool:
    """Exact check U A = B U with det U = +-1."""
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    if det not in (1, -1):
        return False
    UA = _imul(U, A)
    BU = _imul(B, U)
    return UA == BU


def lattice_iso_test(A, B, bound: int = 50) -> LatticeIsoResult:
    """Decide conjugacy of <A> and <B> inside GL(2, Z), up to inverting B.

    The trace is a conjugacy invariant and matches that of the inverse, so a
    trace mismatch refutes.  Otherwise conjugators are searched with first
    row in [-bound, bound]^2, the second row solved exactly from the linear
    relation U A = B U; any returned conjugator is verified in integers.
    """
    Ai = _validate_hyperbolic(A)
    Bi = _validate_hyperbolic(B)
    trA = Ai[0][0] + Ai[1][1]
    trB = Bi[0][0] + Bi[1][1]
    if trA != trB:
        return LatticeIsoResult("refuted", None, None)

    Binv = [[Bi[1][1], -Bi[0][1]], [-Bi[1][0], Bi[0][0]]]
    targets = (("B", Bi), ("B_inverse", Binv))

    for name, T in targets:
        if _conjugates_to([[1, 0], [0, 1]], Ai, T):
            return LatticeIsoResult("found", np.array([[1, 0], [0, 1]]), name)

    a1, a2, a3, a4 = Ai[0][0], Ai[0][1], Ai[1][0], Ai[1][1]
    candidates = sorted(
        ((p, q) for p in range(-bound, bound + 1) for q in range(-bound, bound + 1)
         if (p, q) != (0, 0)),
        key=lambda pq: (abs(pq[0]) + abs(pq[1]), pq))
    for name, T in targets:
        b1, b2, b3, b4 = T[0][0], T[0][1], T[1][0], T[1][1]
        for p, q in candidates:
            if b2 != 0:
                num_r = p * (a1 - b1) + q * a3
                num_s = p * a2 + q * (a4 - b1)
                if num_r % b2 or num_s % b2:
                    continue
                U = [[p, q], [num_r // b2, num_s // b2]]
            elif b3 != 0:
                # rows swap roles: solve the first row from the second
                num_p = p * a1 + q * a3 - b4 * p
                num_q = p * a2 + q * a4 - b4 * q
                if num_p % b3 or num_q % b3:
                    continue
                U = [[num_p // b3, num_q // b3], [p, q]]
            else:
                break  # diagonal target cannot be hyperbolic
            if _conjugates_to(U, Ai, T):
                return LatticeIsoResult("found", np.array(U), name)
    return LatticeIsoResult("not_found", None, None)


# ---------------------------------------------------------------------------
# fundamental domain

def fundamental_domain_reduce(spec: ToralGroupSpec,
                              z: ProductPoint) -> Tuple[Tuple[int, int, int], ProductPoint]:
    """Move z into the standard fundamental domain of the lattice action.

    The height of the first factor is scaled into [1, lam), then the
    horizontal pair is reduced modulo the conjugated translation lattice.
    Returns the group element applied and the representative.
    """
    k = -math.floor(math.log(z.z1.y) / math.log(spec.lam))
    s = spec.lam ** k
    w = np.array([s * z.z1.x, z.z2.x / s])
    nm = np.floor(spec.P @ w)
    n, m = int(nm[0]), int(nm[1])
    u, v = spec.P_inv @ np.array([-n, -m], dtype=float)
    rep = ProductPoint.from_complex(complex(w[0] + u, s * z.z1.y),
                                    complex(w[1] + v, z.z2.y / s))
    return ((k, -n, -m), rep)

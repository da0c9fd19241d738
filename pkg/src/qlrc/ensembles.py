"""Random qLRC ensemble and AEL distance amplification.

Random ensemble: start from the block parity patterns (one weight-r X
check and one weight-r Z check per length-r block, mutually orthogonal),
then grow each check matrix by uniformly sampled rows from the orthogonal
complement of the other side. Sampling is deterministic per seed, with
per-step rejection of rows already in the span.

When the field characteristic divides r-1 the textbook Z pattern
(-(r-1), 1, ..., 1) degenerates: its leading entry vanishes, so block
start positions would lose their Z-side covering check and single-qudit
recovery would fail there. In that case an equivalent all-nonzero pattern
(1-c, 1, ..., 1, c) with the same support and the same orthogonality is
used instead.

AEL: concatenate an outer CSS code over GF(q^k_in) with an inner CSS code
over GF(q), fold Delta inner symbols per block (recovery blocks stay
inside one fold), and route sub-symbols along a sampled Delta-regular
bipartite graph. Exactness of the CSS condition after flattening rests on
two dualities: the outer Z side is flattened in the polynomial basis and
the X side in its trace-dual basis, and the inner logical sections are
chosen dual to each other. The decoder unroutes, decodes every inner
block by bounded-distance syndrome lookup (failures become erasures), and
finishes with an outer errors-and-erasures Reed-Solomon decode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .classical import LinearCode, eval_code, min_weight_below, rs_code
from .css import CssCode, PauliError, RecoverySet, css_new
from .errors import (
    AlphabetMismatch,
    CapExceeded,
    DecodingFailed,
    FoldingMismatch,
    SamplingExhausted,
    SamplingFailedAfterRetries,
    ValidationError,
)
from .gf import FieldCtx, RowSpace, Solver, field_new, nullspace, rank, rref
from .polycode import evaluate_values

_REJECTION_TRIES = 256


def stream_rng(seed: int, *path: int) -> np.random.Generator:
    """Named substream: PCG64 seeded by SeedSequence(seed, spawn_key=path)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=path)))


# -- random qLRC ensemble --------------------------------------------------------

def _block_patterns(ctx: FieldCtx, r: int) -> tuple[np.ndarray, np.ndarray]:
    """The weight-r X and Z check patterns on one block, both all-nonzero."""
    x_pat = np.ones(r, dtype=np.int64)
    lead = ctx.neg((r - 1) % ctx.p if ctx.m == 1 else ctx.add(0, (r - 1) % ctx.p))
    if lead != 0:
        z_pat = np.ones(r, dtype=np.int64)
        z_pat[0] = lead
        return x_pat, z_pat
    # characteristic divides r-1: use (1-c, 1, ..., 1, c), c the element "2"
    if ctx.q < 3:
        raise ValidationError(
            f"no all-nonzero weight-{r} Z check exists over GF(2) for odd r")
    c = 2
    z_pat = np.ones(r, dtype=np.int64)
    z_pat[0] = ctx.sub(1, c)
    z_pat[-1] = c
    assert z_pat[0] != 0
    total = 0
    for v in z_pat.tolist():
        total = ctx.add(total, int(v))
    assert total == 0  # orthogonal to the all-ones X pattern
    return x_pat, z_pat


@dataclass(frozen=True, eq=False)
class RandomQlrc:
    css: CssCode
    n: int
    r: int
    ell: int
    seed: int
    hx: np.ndarray
    hz: np.ndarray

    @property
    def ctx(self) -> FieldCtx:
        return self.css.ctx

    @property
    def k(self) -> int:
        return self.css.k

    def descriptor(self) -> dict:
        d = self.ctx.descriptor()
        d.update(family="random_qlrc", n=self.n, r=self.r, ell=self.ell,
                 seed=self.seed, k=self.k)
        return d


def random_qlrc(n: int, r: int, ell: int, q: int, seed: int) -> RandomQlrc:
    """Sample the ensemble member for this seed.

    Preconditions: r | n, r >= 3, 1 <= ell <= n/2 - n/r (so k >= 0).
    The two initial pattern blocks are laid down, then 2*ell rows are
    drawn (X side first), each uniform over the complement of the other
    side's row span, rejecting rows already spanned.
    """
    if r < 3:
        raise ValidationError(f"locality r={r} must be >= 3")
    if n % r != 0:
        raise ValidationError(f"r={r} must divide n={n}")
    if not 1 <= ell <= n // 2 - n // r:
        raise ValidationError(f"ell={ell} outside [1, n/2 - n/r = {n // 2 - n // r}]")
    from .gf import field_from_order

    ctx = field_from_order(q)
    x_pat, z_pat = _block_patterns(ctx, r)
    blocks = n // r
    hx = np.zeros((blocks, n), dtype=np.int64)
    hz = np.zeros((blocks, n), dtype=np.int64)
    for b in range(blocks):
        hx[b, b * r:(b + 1) * r] = x_pat
        hz[b, b * r:(b + 1) * r] = z_pat

    rng = stream_rng(seed)

    def extend(target: np.ndarray, other: np.ndarray) -> np.ndarray:
        complement = nullspace(ctx, other)  # rows spanning rowspan(other)-perp
        span = RowSpace(ctx, target)
        for _ in range(_REJECTION_TRIES):
            coeffs = rng.integers(0, ctx.q, size=complement.shape[0])
            cand = np.zeros(n, dtype=np.int64)
            for c, row in zip(coeffs.tolist(), complement):
                if c:
                    cand = ctx.add(cand, ctx.mul(int(c), row))
            if not span.contains(cand):
                return np.vstack([target, cand])
        raise SamplingExhausted(
            "complement sampling kept landing inside the existing span")

    for _ in range(ell):
        hx = extend(hx, hz)
    for _ in range(ell):
        hz = extend(hz, hx)

    cx = LinearCode(ctx, nullspace(ctx, hx))
    cz = LinearCode(ctx, nullspace(ctx, hz))
    recovery = []
    for i in range(n):
        b = i // r
        recovery.append(RecoverySet(i, tuple(range(b * r, (b + 1) * r)),
                                    check_x=hx[b], check_z=hz[b]))
    code = css_new(cx, cz, recovery=recovery)
    out = RandomQlrc(css=code, n=n, r=r, ell=ell, seed=seed, hx=hx, hz=hz)
    assert out.k == n - 2 * (blocks + ell)
    return out


def certified_distance_at_least(code: CssCode, t: int) -> bool:
    """Exhaustively rule out words of weight < t in both distance sets."""
    if t <= 1:
        return True
    w, _ = min_weight_below(code.hz, code.ctx, t - 1, exclude=code.dual_x_space)
    if w is not None:
        return False
    w, _ = min_weight_below(code.hx, code.ctx, t - 1, exclude=code.dual_z_space)
    return w is None


def sample_qlrc_with_distance(n: int, r: int, ell: int, q: int, seed: int,
                              d_min: int, max_attempts: int = 200) -> RandomQlrc:
    """Resample until the brute certificate d >= d_min holds."""
    for attempt in range(max_attempts):
        cand = random_qlrc(n, r, ell, q, seed + attempt)
        if certified_distance_at_least(cand.css, d_min):
            return cand
    raise SamplingFailedAfterRetries(
        f"no sample with certified distance >= {d_min} in {max_attempts} attempts")


@dataclass(frozen=True)
class GvEstimate:
    samples: int
    successes: int
    frequency: float
    wilson_low: float
    wilson_high: float
    bound: float
    epsilon: float
    distances: tuple[int, ...]


def gv_estimate(n: int, r: int, ell: int, q: int, delta: float, trials: int,
                seed: int, cap: int = 1 << 26) -> GvEstimate:
    """Empirical Pr[d >= delta n] against the ensemble's union bound.

    Distances are exact (brute enumeration per sample, capped). The
    reported bound 1 - 2 q^(-eps n) uses eps = ell/n - H_q(delta) and can
    be far below zero at desk scale, which makes the comparison vacuous
    but still faithful.
    """
    from .bounds import entropy_q
    from .css import css_distance_brute

    dim = n - (n // r + ell)
    if q**dim > cap:
        raise CapExceeded(f"per-sample enumeration needs {q**dim} > cap {cap}",
                          required=q**dim)
    threshold = delta * n
    successes = 0
    dists = []
    for t in range(trials):
        code = random_qlrc(n, r, ell, q, seed + t)
        d, _, _ = css_distance_brute(code.css, cap=cap)
        dists.append(int(d))
        if d >= threshold:
            successes += 1
    freq = successes / trials
    z = 1.959963984540054  # 97.5% normal quantile
    denom = 1 + z * z / trials
    center = (freq + z * z / (2 * trials)) / denom
    half = z * math.sqrt(freq * (1 - freq) / trials + z * z / (4 * trials * trials)) / denom
    eps = ell / n - entropy_q(delta, q)
    bound = 1 - 2 * q ** (-eps * n)
    return GvEstimate(samples=trials, successes=successes, frequency=freq,
                      wilson_low=center - half, wilson_high=center + half,
                      bound=bound, epsilon=eps, distances=tuple(dists))


# -- expander graphs ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExpanderGraph:
    """Delta-regular bipartite graph as a union of Delta perfect matchings.

    matchings[t][v] is the right endpoint of left vertex v in matching t;
    the edge ordering at every vertex (on both sides) is the matching
    index, which is what makes the routing permutation reproducible from
    this array alone.
    """

    n: int
    delta: int
    matchings: np.ndarray  # (delta, n)
    seed: int | None = None

    @cached_property
    def biadjacency(self) -> np.ndarray:
        b = np.zeros((self.n, self.n), dtype=np.int64)
        for t in range(self.delta):
            b[np.arange(self.n), self.matchings[t]] += 1
        return b

    def route(self, left: int, slot: int) -> tuple[int, int]:
        """pi_G: (left vertex, edge index) -> (right vertex, edge index)."""
        return int(self.matchings[slot][left]), slot

    def descriptor(self) -> dict:
        return {"n": self.n, "delta": self.delta, "seed": self.seed,
                "matchings": self.matchings.tolist()}

    @staticmethod
    def identity(n: int, delta: int) -> "ExpanderGraph":
        """Degenerate multigraph routing every slot back to its own block."""
        return ExpanderGraph(n=n, delta=delta,
                             matchings=np.tile(np.arange(n), (delta, 1)))


def _random_perfect_matching(avail: np.ndarray, rng: np.random.Generator) -> np.ndarray | None:
    """Random perfect matching of the bipartite availability matrix.

    Randomized greedy pass, then augmenting paths; always succeeds when a
    perfect matching exists (it does for the regular remainders here).
    """
    n = avail.shape[0]
    match_l = np.full(n, -1, dtype=np.int64)
    match_r = np.full(n, -1, dtype=np.int64)
    order = rng.permutation(n)
    for v in order:
        choices = np.nonzero(avail[v] & (match_r == -1))[0]
        if choices.size:
            u = int(choices[rng.integers(choices.size)])
            match_l[v], match_r[u] = u, v
    for v in order:
        if match_l[v] != -1:
            continue
        # DFS augmenting path from v
        seen = np.zeros(n, dtype=bool)
        stack = [(v, iter(np.nonzero(avail[v])[0].tolist()))]
        parent: dict[int, int] = {}
        found = -1
        while stack:
            cur, it = stack[-1]
            advanced = False
            for u in it:
                if seen[u]:
                    continue
                seen[u] = True
                parent[u] = cur
                if match_r[u] == -1:
                    found = u
                    stack.clear()
                    advanced = True
                    break
                stack.append((int(match_r[u]), iter(np.nonzero(avail[int(match_r[u])])[0].tolist())))
                advanced = True
                break
            if not advanced:
                stack.pop()
        if found == -1:
            return None
        u = found
        while True:
            cur = parent[u]
            nxt = int(match_l[cur])
            match_l[cur], match_r[u] = u, cur
            if nxt == -1 and cur == v:
                break
            u = nxt
            if cur == v:
                break
    if np.any(match_l == -1):
        return None
    return match_l


def expander_sample(n: int, delta: int, seed: int, retries: int = 32) -> ExpanderGraph:
    """Union of delta random perfect matchings with no repeated edges."""
    if not 1 <= delta <= n:
        raise ValidationError(f"need 1 <= delta <= n for a simple graph, got delta={delta}, n={n}")
    rng = stream_rng(seed)
    for _ in range(retries):
        avail = np.ones((n, n), dtype=bool)
        rows = []
        ok = True
        for _t in range(delta):
            m = _random_perfect_matching(avail, rng)
            if m is None:
                ok = False
                break
            rows.append(m)
            avail[np.arange(n), m] = False
        if ok:
            return ExpanderGraph(n=n, delta=delta, matchings=np.asarray(rows), seed=seed)
    raise SamplingFailedAfterRetries(f"no simple {delta}-regular sample after {retries} retries")


def measure_lambda(graph: ExpanderGraph) -> float:
    """Second singular value of the biadjacency over its degree.

    Singular values below the standard numerical-rank tolerance
    (sigma_1 * n * eps, as in numpy's matrix_rank) are exact zeros of the
    integer matrix and are reported as such.
    """
    sv = np.linalg.svd(graph.biadjacency.astype(np.float64), compute_uv=False)
    if len(sv) < 2:
        return 0.0
    tol = sv[0] * graph.n * np.finfo(np.float64).eps
    s2 = sv[1] if sv[1] > tol else 0.0
    return float(s2 / graph.delta)


def ael_radius(alpha_in: float, alpha_out: float, lam: float) -> float:
    """alpha_in - lambda * sqrt(alpha_in / alpha_out)."""
    return alpha_in - lam * math.sqrt(alpha_in / alpha_out)


# -- logical sections ------------------------------------------------------------------

@dataclass(frozen=True)
class LogicalPair:
    """Dual logical sections of a CSS code: dot(lx[i], lz[j]) = delta_ij."""

    lz: np.ndarray  # k x n rows in C_Z, independent mod C_X-dual
    lx: np.ndarray  # k x n rows in C_X, adjusted to be dual to lz

    def read_z(self, ctx: FieldCtx, word: np.ndarray) -> np.ndarray:
        """Class of a C_Z word modulo C_X-dual."""
        return np.asarray([ctx.dot(row, word) for row in self.lx], dtype=np.int64)

    def read_x(self, ctx: FieldCtx, word: np.ndarray) -> np.ndarray:
        return np.asarray([ctx.dot(row, word) for row in self.lz], dtype=np.int64)


def logical_pair(code: CssCode) -> LogicalPair:
    ctx = code.ctx

    def reps(big: LinearCode, small_basis: np.ndarray) -> np.ndarray:
        stacked = [row for row in small_basis]
        out = []
        for row in big.basis:
            trial = np.vstack(stacked + [row])
            if rank(ctx, trial) == len(stacked) + 1:
                stacked.append(row)
                out.append(row)
        return np.asarray(out, dtype=np.int64)

    lz = reps(code.cz, code.hx)
    lx = reps(code.cx, code.hz)
    k = code.k
    assert lz.shape[0] == k and lx.shape[0] == k
    gram = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            gram[i, j] = ctx.dot(lx[i], lz[j])
    inv = _matrix_inverse(ctx, gram)
    adjusted = np.zeros_like(lx)
    for i in range(k):
        acc = np.zeros(lx.shape[1], dtype=np.int64)
        for j in range(k):
            if inv[i, j]:
                acc = ctx.add(acc, ctx.mul(int(inv[i, j]), lx[j]))
        adjusted[i] = acc
    return LogicalPair(lz=lz, lx=adjusted)


def _matrix_inverse(ctx: FieldCtx, m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.concatenate([m, np.eye(k, dtype=np.int64)], axis=1)
    r, pivots = rref(ctx, aug)
    if pivots != list(range(k)):
        raise ValidationError("logical pairing matrix is singular")
    return r[:, k:]


# -- flattening between GF(p^k) and GF(p)^k ----------------------------------------------

@dataclass(frozen=True)
class Flattening:
    """GF(p^k) as a GF(p)-vector space: digits basis and its trace dual."""

    ctx: FieldCtx  # the extension field
    k: int
    basis: tuple[int, ...]  # p^0, p^1, ..., the polynomial basis
    dual: tuple[int, ...]  # trace-dual basis

    def down(self, x: int) -> np.ndarray:
        """Coordinates in the polynomial basis (the base-p digits)."""
        p = self.ctx.p
        return np.asarray([(x // p**i) % p for i in range(self.k)], dtype=np.int64)

    def down_dual(self, x: int) -> np.ndarray:
        """Coordinates in the trace-dual basis: a_i = Tr(x * b_i)."""
        return np.asarray([self.ctx.trace(self.ctx.mul(x, b)) for b in self.basis],
                          dtype=np.int64)

    def up(self, digits: np.ndarray) -> int:
        p = self.ctx.p
        return int(sum(int(d) % p * p**i for i, d in enumerate(digits)))

    def up_dual(self, coords: np.ndarray) -> int:
        out = 0
        for c, b in zip(np.asarray(coords).tolist(), self.dual):
            out = self.ctx.add(out, self.ctx.mul(int(c) % self.ctx.p, b))
        return out


def flattening(ext: FieldCtx) -> Flattening:
    """Build the basis pair for an extension field over its prime subfield."""
    if ext.m == 1:
        return Flattening(ctx=ext, k=1, basis=(1,), dual=(1,))
    k = ext.m
    p = ext.p
    prime = field_new(p)
    basis = tuple(p**i for i in range(k))
    gram = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            gram[i, j] = ext.trace(ext.mul(basis[i], basis[j]))  # lies in GF(p)
    inv = _matrix_inverse(prime, gram)
    dual = []
    for i in range(k):
        acc = 0
        for j in range(k):
            if inv[i, j]:
                acc = ext.add(acc, ext.mul(int(inv[i, j]), basis[j]))
        dual.append(acc)
    return Flattening(ctx=ext, k=k, basis=basis, dual=tuple(dual))


# -- the AEL construction ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AelCode:
    outer: CssCode  # over GF(q_in^k_in)
    inner: CssCode  # over GF(q_in), q_in prime
    graph: ExpanderGraph
    delta: int
    r_in: int
    css: CssCode  # the flattened, permuted concatenation over GF(q_in)
    flat: Flattening
    inner_logicals: LogicalPair
    outer_logicals: LogicalPair
    perm: np.ndarray  # qudit routing: final position of pre-permutation index

    @property
    def ctx(self) -> FieldCtx:
        return self.inner.ctx

    @property
    def n_qudits(self) -> int:
        return self.css.n

    @property
    def block_count(self) -> int:
        return self.n_qudits // self.delta

    @property
    def k_qudits(self) -> int:
        return self.css.k

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k_qudits, self.n_qudits)

    @property
    def locality(self) -> int:
        return self.delta * self.r_in

    @property
    def n_out(self) -> int:
        return self.outer.n

    @property
    def n_in(self) -> int:
        return self.inner.n


def ael_build(outer: CssCode, inner: CssCode, graph: ExpanderGraph, delta: int,
              r_in: int) -> AelCode:
    """Concatenate, fold by delta, and permute along the graph.

    Preconditions: the outer alphabet is GF(q_in^k_in) for the prime inner
    alphabet GF(q_in); delta divides n_in; the inner recovery sets are the
    aligned length-r_in blocks (so each one folds into a single component,
    r_in | delta); the graph has n_out * n_in / delta vertices per side.
    """
    ctx_in = inner.ctx
    ctx_out = outer.ctx
    if ctx_in.m != 1:
        raise AlphabetMismatch("inner alphabet must be a prime field for flattening")
    k_in = inner.k
    if ctx_out.p != ctx_in.p or ctx_out.m != k_in:
        raise AlphabetMismatch(
            f"outer alphabet must be GF({ctx_in.q}^{k_in}), got GF({ctx_out.p}^{ctx_out.m})")
    n_in, n_out = inner.n, outer.n
    if n_in % delta != 0:
        raise FoldingMismatch(f"delta={delta} must divide n_in={n_in}")
    if delta % r_in != 0:
        raise FoldingMismatch(f"r_in={r_in} must divide delta={delta}")
    if inner.recovery is None:
        raise FoldingMismatch("inner code must carry block recovery metadata")
    for rs in inner.recovery:
        lo = (rs.position // r_in) * r_in
        if rs.members != tuple(range(lo, lo + r_in)):
            raise FoldingMismatch("inner recovery sets must be the aligned length-r blocks")
    n_blocks = n_out * n_in // delta
    if graph.n != n_blocks or graph.delta != delta:
        raise FoldingMismatch(
            f"graph must be {delta}-regular on {n_blocks} vertices, got {graph.delta} on {graph.n}")

    flat = flattening(ctx_out)
    inner_log = logical_pair(inner)
    outer_log = logical_pair(outer)
    n_total = n_out * n_in

    def embed(rows_per_position: np.ndarray, position: int) -> np.ndarray:
        out = np.zeros((rows_per_position.shape[0], n_total), dtype=np.int64)
        out[:, position * n_in:(position + 1) * n_in] = rows_per_position
        return out

    def lift(z_side: bool, outer_basis: np.ndarray) -> list[np.ndarray]:
        """Flatten outer rows (scaled by every basis element) through the
        inner logical section."""
        rows = []
        scalars = flat.basis  # both sides scale by the polynomial basis:
        # the dual pairing is realized by *reading coordinates* in dual bases
        for brow in outer_basis:
            for scalar in scalars:
                scaled = np.asarray([ctx_out.mul(scalar, int(v)) for v in brow],
                                    dtype=np.int64)
                row = np.zeros(n_total, dtype=np.int64)
                for t in range(n_out):
                    coords = flat.down(int(scaled[t])) if z_side else flat.down_dual(int(scaled[t]))
                    section = inner_log.lz if z_side else inner_log.lx
                    for i in range(k_in):
                        if coords[i]:
                            row[t * n_in:(t + 1) * n_in] = ctx_in.add(
                                row[t * n_in:(t + 1) * n_in],
                                ctx_in.mul(int(coords[i]), section[i]))
                rows.append(row)
        return rows

    cz_rows = lift(True, outer.cz.basis)
    cx_rows = lift(False, outer.cx.basis)
    for t in range(n_out):
        cz_rows.extend(embed(inner.hx, t))
        cx_rows.extend(embed(inner.hz, t))

    # routing: pre-permutation qudit (block i, slot j) lands at block
    # matchings[j][i], same slot
    perm = np.zeros(n_total, dtype=np.int64)
    for i in range(n_blocks):
        for j in range(delta):
            dest_block, dest_slot = graph.route(i, j)
            perm[i * delta + j] = dest_block * delta + dest_slot

    def permute(rows: list[np.ndarray]) -> np.ndarray:
        arr = np.asarray(rows, dtype=np.int64)
        out = np.zeros_like(arr)
        out[:, perm] = arr
        return out

    cz = LinearCode(ctx_in, permute(cz_rows))
    cx = LinearCode(ctx_in, permute(cx_rows))
    css = css_new(cx, cz)
    code = AelCode(outer=outer, inner=inner, graph=graph, delta=delta, r_in=r_in,
                   css=css, flat=flat, inner_logicals=inner_log,
                   outer_logicals=outer_log, perm=perm)
    assert code.k_qudits == outer.k * k_in
    return code


def ael_locality_structure(code: AelCode) -> list[tuple[int, tuple[int, ...]]]:
    """Per-qudit recovery partners after routing; verifies the locality claim.

    Every qudit's r_in - 1 partners land in distinct blocks, none its own,
    so recovering one erased block touches at most delta * (r_in - 1)
    other qudits: locality delta * r_in including the block itself.
    """
    out = []
    n_in, delta, r_in = code.n_in, code.delta, code.r_in
    blocks_per_inner = n_in // delta
    for t in range(code.n_out):
        for u in range(n_in):
            pre_block = t * blocks_per_inner + u // delta
            slot = u % delta
            lo = (u // r_in) * r_in
            partners = []
            for u2 in range(lo, lo + r_in):
                pb = t * blocks_per_inner + u2 // delta
                sl = u2 % delta
                db, ds = code.graph.route(pb, sl)
                partners.append(db * delta + ds)
            mine = partners[u - lo]
            others = tuple(p for i, p in enumerate(partners) if i != u - lo)
            my_block = mine // delta
            other_blocks = {p // delta for p in others}
            if my_block in other_blocks or len(other_blocks) != r_in - 1:
                raise FoldingMismatch(
                    f"recovery partners of qudit ({t},{u}) collide across blocks")
            out.append((mine, others))
    return out


# -- AEL encoding and decoding -----------------------------------------------------------

def _outer_encode(code: AelCode, msg: np.ndarray, side: str) -> np.ndarray:
    log = code.outer_logicals
    section = log.lz if side == "z" else log.lx
    ctx = code.outer.ctx
    out = np.zeros(code.n_out, dtype=np.int64)
    for c, row in zip(np.asarray(msg).tolist(), section):
        if c:
            out = ctx.add(out, ctx.mul(int(c), row))
    return out


def ael_encode(code: AelCode, msg: np.ndarray, side: str = "z") -> np.ndarray:
    """Canonical classical codeword carrying the outer message (stabilizer
    components zero)."""
    ctx_in, ctx_out = code.ctx, code.outer.ctx
    z = _outer_encode(code, msg, side)
    section = code.inner_logicals.lz if side == "z" else code.inner_logicals.lx
    pre = np.zeros(code.n_out * code.n_in, dtype=np.int64)
    for t in range(code.n_out):
        coords = (code.flat.down(int(z[t])) if side == "z"
                  else code.flat.down_dual(int(z[t])))
        for i in range(code.inner.k):
            if coords[i]:
                pre[t * code.n_in:(t + 1) * code.n_in] = ctx_in.add(
                    pre[t * code.n_in:(t + 1) * code.n_in],
                    ctx_in.mul(int(coords[i]), section[i]))
    out = np.zeros_like(pre)
    out[code.perm] = pre
    return out


class _InnerDecoder:
    """Bounded-distance coset-leader decoder per inner block, via a table."""

    def __init__(self, ctx: FieldCtx, parity: np.ndarray, radius: int):
        self.ctx = ctx
        self.parity = parity
        self.radius = radius
        n = parity.shape[1]
        self.table: dict[tuple, np.ndarray] = {}
        zero = np.zeros(n, dtype=np.int64)
        self.table[tuple(_syndrome(ctx, parity, zero).tolist())] = zero
        from itertools import combinations, product

        for w in range(1, radius + 1):
            for supp in combinations(range(n), w):
                for vals in product(range(1, ctx.q), repeat=w):
                    e = np.zeros(n, dtype=np.int64)
                    e[list(supp)] = vals
                    key = tuple(_syndrome(ctx, parity, e).tolist())
                    self.table.setdefault(key, e)

    def decode(self, word: np.ndarray) -> np.ndarray | None:
        """The codeword, or None when the syndrome is outside the table."""
        syn = tuple(_syndrome(self.ctx, self.parity, word).tolist())
        e = self.table.get(syn)
        if e is None:
            return None
        return self.ctx.sub(word, e)


def _syndrome(ctx: FieldCtx, parity: np.ndarray, v: np.ndarray) -> np.ndarray:
    if ctx.m == 1:
        return (parity @ v) % ctx.p
    out = np.zeros(parity.shape[0], dtype=np.int64)
    for j in np.nonzero(v)[0].tolist():
        out = ctx.add(out, ctx.mul(int(v[j]), parity[:, j]))
    return out


def rs_decode_errors_erasures(ctx: FieldCtx, ell: int, values: np.ndarray,
                              erased: np.ndarray) -> np.ndarray:
    """Unique-decode an RS word with erasures: 2E + F <= n - ell.

    Berlekamp-Welch restricted to the unerased evaluation points; raises
    DecodingFailed when no codeword sits within the radius.
    """
    from .gf import nullspace as _ns

    values = np.asarray(values, dtype=np.int64)
    erased = np.asarray(erased, dtype=bool)
    keep = np.nonzero(~erased)[0]
    n_avail = len(keep)
    if n_avail < ell:
        raise DecodingFailed(f"only {n_avail} unerased symbols for dimension {ell}")
    t_err = (n_avail - ell) // 2
    xs = ctx.units()[keep]
    ys = values[keep]
    n_cols = t_err + ell
    e_cols = t_err + 1
    rows = np.zeros((n_avail, n_cols + e_cols), dtype=np.int64)
    xp = np.ones(n_avail, dtype=np.int64)
    for a in range(max(n_cols, e_cols)):
        if a < n_cols:
            rows[:, a] = xp
        if a < e_cols:
            rows[:, n_cols + a] = ctx.neg(ctx.mul(ys, xp))
        xp = ctx.mul(xp, xs)
    from .listdec import _poly_divide_exact

    for sol in _ns(ctx, rows):
        ncoef, ecoef = sol[:n_cols], sol[n_cols:]
        if not np.any(ecoef):
            continue
        f = _poly_divide_exact(ctx, ncoef, ecoef)
        if f is not None and len(f) <= ell:
            coeffs = np.zeros(ell, dtype=np.int64)
            coeffs[: len(f)] = f
            word = evaluate_values(ctx, coeffs)
            if int(np.count_nonzero(word[keep] != ys)) <= t_err:
                return coeffs
    raise DecodingFailed("no RS codeword within the errors-and-erasures radius")


@dataclass(frozen=True)
class AelDecodeResult:
    message: np.ndarray
    word: np.ndarray  # canonical re-encoding
    inner_failures: int
    outer_errors_corrected: bool


def ael_decode(code: AelCode, word: np.ndarray, side: str = "z",
               inner_radius: int | None = None) -> AelDecodeResult:
    """Unpermute, inner-decode every block (erase on failure), outer-decode.

    ``inner_radius`` defaults to half the inner code's certified distance
    as recorded on the code (see ael_standard_build); erasing on inner
    failure lets the outer errors-and-erasures decoder absorb them.
    """
    ctx_in, ctx_out = code.ctx, code.outer.ctx
    word = np.asarray(word, dtype=np.int64)
    pre = word[code.perm]
    if inner_radius is None:
        inner_radius = 1
    dec = _inner_decoder_cache(code, side, inner_radius)
    n_in = code.n_in
    outer_word = np.zeros(code.n_out, dtype=np.int64)
    erased = np.zeros(code.n_out, dtype=bool)
    failures = 0
    for t in range(code.n_out):
        sub = pre[t * n_in:(t + 1) * n_in]
        c = dec.decode(sub)
        if c is None:
            erased[t] = True
            failures += 1
            continue
        log = code.inner_logicals
        coords = (log.read_z(ctx_in, c) if side == "z" else log.read_x(ctx_in, c))
        outer_word[t] = (code.flat.up(coords) if side == "z"
                         else code.flat.up_dual(coords))

    # outer code components are evaluation codes; decode in the quotient by
    # exact RS decoding and read out the logical class
    outer_lin = code.outer.cz if side == "z" else code.outer.cx
    ell_out = outer_lin.dim
    coeffs = rs_decode_errors_erasures(ctx_out, ell_out, outer_word, erased)
    decoded = evaluate_values(ctx_out, coeffs)
    log = code.outer_logicals
    msg = (log.read_z(ctx_out, decoded) if side == "z"
           else log.read_x(ctx_out, decoded))
    return AelDecodeResult(message=msg, word=ael_encode(code, msg, side),
                           inner_failures=failures,
                           outer_errors_corrected=True)


_INNER_DECODERS: dict[tuple[int, str, int], _InnerDecoder] = {}


def _inner_decoder_cache(code: AelCode, side: str, radius: int) -> _InnerDecoder:
    key = (id(code), side, radius)
    if key not in _INNER_DECODERS:
        parity = code.inner.hz if side == "z" else code.inner.hx
        _INNER_DECODERS[key] = _InnerDecoder(code.ctx, parity, radius)
    return _INNER_DECODERS[key]


# -- the standard desk-scale instantiation ---------------------------------------------

@dataclass(frozen=True)
class AelStandard:
    """An AEL code together with its measured pseudorandomness and radii."""

    code: AelCode
    inner_sample: RandomQlrc
    lam: float
    inner_radius: int
    alpha_in: Fraction
    alpha_out: Fraction
    alpha: float
    radius_blocks: int

    def descriptor(self) -> dict:
        return {
            "family": "ael",
            "inner": self.inner_sample.descriptor(),
            "outer": {"q": self.code.outer.ctx.q, "ell": self.code.outer.cz.dim,
                      "n": self.code.n_out, "k": self.code.outer.k},
            "graph": self.code.graph.descriptor(),
            "delta": self.code.delta,
            "r_in": self.code.r_in,
            "n_blocks": self.code.block_count,
            "n_qudits": self.code.n_qudits,
            "k_qudits": self.code.k_qudits,
            "lambda": self.lam,
            "alpha": self.alpha,
            "radius_blocks": self.radius_blocks,
        }


def ael_standard_build(seed: int, q_in: int = 5, n_in: int = 24, r_in: int = 3,
                       ell_in: int = 3, ell_out: int = 13, delta: int = 24,
                       d_min_in: int = 3) -> AelStandard:
    """The desk-scale AEL instantiation: brute-validated random inner code,
    CSS(RS, RS) outer code, sampled graph with measured lambda.

    The default geometry (24 blocks of 24 qudits, complete bipartite
    routing with measured lambda = 0) is the smallest admissible one whose
    amplification radius alpha * n_blocks reaches a whole block; sparser
    sampled graphs at this scale provably leave it at zero.
    """
    inner = sample_qlrc_with_distance(n_in, r_in, ell_in, q_in, seed, d_min_in)
    ctx_out = field_new(q_in, inner.k)
    q_out = ctx_out.q
    if 2 * ell_out < q_out:
        raise ValidationError(f"outer needs 2*ell >= q_out, got ell={ell_out}, q={q_out}")
    a = rs_code(ctx_out, ell_out)
    outer = css_new(a, a)
    n_out = q_out - 1
    n_blocks = n_out * n_in // delta
    graph = expander_sample(n_blocks, delta, seed)
    lam = measure_lambda(graph)
    code = ael_build(outer, inner.css, graph, delta, r_in)

    inner_radius = (d_min_in - 1) // 2
    alpha_in = Fraction(inner_radius, n_in)
    d_out = q_out - ell_out
    alpha_out = Fraction((d_out - 1) // 2, n_out)
    alpha = ael_radius(float(alpha_in), float(alpha_out), lam)
    if lam == 0.0:
        radius_blocks = max(math.floor(alpha_in * n_blocks), 0)  # exact
    else:
        radius_blocks = max(math.floor(alpha * n_blocks), 0)
    return AelStandard(code=code, inner_sample=inner, lam=lam,
                       inner_radius=inner_radius, alpha_in=alpha_in,
                       alpha_out=alpha_out, alpha=alpha,
                       radius_blocks=radius_blocks)


def random_block_pauli(ctx: FieldCtx, n_blocks: int, delta: int, weight: int,
                       rng: np.random.Generator) -> PauliError:
    """A Pauli touching exactly `weight` folded blocks (all slots corrupted)."""
    blocks = rng.choice(n_blocks, size=weight, replace=False)
    n = n_blocks * delta
    bx = np.zeros(n, dtype=np.int64)
    bz = np.zeros(n, dtype=np.int64)
    for b in blocks.tolist():
        sl = slice(b * delta, (b + 1) * delta)
        while True:
            cx = rng.integers(0, ctx.q, size=delta)
            cz = rng.integers(0, ctx.q, size=delta)
            if np.any(cx) or np.any(cz):
                bx[sl], bz[sl] = cx, cz
                break
    return PauliError(bx, bz)


def ael_quantum_decode(std: AelStandard, err: PauliError) -> tuple[PauliError, PauliError]:
    """Syndrome-driven Pauli correction through the two AEL classical decoders."""
    from .css import css_decode, residual_after_correction, syndrome

    code = std.code
    css = code.css

    def dec(side: str):
        def run(t: np.ndarray) -> np.ndarray:
            return ael_decode(code, t, side, inner_radius=std.inner_radius).word

        return run

    sx, sz = syndrome(css, err)
    corr = css_decode(css, sx, sz, dec("x"), dec("z"))
    residual = residual_after_correction(css.ctx, err, corr)
    return corr, residual

"""Classical GF(q)-linear codes: duals, exact weights, erasure decoding.

The exact minimum-weight machinery is the workhorse oracle of the whole
package. ``min_weight_excluding(C, D)`` enumerates C grouped by its cosets
of D, so "min weight over C \\ D" never needs a membership test: a word is
outside D exactly when its coset label is nonzero. Enumeration is chunked
and vectorized; prime fields ride a single exact matmul per chunk.

``min_weight_below`` is the complementary oracle: an increasing-weight
exhaustive scan that is exact whenever the true distance is small, at cost
independent of the code dimension. The two are cross-checked in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import (
    AmbiguousErasure,
    CapExceeded,
    CheckNotInDual,
    FoldMismatch,
    InconsistentErasure,
    NotASubcode,
    ZeroPivot,
)
from .gf import FieldCtx, RowSpace, nullspace, rank, rref, solve_right
from .polycode import evaluate_values, support_tb

DEFAULT_CAP = 1 << 30


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A linear code given by a full-rank basis (k x n) over GF(q)."""

    ctx: FieldCtx
    basis: np.ndarray
    support: tuple[int, ...] | None = None

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64)
        if b.ndim != 2:
            raise ValueError("basis must be 2-D")
        b = b % self.ctx.p if self.ctx.m == 1 else b
        r, pivots = rref(self.ctx, b)
        if len(pivots) != b.shape[0]:
            raise ValueError(f"basis has rank {len(pivots)} < {b.shape[0]} rows")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def row_space(self) -> RowSpace:
        return RowSpace(self.ctx, self.basis)

    def contains(self, word: np.ndarray) -> bool:
        return self.row_space.contains(np.asarray(word, dtype=np.int64))

    @cached_property
    def dual_basis(self) -> np.ndarray:
        return nullspace(self.ctx, self.basis)

    @cached_property
    def dual_space(self) -> RowSpace:
        return RowSpace(self.ctx, self.dual_basis)

    def dual(self) -> "LinearCode":
        return LinearCode(self.ctx, self.dual_basis)

    def same_row_space(self, other: "LinearCode") -> bool:
        if self.ctx != other.ctx or self.n != other.n or self.dim != other.dim:
            return False
        return all(self.contains(row) for row in other.basis)

    def is_subcode_of(self, other: "LinearCode") -> bool:
        return all(other.contains(row) for row in self.basis)

    def random_codeword(self, rng: np.random.Generator) -> np.ndarray:
        msg = rng.integers(0, self.ctx.q, size=self.dim)
        return encode(self.ctx, self.basis, msg)


def encode(ctx: FieldCtx, basis: np.ndarray, message: np.ndarray) -> np.ndarray:
    out = np.zeros(basis.shape[1], dtype=np.int64)
    for c, row in zip(np.asarray(message, dtype=np.int64).tolist(), basis):
        if c:
            out = ctx.add(out, ctx.mul(int(c), row))
    return out


def eval_code(ctx: FieldCtx, support: tuple[int, ...]) -> LinearCode:
    """The polynomial evaluation code ev(F_q[X]^support)."""
    rows = np.zeros((len(support), ctx.q - 1), dtype=np.int64)
    for a, i in enumerate(sorted(support)):
        mono = np.zeros(i + 1, dtype=np.int64)
        mono[i] = 1
        rows[a] = evaluate_values(ctx, mono)
    return LinearCode(ctx, rows, support=tuple(sorted(support)))


def rs_code(ctx: FieldCtx, ell: int) -> LinearCode:
    """Reed-Solomon: evaluations of polynomials of degree < ell."""
    return eval_code(ctx, tuple(range(ell)))


def tb_code(ctx: FieldCtx, r: int, ell: int) -> LinearCode:
    return eval_code(ctx, support_tb(ctx.q, r, ell))


@dataclass(frozen=True)
class FoldedCode:
    """A linear code plus its folding parameter; weight counts blocks."""

    code: LinearCode
    s: int

    def __post_init__(self):
        if self.code.n % self.s != 0:
            raise FoldMismatch(f"s={self.s} does not divide block length {self.code.n}")

    @property
    def block_count(self) -> int:
        return self.code.n // self.s


def frs_code(ctx: FieldCtx, ell: int, s: int) -> FoldedCode:
    return FoldedCode(rs_code(ctx, ell), s)


def block_weight(word: np.ndarray, s: int) -> int:
    w = np.asarray(word)
    return int(np.count_nonzero(np.any(w.reshape(-1, s) != 0, axis=1)))


# -- exhaustive enumeration ----------------------------------------------------

def _message_chunks(q: int, k: int, chunk: int) -> Iterator[np.ndarray]:
    total = q**k
    powers = q ** np.arange(k, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % q


def iter_codeword_chunks(ctx: FieldCtx, basis: np.ndarray,
                         chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """All q^k codewords of the row space, in message order, chunked."""
    k, n = basis.shape
    if k == 0:
        yield np.zeros((1, n), dtype=np.int64)
        return
    if ctx.m == 1:
        p = ctx.p
        exact_float = k * (p - 1) ** 2 < (1 << 52)
        bf = basis.astype(np.float64) if exact_float else basis
        for msgs in _message_chunks(ctx.q, k, chunk):
            if exact_float:
                words = (msgs.astype(np.float64) @ bf) % p
                yield words.astype(np.int64)
            else:
                yield (msgs @ bf) % p
    else:
        for msgs in _message_chunks(ctx.q, k, chunk):
            words = np.zeros((msgs.shape[0], n), dtype=np.int64)
            for j in range(k):
                col = msgs[:, j]
                words = ctx.add(words, ctx.mul(col[:, None], basis[j][None, :]))
            yield words


def min_weight_excluding(code: LinearCode, subcode: LinearCode,
                         cap: int = DEFAULT_CAP, fold_s: int | None = None,
                         ) -> tuple[float, np.ndarray | None]:
    """Exact minimum Hamming weight over code \\ subcode, with a witness.

    Returns (inf, None) when the two codes coincide. With ``fold_s`` the
    weight counts nonzero length-``fold_s`` blocks instead of symbols.
    Work is q^dim(code) words; a larger cost raises CapExceeded.

    The basis is ordered [subcode rows | quotient representatives], so a
    codeword lies outside the subcode exactly when its enumeration index is
    >= q^dim(subcode); exclusion costs nothing per word.
    """
    ctx = code.ctx
    if not subcode.is_subcode_of(code):
        raise NotASubcode("second argument must be a subcode of the first")
    t = code.dim - subcode.dim
    if t == 0:
        return math.inf, None
    total = ctx.q**code.dim
    if total > cap:
        raise CapExceeded(f"enumeration needs {total} > cap {cap}", required=total)

    # quotient representatives: rows of `code` independent modulo `subcode`
    stacked = [row for row in subcode.basis]
    for row in code.basis:
        trial = np.vstack(stacked + [row]) if stacked else row[None, :]
        if rank(ctx, trial) == len(stacked) + 1:
            stacked.append(row)
        if len(stacked) == code.dim:
            break
    assert len(stacked) == code.dim
    basis = np.asarray(stacked, dtype=np.int64)
    skip = ctx.q**subcode.dim  # the first `skip` indices enumerate the subcode

    best = math.inf
    witness = None
    start = 0
    for indicators, raw, to_word in _weight_scan_chunks(ctx, basis):
        stop = start + indicators.shape[0]
        if stop > skip:
            lo = max(0, skip - start)
            sl = indicators[lo:]
            if fold_s is None:
                w = np.count_nonzero(sl != 0, axis=1)
            else:
                b = sl.reshape(sl.shape[0], -1, fold_s)
                w = np.count_nonzero(np.any(b != 0, axis=2), axis=1)
            i = int(np.argmin(w))
            if w[i] < best:
                best = int(w[i])
                witness = to_word(raw[lo + i])
                if best == 1:
                    return best, witness
        start = stop
    return best, witness


def _weight_scan_chunks(ctx: FieldCtx, basis: np.ndarray):
    """Chunked codeword stream tuned for weight scans.

    Yields (indicators, raw, to_word): ``indicators`` is nonzero exactly
    where the codeword symbol is nonzero, ``raw`` holds enough data to
    rebuild any row of the chunk, and ``to_word(raw_row)`` produces the
    reduced codeword. Prime fields skip the expensive elementwise modulo by
    classifying raw matmul accumulations through a small lookup table.
    """
    k = basis.shape[0]
    p = ctx.p
    if ctx.m == 1 and k * (p - 1) ** 2 < (1 << 24):
        bound = k * (p - 1) ** 2
        lut = (np.arange(bound + 1) % p != 0).astype(np.int8)
        bf = basis.astype(np.float32)
        powers = ctx.q ** np.arange(k, dtype=np.int64)
        total = ctx.q**k

        def to_word(row):
            return (np.asarray(row, dtype=np.int64) % p)

        chunk = 1 << 19
        for s0 in range(0, total, chunk):
            idx = np.arange(s0, min(s0 + chunk, total), dtype=np.int64)
            msgs = ((idx[:, None] // powers[None, :]) % ctx.q).astype(np.float32)
            raw = (msgs @ bf).astype(np.int32)
            yield lut[raw], raw, to_word
        return

    def identity(row):
        return np.asarray(row, dtype=np.int64).copy()

    for words in iter_codeword_chunks(ctx, basis):
        yield words, words, identity


def min_weight(code: LinearCode, cap: int = DEFAULT_CAP,
               fold_s: int | None = None) -> tuple[float, np.ndarray | None]:
    """Exact minimum nonzero weight (the code's distance)."""
    zero = LinearCode(code.ctx, np.zeros((0, code.n), dtype=np.int64))
    return min_weight_excluding(code, zero, cap=cap, fold_s=fold_s)


def _support_combinations(n: int, w: int) -> Iterator[tuple[int, ...]]:
    import itertools

    yield from itertools.combinations(range(n), w)


def min_weight_below(parity: np.ndarray, ctx: FieldCtx, max_weight: int,
                     exclude: RowSpace | None = None,
                     cap: int = DEFAULT_CAP) -> tuple[int | None, np.ndarray | None]:
    """Smallest-weight word of ker(parity) [outside `exclude`] by weight scan.

    Scans candidate supports of weight 1, 2, ... up to ``max_weight``. Exact:
    if it returns w, no lighter qualifying word exists; returns (None, None)
    when every word in range is ruled out. Cost grows as C(n, w)*(q-1)^w and
    is capped.
    """
    parity = np.asarray(parity, dtype=np.int64)
    n = parity.shape[1]
    q = ctx.q
    nonzero = np.arange(1, q, dtype=np.int64)
    for w in range(1, max_weight + 1):
        n_candidates = math.comb(n, w) * (q - 1) ** w
        if n_candidates > cap:
            raise CapExceeded(f"weight-{w} scan needs {n_candidates} > cap {cap}",
                              required=n_candidates)
        # all value patterns on a w-support
        patterns = np.stack(np.meshgrid(*([nonzero] * w), indexing="ij"), axis=-1)
        patterns = patterns.reshape(-1, w)
        for supp in _support_combinations(n, w):
            cols = parity[:, supp]
            # syndromes of every pattern on this support
            if ctx.m == 1:
                syn = (patterns.astype(np.int64) @ cols.T.astype(np.int64)) % ctx.p
            else:
                syn = np.zeros((patterns.shape[0], parity.shape[0]), dtype=np.int64)
                for j in range(w):
                    syn = ctx.add(syn, ctx.mul(patterns[:, j][:, None], cols[:, j][None, :]))
            hits = np.nonzero(~np.any(syn, axis=1))[0]
            for h in hits.tolist():
                word = np.zeros(n, dtype=np.int64)
                word[list(supp)] = patterns[h]
                if exclude is not None and exclude.contains(word):
                    continue
                return w, word
    return None, None


# -- erasure decoding ------------------------------------------------------------

def erasure_decode(code: LinearCode, values: np.ndarray, erased: np.ndarray) -> np.ndarray:
    """Fill erased positions of a codeword; exact via Gaussian elimination.

    ``erased`` is a boolean mask. Raises AmbiguousErasure when more than one
    codeword matches, InconsistentErasure when none does.
    """
    ctx = code.ctx
    values = np.asarray(values, dtype=np.int64)
    erased = np.asarray(erased, dtype=bool)
    keep = ~erased
    g_keep = code.basis[:, keep]
    if rank(ctx, g_keep) < code.dim:
        raise AmbiguousErasure(f"{int(erased.sum())} erasures leave a free message subspace")
    msg = solve_right(ctx, g_keep.T, values[keep])
    if msg is None:
        raise InconsistentErasure("unerased positions match no codeword")
    return encode(ctx, code.basis, msg)


def local_recover_symbol(code: LinearCode, values: np.ndarray, i: int,
                         check: np.ndarray) -> int:
    """Recover symbol i of a codeword from a dual check covering i.

    Only the other positions in the check's support are read; the result is
    the unique value making the check vanish.
    """
    ctx = code.ctx
    check = np.asarray(check, dtype=np.int64)
    if not code.dual_space.contains(check):
        raise CheckNotInDual("supplied check is not a parity check of the code")
    if check[i] == 0:
        raise ZeroPivot(f"check does not cover position {i}")
    acc = 0
    for j in np.nonzero(check)[0].tolist():
        if j == i:
            continue
        acc = ctx.add(acc, ctx.mul(int(check[j]), int(values[j])))
    return ctx.neg(ctx.div(acc, int(check[i])))

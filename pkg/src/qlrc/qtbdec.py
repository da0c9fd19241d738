"""Global decoders for (folded) quantum Tamo-Barg codes.

The classical engine: for each shift i = 1..r-1, form the differenced word
a_i(x) = w^-i a(w_r^i x) - a(x). On a codeword the piecewise-linear part
cancels identically, leaving a Reed-Solomon codeword whose coefficients
sit on the Tamo-Barg exponents scaled by (w_r^((j-1)i) - 1). List-decode
each a_i, keep candidates whose coefficients vanish on exponents +-1 mod
r, invert the scaling (well-defined: r prime makes every needed factor
nonzero), and return the candidate closest to the input in distance to
the piecewise-linear space. The folded variant differs only in calling
the folded list decoder and the folded distance subroutine.

Effective radii are derived from the radius this build's list decoders
actually achieve, never from the paper's asymptotic constants; the
reported radius is additionally capped by the theorem radius, below which
the returned word is proven to be in the right dual coset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bounds import decode_radius_fqtb, decode_radius_qtb, fqtb_distance_lower, frs_e_prime_for_radius
from .css import PauliError, css_decode, is_logical_identity, residual_after_correction, syndrome
from .errors import DecodeContractViolation, DecodingFailed
from .gf import FieldCtx, root_of_unity
from .listdec import (
    best_feasible_radius_rs,
    frs_achieved_radius,
    list_decode_frs,
    list_decode_rs,
)
from .polycode import coset_index_groups, coset_stride, evaluate_values
from .qtb import FqtbCode, QtbCode

DEC_MULTIPLICITY_CAP = 2  # interpolation multiplicity budget inside the decoder


# -- distance to the piecewise-linear space ----------------------------------------

def dist_to_piecewise(ctx: FieldCtx, values: np.ndarray, r: int) -> tuple[int, np.ndarray]:
    """Exact distance to the span of per-coset linear functions, with witness.

    Per coset the best approximation is beta*x for the modal slope beta of
    value/position; ties break toward the smaller beta for determinism.
    """
    values = np.asarray(values, dtype=np.int64)
    units = ctx.units()
    slopes = ctx.div(values, units)
    witness = np.zeros_like(values)
    dist = 0
    for group in coset_index_groups(ctx.q, r):
        counts: dict[int, int] = {}
        for j in group.tolist():
            counts[int(slopes[j])] = counts.get(int(slopes[j]), 0) + 1
        beta = min(counts, key=lambda b: (-counts[b], b))
        witness[group] = ctx.mul(beta, units[group])
        dist += r - counts[beta]
    return dist, witness


def dist_to_piecewise_folded(ctx: FieldCtx, blocks: np.ndarray, r: int,
                             ) -> tuple[int, np.ndarray]:
    """Exact folded distance to the piecewise-linear space, with witness.

    A candidate slope vector is read off from each of the r blocks of a
    coset group in turn (a best approximation agreeing with at least one
    block is determined by that block); the group contributes r minus the
    best full-block agreement count.
    """
    blocks = np.asarray(blocks, dtype=np.int64)
    n_blocks, s = blocks.shape
    q = ctx.q
    units = ctx.units().reshape(n_blocks, s)
    slopes = ctx.div(blocks, units)
    witness = np.zeros_like(blocks)
    block_stride = coset_stride(q, r) // s
    dist = 0
    for g in range(block_stride):
        group = [g + t * block_stride for t in range(r)]
        best_count, best_beta = -1, None
        for b in group:
            beta = slopes[b]
            count = sum(1 for b2 in group if np.array_equal(slopes[b2], beta)
                        and np.array_equal(blocks[b2], ctx.mul(beta, units[b2])))
            # the equality with the reconstruction matters when blocks[b2]
            # has zeros: slope rows alone would miss value-vs-position zeros
            if count > best_count or (count == best_count and
                                      tuple(beta.tolist()) < tuple(best_beta.tolist())):
                best_count, best_beta = count, beta
        for b in group:
            witness[b] = ctx.mul(best_beta, units[b])
        dist += r - sum(1 for b in group if np.array_equal(blocks[b], witness[b]))
    return dist, witness


# -- shared candidate machinery ------------------------------------------------------

def _shift_difference(ctx: FieldCtx, values: np.ndarray, r: int, i: int) -> np.ndarray:
    """w_r^-i * a(w_r^i x) - a(x), as an array in position order."""
    stride = coset_stride(ctx.q, r)
    wr_inv = ctx.pow(root_of_unity(ctx, r), -i)
    rolled = np.roll(values, -i * stride)
    return ctx.sub(ctx.mul(wr_inv, rolled), values)


def _map_back(ctx: FieldCtx, coeffs: np.ndarray, r: int, i: int) -> np.ndarray | None:
    """Undo the differencing on coefficients, or None if the candidate is invalid.

    Valid candidates vanish on exponents +-1 mod r; the remaining exponents
    divide by w_r^((j-1)i) - 1, which is nonzero whenever r is prime.
    """
    wr = root_of_unity(ctx, r)
    out = np.zeros_like(coeffs)
    for j in np.nonzero(coeffs)[0].tolist():
        if j % r in (1, r - 1):
            return None
        factor = ctx.sub(ctx.pow(wr, ((j - 1) * i) % r), 1)
        assert factor != 0  # r prime and j != 1 mod r
        out[j] = ctx.div(int(coeffs[j]), factor)
    return out


@dataclass(frozen=True)
class DecOutcome:
    """Result of a classical Tamo-Barg decode."""

    word: np.ndarray  # the returned codeword (folded shape for fqTB)
    coeffs: np.ndarray  # its message polynomial on the TB exponents
    dual_distance: int  # distance of (word - input) to the piecewise space
    candidates: int
    list_sizes: tuple[int, ...]
    rs_radius: int


@lru_cache(maxsize=None)
def dec_c_radius(q: int, r: int, ell: int, m_cap: int = DEC_MULTIPLICITY_CAP) -> int:
    """Radius this build's unfolded decoder guarantees.

    The theorem radius assumes list decoding at the Johnson bound; with the
    decoder's actual RS radius A, errors are still handled whenever either
    2e <= A (every differenced word is within A) or the averaged agreement
    bound lands within A. Both are capped by the theorem radius, which is
    what makes the returned dual-coset guarantee kick in.
    """
    thm = decode_radius_qtb(q, r, ell)
    if thm <= 0:
        return 0
    rs_rad = best_feasible_radius_rs(q, ell, m_cap)
    e_forall = rs_rad // 2
    e_avg = 0
    n = q - 1
    for e in range(thm, -1, -1):
        t = 1 - Fraction(e, n)
        induced = n * (1 - Fraction(r, r - 1) * t * t + Fraction(1, r - 1) * t)
        if induced <= rs_rad:
            e_avg = e
            break
    return min(thm, max(e_forall, e_avg))


def dec_c(code: QtbCode, values: np.ndarray, e: int | None = None,
          m_cap: int = DEC_MULTIPLICITY_CAP) -> DecOutcome:
    """Algorithm of the unfolded decoder: r-1 RS list decodes plus argmin.

    When ``e`` is given, callers promise dis(input, C) <= e and the output
    is checked against the contract dis(output - input, dual) <= e,
    raising DecodingFailed rather than ever returning silently wrong data.
    """
    ctx = code.ctx
    q, r, ell = code.q, code.r, code.ell
    values = np.asarray(values, dtype=np.int64)
    rs_rad = best_feasible_radius_rs(q, ell, m_cap)
    candidates: dict[tuple, np.ndarray] = {}
    list_sizes = []
    for i in range(1, r):
        diff = _shift_difference(ctx, values, r, i)
        polys = list_decode_rs(ctx, ell, diff, rs_rad, m_cap=m_cap)
        list_sizes.append(len(polys))
        for g in polys:
            mapped = _map_back(ctx, g, r, i)
            if mapped is not None:
                candidates.setdefault(tuple(mapped.tolist()), mapped)
    if not candidates:
        raise DecodingFailed("empty candidate list: input violated the decode radius")
    best = None
    for key in sorted(candidates):
        coeffs = candidates[key]
        word = evaluate_values(ctx, coeffs)
        d, _ = dist_to_piecewise(ctx, ctx.sub(word, values), r)
        if best is None or (d, key) < (best[0], best[1]):
            best = (d, key, word, coeffs)
    d, _, word, coeffs = best
    if e is not None and d > e:
        raise DecodingFailed(f"best candidate at piecewise distance {d} > promised e={e}")
    return DecOutcome(word=word, coeffs=coeffs, dual_distance=d,
                      candidates=len(candidates), list_sizes=tuple(list_sizes),
                      rs_radius=rs_rad)


@lru_cache(maxsize=None)
def dec_c_folded_radius(q: int, r: int, ell: int, s: int) -> int:
    """Radius the folded decoder guarantees, from the achieved fRS radius."""
    import math

    d = fqtb_distance_lower(q, r, ell, s)
    half = math.floor(d / 2) - 1  # exact: d is a Fraction
    achieved = frs_achieved_radius(q, ell, s).e
    e_prime = frs_e_prime_for_radius(q, r, ell, s, achieved)
    e_forall = achieved // 2
    return max(min(half, max(e_prime, e_forall)), 0)


def dec_c_folded(code: FqtbCode, blocks: np.ndarray, e: int | None = None) -> DecOutcome:
    """Folded decoder: identical pipeline over the folded list decoder."""
    ctx = code.ctx
    q, r, ell, s = code.q, code.r, code.ell, code.s
    blocks = np.asarray(blocks, dtype=np.int64)
    params = frs_achieved_radius(q, ell, s)
    block_stride = coset_stride(q, r) // s
    wr = root_of_unity(ctx, r)
    candidates: dict[tuple, np.ndarray] = {}
    list_sizes = []
    for i in range(1, r):
        wr_inv = ctx.pow(wr, -i)
        rolled = np.roll(blocks, -i * block_stride, axis=0)
        diff = ctx.sub(ctx.mul(wr_inv, rolled), blocks)
        polys = list_decode_frs(ctx, ell, s, diff, params.e)
        list_sizes.append(len(polys))
        for g in polys:
            mapped = _map_back(ctx, g, r, i)
            if mapped is not None:
                candidates.setdefault(tuple(mapped.tolist()), mapped)
    if not candidates:
        raise DecodingFailed("empty candidate list: input violated the decode radius")
    best = None
    for key in sorted(candidates):
        coeffs = candidates[key]
        word = evaluate_values(ctx, coeffs).reshape(-1, s)
        d, _ = dist_to_piecewise_folded(ctx, ctx.sub(word, blocks), r)
        if best is None or (d, key) < (best[0], best[1]):
            best = (d, key, word, coeffs)
    d, _, word, coeffs = best
    if e is not None and d > e:
        raise DecodingFailed(f"best candidate at folded piecewise distance {d} > promised e={e}")
    return DecOutcome(word=word, coeffs=coeffs, dual_distance=d,
                      candidates=len(candidates), list_sizes=tuple(list_sizes),
                      rs_radius=params.e)


# -- quantum wrapper ----------------------------------------------------------------

def quantum_decode_radius(code: QtbCode | FqtbCode) -> int:
    if isinstance(code, FqtbCode):
        return dec_c_folded_radius(code.q, code.r, code.ell, code.s)
    return dec_c_radius(code.q, code.r, code.ell)


def quantum_decode(code: QtbCode | FqtbCode, err: PauliError,
                   check_weight: bool = True) -> tuple[PauliError, PauliError]:
    """Full symplectic decode: syndromes -> two classical decodes -> residual.

    Returns (correction, residual). Within the module radius the residual
    is always a logical identity; a violation raises
    DecodeContractViolation, which the CLI maps to its own exit code.
    """
    folded = isinstance(code, FqtbCode)
    css = code.base.css if folded else code.css
    radius = quantum_decode_radius(code)
    weight = err.block_weight(code.s) if folded else err.weight
    within = weight <= radius

    if folded:
        def dec(t: np.ndarray) -> np.ndarray:
            out = dec_c_folded(code, t.reshape(-1, code.s),
                               e=radius if within else None)
            return out.word.reshape(-1)
    else:
        def dec(t: np.ndarray) -> np.ndarray:
            return dec_c(code, t, e=radius if within else None).word

    sx, sz = syndrome(css, err)
    corr = css_decode(css, sx, sz, dec, dec)
    residual = residual_after_correction(css.ctx, err, corr)
    if check_weight and within and not is_logical_identity(css, residual):
        raise DecodeContractViolation(
            f"non-identity residual for weight {weight} <= radius {radius}")
    return corr, residual

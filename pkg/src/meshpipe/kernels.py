"""Receiver-chain kernels: IFFT, block (de)interleaver, soft demapper.

All kernels run in 32-bit float arithmetic, matching the modeled hardware's
native float support. Cycle costs are not derived here; they come from the
deployment calibration so the math stays testable against slow oracles.

The parallel IFFT uses a binary-exchange decomposition: each of the
``n_cores`` cores owns a contiguous block of the bit-reversed input, runs
``log2(block)`` purely local butterfly stages, then one exchange stage per
bit of the core index. In an exchange stage, core ``i`` pairs with
``i XOR mask``, ships half of its block to the partner, and keeps the half
of the butterflies it computes. The index bookkeeping below tracks which
global sample lives in which buffer position so results can be gathered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QPSK = "qpsk"
QAM16 = "16qam"
SCHEMES = (QPSK, QAM16)

DEFAULT_SYMBOL_SIZE = 256


def _require_pow2(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{what} must be a power of two, got {n}")
    return n.bit_length() - 1


def bit_reverse_indices(n: int) -> np.ndarray:
    """Permutation placing index i at position bit_reverse(i, log2 n)."""
    bits = _require_pow2(n, "transform size")
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _twiddles(numerators: np.ndarray, span: int) -> np.ndarray:
    """exp(+2*pi*i * k / (2*span)) as complex64, for inverse-transform stages."""
    return np.exp(2j * np.pi * np.asarray(numerators, np.float64) / (2 * span)).astype(np.complex64)


def butterfly(a: np.ndarray, b: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Radix-2 butterfly: returns (a + w*b, a - w*b) in complex64."""
    t = w * b
    return a + t, a - t


def stages_inplace(y: np.ndarray, first: int, last: int) -> None:
    """Apply butterfly stages [first, last) in place; stage t pairs span 2**t."""
    n = len(y)
    for t in range(first, last):
        s = 1 << t
        w = _twiddles(np.arange(s), s)
        g = y.reshape(n // (2 * s), 2, s)
        plus, minus = butterfly(g[:, 0, :], g[:, 1, :], w)
        g[:, 0, :] = plus
        g[:, 1, :] = minus


def ifft(x: np.ndarray) -> np.ndarray:
    """Unnormalized inverse DFT, X[k] = sum_n x[n] exp(+2pi i nk/N), radix-2."""
    x = np.asarray(x, np.complex64)
    bits = _require_pow2(len(x), "transform size")
    y = x[bit_reverse_indices(len(x))].copy()
    stages_inplace(y, 0, bits)
    return y


def dft_oracle(x: np.ndarray) -> np.ndarray:
    """Direct O(N^2) evaluation of the same unnormalized inverse DFT."""
    x = np.asarray(x, np.complex128)
    n = len(x)
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) @ x


def interleave(x: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Block interleaver: write row-wise into rows x cols, read column-wise."""
    x = np.asarray(x)
    if len(x) != rows * cols:
        raise ValueError(f"length {len(x)} != {rows}*{cols}")
    return x.reshape(rows, cols).T.reshape(-1).copy()


def deinterleave(y: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Exact inverse of interleave(., rows, cols)."""
    y = np.asarray(y)
    if len(y) != rows * cols:
        raise ValueError(f"length {len(y)} != {rows}*{cols}")
    return y.reshape(cols, rows).T.reshape(-1).copy()


def bits_per_symbol(scheme: str) -> int:
    if scheme == QPSK:
        return 2
    if scheme == QAM16:
        return 4
    raise ValueError(f"unknown modulation scheme {scheme!r}")


def _constellation(scheme: str) -> tuple[np.ndarray, np.ndarray]:
    """(points, bit patterns): Gray-coded, unit average energy."""
    k = bits_per_symbol(scheme)
    patterns = ((np.arange(2**k)[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.int8)
    if scheme == QPSK:
        i = 1 - 2 * patterns[:, 0]
        q = 1 - 2 * patterns[:, 1]
        points = (i + 1j * q) / np.sqrt(2.0)
    else:
        # Per-axis Gray over {+-1, +-3}: first bit of the axis picks the sign,
        # second picks the magnitude (0 -> 1, 1 -> 3).
        i = (1 - 2 * patterns[:, 0]) * (2 - (1 - 2 * patterns[:, 2]))
        q = (1 - 2 * patterns[:, 1]) * (2 - (1 - 2 * patterns[:, 3]))
        points = (i + 1j * q) / np.sqrt(10.0)
    return points.astype(np.complex64), patterns


def map_bits(bits: np.ndarray, scheme: str = QAM16) -> np.ndarray:
    """Map a bit vector onto constellation points, bits_per_symbol at a time."""
    bits = np.asarray(bits, np.int8).reshape(-1)
    k = bits_per_symbol(scheme)
    if len(bits) % k:
        raise ValueError(f"bit count {len(bits)} not divisible by {k}")
    points, _ = _constellation(scheme)
    weights = 1 << np.arange(k - 1, -1, -1)
    idx = (bits.reshape(-1, k) * weights).sum(axis=1)
    return points[idx]


def demap(y: np.ndarray, scheme: str = QAM16, noise_var: float = 1.0) -> np.ndarray:
    """Max-log soft demapper: per-bit LLRs, positive sign means bit 0.

    llr(b) = (min_{s: b=1} |y-s|^2 - min_{s: b=0} |y-s|^2) / noise_var
    """
    if noise_var <= 0:
        raise ValueError(f"noise_var must be positive, got {noise_var}")
    y = np.asarray(y, np.complex64).reshape(-1)
    points, patterns = _constellation(scheme)
    d = y[:, None] - points[None, :]
    d2 = (d.real * d.real + d.imag * d.imag).astype(np.float32)
    k = patterns.shape[1]
    llrs = np.empty((len(y), k), np.float32)
    for b in range(k):
        ones = patterns[:, b] == 1
        llrs[:, b] = d2[:, ones].min(axis=1) - d2[:, ~ones].min(axis=1)
    return (llrs / np.float32(noise_var)).reshape(-1)


def hard_bits(llrs: np.ndarray) -> np.ndarray:
    """Hard decisions from LLR signs (positive -> 0)."""
    return (np.asarray(llrs) < 0).astype(np.int8)


def lcg_bits(count: int, seed: int = 0) -> np.ndarray:
    """Reproducible bit stream from a 64-bit linear congruential generator.

    x <- 6364136223846793005*x + 1442695040888963407 (mod 2^64), one bit per
    step from the top bit. Pure integer arithmetic, identical on every
    platform.
    """
    state = seed & 0xFFFFFFFFFFFFFFFF
    out = np.empty(count, np.int8)
    for i in range(count):
        state = (6364136223846793005 * state + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        out[i] = state >> 63
    return out


def random_symbol(n: int = DEFAULT_SYMBOL_SIZE, scheme: str = QAM16, seed: int = 0) -> np.ndarray:
    """Deterministic pseudo-random constellation symbol of n samples."""
    _require_pow2(n, "symbol size")
    return map_bits(lcg_bits(n * bits_per_symbol(scheme), seed), scheme)


@dataclass(frozen=True)
class ExchangeStage:
    """One data-exchange butterfly stage of the parallel IFFT.

    ``send_upper[i]`` says whether core ``i`` ships the upper or the lower
    half of its block to its partner ``i XOR core_mask``. ``twiddle_num[i]``
    holds, for each butterfly kept by core ``i``, the numerator ``g mod span``
    of its twiddle exponent (denominator ``2*span``).
    """

    index: int
    stage: int
    core_mask: int
    span: int
    send_upper: tuple[bool, ...]
    twiddle_num: tuple[tuple[int, ...], ...]
    held_after: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ParallelFftPlan:
    n: int
    n_cores: int
    block: int
    local_stages: int
    exchange_stages: tuple[ExchangeStage, ...]

    @property
    def held_final(self) -> tuple[tuple[int, ...], ...]:
        """Per core: global output index stored at each buffer position."""
        if self.exchange_stages:
            return self.exchange_stages[-1].held_after
        return tuple(tuple(range(c * self.block, (c + 1) * self.block)) for c in range(self.n_cores))

    def output_runs(self, core: int) -> list[tuple[int, int, int]]:
        """Contiguous (position, global index, length) runs of a core's output."""
        held = self.held_final[core]
        runs: list[tuple[int, int, int]] = []
        start = 0
        for q in range(1, len(held) + 1):
            if q == len(held) or held[q] != held[q - 1] + 1:
                runs.append((start, held[start], q - start))
                start = q
        return runs


def plan_parallel_ifft(n: int, n_cores: int) -> ParallelFftPlan:
    """Binary-exchange decomposition of an n-point IFFT over n_cores cores."""
    total_bits = _require_pow2(n, "transform size")
    core_bits = _require_pow2(n_cores, "core count")
    if n_cores > n:
        raise ValueError(f"more cores ({n_cores}) than samples ({n})")
    block = n // n_cores
    local_stages = total_bits - core_bits

    held = [list(range(c * block, (c + 1) * block)) for c in range(n_cores)]
    half = block // 2
    stages: list[ExchangeStage] = []
    for j in range(core_bits):
        span = block << j
        mask = 1 << j
        send_upper: list[bool] = []
        twiddle_num: list[tuple[int, ...]] = []
        held_after: list[tuple[int, ...]] = []
        for c in range(n_cores):
            p = c ^ mask
            # Pairing invariant: same buffer position on partner cores holds
            # the two inputs of one butterfly, low-index side on the core
            # whose mask bit is clear.
            assert all(held[c][q] ^ span == held[p][q] for q in range(block))
            if c & mask == 0:
                assert all(held[c][q] & span == 0 for q in range(block))
                kept = range(0, half)
                send_upper.append(True)
                new_held = [held[c][q] for q in kept] + [held[c][q] ^ span for q in kept]
            else:
                kept = range(half, block)
                send_upper.append(False)
                new_held = [held[c][q] ^ span for q in kept] + [held[c][q] for q in kept]
            twiddle_num.append(tuple(held[c][q] % span for q in kept))
            held_after.append(tuple(new_held))
        held = [list(h) for h in held_after]
        stages.append(
            ExchangeStage(
                index=j,
                stage=local_stages + j,
                core_mask=mask,
                span=span,
                send_upper=tuple(send_upper),
                twiddle_num=tuple(twiddle_num),
                held_after=tuple(held_after),
            )
        )
    return ParallelFftPlan(n, n_cores, block, local_stages, tuple(stages))


def exchange_compute(
    buf: np.ndarray, staged: np.ndarray, stage: ExchangeStage, core: int
) -> np.ndarray:
    """One core's butterflies for an exchange stage.

    ``staged`` is the half-block received from the partner. Both sides place
    the kept pair's plus-output in the lower half of the new buffer and the
    minus-output in the upper half, which is exactly what ``held_after``
    records.
    """
    half = len(buf) // 2
    w = _twiddles(np.array(stage.twiddle_num[core]), stage.span)
    if stage.send_upper[core]:
        a, b = buf[:half], staged
    else:
        a, b = staged, buf[half:]
    plus, minus = butterfly(a, b, w)
    return np.concatenate([plus, minus])


def parallel_ifft_values(x: np.ndarray, plan: ParallelFftPlan) -> np.ndarray:
    """Host-side execution of the plan's data flow (no timing model).

    Used as a fast structural check that the bookkeeping reproduces the
    single-core transform bit for bit.
    """
    x = np.asarray(x, np.complex64)
    rev = x[bit_reverse_indices(plan.n)]
    bufs = [rev[c * plan.block : (c + 1) * plan.block].copy() for c in range(plan.n_cores)]
    for c in range(plan.n_cores):
        stages_inplace(bufs[c], 0, plan.local_stages)
    half = plan.block // 2
    for st in plan.exchange_stages:
        sent = []
        for c in range(plan.n_cores):
            sent.append(bufs[c][half:].copy() if st.send_upper[c] else bufs[c][:half].copy())
        bufs = [exchange_compute(bufs[c], sent[c ^ st.core_mask], st, c) for c in range(plan.n_cores)]
    out = np.empty(plan.n, np.complex64)
    for c in range(plan.n_cores):
        for pos, g, length in plan.output_runs(c):
            out[g : g + length] = bufs[c][pos : pos + length]
    return out

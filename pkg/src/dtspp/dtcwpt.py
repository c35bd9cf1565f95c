"""Two-stage dual-tree complex wavelet packet analysis and synthesis.

Stage 1 applies `undecimated_levels` packet levels without downsampling
(a-trous, filters upsampled 2^(level-1)).  Stage 2 applies
`decimated_levels` further packet levels in which the filters stay upsampled
by 2^undecimated_levels at their local rate and each level downsamples by 2.
By the noble identities the composite equals 2^undecimated_levels interleaved
orthonormal packet transforms, so per tree the analysis is an exactly tight
frame with constant 8 and the inverse is the adjoint divided by 8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, StructuralError
from .filterbank import FilterBankSet, QuadFilterPair
from .signal_io import MonoSignal

PAD_MULTIPLE = 128


@dataclass
class ComplexSubbandGrid:
    """Complex packet coefficients, subbands in sequency (frequency) order."""

    coeffs: np.ndarray           # complex, shape (num_subbands, time)
    subband_ordering: np.ndarray  # sequency index of each natural-order path
    frame_rate_per_subband: float
    original_length: int
    sample_rate_hz: int = 8000

    @property
    def num_subbands(self):
        return self.coeffs.shape[0]

    @property
    def num_frames(self):
        return self.coeffs.shape[1]

    def times_s(self):
        """Center time (s) of each coefficient column."""
        return np.arange(self.num_frames) / self.frame_rate_per_subband


def sequency_index(path):
    """Band index of a packet path: XOR prefix scan of the branch bits."""
    m = 0
    acc = 0
    for b in path:
        acc ^= b
        m = (m << 1) | acc
    return m


def path_of_sequency(m, levels):
    """Inverse of sequency_index for a given depth."""
    bits = []
    prev = 0
    for i in range(levels - 1, -1, -1):
        g = (m >> i) & 1
        bits.append(g ^ prev)
        prev = g
    return tuple(bits)


def _filter_rfft(taps, up, n, delay=0):
    """rfft of `taps` upsampled by `up` and delayed, on an n-point circle."""
    x = np.zeros(n)
    idx = (np.arange(len(taps)) * up + delay) % n
    np.add.at(x, idx, taps)
    return np.fft.rfft(x)


def _upfac(fb, stage):
    return 2 ** (stage - 1) if stage <= fb.undecimated_levels else 2 ** fb.undecimated_levels


def _analyze_tree(x, fb, tree):
    n0 = len(x)
    bands = {(): x}
    for stage in range(1, fb.total_levels + 1):
        up = _upfac(fb, stage)
        decimate = stage > fb.undecimated_levels
        nxt = {}
        for path, v in bands.items():
            n = len(v)
            pair = fb.pair_for(path, tree)
            delay = fb.level1_im_offset if (stage == 1 and tree == "im") else 0
            spec = np.fft.rfft(v)
            for bit, taps in ((0, pair.h0), (1, pair.h1)):
                h = _filter_rfft(taps, up, n, delay)
                y = np.fft.irfft(spec * h, n)
                if decimate:
                    y = y[::2]
                nxt[path + (bit,)] = y
        bands = nxt
    frames = n0 // 2 ** fb.decimated_levels
    out = np.empty((fb.num_subbands, frames))
    for path, v in bands.items():
        out[sequency_index(path)] = v
    return out


def _synthesize_tree(coeffs, fb, tree, n0):
    bands = {path_of_sequency(m, fb.total_levels): coeffs[m].astype(np.float64)
             for m in range(coeffs.shape[0])}
    for stage in range(fb.total_levels, 0, -1):
        up = _upfac(fb, stage)
        decimated = stage > fb.undecimated_levels
        nxt = {}
        for path in {p[:-1] for p in bands}:
            kids = (bands[path + (0,)], bands[path + (1,)])
            n = len(kids[0]) * 2 if decimated else len(kids[0])
            acc = np.zeros(n // 2 + 1, dtype=complex)
            pair = fb.pair_for(path, tree)
            delay = fb.level1_im_offset if (stage == 1 and tree == "im") else 0
            for bit, taps in ((0, pair.h0), (1, pair.h1)):
                y = kids[bit]
                if decimated:
                    z = np.zeros(n)
                    z[::2] = y
                else:
                    z = y
                h = _filter_rfft(taps, up, n, delay)
                acc += np.fft.rfft(z) * np.conj(h)
            nxt[path] = np.fft.irfft(acc, n)
        bands = nxt
    return bands[()] / 2 ** fb.undecimated_levels


def analyze(signal, fb):
    """Two-stage dual-tree packet analysis of an 8 kHz signal."""
    x = np.asarray(signal.samples, dtype=np.float64)
    if len(x) < 2 ** fb.decimated_levels:
        raise DegenerateInputError(
            f"signal of {len(x)} samples is shorter than {2 ** fb.decimated_levels}")
    n0 = len(x)
    pad = (-n0) % PAD_MULTIPLE
    if pad:
        x = np.concatenate([x, np.zeros(pad)])
    re = _analyze_tree(x, fb, "re")
    im = _analyze_tree(x, fb, "im")
    ordering = np.array([sequency_index(path_of_sequency(m, fb.total_levels))
                         for m in range(fb.num_subbands)])
    return ComplexSubbandGrid(
        coeffs=re + 1j * im,
        subband_ordering=ordering,
        frame_rate_per_subband=signal.sample_rate_hz / 2 ** fb.decimated_levels,
        original_length=n0,
        sample_rate_hz=signal.sample_rate_hz,
    )


def synthesize(grid, fb):
    """Invert `analyze`; exact up to floating point for untouched grids."""
    if grid.coeffs.shape[0] != fb.num_subbands:
        raise StructuralError(
            f"grid has {grid.coeffs.shape[0]} subbands, filter bank expects {fb.num_subbands}")
    n = grid.coeffs.shape[1] * 2 ** fb.decimated_levels
    xr = _synthesize_tree(grid.coeffs.real, fb, "re", n)
    xi = _synthesize_tree(grid.coeffs.imag, fb, "im", n)
    x = 0.5 * (xr + xi)
    return MonoSignal(x[:grid.original_length], grid.sample_rate_hz)


def packet_analyze(x, pair, levels):
    """Plain decimated packet transform (orthonormal for CQF pairs)."""
    x = np.asarray(x, dtype=np.float64)
    if len(x) % 2 ** levels:
        raise DegenerateInputError(f"length must be divisible by {2 ** levels}")
    bands = {(): x}
    for _ in range(levels):
        nxt = {}
        for path, v in bands.items():
            spec = np.fft.rfft(v)
            for bit, taps in ((0, pair.h0), (1, pair.h1)):
                h = _filter_rfft(taps, 1, len(v))
                nxt[path + (bit,)] = np.fft.irfft(spec * h, len(v))[::2]
        bands = nxt
    out = np.empty((2 ** levels, len(x) // 2 ** levels))
    for path, v in bands.items():
        out[sequency_index(path)] = v
    return out


def packet_synthesize(coeffs, pair, levels):
    """Inverse of packet_analyze."""
    bands = {path_of_sequency(m, levels): coeffs[m].astype(np.float64)
             for m in range(coeffs.shape[0])}
    for _ in range(levels):
        nxt = {}
        for path in {p[:-1] for p in bands}:
            n = len(bands[path + (0,)]) * 2
            acc = np.zeros(n // 2 + 1, dtype=complex)
            for bit, taps in ((0, pair.h0), (1, pair.h1)):
                z = np.zeros(n)
                z[::2] = bands[path + (bit,)]
                acc += np.fft.rfft(z) * np.conj(_filter_rfft(taps, 1, n))
            nxt[path] = np.fft.irfft(acc, n)
        bands = nxt
    return bands[()]


def subband_analyticity_db(fb, n=4096):
    """One-sided spectral dominance (dB) of each subband's complex filter.

    Computes the equivalent analysis filters of both trees as frequency-domain
    products and integrates |F_re + j F_im|^2 over positive vs negative
    frequencies.  Interior bands of the default set exceed 30 dB; the DC- and
    Nyquist-containing bands are pinned near 0 dB because the differential
    phase of any real FIR pair vanishes at those frequencies.
    """
    doms = np.empty(fb.num_subbands)

    def rec(path, f_re, f_im):
        stage = len(path) + 1
        up = 2 ** (stage - 1)
        pre = fb.pair_for(path, "re")
        pim = fb.pair_for(path, "im")
        delay = fb.level1_im_offset if stage == 1 else 0
        for bit in (0, 1):
            fr = f_re * _full_fft(pre.h0 if bit == 0 else pre.h1, up, n, 0)
            fi = f_im * _full_fft(pim.h0 if bit == 0 else pim.h1, up, n, delay)
            q = path + (bit,)
            if stage == fb.total_levels:
                c = fr + 1j * fi
                e_pos = np.sum(np.abs(c[1:n // 2]) ** 2)
                e_neg = np.sum(np.abs(c[n // 2 + 1:]) ** 2)
                doms[sequency_index(q)] = 10 * np.log10(e_pos / e_neg)
            else:
                rec(q, fr, fi)

    rec((), np.ones(n, complex), np.ones(n, complex))
    return doms


def _full_fft(taps, up, n, delay):
    x = np.zeros(n)
    idx = (np.arange(len(taps)) * up + delay) % n
    np.add.at(x, idx, taps)
    return np.fft.fft(x)


def shift_invariance_metric(signal, fb, max_shift, use_imaginary=True):
    """Mean relative RMS change of subband magnitude envelopes under shifts.

    For each circular shift s in [1, max_shift] the shifted signal is
    analyzed, the envelope grid is realigned by the fractional stride s/16
    (linear interpolation), and compared to the unshifted envelope.  With
    `use_imaginary=False` the imaginary tree is zeroed, giving the
    real-packet-transform baseline the dual tree is measured against.
    """
    base_grid = analyze(signal, fb)
    stride = 2 ** fb.decimated_levels

    def env(grid):
        c = grid.coeffs
        return np.abs(c) if use_imaginary else np.abs(c.real)

    base = env(base_grid)
    norm = np.linalg.norm(base)
    if norm == 0:
        raise DegenerateInputError("zero signal has no envelope to compare")
    errs = []
    for s in range(1, max_shift + 1):
        shifted = MonoSignal(np.roll(signal.samples, s), signal.sample_rate_hz)
        e = env(analyze(shifted, fb))
        frac = s / stride
        k = np.arange(e.shape[1])
        src = k - frac
        i0 = np.floor(src).astype(int) % e.shape[1]
        i1 = (i0 + 1) % e.shape[1]
        w = src - np.floor(src)
        aligned = e[:, i0] * (1 - w) + e[:, i1] * w
        errs.append(np.linalg.norm(aligned - base) / norm)
    return float(np.mean(errs))

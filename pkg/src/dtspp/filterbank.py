"""Conjugate quadrature filter pairs and the dual-tree packet filter bank."""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, StructuralError

UNDECIMATED_LEVELS = 3
DECIMATED_LEVELS = 4
TOTAL_LEVELS = UNDECIMATED_LEVELS + DECIMATED_LEVELS
NUM_SUBBANDS = 2 ** TOTAL_LEVELS

#: Frame constant of the two-stage analysis per tree: it is a union of
#: 2^UNDECIMATED_LEVELS interleaved orthonormal packet transforms, hence an
#: exactly tight frame with A = B = 8 (verified in the test suite).
FRAME_BOUND_LOWER = 8.0
FRAME_BOUND_UPPER = 8.0


@dataclass(frozen=True)
class QuadFilterPair:
    """Orthonormal lowpass/highpass pair with h1(n) = (-1)^n h0(L-1-n)."""

    h0: np.ndarray
    h1: np.ndarray

    def validate(self, tol=1e-10):
        h0, h1 = np.asarray(self.h0), np.asarray(self.h1)
        if h0.ndim != 1 or h0.shape != h1.shape:
            raise StructuralError("filter pair must be two equal-length 1-D tap arrays")
        n = np.arange(len(h0))
        mirror = ((-1.0) ** n) * h0[::-1]
        if np.max(np.abs(h1 - mirror)) > tol:
            raise StructuralError("h1 does not satisfy the conjugate-quadrature identity")
        if abs(h0.sum() - np.sqrt(2)) > tol:
            raise StructuralError("sum of lowpass taps differs from sqrt(2)")
        if abs(h1.sum()) > tol:
            raise StructuralError("highpass taps do not sum to zero")

    def orthonormality_defect(self):
        """Worst |<h0, h0 shifted by 2k>| deviation from delta."""
        h0 = self.h0
        defect = abs(np.dot(h0, h0) - 1.0)
        for k in range(1, len(h0) // 2):
            defect = max(defect, abs(np.dot(h0[:-2 * k], h0[2 * k:])))
        return defect


def cqf_highpass(h0):
    """Conjugate-quadrature highpass completing a lowpass filter."""
    n = np.arange(len(h0))
    return ((-1.0) ** n) * np.asarray(h0, dtype=float)[::-1]


@dataclass(frozen=True)
class FilterBankSet:
    """Filter pairs and structural plan of the two-stage dual-tree transform.

    Levels >= 2 use quarter-shift pairs whose lowpass group delays differ by
    half a sample between the trees.  The real tree applies its own pair
    (``tree_re_rest``) only on the two spine chains of the packet tree (the
    all-lowpass path and the lowpass path after the first highpass); on every
    other node both trees use ``tree_im_rest``, which preserves the near
    Hilbert-pair relation established along the spines.  Level 1 uses one
    shared orthonormal pair; the imaginary tree applies it delayed by
    ``level1_im_offset`` samples.
    """

    tree_re_first: QuadFilterPair
    tree_im_first: QuadFilterPair
    tree_re_rest: QuadFilterPair
    tree_im_rest: QuadFilterPair
    undecimated_levels: int = UNDECIMATED_LEVELS
    decimated_levels: int = DECIMATED_LEVELS
    level1_im_offset: int = 1

    @property
    def total_levels(self):
        return self.undecimated_levels + self.decimated_levels

    @property
    def num_subbands(self):
        return 2 ** self.total_levels

    def pair_for(self, path, tree):
        """Pair used to split the node reached by `path` (tuple of 0/1 bits)."""
        if len(path) == 0:
            return self.tree_re_first if tree == "re" else self.tree_im_first
        if tree == "im":
            return self.tree_im_rest
        return self.tree_re_rest if _on_spine(path) else self.tree_im_rest

    def validate(self):
        for pair in (self.tree_re_first, self.tree_im_first,
                     self.tree_re_rest, self.tree_im_rest):
            pair.validate()
            if pair.orthonormality_defect() > 1e-10:
                raise StructuralError("filter pair is not orthonormal")
        if self.undecimated_levels + self.decimated_levels != TOTAL_LEVELS:
            raise StructuralError(
                f"stage plan must total {TOTAL_LEVELS} levels, got "
                f"{self.undecimated_levels}+{self.decimated_levels}")
        # one-sample offset condition on the effective level-1 filters
        if self.level1_im_offset == 0:
            raise StructuralError("level-1 trees must be offset by at least one sample")
        # half-sample delay relation of the rest pairs: reverse of each other
        a, b = self.tree_im_rest.h0, self.tree_re_rest.h0
        if np.max(np.abs(a - b[::-1])) > 1e-10:
            raise StructuralError("level>=2 pairs do not satisfy the time-reverse "
                                  "(half-sample delay) relation")


def _on_spine(path):
    """True for nodes on the DC-anchored or Nyquist-anchored lowpass chains."""
    if all(b == 0 for b in path):
        return True
    return path[0] == 1 and all(b == 0 for b in path[1:])


def _parse_sections(text, origin):
    sections = {}
    name = None
    taps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if name is not None:
                sections[name] = np.array(taps)
            parts = line[1:].split()
            if len(parts) != 2:
                raise FormatError(f"{origin}:{lineno}: header must be '# name length'")
            name, taps = parts[0], []
            try:
                sections_len = int(parts[1])
            except ValueError:
                raise FormatError(f"{origin}:{lineno}: bad length {parts[1]!r}") from None
            sections[name + "__len"] = sections_len
        else:
            if name is None:
                raise FormatError(f"{origin}:{lineno}: tap before any section header")
            try:
                taps.append(float(line))
            except ValueError:
                raise FormatError(f"{origin}:{lineno}: bad tap value {line!r}") from None
    if name is not None:
        sections[name] = np.array(taps)
    out = {}
    for key, val in sections.items():
        if key.endswith("__len"):
            continue
        expect = sections.get(key + "__len")
        if expect is not None and expect != len(val):
            raise FormatError(f"{origin}: section {key} declares {expect} taps, has {len(val)}")
        out[key] = val
    return out


def load_filterbank(path):
    """Load a FilterBankSet from a tap file (sections '# name length')."""
    with open(path) as f:
        text = f.read()
    return _filterbank_from_sections(_parse_sections(text, str(path)))


def _filterbank_from_sections(sec):
    required = ["level1_h0", "level1_h1", "qshift_a_h0", "qshift_a_h1",
                "qshift_b_h0", "qshift_b_h1"]
    missing = [k for k in required if k not in sec]
    if missing:
        raise FormatError(f"filter tap file missing sections: {', '.join(missing)}")
    level1 = QuadFilterPair(sec["level1_h0"], sec["level1_h1"])
    pair_a = QuadFilterPair(sec["qshift_a_h0"], sec["qshift_a_h1"])
    pair_b = QuadFilterPair(sec["qshift_b_h0"], sec["qshift_b_h1"])
    fb = FilterBankSet(tree_re_first=level1, tree_im_first=level1,
                       tree_re_rest=pair_b, tree_im_rest=pair_a)
    fb.validate()
    return fb


def default_filterbank():
    """The packaged filter set (Daubechies-5 level 1, 14-tap quarter-shift rest)."""
    text = (importlib.resources.files("dtspp") / "data" / "default_filterbank.txt").read_text()
    return _filterbank_from_sections(_parse_sections(text, "default_filterbank.txt"))

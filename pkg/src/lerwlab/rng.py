"""Counter-based random streams.

Every random word is ``mix64(key + (counter + 1) * GAMMA)`` where ``key`` is
derived from ``(master_seed, stream_index, substream)``. This is SplitMix64
addressed by counter, so a trial's randomness depends only on its stream
index and never on how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0
_MASK64 = (1 << 64) - 1


@numba.njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def stream_key(seed, stream, sub):
    """Key of substream ``sub`` of trial ``stream``; all arguments uint64."""
    k = mix64(seed + GAMMA)
    k = mix64(k ^ (stream * GAMMA + np.uint64(0x632BE59BD9B4E019)))
    return mix64(k ^ (sub * _M2 + np.uint64(0x2545F4914F6CDD1D)))


@numba.njit(cache=True, inline="always")
def word(key, counter):
    return mix64(key + (counter + np.uint64(1)) * GAMMA)


@numba.njit(cache=True, inline="always")
def to_unit(w):
    """Uniform double in [0, 1) from the top 53 bits."""
    return float(w >> _S11) * _INV53


def _py_mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def py_stream_key(seed: int, stream: int, sub: int = 0) -> int:
    """Pure-Python twin of :func:`stream_key` (used by the Python samplers)."""
    g = int(GAMMA)
    k = _py_mix64(seed + g)
    k = _py_mix64(k ^ ((stream * g + 0x632BE59BD9B4E019) & _MASK64))
    return _py_mix64(k ^ ((sub * 0x94D049BB133111EB + 0x2545F4914F6CDD1D) & _MASK64))


@dataclass
class RngStream:
    """Sequential view of one counter-based stream.

    Identical ``(master_seed, stream_index, substream)`` give identical output.
    Draws are produced in vectorized blocks and buffered.
    """

    master_seed: int
    stream_index: int = 0
    substream: int = 0
    counter: int = 0
    _buf: np.ndarray = field(default=None, repr=False)
    _pos: int = field(default=0, repr=False)

    def __post_init__(self):
        self.key = py_stream_key(self.master_seed, self.stream_index, self.substream)

    def split(self, substream: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_index, substream)

    def words(self, count: int) -> np.ndarray:
        """The next ``count`` 64-bit words."""
        c = np.arange(self.counter + 1, self.counter + 1 + count, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            z = np.uint64(self.key) + c * GAMMA
            z = (z ^ (z >> _S30)) * _M1
            z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)

    def uniforms(self, count: int) -> np.ndarray:
        return (self.words(count) >> _S11).astype(np.float64) * _INV53

    def directions(self, count: int) -> np.ndarray:
        """Direction codes 0..3, two bits per step taken from the top bits."""
        return (self.words(count) >> np.uint64(62)).astype(np.int8)

    def uniform(self) -> float:
        if self._buf is None or self._pos >= len(self._buf):
            self._buf = self.uniforms(256)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    def direction(self) -> int:
        return min(int(self.uniform() * 4.0), 3)


def derive_seed(seed: int, *labels: int) -> int:
    """A child master seed for a labelled sub-experiment (e.g. one radius of
    a sweep), so that sweeps do not share streams."""
    s = seed & _MASK64
    for lab in labels:
        s = py_stream_key(s, lab & _MASK64, 0x5EED)
    return s

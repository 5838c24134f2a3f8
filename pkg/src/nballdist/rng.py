"""Uniform-variate engines: Lehmer RAN0, GFSR R31, nested Weyl, external.

Every engine is a single-owner stateful object exposing the same interface:
``uniforms(count)`` returns the next ``count`` variates in [0, 1) as a float64
array, ``next_uniform()`` returns one, and ``describe()`` reports algorithm,
seeding, and draw count for reproducible reports.  Generation is internally
blocked for speed but the delivered stream is independent of call pattern.
"""

import math
import warnings
from typing import Optional

import numpy as np

from .errors import ConfigurationError, StreamExhaustedError

RAN0_MODULUS = 2**31 - 1
RAN0_MULTIPLIER = 16807
R31_LAG_P = 31
R31_LAG_Q = 3
_M32 = np.uint64(0xFFFFFFFF)
_NWS_FRAC_BITS = 128
# sqrt(2) - 1 to 128 fractional bits, computed exactly from isqrt(2^257).
NWS_ALPHA_SQRT2_BITS = math.isqrt(1 << 257) - (1 << 128)


class UniformEngine:
    """Shared buffering for block-generating engines."""

    algorithm = "abstract"

    def __init__(self):
        self._buffer = np.empty(0, dtype=np.float64)
        self._pos = 0
        self._drawn = 0

    def _produce(self, need: int) -> np.ndarray:
        raise NotImplementedError

    def uniforms(self, count: int) -> np.ndarray:
        """Next ``count`` variates in [0, 1), in stream order."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        out = np.empty(count, dtype=np.float64)
        filled = 0
        while filled < count:
            if self._pos >= self._buffer.size:
                self._buffer = self._produce(count - filled)
                self._pos = 0
            take = min(self._buffer.size - self._pos, count - filled)
            out[filled : filled + take] = self._buffer[self._pos : self._pos + take]
            self._pos += take
            filled += take
        self._drawn += count
        return out

    def next_uniform(self) -> float:
        return float(self.uniforms(1)[0])

    @property
    def draws(self) -> int:
        """Total variates delivered so far."""
        return self._drawn

    def describe(self) -> dict:
        raise NotImplementedError


class Ran0Engine(UniformEngine):
    """Lehmer generator I_n = 16807 I_(n-1) mod (2^31 - 1).

    The product is formed in 64-bit integers, so no Schrage splitting is
    needed; states stay in [1, m-1] and uniforms in (0, 1).
    """

    algorithm = "ran0"
    _BLOCK = 8192
    # a^(j+1) mod m for j = 0 .. BLOCK-1, shared across instances.
    _POWERS: Optional[np.ndarray] = None

    def __init__(self, seed: int):
        super().__init__()
        if not 1 <= seed <= RAN0_MODULUS - 1:
            raise ValueError(
                f"RAN0 seed must be in [1, {RAN0_MODULUS - 1}], got {seed}"
            )
        self.seed = int(seed)
        self.state = int(seed)
        if Ran0Engine._POWERS is None:
            pw = np.empty(self._BLOCK, dtype=np.uint64)
            acc = 1
            for j in range(self._BLOCK):
                acc = (acc * RAN0_MULTIPLIER) % RAN0_MODULUS
                pw[j] = acc
            Ran0Engine._POWERS = pw

    def _produce(self, need: int) -> np.ndarray:
        k = min(max(need, 1024), self._BLOCK)
        states = (self._POWERS[:k] * np.uint64(self.state)) % np.uint64(RAN0_MODULUS)
        self.state = int(states[-1])
        return states.astype(np.float64) / float(RAN0_MODULUS)

    def describe(self) -> dict:
        return {"algorithm": "ran0", "seed": self.seed, "draws": self.draws}


def ran0_next(state: int):
    """One exact Lehmer step: returns (new_state, uniform)."""
    if not 1 <= state <= RAN0_MODULUS - 1:
        raise ValueError(f"RAN0 state must be in [1, {RAN0_MODULUS - 1}], got {state}")
    new = (RAN0_MULTIPLIER * state) % RAN0_MODULUS
    return new, new / RAN0_MODULUS


def _ran0_table_words(seed: int, count: int):
    """Rotate ``count`` 31-bit Lehmer states into full 32-bit words."""
    state = seed
    words = []
    for _ in range(count):
        state = (RAN0_MULTIPLIER * state) % RAN0_MODULUS
        words.append(((state << 1) | (state >> 30)) & 0xFFFFFFFF)
    return words


class R31Engine(UniformEngine):
    """GFSR generator x_n = x_(n-31) XOR x_(n-3) over 32-bit words.

    Blocks are produced with the squared-lag identity: applying the
    recurrence to itself k times yields x_n = x_(n-31*2^k) XOR x_(n-3*2^k),
    valid once 31*2^k words exist, so after a short warm-up the engine emits
    384 words per vector step with lag pair (3968, 384).
    """

    algorithm = "r31"
    _WINDOW = R31_LAG_P * 128  # 3968
    _STEP = R31_LAG_Q * 128  # 384

    def __init__(self, table, seed_record=None):
        super().__init__()
        tab = np.asarray(table)
        if tab.shape != (R31_LAG_P,):
            raise ValueError(f"R31 needs exactly {R31_LAG_P} words, got {tab.shape}")
        if np.any(tab < 0) or np.any(tab > 0xFFFFFFFF):
            raise ValueError("R31 table words must fit in 32 bits")
        tab = tab.astype(np.uint32)
        if not tab.any():
            raise ValueError("R31 lag table must not be all zero")
        if np.all(tab == tab[0]):
            warnings.warn(
                "R31 lag table has identical words; the first output is 0 and "
                "the stream is degenerate",
                RuntimeWarning,
                stacklevel=2,
            )
        self.seed_record = seed_record
        self._hist = tab.copy()

    @classmethod
    def from_seed(cls, seed: int) -> "R31Engine":
        """Fill the lag table from 31 word-rotated RAN0 states of a derived seed."""
        derived = (int(seed) % (RAN0_MODULUS - 2)) + 1
        return cls(_ran0_table_words(derived, R31_LAG_P), seed_record=int(seed))

    def _produce(self, need: int) -> np.ndarray:
        hist = self._hist
        if hist.size < self._WINDOW:
            # Warm-up: extend with the base lags, at most 3 words per step
            # (the smallest lag), until the doubled-lag window is full.
            buf = np.empty(self._WINDOW, dtype=np.uint32)
            buf[: hist.size] = hist
            size = hist.size
            while size < self._WINDOW:
                take = min(R31_LAG_Q, self._WINDOW - size)
                lo = size - R31_LAG_P
                qo = size - R31_LAG_Q
                buf[size : size + take] = buf[lo : lo + take] ^ buf[qo : qo + take]
                size += take
            self._hist = buf
            return buf[R31_LAG_P :].astype(np.float64) / 4294967296.0
        blocks = max(1, -(-need // self._STEP))
        outs = []
        for _ in range(blocks):
            new = hist[: self._STEP] ^ hist[-self._STEP :]
            hist = np.concatenate((hist[self._STEP :], new))
            outs.append(new)
        self._hist = hist
        return np.concatenate(outs).astype(np.float64) / 4294967296.0

    def describe(self) -> dict:
        return {
            "algorithm": "r31",
            "seed": self.seed_record,
            "lags": (R31_LAG_P, R31_LAG_Q),
            "draws": self.draws,
        }


def r31_next(table, index: int):
    """One GFSR step on a 31-word circular table; returns (new_word, uniform).

    ``index`` points at the oldest word x_(n-31); the new word replaces it.
    """
    tab = list(table)
    if len(tab) != R31_LAG_P:
        raise ValueError(f"R31 table must have {R31_LAG_P} words")
    if not any(tab):
        raise ValueError("R31 lag table must not be all zero")
    new = tab[index % R31_LAG_P] ^ tab[(index + R31_LAG_P - R31_LAG_Q) % R31_LAG_P]
    tab[index % R31_LAG_P] = new
    return tab, new / 4294967296.0


def _to_limbs32(value: int, count: int) -> np.ndarray:
    return np.array(
        [(value >> (32 * i)) & 0xFFFFFFFF for i in range(count)], dtype=np.uint64
    )


def _mul64_into_limbs(n_lo, n_hi, b_limbs):
    """(n * b) mod 2^128 with n split into two and b into four 32-bit limbs.

    All inputs are uint64 arrays (or scalars broadcast); returns four limb
    arrays.  Column sums stay below 2^36, far inside uint64.
    """
    prods = {}
    for i, n_part in enumerate((n_lo, n_hi)):
        for j in range(4):
            if i + j > 3:
                continue
            p = n_part * b_limbs[j]
            prods[(i, j)] = (p & _M32, p >> np.uint64(32))
    cols = []
    for k in range(4):
        total = np.zeros_like(n_lo)
        for (i, j), (lo, hi) in prods.items():
            if i + j == k:
                total = total + lo
            if i + j == k - 1:
                total = total + hi
        cols.append(total)
    limbs = []
    carry = np.zeros_like(n_lo)
    for k in range(4):
        tot = cols[k] + carry
        limbs.append(tot & _M32)
        carry = tot >> np.uint64(32)
    return limbs


class NwsEngine(UniformEngine):
    """Nested Weyl sequence Y_n = frac(n * frac(n * alpha)).

    Both fractional parts are taken in 128-bit fixed point (32-bit limb
    arithmetic), which keeps frac(n * alpha) exact long past the point where
    double precision fails (n of order 10^7).  The delivered uniform is the
    top 53 fraction bits of the result.
    """

    algorithm = "nws"
    _BLOCK = 65536

    def __init__(self, offset: int = 0, alpha: Optional[float] = None):
        super().__init__()
        if offset < 0:
            raise ValueError(f"NWS counter offset must be >= 0, got {offset}")
        self.offset = int(offset)
        self._counter = int(offset)
        self._alpha_input = alpha
        if alpha is None:
            self.alpha_bits = NWS_ALPHA_SQRT2_BITS
            self.alpha_label = "sqrt(2)-1"
        else:
            frac = alpha - math.floor(alpha)
            if frac <= 0.0:
                raise ValueError(f"NWS alpha must have a positive fractional part, got {alpha}")
            self.alpha_bits = round(frac * (1 << _NWS_FRAC_BITS))
            self.alpha_label = repr(alpha)
        self._alpha_limbs = _to_limbs32(self.alpha_bits, 4)
        self._warned_wrap = False

    def _produce(self, need: int) -> np.ndarray:
        k = min(max(need, 4096), self._BLOCK)
        start = self._counter + 1
        if start + k > 2**64:
            if not self._warned_wrap:
                warnings.warn("NWS counter wrapped at 2^64", RuntimeWarning)
                self._warned_wrap = True
            ns = np.array([(start + i) % 2**64 for i in range(k)], dtype=np.uint64)
        else:
            ns = np.uint64(start) + np.arange(k, dtype=np.uint64)
        self._counter += k
        n_lo = ns & _M32
        n_hi = ns >> np.uint64(32)
        f = _mul64_into_limbs(n_lo, n_hi, self._alpha_limbs)
        g = _mul64_into_limbs(n_lo, n_hi, f)
        top64 = (g[3] << np.uint64(32)) | g[2]
        return (top64 >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def describe(self) -> dict:
        return {
            "algorithm": "nws",
            "offset": self.offset,
            "alpha": self.alpha_label,
            "draws": self.draws,
        }


def nws_value(n: int, alpha_bits: int = NWS_ALPHA_SQRT2_BITS) -> float:
    """Scalar Y_n = frac(n * frac(n * alpha)) in 128-bit fixed point."""
    mask = (1 << _NWS_FRAC_BITS) - 1
    inner = (n * alpha_bits) & mask
    outer = (n * inner) & mask
    return (outer >> 75) * 2.0**-53


class ExternalStreamEngine(UniformEngine):
    """Adapter mapping little-endian 64-bit words from a binary stream to [0, 1)."""

    algorithm = "external"

    def __init__(self, stream, label: str = "<stream>"):
        super().__init__()
        self._stream = stream
        self.label = label
        self._words_read = 0

    def _produce(self, need: int) -> np.ndarray:
        data = self._stream.read(8 * max(need, 1))
        if len(data) < 8:
            raise StreamExhaustedError(
                f"external stream {self.label!r} exhausted after "
                f"{self._words_read} words"
            )
        words = np.frombuffer(data[: 8 * (len(data) // 8)], dtype="<u8")
        self._words_read += words.size
        # word / 2^64 truncated to the top 53 bits, so the result never
        # rounds up to 1.0.
        return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def describe(self) -> dict:
        return {"algorithm": "external", "source": self.label, "draws": self.draws}


def make_engine(algorithm: str, seed: int = 1, *, alpha: Optional[float] = None,
                stream=None, stream_label: str = "<stream>") -> UniformEngine:
    """Build an engine from an algorithm tag and a seed spec.

    ``ran0`` takes a nonzero 31-bit seed; ``r31`` fills its lag table from 31
    word-rotated RAN0 states of a seed derived as (seed mod (m-2)) + 1;
    ``nws`` treats the seed as a counter offset (first draw uses n = seed+1)
    with optional ``alpha``; ``external`` wraps a binary stream.
    """
    tag = algorithm.lower()
    if tag == "ran0":
        return Ran0Engine(seed)
    if tag == "r31":
        return R31Engine.from_seed(seed)
    if tag == "nws":
        return NwsEngine(offset=seed, alpha=alpha)
    if tag == "external":
        if stream is None:
            raise ConfigurationError("external engine needs a stream")
        return ExternalStreamEngine(stream, label=stream_label)
    raise ConfigurationError(f"unknown rng algorithm {algorithm!r}")


def split(engine: UniformEngine, count: int):
    """Derive ``count`` independent substream engines from a parent engine.

    RAN0 substreams jump the Lehmer state by i*(m-1)//count steps (modular
    exponentiation); R31 substreams reseed the table from well-separated
    derived seeds; NWS substreams offset the counter by i * 2^48.  External
    streams cannot be split.
    """
    if count < 1:
        raise ValueError("substream count must be >= 1")
    if isinstance(engine, Ran0Engine):
        jump = (RAN0_MODULUS - 1) // count
        return [
            Ran0Engine(engine.seed * pow(RAN0_MULTIPLIER, i * jump, RAN0_MODULUS)
                       % RAN0_MODULUS or 1)
            for i in range(count)
        ]
    if isinstance(engine, R31Engine):
        base = engine.seed_record if engine.seed_record is not None else 1
        return [
            R31Engine.from_seed((base + i * 2654435761) % (RAN0_MODULUS - 2) + 1)
            for i in range(count)
        ]
    if isinstance(engine, NwsEngine):
        return [
            NwsEngine(offset=(engine.offset + i * 2**48) % 2**64,
                      alpha=engine._alpha_input)
            for i in range(count)
        ]
    raise ConfigurationError(
        f"cannot derive substreams from {type(engine).__name__}"
    )

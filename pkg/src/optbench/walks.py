"""
Randomization kernels.

Every random number in the package flows through a :class:`RandomSource`.
The source exposes a single flat stream of uniform doubles; Gaussian variates
are derived from it with the Box-Muller transform, so the whole stream is
defined by the uniform generator alone. The exact recipes are documented in
docs/randomness.md.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import ConfigError, DimensionError
from .problem import SearchSpace

__all__ = [
    "RandomSource",
    "ScriptedRandom",
    "StepConfig",
    "uniform_sample",
    "gaussian_step",
    "local_walk",
    "best_walk",
    "levy_step",
    "mantegna_sigma",
]

_MASK64 = (1 << 64) - 1
_TWO_PI = 2.0 * math.pi


class RandomSource:
    """
    Seedable deterministic random stream.

    The uniform stream is PCG64 (numpy's implementation) seeded through
    ``numpy.random.SeedSequence``; ``uniform`` returns consecutive doubles
    in [0, 1) taken from that stream regardless of how requests are batched.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.
    spawn_key : tuple of int, optional
        Path of the stream in the spawn tree; children of the same parent
        with different indices are statistically independent.
    """

    _BLOCK = 1024

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed <= _MASK64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.spawn_key = tuple(int(k) for k in spawn_key)
        seq = np.random.SeedSequence(seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(seq))
        self._buf = np.empty(0)
        self._pos = 0

    def child(self, index: int) -> "RandomSource":
        """Independent child stream; does not consume from this stream."""
        return RandomSource(self.seed, self.spawn_key + (int(index),))

    def _take(self, k: int) -> np.ndarray:
        avail = self._buf.size - self._pos
        if k <= avail:
            out = self._buf[self._pos:self._pos + k]
            self._pos += k
            return out
        head = self._buf[self._pos:]
        need = k - avail
        self._buf = self._gen.random(max(self._BLOCK, need))
        self._pos = need
        return np.concatenate((head, self._buf[:need]))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1); a float when ``size`` is None."""
        if size is None:
            if self._pos < self._buf.size:
                value = self._buf[self._pos]
                self._pos += 1
                return float(value)
            return float(self._take(1)[0])
        if isinstance(size, (int, np.integer)):
            return self._take(int(size)).copy()
        shape = tuple(size)
        return self._take(math.prod(shape)).reshape(shape).copy()

    def normal(self, size=None):
        """
        Standard normal variates by Box-Muller.

        Each pair of uniforms ``(u1, u2)`` yields ``r*cos(t)`` then
        ``r*sin(t)`` with ``r = sqrt(-2 ln(1 - u1))`` and ``t = 2 pi u2``.
        An odd request discards the final sine value.
        """
        shape = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
        k = math.prod(shape)
        pairs = (k + 1) // 2
        u = self._take(2 * pairs)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        t = _TWO_PI * u[1::2]
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(t)
        z[1::2] = r * np.sin(t)
        if size is None:
            return float(z[0])
        return z[:k].reshape(shape)


class ScriptedRandom:
    """
    Random source that replays given values.

    Used to force particular draws (e.g. all Gaussian variates zero). Each
    stream is an iterable of floats; when one runs out, draws fall through
    to ``base`` if given, otherwise ``RuntimeError`` is raised.

    >>> rng = ScriptedRandom(uniforms=[0.0, 1.0])
    >>> rng.uniform(2).tolist()
    [0.0, 1.0]
    """

    def __init__(self, uniforms: Iterable[float] = (), normals: Iterable[float] = (),
                 base: RandomSource | None = None):
        self._uniforms = iter(uniforms)
        self._normals = iter(normals)
        self.base = base

    @classmethod
    def zero_normals(cls, base: RandomSource) -> "ScriptedRandom":
        """Real uniforms from ``base``, every Gaussian draw forced to 0."""
        return cls(normals=itertools.repeat(0.0), base=base)

    def _draw(self, it, fallback, size):
        shape = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
        k = math.prod(shape)
        values = list(itertools.islice(it, k))
        if len(values) < k:
            if self.base is None:
                raise RuntimeError("scripted random stream exhausted")
            values.extend(np.ravel(fallback(k - len(values))).tolist())
        if size is None:
            return float(values[0])
        return np.array(values, dtype=float).reshape(shape)

    def uniform(self, size=None):
        return self._draw(self._uniforms, lambda k: self.base.uniform(k), size)

    def normal(self, size=None):
        return self._draw(self._normals, lambda k: self.base.normal(k), size)


@dataclass(frozen=True, eq=False)
class StepConfig:
    """
    Step scales for the walk kernels.

    ``d`` is the per-dimension step length vector, ``sigma`` the standard
    deviation of the Gaussian multiplier and ``levy_beta`` the Levy tail
    index used by :func:`levy_step`.
    """

    d: np.ndarray
    sigma: float = 1.0
    levy_beta: float = 1.5

    def __post_init__(self):
        d = np.array(self.d, dtype=float).reshape(-1)
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            raise ConfigError("step lengths must be finite and nonnegative")
        if not self.sigma > 0:
            raise ConfigError(f"sigma must be positive, got {self.sigma}")
        if not 1.0 < self.levy_beta <= 2.0:
            raise ConfigError(f"levy_beta must lie in (1, 2], got {self.levy_beta}")
        d.flags.writeable = False
        object.__setattr__(self, "d", d)

    @classmethod
    def for_space(cls, space: SearchSpace, step_ratio: float, **kwargs) -> "StepConfig":
        """Step lengths proportional to the variable ranges."""
        if not step_ratio > 0:
            raise ConfigError(f"step_ratio must be positive, got {step_ratio}")
        return cls(step_ratio * space.width, **kwargs)

    @property
    def dim(self) -> int:
        return self.d.size


def uniform_sample(space: SearchSpace, rng, count: int | None = None) -> np.ndarray:
    """
    ``L + (U - L) * eps`` with ``eps ~ Unif[0, 1]`` independently per dimension.

    With ``count`` the result has shape ``(count, dim)`` and equals ``count``
    successive single calls on the same stream.
    """
    eps = rng.uniform(space.dim if count is None else (count, space.dim))
    x = space.lower + space.width * eps
    # guards the upper bound against rounding in L + (U - L)
    return np.minimum(x, space.upper)


def gaussian_step(config: StepConfig, rng) -> np.ndarray:
    """Step ``w`` with ``w[i] = eps_i * d[i]``, ``eps_i ~ N(0, sigma**2)``."""
    return config.sigma * rng.normal(config.dim) * config.d


def _check(x, config: StepConfig, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (config.dim,):
        raise DimensionError(f"{what} has shape {x.shape}, step config has dimension {config.dim}")
    return x


def local_walk(x_old, s: float, config: StepConfig, rng) -> np.ndarray:
    """Random walk ``x_old + s * w``. No bound handling; callers clip."""
    x_old = _check(x_old, config, "x_old")
    if s < 0:
        raise ConfigError(f"step size s must be nonnegative, got {s}")
    return x_old + s * gaussian_step(config, rng)


def best_walk(g_best, config: StepConfig, rng) -> np.ndarray:
    """Gaussian walk around the global best: ``g_best + w``."""
    g_best = _check(g_best, config, "g_best")
    return g_best + gaussian_step(config, rng)


def mantegna_sigma(beta: float) -> float:
    """Scale of the numerator Gaussian in Mantegna's algorithm."""
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def levy_step(config: StepConfig, rng) -> np.ndarray:
    """
    Heavy-tailed step by Mantegna's algorithm.

    ``step[i] = d[i] * u_i / |v_i| ** (1 / beta)`` with
    ``u ~ N(0, sigma_u**2)`` and ``v ~ N(0, 1)``; ``u`` is drawn first.
    """
    beta = config.levy_beta
    u = mantegna_sigma(beta) * rng.normal(config.dim)
    v = rng.normal(config.dim)
    # v == 0 exactly needs u1 == 0 in Box-Muller; floor it rather than divide by zero
    v = np.maximum(np.abs(v), np.finfo(float).tiny)
    return config.d * u / v ** (1.0 / beta)

"""Parameter types and free-energy evaluators for nested p-spin models.

All energies are per logical qubit.  The nesting level C enters only through
explicit powers of ``nesting`` in the formulas, so it is treated as a
continuous parameter (integer nesting is a special case).  Temperature zero
selects closed-form limits everywhere; beta never appears as a huge float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InputError",
    "DomainError",
    "ModelParams",
    "SectorConfig",
    "FreeEnergySample",
    "DegeneracyTerm",
    "free_energy",
    "free_energy_curve",
    "free_energy_hybrid",
    "free_energy_hybrid_curve",
    "free_energy_with_degeneracy",
    "scale_params",
    "log2cosh",
]

FRACTION_TOL = 1e-12


class InputError(ValueError):
    """Invalid argument (bad shapes, unnormalized fractions, unknown names)."""


class DomainError(ValueError):
    """A formula produced a non-finite value; the message names the culprit."""


def log2cosh(x):
    """Overflow-safe log(2 cosh x); exact for |x| up to the float range."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of the nested p-spin model.

    p          logical interaction order (>= 2)
    q          penalty interaction order (>= 2)
    J          coupling magnitude (> 0), energy units
    coupling   'ferro' or 'antiferro' (sign of the p-body term)
    lam        effective penalty strength lambda (>= 0)
    eta        designated-penalty coupling (0 = pure nested encoding)
    gamma      transverse field (>= 0)
    temperature  T = 1/beta (>= 0); T = 0 uses closed-form limits
    nesting    nesting level C (>= 1, continuous)
    """

    p: int
    q: int
    J: float = 1.0
    coupling: str = "ferro"
    lam: float = 0.0
    eta: float = 0.0
    gamma: float = 0.0
    temperature: float = 0.0
    nesting: float = 1.0

    def __post_init__(self):
        if self.p < 2 or self.p != int(self.p):
            raise InputError(f"p must be an integer >= 2, got {self.p}")
        if self.q < 2 or self.q != int(self.q):
            raise InputError(f"q must be an integer >= 2, got {self.q}")
        if self.coupling not in ("ferro", "antiferro"):
            raise InputError(f"coupling must be 'ferro' or 'antiferro', got {self.coupling!r}")
        if self.J <= 0:
            raise InputError(f"J must be positive, got {self.J}")
        for name in ("lam", "eta", "gamma", "temperature"):
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.nesting < 1:
            raise InputError(f"nesting must be >= 1, got {self.nesting}")

    @property
    def sign(self) -> int:
        return 1 if self.coupling == "ferro" else -1

    @property
    def zero_temperature(self) -> bool:
        return self.temperature == 0.0

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SectorConfig:
    """Partition of the logical qubits into magnetization sectors.

    Each sector is (fraction, w): a fraction of the logical qubits carrying
    per-qubit magnetization w.  A single sector (1, m) is the symmetric case.
    """

    sectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple((float(f), float(w)) for f, w in self.sectors))

    @classmethod
    def symmetric(cls, m: float) -> "SectorConfig":
        return cls(((1.0, m),))

    @classmethod
    def two_sector(cls, k_over_N: float, w1: float, w2: float) -> "SectorConfig":
        return cls(((1.0 - k_over_N, w1), (k_over_N, w2)))

    @classmethod
    def three_sector(cls, k: int, N: int, w1: float, w2: float, w3: float) -> "SectorConfig":
        # Appendix-style finite-N split: one sector is the single flipping spin.
        f1 = (N / 2 - k - 1) / N
        f2 = (N / 2 + k) / N
        return cls(((f1, w1), (f2, w2), (1.0 / N, w3)))

    @property
    def fractions(self) -> np.ndarray:
        return np.array([f for f, _ in self.sectors])

    @property
    def w(self) -> np.ndarray:
        return np.array([w for _, w in self.sectors])

    @property
    def magnetization(self) -> float:
        return float(self.fractions @ self.w)


@dataclass(frozen=True)
class FreeEnergySample:
    config: SectorConfig
    value: float
    value_normalized: float


@dataclass(frozen=True)
class DegeneracyTerm:
    """log d_k = log 2 + log binomial(N, k), computed via log-gamma."""

    N: int
    k: int
    log_degeneracy: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.k <= self.N:
            raise InputError(f"k must satisfy 0 <= k <= N, got k={self.k}, N={self.N}")
        val = math.log(2.0) + log_binomial(self.N, self.k)
        object.__setattr__(self, "log_degeneracy", val)


def log_binomial(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _check_fractions(fracs: np.ndarray):
    if abs(fracs.sum() - 1.0) > FRACTION_TOL:
        raise InputError(f"sector fractions must sum to 1, got {fracs.sum()!r}")


def sector_field(params: ModelParams, m, w):
    """Local field h(w, m) seen by a sector with order parameter w."""
    C = params.nesting
    return (params.sign * params.p * params.J * C ** (params.p - 1) * m ** (params.p - 1)
            + params.q * params.lam * C ** (params.q - 1) * w ** (params.q - 1))


def _free_energy_arrays(params: ModelParams, fracs: np.ndarray, W: np.ndarray):
    """Free energy for sector magnetizations W of shape (n_sectors, ...).

    Vectorized over the trailing axes; the sector axis is axis 0.
    """
    C = params.nesting
    f = fracs.reshape((-1,) + (1,) * (W.ndim - 1))
    m = (f * W).sum(axis=0)
    poly = ((params.p - 1) * params.sign * params.J * C ** params.p * m ** params.p
            + (params.q - 1) * params.lam * C ** params.q * (f * W ** params.q).sum(axis=0))
    h = sector_field(params, m, W)
    E = np.hypot(h, params.gamma)
    if params.zero_temperature:
        quantum = -C * (f * E).sum(axis=0)
    else:
        T = params.temperature
        quantum = -C * T * (f * log2cosh(E / T)).sum(axis=0)
    return poly + quantum


def free_energy(params: ModelParams, config: SectorConfig) -> float:
    """Free energy per logical qubit of a sectored configuration."""
    fracs = config.fractions
    _check_fractions(fracs)
    F = float(_free_energy_arrays(params, fracs, config.w))
    if not math.isfinite(F):
        raise DomainError(f"free energy is not finite at config={config}, params={params}")
    return F


def free_energy_curve(params: ModelParams, m_values) -> np.ndarray:
    """Symmetric free energy F(m) evaluated on an array of magnetizations."""
    m = np.asarray(m_values, dtype=float)
    return _free_energy_arrays(params, np.array([1.0]), m[None, ...])


def _hybrid_quantum_arrays(params: ModelParams, fracs: np.ndarray, W: np.ndarray):
    C = params.nesting
    f = fracs.reshape((-1,) + (1,) * (W.ndim - 1))
    m = (f * W).sum(axis=0)
    h = sector_field(params, m, W)
    vp = np.hypot(h + params.eta, params.gamma)
    vm = np.hypot(h - params.eta, params.gamma)
    if params.zero_temperature:
        term = -C * np.maximum(vp, vm)
    else:
        T = params.temperature
        # log[((2cosh b v+)^C + (2cosh b v-)^C)/2]; the /2 makes eta=0 reduce
        # exactly to the plain free energy.
        a = C * log2cosh(vp / T)
        b = C * log2cosh(vm / T)
        term = -T * (np.logaddexp(a, b) - math.log(2.0))
    return (f * term).sum(axis=0), m


def free_energy_hybrid(params: ModelParams, config: SectorConfig) -> float:
    """Free energy with a designated penalty qubit per logical qubit.

    For eta = 0 this coincides with :func:`free_energy` to machine precision.
    """
    fracs = config.fractions
    _check_fractions(fracs)
    C = params.nesting
    W = config.w
    quantum, m = _hybrid_quantum_arrays(params, fracs, W)
    poly = ((params.p - 1) * params.sign * params.J * C ** params.p * m ** params.p
            + (params.q - 1) * params.lam * C ** params.q * (fracs @ W ** params.q))
    F = float(poly + quantum)
    if not math.isfinite(F):
        raise DomainError(f"hybrid free energy is not finite at config={config}, params={params}")
    return F


def free_energy_hybrid_curve(params: ModelParams, m_values) -> np.ndarray:
    m = np.asarray(m_values, dtype=float)[None, ...]
    fracs = np.array([1.0])
    quantum, mm = _hybrid_quantum_arrays(params, fracs, m)
    C = params.nesting
    poly = ((params.p - 1) * params.sign * params.J * C ** params.p * mm ** params.p
            + (params.q - 1) * params.lam * C ** params.q * mm ** params.q)
    return poly + quantum


def free_energy_with_degeneracy(params: ModelParams, N: int, k: int,
                                w1: float, w2: float) -> float:
    """Two-sector free energy plus the entropy of the k-flip degeneracy.

    At T = 0 the entropy term vanishes (T -> 0 limit), which is the documented
    behavior rather than an error.
    """
    if not 0 <= k <= N:
        raise InputError(f"k must satisfy 0 <= k <= N, got k={k}, N={N}")
    config = SectorConfig(((( N - k) / N, w1), (k / N, w2)))
    F = free_energy(params, config)
    if not params.zero_temperature:
        F -= params.temperature / N * DegeneracyTerm(N, k).log_degeneracy
    return F


_SCALE_CONVENTIONS = ("saddle", "lowT_free_energy", "lowT_partition")


def scale_params(params: ModelParams, target_C: float, convention: str) -> ModelParams:
    """Equivalent parameters of the unnested (C = 1) description.

    Applies the nesting substitution with C = target_C:

    - 'saddle':           beta -> beta C^(p-1), Gamma -> Gamma / C^(p-1),
                          lam -> lam C^(q-p)   (saddle-point solutions match)
    - 'lowT_free_energy': J -> J C^p, lam -> lam C^q, Gamma -> Gamma C,
                          beta fixed           (low-T free-energy values match)
    - 'lowT_partition':   beta -> beta C^p, lam -> lam C^(q-p),
                          Gamma -> Gamma C^(1-p), J fixed  (beta F matches)

    eta is carried along consistently with how the sector field rescales.
    """
    if convention not in _SCALE_CONVENTIONS:
        raise InputError(f"unknown convention {convention!r}; expected one of {_SCALE_CONVENTIONS}")
    if target_C < 1:
        raise InputError(f"target_C must be >= 1, got {target_C}")
    C = float(target_C)
    p, q = params.p, params.q
    T = params.temperature
    if convention == "saddle":
        return params.with_(
            temperature=T / C ** (p - 1),
            gamma=params.gamma / C ** (p - 1),
            lam=params.lam * C ** (q - p),
            eta=params.eta / C ** (p - 1),
            nesting=1.0,
        )
    if convention == "lowT_free_energy":
        return params.with_(
            J=params.J * C ** p,
            lam=params.lam * C ** q,
            gamma=params.gamma * C,
            eta=params.eta * C,
            nesting=1.0,
        )
    return params.with_(
        temperature=T / C ** p,
        lam=params.lam * C ** (q - p),
        gamma=params.gamma * C ** (1 - p),
        eta=params.eta * C ** (1 - p),
        nesting=1.0,
    )


def normalized(params: ModelParams, value: float) -> float:
    """Free energy divided by C^max(p, q)."""
    return value / params.nesting ** max(params.p, params.q)


def sample(params: ModelParams, config: SectorConfig) -> FreeEnergySample:
    F = free_energy(params, config)
    return FreeEnergySample(config=config, value=F, value_normalized=normalized(params, F))

"""Brute-force oracles on explicitly encoded instances.

Builds the physical instance for a logical problem (C physical spins per
logical spin, all-to-all intra-block penalty couplings), enumerates exact
classical spectra by Gray-code iteration with incremental updates, and
diagonalizes the transverse-field Hamiltonian at tiny sizes.  Everything here
is deliberately independent of the mean-field modules so it can serve as
ground truth for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import InputError, ModelParams

__all__ = [
    "EncodedInstance",
    "SpectrumResult",
    "encode",
    "decode_majority",
    "classical_spectrum",
    "quantum_gap",
    "save_instance",
    "load_instance",
]

ENUM_CAP = 24
DIAG_CAP = 14
_NUMBA_THRESHOLD = 16        # spins above which the jitted kernels kick in

try:                          # optional speedup; pure-Python path stays correct
    import numba
except ImportError:           # pragma: no cover
    numba = None

_jitted = {}


def _kernel(fn):
    """Return a jitted version of fn when worthwhile, else fn itself."""
    if numba is None:
        return fn
    if fn.__name__ not in _jitted:
        _jitted[fn.__name__] = numba.njit(fn)
    return _jitted[fn.__name__]


@dataclass(frozen=True)
class EncodedInstance:
    N: int                                   # logical spins
    C: int                                   # physical per logical
    couplings: dict = field(default_factory=dict)   # (a, b) a<b -> J_ab
    fields: dict = field(default_factory=dict)      # a -> scaled field

    @property
    def total_spins(self) -> int:
        return self.N * self.C

    def coupling_matrix(self) -> np.ndarray:
        n = self.total_spins
        J = np.zeros((n, n))
        for (a, b), v in self.couplings.items():
            J[a, b] = J[b, a] = v
        return J

    def field_vector(self) -> np.ndarray:
        h = np.zeros(self.total_spins)
        for a, v in self.fields.items():
            h[a] = v
        return h


@dataclass(frozen=True)
class SpectrumResult:
    energies: tuple            # distinct, nondecreasing (total energies)
    degeneracies: tuple
    gap: float | None = None


def encode(logical_h, logical_J, C: int, gamma_pen: float) -> EncodedInstance:
    """Physical instance: spin (i, c) maps to index i*C + c; inter-logical
    couplings are replicated across all C x C physical pairs, intra-logical
    pairs all carry the penalty gamma_pen, and fields are scaled by C."""
    h = np.asarray(logical_h, dtype=float)
    J = np.asarray(logical_J, dtype=float)
    N = len(h)
    if J.shape != (N, N):
        raise InputError(f"logical_J must be {N}x{N}, got {J.shape}")
    if not np.allclose(J, J.T):
        raise InputError("logical_J must be symmetric")
    if C < 1:
        raise InputError("C must be >= 1")
    if N * C > ENUM_CAP:
        raise InputError(f"N*C = {N * C} exceeds the enumeration cap {ENUM_CAP}")
    couplings = {}
    for i in range(N):
        for c in range(C):
            for cp in range(c + 1, C):
                couplings[(i * C + c, i * C + cp)] = float(gamma_pen)
        for j in range(i + 1, N):
            if J[i, j] != 0.0:
                for c in range(C):
                    for cp in range(C):
                        couplings[(i * C + c, j * C + cp)] = float(J[i, j])
    fields = {i * C + c: float(C * h[i]) for i in range(N) for c in range(C)
              if h[i] != 0.0}
    return EncodedInstance(N=N, C=C, couplings=couplings, fields=fields)


def decode_majority(instance: EncodedInstance, state) -> np.ndarray:
    """Logical state by per-block majority vote; exact ties decode to 0."""
    s = np.asarray(state)
    if s.shape != (instance.total_spins,):
        raise InputError(f"state must have {instance.total_spins} spins")
    blocks = s.reshape(instance.N, instance.C).sum(axis=1)
    return np.sign(blocks).astype(int)


# ---------------------------------------------------------------------------
# Gray-code enumeration kernels (numba-compatible plain loops)
# ---------------------------------------------------------------------------

def _pairwise_energies(Jmat, h):
    n = h.shape[0]
    out = np.empty(1 << n)
    s = np.full(n, -1.0)
    E = 0.0
    for a in range(n):
        E -= h[a] * s[a]
        for b in range(a + 1, n):
            E -= Jmat[a, b] * s[a] * s[b]
    out[0] = E
    for i in range(1, 1 << n):
        b = 0
        ii = i
        while ii & 1 == 0:
            ii >>= 1
            b += 1
        f = h[b]
        for c in range(n):
            if c != b:
                f += Jmat[b, c] * s[c]
        E += 2.0 * s[b] * f
        s[b] = -s[b]
        out[i] = E
    return out


def _pspin_energies(N, C, p, q, sgn, J, lam):
    n = N * C
    out = np.empty(1 << n)
    s = np.full(n, -1)
    block = np.full(N, -C)
    tot = -n
    pen = 0.0
    for i in range(N):
        pen += float(block[i]) ** q
    out[0] = sgn * J * N * (tot / N) ** p - lam * pen
    for i in range(1, 1 << n):
        b = 0
        ii = i
        while ii & 1 == 0:
            ii >>= 1
            b += 1
        il = b // C
        d = -2 * s[b]
        tot += d
        pen -= float(block[il]) ** q
        block[il] += d
        pen += float(block[il]) ** q
        s[b] = -s[b]
        out[i] = sgn * J * N * (tot / N) ** p - lam * pen
    return out


def _distinct(energies: np.ndarray, decimals: int | None):
    if decimals is not None:
        energies = np.round(energies, decimals)
    vals, counts = np.unique(energies, return_counts=True)
    return tuple(float(v) for v in vals), tuple(int(c) for c in counts)


def classical_spectrum(instance: EncodedInstance, hamiltonian_form: str,
                       params: ModelParams | None = None,
                       decimals: int | None = None) -> SpectrumResult:
    """Exact classical (zero transverse field) spectrum by full enumeration.

    hamiltonian_form:
      'pairwise'        -- raw instance couplings: H = -sum J_ab s_a s_b - sum h_a s_a
      'pspin_ferro'     -- intensive mean-field form -J*N*((1/N) sum s)^p - lam*sum_blocks (block sum)^q
      'pspin_antiferro' -- same with +J*N*(...)^p
    The p-spin forms take (p, q, J, lam) from ``params``.  Energies are total
    (extensive); the p-spin forms are exact (integer trackers, no drift), the
    pairwise form may optionally be rounded to ``decimals`` for grouping.
    """
    n = instance.total_spins
    if n > ENUM_CAP:
        raise InputError(f"{n} spins exceeds the enumeration cap {ENUM_CAP}")
    use_jit = numba is not None and n > _NUMBA_THRESHOLD
    if hamiltonian_form == "pairwise":
        fn = _kernel(_pairwise_energies) if use_jit else _pairwise_energies
        energies = fn(instance.coupling_matrix(), instance.field_vector())
        if decimals is None:
            decimals = 10
    elif hamiltonian_form in ("pspin_ferro", "pspin_antiferro"):
        if params is None:
            raise InputError("p-spin forms require params for (p, q, J, lam)")
        sgn = -1.0 if hamiltonian_form == "pspin_ferro" else 1.0
        fn = _kernel(_pspin_energies) if use_jit else _pspin_energies
        energies = fn(instance.N, instance.C, params.p, params.q, sgn,
                      params.J, params.lam)
    else:
        raise InputError(f"unknown hamiltonian_form {hamiltonian_form!r}")
    vals, counts = _distinct(energies, decimals)
    return SpectrumResult(energies=vals, degeneracies=counts)


# ---------------------------------------------------------------------------
# Exact transverse-field gap at tiny sizes
# ---------------------------------------------------------------------------

def _classical_diagonal(instance: EncodedInstance) -> np.ndarray:
    """Classical energies of all 2^n states, vectorized (bit 0 = spin 0;
    bit set means spin +1)."""
    n = instance.total_spins
    states = np.arange(1 << n, dtype=np.int64)
    s = ((states[:, None] >> np.arange(n)) & 1) * 2.0 - 1.0
    J = instance.coupling_matrix()
    h = instance.field_vector()
    return -0.5 * np.einsum("ia,ab,ib->i", s, J, s) - s @ h


def quantum_gap(instance: EncodedInstance, gamma: float) -> float:
    """First excitation gap of -gamma * sum sigma^x + H_Z, exactly.

    Dense diagonalization up to 12 spins, sparse Lanczos for 13-14.
    """
    n = instance.total_spins
    if n > DIAG_CAP:
        raise InputError(f"{n} spins exceeds the diagonalization cap {DIAG_CAP}")
    dim = 1 << n
    diag = _classical_diagonal(instance)
    states = np.arange(dim, dtype=np.int64)
    rows = np.concatenate([states] * n)
    cols = np.concatenate([states ^ (1 << b) for b in range(n)])
    data = np.full(n * dim, -float(gamma))
    H = sp.coo_matrix((data, (rows, cols)), shape=(dim, dim)).tocsr()
    H += sp.diags(diag)
    if n <= 12:
        evals = np.linalg.eigvalsh(H.toarray())
        return float(evals[1] - evals[0])
    evals = spla.eigsh(H, k=2, which="SA", return_eigenvectors=False)
    evals = np.sort(evals)
    return float(evals[1] - evals[0])


# ---------------------------------------------------------------------------
# Plain-text instance import/export
# ---------------------------------------------------------------------------

def save_instance(instance: EncodedInstance, path: str) -> None:
    """Triplet-list text format: header 'N C', then 'i j value' rows with
    17-significant-digit floats; i = j rows carry fields."""
    lines = [f"{instance.N} {instance.C}"]
    for a in sorted(instance.fields):
        lines.append(f"{a} {a} {instance.fields[a]:.17g}")
    for (a, b) in sorted(instance.couplings):
        lines.append(f"{a} {b} {instance.couplings[(a, b)]:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_instance(path: str) -> EncodedInstance:
    with open(path) as fh:
        tokens = [ln.split() for ln in fh if ln.strip()]
    if not tokens or len(tokens[0]) != 2:
        raise InputError(f"{path}: missing 'N C' header")
    N, C = int(tokens[0][0]), int(tokens[0][1])
    couplings, fields = {}, {}
    for row in tokens[1:]:
        if len(row) != 3:
            raise InputError(f"{path}: malformed row {row!r}")
        a, b, v = int(row[0]), int(row[1]), float(row[2])
        if a == b:
            fields[a] = v
        else:
            couplings[(min(a, b), max(a, b))] = v
    return EncodedInstance(N=N, C=C, couplings=couplings, fields=fields)

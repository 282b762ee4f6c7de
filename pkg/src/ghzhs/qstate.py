"""Dense pure states, density matrices and single-party unitaries.

Basis convention: party ``a`` is the most significant bit, so for three
parties the computational index of ``|x_a x_b x_c>`` is ``4*x_a + 2*x_b + x_c``.
Bit 0 is the unprimed beam (``a``, ``b``, ``c``) and bit 1 the primed one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import AddressingError, ParameterError, ValidationError

MAX_PARTIES = 6
PARTY_LABELS = "abcdef"

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-12


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator used for every random draw in the package.

    The bit generator is Philox-4x64 (counter based) seeded directly with the
    user integer reduced to 64 bits.
    """
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def party_index(party: int | str) -> int:
    """Accept ``0..5`` or a letter ``'a'..'f'``."""
    if isinstance(party, str):
        if len(party) != 1 or party.lower() not in PARTY_LABELS:
            raise AddressingError(f"unknown party label {party!r}")
        return PARTY_LABELS.index(party.lower())
    idx = int(party)
    if not 0 <= idx < MAX_PARTIES:
        raise AddressingError(f"party index {idx} out of range")
    return idx


def _n_parties_for_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ValidationError("dimension", f"dimension {dim} is not a power of two >= 2")
    if n > MAX_PARTIES:
        raise ValidationError("dimension", f"{n} parties exceeds the supported maximum {MAX_PARTIES}")
    return n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        _n_parties_for_dim(amps.size)
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) >= NORM_TOL:
            raise ValidationError("normalization", f"sum of |amplitude|^2 is {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_parties(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, bits: Sequence[int]) -> "PureState":
        """Computational basis state, e.g. ``PureState.basis((0, 0, 1))``."""
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int("".join(str(int(b)) for b in bits), 2)] = 1.0
        return cls(amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite ``2^n x 2^n`` matrix.

    Pass ``check_psd=False`` to skip the eigenvalue test; Hermiticity and the
    trace are always enforced.
    """

    entries: np.ndarray
    check_psd: bool = field(default=True, repr=False)

    def __post_init__(self):
        rho = _frozen(self.entries)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValidationError("shape", f"expected a square matrix, got shape {rho.shape}")
        _n_parties_for_dim(rho.shape[0])
        if not np.all(np.isfinite(rho)):
            raise ValidationError("finite", "matrix contains non-finite entries")
        herm = np.abs(rho - rho.conj().T)
        if herm.max() >= HERMITIAN_TOL:
            i, j = np.unravel_index(np.argmax(herm), herm.shape)
            raise ValidationError(
                "hermitian", f"entry ({i},{j}) differs from conj of ({j},{i}) by {herm[i, j]:.3e}"
            )
        tr = np.trace(rho)
        if abs(tr - 1.0) >= TRACE_TOL:
            raise ValidationError("unit-trace", f"trace is {tr.real:.17g}, expected 1")
        if self.check_psd:
            lo = float(np.linalg.eigvalsh(rho)[0])
            if lo < -PSD_TOL:
                raise ValidationError("positive-semidefinite", f"minimum eigenvalue {lo:.3e}")
        object.__setattr__(self, "entries", rho)

    @property
    def n_parties(self) -> int:
        return self.entries.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.real(np.vdot(self.entries, self.entries)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A ``2 x 2`` unitary acting on one party (``0`` = a, ``1`` = b, ...)."""

    party: int
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "party", party_index(self.party))
        m = _frozen(self.matrix)
        if m.shape != (2, 2):
            raise ValidationError("shape", f"local unitary must be 2x2, got {m.shape}")
        check_unitary(m)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, party: int | str) -> "LocalUnitary":
        return cls(party, np.eye(2))

    def dagger(self) -> "LocalUnitary":
        return LocalUnitary(self.party, self.matrix.conj().T)


def check_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> None:
    dev = np.abs(m @ m.conj().T - np.eye(m.shape[0])).max()
    if dev >= tol:
        raise ValidationError("unitary", f"max |U U^dagger - I| = {dev:.3e}")


def ghz_pure() -> PureState:
    """(|000> + |111>)/sqrt(2)."""
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return PureState(amps)


def ghz_density() -> DensityMatrix:
    rho = np.zeros((8, 8), dtype=complex)
    rho[0, 0] = rho[0, 7] = rho[7, 0] = rho[7, 7] = 0.5
    return DensityMatrix(rho)


def maximally_mixed(n_parties: int = 3) -> DensityMatrix:
    dim = 2**n_parties
    return DensityMatrix(np.eye(dim) / dim)


def pure_to_density(state: PureState) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()))


def _as_tensor(rho: np.ndarray, n: int) -> np.ndarray:
    return rho.reshape((2,) * (2 * n))


def apply_local_unitary(rho: DensityMatrix, u: LocalUnitary) -> DensityMatrix:
    """Return ``(I x .. x U x .. x I) rho (..)^dagger`` with ``U`` on ``u.party``."""
    n = rho.n_parties
    k = u.party
    if k >= n:
        raise AddressingError(f"party {k} does not exist in a {n}-party state")
    t = _as_tensor(rho.entries, n)
    # row index of party k is axis k, column index is axis n + k
    t = np.moveaxis(np.tensordot(u.matrix, t, axes=([1], [k])), 0, k)
    t = np.moveaxis(np.tensordot(t, u.matrix.conj().T, axes=([n + k], [0])), -1, n + k)
    out = t.reshape(rho.dim, rho.dim)
    return DensityMatrix(0.5 * (out + out.conj().T), check_psd=rho.check_psd)


def partial_trace(rho: DensityMatrix, keep: Iterable[int | str]) -> DensityMatrix:
    """Reduced state on the parties in ``keep`` (strictly increasing)."""
    n = rho.n_parties
    keep = [party_index(p) for p in keep]
    if not keep:
        raise AddressingError("keep must name at least one party")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise AddressingError(f"keep must be strictly increasing, got {keep}")
    if keep[-1] >= n:
        raise AddressingError(f"party {keep[-1]} does not exist in a {n}-party state")
    traced = [k for k in range(n) if k not in keep]
    row = list(range(n))
    col = [k if k in traced else n + k for k in range(n)]
    out_idx = keep + [n + k for k in keep]
    reduced = np.einsum(_as_tensor(rho.entries, n), row + col, out_idx)
    d = 2 ** len(keep)
    return DensityMatrix(reduced.reshape(d, d), check_psd=rho.check_psd)


def random_density(seed: int, n_parties: int, rank: int) -> DensityMatrix:
    """Normalised ``G G^dagger`` with ``G`` a seeded complex Gaussian ``2^n x rank`` matrix."""
    if not 1 <= n_parties <= MAX_PARTIES:
        raise ParameterError(f"n_parties must be in 1..{MAX_PARTIES}, got {n_parties}")
    dim = 2**n_parties
    if not 1 <= rank <= dim:
        raise ParameterError(f"rank must be in 1..{dim}, got {rank}")
    rng = make_rng(seed)
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / np.sqrt(2)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


def haar_unitary(seed: int | np.random.Generator, dim: int = 2) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's diagonal divided out."""
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))

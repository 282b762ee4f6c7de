"""Hilbert-Schmidt (Pauli basis) coefficients of multi-qubit density matrices.

A state on ``n`` qubits is written as

    rho = 2^-n * sum_s c_s * M_s

where ``s`` runs over the ``4^n`` Pauli strings, ``M_s`` is the Kronecker
product of the per-party factors (party ``a`` leftmost) and
``c_s = Tr[rho M_s]`` is a plain expectation value in ``[-1, 1]``.  For three
parties the non-trivial coefficients split into named blocks:

=========  ======================  ==========================
block      strings                 shape
=========  ======================  ==========================
``r``      ``sigma_i x I x I``     3
``s``      ``I x sigma_j x I``     3
``p``      ``I x I x sigma_k``     3
``q_ab``   ``sigma_i x sigma_j x I``   3 x 3
``o_ac``   ``sigma_i x I x sigma_k``   3 x 3
``t_bc``   ``I x sigma_j x sigma_k``   3 x 3
``R``      ``sigma_i x sigma_j x sigma_k`` 3 x 3 x 3
=========  ======================  ==========================

The a-b block is called ``q_ab`` to keep it apart from the single-party
vector ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from .errors import AddressingError, NormalizationError, ValidationError
from .qstate import (
    MAX_PARTIES,
    PARTY_LABELS,
    TRACE_TOL,
    DensityMatrix,
    LocalUnitary,
    check_unitary,
)

PAULI_LETTERS = "IXYZ"

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])
PAULIS.setflags(write=False)

IMAG_TOL = 1e-12
ORTHOGONAL_TOL = 1e-12


class PauliString(tuple):
    """Per-party labels ``0=I, 1=X, 2=Y, 3=Z`` in party order."""

    def __new__(cls, labels: Sequence[int] | str):
        if isinstance(labels, str):
            try:
                labels = [PAULI_LETTERS.index(ch) for ch in labels.upper()]
            except ValueError:
                raise ValidationError("pauli-label", f"invalid Pauli string {labels!r}") from None
        labels = tuple(int(x) for x in labels)
        if not labels or len(labels) > MAX_PARTIES:
            raise ValidationError("pauli-label", f"Pauli string length {len(labels)} unsupported")
        if any(not 0 <= x <= 3 for x in labels):
            raise ValidationError("pauli-label", f"labels must be in 0..3, got {labels}")
        return super().__new__(cls, labels)

    @property
    def weight(self) -> int:
        return sum(1 for x in self if x)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, x in enumerate(self) if x)

    def label(self) -> str:
        return "".join(PAULI_LETTERS[x] for x in self)

    def __repr__(self):
        return f"PauliString({self.label()!r})"


def all_pauli_strings(n_parties: int) -> Iterator[PauliString]:
    """All ``4^n`` strings in lexicographic I<X<Y<Z order."""
    for labels in product(range(4), repeat=n_parties):
        yield PauliString(labels)


def pauli_string_matrix(s: PauliString | Sequence[int] | str) -> np.ndarray:
    s = PauliString(s)
    return _kron_cached(tuple(s)).copy()


@lru_cache(maxsize=None)
def _kron_cached(labels: tuple[int, ...]) -> np.ndarray:
    m = PAULIS[labels[0]]
    for x in labels[1:]:
        m = np.kron(m, PAULIS[x])
    m.setflags(write=False)
    return m


# subset of parties -> block name used in reports
_BLOCK_NAMES_3 = {
    (): "unit",
    (0,): "r",
    (1,): "s",
    (2,): "p",
    (0, 1): "q_ab",
    (0, 2): "o_ac",
    (1, 2): "t_bc",
    (0, 1, 2): "R",
}


def block_name(support: tuple[int, ...], n_parties: int) -> str:
    if n_parties == 3:
        return _BLOCK_NAMES_3[tuple(support)]
    if not support:
        return "unit"
    return "".join(PARTY_LABELS[k] for k in support)


def block_supports(n_parties: int) -> list[tuple[int, ...]]:
    """Every subset of parties, by increasing size."""
    return [c for w in range(n_parties + 1) for c in combinations(range(n_parties), w)]


def block_index(support: tuple[int, ...], n_parties: int) -> tuple:
    """Index into the ``(4,)*n`` coefficient array selecting one block."""
    return tuple(slice(1, 4) if k in support else 0 for k in range(n_parties))


@dataclass(frozen=True, eq=False)
class CoefficientTensor:
    """Dense real array of shape ``(4,) * n_parties`` indexed by Pauli labels."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        n = v.ndim
        if not 1 <= n <= MAX_PARTIES or v.shape != (4,) * n:
            raise ValidationError("shape", f"coefficient array must have shape (4,)*n, got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_parties(self) -> int:
        return self.values.ndim

    def __getitem__(self, s: PauliString | Sequence[int] | str) -> float:
        return float(self.values[tuple(PauliString(s))])

    def items(self) -> Iterator[tuple[PauliString, float]]:
        for s in all_pauli_strings(self.n_parties):
            yield s, float(self.values[tuple(s)])

    def block(self, support: tuple[int, ...]) -> np.ndarray:
        return self.values[block_index(tuple(support), self.n_parties)]

    def blocks(self) -> dict[str, np.ndarray]:
        n = self.n_parties
        return {block_name(sup, n): self.block(sup) for sup in block_supports(n)}

    def purity_sum(self) -> float:
        return float(np.sum(self.values**2))

    @classmethod
    def from_mapping(cls, n_parties: int, coeffs: dict) -> "CoefficientTensor":
        """Build from ``{string: value}``; missing strings are zero."""
        v = np.zeros((4,) * n_parties)
        for s, c in coeffs.items():
            s = PauliString(s)
            if len(s) != n_parties:
                raise ValidationError("pauli-label", f"{s.label()} has wrong length for {n_parties} parties")
            v[tuple(s)] = c
        return cls(v)

    def _view(self, support):
        if self.n_parties != 3:
            raise AttributeError("named blocks exist only for three parties")
        return self.block(support)

    unit = property(lambda self: float(self.values[(0,) * self.n_parties]))
    r = property(lambda self: self._view((0,)))
    s = property(lambda self: self._view((1,)))
    p = property(lambda self: self._view((2,)))
    q_ab = property(lambda self: self._view((0, 1)))
    o_ac = property(lambda self: self._view((0, 2)))
    t_bc = property(lambda self: self._view((1, 2)))
    R = property(lambda self: self._view((0, 1, 2)))


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (3, 3):
            raise ValidationError("shape", f"rotation must be 3x3, got {m.shape}")
        dev = np.abs(m @ m.T - np.eye(3)).max()
        if dev >= ORTHOGONAL_TOL:
            raise ValidationError("orthogonal", f"max |O O^T - I| = {dev:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3))

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def decompose(rho: DensityMatrix) -> CoefficientTensor:
    """Return all ``c_s = Tr[rho M_s]``."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    n = rho.n_parties
    t = rho.entries.reshape((2,) * (2 * n))
    # contract the (row, col) pair of each party with the Pauli stack
    for k in range(n):
        # after k steps the layout is (pauli_0..pauli_{k-1}, rows_k.., cols_k..)
        rows = n - k
        t = np.tensordot(PAULIS, t, axes=([2, 1], [k, k + rows]))
        t = np.moveaxis(t, 0, k)
    if np.abs(t.imag).max() >= IMAG_TOL:
        raise ValidationError("hermitian", "Pauli expectation values have non-negligible imaginary parts")
    c = t.real
    # the input already passed the unit-trace check
    c[(0,) * n] = 1.0
    return CoefficientTensor(c)


def reconstruct(coeffs: CoefficientTensor, check_psd: bool = False) -> DensityMatrix:
    """Inverse of :func:`decompose`.

    The result is Hermitian with unit trace by construction; positivity is
    only checked when ``check_psd`` is set.
    """
    unit = coeffs.unit
    if not abs(unit - 1.0) < TRACE_TOL:
        raise NormalizationError(f"all-identity coefficient is {unit!r}, expected 1")
    n = coeffs.n_parties
    t = coeffs.values.astype(complex)
    for _ in range(n):
        # consume the leading Pauli axis, append its (row, col) pair
        t = np.tensordot(t, PAULIS, axes=([0], [0]))
    # axes now (r_0, c_0, r_1, c_1, ...)
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    dim = 2**n
    rho = t.transpose(order).reshape(dim, dim) / dim
    return DensityMatrix(0.5 * (rho + rho.conj().T), check_psd=check_psd)


def su2_to_so3(u: np.ndarray) -> RotationMatrix:
    """Adjoint rotation of a 2x2 unitary.

    Column ``j`` holds the image of ``sigma_j``:
    ``U sigma_j U^dagger = sum_i M[i, j] sigma_i``.  With this convention the
    map is a homomorphism, ``M(UV) = M(U) M(V)``, and a Bloch vector
    transforms as ``v -> M v`` under ``rho -> U rho U^dagger``.  The global
    phase of ``U`` cancels.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValidationError("shape", f"expected a 2x2 matrix, got {u.shape}")
    check_unitary(u)
    conj = np.einsum("ab,jbc,dc->jad", u, PAULIS[1:], u.conj())
    m = 0.5 * np.einsum("ida,jad->ij", PAULIS[1:], conj).real
    return RotationMatrix(m)


def rotate_frame(
    coeffs: CoefficientTensor, rotations: Sequence[RotationMatrix | np.ndarray]
) -> CoefficientTensor:
    """Rotate each party's Pauli axes independently.

    Every non-identity index on party ``k`` is contracted with
    ``rotations[k]`` (``v' = O v``, ``T' = O_x T O_y^T``, ...). Slices with the
    identity on party ``k`` are copied untouched.
    """
    n = coeffs.n_parties
    if len(rotations) != n:
        raise ValidationError("rotation-count", f"expected {n} rotations, got {len(rotations)}")
    mats = [o if isinstance(o, RotationMatrix) else RotationMatrix(o) for o in rotations]
    v = np.array(coeffs.values)
    for k, o in enumerate(mats):
        if np.array_equal(o.matrix, np.eye(3)):
            continue
        sel = (slice(None),) * k + (slice(1, 4),)
        v[sel] = np.moveaxis(np.tensordot(o.matrix, v[sel], axes=([1], [k])), 0, k)
    return CoefficientTensor(v)


def transform_under_local_unitary(coeffs: CoefficientTensor, u: LocalUnitary) -> CoefficientTensor:
    """Coefficients of ``U rho U^dagger`` computed without leaving coefficient space.

    ``Tr[U rho U^dagger sigma_i] = Tr[rho U^dagger sigma_i U]``, and
    ``U^dagger sigma_i U = sum_j M[i, j] sigma_j`` with ``M = su2_to_so3(U)``,
    so only the acted party's axes rotate, by ``M``.
    """
    n = coeffs.n_parties
    if u.party >= n:
        raise AddressingError(f"party {u.party} does not exist in a {n}-party state")
    rots = [RotationMatrix.identity() for _ in range(n)]
    rots[u.party] = su2_to_so3(u.matrix)
    return rotate_frame(coeffs, rots)

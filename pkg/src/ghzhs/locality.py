"""Checks that a unitary on one party leaves every block not involving it alone.

A block is "unchanged-class" when all its Pauli strings carry the identity on
the acted party.  The classification is structural: blocks that touch the
acted party are listed as changed even when a particular unitary happens not
to move them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .hsdecomp import block_index, block_name, block_supports, decompose
from .qstate import (
    DensityMatrix,
    LocalUnitary,
    apply_local_unitary,
    haar_unitary,
    make_rng,
    partial_trace,
)


@dataclass(frozen=True)
class LocalityReport:
    acted_party: int
    unchanged_blocks: tuple[tuple[str, float], ...]
    changed_blocks: tuple[tuple[str, float], ...]
    marginal_deviation: float
    tol: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def max_unchanged_deviation(self) -> float:
        return max(d for _, d in self.unchanged_blocks)

    @property
    def max_changed_deviation(self) -> float:
        return max((d for _, d in self.changed_blocks), default=0.0)


def verify_locality(rho: DensityMatrix, u: LocalUnitary, tol: float = 1e-12) -> LocalityReport:
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    n = rho.n_parties
    after = apply_local_unitary(rho, u)  # raises on bad party
    before_c = decompose(rho).values
    after_c = decompose(after).values

    unchanged, changed = [], []
    for sup in block_supports(n):
        idx = block_index(sup, n)
        dev = float(np.max(np.abs(after_c[idx] - before_c[idx])))
        (changed if u.party in sup else unchanged).append((block_name(sup, n), dev))

    keep = [k for k in range(n) if k != u.party]
    if keep:
        marg = float(np.abs(partial_trace(after, keep).entries - partial_trace(rho, keep).entries).max())
    else:
        marg = 0.0
    passed = all(d < tol for _, d in unchanged) and marg < tol
    return LocalityReport(u.party, tuple(unchanged), tuple(changed), marg, tol, passed)


@dataclass(frozen=True)
class SweepReport:
    party: int
    n_trials: int
    seed: int
    tol: float
    worst_unchanged: float
    worst_changed: float
    worst_marginal: float
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def trial_unitary(seed: int, trial: int) -> np.ndarray:
    """Haar unitary for one trial; trial ``i`` uses seed ``seed + i``."""
    return haar_unitary(make_rng(seed + trial))


def locality_sweep(
    rho: DensityMatrix,
    party: int | str,
    n_trials: int,
    seed: int = 0,
    tol: float = 1e-12,
    identity: bool = False,
) -> SweepReport:
    """Run :func:`verify_locality` over seeded Haar-random unitaries on one party.

    With ``identity=True`` every trial uses the identity instead.
    """
    if n_trials < 1:
        raise ParameterError(f"n_trials must be >= 1, got {n_trials}")
    wu = wc = wm = 0.0
    failures = 0
    k = None
    for i in range(n_trials):
        m = np.eye(2) if identity else trial_unitary(seed, i)
        u = LocalUnitary(party, m)
        k = u.party
        rep = verify_locality(rho, u, tol)
        wu = max(wu, rep.max_unchanged_deviation)
        wc = max(wc, rep.max_changed_deviation)
        wm = max(wm, rep.marginal_deviation)
        failures += not rep.passed
    return SweepReport(k, n_trials, seed, tol, wu, wc, wm, failures)

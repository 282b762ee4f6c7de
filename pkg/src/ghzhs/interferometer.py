"""Three-particle, six-beam GHZ interferometer.

Each particle leaves the source through an unprimed or a primed aperture,
the primed beam picks up a phase ``phi_k``, and a 50-50 beam splitter sends
it to detector ``d`` (unprimed) or ``d'`` (primed).  Outcomes are indexed
``4*x_a + 2*x_b + x_c`` with ``x = 1`` for the primed detector.

Detector values: unprimed ``+1``, primed ``-1``.  With this convention the
three-party correlation is ``sin(phi1 + phi2 + phi3)``; flipping one arm's
convention flips the sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ParameterError
from .qstate import make_rng

OUTCOME_LABELS = tuple(
    "".join(name + ("'" if x else "") for name, x in zip("def", bits)) for bits in product((0, 1), repeat=3)
)
# product of the three detector values for each outcome index
OUTCOME_SIGNS = np.array([(-1) ** sum(bits) for bits in product((0, 1), repeat=3)], dtype=float)
OUTCOME_SIGNS.setflags(write=False)

PROB_TOL = 1e-12


@dataclass(frozen=True)
class PhaseSettings:
    phi1: float
    phi2: float
    phi3: float

    def __post_init__(self):
        for name in ("phi1", "phi2", "phi3"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ParameterError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.phi1, self.phi2, self.phi3)

    @property
    def total(self) -> float:
        return self.phi1 + self.phi2 + self.phi3


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.shape != (8,):
            raise ParameterError(f"expected 8 probabilities, got shape {p.shape}")
        if p.min() < -PROB_TOL or p.max() > 1 + PROB_TOL:
            raise ParameterError("probability outside [0, 1]")
        if abs(p.sum() - 1.0) >= PROB_TOL:
            raise ParameterError(f"probabilities sum to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def __getitem__(self, outcome: int | str) -> float:
        if isinstance(outcome, str):
            outcome = OUTCOME_LABELS.index(outcome)
        return float(self.probabilities[outcome])

    def correlation(self) -> float:
        return float(self.probabilities @ OUTCOME_SIGNS)

    def arm_marginal(self, arm: int) -> tuple[float, float]:
        """``(P(unprimed), P(primed))`` for one arm."""
        p = self.probabilities.reshape(2, 2, 2)
        m = p.sum(axis=tuple(k for k in range(3) if k != arm))
        return float(m[0]), float(m[1])


def beam_splitter_unitary(phi: float) -> np.ndarray:
    """Phase shift on the primed input followed by the 50-50 splitter.

    Maps the amplitudes ``(a, a')`` to ``(d, d')``.
    """
    e = np.exp(-1j * phi)
    return np.array([[1, -1j * e], [-1j, e]]) / np.sqrt(2)


def arm_evolution(phi: float) -> dict[int, dict[int, complex]]:
    """Ket map of one arm: input beam (0 unprimed, 1 primed) -> detector amplitudes.

    ``|a>  -> (|d> + i|d'>)/sqrt(2)``
    ``|a'> -> e^{i phi} (|d'> + i|d>)/sqrt(2)``
    """
    h = 1 / math.sqrt(2)
    ph = complex(math.cos(phi), math.sin(phi))
    return {
        0: {0: h, 1: 1j * h},
        1: {0: 1j * h * ph, 1: h * ph},
    }


def evolve_ghz(settings: PhaseSettings) -> OutcomeDistribution:
    """Detector-triple probabilities from the explicit 8-term expansion.

    The source term ``|abc> + |a'b'c'>`` is pushed through the three arm maps
    ket by ket, amplitudes are accumulated per detector triple and squared.
    """
    arms = [arm_evolution(phi) for phi in settings.as_tuple()]
    amps = [0j] * 8
    for beams in ((0, 0, 0), (1, 1, 1)):
        for det in product((0, 1), repeat=3):
            term = 1 / math.sqrt(2)
            for arm, beam, x in zip(arms, beams, det):
                term *= arm[beam][x]
            amps[4 * det[0] + 2 * det[1] + det[2]] += term
    probs = np.array([abs(a) ** 2 for a in amps])
    return OutcomeDistribution(probs)


def correlation(settings: PhaseSettings) -> float:
    """Expectation of the product of the three detector values."""
    return evolve_ghz(settings).correlation()


def correlation_closed_form(settings: PhaseSettings) -> float:
    return math.sin(settings.total)


CANONICAL_SETTINGS = (
    PhaseSettings(math.pi / 2, 0.0, 0.0),
    PhaseSettings(0.0, math.pi / 2, 0.0),
    PhaseSettings(0.0, 0.0, math.pi / 2),
    PhaseSettings(math.pi / 2, math.pi / 2, math.pi / 2),
)


@dataclass(frozen=True)
class GHSZReport:
    settings: tuple[PhaseSettings, ...]
    correlations: tuple[float, ...]
    product: float
    local_realist_fourth: int
    max_constraints_satisfied: int
    contradiction: bool

    @property
    def flag(self) -> str:
        return "CONTRADICTION" if self.contradiction else "CONSISTENT"


def _hidden_variable_assignments():
    # v[k][m]: value of particle k at phase 0 (m=0) or pi/2 (m=1)
    for bits in product((1, -1), repeat=6):
        yield (bits[0:2], bits[2:4], bits[4:6])


def _predicted(v, setting_bits) -> int:
    out = 1
    for k, m in enumerate(setting_bits):
        out *= v[k][m]
    return out


def ghsz_contradiction_report() -> GHSZReport:
    """Quantum correlations at the four canonical settings against every local assignment.

    The local-realist value of the fourth setting is found by enumerating all
    2^6 deterministic assignments that reproduce the first three (rounded)
    quantum correlations.
    """
    values = tuple(correlation(s) for s in CANONICAL_SETTINGS)
    targets = [int(round(e)) for e in values]
    setting_bits = [tuple(1 if phi else 0 for phi in s.as_tuple()) for s in CANONICAL_SETTINGS]

    fourth = set()
    best = 0
    for v in _hidden_variable_assignments():
        preds = [_predicted(v, sb) for sb in setting_bits]
        best = max(best, sum(p == t for p, t in zip(preds, targets)))
        if preds[:3] == targets[:3]:
            fourth.add(preds[3])
    if len(fourth) != 1:
        raise RuntimeError(f"first three constraints do not fix the fourth value: {fourth}")
    lr = fourth.pop()
    return GHSZReport(
        settings=CANONICAL_SETTINGS,
        correlations=values,
        product=float(np.prod(values)),
        local_realist_fourth=lr,
        max_constraints_satisfied=best,
        contradiction=(np.sign(values[3]) != lr),
    )


def sample_outcomes(settings: PhaseSettings, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` detector triples by inverse CDF; returns the 8 counts."""
    count = int(count)
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    p = np.clip(evolve_ghz(settings).probabilities, 0.0, None)
    cdf = np.cumsum(p / p.sum())
    cdf[-1] = 1.0
    u = make_rng(seed).random(count)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=8)


def empirical_correlation(counts: np.ndarray) -> float:
    counts = np.asarray(counts)
    return float(counts @ OUTCOME_SIGNS / counts.sum())

"""Check reports and seeded, counter-based sampling streams."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

PASS = "PASS"
FAIL = "FAIL"
APPROX = "APPROX"
INCONCLUSIVE = "INCONCLUSIVE"
VERDICTS = (PASS, FAIL, APPROX, INCONCLUSIVE)


def _label_key(labels: tuple[str, ...]) -> int:
    digest = hashlib.sha256("/".join(labels).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def stream_rng(seed: int, *labels: str) -> np.random.Generator:
    """Philox generator keyed by ``seed`` and a tuple of stream labels.

    Streams with distinct labels are independent, and a given
    ``(seed, labels)`` always reproduces the same draws regardless of what
    other streams were consumed before.
    """
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), _label_key(labels)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Sampler:
    seed: int = 42
    samples: int = 200
    stream: tuple[str, ...] = ()

    def rng(self, *labels: str) -> np.random.Generator:
        return stream_rng(self.seed, *self.stream, *labels)

    def child(self, *labels: str) -> "Sampler":
        return replace(self, stream=self.stream + tuple(labels))

    def with_samples(self, n: int) -> "Sampler":
        return replace(self, samples=int(n))


def classify(residual: float, pass_tol: float, fail_tol: float | None = None) -> str:
    """PASS below ``pass_tol``; FAIL above ``fail_tol`` (or anything not passing
    when no fail threshold is given); INCONCLUSIVE in between."""
    if not math.isfinite(residual):
        return FAIL
    if residual < pass_tol:
        return PASS
    if fail_tol is None or residual > fail_tol:
        return FAIL
    return INCONCLUSIVE


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


@dataclass
class CheckReport:
    name: str
    verdict: str
    max_residual: float
    mean_residual: float
    n_samples: int
    tolerance: float
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "name": self.name,
                "verdict": self.verdict,
                "residual_max": self.max_residual,
                "residual_mean": self.mean_residual,
                "n_samples": self.n_samples,
                "tolerance": self.tolerance,
                "witness": self.witness,
                "details": self.details,
                "seed": self.seed,
            }
        )


def report_from_residuals(
    name: str,
    residuals,
    tolerance: float,
    fail_tol: float | None = None,
    witness: dict | None = None,
    details: dict | None = None,
    seed: int | None = None,
) -> CheckReport:
    res = np.asarray(residuals, dtype=float).ravel()
    mx = float(res.max()) if res.size else 0.0
    mean = float(res.mean()) if res.size else 0.0
    return CheckReport(
        name=name,
        verdict=classify(mx, tolerance, fail_tol),
        max_residual=mx,
        mean_residual=mean,
        n_samples=int(res.size),
        tolerance=tolerance,
        witness=witness,
        details=details or {},
        seed=seed,
    )

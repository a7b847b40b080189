"""Check records and residual-to-witness conversion."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

from .expr import RatFunc

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: dict | None = None
    reason: str | None = None
    elapsed: float = 0.0
    unverified: bool = False

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        if self.unverified:
            out["unverified_hypotheses"] = True
        out["elapsed"] = round(self.elapsed, 4)
        return out


@dataclass
class Verdict:
    """Boolean outcome of a predicate, carrying a witness when it is false."""

    ok: bool
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def residual_witness(residual):
    """First nonzero entry of a residual as {"index": ..., "expr": ...}, or None.

    Accepts functions, tensor objects exposing ``first_nonzero`` and lists of
    either (the list position is prepended to the index).
    """
    if isinstance(residual, RatFunc):
        return None if residual.is_zero() else {"index": [], "expr": str(residual)}
    if isinstance(residual, (list, tuple)):
        for pos, item in enumerate(residual):
            w = residual_witness(item)
            if w is not None:
                return {"index": [pos] + list(w["index"]), "expr": w["expr"]}
        return None
    hit = residual.first_nonzero()
    if hit is None:
        return None
    idx, val = hit
    return {"index": list(idx), "expr": str(val)}


def residual_verdict(residual):
    w = residual_witness(residual)
    return Verdict(w is None, w)


@contextmanager
def timed(result_holder):
    t0 = time.perf_counter()
    yield
    result_holder.append(time.perf_counter() - t0)

"""End-to-end decisions: LU-equivalence and local distinguishability."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ConfigInvalid, DimensionMismatch
from .geometry import RANK_TOL, dimensions_report
from .spectra import (
    canonicalize,
    locally_indistinguishable,
    normalized_spectra,
    reduced_distance,
    spectra_distance,
)
from .stabilizer import (
    OptimizerConfig,
    block_overlap_maximize,
    block_structure,
    generic_phase_match,
    is_generic,
    verify_witness,
)
from .state import (
    LocalUnitaryTuple,
    PureState,
    apply_tuple,
    identity_tuple,
    overlap,
    projective_equal,
)

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
UNDECIDED = "Undecided"

SPECTRA_MISMATCH = "SpectraMismatch"
CANONICAL_EQUAL = "CanonicalEqual"
FIBER_COVERED = "FiberCovered"
GENERIC_PHASE = "GenericPhase"
BLOCK_SEARCH = "BlockSearch"

EXIT_CODES = {EQUIVALENT: 0, NOT_EQUIVALENT: 1, UNDECIDED: 2}


@dataclass(frozen=True)
class Config:
    """Tolerances (all on normalized states) and optimizer settings."""

    tol_spec: float = 1e-8
    tol_eq: float = 1e-8
    tol_opt: float = 1e-7
    gap: float = 1e-8
    eps_mod: float = 1e-10
    eps_phase: float = 1e-8
    rank_tol: float = RANK_TOL
    restarts: int = 20
    max_sweeps: int = 200
    conv: float = 1e-12
    seed: int = 0

    @property
    def tol_verify(self) -> float:
        return 10 * self.tol_opt

    def optimizer(self, **overrides) -> OptimizerConfig:
        cfg = OptimizerConfig(restarts=self.restarts, max_sweeps=self.max_sweeps,
                              conv=self.conv, eps_opt=self.tol_opt, seed=self.seed)
        return replace(cfg, **overrides).validate()

    def validate(self) -> "Config":
        for name in ("tol_spec", "tol_eq", "gap", "eps_mod", "eps_phase", "rank_tol"):
            val = getattr(self, name)
            if not (val >= 0 and np.isfinite(val)):
                raise ConfigInvalid(f"{name} must be a finite non-negative number, got {val}")
        self.optimizer()
        return self

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Verdict:
    kind: str
    stage: str
    witness: Optional[LocalUnitaryTuple]
    evidence: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]


def _spectra_table(v: PureState, eps_gap: float) -> list:
    return [[float(x) for x in s] for s in normalized_spectra(v, eps_gap)]


def decide_lu_equivalence(v1: PureState, v2: PureState,
                          cfg: Optional[Config] = None) -> Verdict:
    """Is ``v1 = (U_1 x ... x U_M) v2`` up to a scalar for some local unitaries?

    Stages, in order: spectra comparison, equality of canonical forms, the
    fiber-dimension shortcut, exact phase matching for nondegenerate
    spectra, and the numerical block search. ``Equivalent`` always comes
    with a witness mapping ``v2`` onto the ray of ``v1``; ``NotEquivalent``
    only from an exact obstruction; ``Undecided`` only from the block search.
    """
    cfg = (cfg or Config()).validate()
    if v1.dims != v2.dims:
        raise DimensionMismatch(f"dims {v1.dims} vs {v2.dims}")
    tols = cfg.to_dict()
    a, b = v1.normalized(), v2.normalized()
    ev = {"spectra_1": _spectra_table(a, cfg.gap), "spectra_2": _spectra_table(b, cfg.gap)}

    dist = spectra_distance(a, b)
    ev["spectra_distance"] = dist
    if max(dist) > cfg.tol_spec:
        ev["margin"] = max(dist) - cfg.tol_spec
        ev["mismatched_parties"] = [k for k, d in enumerate(dist) if d > cfg.tol_spec]
        return Verdict(NOT_EQUIVALENT, SPECTRA_MISMATCH, None, ev, tols)

    ca, cb = canonicalize(a, cfg.gap), canonicalize(b, cfg.gap)
    t1_inv = ca.transform.dagger()

    def lift(u: LocalUnitaryTuple) -> LocalUnitaryTuple:
        # maps v2 -> v2' -> (u) -> v1' -> v1
        return t1_inv.compose(u.compose(cb.transform))

    def certified(stage, u, **extra):
        w = lift(u)
        ok = verify_witness(v1, v2, w, cfg.tol_verify)
        ev.update(extra)
        ev["witness_overlap"] = overlap(v1, apply_tuple(v2, w))
        ev["witness_verified"] = ok
        if not ok:
            return None
        return Verdict(EQUIVALENT, stage, w, ev, tols)

    ev["canonical_overlap"] = overlap(ca.state, cb.state)
    if projective_equal(ca.state, cb.state, cfg.tol_eq):
        v = certified(CANONICAL_EQUAL, identity_tuple(a.dims))
        if v is not None:
            return v

    blocks = block_structure(ca.spectra)
    ev["blocks"] = [list(s) for s in blocks.sizes]
    report = dimensions_report(a, cfg.rank_tol, cfg.gap)
    ev["dimensions"] = report.to_dict()

    if report.fiber_covered:
        res = block_overlap_maximize(ca, cb, blocks, cfg.optimizer())
        ev["search"] = _search_evidence(res)
        if res.matched:
            v = certified(FIBER_COVERED, res.witness)
            if v is not None:
                return v
        # the shortcut says a witness exists; a failed search is reported as such
        ev["fiber_covered_but_search_failed"] = True
        return Verdict(UNDECIDED, BLOCK_SEARCH, None, ev, tols)

    if is_generic(blocks):
        res = generic_phase_match(ca, cb, cfg.eps_mod, cfg.eps_phase, blocks)
        ev["phase_match"] = {"status": res.status, "detail": res.detail,
                             "residual": res.residual}
        if res.matched:
            v = certified(GENERIC_PHASE, res.witness)
            if v is not None:
                return v
            # rounding defeated verification of an exact match: fall through
        else:
            return Verdict(NOT_EQUIVALENT, GENERIC_PHASE, None, ev, tols)

    res = block_overlap_maximize(ca, cb, blocks, cfg.optimizer())
    ev["search"] = _search_evidence(res)
    if res.matched:
        v = certified(BLOCK_SEARCH, res.witness)
        if v is not None:
            return v
    return Verdict(UNDECIDED, BLOCK_SEARCH, None, ev, tols)


def _search_evidence(res) -> dict:
    return {
        "status": res.status,
        "overlap": res.overlap,
        "detail": res.detail,
        "best_restart": res.best_restart,
        "restarts_run": len(res.history),
        "sweeps": [len(h) - 1 for h in res.history],
        "history": [list(h) for h in res.history],
    }


@dataclass
class Distinguishability:
    raw_indistinguishable: bool
    canonical_indistinguishable: bool
    reduced_distance: list
    spectra_distance: list
    tolerances: dict

    def to_dict(self) -> dict:
        return asdict(self)


def decide_distinguishability(v1: PureState, v2: PureState,
                              cfg: Optional[Config] = None) -> Distinguishability:
    """Local distinguishability of ``v1, v2`` and of their canonical forms.

    The raw test compares all reduced matrices; the canonical one compares
    ordered spectra, which is all that survives after both states have been
    rotated to canonical form.
    """
    cfg = (cfg or Config()).validate()
    if v1.dims != v2.dims:
        raise DimensionMismatch(f"dims {v1.dims} vs {v2.dims}")
    sd = spectra_distance(v1, v2)
    return Distinguishability(
        raw_indistinguishable=locally_indistinguishable(v1, v2, cfg.tol_spec),
        canonical_indistinguishable=all(d <= cfg.tol_spec for d in sd),
        reduced_distance=reduced_distance(v1, v2),
        spectra_distance=sd,
        tolerances=cfg.to_dict(),
    )


def witness_matrices(v: Verdict) -> Optional[list]:
    return None if v.witness is None else [np.asarray(m) for m in v.witness.matrices]

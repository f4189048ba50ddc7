"""Mechanical checks of spectral-inclusion statements on concrete operators.

Each ``verify_*`` function validates the hypotheses of its statement first
(raising a :class:`~essspec.errors.HypothesisError` subclass when they fail)
and then returns a :class:`VerdictReport` whose ``margin`` is nonnegative
exactly when the statement holds at the requested tolerance.

Set inclusions ``A ⊆ hull(S)`` are judged by the one-sided distance from
the samples of ``A`` to the rasterized hull, against a ``slack`` (by default
three cells).  The slack only ever dilates the right-hand side.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import corpus
from .cplane import CompactSetEstimate, dilate, hull_contains, one_sided_distance, polynomial_hull
from .errors import (
    HypothesisError,
    HypothesisViolationError,
    NotInvariantError,
    NotVerifiableError,
    UnsupportedError,
    ValidationError,
)
from .operators import (
    DEFAULT_TOL,
    BasisSubspace,
    CoordinateSubspace,
    DirectSum,
    FiniteOperator,
    HalfLine,
    LaurentOperator,
    SumSubspace,
    build_operator,
    build_subspace,
    complement_basis,
    dense_matrix,
    induce,
    invariance_defect,
    subspace_basis,
)
from .projections import DEFAULT_NODES, cluster, contour_projection, resolvent_apply
from .spectra import eigenvalues, essential_spectrum, spectrum
from .symbols import negative_part_norm, resolvent_coefficients

STATEMENTS = (
    "theorem1",
    "radius_inequality",
    "obs_i",
    "obs_ii",
    "projection_commutation",
    "fact_a",
    "fact_c",
)

DEFAULT_CELL = 0.01
RESOLVENT_TOL = 1e-9
RADIUS_TOL = 1e-9
PROJECTION_INVARIANCE_TOL = 1e-9
PROJECTION_MATCH_TOL = 1e-8
SPECTRUM_MATCH_TOL = 1e-8


@dataclass(eq=False)
class VerdictReport:
    statement: str
    passed: bool
    margin: float
    details: dict = field(default_factory=dict)
    inputs: list = field(default_factory=list)
    # sets and hulls behind the verdict, kept for figures and CSV output
    artifacts: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        return {
            "statement": self.statement,
            "pass": self.passed,
            "margin": _jsonable(self.margin),
            "details": _jsonable(self.details),
            "inputs": list(self.inputs),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def _verdict(statement, margin, details, T, F, artifacts=None):
    margin = float(margin)
    return VerdictReport(statement, margin >= 0, margin, details, [T.label, F.label], artifacts or {})


def _require_invariant(T, F, tol=DEFAULT_TOL):
    defect = invariance_defect(T, F)
    if defect > tol:
        raise NotInvariantError(defect, tol)
    return defect


def _exact(S, what):
    if not S.exact:
        raise NotVerifiableError(f"{what} is only known as an upper bound; no verdict possible")
    return S


def _slack(cell_size, slack):
    return 3.0 * cell_size if slack is None else float(slack)


def verify_theorem1(T, F, cell_size=DEFAULT_CELL, slack=None, refinements=2):
    """Essential spectra of ``T|F`` and ``T/F`` lie in the hull of ``sigma_e(T)``.

    A negative margin is re-tested on a grid twice as fine (up to
    ``refinements`` times) before it is reported.
    """
    slack = _slack(cell_size, slack)
    defect = _require_invariant(T, F)
    res = cell_size / 2
    ess_T = _exact(essential_spectrum(T, resolution=res), "sigma_e(T)")
    pair = induce(T, F)
    ess_R = _exact(essential_spectrum(pair.restriction, resolution=res), "sigma_e(T|F)")
    ess_Q = _exact(essential_spectrum(pair.quotient, resolution=res), "sigma_e(T/F)")
    H = polynomial_hull(ess_T, cell_size)
    d_R = one_sided_distance(ess_R, H)
    d_Q = one_sided_distance(ess_Q, H)
    margin = slack - max(d_R, d_Q)
    if margin < 0 and refinements > 0:
        return verify_theorem1(T, F, cell_size / 2, slack, refinements - 1)
    Hs = dilate(H, slack)
    details = {
        "invariance_defect": defect,
        "cell_size": cell_size,
        "slack": slack,
        "distance_restriction": d_R,
        "distance_quotient": d_Q,
        "distance_restriction_dilated": one_sided_distance(ess_R, Hs),
        "distance_quotient_dilated": one_sided_distance(ess_Q, Hs),
        "hull_area": H.area(),
        "essential_radius": ess_T.max_modulus(),
    }
    arts = {"essential": ess_T, "hull": H, "essential_restriction": ess_R, "essential_quotient": ess_Q}
    return _verdict("theorem1", margin, details, T, F, arts)


def verify_radius_inequality(T, F, resolution=DEFAULT_CELL / 2):
    """``max(r_e(T|F), r_e(T/F)) <= r_e(T)`` up to ``1e-9``."""
    defect = _require_invariant(T, F)
    r_T = _exact(essential_spectrum(T, resolution=resolution), "sigma_e(T)").max_modulus()
    pair = induce(T, F)
    r_R = _exact(essential_spectrum(pair.restriction, resolution=resolution), "sigma_e(T|F)").max_modulus()
    r_Q = _exact(essential_spectrum(pair.quotient, resolution=resolution), "sigma_e(T/F)").max_modulus()
    margin = r_T + RADIUS_TOL - max(r_R, r_Q)
    details = {"invariance_defect": defect, "r_e": r_T, "r_e_restriction": r_R, "r_e_quotient": r_Q}
    return _verdict("radius_inequality", margin, details, T, F)


def resolvent_defect(T, F, z):
    """``||Q_F (z - T)^{-1} i_F||`` for finite operators and Laurent operators on half lines."""
    M = dense_matrix(T)
    if M is not None:
        return invariance_defect(FiniteOperator(resolvent_apply(M, z)), F)
    if isinstance(F, SumSubspace) and isinstance(T, DirectSum):
        return max(resolvent_defect(p, f, z) for p, f in zip(T.parts, F.parts))
    if isinstance(F, HalfLine):
        if isinstance(T, DirectSum):
            return max(resolvent_defect(p, F, z) for p in T.parts)
        if isinstance(T, LaurentOperator):
            return negative_part_norm(resolvent_coefficients(T.symbol, z))
    raise UnsupportedError(f"no resolvent model for {type(T).__name__} on {type(F).__name__}")


def verify_obs_i(T, F, z_list, cell_size=DEFAULT_CELL, slack=None):
    """The resolvent leaves ``F`` invariant at every ``z`` outside the hull of ``sigma(T)``.

    Points inside the (dilated) hull are evaluated and reported but do not
    affect the verdict.
    """
    slack = _slack(cell_size, slack)
    defect = _require_invariant(T, F)
    spec = _exact(spectrum(T, resolution=cell_size / 2, cell_size=cell_size), "sigma(T)")
    H = polynomial_hull(spec, cell_size)
    probes = []
    worst = 0.0
    for z in z_list:
        z = complex(z)
        outside = not hull_contains(H, z, slack)
        r = resolvent_defect(T, F, z)
        probes.append({"z": z, "outside_hull": outside, "residual": r})
        if outside:
            worst = max(worst, r)
    margin = RESOLVENT_TOL - worst
    details = {"invariance_defect": defect, "slack": slack, "cell_size": cell_size, "probes": probes}
    return _verdict("obs_i", margin, details, T, F, {"spectrum": spec, "hull": H})


def verify_obs_ii(T, F, cell_size=DEFAULT_CELL, slack=None):
    """Spectra of ``T|F`` and ``T/F`` lie in the hull of ``sigma(T)``."""
    slack = _slack(cell_size, slack)
    defect = _require_invariant(T, F)
    kw = dict(resolution=cell_size / 2, cell_size=cell_size)
    spec_T = _exact(spectrum(T, **kw), "sigma(T)")
    pair = induce(T, F)
    spec_R = _exact(spectrum(pair.restriction, **kw), "sigma(T|F)")
    spec_Q = _exact(spectrum(pair.quotient, **kw), "sigma(T/F)")
    H = polynomial_hull(spec_T, cell_size)
    d_R = one_sided_distance(spec_R, H)
    d_Q = one_sided_distance(spec_Q, H)
    margin = slack - max(d_R, d_Q)
    details = {
        "invariance_defect": defect,
        "cell_size": cell_size,
        "slack": slack,
        "distance_restriction": d_R,
        "distance_quotient": d_Q,
        "hull_area": H.area(),
    }
    arts = {"spectrum": spec_T, "hull": H, "spectrum_restriction": spec_R, "spectrum_quotient": spec_Q}
    return _verdict("obs_ii", margin, details, T, F, arts)


def _finite(T, statement):
    M = dense_matrix(T)
    if M is None:
        raise UnsupportedError(f"{statement} is checked in the finite model only")
    return M


def verify_projection_commutation(T, F, lam, radius=None, nodes=DEFAULT_NODES):
    """The Riesz projection at ``lam`` leaves ``F`` invariant and induces the
    Riesz projections of ``T|F`` and ``T/F`` at ``lam``."""
    M = _finite(T, "projection commutation")
    defect = _require_invariant(T, F)
    lam = complex(lam)
    ev = eigenvalues(M)
    if not cluster(ev, lam).any():
        raise HypothesisViolationError(f"{lam} is not an eigenvalue of T")
    # in finite dimension hull(sigma(T) minus lam) is that finite set itself,
    # so an eigenvalue distinct from the rest is isolated outside its hull
    proj = contour_projection(M, lam, radius, nodes)
    P = FiniteOperator(proj.matrix)
    r_inv = invariance_defect(P, F)
    details = {"invariance_defect": defect, "radius": proj.radius, "nodes": nodes, "rank": proj.rank,
               "projection_invariance": r_inv}
    if r_inv > PROJECTION_INVARIANCE_TOL:
        details.update(restriction_residual=math.inf, quotient_residual=math.inf)
        return _verdict("projection_commutation", PROJECTION_INVARIANCE_TOL - r_inv, details, T, F)
    induced_P = induce(P, F, tol=PROJECTION_INVARIANCE_TOL)
    induced_T = induce(T, F)
    resid = {}
    for side in ("restriction", "quotient"):
        block = getattr(induced_T, side)
        ref = getattr(induced_P, side).matrix
        mine = contour_projection(block, lam, proj.radius, nodes).matrix
        resid[side] = float(np.linalg.norm(mine - ref, 2)) if ref.size else 0.0
    details.update(restriction_residual=resid["restriction"], quotient_residual=resid["quotient"])
    margin = min(PROJECTION_INVARIANCE_TOL - r_inv,
                 PROJECTION_MATCH_TOL - resid["restriction"],
                 PROJECTION_MATCH_TOL - resid["quotient"])
    return _verdict("projection_commutation", margin, details, T, F)


def containment_distance(X, Y):
    """max over x in X of the distance to the nearest point of Y (0 for empty X)."""
    X, Y = np.asarray(X, complex), np.asarray(Y, complex)
    if X.size == 0:
        return 0.0
    if Y.size == 0:
        return math.inf
    return float(np.abs(X[:, None] - Y[None, :]).min(axis=1).max())


def multiset_distance(X, Y):
    """Bottleneck distance of the best one-to-one matching (inf if sizes differ)."""
    X, Y = np.asarray(X, complex), np.asarray(Y, complex)
    if X.size != Y.size:
        return math.inf
    if X.size == 0:
        return 0.0
    D = np.abs(X[:, None] - Y[None, :])
    # minimize the largest matched distance: threshold search over sorted costs
    costs = np.unique(D)
    lo, hi = 0, costs.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        big = np.where(D <= costs[mid], 0.0, 1.0)
        r, c = linear_sum_assignment(big)
        if big[r, c].sum() == 0:
            hi = mid
        else:
            lo = mid + 1
    return float(costs[lo])


def _finite_triple(T, F, statement):
    _finite(T, statement)
    defect = _require_invariant(T, F)
    pair = induce(T, F)
    return defect, eigenvalues(dense_matrix(T)), eigenvalues(pair.restriction), eigenvalues(pair.quotient)


def verify_fact_a(T, F):
    """Each of sigma(T), sigma(T|F), sigma(T/F) lies in the union of the other two.

    Finite-model proxy: essential spectra are empty in finite dimension, so
    the check runs on ordinary spectra.
    """
    defect, eT, eA, eC = _finite_triple(T, F, "fact (a)")
    d = {
        "T_in_A_C": containment_distance(eT, np.concatenate([eA, eC])),
        "A_in_T_C": containment_distance(eA, np.concatenate([eT, eC])),
        "C_in_T_A": containment_distance(eC, np.concatenate([eT, eA])),
    }
    details = dict(d, invariance_defect=defect, proxy="ordinary spectra (finite model)",
                   multiset_distance=multiset_distance(eT, np.concatenate([eA, eC])))
    return _verdict("fact_a", SPECTRUM_MATCH_TOL - max(d.values()), details, T, F)


def verify_fact_c(T, F):
    """sigma(T) = sigma(T|F) ∪ sigma(T/F) (as multisets) when F has a T-invariant complement.

    The candidate complement is the complementary coordinate set, or the
    orthogonal complement of a basis subspace.
    """
    M = _finite(T, "fact (c)")
    n = M.shape[0]
    V = subspace_basis(F, n)
    W = complement_basis(F, V)
    if isinstance(F, CoordinateSubspace):
        comp = CoordinateSubspace(tuple(i for i in range(n) if i not in set(F.indices)))
    else:
        comp = BasisSubspace(W)
    comp_defect = invariance_defect(T, comp) if W.shape[1] else 0.0
    if comp_defect > DEFAULT_TOL:
        raise HypothesisViolationError(f"complement is not invariant (defect {comp_defect:.3e})")
    defect, eT, eA, eC = _finite_triple(T, F, "fact (c)")
    dist = multiset_distance(eT, np.concatenate([eA, eC]))
    details = {"invariance_defect": defect, "complement_defect": comp_defect, "multiset_distance": dist}
    return _verdict("fact_c", SPECTRUM_MATCH_TOL - dist, details, T, F)


# --------------------------------------------------------------------------
# suites


@dataclass(eq=False)
class Case:
    label: str
    operator: object
    subspace: object
    checks: tuple
    cell_size: float = DEFAULT_CELL
    margin: float = None
    nodes: int = DEFAULT_NODES
    slack: float = None
    z_list: tuple = ()
    lam: complex = None
    radius: float = None


@dataclass(eq=False)
class SuiteEntry:
    case: str
    statement: str
    status: str  # pass | fail | not-verifiable
    margin: float
    seconds: float
    message: str = ""
    report: VerdictReport = field(default=None, repr=False)
    case_index: int = 0

    def to_dict(self, timings=True):
        d = {
            "case": self.case,
            "statement": self.statement,
            "status": self.status,
            "margin": _jsonable(self.margin),
            "message": self.message,
        }
        if timings:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass(eq=False)
class SuiteSummary:
    entries: list = field(default_factory=list)
    seed: int = 0

    @property
    def failed(self):
        return any(e.status != "pass" for e in self.entries)

    def to_dict(self, timings=True):
        """Summary document; ``timings=False`` leaves out wall-clock times so
        the document is reproducible byte for byte."""
        return {
            "ok": not self.failed,
            "seed": self.seed,
            "counts": {s: sum(e.status == s for e in self.entries) for s in ("pass", "fail", "not-verifiable")},
            "entries": [e.to_dict(timings) for e in self.entries],
        }


def _positive(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0 or not math.isfinite(x):
        raise ValidationError(path, f"must be a positive number, got {x!r}")
    return float(x)


def parse_point(x, path):
    """A complex number given as a plain number or an ``[re, im]`` pair."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(*x)
    raise ValidationError(path, f"expected a number or [re, im], got {x!r}")


def parse_case(doc, path, overrides=None):
    """Validate one suite case document."""
    overrides = overrides or {}
    if not isinstance(doc, dict):
        raise ValidationError(path, "expected an object")
    T = build_operator(doc.get("operator"), f"{path}.operator")
    F = build_subspace(doc.get("subspace"), f"{path}.subspace")
    checks = doc.get("checks", ["theorem1"])
    if not isinstance(checks, list) or not all(c in STATEMENTS for c in checks):
        raise ValidationError(f"{path}.checks", f"expected a list drawn from {list(STATEMENTS)}")
    grid = doc.get("grid", {})
    if not isinstance(grid, dict):
        raise ValidationError(f"{path}.grid", "expected an object")
    cell = _positive(overrides.get("cell_size", grid.get("cell_size", DEFAULT_CELL)), f"{path}.grid.cell_size")
    margin = grid.get("margin")
    if margin is not None:
        margin = _positive(margin, f"{path}.grid.margin")
        if margin < 2 * cell:
            raise ValidationError(f"{path}.grid.margin", "must be at least 2*cell_size")
    contour = doc.get("contour", {})
    nodes = overrides.get("nodes", contour.get("nodes", DEFAULT_NODES))
    if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 16:
        raise ValidationError(f"{path}.contour.nodes", "must be an integer >= 16")
    slack = overrides.get("slack", doc.get("slack"))
    if slack is not None:
        if isinstance(slack, bool) or not isinstance(slack, (int, float)) or slack < 0:
            raise ValidationError(f"{path}.slack", "must be a nonnegative number")
        slack = float(slack)
    z_list = tuple(parse_point(z, f"{path}.z_list[{i}]") for i, z in enumerate(doc.get("z_list", [])))
    lam = doc.get("lambda")
    lam = None if lam is None else parse_point(lam, f"{path}.lambda")
    radius = doc.get("radius")
    radius = None if radius is None else _positive(radius, f"{path}.radius")
    if "projection_commutation" in checks and lam is None:
        raise ValidationError(f"{path}.lambda", "projection_commutation needs lambda")
    label = doc.get("label") or T.label or path
    return Case(label, T, F, tuple(checks), cell, margin, nodes, slack, z_list, lam, radius)


def parse_suite(doc, overrides=None, seed=0):
    """Validate a suite document; corpus entries are expanded with ``seed``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("cases"), list):
        raise ValidationError("suite", "expected an object with a 'cases' list")
    rng = np.random.default_rng(seed)
    cases = []
    for i, c in enumerate(doc["cases"]):
        path = f"cases[{i}]"
        if isinstance(c, dict) and "corpus" in c:
            cases.extend(corpus.expand_case(c, path, rng, lambda d, p: parse_case(d, p, overrides)))
        else:
            cases.append(parse_case(c, path, overrides))
    return cases


def run_check(case, statement):
    T, F = case.operator, case.subspace
    if statement == "theorem1":
        return verify_theorem1(T, F, case.cell_size, case.slack)
    if statement == "radius_inequality":
        return verify_radius_inequality(T, F, case.cell_size / 2)
    if statement == "obs_i":
        z_list = case.z_list or outside_probes(T, 8, case.cell_size, case.slack)
        return verify_obs_i(T, F, z_list, case.cell_size, case.slack)
    if statement == "obs_ii":
        return verify_obs_ii(T, F, case.cell_size, case.slack)
    if statement == "projection_commutation":
        return verify_projection_commutation(T, F, case.lam, case.radius, case.nodes)
    if statement == "fact_a":
        return verify_fact_a(T, F)
    if statement == "fact_c":
        return verify_fact_c(T, F)
    raise ValueError(statement)


def run_suite(cases, seed=0):
    """Run every requested check; hypothesis failures become not-verifiable entries.

    Numerical errors propagate to the caller.
    """
    summary = SuiteSummary(seed=seed)
    for idx, case in enumerate(cases):
        for statement in case.checks:
            t0 = time.perf_counter()
            try:
                rep = run_check(case, statement)
            except HypothesisError as exc:
                summary.entries.append(
                    SuiteEntry(case.label, statement, "not-verifiable", -math.inf,
                               time.perf_counter() - t0, str(exc), case_index=idx))
                continue
            summary.entries.append(
                SuiteEntry(case.label, statement, "pass" if rep.passed else "fail", rep.margin,
                           time.perf_counter() - t0, report=rep, case_index=idx))
    return summary


def outside_probes(T, count=8, cell_size=DEFAULT_CELL, slack=None):
    """``count`` points just outside the dilated hull of ``sigma(T)``.

    Along each of ``count`` rays from the origin the probe is the last point,
    walking inward, that stays more than three slacks away from the hull.
    """
    slack = _slack(cell_size, slack)
    spec = spectrum(T, resolution=cell_size / 2, cell_size=cell_size)
    if spec.is_empty:
        return []
    H = polynomial_hull(spec, cell_size)
    R = spec.max_modulus() + 6 * slack + 0.25
    guard = 3 * slack
    out = []
    for k in range(count):
        u = np.exp(1j * (2 * np.pi * k / count + 0.3))
        prev = R * u
        for t in np.linspace(R, 0.0, 400):
            z = t * u
            if hull_contains(H, z, guard):
                break
            prev = z
        out.append(complex(prev))
    return out

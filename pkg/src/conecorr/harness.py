"""Run-spec files and the report suites behind the command line.

A run spec is a JSON document describing one correspondence plus sampling
and probe configuration (see ``docs/specfile.md`` for the schema).  Each
``run_*`` function executes one suite and returns a :class:`SuiteResult`
holding plot-ready rows and the process exit code: 0 for success, 1 when a
checked property fails, 2 for input problems, 3 when a resource cap stops
the run.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from . import radstrom as rad
from .cone import ConeBasis, ConeError, ConePoint, standard_basis
from .correspondence import (
    AffineCorrespondence,
    BoundaryJumpCorrespondence,
    Correspondence,
    InflatedLinearCorrespondence,
    LinearCorrespondence,
    check_q_homogeneous,
    check_superadditive,
    continuity_probe,
    jensen_check,
    scalarize,
    uniform_boundedness_probe,
)
from .geometry import (
    GeometryError,
    Polytope,
    canonicalize,
    format_vector,
    rational,
    vector,
)
from ._minnorm import ConvergenceError
from .sampling import (
    DEFAULT_GRID,
    box_grid,
    lambda_grid,
    random_polytope,
    sample_points,
)
from .selection import SelectionCapError, SelectionError, selection_family

__all__ = [
    "SpecFileError",
    "ProbeSpec",
    "RunSpec",
    "SuiteResult",
    "load_spec",
    "parse_spec",
    "run_check",
    "run_probe",
    "run_selections",
    "run_radstrom",
    "run_lemma1",
]

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3

HOMOGENEITY_FACTORS = (Fraction(1, 3), Fraction(1, 2), Fraction(2), Fraction(7, 5))


class SpecFileError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeSpec:
    x: tuple  # ambient coordinates of the base point
    direction: tuple
    steps: int = 20


@dataclass(frozen=True)
class RunSpec:
    basis: ConeBasis
    correspondence: Correspondence
    kind: str
    target: Optional[ConeBasis] = None
    grid_values: tuple = DEFAULT_GRID
    n_random: int = 50
    seed: int = 42
    probes: tuple[ProbeSpec, ...] = ()
    tolerance: float = 1e-9
    selection_cap: int = 10**6
    scale_count: int = 10
    lemma1_grid: int = 10
    radstrom_pairs: int = 200
    radstrom_cancellations: int = 200
    radstrom_equivalents: int = 100
    radstrom_lambdas: tuple = (
        Fraction(-2),
        Fraction(-1, 2),
        Fraction(1, 3),
        Fraction(3),
    )


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    exit_code: int
    summary: str = ""


# ---------------------------------------------------------------------------
# spec parsing
# ---------------------------------------------------------------------------


def _need(mapping, key, where):
    if key not in mapping:
        raise SpecFileError(f"missing key {key!r} in {where}")
    return mapping[key]


def _as_polytope(data, where) -> Polytope:
    if not isinstance(data, list) or not data:
        raise SpecFileError(f"{where} must be a non-empty list of points")
    try:
        return canonicalize([[rational(str(c)) for c in pt] for pt in data])
    except (GeometryError, TypeError) as exc:
        raise SpecFileError(f"bad polytope in {where}: {exc}") from exc


def _as_vector(data, where):
    if not isinstance(data, list) or not data:
        raise SpecFileError(f"{where} must be a non-empty list of rationals")
    try:
        return vector([rational(str(c)) for c in data])
    except GeometryError as exc:
        raise SpecFileError(f"bad vector in {where}: {exc}") from exc


def parse_spec(doc: dict) -> RunSpec:
    if not isinstance(doc, dict):
        raise SpecFileError("spec document must be a JSON object")
    gens = _need(doc, "basis", "spec")
    if not isinstance(gens, list) or not gens:
        raise SpecFileError("'basis' must be a non-empty list of generators")
    try:
        basis = ConeBasis(tuple(_as_vector(g, "basis") for g in gens))
    except ConeError as exc:
        raise SpecFileError(f"bad basis: {exc}") from exc

    corr = _need(doc, "correspondence", "spec")
    if not isinstance(corr, dict):
        raise SpecFileError("'correspondence' must be an object")
    kind = _need(corr, "kind", "correspondence")
    phi = _build_correspondence(kind, corr, basis)

    target = None
    if "target_basis" in doc:
        tgens = doc["target_basis"]
        if not isinstance(tgens, list) or not tgens:
            raise SpecFileError("'target_basis' must be a non-empty list")
        try:
            target = ConeBasis(tuple(_as_vector(g, "target_basis") for g in tgens))
        except ConeError as exc:
            raise SpecFileError(f"bad target basis: {exc}") from exc

    samples = doc.get("samples", {})
    if not isinstance(samples, dict):
        raise SpecFileError("'samples' must be an object")
    grid_values = DEFAULT_GRID
    if "grid" in samples:
        grid_values = tuple(
            rational(str(v)) for v in _expect_list(samples["grid"], "samples.grid")
        )
    n_random = _expect_int(samples.get("random", 50), "samples.random", minimum=0)
    seed = _expect_int(samples.get("seed", 42), "samples.seed")

    probes = []
    for i, p in enumerate(doc.get("probes", [])):
        if not isinstance(p, dict):
            raise SpecFileError(f"probes[{i}] must be an object")
        probes.append(
            ProbeSpec(
                x=_as_vector(_need(p, "x", f"probes[{i}]"), f"probes[{i}].x"),
                direction=_as_vector(
                    _need(p, "direction", f"probes[{i}]"), f"probes[{i}].direction"
                ),
                steps=_expect_int(p.get("steps", 20), f"probes[{i}].steps", minimum=1),
            )
        )

    tol = doc.get("tolerance", 1e-9)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or tol <= 0:
        raise SpecFileError("'tolerance' must be a positive number")

    rd = doc.get("radstrom", {})
    if not isinstance(rd, dict):
        raise SpecFileError("'radstrom' must be an object")
    lambdas = tuple(
        rational(str(v))
        for v in _expect_list(
            rd.get("lambdas", ["-2", "-1/2", "1/3", "3"]), "radstrom.lambdas"
        )
    )

    return RunSpec(
        basis=basis,
        correspondence=phi,
        kind=kind,
        target=target,
        grid_values=grid_values,
        n_random=n_random,
        seed=seed,
        probes=tuple(probes),
        tolerance=float(tol),
        selection_cap=_expect_int(
            doc.get("selection_cap", 10**6), "selection_cap", minimum=1
        ),
        scale_count=_expect_int(
            doc.get("scale_count", 10), "scale_count", minimum=1
        ),
        lemma1_grid=_expect_int(
            doc.get("lemma1_grid", 10), "lemma1_grid", minimum=1
        ),
        radstrom_pairs=_expect_int(
            rd.get("pairs", 200), "radstrom.pairs", minimum=0
        ),
        radstrom_cancellations=_expect_int(
            rd.get("cancellations", 200), "radstrom.cancellations", minimum=0
        ),
        radstrom_equivalents=_expect_int(
            rd.get("equivalents", 100), "radstrom.equivalents", minimum=0
        ),
        radstrom_lambdas=lambdas,
    )


def _expect_list(value, where):
    if not isinstance(value, list) or not value:
        raise SpecFileError(f"{where} must be a non-empty list")
    return value


def _expect_int(value, where, minimum=None):
    if not isinstance(value, int) or isinstance(value, bool):
        raise SpecFileError(f"{where} must be an integer")
    if minimum is not None and value < minimum:
        raise SpecFileError(f"{where} must be >= {minimum}")
    return value


def _build_correspondence(kind, corr, basis) -> Correspondence:
    if kind == "example1":
        if basis != standard_basis(2):
            raise SpecFileError(
                "kind 'example1' requires the standard plane quadrant basis"
            )
        return BoundaryJumpCorrespondence()
    if kind not in ("linear", "inflated"):
        raise SpecFileError(f"unknown correspondence kind {kind!r}")
    images_doc = _need(corr, "images", "correspondence")
    if not isinstance(images_doc, list) or len(images_doc) != basis.size:
        raise SpecFileError(
            "'images' must list exactly one polytope per basis generator"
        )
    images = [
        _as_polytope(img, f"correspondence.images[{i}]")
        for i, img in enumerate(images_doc)
    ]
    if len({im.dim for im in images}) != 1:
        raise SpecFileError("correspondence images must share one dimension")
    try:
        if kind == "inflated":
            inflation = _as_polytope(
                _need(corr, "inflation", "correspondence"), "correspondence.inflation"
            )
            return InflatedLinearCorrespondence(basis, images, inflation)
        if "offset" in corr:
            offset = _as_polytope(corr["offset"], "correspondence.offset")
            return AffineCorrespondence(basis, images, offset)
        return LinearCorrespondence(basis, images)
    except GeometryError as exc:
        raise SpecFileError(f"bad correspondence: {exc}") from exc


def load_spec(path: str) -> RunSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecFileError(f"cannot read spec file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecFileError(
            f"invalid spec file: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    return parse_spec(doc)


def apply_overrides(spec: RunSpec, seed=None, steps=None, tol=None) -> RunSpec:
    if seed is not None:
        spec = replace(spec, seed=seed)
    if tol is not None:
        if tol <= 0:
            raise SpecFileError("tolerance override must be positive")
        spec = replace(spec, tolerance=tol)
    if steps is not None:
        if steps < 1:
            raise SpecFileError("steps override must be >= 1")
        spec = replace(
            spec, probes=tuple(replace(p, steps=steps) for p in spec.probes)
        )
    return spec


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _samples_for(spec: RunSpec) -> tuple[list[ConePoint], random.Random]:
    rng = random.Random(spec.seed)
    pts = sample_points(
        spec.basis, rng, grid_values=spec.grid_values, n_random=spec.n_random
    )
    return pts, rng


CHECK_COLUMNS = ("sample", "quantity", "value", "verdict", "witness")


def run_check(spec: RunSpec) -> SuiteResult:
    """Superadditivity, homogeneity, scalarization, and envelope checks."""
    phi = spec.correspondence
    samples, rng = _samples_for(spec)
    pairs = [
        (samples[rng.randrange(len(samples))], samples[rng.randrange(len(samples))])
        for _ in range(len(samples))
    ]
    rows = []
    failures = 0

    tracks = [scalarize(phi, i) for i in range(phi.codomain_dim)]
    track0 = tracks[0]

    for x, y in pairs:
        v = check_superadditive(phi, x, y)
        rows.append(
            (
                f"{format_vector(x.lambdas)};{format_vector(y.lambdas)}",
                "superadditive",
                "equal" if v.equal else ("strict" if v.ok else "violated"),
                "pass" if v.ok else "fail",
                format_vector(v.witness) if v.witness is not None else "",
            )
        )
        failures += 0 if v.ok else 1
        for i, _tr in enumerate(tracks):
            jv = jensen_check(phi, i, x, y)
            rows.append(
                (
                    f"{format_vector(x.lambdas)};{format_vector(y.lambdas)}",
                    f"envelope-midpoint[{i}]",
                    "ok" if jv.ok else "violated",
                    "pass" if jv.ok else "fail",
                    jv.detail if not jv.ok else "",
                )
            )
            failures += 0 if jv.ok else 1

    for x in samples:
        for r in HOMOGENEITY_FACTORS:
            v = check_q_homogeneous(phi, x, r)
            rows.append(
                (
                    format_vector(x.lambdas),
                    f"homogeneous[r={r}]",
                    "equal" if v.ok else "violated",
                    "pass" if v.ok else "fail",
                    format_vector(v.witness) if v.witness is not None else "",
                )
            )
            failures += 0 if v.ok else 1
        box = track0.box(x)
        val = phi.value(x)
        from .geometry import contains_set

        okbox = contains_set(box, val)
        rows.append(
            (
                format_vector(x.lambdas),
                "envelope-box-contains-value",
                "ok" if okbox else "violated",
                "pass" if okbox else "fail",
                "",
            )
        )
        failures += 0 if okbox else 1

    code = EXIT_OK if failures == 0 else EXIT_PROPERTY
    return SuiteResult(
        "check",
        CHECK_COLUMNS,
        tuple(rows),
        code,
        summary=f"{failures} failures over {len(rows)} checks",
    )


PROBE_COLUMNS = (
    "probe",
    "k",
    "hausdorff",
    "lsc_deficit",
    "usc_deficit",
    "lsc_exact_zero",
    "usc_exact_zero",
    "verdict",
)


def run_probe(spec: RunSpec) -> SuiteResult:
    """Continuity probes along configured directions."""
    if not spec.probes:
        raise SpecFileError("no probes configured in the spec file")
    phi = spec.correspondence
    rows = []
    for pi, probe in enumerate(spec.probes):
        x = spec.basis.from_ambient(probe.x)
        report = continuity_probe(
            phi, x, probe.direction, steps=probe.steps, tol=spec.tolerance
        )
        for r in report.rows:
            rows.append(
                (
                    str(pi),
                    str(r.k),
                    _fmt_float(r.hausdorff),
                    _fmt_float(r.lsc_deficit),
                    _fmt_float(r.usc_deficit),
                    "1" if r.lsc_exactly_zero else "0",
                    "1" if r.usc_exactly_zero else "0",
                    report.verdict,
                )
            )
    return SuiteResult("probe", PROBE_COLUMNS, tuple(rows), EXIT_OK)


SELECTION_COLUMNS = (
    "matrix_index",
    "entries",
    "certified",
    "failing_sample",
    "lipschitz_bound",
)


def run_selections(spec: RunSpec) -> SuiteResult:
    """Enumerate and certify the extreme linear selections."""
    phi = spec.correspondence
    target = spec.target or standard_basis(phi.codomain_dim)
    samples, _ = _samples_for(spec)
    family = selection_family(phi, target, samples, cap=spec.selection_cap)
    rows = tuple(
        (
            str(r.index),
            r.matrix.entries_text(),
            "1" if r.certified else "0",
            format_vector(r.failing_sample.lambdas) if r.failing_sample else "",
            _fmt_float(r.lipschitz_bound),
        )
        for r in family.rows
    )
    certified = family.certified_count
    code = EXIT_OK if certified > 0 else EXIT_PROPERTY
    return SuiteResult(
        "selections",
        SELECTION_COLUMNS,
        rows,
        code,
        summary=f"{certified}/{len(rows)} matrices certified",
    )


RADSTROM_COLUMNS = ("pair_id", "norm", "equivalent_to", "verdict")


def run_radstrom(spec: RunSpec) -> SuiteResult:
    """Pair-space axioms on random pairs drawn around the correspondence."""
    phi = spec.correspondence
    rng = random.Random(spec.seed)
    tol = spec.tolerance
    dim = phi.codomain_dim
    rows = []
    failures = 0

    # pool of component polytopes: map values at random cone points + noise
    pool = []
    for _ in range(max(8, spec.radstrom_pairs // 10)):
        lam = tuple(
            Fraction(rng.randint(0, 16), rng.randint(1, 8)) for _ in range(spec.basis.size)
        )
        pool.append(phi.value(spec.basis.point(lam)))
    for _ in range(max(8, spec.radstrom_pairs // 10)):
        pool.append(random_polytope(rng, dim, max_vertices=5, lo=-2, hi=2, max_den=8))

    def draw_pair() -> rad.DifferencePair:
        return rad.DifferencePair(
            pool[rng.randrange(len(pool))], pool[rng.randrange(len(pool))]
        )

    lam_factors = spec.radstrom_lambdas
    for i in range(spec.radstrom_pairs):
        p, q = draw_pair(), draw_pair()
        np_ = rad.pair_norm(p)
        nq = rad.pair_norm(q)
        ns = rad.pair_norm(rad.pair_add(p, q))
        ok = ns <= np_ + nq + tol
        rows.append((f"tri{i}", _fmt_float(ns), "", "pass" if ok else "fail"))
        failures += 0 if ok else 1
        lam = lam_factors[i % len(lam_factors)]
        nl = rad.pair_norm(rad.pair_scale(p, lam))
        ok = abs(nl - abs(float(lam)) * np_) <= tol
        rows.append((f"scale{i}", _fmt_float(nl), f"tri{i}", "pass" if ok else "fail"))
        failures += 0 if ok else 1

    for i in range(spec.radstrom_cancellations):
        p, q, w = draw_pair(), draw_pair(), draw_pair()
        left = rad.pair_add(p, w)
        right = rad.pair_add(q, w)
        # cancellation: (p + w) - w is equivalent to p, and likewise for q
        back = rad.pair_sub(left, w)
        ok = rad.equivalent(back, p)
        rows.append(
            (f"cancel{i}", _fmt_float(rad.pair_norm(left)), "", "pass" if ok else "fail")
        )
        failures += 0 if ok else 1
        # addition respects equivalence: p ~ p' forces p + w ~ p' + w
        bump = pool[rng.randrange(len(pool))]
        p_alt = rad.DifferencePair(
            rad.minkowski_sum(p.plus, bump), rad.minkowski_sum(p.minus, bump)
        )
        ok = rad.equivalent(rad.pair_add(p_alt, w), left)
        rows.append(
            (
                f"cancelq{i}",
                _fmt_float(rad.pair_norm(right)),
                f"cancel{i}",
                "pass" if ok else "fail",
            )
        )
        failures += 0 if ok else 1

    for i in range(spec.radstrom_equivalents):
        p = draw_pair()
        bump = pool[rng.randrange(len(pool))]
        p_alt = rad.DifferencePair(
            rad.minkowski_sum(p.plus, bump), rad.minkowski_sum(p.minus, bump)
        )
        n0, n1 = rad.pair_norm(p), rad.pair_norm(p_alt)
        ok = rad.equivalent(p, p_alt) and abs(n0 - n1) <= tol
        rows.append(
            (f"norm{i}", _fmt_float(n1), f"normbase{i}", "pass" if ok else "fail")
        )
        rows.append((f"normbase{i}", _fmt_float(n0), f"norm{i}", "pass"))
        failures += 0 if ok else 1

    code = EXIT_OK if failures == 0 else EXIT_PROPERTY
    return SuiteResult(
        "radstrom",
        RADSTROM_COLUMNS,
        tuple(rows),
        code,
        summary=f"{failures} failures over {len(rows)} rows",
    )


LEMMA1_COLUMNS = ("point", "bound", "verdict")


class _Scaled(Correspondence):
    def __init__(self, inner: Correspondence, factor):
        super().__init__(inner.domain, inner.codomain_dim)
        self._inner = inner
        self._factor = rational(factor)

    def _value_at(self, lambdas):
        from .geometry import scale

        return scale(self._inner._value_at(lambdas), self._factor)


def run_lemma1(spec: RunSpec) -> SuiteResult:
    """Uniform boundedness of the reciprocal-scaled family on a box grid.

    The family is ``{(1/a) * value : a = 1..scale_count}``; the suite reports
    the per-point supremum of vertex norms over the family and a final
    GLOBAL row with the overall bound.
    """
    phi = spec.correspondence
    if isinstance(phi, LinearCorrespondence):
        family = [phi.scaled(Fraction(1, a)) for a in range(1, spec.scale_count + 1)]
    else:
        family = [_Scaled(phi, Fraction(1, a)) for a in range(1, spec.scale_count + 1)]
    grid = box_grid(spec.basis.size, spec.lemma1_grid)
    points = [spec.basis.point(lam) for lam in grid]
    report = uniform_boundedness_probe(family, points)
    rows = []
    import math

    for x, sq in report.rows:
        rows.append(
            (format_vector(x.lambdas), _fmt_float(math.sqrt(sq)), "pass")
        )
    rows.append(
        (
            "GLOBAL",
            _fmt_float(report.global_bound),
            f"uniformly-bounded<={report.global_bound:.9g}",
        )
    )
    return SuiteResult(
        "lemma1",
        LEMMA1_COLUMNS,
        tuple(rows),
        EXIT_OK,
        summary=f"global bound {report.global_bound:.9g} over {len(points)} points",
    )

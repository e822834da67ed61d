"""Seeded pivot-count experiments and growth-curve diagnostics.

Everything up to the summary statistics is exact; floating point is used
only inside :func:`fit_growth`.

Seed splitting: the instance seed of a cell is the first 8 bytes (big-endian)
of ``sha256("{global_seed}|{family}|{n}|{rep}")``, so all algorithms and
variants at the same repetition see the same game.  Random coverings and
orderings use ``sha256("{global_seed}|{family}|{n}|{rep}|{algorithm}|{variant}")``
the same way.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import statistics
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .game import ProfileCapExceeded, brute_force_equilibrium
from .instances import FAMILIES, RANDOM_FAMILY, FamilySpec, RandomGameParams, generate
from .lcp import check_solution
from .rational import format_rational, parse_rational
from .reduction import LiftError, lift_solution, reduce_to_lcp
from .solvers import (
    CoveringVector,
    IndexOrdering,
    cottle_dantzig_solve,
    lemke_solve,
)

ALGORITHMS = ("lemke", "cottle-dantzig")
CSV_COLUMNS = ("family", "n", "seed", "algorithm", "variant", "pivots", "major_cycles", "outcome")
DEFAULT_VARIANTS = {"lemke": ("unit",), "cottle-dantzig": ("identity",)}


class OracleMismatch(RuntimeError):
    pass


def derive_seed(*parts) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class FamilyRange:
    family: str
    sizes: tuple[int, ...]
    params: RandomGameParams = field(default_factory=RandomGameParams)


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[FamilyRange, ...]
    algorithms: tuple[str, ...] = ALGORITHMS
    # per algorithm: "unit" | "random" | "explicit:<d1>,<d2>,..." for Lemke,
    # "identity" | "random" | "family" | "explicit:<p1>,<p2>,..." for Cottle-Dantzig
    variants: Mapping[str, tuple[str, ...]] = field(default_factory=lambda: dict(DEFAULT_VARIANTS))
    repetitions: int = 1
    seed: int = 0
    oracle_max_vertices: int = 8
    output: str | None = None

    def __post_init__(self):
        if not self.families:
            raise ValueError("config has no families")
        for fr in self.families:
            if fr.family not in FAMILIES:
                raise ValueError(f"unknown family {fr.family!r}")
            if not fr.sizes:
                raise ValueError(f"family {fr.family} has no sizes")
        if not self.algorithms or any(a not in ALGORITHMS for a in self.algorithms):
            raise ValueError(f"algorithms must be a nonempty subset of {ALGORITHMS}")
        for a in self.algorithms:
            if not self.variants.get(a):
                raise ValueError(f"no variants configured for {a}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def config_from_dict(data: Mapping) -> ExperimentConfig:
    fams = []
    for f in data["families"]:
        p = f.get("params", {})
        params = RandomGameParams(parse_rational(p.get("discount", "1/2")),
                                  int(p.get("reward_min", -10)), int(p.get("reward_max", 10)))
        fams.append(FamilyRange(f["family"], tuple(int(n) for n in f["sizes"]), params))
    algorithms = tuple(data.get("algorithms", ALGORITHMS))
    variants = {a: tuple(v) for a, v in data.get("variants", DEFAULT_VARIANTS).items()}
    return ExperimentConfig(
        families=tuple(fams),
        algorithms=algorithms,
        variants=variants,
        repetitions=int(data.get("repetitions", 1)),
        seed=int(data.get("seed", 0)),
        oracle_max_vertices=int(data.get("oracle_max_vertices", 8)),
        output=data.get("output"),
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "families": [{"family": f.family, "sizes": list(f.sizes),
                      "params": {"discount": format_rational(f.params.discount),
                                 "reward_min": f.params.reward_min,
                                 "reward_max": f.params.reward_max}}
                     for f in cfg.families],
        "algorithms": list(cfg.algorithms),
        "variants": {a: list(cfg.variants[a]) for a in cfg.algorithms},
        "repetitions": cfg.repetitions,
        "seed": cfg.seed,
        "oracle_max_vertices": cfg.oracle_max_vertices,
        "output": cfg.output,
    }


@dataclass(frozen=True)
class Row:
    family: str
    n: int
    seed: int
    algorithm: str
    variant: str
    pivots: int
    major_cycles: int
    outcome: str


def parse_covering(spec: str, seed: int) -> CoveringVector:
    if spec == "unit":
        return CoveringVector.unit()
    if spec == "random":
        return CoveringVector.random(seed)
    if spec.startswith("explicit:"):
        return CoveringVector.explicit([parse_rational(x) for x in spec[9:].split(",")])
    raise ValueError(f"unknown covering variant {spec!r}")


def parse_ordering(spec: str, seed: int, family_ordering: IndexOrdering | None = None
                   ) -> IndexOrdering:
    if spec == "identity":
        return IndexOrdering.identity()
    if spec == "random":
        return IndexOrdering.random(seed)
    if spec == "family":
        return family_ordering or IndexOrdering.identity()
    if spec.startswith("explicit:"):
        return IndexOrdering.explicit([int(x) for x in spec[9:].split(",")])
    raise ValueError(f"unknown ordering variant {spec!r}")


def run_cell(fr: FamilyRange, n: int, rep: int, algorithms: Sequence[str],
             variants: Mapping[str, Sequence[str]], global_seed: int,
             oracle_max_vertices: int) -> list[Row]:
    """All algorithm/variant rows for one generated instance."""
    seed = derive_seed(global_seed, fr.family, n, rep)
    spec = FamilySpec(fr.family, n, seed if fr.family == RANDOM_FAMILY else None, fr.params)
    game, family_ordering = generate(spec)
    cert = reduce_to_lcp(game)
    oracle = None
    if game.n <= oracle_max_vertices:
        try:
            oracle = brute_force_equilibrium(game)[0]
        except ProfileCapExceeded:
            pass
    rows = []
    for alg in algorithms:
        for variant in variants[alg]:
            vseed = derive_seed(global_seed, fr.family, n, rep, alg, variant)
            if alg == "lemke":
                result = lemke_solve(cert.lcp, parse_covering(variant, vseed))
            else:
                result = cottle_dantzig_solve(cert.lcp, parse_ordering(variant, vseed, family_ordering))
            outcome = result.outcome
            if outcome == "solved":
                if check_solution(cert.lcp, result.solution):
                    outcome = "check-failed"
                else:
                    try:
                        values = lift_solution(cert, result.solution)[0]
                    except LiftError as exc:
                        raise OracleMismatch(f"{fr.family} n={n} rep={rep} {alg}/{variant}: {exc}")
                    if oracle is not None and values != oracle:
                        raise OracleMismatch(
                            f"{fr.family} n={n} rep={rep} {alg}/{variant}: values differ from brute force")
            rows.append(Row(fr.family, n, seed, alg, variant, result.trace.pivot_count,
                            result.trace.major_cycles, outcome))
    return rows


@dataclass(frozen=True)
class GrowthFit:
    poly_degree: float
    poly_log_coefficient: float
    poly_residual: float
    exp_rate: float
    exp_log_coefficient: float
    exp_residual: float

    @property
    def looks_exponential(self) -> bool:
        return self.exp_residual < self.poly_residual


def fit_growth(points: Iterable[tuple[float, float]]) -> GrowthFit:
    """Least-squares fits of ``log(mean)`` against ``log(n)`` and against ``n``.

    The slope of the first is a polynomial-degree estimate, the slope of the
    second an exponential-rate estimate (natural log base).  Residuals are
    sums of squared errors in log space.
    """
    pts = sorted((float(n), float(m)) for n, m in points)
    if len({n for n, _ in pts}) < 3:
        raise ValueError("need at least 3 distinct sizes")
    if any(m <= 0 or n <= 0 for n, m in pts):
        raise ValueError("sizes and means must be positive")
    n = np.array([p[0] for p in pts])
    y = np.log(np.array([p[1] for p in pts]))

    def line(x):
        coef, res, *_ = np.polyfit(x, y, 1, full=True)
        return float(coef[0]), float(coef[1]), float(res[0]) if len(res) else 0.0

    pd, pc, pr = line(np.log(n))
    er, ec, eres = line(n)
    return GrowthFit(pd, pc, pr, er, ec, eres)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[Row]
    summary: list[dict] = field(default_factory=list)
    fits: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([getattr(r, c) for c in CSV_COLUMNS])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"config": config_to_dict(self.config), "summary": self.summary, "fit": self.fits}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def summarize(rows: Sequence[Row], family_order: Sequence[str] = FAMILIES):
    """Per-curve statistics over verified rows only, then a growth fit per curve."""
    groups: dict[tuple, list[Row]] = {}
    for r in rows:
        groups.setdefault((r.family, r.algorithm, r.variant, r.n), []).append(r)
    summary = []
    curves: dict[tuple, list[tuple[int, Fraction]]] = {}
    for key in sorted(groups, key=lambda k: (family_order.index(k[0]), k[1], k[2], k[3])):
        rs = groups[key]
        ok = [r.pivots for r in rs if r.outcome == "solved"]
        entry = {"family": key[0], "algorithm": key[1], "variant": key[2], "n": key[3],
                 "rows": len(rs), "verified": len(ok)}
        if ok:
            mean = Fraction(sum(ok), len(ok))
            entry.update(mean=format_rational(mean),
                         median=format_rational(statistics.median(Fraction(x) for x in ok)),
                         max=max(ok))
            curves.setdefault(key[:3], []).append((key[3], mean))
        summary.append(entry)
    fits = []
    for (fam, alg, var), pts in curves.items():
        entry = {"family": fam, "algorithm": alg, "variant": var,
                 "points": [[n, format_rational(m)] for n, m in pts]}
        try:
            entry.update(asdict(fit_growth((n, float(m)) for n, m in pts)))
        except ValueError as exc:
            entry["skipped"] = str(exc)
        fits.append(entry)
    return summary, fits


def run_experiment(cfg: ExperimentConfig, progress=None) -> ExperimentReport:
    rows: list[Row] = []
    for fr in cfg.families:
        for n in fr.sizes:
            for rep in range(cfg.repetitions):
                rows.extend(run_cell(fr, n, rep, cfg.algorithms, cfg.variants, cfg.seed,
                                     cfg.oracle_max_vertices))
                if progress is not None:
                    progress(fr.family, n, rep)
    order = [f.family for f in cfg.families]
    alg_order = list(cfg.algorithms)
    rows.sort(key=lambda r: (order.index(r.family), r.n, alg_order.index(r.algorithm),
                             list(cfg.variants[r.algorithm]).index(r.variant)))
    summary, fits = summarize(rows, order)
    return ExperimentReport(cfg, rows, summary, fits)

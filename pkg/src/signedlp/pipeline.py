"""End-to-end orchestration: curve file to verdict report, with table caching.

Stage order: ingest -> classify -> symbols (compute or import) -> Hecke
validation -> theta elements -> compatibility -> signed extraction (method
chosen by the reduction type) -> invariant-fit cross-check -> gcd ->
prediction comparison -> emission.  Every stage deposits its certification
data into the run record, which is embedded in the report so identical
configs reproduce byte-identical output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .analyzer import (
    GcdReport,
    Verdict,
    compare_predictions,
    gcd_signed_pair,
    report_payload,
    theorem_consistency,
)
from .curves import CurveData, classify_reduction, ingest_curve
from .errors import CompatFailed, NotStabilized, SignedLPError, WrongReductionType
from .extract import (
    SignedPair,
    extract_plus_minus,
    extract_sharp_flat,
    fit_matches_pair,
    invariant_fit,
)
from .modsym import (
    SymbolTable,
    SymbolTableBuilder,
    export_table,
    import_table,
    validate_hecke,
)
from .modules import parse_factored_ideal
from .theta import build_theta, check_compat

CACHE_ENV = "SIGNEDLP_CACHE_DIR"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass
class RunConfig:
    curve_file: str
    p: int
    n_max: Optional[int] = None
    precision: int = 8        # p-adic digits M
    digits: int = 30          # working real digits
    denom_bound: Optional[int] = None
    table_path: Optional[str] = None
    table_mode: str = ""      # "import" | "export" | ""
    fine_char: Optional[str] = None
    out_path: Optional[str] = None
    out_format: str = "json"

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0 or not _is_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.precision < 2:
            raise ValueError("p-adic precision must be at least 2")
        if self.n_max is None:
            self.n_max = 2 if self.p <= 5 else 1
        if self.n_max < 0:
            raise ValueError("level must be nonnegative")

    def resolved_denom_bound(self, curve: CurveData) -> int:
        if self.denom_bound:
            return self.denom_bound
        half = -(-self.precision // 2)
        return curve.torsion_bound**2 * 2 * self.p**half


@dataclass
class PipelineResult:
    curve: CurveData
    reduction: object
    table: SymbolTable
    thetas: dict
    compat: list
    pair: Optional[SignedPair]
    fits: Optional[dict]
    gcd: Optional[GcdReport]
    predictions: Optional[Verdict]
    theorem: Optional[Verdict]
    record: dict


def cache_path(cfg: RunConfig, curve: CurveData) -> Optional[str]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    os.makedirs(root, exist_ok=True)
    name = f"{curve.label}_p{cfg.p}_k{cfg.n_max + 1}_d{cfg.digits}.csv"
    return os.path.join(root, name)


def load_or_build_table(cfg: RunConfig, curve: CurveData) -> SymbolTable:
    K = cfg.n_max + 1
    if cfg.table_path and cfg.table_mode == "import":
        table = import_table(cfg.table_path, expect_curve=curve.label, expect_p=cfg.p)
        for k in range(K + 1):
            if not table.has_level(k):
                raise SignedLPError(
                    f"imported table lacks level {k}; need levels through {K}"
                )
        return table
    cached = cache_path(cfg, curve)
    if cached and os.path.exists(cached):
        return import_table(cached, expect_curve=curve.label, expect_p=cfg.p)
    builder = SymbolTableBuilder(
        curve, cfg.p, digits=cfg.digits,
        denom_bound=cfg.resolved_denom_bound(curve),
    )
    table = builder.build(K)
    if cached:
        export_table(table, cached)
    if cfg.table_path and cfg.table_mode == "export":
        export_table(table, cfg.table_path)
    return table


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    record = {
        "tool": f"signedlp {__version__}",
        "config": {
            "curve_file": os.path.basename(cfg.curve_file),
            "p": cfg.p,
            "n_max": cfg.n_max,
            "p_precision": cfg.precision,
            "real_digits": cfg.digits,
            "fine_char": cfg.fine_char,
        },
        "stages": {},
    }
    stage = "ingest"
    try:
        curve = ingest_curve(cfg.curve_file)
        record["config"]["curve"] = curve.label
        record["config"]["denominator_bound"] = cfg.resolved_denom_bound(curve)

        stage = "classify"
        red = classify_reduction(curve, cfg.p)
        record["stages"]["classify"] = {
            "reduction": red.kind, "a_p": red.a_p,
        }
        if red.kind in ("multiplicative", "additive"):
            # bad reduction breaks the Hecke relation at p; nothing downstream
            # makes sense.  Good ordinary reduction only fails at extraction.
            raise WrongReductionType(
                f"{curve.label} has {red.kind} reduction at {cfg.p}"
            )

        stage = "symbols"
        table = load_or_build_table(cfg, curve)
        record["stages"]["symbols"] = {
            "provenance": table.provenance,
            "levels": cfg.n_max + 1,
        }
        if table.meta:
            record["stages"]["symbols"]["certification"] = {
                "digits": table.meta["digits"],
                "tail_bounds": {
                    str(k): float(v) for k, v in table.meta["tail_bounds"].items()
                },
                "functional_equation_signs": list(
                    table.meta["functional_equation_signs"]
                ),
            }

        stage = "validate_hecke"
        hecke = validate_hecke(table, cfg.p, cfg.n_max, red.a_p)
        record["stages"]["validate_hecke"] = {
            "passed": hecke.passed,
            "levels": list(hecke.levels_checked),
        }
        if not hecke.passed:
            raise SignedLPError(str(hecke))

        stage = "theta"
        thetas = {
            n: build_theta(table, n, cfg.precision)
            for n in range(cfg.n_max + 1)
        }
        record["stages"]["theta"] = {
            "levels": sorted(thetas),
            "value_at_zero_vanishes": [
                bool(thetas[n].value_at_zero().is_zero_at_precision)
                for n in sorted(thetas)
            ],
        }

        stage = "compat"
        compat = []
        for n in range(2, cfg.n_max + 1):
            rep = check_compat(thetas, n, red.a_p)
            compat.append(rep)
            if not rep.passed:
                raise CompatFailed(
                    f"level {n}: {rep.detail}", index=rep.index
                )
        record["stages"]["compat"] = {"levels": [c.level for c in compat]}

        stage = "extract"
        if not red.is_supersingular:
            raise WrongReductionType(
                f"{curve.label} is {red.kind} at {cfg.p}; "
                "signed extraction needs good supersingular reduction"
            )
        if red.a_p == 0:
            pair = extract_plus_minus(thetas, red.a_p)
        else:
            pair = extract_sharp_flat(thetas, red.a_p, cfg.p)
        fits = invariant_fit(thetas)
        if not fit_matches_pair(fits, pair):
            raise NotStabilized(
                "extracted invariants disagree with the invariant fit"
            )
        record["stages"]["extract"] = {
            "method": pair.method,
            "labels": list(pair.labels),
            "stabilized": pair.stabilized,
            "fit_agrees": fit_matches_pair(fits, pair),
            "components": [
                {
                    "label": c.label,
                    "mu": c.invariants.mu,
                    "lambda": c.invariants.lam,
                    "grade": c.stabilization,
                    "modulus": c.modulus_desc,
                    "limit_certified": c.limit_certified,
                }
                for c in pair.components
            ],
        }

        stage = "gcd"
        gcd = gcd_signed_pair(pair)
        record["stages"]["gcd"] = {
            "gcd": gcd.as_string(),
            "certified": gcd.certified,
            "detail": gcd.detail,
        }

        predictions = theorem = None
        if cfg.fine_char is not None:
            stage = "compare"
            fine = parse_factored_ideal(cfg.fine_char)
            predictions = compare_predictions(gcd, curve.e_sequence, fine)
            theorem = theorem_consistency(gcd, fine)
            record["stages"]["compare"] = {
                "delta_E": predictions.delta_e,
                "KP": predictions.status_of("KP"),
                "Gr": predictions.status_of("Gr"),
                "theorem": "PASS" if theorem.all_pass else "FAIL",
            }
        return PipelineResult(
            curve, red, table, thetas, compat, pair, fits, gcd,
            predictions, theorem, record,
        )
    except SignedLPError as exc:
        exc.stage = stage
        raise


def result_payload(result: PipelineResult, cfg: RunConfig):
    verdict = Verdict()
    if result.predictions:
        verdict.checks.extend(result.predictions.checks)
        verdict.delta_e = result.predictions.delta_e
    if result.theorem:
        for c in result.theorem.checks:
            verdict.add(f"thm:{c.name}", c.status, c.detail)
    return report_payload(
        result.curve.label, cfg.p, result.gcd, verdict, header=result.record
    )

"""Command-line scenario runner.

    qtransfer --config run.ini [--out DIR] [--seed N] [--threads N] [--verbose]

Writes ``<scenario>.csv`` (one row per sweep point, or per coupling scale for
``nogo``) and ``<scenario>.jsonl`` into the output directory.  Exit status:
0 success, 2 configuration error, 3 numerical non-convergence, 4 invariant
violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import nogo
from .errors import ConfigError, ConvergenceError, InvariantViolation
from .field import harvesting_coefficients
from .harvest import harvested_negativity_2nd, psd_repair, resource_state
from .qstate import PureState, negativity
from .teleport import CorrectionStrategy, Strategy, teleport_channel, teleported_negativity_2nd

log = logging.getLogger("qtransfer")

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_INVARIANT = 0, 2, 3, 4
TRANSMISSION_VERDICT = "second-order zero"


def _clean(v):
    """JSON-safe value: NaN and infinities become null."""
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ""
    return str(v)


def write_csv(path: Path, rows: list[dict]):
    if not rows:
        path.write_text("", encoding="utf-8")
        return
    header = list(rows[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)  # RFC 4180: CRLF line ends, minimal quoting
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in header])


def write_jsonl(path: Path, records: list[dict]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(_clean(rec), allow_nan=False) + "\n")


# -- scenario kernels (one sweep point each) --------------------------------


def _coefficients(cfg: cfgmod.RunConfig):
    if cfg.coefficients is not None:
        return cfg.coefficients, {"L_AA": 0.0, "L_BB": 0.0, "L_AB": 0.0, "M": 0.0}, False
    res = harvesting_coefficients(cfg.field_model, cfg.detector_A, cfg.detector_B, cfg.quadrature)
    return res.coefficients, res.errors, True


def _check_coefficients(c, computed: bool):
    if computed and not c.cauchy_schwarz_ok:
        raise InvariantViolation(f"|L_AB|^2 = {abs(c.L_AB) ** 2:.6e} exceeds L_AA L_BB = {c.L_AA * c.L_BB:.6e}")


def _input_state(p: float) -> PureState:
    return PureState([math.sqrt(p), 0.0, 0.0, math.sqrt(1.0 - p)], (2, 2))


def harvest_point(cfg: cfgmod.RunConfig) -> dict:
    c, errs, computed = _coefficients(cfg)
    _check_coefficients(c, computed)
    row = dict(c.to_dict())
    row["negativity_2nd"] = harvested_negativity_2nd(c)
    row.update({f"{k}_err": float(v) for k, v in errs.items()})
    return row


def teleport_point(cfg: cfgmod.RunConfig) -> dict:
    c, errs, computed = _coefficients(cfg)
    _check_coefficients(c, computed)
    strategy = CorrectionStrategy.for_resource(cfg.strategy, c)
    closed = teleported_negativity_2nd(cfg.p, c, strategy)
    harvested = harvested_negativity_2nd(c)
    if closed > harvested + 1e-12:
        raise InvariantViolation(f"teleported negativity {closed:.6e} exceeds harvested {harvested:.6e}")
    repaired = psd_repair(resource_state(c))
    xi = teleport_channel(_input_state(cfg.p), repaired, strategy=strategy).xi
    return {
        "p": cfg.p,
        "coefficients": c.to_dict(),
        "strategy": cfg.strategy.value,
        "negativity_closed_form": closed,
        "negativity_exact_channel": negativity(xi),
        "negativity_harvested": harvested,
        "errors": {k: float(v) for k, v in errs.items()},
    }


def theorem_checks(model: nogo.ToyTransmissionModel) -> dict:
    """First-order kernel check, H_A independence and the lowest second-order shift."""
    first = nogo.check_first_order(model)
    k = nogo.second_order_operator(model)
    k0 = nogo.second_order_operator(model, include_HA=False)
    return {
        "first_order": first.max_abs,
        "first_order_vacuous": first.vacuous,
        "include_HA_difference": float(np.max(np.abs(k.data - k0.data))),
        "min_second_order_eigenvalue": nogo.predicted_min_coefficient(model),
    }


def _violates(checks: dict, tol: float) -> bool:
    return (
        checks["first_order"] > tol
        or checks["include_HA_difference"] > tol
        or checks["min_second_order_eigenvalue"] < -tol
    )


def transmission_verdict(cfg: cfgmod.RunConfig) -> dict:
    """Second-order check of direct transmission on the configured toy model."""
    checks = theorem_checks(_nogo_models(cfg)[0])
    ok = not _violates(checks, cfg.nogo.tolerance)
    lowest = checks["min_second_order_eigenvalue"]
    return {
        "transmission_negativity_2nd": 0.0 if ok else max(0.0, -lowest),
        "transmission_verdict": TRANSMISSION_VERDICT if ok else "second-order nonzero",
        "transmission_first_order": checks["first_order"],
        "transmission_min_second_order": lowest,
    }


def compare_point(cfg: cfgmod.RunConfig, verdict: dict) -> dict:
    c, errs, computed = _coefficients(cfg)
    _check_coefficients(c, computed)
    out = {"p": cfg.p, **c.to_dict()}
    out["harvested_negativity_2nd"] = harvested_negativity_2nd(c)
    out["teleported_negativity_2nd"] = teleported_negativity_2nd(cfg.p, c, CorrectionStrategy.for_resource(cfg.strategy, c))
    out["teleported_negativity_2nd_standard"] = teleported_negativity_2nd(cfg.p, c, Strategy.STANDARD)
    out.update(verdict)
    out.update({f"{k}_err": float(v) for k, v in errs.items()})
    return out


def _nogo_models(cfg: cfgmod.RunConfig) -> list[nogo.ToyTransmissionModel]:
    n = cfg.nogo
    if n.model == "oscillator":
        models = [nogo.oscillator_model(field_dim=n.field_dim, p=cfg.p, center_B=n.center_B)]
    else:
        rng = np.random.default_rng(cfg.seed)
        models = [
            nogo.random_model(rng, n.field_dim, n.ancilla_dim, n.system_dim)
            for _ in range(n.count)
        ]
    out = []
    for m in models:
        if not n.couple_A:
            m = replace(m, couplings_A=())
        if not n.couple_B:
            m = replace(m, couplings_B=())
        out.append(m)
    return out


def nogo_point(cfg: cfgmod.RunConfig) -> dict:
    rows, summaries = [], []
    for idx, model in enumerate(_nogo_models(cfg)):
        checks = theorem_checks(model)
        scaling = nogo.negativity_scaling(model, cfg.nogo.lambdas)
        rows += [{"model": idx, **rec} for rec in scaling.records()]
        summaries.append(
            {
                "model": idx,
                **checks,
                "quadratic_coefficient": scaling.quadratic_coefficient,
                "exponent": scaling.exponent,
            }
        )
    bad = [s for s in summaries if _violates(s, cfg.nogo.tolerance)]
    return {"rows": rows, "summaries": summaries, "violations": bad}


# -- driver -----------------------------------------------------------------


def _points(cfg: cfgmod.RunConfig):
    if cfg.sweep is None:
        return [(None, cfg)]
    return [(float(v), cfg.at(v)) for v in cfg.sweep.values()]


def _map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))  # map preserves submission order


def _flatten(rec: dict) -> dict:
    out = {}
    for k, v in rec.items():
        if isinstance(v, dict):
            out.update({f"{k}.{kk}": vv for kk, vv in v.items()})
        else:
            out[k] = v
    return out


def run(cfg: cfgmod.RunConfig) -> tuple[int, list[Path]]:
    """Run one configuration; returns (exit status, written files)."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    points = _points(cfg)
    axis = cfg.sweep.parameter if cfg.sweep else None
    log.info("scenario %s, %d point(s), %d thread(s)", cfg.scenario, len(points), cfg.threads)

    def tag(v, rec):
        return ({axis: v} if axis else {}) | rec

    violations: list[str] = []
    written = []
    if cfg.scenario == "nogo":
        results = _map(lambda pc: nogo_point(pc[1]), points, cfg.threads)
        rows, summaries = [], []
        for (v, _), res in zip(points, results):
            rows += [tag(v, r) for r in res["rows"]]
            summaries += [tag(v, s) for s in res["summaries"]]
            violations += [f"model {s['model']}: second-order transmission check failed" for s in res["violations"]]
        write_csv(out / "nogo.csv", rows)
        write_jsonl(out / "nogo.jsonl", rows)
        write_jsonl(out / "nogo_summary.jsonl", summaries)
        written = [out / "nogo.csv", out / "nogo.jsonl", out / "nogo_summary.jsonl"]
    else:
        if cfg.scenario == "compare":
            verdict = transmission_verdict(cfg)
            fn = lambda pc: compare_point(pc[1], verdict)  # noqa: E731
        else:
            fn = {"harvest": lambda pc: harvest_point(pc[1]), "teleport": lambda pc: teleport_point(pc[1])}[cfg.scenario]

        def guarded(pc):
            try:
                return fn(pc)
            except InvariantViolation as exc:
                return exc

        results = _map(guarded, points, cfg.threads)
        records = []
        for (v, _), res in zip(points, results):
            if isinstance(res, InvariantViolation):
                violations.append(f"{axis}={v}: {res}" if axis else str(res))
                continue
            records.append(tag(v, res))
        name = cfg.scenario
        write_csv(out / f"{name}.csv", [_flatten(r) for r in records])
        write_jsonl(out / f"{name}.jsonl", records)
        written = [out / f"{name}.csv", out / f"{name}.jsonl"]
    for msg in violations:
        log.error("invariant violation: %s", msg)
    return (EXIT_INVARIANT if violations else EXIT_OK), written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtransfer", description="Entanglement transfer scenarios: harvest, teleport, nogo, compare.")
    ap.add_argument("--config", required=True, help="INI-style or JSON run configuration")
    ap.add_argument("--out", help="output directory (env QTRANSFER_OUT; default from config)")
    ap.add_argument("--seed", type=int, help="unsigned 64-bit seed for random model suites")
    ap.add_argument("--threads", type=int, help="worker threads for sweep points (env QTRANSFER_THREADS)")
    ap.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return ap


def resolve(args: argparse.Namespace, env=None) -> cfgmod.RunConfig:
    """Load the config and apply overrides: flag, then environment, then file."""
    env = os.environ if env is None else env
    cfg = cfgmod.load(args.config)
    changes = {}
    out = args.out or env.get("QTRANSFER_OUT")
    if out:
        changes["out"] = out
    threads = args.threads
    if threads is None and env.get("QTRANSFER_THREADS"):
        try:
            threads = int(env["QTRANSFER_THREADS"])
        except ValueError:
            raise ConfigError(f"QTRANSFER_THREADS is not an integer: {env['QTRANSFER_THREADS']!r}") from None
    if threads is not None:
        if threads < 1:
            raise ConfigError("thread count must be at least 1")
        changes["threads"] = threads
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        changes["seed"] = args.seed
    return replace(cfg, **changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve(args)
        status, files = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"config error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for f in files:
        log.info("wrote %s", f)
    return status


if __name__ == "__main__":
    raise SystemExit(main())

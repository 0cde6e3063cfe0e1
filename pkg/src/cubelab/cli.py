"""Command-line front end: reproducible experiments as subcommands.

Every subcommand resolves its configuration (defaults, then an optional
key=value config file, then explicit flags), validates it, computes the
full report, and only then writes output, so a failed run never leaves a
partial file behind.  JSON reports carry ``schema: 1``, the resolved
config, and the seed; re-running the embedded config reproduces the
output byte for byte.

Exit codes: 0 success, 2 validation error, 3 exact-oracle cap exceeded,
4 realizability violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import concepts, distributions, expansion, learners, lowerbound, risk
from .errors import CapExceededError, RealizabilityError, ValidationError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_REALIZABILITY = 4


def _load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _resolve(args: argparse.Namespace, casts: dict[str, type]) -> dict:
    """Merge defaults < config file < explicit flags into one dict."""
    merged = {k: v for k, v in vars(args).items()
              if k not in ("func", "config", "out", "format", "command") and v is not None}
    if getattr(args, "config", None):
        file_vals = _load_config_file(args.config)
        for key, raw in file_vals.items():
            if key not in casts:
                raise ValidationError(f"config file: unknown key {key!r}")
            if key not in merged:
                cast = casts[key]
                try:
                    merged[key] = cast(raw) if cast is not bool else raw.lower() in ("1", "true", "yes")
                except ValueError:
                    raise ValidationError(f"config file: bad value for {key}: {raw!r}") from None
    return merged


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise ValidationError(f"missing required option(s): {flags}")


def _parse_dist(spec: str, n: int) -> distributions.Distribution:
    if spec == "uniform":
        return distributions.uniform(n)
    if spec.startswith("product:"):
        body = spec[len("product:"):]
        means = [float(tok) for tok in body.split(",") if tok]
        if len(means) == 1:
            means = means * n
        if len(means) != n:
            raise ValidationError(f"product means count {len(means)} != n={n}")
        return distributions.product(means)
    if spec.startswith("table:"):
        path = spec[len("table:"):]
        d = distributions.table_from_csv(Path(path).read_text())
        if d.n != n:
            raise ValidationError(f"table dimension {d.n} != n={n}")
        return d
    raise ValidationError(f"unknown distribution spec {spec!r}")


def _read_concept(path: str):
    return concepts.parse_concept(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_report(command: str, config: dict, report: dict) -> str:
    doc = {"schema": SCHEMA_VERSION, "command": command, "config": config, "report": report}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _resolve_rho(rho: int | None, rho_mode: str | None, n: int) -> int:
    if rho_mode == "logn":
        return expansion.log_adversary_radius(n)
    if rho is None:
        raise ValidationError("need --rho or --rho-mode logn")
    return rho


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_risk(args: argparse.Namespace) -> int:
    casts = {"hypothesis": str, "concept": str, "dist": str, "rho": int, "rho_mode": str,
             "mode": str, "notion": str, "trials": int, "delta": float, "seed": int,
             "budget": int}
    cfg = _resolve(args, casts)
    _require(cfg, "hypothesis", "concept")
    cfg.setdefault("dist", "uniform")
    cfg.setdefault("mode", "exact")
    cfg.setdefault("notion", "exact-ball")
    cfg.setdefault("trials", 10_000)
    cfg.setdefault("delta", 1e-3)
    cfg.setdefault("seed", 0)
    cfg.setdefault("budget", risk.DEFAULT_SEARCH_BUDGET)
    h = _read_concept(cfg["hypothesis"])
    c = _read_concept(cfg["concept"])
    n = getattr(c, "n")
    d = _parse_dist(cfg["dist"], n)
    rho = _resolve_rho(cfg.get("rho"), cfg.get("rho_mode"), n)
    cfg["rho"] = rho
    if cfg["notion"] == "constant-ball":
        if cfg["mode"] != "exact":
            raise ValidationError("constant-ball risk is only computed exactly")
        report = risk.constant_in_ball_risk_exact(h, c, rho, d)
    elif cfg["mode"] == "exact":
        report = risk.robust_risk_exact(h, c, rho, d)
    else:
        report = risk.robust_risk_mc(h, c, rho, d, trials=cfg["trials"],
                                     delta=cfg["delta"], seed=cfg["seed"],
                                     budget=cfg["budget"])
    _emit(_json_report("risk", cfg, report.to_dict()), args.out)
    return EXIT_OK


def _cmd_constants(args: argparse.Namespace) -> int:
    casts = {"k": int, "alpha": float, "variant": str, "epsilon": float, "n": int}
    cfg = _resolve(args, casts)
    _require(cfg, "k", "alpha")
    cfg.setdefault("variant", "both")
    variants = ("recurrence", "closed-form") if cfg["variant"] == "both" else (cfg["variant"],)
    body: dict = {}
    for variant in variants:
        bundle = expansion.expansion_constants(cfg["k"], cfg["alpha"], variant)
        entry = bundle.to_dict()
        if cfg.get("epsilon") is not None and cfg.get("n") is not None:
            entry["log2_mass_threshold"] = expansion.log2_mass_threshold(
                cfg["epsilon"], cfg["n"], cfg["k"], cfg["alpha"], variant)
        body[variant] = entry
    _emit(_json_report("constants", cfg, body), args.out)
    return EXIT_OK


def _cmd_expansion(args: argparse.Namespace) -> int:
    casts = {"formula": str, "dist": str, "rho": int, "rho_mode": str, "mode": str,
             "trials": int, "delta": float, "seed": int, "budget": int,
             "verify": bool, "epsilon": float}
    cfg = _resolve(args, casts)
    _require(cfg, "formula")
    cfg.setdefault("dist", "uniform")
    cfg.setdefault("mode", "exact")
    cfg.setdefault("trials", 10_000)
    cfg.setdefault("delta", 1e-3)
    cfg.setdefault("seed", 0)
    cfg.setdefault("budget", risk.DEFAULT_SEARCH_BUDGET)
    phi = _read_concept(cfg["formula"])
    if not isinstance(phi, concepts.CnfFormula):
        raise ValidationError("expansion expects a CNF formula file")
    d = _parse_dist(cfg["dist"], phi.n)
    rho = _resolve_rho(cfg.get("rho"), cfg.get("rho_mode"), phi.n)
    cfg["rho"] = rho
    report = expansion.expansion_mass(phi, rho, d, mode=cfg["mode"], trials=cfg["trials"],
                                      delta=cfg["delta"], seed=cfg["seed"],
                                      budget=cfg["budget"])
    body = report.to_dict()
    if cfg.get("verify"):
        if cfg.get("epsilon") is None:
            raise ValidationError("--verify needs --epsilon")
        body["verification"] = expansion.verify_expansion_bound(
            phi, d, cfg["epsilon"], rho).to_dict()
    _emit(_json_report("expansion", cfg, body), args.out)
    return EXIT_OK


def _cmd_learn(args: argparse.Namespace) -> int:
    casts = {"target": str, "k": int, "m": int, "dist": str, "seed": int, "mode": str,
             "epsilon": float, "delta": float, "alpha": float, "rho": int,
             "rho_mode": str, "measure_rho": bool}
    cfg = _resolve(args, casts)
    _require(cfg, "target", "k", "m")
    cfg.setdefault("dist", "uniform")
    cfg.setdefault("mode", "direct")
    cfg.setdefault("epsilon", 0.1)
    cfg.setdefault("delta", 0.05)
    cfg.setdefault("alpha", 1.0)
    cfg.setdefault("seed", 0)
    target = _read_concept(cfg["target"])
    n = getattr(target, "n")
    d = _parse_dist(cfg["dist"], n)
    learner_cfg = learners.LearnerConfig(k=cfg["k"], epsilon=cfg["epsilon"],
                                         delta=cfg["delta"], alpha=cfg["alpha"],
                                         mode=cfg["mode"], seed=cfg["seed"])
    s = distributions.draw_labeled_sample(target, d, cfg["m"], cfg["seed"])
    outcome = learners.robust_learn(s, learner_cfg)
    body = outcome.to_dict()
    body["hypothesis_text"] = concepts.format_concept(outcome.hypothesis)
    if cfg.get("measure_rho") or cfg.get("rho") is not None or cfg.get("rho_mode"):
        rho = _resolve_rho(cfg.get("rho"), cfg.get("rho_mode"), n)
        cfg["rho"] = rho
        body["robust_risk_exact"] = risk.robust_risk_exact(
            outcome.hypothesis, target, rho, d).to_dict()
        body["standard_risk_exact"] = risk.standard_risk(outcome.hypothesis, target, d).to_dict()
    _emit(_json_report("learn", cfg, body), args.out)
    return EXIT_OK


def _cmd_lowerbound(args: argparse.Namespace) -> int:
    casts = {"n": int, "rho": int, "kappa": float, "trials": int, "learner": str,
             "seed": int}
    cfg = _resolve(args, casts)
    _require(cfg, "n", "rho", "kappa", "trials")
    cfg.setdefault("learner", "mon-conj")
    cfg.setdefault("seed", 0)
    lb_cfg = lowerbound.LowerBoundConfig(n=cfg["n"], rho=cfg["rho"], kappa=cfg["kappa"],
                                         trials=cfg["trials"], learner=cfg["learner"],
                                         seed=cfg["seed"])
    report, records = lowerbound.run_lowerbound_experiment(lb_cfg)
    if args.format == "csv":
        buf = io.StringIO()
        for key, value in sorted({**cfg, "m": lb_cfg.m}.items()):
            buf.write(f"# {key}={value}\n")
        writer = csv.writer(buf)
        writer.writerow(["trial", "target_id", "m", "allzero", "robust_risk"])
        for rec in records:
            writer.writerow(rec.to_row())
        _emit(buf.getvalue(), args.out)
    else:
        body = report.to_dict()
        body["trials_detail"] = [rec.to_row() for rec in records]
        _emit(_json_report("lowerbound", cfg, body), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubelab",
        description="Exact and Monte-Carlo experiments on robust learning of Boolean concepts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("risk", help="risk of a hypothesis against a target concept")
    p.add_argument("--hypothesis", help="hypothesis concept file")
    p.add_argument("--concept", help="target concept file")
    p.add_argument("--dist", help="uniform | product:<means> | table:<csv>")
    p.add_argument("--rho", type=int)
    p.add_argument("--rho-mode", dest="rho_mode", choices=["logn"])
    p.add_argument("--mode", choices=["exact", "mc"])
    p.add_argument("--exact", dest="mode", action="store_const", const="exact")
    p.add_argument("--mc", dest="mode", action="store_const", const="mc")
    p.add_argument("--notion", choices=["exact-ball", "constant-ball"])
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    common(p)
    p.set_defaults(func=_cmd_risk)

    p = sub.add_parser("constants", help="expansion-threshold constants")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--variant", choices=["recurrence", "closed-form", "both"])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int)
    common(p)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("expansion", help="satisfying mass and expanded mass of a CNF")
    p.add_argument("--formula", help="CNF file")
    p.add_argument("--dist", help="uniform | product:<means> | table:<csv>")
    p.add_argument("--rho", type=int)
    p.add_argument("--rho-mode", dest="rho_mode", choices=["logn"])
    p.add_argument("--mode", choices=["exact", "monte-carlo"])
    p.add_argument("--trials", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--epsilon", type=float)
    common(p)
    p.set_defaults(func=_cmd_expansion)

    p = sub.add_parser("learn", help="train a decision list on a generated sample")
    p.add_argument("--target", help="target concept file")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--dist")
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=["direct", "theory"])
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--rho", type=int)
    p.add_argument("--rho-mode", dest="rho_mode", choices=["logn"])
    p.add_argument("--measure-rho", dest="measure_rho", action="store_true",
                   help="measure exact risks of the hypothesis (needs --rho/--rho-mode)")
    common(p)
    p.set_defaults(func=_cmd_learn)

    p = sub.add_parser("lowerbound", help="sample-complexity lower-bound experiment")
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--learner", choices=sorted(lowerbound.LEARNERS))
    p.add_argument("--seed", type=int)
    common(p)
    p.set_defaults(func=_cmd_lowerbound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except RealizabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REALIZABILITY
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

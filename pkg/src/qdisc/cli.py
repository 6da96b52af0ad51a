"""Command-line interface and experiment drivers.

Subcommands: ``discriminate``, ``certify``, ``hierarchy-scan`` and ``sweep``.
Every output carries the package version and the full run configuration;
the same configuration always produces the same bytes.  Worker processes for
the census and sweep are taken from ``QDISC_THREADS`` (default 1).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from qdisc import __version__
from qdisc.certify import CertificationFailed, certify, exact_channel, strict_hierarchy
from qdisc.channels import (
    Ensemble,
    InvalidChannel,
    ensemble,
    ensemble_from_specs,
    parse_channel_spec,
    random_channel,
    spec_is_exact_capable,
)
from qdisc.exact_scalar import QuadExt, parse_rational, rational_to_str
from qdisc.sdp import DEFAULT_TOL, discriminate
from qdisc.strategies import GEN, PAR, SEP, SEQ12, Strategy, process_projector

log = logging.getLogger(__name__)

THREADS_ENV = "QDISC_THREADS"
GAP_THRESHOLD = 1e-6
# SEQ is reported through the 1<2 order: both copies carry the same channel,
# so swapping the slots maps each order onto the other with equal value.
FOUR = (PAR, SEQ12, SEP, GEN)


@dataclass
class RunConfig:
    command: str
    channels: list = field(default_factory=list)
    priors: list = field(default_factory=list)
    strategies: list = field(default_factory=list)
    k: int = 2
    tol: float = DEFAULT_TOL
    seed: Optional[int] = None
    out: Optional[str] = None
    samples: Optional[int] = None
    gammas: list = field(default_factory=list)
    eta: Optional[str] = None
    threshold: float = GAP_THRESHOLD

    def validate(self) -> "RunConfig":
        if self.command not in ("discriminate", "certify", "hierarchy-scan", "sweep"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.command in ("discriminate", "certify"):
            if not self.channels:
                raise ValueError("--channels is required")
            if len(self.priors) != len(self.channels):
                raise ValueError("need one prior per channel")
            for spec in self.channels:
                parse_channel_spec(spec)
            if self.k not in (1, 2):
                raise ValueError("k must be 1 or 2")
        for s in self.strategies:
            Strategy.from_name(s)
        if self.command == "hierarchy-scan" and (self.samples is None or self.samples < 1):
            raise ValueError("--samples must be positive")
        if self.command == "sweep":
            if not self.gammas or self.eta is None:
                raise ValueError("sweep needs --gammas and --eta")
            for g in self.gammas + [self.eta]:
                if not 0 <= parse_rational(g) <= 1:
                    raise ValueError(f"parameter {g} outside [0, 1]")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        return self

    def header(self) -> dict:
        return {"version": __version__, "run_config": asdict(self)}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _map(fn, items):
    """Ordered map, in worker processes when ``QDISC_THREADS`` > 1."""
    n = _threads()
    if n == 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(n) as ex:
        return list(ex.map(fn, items))


def _fmt(x: float) -> str:
    return f"{x:.12f}"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


# discriminate -----------------------------------------------------------------

def residuals(d, e: Ensemble) -> dict:
    """Float feasibility defects of the tester witness."""
    W = sum(d.testers)
    dims = (e.dI, e.dO) * e.k
    target = (e.dO ** e.k)
    min_eig = min(float(np.linalg.eigvalsh(t).min()) for t in d.testers)
    if d.strategy.tag == "SEP":
        defect = float(np.abs(W - d.ordered_parts[0] - d.ordered_parts[1]).max())
    else:
        defect = float(np.abs(process_projector(d.strategy, e.k).apply(W, dims) - W).max())
    return {"projector_defect": defect, "min_eigenvalue": min_eig,
            "trace_defect": abs(float(np.trace(W).real) - target)}


def cmd_discriminate(cfg: RunConfig) -> int:
    e = ensemble_from_specs(cfg.channels, cfg.priors, k=cfg.k)
    results = []
    for name in cfg.strategies:
        d = discriminate(e, Strategy.from_name(name), cfg.tol)
        res = residuals(d, e)
        results.append({"strategy": name, "value": _fmt(d.value), "primal": _fmt(d.primal_value),
                        "dual": _fmt(d.dual_value), "gap": f"{d.gap:.3e}", "status": d.status,
                        "residuals": {k: f"{v:.3e}" for k, v in res.items()}})
    _write(cfg.out, _dump(dict(cfg.header(), results=results)))
    return 0


# certify ----------------------------------------------------------------------

def exact_ensemble(specs: Sequence[str], priors: Sequence, k: int = 2) -> Ensemble:
    """Exact twin of an ensemble; random channels are rationalized into exact channels."""
    ps = [parse_rational(str(p)) for p in priors]
    chois = [parse_channel_spec(s, exact=True) if spec_is_exact_capable(s)
             else exact_channel(parse_channel_spec(s)) for s in specs]
    return ensemble(list(zip(ps, chois)), k=k, specs=list(specs))


def _bound_text(b) -> str:
    if isinstance(b, QuadExt):
        return f"{rational_to_str(b.a)} + {rational_to_str(b.b)}*sqrt({b.d})"
    return rational_to_str(b)


def cmd_certify(cfg: RunConfig, assert_hierarchy: bool = False, out_dir: Optional[str] = None) -> int:
    e = exact_ensemble(cfg.channels, cfg.priors, cfg.k)
    ef = e.to_float()
    bounds = {}
    status = 0
    for name in cfg.strategies:
        s = Strategy.from_name(name)
        d = discriminate(ef, s, cfg.tol)
        try:
            lo, up = certify(d, e)
        except CertificationFailed as exc:
            print(f"{name}: certification failed: {exc}")
            status = 1
            continue
        bounds[s] = (lo, up)
        for c in (lo, up):
            c.extra.update(cfg.header())
            if out_dir:
                _write(str(Path(out_dir) / f"{name}_{c.direction}.json"), c.to_json(indent=1) + "\n")
        print(f"{name}: {float(lo.bound):.10f} <= P <= {float(up.bound):.10f}")
        print(f"  lower = {_bound_text(lo.bound)}")
        print(f"  upper = {_bound_text(up.bound)}")
    if assert_hierarchy:
        order = [s for s in sorted(bounds, key=_rank)]
        if len(order) < 2 or status:
            print("hierarchy: not enough certified strategies")
            return 1
        for a, b, ok in strict_hierarchy(bounds, order):
            print(f"hierarchy {a.name} < {b.name}: {'certified' if ok else 'NOT certified'}")
            status = status or (0 if ok else 1)
    return status


def _rank(s: Strategy) -> int:
    return ("PAR", "SEQ", "SEP", "GEN").index(s.tag)


# hierarchy scan -----------------------------------------------------------------

def _census_task(args) -> list:
    index, seed_seq, tol = args
    r1, r2 = (np.random.default_rng(s) for s in seed_seq.spawn(2))
    e = ensemble([(0.5, random_channel(2, 2, r1)), (0.5, random_channel(2, 2, r2))], k=2)
    return [index] + [discriminate(e, s, tol).value for s in FOUR]


def classify(values: Sequence[float], threshold: float = GAP_THRESHOLD) -> tuple:
    """Strict-gap flags ``(par<seq, seq<sep, sep<gen, all)``."""
    gaps = [b - a > threshold for a, b in zip(values, values[1:])]
    return tuple(gaps) + (all(gaps),)


def hierarchy_scan(samples: int, seed: int, tol: float = DEFAULT_TOL,
                   threshold: float = GAP_THRESHOLD) -> tuple[list, dict]:
    """Random channel pairs with equal priors; rows and a count summary."""
    children = np.random.SeedSequence(seed).spawn(samples)
    raw = _map(_census_task, [(i, c, tol) for i, c in enumerate(children)])
    rows, counts = [], [0, 0, 0, 0]
    for index, *vals in raw:
        flags = classify(vals, threshold)
        counts = [c + f for c, f in zip(counts, flags)]
        rows.append([index] + vals + list(flags))
    keys = ("par_lt_seq", "seq_lt_sep", "sep_lt_gen", "full_hierarchy")
    summary = {"samples": samples, "threshold": threshold}
    summary.update({k: c for k, c in zip(keys, counts)})
    summary.update({k + "_fraction": c / samples for k, c in zip(keys, counts)})
    return rows, summary


def _csv(header_obj: dict, columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# qdisc {header_obj['version']}\n")
    buf.write("# run_config " + json.dumps(header_obj["run_config"], sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) if isinstance(x, float) else (int(x) if isinstance(x, bool) else x) for x in r])
    return buf.getvalue()


def cmd_hierarchy_scan(cfg: RunConfig) -> int:
    rows, summary = hierarchy_scan(cfg.samples, cfg.seed or 0, cfg.tol, cfg.threshold)
    cols = ["index", "par", "seq", "sep", "gen", "par_lt_seq", "seq_lt_sep", "sep_lt_gen", "full"]
    _write(cfg.out, _csv(cfg.header(), cols, rows))
    text = _dump(dict(cfg.header(), summary=summary))
    if cfg.out:
        _write(str(Path(cfg.out).with_suffix(".summary.json")), text)
    sys.stdout.write(text)
    return 0


# sweep --------------------------------------------------------------------------

def _sweep_task(args) -> list:
    gamma, eta, tol = args
    e = ensemble_from_specs([f"ad:{gamma}", f"bf:{eta}"], ["1/2", "1/2"])
    return [gamma] + [discriminate(e, s, tol).value for s in FOUR]


def sweep(gammas: Sequence[str], eta: str, tol: float = DEFAULT_TOL) -> list:
    """Rows ``[gamma, par, seq, sep, gen]`` for AD(gamma) against BF(eta), equal priors."""
    return _map(_sweep_task, [(g, eta, tol) for g in gammas])


def parse_grid(text: str) -> list:
    """``"0.5,0.6"`` or ``"start:stop:step"`` (inclusive) as exact decimal strings."""
    if ":" not in text:
        return [t.strip() for t in text.split(",") if t.strip()]
    a, b, h = (Fraction(x) for x in text.split(":"))
    if h <= 0:
        raise ValueError("grid step must be positive")
    places = max(len(x.split(".")[1]) if "." in x else 0 for x in text.split(":"))
    out, g = [], a
    while g <= b:
        out.append(f"{float(g):.{places}f}")
        g += h
    return out


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep(cfg.gammas, cfg.eta, cfg.tol)
    _write(cfg.out, _csv(cfg.header(), ["gamma", "par", "seq", "sep", "gen"], rows))
    return 0


# entry point --------------------------------------------------------------------

def _split(text: Optional[str]) -> list:
    return [t.strip() for t in text.split(",")] if text else []


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdisc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qdisc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, channels=True):
        if channels:
            sp.add_argument("--channels", required=True, help="comma-separated specs, e.g. ad:0.67,bf:0.87")
            sp.add_argument("--priors", help="comma-separated priors (default: uniform)")
            sp.add_argument("--k", type=int, default=2, help="number of copies (1 or 2)")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--out")

    d = sub.add_parser("discriminate", help="optimal success probabilities")
    common(d)
    d.add_argument("--strategies", default="par,seq12,sep,gen")
    c = sub.add_parser("certify", help="exact lower and upper bounds")
    common(c)
    c.add_argument("--strategies", default="par,seq12,sep,gen")
    c.add_argument("--assert-hierarchy", action="store_true")
    h = sub.add_parser("hierarchy-scan", help="census over random channel pairs")
    common(h, channels=False)
    h.add_argument("--samples", type=int, required=True)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--threshold", type=float, default=GAP_THRESHOLD)
    s = sub.add_parser("sweep", help="AD(gamma) against BF(eta) over a gamma grid")
    common(s, channels=False)
    s.add_argument("--gammas", default="0.50:0.70:0.05")
    s.add_argument("--eta", default="0.87")
    return p


def config_from_args(a: argparse.Namespace) -> RunConfig:
    channels = _split(getattr(a, "channels", None))
    priors = _split(getattr(a, "priors", None))
    if channels and not priors:
        priors = [rational_to_str(Fraction(1, len(channels)))] * len(channels)
    return RunConfig(command=a.command, channels=channels, priors=priors,
                     strategies=_split(getattr(a, "strategies", None)), k=getattr(a, "k", 2),
                     tol=a.tol, seed=getattr(a, "seed", None), out=a.out,
                     samples=getattr(a, "samples", None),
                     gammas=parse_grid(a.gammas) if getattr(a, "gammas", None) else [],
                     eta=getattr(a, "eta", None),
                     threshold=getattr(a, "threshold", GAP_THRESHOLD)).validate()


def main(argv: Optional[Sequence[str]] = None) -> int:
    a = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(a)
    except (ValueError, InvalidChannel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.command == "discriminate":
        return cmd_discriminate(cfg)
    if cfg.command == "certify":
        return cmd_certify(cfg, a.assert_hierarchy, cfg.out)
    if cfg.command == "hierarchy-scan":
        return cmd_hierarchy_scan(cfg)
    return cmd_sweep(cfg)


if __name__ == "__main__":
    sys.exit(main())

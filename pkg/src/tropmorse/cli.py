#
#   Batch front-end: configuration ingestion, orchestration of the
#   enumeration / solving / verification pipeline, and deterministic
#   machine-readable JSON reports.
#
#   Exit codes: 0 = success / relation holds, 1 = relation violated,
#   2 = invalid configuration or unstable input.
#

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from .base_geometry import Lagrangian, auto_perturb
from .fukaya_products import (ProductRequest, assemble_mu, chain_map_check,
                              verify_a_infinity, verify_quantum)
from .stable_graph import enumerate_iso_classes

EXIT_OK = 0
EXIT_RELATION = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    """Raised for any malformed or infeasible run configuration."""


def parse_sigma(text):
    """Parse cycle notation "(1 2)(3)" into a list of integer tuples,
    preserving the written cycle order and rotations."""
    if isinstance(text, (list, tuple)):
        cycles = [tuple(int(x) for x in cyc) for cyc in text]
    else:
        parts = re.findall(r"\(([^()]*)\)", str(text))
        stripped = re.sub(r"[\s()0-9,]", "", str(text))
        if stripped or not parts:
            raise ConfigError("cannot parse cycle notation: %r" % (text,))
        cycles = [tuple(int(x) for x in re.split(r"[\s,]+", p.strip()) if x)
                  for p in parts]
    if any(not cyc for cyc in cycles):
        raise ConfigError("empty cycle in %r" % (text,))
    letters = sorted(x for cyc in cycles for x in cyc)
    if letters != list(range(1, len(letters) + 1)):
        raise ConfigError("cycle letters must be exactly 1..n")
    return cycles


def _fraction(value, what):
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ConfigError("bad rational for %s: %r" % (what, value))


class RunConfig:
    """A resolved run configuration: circle size, Lagrangian chains split
    along the sigma cycles, grading b, and the series cutoff."""

    def __init__(self, data):
        try:
            self.d = int(data.get("d", 1))
        except (TypeError, ValueError):
            raise ConfigError("d must be an integer")
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        self.b = data.get("b", 0)
        if self.b not in (0, 1):
            raise ConfigError("b must be 0 or 1")
        self.q_order = _fraction(data.get("q_order", 4 * self.d), "q_order")
        if self.q_order <= 0:
            raise ConfigError("q_order must be positive")
        self.seed = data.get("seed")
        slopes = data.get("slopes")
        if slopes is None:
            raise ConfigError("missing slopes")
        try:
            self.slopes = [int(s) for s in slopes]
        except (TypeError, ValueError):
            raise ConfigError("slopes must be a list of integers")
        sigma = data.get("sigma")
        if sigma is None:
            sigma = [tuple(range(1, len(self.slopes) + 1))]
        self.sigma = parse_sigma(sigma)
        if sum(len(c) for c in self.sigma) != len(self.slopes):
            raise ConfigError("sigma letter count must equal len(slopes)")
        offsets = data.get("offsets", "auto")
        if offsets == "auto":
            lagr = auto_perturb(self.slopes, self.d)
        else:
            if len(offsets) != len(self.slopes):
                raise ConfigError("offsets length must match slopes")
            lagr = [Lagrangian(n, _fraction(v, "offset"), self.d)
                    for n, v in zip(self.slopes, offsets)]
        self.lagrangians = lagr
        self.chains = []
        k = 0
        for cyc in self.sigma:
            self.chains.append(lagr[k:k + len(cyc)])
            k += len(cyc)

    def product_request(self):
        try:
            return ProductRequest(self.d, self.chains, self.sigma, self.b,
                                  self.q_order)
        except (ValueError, AssertionError) as exc:
            raise ConfigError(str(exc))

    def to_json(self):
        return {
            "d": self.d,
            "b": self.b,
            "q_order": str(self.q_order),
            "sigma": [list(c) for c in self.sigma],
            "lagrangians": [{"n": L.n, "offset": str(L.offset)}
                            for L in self.lagrangians],
        }


def _load_config(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError("cannot read config: %s" % exc)
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    if args.d is not None:
        data["d"] = args.d
    if args.b is not None:
        data["b"] = args.b
    if args.q_order is not None:
        data["q_order"] = args.q_order
    if args.sigma is not None:
        data["sigma"] = args.sigma
    if args.seed is not None:
        data["seed"] = args.seed
    if getattr(args, "slopes", None):
        data["slopes"] = args.slopes
    return data


def _meta(args):
    threads = os.environ.get("TF_THREADS")
    return {
        "seed": args.seed,
        "threads_cap": int(threads) if threads and threads.isdigit() else None,
        "execution": "single-threaded deterministic",
    }


def _emit(payload, json_out):
    text = json.dumps(payload, sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"
    if json_out:
        with open(json_out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_graphs(args):
    if args.n is None or args.b is None:
        raise ConfigError("graphs needs --n and --b")
    try:
        classes = enumerate_iso_classes(args.n, args.b)
    except ValueError as exc:
        raise ConfigError(str(exc))
    payload = {
        "command": "graphs",
        "meta": _meta(args),
        "n": args.n,
        "b": args.b,
        "count": len(classes),
        "classes": [g.to_json() for g in classes],
    }
    _emit(payload, args.json_out)
    return EXIT_OK


def cmd_product(args):
    cfg = RunConfig(_load_config(args))
    req = cfg.product_request()
    try:
        mu = assemble_mu(req)
    except ValueError as exc:
        raise ConfigError(str(exc))
    payload = {
        "command": "product",
        "meta": _meta(args),
        "config": cfg.to_json(),
        "arity": mu.arity,
        "declared_degree": mu.declared_degree,
        "is_zero": mu.is_zero(),
        "terms": mu.to_json(),
    }
    _emit(payload, args.json_out)
    return EXIT_OK


def cmd_verify(args):
    data = _load_config(args)
    if args.relation == "ainf":
        cfg = RunConfig(dict(data, b=0, sigma=None))
        if len(cfg.lagrangians) != 4:
            raise ConfigError("verify ainf needs exactly 4 slopes")
        report = verify_a_infinity(cfg.lagrangians, cfg.q_order, cfg.d)
        shown = cfg.to_json()
    elif args.relation == "quantum":
        cfg = RunConfig(dict(data, b=1))
        req = cfg.product_request()
        report = verify_quantum(req, cfg.q_order)
        shown = cfg.to_json()
    elif args.relation == "chainmap":
        n = args.n if args.n is not None else data.get("n")
        b = args.b if args.b is not None else data.get("b")
        if n is None or b is None:
            raise ConfigError("verify chainmap needs --n and --b")
        d = int(data.get("d", 1))
        q = _fraction(data.get("q_order", 4 * d), "q_order")
        try:
            report = chain_map_check(int(n), int(b), Q=q, d=d)
        except ValueError as exc:
            raise ConfigError(str(exc))
        shown = {"n": int(n), "b": int(b), "d": d, "q_order": str(q)}
    else:
        raise ConfigError("unknown relation %r" % (args.relation,))
    payload = {
        "command": "verify",
        "relation": args.relation,
        "meta": _meta(args),
        "config": shown,
        "report": report.to_json(),
    }
    _emit(payload, args.json_out)
    return EXIT_OK if report.verdict == "pass" else EXIT_RELATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tropmorse",
        description="Exact tropical Morse tree/graph products on R/dZ and "
                    "their relation verifiers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--n", type=int, help="arity / leg count")
        p.add_argument("--b", type=int, help="genus grading")
        p.add_argument("--d", type=int, help="circle circumference")
        p.add_argument("--q-order", dest="q_order",
                       help="series truncation order (rational)")
        p.add_argument("--sigma", help='boundary cycles, e.g. "(1 2)(3)"')
        p.add_argument("--slopes", type=int, nargs="+",
                       help="Lagrangian slopes in slot order")
        p.add_argument("--seed", type=int, help="seed recorded in reports")
        p.add_argument("--json-out", dest="json_out",
                       help="also write the JSON report to this path")

    p_graphs = sub.add_parser("graphs",
                              help="enumerate stable-graph isomorphism classes")
    common(p_graphs)
    p_graphs.set_defaults(func=cmd_graphs)

    p_prod = sub.add_parser("product", help="assemble a product tensor")
    common(p_prod)
    p_prod.set_defaults(func=cmd_product)

    p_verify = sub.add_parser("verify", help="verify a relation")
    p_verify.add_argument("relation", choices=["ainf", "quantum", "chainmap"])
    common(p_verify)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: PDF tables, moments, RIPS runs, self-energies.

Every command is deterministic given its flags and seed, writes CSV or JSON
with a config-hash echo, and uses the exit-code contract 0 = success (all
RIPS verdicts pass), 1 = a RIPS verdict failed, 2 = configuration error.
"""

import argparse
import hashlib
import json
import re
import sys

import numpy as np

from . import master, physics, rips, rng
from .distributions import (
    BallGeometry,
    GaussianDensity,
    RadialShellsDensity,
    UniformDensity,
    gaussian_moment,
    gaussian_pdf,
    hardcore_moment,
    make_distribution,
    two_shell_pdf,
    uniform_moment,
    uniform_pdf,
)
from .errors import ConfigurationError, StreamExhaustedError

# ---------------------------------------------------------------------------
# Safe polynomial expressions over x1..x9 (+, -, *, integer ^, parentheses)
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)|(?P<var>[xyz]\d*)"
    r"|(?P<op>[-+*^()]))"
)
_VAR_INDEX = {"x": 0, "y": 1, "z": 2}


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ConfigurationError(f"bad character in expression at {text[pos:]!r}")
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num"))))
        elif m.lastgroup == "var":
            name = m.group("var")
            if len(name) > 1:
                idx = int(name[1:]) - 1
                if idx < 0:
                    raise ConfigurationError(f"variables are x1..x9, got {name}")
            else:
                idx = _VAR_INDEX[name]
            tokens.append(("var", idx))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _PolyParser:
    """Recursive descent for +, -, *, integer ^ over coordinate variables."""

    def __init__(self, tokens, dim):
        self.tokens = tokens
        self.pos = 0
        self.dim = dim

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _take(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def parse(self):
        fn = self._expr()
        if self.pos != len(self.tokens):
            raise ConfigurationError("trailing tokens in expression")
        return fn

    def _expr(self):
        left = self._term()
        while self._peek() == ("op", "+") or self._peek() == ("op", "-"):
            _, op = self._take()
            right = self._term()
            if op == "+":
                left = (lambda a, b: lambda p: a(p) + b(p))(left, right)
            else:
                left = (lambda a, b: lambda p: a(p) - b(p))(left, right)
        return left

    def _term(self):
        left = self._factor()
        while self._peek() == ("op", "*"):
            self._take()
            right = self._factor()
            left = (lambda a, b: lambda p: a(p) * b(p))(left, right)
        return left

    def _factor(self):
        kind, val = self._peek()
        if (kind, val) == ("op", "-"):
            self._take()
            inner = self._factor()
            return lambda p: -inner(p)
        base = self._base()
        if self._peek() == ("op", "^"):
            self._take()
            kind, power = self._take()
            if kind != "num" or power != int(power) or power < 0:
                raise ConfigurationError("exponent must be a nonnegative integer")
            k = int(power)
            return (lambda b, kk: lambda p: b(p) ** kk)(base, k)
        return base

    def _base(self):
        kind, val = self._take()
        if kind == "num":
            return lambda p, v=val: np.full(p.shape[0], v)
        if kind == "var":
            if val >= self.dim:
                raise ConfigurationError(
                    f"variable x{val + 1} exceeds dimension {self.dim}"
                )
            return lambda p, i=val: p[:, i]
        if (kind, val) == ("op", "("):
            inner = self._expr()
            if self._take() != ("op", ")"):
                raise ConfigurationError("unbalanced parentheses")
            return inner
        raise ConfigurationError(f"unexpected token {val!r}")


def parse_polynomial_density(expr: str, dim: int):
    """Compile a polynomial expression into a vectorized density callable."""
    if expr == "x4y4":
        if dim != 2:
            raise ConfigurationError("the x4y4 builtin density is 2-dimensional")
        return lambda p: p[:, 0] ** 4 * p[:, 1] ** 4
    fn = _PolyParser(_tokenize(expr), dim).parse()

    def density(p):
        vals = np.asarray(fn(np.atleast_2d(p)), dtype=float)
        if np.any(vals < 0.0):
            raise ConfigurationError("density expression is negative on the ball")
        return vals

    return density


# ---------------------------------------------------------------------------
# Density specs and shared helpers
# ---------------------------------------------------------------------------

def _parse_density_spec(spec, dim, sigma):
    if spec == "uniform":
        return UniformDensity()
    if spec == "gaussian":
        return GaussianDensity(sigma)
    if spec.startswith("shells:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigurationError(
                "shell spec is shells:<breakpoints>:<densities>, e.g. shells:0.5,1:2,1"
            )
        breaks = tuple(float(v) for v in parts[1].split(","))
        dens = tuple(float(v) for v in parts[2].split(","))
        return RadialShellsDensity(breakpoints=breaks, densities=dens)
    if spec.startswith("general:"):
        return parse_polynomial_density(spec[len("general:"):], dim)
    raise ConfigurationError(f"unknown density spec {spec!r}")


def _config_hash(args):
    payload = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()
    ).hexdigest()


def _open_out(args):
    if args.out:
        return open(args.out, "w"), True
    return sys.stdout, False


def _count(text):
    value = float(text)
    if value != int(value) or value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return int(value)


def _write_csv(args, header, rows):
    fh, close = _open_out(args)
    try:
        fh.write(f"# config: {_config_hash(args)}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")
    finally:
        if close:
            fh.close()


def _write_json(args, payload):
    payload = dict(payload)
    payload["config"] = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    payload["config_sha256"] = _config_hash(args)
    fh, close = _open_out(args)
    try:
        json.dump(payload, fh, sort_keys=True, default=str)
        fh.write("\n")
    finally:
        if close:
            fh.close()


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_pdf(args):
    dim = args.dim
    density = _parse_density_spec(args.density, dim, args.sigma)
    if isinstance(density, GaussianDensity):
        top = 8.0 * args.sigma
        grid = np.linspace(0.0, top, args.grid)
        vals = gaussian_pdf(dim, args.sigma, grid)
        rows = [f"{float(s)!r},{float(v)!r}" for s, v in zip(grid, vals)]
        _write_csv(args, "s,pdf", rows)
        return 0
    geom = BallGeometry(dim, args.radius)
    grid = np.linspace(0.0, 2.0 * args.radius, args.grid)
    if callable(density):  # polynomial general density: Monte Carlo estimate
        engine = rng.make_engine(args.rng, args.seed, alpha=args.alpha)
        est = master.general_pdf_mc(
            geom, density, grid, args.mc_samples, engine, substreams=args.jobs
        )
        rows = [
            f"{float(s)!r},{float(v)!r},{float(e)!r}"
            for s, v, e in zip(est.grid, est.values, est.stderr)
        ]
        _write_csv(args, "s,pdf,stderr", rows)
        return 0
    if isinstance(density, UniformDensity):
        vals = uniform_pdf(geom, grid)
    elif (
        isinstance(density, RadialShellsDensity)
        and dim == 3
        and len(density.densities) == 2
        and abs(density.breakpoints[0] - 0.5 * args.radius) < 1e-12
        and abs(density.breakpoints[1] - args.radius) < 1e-12
    ):
        vals = two_shell_pdf(args.radius, *density.densities, grid)
    else:
        dist = make_distribution(geom, density)
        vals = np.array([dist.pdf(s) for s in grid])
    rows = [f"{float(s)!r},{float(v)!r}" for s, v in zip(grid, vals)]
    _write_csv(args, "s,pdf", rows)
    return 0


def cmd_moment(args):
    dim = args.dim
    if args.density == "gaussian":
        value = gaussian_moment(dim, args.sigma, args.m)
        formula = "gaussian-space moment (2 sigma)^m Gamma((n+m)/2)/Gamma(n/2)"
    elif args.density == "uniform" and args.rc is not None:
        geom = BallGeometry(dim, args.radius)
        value = hardcore_moment(geom, args.rc, args.m)
        formula = "hard-core moment H(R,r_c,m,n)/H(R,r_c,0,n) via incomplete betas"
    elif args.density == "uniform":
        geom = BallGeometry(dim, args.radius)
        value = uniform_moment(geom, args.m)
        formula = "uniform-ball moment 2^(n+m) n/(n+m) beta-ratio R^m"
    else:
        dist = make_distribution(
            BallGeometry(dim, args.radius),
            _parse_density_spec(args.density, dim, args.sigma),
        )
        value = dist.moment(args.m)
        formula = "quadrature of s^m against the numeric distance PDF"
    _write_json(args, {"value": value, "m": args.m, "formula": formula})
    return 0


def cmd_rips(args):
    dims = [int(v) for v in args.dims.split(",")]
    reports = []
    for dim in dims:
        if args.rng == "external":
            if not args.stream:
                raise ConfigurationError("--rng external needs --stream FILE|-")
            if args.stream == "-":
                stream = None
                engine = rng.make_engine(
                    "external", stream=sys.stdin.buffer, stream_label="<stdin>"
                )
            else:
                stream = open(args.stream, "rb")
                engine = rng.make_engine(
                    "external", stream=stream, stream_label=args.stream
                )
        else:
            stream = None
            engine = rng.make_engine(args.rng, args.seed, alpha=args.alpha)
        try:
            mapping = args.mapping or rips.default_mapping(dim)
            report = rips.rips_run(
                dim, engine, args.triples, density=args.density,
                radius=args.radius, sigma=args.sigma, mapping=mapping,
                z_threshold=args.z_threshold, shards=args.jobs,
            )
        finally:
            if stream is not None:
                stream.close()
        reports.append(report)

    if args.format == "csv":
        _write_csv(args, rips.RipsReport.CSV_HEADER,
                   [rep.csv_row() for rep in reports])
    else:
        _write_json(args, {"reports": [json.loads(rep.to_json()) for rep in reports]})
    for rep in reports:
        if rep.error and "exhausted" in rep.error:
            raise StreamExhaustedError(rep.error)
    return 0 if all(rep.verdict == "pass" for rep in reports) else 1


def cmd_selfenergy(args):
    if args.kind == "coulomb":
        system = physics.CoulombSystem(
            charge_count=args.Z,
            elementary_charge=args.e,
            geometry=BallGeometry(args.dim, args.radius),
        )
        result = physics.SelfEnergyResult.coulomb(system)
    else:
        if args.rc is not None and args.rc <= 0.0:
            raise ConfigurationError("hard core must be positive")
        if args.rc is None:
            raise ConfigurationError(
                "the 1/s^5 pair energy diverges without a hard core: "
                "m = -5 < -(n-1) = -2 violates the moment rule; pass --rc"
            )
        density = (
            UniformDensity() if args.density == "uniform"
            else GaussianDensity(args.sigma)
        )
        system = physics.NeutrinoSystem(
            neutron_count=args.N, fermi_constant=args.GF, hard_core=args.rc,
            density=density, radius=args.radius, sigma=args.sigma,
        )
        result = physics.SelfEnergyResult.neutrino(system)
    _write_json(args, json.loads(result.to_json()))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="nballdist",
        description="Distance distributions in n-balls and the RIPS RNG test",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pdf = sub.add_parser("pdf", help="tabulate a distance PDF as CSV")
    pdf.add_argument("--dim", type=int, default=3)
    pdf.add_argument("--density", default="uniform",
                     help="uniform | gaussian | shells:b1,..:d1,.. | general:<expr>")
    pdf.add_argument("--radius", type=float, default=1.0)
    pdf.add_argument("--sigma", type=float, default=1.0)
    pdf.add_argument("--grid", type=int, default=256, help="number of grid points")
    pdf.add_argument("--mc-samples", type=_count, default=100_000,
                     help="total Monte Carlo sample budget (general densities)")
    pdf.add_argument("--rng", default="ran0", choices=["ran0", "r31", "nws"])
    pdf.add_argument("--seed", type=int, default=1)
    pdf.add_argument("--alpha", type=float, default=None)
    pdf.add_argument("--jobs", type=int, default=1)
    pdf.add_argument("--out", default=None)
    pdf.set_defaults(func=cmd_pdf)

    mom = sub.add_parser("moment", help="closed-form distance moments as JSON")
    mom.add_argument("--dim", type=int, default=3)
    mom.add_argument("--density", default="uniform")
    mom.add_argument("--m", type=int, required=True)
    mom.add_argument("--radius", type=float, default=1.0)
    mom.add_argument("--sigma", type=float, default=1.0)
    mom.add_argument("--rc", type=float, default=None,
                     help="hard-core radius (uniform density only)")
    mom.add_argument("--out", default=None)
    mom.set_defaults(func=cmd_moment)

    rp = sub.add_parser("rips", help="run the RIPS randomness test")
    rp.add_argument("--rng", default="ran0",
                    choices=["ran0", "r31", "nws", "external"])
    rp.add_argument("--seed", type=int, default=1)
    rp.add_argument("--alpha", type=float, default=None)
    rp.add_argument("--stream", default=None,
                    help="binary little-endian 64-bit words: a file path or - for stdin")
    rp.add_argument("--dims", default="3", help="comma-separated dimensions")
    rp.add_argument("--triples", type=_count, default=10**6)
    rp.add_argument("--density", default="uniform", choices=["uniform", "gaussian"])
    rp.add_argument("--radius", type=float, default=1.0)
    rp.add_argument("--sigma", type=float, default=1.0)
    rp.add_argument("--mapping", default=None, choices=["rejection", "polar"])
    rp.add_argument("--z-threshold", type=float, default=4.0)
    rp.add_argument("--jobs", type=int, default=1)
    rp.add_argument("--format", default="json", choices=["json", "csv"])
    rp.add_argument("--out", default=None)
    rp.set_defaults(func=cmd_rips)

    se = sub.add_parser("selfenergy", help="pairwise self-energies as JSON")
    se.add_argument("kind", choices=["coulomb", "nunubar"])
    se.add_argument("--dim", type=int, default=3)
    se.add_argument("--Z", type=int, default=2, help="charge count (coulomb)")
    se.add_argument("--e", type=float, default=1.0, help="elementary charge")
    se.add_argument("--N", type=int, default=2, help="neutron count (nunubar)")
    se.add_argument("--GF", type=float, default=1.0, help="Fermi constant")
    se.add_argument("--rc", type=float, default=None, help="hard-core radius")
    se.add_argument("--density", default="uniform", choices=["uniform", "gaussian"])
    se.add_argument("--radius", type=float, default=1.0)
    se.add_argument("--sigma", type=float, default=1.0)
    se.add_argument("--out", default=None)
    se.set_defaults(func=cmd_selfenergy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StreamExhaustedError as exc:
        print(f"external stream error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point ``chaoszeta``.

Exit codes: 0 on success, 2 when a checked invariant fails, 1 on an
operational error (bad arguments, unreadable config, I/O).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .arith import unit_group_structure
from .characters import enumerate_characters, value_table_rows
from .harness.config import ConfigError, load_config
from .harness.experiments import omega_angles, run_experiment
from .harness.report import ExperimentResult, emit

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _bump_args(p: argparse.ArgumentParser):
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1.0)


def _complex(text: str) -> complex:
    parts = [float(x) for x in text.split(",")]
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected RE,IM")
    return complex(*parts)


def _tuples(text: str):
    """``"2:1:0,3:0:1"`` -> ``[(2, 1, 0), (3, 0, 1)]``; a path to a JSON list of triples also works."""
    if text.endswith(".json"):
        try:
            with open(text) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise argparse.ArgumentTypeError(f"cannot read tuples from {text}: {exc}")
        return [tuple(int(v) for v in t) for t in data]
    out = []
    for item in text.split(","):
        n, k, m = (int(v) for v in item.split(":"))
        out.append((n, k, m))
    return out


class _Parser(argparse.ArgumentParser):
    # usage errors are operational (exit 1); exit 2 is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaoszeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run an experiment from a JSON config")
    p.add_argument("--config", required=True)
    _common(p)

    p = sub.add_parser("chars", help="table of character angles mod q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dump", default=None, help="write the n x character table of angle fractions here")
    _common(p)

    p = sub.add_parser("moments", help="character moment by enumeration against the exact oracles")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tuples", type=_tuples, required=True, help="n:k:m,... for prod chi(n)^k conj(chi(n))^m, or FILE.json")
    p.add_argument("--mc-samples", type=int, default=0, help="Monte Carlo samples of the omega moment")
    _common(p)

    p = sub.add_parser("testfn", help="fhat(log n / 2pi) table of a bump")
    _bump_args(p)
    p.add_argument("--nmax", type=int, default=20)
    _common(p)

    p = sub.add_parser("zeta", help="Riemann zeta at s")
    p.add_argument("--s", type=_complex, required=True, help="RE,IM")
    _common(p)

    p = sub.add_parser("kernel", help="log zeta(1 + iu)")
    p.add_argument("--u", type=float, required=True)
    _common(p)

    p = sub.add_parser("functional", help="smoothed L-functionals")
    p.add_argument("--kind", choices=("Lq", "LMq", "LMomega", "eulerprod"), required=True)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--chi", type=int, default=1, help="character index mod q")
    p.add_argument("--M", type=int, default=10)
    p.add_argument("--N", type=int, default=10)
    p.add_argument("--samples", type=int, default=1)
    _bump_args(p)
    _common(p)

    p = sub.add_parser("oracle", help="closed-form and exact oracles")
    p.add_argument("--which", choices=("lemma0", "lemma2", "lemma3", "kernel", "em1m2", "cov"), required=True)
    p.add_argument("--q", type=int, default=101)
    p.add_argument("--M", type=int, default=10)
    p.add_argument("--M1", type=int, default=8)
    p.add_argument("--M2", type=int, default=2)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1000)
    _bump_args(p)
    _common(p)
    return parser


def _write(result: ExperimentResult, args):
    text = emit(result, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)


def _bump(args):
    from .testfn import TestFunction

    return TestFunction(args.center, args.width, args.amplitude)


def cmd_run(args) -> ExperimentResult:
    cfg = load_config(args.config)
    if args.seed is not None and args.seed != cfg.seed:
        cfg = cfg.replace(seed=args.seed)
    return run_experiment(cfg, args.threads)


def cmd_chars(args) -> ExperimentResult:
    res = ExperimentResult("chars")
    d = unit_group_structure(args.q).exponent
    if args.dump is not None:
        rows = list(value_table_rows(args.q))
        try:
            with open(args.dump, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["n"] + [f"chi{j}" for j in range(len(rows[0][1]))])
                for n, angles in rows:
                    w.writerow([n] + angles)
        except OSError as exc:
            raise OSError(f"cannot write table to {args.dump}: {exc}") from exc
    for n, angles in value_table_rows(args.q):
        for j, a in enumerate(angles):
            if a != "-":
                num, _, den = a.partition("/")
                res.add(f"angle[chi={j}]", int(num) / int(den or 1), q=args.q, N=n)
    res.add("group_exponent", float(d), q=args.q)
    return res


def cmd_moments(args) -> ExperimentResult:
    from .oracles import character_moment
    from .randmodel import chi_moment_oracle, omega_moment_oracle

    res = ExperimentResult("moments")
    enum = character_moment(args.q, args.tuples)
    oracle = chi_moment_oracle(args.q, args.tuples)
    res.add("enumeration", enum, q=args.q)
    res.add("chi_oracle", oracle, q=args.q)
    res.add("omega_oracle", omega_moment_oracle(args.tuples), q=args.q)
    res.check("enumeration equals chi oracle", abs(enum - oracle) <= 1e-10)
    if args.mc_samples:
        import numpy as np

        from .arith import primes_up_to
        from .randmodel import multiplicative_angles

        seed = args.seed or 0
        top = max(n for n, _, _ in args.tuples)
        theta = omega_angles(max(top, 2), seed, args.mc_samples, args.threads, tag="moments")
        ang = multiplicative_angles(theta, primes_up_to(max(top, 2)), top)
        total = sum((k - m) * ang[:, n] for n, k, m in args.tuples)
        z = np.exp(2j * np.pi * total)
        mean = complex(z.mean())
        se = float(np.sqrt(z.real.var(ddof=1) + z.imag.var(ddof=1)) / np.sqrt(z.size))
        res.add("omega_mc", mean, q=args.q, seed=seed, ci_low=mean.real - 5 * se, ci_high=mean.real + 5 * se)
        res.check("Monte Carlo within 5 SE of omega oracle", abs(mean - omega_moment_oracle(args.tuples)) <= 5 * se + 1e-12)
    return res


def cmd_testfn(args) -> ExperimentResult:
    from .testfn import build_cache

    res = ExperimentResult("testfn")
    cache = build_cache(_bump(args), args.nmax)
    for n in range(1, args.nmax + 1):
        res.add("fhat", cache[n], N=n)
    return res


def cmd_zeta(args) -> ExperimentResult:
    from .zetafn import zeta_with_bound

    res = ExperimentResult("zeta")
    val, bound = zeta_with_bound(args.s)
    res.add("zeta", val, sigma=args.s.real, t=args.s.imag)
    res.add("remainder_bound", bound, sigma=args.s.real, t=args.s.imag)
    return res


def cmd_kernel(args) -> ExperimentResult:
    from .zetafn import covariance_kernel

    res = ExperimentResult("kernel")
    res.add("log_zeta", covariance_kernel(args.u), sigma=1.0, t=args.u)
    return res


def cmd_functional(args) -> ExperimentResult:
    from .arith import primes_up_to
    from .functionals import (
        L_functional,
        L_omega_truncated_batch,
        L_truncated,
        euler_product_functional_batch,
    )
    from .testfn import build_cache

    res = ExperimentResult("functional")
    f = _bump(args)
    chars = enumerate_characters(args.q)
    if not 0 <= args.chi < len(chars):
        raise ValueError(f"character index must lie in 0..{len(chars) - 1}")
    chi = chars[args.chi]
    seed = args.seed or 0
    tags = dict(q=args.q, seed=seed)
    if args.kind == "Lq":
        v = L_functional(f, None, chi)
        res.add("Lq", v.value, M1=v.cutoff, **tags)
        res.add("Lq_tail_bound", v.tail_bound, M1=v.cutoff, **tags)
    elif args.kind == "LMq":
        res.add("LMq", L_truncated(build_cache(f, args.M), chi, args.M), M1=args.M, **tags)
    else:
        P = max(args.M, args.N)
        theta = omega_angles(P, seed, args.samples, args.threads)
        primes = primes_up_to(P)
        if args.kind == "LMomega":
            vals = L_omega_truncated_batch(build_cache(f, args.M), theta, primes, args.M)
            name, extra = "LMomega", dict(M1=args.M)
        else:
            vals = euler_product_functional_batch(f, theta, primes, args.N)
            name, extra = "eulerprod", dict(N=args.N)
        for j, v in enumerate(vals):
            res.add(f"{name}[{j}]", complex(v), seed=seed, **extra)
    return res


def cmd_oracle(args) -> ExperimentResult:
    from . import oracles
    from .testfn import build_cache
    from .zetafn import covariance_kernel

    res = ExperimentResult("oracle")
    w = args.which
    if w == "lemma0":
        res.add("lemma_sum_zero", oracles.lemma_sum_zero(oracles.KernelSumSpec(args.q, weight="random", weight_seed=args.seed or 0)), q=args.q)
    elif w == "lemma2":
        res.add("ratio2", oracles.lemma_sum_ratio2(args.q, args.a, args.b, args.sigma), q=args.q, sigma=args.sigma)
    elif w == "lemma3":
        res.add("ratio3", oracles.lemma_sum_ratio3(args.q, args.a, args.b, args.sigma), q=args.q, sigma=args.sigma)
    elif w == "kernel":
        cache = build_cache(_bump(args), args.L * args.q)
        ks = oracles.variance_kernel_sum(args.q, args.M, cache, args.L)
        tags = dict(q=args.q, M1=args.M)
        for name in ("total", "S_M", "S_L", "S_LL"):
            res.add(name, getattr(ks, name), **tags)
    elif w == "em1m2":
        cache = build_cache(_bump(args), args.M1)
        res.add("E_M1M2", oracles.E_M1M2_closed(cache, args.M1, args.M2), M1=args.M1, M2=args.M2)
    else:
        res.add("prime_sum", oracles.gaussian_covariance_closed(args.u, args.N), N=args.N, t=args.u)
        res.add("prime_power_series", oracles.prime_power_log_series(args.u, args.N), N=args.N, t=args.u)
        res.add("log_zeta", covariance_kernel(args.u), t=args.u)
    return res


COMMANDS = {
    "run": cmd_run,
    "chars": cmd_chars,
    "moments": cmd_moments,
    "testfn": cmd_testfn,
    "zeta": cmd_zeta,
    "kernel": cmd_kernel,
    "functional": cmd_functional,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        _write(result, args)
    except (ConfigError, ValueError, OSError, RuntimeError) as exc:
        print(f"chaoszeta: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for c in result.checks:
        if not c.passed:
            print(f"FAILED {c.name}: {c.detail}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every subcommand loads a JSON shift spec, runs one analysis and writes its
reports to ``--out`` (default: the current directory).  Exit codes:
0 success, 1 other analysis error, 2 malformed spec, 3 budget exceeded or
truncated counts, 4 spectral failure, 5 inconsistent block split.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .counting import DEFAULT_BUDGET
from .diagram import (build_complete_diagram, build_hofbauer_diagram, max_measure,
                      scc_decompose, to_dot, to_text)
from .entropy import SLOPEFIT, TAILMAX, entropy_suite, estimate
from .errors import (BudgetExceeded, EmptyShift, InvalidSpec, QftError, SpectralFailure,
                     SplitOutOfRange)
from .follower import language_counts
from .oracles import LanguageOracle
from .specio import load_spec
from .zeta import (default_split, growth_ratio, periodic_counts, pole_estimates,
                   primitive_orbits, truncated_determinant, zeta_inverse_series, zeta_series)

EXIT_OK, EXIT_ERROR, EXIT_SPEC, EXIT_BUDGET, EXIT_SPECTRAL, EXIT_SPLIT = 0, 1, 2, 3, 4, 5


def fmt(x: float) -> str:
    return f"{x:.12g}"


def num(x: float) -> float:
    """Float rounded to 12 significant digits for JSON output."""
    return float(fmt(x))


class Writer:
    def __init__(self, out: Path):
        self.out = out
        self.written: list[Path] = []
        out.mkdir(parents=True, exist_ok=True)

    def json(self, name: str, obj) -> None:
        p = self.out / name
        p.write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")
        self.written.append(p)

    def csv(self, name: str, header: list[str], rows) -> None:
        p = self.out / name
        with p.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        self.written.append(p)

    def text(self, name: str, body: str) -> None:
        p = self.out / name
        p.write_text(body)
        self.written.append(p)

    def table(self, fmt_: str, stem: str, header: list[str], rows) -> None:
        rows = list(rows)
        if fmt_ == "json":
            self.json(stem + ".json", [dict(zip(header, r)) for r in rows])
        else:
            self.csv(stem + ".csv", header, rows)


def _oracle_meta(o: LanguageOracle) -> dict:
    return {"name": o.info.get("name"), "kind": o.kind, "alphabet": list(o.alphabet.labels),
            "exactness": str(o.exactness)}


# ---------------------------------------------------------------- commands

def cmd_entropy(o: LanguageOracle, args, w: Writer) -> int:
    n_max = args.n_max or 14
    res = entropy_suite(o, n_max, k=args.depth, horizon=args.horizon, r_max=args.r_max,
                        budget=args.budget,
                        hm_method=SLOPEFIT if args.hm_slopefit else TAILMAX)
    report = {"oracle": _oracle_meta(o), "params": res.params, "quantities": {}}
    for name, est in res.estimates.items():
        seq = res.sequences.get(name)
        entry = {"estimate": {**est.as_dict(), "value": num(est.value)}}
        if seq is not None:
            entry["sequence"] = {"n": seq.ns, "count": seq.counts}
            entry["flags"] = {"exact": seq.exact, "lower_bound": seq.lower_bound,
                              "truncated": seq.truncated}
            w.table(args.format, f"counts_{name}", ["n", "count", "certified", "depth", "exact"],
                    [(n, c, True, "exact" if seq.exact else (args.depth or n), seq.exact)
                     for n, c in zip(seq.ns, seq.counts)])
        report["quantities"][name] = entry
    v = res.verdict
    report["verdict"] = {"verdict": v.verdict, "margin": num(v.margin)}
    w.json("entropy_report.json", report)
    print(v.summary())
    print(" ".join(f"{k}_est={fmt(e.value)}" for k, e in res.estimates.items()))
    if res.truncated:
        print("warning: some count sequences were truncated by the budget", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _diagram(o: LanguageOracle, args, kind: str):
    if kind == "hofbauer":
        return build_hofbauer_diagram(o, args.depth)
    return build_complete_diagram(o, args.trunc or 8, args.depth)


def _component_rows(d, comps):
    rows = []
    for n, c in enumerate(comps):
        rows.append((n, len(c.component), " ".join(d.label(i) for i in c.component),
                     fmt(c.spectral_radius), fmt(c.entropy), c.period,
                     fmt(c.gurevich_estimate)))
    return rows


COMPONENT_HEADER = ["component", "size", "vertices", "spectral_radius", "entropy", "period",
                    "gurevich_estimate"]


def cmd_diagram(o: LanguageOracle, args, w: Writer) -> int:
    d = _diagram(o, args, args.kind)
    comps = scc_decompose(d)
    w.text("diagram.txt", to_text(d))
    w.text("diagram.dot", to_dot(d))
    w.table(args.format, "components", COMPONENT_HEADER, _component_rows(d, comps))
    live = [c for c in comps if c.has_cycle]
    print(f"kind={d.kind} vertices={len(d)} arrows={len(d.arrows)} escaped={len(d.escaped)} "
          f"components_with_cycles={len(live)}")
    for c in live:
        print(f"  component size={len(c.component)} entropy={fmt(c.entropy)} period={c.period}")
    return EXIT_OK


def cmd_zeta(o: LanguageOracle, args, w: Writer) -> int:
    deg = args.deg or 10
    table = periodic_counts(o, deg)
    zinv = zeta_inverse_series(table, deg)
    report = {"oracle": _oracle_meta(o), "degree": deg,
              "periodic_counts": {"counts": table.counts, "exact": table.exact,
                                  "method": table.method},
              "zeta_inverse": zinv.to_json(), "zeta": zeta_series(table, deg).to_json()}
    print("zeta_inverse: " + ", ".join(str(c) for c in zinv.coeffs))
    status = EXIT_OK
    if not args.no_det:
        d = build_complete_diagram(o, args.trunc or min(deg, 12), args.depth)
        k_trunc = args.k_trunc or len(d)
        n_split = args.split or min(default_split(d), k_trunc)
        b, det, prod = truncated_determinant(d, n_split, k_trunc, deg)
        poles = pole_estimates(det)
        report["determinant"] = {"truncation": d.truncation, "vertices": len(d),
                                 "ordering": "length-then-lex", "n_split": n_split,
                                 "k_trunc": k_trunc, "B": b.to_json(), "detD": det.to_json(),
                                 "product": prod.to_json()}
        w.table(args.format, "poles", ["re", "im", "modulus", "residual"],
                [(fmt(p.root.real), fmt(p.root.imag), fmt(p.modulus), fmt(p.residual))
                 for p in poles])
        print("product: " + ", ".join(str(c) for c in prod.coeffs))
        if poles:
            print(f"smallest_pole_modulus={fmt(poles[0].modulus)}")
    w.json("zeta.json", report)
    return status


def _h_top(o: LanguageOracle, args) -> float:
    if args.h is not None:
        return args.h
    seq = language_counts(o, args.n_max or 14, args.budget)
    return estimate(seq, TAILMAX).value


def cmd_perpoints(o: LanguageOracle, args, w: Writer) -> int:
    n_max = args.n_max or 14
    table = periodic_counts(o, n_max)
    h = _h_top(o, args)
    seq, (lo, hi) = growth_ratio(table, h)
    orbits = primitive_orbits(table)
    w.table(args.format, "periodic_counts", ["n", "p", "primitive_orbits", "growth_ratio"],
            [(n, table.p(n), orbits[n - 1], fmt(r)) for n, r in seq])
    print(f"method={table.method} exact={str(table.exact).lower()} h={fmt(h)} "
          f"tail_min={fmt(lo)} tail_max={fmt(hi)}")
    print("p: " + ", ".join(str(c) for c in table.counts))
    return EXIT_OK


def cmd_measure(o: LanguageOracle, args, w: Writer) -> int:
    d = _diagram(o, args, args.kind)
    comps = [c for c in scc_decompose(d) if c.has_cycle]
    if not comps:
        raise SpectralFailure("the diagram has no cycle")
    top = max(comps, key=lambda c: (c.spectral_radius, -c.component[0]))
    m = max_measure(top, d)
    w.json("measure.json", {
        "oracle": _oracle_meta(o), "diagram": {"kind": d.kind, "truncation": d.truncation},
        "states": [d.label(i) for i in m.states],
        "transition": [[num(x) for x in row] for row in m.transition],
        "stationary": [num(x) for x in m.stationary],
        "entropy": num(m.entropy), "log_spectral_radius": num(top.entropy)})
    print(f"entropy={fmt(m.entropy)} log_spectral_radius={fmt(top.entropy)} "
          f"states={len(m.states)}")
    return EXIT_OK


COMMANDS = {"entropy": cmd_entropy, "diagram": cmd_diagram, "zeta": cmd_zeta,
            "perpoints": cmd_perpoints, "measure": cmd_measure}


# ---------------------------------------------------------------- argument parsing

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="JSON shift spec")
    common.add_argument("--n-max", type=_positive, help="largest word length")
    common.add_argument("--depth", type=_positive,
                        help="follower depth k (only used without exact followers)")
    common.add_argument("--horizon", type=_positive, help="extendability horizon M")
    common.add_argument("--trunc", type=_positive, help="complete diagram truncation N")
    common.add_argument("--split", type=_positive, help="block split index n")
    common.add_argument("--k-trunc", type=_positive, help="vertices kept in the determinant")
    common.add_argument("--deg", type=_positive, help="series degree")
    common.add_argument("--jobs", type=_positive, default=1,
                        help="worker cap (computations are single-process)")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="format of the tabular outputs")

    p = argparse.ArgumentParser(prog="qft", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("entropy", parents=[common], help="count sequences and entropies")
    e.add_argument("--r-max", type=_positive, default=1)
    e.add_argument("--hm-slopefit", action="store_true",
                   help="fit h_M on nonzero lengths (for sparse sequences)")
    for name, helptext in (("diagram", "Markov diagram and components"),
                           ("measure", "maximal entropy Markov measure")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--kind", choices=["complete", "hofbauer"],
                       default="hofbauer" if name == "diagram" else "complete")
    z = sub.add_parser("zeta", parents=[common], help="zeta series and truncated determinant")
    z.add_argument("--no-det", action="store_true", help="skip the block determinant")
    pp = sub.add_parser("perpoints", parents=[common], help="periodic points and growth")
    pp.add_argument("--h", type=float, help="normalizing entropy (default: h_top estimate)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        o = load_spec(args.spec)
    except (InvalidSpec, EmptyShift) as e:
        print(f"qft: malformed spec: {e}", file=sys.stderr)
        return EXIT_SPEC
    try:
        return COMMANDS[args.command](o, args, Writer(args.out))
    except BudgetExceeded as e:
        print(f"qft: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except SpectralFailure as e:
        print(f"qft: spectral failure: {e} {e.diagnostics}", file=sys.stderr)
        return EXIT_SPECTRAL
    except SplitOutOfRange as e:
        print(f"qft: {e}", file=sys.stderr)
        return EXIT_SPLIT
    except (InvalidSpec, EmptyShift) as e:
        print(f"qft: malformed spec: {e}", file=sys.stderr)
        return EXIT_SPEC
    except (QftError, OverflowError, ValueError) as e:
        print(f"qft: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Commands operate on ``.nfg`` JSON documents (see :mod:`nfg.document`).
Exit codes: 0 success, 1 validation or contract error, 2 parse error.
Numbers are printed with 17 significant digits so output is bit-stable
across runs.  The optional NFG_THREADS environment variable caps the
numba threading layer.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import _kernels
from .corpus import run_corpus
from .document import _fmt_number, _fmt_pair, build_nfg, doc_from_nfg, parse, serialize
from .errors import CyclicGraphError, DocumentError, NfgError
from .evaluate import eval_external
from .holographic import fourier_dual, loop_series, loop_series_total
from .semirings import SEMIRINGS
from .sum_product import global_z, marginal, run_loopy, run_tree


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return build_nfg(parse(text))


def _fmt_values(values, semiring_name):
    if semiring_name == "min_sum":
        return "[" + ", ".join(_fmt_number(float(v.real)) for v in values) + "]"
    return "[" + ", ".join(_fmt_pair((v.real, v.imag)) for v in values) + "]"


def _fmt_scalar(value, semiring_name):
    if semiring_name == "min_sum":
        return _fmt_number(float(value))
    return _fmt_pair((value.real, value.imag))


def cmd_eval(args):
    nfg = _load(args.file)
    semiring = SEMIRINGS[args.semiring]
    result = eval_external(nfg, semiring)
    if result.degree == 0:
        print(_fmt_scalar(semiring.coerce_scalar(result.values.item()), semiring.name))
    else:
        print(f"ports: {list(result.ports)}", file=sys.stderr)
        print(_fmt_values(semiring.coerce(result.values).reshape(-1), semiring.name))
    return 0


def cmd_sumproduct(args):
    nfg = _load(args.file)
    try:
        state = run_tree(nfg)
    except CyclicGraphError as e:
        raise CyclicGraphError(f"{e} (use the 'loops' command for cyclic graphs)") from None
    edges = sorted({edge for edge, _ in state.messages})
    if not edges:
        raise NfgError("graph has no internal edges; nothing to pass messages over")
    pick = args.edge if args.edge is not None else edges[0]
    if pick not in edges:
        raise NfgError(f"--edge {pick!r} is not an internal edge of the graph")

    lines = ['{', '  "messages": [']
    entries = []
    for (edge, toward), msg in sorted(state.messages.items()):
        entries.append(
            f'    {{"edge": "{edge}", "toward": "{toward}", '
            f'"values": {_fmt_values(msg.values, "sum_product")}}}'
        )
    lines.append(",\n".join(entries))
    lines.append('  ],')
    lines.append('  "marginals": [')
    entries = [
        f'    {{"edge": "{edge}", "values": {_fmt_values(marginal(state, edge), "sum_product")}}}'
        for edge in edges
    ]
    lines.append(",\n".join(entries))
    lines.append('  ],')
    z = global_z(state, pick)
    lines.append(f'  "edge": "{pick}",')
    lines.append(f'  "z": {_fmt_pair((z.real, z.imag))}')
    lines.append('}')
    print("\n".join(lines))
    return 0


def cmd_dual(args):
    nfg = _load(args.file)
    dual, scale = fourier_dual(nfg)
    text = serialize(doc_from_nfg(dual))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(scale)
    return 0


def cmd_loops(args):
    nfg = _load(args.file)
    state = run_loopy(nfg, max_iters=args.iters, damping=args.damping, tol=args.tol)
    terms = loop_series(nfg, state)
    from .evaluate import eval_scalar

    z = eval_scalar(nfg)
    total = loop_series_total(terms)
    err = abs(total - z) / max(1.0, abs(z))
    print(f"converged: {str(state.converged).lower()} (residual {_fmt_number(state.residual)}, "
          f"{state.iterations} iterations)")
    print("subset  classification    value")
    for t in terms:
        bits = "".join(str(b) for b in t.subset)
        print(f"{bits}  {t.classification:18s}{_fmt_pair((t.value.real, t.value.imag))}")
    print(f"z: {_fmt_pair((z.real, z.imag))}")
    print(f"sum: {_fmt_pair((total.real, total.imag))}")
    print(f"reconstruction_error: {_fmt_number(err)}")
    return 0


def cmd_verify_corpus(args):
    results = run_corpus()
    failed = 0
    for name, ok, detail in results:
        if ok:
            print(f"PASS {name}: {detail}")
        else:
            failed += 1
            print(f"FAIL {name}: {detail}")
    return 0 if failed == 0 else 1


def _apply_thread_cap():
    raw = os.environ.get("NFG_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        raise NfgError(f"NFG_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise NfgError(f"NFG_THREADS must be a positive integer, got {raw!r}")
    if _kernels.NUMBA_AVAILABLE:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nfg",
        description="Evaluate and transform partition functions of normal factor graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a graph's partition function")
    p.add_argument("file")
    p.add_argument("--semiring", choices=sorted(SEMIRINGS), default="sum_product")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sumproduct", help="exact message passing on a cycle-free graph")
    p.add_argument("file")
    p.add_argument("--edge", default=None, help="edge whose messages give the reported Z")
    p.set_defaults(func=cmd_sumproduct)

    p = sub.add_parser("dual", help="write the Fourier dual graph")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("loops", help="loop-series expansion around a flooding fixed point")
    p.add_argument("file")
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--damping", type=float, default=0.0)
    p.set_defaults(func=cmd_loops)

    p = sub.add_parser("verify-corpus", help="run the built-in identity corpus")
    p.set_defaults(func=cmd_verify_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_thread_cap()
        return args.func(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NfgError, ZeroDivisionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

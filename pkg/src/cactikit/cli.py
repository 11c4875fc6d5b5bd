"""Command-line front end: cells, homology, verify, compose."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import verification
from .cacti import (BasedCactusCell, CellError, NecklaceCell, based_complex, enumerate_based_cells,
                    enumerate_necklaces, unbased_complex)
from .homology import betti_mod2, homology, mod2_prediction
from .moduli import (DEFAULT_MAX_ARITY, DecoratedTreeCell, ModuliError, compose_dual, dual_complex,
                     moduli_cells, primal_complex)
from .operads import CompositionError, compose_based, compose_grav
from .trees import NestedTree, TreeError

SPACES = ("based", "unbased", "moduli", "dual")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    max_arity: int = DEFAULT_MAX_ARITY
    coeff: str = "z"
    format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.max_arity < 2:
            raise UsageError("max-arity must be at least 2")
        if self.coeff not in ("z", "f2"):
            raise UsageError(f"unknown coefficient mode {self.coeff!r}")
        if self.format not in ("json", "csv", "table"):
            raise UsageError(f"unknown format {self.format!r}")


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.strip('"').strip("'")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-arity", type=int, default=None)
    common.add_argument("--coeff", choices=("z", "f2"), default=None)
    common.add_argument("--format", choices=("json", "csv", "table"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--config", default=None)

    p = argparse.ArgumentParser(prog="cactikit", description="Cellular models of cacti and moduli spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cells", parents=[common], help="list cells of a complex")
    c.add_argument("--space", choices=SPACES, required=True)
    c.add_argument("--arity", type=int, required=True)
    c.add_argument("--dim", type=int, default=None)

    h = sub.add_parser("homology", parents=[common], help="Betti numbers and torsion")
    h.add_argument("--space", choices=SPACES, required=True)
    h.add_argument("--arity", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="run checks and print certificates")
    v.add_argument("--check", choices=verification.CHECKS + ("all",), required=True)
    v.add_argument("--arity", type=int, default=None)
    v.add_argument("--k", type=int, default=None)
    v.add_argument("--l", type=int, default=None)

    m = sub.add_parser("compose", parents=[common], help="compose two cells")
    m.add_argument("kind", choices=("based", "grav", "dual"))
    m.add_argument("left")
    m.add_argument("right")
    m.add_argument("--slot", type=int, required=True)
    return p


def resolve_config(args) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    known = {"max_arity", "coeff", "format", "seed"}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    kw = {}
    for key in known:
        flag = getattr(args, key, None)
        if flag is not None:
            kw[key] = flag
        elif key in values:
            kw[key] = int(values[key]) if key in ("max_arity", "seed") else values[key]
    return RunConfig(**kw)


# -- rendering ------------------------------------------------------------------

def _cell_text(cell) -> str:
    return repr(cell)


def _emit_rows(out, fmt: str, header: list[str], rows: list[list], summary: dict):
    if fmt == "json":
        out.write(json.dumps(summary, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
        for row in [header] + rows:
            out.write("  ".join(str(x).ljust(wd) for x, wd in zip(row, widths)).rstrip() + "\n")


def _check_arity(n: int, cfg: RunConfig, space: str):
    low = 1 if space == "based" else 2
    if n < low:
        raise UsageError(f"{space} cells need arity >= {low}")
    if n > cfg.max_arity:
        raise UsageError(f"arity {n} above max-arity {cfg.max_arity}")


def _cells(space: str, n: int, cfg: RunConfig):
    if space == "based":
        return [(c, c.dim) for c in enumerate_based_cells(n)]
    if space == "unbased":
        return [(c, c.dim) for c in enumerate_necklaces(n)]
    cells = moduli_cells(n, max_arity=cfg.max_arity)
    if space == "moduli":
        return [(c, c.primal_dim) for c in cells]
    return sorted(((c, c.dual_degree) for c in cells), key=lambda t: (t[1], t[0].sort_key()))


def _complex(space: str, n: int, cfg: RunConfig):
    if space == "based":
        return based_complex(n)
    if space == "unbased":
        return unbased_complex(n)
    if space == "moduli":
        return primal_complex(n, max_arity=cfg.max_arity)
    return dual_complex(n, max_arity=cfg.max_arity)


def cmd_cells(args, cfg: RunConfig, out) -> int:
    _check_arity(args.arity, cfg, args.space)
    cells = _cells(args.space, args.arity, cfg)
    if args.dim is not None:
        cells = [t for t in cells if t[1] == args.dim]
    counts: dict[int, int] = {}
    for _, d in cells:
        counts[d] = counts.get(d, 0) + 1
    key = "degree" if args.space == "dual" else "dim"
    rows = [[_cell_text(c), d] for c, d in cells]
    summary = {"space": args.space, "arity": args.arity, "total": len(cells),
               "counts": {str(d): counts[d] for d in sorted(counts)},
               "cells": [{"cell": verification.cell_to_json(c), key: d} for c, d in cells]}
    _emit_rows(out, cfg.format, ["cell", key], rows, summary)
    if cfg.format == "table":
        out.write(f"total {len(cells)}: " + ", ".join(f"{key} {d}: {counts[d]}" for d in sorted(counts)) + "\n")
    return 0


def cmd_homology(args, cfg: RunConfig, out) -> int:
    _check_arity(args.arity, cfg, args.space)
    cx = _complex(args.space, args.arity, cfg)
    h = homology(cx)
    degrees = sorted(h.betti)
    summary = {"space": args.space, "arity": args.arity, "coeff": cfg.coeff,
               "betti": [h.betti[k] for k in degrees],
               "torsion": {str(k): list(h.torsion[k]) for k in degrees if h.torsion[k]},
               "euler": h.euler}
    rows = [[k, h.betti[k], " ".join(map(str, h.torsion[k]))] for k in degrees]
    header = ["degree", "betti", "torsion"]
    status = 0
    if cfg.coeff == "f2":
        got = betti_mod2(cx)
        want = mod2_prediction(h)
        summary["betti_f2"] = [got[k] for k in degrees]
        summary["f2_matches_prediction"] = got == want
        rows = [r + [got[r[0]]] for r in rows]
        header.append("betti_f2")
        status = 0 if got == want else 1
    _emit_rows(out, cfg.format, header, rows, summary)
    return status


def cmd_verify(args, cfg: RunConfig, out) -> int:
    if args.arity is not None and not 2 <= args.arity <= cfg.max_arity:
        raise UsageError(f"arity must lie in 2..{cfg.max_arity}")
    if args.check == "jacobi" and args.k is not None:
        if args.k < 2 or (args.l or 0) < 0:
            raise UsageError("jacobi needs k >= 2 and l >= 0")
        if args.k + (args.l or 0) > cfg.max_arity:
            raise UsageError("k + l above max-arity")
    max_arity = min(cfg.max_arity, 5)
    tasks = verification.plan(args.check, args.arity, max_arity, args.k, args.l)
    with ThreadPoolExecutor() as pool:
        certs = list(pool.map(lambda t: t[0](*t[1]), tasks))
    certs.sort(key=lambda c: c.check)
    if cfg.format == "json":
        for c in certs:
            out.write(json.dumps(c.to_json(), sort_keys=True) + "\n")
    else:
        rows = [[c.check, c.status, "; ".join(c.details)] for c in certs]
        _emit_rows(out, cfg.format, ["check", "status", "details"], rows, {})
    return 0 if all(c.passed for c in certs) else 1


def _parse_word(text: str) -> tuple[int, ...]:
    try:
        word = tuple(int(x) for x in text.replace("(", "").replace(")", "").replace("<", "")
                     .replace(">", "").split(","))
    except ValueError:
        raise UsageError(f"cannot parse cell {text!r}") from None
    return word


def _parse_dual(text: str) -> DecoratedTreeCell:
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
            tree = NestedTree.of(data["tree"])
            decs = {tuple(int(x) for x in k.split(",")): v for k, v in data["decorations"].items()}
            return DecoratedTreeCell.from_mapping(tree, decs)
        except (ValueError, KeyError, TypeError) as err:
            raise UsageError(f"cannot parse dual cell: {err}") from None
    word = _parse_word(text)
    tree = NestedTree.corolla(max(word))
    return DecoratedTreeCell(tree, (word,))


def cmd_compose(args, cfg: RunConfig, out) -> int:
    if args.kind == "based":
        a, b = BasedCactusCell.of(_parse_word(args.left)), BasedCactusCell.of(_parse_word(args.right))
        if not 1 <= args.slot <= a.arity:
            raise UsageError(f"slot {args.slot} out of range 1..{a.arity}")
        result = compose_based(a, args.slot, b)
    elif args.kind == "grav":
        wa, wb = _parse_word(args.left), _parse_word(args.right)
        a, b = NecklaceCell(wa, max(wa)), NecklaceCell(wb, max(wb))
        if not 1 <= args.slot <= a.arity:
            raise UsageError(f"slot {args.slot} out of range 1..{a.arity}")
        result = compose_grav(a, args.slot, b)
    else:
        a, b = _parse_dual(args.left), _parse_dual(args.right)
        if not 1 <= args.slot <= a.n:
            raise UsageError(f"slot {args.slot} out of range 1..{a.n}")
        result = compose_dual(a, args.slot, b)
    data = verification.chain_to_json(result)
    if cfg.format == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        rows = [[json.dumps(c, sort_keys=True), v] for c, v in data["terms"]]
        _emit_rows(out, cfg.format, ["cell", "coefficient"], rows, data)
    return 0


COMMANDS = {"cells": cmd_cells, "homology": cmd_homology, "verify": cmd_verify, "compose": cmd_compose}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](args, cfg, out)
    except (UsageError, CellError, ModuliError, TreeError, CompositionError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

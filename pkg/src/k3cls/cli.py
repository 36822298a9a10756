"""``k3cls`` command line interface.

Exit codes: 0 ok, 1 verification mismatch, 2 parse error, 3 precondition
violation, 4 unknown selector.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .autgroup import automorphism_group, dihedral_recognition, special_subgroup
from .classify import CaseRecord, classify_lattice, entries, load_reference, run_all, verify_against_reference
from .errors import K3ClsError
from .genus import genus_symbol
from .glue import unique_extension_check
from .lattice import Lattice, discriminant_group

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_PRECONDITION, EXIT_SELECTOR = 0, 1, 2, 3, 4

FORMATS = ("json", "csv", "md", "text")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_lattice(path: str) -> Lattice:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    try:
        return Lattice.from_json(data)
    except K3ClsError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"malformed lattice in {path}: {exc}") from exc


def _fmt_matrix(m) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in m) + "]"


def cmd_lattice_info(args) -> int:
    lat = _read_lattice(args.path)
    factors, _ = discriminant_group(lat)
    info = {
        "rank": str(lat.rank),
        "det": str(lat.det),
        "signature": [str(x) for x in lat.signature],
        "even": lat.is_even,
        "invariant_factors": [str(d) for d in factors],
    }
    if args.format == "json":
        print(json.dumps(info, indent=2))
    else:
        print(f"rank: {lat.rank}")
        print(f"det: {lat.det}")
        print(f"signature: ({lat.signature[0]},{lat.signature[1]})")
        print(f"even: {'yes' if lat.is_even else 'no'}")
        print(f"discriminant group: {' x '.join(f'Z/{d}' for d in factors) or 'trivial'}")
    return EXIT_OK


def cmd_aut(args) -> int:
    lat = _read_lattice(args.path)
    if not lat.is_definite() and lat.rank:
        raise CliError(EXIT_PRECONDITION, "automorphism groups need a definite lattice")
    group = automorphism_group(lat)
    if args.special:
        group = special_subgroup(group)
    out = {"order": str(group.order),
           "generators": [[[str(x) for x in r] for r in g] for g in group.generators]}
    if args.special:
        k = dihedral_recognition(group)
        out["dihedral"] = None if k is None else f"D{k}"
    if args.elements:
        out["elements"] = [[[str(x) for x in r] for r in g] for g in group.elements()]
    if args.format == "json":
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"order: {group.order}")
    if args.special:
        print(f"structure: {out['dihedral'] or 'not dihedral'}")
    for g in group.generators:
        print(f"generator: {_fmt_matrix(g)}")
    if args.elements:
        for g in group.elements():
            print(f"element: {_fmt_matrix(g)}")
    return EXIT_OK


def cmd_genus(args) -> int:
    lat = _read_lattice(args.path)
    if not lat.is_even:
        raise CliError(EXIT_PRECONDITION, "genus symbols are computed for even lattices")
    print(genus_symbol(lat).render())
    return EXIT_OK


def _records_table(records: list[CaseRecord], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_json() for r in records], indent=2)
    cols = ["group_no", "label", "n", "l2", "glue", "tx_11", "tx_12", "tx_22"]
    rows = [[r.group_no, r.label, r.n, r.l_square, r.glue_index, r.tx[0][0], r.tx[0][1], r.tx[1][1]]
            for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if fmt == "md":
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        lines += ["| " + " | ".join(str(x) for x in row) + " |" for row in rows]
        return "\n".join(lines)
    lines = []
    for r in records:
        lines.append(f"{r.label:<4} n={r.n} T_X={_fmt_matrix(r.tx)} l^2={r.l_square} glue={r.glue_index}")
    return "\n".join(lines)


def _reference(args):
    try:
        return load_reference(getattr(args, "data", None))
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read dataset: {exc}") from exc


def cmd_classify(args) -> int:
    if args.input:
        lat = _read_lattice(args.input)
        try:
            records = classify_lattice(lat)
        except K3ClsError as exc:
            raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    else:
        ref = _reference(args)
        case = None
        if args.case is not None:
            try:
                case = int(args.case)
            except ValueError as exc:
                raise CliError(EXIT_SELECTOR, f"unknown case {args.case!r}") from exc
            if case not in {e.group_no for e in entries(ref)}:
                raise CliError(EXIT_SELECTOR, f"unknown case {case}")
        records = run_all(ref, threads=args.threads, group_no=case)
    print(_records_table(records, args.format))
    return EXIT_OK


def _load_coinvariants(directory: str) -> dict[str, dict]:
    out = {}
    for p in sorted(Path(directory).glob("*.json")):
        try:
            out[p.stem] = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_PARSE, f"cannot parse {p}: {exc}") from exc
    return out


def cmd_verify(args) -> int:
    ref = _reference(args)
    try:
        report = verify_against_reference(ref)
    except (KeyError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"malformed dataset: {exc}") from exc
    extra = []
    if args.with_coinvariants:
        by_key = {f"{e.group_no}_{e.index}": e for e in entries(ref)}
        for key, data in _load_coinvariants(args.with_coinvariants).items():
            entry = by_key.get(key)
            if entry is None:
                extra.append(f"{key}: no matching invariant lattice (expected <group_no>_<index>)")
                continue
            try:
                rep = unique_extension_check(entry.lattice, data)
            except (K3ClsError, KeyError, ValueError) as exc:
                report.mismatches.append(f"{key}: coinvariant data rejected ({exc})")
                continue
            if not rep.surjective or rep.kernel_order != entry.group_order or not rep.no_roots:
                report.mismatches.append(
                    f"{key}: image {rep.image_order}/{rep.form_group_order}, kernel {rep.kernel_order}, "
                    f"no roots {rep.no_roots}")
            else:
                extra.append(f"{key}: O(K) -> O(q) surjective, kernel of order {rep.kernel_order}")
    report.notes.extend(extra)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.render())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3cls", description="Lattice computations for K3 symmetry classification.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattice-info", help="determinant, signature, parity, discriminant group")
    s.add_argument("path")
    s.add_argument("--format", choices=FORMATS, default="text")
    s.set_defaults(func=cmd_lattice_info)

    s = sub.add_parser("aut", help="orthogonal group of a definite lattice")
    s.add_argument("path")
    s.add_argument("--special", action="store_true", help="restrict to determinant 1")
    s.add_argument("--elements", action="store_true", help="list every element")
    s.add_argument("--format", choices=FORMATS, default="text")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("genus", help="canonical genus symbol")
    s.add_argument("path")
    s.set_defaults(func=cmd_genus)

    s = sub.add_parser("classify", help="maximal cyclic extensions")
    s.add_argument("--case", help="group number, e.g. 70")
    s.add_argument("--format", choices=FORMATS, default="text")
    s.add_argument("--input", help="classify this lattice file instead of the dataset")
    s.add_argument("--threads", type=_positive_int, default=1)
    s.add_argument("--data", help="dataset path (default: embedded, or $K3CLS_DATA)")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", help="compare computations with the reference dataset")
    s.add_argument("--with-coinvariants", metavar="DIR",
                   help="directory of <group_no>_<index>.json coinvariant lattices")
    s.add_argument("--data", help="dataset path (default: embedded, or $K3CLS_DATA)")
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.set_defaults(func=cmd_verify)
    return p


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"k3cls: {exc}", file=sys.stderr)
        return exc.code
    except K3ClsError as exc:
        print(f"k3cls: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())

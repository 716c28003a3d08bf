"""Command line: ``hcseq <verb> [lattice] [files] [--builtin NAME] [--json]``.

Reports go to stdout, as a plain-text table by default or as JSON with
``--json``.  Errors always go to stderr as a JSON object, and the exit code
depends on the error class (see ``hcseq.errors``).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import io
from .axioms import check_admissible
from .enumeration import classify, infinite_family
from .errors import (
    EXIT_NOT_ADMISSIBLE,
    EXIT_USAGE,
    EmptyArgs,
    HcseqError,
    NotStrong,
)
from .lattice import (
    Lattice,
    atoms,
    axiom_violations,
    coatoms,
    decompose,
    lattice_from_json,
    modularity_witness,
    splits_strongly,
    splitting_pairs,
)
from .sequences import (
    SequencePresentation,
    TruncatedTable,
    from_truncated_table,
    leq_sequences,
    lower_central_series,
    vanishing_arity,
)


class UsageError(HcseqError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would print free text and exit 2
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be at least 1")
    return n


def _nonnegative(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be non-negative")
    return n


# operands besides the lattice, per verb
_OPERANDS = {
    "validate": 0, "analyze": 0, "enumerate": 0, "oracle": 0, "family": 0,
    "check": 1, "lcs": 1, "compare": 2,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("paths", nargs="*", help="lattice file (unless --builtin), then sequence files")
    common.add_argument("--builtin", metavar="NAME", help="catalog lattice: ONE, B2, N5, M<k>, C<n>, AxB")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")

    parser = _Parser(prog="hcseq", description="Admissible operation sequences on finite lattices.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="lattice axioms and modularity")
    sub.add_parser("analyze", parents=[common], help="atoms, splitting pairs, decomposition")
    p = sub.add_parser("enumerate", parents=[common], help="classify and list admissible sequences")
    p.add_argument("--cap", type=_positive, help="cap degree for --oracle")
    p.add_argument("--oracle", action="store_true", help="direct search instead of the product decomposition")
    p.add_argument("--budget", type=_positive, help="search node budget")
    p = sub.add_parser("oracle", parents=[common], help="all admissible sequences of cap degree <= CAP")
    p.add_argument("--cap", type=_positive, required=True)
    p.add_argument("--budget", type=_positive)
    sub.add_parser("check", parents=[common], help="per-axiom admissibility report")
    sub.add_parser("compare", parents=[common], help="order between two sequences")
    p = sub.add_parser("family", parents=[common], help="infinite family h^(0..K) for a strong pair")
    p.add_argument("--k", type=_nonnegative, required=True)
    p.add_argument("--out", type=Path, help="directory for one sequence file per member")
    sub.add_parser("lcs", parents=[common], help="lower central series of a sequence")
    return parser


# ---------------------------------------------------------------- inputs


class _Inputs:
    def __init__(self, args: argparse.Namespace):
        paths = list(args.paths)
        if args.builtin is not None:
            self.lattice = lattice_from_json(args.builtin)
            self.ref: io.LatticeRef = args.builtin
        else:
            if not paths:
                raise UsageError("give a lattice file or --builtin NAME")
            self.lattice = lattice_from_json(io.read_json(paths.pop(0)))
            self.ref = io.lattice_to_json(self.lattice)
        want = _OPERANDS[args.verb]
        if len(paths) != want:
            raise UsageError(f"{args.verb} takes {want} sequence file(s) after the lattice, got {len(paths)}")
        self.operands = paths

    def sequence_like(self, path: str):
        return io.load_sequence_like(io.read_json(path), self.lattice)

    def sequence(self, path: str) -> SequencePresentation:
        s = self.sequence_like(path)
        return from_truncated_table(s) if isinstance(s, TruncatedTable) else s


# ---------------------------------------------------------------- rendering


def _levels_text(p: SequencePresentation) -> str:
    l = p.lattice
    parts = []
    for x in l.linear_extension:
        gens = " ".join("(" + ",".join(map(str, g)) + ")" for g in p.levels[x].generators)
        parts.append(f"{l.elements[x]}: {gens or '-'}")
    return "; ".join(parts)


def _table(rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _names(l: Lattice, xs) -> list[str]:
    return [l.elements[x] for x in xs]


# ---------------------------------------------------------------- verbs


def _validate(inp: _Inputs, args) -> tuple[dict, str, int]:
    l = inp.lattice
    bad = axiom_violations(l)
    w = modularity_witness(l)
    data = {
        "lattice": inp.ref,
        "size": len(l),
        "lattice_axioms": not bad,
        "violations": bad,
        "modular": w is None,
        "modularity_witness": None if w is None else _names(l, w),
    }
    lines = [
        f"elements:        {len(l)}",
        f"lattice axioms:  {'ok' if not bad else 'FAILED'}",
    ]
    lines += [f"  {v}" for v in bad]
    if w is None:
        lines.append("modular:         yes")
    else:
        x, y, z = _names(l, w)
        lines.append(f"modular:         no (x={x}, y={y}, z={z}: x<=z but x v (y ^ z) != (x v y) ^ z)")
    return data, "\n".join(lines), 0


def _analyze(inp: _Inputs, args) -> tuple[dict, str, int]:
    l = inp.lattice
    data: dict = {"lattice": inp.ref, "size": len(l)}
    lines = [f"elements:        {len(l)}"]
    if len(l) == 1:
        data.update(atoms=[], coatoms=[], splitting_pairs=[], strong_pair=None,
                    decomposition={"core_size": 1, "b2_power": 0}, verdict="finite")
        lines.append("trivial lattice: one sequence, enumeration finite")
        return data, "\n".join(lines), 0
    pairs = splitting_pairs(l)
    strong = splits_strongly(l)
    data["atoms"] = _names(l, atoms(l))
    data["coatoms"] = _names(l, coatoms(l))
    data["splitting_pairs"] = [{"pair": list(p.labels(l)), "strong": p.strong} for p in pairs]
    data["strong_pair"] = None if strong is None else list(strong.labels(l))
    lines.append(f"atoms:           {', '.join(data['atoms'])}")
    lines.append(f"coatoms:         {', '.join(data['coatoms'])}")
    if pairs:
        lines.append("splitting pairs: " + ", ".join(
            f"({d},{e}){' strong' if p.strong else ''}" for p in pairs for d, e in [p.labels(l)]))
    else:
        lines.append("splitting pairs: none")
    if strong is not None:
        d, e = strong.labels(l)
        down = _names(l, [x for x in l.linear_extension if l.leq[x][strong.delta]])
        up = _names(l, [x for x in l.linear_extension if l.leq[strong.epsilon][x]])
        data["union_of_intervals"] = {"lower": [l.elements[l.bottom], d], "upper": [e, l.elements[l.top]],
                                      "lower_elements": down, "upper_elements": up}
        data["decomposition"] = None
        data["verdict"] = "infinite"
        lines.append(f"splits strongly: ({d},{e}); enumeration infinite")
        lines.append(f"  L = [{l.elements[l.bottom]},{d}] u [{e},{l.elements[l.top]}]"
                     f" = {{{', '.join(down)}}} u {{{', '.join(up)}}}")
        return data, "\n".join(lines), 0
    w = modularity_witness(l)
    if w is not None:
        data["decomposition"] = None
        data["verdict"] = None
        data["modularity_witness"] = _names(l, w)
        lines.append("splits strongly: no")
        lines.append(f"decomposition:   refused, not modular (witness {', '.join(_names(l, w))})")
        return data, "\n".join(lines), 0
    d = decompose(l)
    problems = d.verify()
    data["decomposition"] = {
        "core": io.lattice_to_json(d.core),
        "core_size": len(d.core),
        "b2_power": d.b2_power,
        "iso": {l.elements[x]: [d.core.elements[c], list(bits)] for x, (c, bits) in enumerate(d.iso)},
        "verified": not problems,
    }
    data["verdict"] = "finite"
    lines.append("splits strongly: no; enumeration finite")
    lines.append(f"decomposition:   M x B2^{d.b2_power}, core of size {len(d.core)}"
                 f" ({'verified' if not problems else 'NOT verified'})")
    return data, "\n".join(lines), 0


def _classification_report(inp: _Inputs, c) -> tuple[dict, str, int]:
    data = io.classification_to_json(c, inp.ref)
    l = inp.lattice
    head = f"{c.verdict}"
    if c.pair is not None:
        head += f", strong pair ({','.join(c.pair.labels(l))})"
    if c.sequences is not None:
        head += f", count {len(c.sequences)}"
        if c.cap is not None:
            head += f" (cap degree <= {c.cap})"
    lines = [head]
    if c.sequences:
        rows = [("#", "cap", "vanishes", "levels")]
        for i, s in enumerate(c.sequences):
            v = vanishing_arity(s)
            rows.append((i, s.cap_degree(), "-" if v is None else v, _levels_text(s)))
        lines.append(_table(rows))
    return data, "\n".join(lines), 0


def _enumerate(inp: _Inputs, args) -> tuple[dict, str, int]:
    if args.cap is not None and not args.oracle:
        raise UsageError("--cap only applies together with --oracle")
    method = "oracle" if args.oracle else "decomposition"
    if args.oracle and args.cap is None and len(inp.lattice) > 1 and splits_strongly(inp.lattice) is not None:
        raise UsageError("the lattice splits strongly; --oracle needs an explicit --cap")
    c = classify(inp.lattice, method=method, cap=args.cap, budget=args.budget)
    return _classification_report(inp, c)


def _oracle(inp: _Inputs, args) -> tuple[dict, str, int]:
    c = classify(inp.lattice, method="oracle", cap=args.cap, budget=args.budget)
    return _classification_report(inp, c)


def _check(inp: _Inputs, args) -> tuple[dict, str, int]:
    s = inp.sequence_like(inp.operands[0])
    report = check_admissible(s)
    data = {"lattice": inp.ref, **report.to_json()}
    rows = [("axiom", "result", "witness")]
    for r in report.to_json()["axioms"]:
        w = r.get("witness")
        rows.append((r["axiom"], "pass" if r["passed"] else "FAIL",
                     "" if w is None else json.dumps(w, ensure_ascii=False, sort_keys=True)))
    text = _table(rows) + f"\n{'admissible' if report.ok else 'not admissible'} (checked on [0,{report.box}]^m)"
    return data, text, 0 if report.ok else EXIT_NOT_ADMISSIBLE


def _compare(inp: _Inputs, args) -> tuple[dict, str, int]:
    p, q = (inp.sequence(path) for path in inp.operands)
    ab, ba = leq_sequences(p, q), leq_sequences(q, p)
    relation = "equal" if ab and ba else "below" if ab else "above" if ba else "incomparable"
    data = {"lattice": inp.ref, "first_leq_second": ab, "second_leq_first": ba, "relation": relation}
    text = f"first <= second: {'yes' if ab else 'no'}\nsecond <= first: {'yes' if ba else 'no'}\n{relation}"
    return data, text, 0


def _family(inp: _Inputs, args) -> tuple[dict, str, int]:
    l = inp.lattice
    if len(l) == 1:
        raise NotStrong("the one-element lattice has no splitting pair")
    pair = splits_strongly(l)
    if pair is None:
        raise NotStrong("lattice does not split strongly; no infinite family")
    members = infinite_family(l, pair, args.k)
    reports = [check_admissible(h) for h in members]
    chain = all(leq_sequences(a, b) for a, b in zip(members, members[1:]))
    distinct = len(set(members)) == len(members)
    written = []
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        width = len(str(args.k))
        for j, h in enumerate(members):
            path = args.out / f"h{j:0{width}d}.json"
            path.write_text(io.dumps(io.sequence_to_json(h, inp.ref)) + "\n", encoding="utf-8")
            written.append(str(path))
    data = {
        "lattice": inp.ref,
        "pair": list(pair.labels(l)),
        "k": args.k,
        "members": [
            {"j": j, "cap_degree": h.cap_degree(), "admissible": r.ok, "sequence": io.sequence_to_json(h, with_lattice=False)}
            for j, (h, r) in enumerate(zip(members, reports))
        ],
        "all_admissible": all(r.ok for r in reports),
        "pairwise_distinct": distinct,
        "ascending_chain": chain,
        "files": written,
    }
    rows = [("j", "cap", "admissible")] + [
        (j, h.cap_degree(), "yes" if r.ok else "NO") for j, (h, r) in enumerate(zip(members, reports))
    ]
    lines = [f"strong pair ({','.join(pair.labels(l))}), members h^(0)..h^({args.k})", _table(rows),
             f"all admissible: {'yes' if data['all_admissible'] else 'NO'}",
             f"pairwise distinct: {'yes' if distinct else 'NO'}",
             f"ascending chain: {'yes' if chain else 'NO'}"]
    lines += [f"wrote {w}" for w in written]
    return data, "\n".join(lines), 0


def _lcs(inp: _Inputs, args) -> tuple[dict, str, int]:
    p = inp.sequence(inp.operands[0])
    cs = lower_central_series(p)
    terms = _names(inp.lattice, cs.terms)
    data = {"lattice": inp.ref, "terms": terms, "nilpotent": cs.nilpotent, "steps": cs.steps}
    verdict = f"nilpotent after {cs.steps} step(s)" if cs.nilpotent else "not nilpotent (series stabilises above 0)"
    return data, " > ".join(terms) + "\n" + verdict, 0


_VERBS = {
    "validate": _validate, "analyze": _analyze, "enumerate": _enumerate, "oracle": _oracle,
    "check": _check, "compare": _compare, "family": _family, "lcs": _lcs,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run one verb, print the report; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if not argv:
            raise EmptyArgs("no verb given; try 'hcseq --help'")
        args = build_parser().parse_args(argv)
        inp = _Inputs(args)
        data, text, code = _VERBS[args.verb](inp, args)
    except EmptyArgs as exc:
        print(io.dumps(exc.to_json()), file=stderr)
        return EXIT_USAGE
    except HcseqError as exc:
        print(io.dumps(exc.to_json()), file=stderr)
        return exc.exit_code
    print(io.dumps(data) if args.json else text, file=stdout)
    return code


def main() -> None:
    try:
        code = run()
    except SystemExit as exc:  # --help
        code = exc.code if isinstance(exc.code, int) else 0
    sys.exit(code)

"""Command-line front end.

Exit codes: 0 valid, 1 invalid, 2 input error, 3 engines disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .corpus import corpus_size, enumerate_sequents, sample_sequents
from .prover import ProverError, check_derivation, prove
from .refuter import RefuterError, check_refutation, refute
from .semantics import DEFAULT_TABLE_CAP, Countermodel, find_countermodel, model_families
from .signature import BUNDLED, Signature, SignatureError, bundled_signature, load_signature
from .syntax import Kind, Sequent, SyntaxErrorLE, TypeErrorLE, is_residual_free, parse_sequent, show
from .tableau import BudgetExceeded, TableauError, TableauNode, decide, tableau_to_dict, tableau_to_dot, tableau_to_text
from .trees import JSON_SCHEMA_VERSION, ProofTree, tree_to_dict, tree_to_dot, tree_to_text

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3


class Disagreement(RuntimeError):
    """Two engines gave incompatible answers; always a bug, never bad input."""


@dataclass
class Verdict:
    sequent: Sequent
    status: str  # "VALID" or "INVALID"
    proof: ProofTree | None = None
    refutation: ProofTree | None = None
    tableau: TableauNode | None = None
    countermodel: Countermodel | None = None
    countermodel_searched: bool = False

    def to_dict(self) -> dict:
        out = {"version": JSON_SCHEMA_VERSION, "sequent": show(self.sequent), "status": self.status}
        if self.proof is not None:
            out["proof"] = tree_to_dict(self.proof)
        if self.refutation is not None:
            out["refutation"] = tree_to_dict(self.refutation)
        if self.tableau is not None:
            out["tableau"] = tableau_to_dict(self.tableau)
        if self.countermodel is not None:
            out["countermodel"] = self.countermodel.to_dict()
        elif self.countermodel_searched:
            out["countermodel"] = "INCONCLUSIVE"
        return out


def resolve_signature(name: str) -> Signature:
    """A bundled signature name or a path to a JSON signature file."""
    if name in BUNDLED:
        return bundled_signature(name)
    path = Path(name)
    if not path.exists():
        raise SignatureError(f"no bundled signature or file named {name!r}")
    return load_signature(path.read_text())


def run_decide(
    seq: Sequent,
    sig: Signature,
    engine: str = "all",
    cross_check: bool = False,
    max_lattice_size: int = 5,
    depth_limit: int = 10_000,
) -> Verdict:
    """Run the engines on ``seq`` and insist that they agree."""
    if not is_residual_free(seq, sig):
        raise ProverError("decide expects a residual-free sequent")
    seq = seq.as_kind(Kind.PROVABLE)
    proof = prove(seq, sig, depth_limit)
    refutation = refute(seq, sig)
    if (proof is None) == (refutation is None):
        raise Disagreement(
            f"prover {'succeeded' if proof else 'failed'} and refuter {'succeeded' if refutation else 'failed'} "
            f"on {show(seq)}"
        )
    if proof is not None and not check_derivation(proof, sig):
        raise Disagreement(f"derivation of {show(seq)} fails the checker")
    if refutation is not None and not check_refutation(refutation, sig):
        raise Disagreement(f"refutation of {show(seq)} fails the checker")
    v = Verdict(seq, "VALID" if proof is not None else "INVALID", proof, refutation)
    if engine in ("tableau", "all") or cross_check:
        # a requested tableau is shown terminated on every branch
        t = decide(seq, sig, prune=engine != "tableau")
        if t.valid != (v.status == "VALID"):
            raise Disagreement(f"tableau says {t.status} but the calculi say {v.status} on {show(seq)}")
        v.tableau = t.tree
    if v.status == "INVALID" or cross_check:
        v.countermodel = find_countermodel(seq, sig, max_lattice_size)
        v.countermodel_searched = True
        if v.countermodel is not None and v.status == "VALID":
            raise Disagreement(f"derivable {show(seq)} has a countermodel")
    return v


def _render(v: Verdict, engine: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(v.to_dict(), indent=2, ensure_ascii=False)
    if fmt == "dot":
        parts = []
        if v.proof is not None and engine in ("prover", "all"):
            parts.append(tree_to_dot(v.proof, "derivation"))
        if v.refutation is not None and engine in ("refuter", "all"):
            parts.append(tree_to_dot(v.refutation, "refutation"))
        if v.tableau is not None and engine in ("tableau", "all"):
            parts.append(tableau_to_dot(v.tableau))
        return "\n".join(parts)
    lines = [f"{show(v.sequent)}: {v.status}"]
    if v.proof is not None and engine in ("prover", "all"):
        lines += ["derivation:", tree_to_text(v.proof)]
    if v.refutation is not None and engine in ("refuter", "all"):
        lines += ["refutation:", tree_to_text(v.refutation)]
    if v.tableau is not None and engine in ("tableau", "all"):
        lines += ["tableau:", tableau_to_text(v.tableau)]
    if v.countermodel is not None:
        cm = v.countermodel
        lines.append("countermodel:")
        lines.append(f"  lattice order: {cm.expansion.lattice.leq.astype(int).tolist()}")
        for name, tab in cm.expansion.ops.items():
            lines.append(f"  {name}: {tab.tolist()}")
        lines.append(f"  valuation: {cm.valuation}")
    elif v.countermodel_searched:
        lines.append("countermodel: INCONCLUSIVE (none within the size bound)")
    return "\n".join(lines)


def _read_sequents(args, sig: Signature) -> list[Sequent]:
    if args.sequent is not None:
        texts = [args.sequent]
    else:
        texts = [t.strip() for t in Path(args.file).read_text().splitlines()]
        texts = [t for t in texts if t and not t.startswith("#")]
    return [parse_sequent(t, sig) for t in texts]


def cmd_decide(args) -> int:
    try:
        sig = resolve_signature(args.signature)
        seqs = _read_sequents(args, sig)
    except (SignatureError, SyntaxErrorLE, TypeErrorLE, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    code = EXIT_VALID
    outputs = []
    for seq in seqs:
        try:
            v = run_decide(seq, sig, args.engine, args.cross_check, args.max_lattice_size, args.depth_limit)
        except Disagreement as exc:
            print(f"engine disagreement: {exc}", file=sys.stderr)
            return EXIT_DISAGREE
        except (ProverError, RefuterError, TableauError, TypeErrorLE, BudgetExceeded) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        outputs.append(_render(v, args.engine, args.format))
        if v.status == "INVALID":
            code = EXIT_INVALID
    text = "\n".join(outputs)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


def selftest(
    sig: Signature,
    max_depth: int = 3,
    max_connectives: int | None = 3,
    samples: int = 0,
    seed: int = 0,
    max_lattice_size: int = 4,
    exclude=(),
    out=None,
) -> bool:
    """Corpus agreement suite; prints a summary table and returns overall success.

    ``max_depth`` bounds the depth of the sequent as a tree whose root is
    the turnstile, so its sides have formula depth at most ``max_depth - 1``
    and 0 gives the empty corpus.
    """
    out = sys.stdout if out is None else out
    start = time.time()
    checked = agree = trees_ok = 0
    proved: list[Sequent] = []
    failures: list[str] = []
    for seq in enumerate_sequents(sig, max_depth - 1, max_connectives):
        checked += 1
        p = prove(seq, sig, exclude=exclude)
        r = refute(seq, sig)
        if (p is None) != (r is None):
            agree += 1
        elif len(failures) < 5:
            failures.append(f"{'both' if p else 'neither'} engine succeeded on {show(seq)}")
        if (p is None or check_derivation(p, sig)) and (r is None or check_refutation(r, sig)):
            trees_ok += 1
        if p is not None:
            proved.append(seq)
    rows = [
        ("sequents checked", f"{checked}", True),
        ("exactly one of prove/refute", f"{agree}/{checked}", agree == checked),
        ("trees accepted by checkers", f"{trees_ok}/{checked}", trees_ok == checked),
    ]
    fams = model_families(sig, max_lattice_size, DEFAULT_TABLE_CAP) if proved else []
    sound = sum(1 for s in proved if all(f.holds(s).all() for f in fams))
    rows.append(("proved sequents true in all models", f"{sound}/{len(proved)}", sound == len(proved)))
    if samples:
        tab_agree = 0
        seqs = sample_sequents(sig, samples, max_depth, seed=seed)
        for s in seqs:
            if decide(s, sig).valid == (prove(s, sig, exclude=exclude) is not None):
                tab_agree += 1
        rows.append(("tableau agrees with prover (sample)", f"{tab_agree}/{samples}", tab_agree == samples))
    print(f"{checked} sequents checked", file=out)
    width = max(len(r[0]) for r in rows)
    for name, value, ok in rows:
        print(f"  {name.ljust(width)}  {value:>13}  {'ok' if ok else 'FAIL'}", file=out)
    for f in failures:
        print(f"  e.g. {f}", file=out)
    print(f"  elapsed {time.time() - start:.1f}s", file=out)
    return all(ok for _, _, ok in rows)


def cmd_selftest(args) -> int:
    try:
        sig = resolve_signature(args.signature)
    except SignatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    ok = selftest(
        sig,
        args.max_depth,
        args.max_connectives,
        args.samples,
        args.seed,
        args.max_lattice_size,
        exclude=tuple(args.mutate or ()),
    )
    return 0 if ok else 1


def cmd_count(args) -> int:
    try:
        sig = resolve_signature(args.signature)
    except SignatureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(corpus_size(sig, args.max_depth - 1, args.max_connectives) if args.max_depth > 0 else 0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lerefute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide one or more sequents")
    d.add_argument("--signature", default="mixed-tonicity", help=f"bundled name ({', '.join(BUNDLED)}) or JSON path")
    src = d.add_mutually_exclusive_group(required=True)
    src.add_argument("--sequent", help='e.g. "g(p | q) |- g(p) | g(q)"')
    src.add_argument("--file", help="one sequent per line; '#' starts a comment line")
    d.add_argument("--format", choices=("text", "json", "dot"), default="text")
    d.add_argument("--engine", choices=("refuter", "prover", "tableau", "all"), default="all")
    d.add_argument("--cross-check", action="store_true", help="also run the tableau and the countermodel search")
    d.add_argument("--max-lattice-size", type=int, default=5)
    d.add_argument("--depth-limit", type=int, default=10_000)
    d.add_argument("--out", help="write output to this file instead of stdout")
    d.set_defaults(func=cmd_decide)

    s = sub.add_parser("selftest", help="run the corpus agreement suite")
    s.add_argument("--signature", default="mixed-tonicity")
    s.add_argument(
        "--max-depth", type=int, default=3, help="depth of the sequent tree, the turnstile counting as one level"
    )
    s.add_argument("--max-connectives", type=int, default=3)
    s.add_argument("--samples", type=int, default=0, help="random sequents one level deeper, for the tableau check")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-lattice-size", type=int, default=4)
    s.add_argument("--mutate", action="append", metavar="RULE", help="forbid a proof rule, to see the suite fail")
    s.set_defaults(func=cmd_selftest)

    c = sub.add_parser("count", help="size of the exhaustive corpus")
    c.add_argument("--signature", default="mixed-tonicity")
    c.add_argument("--max-depth", type=int, default=3, help="as for selftest")
    c.add_argument("--max-connectives", type=int, default=3)
    c.set_defaults(func=cmd_count)
    return parser


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

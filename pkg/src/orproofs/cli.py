"""Command-line interface.

Exit codes: 0 accept/success, 1 reject, 2 usage, parse, or format error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from orproofs import accounting, dsl
from orproofs.aggregation import (
    build_and_proof,
    build_embedded_proof,
    build_universal_proof,
    naive_and_inclusion_verify,
)
from orproofs.errors import OrProofError
from orproofs.merkle import build_tree
from orproofs.persistence import (
    load_proof,
    load_transcript,
    load_tree,
    save_proof,
    save_transcript,
    save_tree,
    write_atomic,
)
from orproofs.proofs import BackendId, ProofKind, Single, Transcript, Tuple, prove_leaf, setup, verify

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument helpers ---------------------------------------------------------

def hex_digest(text: str) -> bytes:
    text = text.strip()
    if len(text) != 64:
        raise UsageError(f"digest must be 64 hex characters, got {len(text)}")
    try:
        return bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"not a hex digest: {text!r}") from None


def seed_arg(text: str) -> bytes:
    return hex_digest(text)


def power_of_two(text: str) -> int:
    t = text.replace(" ", "")
    try:
        if "^" in t or "**" in t:
            base, exp = t.replace("**", "^").split("^")
            value = int(base) ** int(exp)
        else:
            value = int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1 or value & (value - 1):
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return value


def read_blocks(source: str, split: str) -> list[bytes]:
    path = Path(source)
    if path.is_dir():
        return [p.read_bytes() for p in sorted(path.iterdir()) if p.is_file()]
    data = path.read_bytes()
    if split == "whole":
        return [data]
    records = data.split(b"\n")
    if records and records[-1] == b"":
        records.pop()
    return records


def _transcript_path(explicit, anchor: Path) -> Path:
    return Path(explicit) if explicit else anchor.with_suffix(".otrs")


def _load_transcripts(paths) -> Transcript:
    merged = Transcript()
    for p in paths:
        merged.merge(load_transcript(Path(p).read_bytes()))
    return merged


def _expr_text(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.expr_file is not None:
        return Path(args.expr_file).read_text(encoding="utf-8")
    raise UsageError("one of --expr or --expr-file is required")


def _emit(data: bytes, out) -> None:
    if out:
        write_atomic(out, data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


# -- commands -----------------------------------------------------------------

def cmd_build(args) -> int:
    tree = build_tree(read_blocks(args.input, args.split))
    write_atomic(args.out, save_tree(tree))
    print(tree.root.hex())
    return EXIT_ACCEPT


def cmd_prove(args) -> int:
    tree = load_tree(Path(args.tree).read_bytes())
    blocks = read_blocks(args.blocks, args.split)
    ctx, _ = setup(args.seed)
    if args.mode == "or":
        proof = build_universal_proof(ctx, tree, blocks)
    elif args.mode == "and":
        proof = build_and_proof(ctx, tree, blocks)
    else:
        if args.leaf_index is None:
            raise UsageError(f"--mode {args.mode} requires --leaf-index")
        if args.mode == "embedded":
            proof = build_embedded_proof(ctx, tree, args.leaf_index)
        else:
            if not 0 <= args.leaf_index < len(blocks):
                raise UsageError(f"--leaf-index {args.leaf_index} outside [0, {len(blocks)})")
            proof = prove_leaf(ctx, blocks[args.leaf_index])
    out = Path(args.out)
    write_atomic(out, save_proof(proof))
    if proof.backend_id == BackendId.IDEAL_TRANSCRIPT:
        write_atomic(_transcript_path(args.transcript, out), save_transcript(ctx.transcript))
    return EXIT_ACCEPT


def _read_public_input(text: str):
    path = Path(text)
    if len(text) == 64 and not path.exists():
        return Single(hex_digest(text))
    if path.suffix == ".json":
        obj = json.loads(path.read_text(encoding="utf-8"))
        if isinstance(obj, list):
            return Tuple([hex_digest(h) for h in obj])
        return dsl.input_from_json(obj)
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    return Tuple([hex_digest(ln) for ln in lines])


def cmd_verify(args) -> int:
    proof = load_proof(Path(args.proof).read_bytes())
    _, vctx = setup(args.seed)
    public = _read_public_input(args.input)
    if proof.backend_id == BackendId.PATH_EMBEDDED:
        if args.root is None:
            raise UsageError("embedded proofs need --root")
        if not isinstance(public, Single):
            raise UsageError("embedded proofs verify against a single digest")
        ok = verify(vctx.for_root(hex_digest(args.root)), proof, public)
        return EXIT_ACCEPT if ok else EXIT_REJECT

    tpath = _transcript_path(args.transcript, Path(args.proof))
    vctx.transcript.merge(load_transcript(tpath.read_bytes()))
    if isinstance(public, (dsl.AtomInput, dsl.AndInput, dsl.OrInput)):
        if args.expr is None and args.expr_file is None:
            raise UsageError("structured inputs need --expr or --expr-file")
        ok = dsl.verify_structured(vctx, proof, dsl.parse(_expr_text(args)), public)
    elif isinstance(public, Tuple) and args.root is not None and proof.kind == ProofKind.AND:
        ok = naive_and_inclusion_verify(hex_digest(args.root), public.hs, proof, vctx)
    else:
        ok = verify(vctx, proof, public)
    return EXIT_ACCEPT if ok else EXIT_REJECT


def cmd_expr_compile(args) -> int:
    expr = dsl.parse(_expr_text(args))
    bindings_path = Path(args.bindings)
    mapping = json.loads(bindings_path.read_text(encoding="utf-8"))
    if not isinstance(mapping, dict):
        raise UsageError("bindings must be a JSON object mapping names to proof files")
    ctx, _ = setup(args.seed)
    bindings = {}
    transcript_files = list(args.transcript or [])
    for name, file in mapping.items():
        p = Path(file)
        if not p.is_absolute():
            p = bindings_path.parent / p
        bindings[name] = load_proof(p.read_bytes())
        sibling = p.with_suffix(".otrs")
        if not args.transcript and sibling.exists():
            transcript_files.append(sibling)
    ctx.transcript.merge(_load_transcripts(transcript_files))
    proof = dsl.compile(ctx, expr, bindings)
    out = Path(args.out)
    write_atomic(out, save_proof(proof))
    write_atomic(_transcript_path(args.transcript_out, out), save_transcript(ctx.transcript))
    return EXIT_ACCEPT


def cmd_expr_verify(args) -> int:
    expr = dsl.parse(_expr_text(args))
    proof = load_proof(Path(args.proof).read_bytes())
    _, vctx = setup(args.seed)
    tpath = _transcript_path(args.transcript, Path(args.proof))
    vctx.transcript.merge(load_transcript(tpath.read_bytes()))
    vinput = dsl.input_from_json(json.loads(Path(args.input).read_text(encoding="utf-8")))
    return EXIT_ACCEPT if dsl.verify_structured(vctx, proof, expr, vinput) else EXIT_REJECT


def cmd_bench(args) -> int:
    report = accounting.measure(accounting.Scheme.from_cli(args.scheme), args.n, args.seed,
                                timings=not args.deterministic)
    _emit(accounting.emit_report([report], args.format), args.out)
    return EXIT_ACCEPT


def cmd_compare(args) -> int:
    reports = list(accounting.table(args.n, args.hash_bits))
    if args.measure:
        reports += [accounting.measure(s, args.n, args.seed, timings=not args.deterministic)
                    for s in accounting.Scheme]
    _emit(accounting.emit_report(reports, args.format), args.out)
    return EXIT_ACCEPT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orproofs", description="Merkle inclusion proofs with AND/OR aggregation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build a Merkle tree snapshot")
    p.add_argument("--input", required=True, help="directory (one block per file) or file")
    p.add_argument("--split", choices=["lines", "whole"], default="lines")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("prove", help="produce an OR, AND, embedded, or single-leaf proof")
    p.add_argument("--tree", required=True)
    p.add_argument("--blocks", required=True)
    p.add_argument("--split", choices=["lines", "whole"], default="lines")
    p.add_argument("--mode", choices=["or", "and", "embedded", "leaf"], required=True)
    p.add_argument("--leaf-index", type=int)
    p.add_argument("--seed", type=seed_arg, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--transcript", help="transcript output (default: <out>.otrs)")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="verify a proof; exit 0 accept, 1 reject")
    p.add_argument("--proof", required=True)
    p.add_argument("--input", required=True, help="hex digest, digests file, or JSON input")
    p.add_argument("--root")
    p.add_argument("--transcript", help="transcript file (default: <proof>.otrs)")
    p.add_argument("--seed", type=seed_arg, required=True)
    p.add_argument("--expr")
    p.add_argument("--expr-file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("expr", help="compile or verify acceptance expressions")
    esub = p.add_subparsers(dest="expr_command", required=True, parser_class=_Parser)
    c = esub.add_parser("compile")
    c.add_argument("--expr")
    c.add_argument("--expr-file")
    c.add_argument("--bindings", required=True)
    c.add_argument("--seed", type=seed_arg, required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--transcript", action="append", help="input transcript(s); default: each binding's .otrs")
    c.add_argument("--transcript-out", help="default: <out>.otrs")
    c.set_defaults(func=cmd_expr_compile)
    v = esub.add_parser("verify")
    v.add_argument("--expr")
    v.add_argument("--expr-file")
    v.add_argument("--proof", required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--seed", type=seed_arg, required=True)
    v.add_argument("--transcript")
    v.set_defaults(func=cmd_expr_verify)

    p = sub.add_parser("bench", help="measure one scheme")
    p.add_argument("--scheme", choices=["or", "and", "embedded"], required=True)
    p.add_argument("--n", type=power_of_two, required=True)
    p.add_argument("--seed", type=seed_arg, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--deterministic", action="store_true", help="omit wall times")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compare", help="cost-model comparison of the three schemes")
    p.add_argument("--n", type=power_of_two, required=True)
    p.add_argument("--hash-bits", type=int, default=256)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--measure", action="store_true")
    p.add_argument("--seed", type=seed_arg, default=bytes(32))
    p.add_argument("--deterministic", action="store_true", help="omit wall times of measured rows")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"orproofs: error: {exc}", file=sys.stderr)
    except (OrProofError, OSError, ValueError, KeyError) as exc:
        print(f"orproofs: error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line frontend.

Exit codes: 0 success, 1 domain or validation error, 2 usage error.
Commands never mutate input workspaces; the only writes are explicit
``--out`` targets and the ATT&CK catalog cache.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import WhatIfEdit, analyze, multi_ttp_scores, what_if
from .beneficial import BenefitWeights
from .catalog import DEFAULT_ATTACK_URL, default_cache_dir, fetch_attack_catalog
from .complexity import DstarMode
from .errors import CdsmError, FormatError
from .heatmap import auto_grid, emit_heatmap, normalize_scores, parse_grid
from .performance import Metric
from .reports import report_json_bytes, report_text, whatif_json_bytes, whatif_text
from .workspace import load_workspace, with_overrides


def _weights_arg(text: str) -> BenefitWeights:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("weights must be three comma-separated numbers: w1,w2,w3")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be numeric, got {text!r}")
    try:
        return BenefitWeights(diversity=values[0], independence=values[1], coverage=values[2])
    except CdsmError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        return parse_grid(text)
    except CdsmError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_analysis_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--mode", choices=[m.value for m in DstarMode], help="d* mode override")
    sub.add_argument("--beta", type=float, help="benefit weighting factor override (0..1)")
    sub.add_argument("--weights", type=_weights_arg, metavar="W1,W2,W3",
                     help="benefit factor weights override")
    sub.add_argument("--metric", choices=[m.value for m in Metric],
                     help="canonical metric override")


def _load_with_overrides(path: str, args: argparse.Namespace):
    workspace = load_workspace(Path(path))
    return with_overrides(
        workspace,
        mode=DstarMode(args.mode) if args.mode else None,
        beta=args.beta,
        weights=args.weights,
        canonical_metric=Metric(args.metric) if args.metric else None,
    )


def cmd_validate(args: argparse.Namespace) -> int:
    failures = 0
    for path in args.workspace:
        try:
            load_workspace(Path(path))
            print(f"ok: {path}")
        except CdsmError as exc:
            failures += 1
            print(f"invalid: {exc}", file=sys.stderr)
    return 1 if failures else 0


def cmd_analyze(args: argparse.Namespace) -> int:
    report = analyze(_load_with_overrides(args.workspace, args))
    if args.format == "structured":
        sys.stdout.write(report_json_bytes(report).decode("utf-8"))
    else:
        sys.stdout.write(report_text(report))
    if args.out:
        Path(args.out).write_bytes(report_json_bytes(report))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    report = analyze(_load_with_overrides(args.workspace, args))
    payload = (
        report_text(report).encode("utf-8")
        if args.format == "text"
        else report_json_bytes(report)
    )
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0


def _load_edits(args: argparse.Namespace) -> list[WhatIfEdit]:
    raw_edits: list[dict] = []
    if args.edits:
        try:
            doc = json.loads(Path(args.edits).read_text(encoding="utf-8"))
        except OSError as exc:
            raise FormatError(f"cannot read edits file: {exc}", source=args.edits)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}", source=args.edits)
        if isinstance(doc, dict) and "edits" in doc:
            doc = doc["edits"]
        if not isinstance(doc, list):
            raise FormatError("edits file must hold a JSON list", source=args.edits)
        raw_edits.extend(doc)
    for text in args.edit or []:
        try:
            raw_edits.append(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid edit JSON {text!r}: {exc}")
    edits = []
    for idx, raw in enumerate(raw_edits):
        try:
            edits.append(WhatIfEdit.from_dict(raw))
        except ValueError as exc:
            raise FormatError(f"edit {idx}: {exc}")
    return edits


def cmd_whatif(args: argparse.Namespace) -> int:
    workspace = _load_with_overrides(args.workspace, args)
    result = what_if(workspace, _load_edits(args))
    if args.format == "structured":
        sys.stdout.write(whatif_json_bytes(result).decode("utf-8"))
    else:
        sys.stdout.write(whatif_text(result))
    if args.out:
        Path(args.out).write_bytes(whatif_json_bytes(result))
    return 0


def _scores_from_file(path: str) -> list[tuple[str, float]]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"cannot read scores file: {exc}", source=path)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", source=path)
    entries = doc.get("scores") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise FormatError("scores file must hold a list under 'scores'", source=path)
    pairs = []
    for idx, entry in enumerate(entries):
        if not isinstance(entry, dict) or "ttp" not in entry or "d_e" not in entry:
            raise FormatError(f"scores[{idx}] must carry 'ttp' and 'd_e'", source=path)
        d_e = entry["d_e"]
        if isinstance(d_e, bool) or not isinstance(d_e, (int, float)) or d_e < 0:
            raise FormatError(f"scores[{idx}]: d_e must be a number >= 0", source=path)
        pairs.append((str(entry["ttp"]), float(d_e)))
    return pairs


def cmd_heatmap(args: argparse.Namespace) -> int:
    if args.scores and args.workspace:
        raise FormatError("pass either workspace directories or --scores, not both")
    if args.scores:
        pairs = _scores_from_file(args.scores)
    elif args.workspace:
        workspaces = [load_workspace(Path(p)) for p in args.workspace]
        pairs = multi_ttp_scores(workspaces, mode=DstarMode(args.mode) if args.mode else None)
    else:
        raise FormatError("heatmap needs workspace directories or --scores")
    scores = normalize_scores(pairs)
    rows, cols = args.grid if args.grid else auto_grid(len(scores))
    document = emit_heatmap(scores, rows, cols)
    sys.stdout.write(document.table_bytes().decode("utf-8"))
    if args.out:
        Path(args.out).write_text(document.svg, encoding="utf-8")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .catalog import load_attack_catalog
    from .service import create_app

    catalog = load_attack_catalog(args.catalog) if args.catalog else None
    app = create_app(Path(args.root), catalog=catalog)
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise FormatError(f"--bind must look like HOST:PORT, got {args.bind!r}")
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def cmd_fetch_attack(args: argparse.Namespace) -> int:
    catalog, source, warning = fetch_attack_catalog(
        url=args.url,
        cache_dir=args.cache_dir or default_cache_dir(),
        force=args.force,
    )
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    cache = Path(args.cache_dir or default_cache_dir()) / "attack-catalog.json"
    print(f"catalog: {len(catalog)} entries from {source} (cache: {cache})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdsm",
        description="Complexity analytics for layered cyber defences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check workspaces and report violations")
    p.add_argument("workspace", nargs="+", help="workspace directory (or workspace.yaml)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="print the human-readable analysis report")
    p.add_argument("workspace")
    _add_analysis_flags(p)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--out", help="also write the structured report to this file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="emit the structured analysis report")
    p.add_argument("workspace")
    _add_analysis_flags(p)
    p.add_argument("--format", choices=["structured", "text"], default="structured")
    p.add_argument("--out", help="write to this file instead of standard output")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("whatif", help="evaluate edits against a workspace")
    p.add_argument("workspace")
    p.add_argument("--edits", help="JSON file with a list of edits")
    p.add_argument("--edit", action="append", metavar="JSON",
                   help="inline edit as a JSON object (repeatable)")
    _add_analysis_flags(p)
    p.add_argument("--format", choices=["text", "structured"], default="text")
    p.add_argument("--out", help="also write the structured result to this file")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("heatmap", help="cross-TTP complexity heatmap")
    p.add_argument("workspace", nargs="*", help="workspace directories (one per TTP)")
    p.add_argument("--scores", help="JSON file of precomputed (ttp, d_e) scores")
    p.add_argument("--mode", choices=[m.value for m in DstarMode])
    p.add_argument("--grid", type=_grid_arg, metavar="RxC", help="tile grid, e.g. 6x5")
    p.add_argument("--out", help="write the SVG here (score table goes to stdout)")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("serve", help="serve the JSON API for the workbench UI")
    p.add_argument("root", help="directory containing workspace directories")
    p.add_argument("--bind", default="127.0.0.1:8734", metavar="HOST:PORT")
    p.add_argument("--catalog", help="ATT&CK catalog file to serve lookups from")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fetch-attack", help="refresh the ATT&CK catalog cache")
    p.add_argument("--url", default=DEFAULT_ATTACK_URL)
    p.add_argument("--cache-dir", help="cache directory (default: CDSM_CACHE_DIR or ~/.cache/cdsm)")
    p.add_argument("--force", action="store_true", help="refetch even with a warm cache")
    p.set_defaults(func=cmd_fetch_attack)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CdsmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

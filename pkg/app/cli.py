"""
Command-line entry point for p3t.

Subcommands: gen-tree, pointset, embed, verify, render, stats.
Exit codes: 0 ok, 2 parse or usage error, 3 verification failure,
4 escalation exhausted, 5 brute-force cap exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from typing import TextIO

import numpy as np
import psutil

from .common import get_app_directory
from .config_manager import FRINGE_LAYOUTS, create_config_manager
from .embedder import EmbedSettings, EscalationExhausted, embed
from .embedding import EmbeddingFormatError, read_embedding, serialize_embedding
from .exactgeom import CapExceeded, brute_force_psembed, oracle_points, verify_drawing
from .logger_utils import close_logger, get_logger
from .render import RenderOptions, write_png, write_svg
from .sparsegrid import (
    GridPreconditionError,
    contains,
    count_points,
    iter_points,
    make_params,
)
from .tritree import (
    MODELS,
    TriTreeFormatError,
    build_face_tree,
    designate_hubs,
    generate_random,
    read_tritree,
    serialize_tritree,
)
from .versioning import VERSION

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_ESCALATION = 4
EXIT_CAP = 5


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="p3t",
        description=(
            "Universal point sets and straight-line embeddings of planar 3-trees"
        ),
    )
    parser.add_argument("--version", action="version", version=f"p3t {VERSION}")
    parser.add_argument(
        "--verbose", action="store_true", help="Also log to stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-tree", help="Write a random 3-tree file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--model", choices=MODELS, default="uniform-face")
    gen.add_argument("--out", type=Path, help="Output file (default: stdout)")

    points = sub.add_parser("pointset", help="Query the sparse grid for n vertices")
    points.add_argument("--n", type=int, required=True)
    mode = points.add_mutually_exclusive_group(required=True)
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--contains", nargs=2, type=int, metavar=("X", "Y"))
    points.add_argument("--stretched", action="store_true", help="Print x Y for --list")

    emb = sub.add_parser("embed", help="Embed a 3-tree file")
    emb.add_argument("--in", dest="tree", type=Path, required=True)
    emb.add_argument("--out", type=Path, help="Output file (default: stdout)")
    emb.add_argument("--verify", action="store_true")
    emb.add_argument("--max-escalations", type=int)
    emb.add_argument("--fringe-layout", choices=FRINGE_LAYOUTS)
    emb.add_argument("--stretched", action="store_true", help="Write x Y per vertex")
    emb.add_argument(
        "--oracle", action="store_true", help="Brute-force search (at most 8 vertices)"
    )

    ver = sub.add_parser("verify", help="Check an embedding exactly")
    ver.add_argument("--tree", type=Path, required=True)
    ver.add_argument("--emb", type=Path, required=True)

    ren = sub.add_parser("render", help="Draw an embedding as SVG")
    ren.add_argument("--tree", type=Path, required=True)
    ren.add_argument("--emb", type=Path, required=True)
    ren.add_argument("--svg", type=Path, required=True)
    ren.add_argument("--png", type=Path)
    ren.add_argument("--scale", type=float)
    ren.add_argument("--arc-samples", type=int)
    ren.add_argument("--show-grid", action="store_true", default=None)
    ren.add_argument("--stretched-y", action="store_true", default=None)

    stats = sub.add_parser("stats", help="Point counts and hub statistics")
    stats.add_argument("--n-list", default="16,64,256,1024")
    stats.add_argument("--sample", type=int)
    stats.add_argument("--seed", type=int)

    return parser


# === Subcommands ===


def _emit(text: str, out: Path | None, stdout: TextIO) -> None:
    if out is None:
        stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _cmd_gen_tree(args, config, logger, stdout) -> int:
    tree = generate_random(args.n, args.seed, args.model)
    _emit(serialize_tritree(tree), args.out, stdout)
    logger.info("generated %s tree n=%d seed=%d", args.model, args.n, args.seed)
    return EXIT_OK


def _cmd_pointset(args, config, logger, stdout) -> int:
    params = make_params(args.n)
    if args.count:
        stdout.write(f"{count_points(params)}\n")
    elif args.contains:
        stdout.write("true\n" if contains(tuple(args.contains), params) else "false\n")
    else:
        base = params.stretch_base
        for p in iter_points(params):
            y = base**p.y if args.stretched else p.y
            stdout.write(f"{p.x} {y}\n")
    return EXIT_OK


def _cmd_embed(args, config, logger, stdout) -> int:
    tree = read_tritree(args.tree)
    if args.oracle:
        params = make_params(tree.n)
        result = brute_force_psembed(tree, oracle_points(params), params)
        if result is None:
            logger.error("brute force found no embedding for %s", args.tree)
            return EXIT_VERIFY
    else:
        if args.max_escalations is not None:
            config["max_escalations"] = args.max_escalations
        if args.fringe_layout:
            config["fringe_layout"] = args.fringe_layout
        result = embed(tree, EmbedSettings.from_config(config))

    _emit(serialize_embedding(result, stretched=args.stretched), args.out, stdout)

    if args.verify or config.get("verify_after_embed"):
        report = verify_drawing(tree, result)
        for line in report.lines():
            sys.stderr.write(line + "\n")
        if not report.ok:
            logger.error("embedding of %s failed verification", args.tree)
            return EXIT_VERIFY
    return EXIT_OK


def _cmd_verify(args, config, logger, stdout) -> int:
    tree = read_tritree(args.tree)
    emb = read_embedding(args.emb)
    report = verify_drawing(tree, emb)
    for line in report.lines():
        stdout.write(line + "\n")
    if report.ok:
        stdout.write("OK\n")
        return EXIT_OK
    logger.error("%s fails verification against %s", args.emb, args.tree)
    return EXIT_VERIFY


def _cmd_render(args, config, logger, stdout) -> int:
    tree = read_tritree(args.tree)
    emb = read_embedding(args.emb)
    options = RenderOptions.from_config(
        config,
        scale=args.scale,
        arc_samples=args.arc_samples,
        show_grid=args.show_grid,
        stretched_y=args.stretched_y,
    )
    write_svg(tree, emb, args.svg, options)
    if args.png:
        write_png(tree, emb, args.png, options)
    logger.info("rendered %s", args.svg)
    return EXIT_OK


def _cmd_stats(args, config, logger, stdout) -> int:
    try:
        n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError:
        raise GridPreconditionError(f"malformed --n-list {args.n_list!r}") from None
    sample = args.sample if args.sample is not None else config["stats_sample_size"]
    seed = args.seed if args.seed is not None else config["stats_seed"]
    process = psutil.Process()

    stdout.write("nEff\tpoints\tratio\thubs_max\thubs_mean\tseconds\trss_mb\n")
    for n in n_list:
        started = time.perf_counter()
        params = make_params(n)
        total = count_points(params)
        ratio = total / (params.n_eff**1.5 * math.log2(params.n_eff))
        hubs = np.array(
            [
                len(
                    designate_hubs(
                        build_face_tree(generate_random(params.n_eff, seed + i)), params
                    ).hubs()
                )
                for i in range(sample)
            ]
        )
        elapsed = time.perf_counter() - started
        rss_mb = process.memory_info().rss / (1024 * 1024)
        stdout.write(
            f"{params.n_eff}\t{total}\t{ratio:.2f}\t{hubs.max() if sample else 0}\t"
            f"{hubs.mean() if sample else 0.0:.2f}\t{elapsed:.2f}\t{rss_mb:.1f}\n"
        )
        logger.info("stats n_eff=%d points=%d ratio=%.2f", params.n_eff, total, ratio)
    return EXIT_OK


COMMANDS = {
    "gen-tree": _cmd_gen_tree,
    "pointset": _cmd_pointset,
    "embed": _cmd_embed,
    "verify": _cmd_verify,
    "render": _cmd_render,
    "stats": _cmd_stats,
}


def main(argv: list[str] | None = None, stdout: TextIO | None = None) -> int:
    """Entry point for the p3t command"""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    app_dir = get_app_directory()
    config = create_config_manager(app_dir).load_config()
    logger = get_logger("p3t", app_dir, level=config["log_level"], console=args.verbose)

    try:
        return COMMANDS[args.command](args, config, logger, stdout)
    except (TriTreeFormatError, EmbeddingFormatError) as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        logger.warning("parse error: %s", exc)
        return EXIT_PARSE
    except CapExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        logger.warning("brute force refused: %s", exc)
        return EXIT_CAP
    except (GridPreconditionError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        logger.warning("%s: %s", args.command, exc)
        return EXIT_PARSE
    except EscalationExhausted as exc:
        sys.stderr.write(f"error: {exc}\n")
        logger.exception("escalation exhausted")
        return EXIT_ESCALATION
    finally:
        close_logger("p3t")


if __name__ == "__main__":
    sys.exit(main())

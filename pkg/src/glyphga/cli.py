"""Command-line entry point: ``glyphga <command> ...``.

Exit codes: 0 ok, 2 bad input or output path, 3 empty image, 4 no usable
templates, 5 malformed template store.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import EmptyImage, EmptyTrainingSet, MalformedImage, MalformedStore
from .genetic import crossover
from .geometry import Glyph, Params
from .raster import BinaryRaster, load_raster
from .recognizer import (
    EvalReport,
    evaluate,
    glyph_from_raster,
    load_templates,
    param_differences,
    recognize,
    save_templates,
    train,
)
from .svg import glyph_svg

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_NO_TEMPLATES, EXIT_STORE = 0, 2, 3, 4, 5
IMAGE_SUFFIXES = {".pbm", ".pgm"}

# flag -> Params field
_PARAM_FLAGS = {
    "gamma": "gamma",
    "beta": "beta",
    "eta": "eta",
    "canvas": "canvas",
    "generations": "ga_generations",
    "pool_cap": "pool_cap",
    "max_path_len": "max_path_len",
}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _canvas(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("canvas must look like 100x100") from None
    return (w, h)


def _add_params(sp: argparse.ArgumentParser, seed: bool = True) -> None:
    g = sp.add_argument_group("parameters")
    g.add_argument("--gamma", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--eta", type=float)
    g.add_argument("--canvas", type=_canvas, metavar="WxH")
    g.add_argument("--generations", type=int)
    g.add_argument("--pool-cap", type=int)
    g.add_argument("--max-path-len", type=int)
    if seed:
        g.add_argument("--seed", type=int)


def _overrides(args) -> dict:
    return {field: getattr(args, flag) for flag, field in _PARAM_FLAGS.items() if getattr(args, flag, None) is not None}


def _params(args, base: Params | None = None) -> Params:
    base = base or Params()
    over = _overrides(args)
    if base is not None and over:
        changed = [k for k, v in over.items() if getattr(base, k) != v]
        if changed and getattr(args, "_store_backed", False):
            print(f"warning: overriding stored parameters: {', '.join(sorted(changed))}", file=sys.stderr)
    if getattr(args, "seed", None) is not None:
        over["rng_seed"] = args.seed
    try:
        return replace(base, **over)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, f"bad parameter: {exc}") from exc


def _read_image(path: str) -> BinaryRaster:
    try:
        return load_raster(Path(path).read_bytes())
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}") from exc
    except MalformedImage as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from exc


def _glyph(r: BinaryRaster, p: Params, path: str) -> Glyph:
    try:
        return glyph_from_raster(r, p)
    except EmptyImage as exc:
        raise CliError(EXIT_EMPTY, f"{path}: {exc}") from exc


def _write(path: str | Path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write {path}: {exc.strerror or exc}") from exc


def _plural(n: int, one: str, many: str | None = None) -> str:
    return f"{n} {one if n == 1 else (many or one + 's')}"


def summary(g: Glyph) -> str:
    counts = g.kind_counts()
    parts = [_plural(len(g.vertices), "vertex", "vertices")]
    if counts["line"]:
        parts.append(_plural(counts["line"], "line"))
    if counts["curve"]:
        parts.append(_plural(counts["curve"], "curve"))
    if not g.edges:
        parts.append("0 edges")
    return ", ".join(parts)


def _labeled_dir(root: str) -> list[tuple[str, BinaryRaster, str]]:
    base = Path(root)
    if not base.is_dir():
        raise CliError(EXIT_INPUT, f"not a directory: {root}")
    items = []
    try:
        for sub in sorted(p for p in base.iterdir() if p.is_dir()):
            if len(sub.name) != 1:
                print(f"note: skipping folder {sub.name!r} (not a single character)", file=sys.stderr)
                continue
            for f in sorted(sub.iterdir()):
                if f.suffix.lower() not in IMAGE_SUFFIXES:
                    continue
                try:
                    items.append((sub.name, load_raster(f.read_bytes()), f"{sub.name}/{f.name}"))
                except MalformedImage as exc:
                    print(f"note: skipping {sub.name}/{f.name}: {exc}", file=sys.stderr)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {root}: {exc.strerror or exc}") from exc
    return items


def _load_store(path: str):
    try:
        return load_templates(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}") from exc
    except MalformedStore as exc:
        raise CliError(EXIT_STORE, f"{path}: {exc}") from exc


def _store_params(args, t) -> Params:
    args._store_backed = True
    p = _params(args, t.params)
    diff = param_differences(t.params, p)
    if diff and not _overrides(args):
        print(f"warning: parameters differ from training: {', '.join(diff)}", file=sys.stderr)
    return p


# ------------------------------------------------------------------ commands

def cmd_extract(args) -> int:
    p = _params(args)
    g = _glyph(_read_image(args.image), p, args.image)
    if args.json:
        _write(args.json, json.dumps(g.to_json(), indent=1) + "\n")
    if args.svg:
        _write(args.svg, glyph_svg(g, p.canvas, p.beta))
    print(summary(g))
    return EXIT_OK


def cmd_train(args) -> int:
    p = _params(args)
    items = _labeled_dir(args.data)
    try:
        t = train(items, p)
    except EmptyTrainingSet as exc:
        raise CliError(EXIT_NO_TEMPLATES, str(exc)) from exc
    try:
        save_templates(t, args.out)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write {args.out}: {exc.strerror or exc}") from exc
    for ch in t.characters:
        print(f"{ch}: {len(t.entries[ch])}")
    for name in t.skipped:
        print(f"skipped (blank): {name}")
    print(f"{t.count()} templates, {len(t.entries)} characters")
    return EXIT_OK


def cmd_recognize(args) -> int:
    t = _load_store(args.templates)
    p = _store_params(args, t)
    r = _read_image(args.image)
    try:
        res = recognize(r, t, p, ga=not args.no_ga)
    except EmptyImage as exc:
        raise CliError(EXIT_EMPTY, f"{args.image}: {exc}") from exc
    print(f"best: {res.best_char}  deviation: {res.best_deviation:.3f}  ga: {'on' if res.ga_used else 'off'}")
    for ch, d in res.ranking():
        print(f"  {ch}  {d:.3f}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    if args.from_report:
        try:
            doc = json.loads(Path(args.from_report).read_text(encoding="utf-8"))
            rep = EvalReport(int(doc["total"]), int(doc["correct"]),
                             tuple((c["truth"], c["predicted"], c["file"]) for c in doc.get("confusions", [])))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise CliError(EXIT_INPUT, f"bad report {args.from_report}: {exc}") from exc
        print(rep.table())
        return EXIT_OK
    if not args.data or not args.templates:
        raise CliError(EXIT_INPUT, "--data and --templates are required")
    t = _load_store(args.templates)
    p = _store_params(args, t)
    items = _labeled_dir(args.data)
    if not items:
        raise CliError(EXIT_INPUT, f"no images under {args.data}")
    if args.report:
        # fail on an unwritable report path before spending time recognizing
        try:
            Path(args.report).touch()
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"cannot write {args.report}: {exc.strerror or exc}") from exc
    rep = evaluate(items, t, p, ga=not args.no_ga, workers=args.workers)
    if args.report:
        _write(args.report, json.dumps(rep.to_json(), indent=1, ensure_ascii=False) + "\n")
    print(rep.table())
    return EXIT_OK


def cmd_crossover_demo(args) -> int:
    p = _params(args)
    ga, gb = (_glyph(_read_image(path), p, path) for path in (args.image_a, args.image_b))
    kids = crossover(ga, gb, p, np.random.default_rng(p.rng_seed))
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot create {out}: {exc.strerror or exc}") from exc
    for k, child in enumerate(kids):
        lineage = {key: (list(v) if isinstance(v, tuple) else v) for key, v in child.lineage.items()}
        lineage["parents"] = [Path(args.image_a).name, Path(args.image_b).name]
        doc = {"glyph": child.glyph.to_json(), "lineage": lineage}
        _write(out / f"offspring_{k}.json", json.dumps(doc, indent=1) + "\n")
        _write(out / f"offspring_{k}.svg", glyph_svg(child.glyph, p.canvas, p.beta))
    print(f"{len(kids)} offspring written to {out}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    path = Path(args.path)
    if path.suffix.lower() == ".json":
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from exc
        if isinstance(doc, dict) and "characters" in doc:
            t = _load_store(str(path))
            print(f"template store, canvas {t.canvas[0]}x{t.canvas[1]}")
            for k, v in (t.params or Params()).to_dict().items():
                print(f"  {k} = {v}")
            for ch in t.characters:
                kinds = [summary(g) for g in t.entries[ch]]
                print(f"{ch}: {len(kinds)}  [{'; '.join(kinds)}]")
            return EXIT_OK
        try:
            g = Glyph.from_json(doc.get("glyph", doc) if isinstance(doc, dict) else doc)
        except ValueError as exc:
            raise CliError(EXIT_INPUT, f"{path}: {exc}") from exc
    else:
        p = _params(args)
        g = _glyph(_read_image(str(path)), p, str(path))
    print(summary(g))
    for i, v in enumerate(g.vertices):
        print(f"  v{i} ({v.x:.2f}, {v.y:.2f})")
    for (i, j), e in zip(g.edge_indices(), g.edges):
        extra = "" if e.kind.label == "line" else f" max ({e.max_point.x:.2f}, {e.max_point.y:.2f})"
        print(f"  v{i} - v{j} {e.kind.label}{extra}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import template_images, test_images, write_corpus

    try:
        write_corpus(Path(args.out) / "train", template_images())
        write_corpus(Path(args.out) / "test", test_images(args.per_char, args.seed))
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write corpus: {exc.strerror or exc}") from exc
    print(f"corpus written to {args.out}/train and {args.out}/test")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glyphga", description="Graph-based handwritten capital recognition.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("extract", help="image -> glyph JSON / SVG")
    sp.add_argument("image")
    sp.add_argument("--json")
    sp.add_argument("--svg")
    _add_params(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("train", help="labeled image folders -> template store")
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", required=True)
    _add_params(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("recognize", help="classify one image")
    sp.add_argument("image")
    sp.add_argument("--templates", required=True)
    sp.add_argument("--no-ga", action="store_true")
    _add_params(sp)
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("evaluate", help="accuracy over labeled image folders")
    sp.add_argument("--data")
    sp.add_argument("--templates")
    sp.add_argument("--report")
    sp.add_argument("--from-report", help="re-print the summary of an existing report")
    sp.add_argument("--no-ga", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    _add_params(sp)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("crossover-demo", help="write every offspring of two images")
    sp.add_argument("image_a")
    sp.add_argument("image_b")
    sp.add_argument("--out", required=True)
    _add_params(sp)
    sp.set_defaults(func=cmd_crossover_demo)

    sp = sub.add_parser("inspect", help="describe an image, glyph JSON or template store")
    sp.add_argument("path")
    _add_params(sp)
    sp.set_defaults(func=cmd_inspect)

    sp = sub.add_parser("synth", help="write the synthetic capital corpus")
    sp.add_argument("--out", required=True)
    sp.add_argument("--per-char", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_synth)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

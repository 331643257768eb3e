"""Training, recognition, evaluation and the template store."""
from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .deviation import graph_deviation
from .errors import EmptyImage, EmptyTemplates, EmptyTrainingSet, MalformedStore
from .extract import extract_graph
from .genetic import CrossoverCache, evolve_pool
from .geometry import Glyph, Params
from .raster import BinaryRaster, normalize_raster, thin

STORE_VERSION = 1


def glyph_from_raster(r: BinaryRaster, p: Params) -> Glyph:
    """thin -> normalize -> thin -> graph. The second thinning absorbs the
    stroke thickening that upscaling introduces."""
    skel = thin(r)
    norm, _ = normalize_raster(skel, p)
    return extract_graph(thin(norm), p)


@dataclass(frozen=True)
class TemplateSet:
    canvas: tuple[int, int]
    entries: dict[str, tuple[Glyph, ...]]
    params: Params | None = None
    skipped: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for ch, gs in self.entries.items():
            if len(ch) != 1:
                raise ValueError(f"template key {ch!r} is not a single character")
            if not gs:
                raise ValueError(f"character {ch!r} has no templates")

    @property
    def characters(self) -> list[str]:
        return sorted(self.entries)

    def count(self) -> int:
        return sum(len(v) for v in self.entries.values())


@dataclass(frozen=True)
class RecognitionResult:
    best_char: str
    best_deviation: float
    per_char: dict[str, float]
    ga_used: bool

    def ranking(self) -> list[tuple[str, float]]:
        return sorted(self.per_char.items(), key=lambda kv: (kv[1], kv[0]))


def accuracy_percent(correct: int, total: int) -> Decimal:
    if total <= 0:
        return Decimal("0.00")
    return (Decimal(100) * correct / Decimal(total)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class EvalReport:
    total: int
    correct: int
    confusions: tuple[tuple[str, str, str], ...] = ()
    skipped: tuple[tuple[str, str], ...] = ()
    ga_used: bool = True

    def __post_init__(self):
        if not 0 <= self.correct <= self.total:
            raise ValueError("need 0 <= correct <= total")

    @property
    def accuracy(self) -> Decimal:
        return accuracy_percent(self.correct, self.total)

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "correct": self.correct,
            "accuracy": f"{self.accuracy}",
            "ga": self.ga_used,
            "confusions": [{"truth": t, "predicted": p, "file": f} for t, p, f in self.confusions],
            "skipped": [{"file": f, "reason": r} for f, r in self.skipped],
        }

    def table(self) -> str:
        lines = [f"accuracy: {self.accuracy} ({self.correct}/{self.total})"]
        for t, p, f in self.confusions:
            lines.append(f"  {t} -> {p}  {f}")
        if self.skipped:
            lines.append(f"skipped: {len(self.skipped)}")
        return "\n".join(lines)


# ------------------------------------------------------------------ training

def train(labeled: Iterable[tuple], p: Params) -> TemplateSet:
    """Labeled rasters -> template set. Items are (char, raster) or (char, raster, name);
    blank images are skipped and listed in ``skipped``."""
    entries: dict[str, list[Glyph]] = {}
    skipped = []
    for n, item in enumerate(labeled):
        ch, r = item[0], item[1]
        name = item[2] if len(item) > 2 else f"#{n}"
        try:
            g = glyph_from_raster(r, p)
        except EmptyImage:
            skipped.append(str(name))
            continue
        if not g.edges:
            skipped.append(str(name))
            continue
        entries.setdefault(ch, []).append(g)
    if not entries:
        raise EmptyTrainingSet("no usable training images")
    return TemplateSet(p.canvas, {k: tuple(v) for k, v in sorted(entries.items())}, p, tuple(skipped))


# ------------------------------------------------------------------ recognition

def _char_rng(p: Params, ch: str) -> np.random.Generator:
    # keyed by codepoint so a character's stream does not depend on which others are present
    return np.random.default_rng(p.rng_seed ^ ord(ch))


def recognize_glyph(g: Glyph, t: TemplateSet, p: Params, ga: bool = True,
                    cache: CrossoverCache | None = None) -> RecognitionResult:
    if not t.entries:
        raise EmptyTemplates("template set is empty")
    per_char: dict[str, float] = {}
    for ch in t.characters:
        if ga:
            per_char[ch] = evolve_pool(t.entries[ch], g, p, _char_rng(p, ch), cache).best
        else:
            per_char[ch] = min(graph_deviation(tg, g, p) for tg in t.entries[ch])
    best = min(per_char, key=lambda c: (per_char[c], c))
    return RecognitionResult(best, per_char[best], per_char, ga)


def recognize(img: BinaryRaster, t: TemplateSet, p: Params, ga: bool = True,
              cache: CrossoverCache | None = None) -> RecognitionResult:
    return recognize_glyph(glyph_from_raster(img, p), t, p, ga, cache)


# ------------------------------------------------------------------ evaluation

_worker_state: dict = {}


def _worker_init(t: TemplateSet, p: Params, ga: bool) -> None:
    _worker_state.update(t=t, p=p, ga=ga, cache=CrossoverCache())


def _worker_run(r: BinaryRaster):
    s = _worker_state
    try:
        return recognize(r, s["t"], s["p"], s["ga"], s["cache"]).best_char
    except EmptyImage as exc:
        return exc


def evaluate(testset: Sequence[tuple], t: TemplateSet, p: Params, ga: bool = True,
             workers: int = 1) -> EvalReport:
    """Recognize every item; items are (char, raster) or (char, raster, name).

    Results do not depend on ``workers``: every recognition is a pure
    function of the image, templates and Params.
    """
    items = [(it[0], it[1], str(it[2]) if len(it) > 2 else f"#{n}") for n, it in enumerate(testset)]
    if workers > 1:
        with ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(t, p, ga)) as ex:
            preds = list(ex.map(_worker_run, [r for _, r, _ in items], chunksize=4))
    else:
        _worker_init(t, p, ga)
        preds = [_worker_run(r) for _, r, _ in items]
        _worker_state.clear()
    correct, confusions, skipped = 0, [], []
    for (truth, _, name), pred in zip(items, preds):
        if isinstance(pred, Exception):
            skipped.append((name, str(pred)))
        elif pred == truth:
            correct += 1
        else:
            confusions.append((truth, pred, name))
    total = len(items) - len(skipped)
    return EvalReport(total, correct, tuple(confusions), tuple(skipped), ga)


# ------------------------------------------------------------------ persistence

def templates_to_json(t: TemplateSet) -> dict:
    params = (t.params or Params(canvas=t.canvas)).to_dict()
    return {
        "version": STORE_VERSION,
        "canvas": list(t.canvas),
        "params": params,
        "characters": {ch: [g.to_json() for g in t.entries[ch]] for ch in t.characters},
    }


def templates_from_json(doc) -> TemplateSet:
    if not isinstance(doc, dict):
        raise MalformedStore("store must be a JSON object")
    if doc.get("version") != STORE_VERSION:
        raise MalformedStore(f"unsupported or missing store version {doc.get('version')!r}")
    try:
        canvas = tuple(int(v) for v in doc["canvas"])
        params = Params.from_dict(doc["params"]) if "params" in doc else Params(canvas=canvas)
        chars = doc["characters"]
        if not isinstance(chars, dict) or not chars:
            raise MalformedStore("store has no characters")
        entries = {ch: tuple(Glyph.from_json(g) for g in gs) for ch, gs in sorted(chars.items())}
        return TemplateSet(canvas, entries, params)
    except MalformedStore:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedStore(f"bad template store: {exc}") from exc


def save_templates(t: TemplateSet, sink: str | Path | IO[str]) -> None:
    # json writes floats with repr(), the shortest string that round-trips exactly
    text = json.dumps(templates_to_json(t), indent=1, ensure_ascii=False) + "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8")


def load_templates(source: str | Path | IO[str]) -> TemplateSet:
    try:
        text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedStore(f"store is not valid JSON: {exc}") from exc
    return templates_from_json(doc)


def param_differences(stored: Params | None, runtime: Params) -> list[str]:
    """Names of comparability-relevant Params that differ from the training-time ones."""
    if stored is None:
        return []
    skip = {"rng_seed", "ga_generations", "pool_cap"}
    a, b = stored.to_dict(), runtime.to_dict()
    return [k for k in a if k not in skip and a[k] != b[k]]


def warn_on_param_mismatch(t: TemplateSet, p: Params) -> list[str]:
    diff = param_differences(t.params, p)
    if diff:
        warnings.warn(f"runtime parameters differ from training: {', '.join(diff)}", stacklevel=2)
    return diff

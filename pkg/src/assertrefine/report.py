"""End-to-end evaluation runs and their CSV / JSON / Markdown / figure outputs."""
from __future__ import annotations

import csv
import io
import json
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .benchmarks import BenchmarkError, generate_benchmark
from .mutation import Aggregate, DiagnosisReport, aggregate, diagnose, generate_mutants
from .pipeline import SCHEMA_VERSION, Config, refine
from .program import flatten
from .qasm import AssertionKind

METHODS = ("moving", "adding+moving")
CSV_FIELDS = [
    "family", "qubits", "assertion", "mutant", "mutation", "mutated_line", "detected",
    "distance_original", "distance_moving", "distance_adding_moving",
    "reduction_moving", "reduction_adding_moving",
]


@dataclass
class EvaluationResult:
    rows: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    seed: int = 0

    def aggregates(self) -> dict[tuple[str, str, str], Aggregate]:
        out = {}
        groups: dict[tuple[str, str], list[dict]] = {}
        for row in self.rows:
            groups.setdefault((row["family"], row["assertion"]), []).append(row)
        for (family, kind), rows in groups.items():
            out[(family, kind, "moving")] = aggregate([r["reduction_moving"] for r in rows])
            out[(family, kind, "adding+moving")] = aggregate([r["reduction_adding_moving"] for r in rows])
        return out

    def families(self) -> list[str]:
        seen: list[str] = []
        for item in self.rows + self.skipped:
            if item["family"] not in seen:
                seen.append(item["family"])
        return seen


def _program_seed(seed: int, name: str) -> int:
    return (seed * 1_000_003 + zlib.crc32(name.encode())) % 2**32


def evaluate_program(flat, name: str, seed: int, repetitions: int, config: Config) -> list[dict]:
    """Mutate one correct program and compare both refinement variants."""
    checker = config.checker()
    mutants = generate_mutants(flat, repetitions, _program_seed(seed, name), name=name)
    moving = refine(flat, config, add=False).program
    full = refine(flat, config, add=True).program
    rows = []
    for mutant in mutants:
        a: DiagnosisReport = diagnose(mutant, moving, seed, checker)
        b: DiagnosisReport = diagnose(mutant, full, seed, checker)
        rows.append({
            "mutant": mutant.id,
            "mutation": mutant.mutation.value,
            "mutated_line": a.mutated_line,
            "detected": a.detected and b.detected,
            "distance_original": a.distance_original,
            "distance_moving": a.distance_refined,
            "distance_adding_moving": b.distance_refined,
            "reduction_moving": a.reduction,
            "reduction_adding_moving": b.reduction,
        })
    return rows


def run_evaluation(
    families: Iterable[str],
    sizes: Iterable[int],
    kinds: Iterable[str] = ("ent", "eq"),
    seed: int = 0,
    repetitions: int = 10,
    config: Config = Config(),
) -> EvaluationResult:
    result = EvaluationResult(seed=seed)
    for family in families:
        for kind in kinds:
            kind = AssertionKind(kind)
            for n in sizes:
                try:
                    source = generate_benchmark(family, n, kind)
                except BenchmarkError as exc:
                    result.skipped.append({"family": family, "qubits": n, "assertion": kind.value, "reason": str(exc)})
                    continue
                name = f"{family}-{n}-{kind.value}"
                for row in evaluate_program(flatten(source), name, seed, repetitions, config):
                    result.rows.append({"family": family, "qubits": n, "assertion": kind.value, **row})
    return result


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(result: EvaluationResult) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in result.rows:
        writer.writerow({k: _cell(row[k]) for k in CSV_FIELDS})
    return buf.getvalue()


def to_json(result: EvaluationResult) -> dict:
    aggs = result.aggregates()
    table = []
    for family in result.families():
        entry = {"family": family}
        for kind in ("ent", "eq"):
            for method in METHODS:
                agg = aggs.get((family, kind, method))
                entry[f"{kind}/{method}"] = None if agg is None else {
                    "count": agg.count, "mean": agg.mean, "std": agg.std,
                }
        table.append(entry)
    return {"schema": SCHEMA_VERSION, "seed": result.seed, "table": table, "skipped": result.skipped}


def to_markdown(result: EvaluationResult) -> str:
    aggs = result.aggregates()
    lines = [
        "| Family | Ent: moving | Ent: adding+moving | Eq: moving | Eq: adding+moving |",
        "|---|---|---|---|---|",
    ]
    for family in result.families():
        cells = []
        for kind in ("ent", "eq"):
            for method in METHODS:
                agg = aggs.get((family, kind, method))
                cells.append("N/A" if agg is None else agg.format())
        lines.append(f"| {family} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def plot_reductions(result: EvaluationResult, path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    aggs = result.aggregates()
    families = result.families()
    series = [(kind, method) for kind in ("ent", "eq") for method in METHODS]
    x = np.arange(len(families))
    width = 0.8 / len(series)
    fig, ax = plt.subplots(figsize=(max(6, 1.8 * len(families)), 4))
    for i, (kind, method) in enumerate(series):
        means, errs = [], []
        for family in families:
            agg = aggs.get((family, kind, method))
            means.append(0 if agg is None or agg.mean is None else 100 * agg.mean)
            errs.append(0 if agg is None or agg.std is None else 100 * agg.std)
        ax.bar(x + (i - (len(series) - 1) / 2) * width, means, width, yerr=errs,
               capsize=3, label=f"{kind}: {method}")
    ax.set_xticks(x)
    ax.set_xticklabels(families)
    ax.set_ylabel("reduction of inspected instructions [%]")
    ax.set_ylim(bottom=0)
    ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_outputs(result: EvaluationResult, outdir: Path, plot: bool = True) -> dict[str, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "csv": outdir / "mutants.csv",
        "json": outdir / "aggregate.json",
        "markdown": outdir / "aggregate.md",
    }
    paths["csv"].write_text(to_csv(result))
    paths["json"].write_text(json.dumps(to_json(result), indent=2) + "\n")
    paths["markdown"].write_text(to_markdown(result))
    if plot and result.rows:
        paths["figure"] = plot_reductions(result, outdir / "reduction.png")
    return paths

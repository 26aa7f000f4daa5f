"""Benchmark harness: synthetic batches, batched-vs-serial timing, CSV report.

Every benchmarked batch is first scored by both implementations and the
scores compared; timing a pair of non-equivalent computations is refused.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _backend
from .batch import TokenBatch
from .bleu import BleuConfig, sentence_bleu
from .ngrams import CapacityError
from .oracle import oracle_sentence_bleu

DEFAULT_BATCH_SIZES = (16, 32, 64, 128, 256, 512)
DEFAULT_SEQ_LENS = (256, 1024)

CSV_HEADER = "implementation,batch_size,seq_len,mean_s,std_s,speedup"


class EquivalenceError(RuntimeError):
    """Batched and serial scores disagree beyond 1e-6 on a benchmark batch."""


@dataclass
class BenchConfig:
    batch_sizes: Sequence[int] = DEFAULT_BATCH_SIZES
    seq_lens: Sequence[int] = DEFAULT_SEQ_LENS
    vocab_size: int = 32000
    num_references: int = 1
    repeats: int = 5
    seed: int = 42
    smoothing: str = "none"
    implementation: str = "both"   # both | batched | oracle
    threads: int = 1
    backend: str = "auto"

    def __post_init__(self):
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if min(self.batch_sizes, default=0) < 1 or min(self.seq_lens, default=0) < 1:
            raise ValueError("batch sizes and sequence lengths must be positive")
        if self.vocab_size < 1 or self.num_references < 1 or self.threads < 1:
            raise ValueError("vocab_size, num_references and threads must be positive")
        if self.implementation not in ("both", "batched", "oracle"):
            raise ValueError(f"unknown implementation {self.implementation!r}")

    def bleu_config(self) -> BleuConfig:
        return BleuConfig(smoothing=self.smoothing)


@dataclass
class BenchRecord:
    implementation: str
    batch_size: int
    seq_len: int
    mean_s: float
    std_s: float
    speedup: Optional[float] = None
    failed: bool = False


def generate_batch(config: BenchConfig, seed: int,
                   batch_size: Optional[int] = None,
                   seq_len: Optional[int] = None
                   ) -> tuple[TokenBatch, list[TokenBatch]]:
    """Uniform random IDs; lengths uniform in [seq_len/2, seq_len].

    Deterministic for a given (config, seed, batch_size, seq_len).
    """
    b = batch_size if batch_size is not None else config.batch_sizes[0]
    l = seq_len if seq_len is not None else config.seq_lens[0]
    rng = np.random.default_rng([seed, b, l, config.vocab_size])

    def draw() -> TokenBatch:
        ids = rng.integers(0, config.vocab_size, size=(b, l), dtype=np.int64)
        lengths = rng.integers(l // 2, l + 1, size=b, dtype=np.int64)
        return TokenBatch(ids=ids, lengths=lengths)

    candidates = draw()
    references = [draw() for _ in range(config.num_references)]
    return candidates, references


def _oracle_scores(candidates: TokenBatch, references: Sequence[TokenBatch],
                   bleu_config: BleuConfig) -> list[float]:
    cand_rows = candidates.rows()
    ref_rows = [r.rows() for r in references]
    return [
        oracle_sentence_bleu(cand_rows[i], [rr[i] for rr in ref_rows], bleu_config)
        for i in range(len(cand_rows))
    ]


def _check_equivalence(candidates, references, bleu_config, threads) -> None:
    batched = sentence_bleu(candidates, references, bleu_config,
                            threads=threads).scores
    serial = np.array(_oracle_scores(candidates, references, bleu_config))
    diff = float(np.max(np.abs(batched - serial), initial=0.0))
    if diff > 1e-6:
        raise EquivalenceError(
            f"batched and serial scores differ by {diff:.3e} "
            f"(B={candidates.batch_size}, L={candidates.max_len})"
        )


def _time_fn(fn: Callable[[], object], repeats: int,
             clock: Callable[[], float]) -> tuple[float, float]:
    fn()  # warm-up, untimed
    samples = []
    for _ in range(repeats):
        t0 = clock()
        fn()
        samples.append(clock() - t0)
    mean = sum(samples) / len(samples)
    std = statistics.stdev(samples) if len(samples) > 1 else 0.0
    return mean, std


def run_benchmark(config: BenchConfig,
                  clock: Callable[[], float] = time.perf_counter
                  ) -> list[BenchRecord]:
    """Time the selected implementations over every (batch_size, seq_len)."""
    _backend.use_backend(config.backend)
    bleu_config = config.bleu_config()
    records: list[BenchRecord] = []
    for seq_len in config.seq_lens:
        for batch_size in config.batch_sizes:
            candidates, references = generate_batch(
                config, config.seed, batch_size, seq_len
            )
            _check_equivalence(candidates, references, bleu_config, config.threads)

            oracle_mean = None
            if config.implementation in ("both", "oracle"):
                mean, std = _time_fn(
                    lambda: _oracle_scores(candidates, references, bleu_config),
                    config.repeats, clock,
                )
                oracle_mean = mean
                records.append(BenchRecord("oracle", batch_size, seq_len, mean, std))

            if config.implementation in ("both", "batched"):
                try:
                    mean, std = _time_fn(
                        lambda: sentence_bleu(candidates, references, bleu_config,
                                              threads=config.threads).scores,
                        config.repeats, clock,
                    )
                except CapacityError:
                    records.append(BenchRecord("batched", batch_size, seq_len,
                                               float("nan"), float("nan"),
                                               failed=True))
                    continue
                speedup = oracle_mean / mean if oracle_mean is not None else None
                records.append(BenchRecord("batched", batch_size, seq_len,
                                           mean, std, speedup))
    return records


def _format_row(rec: BenchRecord) -> str:
    if rec.failed:
        mean_s, std_s = "", ""
    else:
        mean_s, std_s = f"{rec.mean_s:.6f}", f"{rec.std_s:.6f}"
    speedup = f"{rec.speedup:.4f}" if rec.speedup is not None else ""
    return f"{rec.implementation},{rec.batch_size},{rec.seq_len},{mean_s},{std_s},{speedup}"


def emit_report(records: Sequence[BenchRecord], path: str) -> None:
    """Write the CSV report and print a readable table to stdout."""
    if not records:
        raise ValueError("no records to report")
    lines = [CSV_HEADER] + [_format_row(r) for r in records]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    print(f"{'impl':<8} {'B':>5} {'L':>5} {'mean_s':>10} {'std_s':>10} {'speedup':>8}")
    for r in records:
        mean = "failed" if r.failed else f"{r.mean_s:.6f}"
        std = "" if r.failed else f"{r.std_s:.6f}"
        speedup = f"{r.speedup:.2f}x" if r.speedup is not None else ""
        print(f"{r.implementation:<8} {r.batch_size:>5} {r.seq_len:>5} "
              f"{mean:>10} {std:>10} {speedup:>8}")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="batchbleu-bench",
        description="Benchmark batched token-ID BLEU against the serial baseline",
    )
    parser.add_argument("--batch-sizes", type=_int_list,
                        default=list(DEFAULT_BATCH_SIZES))
    parser.add_argument("--seq-lens", type=_int_list, default=list(DEFAULT_SEQ_LENS))
    parser.add_argument("--vocab", type=int, default=32000)
    parser.add_argument("--refs", type=int, default=1)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--impl", choices=["both", "batched", "oracle"],
                        default="both")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", default="report.csv")
    parser.add_argument("--smoothing", choices=["none", "floor", "add-k", "exp"],
                        default="none")
    parser.add_argument("--backend", choices=["auto", "compiled", "python"],
                        default="auto")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = BenchConfig(
        batch_sizes=args.batch_sizes,
        seq_lens=args.seq_lens,
        vocab_size=args.vocab,
        num_references=args.refs,
        repeats=args.repeats,
        seed=args.seed,
        smoothing=args.smoothing,
        implementation=args.impl,
        threads=args.threads,
        backend=args.backend,
    )
    try:
        records = run_benchmark(config)
        emit_report(records, args.out)
    except EquivalenceError as exc:
        print(f"equivalence check failed: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

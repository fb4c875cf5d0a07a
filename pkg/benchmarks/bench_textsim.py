"""Benchmark: compiled Levenshtein kernel vs the pure-Python fallback.

The kernel dominates element matching (every reference element is compared
against every same-kind diagram element, including alternatives), so this
is the number that decides batch-grading throughput.

    python3 benchmarks/bench_textsim.py
"""

from __future__ import annotations

import json
import random
import time

from umlkit import textsim
from umlkit.evaluator import match_elements
from umlkit.model import ElementKind, RefElement, ReferenceSolution
from umlkit.parser import parse_document

WORDS = (
    "login register browse search checkout pay refund cancel review ship "
    "track return manage update delete create order invoice notify export"
).split()


def make_corpus(rng: random.Random, pairs: int) -> list[tuple[str, str]]:
    corpus = []
    for _ in range(pairs):
        a = " ".join(rng.choices(WORDS, k=rng.randrange(1, 4)))
        b = " ".join(rng.choices(WORDS, k=rng.randrange(1, 4)))
        corpus.append((a, b))
    return corpus


def bench_kernel(name: str, fn, corpus: list[tuple[str, str]], rounds: int) -> float:
    best = float("inf")
    for _ in range(rounds):
        started = time.perf_counter()
        for a, b in corpus:
            fn(a, b)
        best = min(best, time.perf_counter() - started)
    return best


def make_matching_case(rng: random.Random, size: int):
    names = [f"{rng.choice(WORDS)} {rng.choice(WORDS)} {i}" for i in range(size)]
    ref = ReferenceSolution(
        label="bench",
        elements=tuple(
            RefElement(f"ref{i}", ElementKind.USE_CASE, name, owningSystem=None)
            for i, name in enumerate(names)
        ),
    )
    elements = {
        f"d{i:03d}": {
            "id": f"d{i:03d}",
            "type": "UseCase",
            "name": rng.choice(names),
            "owner": None,
        }
        for i in range(size)
    }
    doc = parse_document(
        json.dumps(
            {
                "version": "3.0.0",
                "type": "UseCaseDiagram",
                "elements": elements,
                "relationships": {},
            }
        )
    )
    return ref, doc


def main() -> None:
    rng = random.Random(9)
    corpus = make_corpus(rng, 20_000)
    rounds = 3

    if textsim.KERNEL != "c":
        print("compiled kernel not built; benchmarking the fallback only")
        fallback = bench_kernel("python", textsim._levenshtein_py, corpus, rounds)
        print(f"pure python : {fallback:8.3f}s for {len(corpus)} pairs")
        return

    compiled = bench_kernel("c", textsim._levenshtein_impl, corpus, rounds)
    fallback = bench_kernel("python", textsim._levenshtein_py, corpus, rounds)
    print(f"levenshtein over {len(corpus)} name pairs (best of {rounds}):")
    print(f"  compiled kernel : {compiled * 1000:9.1f} ms")
    print(f"  pure python     : {fallback * 1000:9.1f} ms")
    print(f"  speedup         : {fallback / compiled:9.1f}x")

    ref, doc = make_matching_case(rng, 120)
    started = time.perf_counter()
    match_elements(ref, doc)
    matching = time.perf_counter() - started
    print(f"match_elements on a 120x120 instance: {matching * 1000:.1f} ms (compiled)")


if __name__ == "__main__":
    main()

"""Name normalization and Levenshtein similarity.

The edit-distance kernel is the hot loop of element matching: every
reference element is compared against every same-kind diagram element
(plus all alternative names and forbidden names). A compiled kernel is
used when the extension built; otherwise a pure-Python fallback with the
same contract is selected at import time.
"""

from __future__ import annotations

MATCH_THRESHOLD = 0.75


def _levenshtein_py(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs) between two strings."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    curr = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        curr[0] = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            curr[j] = min(prev[j - 1] + cost, prev[j] + 1, curr[j - 1] + 1)
        prev, curr = curr, prev
    return prev[len(b)]


try:
    from umlkit._speedups import levenshtein as _levenshtein_impl

    KERNEL = "c"
except ImportError:
    _levenshtein_impl = _levenshtein_py
    KERNEL = "python"


def levenshtein(a: str, b: str) -> int:
    return _levenshtein_impl(a, b)


def normalize_name(raw: str) -> str:
    """Trim, collapse internal whitespace runs to one space, casefold."""
    return " ".join(raw.split()).casefold()


def similarity(a: str, b: str) -> float:
    """Levenshtein ratio of the normalized names, in [0, 1].

    1.0 when both names normalize to empty, 0.0 when exactly one does.
    """
    na = normalize_name(a)
    nb = normalize_name(b)
    if not na and not nb:
        return 1.0
    if not na or not nb:
        return 0.0
    return 1.0 - levenshtein(na, nb) / max(len(na), len(nb))


def is_similar(a: str, b: str) -> bool:
    return similarity(a, b) >= MATCH_THRESHOLD

"""Cosine string similarity over per-word character bigrams."""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from collections.abc import Sequence
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import InvalidThreshold

DEFAULT_AUTHOR_THRESHOLD = 0.75
DEFAULT_JOURNAL_THRESHOLD = 0.75
DEFAULT_TITLE_THRESHOLD = 0.90


@lru_cache(maxsize=65536)
def normalize_text(raw: str) -> str:
    """Lowercase, NFKC-fold, drop control characters and keep only letters/digits.

    >>> normalize_text("O'Brien-Smith, J.")
    'o brien smith j'
    """
    text = _clean_once(raw)
    # dropping a format character can unblock a composition (Hangul jamo),
    # so repeat until stable
    while True:
        again = _clean_once(text)
        if again == text:
            return text
        text = again


def _clean_once(raw: str) -> str:
    text = unicodedata.normalize("NFKC", raw).lower()
    text = unicodedata.normalize("NFKC", text)
    chars = []
    for ch in text:
        # tabs and newlines separate words; other controls vanish
        if ch.isspace():
            chars.append(" ")
        elif unicodedata.category(ch) not in ("Cc", "Cf"):
            chars.append(ch if ch.isalnum() else " ")
    return " ".join("".join(chars).split())


def tokenize(s: str) -> Counter[str]:
    tokens: Counter[str] = Counter()
    for word in s.split():
        if len(word) == 1:
            tokens[word] += 1
        else:
            tokens.update(word[i : i + 2] for i in range(len(word) - 1))
    return tokens


def _norm_sq(tokens: Counter[str]) -> int:
    return sum(c * c for c in tokens.values())


def cosine_counts(a: Counter[str], b: Counter[str]) -> float:
    """Cosine of two token multisets; both empty gives 1, one empty gives 0."""
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    if len(a) > len(b):
        a, b = b, a
    dot = sum(c * b[t] for t, c in a.items() if t in b)
    if dot == 0:
        return 0.0
    # integer product keeps cos(a, a) exactly 1.0
    return min(1.0, dot / math.sqrt(_norm_sq(a) * _norm_sq(b)))


def cosine(a: str, b: str) -> float:
    return cosine_counts(tokenize(normalize_text(a)), tokenize(normalize_text(b)))


def check_threshold(threshold: float) -> float:
    if not (isinstance(threshold, (int, float)) and 0 < threshold <= 1):
        raise InvalidThreshold(f"threshold must lie in (0, 1], got {threshold!r}")
    return float(threshold)


def same_entity(a: str, b: str, threshold: float) -> bool:
    return cosine(a, b) >= check_threshold(threshold)


def _count_rows(texts: Sequence[str], vocab: dict[str, int], grow: bool):
    rows, cols, vals, norms = [], [], [], []
    for r, text in enumerate(texts):
        tokens = tokenize(text)
        norms.append(_norm_sq(tokens))
        for tok, c in tokens.items():
            col = vocab.get(tok)
            if col is None:
                if not grow:
                    continue
                col = vocab[tok] = len(vocab)
            rows.append(r)
            cols.append(col)
            vals.append(c)
    return rows, cols, vals, np.asarray(norms, dtype=np.float64)


def _dense(rows, cols, vals, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=np.float32)
    out[rows, cols] = vals
    return out


def matching_pairs(
    queries: Sequence[str], entries: Sequence[str], threshold: float, block: int = 512
) -> list[np.ndarray]:
    """For each normalized query, the ascending entry indices with cosine >= threshold.

    Decisions are identical to :func:`cosine_counts`: token counts are small
    integers, so the float32 matrix products are exact, and the final test
    ``dot / sqrt(|q|^2 |e|^2) >= t`` is evaluated with the same float64
    operations. A cheap scaled comparison with a relative margin only
    preselects cells for that exact test.
    """
    threshold = check_threshold(threshold)
    vocab: dict[str, int] = {}
    erows, ecols, evals, enorm = _count_rows(entries, vocab, grow=True)
    qrows, qcols, qvals, qnorm = _count_rows(queries, vocab, grow=False)
    if max(evals, default=0) * max(qvals, default=0) * len(vocab) >= 2**24:
        raise ValueError("token counts too large for exact float32 products")
    ematrix = _dense(erows, ecols, evals, (len(entries), len(vocab)))
    qmatrix = _dense(qrows, qcols, qvals, (len(queries), len(vocab)))
    with np.errstate(divide="ignore"):
        einv = np.where(enorm > 0, 1.0 / np.sqrt(enorm), 0.0)
        qinv = np.where(qnorm > 0, 1.0 / np.sqrt(qnorm), 0.0)
    loose = threshold * (1.0 - 1e-6)
    result: list[np.ndarray] = []
    for start in range(0, len(queries), block):
        stop = min(start + block, len(queries))
        dots = (qmatrix[start:stop] @ ematrix.T).astype(np.float64)
        approx = dots * qinv[start:stop, None]
        approx *= einv[None, :]
        r, c = np.nonzero(approx >= loose)
        exact = dots[r, c] / np.sqrt(qnorm[start + r] * enorm[c]) >= threshold
        r, c = r[exact], c[exact]
        # both-empty pairs count as identical
        for qi in np.flatnonzero(qnorm[start:stop] == 0):
            empties = np.flatnonzero(enorm == 0)
            r = np.concatenate([r, np.full(len(empties), qi)])
            c = np.concatenate([c, empties])
        order = np.lexsort((c, r))
        r, c = r[order], c[order]
        bounds = np.searchsorted(r, np.arange(stop - start + 1))
        result.extend(c[bounds[k] : bounds[k + 1]] for k in range(stop - start))
    return result


def greedy_resolve(texts: Sequence[str], threshold: float) -> list[int]:
    """Greedy first-match entity resolution over ``texts`` in order.

    Each text joins the lowest-numbered existing entity whose founding name
    it matches, otherwise it founds a new entity. Returns the entity number
    of every text.
    """
    distinct = list(dict.fromkeys(texts))
    pairs = matching_pairs(distinct, distinct, threshold)
    founder_entity: dict[int, int] = {}
    entity_of: dict[str, int] = {}
    for i, text in enumerate(distinct):
        # pairs are ascending, so the first earlier founder is the lowest entity
        founder = next((int(j) for j in pairs[i] if j < i and j in founder_entity), None)
        if founder is None:
            founder_entity[i] = entity_of[text] = len(founder_entity)
        else:
            entity_of[text] = founder_entity[founder]
    return [entity_of[t] for t in texts]


def first_match(text: str, candidates: Sequence[str], threshold: float) -> Optional[int]:
    """Index of the first candidate with cosine >= threshold (linear scan)."""
    threshold = check_threshold(threshold)
    tokens = tokenize(normalize_text(text))
    for i, candidate in enumerate(candidates):
        if cosine_counts(tokens, tokenize(normalize_text(candidate))) >= threshold:
            return i
    return None

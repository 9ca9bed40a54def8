"""Statistical word alignment: IBM Model 1 with a diagonal-tension prior.

The model aligns each target token to at most one source token (or to
null).  For a pair with n source and m target tokens, the score of linking
target position j to source position i is

    (1 - p0) * exp(-tension * |i/n - j/m|) * t(e_j | f_i)

with p0 * t(e_j | null) reserved for the null alignment.  Only the lexical
table t is learned, by EM with add-alpha smoothing; tension and p0 stay
fixed, which keeps training deterministic and the likelihood monotone when
alpha is zero.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import morph, tsvio
from .errors import DataError

DEFAULT_ITERATIONS = 5
DEFAULT_TENSION = 4.0
DEFAULT_NULL_PROB = 0.08
DEFAULT_ALPHA = 0.01

# Reserved source-side key for the null word in serialized models.
NULL_MARKER = "__NULL__"

Pair = tuple[Sequence[str], Sequence[str]]


@dataclass
class AlignmentModel:
    """Lexical translation table plus the fixed prior parameters.

    ``ttable[f][e]`` holds the smoothed probability of target type ``e``
    given source type ``f`` (``None`` is the null word); ``floors[f]`` is
    the probability of any target type unseen with ``f``.  Each row sums
    to one over the target vocabulary.
    """

    ttable: dict[str | None, dict[str, float]]
    floors: dict[str | None, float]
    tension: float
    null_prob: float
    alpha: float
    source_vocab: frozenset[str]
    target_vocab: frozenset[str]
    log_likelihoods: tuple[float, ...] = ()

    def prob(self, source: str | None, target: str) -> float:
        row = self.ttable.get(source)
        if row is None:
            return 0.0
        hit = row.get(target)
        if hit is not None:
            return hit
        return self.floors.get(source, 0.0)

    def row_sum(self, source: str | None) -> float:
        """Probability mass of a row over the whole target vocabulary."""
        row = self.ttable.get(source, {})
        floor = self.floors.get(source, 0.0)
        return sum(row.values()) + floor * (len(self.target_vocab) - len(row))


@dataclass(frozen=True)
class AlignmentLinks:
    """Set of (source index, target index) links; each target links at most once."""

    links: frozenset[tuple[int, int]]
    source_len: int
    target_len: int

    def __post_init__(self) -> None:
        seen_targets: set[int] = set()
        for i, j in self.links:
            if not (0 <= i < self.source_len and 0 <= j < self.target_len):
                raise DataError(f"alignment link ({i},{j}) out of bounds")
            if j in seen_targets:
                raise DataError(f"target index {j} linked more than once")
            seen_targets.add(j)


def _diagonal_distance(i: int, n: int, j: int, m: int) -> float:
    return abs(i / n - j / m)


def _link_score(model: AlignmentModel, f: str, e: str, i: int, n: int, j: int, m: int) -> float:
    prior = (1.0 - model.null_prob) * math.exp(-model.tension * _diagonal_distance(i, n, j, m))
    return prior * model.prob(f, e)


def _null_score(model: AlignmentModel, e: str) -> float:
    return model.null_prob * model.prob(None, e)


def _check_bitext(bitext: Sequence[Pair]) -> None:
    if not bitext:
        raise DataError("cannot train on an empty bitext")
    for idx, (src, tgt) in enumerate(bitext):
        if not src or not tgt:
            raise DataError(f"bitext pair {idx} has an empty side")
        if NULL_MARKER in src or NULL_MARKER in tgt:
            raise DataError(f"bitext pair {idx} contains the reserved token {NULL_MARKER}")


def train(
    bitext: Sequence[Pair],
    iterations: int = DEFAULT_ITERATIONS,
    tension: float = DEFAULT_TENSION,
    null_prob: float = DEFAULT_NULL_PROB,
    alpha: float = DEFAULT_ALPHA,
) -> AlignmentModel:
    """EM-train the lexical table on tokenized sentence pairs.

    ``log_likelihoods[k]`` on the result is the corpus log-likelihood under
    the parameters entering iteration k, so the sequence is non-decreasing
    when alpha is zero.
    """
    if iterations <= 0:
        raise DataError("iterations must be positive")
    if tension <= 0:
        raise DataError("tension must be positive")
    if not 0.0 <= null_prob < 1.0:
        raise DataError("null_prob must lie in [0, 1)")
    if alpha < 0:
        raise DataError("alpha must be non-negative")
    _check_bitext(bitext)

    source_vocab = frozenset(f for src, _ in bitext for f in src)
    target_vocab = frozenset(e for _, tgt in bitext for e in tgt)

    # Uniform initialization over co-occurring pairs; the null row covers
    # the full target vocabulary.
    cooc: dict[str | None, set[str]] = {None: set(target_vocab)}
    for src, tgt in bitext:
        for f in set(src):
            cooc.setdefault(f, set()).update(tgt)
    ttable: dict[str | None, dict[str, float]] = {
        f: {e: 1.0 / len(es) for e in es} for f, es in cooc.items()
    }
    floors: dict[str | None, float] = {f: 0.0 for f in ttable}

    model = AlignmentModel(
        ttable=ttable,
        floors=floors,
        tension=tension,
        null_prob=null_prob,
        alpha=alpha,
        source_vocab=source_vocab,
        target_vocab=target_vocab,
    )

    history: list[float] = []
    n_target_types = len(target_vocab)
    for _ in range(iterations):
        counts: dict[str | None, dict[str, float]] = {}
        log_likelihood = 0.0
        for src, tgt in bitext:
            n, m = len(src), len(tgt)
            for j, e in enumerate(tgt):
                null_s = _null_score(model, e)
                scores = [_link_score(model, src[i], e, i, n, j, m) for i in range(n)]
                total = null_s + sum(scores)
                if total <= 0.0:
                    continue
                log_likelihood += math.log(total)
                counts.setdefault(None, {})
                counts[None][e] = counts[None].get(e, 0.0) + null_s / total
                for i, s in enumerate(scores):
                    if s > 0.0:
                        row = counts.setdefault(src[i], {})
                        row[e] = row.get(e, 0.0) + s / total
        history.append(log_likelihood)

        new_ttable: dict[str | None, dict[str, float]] = {}
        new_floors: dict[str | None, float] = {}
        for f, row in counts.items():
            denom = sum(row.values()) + alpha * n_target_types
            new_ttable[f] = {e: (c + alpha) / denom for e, c in row.items()}
            new_floors[f] = alpha / denom if alpha > 0 else 0.0
        model.ttable = new_ttable
        model.floors = new_floors

    model.log_likelihoods = tuple(history)
    return model


def viterbi_align(
    model: AlignmentModel, source: Sequence[str], target: Sequence[str]
) -> AlignmentLinks:
    """Best link per target token: argmax score, or null when null strictly wins.

    Ties between source positions go to the smaller diagonal distance,
    then the smaller source index, making the decode fully deterministic.
    """
    if not source or not target:
        raise DataError("cannot align an empty sentence")
    n, m = len(source), len(target)
    links: set[tuple[int, int]] = set()
    for j, e in enumerate(target):
        best_i = 0
        best_score = _link_score(model, source[0], e, 0, n, j, m)
        best_dist = _diagonal_distance(0, n, j, m)
        for i in range(1, n):
            score = _link_score(model, source[i], e, i, n, j, m)
            dist = _diagonal_distance(i, n, j, m)
            if score > best_score or (score == best_score and dist < best_dist):
                best_i, best_score, best_dist = i, score, dist
        if _null_score(model, e) > best_score:
            continue
        links.add((best_i, j))
    return AlignmentLinks(links=frozenset(links), source_len=n, target_len=m)


def refine_with_kb(
    links: AlignmentLinks,
    source: Sequence[str],
    source_lang: str,
    target: Sequence[str],
    target_lang: str,
    index,
    model: AlignmentModel,
    lexicon: morph.MorphLexicon,
) -> AlignmentLinks:
    """One repair pass moving synset-inconsistent links onto synset-sharing targets.

    A link (i, j) whose lemma pair shares no synset is re-pointed at the
    best other target position whose lemma does share one with source i,
    provided that position is unlinked or itself inconsistently linked.
    Candidates are ranked by lexical probability, then diagonal closeness,
    then position.  Consistent links are never touched.
    """
    from .lexkb import kb_query_languages

    n, m = links.source_len, links.target_len
    src_lemmas = [morph.analyze(tok, source_lang, lexicon).lemma for tok in source]
    tgt_lemmas = [morph.analyze(tok, target_lang, lexicon).lemma for tok in target]
    src_langs = kb_query_languages(source_lang)
    tgt_langs = kb_query_languages(target_lang)

    def consistent(i: int, j: int) -> bool:
        return index.shares_synset_any(src_lemmas[i], src_langs, tgt_lemmas[j], tgt_langs)

    current: dict[int, int] = {j: i for i, j in links.links}
    for i, j in sorted(links.links, key=lambda link: (link[1], link[0])):
        if current.get(j) != i:
            continue  # removed by an earlier repair
        if consistent(i, j):
            continue
        best: tuple[float, float, int] | None = None
        best_j = -1
        for j2 in range(m):
            if j2 == j or not consistent(i, j2):
                continue
            holder = current.get(j2)
            if holder is not None and consistent(holder, j2):
                continue
            rank = (
                -model.prob(source[i], target[j2]),
                _diagonal_distance(i, n, j2, m),
                j2,
            )
            if best is None or rank < best:
                best, best_j = rank, j2
        if best is None:
            continue
        del current[j]
        current[best_j] = i
    return AlignmentLinks(
        links=frozenset((i, j) for j, i in current.items()),
        source_len=n,
        target_len=m,
    )


def targets_of_source(
    links: AlignmentLinks, i: int, target: Sequence[str]
) -> list[str]:
    """Target tokens linked to source position i, in target order."""
    if not 0 <= i < links.source_len:
        raise DataError(f"source index {i} out of bounds for length {links.source_len}")
    return [target[j] for li, j in sorted(links.links, key=lambda link: link[1]) if li == i]


def to_pharaoh(links: AlignmentLinks) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(links.links))


def from_pharaoh(line: str, source_len: int, target_len: int) -> AlignmentLinks:
    pairs: set[tuple[int, int]] = set()
    for chunk in line.split():
        try:
            i_text, j_text = chunk.split("-")
            pairs.add((int(i_text), int(j_text)))
        except ValueError:
            raise DataError(f"malformed alignment token {chunk!r}") from None
    return AlignmentLinks(links=frozenset(pairs), source_len=source_len, target_len=target_len)


def load_bitext(path: str | Path) -> list[Pair]:
    """Read ``source<TAB>target`` sentence pairs, tokenizing both sides."""
    pairs: list[Pair] = []
    for lineno, (src_text, tgt_text) in tsvio.read_rows(path, 2):
        src = morph.tokenize(src_text)
        tgt = morph.tokenize(tgt_text)
        if not src or not tgt:
            raise DataError(f"{path}:{lineno}: empty sentence after tokenization")
        pairs.append((src, tgt))
    return pairs


def save_model(
    model: AlignmentModel, path: str | Path, *, provenance: Iterable[str] | None = None
) -> None:
    """Serialize a model to TSV; float repr round-trips exactly."""
    rows: list[tuple[str, str, str, str]] = [
        ("meta", "tension", repr(model.tension), ""),
        ("meta", "null_prob", repr(model.null_prob), ""),
        ("meta", "alpha", repr(model.alpha), ""),
    ]
    rows.extend(("ll", repr(value), "", "") for value in model.log_likelihoods)
    rows.extend(("tv", e, "", "") for e in sorted(model.target_vocab))
    rows.extend(("sv", f, "", "") for f in sorted(model.source_vocab))
    for f in sorted(model.ttable, key=lambda k: (k is None, k or "")):
        name = NULL_MARKER if f is None else f
        rows.append(("floor", name, repr(model.floors.get(f, 0.0)), ""))
        rows.extend(("t", name, e, repr(model.ttable[f][e])) for e in sorted(model.ttable[f]))
    tsvio.write_rows(path, rows, provenance=provenance)


def load_model(path: str | Path) -> AlignmentModel:
    meta: dict[str, float] = {}
    lls: list[float] = []
    target_vocab: set[str] = set()
    source_vocab: set[str] = set()
    ttable: dict[str | None, dict[str, float]] = {}
    floors: dict[str | None, float] = {}
    for lineno, (kind, a, b, c) in tsvio.read_rows(path, 4):
        if kind == "meta":
            meta[a] = float(b)
        elif kind == "ll":
            lls.append(float(a))
        elif kind == "tv":
            target_vocab.add(a)
        elif kind == "sv":
            source_vocab.add(a)
        elif kind == "floor":
            key = None if a == NULL_MARKER else a
            floors[key] = float(b)
            ttable.setdefault(key, {})
        elif kind == "t":
            key = None if a == NULL_MARKER else a
            ttable.setdefault(key, {})[b] = float(c)
        else:
            raise DataError(f"{path}:{lineno}: unknown model row kind {kind!r}")
    for name in ("tension", "null_prob", "alpha"):
        if name not in meta:
            raise DataError(f"{path}: missing meta row {name!r}")
    return AlignmentModel(
        ttable=ttable,
        floors=floors,
        tension=meta["tension"],
        null_prob=meta["null_prob"],
        alpha=meta["alpha"],
        source_vocab=frozenset(source_vocab),
        target_vocab=frozenset(target_vocab),
        log_likelihoods=tuple(lls),
    )

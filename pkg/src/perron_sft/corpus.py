"""Seeded random specs for property checks and scripts."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import SFTError
from .words import ShiftSpec, analyze_graph, build_adjacency, contains_forbidden, enumerate_allowed_words, validate_spec


@dataclass(frozen=True)
class CorpusConfig:
    size: int = 50
    max_q: int = 4
    max_s: int = 3
    max_len: int = 4
    seed: int = 20240917
    require_entropy: bool = False


def _random_word(rng, q, max_len):
    n = int(rng.integers(2, max_len + 1))
    return tuple(int(c) for c in rng.integers(0, q, size=n))


def random_spec(rng, q: int, s: int, max_len: int) -> Optional[ShiftSpec]:
    words = []
    for _ in range(20 * s):
        if len(words) == s:
            break
        w = _random_word(rng, q, max_len)
        try:
            validate_spec(q, words + [w])
        except SFTError:
            continue
        words.append(w)
    if len(words) < s:
        return None
    return validate_spec(q, words)


def irreducible_corpus(cfg: CorpusConfig = CorpusConfig()) -> list:
    """Distinct irreducible specs with s >= 1, in generation order."""
    rng = np.random.default_rng(cfg.seed)
    out, seen = [], set()
    while len(out) < cfg.size:
        q = int(rng.integers(2, cfg.max_q + 1))
        s = int(rng.integers(1, cfg.max_s + 1))
        spec = random_spec(rng, q, s, cfg.max_len)
        if spec is None:
            continue
        key = (spec.q, tuple(sorted(spec.forbidden)))
        if key in seen:
            continue
        try:
            ga = analyze_graph(build_adjacency(spec))
        except SFTError:
            continue
        if not ga.irreducible:
            continue
        if cfg.require_entropy:
            A = build_adjacency(spec).entries
            # a primitive-or-not irreducible matrix has entropy 0 only when it is a permutation
            if (A.sum(axis=1) <= 1).all():
                continue
        seen.add(key)
        out.append(spec)
    return out


def random_allowed_word(rng, spec: ShiftSpec, n: int):
    """Uniform-ish random allowed word of length n by random walk with restarts."""
    for _ in range(1000):
        w = ()
        ok = True
        while len(w) < n:
            choices = [b for b in range(spec.q) if not contains_forbidden(spec, (w + (b,))[-spec.p:])]
            if not choices:
                ok = False
                break
            w = w + (int(rng.choice(choices)),)
        if ok:
            return w
    raise RuntimeError("could not draw an allowed word")


def random_hole(rng, spec: ShiftSpec, max_len: int = 4):
    """One or two allowed words, not subwords of each other, that leave a nonempty shift."""
    k = int(rng.integers(1, 3))
    hole = []
    for _ in range(50):
        if len(hole) == k:
            break
        n = int(rng.integers(2, max_len + 1))
        cands = enumerate_allowed_words(spec, n)
        if not cands:
            continue
        g = cands[int(rng.integers(0, len(cands)))]
        if any(g == h or g in _factors(h) or h in _factors(g) for h in hole):
            continue
        hole.append(g)
    return hole


def _factors(w):
    return {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}

"""Finite presentations of chart categories with expression-valued morphisms.

A morphism ``g: A -> B`` is stored as the images of the symbols of ``B``
written as Exprs in the context of ``A`` (so forms on ``B`` pull back to
``A`` by substitution).  Words of generators are composed by substitution
and identified when their symbol images agree exactly.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

from .errors import MalformedPresentation, UnknownSymbol
from .symbolics import Context, Expr, Form, pullback, substitute


@dataclass(frozen=True)
class Chart:
    name: str
    ctx: Context
    coordinate: str
    domain: str = ""

    def variable(self, n: int) -> str:
        return f"{self.coordinate}_{n}"


def _mapped_symbols(ctx: Context) -> list[str]:
    """Symbols of a chart that a morphism into it has to assign."""
    return [s for s in ctx.symbols if s not in ctx.constants]


class Word:
    """A composite of generators, ``letters[0]`` applied first.

    Equality and hashing use the symbol images only, so different spellings
    of the same map are the same word.
    """

    __slots__ = ("source", "target", "letters", "images", "_key", "dcache")

    def __init__(self, source: str, target: str, letters: tuple[str, ...], images: Mapping[str, Expr]):
        self.source = source
        self.target = target
        self.letters = tuple(letters)
        self.images = dict(images)
        self._key = (source, target, tuple(sorted((s, e.key()) for s, e in self.images.items())))
        self.dcache: dict = {}

    def __eq__(self, other):
        return isinstance(other, Word) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def label(self) -> str:
        if not self.letters:
            return f"id_{self.source}"
        return ".".join(reversed(self.letters))

    def fingerprint(self) -> str:
        """Run-independent digest of the underlying map."""
        return hashlib.sha256(repr(self._key).encode()).hexdigest()[:16]

    def __repr__(self):
        return f"Word({self.label}: {self.source}->{self.target})"


@dataclass(frozen=True)
class Generator:
    name: str
    source: str
    target: str
    images: Mapping[str, Expr] = field(hash=False)


@dataclass(frozen=True)
class CString:
    """Composable string ``U_0 -g_1-> U_1 -> ... -g_k-> U_k``."""

    start: str
    words: tuple[Word, ...] = ()

    @property
    def length(self) -> int:
        return len(self.words)

    @property
    def end(self) -> str:
        return self.words[-1].target if self.words else self.start

    @property
    def label(self) -> str:
        if not self.words:
            return self.start
        return "(" + ", ".join(w.label for w in self.words) + ")"

    def fingerprint(self) -> str:
        parts = [self.start] + [w.fingerprint() for w in self.words]
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]

    def __repr__(self):
        return f"CString{self.label}"


class AtlasPresentation:
    """Charts, generating morphisms and (checked) relations between words."""

    def __init__(self, charts, generators, relations=(), profiles=None):
        self.charts = tuple(charts)
        self.generators = tuple(generators)
        self.profiles = dict(profiles or {})
        self._chart = {c.name: c for c in self.charts}
        self._gen = {g.name: g for g in self.generators}
        self._composites: dict[tuple[Word, Word], Word] = {}
        if len(self._chart) != len(self.charts) or len(self._gen) != len(self.generators):
            raise MalformedPresentation("duplicate chart or generator names")
        for g in self.generators:
            self._validate(g)
        self.relations = tuple((tuple(a), tuple(b)) for a, b in relations)
        for lhs, rhs in self.relations:
            self._check_relation(lhs, rhs)

    # -- structure --------------------------------------------------------
    def chart(self, name: str) -> Chart:
        try:
            return self._chart[name]
        except KeyError:
            raise UnknownSymbol(f"no chart named {name!r}") from None

    def generator(self, name: str) -> Generator:
        try:
            return self._gen[name]
        except KeyError:
            raise UnknownSymbol(f"no generator named {name!r}") from None

    def _validate(self, g: Generator) -> None:
        src, tgt = self.chart(g.source), self.chart(g.target)
        for sym, img in g.images.items():
            if sym not in tgt.ctx.index:
                raise MalformedPresentation(f"{g.name}: {sym} is not a symbol of {tgt.name}")
            if not isinstance(img, Expr) or img.ctx != src.ctx:
                raise MalformedPresentation(f"{g.name}: image of {sym} is not an Expr of {src.name}")
        missing = [s for s in _mapped_symbols(tgt.ctx) if s not in g.images]
        if missing:
            raise MalformedPresentation(f"{g.name}: no image for {', '.join(missing)}")

    def _check_relation(self, lhs, rhs) -> None:
        if not lhs and not rhs:
            raise MalformedPresentation("relation with two empty sides")
        a = self.word(*lhs) if lhs else None
        b = self.word(*rhs) if rhs else None
        a = a or self.identity(b.source)
        b = b or self.identity(a.source)
        if a != b:
            raise MalformedPresentation(f"relation {a.label} = {b.label} does not hold")

    def with_generator(self, name: str, images: Mapping[str, Expr]) -> "AtlasPresentation":
        """Copy with the images of one generator replaced (relations dropped)."""
        self.generator(name)
        gens = [Generator(g.name, g.source, g.target, images) if g.name == name else g
                for g in self.generators]
        return AtlasPresentation(self.charts, gens, (), self.profiles)

    # -- words ------------------------------------------------------------
    def identity(self, chart: str) -> Word:
        ctx = self.chart(chart).ctx
        return Word(chart, chart, (), {s: ctx[s] for s in _mapped_symbols(ctx)})

    def compose(self, first: Word, second: Word) -> Word:
        """``second o first``."""
        if first.target != second.source:
            raise MalformedPresentation(f"{second.label} cannot follow {first.label}")
        if first.is_identity:
            return second
        if second.is_identity:
            return first
        hit = self._composites.get((first, second))
        if hit is None:
            src = self.chart(first.source).ctx
            images = {s: substitute(e, first.images, src) for s, e in second.images.items()}
            hit = Word(first.source, second.target, first.letters + second.letters, images)
            self._composites[(first, second)] = hit
        return hit

    def word(self, *letters: str) -> Word:
        if not letters:
            raise ValueError("use identity(chart) for the empty word")
        g = self.generator(letters[0])
        w = Word(g.source, g.target, (g.name,), g.images)
        for name in letters[1:]:
            h = self.generator(name)
            w = self.compose(w, Word(h.source, h.target, (h.name,), h.images))
        return w

    def words(self, bound: int) -> list[Word]:
        """Distinct maps given by words of at most ``bound`` letters, shortest spelling first."""
        seen: dict[Word, Word] = {}
        frontier = [self.identity(c.name) for c in self.charts]
        for w in frontier:
            seen.setdefault(w, w)
        for _ in range(bound):
            nxt = []
            for w in frontier:
                for g in self.generators:
                    if g.source != w.target:
                        continue
                    v = self.compose(w, Word(g.source, g.target, (g.name,), g.images))
                    if v not in seen:
                        seen[v] = v
                        nxt.append(v)
            frontier = nxt
        return list(seen.values())

    def pullback(self, word: Word, w: Form) -> Form:
        """Pull a form on ``word.target`` back to ``word.source``."""
        if w.ctx != self.chart(word.target).ctx:
            raise MalformedPresentation(f"form does not live on {word.target}")
        if word.is_identity:
            return w
        return pullback(word.images, w, self.chart(word.source).ctx, word.dcache)


def composable_strings(P: AtlasPresentation, k: int, word_bound: int) -> list[CString]:
    """All strings of ``k`` composable words, each of at most ``word_bound`` letters."""
    if word_bound < 1 and k > 0:
        raise ValueError("word_bound must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    strings = [CString(c.name) for c in P.charts]
    if k == 0:
        return strings
    by_source: dict[str, list[Word]] = {}
    for w in P.words(word_bound):
        by_source.setdefault(w.source, []).append(w)
    for _ in range(k):
        strings = [CString(s.start, s.words + (w,)) for s in strings for w in by_source.get(s.end, [])]
    return strings

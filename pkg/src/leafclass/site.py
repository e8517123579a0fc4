"""Finite categories with covering sieves, and an exhaustive axiom checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import MalformedSite
from .report import CheckList


@dataclass(frozen=True)
class Morphism:
    name: str
    source: str
    target: str


@dataclass
class FiniteSite:
    """Objects, morphisms, a composition table and covering sieves.

    ``compose[(g, f)]`` is the name of ``g o f`` (``f`` first).  Covers map an
    object to a list of sieves, each a frozenset of morphism names.
    """

    objects: list[str]
    morphisms: list[Morphism]
    compose: dict[tuple[str, str], str]
    identities: dict[str, str]
    covers: dict[str, list[frozenset]] = field(default_factory=dict)

    def __post_init__(self):
        self._by_name = {m.name: m for m in self.morphisms}
        _check_table(self)

    def morphism(self, name: str) -> Morphism:
        try:
            return self._by_name[name]
        except KeyError:
            raise MalformedSite(f"unknown morphism {name!r}") from None

    def into(self, obj: str) -> list[str]:
        return [m.name for m in self.morphisms if m.target == obj]

    def maximal_sieve(self, obj: str) -> frozenset:
        return frozenset(self.into(obj))

    def comp(self, g: str, f: str) -> str:
        return self.compose[(g, f)]

    def is_sieve(self, obj: str, S) -> bool:
        for h in S:
            if self.morphism(h).target != obj:
                return False
            for u in self.into(self.morphism(h).source):
                if self.comp(h, u) not in S:
                    return False
        return True

    def restrict(self, f: str, S) -> frozenset:
        """``f^* S = {g : f o g in S}``."""
        src = self.morphism(f).source
        return frozenset(g for g in self.into(src) if self.comp(f, g) in S)

    def sieves(self, obj: str) -> list[frozenset]:
        """All sieves on ``obj`` (exhaustive; exponential in the number of arrows into it)."""
        arrows = self.into(obj)
        out = []
        for r in range(len(arrows) + 1):
            for subset in combinations(arrows, r):
                S = frozenset(subset)
                if self.is_sieve(obj, S):
                    out.append(S)
        return out

    def is_cover(self, obj: str, S) -> bool:
        return frozenset(S) in set(self.covers.get(obj, []))


def _check_table(site: FiniteSite) -> None:
    names = [m.name for m in site.morphisms]
    if len(set(names)) != len(names):
        raise MalformedSite("duplicate morphism names")
    objs = set(site.objects)
    for m in site.morphisms:
        if m.source not in objs or m.target not in objs:
            raise MalformedSite(f"{m.name} has an unknown endpoint")
    for obj in site.objects:
        i = site.identities.get(obj)
        if i is None or site.morphism(i).source != obj or site.morphism(i).target != obj:
            raise MalformedSite(f"no identity for {obj}")
    for g in site.morphisms:
        for f in site.morphisms:
            if f.target != g.source:
                continue
            h = site.compose.get((g.name, f.name))
            if h is None:
                raise MalformedSite(f"missing composite {g.name} o {f.name}")
            hm = site.morphism(h)
            if (hm.source, hm.target) != (f.source, g.target):
                raise MalformedSite(f"{g.name} o {f.name} = {h} has wrong endpoints")
    for f in site.morphisms:
        if site.comp(site.identities[f.target], f.name) != f.name or site.comp(f.name, site.identities[f.source]) != f.name:
            raise MalformedSite(f"identities are not units for {f.name}")
    for h in site.morphisms:
        for g in site.morphisms:
            if g.target != h.source:
                continue
            for f in site.morphisms:
                if f.target != g.source:
                    continue
                if site.comp(h.name, site.comp(g.name, f.name)) != site.comp(site.comp(h.name, g.name), f.name):
                    raise MalformedSite(f"composition not associative at ({h.name}, {g.name}, {f.name})")
    for obj, sieves in site.covers.items():
        if obj not in objs:
            raise MalformedSite(f"covers given for unknown object {obj}")
        for S in sieves:
            if not site.is_sieve(obj, S):
                raise MalformedSite(f"cover {sorted(S)} of {obj} is not a sieve")


def _fmt(S) -> list[str]:
    return sorted(S)


def verify_site_axioms(site: FiniteSite) -> CheckList:
    """Exhaustively check the three Grothendieck topology axioms.

    1. the maximal sieve covers each object;
    2. covers are stable under restriction along any arrow;
    3. a sieve that restricts to covers along every arrow of some cover is a cover.
    """
    _check_table(site)
    out = CheckList()

    bad = next((o for o in site.objects if not site.is_cover(o, site.maximal_sieve(o))), None)
    out.add("axiom1_maximal_sieve", bad is None, witness=None if bad is None else {"object": bad})

    witness = None
    for obj in site.objects:
        for S in site.covers.get(obj, []):
            for f in site.into(obj):
                R = site.restrict(f, S)
                if not site.is_cover(site.morphism(f).source, R):
                    witness = {"morphism": f, "cover": _fmt(S), "restriction": _fmt(R)}
                    break
            if witness:
                break
        if witness:
            break
    out.add("axiom2_stability", witness is None, witness=witness)

    witness = None
    for obj in site.objects:
        covers = site.covers.get(obj, [])
        for R in site.sieves(obj):
            if site.is_cover(obj, R):
                continue
            for S in covers:
                if all(site.is_cover(site.morphism(f).source, site.restrict(f, R)) for f in S):
                    witness = {"object": obj, "sieve": _fmt(R), "cover": _fmt(S)}
                    break
            if witness:
                break
        if witness:
            break
    out.add("axiom3_local_character", witness is None, witness=witness)
    return out


def trivial_site(obj: str = "U") -> FiniteSite:
    """One object, identity only, maximal sieve as its only cover."""
    i = f"id_{obj}"
    return FiniteSite([obj], [Morphism(i, obj, obj)], {(i, i): i}, {obj: i}, {obj: [frozenset({i})]})


def reeb_site(period: int = 3, alpha: str = "Calpha", t: str = "Ct") -> FiniteSite:
    """Finite surrogate of the Reeb chart category.

    The shift ``T`` is made cyclic (``T^period = id``) so the category is
    finite.  Arrows: ``T^j`` on the alpha chart, ``T^j.phi`` from the t chart,
    and the identity of the t chart.  Covers: maximal sieves on both objects,
    plus the sieve of all ``T^j.phi`` on the alpha chart.
    """
    if period < 1:
        raise ValueError("period must be >= 1")

    def shift(j):
        j %= period
        return f"id_{alpha}" if j == 0 else ("T" if j == 1 else f"T^{j}")

    def via(j):
        j %= period
        return "phi" if j == 0 else ("T.phi" if j == 1 else f"T^{j}.phi")

    morphisms = [Morphism(via(j), t, alpha) for j in range(period)]
    morphisms += [Morphism(shift(j), alpha, alpha) for j in range(period)]
    morphisms.append(Morphism(f"id_{t}", t, t))
    compose = {}
    for i in range(period):
        for j in range(period):
            compose[(shift(i), shift(j))] = shift(i + j)
            compose[(shift(i), via(j))] = via(i + j)
        compose[(via(i), f"id_{t}")] = via(i)
    compose[(f"id_{t}", f"id_{t}")] = f"id_{t}"
    site = FiniteSite([alpha, t], morphisms, compose, {alpha: shift(0), t: f"id_{t}"})
    site.covers = {
        alpha: [site.maximal_sieve(alpha), frozenset(via(j) for j in range(period))],
        t: [site.maximal_sieve(t)],
    }
    return site


def mutate_site(site: FiniteSite, axiom: int) -> FiniteSite:
    """Reeb site altered so that the given axiom fails.

    1: drop the maximal sieve of the alpha chart.
    2: add the sieve ``{T^j.phi : j != 0}``, whose restriction along phi is empty.
    3: add the empty sieve as a cover of the t chart.
    """
    alpha, t = site.objects
    covers = {o: list(v) for o, v in site.covers.items()}
    if axiom == 1:
        covers[alpha] = [S for S in covers[alpha] if S != site.maximal_sieve(alpha)]
    elif axiom == 2:
        covers[alpha].append(frozenset(m for m in site.into(alpha) if m.endswith("phi") and m != "phi"))
    elif axiom == 3:
        covers[t].append(frozenset())
    else:
        raise ValueError("axiom must be 1, 2 or 3")
    return FiniteSite(site.objects, site.morphisms, site.compose, site.identities, covers)

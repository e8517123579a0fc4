"""Build atlas presentations from declarative JSON configs.

Chart entry::

    {"name": "Ct", "coordinate": "t", "domain": "|t| < 1",
     "chains": [{"name": "f", "slack": 2}], "constants": ["tau"],
     "dependents": [{"name": "Sphi", "rules": {"t_0": "-tau*f_1*Cphi"}}]}

Coordinates are ``<coordinate>_0`` and ``<coordinate>_2 .. <coordinate>_N``
with ``N`` the top-level ``order``; chains are based at ``<coordinate>_0``.

Generator entry::

    {"name": "T", "source": "Calpha", "target": "Calpha",
     "images": {"alpha_0": "alpha_0 + 1"}}

Images are expressions in the source chart.  For endomorphisms, symbols
without an image map to themselves.  ``"extension": {"chain": "f"}`` fills
the coordinate images with the jet extension of ``x_0 -> -f(t_0)``.
Relations are pairs of letter lists; an empty list is the identity.
"""
from __future__ import annotations

import json
from importlib import resources

from .atlas import AtlasPresentation, Chart, Generator
from .errors import MalformedPresentation
from .jets import extend_morphism, jet_variables
from .symbolics import Chain, Context, Dependent


def _chart(entry: dict, order: int) -> Chart:
    try:
        name, coord = entry["name"], entry["coordinate"]
    except KeyError as exc:
        raise MalformedPresentation(f"chart entry lacks {exc}") from None
    variables = jet_variables(coord, order)
    chains = [Chain(c["name"], f"{coord}_0", order + int(c.get("slack", 2))) for c in entry.get("chains", [])]
    deps = [Dependent(d["name"], tuple(sorted(d.get("rules", {}).items()))) for d in entry.get("dependents", [])]
    ctx = Context(variables, chains=chains, constants=entry.get("constants", []), dependents=deps)
    return Chart(name, ctx, coord, entry.get("domain", ""))


def _generator(entry: dict, charts: dict[str, Chart]) -> Generator:
    try:
        name, source, target = entry["name"], entry["source"], entry["target"]
        src, tgt = charts[source], charts[target]
    except KeyError as exc:
        raise MalformedPresentation(f"generator entry: unknown or missing {exc}") from None
    images = {}
    if source == target:
        images = {s: src.ctx[s] for s in src.ctx.symbols if s not in src.ctx.constants}
    if "extension" in entry:
        chain = entry["extension"].get("chain", "f")
        ext = extend_morphism(len(tgt.ctx.variables), ctx=src.ctx, chain=chain)
        images.update(ext.as_images(tgt.coordinate))
    for sym, text in entry.get("images", {}).items():
        images[sym] = src.ctx.parse(text)
    return Generator(name, source, target, images)


def presentation_from_config(data: dict, profiles: dict | None = None) -> AtlasPresentation:
    order = int(data.get("order", 3))
    if order < 2:
        raise MalformedPresentation("order must be >= 2")
    charts = [_chart(c, order) for c in data.get("charts", [])]
    by_name = {c.name: c for c in charts}
    gens = [_generator(g, by_name) for g in data.get("generators", [])]
    relations = [(tuple(a), tuple(b)) for a, b in data.get("relations", [])]
    return AtlasPresentation(charts, gens, relations, profiles)


def load_config(path: str | None) -> dict:
    """Read a JSON config; ``None`` gives the bundled Reeb presentation config."""
    if path is None:
        text = resources.files("leafclass").joinpath("data/reeb_cech.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)

"""Site documents, report documents and the command-line interface.

Two input formats are supported: a line-oriented text format and a JSON
object (see README for the grammar); both round-trip losslessly through
:func:`serialize_site` / :func:`parse_site`.  Reports are deterministic:
re-running a command with the same input and configuration produces
byte-identical output.

Exit codes: 0 success; 2 malformed input or violated site axioms; 3 budget
exhaustion (a verdict is only a bound, or coset enumeration hit its limit);
4 internal invariant violation (a verified mathematical claim failed, which
means a bug, with a witness in the message).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .corpus import BUILTIN_SITES, builtin_group
from .dimension import (content_descriptor, dimension_report, free_monoid_report,
                        local_dimension_check, ore_and_groupification,
                        subtopos_chain)
from .fincat import (FiniteMonoid, FinitePoset, FiniteSpace, SiteError,
                     monoid_as_category, poset_as_site, space_to_site,
                     validate_category)
from .pi1 import h1_set, homs_to_finite_group, pi1_presentation
from .presheaf import Sieve, enumerate_sieves, maximal_sieve
from .purity import (INFINITY, BudgetError, InvariantViolation, PurityAnalyzer,
                     PurityConfig, detect_stability, is_dense)

COMMANDS = ("validate", "sieves", "topologies", "purity", "dimension",
            "content", "h1", "local-check", "ore", "free-monoid")


# ---------------------------------------------------------------------------
# site documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SiteDocument:
    """A parsed input: kind, display name, and the normalized payload."""
    kind: str
    name: str
    payload: tuple   # canonical tuple-of-pairs form of the payload dict

    @staticmethod
    def make(kind, name, payload: dict):
        if kind not in _REQUIRED:
            raise SiteError(f"unknown document kind {kind!r}")
        return SiteDocument(kind, name, _freeze(_canonical_payload(kind, name, payload)))

    def payload_dict(self) -> dict:
        return _thaw(self.payload)

    def resolved(self) -> "SiteDocument":
        if self.kind != "builtin":
            return self
        if self.name not in BUILTIN_SITES:
            raise SiteError(f"unknown builtin site {self.name!r} "
                            f"(have {sorted(BUILTIN_SITES)})")
        kind, payload = BUILTIN_SITES[self.name]
        return SiteDocument.make(kind, self.name, payload)

    def monoid(self) -> FiniteMonoid:
        doc = self.resolved()
        if doc.kind != "monoid":
            raise SiteError(f"command needs a monoid document, got kind {doc.kind!r}")
        p = doc.payload_dict()
        table = {(x, y): z for x, y, z in p["mul"]}
        return FiniteMonoid(p["elements"], table, p["unit"])

    def site(self):
        """Validate and return the finite site of this document."""
        doc = self.resolved()
        p = doc.payload_dict()
        if doc.kind == "monoid":
            return monoid_as_category(doc.monoid())
        if doc.kind == "category":
            return validate_category({
                "objects": p["objects"],
                "morphisms": p["morphisms"],
                "identity": dict(p["identity"]),
                "compose": p["compose"],
            })
        if doc.kind == "poset":
            return poset_as_site(FinitePoset(p["elements"], [tuple(ab) for ab in p["le"]]))
        if doc.kind == "space":
            return space_to_site(FiniteSpace(p["points"], p["opens"]))
        raise SiteError(f"cannot build a site from kind {doc.kind!r}")


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    if isinstance(value, (list, tuple)):
        return ("__list__",) + tuple(_freeze(v) for v in value)
    return value


def _thaw(value):
    if isinstance(value, tuple):
        if value and value[0] == "__list__":
            return [_thaw(v) for v in value[1:]]
        return {k: _thaw(v) for k, v in value}
    return value


def parse_site(text: str) -> SiteDocument:
    """Parse a site document in either the text or the JSON format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


def _parse_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SiteError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "kind" not in data:
        raise SiteError("JSON document must be an object with a 'kind' field")
    kind = data.get("kind")
    name = data.get("name", "")
    payload = {k: v for k, v in data.items() if k not in ("kind", "name")}
    return _normalize(kind, name, payload)


def _parse_text(text):
    kind = None
    name = ""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        key, args = tokens[0], tokens[1:]
        if key == "kind":
            if len(args) != 1:
                raise SiteError(f"line {lineno}: 'kind' takes one value")
            kind = args[0]
        elif key == "name":
            if len(args) != 1:
                raise SiteError(f"line {lineno}: 'name' takes one value")
            name = args[0]
        elif key in ("elements", "objects", "points"):
            fields[key] = args
        elif key == "unit":
            if len(args) != 1:
                raise SiteError(f"line {lineno}: 'unit' takes one value")
            fields["unit"] = args[0]
        elif key == "mul":
            if len(args) != 3:
                raise SiteError(f"line {lineno}: 'mul' takes x y z (meaning x·y = z)")
            fields.setdefault("mul", []).append(args)
        elif key == "morphism":
            if len(args) != 3:
                raise SiteError(f"line {lineno}: 'morphism' takes id source target")
            fields.setdefault("morphisms", []).append(args)
        elif key == "identity":
            if len(args) != 2:
                raise SiteError(f"line {lineno}: 'identity' takes object morphism")
            fields.setdefault("identity", []).append(args)
        elif key == "compose":
            if len(args) != 3:
                raise SiteError(f"line {lineno}: 'compose' takes g f h (meaning g∘f = h)")
            fields.setdefault("compose", []).append(args)
        elif key == "le":
            if len(args) != 2:
                raise SiteError(f"line {lineno}: 'le' takes two elements")
            fields.setdefault("le", []).append(args)
        elif key == "open":
            fields.setdefault("opens", []).append(args)
        else:
            raise SiteError(f"line {lineno}: unknown field {key!r}")
    if kind is None:
        raise SiteError("document has no 'kind' line")
    return _normalize(kind, name, fields)


_REQUIRED = {
    "monoid": ("elements", "unit", "mul"),
    "category": ("objects", "morphisms", "identity", "compose"),
    "poset": ("elements", "le"),
    "space": ("points", "opens"),
    "builtin": (),
}


_LIST_FIELDS = ("mul", "compose", "morphisms", "identity", "le", "opens")


def _canonical_payload(kind, name, payload):
    if kind == "builtin":
        if not name:
            raise SiteError("builtin document needs a 'name'")
        return {}
    missing = [k for k in _REQUIRED[kind]
               if k not in payload and k not in _LIST_FIELDS]
    if missing:
        raise SiteError(f"{kind} document is missing fields: {', '.join(missing)}")
    extra = set(payload) - set(_REQUIRED[kind])
    if extra:
        raise SiteError(f"{kind} document has unknown fields: {sorted(extra)}")
    norm = {}
    for k in _REQUIRED[kind]:
        v = payload.get(k, [] if k in _LIST_FIELDS else None)
        if k in ("elements", "objects", "points"):
            norm[k] = [str(x) for x in v]
        elif k == "unit":
            norm[k] = str(v)
        elif k in ("mul", "compose", "morphisms"):
            norm[k] = sorted([str(a), str(b), str(c)] for a, b, c in v)
        elif k == "identity":
            pairs = v.items() if isinstance(v, dict) else v
            norm[k] = sorted([str(a), str(b)] for a, b in pairs)
        elif k == "le":
            norm[k] = sorted([str(a), str(b)] for a, b in v)
        elif k == "opens":
            norm[k] = sorted((sorted(str(x) for x in u) for u in v),
                             key=lambda u: (len(u), u))
    return norm


def _normalize(kind, name, payload):
    return SiteDocument.make(kind, name, payload)


def serialize_site(doc: SiteDocument, fmt: str = "text") -> str:
    """Canonical text or JSON form; parse_site(serialize_site(doc)) == doc."""
    if fmt == "json":
        data = {"kind": doc.kind, "name": doc.name}
        data.update(doc.payload_dict())
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    p = doc.payload_dict()
    lines = [f"kind {doc.kind}"]
    if doc.name:
        lines.append(f"name {doc.name}")
    if doc.kind == "monoid":
        lines.append("elements " + " ".join(p["elements"]))
        lines.append(f"unit {p['unit']}")
        lines += [f"mul {x} {y} {z}" for x, y, z in p["mul"]]
    elif doc.kind == "category":
        lines.append("objects " + " ".join(p["objects"]))
        lines += [f"morphism {m} {s} {t}" for m, s, t in p["morphisms"]]
        lines += [f"identity {c} {m}" for c, m in p["identity"]]
        lines += [f"compose {g} {f} {h}" for g, f, h in p["compose"]]
    elif doc.kind == "poset":
        lines.append("elements " + " ".join(p["elements"]))
        lines += [f"le {a} {b}" for a, b in p["le"]]
    elif doc.kind == "space":
        lines.append("points " + " ".join(p["points"]))
        lines += [("open " + " ".join(u)).rstrip() for u in p["opens"]]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportDocument:
    """Machine-readable result of one command (lossless JSON round trip)."""
    command: str
    input_echo: str
    config: tuple
    results: tuple
    certification: tuple
    version: str
    budget_limited: bool = False

    @staticmethod
    def make(command, input_echo, config: dict, results: dict, certification,
             budget_limited=False):
        return ReportDocument(command, input_echo, _freeze(config),
                              _freeze(results), tuple(certification),
                              __version__, budget_limited)

    def results_dict(self):
        return _thaw(self.results)

    def config_dict(self):
        return _thaw(self.config)

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "input": self.input_echo,
            "config": self.config_dict(),
            "results": self.results_dict(),
            "certification": list(self.certification),
            "budget_limited": self.budget_limited,
            "version": self.version,
        }
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "ReportDocument":
        data = json.loads(text)
        return ReportDocument(data["command"], data["input"],
                              _freeze(data["config"]), _freeze(data["results"]),
                              tuple(data["certification"]), data["version"],
                              data["budget_limited"])


def _level_repr(level):
    return "inf" if level == INFINITY else int(level)


def _sieve_list(site, sieves):
    return [sorted(s.members) for s in sorted(sieves, key=Sieve.sort_key)]


def _topology_dict(topology):
    site = topology.site
    return {c: _sieve_list(site, topology.covers[c]) for c in site.objects}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def run_command(doc, command, config: PurityConfig = PurityConfig(), *,
                group=None, object_=None, sieve=None, generators=None,
                budget_words=6) -> ReportDocument:
    """Execute one command against a site document and return its report."""
    if command not in COMMANDS:
        raise SiteError(f"unknown command {command!r} (have {', '.join(COMMANDS)})")
    cfg_echo = {"max_degree": config.max_degree, "group_bound": config.group_bound,
                "p_set": list(config.p_set)}
    if command == "free-monoid":
        if generators is None:
            raise SiteError("free-monoid needs --generators")
        cfg_echo["budget_words"] = budget_words
        report, evidence = free_monoid_report(generators, budget_words)
        results = {
            "generators": generators,
            "dimension": report.dimension,
            "dimension_certified": report.dimension_certified,
            "boundary": report.boundary,
            "content": report.content_description,
            "component_count": evidence.component_count,
            "words_checked": evidence.words_checked,
            "decomposition_verified": evidence.decomposition_verified,
            "stability_verified": evidence.stability_verified,
            "notes": list(evidence.notes),
        }
        return ReportDocument.make(command, f"free monoid on {generators} generators",
                                   cfg_echo, results, report.ledger)

    echo = serialize_site(doc, "text")
    if command == "ore":
        m = doc.monoid()
        rep = ore_and_groupification(m)
        results = {
            "right_ore": rep.is_right_ore,
            "ore_witness": list(rep.ore_witness) if rep.ore_witness else None,
            "groupification_order": (None if rep.groupification is None
                                     else len(rep.groupification.elements)),
            "bound_exceeded": rep.bound_exceeded,
        }
        return ReportDocument.make(command, echo, cfg_echo, results, (),
                                   budget_limited=rep.bound_exceeded)

    site = doc.site()
    if command == "validate":
        results = {"ok": True, "objects": list(site.objects),
                   "morphisms": len(site.morphisms)}
        return ReportDocument.make(command, echo, cfg_echo, results, ())

    if command == "sieves":
        results = {"sieves": {c: _sieve_list(site, enumerate_sieves(site, c))
                              for c in site.objects}}
        return ReportDocument.make(command, echo, cfg_echo, results, ())

    if command == "h1":
        if group is None:
            raise SiteError("h1 needs --group")
        g = builtin_group(group) if isinstance(group, str) else group
        pres = pi1_presentation(site)
        homs, classes = homs_to_finite_group(pres, g)
        results = {"group": group if isinstance(group, str) else "custom",
                   "group_order": len(g.elements),
                   "homomorphisms": homs, "classes": classes}
        return ReportDocument.make(command, echo, cfg_echo, results, ())

    analyzer = PurityAnalyzer(site, config)

    if command == "topologies":
        chain = subtopos_chain(site, config, analyzer)
        budget = any(s.budget_limited for s in chain.summaries)
        results = {
            "levels": list(chain.levels),
            "topologies": [_topology_dict(t) for t in chain.topologies],
            "stabilization": chain.stabilization,
        }
        cert = tuple(f"level {row[2]} certificate on {row[0]!r} sieve {list(row[1])} "
                     f"is {row[3]}"
                     for s in chain.summaries for row in s.budget_limited)
        return ReportDocument.make(command, echo, cfg_echo, results, cert,
                                   budget_limited=budget)

    if command == "purity":
        rows = []
        budget = False
        for c in site.objects:
            if object_ is not None and c != object_:
                continue
            for s in enumerate_sieves(site, c):
                if sieve is not None and set(sieve) != set(s.members):
                    continue
                cert = analyzer.purity_level(s)
                budget = budget or cert.certified == "up_to_budget"
                rows.append({
                    "object": c,
                    "members": sorted(s.members),
                    "level": _level_repr(cert.level),
                    "certified": cert.certified,
                    "dense": is_dense(s),
                    "stable": detect_stability(s),
                    "witness": cert.witness,
                })
        if not rows:
            raise SiteError("no sieve matches the requested object/members")
        return ReportDocument.make(command, echo, cfg_echo, {"sieves": rows}, (),
                                   budget_limited=budget)

    if command == "dimension":
        rep = dimension_report(site, config, analyzer)
        results = {
            "dimension": rep.dimension,
            "dimension_certified": rep.dimension_certified,
            "boundary": rep.boundary,
            "content_covers": _topology_dict(rep.content_topology),
            "content": rep.content_description,
            "evidence": [{"level": lv, "object": c, "members": list(mem)}
                         for lv, c, mem in rep.evidence],
        }
        return ReportDocument.make(command, echo, cfg_echo, results, rep.ledger,
                                   budget_limited=rep.dimension_certified != "exact")

    if command == "content":
        rep = content_descriptor(site, config, analyzer)
        results = {
            "covers": _topology_dict(rep.topology),
            "description": rep.description,
            "sheafified_representables": [
                {"object": c, "sections": {d: n for d, n in counts}}
                for c, counts in rep.sheafified_sections],
        }
        return ReportDocument.make(command, echo, cfg_echo, results, ())

    if command == "local-check":
        ok = local_dimension_check(site, config)
        return ReportDocument.make(command, echo, cfg_echo, {"local": ok}, ())

    raise SiteError(f"unhandled command {command!r}")


# ---------------------------------------------------------------------------
# rendering and entry point
# ---------------------------------------------------------------------------

def render_text(report: ReportDocument) -> str:
    lines = [f"toposdim {report.version} — {report.command}"]
    results = report.results_dict()
    lines.append(json.dumps(results, sort_keys=True, indent=2))
    for note in report.certification:
        lines.append(f"note: {note}")
    if report.budget_limited:
        lines.append("budget-limited: verdicts above are bounds, not exact values")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="toposdim",
        description="Dimension, content and boundary of presheaf toposes on finite sites.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?",
                        help="site document path, '-' for stdin, or 'builtin:<name>'")
    parser.add_argument("--max-degree", type=int, default=4)
    parser.add_argument("--group-bound", type=int, default=5)
    parser.add_argument("--budget-words", type=int, default=6,
                        help="free-monoid verification length")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--group", help="coefficient group for h1 (e.g. z2, s3)")
    parser.add_argument("--object", dest="object_", help="restrict purity to one object")
    parser.add_argument("--sieve", help="restrict purity to one sieve, e.g. '{e}' or 'f,g'")
    parser.add_argument("--generators", type=int, help="free-monoid generator count")
    args = parser.parse_args(argv)

    try:
        config = PurityConfig(max_degree=args.max_degree, group_bound=args.group_bound)
        doc = None
        if args.command != "free-monoid":
            if args.input is None:
                raise SiteError("this command needs an input document")
            if args.input.startswith("builtin:"):
                doc = SiteDocument.make("builtin", args.input.split(":", 1)[1], {})
            elif args.input == "-":
                doc = parse_site(sys.stdin.read())
            else:
                with open(args.input, encoding="utf-8") as handle:
                    doc = parse_site(handle.read())
        sieve = None
        if args.sieve is not None:
            body = args.sieve.strip().strip("{}")
            sieve = [tok for tok in
                     (t.strip() for t in body.replace(",", " ").split()) if tok]
        report = run_command(doc, args.command, config, group=args.group,
                             object_=args.object_, sieve=sieve,
                             generators=args.generators,
                             budget_words=args.budget_words)
    except SiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4

    sys.stdout.write(report.to_json() if args.json else render_text(report))
    return 3 if report.budget_limited else 0


if __name__ == "__main__":
    sys.exit(main())

"""System documents: the JSON schema the CLI and the service ingest.

A system document names its universes, its fuzzy sets, exactly one rule,
and the ordered inputs; connectives appear in a compact text form
(``tnorm=product``, ``implication=residuum:lukasiewicz``,
``ref=composed:mean:lukasiewicz``).  Documents may bundle a ``reference``
block of externally stated values; ``verify_reference`` recomputes each of
them honestly and flags every disagreement instead of reproducing it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .algebra import Aggregation, Generator, Implication, Negation, TNorm
from .errors import SemanticError, SystemFileError
from .fuzzyset import DEFAULT_CELL_CAP, FuzzySet, Universe, product_extend
from .hier import infer_hier_implication
from .ref import REF, catalog_ref, compose_ref, generated_family_tnorm, generated_ref
from .sbar import Rule, infer_flat

_SIMPLE_TNORMS = ("minimum", "product", "lukasiewicz", "drastic", "nilpotent-minimum")
_AGG_ALIASES = {
    "min": "minimum",
    "minimum": "minimum",
    "max": "maximum",
    "maximum": "maximum",
    "mean": "mean",
    "product": "product",
}


def parse_generator(text: str) -> Generator:
    if text == "identity":
        return Generator.identity()
    if text.startswith("power:"):
        try:
            return Generator.power(float(text.split(":", 1)[1]))
        except ValueError as exc:
            raise SemanticError(f"bad generator exponent in {text!r}") from exc
    raise SemanticError(f"unknown generator {text!r}")


def parse_negation(text: str) -> Negation:
    if text == "standard":
        return Negation.standard()
    if text.startswith("conjugate:"):
        return Negation.conjugate(parse_generator(text.split(":", 1)[1]))
    raise SemanticError(f"unknown negation {text!r}")


def parse_tnorm(text: str) -> TNorm:
    if text in _SIMPLE_TNORMS:
        return TNorm(text)
    for prefix, builder in (("strict:", TNorm.strict), ("nilpotent:", TNorm.nilpotent)):
        if text.startswith(prefix):
            return builder(parse_generator(text[len(prefix):]))
    raise SemanticError(f"unknown t-norm {text!r}")


def parse_implication(text: str) -> Implication:
    if text in ("goedel", "goguen", "lukasiewicz"):
        return Implication(text)
    if text.startswith("residuum:"):
        return Implication.residuum_of(parse_tnorm(text.split(":", 1)[1]))
    for variant in ("u", "l", "m", "lc"):
        prefix = f"{variant}:"
        if text.startswith(prefix):
            return Implication.modified(parse_implication(text[len(prefix):]), variant)
    raise SemanticError(f"unknown implication {text!r}")


def parse_aggregation(text: str) -> Aggregation:
    if text in _AGG_ALIASES:
        return Aggregation(_AGG_ALIASES[text])
    raise SemanticError(f"unknown aggregation {text!r}")


def parse_ref(text: str, rule_tnorm: TNorm | None = None) -> REF | None:
    """Parse a similarity-function spec; returns None for plain ``generated``.

    ``generated`` defers to the rule's t-norm; ``generated:<tnorm>`` pins
    one; ``catalog:<name>`` picks a closed form (``catalog:phi:<generator>``
    for the generator-warped absolute difference); ``composed:<agg>:<mapping>``
    builds M(f(x,y), f(y,x)) from an aggregation in {min, max, mean,
    product} and any implication text.
    """
    if text == "generated":
        if rule_tnorm is None:
            raise SemanticError("ref 'generated' needs a rule t-norm for context")
        return None
    if text.startswith("generated:"):
        return generated_ref(parse_tnorm(text.split(":", 1)[1]))
    if text.startswith("catalog:"):
        rest = text.split(":", 1)[1]
        if rest.startswith("phi:"):
            return catalog_ref("phi", parse_generator(rest.split(":", 1)[1]))
        return catalog_ref(rest)
    if text.startswith("composed:"):
        parts = text.split(":", 2)
        if len(parts) < 3:
            raise SemanticError(f"composed ref {text!r} needs an aggregation and a mapping")
        return compose_ref(parse_aggregation(parts[1]), parse_implication(parts[2]))
    raise SemanticError(f"unknown ref {text!r}")


def format_ref(ref: REF | None, rule_tnorm: TNorm | None = None) -> str:
    if ref is None:
        return "generated"
    generated = generated_family_tnorm(ref)
    if generated is not None:
        if rule_tnorm is not None and generated == rule_tnorm:
            return "generated"
        return f"generated:{generated.describe()}"
    return ref.describe()


@dataclass(frozen=True)
class System:
    """A validated system document, ready for inference."""

    universes: tuple[Universe, ...]
    set_ids: tuple[str, ...]
    sets: tuple[FuzzySet, ...]
    rule: Rule
    antecedent_ids: tuple[str, ...]
    consequent_id: str
    input_ids: tuple[str, ...]
    inputs: tuple[FuzzySet, ...]
    negation: Negation
    ref_text: str
    reference: dict | None = None
    notes: tuple[str, ...] = ()


def load_system(source) -> System:
    """Parse and validate a system document from a path, JSON text, or dict.

    Field-level problems are collected and raised together as a
    ``SystemFileError`` (CLI exit 1); structurally valid but semantically
    unrunnable documents raise ``SemanticError`` (exit 2).
    """
    if isinstance(source, (str, Path)) and not (
        isinstance(source, str) and source.lstrip().startswith("{")
    ):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SystemFileError(f"cannot read {path}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SystemFileError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    elif isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise SystemFileError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise SystemFileError("the system document must be a JSON object")

    problems: list[str] = []

    def need(key):
        if key not in doc:
            problems.append(f"missing field {key!r}")
            return None
        return doc[key]

    raw_universes = need("universes")
    raw_sets = need("sets")
    raw_rule = need("rule")
    raw_inputs = need("inputs")
    if problems:
        raise SystemFileError(problems)

    universes: dict[str, Universe] = {}
    for i, entry in enumerate(raw_universes or []):
        where = f"universes[{i}]"
        if not isinstance(entry, dict) or "id" not in entry or "labels" not in entry:
            problems.append(f"{where}: needs 'id' and 'labels'")
            continue
        uid = entry["id"]
        if uid in universes:
            problems.append(f"{where}: duplicate universe id {uid!r}")
            continue
        try:
            universes[uid] = Universe(uid, tuple(str(x) for x in entry["labels"]))
        except SemanticError as exc:
            problems.append(f"{where}: {exc}")

    sets: dict[str, FuzzySet] = {}
    for i, entry in enumerate(raw_sets or []):
        where = f"sets[{i}]"
        if not isinstance(entry, dict) or not {"id", "universe", "memberships"} <= set(entry):
            problems.append(f"{where}: needs 'id', 'universe' and 'memberships'")
            continue
        sid = entry["id"]
        where = f"sets[{i}] (id {sid!r})"
        if sid in sets:
            problems.append(f"{where}: duplicate set id")
            continue
        universe = universes.get(entry["universe"])
        if universe is None:
            problems.append(f"{where}: unknown universe {entry['universe']!r}")
            continue
        memberships = entry["memberships"]
        if not isinstance(memberships, list):
            problems.append(f"{where}: memberships must be a list")
            continue
        if len(memberships) != universe.size:
            problems.append(
                f"{where}: {len(memberships)} memberships for universe "
                f"{universe.name!r} of size {universe.size}"
            )
            continue
        try:
            sets[sid] = FuzzySet(universe, tuple(float(v) for v in memberships))
        except (SemanticError, TypeError, ValueError) as exc:
            problems.append(f"{where}: {exc}")

    rule_fields = {}
    if not isinstance(raw_rule, dict):
        problems.append("rule: must be an object")
    else:
        for key in ("antecedents", "consequent", "tnorm"):
            if key not in raw_rule:
                problems.append(f"rule: missing field {key!r}")
        rule_fields = raw_rule

    antecedent_ids = tuple(rule_fields.get("antecedents") or ())
    consequent_id = rule_fields.get("consequent", "")
    for sid in antecedent_ids:
        if sid not in sets:
            problems.append(f"rule.antecedents: unknown set id {sid!r}")
    if consequent_id and consequent_id not in sets:
        problems.append(f"rule.consequent: unknown set id {consequent_id!r}")

    form = rule_fields.get("form", "implication")
    tnorm = None
    if "tnorm" in rule_fields:
        try:
            tnorm = parse_tnorm(str(rule_fields["tnorm"]))
        except SemanticError as exc:
            problems.append(f"rule.tnorm: {exc}")

    input_ids = tuple(raw_inputs or ())
    for sid in input_ids:
        if sid not in sets:
            problems.append(f"inputs: unknown set id {sid!r}")

    negation = Negation.standard()
    if "negation" in doc:
        try:
            negation = parse_negation(str(doc["negation"]))
        except SemanticError as exc:
            problems.append(f"negation: {exc}")

    ref_text = str(doc.get("ref", "generated"))
    similarity_ref = None
    if tnorm is not None:
        try:
            similarity_ref = parse_ref(ref_text, tnorm)
        except SemanticError as exc:
            problems.append(f"ref: {exc}")

    declared = None
    if "implication" in rule_fields:
        try:
            declared = parse_implication(str(rule_fields["implication"]))
        except SemanticError as exc:
            problems.append(f"rule.implication: {exc}")

    if problems:
        raise SystemFileError(problems)

    if declared is not None:
        # the engine derives its implication as the residuum of the rule t-norm;
        # a declared implication must agree with it (named aliases accepted)
        named_equivalents = {
            "minimum": Implication.goedel(),
            "product": Implication.goguen(),
            "lukasiewicz": Implication.lukasiewicz(),
        }
        acceptable = {Implication.residuum_of(tnorm)}
        if tnorm.kind in named_equivalents:
            acceptable.add(named_equivalents[tnorm.kind])
        if declared not in acceptable:
            raise SemanticError(
                f"rule implication {declared.describe()} is not the residuum "
                f"of the rule t-norm {tnorm.describe()}"
            )

    rule = Rule(
        antecedents=tuple(sets[sid] for sid in antecedent_ids),
        consequent=sets[consequent_id],
        tnorm=tnorm,
        form=form,
        similarity_ref=similarity_ref,
    )
    return System(
        universes=tuple(universes.values()),
        set_ids=tuple(sets.keys()),
        sets=tuple(sets.values()),
        rule=rule,
        antecedent_ids=antecedent_ids,
        consequent_id=consequent_id,
        input_ids=input_ids,
        inputs=tuple(sets[sid] for sid in input_ids),
        negation=negation,
        ref_text=ref_text,
        reference=doc.get("reference"),
        notes=tuple(doc.get("notes", ())),
    )


def dump_normalized(system: System) -> dict:
    """A canonical document that reloads to an equivalent system."""
    id_by_universe = {u: u.name for u in system.universes}
    sets_payload = []
    for sid, fs in zip(system.set_ids, system.sets):
        sets_payload.append(
            {
                "id": sid,
                "universe": id_by_universe[fs.universe],
                "memberships": list(fs.memberships),
            }
        )
    doc = {
        "universes": [{"id": u.name, "labels": list(u.labels)} for u in system.universes],
        "sets": sets_payload,
        "rule": {
            "antecedents": list(system.antecedent_ids),
            "consequent": system.consequent_id,
            "tnorm": system.rule.tnorm.describe(),
            "form": system.rule.form,
        },
        "inputs": list(system.input_ids),
        "ref": format_ref(system.rule.similarity_ref, system.rule.tnorm),
        "negation": system.negation.describe(),
    }
    if system.reference is not None:
        doc["reference"] = system.reference
    if system.notes:
        doc["notes"] = list(system.notes)
    return doc


@dataclass(frozen=True)
class ReferenceEntry:
    """One bundled reference value against its honest recomputation."""

    name: str
    reference: object
    computed: object
    matches: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "reference": self.reference,
            "computed": self.computed,
            "matches": self.matches,
        }


@dataclass(frozen=True)
class ReferenceReport:
    entries: tuple[ReferenceEntry, ...]

    @property
    def mismatches(self) -> tuple[ReferenceEntry, ...]:
        return tuple(e for e in self.entries if not e.matches)

    def as_dict(self) -> dict:
        return {"entries": [e.as_dict() for e in self.entries]}


def _values_match(reference, computed, tol=1e-9) -> bool:
    if isinstance(reference, list) and isinstance(computed, (list, tuple)):
        return len(reference) == len(computed) and all(
            _values_match(r, c, tol) for r, c in zip(reference, computed)
        )
    if isinstance(reference, (int, float)) and isinstance(computed, (int, float)):
        return abs(float(reference) - float(computed)) <= tol
    return reference == computed


def verify_reference(system: System, *, cap: int = DEFAULT_CELL_CAP) -> ReferenceReport:
    """Recompute every bundled reference value and flag the disagreements."""
    reference = system.reference or {}
    entries: list[ReferenceEntry] = []
    if not reference:
        return ReferenceReport(())

    flat = infer_flat(system.rule, list(system.inputs), cap=cap)
    computed: dict[str, object] = {
        "antecedent_similarities": list(flat.antecedent_similarities or ()),
        "combined_similarity": flat.similarity,
        "output": list(flat.output.memberships),
        "flat_rows": flat.counter.row_values(),
        "flat_total": flat.counter.total,
        "relation_peak": product_extend(
            list(system.rule.antecedents), system.rule.tnorm, cap=cap
        ).max_membership,
    }
    if system.rule.form == "implication":
        hier = infer_hier_implication(system.rule, list(system.inputs))
        computed["first_stage_output"] = list(hier.intermediates[0].memberships)
        computed["hier_output"] = list(hier.output.memberships)
        computed["hier_rows"] = hier.counter.row_values()
        computed["hier_total"] = hier.counter.total

    for name, ref_value in reference.items():
        if name not in computed:
            entries.append(ReferenceEntry(name, ref_value, None, False))
            continue
        got = computed[name]
        entries.append(ReferenceEntry(name, ref_value, got, _values_match(ref_value, got)))
    return ReferenceReport(tuple(entries))

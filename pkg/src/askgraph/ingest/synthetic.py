"""Synthetic corpus generator.

Produces a historical-trial-flavoured property graph that hits the
configured node/relationship/property totals exactly, so dataset-shape
tests and demos do not depend on any private corpus. Fully deterministic
for a given (config, seed): same inputs, byte-identical export.

Sentences follow the template "<A> <verb-of-type> <B> [in <place>]." and
every relationship is anchored to a paragraph whose text contains its
sentence, which keeps provenance tracing visibly meaningful in the UI.
"""

from __future__ import annotations

import math
import random
from typing import Dict, List, Sequence, Tuple

from ..config import SyntheticConfig
from ..errors import UnachievableTargets
from ..graph import PropertyGraph

PARAGRAPH_COMBO = ("Paragraph",)

GIVEN_NAMES = [
    "Pedro", "Juan", "Ana", "María", "Francisco", "Catalina", "Diego", "Isabel",
    "Alonso", "Beatriz", "Gonzalo", "Leonor", "Hernando", "Inés", "Rodrigo",
    "Juana", "Luis", "Elvira", "Antonio", "Constanza", "Gabriel", "Lucía",
    "Martín", "Teresa", "Andrés", "Clara", "Cristóbal", "Violante", "Bartolomé",
    "Mencía",
]

SURNAMES = [
    "de Vivero", "de la Cruz", "de Rojas", "Ortiz", "de Salas", "Herrera",
    "de Toledo", "Núñez", "de Aguilar", "Carrillo", "de Mendoza", "Suárez",
    "de Padilla", "Maldonado", "de Ulloa", "Velázquez", "de Fonseca", "Ramírez",
    "de Castro", "Osorio", "de Guzmán", "Ponce", "de Ayala", "Quiroga",
    "de Leiva", "Salazar", "de Cárdenas", "Manrique", "de Silva", "Pacheco",
    "de Soto", "Girón", "de Luna", "Enríquez", "de Vargas", "Cabrera",
    "de Zúñiga", "Montalvo", "de Peralta", "Villalobos",
]

PLACE_NAMES = [
    "Valladolid", "Sevilla", "Toledo", "Salamanca", "Palencia", "Zamora",
    "Burgos", "Ávila", "Segovia", "Medina del Campo", "Tordesillas", "Simancas",
    "Cigales", "Pedrosa del Rey", "Aranda de Duero", "Logroño", "Calahorra",
    "Astorga", "León", "Soria", "Cuenca", "Alcalá de Henares", "Guadalajara",
    "Talavera", "Plasencia",
]

ORGANISATION_NAMES = [
    "Holy Office Tribunal", "Monastery of San Benito", "Convent of Santa Clara",
    "Cathedral Chapter", "Royal Chancery", "College of San Gregorio",
    "Brotherhood of the True Cross", "Parish of San Miguel",
    "Monastery of la Trinidad", "Collegiate Church", "Council of Castile",
    "Hospital de la Resurrección", "Abbey of Santa María", "Order of Preachers",
    "Guild of Merchants", "Parish of Santiago", "Convent of San Pablo",
    "Court of Appeals", "Seminary of San Gregorio", "Charter House",
]

VERB_PHRASES = {
    "accuses": "accused {target} of heresy",
    "denounces": "denounced {target} before the tribunal",
    "testifies_against": "testified against {target}",
    "interrogates": "interrogated {target}",
    "meets": "met {target}",
    "writes_to": "wrote a letter to {target}",
    "preaches_to": "preached to {target}",
    "related_to": "was a relative of {target}",
    "member_of": "belonged to {target}",
    "resides_in": "lived in {target}",
}

PARAGRAPH_TYPES = ["testimony", "letter", "court record"]


def apportion(total: int, weights: Sequence[float]) -> List[int]:
    """Largest-remainder apportionment: exact total, each count within 1
    of its real-valued quota."""
    if total == 0 or not weights:
        return [0] * len(weights)
    weight_sum = float(sum(weights))
    quotas = [total * w / weight_sum for w in weights]
    counts = [math.floor(q) for q in quotas]
    remainder = total - sum(counts)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:remainder]:
        counts[i] += 1
    return counts


class _NamePool:
    def __init__(self, rng: random.Random):
        self.rng = rng
        pairs = [(g, s) for g in GIVEN_NAMES for s in SURNAMES]
        self.rng.shuffle(pairs)
        self._person_pairs = pairs
        self._person_idx = 0
        self._places = list(PLACE_NAMES)
        self.rng.shuffle(self._places)
        self._orgs = list(ORGANISATION_NAMES)
        self.rng.shuffle(self._orgs)
        self._place_idx = 0
        self._org_idx = 0
        self._used: set = set()

    def _unique(self, name: str) -> str:
        candidate = name
        serial = 2
        while candidate in self._used:
            candidate = f"{name} {serial}"
            serial += 1
        self._used.add(candidate)
        return candidate

    def reserve(self, name: str) -> str:
        return self._unique(name)

    def person(self) -> str:
        if self._person_idx < len(self._person_pairs):
            given, surname = self._person_pairs[self._person_idx]
            self._person_idx += 1
            return self._unique(f"{given} {surname}")
        return self._unique(f"{self.rng.choice(GIVEN_NAMES)} {self.rng.choice(SURNAMES)}")

    def place(self) -> str:
        name = self._places[self._place_idx % len(self._places)]
        self._place_idx += 1
        return self._unique(name)

    def organisation(self) -> str:
        name = self._orgs[self._org_idx % len(self._orgs)]
        self._org_idx += 1
        return self._unique(name)

    def for_combo(self, combo: Tuple[str, ...]) -> str:
        if "Person" in combo:
            return self.person()
        if "Place" in combo:
            return self.place()
        if combo and combo[0] in ("Organisation", "Religious", "Judicial"):
            return self.organisation()
        return self.person()


def generate_synthetic(config: SyntheticConfig) -> PropertyGraph:
    """Generate a graph hitting the configured totals exactly."""
    config.validate()
    rng = random.Random(config.seed)

    combos = list(config.label_weights)
    counts = dict(zip(combos, apportion(config.node_total, [config.label_weights[c] for c in combos])))
    paragraph_count = counts.pop(PARAGRAPH_COMBO, 0)
    entity_count = config.node_total - paragraph_count

    if config.relationship_total > 0:
        if paragraph_count == 0:
            raise UnachievableTargets(
                "relationships need paragraph anchors; give the Paragraph label a weight"
            )
        if entity_count == 0:
            raise UnachievableTargets("relationships need entity endpoints")
        if not config.relationship_types:
            raise UnachievableTargets("no relationship types configured")

    # -- entities -------------------------------------------------------------
    pool = _NamePool(rng)
    entities: List[Dict] = []  # {"id", "name", "labels", "properties"}

    def add_entity(name: str, combo: Tuple[str, ...]) -> None:
        entities.append(
            {
                "id": f"n{len(entities) + 1}",
                "name": name,
                "labels": combo,
                "properties": {},
            }
        )

    anchor_count = min(len(config.anchors), entity_count)
    for name, combo in config.anchors[:anchor_count]:
        add_entity(pool.reserve(name), combo)
        if combo in counts and counts[combo] > 0:
            counts[combo] -= 1

    remaining = entity_count - anchor_count
    flat: List[Tuple[str, ...]] = []
    for combo in combos:
        if combo == PARAGRAPH_COMBO:
            continue
        flat.extend([combo] * counts.get(combo, 0))
    if len(flat) > remaining:
        flat = flat[:remaining]
    while len(flat) < remaining:
        flat.append(combos[0] if combos and combos[0] != PARAGRAPH_COMBO else ("Person",))
    for combo in flat:
        add_entity(pool.for_combo(combo), combo)

    persons = [e for e in entities if "Person" in e["labels"]]
    places = [e for e in entities if "Place" in e["labels"]]
    orgs = [e for e in entities if set(e["labels"]) & {"Organisation", "Religious", "Judicial"} and "Person" not in e["labels"]]

    def target_pool(category: str) -> List[Dict]:
        if category == "location" and places:
            return places
        if category == "affiliation" and orgs:
            return orgs
        return persons or entities

    # -- relationships ----------------------------------------------------------
    type_counts = apportion(
        config.relationship_total, [w for _, _, w in config.relationship_types]
    )
    relationships: List[Dict] = []

    def make_sentence(rel_type: str, source: Dict, target: Dict) -> str:
        phrase = VERB_PHRASES.get(rel_type, "was linked to {target}")
        body = f"{source['name']} {phrase.format(target=target['name'])}"
        if places and rng.random() < 0.5 and "lived in" not in phrase:
            body += f" in {rng.choice(places)['name']}"
        return body + "."

    def add_relationship(rel_type: str, category: str, source: Dict, target: Dict) -> None:
        relationships.append(
            {
                "id": f"r{len(relationships) + 1}",
                "source": source,
                "target": target,
                "type": rel_type,
                "category": category,
                "sentence": make_sentence(rel_type, source, target),
                "properties": {},
            }
        )

    # guaranteed interactions between the first two anchors
    pair_budget = min(config.anchor_pair_edges, config.relationship_total)
    if pair_budget and len(entities) >= 2 and anchor_count >= 2:
        first, second = entities[0], entities[1]
        type_cycle = 0
        for k in range(pair_budget):
            while type_counts[type_cycle % len(type_counts)] == 0:
                type_cycle += 1
            idx = type_cycle % len(type_counts)
            rel_type, category, _ = config.relationship_types[idx]
            type_counts[idx] -= 1
            type_cycle += 1
            if k % 2 == 0:
                add_relationship(rel_type, category, first, second)
            else:
                add_relationship(rel_type, category, second, first)

    for (rel_type, category, _), count in zip(config.relationship_types, type_counts):
        sources = persons or entities
        targets = target_pool(category)
        for _ in range(count):
            source = rng.choice(sources)
            target = rng.choice(targets)
            if source is target and len(targets) > 1:
                for _ in range(5):
                    target = rng.choice(targets)
                    if target is not source:
                        break
            add_relationship(rel_type, category, source, target)

    # -- paragraphs ----------------------------------------------------------------
    paragraphs: List[Dict] = []
    for i in range(paragraph_count):
        paragraphs.append(
            {
                "id": f"p{i + 1}",
                "sentences": [],
                "metadata": {
                    "paragraph": i + 1,
                    "type": PARAGRAPH_TYPES[i % len(PARAGRAPH_TYPES)],
                    "source": f"Archive MS {100 + i // 12}",
                    "folio": f"{i + 1}r",
                },
            }
        )
    for k, rel in enumerate(relationships):
        paragraph = paragraphs[k % paragraph_count] if paragraphs else None
        rel["paragraph"] = paragraph
        if paragraph is not None:
            paragraph["sentences"].append(rel["sentence"])

    # first-mention provenance property on entities
    for rel in relationships:
        for endpoint in (rel["source"], rel["target"]):
            if "source_paragraph" not in endpoint["properties"] and rel["paragraph"]:
                endpoint["properties"]["source_paragraph"] = rel["paragraph"]["id"]

    # -- property padding to the exact target ------------------------------------------
    base = 0
    for e in entities:
        base += 2 + len(e["properties"])
    for p in paragraphs:
        base += 1 + len(p["metadata"])
    for r in relationships:
        base += 1 + (1 if r["category"] else 0) + (1 if r["sentence"] else 0) + len(r["properties"])

    padding = config.property_total - base
    if padding < 0:
        raise UnachievableTargets(
            f"property target {config.property_total} is below the structural minimum {base}"
        )
    fillers = entities + relationships
    if padding and not fillers:
        raise UnachievableTargets("cannot pad properties on an empty graph")
    for k in range(padding):
        element = fillers[k % len(fillers)]
        serial = k // len(fillers) + 1
        element["properties"][f"note_{serial}"] = f"archival cross-reference {k + 1}"

    # -- build ------------------------------------------------------------------------
    graph = PropertyGraph()
    for e in entities:
        graph.add_entity(e["name"], e["labels"], e["properties"], node_id=e["id"])
    for p in paragraphs:
        text = " ".join(p["sentences"]) if p["sentences"] else "Blank folio."
        graph.add_paragraph(text, p["metadata"], node_id=p["id"])
    for r in relationships:
        graph.add_relationship(
            r["source"]["id"],
            r["target"]["id"],
            r["type"],
            category=r["category"],
            sentence=r["sentence"],
            paragraph_id=r["paragraph"]["id"] if r["paragraph"] else None,
            properties=r["properties"],
            rel_id=r["id"],
        )
    graph.finalize()

    report = graph.stats()
    if (
        report.total_nodes != config.node_total
        or report.total_relationships != config.relationship_total
        or report.total_properties != config.property_total
    ):
        raise UnachievableTargets(
            "generator missed its targets: "
            f"got ({report.total_nodes}, {report.total_relationships}, {report.total_properties})"
        )
    return graph

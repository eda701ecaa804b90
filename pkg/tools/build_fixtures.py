#!/usr/bin/env python3
"""Regenerate the committed demo fixtures.

Writes fixtures/usecase_graph.json (a small trial-records graph for the
scripted walkthrough) and fixtures/mock_llm/fixtures.json (canned LLM
responses keyed by prompt fingerprints). Rerun after changing prompt
templates, the fixture graph, or the fingerprint scheme:

    python3 tools/build_fixtures.py
"""

from pathlib import Path

from askgraph.cypher import parse
from askgraph.cypher.executor import execute
from askgraph.graph import PropertyGraph
from askgraph.ingest import export_graph_json
from askgraph.linking import build_index, resolve_all
from askgraph.llm import MockLLM
from askgraph.pipeline import (
    _parse_mentions,
    build_generation_prompt,
    extraction_messages,
    strip_code_fences,
    summary_messages,
)

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def build_usecase_graph() -> PropertyGraph:
    g = PropertyGraph()
    miranda = g.add_entity("Fray Bartolomé de Miranda", ["Person", "Religious"], node_id="n1")
    cazalla = g.add_entity("Pedro de Cazalla", ["Person", "Religious"], node_id="n2")
    ana = g.add_entity("Ana Enríquez", ["Person", "Religious"], node_id="n3")
    vivero = g.add_entity("Juan de Vivero", ["Person"], node_id="n4")
    leonor = g.add_entity("Leonor de Cisneros", ["Person"], node_id="n5")
    padilla = g.add_entity("Cristóbal de Padilla", ["Person", "Religious"], node_id="n6")
    catalina = g.add_entity("Catalina de Ortega", ["Person"], node_id="n7")
    valladolid = g.add_entity("Valladolid", ["Place"], node_id="n8")
    tribunal = g.add_entity("Holy Office Tribunal", ["Organisation", "Judicial"], node_id="n9")
    convent = g.add_entity("Convent of Belén", ["Organisation", "Religious"], node_id="n10")

    paragraphs = [
        (
            "p1",
            "Fray Bartolomé de Miranda met Pedro de Cazalla in Valladolid. "
            "Pedro de Cazalla wrote a letter to Fray Bartolomé de Miranda. "
            "Ana Enríquez was a relative of Leonor de Cisneros.",
            {"paragraph": 1, "type": "testimony", "source": "Archive MS 101", "folio": "12r"},
        ),
        (
            "p2",
            "Fray Bartolomé de Miranda preached to Pedro de Cazalla. "
            "Juan de Vivero accused Pedro de Cazalla of heresy. "
            "Fray Bartolomé de Miranda belonged to the Convent of Belén.",
            {"paragraph": 2, "type": "testimony", "source": "Archive MS 101", "folio": "13v"},
        ),
        (
            "p3",
            "Leonor de Cisneros denounced Pedro de Cazalla before the tribunal. "
            "Ana Enríquez met Fray Bartolomé de Miranda. "
            "Cristóbal de Padilla wrote a letter to Fray Bartolomé de Miranda.",
            {"paragraph": 3, "type": "letter", "source": "Archive MS 102", "folio": "4r"},
        ),
        (
            "p4",
            "Pedro de Cazalla lived in Valladolid. "
            "The Holy Office Tribunal interrogated Pedro de Cazalla. "
            "Catalina de Ortega testified against Pedro de Cazalla.",
            {"paragraph": 4, "type": "court record", "source": "Archive MS 102", "folio": "9r"},
        ),
    ]
    for pid, text, metadata in paragraphs:
        g.add_paragraph(text, metadata, node_id=pid)

    edges = [
        ("r1", miranda, cazalla, "meets", "communication",
         "Fray Bartolomé de Miranda met Pedro de Cazalla in Valladolid.", "p1"),
        ("r2", cazalla, miranda, "writes_to", "communication",
         "Pedro de Cazalla wrote a letter to Fray Bartolomé de Miranda.", "p1"),
        ("r3", miranda, cazalla, "preaches_to", "communication",
         "Fray Bartolomé de Miranda preached to Pedro de Cazalla.", "p2"),
        ("r4", vivero, cazalla, "accuses", "accusation",
         "Juan de Vivero accused Pedro de Cazalla of heresy.", "p2"),
        ("r5", leonor, cazalla, "denounces", "accusation",
         "Leonor de Cisneros denounced Pedro de Cazalla before the tribunal.", "p3"),
        ("r6", ana, miranda, "meets", "communication",
         "Ana Enríquez met Fray Bartolomé de Miranda.", "p3"),
        ("r7", padilla, miranda, "writes_to", "communication",
         "Cristóbal de Padilla wrote a letter to Fray Bartolomé de Miranda.", "p3"),
        ("r8", cazalla, valladolid, "resides_in", "location",
         "Pedro de Cazalla lived in Valladolid.", "p4"),
        ("r9", tribunal, cazalla, "interrogates", "legal",
         "The Holy Office Tribunal interrogated Pedro de Cazalla.", "p4"),
        ("r10", catalina, cazalla, "testifies_against", "legal",
         "Catalina de Ortega testified against Pedro de Cazalla.", "p4"),
        ("r11", miranda, convent, "member_of", "affiliation",
         "Fray Bartolomé de Miranda belonged to the Convent of Belén.", "p2"),
        ("r12", ana, leonor, "related_to", "kinship",
         "Ana Enríquez was a relative of Leonor de Cisneros.", "p1"),
    ]
    for rel_id, source, target, rel_type, category, sentence, pid in edges:
        g.add_relationship(
            source, target, rel_type, category=category, sentence=sentence,
            paragraph_id=pid, rel_id=rel_id,
        )
    return g.finalize()


# question, extraction reply, generation reply, summary reply
SCENARIO = [
    (
        "Which figures in the corpus are both persons and religious?",
        '{"people": [], "organisations": [], "locations": [], "paragraph_ids": []}',
        "MATCH (p:Person:Religious)\nRETURN p",
        "Four figures carry both the person and religious roles: Fray Bartolomé "
        "de Miranda, Pedro de Cazalla, Ana Enríquez and Cristóbal de Padilla.",
    ),
    (
        "Who interacted with Fray Bartolomé de Miranda?",
        '{"people": ["Fray Bartolomé de Miranda"], "organisations": [], '
        '"locations": [], "paragraph_ids": []}',
        "MATCH (p:Person)-[r]-(m {name: 'Fray Bartolomé de Miranda'})\n"
        "RETURN p.name, count(r) AS interactions\nORDER BY interactions DESC",
        "Three people interacted with Fray Bartolomé de Miranda: Pedro de "
        "Cazalla (3 interactions), Ana Enríquez (1) and Cristóbal de Padilla (1).",
    ),
    (
        "Show all interactions between Fray Bartolomé de Miranda and Pedro de Cazalla.",
        '{"people": ["Fray Bartolomé de Miranda", "Pedro de Cazalla"], '
        '"organisations": [], "locations": [], "paragraph_ids": []}',
        "```\nMATCH (a {name: 'Fray Bartolomé de Miranda'})-[r]-(b {name: 'Pedro de Cazalla'})\n"
        "RETURN a, r, b\n```",
        "The corpus records three direct interactions: Miranda met Cazalla in "
        "Valladolid, Cazalla wrote him a letter, and Miranda preached to him.",
    ),
]


def build_mock_fixtures(graph: PropertyGraph) -> MockLLM:
    index = build_index(graph)
    schema = graph.schema()
    mock = MockLLM()
    for question, extraction_reply, generation_reply, summary_reply in SCENARIO:
        mock.register(extraction_messages(question), extraction_reply)
        mentions = _parse_mentions(extraction_reply)
        resolutions = resolve_all(mentions.all_mentions(), index)
        prompt = build_generation_prompt(question, schema, resolutions)
        mock.register(prompt, generation_reply)
        ast = parse(strip_code_fences(generation_reply))
        result = execute(ast, graph)
        mock.register(summary_messages(question, result, 100), summary_reply)
    return mock


def main() -> None:
    graph = build_usecase_graph()
    export_graph_json(graph, FIXTURES / "usecase_graph.json")
    mock_dir = FIXTURES / "mock_llm"
    mock_dir.mkdir(parents=True, exist_ok=True)
    build_mock_fixtures(graph).save(mock_dir)
    print(f"wrote {FIXTURES / 'usecase_graph.json'}")
    print(f"wrote {mock_dir / 'fixtures.json'}")


if __name__ == "__main__":
    main()

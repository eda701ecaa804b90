import json

import pytest

from askgraph.config import SyntheticConfig, parse_synthetic_config
from askgraph.errors import (
    ConfigError,
    DanglingReference,
    DuplicateId,
    MalformedRecord,
    SchemaViolation,
    UnachievableTargets,
)
from askgraph.graph import PropertyGraph
from askgraph.ingest import (
    SCHEMA_PATH,
    document_from_graph,
    dumps_document,
    export_graph_json,
    generate_synthetic,
    graph_from_document,
    import_conll04,
    load_graph_json,
)
from askgraph.ingest.synthetic import apportion


def default_config(fixtures_dir, seed=None):
    return parse_synthetic_config(fixtures_dir / "synthetic-default.cfg", seed=seed)


class TestJsonDocument:
    def test_empty_document(self):
        graph = load_graph_json({"nodes": [], "relationships": []})
        assert graph.stats().total_nodes == 0

    def test_round_trip_equality(self, usecase_graph):
        document = document_from_graph(usecase_graph)
        again = graph_from_document(json.loads(json.dumps(document)))
        assert document_from_graph(again) == document
        assert again.schema() == usecase_graph.schema()
        assert again.stats() == usecase_graph.stats()

    def test_dangling_reference(self):
        document = {
            "nodes": [{"id": "n1", "kind": "entity", "name": "A", "labels": ["Person"]}],
            "relationships": [
                {"id": "r1", "source": "n1", "target": "ghost", "type": "meets"}
            ],
        }
        with pytest.raises(DanglingReference):
            graph_from_document(document)

    def test_duplicate_id(self):
        document = {
            "nodes": [
                {"id": "x", "kind": "entity", "name": "A", "labels": ["Person"]},
                {"id": "x", "kind": "paragraph", "text": "t"},
            ],
            "relationships": [],
        }
        with pytest.raises(DuplicateId):
            graph_from_document(document)

    def test_schema_violation_carries_path(self):
        with pytest.raises(SchemaViolation) as exc:
            graph_from_document({"nodes": [{"id": "n1", "kind": "entity", "name": ""}]})
        assert "nodes[0]" in str(exc.value)

    def test_export_writes_canonical_file(self, usecase_graph, tmp_path):
        out = tmp_path / "g.json"
        export_graph_json(usecase_graph, out)
        assert load_graph_json(out).stats() == usecase_graph.stats()

    def test_exports_validate_against_shipped_schema(self, usecase_graph, fixtures_dir):
        import jsonschema

        schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
        jsonschema.validate(document_from_graph(usecase_graph), schema)
        synthetic = generate_synthetic(default_config(fixtures_dir))
        jsonschema.validate(document_from_graph(synthetic), schema)


class TestSynthetic:
    def test_paper_shape_targets_exact(self, fixtures_dir):
        report = generate_synthetic(default_config(fixtures_dir)).stats()
        assert report.total_nodes == 600
        assert report.total_relationships == 3000
        assert report.total_properties == 13000

    def test_deterministic_for_same_seed(self, fixtures_dir):
        first = generate_synthetic(default_config(fixtures_dir, seed=42))
        second = generate_synthetic(default_config(fixtures_dir, seed=42))
        assert dumps_document(export_graph_json(first)) == dumps_document(
            export_graph_json(second)
        )

    def test_different_seed_differs(self, fixtures_dir):
        first = generate_synthetic(default_config(fixtures_dir, seed=1))
        second = generate_synthetic(default_config(fixtures_dir, seed=2))
        assert dumps_document(export_graph_json(first)) != dumps_document(
            export_graph_json(second)
        )

    def test_zero_targets_give_empty_graph(self):
        config = SyntheticConfig(node_total=0, relationship_total=0, property_total=0)
        report = generate_synthetic(config).stats()
        assert (report.total_nodes, report.total_relationships, report.total_properties) == (
            0,
            0,
            0,
        )

    def test_unachievable_property_target(self):
        config = SyntheticConfig(
            node_total=10,
            relationship_total=0,
            property_total=1,  # 10 entities already need 20 entries
            label_weights={("Person",): 1.0},
        )
        with pytest.raises(UnachievableTargets):
            generate_synthetic(config)

    def test_relationships_need_paragraph_weight(self):
        config = SyntheticConfig(
            node_total=10,
            relationship_total=5,
            property_total=100,
            label_weights={("Person",): 1.0},
            relationship_types=[("meets", "communication", 1.0)],
        )
        with pytest.raises(UnachievableTargets):
            generate_synthetic(config)

    def test_label_distribution_within_one_of_quota(self, fixtures_dir):
        config = default_config(fixtures_dir)
        graph = generate_synthetic(config)
        total = config.node_total
        weight_sum = sum(config.label_weights.values())
        combo_counts = {}
        for node in graph.entity_nodes():
            combo_counts[node.labels] = combo_counts.get(node.labels, 0) + 1
        combo_counts[("Paragraph",)] = len(graph.paragraph_nodes())
        anchors = len(config.anchors)
        for combo, weight in config.label_weights.items():
            quota = total * weight / weight_sum
            # anchors shift their combos by at most the number of anchors
            assert abs(combo_counts.get(combo, 0) - quota) <= 1 + anchors

    def test_every_relationship_is_anchored_with_sentence(self, fixtures_dir):
        graph = generate_synthetic(default_config(fixtures_dir))
        for rel in graph.relationships():
            assert rel.sentence
            assert rel.paragraph_id is not None
            paragraph = graph.node(rel.paragraph_id)
            assert rel.sentence in paragraph.text

    def test_apportion_exact_and_within_one(self):
        weights = [3.0, 1.0, 1.0, 0.5]
        counts = apportion(100, weights)
        assert sum(counts) == 100
        for count, weight in zip(counts, weights):
            assert abs(count - 100 * weight / sum(weights)) < 1.0

    def test_anchor_pair_edges_present(self, fixtures_dir):
        graph = generate_synthetic(default_config(fixtures_dir))
        miranda = next(n for n in graph.entity_nodes() if n.name == "Fray Bartolomé de Miranda")
        cazalla = next(n for n in graph.entity_nodes() if n.name == "Pedro de Cazalla")
        between = [
            rel
            for rel, other in graph.neighbors(miranda.id, "both")
            if other.id == cazalla.id
        ]
        assert len(between) >= 6


class TestConll04:
    def test_sample_counts(self, fixtures_dir):
        graph = import_conll04(fixtures_dir / "conll04_sample.txt")
        assert len(graph.paragraph_nodes()) == 20
        assert set(graph.schema().relationship_types) == {
            "KILL",
            "WORK_FOR",
            "ORG_BASED_IN",
            "LIVE_IN",
            "LOCATED_IN",
        }

    def test_single_sentence_hand_construction(self, tmp_path):
        path = tmp_path / "one.txt"
        path.write_text(
            "John\tB-Peop\nWilkes\tI-Peop\nBooth\tI-Peop\nkilled\tO\n"
            "Lincoln\tB-Peop\n.\tO\n0\t4\tKill\n",
            encoding="utf-8",
        )
        graph = import_conll04(path)
        people = [n for n in graph.entity_nodes() if "Person" in n.labels]
        assert sorted(n.name for n in people) == ["John Wilkes Booth", "Lincoln"]
        rels = graph.relationships()
        assert len(rels) == 1 and rels[0].rel_type == "KILL"
        assert len(graph.paragraph_nodes()) == 1
        assert rels[0].sentence == "John Wilkes Booth killed Lincoln ."

    def test_sentences_preserved_as_provenance(self, fixtures_dir):
        graph = import_conll04(fixtures_dir / "conll04_sample.txt")
        for rel in graph.relationships():
            paragraph = graph.node(rel.paragraph_id)
            assert rel.sentence == paragraph.text

    def test_entity_dedup_on_double_import(self, fixtures_dir, tmp_path):
        source = (fixtures_dir / "conll04_sample.txt").read_text(encoding="utf-8")
        doubled = tmp_path / "double.txt"
        doubled.write_text(source + "\n" + source, encoding="utf-8")
        once = import_conll04(fixtures_dir / "conll04_sample.txt")
        twice = import_conll04(doubled)
        assert len(twice.paragraph_nodes()) == 2 * len(once.paragraph_nodes())
        assert len(twice.entity_nodes()) == len(once.entity_nodes())

    def test_padded_file_reaches_1437_paragraphs(self, fixtures_dir, tmp_path):
        source = (fixtures_dir / "conll04_sample.txt").read_text(encoding="utf-8")
        blocks = [
            f"Filler{i}\tB-Peop\nvisited\tO\nTown{i}\tB-Loc\n.\tO\n0\t2\tLive_In\n"
            for i in range(1437 - 20)
        ]
        padded = tmp_path / "padded.txt"
        padded.write_text(source + "\n" + "\n\n".join(blocks) + "\n", encoding="utf-8")
        graph = import_conll04(padded)
        assert len(graph.paragraph_nodes()) == 1437

    @pytest.mark.parametrize(
        "content, phrase",
        [
            ("John\tB-Peop\tX\tY\n", "fields"),
            ("John\tB-Peop\tX\n", "integers"),
            ("John\tB-Wrong\n", "tag"),
            ("John\tB-Peop\n0\t0\tAdmires\n", "relation label"),
            ("John\tB-Peop\nran\tO\n0\t1\tKill\n", "entity span"),
            ("0\t0\tKill\nJohn\tB-Peop\n", "token line after relation"),
        ],
    )
    def test_malformed_records(self, tmp_path, content, phrase):
        path = tmp_path / "bad.txt"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(MalformedRecord) as exc:
            import_conll04(path)
        assert phrase in str(exc.value)


class TestConfigParsing:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_synthetic_config(tmp_path / "absent.cfg")

    def test_seed_override(self, fixtures_dir):
        config = parse_synthetic_config(fixtures_dir / "synthetic-default.cfg", seed=7)
        assert config.seed == 7

    def test_bad_weight(self, tmp_path):
        bad = tmp_path / "bad.cfg"
        bad.write_text("[targets]\nnodes=1\nrelationships=0\nproperties=2\n[labels]\nPerson = nope\n")
        with pytest.raises(ConfigError):
            parse_synthetic_config(bad)

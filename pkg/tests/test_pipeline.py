import copy
import json

import pytest

from askgraph.cypher import parse
from askgraph.cypher.executor import execute
from askgraph.errors import (
    BackendUnavailable,
    MalformedModelOutput,
    UngeneratableQuery,
)
from askgraph.linking import resolve_all
from askgraph.llm import MockLLM
from askgraph.pipeline import (
    PipelineConfig,
    answer_question,
    build_generation_prompt,
    extract_entities,
    extraction_messages,
    fallback_summary,
    generate_cypher,
    strip_code_fences,
    summarize_answer,
    summary_messages,
)

Q1 = "Which figures in the corpus are both persons and religious?"
Q2 = "Who interacted with Fray Bartolomé de Miranda?"
Q3 = "Show all interactions between Fray Bartolomé de Miranda and Pedro de Cazalla."


class TestExtractEntities:
    def test_fixture_question_yields_person(self, mock_backend):
        mentions = extract_entities(Q2, mock_backend)
        assert mentions.people == ["Fray Bartolomé de Miranda"]
        assert mentions.organisations == []

    def test_no_entities_is_fine(self):
        backend = MockLLM()
        backend.register(
            extraction_messages("Anything new?"),
            '{"people": [], "organisations": [], "locations": [], "paragraph_ids": []}',
        )
        mentions = extract_entities("Anything new?", backend)
        assert mentions.all_mentions() == []

    def test_prose_twice_is_malformed(self):
        backend = MockLLM()
        messages = extraction_messages("Who?")
        backend.register(messages, "I could not find any entities, sorry.")
        retry = messages + [
            ("assistant", "I could not find any entities, sorry."),
            (
                "user",
                "That was not parseable. Reply with the JSON object only, "
                'using exactly the keys "people", "organisations", "locations", '
                '"paragraph_ids".',
            ),
        ]
        backend.register(retry, "still just prose")
        with pytest.raises(MalformedModelOutput) as exc:
            extract_entities("Who?", backend)
        assert exc.value.stage == "extract_entities"

    def test_retry_succeeds_on_second_attempt(self):
        backend = MockLLM()
        messages = extraction_messages("Who?")
        backend.register(messages, "not json")
        retry = messages + [
            ("assistant", "not json"),
            (
                "user",
                "That was not parseable. Reply with the JSON object only, "
                'using exactly the keys "people", "organisations", "locations", '
                '"paragraph_ids".',
            ),
        ]
        backend.register(
            retry, '{"people": ["Ana"], "organisations": [], "locations": [], "paragraph_ids": []}'
        )
        assert extract_entities("Who?", backend).people == ["Ana"]

    def test_fences_and_noise_tolerated(self):
        backend = MockLLM()
        backend.register(
            extraction_messages("q"),
            '```json\n{"people": ["Ana", "Ana"], "organisations": [], '
            '"locations": [], "paragraph_ids": []}\n```',
        )
        mentions = extract_entities("q", backend)
        assert mentions.people == ["Ana"]  # deduplicated, order kept

    def test_backend_down_is_tagged(self):
        with pytest.raises(BackendUnavailable) as exc:
            extract_entities("Who?", MockLLM())
        assert exc.value.stage == "extract_entities"


class TestGenerationPrompt:
    def test_contains_schema_and_rules(self, usecase_graph, usecase_index):
        resolutions = resolve_all(["bartolome de miranda"], usecase_index)
        messages = build_generation_prompt(Q2, usecase_graph.schema(), resolutions)
        system = messages[0][1]
        assert "Person" in system and "Place" in system
        assert "Fray Bartolomé de Miranda" in system  # canonical name pass-through
        assert "both directions" in system
        assert "direct relationships" in system.lower()
        assert messages[-1] == ("user", Q2)

    def test_unresolved_mentions_verbatim(self, usecase_graph, usecase_index):
        resolutions = resolve_all(["Zzqx the Unknown"], usecase_index)
        system = build_generation_prompt("q", usecase_graph.schema(), resolutions)[0][1]
        assert 'user said "Zzqx the Unknown"' in system

    def test_empty_schema_allowed(self):
        from askgraph.graph import PropertyGraph

        schema = PropertyGraph().finalize().schema()
        system = build_generation_prompt("q", schema, {})[0][1]
        assert "empty" in system


class TestGenerateCypher:
    def test_happy_path(self, usecase_graph):
        backend = MockLLM()
        messages = [("system", "s"), ("user", "u")]
        backend.register(messages, "MATCH (p:Person) RETURN p.name")
        ast, text, diag = generate_cypher(messages, backend, usecase_graph.schema())
        assert text == "MATCH (p:Person)\nRETURN p.name"
        assert diag["repairs"] == 0

    def test_variable_length_repaired_once(self, usecase_graph):
        from askgraph.pipeline import load_template

        backend = MockLLM()
        messages = [("system", "s"), ("user", "u")]
        bad = "MATCH (a)-[*]->(b) RETURN a"
        backend.register(messages, bad)
        try:
            parse(bad)
        except Exception as exc:
            error_text = str(exc)
        repair = load_template("repair").format(
            error=error_text, grammar=load_template("grammar_summary")
        )
        backend.register(
            messages + [("assistant", bad), ("user", repair)],
            "MATCH (a)-[r]-(b) RETURN a",
        )
        ast, text, diag = generate_cypher(messages, backend, usecase_graph.schema())
        assert diag["repairs"] == 1
        assert "[*" not in text

    def test_prose_twice_ungeneratable(self, usecase_graph):
        backend = MockLLM()
        messages = [("system", "s"), ("user", "u")]
        backend.register(messages, "Sorry, I cannot write Cypher.")
        # register the repair round with another non-query
        from askgraph.pipeline import load_template

        try:
            parse("Sorry, I cannot write Cypher.")
        except Exception as exc:
            error_text = str(exc)
        repair = load_template("repair").format(
            error=error_text, grammar=load_template("grammar_summary")
        )
        backend.register(
            messages + [("assistant", "Sorry, I cannot write Cypher."), ("user", repair)],
            "Still no query.",
        )
        with pytest.raises(UngeneratableQuery) as exc:
            generate_cypher(messages, backend, usecase_graph.schema())
        assert exc.value.stage == "generate_cypher"

    def test_mutation_rejected_before_execution(self, usecase_graph):
        # queries whose first token is not MATCH never reach the executor
        backend = MockLLM()
        messages = [("system", "s"), ("user", "u")]
        backend.register(messages, "CREATE (a:Person {name: 'Mallory'}) RETURN a")
        from askgraph.pipeline import load_template
        from askgraph.errors import UnsupportedFeature

        try:
            parse("CREATE (a:Person {name: 'Mallory'}) RETURN a")
        except UnsupportedFeature as exc:
            error_text = str(exc)
        repair = load_template("repair").format(
            error=error_text, grammar=load_template("grammar_summary")
        )
        backend.register(
            messages + [("assistant", "CREATE (a:Person {name: 'Mallory'}) RETURN a"), ("user", repair)],
            "DELETE everything",
        )
        with pytest.raises(UngeneratableQuery):
            generate_cypher(messages, backend, usecase_graph.schema())

    def test_strip_code_fences(self):
        assert strip_code_fences("```cypher\nMATCH (a)\nRETURN a\n```") == "MATCH (a)\nRETURN a"
        assert strip_code_fences("MATCH (a) RETURN a") == "MATCH (a) RETURN a"


class TestSummarize:
    def test_zero_row_fallback_template(self, usecase_graph):
        result = execute(parse("MATCH (p:Person {name: 'Nobody'}) RETURN p"), usecase_graph)
        text = summarize_answer("q", result, MockLLM())
        assert text == "Query returned 0 rows / 0 nodes / 0 relationships"

    def test_canned_summary_verbatim(self, usecase_graph):
        result = execute(parse("MATCH (p:Person) RETURN p.name"), usecase_graph)
        backend = MockLLM()
        backend.register(summary_messages("q", result, 100), "Seven people appear.")
        assert summarize_answer("q", result, backend) == "Seven people appear."

    def test_truncation_budget(self):
        from askgraph.graph import PropertyGraph

        g = PropertyGraph()
        for i in range(150):
            g.add_entity(f"E{i:03d}", ["Person"], node_id=f"n{i:03d}")
        g.finalize()
        result = execute(parse("MATCH (p) RETURN p.name"), g)
        assert len(result.rows) == 150
        messages = summary_messages("q", result, 100)
        body = messages[0][1]
        assert "truncated to the first 100 of 150 rows" in body
        assert body.count("E0") + body.count("E1") >= 100  # sanity: rows serialized
        assert "E149" not in body  # beyond the budget

    def test_fallback_matches_result_shape(self, usecase_graph):
        result = execute(parse("MATCH (p:Person) RETURN p"), usecase_graph)
        assert fallback_summary(result) == (
            f"Query returned {len(result.rows)} rows / "
            f"{len(result.subgraph.nodes)} nodes / "
            f"{len(result.subgraph.relationships)} relationships"
        )


class TestAnswerQuestion:
    def test_scenario_one_labels(self, usecase_graph, usecase_index, mock_backend):
        response = answer_question(Q1, usecase_graph, usecase_index, mock_backend)
        assert response.result.rows
        for node in response.result.subgraph.nodes:
            assert {"Person", "Religious"} <= set(node.labels)

    def test_scenario_three_endpoints(self, usecase_graph, usecase_index, mock_backend):
        response = answer_question(Q3, usecase_graph, usecase_index, mock_backend)
        ids = {"n1", "n2"}
        for rel in response.result.subgraph.relationships:
            assert {rel.source, rel.target} == ids

    def test_stage_order_recorded(self, usecase_graph, usecase_index, mock_backend):
        response = answer_question(Q1, usecase_graph, usecase_index, mock_backend)
        assert [s["stage"] for s in response.diagnostics["stages"]] == [
            "extract_entities",
            "resolve_entities",
            "build_generation_prompt",
            "generate_cypher",
            "execute",
            "summarize_answer",
        ]
        assert all(s["outcome"] == "ok" for s in response.diagnostics["stages"])

    def test_backend_down_tagged_extract(self, usecase_graph, usecase_index):
        with pytest.raises(BackendUnavailable) as exc:
            answer_question("Who?", usecase_graph, usecase_index, MockLLM())
        assert exc.value.stage == "extract_entities"

    def test_empty_question_rejected(self, usecase_graph, usecase_index, mock_backend):
        with pytest.raises(ValueError):
            answer_question("   ", usecase_graph, usecase_index, mock_backend)

    def _canonical(self, response):
        diagnostics = copy.deepcopy(response.diagnostics)
        diagnostics.pop("timings", None)
        return json.dumps(
            {
                "question": response.question,
                "cypher": response.generated_cypher,
                "rows": [[repr(v) for v in row] for row in response.result.rows],
                "answer": response.answer_text,
                "diagnostics": diagnostics,
            },
            ensure_ascii=False,
            sort_keys=True,
        )

    def test_deterministic_under_mock(self, usecase_graph, usecase_index, mock_backend):
        first = answer_question(Q2, usecase_graph, usecase_index, mock_backend)
        second = answer_question(Q2, usecase_graph, usecase_index, mock_backend)
        assert self._canonical(first) == self._canonical(second)

    def test_generated_cypher_never_variable_length(
        self, usecase_graph, usecase_index, mock_backend
    ):
        for question in (Q1, Q2, Q3):
            response = answer_question(question, usecase_graph, usecase_index, mock_backend)
            # reparsing canonically proves the subset held (parse rejects [*])
            parse(response.generated_cypher)
            assert "[*" not in response.generated_cypher

    def test_resolved_names_in_prompt(self, usecase_graph, usecase_index, mock_backend):
        response = answer_question(Q3, usecase_graph, usecase_index, mock_backend)
        resolved = [
            r["canonical_name"]
            for r in response.diagnostics["entity_resolutions"]
            if r["canonical_name"]
        ]
        assert resolved
        prompt_calls = [
            call for call in mock_backend.calls if "database name" in call[0][1]
        ]
        assert prompt_calls
        system_text = prompt_calls[-1][0][1]
        for name in resolved:
            assert name in system_text

/** DOM wiring: question form, mode switch, answer box, cypher panel,
 * graph canvas, and the contextual detail panel with provenance
 * trace-back. All server traffic goes through the injected ApiClient.
 */

import { ApiClient, ApiError } from "./api.js";
import { GraphView } from "./graphview.js";
import { Store } from "./state.js";
import type {
  ProvenanceData,
  QueryData,
  RowValue,
  Scalar,
  WireNode,
  WireRelationship,
} from "./types.js";

export interface AppHandles {
  store: Store;
  view: GraphView;
  submitQuestion: (text: string) => Promise<void>;
  submitExpertQuery: (text: string) => Promise<void>;
  showDetails: (elementId: string | null) => void;
  expandProvenance: (elementId: string) => Promise<void>;
}

function el<T extends HTMLElement>(root: Document, id: string): T {
  const found = root.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found as T;
}

export function formatRowValue(value: RowValue): string {
  if (value === null) {
    return "null";
  }
  if (typeof value === "object") {
    if ("node" in value) {
      return value.name;
    }
    return value.type;
  }
  return String(value);
}

function metadataList(root: Document, metadata: Record<string, Scalar>): HTMLElement {
  const dl = root.createElement("dl");
  dl.className = "metadata";
  for (const [key, value] of Object.entries(metadata)) {
    const dt = root.createElement("dt");
    dt.textContent = key;
    const dd = root.createElement("dd");
    dd.textContent = String(value);
    dl.append(dt, dd);
  }
  return dl;
}

export function initApp(root: Document, api: ApiClient): AppHandles {
  const store = new Store();
  const questionInput = el<HTMLInputElement>(root, "question-input");
  const questionForm = el<HTMLFormElement>(root, "question-form");
  const askButton = el<HTMLButtonElement>(root, "ask-button");
  const modeBasic = el<HTMLButtonElement>(root, "mode-basic");
  const modeExpert = el<HTMLButtonElement>(root, "mode-expert");
  const askPanel = el<HTMLElement>(root, "ask-panel");
  const expertPanel = el<HTMLElement>(root, "expert-panel");
  const expertEditor = el<HTMLTextAreaElement>(root, "expert-editor");
  const runQuery = el<HTMLButtonElement>(root, "run-query");
  const answerBox = el<HTMLElement>(root, "answer-box");
  const errorBanner = el<HTMLElement>(root, "error-banner");
  const truncationBanner = el<HTMLElement>(root, "truncation-banner");
  const notice = el<HTMLElement>(root, "notice");
  const cypherPanel = el<HTMLElement>(root, "cypher-panel");
  const cypherText = el<HTMLElement>(root, "cypher-text");
  const toggleCypher = el<HTMLButtonElement>(root, "toggle-cypher");
  const copyToExpert = el<HTMLButtonElement>(root, "copy-to-expert");
  const detailPanel = el<HTMLElement>(root, "detail-panel");
  const resultsPanel = el<HTMLElement>(root, "results-panel");
  const resultsTable = el<HTMLTableElement>(root, "results-table");
  const svg = root.getElementById("graph") as unknown as SVGSVGElement;

  const view = new GraphView(svg, {
    onSelect: (elementId) => {
      store.select(elementId);
      showDetails(store.current.selection);
    },
    onNodeMoved: (nodeId, point) => store.moveNode(nodeId, point),
    onOversized: (shown, total) => {
      truncationBanner.hidden = false;
      truncationBanner.textContent = `Large result: showing ${shown} of ${total} nodes.`;
    },
  });

  function renderState(): void {
    const state = store.current;
    askButton.disabled = state.pending;
    runQuery.disabled = state.pending;
    askPanel.hidden = state.mode !== "basic";
    expertPanel.hidden = state.mode !== "expert";
    modeBasic.classList.toggle("active", state.mode === "basic");
    modeExpert.classList.toggle("active", state.mode === "expert");

    errorBanner.hidden = state.lastError === null;
    if (state.lastError) {
      const stage = state.lastError.stage ? ` (stage: ${state.lastError.stage})` : "";
      errorBanner.textContent = `${state.lastError.code}: ${state.lastError.message}${stage}`;
    }

    const response = state.lastResponse;
    answerBox.hidden = !response?.answer;
    if (response?.answer) {
      answerBox.textContent = response.answer;
    }
    cypherPanel.hidden = !state.cypherPanelVisible || !response;
    toggleCypher.textContent = state.cypherPanelVisible ? "Hide query" : "Show query";
    if (response) {
      cypherText.textContent = response.cypher;
    }

    if (!response) {
      notice.hidden = true;
      resultsPanel.hidden = true;
      return;
    }
    renderResultsTable(response);
    const empty = response.subgraph.nodes.length === 0;
    notice.hidden = !empty;
    if (empty) {
      notice.textContent = "No results.";
      view.clear();
    } else {
      if (!response.subgraph.truncated) {
        truncationBanner.hidden = true;
      } else {
        truncationBanner.hidden = false;
        truncationBanner.textContent = "Result truncated by the server's subgraph cap.";
      }
      view.render(response.subgraph, state.positions, state.selection);
    }
  }

  function renderResultsTable(response: QueryData): void {
    resultsTable.textContent = "";
    resultsPanel.hidden = response.rows.length === 0;
    if (response.rows.length === 0) {
      return;
    }
    const head = root.createElement("tr");
    for (const column of response.columns) {
      const th = root.createElement("th");
      th.textContent = column;
      head.appendChild(th);
    }
    resultsTable.appendChild(head);
    for (const row of response.rows) {
      const tr = root.createElement("tr");
      for (const value of row) {
        const td = root.createElement("td");
        td.textContent = formatRowValue(value);
        tr.appendChild(td);
      }
      resultsTable.appendChild(tr);
    }
  }

  store.subscribe(renderState);

  function findNode(id: string): WireNode | undefined {
    return store.current.lastResponse?.subgraph.nodes.find((n) => n.id === id);
  }

  function findRelationship(id: string): WireRelationship | undefined {
    return store.current.lastResponse?.subgraph.relationships.find((r) => r.id === id);
  }

  function showDetails(elementId: string | null): void {
    detailPanel.textContent = "";
    if (elementId === null) {
      detailPanel.hidden = true;
      return;
    }
    detailPanel.hidden = false;
    const node = findNode(elementId);
    if (node) {
      const title = root.createElement("h3");
      title.textContent = node.name;
      const labels = root.createElement("p");
      labels.className = "labels";
      labels.textContent = node.labels.join(", ");
      detailPanel.append(title, labels, metadataList(root, node.properties));
      return;
    }
    const rel = findRelationship(elementId);
    if (!rel) {
      return;
    }
    const title = root.createElement("h3");
    title.textContent = rel.type;
    const category = root.createElement("p");
    category.className = "category";
    category.textContent = rel.category ? `category: ${rel.category}` : "";
    const sentence = root.createElement("blockquote");
    sentence.className = "sentence";
    sentence.textContent = rel.sentence;
    const expand = root.createElement("button");
    expand.id = "expand-provenance";
    expand.textContent = "Trace source paragraph";
    expand.addEventListener("click", () => {
      void expandProvenance(rel.id);
    });
    detailPanel.append(title, category, sentence, expand);
  }

  async function expandProvenance(elementId: string): Promise<void> {
    const holder = root.createElement("div");
    holder.className = "provenance";
    const existing = detailPanel.querySelector(".provenance");
    existing?.remove();
    detailPanel.append(holder);
    try {
      const data: ProvenanceData = await api.provenance(elementId);
      const paragraph = data.paragraph ?? data.source_paragraph;
      if (!paragraph) {
        holder.textContent = "source unavailable";
        return;
      }
      const text = root.createElement("p");
      text.className = "paragraph-text";
      text.textContent = paragraph.text;
      holder.append(text, metadataList(root, paragraph.metadata));
    } catch (error) {
      // keep the panel; surface the failure inline
      holder.textContent = "source unavailable";
      if (error instanceof ApiError && error.status !== 404) {
        holder.textContent = `source unavailable (${error.code})`;
      }
    }
  }

  async function runRequest(call: () => Promise<QueryData>): Promise<void> {
    if (!store.beginQuery()) {
      return;
    }
    try {
      store.setResponse(await call());
    } catch (error) {
      if (error instanceof ApiError) {
        store.setError({ code: error.code, message: error.message, stage: error.stage });
      } else {
        store.setError({ code: "NetworkError", message: String(error) });
      }
    }
    showDetails(store.current.selection);
  }

  async function submitQuestion(text: string): Promise<void> {
    if (!text.trim()) {
      return;
    }
    store.setQuestion(text);
    await runRequest(() => api.nlQuery(text));
  }

  async function submitExpertQuery(text: string): Promise<void> {
    if (!text.trim()) {
      return;
    }
    await runRequest(() => api.cypherQuery(text));
  }

  questionForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitQuestion(questionInput.value);
  });
  runQuery.addEventListener("click", () => {
    void submitExpertQuery(expertEditor.value);
  });
  expertEditor.addEventListener("input", () => {
    store.setExpertDraft(expertEditor.value);
  });
  modeBasic.addEventListener("click", () => store.setMode("basic"));
  modeExpert.addEventListener("click", () => store.setMode("expert"));
  toggleCypher.addEventListener("click", () => store.toggleCypherPanel());
  copyToExpert.addEventListener("click", () => {
    if (store.copyCypherToEditor()) {
      expertEditor.value = store.current.expertDraft;
    }
  });

  renderState();
  return { store, view, submitQuestion, submitExpertQuery, showDetails, expandProvenance };
}

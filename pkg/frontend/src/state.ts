/** View state and its transition rules.
 *
 * Invariants enforced here rather than in the DOM layer:
 * - the selection, when set, references an element of the current subgraph;
 * - the expert editor content is never overwritten without a user action
 *   (typing or the explicit copy-to-editor command);
 * - switching modes never discards the last response;
 * - a single query is in flight at a time.
 */

import { computeLayout, type Point } from "./layout.js";
import type { QueryData, WireError } from "./types.js";

export type Mode = "basic" | "expert";

export interface ViewState {
  question: string;
  mode: Mode;
  pending: boolean;
  lastResponse: QueryData | null;
  positions: Map<string, Point>;
  selection: string | null;
  cypherPanelVisible: boolean;
  expertDraft: string;
  lastError: WireError | null;
}

export const LAYOUT_SEED = 1905;

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    question: "",
    mode: "basic",
    pending: false,
    lastResponse: null,
    positions: new Map(),
    selection: null,
    cypherPanelVisible: false,
    expertDraft: "",
    lastError: null,
  };
  private listeners: Listener[] = [];

  constructor(
    private readonly layoutSize: { width: number; height: number } = { width: 900, height: 600 },
  ) {}

  get current(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  setQuestion(question: string): void {
    this.state = { ...this.state, question };
    this.emit();
  }

  /** Returns false when a query is already pending (submission refused). */
  beginQuery(): boolean {
    if (this.state.pending) {
      return false;
    }
    this.state = { ...this.state, pending: true, lastError: null };
    this.emit();
    return true;
  }

  setResponse(data: QueryData): void {
    const nodeIds = data.subgraph.nodes.map((n) => n.id);
    const edges = data.subgraph.relationships.map(
      (r) => [r.source, r.target] as [string, string],
    );
    const positions = computeLayout(nodeIds, edges, {
      width: this.layoutSize.width,
      height: this.layoutSize.height,
      seed: LAYOUT_SEED,
    });
    const stillPresent =
      this.state.selection !== null &&
      (nodeIds.includes(this.state.selection) ||
        data.subgraph.relationships.some((r) => r.id === this.state.selection));
    this.state = {
      ...this.state,
      pending: false,
      lastResponse: data,
      positions,
      selection: stillPresent ? this.state.selection : null,
      lastError: null,
    };
    this.emit();
  }

  setError(error: WireError): void {
    // the previous response stays on screen; only the banner changes
    this.state = { ...this.state, pending: false, lastError: error };
    this.emit();
  }

  select(elementId: string | null): void {
    if (elementId !== null) {
      const subgraph = this.state.lastResponse?.subgraph;
      const known =
        subgraph !== undefined &&
        (subgraph.nodes.some((n) => n.id === elementId) ||
          subgraph.relationships.some((r) => r.id === elementId));
      if (!known) {
        return;
      }
    }
    this.state = { ...this.state, selection: elementId };
    this.emit();
  }

  setMode(mode: Mode): void {
    if (mode === this.state.mode) {
      return;
    }
    this.state = { ...this.state, mode };
    this.emit();
  }

  toggleCypherPanel(): void {
    this.state = { ...this.state, cypherPanelVisible: !this.state.cypherPanelVisible };
    this.emit();
  }

  /** User typed in the expert editor. */
  setExpertDraft(text: string): void {
    this.state = { ...this.state, expertDraft: text };
    this.emit();
  }

  /** Explicit user action: copy the generated query into the editor. */
  copyCypherToEditor(): boolean {
    const cypher = this.state.lastResponse?.cypher;
    if (!cypher) {
      return false;
    }
    this.state = { ...this.state, expertDraft: cypher, mode: "expert" };
    this.emit();
    return true;
  }

  moveNode(nodeId: string, point: Point): void {
    this.state.positions.set(nodeId, point);
  }
}

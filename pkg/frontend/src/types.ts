/** Wire types mirroring the service's JSON envelope and payloads. */

export type Scalar = string | number | boolean;

export interface WireNode {
  id: string;
  kind: "entity" | "paragraph";
  labels: string[];
  name: string;
  properties: Record<string, Scalar>;
}

export interface WireRelationship {
  id: string;
  type: string;
  category: string;
  source: string;
  target: string;
  sentence: string;
  paragraph_id: string | null;
  properties: Record<string, Scalar>;
}

export interface Subgraph {
  nodes: WireNode[];
  relationships: WireRelationship[];
  truncated: boolean;
}

export type RowValue =
  | Scalar
  | null
  | { node: string; name: string; labels: string[] }
  | { relationship: string; type: string };

export interface QueryData {
  cypher: string;
  columns: string[];
  rows: RowValue[][];
  subgraph: Subgraph;
  question?: string;
  answer?: string | null;
  warnings?: string[];
  diagnostics?: unknown;
}

export interface Paragraph {
  id: string;
  text: string;
  metadata: Record<string, Scalar>;
}

export interface ProvenanceData {
  element: "relationship" | "node" | "paragraph";
  sentence?: string;
  paragraph?: Paragraph | null;
  source_paragraph?: Paragraph | null;
}

export interface WireError {
  code: string;
  message: string;
  stage?: string;
  line?: number;
  column?: number;
}

export interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: WireError;
}

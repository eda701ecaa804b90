/** SVG subgraph renderer: force-layouted nodes coloured by first label,
 * labelled edges, zoom/pan on the canvas, node dragging, and click
 * selection for both nodes and relationships. Oversized payloads render
 * a capped subset plus a warning instead of freezing the tab.
 */

import type { Point } from "./layout.js";
import type { Subgraph, WireNode, WireRelationship } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_RADIUS = 14;
export const RENDER_NODE_CAP = 400;

const PALETTE = [
  "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
];

export function colorForLabel(label: string): string {
  let hash = 0;
  for (let i = 0; i < label.length; i++) {
    hash = (hash * 31 + label.charCodeAt(i)) >>> 0;
  }
  return PALETTE[hash % PALETTE.length];
}

export interface GraphViewCallbacks {
  onSelect?: (elementId: string | null) => void;
  onNodeMoved?: (nodeId: string, point: Point) => void;
  onOversized?: (shown: number, total: number) => void;
}

interface ViewTransform {
  scale: number;
  tx: number;
  ty: number;
}

export class GraphView {
  private readonly root: SVGGElement;
  private transform: ViewTransform = { scale: 1, tx: 0, ty: 0 };
  private positions = new Map<string, Point>();
  private subgraph: Subgraph | null = null;
  private selection: string | null = null;
  private dragNode: string | null = null;
  private panning = false;
  private lastPointer: Point = { x: 0, y: 0 };

  constructor(
    private readonly svg: SVGSVGElement,
    private readonly callbacks: GraphViewCallbacks = {},
  ) {
    this.root = document.createElementNS(SVG_NS, "g");
    this.root.setAttribute("data-role", "viewport");
    this.svg.appendChild(this.root);
    this.bindNavigation();
  }

  render(subgraph: Subgraph, positions: Map<string, Point>, selection: string | null): void {
    this.subgraph = subgraph;
    this.positions = positions;
    this.selection = selection;
    this.root.textContent = "";

    let nodes = subgraph.nodes;
    let relationships = subgraph.relationships;
    if (nodes.length > RENDER_NODE_CAP) {
      const kept = new Set(nodes.slice(0, RENDER_NODE_CAP).map((n) => n.id));
      nodes = nodes.slice(0, RENDER_NODE_CAP);
      relationships = relationships.filter((r) => kept.has(r.source) && kept.has(r.target));
      this.callbacks.onOversized?.(RENDER_NODE_CAP, subgraph.nodes.length);
    }

    for (const rel of relationships) {
      this.root.appendChild(this.renderEdge(rel));
    }
    for (const node of nodes) {
      this.root.appendChild(this.renderNode(node));
    }
    this.applyTransform();
  }

  clear(): void {
    this.subgraph = null;
    this.root.textContent = "";
  }

  private point(id: string): Point {
    return this.positions.get(id) ?? { x: 0, y: 0 };
  }

  private renderEdge(rel: WireRelationship): SVGGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("edge");
    group.setAttribute("data-id", rel.id);
    group.setAttribute("data-type", rel.type);
    if (rel.id === this.selection) {
      group.classList.add("selected");
    }
    const from = this.point(rel.source);
    const to = this.point(rel.target);

    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.classList.add("edge-line");
    group.appendChild(line);

    // wide invisible twin line keeps thin edges clickable
    const hit = document.createElementNS(SVG_NS, "line");
    hit.setAttribute("x1", String(from.x));
    hit.setAttribute("y1", String(from.y));
    hit.setAttribute("x2", String(to.x));
    hit.setAttribute("y2", String(to.y));
    hit.classList.add("edge-hit");
    group.appendChild(hit);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String((from.x + to.x) / 2));
    label.setAttribute("y", String((from.y + to.y) / 2 - 4));
    label.classList.add("edge-label");
    label.textContent = rel.type;
    group.appendChild(label);

    group.addEventListener("click", (event) => {
      event.stopPropagation();
      this.callbacks.onSelect?.(rel.id);
    });
    return group;
  }

  private renderNode(node: WireNode): SVGGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("node");
    group.setAttribute("data-id", node.id);
    group.setAttribute("data-label", node.labels[0] ?? "");
    if (node.id === this.selection) {
      group.classList.add("selected");
    }
    const at = this.point(node.id);

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(at.x));
    circle.setAttribute("cy", String(at.y));
    circle.setAttribute("r", String(NODE_RADIUS));
    circle.setAttribute("fill", colorForLabel(node.labels[0] ?? ""));
    group.appendChild(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(at.x));
    label.setAttribute("y", String(at.y + NODE_RADIUS + 12));
    label.classList.add("node-label");
    label.textContent = shorten(node.name, 28);
    group.appendChild(label);

    group.addEventListener("click", (event) => {
      event.stopPropagation();
      this.callbacks.onSelect?.(node.id);
    });
    group.addEventListener("mousedown", (event) => {
      event.stopPropagation();
      this.dragNode = node.id;
      this.lastPointer = { x: event.clientX, y: event.clientY };
    });
    return group;
  }

  private bindNavigation(): void {
    this.svg.addEventListener("click", () => this.callbacks.onSelect?.(null));
    this.svg.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      const next = Math.min(6, Math.max(0.15, this.transform.scale * factor));
      this.transform = { ...this.transform, scale: next };
      this.applyTransform();
    });
    this.svg.addEventListener("mousedown", (event) => {
      this.panning = true;
      this.lastPointer = { x: event.clientX, y: event.clientY };
    });
    this.svg.addEventListener("mousemove", (event) => {
      const dx = event.clientX - this.lastPointer.x;
      const dy = event.clientY - this.lastPointer.y;
      if (this.dragNode !== null) {
        const at = this.point(this.dragNode);
        const moved = {
          x: at.x + dx / this.transform.scale,
          y: at.y + dy / this.transform.scale,
        };
        this.positions.set(this.dragNode, moved);
        this.lastPointer = { x: event.clientX, y: event.clientY };
        this.callbacks.onNodeMoved?.(this.dragNode, moved);
        if (this.subgraph) {
          this.render(this.subgraph, this.positions, this.selection);
        }
        return;
      }
      if (this.panning) {
        this.transform = {
          ...this.transform,
          tx: this.transform.tx + dx,
          ty: this.transform.ty + dy,
        };
        this.lastPointer = { x: event.clientX, y: event.clientY };
        this.applyTransform();
      }
    });
    const stop = () => {
      this.panning = false;
      this.dragNode = null;
    };
    this.svg.addEventListener("mouseup", stop);
    this.svg.addEventListener("mouseleave", stop);
  }

  private applyTransform(): void {
    const { scale, tx, ty } = this.transform;
    this.root.setAttribute("transform", `translate(${tx} ${ty}) scale(${scale})`);
  }

  get scale(): number {
    return this.transform.scale;
  }
}

function shorten(text: string, limit: number): string {
  return text.length <= limit ? text : text.slice(0, limit - 1) + "…";
}

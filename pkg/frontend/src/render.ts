/** SVG renderer for a GraphScene plus the detail panels.
 *
 * Thin DOM layer over the pure scene: positions come from the layout, every
 * label from the payloads. Click handlers surface CVE records and device
 * vulnerability lists.
 */

import type { GraphScene, SceneEdge } from './scene.js';
import type { ClassifiedVulnDoc, EnrichedDoc } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export interface RenderCallbacks {
  onNodeClick?: (nodeId: string) => void;
  onEdgeClick?: (edge: SceneEdge) => void;
  onLinkToggle?: (from: string, to: string) => void;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  return el;
}

export function renderScene(container: HTMLElement, scene: GraphScene, callbacks: RenderCallbacks = {}): void {
  container.replaceChildren();

  if (scene.emptyBanner) {
    const banner = document.createElement('div');
    banner.className = 'banner';
    banner.textContent = scene.emptyBanner;
    container.appendChild(banner);
  }

  const svg = svgElement('svg', {
    viewBox: `0 0 ${scene.layout.width} ${scene.layout.height}`,
    class: 'graph-canvas',
  });

  for (const box of scene.layout.zoneBoxes) {
    const cluster = scene.clusters.find((c) => c.zoneId === box.zoneId);
    const group = svgElement('g', { class: 'zone-cluster', 'data-zone': box.zoneId });
    group.appendChild(
      svgElement('rect', { x: box.x, y: box.y, width: box.width, height: box.height, rx: 10, class: 'zone-box' }),
    );
    const label = svgElement('text', { x: box.x + 8, y: box.y + 16, class: 'zone-label' });
    label.textContent = cluster?.zoneName ?? box.zoneId;
    group.appendChild(label);
    svg.appendChild(group);
  }

  for (const edge of scene.edges) {
    const a = scene.layout.positions[edge.from];
    const b = scene.layout.positions[edge.to];
    const group = svgElement('g', { class: edge.dashed ? 'exploit-edge dashed' : 'exploit-edge' });
    let labelX: number;
    let labelY: number;
    if (edge.selfLoop) {
      const path = svgElement('path', {
        d: `M ${a.x + 14} ${a.y - 8} C ${a.x + 70} ${a.y - 52}, ${a.x + 70} ${a.y + 36}, ${a.x + 14} ${a.y + 8}`,
        class: 'edge-path self-loop',
      });
      group.appendChild(path);
      labelX = a.x + 74;
      labelY = a.y - 6;
    } else {
      group.appendChild(
        svgElement('line', { x1: a.x, y1: a.y, x2: b.x, y2: b.y, class: 'edge-path', 'marker-end': 'url(#arrow)' }),
      );
      labelX = (a.x + b.x) / 2;
      labelY = (a.y + b.y) / 2 - 6;
    }
    const text = svgElement('text', { x: labelX, y: labelY, class: 'edge-label' });
    text.textContent = edge.label;
    group.appendChild(text);
    group.addEventListener('click', () => callbacks.onEdgeClick?.(edge));
    svg.appendChild(group);
  }

  const defs = svgElement('defs', {});
  const marker = svgElement('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: 22,
    refY: 5,
    markerWidth: 7,
    markerHeight: 7,
    orient: 'auto-start-reverse',
  });
  marker.appendChild(svgElement('path', { d: 'M 0 0 L 10 5 L 0 10 z', class: 'arrow-head' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  for (const node of scene.nodes) {
    const p = scene.layout.positions[node.id];
    const group = svgElement('g', { class: node.isStart ? 'device start' : 'device', 'data-node': node.id });
    group.appendChild(svgElement('rect', { x: p.x - 58, y: p.y - 14, width: 116, height: 28, rx: 5, class: 'device-box' }));
    const label = svgElement('text', { x: p.x, y: p.y + 4, 'text-anchor': 'middle', class: 'device-label' });
    label.textContent = node.id;
    group.appendChild(label);
    if (node.bestPrivilege) {
      const priv = svgElement('text', { x: p.x, y: p.y + 26, 'text-anchor': 'middle', class: 'privilege-tag' });
      priv.textContent = node.bestPrivilege;
      group.appendChild(priv);
    }
    group.addEventListener('click', () => callbacks.onNodeClick?.(node.id));
    svg.appendChild(group);
  }

  container.appendChild(svg);
}

export function renderErrorPanel(container: HTMLElement, title: string, detail: string): void {
  container.replaceChildren();
  const panel = document.createElement('div');
  panel.className = 'error-panel';
  const heading = document.createElement('h3');
  heading.textContent = title;
  const body = document.createElement('pre');
  body.textContent = detail;
  panel.append(heading, body);
  container.appendChild(panel);
}

export function renderVulnList(
  container: HTMLElement,
  nodeId: string,
  vulns: ClassifiedVulnDoc[],
  onPatchToggle?: (cveId: string, checked: boolean) => void,
  patched?: (cveId: string) => boolean,
): void {
  container.replaceChildren();
  const heading = document.createElement('h3');
  heading.textContent = nodeId;
  container.appendChild(heading);
  if (vulns.length === 0) {
    const none = document.createElement('p');
    none.textContent = 'no known vulnerabilities';
    container.appendChild(none);
    return;
  }
  const list = document.createElement('ul');
  list.className = 'vuln-list';
  for (const vuln of vulns) {
    const item = document.createElement('li');
    const checkbox = document.createElement('input');
    checkbox.type = 'checkbox';
    checkbox.checked = patched?.(vuln.cve_id) ?? false;
    checkbox.addEventListener('change', () => onPatchToggle?.(vuln.cve_id, checkbox.checked));
    const text = document.createElement('span');
    text.textContent = ` ${vuln.cve_id}: ${vuln.precondition} → ${vuln.consequence} (${vuln.rule_id})`;
    item.append(checkbox, text);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderEdgeDetail(container: HTMLElement, edge: SceneEdge, enriched: EnrichedDoc): void {
  container.replaceChildren();
  const heading = document.createElement('h3');
  heading.textContent = edge.label;
  container.appendChild(heading);
  const record = (enriched.vulns[edge.to] ?? []).find((v) => v.cve_id === edge.cveId);
  if (!record) return;
  const dl = document.createElement('dl');
  const rows: [string, string][] = [
    ['vector', record.cvss_vector ?? 'absent'],
    ['precondition', record.precondition],
    ['consequence', record.consequence],
    ['rule', record.rule_id],
    ['advisory', record.source_advisory],
    ['description', record.description],
  ];
  for (const [term, detail] of rows) {
    const dt = document.createElement('dt');
    dt.textContent = term;
    const dd = document.createElement('dd');
    dd.textContent = detail;
    dl.append(dt, dd);
  }
  container.appendChild(dl);
}

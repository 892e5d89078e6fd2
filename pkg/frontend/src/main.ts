/**
 * DOM wiring. All data flows through ApiClient; view models come from the
 * pure modules (state/charts/graphview), so this file is only plumbing.
 */

import { ApiClient } from "./api.js";
import type { ClusterSummary, ComponentKind, ComponentProfile, GraphType, Sentiment, TweetResult } from "./api.js";
import { GRAPH_TYPES } from "./api.js";
import { curveChart, renderCurveSvg, renderTimelineSvg, renderVolumeSvg, timelineChart, volumeChart } from "./charts.js";
import { badgeClass, SERIES_COLORS } from "./colors.js";
import { componentView, profileTable, renderComponentSvg } from "./graphview.js";
import type { QueryState, ViewSelection } from "./state.js";
import {
  appendKeyword,
  initialQueryState,
  initialViewSelection,
  selectComponent,
  selectGraph,
  selectTimelineCluster,
  selectView,
  setClusterFilter,
  setQuery,
  submitQuery,
} from "./state.js";

// API base URL: ?api=<url> query parameter, else a global injected by the
// hosting page, else same-origin
const apiBase =
  new URLSearchParams(window.location.search).get("api") ??
  (window as { TWEETSCOPE_API_BASE?: string }).TWEETSCOPE_API_BASE ??
  "";
const api = new ApiClient(apiBase);

let queryState: QueryState = initialQueryState();
let viewSel: ViewSelection = initialViewSelection();
let clusters: ClusterSummary[] = [];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

// --- search panel ----------------------------------------------------------

function renderResults() {
  const box = el<HTMLDivElement>("results");
  if (queryState.error) {
    el<HTMLDivElement>("error-banner").textContent = `search failed: ${queryState.error}`;
    el<HTMLDivElement>("error-banner").hidden = false;
  } else {
    el<HTMLDivElement>("error-banner").hidden = true;
  }
  if (queryState.empty) {
    box.innerHTML = `<p class="empty">no matching tweets</p>`;
    return;
  }
  box.innerHTML = queryState.results
    .map((r: TweetResult) => {
      const sim = r.similarity === undefined ? "" : ` <span class="sim">${r.similarity.toFixed(3)}</span>`;
      const cluster = r.cluster_id === null ? "" : `<span class="chip cluster-chip">cluster ${r.cluster_id}</span>`;
      return (
        `<div class="result">` +
        `<span class="${badgeClass(r.sentiment)}">${r.sentiment ?? "?"}</span>` +
        `${cluster}${sim}` +
        `<p>${escapeHtml(r.full_text)}</p>` +
        `</div>`
      );
    })
    .join("");
  el<HTMLOListElement>("history").innerHTML = queryState.history
    .map((q) => `<li>${escapeHtml(q)}</li>`)
    .join("");
}

async function onSubmit() {
  queryState = setQuery(queryState, el<HTMLInputElement>("query").value);
  const filter = el<HTMLSelectElement>("cluster-filter").value;
  queryState = setClusterFilter(queryState, filter === "" ? null : Number(filter));
  queryState = await submitQuery(queryState, api);
  el<HTMLInputElement>("query").value = queryState.query;
  renderResults();
}

function onChipClick(term: string) {
  queryState = appendKeyword(queryState, term);
  el<HTMLInputElement>("query").value = queryState.query;
  el<HTMLInputElement>("query").focus();
}

// --- views ------------------------------------------------------------------

async function renderVolume() {
  const payload = await api.volume();
  const chart = volumeChart(payload);
  el<HTMLDivElement>("view-body").innerHTML =
    `<h3>tweet volume (${payload.total} tweets, ${payload.bin_width_ms / 3_600_000}h bins)</h3>` +
    renderVolumeSvg(chart);
}

function keywordChips(terms: string[]): string {
  return terms.map((t) => `<button class="chip kw" data-term="${escapeHtml(t)}">${escapeHtml(t)}</button>`).join(" ");
}

async function renderClusters() {
  const body = el<HTMLDivElement>("view-body");
  const rows = await Promise.all(
    clusters.map(async (c) => {
      const kw = await api.clusterKeywords(c.id);
      return (
        `<tr><td>${c.id}</td><td>${c.size}</td><td>${c.mean_sentiment.toFixed(3)}</td>` +
        `<td>${keywordChips(kw.report.ranked_terms.map((r) => r.term))}</td></tr>`
      );
    }),
  );
  body.innerHTML =
    `<h3>clusters</h3><table class="grid"><thead><tr><th>id</th><th>size</th><th>mean sentiment</th><th>top keywords (click to add to query)</th></tr></thead><tbody>` +
    rows.join("") +
    `</tbody></table>`;
  body.querySelectorAll<HTMLButtonElement>("button.kw").forEach((b) => {
    b.addEventListener("click", () => onChipClick(b.dataset.term ?? ""));
  });
}

async function renderTimelines() {
  const body = el<HTMLDivElement>("view-body");
  const options = [`<option value="">overall</option>`]
    .concat(clusters.map((c) => `<option value="${c.id}">cluster ${c.id}</option>`))
    .join("");
  const legend =
    `<span class="legend"><i style="background:${SERIES_COLORS.positive}"></i>positive ratio</span>` +
    `<span class="legend"><i style="background:${SERIES_COLORS.negative}"></i>negative ratio</span>` +
    `<span class="legend"><i style="background:${SERIES_COLORS.neutral}"></i>neutral ratio</span>` +
    `<span class="legend"><i style="background:${SERIES_COLORS.average}"></i>average sentiment</span>`;
  body.innerHTML =
    `<h3>sentiment timelines</h3>` +
    `<label>scope <select id="timeline-scope">${options}</select></label> ${legend}` +
    `<div id="timeline-chart"></div>`;
  const scopeSel = el<HTMLSelectElement>("timeline-scope");
  if (viewSel.clusterId !== null) scopeSel.value = String(viewSel.clusterId);
  const draw = async () => {
    const value = scopeSel.value;
    viewSel = selectTimelineCluster(viewSel, value === "" ? null : Number(value));
    const payload =
      viewSel.clusterId === null
        ? await api.overallTimeline()
        : await api.clusterTimeline(viewSel.clusterId);
    el<HTMLDivElement>("timeline-chart").innerHTML = renderTimelineSvg(timelineChart(payload));
  };
  scopeSel.addEventListener("change", draw);
  await draw();
}

function flagBadges(profile: ComponentProfile): string {
  if (!profile.bot_flags.length) return `<span class="chip">no bot flags</span>`;
  return profile.bot_flags.map((f) => `<span class="chip flag">${escapeHtml(f)}</span>`).join(" ");
}

async function renderGraphs() {
  const body = el<HTMLDivElement>("view-body");
  const typeOptions = GRAPH_TYPES.map(
    (t) => `<option value="${t}"${t === viewSel.graphType ? " selected" : ""}>${t}</option>`,
  ).join("");
  body.innerHTML =
    `<h3>interaction graphs</h3>` +
    `<label>graph <select id="graph-type">${typeOptions}</select></label> ` +
    `<label>components <select id="graph-kind">` +
    `<option value="wcc"${viewSel.kind === "wcc" ? " selected" : ""}>weakly connected</option>` +
    `<option value="scc"${viewSel.kind === "scc" ? " selected" : ""}>strongly connected</option>` +
    `</select></label>` +
    `<div id="graph-stats"></div><div id="component-list"></div><div id="component-detail"></div>`;

  const draw = async () => {
    const type = el<HTMLSelectElement>("graph-type").value as GraphType;
    const kind = el<HTMLSelectElement>("graph-kind").value as ComponentKind;
    viewSel = selectGraph(viewSel, type, kind);
    const { stats } = await api.graphStats(type);
    el<HTMLDivElement>("graph-stats").innerHTML =
      `<p>|V| = ${stats.n_nodes}, |E| = ${stats.n_edges}, ` +
      `mean degree ${stats.degree.mean.toFixed(3)}, max ${stats.degree.max}</p>`;
    const { components } = await api.components(type, kind, 10);
    el<HTMLDivElement>("component-list").innerHTML =
      `<table class="grid"><thead><tr><th>rank</th><th>size</th><th>reachable</th><th>linearity</th><th>flags</th><th></th></tr></thead><tbody>` +
      components
        .map(
          (c) =>
            `<tr><td>${c.rank}</td><td>${c.size}</td><td>${c.reachable_set_size}</td>` +
            `<td>${c.linearity_score === null ? "n/a" : c.linearity_score.toFixed(4)}</td>` +
            `<td>${flagBadges(c)}</td>` +
            `<td><button class="inspect" data-rank="${c.rank}">inspect</button></td></tr>`,
        )
        .join("") +
      `</tbody></table>`;
    el<HTMLDivElement>("component-detail").innerHTML = "";
    document.querySelectorAll<HTMLButtonElement>("button.inspect").forEach((b) => {
      b.addEventListener("click", () => {
        void inspect(Number(b.dataset.rank));
      });
    });
  };

  const inspect = async (rank: number) => {
    viewSel = selectComponent(viewSel, rank);
    const detail = await api.componentDetail(viewSel.graphType, rank, viewSel.kind, 0, 200);
    const view = componentView(detail);
    const rows = profileTable(detail.profile)
      .map((r) => `<tr><td>${r.label}</td><td>${r.within}</td><td>${r.reachable}</td></tr>`)
      .join("");
    el<HTMLDivElement>("component-detail").innerHTML =
      `<h4>${viewSel.kind.toUpperCase()}-${rank}</h4>` +
      `<p>${flagBadges(detail.profile)} linearity ${
        detail.profile.linearity_score === null ? "n/a" : detail.profile.linearity_score.toFixed(4)
      }</p>` +
      (view.truncatedNotice ? `<p class="notice">${view.truncatedNotice}</p>` : "") +
      `<div class="detail-grid">` +
      `<div>${renderComponentSvg(view)}</div>` +
      `<div><table class="grid"><thead><tr><th></th><th>within</th><th>reachable</th></tr></thead><tbody>${rows}</tbody></table>` +
      `<h5>cumulative activity</h5>${renderCurveSvg(curveChart(detail.curve))}</div>` +
      `</div>`;
  };

  el<HTMLSelectElement>("graph-type").addEventListener("change", draw);
  el<HTMLSelectElement>("graph-kind").addEventListener("change", draw);
  await draw();
}

async function renderView() {
  document.querySelectorAll<HTMLButtonElement>("nav button").forEach((b) => {
    b.classList.toggle("active", b.dataset.view === viewSel.view);
  });
  if (viewSel.view === "volume") await renderVolume();
  else if (viewSel.view === "clusters") await renderClusters();
  else if (viewSel.view === "timelines") await renderTimelines();
  else await renderGraphs();
}

async function boot() {
  ({ clusters } = await api.clusters());
  const filter = el<HTMLSelectElement>("cluster-filter");
  filter.innerHTML =
    `<option value="">all clusters</option>` +
    clusters.map((c) => `<option value="${c.id}">cluster ${c.id}</option>`).join("");

  el<HTMLButtonElement>("search-btn").addEventListener("click", () => void onSubmit());
  el<HTMLInputElement>("query").addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") void onSubmit();
  });
  document.querySelectorAll<HTMLButtonElement>("nav button").forEach((b) => {
    b.addEventListener("click", () => {
      viewSel = selectView(viewSel, b.dataset.view as ViewSelection["view"]);
      void renderView();
    });
  });
  await renderView();
}

void boot();

/**
 * View-side state. Reducer-style pure functions so the query loop
 * (query -> results -> keyword chip -> requery) is testable without a DOM.
 */

import type { ApiClient, ComponentKind, GraphType, TweetResult } from "./api.js";
import { GRAPH_TYPES } from "./api.js";

export interface QueryState {
  query: string;
  clusterId: number | null;
  k: number;
  results: TweetResult[];
  history: string[]; // append-only within a session
  error: string | null;
  empty: boolean; // explicit empty-result state
}

export function initialQueryState(): QueryState {
  return { query: "", clusterId: null, k: 10, results: [], history: [], error: null, empty: false };
}

/** Keyword-chip click: append the term to the query box (the iterative
 * query-building loop). */
export function appendKeyword(state: QueryState, term: string): QueryState {
  const query = state.query.trim() ? `${state.query.trim()} ${term}` : term;
  return { ...state, query };
}

export function setQuery(state: QueryState, query: string): QueryState {
  return { ...state, query };
}

export function setClusterFilter(state: QueryState, clusterId: number | null): QueryState {
  return { ...state, clusterId };
}

/** POST /api/search and fold the outcome into the state. History grows by
 * one on every attempted (non-blank) submission; API failures surface as a
 * non-blocking error banner without clearing previous results. */
export async function submitQuery(state: QueryState, api: ApiClient): Promise<QueryState> {
  const query = state.query.trim();
  if (!query) {
    return { ...state, error: "query is empty" };
  }
  const history = [...state.history, query];
  try {
    const payload = await api.search(query, state.k, state.clusterId);
    const results = payload.results;
    for (let i = 1; i < results.length; i++) {
      const a = results[i - 1]!.similarity ?? 0;
      const b = results[i]!.similarity ?? 0;
      if (a < b) throw new Error("results not sorted by similarity");
    }
    return { ...state, history, results, error: null, empty: results.length === 0 };
  } catch (err) {
    return { ...state, history, error: err instanceof Error ? err.message : String(err) };
  }
}

export type ViewName = "volume" | "clusters" | "timelines" | "graphs";

export interface ViewSelection {
  view: ViewName;
  graphType: GraphType;
  kind: ComponentKind;
  rank: number | null;
  clusterId: number | null; // timelines view
}

export function initialViewSelection(): ViewSelection {
  return { view: "volume", graphType: "tweet-reply", kind: "wcc", rank: null, clusterId: null };
}

export function selectView(sel: ViewSelection, view: ViewName): ViewSelection {
  return { ...sel, view };
}

export function selectGraph(sel: ViewSelection, graphType: GraphType, kind: ComponentKind): ViewSelection {
  if (!GRAPH_TYPES.includes(graphType)) {
    throw new Error(`unknown graph type: ${graphType}`);
  }
  if (kind !== "wcc" && kind !== "scc") {
    throw new Error(`unknown component kind: ${kind}`);
  }
  return { ...sel, view: "graphs", graphType, kind, rank: null };
}

export function selectComponent(sel: ViewSelection, rank: number): ViewSelection {
  if (!Number.isInteger(rank) || rank < 1) {
    throw new Error(`component rank must be a positive integer, got ${rank}`);
  }
  return { ...sel, view: "graphs", rank };
}

export function selectTimelineCluster(sel: ViewSelection, clusterId: number | null): ViewSelection {
  return { ...sel, view: "timelines", clusterId };
}

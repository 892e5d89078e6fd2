/**
 * Typed client for the tweetscope read-only API. The dashboard is a pure
 * client: every number it displays originates from one of these payloads.
 */

export type Sentiment = "positive" | "neutral" | "negative";
export type GraphType = "tweet-reply" | "tweet-quote" | "user-reply" | "user-quote";
export type ComponentKind = "wcc" | "scc";

export const GRAPH_TYPES: GraphType[] = ["tweet-reply", "tweet-quote", "user-reply", "user-quote"];

export interface TweetResult {
  id: string;
  timestamp_ms: number;
  user_id: string;
  full_text: string;
  norm_text: string;
  cluster_id: number | null;
  sentiment: Sentiment | null;
  sentiment_score: number | null;
  interaction_count: number;
  similarity?: number;
}

export interface SearchResponse {
  schema_version: number;
  query: string;
  k: number;
  cluster_id: number | null;
  results: TweetResult[];
}

export interface VolumeBin {
  start_ms: number;
  count: number;
}

export interface VolumePayload {
  schema_version: number;
  bin_width_ms: number;
  total: number;
  bins: VolumeBin[];
}

export interface ClusterSummary {
  id: number;
  size: number;
  mean_sentiment: number;
  top_keywords: string[];
}

export interface RankedTerm {
  term: string;
  score: number;
}

export interface KeywordReport {
  scope: string;
  empty: boolean;
  ranked_terms: RankedTerm[];
  excluded_terms: string[];
}

export interface TimelineBin {
  start_ms: number;
  n: number;
  ratio_pos: number | null;
  ratio_neu: number | null;
  ratio_neg: number | null;
  avg_sentiment: number | null;
}

export interface TimelinePayload {
  schema_version: number;
  scope: string;
  bin_width_ms: number;
  bins: TimelineBin[];
}

export interface FriendFollowerStats {
  n_nodes: number;
  n_missing: number;
  mean_friends: number | null;
  median_friends: number | null;
  mean_followers: number | null;
  median_followers: number | null;
}

export interface ComponentProfile {
  kind: ComponentKind;
  rank: number;
  size: number;
  within: FriendFollowerStats;
  reachable: FriendFollowerStats;
  reachable_set_size: number;
  n_interactions: number;
  linearity_score: number | null;
  linearity_degenerate: boolean;
  bot_flags: string[];
  members_preview: string[];
}

export interface GraphNode {
  id: string;
  external: boolean;
  sentiment: Sentiment | null;
  sentiment_score: number | null;
  interaction_count: number | null;
  friends: number | null;
  followers: number | null;
}

export interface GraphEdge {
  src: string;
  dst: string;
  timestamp_ms: number;
  tweet_id: string;
}

export interface CurvePoint {
  timestamp_ms: number;
  cumulative_count: number;
}

export interface ComponentDetail {
  schema_version: number;
  graph_type: GraphType;
  profile: ComponentProfile;
  curve: CurvePoint[];
  nodes: GraphNode[];
  edges: GraphEdge[];
  node_offset: number;
  node_total: number;
  truncated: boolean;
}

export interface GraphStats {
  graph_type: GraphType;
  n_nodes: number;
  n_edges: number;
  degree: { mean: number; std: number; median: number; max: number };
  in_degree: { mean: number; std: number; median: number; max: number };
  out_degree: { mean: number; std: number; median: number; max: number };
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        /* non-json error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  manifest(): Promise<{ schema_version: number; manifest: Record<string, unknown> }> {
    return this.request("/api/manifest");
  }

  volume(binMs?: number): Promise<VolumePayload> {
    const q = binMs ? `?bin_ms=${binMs}` : "";
    return this.request(`/api/volume${q}`);
  }

  clusters(): Promise<{ clusters: ClusterSummary[] }> {
    return this.request("/api/clusters");
  }

  clusterKeywords(
    id: number,
    sentiment?: Sentiment,
  ): Promise<{ report: KeywordReport; overall: KeywordReport }> {
    const q = sentiment ? `?sentiment=${sentiment}` : "";
    return this.request(`/api/clusters/${id}/keywords${q}`);
  }

  clusterTimeline(id: number, binMs?: number): Promise<TimelinePayload> {
    const q = binMs ? `?bin_ms=${binMs}` : "";
    return this.request(`/api/clusters/${id}/timeline${q}`);
  }

  overallTimeline(binMs?: number): Promise<TimelinePayload> {
    const q = binMs ? `?bin_ms=${binMs}` : "";
    return this.request(`/api/timeline${q}`);
  }

  search(query: string, k: number, clusterId?: number | null): Promise<SearchResponse> {
    return this.request("/api/search", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ query, k, cluster_id: clusterId ?? null }),
    });
  }

  graphStats(type: GraphType): Promise<{ stats: GraphStats }> {
    return this.request(`/api/graphs/${type}/stats`);
  }

  components(
    type: GraphType,
    kind: ComponentKind,
    top = 10,
  ): Promise<{ components: ComponentProfile[] }> {
    return this.request(`/api/graphs/${type}/components?kind=${kind}&top=${top}`);
  }

  componentDetail(
    type: GraphType,
    rank: number,
    kind: ComponentKind,
    offset = 0,
    limit = 200,
  ): Promise<ComponentDetail> {
    return this.request(
      `/api/graphs/${type}/components/${rank}?kind=${kind}&offset=${offset}&limit=${limit}`,
    );
  }

  tweet(id: string): Promise<{ tweet: TweetResult }> {
    return this.request(`/api/tweets/${encodeURIComponent(id)}`);
  }
}

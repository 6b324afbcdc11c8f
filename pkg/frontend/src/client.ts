import {
  FieldResponse,
  InjectivityReport,
  MapResponse,
  Vec2,
  isServiceError,
} from "./types";

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export interface RefreshRequest {
  source: Vec2[];
  target: Vec2[];
  payload: Vec2[];
  resolution: [number, number];
}

export interface RefreshResult {
  seq: number;
  image: Vec2[];
  field: FieldResponse;
  report: InjectivityReport;
}

/**
 * Debounced client for the compute service.
 *
 * Scheduling a refresh (re)starts a short timer; when it fires, one combined
 * round of /map, /field, and /check requests goes out. At most one round is
 * in flight: further schedules during flight are queued and replayed once.
 * Every round carries a sequence number and stale completions are dropped,
 * so subscribers only ever see responses for the newest state.
 */
export class ServiceClient {
  readonly baseUrl: string;
  debounceMs = 60;

  private fetchImpl: FetchLike;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private seq = 0;
  private inFlight = false;
  private queued: RefreshRequest | null = null;
  private listeners: ((r: RefreshResult) => void)[] = [];
  private errorListeners: ((err: Error) => void)[] = [];

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  onResult(cb: (r: RefreshResult) => void): void {
    this.listeners.push(cb);
  }

  onError(cb: (err: Error) => void): void {
    this.errorListeners.push(cb);
  }

  get inFlightCount(): number {
    return this.inFlight ? 1 : 0;
  }

  /** Debounced: collapses rapid drag updates into one request round. */
  scheduleRefresh(req: RefreshRequest): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(req);
    }, this.debounceMs);
  }

  /** Immediate (still sequence-guarded); used on drag release and load. */
  refreshNow(req: RefreshRequest): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.fire(req);
  }

  private async fire(req: RefreshRequest): Promise<void> {
    // Every accepted request advances the sequence, so an in-flight round
    // becomes stale the moment a newer request arrives.
    const seq = ++this.seq;
    if (this.inFlight) {
      this.queued = req;
      return;
    }
    this.inFlight = true;
    try {
      const [image, field, report] = await Promise.all([
        this.post<MapResponse>("/map", {
          source: req.source,
          target: req.target,
          points: req.payload,
        }),
        this.post<FieldResponse>("/field", {
          source: req.source,
          target: req.target,
          res: req.resolution,
        }),
        this.post<InjectivityReport>("/check", {
          source: req.source,
          target: req.target,
          res: req.resolution,
        }),
      ]);
      if (seq === this.seq) {
        const result: RefreshResult = { seq, image: image.points, field, report };
        for (const cb of this.listeners) cb(result);
      }
    } catch (err) {
      if (seq === this.seq) {
        for (const cb of this.errorListeners) cb(err as Error);
      }
    } finally {
      this.inFlight = false;
      if (this.queued) {
        const next = this.queued;
        this.queued = null;
        void this.fire(next);
      }
    }
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new Error(`${path} failed with status ${response.status}`);
    }
    const data = await response.json();
    if (isServiceError(data)) {
      throw new Error(`${data.error.type}: ${data.error.message}`);
    }
    return data as T;
  }
}

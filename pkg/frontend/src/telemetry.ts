import { LogEntryWire } from "./types.js";

// Telemetry must never block or break the exhibit: entries queue locally,
// flush in batches, and failed batches go back on the queue with backoff.
// Each queued entry carries a client sequence number; a gesture handler that
// fires twice for one gesture therefore still yields exactly one entry.

export interface TelemetryOptions {
  batchSize?: number;
  backoffBaseMs?: number;
  backoffMaxMs?: number;
}

export class TelemetryQueue {
  private queue: { seq: number; entry: LogEntryWire }[] = [];
  private seen = new Set<number>();
  private nextSeq = 1;
  private inFlight: Promise<void> | null = null;
  private retryTimer: ReturnType<typeof setTimeout> | null = null;
  private failures = 0;
  private readonly batchSize: number;
  private readonly backoffBaseMs: number;
  private readonly backoffMaxMs: number;

  constructor(
    private readonly endpoint: string,
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
    options: TelemetryOptions = {},
  ) {
    this.batchSize = options.batchSize ?? 20;
    this.backoffBaseMs = options.backoffBaseMs ?? 1000;
    this.backoffMaxMs = options.backoffMaxMs ?? 30_000;
  }

  newSequence(): number {
    return this.nextSeq++;
  }

  /** Queue one entry under a gesture's sequence number; duplicates are dropped. */
  enqueue(seq: number, entry: LogEntryWire): boolean {
    if (this.seen.has(seq)) return false;
    this.seen.add(seq);
    this.queue.push({ seq, entry });
    void this.flush();
    return true;
  }

  get pending(): number {
    return this.queue.length;
  }

  /** Drain the queue; awaiting joins any flush already in flight. */
  flush(): Promise<void> {
    if (this.inFlight === null) {
      if (this.queue.length === 0) return Promise.resolve();
      this.inFlight = this.drain().finally(() => {
        this.inFlight = null;
      });
    }
    return this.inFlight;
  }

  private async drain(): Promise<void> {
    while (this.queue.length > 0) {
      const batch = this.queue.slice(0, this.batchSize);
      let ok = false;
      try {
        const resp = await this.fetchFn(this.endpoint, {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify({ entries: batch.map((q) => q.entry) }),
        });
        ok = resp.ok;
      } catch {
        ok = false;
      }
      if (!ok) {
        this.failures += 1;
        this.scheduleRetry();
        return;
      }
      this.failures = 0;
      this.queue.splice(0, batch.length);
    }
  }

  private scheduleRetry(): void {
    if (this.retryTimer !== null) return;
    const delay = Math.min(
      this.backoffBaseMs * 2 ** Math.max(0, this.failures - 1),
      this.backoffMaxMs,
    );
    this.retryTimer = setTimeout(() => {
      this.retryTimer = null;
      void this.flush();
    }, delay);
  }
}

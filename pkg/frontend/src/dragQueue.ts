/** Serializes drag updates: at most one request in flight, queue depth 1.
 *
 * While a PATCH is outstanding, newer positions overwrite the single
 * pending slot (latest wins). When the in-flight request settles, the
 * pending position (if any) is sent next, so the last pushed position
 * is always transmitted eventually.
 */

export type DragSender<T> = (payload: T) => Promise<void>;

export class DragQueue<T> {
  private readonly sender: DragSender<T>;
  private inFlight = false;
  private pending: { payload: T } | null = null;
  private settleResolvers: (() => void)[] = [];
  lastError: unknown = null;

  constructor(sender: DragSender<T>) {
    this.sender = sender;
  }

  push(payload: T): void {
    if (this.inFlight) {
      this.pending = { payload };
      return;
    }
    void this.dispatch(payload);
  }

  private async dispatch(payload: T): Promise<void> {
    this.inFlight = true;
    try {
      await this.sender(payload);
    } catch (err) {
      this.lastError = err;
    }
    this.inFlight = false;
    if (this.pending) {
      const next = this.pending.payload;
      this.pending = null;
      void this.dispatch(next);
      return;
    }
    const resolvers = this.settleResolvers;
    this.settleResolvers = [];
    for (const resolve of resolvers) {
      resolve();
    }
  }

  get busy(): boolean {
    return this.inFlight || this.pending !== null;
  }

  /** Resolves once everything pushed so far has been sent. */
  settled(): Promise<void> {
    if (!this.busy) {
      return Promise.resolve();
    }
    return new Promise((resolve) => {
      this.settleResolvers.push(resolve);
    });
  }
}

/** Client-side session history: every workbench run is appended and the
 * analyst can step back through them. Named scenarios persist server-side;
 * this stack is view state only. */

export interface HistoryEntry<T> {
  label: string;
  snapshot: T;
}

export class SessionHistory<T> {
  private entries: HistoryEntry<T>[] = [];

  get length(): number {
    return this.entries.length;
  }

  push(label: string, snapshot: T): void {
    this.entries.push({ label, snapshot });
  }

  /** Drop the newest entry and return the one now on top. */
  stepBack(): HistoryEntry<T> | null {
    if (this.entries.length === 0) return null;
    this.entries.pop();
    return this.entries[this.entries.length - 1] ?? null;
  }

  current(): HistoryEntry<T> | null {
    return this.entries[this.entries.length - 1] ?? null;
  }

  list(): readonly HistoryEntry<T>[] {
    return this.entries;
  }
}

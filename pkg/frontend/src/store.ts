/** Holds the latest server snapshot plus transient UI feedback state.
 *
 * The snapshot is the only source of geometry; nothing here edits it
 * locally. Mutations happen on the server and arrive as replacements.
 */

import type { Point2Out, ScrewOut, SessionSnapshot, ViewName } from "./types.js";

export interface Marker {
  view: ViewName;
  at: Point2Out;
  label: string;
}

export interface Popup {
  kind: "error" | "info";
  message: string;
}

export interface UiState {
  snapshot: SessionSnapshot | null;
  markers: Marker[];
  popup: Popup | null;
  warning: string | null;
  selectedLabel: string | null;
  exportHint: string | null;
}

export type Listener = (state: UiState) => void;

export class SessionStore {
  private state: UiState = {
    snapshot: null,
    markers: [],
    popup: null,
    warning: null,
    selectedLabel: null,
    exportHint: null,
  };
  private listeners: Listener[] = [];

  getState(): UiState {
    return this.state;
  }

  get snapshot(): SessionSnapshot | null {
    return this.state.snapshot;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private commit(partial: Partial<UiState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  setSnapshot(snapshot: SessionSnapshot): void {
    this.commit({ snapshot });
  }

  /** Replace one screw from a PATCH/POST response body. */
  mergeScrew(screw: ScrewOut): void {
    const snapshot = this.state.snapshot;
    if (!snapshot) {
      return;
    }
    const screws = snapshot.screws.some((s) => s.id === screw.id)
      ? snapshot.screws.map((s) => (s.id === screw.id ? screw : s))
      : [...snapshot.screws, screw];
    this.commit({ snapshot: { ...snapshot, screws } });
  }

  addMarker(marker: Marker): void {
    this.commit({ markers: [...this.state.markers, marker] });
  }

  setPopup(popup: Popup | null): void {
    this.commit({ popup });
  }

  setWarning(warning: string | null): void {
    this.commit({ warning });
  }

  setSelectedLabel(label: string | null): void {
    this.commit({ selectedLabel: label });
  }

  setExportHint(hint: string | null): void {
    this.commit({ exportHint: hint });
  }
}

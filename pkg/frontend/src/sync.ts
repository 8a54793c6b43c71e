/** Synchronized view state for the two map panes.
 *
 * Both panes render from one shared camera; any pan or zoom on either pane
 * mutates that camera, so the panes can never diverge. Pan deltas arrive in
 * screen pixels and are converted at the current scale.
 */

export interface ViewState {
  center: [number, number];
  zoom: number;
}

export type PaneId = "left" | "right";

export type PaneEvent =
  | { pane: PaneId; type: "pan"; dxPx: number; dyPx: number }
  | { pane: PaneId; type: "zoom"; delta: number };

export const MIN_ZOOM = -4;
export const MAX_ZOOM = 24;

export function scaleFor(zoom: number): number {
  return Math.pow(2, zoom);
}

export class SyncedPanes {
  private state: ViewState;
  private listeners: Array<(state: ViewState) => void> = [];

  constructor(initial: ViewState) {
    this.state = { center: [initial.center[0], initial.center[1]], zoom: initial.zoom };
  }

  apply(event: PaneEvent): ViewState {
    if (event.type === "pan") {
      // dragging moves the content with the cursor: the camera center
      // shifts against dx, and with dy because screen y points down
      const scale = scaleFor(this.state.zoom);
      this.state.center = [
        this.state.center[0] - event.dxPx / scale,
        this.state.center[1] + event.dyPx / scale,
      ];
    } else {
      this.state.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, this.state.zoom + event.delta));
    }
    const snapshot = this.get("left");
    for (const listener of this.listeners) listener(snapshot);
    return snapshot;
  }

  /** Snapshot of the pane's camera; identical for both panes by design. */
  get(_pane: PaneId): ViewState {
    return { center: [this.state.center[0], this.state.center[1]], zoom: this.state.zoom };
  }

  onChange(listener: (state: ViewState) => void): void {
    this.listeners.push(listener);
  }
}

/** World -> screen for a pane of the given pixel size. */
export function project(
  view: ViewState,
  size: [number, number],
  point: [number, number],
): [number, number] {
  const scale = scaleFor(view.zoom);
  return [
    size[0] / 2 + (point[0] - view.center[0]) * scale,
    size[1] / 2 - (point[1] - view.center[1]) * scale,
  ];
}

export function viewsEqual(a: ViewState, b: ViewState, tolerance = 1e-9): boolean {
  return (
    Math.abs(a.center[0] - b.center[0]) <= tolerance &&
    Math.abs(a.center[1] - b.center[1]) <= tolerance &&
    Math.abs(a.zoom - b.zoom) <= tolerance
  );
}

/** Initial camera that fits a bounding box into the pane. */
export function fitBounds(
  bounds: [[number, number], [number, number]],
  size: [number, number],
  paddingPx = 20,
): ViewState {
  const [[minX, minY], [maxX, maxY]] = bounds;
  const spanX = Math.max(maxX - minX, 1e-12);
  const spanY = Math.max(maxY - minY, 1e-12);
  const scale = Math.min(
    (size[0] - 2 * paddingPx) / spanX,
    (size[1] - 2 * paddingPx) / spanY,
  );
  return {
    center: [(minX + maxX) / 2, (minY + maxY) / 2],
    zoom: Math.log2(Math.max(scale, 1e-12)),
  };
}

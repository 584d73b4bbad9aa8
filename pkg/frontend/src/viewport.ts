/**
 * Canvas viewport: pan + zoom per canvas, with the active-canvas switch
 * (My Canvas / Team Canvas) preserving each canvas's viewport.
 */

export type ActiveCanvas = "my" | "team";

export interface ViewportState {
  panX: number;
  panY: number;
  zoom: number;
}

export const MIN_ZOOM = 0.1;
export const MAX_ZOOM = 10;

function defaultViewport(): ViewportState {
  return { panX: 0, panY: 0, zoom: 1 };
}

export class CanvasViewport {
  private viewports: Record<ActiveCanvas, ViewportState> = {
    my: defaultViewport(),
    team: defaultViewport(),
  };
  active: ActiveCanvas = "my";

  get current(): ViewportState {
    return this.viewports[this.active];
  }

  switchTo(canvas: ActiveCanvas): void {
    this.active = canvas;
  }

  panBy(dx: number, dy: number): void {
    this.current.panX += dx;
    this.current.panY += dy;
  }

  /** Zoom is clamped to [0.1, 10]; factors multiply. */
  zoomBy(factor: number): number {
    const next = this.current.zoom * factor;
    this.current.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, next));
    return this.current.zoom;
  }

  /** Screen coordinates -> canvas coordinates under the current viewport. */
  toCanvas(screenX: number, screenY: number): { x: number; y: number } {
    const { panX, panY, zoom } = this.current;
    return { x: (screenX - panX) / zoom, y: (screenY - panY) / zoom };
  }
}

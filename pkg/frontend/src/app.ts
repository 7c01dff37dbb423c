/** Browser wiring: camera controls, panel, dispatch loop.
 *
 * Dispatch protocol: validate locally, POST the action, record it in
 * the log, then request a scene refresh (latest-wins).  A 422 keeps the
 * log clean, shows the rejection, and re-syncs the displayed state; a
 * network failure retries with a visible status line.
 */

import * as THREE from "three";

import { clampCamera, defaultCamera, dolly, eyePosition, orbit, type OrbitCamera } from "./camera.js";
import { ActionLog, ApiClient, ApiError, SceneFetcher } from "./client.js";
import {
  buildFrame,
  clickToAction,
  collapseAction,
  filterAction,
  isRejection,
  lodAction,
  sliderToAction,
  wheelToAction,
  type Frame,
} from "./sceneModel.js";
import { SceneView } from "./render.js";
import type { ActionDoc, SceneDoc } from "./types.js";

const RETRY_DELAY_MS = 800;

export class ExplorerApp {
  private readonly client: ApiClient;
  private readonly log = new ActionLog();
  private readonly fetcher: SceneFetcher;
  private readonly view = new SceneView();
  private camera: OrbitCamera = defaultCamera(1);
  private threeCamera = new THREE.PerspectiveCamera(60, 1, 0.01, 500);
  private renderer: THREE.WebGLRenderer | null = null;
  private scene3 = new THREE.Scene();
  private sessionId: string | null = null;
  private lastScene: SceneDoc | null = null;
  private frame: Frame | null = null;

  constructor(
    baseUrl: string,
    private readonly canvas: HTMLCanvasElement,
    private readonly status: HTMLElement,
    private readonly slider: HTMLInputElement
  ) {
    this.client = new ApiClient(baseUrl);
    this.fetcher = new SceneFetcher(this.client, (scene) => this.applyScene(scene));
  }

  async start(preset = "helicoid-unified"): Promise<void> {
    const meta = await this.client.meta();
    this.camera = defaultCamera(meta.extent);
    this.slider.max = String(meta.time_point_count - 1);
    this.sessionId = await this.client.createSession({ preset });
    this.setupRendering();
    this.bindInput();
    await this.refresh();
    this.say(`session ${this.sessionId} on ${meta.name}`);
  }

  private setupRendering(): void {
    this.renderer = new THREE.WebGLRenderer({ canvas: this.canvas, antialias: true });
    this.scene3.add(new THREE.AmbientLight(0xffffff, 0.6));
    const key = new THREE.DirectionalLight(0xffffff, 1.2);
    key.position.set(3, 5, 4);
    this.scene3.add(key);
    this.scene3.add(this.view.root);
    const animate = () => {
      requestAnimationFrame(animate);
      this.threeCamera.position.set(...eyePosition(this.camera));
      this.threeCamera.lookAt(...this.camera.target);
      this.renderer!.render(this.scene3, this.threeCamera);
    };
    animate();
  }

  private bindInput(): void {
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      const action = wheelToAction(event.deltaY);
      if (action) void this.dispatch(action);
    });
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("pointerdown", (event) => {
      dragging = true;
      lastX = event.clientX;
      lastY = event.clientY;
    });
    window.addEventListener("pointerup", () => {
      dragging = false;
    });
    window.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      this.camera = orbit(
        this.camera,
        -(event.clientX - lastX) * 0.005,
        (event.clientY - lastY) * 0.005
      );
      lastX = event.clientX;
      lastY = event.clientY;
    });
    this.canvas.addEventListener("dblclick", (event) => this.pick(event));
    this.canvas.addEventListener("keydown", (event) => {
      if (event.key === "+") this.camera = dolly(this.camera, 0.9);
      if (event.key === "-") this.camera = dolly(this.camera, 1.1);
    });
    // the slider commits ONE Jump on release, never a scroll burst
    this.slider.addEventListener("change", () => {
      if (!this.lastScene) return;
      const action = sliderToAction(
        this.lastScene.central[0],
        this.lastScene.central[1],
        Number(this.slider.value)
      );
      if (action) void this.dispatch(action);
    });
  }

  private pick(event: MouseEvent): void {
    if (!this.renderer) return;
    const bounds = this.canvas.getBoundingClientRect();
    const pointer = new THREE.Vector2(
      ((event.clientX - bounds.left) / bounds.width) * 2 - 1,
      -((event.clientY - bounds.top) / bounds.height) * 2 + 1
    );
    const caster = new THREE.Raycaster();
    caster.setFromCamera(pointer, this.threeCamera);
    const hits = caster.intersectObjects(this.view.root.children, false);
    const hit = hits.find((h) => h.object.userData?.id);
    if (!hit) return;
    const data = hit.object.userData as { id: string; branch: string; index: number };
    const action = event.shiftKey
      ? clickToAction({ kind: "time-point", branch: data.branch, index: data.index })
      : clickToAction({ kind: "object", id: data.id });
    void this.dispatch(action);
  }

  applyFilter(field: string, lo: number | null, hi: number | null): void {
    const action = filterAction(field, lo, hi);
    if (isRejection(action)) this.say(action.reason);
    else void this.dispatch(action);
  }

  applyLod(stride: number): void {
    const action = lodAction(stride);
    if (isRejection(action)) this.say(action.reason);
    else void this.dispatch(action);
  }

  applyCollapse(branch: string, start: number, end: number): void {
    const action = collapseAction(branch, start, end);
    if (isRejection(action)) this.say(action.reason);
    else void this.dispatch(action);
  }

  async switchDesign(preset: string): Promise<void> {
    // a design switch re-requests a full scene in a fresh session
    this.sessionId = await this.client.createSession({ preset });
    await this.refresh();
  }

  private async dispatch(action: ActionDoc): Promise<void> {
    if (!this.sessionId) return;
    try {
      const changed = await this.client.postAction(this.sessionId, action);
      this.log.record(action);
      if (changed.length > 0) await this.refresh();
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.say(`rejected: ${error.detail}`);
        await this.refresh(); // re-sync the displayed state
        return;
      }
      this.say(`network problem, retrying: ${String(error)}`);
      setTimeout(() => void this.dispatch(action), RETRY_DELAY_MS);
    }
  }

  private async refresh(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.fetcher.refresh(this.sessionId);
    } catch (error) {
      this.say(`scene fetch failed, retrying: ${String(error)}`);
      setTimeout(() => void this.refresh(), RETRY_DELAY_MS);
    }
  }

  private applyScene(scene: SceneDoc): void {
    this.lastScene = scene;
    try {
      this.frame = buildFrame(scene);
    } catch (error) {
      this.say(`scene parse failed: ${String(error)}`);
      return;
    }
    this.view.show(this.frame);
    this.slider.value = String(scene.central[1]);
    this.say(
      `central ${scene.central[0]}:${scene.central[1]}, ` +
        `${this.frame.drawables.length} drawn, ` +
        `${this.frame.gapMarkers.length} gaps`
    );
  }

  private say(message: string): void {
    this.status.textContent = message;
  }

  get actionLog(): ActionLog {
    return this.log;
  }
}

/** three.js projection of a Frame; no state of its own beyond object
 * reuse.  All placement data arrives precomputed in the frame. */

import * as THREE from "three";

import type { Drawable, Frame, GapMarker } from "./sceneModel.js";

const SPHERE_GEOMETRY = new THREE.SphereGeometry(1, 24, 16);
const CENTRAL_EMISSIVE = new THREE.Color(0.35, 0.3, 0.05);
const BLACK = new THREE.Color(0, 0, 0);

function meshGeometry(drawable: Drawable): THREE.BufferGeometry {
  if (drawable.shape.kind === "sphere") return SPHERE_GEOMETRY;
  const geometry = new THREE.BufferGeometry();
  const positions = new Float32Array(drawable.shape.vertices.flat());
  geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
  geometry.setIndex(drawable.shape.triangles.flat());
  geometry.computeVertexNormals();
  return geometry;
}

function makeLabel(marker: GapMarker): THREE.Sprite {
  const canvas = document.createElement("canvas");
  canvas.width = 256;
  canvas.height = 64;
  const ctx = canvas.getContext("2d")!;
  ctx.fillStyle = "rgba(20, 20, 20, 0.8)";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#ffd75e";
  ctx.font = "32px sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(marker.label, canvas.width / 2, canvas.height / 2);
  const sprite = new THREE.Sprite(
    new THREE.SpriteMaterial({ map: new THREE.CanvasTexture(canvas) })
  );
  sprite.scale.set(0.5, 0.125, 1);
  return sprite;
}

export class SceneView {
  readonly root = new THREE.Group();
  private drawn: THREE.Object3D[] = [];

  /** Rebuild the displayed objects from a frame: one drawable per
   * visible placement, one labeled marker per gap. */
  show(frame: Frame): void {
    for (const object of this.drawn) this.root.remove(object);
    this.drawn = [];
    for (const drawable of frame.drawables) {
      const material = new THREE.MeshStandardMaterial({
        color: new THREE.Color(...drawable.color),
        emissive: drawable.central ? CENTRAL_EMISSIVE : BLACK,
        transparent: drawable.clipped,
        opacity: drawable.clipped ? 0.15 : 1.0,
      });
      const mesh = new THREE.Mesh(meshGeometry(drawable), material);
      // the wire position already includes the rotated scaled centroid
      mesh.position.set(...drawable.position);
      if (drawable.shape.kind === "sphere") {
        const r = drawable.shape.radius * drawable.scale;
        mesh.scale.set(r, r, r);
      } else {
        mesh.scale.setScalar(drawable.scale);
      }
      const [w, x, y, z] = drawable.quaternion;
      mesh.quaternion.set(x, y, z, w);
      mesh.userData = { id: drawable.id, branch: drawable.branch, index: drawable.index };
      this.root.add(mesh);
      this.drawn.push(mesh);
    }
    for (const marker of frame.gapMarkers) {
      const sprite = makeLabel(marker);
      sprite.position.set(...marker.position);
      this.root.add(sprite);
      this.drawn.push(sprite);
    }
  }
}

/** three.js viewport rendering streamed mesh frames. */

import * as THREE from "three";

import type { MeshFrame } from "./frame.js";

export class Viewport {
    private renderer: THREE.WebGLRenderer;
    private scene = new THREE.Scene();
    private camera: THREE.PerspectiveCamera;
    private mesh: THREE.Mesh | null = null;
    private wire: THREE.LineSegments | null = null;
    private orbit = { theta: 0.8, phi: 1.05, radius: 6, target: new THREE.Vector3() };
    private dragging = false;

    constructor(private canvas: HTMLCanvasElement) {
        this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
        this.renderer.setPixelRatio(window.devicePixelRatio);
        this.camera = new THREE.PerspectiveCamera(45, 1, 0.01, 200);
        this.scene.background = new THREE.Color(0x10141a);
        const key = new THREE.DirectionalLight(0xffffff, 2.2);
        key.position.set(4, 6, 8);
        this.scene.add(key);
        const fill = new THREE.DirectionalLight(0x8899bb, 0.8);
        fill.position.set(-5, -2, -4);
        this.scene.add(fill);
        this.scene.add(new THREE.AmbientLight(0x404550));
        this.scene.add(new THREE.GridHelper(10, 20, 0x2a3340, 0x1c2330));
        this.bindOrbit();
        this.resize();
        window.addEventListener("resize", () => this.resize());
        this.renderLoop();
    }

    /** Swap in a decoded frame; geometry buffers are rebuilt, camera kept. */
    showFrame(frame: MeshFrame): void {
        const geometry = new THREE.BufferGeometry();
        geometry.setAttribute(
            "position", new THREE.BufferAttribute(frame.positions, 3));
        geometry.setIndex(new THREE.BufferAttribute(frame.indices, 1));
        geometry.computeVertexNormals();
        if (this.mesh) {
            this.scene.remove(this.mesh);
            this.mesh.geometry.dispose();
        }
        if (this.wire) {
            this.scene.remove(this.wire);
            this.wire.geometry.dispose();
        }
        const material = new THREE.MeshStandardMaterial({
            color: 0x7fa6d9, metalness: 0.1, roughness: 0.75,
            side: THREE.DoubleSide, flatShading: true,
        });
        // z-up model, y-up viewer
        this.mesh = new THREE.Mesh(geometry, material);
        this.mesh.rotation.x = -Math.PI / 2;
        this.scene.add(this.mesh);
        const wireGeometry = new THREE.WireframeGeometry(geometry);
        this.wire = new THREE.LineSegments(
            wireGeometry,
            new THREE.LineBasicMaterial({ color: 0x233044, transparent: true, opacity: 0.4 }));
        this.wire.rotation.x = -Math.PI / 2;
        this.scene.add(this.wire);
    }

    private bindOrbit(): void {
        this.canvas.addEventListener("pointerdown", (e) => {
            this.dragging = true;
            this.canvas.setPointerCapture(e.pointerId);
        });
        this.canvas.addEventListener("pointerup", () => (this.dragging = false));
        this.canvas.addEventListener("pointermove", (e) => {
            if (!this.dragging) return;
            this.orbit.theta -= e.movementX * 0.008;
            this.orbit.phi = Math.min(
                Math.PI - 0.05, Math.max(0.05, this.orbit.phi - e.movementY * 0.008));
        });
        this.canvas.addEventListener("wheel", (e) => {
            e.preventDefault();
            this.orbit.radius = Math.min(
                60, Math.max(0.5, this.orbit.radius * (1 + e.deltaY * 0.001)));
        }, { passive: false });
    }

    private resize(): void {
        const width = this.canvas.clientWidth || this.canvas.parentElement?.clientWidth || 640;
        const height = this.canvas.clientHeight || 480;
        this.renderer.setSize(width, height, false);
        this.camera.aspect = width / height;
        this.camera.updateProjectionMatrix();
    }

    private renderLoop(): void {
        const { theta, phi, radius, target } = this.orbit;
        this.camera.position.set(
            target.x + radius * Math.sin(phi) * Math.sin(theta),
            target.y + radius * Math.cos(phi),
            target.z + radius * Math.sin(phi) * Math.cos(theta));
        this.camera.lookAt(target);
        this.renderer.render(this.scene, this.camera);
        requestAnimationFrame(() => this.renderLoop());
    }
}

import { ExplorerApp } from "./app.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const status = document.getElementById("status") as HTMLElement;
const slider = document.getElementById("time-slider") as HTMLInputElement;
const presetPicker = document.getElementById("preset") as HTMLSelectElement;
const filterField = document.getElementById("filter-field") as HTMLInputElement;
const filterLo = document.getElementById("filter-lo") as HTMLInputElement;
const filterHi = document.getElementById("filter-hi") as HTMLInputElement;
const filterApply = document.getElementById("filter-apply") as HTMLButtonElement;
const lodInput = document.getElementById("lod") as HTMLInputElement;

const app = new ExplorerApp(window.location.origin, canvas, status, slider);

function bound(input: HTMLInputElement): number | null {
  return input.value.trim() === "" ? null : Number(input.value);
}

presetPicker.addEventListener("change", () => void app.switchDesign(presetPicker.value));
filterApply.addEventListener("click", () =>
  app.applyFilter(filterField.value, bound(filterLo), bound(filterHi))
);
lodInput.addEventListener("change", () => app.applyLod(Number(lodInput.value)));

void app.start(presetPicker.value);

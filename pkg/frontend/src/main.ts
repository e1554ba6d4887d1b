/** Browser entry point: mount the explorer with basic controls.
 *
 * The API base defaults to the local server; override with ?api=<url>. */

import { ApiClient } from "./api.js";
import { Explorer } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://127.0.0.1:8642";

const mount = document.getElementById("app");
if (!mount) throw new Error("missing #app element");

const explorer = new Explorer(mount, new ApiClient(base));

const controls = document.getElementById("controls");
if (controls) {
  const cellRow = document.createElement("div");
  cellRow.className = "row";
  for (const cell of ["w3", "w4"]) {
    const button = document.createElement("button");
    button.textContent = `load ${cell} seed`;
    button.addEventListener("click", () => void explorer.loadSeed(cell));
    cellRow.appendChild(button);
  }
  controls.appendChild(cellRow);

  const wordRow = document.createElement("div");
  wordRow.className = "row";
  const graphSelect = document.createElement("select");
  for (const name of ["kronecker", "a2", "a3", "a4", "d4", "triangle"]) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    graphSelect.appendChild(option);
  }
  graphSelect.addEventListener("change", () => void explorer.setGraph(graphSelect.value));
  wordRow.appendChild(graphSelect);
  for (let letter = 0; letter <= 4; letter++) {
    const button = document.createElement("button");
    button.textContent = `+${letter}`;
    button.addEventListener("click", () => void explorer.appendLetter(letter));
    wordRow.appendChild(button);
  }
  const pop = document.createElement("button");
  pop.textContent = "pop";
  pop.addEventListener("click", () => void explorer.popLetter());
  wordRow.appendChild(pop);
  controls.appendChild(wordRow);
}

void explorer.loadSeed("w3");

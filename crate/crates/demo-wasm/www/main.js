import init, { check_dominance, reconstruct_two_mode, synthesize_chain } from "./pkg/gauss_marginals_demo.js";

const $ = (id) => document.getElementById(id);
const GRID = 80;

function numbers(text) {
  return Float64Array.from(text.split(/[\s,]+/).filter(Boolean).map(Number));
}

function verdict(el, good, text) {
  el.textContent = text;
  el.className = good ? "ok" : "bad";
}

function fmt(x) {
  return Number.isInteger(x) ? String(x) : x.toFixed(4);
}

function runDominance() {
  const r = JSON.parse(check_dominance(numbers($("dom-k").value), numbers($("dom-m").value)));
  if (!r.ok) return verdict($("dom-verdict"), false, r.error);
  verdict($("dom-verdict"), r.compatible && r.physical,
    r.compatible ? (r.physical ? "compatible" : "dominates, but not physical (smallest global parameter below 1)")
                 : "incompatible");
  $("dom-out").textContent =
    `partial sum slacks: ${r.partial_sum_slacks.map(fmt).join(", ")}\ntail slack: ${fmt(r.tail_slack)}`;
}

function runTwoMode() {
  const [m1, m2, k1, k2] = ["tm-m1", "tm-m2", "tm-k1", "tm-k2"].map((id) => Number($(id).value));
  const r = JSON.parse(reconstruct_two_mode(m1, m2, k1, k2, GRID));
  const canvas = $("tm-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!r.ok) {
    $("tm-out").textContent = r.error;
    return;
  }
  const { kappa_max, steps, feasible } = r.region;
  const cell = canvas.width / steps;
  ctx.fillStyle = "#9cc7e8";
  for (let i = 0; i < steps; i++) {
    for (let j = 0; j < steps; j++) {
      if (feasible[i * steps + j]) ctx.fillRect(i * cell, canvas.height - (j + 1) * cell, cell, cell);
    }
  }
  const px = (k) => ((k - 1) / (kappa_max - 1)) * canvas.width;
  ctx.fillStyle = r.feasible ? "#176a1d" : "#a31515";
  ctx.beginPath();
  ctx.arc(px(k1), canvas.height - px(k2), 5, 0, 2 * Math.PI);
  ctx.fill();
  canvas.dataset.kappaMax = kappa_max;

  if (!r.feasible) {
    $("tm-out").textContent = r.reason;
    return;
  }
  const f = r.form;
  let text = `kx = ${fmt(f.kx)}, kp = ${fmt(f.kp)}\n`;
  for (let row = 0; row < 4; row++) {
    text += r.matrix.slice(row * 4, row * 4 + 4).map((x) => fmt(x).padStart(9)).join(" ") + "\n";
  }
  if (r.single_generator) {
    const g = r.single_generator;
    text += `diagonalized by a single ${g.kind === "BS" ? "beam splitter" : "two-mode squeezer"} (${fmt(g.parameter)})`;
  }
  $("tm-out").textContent = text;
}

function pickPoint(ev) {
  const canvas = $("tm-canvas");
  const kmax = Number(canvas.dataset.kappaMax || 3);
  const rect = canvas.getBoundingClientRect();
  const x = (ev.clientX - rect.left) / rect.width;
  const y = 1 - (ev.clientY - rect.top) / rect.height;
  $("tm-k1").value = (1 + x * (kmax - 1)).toFixed(2);
  $("tm-k2").value = (1 + y * (kmax - 1)).toFixed(2);
  runTwoMode();
}

function runSynthesis() {
  const r = JSON.parse(synthesize_chain(numbers($("syn-k").value), numbers($("syn-m").value)));
  const table = $("syn-table");
  table.innerHTML = "";
  if (!r.ok) return verdict($("syn-verdict"), false, r.error);
  verdict($("syn-verdict"), r.verify.passed,
    `stage counts ${r.stage_counts.join(", ")}; residuals ` +
    `${r.verify.symplectic_residual.toExponential(1)} / ${r.verify.diagonal_residual.toExponential(1)} / ` +
    `${r.verify.spectrum_residual.toExponential(1)}`);
  const n = r.chain[0].length;
  const head = table.insertRow();
  ["step", "stage", "kind", "pair", ...Array.from({ length: n }, (_, j) => `mode ${j + 1}`)].forEach((h) => {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  });
  r.chain.forEach((diag, k) => {
    const s = k > 0 ? r.steps[k - 1] : null;
    const row = table.insertRow();
    [k, s ? s.stage : "", s ? s.kind : "", s ? s.pair.join("-") : "", ...diag.map(fmt)].forEach((c) => {
      row.insertCell().textContent = c;
    });
  });
}

await init();
$("dom-run").addEventListener("click", runDominance);
$("syn-run").addEventListener("click", runSynthesis);
["tm-m1", "tm-m2", "tm-k1", "tm-k2"].forEach((id) => $(id).addEventListener("input", runTwoMode));
$("tm-canvas").addEventListener("click", pickPoint);
runDominance();
runTwoMode();
runSynthesis();

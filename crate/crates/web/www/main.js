import init, { sampleInstance, successCurve, fractionalFactor } from "./pkg/trifactor_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

function common() {
  return {
    family: $("family").value,
    n: Number($("n").value),
    param: Number($("param").value),
    seed: Number($("seed").value) >>> 0,
  };
}

function call(out, f) {
  try {
    return JSON.parse(f());
  } catch (e) {
    out.textContent = String(e.message ?? e);
    return null;
  }
}

function layout(inst, w, h) {
  const pos = [];
  if (inst.parts) {
    let v = 0;
    inst.parts.forEach((size, i) => {
      for (let j = 0; j < size; j++, v++) {
        pos.push([w * (i + 0.5) / 3, h * (j + 1) / (size + 1)]);
      }
    });
  } else {
    const r = Math.min(w, h) * 0.42;
    for (let v = 0; v < inst.vertices; v++) {
      const a = 2 * Math.PI * v / inst.vertices - Math.PI / 2;
      pos.push([w / 2 + r * Math.cos(a), h / 2 + r * Math.sin(a)]);
    }
  }
  return pos;
}

function drawInstance(inst) {
  const c = $("graph"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const pos = layout(inst, c.width, c.height);
  ctx.strokeStyle = "rgba(0,0,0,0.12)";
  ctx.lineWidth = 1;
  for (const [u, v] of inst.edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  (inst.factor ?? []).forEach((t, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.lineWidth = 2.5;
    ctx.beginPath();
    ctx.moveTo(...pos[t[0]]);
    ctx.lineTo(...pos[t[1]]);
    ctx.lineTo(...pos[t[2]]);
    ctx.closePath();
    ctx.stroke();
  });
  ctx.fillStyle = "#333";
  for (const [x, y] of pos) {
    ctx.beginPath();
    ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function solve() {
  const a = common(), out = $("solve-out");
  const p = Number($("p").value);
  const inst = call(out, () => sampleInstance(a.family, a.n, a.param, p, a.seed));
  if (!inst) return;
  drawInstance(inst);
  const verdict = { factor: "triangle factor found", none: "no triangle factor", budget: "undecided (node budget)" };
  out.textContent = `${inst.vertices} vertices, ${inst.edges.length} of ${inst.base_edges} edges kept\n${verdict[inst.status]}`;
}

function plotCurve(points, trials) {
  const c = $("plot"), ctx = c.getContext("2d");
  const [w, h, m] = [c.width, c.height, 30];
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(m, m / 2, w - 1.5 * m, h - 1.5 * m);
  ctx.fillStyle = "#555";
  ctx.fillText("0", m - 10, h - m + 12);
  ctx.fillText("p = 1", w - m - 10, h - m + 12);
  ctx.fillText("1", m - 12, m / 2 + 4);
  const x = (p) => m + p * (w - 1.5 * m);
  const y = (r) => h - m - r * (h - 1.5 * m);
  ctx.strokeStyle = "#1f77b4";
  ctx.lineWidth = 2;
  ctx.beginPath();
  points.forEach((pt, i) => {
    const rate = pt.decided ? pt.successes / pt.decided : 0;
    i ? ctx.lineTo(x(pt.p), y(rate)) : ctx.moveTo(x(pt.p), y(rate));
  });
  ctx.stroke();
  ctx.fillText(`${trials} trials per point`, m + 6, m / 2 + 14);
}

function curve() {
  const a = common();
  const trials = Number($("trials").value), steps = Number($("steps").value);
  const pts = call($("lp-out"), () => successCurve(a.family, a.n, a.param, trials, steps, a.seed));
  if (pts) plotCurve(pts, trials);
}

function lp() {
  const a = common(), out = $("lp-out");
  const r = call(out, () => fractionalFactor(a.family, a.n, a.param, Number($("k").value), a.seed));
  if (!r) return;
  out.textContent =
    `packing value ${r.objective.toFixed(4)} of ${r.perfect.toFixed(4)}` +
    (r.fractional_factor ? " (perfect fractional factor)" : "") +
    `\nminimum degree ${r.min_degree}, largest integral K_${r.k}-matching ${r.integral_matching}`;
}

await init();
$("p").addEventListener("input", () => ($("pval").textContent = Number($("p").value).toFixed(2)));
$("solve").addEventListener("click", solve);
$("curve").addEventListener("click", curve);
$("lp").addEventListener("click", lp);
solve();

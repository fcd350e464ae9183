// Built by `wasm-pack build crates/web --target web --out-dir www/pkg`.
import init, { welfareCurve, continuationCurves, simulateVsAnalytic } from "./pkg/stigma_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const form = document.getElementById("params");
const errorBox = document.getElementById("error");

function params() {
  const data = new FormData(form);
  const out = {};
  for (const [key, value] of data.entries()) {
    if (key === "convention") continue;
    out[key] = key.startsWith("dist_") ? value : Number(value);
  }
  return JSON.stringify(out);
}

function convention() {
  return new FormData(form).get("convention");
}

function guarded(fn) {
  return () => {
    errorBox.textContent = "";
    try {
      fn();
    } catch (e) {
      errorBox.textContent = e.message ?? String(e);
    }
  };
}

// series: [{ name, xs, ys }]; marker: optional x position drawn as a dashed line
function plot(canvas, series, { xLabel, marker } = {}) {
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  const pad = { left: 60, right: 130, top: 15, bottom: 35 };
  ctx.clearRect(0, 0, width, height);

  const finite = (v) => Number.isFinite(v);
  const xs = series.flatMap((s) => s.xs).filter(finite);
  const ys = series.flatMap((s) => s.ys).filter(finite);
  let [xMin, xMax] = [Math.min(...xs), Math.max(...xs)];
  let [yMin, yMax] = [Math.min(...ys), Math.max(...ys)];
  if (yMax - yMin < 1e-12) [yMin, yMax] = [yMin - 0.5, yMax + 0.5];
  const yPad = 0.05 * (yMax - yMin);
  [yMin, yMax] = [yMin - yPad, yMax + yPad];

  const w = width - pad.left - pad.right;
  const h = height - pad.top - pad.bottom;
  const sx = (x) => pad.left + ((x - xMin) / (xMax - xMin)) * w;
  const sy = (y) => pad.top + ((yMax - y) / (yMax - yMin)) * h;

  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1;
  ctx.strokeRect(pad.left, pad.top, w, h);
  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const t = i / 4;
    const xv = xMin + t * (xMax - xMin);
    const yv = yMin + t * (yMax - yMin);
    ctx.textAlign = "center";
    ctx.fillText(xv.toPrecision(3), sx(xv), height - pad.bottom + 15);
    ctx.textAlign = "right";
    ctx.fillText(yv.toPrecision(4), pad.left - 5, sy(yv) + 4);
  }
  if (xLabel) {
    ctx.textAlign = "center";
    ctx.fillText(xLabel, pad.left + w / 2, height - 5);
  }
  if (marker !== undefined && marker !== null) {
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(sx(marker), pad.top);
    ctx.lineTo(sx(marker), pad.top + h);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  series.forEach((s, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.xs.forEach((x, j) => {
      const y = s.ys[j];
      if (j === 0) ctx.moveTo(sx(x), sy(y));
      else ctx.lineTo(sx(x), sy(y));
    });
    ctx.stroke();
    const ly = pad.top + 12 + 18 * i;
    ctx.fillStyle = COLORS[i % COLORS.length];
    ctx.fillRect(width - pad.right + 10, ly - 5, 18, 3);
    ctx.fillStyle = "#000";
    ctx.textAlign = "left";
    ctx.fillText(s.name, width - pad.right + 34, ly);
  });
}

function runWelfare() {
  const curve = JSON.parse(welfareCurve(params(), 101, convention()));
  const taus = curve.rows.map((r) => r.tau_hat);
  const mean = (k) => curve.rows.reduce((a, r) => a + r[k], 0) / curve.rows.length;
  const demeaned = (k) => {
    const m = mean(k);
    return curve.rows.map((r) => r[k] - m);
  };
  plot(
    document.getElementById("welfare-chart"),
    [
      { name: "W - mean", xs: taus, ys: demeaned("W") },
      { name: "W_A - mean", xs: taus, ys: demeaned("W_A") },
      { name: "W_B - mean", xs: taus, ys: demeaned("W_B") },
    ],
    { xLabel: "perceived risk tau_hat", marker: curve.tau_star },
  );
  const first = curve.rows[0].W;
  const last = curve.rows[curve.rows.length - 1].W;
  document.getElementById("welfare-summary").textContent =
    `tau* = ${curve.tau_star.toFixed(4)}, W(tau*) = ${curve.welfare_star.toFixed(6)}; ` +
    `W(0) = ${first.toFixed(6)}, W(1) = ${last.toFixed(6)} (${curve.convention})`;
}

function runContinuation() {
  const s = Number(document.getElementById("stigma").value);
  document.getElementById("stigma-value").textContent = s.toFixed(2);
  const c = JSON.parse(continuationCurves(params(), s, 201));
  plot(
    document.getElementById("continuation-chart"),
    [
      { name: "V_L", xs: c.y, ys: c.V_L },
      { name: "V_H", xs: c.y, ys: c.V_H },
    ],
    { xLabel: "valuation y", marker: c.y_star },
  );
  document.getElementById("continuation-summary").textContent =
    c.y_star === null ? "Every high-risk player tests." : `High-risk players with y < ${c.y_star.toFixed(4)} test.`;
}

function runSimulation() {
  const tau = Number(document.getElementById("sim-tau").value);
  const pairs = Number(document.getElementById("sim-pairs").value);
  const seed = Number(document.getElementById("sim-seed").value);
  const report = JSON.parse(simulateVsAnalytic(params(), tau, pairs, seed, convention()));
  const body = document.querySelector("#sim-table tbody");
  body.replaceChildren(
    ...report.comparisons.map((c) => {
      const tr = document.createElement("tr");
      for (const v of [c.name, c.simulated.toFixed(6), c.std_error.toExponential(2), c.analytic.toFixed(6), c.z.toFixed(2)]) {
        const td = document.createElement("td");
        td.textContent = v;
        tr.appendChild(td);
      }
      return tr;
    }),
  );
}

await init();
const welfare = guarded(runWelfare);
const continuation = guarded(runContinuation);
document.getElementById("run-welfare").addEventListener("click", welfare);
document.getElementById("stigma").addEventListener("input", continuation);
document.getElementById("run-sim").addEventListener("click", guarded(runSimulation));
form.addEventListener("change", () => {
  welfare();
  continuation();
});
welfare();
continuation();

import init, { curves, contour } from "./pkg/cavity_qfi_web.js";

const COUPLINGS = [0.01, 0.5, 1.0];
const COLORS = ["#1b6ac9", "#d9480f", "#2b8a3e"];
const STEPS = 600;
const PAD = { left: 56, right: 16, top: 12, bottom: 34 };

const $ = (id) => document.getElementById(id);

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function bindOutput(id, digits = 2) {
  const input = $(id);
  const out = $(id + "-out");
  const update = () => { out.textContent = Number(input.value).toFixed(digits); };
  input.addEventListener("input", update);
  update();
}

function axes(ctx, w, h, x0, x1, y0, y1, xlabel) {
  ctx.strokeStyle = "#888";
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.strokeRect(PAD.left, PAD.top, w - PAD.left - PAD.right, h - PAD.top - PAD.bottom);
  for (let i = 0; i <= 4; i++) {
    const x = PAD.left + (i / 4) * (w - PAD.left - PAD.right);
    ctx.fillText((x0 + (i / 4) * (x1 - x0)).toPrecision(3), x - 10, h - PAD.bottom + 16);
    const y = h - PAD.bottom - (i / 4) * (h - PAD.top - PAD.bottom);
    ctx.fillText((y0 + (i / 4) * (y1 - y0)).toPrecision(3), 4, y + 4);
  }
  ctx.fillText(xlabel, w / 2, h - 4);
}

function drawCurves() {
  const model = $("c-model").value;
  const quantity = $("c-quantity").value;
  const tEnd = Number($("c-tend").value);
  const data = curves(model, Number($("c-param").value), Number($("c-theta").value),
    new Float64Array(COUPLINGS), quantity, tEnd, STEPS);
  const n = STEPS + 1;
  const cols = COUPLINGS.map((_, k) => data.subarray(n * (k + 1), n * (k + 2)));
  const finite = cols.flatMap((c) => Array.from(c).filter(Number.isFinite));
  let lo = Math.min(0, ...finite);
  let hi = Math.max(...finite);
  if (quantity === "gamma") {
    lo = Math.max(lo, -5);
    hi = Math.min(hi, 10);
  }
  if (hi <= lo) hi = lo + 1;

  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  axes(ctx, w, h, 0, tEnd, lo, hi, model === "ohmic" ? "omega0 t" : "R t");
  const sx = (t) => PAD.left + (t / tEnd) * (w - PAD.left - PAD.right);
  const sy = (v) => h - PAD.bottom - ((v - lo) / (hi - lo)) * (h - PAD.top - PAD.bottom);
  ctx.save();
  ctx.beginPath();
  ctx.rect(PAD.left, PAD.top, w - PAD.left - PAD.right, h - PAD.top - PAD.bottom);
  ctx.clip();
  cols.forEach((col, k) => {
    ctx.strokeStyle = COLORS[k];
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let pen = false;
    for (let i = 0; i < n; i++) {
      if (!Number.isFinite(col[i])) { pen = false; continue; }
      const [x, y] = [sx(data[i]), sy(col[i])];
      if (pen) ctx.lineTo(x, y); else ctx.moveTo(x, y);
      pen = true;
    }
    ctx.stroke();
  });
  ctx.restore();
  $("c-legend").innerHTML = COUPLINGS
    .map((c, k) => `<span style="color:${COLORS[k]}">&Omega; = ${c}</span>`).join("");
}

// Viridis-like ramp on [0, 1].
function color(v) {
  const stops = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
  const x = Math.min(Math.max(v, 0), 1) * (stops.length - 1);
  const i = Math.min(Math.floor(x), stops.length - 2);
  const f = x - i;
  return stops[i].map((c, j) => Math.round(c + f * (stops[i + 1][j] - c)));
}

function drawContour() {
  const model = $("k-model").value;
  const axis = $("k-axis").value;
  const tEnd = Number($("k-tend").value);
  const fixed = Number($("k-fixed").value);
  const rows = 80;
  const steps = 300;
  // Sweeping Omega holds the spectral parameter at the slider value and
  // vice versa.
  const [param, spectral, coupling, from, to] = axis === "omega"
    ? ["omega", fixed, 1.0, 0.0, 1.0]
    : [model === "ohmic" ? "omega_c" : "lambda", 1.0, fixed, 0.03, 3.0];
  const data = contour(model, spectral, coupling, param, from, to, rows, tEnd, steps);

  const canvas = $("contour");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pw = w - PAD.left - PAD.right;
  const ph = h - PAD.top - PAD.bottom;
  const image = ctx.createImageData(pw, ph);
  for (let py = 0; py < ph; py++) {
    const r = Math.min(rows - 1, Math.floor(((ph - 1 - py) / ph) * rows));
    for (let px = 0; px < pw; px++) {
      const k = Math.min(steps, Math.round((px / (pw - 1)) * steps));
      const [cr, cg, cb] = color(data[r * (steps + 1) + k]);
      const o = 4 * (py * pw + px);
      image.data.set([cr, cg, cb, 255], o);
    }
  }
  ctx.putImageData(image, PAD.left, PAD.top);
  axes(ctx, w, h, 0, tEnd, from, to, model === "ohmic" ? "omega0 t" : "R t");
}

function syncLabels() {
  const ohmic = $("c-model").value === "ohmic";
  $("c-param-name").innerHTML = ohmic ? "&omega;<sub>c</sub>" : "&lambda;";
  const omegaAxis = $("k-axis").value === "omega";
  const kOhmic = $("k-model").value === "ohmic";
  $("k-fixed-name").innerHTML = omegaAxis ? (kOhmic ? "&omega;<sub>c</sub>" : "&lambda;") : "&Omega;";
}

function guarded(draw) {
  return () => {
    syncLabels();
    try {
      draw();
      showError(null);
    } catch (e) {
      showError(e);
    }
  };
}

await init();
["c-param", "c-theta", "c-tend", "k-fixed", "k-tend"].forEach((id) => bindOutput(id, id.endsWith("tend") ? 0 : 2));
const redrawCurves = guarded(drawCurves);
const redrawContour = guarded(drawContour);
["c-model", "c-quantity", "c-param", "c-theta", "c-tend"].forEach((id) => $(id).addEventListener("input", redrawCurves));
["k-model", "k-axis", "k-fixed", "k-tend"].forEach((id) => $(id).addEventListener("input", redrawContour));
redrawCurves();
redrawContour();

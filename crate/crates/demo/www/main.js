// Build the package first:
//   wasm-pack build crates/demo --target web --out-dir www/pkg
import init, { scattering_profile, energy_curve, lieb_liniger_density } from "./pkg/bdl_demo.js";

const COLORS = ["#1f5fa8", "#c0392b", "#27864a", "#8e44ad", "#d68910"];

// Draw named series sharing one x axis; null values leave gaps.
function plot(canvas, x, series, { logX = false, logY = false } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const fx = logX ? Math.log10 : (v) => v;
  const fy = logY ? Math.log10 : (v) => v;
  const xs = x.map(fx);
  const ys = series.flatMap((s) => s.y.filter((v) => v !== null && (!logY || v > 0)).map(fy));
  if (ys.length === 0) return;
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const px = (v) => pad + ((v - x0) / (x1 - x0)) * (W - 2 * pad);
  const py = (v) => H - pad - ((v - y0) / (y1 - y0)) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px monospace";
  const tick = (v, log) => (log ? "1e" + v.toFixed(1) : v.toPrecision(3));
  ctx.fillText(tick(x0, logX), pad, H - pad + 14);
  ctx.fillText(tick(x1, logX), W - pad - 40, H - pad + 14);
  ctx.fillText(tick(y1, logY), 2, pad + 4);
  ctx.fillText(tick(y0, logY), 2, H - pad);

  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.setLineDash(s.dashed ? [5, 4] : []);
    ctx.beginPath();
    let pen = false;
    s.y.forEach((v, i) => {
      if (v === null || (logY && v <= 0)) { pen = false; return; }
      const [X, Y] = [px(xs[i]), py(fy(v))];
      pen ? ctx.lineTo(X, Y) : ctx.moveTo(X, Y);
      pen = true;
    });
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.name, W - pad - 110, pad + 14 + 13 * k);
  });
  ctx.setLineDash([]);
}

function show(section, text, error = false) {
  const out = section.querySelector(".out");
  out.textContent = text;
  out.classList.toggle("err", error);
}

const field = (section, name) => section.querySelector(`[name=${name}]`);

function runScatter() {
  const s = document.getElementById("scatter");
  try {
    const r = JSON.parse(scattering_profile(field(s, "potential").value, Number(field(s, "dim").value)));
    plot(s.querySelector("canvas"), r.r, [
      { name: "u(r)", y: r.u },
      { name: "exterior", y: r.exterior, dashed: true },
    ]);
    show(s, `a = ${r.a.toPrecision(10)}   R = ${r.range}`);
  } catch (e) {
    show(s, String(e), true);
  }
}

function runEnergy() {
  const s = document.getElementById("energy");
  try {
    const r = JSON.parse(energy_curve(
      Number(field(s, "dim").value),
      Number(field(s, "a").value),
      Number(field(s, "rho_min").value),
      Number(field(s, "rho_max").value),
      Number(field(s, "count").value),
      field(s, "bogoliubov").checked,
    ));
    // plot e/ρ^2 so the leading behaviour in 3D is flat
    const series = r.series.map((c) => ({
      name: c.name,
      y: c.e.map((e, i) => (e === null ? null : e / (r.rho[i] * r.rho[i]))),
    }));
    plot(s.querySelector("canvas"), r.rho, series, { logX: true, logY: true });
    show(s, "plotted e/ρ² against ρ; higher-order constants set to zero");
  } catch (e) {
    show(s, String(e), true);
  }
}

function runLiebLiniger() {
  const s = document.getElementById("ll");
  const gamma = 10 ** Number(field(s, "log_gamma").value);
  s.querySelector(".gamma").textContent = gamma.toPrecision(4);
  try {
    const r = JSON.parse(lieb_liniger_density(gamma, Number(field(s, "nodes").value)));
    plot(s.querySelector("canvas"), r.x, [{ name: "g(x)", y: r.g }]);
    show(s, `ẽ = ${r.e_tilde.toPrecision(10)}   ẽ/(π²/3) = ${(r.e_tilde / r.tonks).toPrecision(8)}   λ = ${r.lambda.toPrecision(8)}`);
  } catch (e) {
    show(s, String(e), true);
  }
}

await init();
document.querySelector("#scatter button").addEventListener("click", runScatter);
document.querySelector("#energy button").addEventListener("click", runEnergy);
field(document.getElementById("ll"), "log_gamma").addEventListener("input", runLiebLiniger);
field(document.getElementById("ll"), "nodes").addEventListener("change", runLiebLiniger);
runScatter();
runEnergy();
runLiebLiniger();

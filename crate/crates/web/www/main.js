import init, { certify, deltaSurface, factor } from "./pkg/whstab_web.js";

const $ = (id) => document.getElementById(id);

const presets = {
  ex61: { k1: "1/5", k2: "5", theta: 0, zeta1: "1/5", zeta2: "5" },
  ex62: { k1: "1/5", k2: "1", theta: 6, zeta1: "1/4", zeta2: "4" },
  ex63: { k1: "1", k2: "1/2", theta: -7, zeta1: "1/10", zeta2: "10" },
};

const example = {
  rows: 2, cols: 2,
  entries: [
    [{ pmin: 0, coeffs: [{ re: "1", im: "0" }] }, { pmin: -1, coeffs: [{ re: "0", im: "1" }] }],
    [{ pmin: 0, coeffs: [{ re: "5", im: "0" }] }, { pmin: -1, coeffs: [{ re: "0", im: "5" }, { re: "1", im: "0" }] }],
  ],
};

function loadPreset() {
  const p = presets[$("family").value];
  for (const k of ["k1", "k2", "theta", "zeta1", "zeta2"]) $(k).value = p[k];
  $("theta").disabled = $("family").value === "ex61";
}

function spec() {
  const family = $("family").value;
  const s = { family, k1: $("k1").value.trim(), k2: $("k2").value.trim(), zeta1: $("zeta1").value.trim(), zeta2: $("zeta2").value.trim() };
  const theta = parseInt($("theta").value, 10);
  if (family === "ex62") {
    if (theta % 2 !== 0) throw new Error("ex62 needs an even theta");
    s.nu = theta / 2;
  } else if (family === "ex63") {
    s.theta = theta;
  }
  return JSON.stringify(s);
}

function guarded(f) {
  return () => {
    $("problem-error").textContent = "";
    try {
      f();
    } catch (e) {
      $("problem-error").textContent = e.message ?? String(e);
    }
  };
}

const fmt = (x) => (Number.isFinite(x) ? x.toExponential(4) : "inf");

function runCertify() {
  $("certify-status").textContent = "running...";
  // let the status paint before the synchronous work starts
  setTimeout(guarded(() => {
    const t0 = performance.now();
    let out;
    try {
      out = JSON.parse(certify(spec(), parseInt($("nmax").value, 10)));
    } finally {
      $("certify-status").textContent = "";
    }
    const rows = out.rows.map((r) =>
      `<tr class="${r.n === out.first_certified ? "first" : ""}"><td>${r.n}</td><td>${fmt(r.delta)}</td><td>${fmt(r.inv_plus)}</td>` +
      `<td>${fmt(r.inv_minus)}</td><td>${fmt(r.q)}</td><td>(${r.indices.join(", ")})</td><td>${r.verdict}</td></tr>`);
    $("certify-table").innerHTML =
      "<tr><th>N</th><th>delta_N</th><th>||a+^-1||</th><th>||a-^-1||</th><th>q_N</th><th>indices</th><th>verdict</th></tr>" + rows.join("");
    const first = out.first_certified === null ? "not certified in this range" : `certified at N=${out.first_certified}`;
    $("certify-status").textContent = `${first} (${((performance.now() - t0) / 1000).toFixed(1)} s)`;
  }), 10);
}

let grid = null;

function colour(t) {
  // dark blue for small delta through yellow for large
  const r = Math.round(255 * Math.min(1, Math.max(0, 1.6 * t - 0.3)));
  const g = Math.round(255 * Math.min(1, Math.max(0, 1.4 * t)));
  const b = Math.round(255 * Math.min(1, Math.max(0, 0.9 - t)));
  return [r, g, b];
}

const drawSurface = guarded(() => {
  const steps = 80;
  const k2 = parseFloat(parseRational($("k2").value));
  const z2hi = Number.isFinite(k2) && $("family").value === "ex61" ? 1.2 * k2 : 12;
  const z1 = [0.005, 0.995], z2 = [1.005, z2hi];
  const values = deltaSurface(spec(), parseInt($("surface-n").value, 10), z1[0], z1[1], z2[0], z2[1], steps);
  const finite = values.filter(Number.isFinite);
  const lo = Math.min(...finite), hi = Math.max(...finite);
  const canvas = $("canvas"), ctx = canvas.getContext("2d");
  const img = ctx.createImageData(steps, steps);
  for (let j = 0; j < steps; j++) {
    for (let i = 0; i < steps; i++) {
      const v = values[j * steps + i];
      const at = ((steps - 1 - j) * steps + i) * 4;
      const [r, g, b] = Number.isFinite(v) ? colour((v - lo) / (hi - lo || 1)) : [235, 235, 235];
      img.data.set([r, g, b, 255], at);
    }
  }
  const off = new OffscreenCanvas(steps, steps);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  grid = { values, steps, z1, z2 };
  const best = values.indexOf(lo);
  $("surface-info").textContent =
    `log10 delta_N from ${lo.toFixed(2)} to ${hi.toFixed(2)}; grey is outside the admissible annulus. ` +
    `Smallest at zeta1 = ${at(z1, best % steps, steps).toFixed(3)}, zeta2 = ${at(z2, Math.floor(best / steps), steps).toFixed(3)}.`;
});

function at([a, b], i, steps) {
  return a + ((b - a) * i) / (steps - 1);
}

function parseRational(s) {
  const [p, q] = s.split("/").map(Number);
  return q === undefined ? p : p / q;
}

$("canvas").addEventListener("mousemove", (e) => {
  if (!grid) return;
  const { values, steps, z1, z2 } = grid;
  const rect = e.target.getBoundingClientRect();
  const i = Math.min(steps - 1, Math.floor(((e.clientX - rect.left) / rect.width) * steps));
  const j = steps - 1 - Math.min(steps - 1, Math.floor(((e.clientY - rect.top) / rect.height) * steps));
  const v = values[j * steps + i];
  $("hover").textContent = `zeta1 = ${at(z1, i, steps).toFixed(3)}, zeta2 = ${at(z2, j, steps).toFixed(3)}: ` +
    (Number.isFinite(v) ? `delta_N = 10^${v.toFixed(3)}` : "inadmissible");
});

function runFactor() {
  try {
    $("factor-out").textContent = factor($("matrix").value, $("normalise").value);
    $("factor-out").classList.remove("error");
  } catch (e) {
    $("factor-out").textContent = e.message ?? String(e);
    $("factor-out").classList.add("error");
  }
}

await init();
$("matrix").value = JSON.stringify(example, null, 1);
$("family").addEventListener("change", loadPreset);
$("certify").addEventListener("click", runCertify);
$("surface").addEventListener("click", drawSurface);
$("factor").addEventListener("click", runFactor);
loadPreset();

import init, { profile, simulate, adversary } from "./pkg/migrate_sched_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f"];

function call(fn, out, ...args) {
  try {
    out.classList.remove("err");
    return JSON.parse(fn(...args));
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
    return null;
  }
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.font = "11px sans-serif";
  return ctx;
}

function bars(canvas, values, { ref, labels, width = canvas.width }) {
  const ctx = clear(canvas);
  const top = Math.max(...values, ref ?? 0) * 1.1 || 1;
  const w = width / values.length;
  const y = (v) => canvas.height - 18 - (v / top) * (canvas.height - 30);
  values.forEach((v, i) => {
    ctx.fillStyle = COLORS[i % COLORS.length];
    ctx.fillRect(i * w + 2, y(v), w - 4, canvas.height - 18 - y(v));
    ctx.fillStyle = "#222";
    ctx.fillText(labels ? labels[i] : String(i + 1), i * w + 4, canvas.height - 4);
  });
  if (ref !== undefined) {
    ctx.strokeStyle = "#b00";
    ctx.beginPath();
    ctx.moveTo(0, y(ref));
    ctx.lineTo(width, y(ref));
    ctx.stroke();
  }
}

function showProfile() {
  const m = Number($("pm").value);
  const out = $("pout");
  const p = call(profile, out, m, Math.max(m, 40));
  if (!p) return;
  out.textContent = `alpha_${m} = ${p.alpha} ~ ${p.alpha_dec.toFixed(6)}, mu = ${p.mu}\n`
    + `beta(j): ${p.beta.map((b) => b.toFixed(3)).join(" ")}`;
  const canvas = $("pcanvas");
  const half = canvas.width / 2;
  bars(canvas, p.beta, { ref: 1, width: half - 10 });
  const ctx = canvas.getContext("2d");
  ctx.strokeStyle = "#222";
  ctx.beginPath();
  const lo = 4 / 3, hi = 1.47;
  p.curve.forEach((a, i) => {
    const x = half + 10 + (i / (p.curve.length - 1)) * (half - 20);
    const y = canvas.height - 10 - ((a - lo) / (hi - lo)) * (canvas.height - 20);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#222";
  ctx.fillText(`alpha_k, k = 2..${p.curve.length + 1}`, half + 12, 14);
}

function randomSizes() {
  const n = 6 + Math.floor(Math.random() * 10);
  const sizes = Array.from({ length: n }, () => {
    const den = 1 + Math.floor(Math.random() * 4);
    const num = 1 + Math.floor(Math.random() * 10 * den);
    return den === 1 ? String(num) : `${num}/${den}`;
  });
  $("ssizes").value = sizes.join(" ");
}

function showSchedule() {
  const out = $("sout");
  const r = call(simulate, out, $("salg").value, Number($("sm").value), $("ssizes").value);
  if (!r) return;
  const moved = r.events.filter((e) => e.op === "migrate" && e.from !== e.to).length;
  out.textContent = `${r.alg}: makespan ${r.makespan}, lower bound ${r.lower_bound}`
    + (r.opt ? `, OPT ${r.opt} (ratio ${r.ratio_vs_opt.toFixed(4)})` : ", OPT not computed")
    + `\nmigrations ${r.migrations} (${moved} changed machine)`
    + (r.violations.length ? `\nviolations: ${r.violations.join("; ")}` : "");
  const canvas = $("scanvas");
  const ctx = clear(canvas);
  const loads = r.machines.map((jobs) => jobs.reduce((s, j) => s + j.p, 0));
  const top = Math.max(...loads) * 1.1 || 1;
  const h = (canvas.height - 10) / r.machines.length;
  r.machines.forEach((jobs, i) => {
    let x = 30;
    ctx.fillStyle = "#222";
    ctx.fillText(`M${i + 1}`, 4, i * h + h / 2 + 4);
    jobs.forEach((j) => {
      const w = (j.p / top) * (canvas.width - 40);
      ctx.fillStyle = COLORS[j.id % COLORS.length];
      ctx.fillRect(x, i * h + 4, w - 1, h - 8);
      if (w > 18) {
        ctx.fillStyle = "#fff";
        ctx.fillText(String(j.id), x + 3, i * h + h / 2 + 4);
      }
      x += w;
    });
  });
}

function showAdversary() {
  const out = $("aout");
  const r = call(adversary, out, $("aalg").value, Number($("am").value), Number($("an").value));
  if (!r) return;
  out.textContent = `${r.scheduler}, n' = ${r.n_prime}: branch ${r.branch}\n`
    + `makespan ${r.alg_makespan}, OPT <= ${r.opt_upper}, ratio >= ${r.ratio_lb_dec.toFixed(5)}`
    + ` (alpha_m ~ ${r.alpha_dec.toFixed(5)}), migrations ${r.migrations}`;
  const sorted = [...r.phase1_loads].sort((a, b) => a - b);
  bars($("acanvas"), sorted, { ref: r.alpha_dec });
}

await init();
$("pgo").onclick = showProfile;
$("srand").onclick = randomSizes;
$("sgo").onclick = showSchedule;
$("ago").onclick = showAdversary;
showProfile();
showSchedule();
showAdversary();

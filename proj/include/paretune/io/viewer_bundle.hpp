#pragma once

namespace paretune {

inline constexpr const char* kViewerStyle = R"CSS(
body{font:14px/1.4 system-ui,sans-serif;margin:1.5em;color:#222}
.banner{background:#fde2e1;border:1px solid #d33;padding:.8em;margin-bottom:1em}
.controls{margin-bottom:.6em}
.controls label{margin-right:1.2em}
#plot-wrap{position:relative;display:inline-block}
#tooltip{position:absolute;pointer-events:none;background:#fff;border:1px solid #888;padding:.4em .6em;font-size:12px;white-space:pre;display:none}
#detail{margin-top:1em;font-size:12px;white-space:pre;max-width:900px;overflow:auto}
circle.pareto{fill:#c0392b}
circle.dominated{fill:#95a5a6;opacity:.6}
circle.selected{stroke:#000;stroke-width:2}
)CSS";

inline constexpr const char* kViewerBundle = R"JS(
(function () {
  "use strict";
  var app = document.getElementById("app");

  function banner(msg) {
    var div = document.createElement("div");
    div.className = "banner";
    div.textContent = msg;
    app.appendChild(div);
  }

  function parseEmbedded(doc) {
    var block = doc.getElementById("pared-data");
    if (!block) return { error: "no embedded data" };
    var data;
    try {
      data = JSON.parse(block.textContent);
    } catch (e) {
      return { error: "embedded data is not valid JSON: " + e.message };
    }
    if (data.version !== "1") return { error: "unsupported results version " + data.version };
    return { data: data };
  }

  function nativeValue(e, i) {
    return e.directions[i] === "max" ? -e.objectives[i] : e.objectives[i];
  }

  function fmt(v) {
    return typeof v === "number" ? String(Number(v.toPrecision(6))) : String(v);
  }

  function tooltipText(e) {
    var lines = ["evaluation " + e.id];
    var hp = e.summary.hyperparameters || {};
    Object.keys(hp).forEach(function (k) { lines.push(k + ": " + fmt(hp[k])); });
    for (var i = 0; i < e.labels.length; i++) lines.push(e.labels[i] + ": " + fmt(nativeValue(e, i)));
    return lines.join("\n");
  }

  function detailText(e) {
    var s = e.summary, out = [tooltipText(e), ""];
    if (s.stats) Object.keys(s.stats).forEach(function (k) { out.push(k + ": " + fmt(s.stats[k])); });
    if (s.converged === false) out.push("solver did not converge");
    if (s.coefficients) out.push("coefficients: " + s.coefficients.map(function (c) { return c.name + "=" + fmt(c.value); }).join(", "));
    if (s.edges) s.edges.forEach(function (g, k) {
      var names = s.variables || [];
      out.push("group " + (k + 1) + " edges: " + g.map(function (e) {
        return (names[e[0]] || e[0]) + "-" + (names[e[1]] || e[1]);
      }).join(", "));
    });
    return out.join("\n");
  }

  function main() {
    var parsed = parseEmbedded(document);
    if (parsed.error) { banner(parsed.error); return; }
    var data = parsed.data;
    var ok = data.evaluations.filter(function (e) { return e.status === "ok"; });
    if (!ok.length) { banner("no successful evaluations"); return; }
    var pareto = {};
    data.pareto_ids.forEach(function (id) { pareto[id] = true; });
    var labels = ok[0].labels, q = labels.length;

    var h = document.createElement("h2");
    h.textContent = data.family + ": " + data.pareto_ids.length + " Pareto-optimal of " + ok.length + " evaluated";
    app.appendChild(h);

    var controls = document.createElement("div");
    controls.className = "controls";
    app.appendChild(controls);
    function axisSelect(name, initial) {
      var label = document.createElement("label");
      label.textContent = name + " ";
      var sel = document.createElement("select");
      for (var i = 0; i < q; i++) {
        var opt = document.createElement("option");
        opt.value = i;
        opt.textContent = labels[i];
        sel.appendChild(opt);
      }
      sel.value = initial;
      label.appendChild(sel);
      controls.appendChild(label);
      return sel;
    }
    var xs = axisSelect("x", 0), ys = axisSelect("y", 1);

    var wrap = document.createElement("div");
    wrap.id = "plot-wrap";
    app.appendChild(wrap);
    var tip = document.createElement("div");
    tip.id = "tooltip";
    var detail = document.createElement("div");
    detail.id = "detail";
    app.appendChild(detail);
    var selected = null;

    var W = 720, H = 480, M = 60, NS = "http://www.w3.org/2000/svg";
    function el(tag, attrs) {
      var n = document.createElementNS(NS, tag);
      Object.keys(attrs).forEach(function (k) { n.setAttribute(k, attrs[k]); });
      return n;
    }

    function render() {
      var xi = +xs.value, yi = +ys.value;
      wrap.innerHTML = "";
      var svg = el("svg", { width: W, height: H });
      var xv = ok.map(function (e) { return nativeValue(e, xi); });
      var yv = ok.map(function (e) { return nativeValue(e, yi); });
      function range(v) {
        var lo = Math.min.apply(null, v), hi = Math.max.apply(null, v);
        if (lo === hi) { lo -= 0.5; hi += 0.5; }
        var pad = 0.05 * (hi - lo);
        return [lo - pad, hi + pad];
      }
      var rx = range(xv), ry = range(yv);
      function sx(v) { return M + (v - rx[0]) / (rx[1] - rx[0]) * (W - 2 * M); }
      function sy(v) { return H - M - (v - ry[0]) / (ry[1] - ry[0]) * (H - 2 * M); }
      svg.appendChild(el("line", { x1: M, y1: H - M, x2: W - M, y2: H - M, stroke: "#444" }));
      svg.appendChild(el("line", { x1: M, y1: M, x2: M, y2: H - M, stroke: "#444" }));
      for (var t = 0; t <= 4; t++) {
        var vx = rx[0] + t / 4 * (rx[1] - rx[0]), vy = ry[0] + t / 4 * (ry[1] - ry[0]);
        var tx = el("text", { x: sx(vx), y: H - M + 16, "text-anchor": "middle", "font-size": 11 });
        tx.textContent = fmt(vx);
        svg.appendChild(tx);
        var ty = el("text", { x: M - 6, y: sy(vy) + 4, "text-anchor": "end", "font-size": 11 });
        ty.textContent = fmt(vy);
        svg.appendChild(ty);
      }
      var xl = el("text", { x: W / 2, y: H - 14, "text-anchor": "middle" });
      xl.textContent = labels[xi];
      svg.appendChild(xl);
      var yl = el("text", { x: 14, y: H / 2, transform: "rotate(-90 14 " + H / 2 + ")", "text-anchor": "middle" });
      yl.textContent = labels[yi];
      svg.appendChild(yl);

      var order = ok.slice().sort(function (a, b) { return (pareto[a.id] ? 1 : 0) - (pareto[b.id] ? 1 : 0); });
      order.forEach(function (e) {
        var cls = pareto[e.id] ? "pareto" : "dominated";
        if (selected === e.id) cls += " selected";
        var c = el("circle", { cx: sx(nativeValue(e, xi)), cy: sy(nativeValue(e, yi)), r: pareto[e.id] ? 6 : 4, "class": cls, "data-id": e.id });
        c.addEventListener("mouseenter", function (ev) {
          tip.textContent = tooltipText(e);
          tip.style.display = "block";
          tip.style.left = (ev.offsetX + 12) + "px";
          tip.style.top = (ev.offsetY + 12) + "px";
          detail.textContent = detailText(e);
        });
        c.addEventListener("mouseleave", function () { tip.style.display = "none"; });
        c.addEventListener("click", function () { selected = e.id; render(); detail.textContent = detailText(e); });
        svg.appendChild(c);
      });
      wrap.appendChild(svg);
      wrap.appendChild(tip);
    }
    xs.addEventListener("change", render);
    ys.addEventListener("change", render);
    render();
  }

  try { main(); } catch (e) { banner("viewer error: " + e.message); }
})();
)JS";

} // namespace paretune

/** Explorer UI: two synchronized map panes with plan selection and
 * attribute re-expression, a linked parallel-coordinates panel, and the
 * rotatable 3D metric cube.
 *
 * The UI never computes a metric: every number on screen is read from the
 * bundle and passed through format helpers untouched.
 */

// d3 loads as a page-level script (vendor/d3.min.js); only its types are
// imported here so the compiled module works from plain file serving.
import type * as d3types from "d3";

declare const d3: typeof d3types;

import { barHeight, classify, legendRanges, proportionalRadius, quantileBreaks, SymbolMode } from "./breaks.js";
import { cubePoints, cubeScales, dragRotation, hoverLabel, pick, projectPoint, Rotation } from "./cube.js";
import { describe } from "./descriptions.js";
import { cubeTooltip, displayValue, districtTooltip, shortValue } from "./format.js";
import { httpFetcher, loadBundle } from "./loader.js";
import { linkedLine, pcpAxes, pcpLines, PcpAxis, PcpLine } from "./pcp.js";
import { SchemaError } from "./schema.js";
import { fitBounds, PaneId, project, scaleFor, SyncedPanes, ViewState } from "./sync.js";
import { isGeographic, mercator, tileCover } from "./tiles.js";
import type { BundleIndex, DistrictFeature, PlanGeoJson } from "./types.js";

const PANE_SIZE: [number, number] = [440, 400];
const CUBE_SIZE = 420;
const CLASS_COLORS = ["#f1eef6", "#bdc9e1", "#74a9cf", "#2b8cbe", "#045a8d"];
const DISTRICT_PALETTE = d3.schemeTableau10;

interface RenderFeature {
  feature: DistrictFeature;
  rings: Array<Array<[number, number]>>;
  centroid: [number, number];
}

function ringsOf(geometry: { type: string; coordinates: unknown }): Array<Array<[number, number]>> {
  if (geometry.type === "Polygon") {
    return geometry.coordinates as Array<Array<[number, number]>>;
  }
  if (geometry.type === "MultiPolygon") {
    return (geometry.coordinates as Array<Array<Array<[number, number]>>>).flat();
  }
  return [];
}

function toRenderFeatures(plan: PlanGeoJson, geographic: boolean): RenderFeature[] {
  return plan.features.map((feature) => {
    const rings = ringsOf(feature.geometry).map((ring) =>
      ring.map((pt) => (geographic ? mercator(pt as [number, number]) : (pt as [number, number]))),
    );
    const exterior = rings[0] ?? [];
    const centroid: [number, number] = exterior.length
      ? [
          d3.mean(exterior, (p) => p[0]) as number,
          d3.mean(exterior, (p) => p[1]) as number,
        ]
      : [0, 0];
    return { feature, rings, centroid };
  });
}

interface PaneState {
  plan: string;
  svg: d3types.Selection<SVGSVGElement, unknown, null, undefined>;
  tileLayer: d3types.Selection<HTMLDivElement, unknown, null, undefined>;
}

export async function startApp(root: HTMLElement, bundleUrl: string): Promise<void> {
  let bundle: BundleIndex;
  try {
    bundle = await loadBundle(httpFetcher(bundleUrl));
  } catch (err) {
    const message = err instanceof SchemaError ? `Bundle schema error at ${err.path}` : String(err);
    d3.select(root).append("p").attr("class", "error").text(message);
    return;
  }

  if (bundle.manifest.plans.length === 0) {
    d3.select(root).append("p").attr("class", "empty-state")
      .text("This bundle contains no plans yet. Export plans to explore them here.");
    return;
  }

  const allPoints = bundle.manifest.plans.flatMap((plan) =>
    bundle.plans.get(plan.name)!.features.flatMap((f) => ringsOf(f.geometry).flat()),
  ) as Array<[number, number]>;
  const geographic = isGeographic(allPoints);
  const renderCache = new Map<string, RenderFeature[]>();
  for (const plan of bundle.manifest.plans) {
    renderCache.set(plan.name, toRenderFeatures(bundle.plans.get(plan.name)!, geographic));
  }

  const worldPoints = [...renderCache.values()].flatMap((fs) => fs.flatMap((f) => f.rings.flat()));
  const bounds: [[number, number], [number, number]] = [
    [d3.min(worldPoints, (p) => p[0])!, d3.min(worldPoints, (p) => p[1])!],
    [d3.max(worldPoints, (p) => p[0])!, d3.max(worldPoints, (p) => p[1])!],
  ];
  const panes = new SyncedPanes(fitBounds(bounds, PANE_SIZE));

  const container = d3.select(root);
  container.selectAll("*").remove();
  container.append("h1").text("Redistricting plan explorer");

  const controls = container.append("div").attr("class", "controls");
  controls.append("label").text("Symbolize districts by ");
  const attributeSelect = controls.append("select").attr("id", "attribute");
  for (const attr of bundle.manifest.attributes) {
    attributeSelect.append("option").attr("value", attr.key).text(attr.label);
  }
  controls.append("label").text(" as ");
  const modeSelect = controls.append("select").attr("id", "mode");
  for (const mode of ["choropleth", "bars", "symbols"] as SymbolMode[]) {
    modeSelect.append("option").attr("value", mode).text(mode);
  }

  const paneRow = container.append("div").attr("class", "pane-row");
  const paneStates = new Map<PaneId, PaneState>();
  const defaultPlans: Record<PaneId, string> = {
    left: bundle.manifest.plans[0].name,
    right: bundle.manifest.plans[Math.min(1, bundle.manifest.plans.length - 1)].name,
  };

  let hoveredDistrict: number | null = null;
  let currentAttribute = bundle.manifest.attributes[0].key;
  let currentMode: SymbolMode = "choropleth";

  for (const paneId of ["left", "right"] as PaneId[]) {
    const cell = paneRow.append("div").attr("class", "pane");
    const select = cell.append("select");
    for (const plan of bundle.manifest.plans) {
      select.append("option").attr("value", plan.name).text(plan.label);
    }
    select.property("value", defaultPlans[paneId]);

    const frame = cell.append("div").attr("class", "pane-frame")
      .style("width", `${PANE_SIZE[0]}px`).style("height", `${PANE_SIZE[1]}px`);
    const tileLayer = frame.append("div").attr("class", "tile-layer");
    const svg = frame.append("svg")
      .attr("width", PANE_SIZE[0]).attr("height", PANE_SIZE[1]);
    const state: PaneState = { plan: defaultPlans[paneId], svg, tileLayer };
    paneStates.set(paneId, state);

    select.on("change", () => {
      state.plan = select.property("value");
      renderEverything();
    });

    svg.call(
      d3.drag<SVGSVGElement, unknown>().on("drag", (event) => {
        panes.apply({ pane: paneId, type: "pan", dxPx: event.dx, dyPx: event.dy });
      }),
    );
    svg.on("wheel", (event: WheelEvent) => {
      event.preventDefault();
      panes.apply({ pane: paneId, type: "zoom", delta: event.deltaY < 0 ? 0.25 : -0.25 });
    });

    cell.append("div").attr("class", "legend").attr("id", `legend-${paneId}`);
  }

  const metricsPanel = container.append("div").attr("class", "plan-metrics");
  const pcpSection = container.append("div").attr("class", "pcp");
  pcpSection.append("h2").text("District attributes (parallel coordinates)");
  const pcpSvg = pcpSection.append("svg").attr("width", 920).attr("height", 260);

  const cubeSection = container.append("div").attr("class", "cube");
  cubeSection.append("h2").text("Ensemble metric cube");
  const cubeWrap = cubeSection.append("div").attr("class", "cube-wrap")
    .style("width", `${CUBE_SIZE}px`).style("height", `${CUBE_SIZE}px`);
  const canvas = cubeWrap.append("canvas")
    .attr("width", CUBE_SIZE).attr("height", CUBE_SIZE);
  const hint = cubeWrap.append("div").attr("class", "cube-hint").text("drag to rotate");
  const cubeTip = cubeWrap.append("pre").attr("class", "cube-tip").style("display", "none");

  const aboutSection = container.append("div").attr("class", "about");
  aboutSection.append("h2").text("About the metrics");
  const metricKeys = ["ir", "normalized_ir", "mean_polsby_popper", "efficiency_gap",
                      "seats_dem", "seats_rep", "cut_edges"];
  for (const key of [...metricKeys, ...bundle.manifest.attributes.map((a) => a.key)]) {
    const text = describe(key);
    if (!text) continue;
    aboutSection.append("p").attr("id", `desc-${key}`).attr("class", "metric-desc")
      .html(`<b>${key}</b>: ${text}`);
  }

  function highlightDescription(key: string): void {
    aboutSection.selectAll("p.metric-desc").classed("active", false);
    aboutSection.select(`#desc-${key}`).classed("active", true);
  }

  const points = cubePoints(bundle.cloud);
  const scales = points.length ? cubeScales(points) : null;
  let rotation: Rotation = { yaw: 0.7, pitch: 0.4 };
  const ensembleColor = d3.scaleOrdinal<string, string>(d3.schemeSet2)
    .domain([...new Set(points.map((p) => p.ensemble))]);

  function renderCube(): void {
    const ctx = (canvas.node() as HTMLCanvasElement).getContext("2d")!;
    ctx.clearRect(0, 0, CUBE_SIZE, CUBE_SIZE);
    if (!scales) {
      ctx.fillStyle = "#666";
      ctx.fillText("no ensemble point cloud in this bundle", 20, CUBE_SIZE / 2);
      return;
    }
    const order = points
      .map((p, i) => ({ i, s: projectPoint(p, scales, rotation, CUBE_SIZE) }))
      .sort((a, b) => a.s.depth - b.s.depth);
    for (const { i, s } of order) {
      ctx.beginPath();
      ctx.arc(s.x, s.y, 3, 0, 2 * Math.PI);
      ctx.fillStyle = ensembleColor(points[i].ensemble);
      ctx.globalAlpha = 0.8;
      ctx.fill();
    }
    ctx.globalAlpha = 1.0;
  }

  canvas.call(
    d3.drag<HTMLCanvasElement, unknown>().on("drag", (event) => {
      rotation = dragRotation(rotation, event.dx, event.dy);
      hint.classed("hidden", true);
      renderCube();
    }),
  );
  canvas.on("mousemove", (event: MouseEvent) => {
    if (!scales) return;
    const rect = (canvas.node() as HTMLCanvasElement).getBoundingClientRect();
    const cursor: [number, number] = [event.clientX - rect.left, event.clientY - rect.top];
    const index = pick(points, scales, rotation, CUBE_SIZE, cursor);
    if (index === null) {
      cubeTip.style("display", "none");
      return;
    }
    const label = hoverLabel(points[index]);
    cubeTip.style("display", "block")
      .style("left", `${cursor[0] + 12}px`).style("top", `${cursor[1] + 12}px`)
      .text(cubeTooltip(label.x, label.y, label.z, label.ensemble));
  });
  canvas.on("mouseleave", () => cubeTip.style("display", "none"));

  function renderPane(paneId: PaneId): void {
    const state = paneStates.get(paneId)!;
    const view = panes.get(paneId);
    const features = renderCache.get(state.plan)!;
    const geo = bundle.plans.get(state.plan)!;
    const values = geo.features.map((f) => f.properties[currentAttribute]);
    const breaks = quantileBreaks(values, CLASS_COLORS.length);

    renderTiles(state, view);

    const toPath = (rings: Array<Array<[number, number]>>): string =>
      rings
        .map((ring) =>
          ring
            .map((pt, i) => {
              const [sx, sy] = project(view, PANE_SIZE, pt);
              return `${i === 0 ? "M" : "L"}${sx.toFixed(2)},${sy.toFixed(2)}`;
            })
            .join("") + "Z",
        )
        .join("");

    const shapes = state.svg.selectAll<SVGPathElement, RenderFeature>("path.district")
      .data(features, (d) => String(d.feature.properties.district));
    shapes.enter()
      .append("path")
      .attr("class", "district")
      .merge(shapes)
      .attr("d", (d) => toPath(d.rings))
      .attr("fill", (d) =>
        currentMode === "choropleth"
          ? CLASS_COLORS[classify(d.feature.properties[currentAttribute], breaks)]
          : DISTRICT_PALETTE[(d.feature.properties.district - 1) % 10],
      )
      .attr("fill-opacity", currentMode === "choropleth" ? 0.92 : 0.35)
      .attr("stroke", "#222")
      .attr("stroke-width", (d) =>
        d.feature.properties.district === hoveredDistrict ? 3 : 1,
      )
      .on("mousemove", (_event, d) => {
        hoveredDistrict = d.feature.properties.district;
        renderHighlights();
      })
      .on("mouseleave", () => {
        hoveredDistrict = null;
        renderHighlights();
      })
      .append("title");
    shapes.exit().remove();
    state.svg.selectAll<SVGPathElement, RenderFeature>("path.district")
      .select("title")
      .text((d) =>
        districtTooltip(
          d.feature.properties.district,
          bundle.manifest.attributes.find((a) => a.key === currentAttribute)!.label,
          d.feature.properties[currentAttribute],
        ),
      );

    const maxValue = Math.max(...values);
    const symbols = state.svg.selectAll<SVGCircleElement, RenderFeature>("circle.symbol")
      .data(currentMode === "symbols" ? features : [], (d) => String(d.feature.properties.district));
    symbols.enter().append("circle").attr("class", "symbol")
      .merge(symbols)
      .attr("cx", (d) => project(view, PANE_SIZE, d.centroid)[0])
      .attr("cy", (d) => project(view, PANE_SIZE, d.centroid)[1])
      .attr("r", (d) => proportionalRadius(d.feature.properties[currentAttribute], maxValue))
      .attr("fill", "#c85000").attr("fill-opacity", 0.7).attr("stroke", "#7a3000");
    symbols.exit().remove();

    const bars = state.svg.selectAll<SVGRectElement, RenderFeature>("rect.bar")
      .data(currentMode === "bars" ? features : [], (d) => String(d.feature.properties.district));
    bars.enter().append("rect").attr("class", "bar")
      .merge(bars)
      .attr("x", (d) => project(view, PANE_SIZE, d.centroid)[0] - 7)
      .attr("y", (d) =>
        project(view, PANE_SIZE, d.centroid)[1] -
        barHeight(d.feature.properties[currentAttribute], breaks.min, breaks.max))
      .attr("width", 14)
      .attr("height", (d) =>
        barHeight(d.feature.properties[currentAttribute], breaks.min, breaks.max))
      .attr("fill", "#c85000").attr("fill-opacity", 0.85).attr("stroke", "#7a3000");
    bars.exit().remove();

    const legend = d3.select(`#legend-${paneId}`);
    legend.selectAll("*").remove();
    if (currentMode === "choropleth") {
      legendRanges(breaks).forEach((range, i) => {
        const row = legend.append("div").attr("class", "legend-row");
        row.append("span").attr("class", "swatch").style("background", CLASS_COLORS[i]);
        row.append("span").text(`${shortValue(range[0])} to ${shortValue(range[1])}`);
      });
    } else {
      legend.append("div").text(
        currentMode === "symbols" ? "symbol area tracks value" : "bar height tracks value");
    }
  }

  function renderTiles(state: PaneState, view: ViewState): void {
    const template = bundle.manifest.tile_url;
    state.tileLayer.selectAll("*").remove();
    if (!template || !geographic) return;
    const topLeftWorld: [number, number] = [
      view.center[0] - PANE_SIZE[0] / 2 / scaleFor(view.zoom),
      view.center[1] + PANE_SIZE[1] / 2 / scaleFor(view.zoom),
    ];
    const bottomRightWorld: [number, number] = [
      view.center[0] + PANE_SIZE[0] / 2 / scaleFor(view.zoom),
      view.center[1] - PANE_SIZE[1] / 2 / scaleFor(view.zoom),
    ];
    for (const tile of tileCover(template, [topLeftWorld[0], bottomRightWorld[1]],
                                 [bottomRightWorld[0], topLeftWorld[1]], scaleFor(view.zoom))) {
      const [sx, sy] = project(view, PANE_SIZE, tile.world);
      const sizePx = scaleFor(view.zoom) / (1 << tile.z);
      state.tileLayer.append("img")
        .attr("src", tile.url)
        .style("left", `${sx}px`).style("top", `${sy}px`)
        .style("width", `${sizePx}px`).style("height", `${sizePx}px`);
    }
  }

  function renderMetricsPanel(): void {
    metricsPanel.selectAll("*").remove();
    for (const paneId of ["left", "right"] as PaneId[]) {
      const planName = paneStates.get(paneId)!.plan;
      const plan = bundle.manifest.plans.find((p) => p.name === planName)!;
      const box = metricsPanel.append("div").attr("class", "metric-box");
      box.append("h3").text(plan.label);
      const m = plan.metrics;
      const rows: Array<[string, number]> = [
        ["Interaction ratio", m.ir],
        ["Normalized IR", m.normalized_ir],
        ["Mean Polsby-Popper", m.mean_polsby_popper],
        ["Efficiency gap", m.efficiency_gap],
        ["Seats (D)", m.seats_dem],
        ["Seats (R)", m.seats_rep],
        ["Cut edges", m.cut_edges],
      ];
      for (const [label, value] of rows) {
        const row = box.append("div").attr("class", "metric-row");
        row.append("span").text(label);
        row.append("b").text(displayValue(value));
      }
    }
  }

  let axes: PcpAxis[] = [];
  let leftLines: PcpLine[] = [];
  let rightLines: PcpLine[] = [];

  function renderPcp(): void {
    const leftPlan = bundle.plans.get(paneStates.get("left")!.plan)!;
    const rightPlan = bundle.plans.get(paneStates.get("right")!.plan)!;
    axes = pcpAxes(bundle.manifest.attributes, [leftPlan, rightPlan]);
    leftLines = pcpLines(leftPlan, axes);
    rightLines = pcpLines(rightPlan, axes);

    const width = 920;
    const height = 260;
    const margin = { top: 36, bottom: 14, left: 40, right: 40 };
    const x = (frac: number) => margin.left + frac * (width - margin.left - margin.right);
    const y = (frac: number) => height - margin.bottom - frac * (height - margin.top - margin.bottom);

    pcpSvg.selectAll("*").remove();
    for (const axis of axes) {
      pcpSvg.append("line")
        .attr("x1", x(axis.xFrac)).attr("x2", x(axis.xFrac))
        .attr("y1", y(0)).attr("y2", y(1))
        .attr("stroke", "#999");
      pcpSvg.append("text")
        .attr("class", axis.key === currentAttribute ? "axis-label active" : "axis-label")
        .attr("x", x(axis.xFrac)).attr("y", margin.top - 14)
        .attr("text-anchor", "middle")
        .style("cursor", "pointer")
        .style("font-weight", "bold")
        .text(axis.label)
        .on("click", () => {
          currentAttribute = axis.key;
          attributeSelect.property("value", axis.key);
          renderEverything();
          highlightDescription(axis.key);
        });
    }
    const drawLines = (lines: PcpLine[], color: string, tag: string) => {
      for (const line of lines) {
        pcpSvg.append("path")
          .attr("class", `pcp-line ${tag}`)
          .attr("data-district", line.district)
          .attr("d", line.vertices.map(([fx, fy], i) =>
            `${i === 0 ? "M" : "L"}${x(fx)},${y(fy)}`).join(""))
          .attr("fill", "none")
          .attr("stroke", color)
          .attr("stroke-width", line.district === hoveredDistrict ? 3.5 : 1.5)
          .attr("opacity", 0.85)
          .on("mousemove", () => {
            hoveredDistrict = line.district;
            renderHighlights();
          })
          .on("mouseleave", () => {
            hoveredDistrict = null;
            renderHighlights();
          })
          .append("title")
          .text(axes.map((a) => `${a.label}: ${displayValue(line.values[a.key])}`).join("\n"));
      }
    };
    drawLines(leftLines, "#2b6cb0", "left");
    drawLines(rightLines, "#c05621", "right");
  }

  function renderHighlights(): void {
    for (const paneId of ["left", "right"] as PaneId[]) {
      paneStates.get(paneId)!.svg.selectAll<SVGPathElement, RenderFeature>("path.district")
        .attr("stroke-width", (d) =>
          d.feature.properties.district === hoveredDistrict ? 3 : 1);
    }
    pcpSvg.selectAll<SVGPathElement, unknown>("path.pcp-line")
      .attr("stroke-width", function () {
        return Number(d3.select(this).attr("data-district")) === hoveredDistrict ? 3.5 : 1.5;
      });
    const hovered = linkedLine(leftLines, hoveredDistrict) ?? linkedLine(rightLines, hoveredDistrict);
    pcpSvg.selectAll("text.axis-label").classed("linked", hovered !== null);
  }

  function renderEverything(): void {
    currentMode = modeSelect.property("value") as SymbolMode;
    currentAttribute = attributeSelect.property("value");
    renderPane("left");
    renderPane("right");
    renderMetricsPanel();
    renderPcp();
    renderCube();
  }

  attributeSelect.on("change", () => {
    renderEverything();
    highlightDescription(attributeSelect.property("value"));
  });
  modeSelect.on("change", renderEverything);
  panes.onChange(() => {
    renderPane("left");
    renderPane("right");
  });

  renderEverything();
}

declare global {
  interface Window {
    startExplorer: typeof startApp;
  }
}

if (typeof window !== "undefined") {
  window.startExplorer = startApp;
}

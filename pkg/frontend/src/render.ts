import * as echarts from "echarts";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { parseSweepCsv } from "./csv.js";
import { chartOption, type FigureSpec } from "./figures.js";

export function renderSvg(option: echarts.EChartsOption, width = 840, height = 520): string {
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

/** CSV in, SVG out. Returns the output path. */
export function renderFigure(spec: FigureSpec): string {
  const rows = parseSweepCsv(readFileSync(spec.input, "utf8"));
  const svg = renderSvg(chartOption(spec.figure, rows, spec), spec.width ?? 840, spec.height ?? 520);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg);
  return spec.output;
}

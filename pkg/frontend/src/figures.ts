import type { EChartsOption, SeriesOption } from "echarts";
import type { SweepRow } from "./csv.js";

export type FigureId = "fig2" | "fig3" | "fig4" | "fig5";

export const FIGURE_IDS: readonly FigureId[] = ["fig2", "fig3", "fig4", "fig5"];

export interface FigureSpec {
  figure: FigureId;
  /** Input CSV path. */
  input: string;
  /** Output SVG path. */
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  width?: number;
  height?: number;
}

interface FigureDef {
  title: string;
  xLabel: string;
  yLabel: string;
  yColumn: "objective" | "d_s_analytic" | "d_p_analytic";
  simColumn: "d_s_sim" | "d_p_sim" | null;
}

// Which columns each canned experiment plots. fig2 is analytic-only by
// construction (its objective is a region boundary, not a throughput at the
// base load, so no simulated column matches it).
export const FIGURE_DEFS: Record<FigureId, FigureDef> = {
  fig2: {
    title: "Supportable secondary load vs primary load",
    xLabel: "primary arrival probability",
    yLabel: "largest supportable secondary load",
    yColumn: "objective",
    simColumn: null,
  },
  fig3: {
    title: "Best secondary delay vs secondary load",
    xLabel: "secondary arrival probability",
    yLabel: "mean secondary delay (slots)",
    yColumn: "d_s_analytic",
    simColumn: "d_s_sim",
  },
  fig4: {
    title: "Primary delay at the optimum sits on the cap",
    xLabel: "secondary arrival probability",
    yLabel: "mean primary delay (slots)",
    yColumn: "d_p_analytic",
    simColumn: "d_p_sim",
  },
  fig5: {
    title: "Primary delay at the optimum vs primary load",
    xLabel: "primary arrival probability",
    yLabel: "mean primary delay (slots)",
    yColumn: "d_p_analytic",
    simColumn: "d_p_sim",
  },
};

export interface FigureSeries {
  name: string;
  psi: number;
  /** Analytic values, x ascending. */
  line: Array<[number, number]>;
  /** Simulated values, drawn as markers. */
  markers: Array<[number, number]>;
}

export function seriesName(psi: number): string {
  return Number.isFinite(psi) ? `cap ${psi}` : "no cap";
}

/**
 * Group rows into one series per cap value (plus the uncapped baseline when
 * present). Infeasible rows and non-finite y values are dropped, so a
 * baseline series whose plotted quantity diverges everywhere disappears
 * rather than rendering a broken line.
 */
export function figureSeries(figure: FigureId, rows: SweepRow[]): FigureSeries[] {
  const def = FIGURE_DEFS[figure];
  const groups = new Map<number, SweepRow[]>();
  for (const r of rows) {
    const g = groups.get(r.psi);
    if (g) g.push(r);
    else groups.set(r.psi, [r]);
  }
  const out: FigureSeries[] = [];
  for (const [psi, g] of groups) {
    const line: Array<[number, number]> = [];
    const markers: Array<[number, number]> = [];
    for (const r of g) {
      if (r.status !== "feasible") continue;
      const y = r[def.yColumn];
      if (y !== null && Number.isFinite(y)) line.push([r.swept, y]);
      if (def.simColumn !== null) {
        const s = r[def.simColumn];
        if (s !== null && Number.isFinite(s)) markers.push([r.swept, s]);
      }
    }
    line.sort((p, q) => p[0] - q[0]);
    markers.sort((p, q) => p[0] - q[0]);
    if (line.length > 0 || markers.length > 0) out.push({ name: seriesName(psi), psi, line, markers });
  }
  return out;
}

const PALETTE = ["#5470c6", "#ee6666", "#91cc75", "#fac858", "#73c0de"];

/** Build the chart description: analytic lines, simulation markers. */
export function chartOption(figure: FigureId, rows: SweepRow[], spec?: Partial<FigureSpec>): EChartsOption {
  const def = FIGURE_DEFS[figure];
  const groups = figureSeries(figure, rows);
  const series: SeriesOption[] = [];
  groups.forEach((g, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    series.push({
      name: g.name,
      type: "line",
      showSymbol: false,
      data: g.line,
      color,
      lineStyle: { width: 2 },
    });
    if (g.markers.length > 0) {
      series.push({
        name: `${g.name} (sim)`,
        type: "scatter",
        symbol: "circle",
        symbolSize: 7,
        data: g.markers,
        color,
        itemStyle: { opacity: 0.85 },
      });
    }
  });
  return {
    animation: false,
    title: { text: spec?.title ?? def.title, left: "center" },
    legend: { bottom: 0 },
    grid: { left: 70, right: 30, top: 50, bottom: 70 },
    xAxis: { type: "value", name: spec?.xLabel ?? def.xLabel, nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: spec?.yLabel ?? def.yLabel, nameLocation: "middle", nameGap: 45 },
    series,
  };
}

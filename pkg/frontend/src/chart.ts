/** Canvas strip chart for the vitals stream with the alert threshold lines. */

import type { VitalsPoint } from "./state.js";
import { THRESHOLDS } from "./types.js";

interface Series {
  label: string;
  color: string;
  value: (p: VitalsPoint) => number;
  threshold: number;
  min: number;
  max: number;
}

const SERIES: Series[] = [
  { label: "systolic mmHg", color: "#e05252", value: (p) => p.systolic, threshold: THRESHOLDS.systolic, min: 60, max: 230 },
  { label: "heart rate bpm", color: "#3b82d8", value: (p) => p.heartRate, threshold: THRESHOLDS.heart_rate, min: 40, max: 160 },
  { label: "SpO2 %", color: "#2b9e6f", value: (p) => p.spo2, threshold: THRESHOLDS.spo2, min: 80, max: 101 },
];

export function drawVitalsChart(canvas: HTMLCanvasElement, points: VitalsPoint[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const laneH = height / SERIES.length;

  SERIES.forEach((series, lane) => {
    const top = lane * laneH;
    const y = (v: number) =>
      top + laneH - ((v - series.min) / (series.max - series.min)) * (laneH - 14) - 4;

    ctx.strokeStyle = "#ddd";
    ctx.strokeRect(0.5, top + 0.5, width - 1, laneH - 1);

    ctx.strokeStyle = "#c08a2d";
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(0, y(series.threshold));
    ctx.lineTo(width, y(series.threshold));
    ctx.stroke();
    ctx.setLineDash([]);

    if (points.length > 1) {
      ctx.strokeStyle = series.color;
      ctx.lineWidth = 1.6;
      ctx.beginPath();
      points.forEach((p, i) => {
        const x = (i / (points.length - 1)) * (width - 8) + 4;
        if (i === 0) ctx.moveTo(x, y(series.value(p)));
        else ctx.lineTo(x, y(series.value(p)));
      });
      ctx.stroke();
      ctx.lineWidth = 1;
    }

    ctx.fillStyle = "#444";
    ctx.font = "11px system-ui";
    const latest = points.length ? series.value(points[points.length - 1]!) : null;
    ctx.fillText(
      `${series.label}${latest === null ? "" : `  ${latest.toFixed(0)}`}`,
      6,
      top + 13,
    );
  });
}

/** Parallel-coordinates geometry: one axis per attribute, one polyline per
 * district, with hover linkage back to map districts by district id. */

import type { AttributeEntry, PlanGeoJson } from "./types.js";

export interface PcpAxis {
  key: string;
  label: string;
  min: number;
  max: number;
  xFrac: number;
}

export interface PcpLine {
  district: number;
  /** One [xFrac, yFrac] vertex per axis, yFrac 0 at the bottom. */
  vertices: Array<[number, number]>;
  /** Raw attribute values straight from the bundle, keyed like the axes. */
  values: Record<string, number>;
}

export function pcpAxes(attributes: AttributeEntry[], plans: PlanGeoJson[]): PcpAxis[] {
  return attributes.map((attr, i) => {
    const values = plans.flatMap((plan) =>
      plan.features.map((f) => f.properties[attr.key]),
    );
    const min = Math.min(...values);
    const max = Math.max(...values);
    return {
      key: attr.key,
      label: attr.label,
      min,
      max: max > min ? max : min + 1,
      xFrac: attributes.length === 1 ? 0.5 : i / (attributes.length - 1),
    };
  });
}

export function pcpLines(plan: PlanGeoJson, axes: PcpAxis[]): PcpLine[] {
  return plan.features.map((feature) => {
    const values: Record<string, number> = {};
    const vertices = axes.map((axis): [number, number] => {
      const value = feature.properties[axis.key];
      values[axis.key] = value;
      return [axis.xFrac, (value - axis.min) / (axis.max - axis.min)];
    });
    return { district: feature.properties.district, vertices, values };
  });
}

/** District whose polyline should highlight for a hovered district id. */
export function linkedLine(lines: PcpLine[], district: number | null): PcpLine | null {
  if (district === null) return null;
  return lines.find((line) => line.district === district) ?? null;
}

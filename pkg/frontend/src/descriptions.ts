/** Plain-language descriptions for every metric and district attribute the
 * explorer can display, linked from the charts that show them. */

const DESCRIPTIONS: Record<string, string> = {
  ir:
    "Interaction ratio: total person-flow that stays inside a district " +
    "divided by total flow that crosses district lines. Higher values mean " +
    "the plan keeps communities of movement together.",
  normalized_ir:
    "Normalized interaction ratio: within-district flow as a share of all " +
    "flow, between 0 and 1. Equals IR / (1 + IR).",
  mean_polsby_popper:
    "Mean Polsby-Popper compactness: the average over districts of " +
    "4 * pi * area / perimeter squared. 1 is a perfect circle; long or " +
    "ragged districts score near 0.",
  polsby_popper:
    "Polsby-Popper compactness of this district: 4 * pi * area / perimeter " +
    "squared, between 0 (least compact) and 1 (a circle).",
  efficiency_gap:
    "Efficiency gap: wasted Democratic votes minus wasted Republican votes, " +
    "as a share of all votes. A winner's votes past 50% plus one are " +
    "wasted; every losing vote is wasted.",
  eff_gap_share:
    "This district's contribution to the plan-wide efficiency gap " +
    "(its wasted-vote difference over the statewide vote total).",
  seats_dem: "Districts where the Democratic tally exceeds the Republican tally.",
  seats_rep: "Districts where the Republican tally exceeds the Democratic tally.",
  cut_edges:
    "Cut edges: adjacent unit pairs split between two districts. A discrete " +
    "compactness measure; chains bound it at a multiple of the seed plan's count.",
  intra_flows:
    "Person-trips per month that start and end inside this district " +
    "(plan-level: inside any single district).",
  inter_flows:
    "Person-trips per month crossing this district's boundary (plan-level: " +
    "crossing any district boundary).",
  population: "Resident population of the district.",
  voting_age_pop: "Residents aged 18 or older.",
  votes_dem: "Democratic votes cast, summed over the district's units.",
  votes_rep: "Republican votes cast, summed over the district's units.",
  area: "District area in square kilometers.",
  perimeter: "District boundary length in kilometers.",
};

export function describe(key: string): string {
  return DESCRIPTIONS[key] ?? "";
}

export function describedKeys(): string[] {
  return Object.keys(DESCRIPTIONS);
}

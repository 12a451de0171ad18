// Control state, round-tripped through the URL query string so sessions
// are shareable.

import type { EngineSettings } from "./api.js";

export const DEFAULT_SETTINGS: EngineSettings = {
  algorithm: "kmeans",
  level: "goal",
  granularity: 3,
  frequency_param: 1,
  seed: 104,
};

const ALGORITHMS = ["kmeans", "gmm", "farthest_first"];
const LEVELS = ["goal", "tactic", "tree"];

function clampInt(raw: string | null, low: number, high: number, fallback: number): number {
  const value = raw === null ? NaN : parseInt(raw, 10);
  if (Number.isNaN(value)) return fallback;
  return Math.min(high, Math.max(low, value));
}

export function settingsFromQuery(query: string): EngineSettings {
  const params = new URLSearchParams(query);
  const algorithm = params.get("algorithm") ?? DEFAULT_SETTINGS.algorithm;
  const level = params.get("level") ?? DEFAULT_SETTINGS.level;
  return {
    algorithm: ALGORITHMS.includes(algorithm) ? algorithm : DEFAULT_SETTINGS.algorithm,
    level: LEVELS.includes(level) ? level : DEFAULT_SETTINGS.level,
    granularity: clampInt(params.get("g"), 1, 5, DEFAULT_SETTINGS.granularity),
    frequency_param: clampInt(params.get("f"), 1, 3, DEFAULT_SETTINGS.frequency_param),
    seed: clampInt(params.get("seed"), 0, 2 ** 31, DEFAULT_SETTINGS.seed),
  };
}

export function queryFromSettings(settings: EngineSettings): string {
  const params = new URLSearchParams();
  params.set("algorithm", settings.algorithm);
  params.set("level", settings.level);
  params.set("g", String(settings.granularity));
  params.set("f", String(settings.frequency_param));
  params.set("seed", String(settings.seed));
  return "?" + params.toString();
}

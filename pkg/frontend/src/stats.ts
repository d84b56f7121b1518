/** Per-round mean and sample standard deviation across a group of runs. */
import { RunSeries, readRunCsv } from "./csv.js";

export interface GroupStats {
  label: string;
  rounds: number[];
  mean: number[];
  /** Sample standard deviation (n-1 denominator); all zeros when n = 1. */
  std: number[];
  runCount: number;
}

export function groupStats(label: string, runs: RunSeries[]): GroupStats {
  if (runs.length === 0) {
    throw new Error(`group '${label}': no runs`);
  }
  const T = runs[0].rounds.length;
  for (const run of runs) {
    if (run.rounds.length !== T) {
      throw new Error(
        `group '${label}': horizon mismatch: ${runs[0].path} has T=${T} ` +
          `but ${run.path} has T=${run.rounds.length}`,
      );
    }
  }
  const n = runs.length;
  const mean = new Array<number>(T);
  const std = new Array<number>(T);
  for (let t = 0; t < T; t++) {
    let sum = 0;
    for (const run of runs) sum += run.cumRegret[t];
    const m = sum / n;
    mean[t] = m;
    if (n < 2) {
      std[t] = 0;
    } else {
      let ss = 0;
      for (const run of runs) ss += (run.cumRegret[t] - m) ** 2;
      std[t] = Math.sqrt(ss / (n - 1));
    }
  }
  return { label, rounds: runs[0].rounds.slice(), mean, std, runCount: n };
}

export function loadGroup(label: string, paths: string[]): GroupStats {
  if (paths.length === 0) {
    throw new Error(`group '${label}': no run files matched`);
  }
  return groupStats(label, paths.map(readRunCsv));
}

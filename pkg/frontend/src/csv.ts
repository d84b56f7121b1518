/** Reading the experiment CSVs: per-run trajectories and the summary row. */
import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface RunSeries {
  path: string;
  rounds: number[];
  cumRegret: number[];
}

export interface SummaryRow {
  policy: string;
  env: string;
  T: number;
  seeds: number;
  meanFinalRegret: number;
  stdFinalRegret: number;
}

const RUN_COLUMNS = ["round", "chosen", "reward", "regret", "cum_regret", "pr_iters"];
const SUMMARY_COLUMNS = ["policy", "env", "T", "seeds", "mean_final_regret", "std_final_regret"];

function splitCsv(path: string): string[][] {
  const text = readFileSync(path, "utf8");
  return text
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line) => line.split(","));
}

function checkHeader(path: string, header: string[], wanted: string[]): void {
  for (const col of wanted) {
    if (!header.includes(col)) {
      throw new SchemaError(`${path}: missing column '${col}' (header: ${header.join(",")})`);
    }
  }
}

function numeric(path: string, row: number, name: string, raw: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${path}: row ${row}: non-numeric ${name} ${JSON.stringify(raw)}`);
  }
  return value;
}

export function readRunCsv(path: string): RunSeries {
  const rows = splitCsv(path);
  if (rows.length === 0) throw new SchemaError(`${path}: empty file`);
  const header = rows[0];
  checkHeader(path, header, RUN_COLUMNS);
  const roundAt = header.indexOf("round");
  const cumAt = header.indexOf("cum_regret");
  const rounds: number[] = [];
  const cumRegret: number[] = [];
  for (let i = 1; i < rows.length; i++) {
    rounds.push(numeric(path, i, "round", rows[i][roundAt]));
    cumRegret.push(numeric(path, i, "cum_regret", rows[i][cumAt]));
  }
  if (rounds.length === 0) throw new SchemaError(`${path}: no data rows`);
  return { path, rounds, cumRegret };
}

export function readSummaryCsv(path: string): SummaryRow {
  const rows = splitCsv(path);
  if (rows.length < 2) throw new SchemaError(`${path}: expected a header and one row`);
  checkHeader(path, rows[0], SUMMARY_COLUMNS);
  const at = (name: string) => rows[0].indexOf(name);
  const row = rows[1];
  return {
    policy: row[at("policy")],
    env: row[at("env")],
    T: numeric(path, 1, "T", row[at("T")]),
    seeds: numeric(path, 1, "seeds", row[at("seeds")]),
    meanFinalRegret: numeric(path, 1, "mean_final_regret", row[at("mean_final_regret")]),
    stdFinalRegret: numeric(path, 1, "std_final_regret", row[at("std_final_regret")]),
  };
}

import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { renderSvg } from "../src/chart.js";
import { main, parseGroupSpec } from "../src/cli.js";
import { groupStats } from "../src/stats.js";

const HEADER = "round,chosen,reward,regret,cum_regret,pr_iters";

function fakeRun(path: string, cum: number[]): void {
  const lines = [HEADER];
  let prev = 0;
  cum.forEach((c, i) => {
    lines.push(`${i + 1},0,0,${c - prev},${c},1`);
    prev = c;
  });
  writeFileSync(path, lines.join("\n") + "\n");
}

function series(label: string, cums: number[][]) {
  const runs = cums.map((cum, i) => ({
    path: `${label}-${i}`,
    rounds: cum.map((_, t) => t + 1),
    cumRegret: cum,
  }));
  return groupStats(label, runs);
}

describe("renderSvg", () => {
  it("emits one line and one band per group plus labeled axes", () => {
    const svg = renderSvg(
      [series("PRB", [[1, 2], [1, 4]]), series("Random", [[2, 4]])],
      { title: "regret" },
    );
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
    expect((svg.match(/<polygon/g) ?? []).length).toBe(2);
    expect(svg).toContain(">round</text>");
    expect(svg).toContain("cumulative regret");
    expect(svg).toContain("PRB");
    expect(svg).toContain("Random");
    expect(svg).toContain("regret");
  });

  it("is deterministic", () => {
    const g = [series("A", [[1, 2, 3], [2, 3, 5]])];
    expect(renderSvg(g)).toBe(renderSvg(g));
  });

  it("escapes markup in labels and titles", () => {
    const svg = renderSvg([series("a<b>&c", [[1]])], { title: 'x"y' });
    expect(svg).toContain("a&lt;b&gt;&amp;c");
    expect(svg).toContain("x&quot;y");
    expect(svg).not.toContain("<b>");
  });

  it("rejects an empty group list", () => {
    expect(() => renderSvg([])).toThrow(/no groups/);
  });
});

describe("parseGroupSpec", () => {
  it("splits on the first colon", () => {
    expect(parseGroupSpec("PRB:results/run_*.csv")).toEqual({
      label: "PRB",
      glob: "results/run_*.csv",
    });
    expect(parseGroupSpec("a:b:c")).toEqual({ label: "a", glob: "b:c" });
  });

  it("rejects malformed specs", () => {
    expect(() => parseGroupSpec("nolabel")).toThrow(/LABEL:GLOB/);
    expect(() => parseGroupSpec(":glob")).toThrow(/LABEL:GLOB/);
    expect(() => parseGroupSpec("label:")).toThrow(/LABEL:GLOB/);
  });
});

describe("cli render", () => {
  it("writes an svg from globbed runs", async () => {
    const dir = mkdtempSync(join(tmpdir(), "prb-plots-"));
    fakeRun(join(dir, "run_0.csv"), [1, 2, 3]);
    fakeRun(join(dir, "run_1.csv"), [1, 3, 5]);
    const out = join(dir, "fig.svg");
    const rc = await main(["render", "--out", out, "--group", `PRB:${dir}/run_*.csv`]);
    expect(rc).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("writes a png", async () => {
    const dir = mkdtempSync(join(tmpdir(), "prb-plots-"));
    fakeRun(join(dir, "run_0.csv"), [1, 2]);
    const out = join(dir, "fig.png");
    const rc = await main(["render", "--out", out, "--group", `PRB:${dir}/run_*.csv`]);
    expect(rc).toBe(0);
    const bytes = readFileSync(out);
    expect(bytes.subarray(1, 4).toString("ascii")).toBe("PNG");
  });

  it("fails cleanly on an empty glob or mismatched horizons", async () => {
    const dir = mkdtempSync(join(tmpdir(), "prb-plots-"));
    const out = join(dir, "fig.svg");
    expect(await main(["render", "--out", out, "--group", `X:${dir}/none_*.csv`])).toBe(2);
    fakeRun(join(dir, "run_0.csv"), [1, 2]);
    fakeRun(join(dir, "run_1.csv"), [1, 2, 3]);
    expect(await main(["render", "--out", out, "--group", `X:${dir}/run_*.csv`])).toBe(2);
    expect(existsSync(out)).toBe(false);
  });
});

#!/usr/bin/env node
/** Render regret curves from run CSVs:
 *
 *   prb-plots render --out fig.png \
 *     --group "PRB:results/prb/run_*.csv" \
 *     --group "EE-Net:results/eenet/run_*.csv"
 *
 * Output format follows the --out extension: .svg or .png. */
import { writeFileSync } from "node:fs";
import fg from "fast-glob";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderSvg } from "./chart.js";
import { GroupStats, loadGroup } from "./stats.js";

export function parseGroupSpec(spec: string): { label: string; glob: string } {
  const at = spec.indexOf(":");
  if (at <= 0 || at === spec.length - 1) {
    throw new Error(`--group expects "LABEL:GLOB", got ${JSON.stringify(spec)}`);
  }
  return { label: spec.slice(0, at), glob: spec.slice(at + 1) };
}

export function loadGroups(specs: string[]): GroupStats[] {
  return specs.map((spec) => {
    const { label, glob } = parseGroupSpec(spec);
    const paths = fg.sync(glob).sort();
    if (paths.length === 0) {
      throw new Error(`group '${label}': glob ${JSON.stringify(glob)} matched no files`);
    }
    return loadGroup(label, paths);
  });
}

export async function writeChart(
  groups: GroupStats[],
  out: string,
  title?: string,
): Promise<void> {
  const svg = renderSvg(groups, { title });
  if (out.endsWith(".svg")) {
    writeFileSync(out, svg);
    return;
  }
  if (out.endsWith(".png")) {
    const sharp = (await import("sharp")).default;
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    writeFileSync(out, png);
    return;
  }
  throw new Error(`unsupported output format: ${out} (use .svg or .png)`);
}

export async function main(argv: string[]): Promise<number> {
  let failed = false;
  const parser = yargs(argv)
    .command(
      "render",
      "render mean regret curves with a +/- std band",
      (y) =>
        y
          .option("out", { type: "string", demandOption: true })
          .option("group", { type: "string", array: true, demandOption: true })
          .option("title", { type: "string" }),
      async (args) => {
        const groups = loadGroups(args.group as string[]);
        await writeChart(groups, args.out as string, args.title as string | undefined);
        console.log(`wrote ${args.out} (${groups.length} group(s))`);
      },
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      console.error(`error: ${err?.message ?? msg}`);
      failed = true;
    });
  try {
    await parser.parseAsync();
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    failed = true;
  }
  return failed ? 2 : 0;
}

const entry = process.argv[1];
if (entry && (entry.endsWith("cli.js") || entry.endsWith("prb-plots"))) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}

/** Command line entry: generate golden fixtures or verify a fixture file. */

import { generateFixtures, verifySchema } from "./fixtures";

function usage(): void {
  console.error(
    "usage:\n" +
      "  cli.js generate --in <smiles file> --out <csv> --corpus <smiles file> [--manifest <json>]\n" +
      "  cli.js verify --in <csv>",
  );
}

function argValue(argv: string[], flag: string): string | undefined {
  const i = argv.indexOf(flag);
  return i >= 0 && i + 1 < argv.length ? argv[i + 1] : undefined;
}

async function main(): Promise<number> {
  const [cmd, ...rest] = process.argv.slice(2);
  if (cmd === "generate") {
    const input = argValue(rest, "--in");
    const output = argValue(rest, "--out");
    const corpus = argValue(rest, "--corpus");
    const manifest = argValue(rest, "--manifest");
    if (!input || !output || !corpus) {
      usage();
      return 2;
    }
    try {
      const res = await generateFixtures(input, output, corpus, manifest);
      console.log(`wrote ${res.rows} rows to ${output}`);
      for (const smi of res.skipped) console.log(`skipped (toolkit rejected): ${smi}`);
      return 0;
    } catch (e) {
      console.error(`generation failed: ${e}`);
      return 1;
    }
  }
  if (cmd === "verify") {
    const input = argValue(rest, "--in");
    if (!input) {
      usage();
      return 2;
    }
    const report = verifySchema(input);
    if (report.ok) {
      console.log("schema ok");
      return 0;
    }
    for (const p of report.problems) console.error(p);
    return 1;
  }
  usage();
  return 2;
}

main().then((code) => process.exit(code));

import { describe, expect, it } from "vitest";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { CSV_HEADER, generateFixtures, readSmilesLines, verifySchema } from "../src/fixtures";
import { qedScore, desirability } from "../src/qed";
import { getRDKit, molFromSmiles } from "../src/rdkit";
import { buildFragmentDb, saScore, molGraph, environmentSignatures } from "../src/sa";

const REPO = path.resolve(__dirname, "..", "..");
const FIXTURE_INPUT = path.join(REPO, "tests", "fixtures", "fixture_input.smi");
const COMMITTED_CSV = path.join(REPO, "tests", "fixtures", "oracle_fixtures.csv");
const CORPUS = path.join(REPO, "data", "corpus_9atom.smi");

function tmpFile(name: string): string {
  return path.join(fs.mkdtempSync(path.join(os.tmpdir(), "oracle-")), name);
}

describe("generateFixtures", () => {
  it("reproduces the committed CSV byte for byte", async () => {
    const out = tmpFile("regen.csv");
    const res = await generateFixtures(FIXTURE_INPUT, out, CORPUS);
    expect(res.rows).toBeGreaterThanOrEqual(200);
    const regenerated = fs.readFileSync(out);
    const committed = fs.readFileSync(COMMITTED_CSV);
    expect(regenerated.equals(committed)).toBe(true);
  }, 120_000);

  it("is deterministic across repeated runs", async () => {
    const input = tmpFile("in.smi");
    fs.writeFileSync(input, "CCO\nc1ccccc1\nCC(=O)O\n");
    const out1 = tmpFile("a.csv");
    const out2 = tmpFile("b.csv");
    await generateFixtures(input, out1, CORPUS);
    await generateFixtures(input, out2, CORPUS);
    expect(fs.readFileSync(out1).equals(fs.readFileSync(out2))).toBe(true);
  }, 120_000);

  it("emits header-only CSV for empty input", async () => {
    const input = tmpFile("empty.smi");
    fs.writeFileSync(input, "# nothing here\n");
    const out = tmpFile("empty.csv");
    const res = await generateFixtures(input, out, CORPUS);
    expect(res.rows).toBe(0);
    expect(fs.readFileSync(out, "utf-8")).toBe(CSV_HEADER + "\n");
  }, 120_000);

  it("keeps duplicate inputs as duplicate rows and skips rejects", async () => {
    const input = tmpFile("dups.smi");
    fs.writeFileSync(input, "CCO\nCCO\nnot_a_molecule[[[\n");
    const out = tmpFile("dups.csv");
    const res = await generateFixtures(input, out, CORPUS);
    expect(res.rows).toBe(2);
    expect(res.skipped).toEqual(["not_a_molecule[[["]);
    const lines = fs.readFileSync(out, "utf-8").trim().split("\n");
    expect(lines[1]).toBe(lines[2]);
  }, 120_000);

  it("writes a manifest recording toolkit and input digests", async () => {
    const input = tmpFile("in.smi");
    fs.writeFileSync(input, "CCO\n");
    const out = tmpFile("m.csv");
    const manifest = tmpFile("m.json");
    await generateFixtures(input, out, CORPUS, manifest);
    const m = JSON.parse(fs.readFileSync(manifest, "utf-8"));
    expect(m.toolkit).toBe("@rdkit/rdkit");
    expect(m.toolkit_version).toMatch(/^\d{4}\./);
    expect(m.input.sha256).toMatch(/^[0-9a-f]{64}$/);
    expect(m.fragment_db.sha256).toMatch(/^[0-9a-f]{64}$/);
  }, 120_000);
});

describe("verifySchema", () => {
  const rows = fs.readFileSync(COMMITTED_CSV, "utf-8").trim().split("\n");

  function writeCsv(lines: string[]): string {
    const p = tmpFile("v.csv");
    fs.writeFileSync(p, lines.join("\n") + "\n");
    return p;
  }

  it("accepts the committed fixture file", () => {
    const report = verifySchema(COMMITTED_CSV);
    expect(report.problems).toEqual([]);
    expect(report.ok).toBe(true);
  });

  it("rejects five seeded corruptions", () => {
    const [header, first, ...rest] = rows;
    const cols = first.split(",");

    const corrupted: string[][] = [];
    // 1: wrong header
    corrupted.push(["smiles,canonical,qed", first]);
    // 2: qed out of range
    const badQed = [...cols];
    badQed[2] = "1.5";
    corrupted.push([header, badQed.join(",")]);
    // 3: missing column
    corrupted.push([header, cols.slice(0, -1).join(",")]);
    // 4: non-numeric sa
    const badSa = [...cols];
    badSa[4] = "easy";
    corrupted.push([header, badSa.join(",")]);
    // 5: negative integer count
    const badHba = [...cols];
    badHba[6] = "-2";
    corrupted.push([header, badHba.join(",")]);

    for (const lines of corrupted) {
      const report = verifySchema(writeCsv(lines));
      expect(report.ok).toBe(false);
      expect(report.problems.length).toBeGreaterThan(0);
    }
  });

  it("reports row and column in problems", () => {
    const [header, first] = rows;
    const cols = first.split(",");
    cols[3] = "NaN";
    const report = verifySchema(writeCsv([header, cols.join(",")]));
    expect(report.ok).toBe(false);
    expect(report.problems[0]).toContain("row 2");
    expect(report.problems[0]).toContain("logp");
  });

  it("flags unreadable files", () => {
    const report = verifySchema("/nonexistent/file.csv");
    expect(report.ok).toBe(false);
  });
});

describe("scoring internals", () => {
  it("desirability curves stay positive and bounded", () => {
    for (const name of ["MW", "ALOGP", "HBA", "HBD", "PSA", "ROTB", "AROM", "ALERTS"]) {
      for (const x of [0, 1, 5, 50, 500]) {
        const d = desirability(name, x);
        expect(d).toBeGreaterThan(0);
        expect(d).toBeLessThanOrEqual(1.2);
      }
    }
  });

  it("qed lands in (0, 1] and alerts lower it", () => {
    const base = { mw: 46, alogp: 0, hba: 1, hbd: 1, psa: 20, rotb: 0, arom: 0, alerts: 0 };
    const clean = qedScore(base);
    const flagged = qedScore({ ...base, alerts: 2 });
    expect(clean).toBeGreaterThan(0);
    expect(clean).toBeLessThanOrEqual(1);
    expect(flagged).toBeLessThan(clean);
  });

  it("sa scores small common molecules as easy", async () => {
    const rdkit = await getRDKit();
    const db = buildFragmentDb(rdkit, readSmilesLines(CORPUS));
    const methane = molFromSmiles(rdkit, "C")!;
    expect(saScore(methane, db)).toBeLessThanOrEqual(2.5);
    methane.delete();
  }, 120_000);

  it("environment signatures are sorted and radius-layered", async () => {
    const rdkit = await getRDKit();
    const mol = molFromSmiles(rdkit, "CCO")!;
    const sigs = environmentSignatures(molGraph(mol));
    expect(sigs).toContain("C");
    expect(sigs).toContain("O");
    expect(sigs.some((s) => s.includes("("))).toBe(true);
    mol.delete();
  });
});

/** Fixture CSV generation and schema verification. */

import * as crypto from "crypto";
import * as fs from "fs";

import { getRDKit, molFromSmiles, RDKitModule } from "./rdkit";
import { AlertMatcher, qedScore } from "./qed";
import { buildFragmentDb, saScore } from "./sa";

export const CSV_HEADER = "smiles,canonical,qed,logp,sa,mw,hba,hbd,tpsa,rotb,arom";

export interface GenerateResult {
  rows: number;
  skipped: string[];
}

export function readSmilesLines(path: string): string[] {
  const text = fs.readFileSync(path, "utf-8");
  return text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
}

function sha256(path: string): string {
  return crypto.createHash("sha256").update(fs.readFileSync(path)).digest("hex");
}

export async function generateFixtures(
  inputPath: string,
  outputPath: string,
  corpusPath: string,
  manifestPath?: string,
): Promise<GenerateResult> {
  const rdkit = await getRDKit();
  const inputs = readSmilesLines(inputPath);
  const corpus = readSmilesLines(corpusPath);
  const db = buildFragmentDb(rdkit, corpus);
  const alerts = new AlertMatcher(rdkit);

  const lines: string[] = [CSV_HEADER];
  const skipped: string[] = [];
  for (const smi of inputs) {
    const mol = molFromSmiles(rdkit, smi);
    if (!mol) {
      skipped.push(smi);
      continue;
    }
    const d = JSON.parse(mol.get_descriptors());
    const alertCount = alerts.count(mol);
    const qed = qedScore({
      mw: d.amw,
      alogp: d.CrippenClogP,
      hba: d.NumHBA,
      hbd: d.NumHBD,
      psa: d.tpsa,
      rotb: d.NumRotatableBonds,
      arom: d.NumAromaticRings,
      alerts: alertCount,
    });
    const sa = saScore(mol, db);
    lines.push(
      [
        smi,
        mol.get_smiles(),
        qed.toFixed(6),
        d.CrippenClogP.toFixed(5),
        sa.toFixed(4),
        d.amw.toFixed(3),
        String(d.NumHBA),
        String(d.NumHBD),
        d.tpsa.toFixed(2),
        String(d.NumRotatableBonds),
        String(d.NumAromaticRings),
      ].join(","),
    );
    mol.delete();
  }
  fs.writeFileSync(outputPath, lines.join("\n") + "\n");

  if (manifestPath) {
    const manifest = {
      toolkit: "@rdkit/rdkit",
      toolkit_version: rdkit.version(),
      package_version: "2025.3.4-1.0.0",
      input: { path: inputPath, sha256: sha256(inputPath), molecules: inputs.length },
      fragment_db: {
        source: corpusPath,
        sha256: sha256(corpusPath),
        kind: "radius<=2 atom-environment signatures, per-molecule presence counts",
        molecules: db.nMolecules,
        distinct_fragments: db.counts.size,
      },
      rows: lines.length - 1,
      skipped,
    };
    fs.writeFileSync(manifestPath, JSON.stringify(manifest, null, 2) + "\n");
  }
  return { rows: lines.length - 1, skipped };
}

export interface VerifyReport {
  ok: boolean;
  problems: string[];
}

export function verifySchema(path: string): VerifyReport {
  const problems: string[] = [];
  let text: string;
  try {
    text = fs.readFileSync(path, "utf-8");
  } catch (e) {
    return { ok: false, problems: [`unreadable file: ${e}`] };
  }
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    problems.push(`bad header: ${lines[0] ?? "<empty>"}`);
    return { ok: false, problems };
  }
  const ncols = CSV_HEADER.split(",").length;
  lines.slice(1).forEach((line, i) => {
    const cols = line.split(",");
    const rowno = i + 2;
    if (cols.length !== ncols) {
      problems.push(`row ${rowno}: expected ${ncols} columns, got ${cols.length}`);
      return;
    }
    const [smiles, canonical, qed, logp, sa, mw, hba, hbd, tpsa, rotb, arom] = cols;
    if (!smiles || !canonical) problems.push(`row ${rowno}: empty smiles column`);
    const nums: [string, string][] = [
      ["qed", qed], ["logp", logp], ["sa", sa], ["mw", mw],
      ["hba", hba], ["hbd", hbd], ["tpsa", tpsa], ["rotb", rotb], ["arom", arom],
    ];
    for (const [name, value] of nums) {
      const x = Number(value);
      if (!Number.isFinite(x)) {
        problems.push(`row ${rowno}: ${name} not numeric: ${value}`);
        continue;
      }
      if (name === "qed" && (x < 0 || x > 1)) problems.push(`row ${rowno}: qed out of [0,1]: ${value}`);
      if (name === "sa" && (x < 1 || x > 10)) problems.push(`row ${rowno}: sa out of [1,10]: ${value}`);
      if (name === "mw" && x <= 0) problems.push(`row ${rowno}: mw must be positive: ${value}`);
      if (["hba", "hbd", "rotb", "arom"].includes(name) && (x < 0 || !Number.isInteger(x))) {
        problems.push(`row ${rowno}: ${name} must be a nonnegative integer: ${value}`);
      }
    }
  });
  return { ok: problems.length === 0, problems };
}

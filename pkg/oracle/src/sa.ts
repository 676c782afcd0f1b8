/**
 * Synthetic-accessibility score: circular-fragment rarity against a
 * corpus-derived frequency table plus complexity penalties, affinely mapped
 * to [1, 10] (1 = easy to make).
 *
 * Fragments are explicit atom-environment signatures of radius 0..2
 * (element + sorted bonded sub-signatures), not hashed fingerprint bits, so
 * small common motifs score as common.
 */

import type { RDKitModule, RDKitMol } from "./rdkit";
import { molFromSmiles } from "./rdkit";

const RARITY_FLOOR = -4.0;

const SYMBOL: Record<number, string> = { 5: "B", 6: "C", 7: "N", 8: "O", 9: "F", 15: "P", 16: "S", 17: "Cl", 35: "Br", 53: "I" };

export interface MolGraph {
  elements: string[];
  aromatic: Set<number>;
  adjacency: Map<number, { nbr: number; bondChar: string }[]>;
  rings: number[][];
  nAtoms: number;
  nBonds: number;
}

export function molGraph(mol: RDKitMol): MolGraph {
  const parsed = JSON.parse((mol as unknown as { get_json(): string }).get_json());
  const m = parsed.molecules[0];
  const defaults = parsed.defaults ?? { atom: { z: 6 }, bond: { bo: 1 } };
  const atoms: { z?: number }[] = m.atoms;
  const bonds: { bo?: number; atoms: [number, number] }[] = m.bonds ?? [];
  const ext = (m.extensions ?? []).find((e: { name: string }) => e.name === "rdkitRepresentation") ?? {};
  const aromaticAtoms: number[] = ext.aromaticAtoms ?? [];
  const aromaticBonds: number[] = ext.aromaticBonds ?? [];
  const rings: number[][] = ext.atomRings ?? [];

  const elements = atoms.map((a) => SYMBOL[a.z ?? defaults.atom.z] ?? `X${a.z}`);
  const aromatic = new Set(aromaticAtoms);
  const adjacency = new Map<number, { nbr: number; bondChar: string }[]>();
  atoms.forEach((_, i) => adjacency.set(i, []));
  const aromaticBondSet = new Set(aromaticBonds);
  bonds.forEach((b, bi) => {
    const order = b.bo ?? defaults.bond.bo;
    const ch = aromaticBondSet.has(bi) ? ":" : order === 2 ? "=" : order === 3 ? "#" : "-";
    const [i, j] = b.atoms;
    adjacency.get(i)!.push({ nbr: j, bondChar: ch });
    adjacency.get(j)!.push({ nbr: i, bondChar: ch });
  });
  return { elements, aromatic, adjacency, rings, nAtoms: atoms.length, nBonds: bonds.length };
}

/** Atom-environment signatures, radii 0..2, multiset over atoms. */
export function environmentSignatures(g: MolGraph): string[] {
  const sig: string[][] = [];
  sig[0] = g.elements.map((el, i) => (g.aromatic.has(i) ? el.toLowerCase() : el));
  for (let r = 1; r <= 2; r++) {
    sig[r] = sig[r - 1].map((prev, i) => {
      const nbrs = g.adjacency.get(i)!;
      if (nbrs.length === 0) return "";
      const parts = nbrs.map(({ nbr, bondChar }) => bondChar + sig[r - 1][nbr]).sort();
      return `${prev}(${parts.join(",")})`;
    });
  }
  const out: string[] = [];
  for (let i = 0; i < g.nAtoms; i++) {
    out.push(sig[0][i]);
    if (g.adjacency.get(i)!.length > 0) {
      out.push(sig[1][i], sig[2][i]);
    }
  }
  return out;
}

export interface FragmentDb {
  counts: Map<string, number>;
  maxCount: number;
  nMolecules: number;
}

export function buildFragmentDb(rdkit: RDKitModule, corpusSmiles: string[]): FragmentDb {
  const counts = new Map<string, number>();
  let nMolecules = 0;
  for (const smi of corpusSmiles) {
    const mol = molFromSmiles(rdkit, smi);
    if (!mol) continue;
    nMolecules += 1;
    const unique = new Set(environmentSignatures(molGraph(mol)));
    for (const s of unique) counts.set(s, (counts.get(s) ?? 0) + 1);
    mol.delete();
  }
  let maxCount = 1;
  for (const c of counts.values()) maxCount = Math.max(maxCount, c);
  return { counts, maxCount, nMolecules };
}

function rarity(db: FragmentDb, sig: string): number {
  const c = db.counts.get(sig);
  if (!c) return RARITY_FLOOR;
  return Math.max(Math.log10(c / db.maxCount), RARITY_FLOOR);
}

export function saScore(mol: RDKitMol, db: FragmentDb): number {
  const g = molGraph(mol);
  const sigs = environmentSignatures(g);
  let fragmentScore = 0;
  if (sigs.length > 0) {
    let total = 0;
    for (const s of sigs) total += rarity(db, s);
    fragmentScore = total / sigs.length;
  }

  const sizePenalty = Math.pow(g.nAtoms, 1.005) - g.nAtoms;
  const nCycles = Math.max(g.nBonds - g.nAtoms + 1, 0);
  const cyclePenalty = Math.log10(nCycles + 1);
  const smallRings = g.rings.filter((r) => r.length <= 4).length;
  const strainPenalty = 0.5 * smallRings;
  const macroPenalty = g.rings.some((r) => r.length >= 9) ? Math.log10(2) : 0;
  const penalty = sizePenalty + cyclePenalty + strainPenalty + macroPenalty;

  const raw = fragmentScore - 0.25 * penalty;
  let score = 1 + (9 * -raw) / 4;
  if (score > 10) score = 10;
  if (score < 1) score = 1;
  return score;
}

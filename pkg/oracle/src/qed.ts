/**
 * Drug-likeness score: weighted geometric mean of asymmetric-double-sigmoid
 * desirabilities over eight descriptors, with the published parameter set.
 */

import type { RDKitModule, RDKitMol, RDKitQMol } from "./rdkit";

export interface AdsParams {
  a: number;
  b: number;
  c: number;
  d: number;
  e: number;
  f: number;
  dmax: number;
}

// columns: MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS
export const ADS_PARAMS: Record<string, AdsParams> = {
  MW: { a: 2.817065973, b: 392.5754953, c: 290.7489764, d: 2.419764353, e: 49.22325677, f: 65.37051707, dmax: 104.9805561 },
  ALOGP: { a: 3.172690585, b: 137.8624751, c: 2.534937431, d: 4.581497897, e: 0.822739154, f: 0.576295591, dmax: 131.3186604 },
  HBA: { a: 2.948620388, b: 160.4605972, c: 3.615294657, d: 4.435986202, e: 0.290141953, f: 1.300669958, dmax: 148.7763046 },
  HBD: { a: 1.618662227, b: 1010.051101, c: 0.985094388, d: 0.000000001, e: 0.713820843, f: 0.920922555, dmax: 258.1632616 },
  PSA: { a: 1.876861559, b: 125.2232657, c: 62.90773554, d: 87.83366614, e: 12.01999824, f: 28.51324732, dmax: 104.5686167 },
  ROTB: { a: 0.010000091, b: 272.4121427, c: 2.55837997, d: 1.565547684, e: 1.271567166, f: 2.758063707, dmax: 105.4420403 },
  AROM: { a: 3.21778897, b: 957.7374108, c: 2.274627939, d: 0.000000001, e: 1.317690384, f: 0.375760881, dmax: 312.337261 },
  ALERTS: { a: 0.01, b: 1199.094025, c: -0.09002883, d: 0.000000001, e: 0.185904477, f: 0.875193782, dmax: 417.725314 },
};

export const QED_WEIGHTS: Record<string, number> = {
  MW: 0.66,
  ALOGP: 0.46,
  HBA: 0.05,
  HBD: 0.61,
  PSA: 0.06,
  ROTB: 0.65,
  AROM: 0.48,
  ALERTS: 0.95,
};

/**
 * Structural alert motifs relevant to small neutral C/N/O/F chemistry.
 * The alert count is the number of motifs present at least once.
 */
export const ALERT_SMARTS: { name: string; smarts: string }[] = [
  { name: "peroxide", smarts: "[OX2][OX2]" },
  { name: "hydrazine", smarts: "[NX3][NX3]" },
  { name: "azo", smarts: "[NX2]=[NX2]" },
  { name: "n_o_single", smarts: "[NX3][OX2]" },
  { name: "aldehyde", smarts: "[CX3H1](=O)[#6]" },
  { name: "formaldehyde_like", smarts: "[CH2]=[OX1]" },
  { name: "dicarbonyl_1_2", smarts: "[CX3](=O)[CX3](=O)" },
  { name: "isocyanate", smarts: "[NX2]=[CX2]=[OX1]" },
  { name: "carbodiimide", smarts: "[NX2]=[CX2]=[NX2]" },
  { name: "allene", smarts: "[CX2](=C)=C" },
  { name: "alkyne", smarts: "[CX2]#[CX2]" },
  { name: "imine", smarts: "[CX3]=[NX2]" },
  { name: "epoxide", smarts: "[OX2;r3]" },
  { name: "aziridine", smarts: "[NX3;r3]" },
  { name: "acyclic_diene", smarts: "[CX3]=[CX3]-[CX3]=[CX3]" },
  { name: "enol_ether", smarts: "[OX2][CX3]=[CX3]" },
  { name: "gem_dioxy", smarts: "[OX2][CX4][OX2]" },
  { name: "cyclopropene", smarts: "[CX3;r3]" },
];

export function ads(x: number, p: AdsParams): number {
  const rise = 1 + Math.exp(-(x - p.c + p.d / 2) / p.e);
  const fall = 1 + Math.exp(-(x - p.c - p.d / 2) / p.f);
  return p.a + (p.b / rise) * (1 - 1 / fall);
}

export function desirability(name: string, x: number): number {
  const p = ADS_PARAMS[name];
  return Math.max(ads(x, p) / p.dmax, 1e-9);
}

export interface QedInputs {
  mw: number;
  alogp: number;
  hba: number;
  hbd: number;
  psa: number;
  rotb: number;
  arom: number;
  alerts: number;
}

export function qedScore(inp: QedInputs): number {
  const values: Record<string, number> = {
    MW: inp.mw,
    ALOGP: inp.alogp,
    HBA: inp.hba,
    HBD: inp.hbd,
    PSA: inp.psa,
    ROTB: inp.rotb,
    AROM: inp.arom,
    ALERTS: inp.alerts,
  };
  let num = 0;
  let den = 0;
  for (const key of Object.keys(ADS_PARAMS)) {
    const w = QED_WEIGHTS[key];
    num += w * Math.log(desirability(key, values[key]));
    den += w;
  }
  return Math.exp(num / den);
}

export class AlertMatcher {
  private patterns: { name: string; qmol: RDKitQMol }[] = [];

  constructor(rdkit: RDKitModule) {
    for (const { name, smarts } of ALERT_SMARTS) {
      const qmol = rdkit.get_qmol(smarts);
      if (!qmol) throw new Error(`bad alert SMARTS: ${smarts}`);
      this.patterns.push({ name, qmol });
    }
  }

  count(mol: RDKitMol): number {
    let hits = 0;
    for (const { qmol } of this.patterns) {
      const res = mol.get_substruct_matches(qmol as never);
      const matches = res ? JSON.parse(res) : [];
      if (Array.isArray(matches) && matches.length > 0) hits += 1;
    }
    return hits;
  }
}

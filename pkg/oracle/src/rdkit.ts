/** Singleton access to the RDKit WASM module. */

// eslint-disable-next-line @typescript-eslint/no-var-requires
const initRDKitModule = require("@rdkit/rdkit");

export interface RDKitMol {
  is_valid(): boolean;
  get_smiles(): string;
  get_descriptors(): string;
  get_morgan_fp(options: string): string;
  get_substruct_matches(qmol: RDKitQMol): string;
  delete(): void;
}

export interface RDKitQMol {
  delete(): void;
}

export interface RDKitModule {
  version(): string;
  get_mol(smiles: string): RDKitMol | null;
  get_qmol(smarts: string): RDKitQMol | null;
}

let modulePromise: Promise<RDKitModule> | null = null;

export function getRDKit(): Promise<RDKitModule> {
  if (!modulePromise) {
    modulePromise = initRDKitModule() as Promise<RDKitModule>;
  }
  return modulePromise;
}

/** Parse a SMILES; null when the toolkit rejects it. */
export function molFromSmiles(rdkit: RDKitModule, smiles: string): RDKitMol | null {
  let mol: RDKitMol | null = null;
  try {
    mol = rdkit.get_mol(smiles);
  } catch {
    return null;
  }
  if (!mol) return null;
  if (typeof mol.is_valid === "function" && !mol.is_valid()) {
    mol.delete();
    return null;
  }
  return mol;
}

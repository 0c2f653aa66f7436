#!/usr/bin/env python3
#
# Project gnc - Copyright 2026 The gnc Authors.
# SPDX-License-Identifier: Apache-2.0
#

# Builds tests/data/corpus.tsv: 1000 distinct organic-subset molecules with
# reference Crippen logP values. Requires RDKit. Output is deterministic.
import random
import sys

from rdkit import Chem, RDLogger
from rdkit.Chem import Crippen

RDLogger.DisableLog("rdApp.*")

SEEDS = """C CC CCO CCN CC(=O)O c1ccccc1 c1ccncc1 c1ccoc1 c1ccsc1 c1cc[nH]c1
C1CCCCC1 C1CCNCC1 C1CCOC1 C1CC1 c1ccc2ccccc2c1 c1ccc2[nH]ccc2c1 c1cnc2ccccc2n1
O=C1CCCN1 c1ncncn1 C1COCCN1 c1ccc2c(c1)OCO2 CC(C)C CN(C)C C=CC C#CC
O=C(N)c1ccccc1 Oc1ccccc1 Nc1ccccc1 OC(=O)c1ccccc1 c1ccc(-c2ccccc2)cc1
C1CC2CCC1C2 C1CCC2(CC1)CCCC2 c1ccc2c(c1)ccc1ccccc12 O=S(=O)(N)c1ccccc1
CP(=O)(O)O C[N+](C)(C)C CC(=O)[O-] ClC(Cl)Cl BrCCBr FC(F)(F)c1ccccc1
c1cn[nH]c1 c1c[nH]cn1 c1cscn1 c1conc1 O=c1cc[nH]c(=O)[nH]1 B(O)(O)c1ccccc1
CC1=CC(=O)C=CC1=O C1=CC=CC=CC=C1 N#Cc1ccccc1 CSC CS(C)=O ICc1ccccc1""".split()

FRAGMENTS = ["C", "CC", "O", "N", "F", "Cl", "Br", "I", "C(=O)O", "C(=O)N",
             "OC", "N(C)C", "C#N", "c1ccccc1", "C1CC1", "S(=O)(=O)N",
             "C(F)(F)F", "c1ccncc1", "C1CCNCC1", "C(=O)C", "OCCO", "NC(=O)C",
             "c1ccoc1", "[N+](=O)[O-]", "C=C", "SC", "P(=O)(O)O"]


def attach(mol, frag, rng):
    rw = Chem.RWMol(mol)
    sites = [a.GetIdx() for a in rw.GetAtoms() if a.GetTotalNumHs() > 0]
    if not sites:
        return None
    site = rng.choice(sites)
    f = Chem.MolFromSmiles(frag)
    offset = rw.GetNumAtoms()
    combo = Chem.RWMol(Chem.CombineMols(rw, f))
    combo.AddBond(site, offset, Chem.BondType.SINGLE)
    a = combo.GetAtomWithIdx(site)
    a.SetNoImplicit(False)
    a.SetNumExplicitHs(max(0, a.GetNumExplicitHs() - 1))
    try:
        m = combo.GetMol()
        Chem.SanitizeMol(m)
        return m
    except Exception:
        return None


def main():
    rng = random.Random(20260815)
    out = {}
    for s in SEEDS:
        m = Chem.MolFromSmiles(s)
        out[Chem.MolToSmiles(m)] = m
    while len(out) < 1000:
        m = Chem.MolFromSmiles(rng.choice(SEEDS))
        for _ in range(rng.randint(1, 4)):
            n = attach(m, rng.choice(FRAGMENTS), rng)
            if n is not None:
                m = n
        if m.GetNumHeavyAtoms() > 40:
            continue
        smi = Chem.MolToSmiles(m)
        if "@" in smi or "/" in smi or "\\" in smi:
            continue
        out.setdefault(smi, m)
    w = sys.stdout
    w.write("smiles\tlogp\theavy\n")
    for smi in sorted(out)[:1000]:
        m = out[smi]
        w.write(f"{smi}\t{Crippen.MolLogP(m):.6f}\t{m.GetNumHeavyAtoms()}\n")


if __name__ == "__main__":
    main()

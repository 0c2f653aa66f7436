#!/usr/bin/env python3
#
# Project gnc - Copyright 2026 The gnc Authors.
# SPDX-License-Identifier: Apache-2.0
#

# Regenerates the geometry fixtures and the toy dataset. Requires RDKit.
# Labels are synthetic: a fixed linear function of simple descriptors plus
# seeded noise, so the pipeline can be exercised without external data.
import math
import os
import random

from rdkit import Chem, RDLogger
from rdkit.Chem import AllChem, Crippen, rdMolDescriptors

RDLogger.DisableLog("rdApp.*")
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

TOY = """morphine CN1CCC23c4c5ccc(O)c4OC2C(O)C=CC3C1C5
codeine COc1ccc2CC3N(C)CCC45C(Oc1c24)C(O)C=CC35
hydromorphone CN1CCC23c4c5ccc(O)c4OC2C(=O)CCC3C1C5
oxycodone COc1ccc2CC3N(C)CCC45C(Oc1c24)C(=O)CCC35O
naltrexone O=C1CCC2(O)C3Cc4ccc(O)c5OC1C2(CCN3CC1CC1)c45
naloxone C=CCN1CCC23c4c5ccc(O)c4OC2C(=O)CCC3(O)C1C5
buprenorphine_core COC12CCC3(CC1C(C)(C)O)C1Cc4ccc(O)c5OC2C3(CCN1CC1CC1)c45
methadone CCC(=O)C(CC(C)N(C)C)(c1ccccc1)c1ccccc1
fentanyl CCC(=O)N(c1ccccc1)C1CCN(CCc2ccccc2)CC1
sufentanil CCC(=O)N(c1ccccc1)C1(COC)CCN(CCc2cccs2)CC1
alfentanil CCC(=O)N(c1ccccc1)C1(COC)CCN(CCn2nnn(CC)c2=O)CC1
remifentanil CCC(=O)N(c1ccccc1)C1(C(=O)OC)CCN(CCC(=O)OC)CC1
meperidine CCOC(=O)C1(c2ccccc2)CCN(C)CC1
tramadol COc1cccc(C2(O)CCCCC2CN(C)C)c1
tapentadol CCC(c1cccc(O)c1)C(C)CN(C)C
pentazocine CC(C)=CCN1CCC2(C)c3cc(O)ccc3CC1C2C
butorphanol Oc1ccc2CC3N(CC4CCC4)CCC4(CCCCC34O)c2c1
nalbuphine Oc1ccc2CC3N(CC4CCC4)CCC45C(Oc1c25)C(O)CCC34O
levorphanol CN1CCC23CCCCC2C1Cc1ccc(O)cc13
dextromethorphan COc1ccc2CC3N(C)CCC4(CCCCC34)c2c1
loperamide CN(C)C(=O)C(CCN1CCC(O)(c2ccc(Cl)cc2)CC1)(c1ccccc1)c1ccccc1
diphenoxylate CCOC(=O)C1(c2ccccc2)CCN(CCC(C#N)(c2ccccc2)c2ccccc2)CC1
eluxadoline COc1ccc(CN(C(=O)C(N)Cc2c(C)cc(C(N)=O)cc2C)C(C)c2ncc(-c3ccccc3)[nH]2)cc1C(=O)O
salvinorin_core COC(=O)C1CC(OC(C)=O)C(=O)C2C1(C)CCC1C(=O)OC(c3ccoc3)CC21C
u50488 CN(C1CCCCC1N1CCCC1)C(=O)Cc1ccc(Cl)c(Cl)c1
spiradoline CN(C1CCC2(CCCO2)CC1N1CCCC1)C(=O)Cc1ccc(Cl)c(Cl)c1
enadoline CN(C1CCCCC1N1CCCC1)C(=O)Cc1cccc2ccccc12
snc80 CCN(CC)C(=O)c1ccc(C(c2cccc(OC)c2)N2CC(C)N(CC=C)CC2C)cc1
bw373u86 CCN(CC)C(=O)c1ccc(C(c2cccc(O)c2)N2CC(C)N(CC=C)CC2C)cc1
naltrindole Oc1ccc2CC3N(CC4CC4)CCC45C(Oc1c25)c1[nH]c2ccccc2c1CC34O
nor_bni Oc1ccc2CC3N(CC4CC4)CCC45C(Oc1c25)c1[nH]c2ccc(cc2c1CC34O)C
ketobemidone CCC(=O)C1(c2cccc(O)c2)CCN(C)CC1
propoxyphene CCC(=O)OC(Cc1ccccc1)(c1ccccc1)C(C)CN(C)C
dezocine CC12CCCCCC(C1)C(N)c1ccc(O)cc1C2
eticyclidine CCNC1(c2ccccc2)CCCCC1
mitragynine_core CCC1CN2CCc3c([nH]c4cccc(OC)c34)C2CC1C(=COC)C(=O)OC
dofetilide CN(CCOc1ccc(NS(C)(=O)=O)cc1)CCc1ccc(NS(C)(=O)=O)cc1
astemizole COc1ccc(CCN2CCC(Nc3nc4ccccc4n3Cc3ccc(F)cc3)CC2)cc1
terfenadine CC(C)(C)c1ccc(C(O)CCCN2CCC(CC2)C(O)(c2ccccc2)c2ccccc2)cc1
cisapride COC1CN(CCCOc2ccc(F)cc2)CCC1NC(=O)c1cc(Cl)c(N)cc1OC
haloperidol OC1(c2ccc(Cl)cc2)CCN(CCCC(=O)c2ccc(F)cc2)CC1
sertindole O=C1NCCN1CCN1CCC(c2cn(-c3ccc(F)cc3)c3ccc(Cl)cc23)CC1
pimozide O=c1[nH]c2ccccc2n1C1CCN(CCCC(c2ccc(F)cc2)c2ccc(F)cc2)CC1
aspirin CC(=O)Oc1ccccc1C(=O)O
caffeine Cn1cnc2c1c(=O)n(C)c(=O)n2C
ibuprofen CC(C)Cc1ccc(C(C)C(=O)O)cc1
paracetamol CC(=O)Nc1ccc(O)cc1
lidocaine CCN(CC)CC(=O)Nc1c(C)cccc1C
benzocaine CCOC(=O)c1ccc(N)cc1
phenol Oc1ccccc1""".strip().splitlines()

TARGETS = ["MOR", "KOR", "DOR", "hERG"]


def descriptors(m):
    return (Crippen.MolLogP(m), rdMolDescriptors.CalcNumRings(m),
            rdMolDescriptors.CalcNumHBD(m), m.GetNumHeavyAtoms(),
            int(any(a.GetSymbol() == "N" and not a.GetIsAromatic()
                    and a.GetTotalNumHs() == 0 for a in m.GetAtoms())))


# BA (kcal/mol) = base + w . (logp, rings, hbd, heavy/10, basic amine) + noise
WEIGHTS = {
    "MOR": (-6.0, (-0.35, -0.55, -0.25, -0.30, -1.2)),
    "KOR": (-6.2, (-0.30, -0.50, -0.20, -0.30, -1.0)),
    "DOR": (-6.4, (-0.25, -0.50, -0.30, -0.25, -0.9)),
    "hERG": (-5.0, (-0.45, -0.20, 0.20, -0.20, -0.8)),
}


def write_geometry(m, path, seed):
    mh = Chem.AddHs(m)
    AllChem.EmbedMolecule(mh, randomSeed=seed)
    AllChem.MMFFOptimizeMolecule(mh)
    Chem.MolToMolFile(mh, path)


def main():
    rng = random.Random(7)
    tests = os.path.join(ROOT, "tests", "data")
    benzene = Chem.MolFromSmiles("c1ccccc1")
    write_geometry(benzene, os.path.join(tests, "benzene.sdf"), 42)
    with open(os.path.join(tests, "water.xyz"), "w") as f:
        f.write("3\nwater\nO 0.000 0.000 0.117\n"
                "H 0.000 0.757 -0.467\nH 0.000 -0.757 -0.467\n")

    toy = os.path.join(ROOT, "data", "toy")
    rows = []
    for k, line in enumerate(TOY):
        cid, smi = line.split()
        m = Chem.MolFromSmiles(smi)
        assert m is not None, cid
        write_geometry(m, os.path.join(toy, "structures", cid + ".sdf"),
                       1000 + k)
        d = descriptors(m)
        feats = (d[0], d[1], d[2], d[3] / 10.0, d[4])
        for t in TARGETS:
            base, w = WEIGHTS[t]
            ba = base + sum(a * b for a, b in zip(w, feats)) + rng.gauss(0, 0.4)
            ki_nm = 10 ** (ba / 1.3633) * 1e9
            if rng.random() < 0.3:
                rows.append((cid, smi, t, "IC50", 2 * ki_nm))
            else:
                rows.append((cid, smi, t, "Ki", ki_nm))
    with open(os.path.join(toy, "dataset.csv"), "w") as f:
        f.write("compound_id,smiles,target,label_type,value_nM\n")
        for cid, smi, t, lt, v in rows:
            f.write(f"{cid},{smi},{t},{lt},{v:.6g}\n")


if __name__ == "__main__":
    main()

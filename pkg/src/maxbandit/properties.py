"""Molecular property evaluators used as search rewards.

Everything computes from the heavy-atom graph alone: each atom is
classified into a group-contribution fragment by its element, hydrogen
count, bond orders, and carbonyl context, and the properties are additive
(or log-additive) in the fragment counts:

* boiling point        T_b [K]    = 198.2 + sum of group contributions
* critical pressure    P_c [bar]  = (0.113 + 0.0032 * N_atoms + sum) ** -2
* liquid viscosity     eta [Pa*s] = M_w * exp((sum_a - 597.82)/300 + sum_b - 11.202)
* polar surface area   TPSA [A^2] = sum of N/O atom-type contributions

Group parameters and TPSA contributions are vendored as data files next to
this module; the numbers are exact decimal transcriptions of the published
tables, validated by golden-compound tests (acetone, ethanol, acetic acid,
diethyl ether).

Two degenerate molecules need a convention.  Methane, the smallest grammar
output, matches no group: it classifies to an empty fragment multiset and
the formulas fall back to their constants.  A carbonyl carbon carrying two
hydrogens (formaldehyde) or bonded to a second claimed oxygen
(anhydride-like chains) is classified by the nearest group (aldehyde,
resp. ketone/ester) so every grammar output evaluates cleanly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .molgen import FULL_GRAMMAR, VISCOSITY_GRAMMAR, Grammar, MoleculeGraph, finalize

__all__ = [
    "ATOMIC_MASS",
    "JobackGroup",
    "JOBACK_GROUPS",
    "TPSA_CONTRIBUTIONS",
    "UnclassifiableAtomError",
    "classify_fragments",
    "joback_tb",
    "joback_pc",
    "joback_eta",
    "tpsa",
    "molecular_weight",
    "atom_count",
    "PropertyReward",
    "PROPERTY_NAMES",
    "property_reward",
]

ATOMIC_MASS = {
    "H": 1.008,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "Cl": 35.45,
    "Br": 79.904,
}


class UnclassifiableAtomError(ValueError):
    """An atom environment with no fragment table entry.

    Unreachable for grammar-generated molecules; raised so hand-built
    graphs fail loudly instead of silently skewing a property.
    """


@dataclass(frozen=True)
class JobackGroup:
    name: str
    tb: float
    pc: float
    eta_a: float | None
    eta_b: float | None


def _load_joback() -> dict[str, JobackGroup]:
    groups = {}
    text = resources.files(__package__).joinpath("data/joback_groups.tsv").read_text()
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        name, tb, pc, ea, eb = line.split("\t")
        groups[name] = JobackGroup(
            name,
            float(tb),
            float(pc),
            None if ea == "NA" else float(ea),
            None if eb == "NA" else float(eb),
        )
    return groups


def _load_tpsa() -> dict[tuple[str, str], float]:
    table = {}
    text = resources.files(__package__).joinpath("data/tpsa_contributions.tsv").read_text()
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        element, environment, value = line.split("\t")
        table[(element, environment)] = float(value)
    return table


JOBACK_GROUPS = _load_joback()
TPSA_CONTRIBUTIONS = _load_tpsa()


def classify_fragments(mol: MoleculeGraph) -> Counter:
    """Assign every heavy atom to exactly one fragment group.

    Carbonyl carbons are classified first and claim their oxygens (the
    double-bonded one always; acids and esters also claim the single-bonded
    one, preferring an -OH so acids win over esters).  Remaining oxygens
    split into hydroxyl and ether, nitrogens by hydrogen count, halogens to
    themselves, and carbons by saturation and hydrogen count.  Methane's
    lone carbon matches no group and yields an empty multiset.
    """
    elements = mol.elements
    hydrogens = mol.hydrogens
    neighbors = mol.neighbors
    claimed = [False] * len(elements)
    frags: Counter = Counter()

    # carbonyl pass: C=O carbons and the oxygens they own
    for i, element in enumerate(elements):
        if element != "C":
            continue
        double_o = [j for j, order in neighbors[i] if order == 2 and elements[j] == "O"]
        if not double_o:
            continue
        single_o = [
            j for j, order in neighbors[i]
            if order == 1 and elements[j] == "O" and not claimed[j]
        ]
        claimed[i] = True
        claimed[double_o[0]] = True
        if single_o:
            hydroxyl = [j for j in single_o if hydrogens[j] == 1]
            owned = hydroxyl[0] if hydroxyl else single_o[0]
            claimed[owned] = True
            frags["-COOH" if hydrogens[owned] == 1 else "-COO-"] += 1
        elif hydrogens[i] >= 1:
            frags["-CHO"] += 1
        else:
            frags[">C=O"] += 1

    for i, element in enumerate(elements):
        if claimed[i]:
            continue
        h = hydrogens[i]
        if element in ("F", "Cl", "Br"):
            frags["-" + element] += 1
        elif element == "O":
            frags["-OH" if h == 1 else "-O-"] += 1
        elif element == "N":
            frags[{2: "-NH2", 1: ">NH", 0: ">N-"}[h]] += 1
        elif element == "C":
            double = any(order == 2 for _, order in neighbors[i])
            if double:
                frags[{2: "=CH2", 1: "=CH-", 0: "=C<"}[h]] += 1
            elif h == 4:
                pass  # methane: no group, constants-only property value
            else:
                frags[{3: "-CH3", 2: ">CH2", 1: ">CH-", 0: ">C<"}[h]] += 1
        else:
            raise UnclassifiableAtomError(f"atom {i} ({element}, {h}H) matches no fragment group")
    return frags


def joback_tb(frags: Counter) -> float:
    """Boiling point estimate in kelvin."""
    return 198.2 + sum(JOBACK_GROUPS[g].tb * count for g, count in frags.items())


def joback_pc(frags: Counter, n_atoms: int) -> float:
    """Critical pressure estimate in bar; raises if the bracket is not positive."""
    bracket = 0.113 + 0.0032 * n_atoms + sum(JOBACK_GROUPS[g].pc * c for g, c in frags.items())
    if bracket <= 0:
        raise ValueError(f"critical-pressure bracket is non-positive ({bracket:.4g})")
    return bracket ** -2


def joback_eta(frags: Counter, mol_weight: float) -> float:
    """Liquid dynamic viscosity at 300 K in Pa*s.

    Raises KeyError-like errors only for groups without viscosity
    parameters, which the viscosity grammar makes unreachable.
    """
    sum_a = 0.0
    sum_b = 0.0
    for g, count in frags.items():
        group = JOBACK_GROUPS[g]
        if group.eta_a is None:
            raise ValueError(f"group {g} has no viscosity parameters")
        sum_a += group.eta_a * count
        sum_b += group.eta_b * count
    return mol_weight * math.exp((sum_a - 597.82) / 300.0 + sum_b - 11.202)


def tpsa(mol: MoleculeGraph) -> float:
    """Topological polar surface area in square angstroms.

    Sums the N/O atom-type contributions; carbon and halogens add nothing.
    """
    total = 0.0
    for i, element in enumerate(mol.elements):
        if element == "O":
            if any(order == 2 for _, order in mol.neighbors[i]):
                env = "double"
            elif mol.hydrogens[i] == 1:
                env = "hydroxyl"
            elif mol.hydrogens[i] == 0:
                env = "ether"
            else:
                raise UnclassifiableAtomError(f"oxygen {i} with {mol.hydrogens[i]}H")
            total += TPSA_CONTRIBUTIONS[("O", env)]
        elif element == "N":
            try:
                env = {2: "primary", 1: "secondary", 0: "tertiary"}[mol.hydrogens[i]]
            except KeyError:
                raise UnclassifiableAtomError(f"nitrogen {i} with {mol.hydrogens[i]}H") from None
            total += TPSA_CONTRIBUTIONS[("N", env)]
    return total


def molecular_weight(mol: MoleculeGraph) -> float:
    """Molecular weight in g/mol, hydrogens included."""
    mass_h = ATOMIC_MASS["H"]
    return sum(ATOMIC_MASS[e] + mass_h * h for e, h in zip(mol.elements, mol.hydrogens))


def atom_count(mol: MoleculeGraph) -> int:
    """Number of atoms, hydrogens included."""
    return len(mol.elements) + sum(mol.hydrogens)


# ---------------------------------------------------------------------------
# reward plumbing for the tree search


class MoleculeEvaluationError(RuntimeError):
    """Property evaluation failed; carries the offending SMILES."""

    def __init__(self, smiles: str, cause: Exception):
        super().__init__(f"property evaluation failed for {smiles!r}: {cause}")
        self.smiles = smiles


@dataclass(frozen=True)
class PropertyReward:
    """A named reward: evaluator over finished derivations plus the grammar
    the property supports and the aggregation style its reward scale wants."""

    name: str
    grammar: Grammar
    skewed: bool  # True: prefer median/quantile aggregation

    def evaluate_molecule(self, mol: MoleculeGraph) -> float:
        if self.name == "tb":
            return joback_tb(classify_fragments(mol))
        if self.name == "pc":
            return joback_pc(classify_fragments(mol), atom_count(mol))
        if self.name == "eta":
            return joback_eta(classify_fragments(mol), molecular_weight(mol))
        if self.name == "tpsa":
            return tpsa(mol)
        raise ValueError(f"unknown property {self.name!r}")

    def evaluate_state(self, state) -> tuple[float, str]:
        """Finalize a derivation and score it; returns (reward, smiles)."""
        mol, smiles = finalize(state)
        try:
            return self.evaluate_molecule(mol), smiles
        except Exception as exc:
            raise MoleculeEvaluationError(smiles, exc) from exc


_PROPERTIES = {
    "tb": PropertyReward("tb", FULL_GRAMMAR, skewed=False),
    "pc": PropertyReward("pc", FULL_GRAMMAR, skewed=False),
    "eta": PropertyReward("eta", VISCOSITY_GRAMMAR, skewed=True),
    "tpsa": PropertyReward("tpsa", FULL_GRAMMAR, skewed=False),
}

PROPERTY_NAMES = tuple(_PROPERTIES)


def property_reward(name: str) -> PropertyReward:
    try:
        return _PROPERTIES[name]
    except KeyError:
        raise ValueError(f"unknown property {name!r}; known: {', '.join(_PROPERTIES)}") from None

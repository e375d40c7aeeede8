"""Context-free SMILES generator for acyclic C/O/N/halogen molecules.

The grammar has three nonterminals.  ``S`` starts a molecule; ``X`` and
``Y`` are open attachment slots that productions either terminate (with a
bracket hydrogen or a halogen) or extend (with carbon, oxygen, or nitrogen
gadgets).  Every production maps one-to-one onto a molecular-graph gadget,
so the heavy-atom graph is built *during* derivation and no SMILES parsing
is ever needed: by the time a derivation completes, every atom has its
exact valence (C:4, O:2, N:3, halogens:1) filled by bonds and explicit
hydrogen counts, and the bond list forms a tree (no rings).

Two carbons of the butene-backbone start rule are written as bare SMILES
``C`` with only two explicit neighbors; standard SMILES valence rules give
them two implicit hydrogens, which the gadget records on the graph.  Those
hydrogens are not letters of the string and never enter the letter count.

Derivations terminate because of a size rule: once the letter count of the
emitted terminals exceeds 40 (counting every alphabetic character, so "Cl"
and "Br" are two letters and bracket hydrogens count, but parentheses,
brackets and '=' do not), the only production offered for X and Y is the
hydrogen fill.  The check runs before productions are offered, against the
letters already fixed in the partial string.

Expansion order is leftmost-nonterminal, which makes the derivation tree
deterministic and lets the tree search treat production choices as arms.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

__all__ = [
    "Production",
    "Grammar",
    "FULL_GRAMMAR",
    "VISCOSITY_GRAMMAR",
    "build_grammar",
    "MoleculeGraph",
    "DerivationState",
    "DerivationSearchSpace",
    "VALENCE",
    "alphabet_count",
    "legal_productions",
    "apply_production",
    "finalize",
    "random_molecule",
]

#: Exact valences enforced on every finished molecule.
VALENCE = {"C": 4, "O": 2, "N": 3, "F": 1, "Cl": 1, "Br": 1}

#: Letter count above which only hydrogen fills are offered.
LETTER_LIMIT = 40


def alphabet_count(text: str) -> int:
    """Letters in an emitted terminal string.

    Counts every alphabetic character (explicit bracket H included, so
    "Cl" and "Br" count as two); parentheses, square brackets, and '='
    count zero.
    """
    return sum(1 for ch in text if ch.isalpha())


@dataclass(frozen=True)
class Production:
    """One grammar rule and its molecular-graph gadget.

    ``template`` is the rule's right side as literal string fragments
    interleaved with slot ordinals (ints indexing ``slots``).  ``atoms``
    holds (element, implicit_hydrogens) pairs; atom 0 bonds to the parent
    slot (single bond).  ``slots`` lists (local_atom, nonterminal) open
    attachments in template order.  The hydrogen fill has no atoms and
    instead adds one hydrogen to the parent atom.
    """

    lhs: str
    template: tuple
    atoms: tuple = ()
    bonds: tuple = ()
    slots: tuple = ()
    h_fill: bool = False
    letters: int = field(init=False, default=0)

    def __post_init__(self):
        object.__setattr__(
            self, "letters", sum(alphabet_count(p) for p in self.template if isinstance(p, str))
        )

    @property
    def text(self) -> str:
        """Right side with nonterminals spelled back in, for display."""
        return "".join(p if isinstance(p, str) else self.slots[p][1] for p in self.template)


def _p(lhs, template, atoms=(), bonds=(), slots=(), h_fill=False):
    return Production(lhs, template, tuple(atoms), tuple(bonds), tuple(slots), h_fill)


_H_FILL_X = _p("X", ("[H]",), h_fill=True)
_H_FILL_Y = _p("Y", ("[H]",), h_fill=True)

_S_RULES = (
    _p("S", ("C(", 0, ")(", 1, ")(", 2, ")(", 3, ")"),
       atoms=[("C", 0)],
       slots=[(0, "X"), (0, "Y"), (0, "Y"), (0, "Y")]),
    _p("S", ("C(=O)(", 0, ")(", 1, ")"),
       atoms=[("C", 0), ("O", 0)], bonds=[(0, 1, 2)],
       slots=[(0, "Y"), (0, "Y")]),
    _p("S", ("C(", 0, ")C(", 1, ")(=C(", 2, ")C(", 3, "))"),
       atoms=[("C", 2), ("C", 0), ("C", 0), ("C", 2)],
       bonds=[(0, 1, 1), (1, 2, 2), (2, 3, 1)],
       slots=[(0, "Y"), (1, "Y"), (2, "Y"), (3, "Y")]),
    _p("S", ("C(=O)(O(", 0, "))(", 1, ")"),
       atoms=[("C", 0), ("O", 0), ("O", 0)], bonds=[(0, 1, 2), (0, 2, 1)],
       slots=[(2, "Y"), (0, "Y")]),
)

_X_RULES = (
    _H_FILL_X,
    _p("X", ("F",), atoms=[("F", 0)]),
    _p("X", ("Cl",), atoms=[("Cl", 0)]),
    _p("X", ("Br",), atoms=[("Br", 0)]),
    _p("X", ("C(", 0, ")(", 1, ")(", 2, ")"),
       atoms=[("C", 0)], slots=[(0, "X"), (0, "Y"), (0, "Y")]),
    _p("X", ("O(", 0, ")"), atoms=[("O", 0)], slots=[(0, "Y")]),
    _p("X", ("N(", 0, ")(", 1, ")"), atoms=[("N", 0)], slots=[(0, "Y"), (0, "Y")]),
    _p("X", ("C(=O)(", 0, ")"), atoms=[("C", 0), ("O", 0)], bonds=[(0, 1, 2)],
       slots=[(0, "Y")]),
    _p("X", ("C(", 0, ")(=C(", 1, ")(", 2, "))"),
       atoms=[("C", 0), ("C", 0)], bonds=[(0, 1, 2)],
       slots=[(0, "Y"), (1, "Y"), (1, "Y")]),
    _p("X", ("C(=O)(O(", 0, "))"),
       atoms=[("C", 0), ("O", 0), ("O", 0)], bonds=[(0, 1, 2), (0, 2, 1)],
       slots=[(2, "Y")]),
)


def _as_y(prod: Production) -> Production:
    return Production("Y", prod.template, prod.atoms, prod.bonds, prod.slots, prod.h_fill)


# Y offers the X rules minus the ether and amine extensions; slot kinds are
# unchanged, so the carbon gadget still opens one X slot.
_Y_RULES = tuple(
    _as_y(p) for p in _X_RULES
    if not (p.atoms and p.atoms[0][0] in ("O", "N") and not p.bonds)
)


@dataclass(frozen=True)
class Grammar:
    """Production tables per nonterminal, plus the over-limit restriction."""

    name: str
    table: dict
    restricted: dict

    def productions(self, nonterminal: str) -> tuple[Production, ...]:
        return self.table[nonterminal]


def build_grammar(name: str = "full", exclude: Callable[[Production], bool] | None = None) -> Grammar:
    """Assemble a grammar, optionally excluding productions.

    ``exclude`` sees each X/Y/S production and returns True to drop it;
    the hydrogen fills are never excluded (they guarantee termination).
    """
    def keep(rules):
        return tuple(p for p in rules if p.h_fill or exclude is None or not exclude(p))

    table = {"S": keep(_S_RULES), "X": keep(_X_RULES), "Y": keep(_Y_RULES)}
    if not table["S"]:
        raise ValueError("exclusions removed every start rule")
    return Grammar(name, table, {"X": (_H_FILL_X,), "Y": (_H_FILL_Y,)})


FULL_GRAMMAR = build_grammar("full")

# Viscosity parameters are unavailable for fluorine, nitrogen, and doubly
# bonded carbon groups, so viscosity searches drop every rule containing
# F, N, or "=C".
VISCOSITY_GRAMMAR = build_grammar(
    "viscosity",
    exclude=lambda p: ("F" in p.text) or ("N" in p.text) or ("=C" in p.text),
)


class MoleculeGraph:
    """Heavy-atom graph with explicit hydrogen counts and bond orders."""

    __slots__ = ("elements", "hydrogens", "bonds", "neighbors")

    def __init__(self, elements: Sequence[str], hydrogens: Sequence[int], bonds: Sequence[tuple]):
        self.elements = tuple(elements)
        self.hydrogens = tuple(hydrogens)
        self.bonds = tuple(bonds)
        adj: list[list[tuple[int, int]]] = [[] for _ in self.elements]
        for i, j, order in self.bonds:
            adj[i].append((j, order))
            adj[j].append((i, order))
        self.neighbors = tuple(tuple(a) for a in adj)

    @property
    def heavy_atom_count(self) -> int:
        return len(self.elements)

    def valence_ok(self) -> bool:
        degree = [h for h in self.hydrogens]
        for i, j, order in self.bonds:
            degree[i] += order
            degree[j] += order
        return all(degree[i] == VALENCE[e] for i, e in enumerate(self.elements))

    def __repr__(self):
        return f"MoleculeGraph({len(self.elements)} heavy atoms, {len(self.bonds)} bonds)"


class _Slot:
    """An open attachment: the parent atom index (None at the root) and the
    pending nonterminal.  Slot objects double as placeholders in the partial
    string, so identity links the pending queue to string positions."""

    __slots__ = ("atom", "nonterminal")

    def __init__(self, atom: int | None, nonterminal: str):
        self.atom = atom
        self.nonterminal = nonterminal


class DerivationState:
    """A position in a leftmost derivation.

    Tracks the partial string (terminal fragments with slot placeholders),
    the pending slots in textual order, the growing heavy-atom graph, and
    the running letter count of the emitted terminals.
    """

    __slots__ = ("grammar", "parts", "pending", "elements", "hydrogens", "bonds", "letters", "_scan")

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        root = _Slot(None, "S")
        self.parts: list = [root]
        self.pending: deque[_Slot] = deque([root])
        self.elements: list[str] = []
        self.hydrogens: list[int] = []
        self.bonds: list[tuple[int, int, int]] = []
        self.letters = 0
        self._scan = 0

    @property
    def complete(self) -> bool:
        return not self.pending

    def terminal_text(self) -> str:
        """Terminals emitted so far (slots skipped)."""
        return "".join(p for p in self.parts if isinstance(p, str))


def legal_productions(state: DerivationState, grammar: Grammar | None = None) -> tuple[Production, ...]:
    """Productions offered at the state's leftmost pending nonterminal.

    Once the letter count exceeds the limit, only the hydrogen fill is
    offered; the derivation then finishes in as many steps as there are
    pending slots.
    """
    if grammar is None:
        grammar = state.grammar
    if not state.pending:
        raise ValueError("derivation is complete; no pending nonterminal")
    nt = state.pending[0].nonterminal
    if state.letters > LETTER_LIMIT and nt in grammar.restricted:
        return grammar.restricted[nt]
    return grammar.table[nt]


def apply_production(state: DerivationState, production: Production) -> DerivationState:
    """Expand the leftmost pending nonterminal in place; returns the state."""
    slot = state.pending.popleft()
    if production.lhs != slot.nonterminal:
        raise ValueError(f"production for {production.lhs} applied to {slot.nonterminal} slot")

    if production.h_fill:
        state.hydrogens[slot.atom] += 1
        new_parts: list = ["[H]"]
    else:
        base = len(state.elements)
        for element, h in production.atoms:
            state.elements.append(element)
            state.hydrogens.append(h)
        if slot.atom is not None:
            state.bonds.append((slot.atom, base, 1))
        for i, j, order in production.bonds:
            state.bonds.append((base + i, base + j, order))
        new_slots = [_Slot(base + a, nt) for a, nt in production.slots]
        new_parts = [p if isinstance(p, str) else new_slots[p] for p in production.template]
        state.pending.extendleft(reversed(new_slots))

    # splice into the partial string at the slot's position
    parts = state.parts
    pos = parts.index(slot, state._scan)
    parts[pos:pos + 1] = new_parts
    state._scan = pos
    state.letters += production.letters
    return state


def finalize(state: DerivationState) -> tuple[MoleculeGraph, str]:
    """Close out a completed derivation: (graph, SMILES string).

    The string is the terminal string exactly as generated (explicit
    bracket hydrogens, no canonicalization).  Raises if the derivation is
    incomplete or the graph fails its valence/acyclicity audit, which would
    signal a gadget-table bug rather than a user error.
    """
    if state.pending:
        raise ValueError("derivation still has pending nonterminals")
    mol = MoleculeGraph(state.elements, state.hydrogens, state.bonds)
    if len(mol.bonds) != mol.heavy_atom_count - 1:
        raise AssertionError("generated graph is not a tree")
    if not mol.valence_ok():
        raise AssertionError("generated graph violates exact valence")
    return mol, "".join(state.parts)


class DerivationSearchSpace:
    """Adapter exposing a grammar's derivations to the tree search."""

    def __init__(self, grammar: Grammar = FULL_GRAMMAR):
        self.grammar = grammar

    def initial_state(self) -> DerivationState:
        return DerivationState(self.grammar)

    def choices(self, state: DerivationState) -> tuple[Production, ...]:
        return legal_productions(state, self.grammar)

    def apply(self, state: DerivationState, choice: Production) -> DerivationState:
        return apply_production(state, choice)

    def is_terminal(self, state: DerivationState) -> bool:
        return state.complete


def random_molecule(rng, grammar: Grammar = FULL_GRAMMAR) -> tuple[MoleculeGraph, str]:
    """Uniform-random derivation; handy for fuzzing and demos."""
    state = DerivationState(grammar)
    while not state.complete:
        options = legal_productions(state, grammar)
        apply_production(state, options[rng.randrange(len(options))])
    return finalize(state)

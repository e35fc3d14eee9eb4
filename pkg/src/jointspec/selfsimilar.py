"""Mealy automata over the binary alphabet and their level-n permutational
representations.

A state ``g`` with output ``eps`` and transitions ``(g0, g1)`` is the wreath
recursion ``g = (g0, g1) sigma^eps``: ``g(x w) = (x xor eps) g_x(w)``.
Words are strings over ``{0, 1}``, root letter first; the word ``x r`` at
level ``n`` has index ``x * 2**(n-1) + index(r)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import LevelTooLarge, UnknownAutomaton

#: Default largest tree level for matrix construction (4096 x 4096).
DEFAULT_LEVEL_CAP = 12

IDENTITY_STATE = "id"


@dataclass(frozen=True)
class Automaton:
    """Finite binary transducer.

    ``outputs[s]`` is 0 (identity on the first letter) or 1 (swap);
    ``transitions[s]`` is the pair of sections ``(s|0, s|1)``.
    """

    name: str
    states: tuple[str, ...]
    outputs: tuple[tuple[str, int], ...]
    transitions: tuple[tuple[str, tuple[str, str]], ...]
    generators: tuple[str, ...]

    def __post_init__(self):
        states = set(self.states)
        if len(states) != len(self.states):
            raise ValueError("duplicate state names")
        out = dict(self.outputs)
        trans = dict(self.transitions)
        if set(out) != states or set(trans) != states:
            raise ValueError("outputs and transitions must be given for every state")
        for s, eps in out.items():
            if eps not in (0, 1):
                raise ValueError(f"output of {s!r} must be 0 or 1, got {eps!r}")
        for s, pair in trans.items():
            if len(pair) != 2 or not set(pair) <= states:
                raise ValueError(f"transition of {s!r} must name two known states")
        if not set(self.generators) <= states:
            raise ValueError("generators must be states")

    @classmethod
    def from_dicts(
        cls,
        name: str,
        outputs: Mapping[str, int],
        transitions: Mapping[str, tuple[str, str]],
        generators,
    ) -> "Automaton":
        states = tuple(outputs)
        return cls(
            name,
            states,
            tuple((s, int(outputs[s])) for s in states),
            tuple((s, tuple(transitions[s])) for s in states),
            tuple(generators),
        )

    def output(self, state: str) -> int:
        return dict(self.outputs)[state]

    def section(self, state: str, letter: int) -> str:
        return dict(self.transitions)[state][letter]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "states": list(self.states),
            "outputs": dict(self.outputs),
            "transitions": {s: list(p) for s, p in self.transitions},
            "generators": list(self.generators),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "Automaton":
        if isinstance(data, str):
            data = json.loads(data)
        outputs = {s: data["outputs"][s] for s in data["states"]}
        return cls.from_dicts(data.get("name", "custom"), outputs, data["transitions"], data["generators"])


def _make(name, spec: dict, generators) -> Automaton:
    outputs = {s: eps for s, (eps, _) in spec.items()}
    transitions = {s: secs for s, (_, secs) in spec.items()}
    outputs[IDENTITY_STATE] = 0
    transitions[IDENTITY_STATE] = (IDENTITY_STATE, IDENTITY_STATE)
    return Automaton.from_dicts(name, outputs, transitions, generators)


_I = IDENTITY_STATE
_BUILTINS = {
    # a = sigma, t = (a, t)
    "dinf_2874": ({"a": (1, (_I, _I)), "t": (0, ("a", "t"))}, ("a", "t")),
    # a = (a, a) sigma, t = (a, t)
    "dinf_aa_sigma": ({"a": (1, ("a", "a")), "t": (0, ("a", "t"))}, ("a", "t")),
    # a = (t, t) sigma, t = (a, t)
    "dinf_tt_sigma": ({"a": (1, ("t", "t")), "t": (0, ("a", "t"))}, ("a", "t")),
    "grigorchuk": (
        {"a": (1, (_I, _I)), "b": (0, ("a", "c")), "c": (0, ("a", "d")), "d": (0, (_I, "b"))},
        ("a", "b", "c", "d"),
    ),
    # b~ = (a, c~), c~ = (1, d~), d~ = (1, b~); tildes written as a "t" suffix
    "overgroup": (
        {"a": (1, (_I, _I)), "bt": (0, ("a", "ct")), "ct": (0, (_I, "dt")), "dt": (0, (_I, "bt"))},
        ("a", "bt", "ct", "dt"),
    ),
    # the odometer alpha = (1, alpha) sigma
    "adding_machine": ({"alpha": (1, (_I, "alpha"))}, ("alpha",)),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_automaton(name: str) -> Automaton:
    try:
        spec, gens = _BUILTINS[name]
    except KeyError:
        raise UnknownAutomaton(f"unknown automaton {name!r}; expected one of {', '.join(BUILTIN_NAMES)}") from None
    return _make(name, spec, gens)


def act(automaton: Automaton, generator: str, word: str) -> str:
    """Image of ``word`` under the state ``generator``."""
    if generator not in automaton.states:
        raise KeyError(f"{generator!r} is not a state of {automaton.name}")
    if set(word) - {"0", "1"}:
        raise ValueError(f"word must be binary, got {word!r}")
    out = dict(automaton.outputs)
    trans = dict(automaton.transitions)
    state = generator
    image = []
    for ch in word:
        x = int(ch)
        image.append(str(x ^ out[state]))
        state = trans[state][x]
    return "".join(image)


@lru_cache(maxsize=None)
def _perms(automaton: Automaton, n: int) -> dict[str, np.ndarray]:
    """``perm[s][w] = s(w)`` on level-``n`` word indices, for every state."""
    if n == 0:
        return {s: np.zeros(1, dtype=np.int64) for s in automaton.states}
    below = _perms(automaton, n - 1)
    half = 1 << (n - 1)
    out = dict(automaton.outputs)
    trans = dict(automaton.transitions)
    result = {}
    for s in automaton.states:
        p = np.empty(2 * half, dtype=np.int64)
        for x in (0, 1):
            y = x ^ out[s]
            p[x * half:(x + 1) * half] = y * half + below[trans[s][x]]
        p.setflags(write=False)
        result[s] = p
    return result


def level_permutation(automaton: Automaton, generator: str, n: int, cap: int = DEFAULT_LEVEL_CAP) -> np.ndarray:
    """Index map ``w -> g(w)`` on the ``2**n`` level-``n`` vertices."""
    _check_level(n, cap)
    return _perms(automaton, n)[generator]


def _check_level(n: int, cap: int):
    if n < 0:
        raise ValueError("level must be nonnegative")
    if n > cap:
        raise LevelTooLarge(f"level {n} exceeds cap {cap}")


def permutation_matrix(perm: np.ndarray) -> np.ndarray:
    """0/1 matrix ``M`` with ``M[perm[w], w] = 1``."""
    size = perm.shape[0]
    m = np.zeros((size, size), dtype=np.int8)
    m[perm, np.arange(size)] = 1
    return m


@dataclass(frozen=True)
class LevelRep:
    level: int
    matrices: Mapping[str, np.ndarray]
    permutations: Mapping[str, np.ndarray]

    @property
    def dim(self) -> int:
        return 1 << self.level

    def __getitem__(self, name: str) -> np.ndarray:
        return self.matrices[name]


def build_level_rep(automaton: Automaton, n: int, cap: int = DEFAULT_LEVEL_CAP) -> LevelRep:
    """Level-``n`` permutation matrices of the automaton's generators.

    Block ``(y, x)`` of the matrix of ``g`` is the level ``n-1`` matrix of
    the section ``g|x`` when ``g(x) = y``, and zero otherwise.
    """
    _check_level(n, cap)
    perms = _perms(automaton, n)
    gens = automaton.generators
    return LevelRep(
        n,
        {g: permutation_matrix(perms[g]) for g in gens},
        {g: perms[g] for g in gens},
    )


def u_level_matrix(n: int, cap: int = DEFAULT_LEVEL_CAP) -> np.ndarray:
    """``(b + c + d - I) / 2`` at level ``n`` of the Grigorchuk group, as integers."""
    rep = build_level_rep(builtin_automaton("grigorchuk"), n, cap)
    total = (
        rep["b"].astype(np.int64) + rep["c"] + rep["d"] - np.eye(rep.dim, dtype=np.int64)
    )
    if np.any(total % 2):
        raise ArithmeticError("b + c + d - I has odd entries")
    return total // 2


def compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Index map of the matrix product ``M(p) M(q)``: apply ``q`` first."""
    return p[q]


def cycle_lengths(perm: np.ndarray) -> list[int]:
    """Lengths of the cycles of an index permutation, in order of first element."""
    size = perm.shape[0]
    seen = np.zeros(size, dtype=bool)
    lengths = []
    for start in range(size):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        lengths.append(length)
    return lengths

"""Describer machines and catalog-relative description complexity.

A describer machine is a finite dictionary from classical programs
(bitstrings) to orthonormal output states.  Feeding it a superposition
of programs produces the matching superposition of outputs, so any
state in the span of the outputs has exactly one program-side
preimage: the amplitude on program p is the overlap of output p with
the state.  The average-length complexity of a state relative to one
machine is therefore forced:

    value = sum_p |<v_p|state>|**2 * len(p)

A machine catalog plays the role of a finite universal table.  Machine
i is addressed by the self-delimiting index ``1^len(bin(i)) 0 bin(i)``,
which costs ``2 * len(bin(i)) + 1`` extra bits; the catalog complexity
of a state is the cheapest total over machines that span it, ties going
to the lowest index.

Machine text format: a ``prefix: true|false`` header line, then one
``<program> -> <state>`` line per program, where ``<state>`` is either
a path to a ``.qstr`` file (resolved next to the machine file) or an
inline ``{ bits:re,im ; ... }`` block.  ``eps`` names the empty string.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .codes import ceil_neg_log2
from .errors import (
    CapExceededError,
    DuplicateKeyError,
    FormatError,
    NoDescriberError,
    NoOverlapError,
    NotOrthonormalError,
    NotPrefixFreeError,
    OutOfSpanError,
)
from .fock import (
    EPS_TOKEN,
    QString,
    check_bitstring,
    delimit_bits,
    format_inline_state,
    inner_product,
    length_lex,
    parse_inline_state,
    read_qstring_file,
)
from .qcode import CondensableCode

SPAN_TOL = 1e-8
AMP_FLOOR = 1e-12
OVERLAP_FLOOR = 1e-8
IDENTITY_MAX_LEN = 20


def index_cost(i: int) -> int:
    """Bits needed to address catalog machine ``i`` self-delimitingly."""
    if i < 1:
        raise ValueError(f"catalog indices start at 1, got {i}")
    return 2 * len(format(i, "b")) + 1


class DescriberMachine:
    """Finite program table with pairwise orthonormal outputs."""

    __slots__ = ("_programs", "_prefix_flag", "_key_index")

    def __init__(
        self,
        programs: Mapping[str, QString] | Iterable[tuple[str, QString]],
        *,
        prefix_flag: bool,
    ) -> None:
        if isinstance(programs, Mapping):
            pairs = programs.items()
        else:
            pairs = list(programs)
        table: dict[str, QString] = {}
        for prog, out in pairs:
            check_bitstring(prog)
            if prog in table:
                raise DuplicateKeyError(f"duplicate program {prog!r}")
            if not isinstance(out, QString):
                raise TypeError("machine outputs must be QString instances")
            table[prog] = out
        if not table:
            raise ValueError("machine has no programs")
        if prefix_flag:
            ordered = sorted(table)
            for a, b in zip(ordered, ordered[1:]):
                if b.startswith(a):
                    raise NotPrefixFreeError(
                        f"program {a or EPS_TOKEN!r} is a prefix of {b!r}"
                    )
        self._check_outputs_orthonormal(table)
        self._programs = table
        self._prefix_flag = bool(prefix_flag)
        key_index: dict[str, list[str]] = {}
        for prog, out in table.items():
            for bits in out.keys():
                key_index.setdefault(bits, []).append(prog)
        self._key_index = key_index

    @staticmethod
    def _check_outputs_orthonormal(table: dict[str, QString]) -> None:
        # Fast path: single-term outputs with unit amplitude and distinct
        # labels are orthonormal by construction.  Identity-style machines
        # can hold 10**5+ programs, so the quadratic Gram check is reserved
        # for tables with genuine superpositions.
        simple_keys: set[str] = set()
        general: list[tuple[str, QString]] = []
        for prog, out in table.items():
            if len(out) == 1:
                ((bits, amp),) = out.items()
                if abs(abs(amp) - 1.0) <= 1e-8:
                    if bits in simple_keys:
                        raise NotOrthonormalError(
                            f"two programs output the basis string {bits!r}"
                        )
                    simple_keys.add(bits)
                    continue
            general.append((prog, out))
        for i, (prog_a, a) in enumerate(general):
            norm = inner_product(a, a).real
            if abs(norm - 1.0) > 1e-8:
                raise NotOrthonormalError(
                    f"output of program {prog_a or EPS_TOKEN!r} has norm {norm!r}"
                )
            for bits, amp in a.items():
                if bits in simple_keys and abs(amp) > 1e-8:
                    raise NotOrthonormalError(
                        f"output of {prog_a or EPS_TOKEN!r} overlaps a "
                        f"basis-string output on {bits!r}"
                    )
            for prog_b, b in general[i + 1 :]:
                ov = inner_product(a, b)
                if abs(ov) > 1e-8:
                    raise NotOrthonormalError(
                        f"outputs of {prog_a or EPS_TOKEN!r} and "
                        f"{prog_b or EPS_TOKEN!r} overlap by {abs(ov):.3e}"
                    )

    @property
    def programs(self) -> dict[str, QString]:
        return dict(self._programs)

    @property
    def prefix_flag(self) -> bool:
        return self._prefix_flag

    def output(self, program: str) -> QString:
        return self._programs[program]

    def __len__(self) -> int:
        return len(self._programs)

    def __contains__(self, program: str) -> bool:
        return program in self._programs

    def _candidates(self, state: QString) -> list[str]:
        seen: set[str] = set()
        for bits in state.keys():
            seen.update(self._key_index.get(bits, ()))
        return sorted(seen, key=length_lex)


@dataclass(frozen=True)
class ComplexityEstimate:
    """A description-length value with its forced decomposition.

    ``machine_index`` is the 1-based catalog position of the witnessing
    machine for catalog-level estimates and ``None`` for single-machine
    estimates.  ``decomposition`` maps each contributing program to its
    squared-amplitude weight.
    """

    value: float
    machine_index: int | None = None
    decomposition: dict[str, float] = field(default_factory=dict)


def machine_complexity(machine: DescriberMachine, state: QString) -> ComplexityEstimate:
    """Average description length of ``state`` on one machine."""
    weights: dict[str, float] = {}
    captured = 0.0
    value = 0.0
    for prog in machine._candidates(state):
        c = inner_product(machine.output(prog), state)
        w = abs(c) ** 2
        captured += w
        if w > AMP_FLOOR:
            weights[prog] = w
            value += w * len(prog)
    if 1.0 - captured > SPAN_TOL:
        raise OutOfSpanError(
            f"state leaves the machine span; residual {1.0 - captured:.3e}"
        )
    return ComplexityEstimate(value=float(value), machine_index=None, decomposition=weights)


def base_length_complexity(machine: DescriberMachine, state: QString) -> int:
    """Longest program contributing to the forced decomposition."""
    est = machine_complexity(machine, state)
    lengths = [
        len(p) for p, w in est.decomposition.items() if math.sqrt(w) > OVERLAP_FLOOR
    ]
    if not lengths:
        raise OutOfSpanError("no program carries weight above the floor")
    return max(lengths)


class MachineCatalog:
    """An ordered, 1-indexed sequence of describer machines."""

    __slots__ = ("_machines",)

    def __init__(self, machines: Iterable[DescriberMachine]) -> None:
        ms = tuple(machines)
        if not ms:
            raise ValueError("catalog is empty")
        for m in ms:
            if not isinstance(m, DescriberMachine):
                raise TypeError("catalog entries must be DescriberMachine instances")
        self._machines = ms

    @property
    def machines(self) -> tuple[DescriberMachine, ...]:
        return self._machines

    def machine(self, i: int) -> DescriberMachine:
        if not 1 <= i <= len(self._machines):
            raise ValueError(f"catalog index {i} out of range 1..{len(self._machines)}")
        return self._machines[i - 1]

    def all_prefix(self) -> bool:
        return all(m.prefix_flag for m in self._machines)

    def __len__(self) -> int:
        return len(self._machines)

    def __iter__(self):
        return iter(self._machines)


def universal_complexity(cat: MachineCatalog, state: QString) -> ComplexityEstimate:
    """Cheapest index-cost-plus-description total over the catalog.

    Ties go to the lowest machine index; a state no machine spans
    raises :class:`NoDescriberError`.
    """
    best: ComplexityEstimate | None = None
    for i, machine in enumerate(cat, start=1):
        try:
            est = machine_complexity(machine, state)
        except OutOfSpanError:
            continue
        total = index_cost(i) + est.value
        if best is None or total < best.value:
            best = ComplexityEstimate(
                value=float(total), machine_index=i, decomposition=est.decomposition
            )
    if best is None:
        raise NoDescriberError("no machine in the catalog spans the state")
    return best


def min_description_length(cat: MachineCatalog, state: QString) -> float:
    """Best machine-level value over the catalog, without index costs."""
    best: float | None = None
    for machine in cat:
        try:
            est = machine_complexity(machine, state)
        except OutOfSpanError:
            continue
        if best is None or est.value < best:
            best = est.value
    if best is None:
        raise NoDescriberError("no machine in the catalog spans the state")
    return best


def fidelity_penalized_complexity(
    programs: Mapping[str, QString] | DescriberMachine, state: QString
) -> int:
    """Cheapest ``len(p) + ceil(-log2 |<state|v_p>|**2)`` over programs.

    The program table here is unconstrained: outputs may overlap, and
    the penalty term charges for the imperfect fidelity of the output
    against the target.  Raises :class:`NoOverlapError` when every
    output is orthogonal to the target.
    """
    if isinstance(programs, DescriberMachine):
        table = programs.programs
    else:
        table = dict(programs)
    best: int | None = None
    for prog in sorted(table, key=length_lex):
        f = abs(inner_product(state, table[prog])) ** 2
        if f <= 0.0:
            continue
        val = len(prog) + ceil_neg_log2(min(f, 1.0))
        if best is None or val < best:
            best = val
    if best is None:
        raise NoOverlapError("no program output overlaps the state")
    return best


def all_bitstrings(max_len: int) -> Iterable[str]:
    """Every bitstring of length 0..max_len in canonical order."""
    for n in range(max_len + 1):
        for tup in itertools.product("01", repeat=n):
            yield "".join(tup)


def identity_machine(max_len: int) -> DescriberMachine:
    """The machine mapping every string of length <= max_len to itself."""
    if max_len > IDENTITY_MAX_LEN:
        raise CapExceededError(
            f"identity machine capped at max_len {IDENTITY_MAX_LEN}, got {max_len}"
        )
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    programs = {bits: QString({bits: 1.0}) for bits in all_bitstrings(max_len)}
    return DescriberMachine(programs, prefix_flag=False)


def self_delimit_machine(machine: DescriberMachine) -> DescriberMachine:
    """Recode every program self-delimitingly: ``p -> 1^len(p) 0 p``.

    The recoded table is always prefix-free and its description lengths
    transform as ``2 * len(p) + 1``.
    """
    programs = {delimit_bits(p): out for p, out in machine.programs.items()}
    return DescriberMachine(programs, prefix_flag=True)


def machine_from_code(code: CondensableCode) -> DescriberMachine:
    """View a condensable code as the machine decoding its codewords."""
    programs = {
        code.words.codeword(k): code.source_basis[k] for k in range(len(code))
    }
    return DescriberMachine(programs, prefix_flag=True)


# --- machine text format ----------------------------------------------------

def load_program_table(
    text: str, *, base_dir: str | None = None
) -> tuple[dict[str, QString], bool]:
    """Parse the machine text format into ``(programs, prefix_flag)``."""
    prefix_flag: bool | None = None
    programs: dict[str, QString] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("prefix:"):
            value = line.split(":", 1)[1].strip().lower()
            if value not in ("true", "false"):
                raise FormatError(f"line {lineno}: prefix must be true or false")
            if prefix_flag is not None:
                raise FormatError(f"line {lineno}: duplicate prefix header")
            prefix_flag = value == "true"
            continue
        if "->" not in line:
            raise FormatError(f"line {lineno}: expected '<program> -> <state>'")
        lhs, rhs = line.split("->", 1)
        token = lhs.strip()
        prog = "" if token == EPS_TOKEN else token
        if prog and not set(prog) <= {"0", "1"}:
            raise FormatError(f"line {lineno}: bad program token {token!r}")
        if prog in programs:
            raise FormatError(f"line {lineno}: duplicate program {token!r}")
        rhs = rhs.strip()
        if rhs.startswith("{"):
            programs[prog] = parse_inline_state(rhs)
        else:
            path = rhs if base_dir is None else os.path.join(base_dir, rhs)
            programs[prog] = read_qstring_file(path)
    if prefix_flag is None:
        raise FormatError("missing 'prefix: true|false' header")
    if not programs:
        raise FormatError("machine has no programs")
    return programs, prefix_flag


def load_machine(text: str, *, base_dir: str | None = None) -> DescriberMachine:
    programs, prefix_flag = load_program_table(text, base_dir=base_dir)
    return DescriberMachine(programs, prefix_flag=prefix_flag)


def read_machine_file(path: str) -> DescriberMachine:
    with open(path, "r", encoding="utf-8") as fh:
        return load_machine(fh.read(), base_dir=os.path.dirname(path) or ".")


def dump_machine(machine: DescriberMachine) -> str:
    lines = [f"prefix: {'true' if machine.prefix_flag else 'false'}"]
    for prog in sorted(machine.programs, key=length_lex):
        lines.append(
            f"{prog or EPS_TOKEN} -> {format_inline_state(machine.output(prog))}"
        )
    return "\n".join(lines) + "\n"


def write_machine_file(path: str, machine: DescriberMachine) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_machine(machine))

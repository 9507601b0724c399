"""Command line driver.

Every subcommand emits a single report with the same envelope:

    {
      "tool_version": "...",
      "seed": 0,
      "inputs": {"<path>": "sha256:<hex>", ...},
      "result": {...},
      "checks": {...}
    }

Numeric fields are printed with 9 significant digits and keys are
sorted, so a rerun with the same inputs and seed is byte-identical.
JSON is the canonical format; ``--format csv`` is accepted only by the
sweep-shaped subcommands (``lossy`` with several n values and
``multicopy``), and ``--format text`` renders the same report as flat
``key = value`` lines.

Exit codes: 0 success, 1 domain error (structured error record),
2 usage error, 3 I/O error, 4 malformed input file.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import io
import json
import sys
from collections.abc import Sequence

from . import __version__
from .errors import FormatError, QFockError
from .fock import (
    EPS_TOKEN,
    QString,
    average_length,
    base_length,
    dump_qstring,
    pair_decode,
    pair_encode,
    read_qstring_file,
    self_delimit,
    write_qstring_file,
)
from .codes import (
    code_table_text,
    expected_length,
    kraft_sum,
    shannon_code,
)
from .linalg import (
    DensityOperator,
    Ensemble,
    density_from_ensemble,
    dump_ensemble,
    eig_hermitian,
    read_ensemble_file,
    shannon_entropy,
    von_neumann_entropy,
    write_ensemble_file,
)
from .qcode import (
    EIG_FLOOR,
    encode_qstring,
    lossy_typical_projection,
    sw_lossless_code,
    sw_report,
)
from .complexity import (
    DescriberMachine,
    MachineCatalog,
    fidelity_penalized_complexity,
    identity_machine,
    load_program_table,
    machine_complexity,
    machine_from_code,
    read_machine_file,
    self_delimit_machine,
    universal_complexity,
)
from .experiments import (
    InequalitySpec,
    entropy_sandwich_report,
    incompressibility_report,
    inequality_check,
    multicopy_report,
    nonadditivity_search,
    product_state,
    random_density,
)

SIG_DIGITS = 9


class _UsageError(Exception):
    """Raised for option combinations argparse cannot express."""


def _canon(value):
    """Clamp floats to 9 significant digits and plain Python types."""
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, str)) or value is None:
        return value
    if isinstance(value, float):
        return float(format(value, f".{SIG_DIGITS}g"))
    if isinstance(value, dict):
        return {str(k): _canon(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canon(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return _canon(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def _envelope(seed: int, inputs: Sequence[str], result: dict, checks: dict) -> dict:
    return {
        "tool_version": __version__,
        "seed": seed,
        "inputs": {p: _digest(p) for p in inputs},
        "result": _canon(result),
        "checks": _canon(checks),
    }


def _emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _emit_text(report: dict) -> str:
    lines = [
        f"tool_version = {report['tool_version']}",
        f"seed = {report['seed']}",
    ]
    for path, digest in sorted(report["inputs"].items()):
        lines.append(f"input {path} = {digest}")
    for section in ("result", "checks"):
        for key in sorted(report[section]):
            lines.append(f"{section}.{key} = {json.dumps(report[section][key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _emit_csv(report: dict, rows: list[dict], columns: list[str]) -> str:
    out = io.StringIO()
    out.write(f"# tool_version={report['tool_version']}\n")
    out.write(f"# seed={report['seed']}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(json.dumps(_canon(row[c])) for c in columns) + "\n")
    return out.getvalue()


def _parse_probs(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad probability list {text!r}: {exc}") from exc


def _parse_bits_arg(token: str) -> str:
    if token == EPS_TOKEN:
        return ""
    if not set(token) <= {"0", "1"}:
        raise _UsageError(f"bad bitstring argument {token!r} (use '{EPS_TOKEN}' for empty)")
    return token


def _bits_out(bits: str) -> str:
    return bits if bits else EPS_TOKEN


def _build_catalog(args) -> tuple[MachineCatalog, list[str]]:
    """Catalog from repeated --machine files, then --identity/--sd-identity."""
    machines: list[DescriberMachine] = []
    inputs: list[str] = []
    for path in args.machine or []:
        machines.append(read_machine_file(path))
        inputs.append(path)
    if getattr(args, "identity", None) is not None:
        machines.append(identity_machine(args.identity))
    if getattr(args, "sd_identity", None) is not None:
        machines.append(self_delimit_machine(identity_machine(args.sd_identity)))
    if not machines:
        raise _UsageError("no machines given; use --machine, --identity or --sd-identity")
    return MachineCatalog(machines), inputs


def _spectrum(rho: DensityOperator) -> list[float]:
    return [float(x) for x in eig_hermitian(rho).eigenvalues]


# --- subcommand handlers -----------------------------------------------------
# Each returns (result, checks, inputs, csv_rows_or_None).

def _cmd_avglen(args):
    state = read_qstring_file(args.state)
    return (
        {"average_length": average_length(state), "terms": len(state)},
        {},
        [args.state],
        None,
    )


def _cmd_baselen(args):
    state = read_qstring_file(args.state)
    return ({"base_length": base_length(state)}, {}, [args.state], None)


def _cmd_pair(args):
    if args.decode is not None:
        if args.x is not None or args.y is not None:
            raise _UsageError("--decode excludes --x/--y")
        x, y = pair_decode(_parse_bits_arg(args.decode))
        return ({"x": _bits_out(x), "y": _bits_out(y)}, {}, [], None)
    if args.x is None or args.y is None:
        raise _UsageError("need both --x and --y (or --decode)")
    x = _parse_bits_arg(args.x)
    y = _parse_bits_arg(args.y)
    encoded = pair_encode(x, y)
    return (
        {"encoded": encoded, "length": len(encoded)},
        {"roundtrip": pair_decode(encoded) == (x, y)},
        [],
        None,
    )


def _cmd_selfdelim(args):
    state = read_qstring_file(args.state)
    out = self_delimit(state)
    if args.out_state:
        write_qstring_file(args.out_state, out)
    lin = average_length(state)
    lout = average_length(out)
    return (
        {
            "text": dump_qstring(out),
            "average_length_in": lin,
            "average_length_out": lout,
        },
        {"length_law": abs(lout - (2.0 * lin + 1.0)) <= 1e-9},
        [args.state],
        None,
    )


def _cmd_entropy(args):
    rho = density_from_ensemble(read_ensemble_file(args.rho))
    eigs = _spectrum(rho)
    return (
        {"entropy": von_neumann_entropy(rho), "dim": rho.dim, "eigenvalues": eigs},
        {"psd": min(eigs) >= -1e-9},
        [args.rho],
        None,
    )


def _cmd_shannon(args):
    probs = _parse_probs(args.p)
    return ({"entropy": shannon_entropy(probs)}, {}, [], None)


def _cmd_code(args):
    probs = _parse_probs(args.p)
    code = shannon_code(probs)
    h = shannon_entropy(probs)
    e = expected_length(code, probs)
    table = code.table
    return (
        {
            "codewords": [_bits_out(table[i]) for i in sorted(table)],
            "lengths": [len(table[i]) for i in sorted(table)],
            "expected_length": e,
            "entropy": h,
            "table_text": code_table_text(code),
        },
        {
            "kraft_feasible": kraft_sum(len(w) for w in table.values()) <= 1.0,
            "sandwich": h - 1e-9 <= e < h + 1.0,
        },
        [],
        None,
    )


def _cmd_kraft(args):
    try:
        lengths = [int(x) for x in args.lengths.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad length list {args.lengths!r}") from exc
    total = kraft_sum(lengths)
    return (
        {"kraft_sum": total, "count": len(lengths)},
        {"feasible": total <= 1.0},
        [],
        None,
    )


def _cmd_sw(args):
    rho = density_from_ensemble(read_ensemble_file(args.rho))
    code, report = sw_report(rho)
    table = code.words.table
    return (
        {
            "codewords": [_bits_out(table[i]) for i in sorted(table)],
            "lengths": [len(table[i]) for i in sorted(table)],
            "expected_avg_length": report.expected_avg_length,
            "entropy": report.entropy,
            "kraft": report.kraft,
            "per_member": [[k, l] for k, l in report.per_member],
            "table_text": code_table_text(code.words),
        },
        {
            "kraft_feasible": report.kraft <= 1.0,
            "sandwich": report.entropy - 1e-9
            <= report.expected_avg_length
            <= report.entropy + 1.0,
        },
        [args.rho],
        None,
    )


def _cmd_encode(args):
    rho = density_from_ensemble(read_ensemble_file(args.rho))
    state = read_qstring_file(args.state)
    code = sw_lossless_code(rho)
    encoded = encode_qstring(code, state)
    if args.out_state:
        write_qstring_file(args.out_state, encoded)
    return (
        {
            "text": dump_qstring(encoded),
            "average_length": average_length(encoded),
            "input_average_length": average_length(state),
        },
        {},
        [args.rho, args.state],
        None,
    )


def _cmd_lossy(args):
    rho = density_from_ensemble(read_ensemble_file(args.rho))
    try:
        ns = [int(x) for x in str(args.n).split(",") if x.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad copy-count list {args.n!r}") from exc
    if not ns:
        raise _UsageError("no copy counts given")
    rows = []
    for n in ns:
        rep = lossy_typical_projection(rho, n, args.delta)
        rows.append(dataclasses.asdict(rep))
    if len(rows) == 1:
        return (rows[0], {"success_le_one": rows[0]["success"] <= 1.0}, [args.rho], rows)
    return (
        {"delta": args.delta, "sweep": rows},
        {"all_success_le_one": all(r["success"] <= 1.0 for r in rows)},
        [args.rho],
        rows,
    )


def _cmd_complexity(args):
    machine = read_machine_file(args.machine)
    state = read_qstring_file(args.state)
    est = machine_complexity(machine, state)
    return (
        {
            "value": est.value,
            "decomposition": {_bits_out(p): w for p, w in sorted(est.decomposition.items())},
        },
        {"weights_sum_to_one": abs(sum(est.decomposition.values()) - 1.0) <= 1e-6},
        [args.machine, args.state],
        None,
    )


def _cmd_universal(args):
    cat, inputs = _build_catalog(args)
    state = read_qstring_file(args.state)
    est = universal_complexity(cat, state)
    return (
        {
            "value": est.value,
            "machine_index": est.machine_index,
            "decomposition": {_bits_out(p): w for p, w in sorted(est.decomposition.items())},
        },
        {},
        inputs + [args.state],
        None,
    )


def _cmd_kq(args):
    with open(args.programs, "r", encoding="utf-8") as fh:
        programs, _ = load_program_table(fh.read(), base_dir=".")
    state = read_qstring_file(args.state)
    value = fidelity_penalized_complexity(programs, state)
    return ({"value": value}, {}, [args.programs, args.state], None)


def _cmd_incompress(args):
    cat, inputs = _build_catalog(args)
    states = [read_qstring_file(p) for p in args.state]
    rep = incompressibility_report(states, cat)
    return (
        {
            "member_count": rep.member_count,
            "entropy": rep.entropy,
            "prefix_bound": rep.prefix_bound,
            "plain_bound": rep.plain_bound,
            "all_prefix": rep.all_prefix,
            "applicable_bound": rep.applicable_bound,
            "max_description_length": rep.max_description_length,
            "per_state": [dataclasses.asdict(s) for s in rep.per_state],
        },
        {"bound_respected": rep.verified},
        inputs + list(args.state),
        None,
    )


def _cmd_multicopy(args):
    rep = multicopy_report(args.alpha2, args.n)
    rows = [
        {
            "i": i,
            "weight": rep.weights[i],
            "raw_length": rep.raw_lengths[i],
            "normalized_length": rep.normalized_lengths[i],
        }
        for i in range(rep.n + 1)
    ]
    return (
        dataclasses.asdict(rep),
        {
            "weights_sum_to_one": abs(sum(rep.weights) - 1.0) <= 1e-9,
            "raw_kraft_feasible": kraft_sum(rep.raw_lengths) <= 1.0 + 1e-12,
            "normalized_not_longer": rep.expected_normalized <= rep.expected_raw + 1e-12,
        },
        [],
        rows,
    )


def _cmd_nonadd(args):
    span = args.sd_identity if args.sd_identity is not None else args.mblock + 1
    cat = MachineCatalog([self_delimit_machine(identity_machine(span))])
    rep = nonadditivity_search(args.mblock, cat, args.k)
    return (
        dataclasses.asdict(rep),
        {
            "concentrated_gap_exceeds_k": rep.success_concentrated,
            "diluted_gap_exceeds_k": rep.success_diluted,
        },
        [],
        None,
    )


def _cmd_sandwich(args):
    ens = read_ensemble_file(args.ensemble)
    machines = [machine_from_code(sw_lossless_code(density_from_ensemble(ens)))]
    inputs = [args.ensemble]
    for path in args.machine or []:
        machines.append(read_machine_file(path))
        inputs.append(path)
    if args.sd_identity is not None:
        machines.append(self_delimit_machine(identity_machine(args.sd_identity)))
    rep = entropy_sandwich_report(ens, MachineCatalog(machines))
    return (
        {
            "entropy": rep.entropy,
            "expected_complexity": rep.expected_complexity,
            "overhead": rep.overhead,
            "per_member": [dataclasses.asdict(m) for m in rep.per_member],
        },
        {"lower": rep.lower_ok, "upper": rep.upper_ok},
        inputs,
        None,
    )


def _parse_ineq_spec(text: str, n_parties: int) -> InequalitySpec:
    terms = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise _UsageError(f"bad inequality term {chunk!r}; use '1,2=-1'")
        subset_text, coeff_text = chunk.split("=", 1)
        try:
            subset = [int(x) for x in subset_text.split(",")]
            coeff = float(coeff_text)
        except ValueError as exc:
            raise _UsageError(f"bad inequality term {chunk!r}: {exc}") from exc
        terms.append((subset, coeff))
    try:
        return InequalitySpec(n_parties, terms)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _cmd_ineq(args):
    if args.mode == "joint":
        if args.rho is None or args.dims is None:
            raise _UsageError("joint mode needs --rho and --dims")
        try:
            dims = [int(x) for x in args.dims.split(",")]
        except ValueError as exc:
            raise _UsageError(f"bad dims {args.dims!r}") from exc
        spec = _parse_ineq_spec(args.spec, len(dims))
        rho = density_from_ensemble(read_ensemble_file(args.rho))
        value = inequality_check(spec, rho, dims, mode="joint")
        return ({"value": value, "mode": "joint"}, {}, [args.rho], None)
    if not args.factor:
        raise _UsageError("product mode needs at least one --factor")
    factors = [density_from_ensemble(read_ensemble_file(p)) for p in args.factor]
    spec = _parse_ineq_spec(args.spec, len(factors))
    value = inequality_check(spec, factors, mode="product")
    dims = [f.dim for f in factors]
    joint_value = inequality_check(
        spec, product_state(factors), dims, mode="joint"
    )
    return (
        {"value": value, "mode": "product", "joint_value": joint_value},
        {"paths_agree": abs(value - joint_value) <= 1e-9},
        list(args.factor),
        None,
    )


def _cmd_randrho(args, seed: int):
    rho = random_density(args.dim, seed)
    dec = eig_hermitian(rho)
    entries = []
    for k, lam in enumerate(dec.eigenvalues):
        if lam < EIG_FLOOR:
            continue
        vec = dec.eigenvectors[:, k]
        terms = {
            rho.basis[i]: complex(vec[i]) for i in range(rho.dim) if abs(vec[i]) > 1e-12
        }
        entries.append((float(lam), QString(terms, normalize=True)))
    ens = Ensemble(entries)
    if args.out_ens:
        write_ensemble_file(args.out_ens, ens)
    return (
        {
            "dim": rho.dim,
            "entropy": von_neumann_entropy(rho),
            "eigenvalues": [float(x) for x in dec.eigenvalues],
            "ensemble_text": dump_ensemble(ens),
        },
        {"trace_one": abs(sum(float(x) for x in dec.eigenvalues) - 1.0) <= 1e-9},
        [],
        None,
    )


# --- driver -------------------------------------------------------------------

_CSV_COLUMNS = {
    "lossy": [
        "n", "delta", "entropy", "budget", "success",
        "kept_classes", "total_classes", "kept_dimension", "trivial",
    ],
    "multicopy": ["i", "weight", "raw_length", "normalized_length"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfock",
        description="Quantum strings, codes, and complexity reports.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=0, help="recorded in the report")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument(
            "--format", choices=("json", "csv", "text"), default="json",
            help="json (default), text, or csv for sweep tables",
        )
        return p

    p = add("avglen", "average length of a state")
    p.add_argument("--state", required=True)
    p = add("baselen", "base (maximum) length of a state")
    p.add_argument("--state", required=True)
    p = add("pair", "self-delimiting pair encoding")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--decode")
    p = add("selfdelim", "apply the self-delimiting transform to a state")
    p.add_argument("--state", required=True)
    p.add_argument("--out-state", default=None)
    p = add("entropy", "von Neumann entropy of an ensemble's density operator")
    p.add_argument("--rho", required=True)
    p = add("shannon", "Shannon entropy of a probability vector")
    p.add_argument("--p", required=True)
    p = add("code", "canonical code with lengths ceil(-log2 p)")
    p.add_argument("--p", required=True)
    p = add("kraft", "Kraft sum of codeword lengths")
    p.add_argument("--lengths", required=True)
    p = add("sw", "lossless code of a density operator")
    p.add_argument("--rho", required=True)
    p = add("encode", "encode a state with the lossless code of rho")
    p.add_argument("--rho", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--out-state", default=None)
    p = add("lossy", "typical-subspace projection of n encoded copies")
    p.add_argument("--rho", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--delta", type=float, required=True)
    p = add("complexity", "description length of a state on one machine")
    p.add_argument("--machine", required=True)
    p.add_argument("--state", required=True)
    p = add("universal", "cheapest description over a machine catalog")
    p.add_argument("--machine", action="append")
    p.add_argument("--identity", type=int, default=None)
    p.add_argument("--sd-identity", type=int, default=None)
    p.add_argument("--state", required=True)
    p = add("kq", "fidelity-penalized description length")
    p.add_argument("--programs", required=True)
    p.add_argument("--state", required=True)
    p = add("incompress", "entropy floor for a family of states")
    p.add_argument("--state", action="append", required=True)
    p.add_argument("--machine", action="append")
    p.add_argument("--identity", type=int, default=None)
    p.add_argument("--sd-identity", type=int, default=None)
    p = add("multicopy", "weights and code lengths for n copies of a 2-term state")
    p.add_argument("--alpha2", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p = add("nonadd", "nonadditivity witnesses over a block of basis strings")
    p.add_argument("--mblock", type=int, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--sd-identity", type=int, default=None)
    p = add("sandwich", "expected catalog complexity against the entropy")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--machine", action="append")
    p.add_argument("--sd-identity", type=int, default=None)
    p = add("ineq", "linear entropy expression over subsystem marginals")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", choices=("joint", "product"), default="joint")
    p.add_argument("--rho")
    p.add_argument("--dims")
    p.add_argument("--factor", action="append")
    p = add("randrho", "seeded random density operator as an eigen-ensemble")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out-ens", default=None)
    return parser


_HANDLERS = {
    "avglen": _cmd_avglen,
    "baselen": _cmd_baselen,
    "pair": _cmd_pair,
    "selfdelim": _cmd_selfdelim,
    "entropy": _cmd_entropy,
    "shannon": _cmd_shannon,
    "code": _cmd_code,
    "kraft": _cmd_kraft,
    "sw": _cmd_sw,
    "encode": _cmd_encode,
    "lossy": _cmd_lossy,
    "complexity": _cmd_complexity,
    "universal": _cmd_universal,
    "kq": _cmd_kq,
    "incompress": _cmd_incompress,
    "multicopy": _cmd_multicopy,
    "nonadd": _cmd_nonadd,
    "sandwich": _cmd_sandwich,
    "ineq": _cmd_ineq,
    "randrho": _cmd_randrho,
}


def _write_output(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed
    try:
        handler = _HANDLERS[args.command]
        if args.command == "randrho":
            result, checks, inputs, rows = handler(args, seed)
        else:
            result, checks, inputs, rows = handler(args)
        report = _envelope(seed, inputs, result, checks)
        if args.format == "csv":
            if args.command not in _CSV_COLUMNS or rows is None:
                raise _UsageError(f"{args.command} has no csv table")
            text = _emit_csv(report, rows, _CSV_COLUMNS[args.command])
        elif args.format == "text":
            text = _emit_text(report)
        else:
            text = _emit_json(report)
        _write_output(text, args.out)
        return 0
    except _UsageError as exc:
        parser.exit(2, f"{parser.prog}: usage error: {exc}\n")
    except FormatError as exc:
        record = {
            "tool_version": __version__,
            "seed": seed,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _write_output(_emit_json(record), args.out)
        return 4
    except QFockError as exc:
        record = {
            "tool_version": __version__,
            "seed": seed,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        _write_output(_emit_json(record), args.out)
        return 1
    except OSError as exc:
        sys.stderr.write(f"{parser.prog}: i/o error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

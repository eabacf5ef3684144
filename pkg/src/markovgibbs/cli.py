"""Command-line front end: JSON problem files in, one JSON document out.

A problem file holds a matrix and optionally a potential::

    {"matrix": {"n": 4, "rows": [[0,1,1,1],[1,0,0,1],[0,1,0,0],[0,1,0,0]]},
     "potential": {"q_matrix": [[null, "1/5", "1", "2/5"],
                                ["1", null, null, "3/5"],
                                [null, "3/10", null, null],
                                [null, "1/2", null, null]]}}

``log_values`` gives real edge values of a potential (nested arrays, null
off the edges); ``q_matrix`` gives exact rational column-stochastic entries
directly ("p/q" strings or integers) and switches comparisons to exact
arithmetic.  Exit codes: 0 success, 2 precondition or input violation,
3 numerical failure, 4 obstruction result.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .errors import PreconditionError, SolverError
from .gibbs import (
    GibbsChain,
    Potential,
    cohomologous_with_constant,
    cylinder_measure,
    ks_entropy,
    normalize,
)
from .rigidity import (
    ConjugacyObstruction,
    induce_conjugacy,
    reconstruct_word,
    has_distinct_branch_values,
    sampled_distinct_fraction,
    snr_certificate,
    spectral_twin_chain,
)
from .shiftcore import (
    TransitionMatrix,
    automorphisms,
    cycle_intersection_condition,
    is_primitive,
    simple_cycles,
    structure,
    total_amalgamation,
)
from .spectrum import char_poly_family_equal, spectrum_curve

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_SOLVER = 3
EXIT_OBSTRUCTION = 4


class InputError(PreconditionError):
    """Malformed problem file; the message carries a line or field diagnostic."""


# ---------------------------------------------------------------------------
# Deterministic JSON output with floats at 17 significant digits.


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise SolverError("refusing to serialize a non-finite number")
    text = format(float(x), ".17g")
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _dumps(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return json.dumps(str(value.numerator))
        return json.dumps(f"{value.numerator}/{value.denominator}")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_dumps(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in value) + "]"
    try:
        import numpy as np

        if isinstance(value, np.ndarray):
            return _dumps(value.tolist())
        if isinstance(value, np.integer):
            return str(int(value))
        if isinstance(value, np.floating):
            return _format_float(float(value))
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialize {type(value)!r}")


# ---------------------------------------------------------------------------
# Problem-file parsing.


class Problem:
    def __init__(self, matrix, potential_kind, potential_payload, digest):
        self.matrix = matrix
        self.potential_kind = potential_kind  # None | "log_values" | "q_matrix"
        self.potential_payload = potential_payload
        self.digest = digest

    @property
    def mode(self) -> str:
        return "exact" if self.potential_kind == "q_matrix" else "numerical"


def _parse_rational(cell, where):
    if isinstance(cell, bool) or not isinstance(cell, (int, str)):
        raise InputError(f"{where}: rational entries must be integers or 'p/q' strings")
    try:
        return Fraction(cell)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _edge_table(raw, matrix, field, parse):
    n = matrix.n
    if not isinstance(raw, list) or len(raw) != n or any(not isinstance(r, list) or len(r) != n for r in raw):
        raise InputError(f"{field}: expected a {n}x{n} nested array")
    values = {}
    for i in range(n):
        for j in range(n):
            cell = raw[i][j]
            where = f"{field}[{i}][{j}]"
            if matrix.entries[i, j] == 1:
                if cell is None:
                    raise InputError(f"{where}: value required on edge ({i + 1}, {j + 1})")
                values[(i + 1, j + 1)] = parse(cell, where)
            elif cell is not None:
                raise InputError(f"{where}: ({i + 1}, {j + 1}) is not an edge; use null")
    return values


def load_problem(path: str) -> Problem:
    try:
        blob = open(path, "rb").read()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    digest = hashlib.sha256(blob).hexdigest()
    try:
        doc = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise InputError(f"{path}: top-level object with a 'matrix' field required")
    field = doc["matrix"]
    if not isinstance(field, dict) or "n" not in field or "rows" not in field:
        raise InputError("matrix: object with fields 'n' and 'rows' required")
    n = field["n"]
    rows = field["rows"]
    if not isinstance(n, int) or not isinstance(rows, list) or len(rows) != n:
        raise InputError("matrix.rows: expected exactly matrix.n rows")
    try:
        matrix = TransitionMatrix(rows)
    except PreconditionError as exc:
        raise InputError(f"matrix.rows: {exc}") from exc
    kind = None
    payload = None
    pot = doc.get("potential")
    if pot is not None:
        if not isinstance(pot, dict) or len(set(pot) & {"log_values", "q_matrix"}) != 1:
            raise InputError("potential: exactly one of 'log_values' or 'q_matrix' required")
        if "log_values" in pot:
            kind = "log_values"

            def parse_real(cell, where):
                if isinstance(cell, bool) or not isinstance(cell, (int, float)):
                    raise InputError(f"{where}: real number required")
                return float(cell)

            payload = _edge_table(pot["log_values"], matrix, "potential.log_values", parse_real)
        else:
            kind = "q_matrix"
            payload = _edge_table(pot["q_matrix"], matrix, "potential.q_matrix", _parse_rational)
    return Problem(matrix, kind, payload, digest)


def _require_chain(problem: Problem) -> GibbsChain:
    if problem.potential_kind is None:
        raise InputError("this command needs a 'potential' field in the input file")
    if problem.potential_kind == "q_matrix":
        return GibbsChain.from_stochastic(problem.matrix, problem.potential_payload)
    chain, _ = normalize(Potential(problem.matrix, problem.potential_payload))
    return chain


def _require_potential(problem: Problem) -> Potential:
    if problem.potential_kind == "log_values":
        return Potential(problem.matrix, problem.potential_payload)
    return _require_chain(problem).normalized_potential()


def _parse_word(text: str, n: int) -> tuple:
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
    else:
        if n > 9:
            raise InputError("alphabets beyond 9 symbols need comma-separated words")
        parts = list(text.strip())
    try:
        word = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"--word: {exc}") from exc
    if any(s < 1 or s > n for s in word):
        raise InputError(f"--word: symbols must lie in 1..{n}")
    return word


def _edge_grid(matrix: TransitionMatrix, getter):
    return [
        [getter(i + 1, j + 1) if matrix.entries[i, j] == 1 else None for j in range(matrix.n)]
        for i in range(matrix.n)
    ]


def _matrix_doc(matrix: TransitionMatrix) -> dict:
    return {"n": matrix.n, "rows": [[int(x) for x in row] for row in matrix.entries]}


def _chain_potential_doc(chain: GibbsChain) -> dict:
    if chain.exact is not None:
        return {"q_matrix": _edge_grid(chain.base, lambda i, j: chain.exact[(i, j)])}
    return {
        "log_values": _edge_grid(chain.base, lambda i, j: math.log(chain.value(i, j)))
    }


# ---------------------------------------------------------------------------
# Command handlers: each returns (document, exit_code).


def _cmd_shift_info(args):
    problem = load_problem(args.input)
    st = structure(problem.matrix)
    doc = {
        "command": "shift info",
        "n": problem.matrix.n,
        "primitive": is_primitive(problem.matrix),
        "edges": [list(e) for e in st.edges],
        "in_degrees": list(st.in_degrees),
        "branch_symbols": sorted(st.branch_symbols),
        "branch_edges": [list(e) for e in sorted(st.branch_edges)],
    }
    return doc, EXIT_OK


def _cmd_shift_cycles(args):
    problem = load_problem(args.input)
    cycles = simple_cycles(problem.matrix)
    holds, violations = cycle_intersection_condition(problem.matrix)
    doc = {
        "command": "shift cycles",
        "cycles": [list(c) for c in cycles],
        "intersection_condition": {
            "holds": holds,
            "violations": [[list(a), list(b)] for a, b in violations],
        },
    }
    return doc, EXIT_OK


def _cmd_shift_amalgamate(args):
    problem = load_problem(args.input)
    reduced, mapping = total_amalgamation(problem.matrix)
    doc = {
        "command": "shift amalgamate",
        "matrix": _matrix_doc(reduced),
        "merge_map": {str(k): v for k, v in sorted(mapping.items())},
        "fixed_point": reduced.n == problem.matrix.n,
    }
    return doc, EXIT_OK


def _cmd_shift_autos(args):
    problem = load_problem(args.input)
    result = automorphisms(problem.matrix)
    doc = {
        "command": "shift autos",
        "status": result.status,
        "permutations": [list(p) for p in result.permutations],
    }
    return doc, EXIT_OK


def _cmd_gibbs_normalize(args):
    problem = load_problem(args.input)
    if problem.potential_kind == "q_matrix":
        chain = _require_chain(problem)
        root, left = 1.0, [1.0 / problem.matrix.n] * problem.matrix.n
    else:
        chain, data = normalize(_require_potential(problem))
        root, left = data.root, list(data.left)
    doc = {
        "command": "gibbs normalize",
        "mode": problem.mode,
        "perron_root": root,
        "left_eigenvector": left,
        "stochastic_matrix": [list(row) for row in chain.q],
        "stationary": list(chain.pi),
        "normalized_log_values": _edge_grid(
            chain.base, lambda i, j: math.log(chain.value(i, j))
        ),
    }
    return doc, EXIT_OK


def _cmd_gibbs_measure(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    word = _parse_word(args.word, problem.matrix.n)
    doc = {
        "command": "gibbs measure",
        "word": list(word),
        "measure": cylinder_measure(chain, word),
    }
    return doc, EXIT_OK


def _cmd_gibbs_entropy(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    return {"command": "gibbs entropy", "entropy": ks_entropy(chain)}, EXIT_OK


def _cmd_gibbs_cohomology(args):
    problem = load_problem(args.input)
    other = load_problem(args.other)
    same, witness = cohomologous_with_constant(
        _require_potential(problem), _require_potential(other)
    )
    doc = {
        "command": "gibbs cohomology",
        "cohomologous": same,
        "witness_cycle": None if witness is None else list(witness),
    }
    return doc, EXIT_OK


def _cmd_spectrum_curve(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    curve = spectrum_curve(chain, args.qmin, args.qmax, args.steps)
    lines = ["q,alpha,entropy"]
    lines += [
        f"{_format_float(q)},{_format_float(a)},{_format_float(e)}"
        for q, a, e in curve.samples
    ]
    with open(args.table, "w") as handle:
        handle.write("\n".join(lines) + "\n")
    doc = {
        "command": "spectrum curve",
        "samples": [{"q": q, "alpha": a, "entropy": e} for q, a, e in curve.samples],
        "table": args.table,
    }
    return doc, EXIT_OK


def _cmd_spectrum_compare(args):
    problem = load_problem(args.input)
    other = load_problem(args.other)
    chain_a = _require_chain(problem)
    chain_b = _require_chain(other)
    equal, deviation = char_poly_family_equal(chain_a, chain_b, tol=args.tol)
    exact = chain_a.exact is not None and chain_b.exact is not None
    doc = {
        "command": "spectrum compare",
        "equal": equal,
        "max_deviation": deviation,
        "mode": "exact" if exact else "numerical",
    }
    if not exact:
        doc["note"] = "numerical mode compares coefficients on a finite grid; heuristic"
    return doc, EXIT_OK


def _cmd_rigidity_check_g(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    distinct, collision = has_distinct_branch_values(chain)
    doc = {
        "command": "rigidity check-g",
        "mode": problem.mode,
        "distinct": distinct,
        "collision": None if collision is None else [list(collision[0]), list(collision[1])],
    }
    return doc, EXIT_OK


def _cmd_rigidity_sample_g(args):
    problem = load_problem(args.input)
    fraction = sampled_distinct_fraction(problem.matrix, args.samples, args.seed)
    doc = {
        "command": "rigidity sample-g",
        "samples": args.samples,
        "seed": args.seed,
        "fraction": fraction,
    }
    return doc, EXIT_OK


def _cmd_rigidity_reconstruct(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    try:
        values = [float(v) for v in args.values.split(",")]
    except ValueError as exc:
        raise InputError(f"--values: {exc}") from exc
    word = reconstruct_word(chain, values)
    doc = {
        "command": "rigidity reconstruct",
        "values": values,
        "word": list(word),
    }
    return doc, EXIT_OK


def _cmd_rigidity_conjugacy(args):
    problem = load_problem(args.input)
    other = load_problem(args.other)
    result = induce_conjugacy(_require_chain(problem), _require_chain(other))
    if isinstance(result, ConjugacyObstruction):
        doc = {
            "command": "rigidity conjugacy",
            "obstruction": {
                "kind": result.kind,
                "missing_from_target": list(result.missing_from_target),
                "missing_from_source": list(result.missing_from_source),
                "detail": result.detail,
            },
        }
        return doc, EXIT_OBSTRUCTION
    doc = {
        "command": "rigidity conjugacy",
        "code": {
            "window": result.window,
            "identity": result.is_identity(),
            "table": [[list(word), symbol] for word, symbol in sorted(result.table.items())],
        },
    }
    return doc, EXIT_OK


def _cmd_rigidity_counterexample(args):
    problem = load_problem(args.input)
    twin = spectral_twin_chain(_require_chain(problem))
    doc = {
        "command": "rigidity counterexample",
        "matrix": _matrix_doc(twin.base),
        "potential": _chain_potential_doc(twin),
        "stochastic_matrix": [list(row) for row in twin.q],
    }
    return doc, EXIT_OK


def _cmd_rigidity_certificate(args):
    problem = load_problem(args.input)
    chain = _require_chain(problem)
    cert = snr_certificate(chain)
    details = cert.details
    doc = {
        "command": "rigidity certificate",
        "verdict": cert.verdict,
        "checks": dict(cert.checks),
        "witness_cycle": None if details["witness_cycle"] is None else list(details["witness_cycle"]),
        "collision": None if details["collision"] is None else [list(e) for e in details["collision"]],
        "spectra_max_deviation": details["spectra_max_deviation"],
        "automorphism_status": details["automorphism_status"],
        "value_sets": {
            "missing_from_g": list(details["missing_from_g"]),
            "missing_from_f": list(details["missing_from_f"]),
        },
        "twin_potential": _chain_potential_doc(spectral_twin_chain(chain)),
        "mode": details["mode"],
        "tolerances": dict(details["tolerances"]),
        "tool_version": __version__,
        "input_digest": problem.digest,
        "seed": args.seed,
    }
    return doc, EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovgibbs",
        description="Gibbs chains, entropy spectra, and non-rigidity certificates on Markov shifts",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, handler, options=()):
        sub = group.add_parser(name)
        sub.add_argument("--input", required=True, help="problem file (JSON)")
        for flag, kwargs in options:
            sub.add_argument(flag, **kwargs)
        sub.set_defaults(handler=handler)
        return sub

    shift = _parser_group(groups, "shift")
    command(shift, "info", _cmd_shift_info)
    command(shift, "cycles", _cmd_shift_cycles)
    command(shift, "amalgamate", _cmd_shift_amalgamate)
    command(shift, "autos", _cmd_shift_autos)

    gibbs = _parser_group(groups, "gibbs")
    command(gibbs, "normalize", _cmd_gibbs_normalize)
    command(gibbs, "measure", _cmd_gibbs_measure, [("--word", {"required": True})])
    command(gibbs, "entropy", _cmd_gibbs_entropy)
    command(gibbs, "cohomology", _cmd_gibbs_cohomology, [("--other", {"required": True})])

    spectrum = _parser_group(groups, "spectrum")
    command(
        spectrum,
        "curve",
        _cmd_spectrum_curve,
        [
            ("--qmin", {"type": float, "default": -3.0}),
            ("--qmax", {"type": float, "default": 3.0}),
            ("--steps", {"type": int, "default": 25}),
            ("--table", {"default": "spectrum_curve.csv"}),
        ],
    )
    command(
        spectrum,
        "compare",
        _cmd_spectrum_compare,
        [("--other", {"required": True}), ("--tol", {"type": float, "default": 1e-10})],
    )

    rigidity = _parser_group(groups, "rigidity")
    command(rigidity, "check-g", _cmd_rigidity_check_g)
    command(
        rigidity,
        "sample-g",
        _cmd_rigidity_sample_g,
        [
            ("--samples", {"type": int, "default": 1000}),
            ("--seed", {"type": int, "default": 0}),
        ],
    )
    command(rigidity, "reconstruct", _cmd_rigidity_reconstruct, [("--values", {"required": True})])
    command(rigidity, "conjugacy", _cmd_rigidity_conjugacy, [("--other", {"required": True})])
    command(rigidity, "counterexample", _cmd_rigidity_counterexample)
    command(
        rigidity,
        "certificate",
        _cmd_rigidity_certificate,
        [("--seed", {"type": int, "default": 0})],
    )
    return parser


def _parser_group(groups, name):
    sub = groups.add_parser(name)
    return sub.add_subparsers(dest="command", required=True)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.handler(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except SolverError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    sys.stdout.write(_dumps(doc) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 1 verification failure or inequality, 2 usage or
parse error.  Every command is deterministic given the same inputs and
--seed.  CATALYST_THREADS caps internal worker counts; all code paths are
deterministic regardless of its value.
"""

from __future__ import annotations

import argparse
import os
import sys

from .ring import (
    RingError,
    TowerSpec,
    format_ring,
    make_clifford_t_tower,
    make_cyclotomic_tower,
    make_gaussian_tower,
)
from .circuit import (
    Circuit,
    CircuitError,
    Observable,
    expectation,
    format_state,
    parse_circuit,
    serialize_circuit,
    simulate,
    unitary_of,
)
from .catalysis import (
    CatalysisError,
    ccz_to_3t,
    check_catalysis_identity,
    real_encode_circuit,
    real_encode_matrix,
    run_gadget_suite,
    synth_small_phase,
    transpile_t_to_cs,
    verify_ccz_to_3t,
    verify_synth_small_phase,
)
from .estimator import EstimatorError, build_ensemble, exact_value, qp_estimate
from .zh import (
    ZhError,
    eval_tensor,
    extract_catalyst,
    parse_diagram,
    semantic_equal,
    serialize_diagram,
    serialize_trace,
    standard_rules,
)


USAGE_ERROR = 2
VERIFY_ERROR = 1


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _thread_cap() -> int:
    raw = os.environ.get("CATALYST_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
        if n < 1:
            raise ValueError
    except ValueError:
        raise CliError(f"CATALYST_THREADS must be a positive integer, got {raw!r}")
    return n


def _tower(name: str) -> TowerSpec:
    if name == "clifford+t":
        return make_clifford_t_tower()
    if name == "gaussian":
        return make_gaussian_tower()
    if name.startswith("cyclotomic:"):
        try:
            return make_cyclotomic_tower(int(name.split(":", 1)[1]))
        except (ValueError, RingError) as exc:
            raise CliError(f"bad tower selector {name!r}: {exc}")
    raise CliError(f"unknown tower {name!r}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_circuit(path: str) -> Circuit:
    try:
        return parse_circuit(_read(path))
    except CircuitError as exc:
        raise CliError(f"{path}: {exc}")


# -- transpile ---------------------------------------------------------------


def cmd_transpile(args) -> int:
    tower = _tower(args.tower)
    if args.pass_name == "t-to-cs":
        c = _load_circuit(args.input)
        out = transpile_t_to_cs(c)
        if args.verify:
            if c.width > 6:
                raise CliError("--verify caps the source width at 6 qubits")
            rep = check_catalysis_identity(out, c, ("T",), tower, extra_states=3)
            if not rep.passed:
                print(rep.to_text(), file=sys.stderr)
                return VERIFY_ERROR
    elif args.pass_name == "real-encode":
        c = _load_circuit(args.input)
        out = real_encode_circuit(c)
        if args.verify:
            if c.width > 5:
                raise CliError("--verify caps the source width at 5 qubits")
            got = unitary_of(out, tower, cap=c.width + 1)
            want = real_encode_matrix(unitary_of(c, tower, cap=c.width), tower)
            if any(a != b for r1, r2 in zip(got, want) for a, b in zip(r1, r2)):
                print("real encoding does not match the encoded matrix",
                      file=sys.stderr)
                return VERIFY_ERROR
    elif args.pass_name == "ccz-to-3t":
        out = ccz_to_3t()
        if args.verify and not verify_ccz_to_3t(tower).passed:
            return VERIFY_ERROR
    elif args.pass_name == "synth-phase":
        if args.k is None or args.m is None:
            raise CliError("synth-phase needs --k and --m")
        out = synth_small_phase(args.k, args.m)
        if args.verify:
            tw = tower if args.k <= 3 else make_cyclotomic_tower(args.k)
            if not verify_synth_small_phase(args.k, args.m, tw).passed:
                return VERIFY_ERROR
    else:
        raise CliError(f"unknown pass {args.pass_name!r}")
    _write(args.output, serialize_circuit(out))
    return 0


# -- simulate -----------------------------------------------------------------


def cmd_simulate(args) -> int:
    tower = _tower(args.tower)
    c = _load_circuit(args.input)
    psi = simulate(c, tower)
    print(format_state(psi))
    if args.observable:
        try:
            obs = Observable(args.observable)
            if len(obs) != c.width:
                raise CliError("observable length differs from circuit width")
            val = expectation(psi, obs)
        except CircuitError as exc:
            raise CliError(str(exc))
        print(f"<{args.observable}> = {format_ring(val)} ~ "
              f"{val.embed_float().real:.12g}")
    return 0


# -- estimate ------------------------------------------------------------------


def cmd_estimate(args) -> int:
    tower = _tower(args.tower)
    c = _load_circuit(args.input)
    try:
        obs = Observable(args.observable)
        ens = build_ensemble(c, obs, tower=tower)
        exact = exact_value(ens, tower)
        rep = qp_estimate(
            ens,
            args.shots,
            seed=args.seed,
            tower=tower,
            deterministic_allocation=args.deterministic_allocation,
            csv_path=args.csv,
        )
    except (CircuitError, CatalysisError, EstimatorError) as exc:
        raise CliError(str(exc))
    print(rep.to_text())
    print(f"exact_ring={format_ring(exact)}")
    return 0


# -- verify-gadgets -------------------------------------------------------------


def cmd_verify_gadgets(args) -> int:
    reports = run_gadget_suite(scope=args.scope, fault_hook=args.fault_hook)
    failed = 0
    for rep in reports:
        print(rep.to_text())
        if not rep.passed:
            failed += 1
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return VERIFY_ERROR if failed else 0


# -- zh --------------------------------------------------------------------------


def _load_diagram(path: str, tower: TowerSpec):
    try:
        return parse_diagram(_read(path), tower)
    except (ZhError, RingError) as exc:
        raise CliError(f"{path}: {exc}")


def cmd_zh(args) -> int:
    tower = _tower(args.tower)
    if args.zh_command == "eval":
        d = _load_diagram(args.input, tower)
        try:
            m = eval_tensor(d)
        except ZhError as exc:
            raise CliError(str(exc))
        for r, row in enumerate(m):
            for c, v in enumerate(row):
                if not v.is_zero() or args.zeros:
                    print(f"[{r}][{c}] {format_ring(v)} ~ {v.embed_float():.12g}")
        return 0
    if args.zh_command == "rules":
        try:
            lib = standard_rules(tower)
        except ZhError as exc:
            print(f"soundness gate failed: {exc}", file=sys.stderr)
            return VERIFY_ERROR
        for family, rules in lib.items():
            print(f"{family}: {len(rules)} admitted "
                  f"({', '.join(r.name for r in rules[:4])}"
                  f"{', ...' if len(rules) > 4 else ''})")
        return 0
    if args.zh_command == "extract":
        d = _load_diagram(args.input, tower)
        try:
            label = _parse_label(args.label, tower)
            out, trace = extract_catalyst(d, label)
        except (ZhError, RingError) as exc:
            raise CliError(str(exc), VERIFY_ERROR)
        _write(args.output, serialize_diagram(out))
        trace_text = serialize_trace(trace)
        if args.trace:
            _write(args.trace, trace_text)
        else:
            sys.stdout.write(trace_text)
        print(f"steps={len(trace)}")
        return 0
    if args.zh_command == "equal":
        d1 = _load_diagram(args.inputs[0], tower)
        d2 = _load_diagram(args.inputs[1], tower)
        try:
            eq = semantic_equal(d1, d2)
        except ZhError as exc:
            raise CliError(str(exc))
        print("equal" if eq else "not equal")
        return 0 if eq else VERIFY_ERROR
    raise CliError(f"unknown zh subcommand {args.zh_command!r}")


def _parse_label(text: str, tower: TowerSpec):
    from .ring import parse_ring

    return parse_ring(text, tower)


# -- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcatalyst",
        description="Exact catalysis-based circuit compiler, simulator and "
        "ZH rewrite tools.",
    )
    p.add_argument(
        "--tower",
        default="clifford+t",
        help="ring tower: clifford+t, gaussian, or cyclotomic:N",
    )
    sub = p.add_subparsers(dest="command", required=True)

    tp = sub.add_parser("transpile", help="run a circuit-to-circuit pass")
    tp.add_argument("input", help="input circuit file, or - for stdin")
    tp.add_argument("--pass", dest="pass_name", required=True,
                    help="t-to-cs, real-encode, ccz-to-3t, or synth-phase")
    tp.add_argument("-o", "--output", default=None)
    tp.add_argument("--verify", action="store_true",
                    help="replay the pass through the exact oracle")
    tp.add_argument("--k", type=int, default=None, help="synth-phase: 2^k denominator")
    tp.add_argument("--m", type=int, default=None, help="synth-phase: numerator")
    tp.set_defaults(func=cmd_transpile)

    sm = sub.add_parser("simulate", help="exact statevector simulation")
    sm.add_argument("input")
    sm.add_argument("--observable", default=None, help="Pauli string to evaluate")
    sm.set_defaults(func=cmd_simulate)

    es = sub.add_parser("estimate", help="quasiprobability estimation")
    es.add_argument("input")
    es.add_argument("--observable", required=True)
    es.add_argument("--shots", type=int, default=100000)
    es.add_argument("--seed", type=int, default=0)
    es.add_argument("--csv", default=None, help="write convergence checkpoints")
    es.add_argument("--deterministic-allocation", action="store_true",
                    help="largest-remainder shot allocation instead of sampling")
    es.set_defaults(func=cmd_estimate)

    vg = sub.add_parser("verify-gadgets", help="run the exact gadget suite")
    vg.add_argument("--scope", default="all",
                    choices=["all", "t", "phase", "ccz", "adder", "synth", "real"])
    vg.add_argument("--fault-hook", action="store_true", help=argparse.SUPPRESS)
    vg.set_defaults(func=cmd_verify_gadgets)

    zp = sub.add_parser("zh", help="ZH diagram tools")
    zsub = zp.add_subparsers(dest="zh_command", required=True)
    ze = zsub.add_parser("eval", help="print the exact tensor of a diagram")
    ze.add_argument("input")
    ze.add_argument("--zeros", action="store_true", help="also print zero entries")
    zr = zsub.add_parser("rules", help="run the rule-library soundness gate")
    zx = zsub.add_parser("extract", help="reduce a diagram to one catalyst box")
    zx.add_argument("input")
    zx.add_argument("--label", required=True, help="catalyst label in ring text")
    zx.add_argument("-o", "--output", default=None)
    zx.add_argument("--trace", default=None, help="write the proof trace here")
    zq = zsub.add_parser("equal", help="exact semantic comparison")
    zq.add_argument("inputs", nargs=2)
    for z in (ze, zr, zx, zq):
        z.set_defaults(func=cmd_zh)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_cap()
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CircuitError, RingError, CatalysisError, EstimatorError, ZhError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())

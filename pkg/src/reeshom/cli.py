"""Command-line interface: task parsing, kernel commands, and check dispatch.

Exit statuses: 0 all good / all checks pass, 1 at least one check failed,
2 usage or parse/validation error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from importlib import resources
from math import inf
from pathlib import Path

from .errors import (
    AmbientMismatchError,
    InternalError,
    ReeshomError,
    RingMismatchError,
    TaskError,
    ValidationError,
)
from .homalg import ext_modules, free_resolution, profile_of
from .poly import GREVLEX, LEX, Field, prime_field
from .rees import lsp0, rees_module, sp0, sp1, t_regular
from .taskfile import parse_task_file
from .verify import (
    CheckReport,
    check_dimension_jump_J,
    check_example15,
    run_corpus,
)

CHECK_COMMANDS = {
    "check:lemma1": ("lemma1",),
    "check:lemma2": ("lemma2",),
    "check:lemma3": ("lemma3",),
    "check:jump": ("jump", "jump_j"),
    "check:example15": ("example15",),
    "check:all": None,
}

KERNEL_COMMANDS = ("gb", "resolve", "ext", "rees", "sp0", "sp1", "lsp0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reeshom",
        description="Exact graded-module computations and homological checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, modules=0, needs_input=False):
        p.add_argument("--input", help="task file" + (" or directory" if not needs_input else ""))
        p.add_argument("--window", default=None, help="lo:hi internal-degree window")
        p.add_argument("--max-q", type=int, default=None, dest="max_q")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--field", default=None, help="QQ or Fp=<prime>")
        p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
        if modules == 1:
            p.add_argument("module")
        else:
            for i in range(modules):
                p.add_argument(f"module{i + 1}")
        return p

    common(sub.add_parser("parse", help="parse and validate a task file"), needs_input=True)
    common(sub.add_parser("gb", help="reduced basis of a module's relation span"), modules=1)
    common(sub.add_parser("resolve", help="free resolution of a module"), modules=1)
    p_ext = common(sub.add_parser("ext", help="Ext profile of two modules"), modules=2)
    p_ext.add_argument("--q", type=int, required=True)
    common(sub.add_parser("rees", help="Rees module of a module over the base ring"), modules=1)
    common(sub.add_parser("sp0", help="specialize a Rees-side module at t=0"), modules=1)
    common(sub.add_parser("sp1", help="specialize a Rees-side module at t=1"), modules=1)
    common(sub.add_parser("lsp0", help="derived specialization of a Rees-side module"), modules=1)
    for name in CHECK_COMMANDS:
        p = common(sub.add_parser(name, help=f"run {name.split(':')[1]} checks"))
        if name == "check:example15":
            p.add_argument(
                "--control",
                choices=("jswap",),
                default=None,
                help="negative control: run the Baer check against the free module",
            )
    p_fuzz = common(sub.add_parser("fuzz", help="mutate corpus files through the parser"))
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--count", type=int, default=1000)
    return parser


def _parse_window(text):
    if text is None:
        return None
    try:
        lo, _, hi = text.partition(":")
        window = (int(lo), int(hi))
    except ValueError:
        raise ValidationError(f"bad window {text!r}, expected lo:hi") from None
    if window[0] > window[1]:
        raise ValidationError("window must satisfy lo <= hi")
    return window


def _parse_field(text) -> Field:
    if text is None or text == "QQ":
        return Field(0)
    if text.startswith("Fp="):
        return prime_field(int(text[3:]))
    raise ValidationError(f"bad field {text!r}, expected QQ or Fp=<prime>")


def _sanitize(value):
    if value == inf:
        return "infinite"
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def emit_report(reports, fmt: str = "json") -> bytes:
    """Serialize reports; byte-deterministic given identical inputs."""
    checks = [
        {
            "name": r.name,
            "status": r.status,
            "evidence": _sanitize(r.evidence),
            "millis": r.millis,
        }
        for r in reports
    ]
    if fmt == "json":
        return json.dumps({"version": 1, "checks": checks}, separators=(",", ":")).encode()
    lines = []
    for chk in checks:
        lines.append(f"== {chk['name']}: {chk['status'].upper()} ({chk['millis']} ms)")
        lines.extend(_render_evidence(chk["evidence"], indent="  "))
    lines.append(f"{sum(1 for c in checks if c['status'] == 'pass')}/{len(checks)} checks passed")
    return ("\n".join(lines) + "\n").encode()


def _render_evidence(value, indent=""):
    lines = []
    if isinstance(value, dict):
        for key, sub in value.items():
            if isinstance(sub, (dict, list)):
                lines.append(f"{indent}{key}:")
                lines.extend(_render_evidence(sub, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {sub}")
    elif isinstance(value, list):
        if value and all(isinstance(row, list) for row in value):
            widths = [
                max(len(str(row[i])) for row in value if i < len(row))
                for i in range(max(len(row) for row in value))
            ]
            for row in value:
                cells = [str(c).rjust(widths[i]) for i, c in enumerate(row)]
                lines.append(indent + "  ".join(cells))
        else:
            for item in value:
                if isinstance(item, (dict, list)):
                    lines.extend(_render_evidence(item, indent + "  "))
                else:
                    lines.append(f"{indent}{item}")
    else:
        lines.append(f"{indent}{value}")
    return lines


def bundled_corpus_paths():
    root = resources.files("reeshom.corpus")
    return sorted(
        (p for p in root.iterdir() if p.name.endswith(".task")), key=lambda p: p.name
    )


def _load_tasks(input_path, order=GREVLEX):
    """Task files named by --input (file or directory) or the bundled corpus."""
    if input_path is None:
        tasks = []
        for entry in bundled_corpus_paths():
            with resources.as_file(entry) as real:
                tasks.append(
                    parse_task_file(real, label=entry.name.rsplit(".", 1)[0], order=order)
                )
        return tasks
    path = Path(input_path)
    if path.is_dir():
        return [parse_task_file(p, order=order) for p in sorted(path.glob("*.task"))]
    return [parse_task_file(path, order=order)]


def _single_task(args):
    if args.input is None:
        raise ValidationError("this command needs --input <task file>")
    order = LEX if getattr(args, "order", "grevlex") == "lex" else GREVLEX
    tasks = _load_tasks(args.input, order)
    if len(tasks) != 1:
        raise ValidationError("this command needs exactly one task file")
    return tasks[0]


def _timed(name, fn) -> CheckReport:
    started = time.perf_counter()
    evidence = fn()
    return CheckReport(
        name=name,
        status="pass",
        evidence=evidence,
        millis=int((time.perf_counter() - started) * 1000),
    )


def _matrix_strings(module):
    return [[str(p) for p in row] for row in module.presentation.entries]


def dispatch(args) -> tuple[int, list]:
    """Run one command; returns (exit status, reports)."""
    window = _parse_window(args.window)
    if args.max_q is not None and not 0 <= args.max_q <= 8:
        raise ValidationError("--max-q must lie in [0, 8]")
    order = LEX if getattr(args, "order", "grevlex") == "lex" else GREVLEX
    command = args.command

    if command == "parse":
        task = _single_task(args)
        report = CheckReport(
            name=f"{task.label}:parse",
            status="pass",
            evidence={
                "ring": repr(task.ring),
                "modules": task.module_names(),
                "checks": [c.kind for c in task.checks],
            },
        )
        return 0, [report]

    if command in KERNEL_COMMANDS:
        task = _single_task(args)
        use_window = window or task.window
        return 0, [_kernel_report(command, args, task, use_window)]

    if command == "fuzz":
        return _fuzz(args)

    kinds = CHECK_COMMANDS[command]
    control = getattr(args, "control", None)
    if command == "check:example15" and args.input is None:
        coefficients = _parse_field(args.field)
        report = check_example15(
            "example15", coefficients, control=control == "jswap"
        )
        return (0 if report.passed else 1), [report]
    if command == "check:jump" and args.input is None and args.field is not None:
        report = check_dimension_jump_J("jump_j", _parse_field(args.field))
        return (0 if report.passed else 1), [report]
    tasks = _load_tasks(args.input, order)
    reports = run_corpus(tasks, window=window, qmax=args.max_q, kinds=kinds)
    status = 0 if all(r.passed for r in reports) else 1
    return status, reports


def _kernel_report(command, args, task, window) -> CheckReport:
    if task.ring is None:
        raise ValidationError("the task file declares no ring")
    rr = task.rees

    def module(name):
        if name not in task.module_names():
            raise ValidationError(f"unknown module {name!r}")
        return task.module(name)

    if command == "gb":
        m = module(args.module)

        def run():
            basis = m.relations_gb()
            return {
                "module": args.module,
                "basis": [repr(el) for el in basis.elements],
            }

        return _timed(f"{task.label}:gb:{args.module}", run)

    if command == "resolve":
        m = module(args.module)

        def run():
            res = free_resolution(m)
            lo, hi = res.support()
            return {
                "length": res.length,
                "twists": [list(res.terms[q].twists) for q in range(lo, hi + 1)],
            }

        return _timed(f"{task.label}:resolve:{args.module}", run)

    if command == "ext":
        first = module(args.module1)
        second = module(args.module2)

        def run():
            profile = profile_of(
                ext_modules(first, second, args.q)[args.q], args.q, window
            )
            out = {"q": args.q, "vanishes": profile.vanishes}
            if profile.dims is not None:
                out["dims"] = [[d, v] for d, v in sorted(profile.dims.items()) if v]
            else:
                out["total"] = profile.total
            return out

        return _timed(
            f"{task.label}:ext:{args.module1},{args.module2}:q={args.q}", run
        )

    if command == "rees":
        m = module(args.module)

        def run():
            data = (
                rees_module(rr, m)
                if m.mode == "graded"
                else rees_module(rr, m, task.filtration(args.module))
            )
            return {
                "kind": data.kind,
                "twists": list(data.tilde.generators),
                "presentation": _matrix_strings(data.tilde),
                "t_regular": data.t_regularity_certificate(),
            }

        return _timed(f"{task.label}:rees:{args.module}", run)

    if command in ("sp0", "sp1"):
        m = module(args.module)
        if m.ring != rr.total:
            raise ValidationError(f"{command} needs a module over the Rees ring")

        def run():
            out = sp0(rr, m) if command == "sp0" else sp1(rr, m)
            return {
                "mode": out.mode,
                "twists": list(out.generators),
                "presentation": _matrix_strings(out),
            }

        return _timed(f"{task.label}:{command}:{args.module}", run)

    if command == "lsp0":
        m = module(args.module)
        if m.ring != rr.total:
            raise ValidationError("lsp0 needs a module over the Rees ring")

        def run():
            hm1, h0 = lsp0(rr, m)
            lo, hi = window
            return {
                "h_minus1_vanishes": hm1.is_zero(),
                "h_minus1": [[d, v] for d, v in sorted(hm1.hilbert(lo, hi).items()) if v],
                "h0": [[d, v] for d, v in sorted(h0.hilbert(lo, hi).items()) if v],
                "t_regular": t_regular(rr, m),
            }

        return _timed(f"{task.label}:lsp0:{args.module}", run)

    raise InternalError(f"unhandled kernel command {command!r}")


# ---------------------------------------------------------------------------
# fuzzing

MUTATION_ALPHABET = "abcxyzt0123456789+-*/^()[]{}=:, \nqwmodulecheckringrees"


def mutate_text(text: str, rng: random.Random) -> str:
    kind = rng.randrange(4)
    if not text:
        return "".join(rng.choice(MUTATION_ALPHABET) for _ in range(8))
    if kind == 0:  # flip one character
        i = rng.randrange(len(text))
        return text[:i] + rng.choice(MUTATION_ALPHABET) + text[i + 1:]
    if kind == 1:  # insert a chunk
        i = rng.randrange(len(text) + 1)
        chunk = "".join(rng.choice(MUTATION_ALPHABET) for _ in range(rng.randrange(1, 12)))
        return text[:i] + chunk + text[i:]
    if kind == 2:  # delete a span
        i = rng.randrange(len(text))
        j = min(len(text), i + rng.randrange(1, 24))
        return text[:i] + text[j:]
    # swap two lines
    lines = text.splitlines()
    if len(lines) > 1:
        a, b = rng.randrange(len(lines)), rng.randrange(len(lines))
        lines[a], lines[b] = lines[b], lines[a]
    return "\n".join(lines)


def fuzz_parse_outcome(text: str):
    """'valid' | 'diagnosed' | 'crash:<type>'; never raises."""
    from .taskfile import parse_task

    try:
        parse_task(text, label="fuzz")
        return "valid"
    except TaskError:
        return "diagnosed"
    except (ValidationError, RingMismatchError, AmbientMismatchError):
        return "diagnosed"
    except RecursionError:
        return "diagnosed"  # defensive; the parser's own nesting cap fires first
    except Exception as exc:  # pragma: no cover - a crash is an engine bug
        return f"crash:{type(exc).__name__}"


def _fuzz(args):
    rng = random.Random(args.seed)
    if args.input is not None:
        seeds = [Path(p).read_text(encoding="utf-8") for p in sorted(Path(args.input).glob("*.task"))]
    else:
        seeds = []
        for entry in bundled_corpus_paths():
            seeds.append(entry.read_text(encoding="utf-8"))
    if not seeds:
        raise ValidationError("no corpus files to fuzz")
    started = time.perf_counter()
    counts = {"valid": 0, "diagnosed": 0}
    crashes = []
    for i in range(args.count):
        text = seeds[i % len(seeds)]
        for _ in range(1 + rng.randrange(3)):
            text = mutate_text(text, rng)
        outcome = fuzz_parse_outcome(text)
        if outcome.startswith("crash:"):
            crashes.append({"iteration": i, "error": outcome})
        else:
            counts[outcome] += 1
    report = CheckReport(
        name=f"fuzz:seed={args.seed}:count={args.count}",
        status="pass" if not crashes else "fail",
        evidence={"outcomes": counts, "crashes": crashes[:10]},
        millis=int((time.perf_counter() - started) * 1000),
    )
    return (0 if not crashes else 3), [report]


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        status, reports = dispatch(args)
    except TaskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, RingMismatchError, AmbientMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except ReeshomError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - unexpected crash
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    out = emit_report(reports, fmt=args.format)
    sys.stdout.write(out.decode())
    if args.format == "json":
        sys.stdout.write("\n")
    return status


def main():  # pragma: no cover
    sys.exit(run(sys.argv[1:]))

"""Task files: one ring context plus named module presentations, Rees
derivations, probe lists, and check declarations.

    ring QQ[x:1, y:2]
    window -12:20
    qmax 4
    module M twists=[0] relations=[[x^2 - y]]
    module P ungraded degrees=[0] relations=[[x^2 - 1]]
    module Mt rees twists=[0] relations=[[t]]
    rees R = M
    check lemma1 Mt M
    check jump M graded=[(0), (x, y)] ungraded=[(x - 1)]

Rees-side declarations ('rees' flag) are written in the variables of the
derived total ring: the base variables plus one fresh degree-1 variable
(named t, or T when t is taken, then t0, t1, ...).  A task never declares
the total ring itself, which keeps the two weight tables consistent.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import TaskError, ValidationError
from .groebner import FreeModule
from .homalg import FPModule, GradedMatrix
from .parsing import PolyParser, TokenStream, parse_int, parse_nat, tokenize
from .poly import GREVLEX, Field, GradedRing, MonomialOrder, prime_field
from .rees import ReesRing, rees_module, rees_ring

MAX_QMAX = 8
MAX_WINDOW = 10**6
MAX_RANK = 64
DEFAULT_WINDOW = (-20, 20)
DEFAULT_QMAX = 4

CHECK_KINDS = ("lemma1", "lemma2", "lemma3", "jump", "jump_j", "example15")


@dataclass
class CheckDecl:
    kind: str
    args: tuple = ()
    graded_probes: list = dc_field(default_factory=list)
    ungraded_probes: list = dc_field(default_factory=list)
    line: int = 0
    col: int = 0


@dataclass
class ModuleDecl:
    name: str
    over_rees: bool
    mode: str
    twists: list
    degrees: list | None
    sources: list | None
    rows: list  # parsed polynomial matrix, rows indexed by generators
    line: int
    col: int


class TaskFile:
    """A parsed, fully validated task."""

    def __init__(self, label: str, order: MonomialOrder = GREVLEX):
        self.label = label
        self.order = order
        self.ring: GradedRing | None = None
        self.window = DEFAULT_WINDOW
        self.qmax = DEFAULT_QMAX
        self.module_decls: dict[str, ModuleDecl] = {}
        self.rees_defs: list[tuple[str, str, int, int]] = []
        self.checks: list[CheckDecl] = []
        self._modules: dict[str, FPModule] = {}
        self._filtrations: dict[str, list | None] = {}
        self._rees: ReesRing | None = None

    @property
    def rees(self) -> ReesRing:
        if self._rees is None:
            self._rees = rees_ring(self.ring)
        return self._rees

    def module(self, name: str) -> FPModule:
        return self._modules[name]

    def filtration(self, name: str):
        return self._filtrations.get(name)

    def module_names(self):
        return list(self._modules)


def parse_task(text: str, label: str = "task", order: MonomialOrder = GREVLEX) -> TaskFile:
    """Parse and validate; every diagnostic carries line and column."""
    stream = TokenStream(tokenize(text))
    task = TaskFile(label, order)
    while stream.peek().kind != "eof":
        tok = stream.expect("ident", "statement")
        if tok.text == "ring":
            if task.ring is not None:
                raise TaskError("duplicate ring declaration", tok.line, tok.col)
            task.ring = _parse_ring(stream, order)
        elif tok.text == "window":
            lo = parse_int(stream)
            stream.expect(":", "':'")
            hi = parse_int(stream)
            if abs(lo) > MAX_WINDOW or abs(hi) > MAX_WINDOW or lo > hi:
                raise TaskError("window must satisfy lo <= hi within bounds", tok.line, tok.col)
            task.window = (lo, hi)
        elif tok.text == "qmax":
            q = parse_nat(stream, limit=MAX_QMAX)
            task.qmax = q
        elif tok.text == "module":
            decl = _parse_module(stream, task, tok)
            _build_module(task, decl)
        elif tok.text == "rees":
            name_tok = stream.expect("ident", "module name")
            stream.expect("=", "'='")
            base_tok = stream.expect("ident", "module name")
            _build_rees(task, name_tok, base_tok)
        elif tok.text == "check":
            decl = _parse_check(stream, task, tok)
            task.checks.append(decl)
        else:
            raise TaskError(
                f"unknown statement {tok.text!r}",
                tok.line,
                tok.col,
                ["ring", "window", "qmax", "module", "rees", "check"],
            )
    if task.ring is None and (task.module_decls or task.checks):
        raise TaskError("a ring declaration must come first", 1, 1)
    return task


def parse_task_file(path, label=None, order: MonomialOrder = GREVLEX) -> TaskFile:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_task(text, label or _stem(str(path)), order)


def _stem(path: str) -> str:
    base = path.replace("\\", "/").rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0]


def _parse_ring(stream: TokenStream, order: MonomialOrder) -> GradedRing:
    tok = stream.expect("ident", "field (QQ or F<p>)")
    coeffs = _field_of(tok)
    stream.expect("[", "'['")
    variables = []
    while True:
        name_tok = stream.expect("ident", "variable name")
        stream.expect(":", "':'")
        weight = parse_nat(stream)
        variables.append((name_tok.text, weight))
        if stream.accept(","):
            continue
        stream.expect("]", "']'")
        break
    try:
        return GradedRing(coeffs, variables, order)
    except ValidationError as exc:
        raise TaskError(str(exc), tok.line, tok.col) from None


def _field_of(tok) -> Field:
    if tok.text == "QQ":
        return Field(0)
    if tok.text.startswith("F") and tok.text[1:].isdigit():
        try:
            return prime_field(int(tok.text[1:]))
        except ValidationError as exc:
            raise TaskError(str(exc), tok.line, tok.col) from None
    raise TaskError(f"unknown field {tok.text!r}", tok.line, tok.col, ["QQ", "F<p>"])


def _parse_int_list(stream: TokenStream, limit=None):
    stream.expect("[", "'['")
    values = []
    if stream.accept("]"):
        return values
    while True:
        values.append(parse_int(stream))
        if limit is not None and abs(values[-1]) > limit:
            stream.error("integer out of range")
        if stream.accept(","):
            continue
        stream.expect("]", "']'")
        return values


def _parse_matrix(stream: TokenStream, parser: PolyParser):
    stream.expect("[", "'['")
    rows = []
    if stream.accept("]"):
        return rows
    while True:
        stream.expect("[", "'['")
        row = []
        if not stream.accept("]"):
            while True:
                row.append(parser.parse(stream))
                if stream.accept(","):
                    continue
                stream.expect("]", "']'")
                break
        rows.append(row)
        if stream.accept(","):
            continue
        stream.expect("]", "']'")
        return rows


def _parse_module(stream: TokenStream, task: TaskFile, tok) -> ModuleDecl:
    if task.ring is None:
        raise TaskError("module declared before the ring", tok.line, tok.col)
    name_tok = stream.expect("ident", "module name")
    name = name_tok.text
    if name in task.module_decls:
        raise TaskError(f"duplicate module {name!r}", name_tok.line, name_tok.col)
    over_rees = False
    mode = "graded"
    twists = None
    degrees = None
    sources = None
    rows = None
    gens = None
    # flags first, then key=value pairs; relations= must come last
    while stream.peek().kind == "ident" and stream.peek().text in (
        "rees",
        "graded",
        "ungraded",
    ):
        word = stream.next().text
        if word == "rees":
            over_rees = True
        elif word == "ungraded":
            mode = "ungraded"
    while rows is None:
        key = stream.expect("ident", "twists=/degrees=/sources=/gens=/relations=")
        word = key.text
        if word not in ("twists", "degrees", "sources", "gens", "relations"):
            raise TaskError(
                f"unknown module field {word!r}",
                key.line,
                key.col,
                ["twists", "degrees", "sources", "gens", "relations"],
            )
        stream.expect("=", "'='")
        if word == "relations":
            ring = task.rees.total if over_rees else task.ring
            rows = _parse_matrix(stream, PolyParser(ring))
        elif word == "gens":
            gens = parse_nat(stream, limit=MAX_RANK)
        else:
            values = _parse_int_list(stream, limit=10**6)
            if word == "twists":
                twists = values
            elif word == "degrees":
                degrees = values
            else:
                sources = values
    if over_rees and mode == "ungraded":
        raise TaskError("Rees-side modules are always graded", tok.line, tok.col)
    if mode == "graded":
        if twists is None:
            raise TaskError(f"graded module {name!r} needs twists=[...]", tok.line, tok.col)
        rank = len(twists)
    else:
        if degrees is not None:
            rank = len(degrees)
        elif gens is not None:
            rank = gens
        elif twists is not None:
            rank = len(twists)
            twists = None
        else:
            raise TaskError(
                f"ungraded module {name!r} needs gens=<n> or degrees=[...]",
                tok.line,
                tok.col,
            )
        twists = [0] * rank
    if rank > MAX_RANK:
        raise TaskError("too many generators", tok.line, tok.col)
    if rows and len(rows) != rank:
        raise TaskError(
            f"module {name!r} has {rank} generators but {len(rows)} matrix rows",
            tok.line,
            tok.col,
        )
    if not rows:
        rows = [[] for _ in range(rank)]
    width = {len(r) for r in rows}
    if len(width) > 1:
        raise TaskError(f"ragged relation matrix in module {name!r}", tok.line, tok.col)
    return ModuleDecl(
        name=name,
        over_rees=over_rees,
        mode=mode,
        twists=list(twists),
        degrees=degrees,
        sources=sources,
        rows=rows,
        line=tok.line,
        col=tok.col,
    )


def _column_twists(decl: ModuleDecl, ring, task_label):
    """Derive or validate source twists; names the offending cell on error."""
    ncols = len(decl.rows[0]) if decl.rows and decl.rows[0] else 0
    if decl.mode == "ungraded":
        return [0] * ncols
    if decl.sources is not None and len(decl.sources) != ncols:
        raise TaskError(
            f"module {decl.name!r}: {ncols} relation columns but "
            f"{len(decl.sources)} source twists",
            decl.line,
            decl.col,
        )
    twists = []
    keep = []
    for j in range(ncols):
        declared = decl.sources[j] if decl.sources is not None else None
        derived = declared
        for i, row in enumerate(decl.rows):
            p = row[j]
            if not p:
                continue
            d = p.homogeneous_degree()
            if d is None:
                raise TaskError(
                    f"module {decl.name!r} entry ({i},{j}) is not homogeneous",
                    decl.line,
                    decl.col,
                )
            candidate = d + decl.twists[i]
            if derived is None:
                derived = candidate
            elif candidate != derived:
                raise TaskError(
                    f"module {decl.name!r} entry ({i},{j}): expected degree "
                    f"{derived - decl.twists[i]}, found {d}",
                    decl.line,
                    decl.col,
                )
        if derived is None:
            continue  # zero column carries no information
        twists.append(derived)
        keep.append(j)
    if len(keep) != ncols:
        decl.rows = [[row[j] for j in keep] for row in decl.rows]
    return twists


def _build_module(task: TaskFile, decl: ModuleDecl):
    ring = task.rees.total if decl.over_rees else task.ring
    col_twists = _column_twists(decl, ring, task.label)
    target = FreeModule(ring, decl.twists)
    source = FreeModule(ring, col_twists)
    matrix = GradedMatrix(source, target, decl.rows)
    if decl.mode == "graded":
        violation = matrix.validate_graded()
        if violation is not None:
            raise TaskError(
                f"module {decl.name!r}: {violation}", decl.line, decl.col
            )
    task.module_decls[decl.name] = decl
    task._modules[decl.name] = FPModule(matrix, decl.mode)
    task._filtrations[decl.name] = decl.degrees


def _build_rees(task: TaskFile, name_tok, base_tok):
    name = name_tok.text
    if name in task._modules:
        raise TaskError(f"duplicate module {name!r}", name_tok.line, name_tok.col)
    base_name = base_tok.text
    if base_name not in task._modules:
        raise TaskError(f"unknown module {base_name!r}", base_tok.line, base_tok.col)
    base = task._modules[base_name]
    if base.ring != task.ring:
        raise TaskError(
            "Rees derivation needs a module over the base ring",
            base_tok.line,
            base_tok.col,
        )
    filtration = task.filtration(base_name)
    try:
        if base.mode == "graded":
            data = rees_module(task.rees, base)
        else:
            data = rees_module(task.rees, base, filtration)
    except ValidationError as exc:
        raise TaskError(str(exc), base_tok.line, base_tok.col) from None
    task.rees_defs.append((name, base_name, name_tok.line, name_tok.col))
    task._modules[name] = data.tilde
    task._filtrations[name] = None


def _parse_probe_list(stream: TokenStream, parser: PolyParser):
    stream.expect("[", "'['")
    ideals = []
    if stream.accept("]"):
        return ideals
    while True:
        stream.expect("(", "'('")
        gens = []
        while True:
            gens.append(parser.parse(stream))
            if stream.accept(","):
                continue
            stream.expect(")", "')'")
            break
        gens = [g for g in gens if g]
        label = "(" + (", ".join(str(g) for g in gens) if gens else "0") + ")"
        ideals.append((label, gens))
        if stream.accept(","):
            continue
        stream.expect("]", "']'")
        return ideals


def _require_module(task: TaskFile, tok, *, over: str, graded=None):
    name = tok.text
    module = task._modules.get(name)
    if module is None:
        raise TaskError(f"unknown module {name!r}", tok.line, tok.col)
    if over == "rees" and module.ring != task.rees.total:
        raise TaskError(
            f"check needs {name!r} to live over the Rees ring", tok.line, tok.col
        )
    if over == "base" and module.ring != task.ring:
        raise TaskError(
            f"check needs {name!r} to live over the base ring", tok.line, tok.col
        )
    if graded is True and module.mode != "graded":
        raise TaskError(f"check needs {name!r} to be graded", tok.line, tok.col)
    return name


def _parse_check(stream: TokenStream, task: TaskFile, tok) -> CheckDecl:
    if task.ring is None:
        raise TaskError("check declared before the ring", tok.line, tok.col)
    kind_tok = stream.expect("ident", "check kind")
    kind = kind_tok.text
    if kind not in CHECK_KINDS:
        raise TaskError(
            f"unknown check {kind!r}", kind_tok.line, kind_tok.col, CHECK_KINDS
        )
    decl = CheckDecl(kind=kind, line=kind_tok.line, col=kind_tok.col)
    if kind == "lemma1":
        first = _require_module(task, stream.expect("ident", "module"), over="rees")
        second = _require_module(
            task, stream.expect("ident", "module"), over="base", graded=True
        )
        decl.args = (first, second)
    elif kind == "lemma2":
        first = _require_module(task, stream.expect("ident", "module"), over="rees")
        second = _require_module(task, stream.expect("ident", "module"), over="rees")
        decl.args = (first, second)
    elif kind == "lemma3":
        decl.args = (
            _require_module(task, stream.expect("ident", "module"), over="rees"),
        )
    elif kind == "jump":
        target = _require_module(
            task, stream.expect("ident", "module"), over="base", graded=True
        )
        decl.args = (target,)
        parser = PolyParser(task.ring)
        saw = set()
        while stream.peek().kind == "ident" and stream.peek().text in ("graded", "ungraded"):
            which = stream.next().text
            if which in saw:
                stream.error(f"duplicate {which} probe list")
            saw.add(which)
            stream.expect("=", "'='")
            probes = _parse_probe_list(stream, parser)
            if which == "graded":
                for label, gens in probes:
                    for g in gens:
                        if not g.is_homogeneous():
                            raise TaskError(
                                f"graded probe {label} has an inhomogeneous generator",
                                decl.line,
                                decl.col,
                            )
                decl.graded_probes = probes
            else:
                decl.ungraded_probes = probes
        if not decl.graded_probes or not decl.ungraded_probes:
            raise TaskError(
                "jump check needs graded=[...] and ungraded=[...] probe lists",
                kind_tok.line,
                kind_tok.col,
            )
    elif kind in ("jump_j", "example15"):
        if task.ring.nvars != 1 or task.ring.weights != (1,):
            raise TaskError(
                f"{kind} runs over a one-variable weight-1 ring",
                kind_tok.line,
                kind_tok.col,
            )
    return decl


# ---------------------------------------------------------------------------
# canonical emission (round-trips through parse_task)

def emit_task(task: TaskFile) -> str:
    lines = []
    ring = task.ring
    field_name = "QQ" if ring.field.p == 0 else f"F{ring.field.p}"
    vars_ = ", ".join(f"{n}:{w}" for n, w in zip(ring.names, ring.weights))
    lines.append(f"ring {field_name}[{vars_}]")
    lines.append(f"window {task.window[0]}:{task.window[1]}")
    lines.append(f"qmax {task.qmax}")
    derived = {name for name, _, _, _ in task.rees_defs}
    for name, decl in task.module_decls.items():
        if name in derived:
            continue
        words = ["module", name]
        if decl.over_rees:
            words.append("rees")
        if decl.mode == "ungraded":
            words.append("ungraded")
            if decl.degrees is not None:
                words.append("degrees=[" + ", ".join(str(v) for v in decl.degrees) + "]")
            else:
                words.append(f"gens={len(decl.twists)}")
        else:
            words.append("twists=[" + ", ".join(str(v) for v in decl.twists) + "]")
        rows = ", ".join(
            "[" + ", ".join(str(p) for p in row) + "]" for row in decl.rows
        )
        words.append(f"relations=[{rows}]")
        lines.append(" ".join(words))
    for name, base_name, _, _ in task.rees_defs:
        lines.append(f"rees {name} = {base_name}")
    for decl in task.checks:
        words = ["check", decl.kind]
        words.extend(decl.args)
        if decl.kind == "jump":
            graded = ", ".join(label for label, _ in decl.graded_probes)
            ungraded = ", ".join(label for label, _ in decl.ungraded_probes)
            words.append(f"graded=[{graded}]")
            words.append(f"ungraded=[{ungraded}]")
        lines.append(" ".join(words))
    return "\n".join(lines) + "\n"

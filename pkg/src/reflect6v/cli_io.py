"""Command-line front end, run configuration and report persistence.

Config files are flat ``key = value`` text, one entry per line, ``#`` starts
a comment.  Values are Python literals (``0.4``, ``0.3+0.1j``, ``[0.1, 0.2]``)
or bare words (``method = auto``).  Recognised keys mirror the long flags:

    quantity  partition | g-profile | h-profile | efp-grid | verify
    N         system size (verify: the largest N exercised)
    eta, xi   crossing and boundary parameters
    lambda, mu        homogeneous point
    lambdas, mus      explicit inhomogeneities, bracketed comma lists
    method    auto | determinant | recursion | oracle | enumeration | homogeneous | biorthogonal
    tol       deviation allowed against the reference before exiting 1
    seed      random seed for verify draws
    out, format       report path and csv | json
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import sys
import traceback
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import api
from . import weights as w
from .api import Method, Quantity
from .correlations import S_CAP
from .errors import ConfigInvalid, DegenerateMoments, Reflect6VError
from .homogeneous import HomogeneousPoint
from .oracle_algebraic import N_CAP
from .oracle_enumeration import ENUM_CAP
from .weights import ModelParameters

SCHEMA = "reflect6v-table"
SCHEMA_VERSION = 1
QUANTITIES = ("partition", "g-profile", "h-profile", "efp-grid", "verify")
CSV_COLUMNS = ["N", "r", "s", "method", "re(value)", "im(value)", "ref_method", "abs_dev", "rel_dev",
               "quantity", "re(ref)", "im(ref)"]


# tables -------------------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    N: int
    r: int
    s: int
    quantity: str
    method: str
    value: complex
    ref_method: str | None = None
    ref_value: complex | None = None

    @property
    def abs_dev(self) -> float | None:
        if self.ref_value is None:
            return None
        return abs(self.value - self.ref_value)

    @property
    def rel_dev(self) -> float | None:
        if self.ref_value is None:
            return None
        scale = abs(self.ref_value)
        return self.abs_dev / scale if scale else self.abs_dev


@dataclass
class CorrelationTable:
    rows: list = field(default_factory=list)

    def add(self, *args, **kw):
        self.rows.append(Row(*args, **kw))

    def breaches(self, tol) -> list:
        """Rows whose smaller of absolute and relative deviation exceeds ``tol``."""
        out = []
        for row in self.rows:
            if row.ref_value is not None:
                dev = min(row.abs_dev, row.rel_dev)
                if not dev <= tol:
                    out.append(row)
        return out

    def __eq__(self, other):
        return isinstance(other, CorrelationTable) and self.rows == other.rows


def _num(x) -> str:
    return "" if x is None else format(x, ".17g")


def _parse_num(text) -> float | None:
    return None if text == "" else float(text)


def to_csv(table: CorrelationTable) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA} {SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in table.rows:
        ref = row.ref_value
        writer.writerow([
            row.N, row.r, row.s, row.method, _num(row.value.real), _num(row.value.imag),
            row.ref_method or "", _num(row.abs_dev), _num(row.rel_dev), row.quantity,
            _num(None if ref is None else ref.real), _num(None if ref is None else ref.imag),
        ])
    return buf.getvalue()


def from_csv(text: str) -> CorrelationTable:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ConfigInvalid("missing schema line")
    _, name, version = lines[0].split()
    if name != SCHEMA or int(version) != SCHEMA_VERSION:
        raise ConfigInvalid(f"unsupported table schema {name} {version}")
    table = CorrelationTable()
    for rec in csv.DictReader(lines[1:]):
        ref = None
        if rec["re(ref)"] != "":
            ref = complex(_parse_num(rec["re(ref)"]), _parse_num(rec["im(ref)"]))
        # deviations are recomputed from the stored values
        table.add(int(rec["N"]), int(rec["r"]), int(rec["s"]), rec["quantity"], rec["method"],
                  complex(float(rec["re(value)"]), float(rec["im(value)"])), rec["ref_method"] or None, ref)
    return table


def to_json(table: CorrelationTable, extra=None) -> str:
    def pair(z):
        return None if z is None else [float(_num(z.real)), float(_num(z.imag))]

    rows = [
        {"N": r.N, "r": r.r, "s": r.s, "quantity": r.quantity, "method": r.method, "value": pair(r.value),
         "ref_method": r.ref_method, "ref_value": pair(r.ref_value), "abs_dev": r.abs_dev, "rel_dev": r.rel_dev}
        for r in table.rows
    ]
    doc = {"schema": SCHEMA, "version": SCHEMA_VERSION, "rows": rows}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=1)


def from_json(text: str) -> CorrelationTable:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA or doc.get("version") != SCHEMA_VERSION:
        raise ConfigInvalid("unsupported table schema")
    table = CorrelationTable()
    for r in doc["rows"]:
        ref = None if r["ref_value"] is None else complex(*r["ref_value"])
        table.add(r["N"], r["r"], r["s"], r["quantity"], r["method"], complex(*r["value"]), r["ref_method"], ref)
    return table


def write_table(table: CorrelationTable, path, fmt, extra=None):
    text = to_json(table, extra) if fmt == "json" else to_csv(table)
    if path is None or str(path) == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text)


def read_table(path) -> CorrelationTable:
    text = Path(path).read_text()
    return from_json(text) if text.lstrip().startswith("{") else from_csv(text)


# configuration -----------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    quantity: str = "partition"
    N: int | None = None
    eta: complex = w.DEMO_ETA
    xi: complex = w.DEMO_XI
    lam: complex | None = None
    mu: complex | None = None
    lambdas: tuple | None = None
    mus: tuple | None = None
    homogeneous: bool = False
    method: str = Method.AUTO.value
    tol: float = 1e-7
    seed: int = 0
    out: str | None = None
    format: str | None = None

    def validate(self) -> "RunConfig":
        if self.quantity not in QUANTITIES:
            raise ConfigInvalid(f"unknown quantity {self.quantity!r}")
        try:
            method = Method(self.method)
        except ValueError:
            raise ConfigInvalid(f"unknown method {self.method!r}") from None
        explicit = self.lambdas is not None or self.mus is not None
        point = self.lam is not None or self.mu is not None or self.homogeneous
        if explicit and point:
            raise ConfigInvalid("give either explicit lambdas/mus or a homogeneous point, not both")
        if explicit:
            if self.lambdas is None or self.mus is None or len(self.lambdas) != len(self.mus):
                raise ConfigInvalid("lambdas and mus must both be given with equal length")
            if self.N is not None and self.N != len(self.lambdas):
                raise ConfigInvalid(f"N={self.N} disagrees with {len(self.lambdas)} inhomogeneities")
        n = self.size
        if n < 1:
            raise ConfigInvalid("N must be positive")
        if self.format not in (None, "csv", "json"):
            raise ConfigInvalid(f"unknown format {self.format!r}")
        if self.quantity != "verify":
            caps = {Method.ORACLE: N_CAP, Method.ENUMERATION: ENUM_CAP}
            if method in caps and n > caps[method]:
                raise ConfigInvalid(f"method {method.value} is capped at N={caps[method]}")
            if self.quantity == "efp-grid" and method in (Method.DETERMINANT,) and n > S_CAP:
                raise ConfigInvalid(f"the explicit EFP sum is capped at s={S_CAP}")
        if not self.tol > 0:
            raise ConfigInvalid("tol must be positive")
        return self

    @property
    def explicit(self) -> bool:
        return self.lambdas is not None

    @property
    def size(self) -> int:
        if self.explicit:
            return len(self.lambdas)
        if self.N is None:
            return 5 if self.quantity == "verify" else 4
        return self.N

    def model(self) -> api.Model:
        if self.explicit:
            return ModelParameters(self.eta, self.xi, tuple(self.lambdas), tuple(self.mus))
        lam = w.DEMO_LAMBDA if self.lam is None else self.lam
        mu = w.DEMO_MU if self.mu is None else self.mu
        return HomogeneousPoint(lam, mu, self.eta, self.xi, self.size)

    @property
    def output_format(self) -> str:
        if self.format:
            return self.format
        return "json" if self.out and str(self.out).endswith(".json") else "csv"


_ALIASES = {"lambda": "lam", "n": "N"}


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _coerce(key, value):
    kind = {f.name: f.type for f in fields(RunConfig)}[key]
    try:
        if key in ("lambdas", "mus"):
            if isinstance(value, str):
                value = _literal(value)
            if not isinstance(value, (list, tuple)):
                raise TypeError
            return tuple(complex(x) for x in value)
        if key in ("N", "seed"):
            return int(value)
        if key == "tol":
            return float(value)
        if key == "homogeneous":
            return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
        if "complex" in kind:
            return complex(value)
        return None if value is None else str(value)
    except (TypeError, ValueError):
        raise ConfigInvalid(f"bad value for {key}: {value!r}") from None


def parse_config(text: str) -> dict:
    """Flat ``key = value`` text to a dict of typed RunConfig fields."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"line {lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = _ALIASES.get(key, key).replace("-", "_")
        if key not in {f.name for f in fields(RunConfig)}:
            raise ConfigInvalid(f"line {lineno}: unknown key {key!r}")
        out[key] = _coerce(key, _literal(value))
    return out


def dump_config(cfg: RunConfig) -> str:
    lines = []
    for f in fields(RunConfig):
        value = getattr(cfg, f.name)
        if value is None:
            continue
        key = {"lam": "lambda"}.get(f.name, f.name)
        if isinstance(value, tuple):
            value = "[" + ", ".join(repr(complex(x)) for x in value) + "]"
        elif isinstance(value, complex):
            value = repr(value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


# running -----------------------------------------------------------------------

def _rows_for(cfg: RunConfig):
    n = cfg.size
    if cfg.quantity == "partition":
        return [(Quantity.Z, 0, 0)]
    if cfg.quantity == "g-profile":
        return [(Quantity.G, r, 0) for r in range(1, n + 1)]
    if cfg.quantity == "h-profile":
        return [(Quantity.H, r, 0) for r in range(1, n + 1)]
    return [(Quantity.F, r, s) for r in range(1, n + 1) for s in range(1, n + 1)]


def run(cfg: RunConfig):
    """Evaluate the configured quantity; returns ``(table, exit_status)``."""
    cfg = cfg.validate()
    if cfg.quantity == "verify":
        return run_verify(cfg)
    model = cfg.model()
    method = api.resolve(cfg.method, model)
    ref = api.reference_for(method, model) if Method(cfg.method) is Method.AUTO else None
    table = CorrelationTable()
    n = cfg.size
    for q, r, s in _rows_for(cfg):
        kw = {"r": r or None, "s": s or None}
        used = method.value
        try:
            value = api.evaluate(q, model, method, **kw)
        except DegenerateMoments:
            # the s x s reduction needs nonvanishing moment minors; the N x N form does not
            value, used = api.evaluate(q, model, Method.HOMOGENEOUS, **kw), "homogeneous-fallback"
        ref_value = api.evaluate(q, model, ref, **kw) if ref else None
        table.add(n, r, s, q.value, used, value, ref.value if ref else None, ref_value)
    return table, (1 if table.breaches(cfg.tol) else 0)


def run_verify(cfg: RunConfig, stream=None):
    from . import validation

    stream = stream or sys.stdout
    table = CorrelationTable()
    results = validation.run_all(seed=cfg.seed, n_max=cfg.size)
    summary = []
    for res in results:
        print(res.line(), file=stream)
        summary.append({"key": res.key, "title": res.title, "tol": res.tol, "worst": res.worst, "passed": res.passed})
        for c in res.rows:
            ref = None if c.ref_value is None else complex(c.ref_value)
            table.add(c.N, c.r, c.s, f"{res.key}:{c.quantity}", c.method, complex(c.value), c.ref_method, ref)
    failed = [res.key for res in results if not res.passed]
    print(f"verify: {len(results) - len(failed)}/{len(results)} checks passed"
          + (f"; failing: {', '.join(failed)}" if failed else ""), file=stream)
    return table, (1 if failed else 0), summary


# command line ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reflect6v", description=__doc__.split("\n\n")[0])
    ap.add_argument("quantity", choices=QUANTITIES)
    ap.add_argument("--config", help="flat key = value file; flags override it")
    ap.add_argument("--N", type=int)
    ap.add_argument("--eta", type=complex)
    ap.add_argument("--xi", type=complex)
    ap.add_argument("--lambda", dest="lam", type=complex, help="homogeneous row parameter")
    ap.add_argument("--mu", type=complex, help="homogeneous column parameter")
    ap.add_argument("--lambdas", help="explicit rows, e.g. [0.5, 0.6+0.1j]")
    ap.add_argument("--mus", help="explicit columns")
    ap.add_argument("--homogeneous", action="store_true", default=None, help="use a homogeneous point")
    ap.add_argument("--method", choices=[m.value for m in Method])
    ap.add_argument("--tol", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="report path (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"))
    return ap


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {}
    if args.config:
        values.update(parse_config(Path(args.config).read_text()))
    values["quantity"] = args.quantity
    for f in fields(RunConfig):
        given = getattr(args, f.name, None)
        if given is not None and f.name != "quantity":
            values[f.name] = _coerce(f.name, given)
    return RunConfig(**values)


def _describe(exc: BaseException) -> str:
    frames = traceback.extract_tb(exc.__traceback__)
    module = Path(frames[-1].filename).stem if frames else "reflect6v"
    return f"{module}.{type(exc).__name__}: {exc}"


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        if cfg.quantity == "verify":
            cfg = cfg.validate()
            table, status, summary = run_verify(cfg)
            if cfg.out:
                write_table(table, cfg.out, cfg.output_format,
                            {"checks": summary, "seed": cfg.seed, "n_max": cfg.size})
            return status
        table, status = run(cfg)
        write_table(table, cfg.out, cfg.output_format)
        for row in table.breaches(cfg.tol):
            print(f"breach: {row.quantity} N={row.N} r={row.r} s={row.s} "
                  f"abs_dev={row.abs_dev:.3e} rel_dev={row.rel_dev:.3e}", file=sys.stderr)
        return status
    except Reflect6VError as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

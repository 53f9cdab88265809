"""Command-line front end (``gna``).

Matrices come from JSON files::

    {"grid": {"kind": "dyadic", "k_min": 4, "k_max": 40},
     "scalar_kind": "real",
     "entries": [["1 - chi(even(k))", "0"], ["0", "chi(even(k))"]]}

Complex entries are written ``{"re": "...", "im": "..."}``. Vector lists
(submodule generators, right-hand sides) use ``"vectors"`` instead of
``"entries"``; partial symplectic bases use ``"e"`` and ``"f"`` objects keyed
by 0-based index. Exit codes: 0 ok, 2 bad input, 3 precondition failed,
4 postcondition failed.
"""

from __future__ import annotations

import enum
import functools
import json
import math
import sys

import click
import numpy as np

from . import linalg, spectra, symplectic
from .asymptotics import AsymptoticReport, classify
from .config import load_config
from .errors import GNAError, InputError
from .grid import DEFAULT_GRID, grid_from_descriptor
from .linalg import GenMatrix, GenVector
from .netexpr import evaluate, parse, pretty
from .scalar import GenScalar

# serialization


def _float(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _samples(a):
    a = np.asarray(a)
    if np.iscomplexobj(a):
        if not np.any(a.imag != 0):
            return _samples(a.real)
        return {"re": _samples(a.real), "im": _samples(a.imag)}
    if a.ndim == 0:
        return _float(a)
    return [_samples(x) for x in a]


def jsonify(obj):
    """Turn library results into plain JSON values."""
    if isinstance(obj, AsymptoticReport):
        return obj.to_dict()
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, GenScalar):
        return _samples(obj.samples)
    if isinstance(obj, GenVector):
        return _samples(np.swapaxes(obj.data, 0, 1))
    if isinstance(obj, GenMatrix):
        return _samples(np.moveaxis(obj.data, 0, 2))
    if isinstance(obj, np.ndarray):
        return _samples(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, complex, np.complexfloating)):
        return _samples(obj)
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _short(v):
    if isinstance(v, list) and len(v) > 6 and all(isinstance(x, (int, float)) for x in v):
        return f"[{v[0]}, {v[1]}, ..., {v[-1]}] ({len(v)} samples)"
    return json.dumps(v, sort_keys=True)


def _pretty(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], (dict, list))):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_short(v)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)) and not (isinstance(v, list) and v and not isinstance(v[0], (dict, list))):
                lines.append(f"{pad}- [{i}]")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {_short(v)}")
    else:
        lines.append(f"{pad}{_short(obj)}")
    return lines


def render(report, output):
    data = jsonify(report)
    if output == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    return "\n".join(_pretty(data))


# input files


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _grid_of(data, override):
    if override is not None:
        return override
    if isinstance(data, dict) and "grid" in data:
        return grid_from_descriptor(data["grid"])
    return DEFAULT_GRID


def _entry(e, grid, kind, where):
    if isinstance(e, dict):
        if set(e) - {"re", "im"}:
            raise InputError(f"{where}: complex entries use keys re and im")
        if kind != "complex":
            raise InputError(f"{where}: complex entry in a real file")
        re = _entry(e.get("re", "0"), grid, "real", where)
        im = _entry(e.get("im", "0"), grid, "real", where)
        return GenScalar(grid, re.samples + 1j * im.samples)
    if isinstance(e, bool) or not isinstance(e, (str, int, float)):
        raise InputError(f"{where}: entry must be an expression string")
    try:
        return evaluate(str(e), grid)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from exc


def _kind(data):
    kind = data.get("scalar_kind", "real")
    if kind not in ("real", "complex"):
        raise InputError(f"scalar_kind must be real or complex, not {kind!r}")
    return kind


def read_matrix(path, grid=None) -> GenMatrix:
    data = _load_json(path)
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError(f"{path}: expected an object with 'entries'")
    grid = _grid_of(data, grid)
    kind = _kind(data)
    rows = data["entries"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows) \
            or len({len(r) for r in rows}) != 1 or not rows[0]:
        raise InputError(f"{path}: entries must be a non-empty rectangular table")
    cells = [[_entry(e, grid, kind, f"{path}[{i}][{j}]") for j, e in enumerate(r)]
             for i, r in enumerate(rows)]
    return GenMatrix.from_entries(cells, grid)


def _vector(entries, grid, kind, where):
    if not isinstance(entries, list) or not entries:
        raise InputError(f"{where}: a vector is a non-empty list of expressions")
    return GenVector.from_entries(
        [_entry(e, grid, kind, f"{where}[{i}]") for i, e in enumerate(entries)], grid)


def read_vectors(path, grid=None) -> list:
    data = _load_json(path)
    if not isinstance(data, dict) or "vectors" not in data:
        raise InputError(f"{path}: expected an object with 'vectors'")
    grid = _grid_of(data, grid)
    kind = _kind(data)
    vecs = data["vectors"]
    if not isinstance(vecs, list):
        raise InputError(f"{path}: 'vectors' must be a list")
    return [_vector(v, grid, kind, f"{path}.vectors[{i}]") for i, v in enumerate(vecs)]


def read_partial(path, grid=None):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected an object with 'e' and/or 'f'")
    grid = _grid_of(data, grid)
    kind = _kind(data)
    out = []
    for key in ("e", "f"):
        part = data.get(key, {})
        if not isinstance(part, dict):
            raise InputError(f"{path}: '{key}' must map indices to vectors")
        vecs = {}
        for idx, v in part.items():
            try:
                i = int(idx)
            except ValueError as exc:
                raise InputError(f"{path}: bad index {idx!r}") from exc
            vecs[i] = _vector(v, grid, kind, f"{path}.{key}[{idx}]")
        out.append(vecs)
    return out


# command plumbing


class Ctx:
    def __init__(self, cfg, grid, output):
        self.cfg = cfg
        self.grid = grid
        self.output = output

    def base(self, command, grid=None):
        return {"command": command, "config": self.cfg.to_dict(),
                "grid": (grid or self.grid or DEFAULT_GRID).descriptor()}


def _emit(ctx, report, code=0):
    click.echo(render(report, ctx.output))
    sys.exit(code)


def command(name):
    """Register a subcommand whose body returns a report dict."""
    def deco(fn):
        @cli.command(name)
        @click.pass_obj
        @functools.wraps(fn)
        def wrapper(ctx, *args, **kwargs):
            try:
                report = fn(ctx, *args, **kwargs)
            except GNAError as exc:
                rep = ctx.base(name)
                rep["error"] = {"type": type(exc).__name__, "message": str(exc),
                                "exit_code": exc.exit_code}
                for attr in ("report", "details", "offset", "expected", "k"):
                    if getattr(exc, attr, None) is not None:
                        rep["error"][attr] = getattr(exc, attr)
                _emit(ctx, rep, exc.exit_code)
            _emit(ctx, report, report.pop("_exit", 0))
        return wrapper
    return deco


@click.group()
@click.option("--grid", "grid_desc", default=None, help="Grid, e.g. dyadic:4:40 or geometric:0.5:4:40.")
@click.option("--m-neg", type=int, default=None, help="Negligibility order.")
@click.option("--m-inv", type=int, default=None, help="Invertibility order.")
@click.option("--tail", type=float, default=None, help="Tail fraction of the grid.")
@click.option("--rel-tol", type=float, default=None, help="Relative roundoff floor for computed residuals.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="JSON classifier config (default: $GNA_CONFIG).")
@click.option("--output", type=click.Choice(["pretty", "json"]), default="pretty")
@click.version_option(package_name="artifact")
@click.pass_context
def cli(cctx, grid_desc, m_neg, m_inv, tail, rel_tol, config_path, output):
    """Linear and symplectic algebra over generalized numbers."""
    try:
        cfg = load_config(config_path)
        over = {k: v for k, v in (("m_neg", m_neg), ("m_inv", m_inv),
                                  ("tail_fraction", tail), ("rel_tol", rel_tol)) if v is not None}
        cfg = cfg.with_overrides(**over) if over else cfg
        grid = grid_from_descriptor(grid_desc) if grid_desc else None
    except GNAError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    cctx.obj = Ctx(cfg, grid, output)


@command("classify")
@click.argument("expr")
def cmd_classify(ctx, expr):
    """Classify the net given by EXPR."""
    grid = ctx.grid or DEFAULT_GRID
    node = parse(expr)
    value = evaluate(node, grid)
    rep = ctx.base("classify", grid)
    rep.update(expression=pretty(node), samples=value, report=classify(value, ctx.cfg))
    return rep


@command("det")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.option("--shift", default=None, help="Expression lambda; report det(A - lambda I).")
def cmd_det(ctx, matrix, shift):
    """Determinant of a matrix (optionally shifted) with its classification."""
    a = read_matrix(matrix, ctx.grid)
    b = a.shift(evaluate(shift, a.grid)) if shift else a
    d = linalg.det(b)
    rep = ctx.base("det", a.grid)
    rep.update(shift=shift, det=d, report=classify(d, ctx.cfg, scale=linalg.det_scale(b)))
    return rep


@command("invertible")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
def cmd_invertible(ctx, matrix):
    """Decide invertibility through the determinant."""
    a = read_matrix(matrix, ctx.grid)
    ok, r = linalg.is_invertible(a, ctx.cfg)
    rep = ctx.base("invertible", a.grid)
    rep.update(invertible=ok, det=linalg.det(a), report=r)
    return rep


@command("solve")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.argument("rhs", type=click.Path(exists=True, dir_okay=False))
def cmd_solve(ctx, matrix, rhs):
    """Solve A x = b for each vector b in RHS."""
    a = read_matrix(matrix, ctx.grid)
    bs = read_vectors(rhs, a.grid)
    sols = []
    for b in bs:
        x = linalg.solve(a, b, ctx.cfg)
        r = linalg.matvec(a, x) - b
        scale = linalg.normwise_scale(a.data, x.data[:, :, None], b.data[:, :, None])[:, :, 0]
        reports = [classify(r.data[:, i], ctx.cfg, grid=a.grid, scale=scale[:, i])
                   for i in range(len(r))]
        sols.append({"x": x, "residual_reports": reports})
    rep = ctx.base("solve", a.grid)
    rep.update(solutions=sols)
    return rep


def _form(ctx, path):
    g = read_matrix(path, ctx.grid)
    return symplectic.SymplecticForm.from_gram(g, ctx.cfg)


def _basis_report(ctx, name, form, basis):
    rels = symplectic.relation_reports(form, basis, ctx.cfg)
    ok = all(r.is_negligible for *_, r in rels)
    rep = ctx.base(name, form.grid)
    rep.update(
        e=list(basis.e), f=list(basis.f), matrix=basis.matrix(), relations_ok=ok,
        relations=[{"relation": n, "j": j, "l": l, "report": r} for n, j, l, r in rels],
    )
    if not ok:
        rep["_exit"] = 4
    return rep


@command("symplectic-basis")
@click.argument("gramian", type=click.Path(exists=True, dir_okay=False))
def cmd_symplectic_basis(ctx, gramian):
    """Symplectic basis for the form with the given Gramian."""
    form = _form(ctx, gramian)
    return _basis_report(ctx, "symplectic-basis", form, symplectic.symplectic_basis(form, ctx.cfg))


@command("extend")
@click.argument("gramian", type=click.Path(exists=True, dir_okay=False))
@click.argument("partial", type=click.Path(exists=True, dir_okay=False))
def cmd_extend(ctx, gramian, partial):
    """Extend a partial symplectic basis (file with 'e' and 'f' maps)."""
    form = _form(ctx, gramian)
    e, f = read_partial(partial, form.grid)
    return _basis_report(ctx, "extend", form,
                         symplectic.extend_symplectic_basis(form, e, f, ctx.cfg))


def _submodule(ctx, form, path):
    gens = read_vectors(path, form.grid)
    return symplectic.Submodule.of(gens, ctx.cfg, dim=form.rank, grid=form.grid)


@command("annihilator")
@click.argument("gramian", type=click.Path(exists=True, dir_okay=False))
@click.argument("submodule", type=click.Path(exists=True, dir_okay=False))
def cmd_annihilator(ctx, gramian, submodule):
    """Generators of the symplectic annihilator of a submodule."""
    form = _form(ctx, gramian)
    U = _submodule(ctx, form, submodule)
    W = symplectic.annihilator(form, U, ctx.cfg)
    rep = ctx.base("annihilator", form.grid)
    rep.update(rank=U.rank, annihilator_rank=W.rank, generators=list(W.generators))
    return rep


@command("classify-submodule")
@click.argument("gramian", type=click.Path(exists=True, dir_okay=False))
@click.argument("submodule", type=click.Path(exists=True, dir_okay=False))
def cmd_classify_submodule(ctx, gramian, submodule):
    """Isotropic / involutive / Lagrangian / symplectic type of a submodule."""
    form = _form(ctx, gramian)
    U = _submodule(ctx, form, submodule)
    rep = ctx.base("classify-submodule", form.grid)
    rep.update(type=symplectic.classify_submodule(form, U, ctx.cfg),
               flags=symplectic.submodule_flags(form, U, ctx.cfg))
    return rep


@command("eigen")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(["hermitian", "skew"]), default="hermitian")
def cmd_eigen(ctx, matrix, kind):
    """Distinguished eigentuple of a Hermitian or skew-symmetric matrix."""
    a = read_matrix(matrix, ctx.grid)
    tup = spectra.char_poly_roots_distinguished(a, kind, ctx.cfg)
    rep = ctx.base("eigen", a.grid)
    rep.update(kind=tup.kind, values=list(tup.values),
               reports=[classify(v, ctx.cfg) for v in tup.values])
    if kind == "hermitian":
        rep["U"] = spectra.hermitian_eigentuple(a, ctx.cfg)[1]
    return rep


@command("normal-form")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
def cmd_normal_form(ctx, matrix):
    """Orthogonal block normal form of a skew-symmetric matrix."""
    a = read_matrix(matrix, ctx.grid)
    nf = spectra.skew_normal_form(a, ctx.cfg)
    rep = ctx.base("normal-form", a.grid)
    rep.update(V=nf.V, lambdas=list(nf.lambdas), lambda_reports=list(nf.reports),
               zero_block_count=nf.zero_block_count, warnings=list(nf.warnings))
    return rep


@command("check-eigenvalue")
@click.argument("matrix", type=click.Path(exists=True, dir_okay=False))
@click.option("--lambda", "lam", required=True, help="Expression for the candidate eigenvalue.")
def cmd_check_eigenvalue(ctx, matrix, lam):
    """Decide whether LAMBDA is an eigenvalue via det(A - lambda I)."""
    a = read_matrix(matrix, ctx.grid)
    value = evaluate(lam, a.grid)
    r = spectra.eigenvalue_report(a, value, ctx.cfg)
    rep = ctx.base("check-eigenvalue", a.grid)
    rep.update(expression=pretty(parse(lam)), eigenvalue=r.is_negligible,
               det=linalg.det(a.shift(value)), report=r)
    if r.is_negligible:
        rep["eigenvector"] = spectra.eigenpair_from_root(a, value, ctx.cfg)
    return rep


def main(argv=None):
    cli.main(args=argv, prog_name="gna")


if __name__ == "__main__":
    main()
